//! Python access to the limit state, the Svetlichny optimizer and sweeps.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use vacuum_nonlocality::harness::{run_pipeline, to_json, ExperimentConfig};
use vacuum_nonlocality::labels::parse_string;
use vacuum_nonlocality::nonlocality::{hybrid_bound, maximize_svetlichny, negativity, Cut, OptimizerConfig};
use vacuum_nonlocality::rho::{dominance_limit, to_w_state, Rho8};
use vacuum_nonlocality::wick::expand_symbolic;
use vacuum_nonlocality::Error;

fn to_py(e: Error) -> PyErr {
    match e.exit_code() {
        1 => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

type Parts = (Vec<Vec<f64>>, Vec<Vec<f64>>);

fn parts(rho: &Rho8) -> Parts {
    (rho.real_part(), rho.imag_part())
}

/// Filtered, normalized state of the exchange-dominated limit as (re, im).
#[pyfunction]
fn limit_state(s: f64) -> PyResult<Parts> {
    Ok(parts(&dominance_limit(s).map_err(to_py)?.0))
}

/// The limit state after the local rotation, with its W-state fidelity.
#[pyfunction]
fn w_rotated(s: f64) -> PyResult<(Parts, f64)> {
    let (rho, _) = dominance_limit(s).map_err(to_py)?;
    let (w, fid) = to_w_state(&rho);
    Ok((parts(&w), fid))
}

/// Negativities across A|BC, B|CA and C|AB of the limit state.
#[pyfunction]
fn limit_negativities(s: f64) -> PyResult<Vec<f64>> {
    let (rho, _) = dominance_limit(s).map_err(to_py)?;
    Ok(Cut::ALL.iter().map(|c| negativity(&rho, *c)).collect())
}

/// (S*, hybrid bound) for the limit state.
#[pyfunction]
#[pyo3(signature = (s, starts = 64, seed = 0))]
fn limit_svetlichny(s: f64, starts: usize, seed: u64) -> PyResult<(f64, f64)> {
    let (rho, _) = dominance_limit(s).map_err(to_py)?;
    let cfg = OptimizerConfig {
        starts,
        seed,
        ..Default::default()
    };
    let best = maximize_svetlichny(&rho, &cfg).map_err(to_py)?;
    Ok((best.best, hybrid_bound()))
}

/// Runs a sweep described by TOML text and returns the records as JSON.
#[pyfunction]
fn sweep(config: &str) -> PyResult<String> {
    let cfg = ExperimentConfig::from_toml(config).map_err(to_py)?;
    Ok(to_json(&run_pipeline(&cfg).map_err(to_py)?))
}

#[pyfunction]
fn wick_expand(detectors: &str, signs: &str) -> PyResult<String> {
    let ops = parse_string(detectors, signs).map_err(to_py)?;
    expand_symbolic(&ops).map_err(to_py)
}

#[pymodule]
fn pyvacnl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(limit_state, m)?)?;
    m.add_function(wrap_pyfunction!(w_rotated, m)?)?;
    m.add_function(wrap_pyfunction!(limit_negativities, m)?)?;
    m.add_function(wrap_pyfunction!(limit_svetlichny, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(wick_expand, m)?)?;
    Ok(())
}
