//! Acceptance battery. Runs every criterion, prints one PASS/FAIL line
//! each, and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;

use vacuum_nonlocality::correlator::{amplitude_set, equilateral, AmplitudeSet, FieldSpec};
use vacuum_nonlocality::harness::{to_json, run_pipeline, ExperimentConfig};
use vacuum_nonlocality::labels::{DetectorId, Sign};
use vacuum_nonlocality::nonlocality::states::{ghz, maximally_mixed, pure, w, Vector8};
use vacuum_nonlocality::nonlocality::{
    behavior_from_rho, hybrid_bound, hybrid_lp_feasible, hybrid_vertices, maximize_svetlichny, negativity, Cut,
    OptimizerConfig,
};
use vacuum_nonlocality::oracle::{
    oracle_npoint, oracle_pair_function, order_study, EvolutionOptions, Lattice, LatticeFieldSpec,
};
use vacuum_nonlocality::rho::{dominance_limit, to_w_state, Matrix8, Rho8};
use vacuum_nonlocality::wick::{density_operator_strings, npoint};
use vacuum_nonlocality::windows::WindowSpec;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The expected limit state, written out entry by entry.
fn limit_state() -> Matrix8 {
    let third = Complex64::new(1.0 / 3.0, 0.0);
    let mut m = Matrix8::zeros();
    for (r, c, sign) in [
        (0, 0, 1.0),
        (0, 3, -1.0),
        (0, 5, -1.0),
        (3, 0, -1.0),
        (5, 0, -1.0),
        (3, 3, 1.0),
        (3, 5, 1.0),
        (5, 3, 1.0),
        (5, 5, 1.0),
    ] {
        m[(r, c)] = third * sign;
    }
    m
}

fn w_vector() -> Vector8 {
    let mut v = Vector8::zeros();
    for k in [4, 2, 1] {
        v[k] = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    }
    v
}

fn max_abs(m: &Matrix8) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn limit_reproduction() -> Outcome {
    let target = limit_state();
    let mut worst: f64 = 0.0;
    for s in [1e-3, 0.1, 1.0] {
        let (rho, _) = dominance_limit(s).map_err(|e| e.to_string())?;
        let diff = max_abs(&(rho.matrix - target));
        let purity = (rho.matrix * rho.matrix).trace().re;
        ensure(diff <= 1e-12, || format!("s = {s}: max |Δ| = {diff:e}"))?;
        ensure((purity - 1.0).abs() <= 1e-12, || format!("s = {s}: purity {purity}"))?;
        worst = worst.max(diff);
    }
    Ok(format!("max |Δ| = {worst:.1e}"))
}

fn w_transformation() -> Outcome {
    let (rho, _) = dominance_limit(0.1).map_err(|e| e.to_string())?;
    let (rotated, _) = to_w_state(&rho);
    let v = w_vector();
    let fid = (v.adjoint() * rotated.matrix * v)[(0, 0)].re;
    ensure((fid - 1.0).abs() <= 1e-12, || format!("fidelity {fid}"))?;
    Ok(format!("fidelity = {fid:.15}"))
}

fn full_nonlocality() -> Outcome {
    let (rho, _) = dominance_limit(0.1).map_err(|e| e.to_string())?;
    let vertices = hybrid_vertices();
    ensure(vertices.len() == 3072, || format!("{} hybrid vertices", vertices.len()))?;
    let enumerated = vertices.iter().map(|b| b.svetlichny()).fold(f64::NEG_INFINITY, f64::max);
    let bound = hybrid_bound();
    ensure(bound == enumerated, || format!("bound {bound} vs enumeration {enumerated}"))?;

    let best = maximize_svetlichny(&rho, &OptimizerConfig::default()).map_err(|e| e.to_string())?;
    ensure(best.best > bound + 1e-3, || format!("S* = {} vs bound {bound}", best.best))?;

    let behavior = behavior_from_rho(&rho, &best.settings, false).map_err(|e| e.to_string())?;
    let verdict = hybrid_lp_feasible(&behavior).map_err(|e| e.to_string())?;
    ensure(!verdict.feasible, || "optimal behavior found inside the hybrid polytope".into())?;
    let cert = verdict.certificate.ok_or("no certificate")?;
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let value = dot(&cert.functional, &behavior.flat());
    let hybrid_max = vertices
        .iter()
        .map(|v| dot(&cert.functional, &v.flat()))
        .fold(f64::NEG_INFINITY, f64::max);
    ensure(value > hybrid_max + 1e-9, || format!("certificate value {value} vs vertex max {hybrid_max}"))?;
    Ok(format!(
        "S* = {:.6} > {bound}; certificate {value:.6} > {hybrid_max:.6}",
        best.best
    ))
}

fn optimizer_calibration() -> Outcome {
    let cfg = OptimizerConfig::default();
    let run = |rho: &Rho8| maximize_svetlichny(rho, &cfg).map(|r| r.best).map_err(|e| e.to_string());
    let g = run(&pure(&ghz()))?;
    let m = run(&maximally_mixed())?;
    let wv = run(&pure(&w()))?;
    ensure(g >= 4.0 * 2f64.sqrt() - 1e-3, || format!("GHZ S* = {g}"))?;
    ensure(m.abs() <= 1e-8, || format!("mixed S* = {m}"))?;
    ensure((4.30..=4.40).contains(&wv), || format!("W S* = {wv}"))?;
    Ok(format!("GHZ {g:.6}, mixed {m:.1e}, W {wv:.6}"))
}

fn oracle_lattice() -> Lattice {
    Lattice::evenly_spaced(
        LatticeFieldSpec::default(),
        4.0,
        WindowSpec::gaussian_default(1.0, 1.0).expect("valid window"),
    )
}

fn wick_equivalence() -> Outcome {
    let lattice = oracle_lattice();
    ensure(lattice.field.modes.len() == 3 && lattice.field.max_occupation == 4, || "lattice shape".into())?;
    let pairs = oracle_pair_function(&lattice).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for ops in density_operator_strings() {
        if ops.len() != 4 && ops.len() != 6 {
            continue;
        }
        let direct = oracle_npoint(&lattice, &ops).map_err(|e| e.to_string())?;
        let wick = npoint(&ops, &pairs).map_err(|e| e.to_string())?;
        let rel = (direct - wick).norm() / direct.norm();
        ensure(rel <= 1e-8, || format!("{ops:?}: relative error {rel:e}"))?;
        worst = worst.max(rel);
        count += 1;
    }
    ensure(count == 10, || format!("{count} strings checked"))?;
    Ok(format!("{count} strings, max relative error {worst:.1e}"))
}

fn perturbative_order() -> Outcome {
    let study =
        order_study(&oracle_lattice(), &[2.0, 1.0, 0.5, 0.25], &EvolutionOptions::default()).map_err(|e| e.to_string())?;
    let ratios: Vec<f64> = study.windows(2).map(|w| w[0].1 / w[1].1).collect();
    let threshold = 2f64.powf(2.5);
    ensure(ratios.iter().all(|r| *r >= threshold), || format!("ratios {ratios:?}"))?;
    Ok(format!("residual ratios {:?}", ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>()))
}

fn continuum_set(separation: f64, amplitude: f64) -> Result<AmplitudeSet, String> {
    let window = WindowSpec::gaussian_default(amplitude, 1.0).map_err(|e| e.to_string())?;
    amplitude_set(&FieldSpec::massless(1.0), &equilateral(separation, 4.0, &window)).map_err(|e| e.to_string())
}

fn amplitude_physics() -> Outcome {
    let pairs = [(DetectorId::A, DetectorId::B), (DetectorId::B, DetectorId::C), (DetectorId::C, DetectorId::A)];
    let mut previous: Option<[f64; 3]> = None;
    for l in [2.0, 3.0, 4.0] {
        let set = continuum_set(l, 1.0)?;
        for (key, v) in set.entries() {
            ensure(v.im.abs() <= 1e-6 * v.norm(), || format!("L/T = {l}: {key} = {v}"))?;
        }
        let emission: f64 = DetectorId::ALL.iter().map(|&d| set.get(d, Sign::Minus, d, Sign::Plus).re).sum();
        ensure((set.norm_term - emission).abs() <= 1e-6 * emission, || {
            format!("L/T = {l}: C = {} vs {emission}", set.norm_term)
        })?;

        let lambda = 1.7;
        let scaled = continuum_set(l, lambda)?;
        for ((key, a), (_, b)) in set.entries().iter().zip(scaled.entries()) {
            let expect = a * lambda * lambda;
            ensure((b - expect).norm() <= 1e-12 * expect.norm(), || format!("L/T = {l}: {key} scaling"))?;
        }

        let exchange = pairs.map(|(i, j)| set.get(i, Sign::Plus, j, Sign::Plus).norm());
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let overlap = set.get(i, Sign::Minus, j, Sign::Plus).norm();
            ensure(overlap < exchange[k], || format!("L/T = {l}: overlap {overlap} ≥ exchange {}", exchange[k]))?;
        }
        if let Some(prev) = previous {
            for k in 0..3 {
                ensure(exchange[k] <= prev[k], || format!("L/T = {l}: exchange grew"))?;
            }
        }
        previous = Some(exchange);
    }
    Ok("L/T ∈ {2, 3, 4}".into())
}

fn limit_entanglement() -> Outcome {
    let (rho, _) = dominance_limit(0.1).map_err(|e| e.to_string())?;
    let (rotated, _) = to_w_state(&rho);
    let expect = 2f64.sqrt() / 3.0;
    for cut in Cut::ALL {
        let n = negativity(&rho, cut);
        let nw = negativity(&rotated, cut);
        ensure((n - expect).abs() <= 1e-10, || format!("{}: {n}", cut.label()))?;
        ensure((nw - n).abs() <= 1e-10, || format!("{}: {nw} after rotation", cut.label()))?;
    }
    Ok(format!("negativity {expect:.12} on all cuts"))
}

fn determinism() -> Outcome {
    let cfg = ExperimentConfig::default();
    ensure(cfg.seed == 0, || "default seed".into())?;
    let first = to_json(&run_pipeline(&cfg).map_err(|e| e.to_string())?);
    let second = to_json(&run_pipeline(&cfg).map_err(|e| e.to_string())?);
    ensure(first == second, || "sweep output differs between runs".into())?;
    Ok(format!("{} bytes identical", first.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("limit state reproduction", Duration::from_secs(1), limit_reproduction),
        ("W transformation", Duration::from_secs(1), w_transformation),
        ("full tripartite nonlocality", Duration::from_secs(120), full_nonlocality),
        ("optimizer calibration", Duration::from_secs(120), optimizer_calibration),
        ("Wick oracle equivalence", Duration::from_secs(300), wick_equivalence),
        ("perturbative order", Duration::from_secs(600), perturbative_order),
        ("amplitude physics", Duration::from_secs(600), amplitude_physics),
        ("limit state entanglement", Duration::from_secs(1), limit_entanglement),
        ("determinism", Duration::MAX, determinism),
    ];
    let mut failed = 0;
    for (n, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| {
            if elapsed <= *limit {
                Ok(msg)
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:.0?}"))
            }
        });
        match outcome {
            Ok(msg) => println!("criterion {} {name}: PASS ({elapsed:.2?}) {msg}", n + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({elapsed:.2?}) {msg}", n + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
