use rayon::prelude::*;
use serde_json::{Map, Value};

use super::config::ExperimentConfig;
use crate::correlator::{amplitude_set, AmplitudeSet};
use crate::error::Result;
use crate::labels::{DetectorId, Sign};
use crate::nonlocality::{
    behavior_from_rho, hybrid_bound, hybrid_lp_feasible, maximize_svetlichny, negativity, Cut,
    OptimizerConfig,
};
use crate::rho::{
    assemble_from_pairs, default_filter, dominance_amplitudes, filter, normalize, to_w_state, validate,
    FilterParam,
};

/// One sweep point. Fields after a failing stage stay empty and the
/// failure is recorded in `error`.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub l_over_t: Option<f64>,
    pub coupling: f64,
    pub eta: Option<f64>,
    /// Real parts in [`amplitude_columns`] order.
    pub amplitudes: Option<Vec<f64>>,
    pub norm_term: Option<f64>,
    pub max_imag: Option<f64>,
    pub trace: Option<f64>,
    pub asymmetry: Option<f64>,
    pub min_eig: Option<f64>,
    pub negativity: [Option<f64>; 3],
    pub fid_w: Option<f64>,
    pub s_star: Option<f64>,
    pub hybrid_bound: f64,
    pub lp_feasible: Option<bool>,
    pub warning: Option<String>,
    pub error: Option<String>,
}

impl Record {
    fn new(l_over_t: Option<f64>, coupling: f64) -> Self {
        Record {
            l_over_t,
            coupling,
            eta: None,
            amplitudes: None,
            norm_term: None,
            max_imag: None,
            trace: None,
            asymmetry: None,
            min_eig: None,
            negativity: [None; 3],
            fid_w: None,
            s_star: None,
            hybrid_bound: hybrid_bound(),
            lp_feasible: None,
            warning: None,
            error: None,
        }
    }

    /// Ordered (column, value) pairs; the schema does not depend on which
    /// stages succeeded.
    pub fn columns(&self) -> Map<String, Value> {
        let num = |v: Option<f64>| v.map_or(Value::Null, Value::from);
        let mut m = Map::new();
        m.insert("L_over_T".into(), num(self.l_over_t));
        m.insert("coupling".into(), Value::from(self.coupling));
        m.insert("eta".into(), num(self.eta));
        for (k, name) in amplitude_columns().into_iter().enumerate() {
            m.insert(name, num(self.amplitudes.as_ref().map(|a| a[k])));
        }
        m.insert("C".into(), num(self.norm_term));
        m.insert("max_imag".into(), num(self.max_imag));
        m.insert("trace".into(), num(self.trace));
        m.insert("asymmetry".into(), num(self.asymmetry));
        m.insert("min_eig".into(), num(self.min_eig));
        for (cut, v) in Cut::ALL.iter().zip(self.negativity) {
            m.insert(format!("neg_{}", cut.label().replace('|', "_")), num(v));
        }
        m.insert("fid_W".into(), num(self.fid_w));
        m.insert("S_star".into(), num(self.s_star));
        m.insert("hybrid_bound".into(), Value::from(self.hybrid_bound));
        m.insert("lp_feasible".into(), self.lp_feasible.map_or(Value::Null, Value::from));
        m.insert("warning".into(), self.warning.clone().map_or(Value::Null, Value::from));
        m.insert("error".into(), self.error.clone().map_or(Value::Null, Value::from));
        m
    }
}

pub fn amplitude_columns() -> Vec<String> {
    let mut out = Vec::with_capacity(36);
    for i in DetectorId::ALL {
        for j in DetectorId::ALL {
            for a in Sign::ALL {
                for b in Sign::ALL {
                    out.push(AmplitudeSet::key(i, a, j, b));
                }
            }
        }
    }
    out
}

pub fn column_names() -> Vec<String> {
    Record::new(None, 0.0).columns().keys().cloned().collect()
}

fn analyze(record: &mut Record, base: &AmplitudeSet, eta: Option<FilterParam>, cfg: &ExperimentConfig) -> Result<()> {
    let entries = base.entries();
    record.amplitudes = Some(entries.iter().map(|(_, v)| v.re).collect());
    record.max_imag = Some(entries.iter().map(|(_, v)| v.im.abs()).fold(0.0, f64::max));
    record.norm_term = Some(base.norm_term);

    let assembly = assemble_from_pairs(base)?;
    record.trace = Some(assembly.rho.matrix.trace().re);
    record.asymmetry = Some(assembly.asymmetry);

    let eta = match eta {
        Some(e) => e,
        None => {
            let (e, differ) = default_filter(base)?;
            if differ {
                record.warning = Some("d_BC^{++} and d_CA^{++} differ; using their geometric mean".into());
            }
            e
        }
    };
    record.eta = Some(eta.value());
    let state = normalize(&filter(&assembly.rho, eta))?;
    record.min_eig = Some(validate(&state).min_eigenvalue);
    if cfg.analysis.negativity {
        record.negativity = Cut::ALL.map(|c| Some(negativity(&state, c)));
    }
    record.fid_w = Some(to_w_state(&state).1);

    if cfg.analysis.svetlichny {
        let opt = OptimizerConfig {
            starts: cfg.analysis.starts,
            seed: cfg.seed,
            project_psd: cfg.analysis.project_psd,
            ..Default::default()
        };
        let best = maximize_svetlichny(&state, &opt)?;
        record.s_star = Some(best.best);
        if !best.converged {
            record.warning = Some("some optimizer starts hit the iteration cap".into());
        }
        if cfg.analysis.lp_test {
            let behavior = behavior_from_rho(&state, &best.settings, cfg.analysis.project_psd)?;
            record.lp_feasible = Some(hybrid_lp_feasible(&behavior)?.feasible);
        }
    }
    Ok(())
}

fn run_point(l_over_t: Option<f64>, coupling: f64, base: &Result<AmplitudeSet>, eta: Option<f64>, cfg: &ExperimentConfig) -> Record {
    let mut record = Record::new(l_over_t, coupling);
    let outcome = match base {
        Ok(b) => eta
            .map(FilterParam::new)
            .transpose()
            .and_then(|e| analyze(&mut record, &b.scaled(coupling * coupling), e, cfg))
            .map_err(|e| e.to_string()),
        Err(e) => Err(e.to_string()),
    };
    if let Err(e) = outcome {
        record.error = Some(e);
    }
    record
}

/// Amplitudes → Wick expansion → assembly → filter → normalization →
/// entanglement and nonlocality diagnostics, for every sweep point in
/// config order.
pub fn run_pipeline(cfg: &ExperimentConfig) -> Result<Vec<Record>> {
    cfg.validate()?;
    let etas: Vec<Option<f64>> = match &cfg.sweep.etas {
        Some(grid) => grid.iter().map(|e| Some(*e)).collect(),
        None => vec![cfg.filter.eta],
    };

    if let Some(s) = cfg.filter.dominance {
        let base = Ok(dominance_amplitudes(s));
        let eta = cfg.filter.eta.or(Some(s.sqrt()));
        let etas = if cfg.sweep.etas.is_some() { etas } else { vec![eta] };
        return Ok(etas
            .par_iter()
            .map(|e| run_point(None, 1.0, &base, *e, cfg))
            .collect());
    }

    let field = cfg.field_spec();
    let bases: Vec<Result<AmplitudeSet>> = cfg
        .sweep
        .separations
        .par_iter()
        .map(|&l| amplitude_set(&field, &cfg.detector_specs(l)?))
        .collect();

    let mut points = Vec::new();
    for (k, &l) in cfg.sweep.separations.iter().enumerate() {
        for &g in &cfg.sweep.couplings {
            for &e in &etas {
                points.push((k, l, g, e));
            }
        }
    }
    Ok(points
        .par_iter()
        .map(|&(k, l, g, e)| run_point(Some(l), g, &bases[k], e, cfg))
        .collect())
}
