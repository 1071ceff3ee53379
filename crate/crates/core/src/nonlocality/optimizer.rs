use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{checked_state, contract, correlation_tensor, svetlichny_sign, MeasurementSettings};
use crate::error::Result;
use crate::rho::Rho8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    pub step_tolerance: f64,
    /// Project a slightly non-PSD input onto the PSD cone first.
    pub project_psd: bool,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            starts: 64,
            seed: 0,
            max_iterations: 500,
            step_tolerance: 1e-10,
            project_psd: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerResult {
    pub best: f64,
    pub settings: MeasurementSettings,
    /// Final value of every start, in start order.
    pub local_optima: Vec<f64>,
    /// False when some start hit the iteration cap.
    pub converged: bool,
}

type Tensor = [[[f64; 3]; 3]; 3];

fn random_direction(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let z: f64 = rng.random_range(-1.0..1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).sqrt();
    [r * phi.cos(), r * phi.sin(), z]
}

/// Gradient of S with respect to `directions[party][which]`; S is linear in
/// each direction separately.
fn gradient(t: &Tensor, d: &[[[f64; 3]; 2]; 3], party: usize, which: usize) -> [f64; 3] {
    let mut g = [0.0; 3];
    for s in 0..8 {
        let bits = [s >> 2 & 1, s >> 1 & 1, s & 1];
        if bits[party] != which {
            continue;
        }
        let sign = svetlichny_sign(s);
        for (axis, gi) in g.iter_mut().enumerate() {
            let mut unit = [0.0; 3];
            unit[axis] = 1.0;
            let v: [&[f64; 3]; 3] = std::array::from_fn(|p| if p == party { &unit } else { &d[p][bits[p]] });
            *gi += sign * contract(t, v[0], v[1], v[2]);
        }
    }
    g
}

fn value(t: &Tensor, d: &[[[f64; 3]; 2]; 3]) -> f64 {
    (0..8)
        .map(|s| svetlichny_sign(s) * contract(t, &d[0][s >> 2 & 1], &d[1][s >> 1 & 1], &d[2][s & 1]))
        .sum()
}

/// Alternating closed-form ascent: each direction in turn is set to its
/// normalized gradient. Returns (S, directions, converged).
fn ascend(t: &Tensor, mut d: [[[f64; 3]; 2]; 3], cfg: &OptimizerConfig) -> (f64, [[[f64; 3]; 2]; 3], bool) {
    for _ in 0..cfg.max_iterations {
        let mut step: f64 = 0.0;
        for party in 0..3 {
            for which in 0..2 {
                let g = gradient(t, &d, party, which);
                let n = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
                if n < 1e-300 {
                    continue;
                }
                let next = [g[0] / n, g[1] / n, g[2] / n];
                let old = d[party][which];
                step = step.max(((next[0] - old[0]).powi(2) + (next[1] - old[1]).powi(2) + (next[2] - old[2]).powi(2)).sqrt());
                d[party][which] = next;
            }
        }
        if step < cfg.step_tolerance {
            return (value(t, &d), d, true);
        }
    }
    (value(t, &d), d, false)
}

/// Multi-start maximization of the Svetlichny value over measurement
/// directions. Deterministic for a fixed seed.
pub fn maximize_svetlichny(rho: &Rho8, cfg: &OptimizerConfig) -> Result<OptimizerResult> {
    let state = checked_state(rho, cfg.project_psd)?;
    let t = correlation_tensor(&state.matrix);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seeds: Vec<[[[f64; 3]; 2]; 3]> = (0..cfg.starts.max(1))
        .map(|_| std::array::from_fn(|_| std::array::from_fn(|_| random_direction(&mut rng))))
        .collect();
    let runs: Vec<(f64, [[[f64; 3]; 2]; 3], bool)> = seeds.par_iter().map(|d| ascend(&t, *d, cfg)).collect();
    let mut best = 0;
    for (k, r) in runs.iter().enumerate() {
        if r.0 > runs[best].0 {
            best = k;
        }
    }
    Ok(OptimizerResult {
        best: runs[best].0,
        settings: MeasurementSettings { directions: runs[best].1 },
        local_optima: runs.iter().map(|r| r.0).collect(),
        converged: runs.iter().all(|r| r.2),
    })
}
