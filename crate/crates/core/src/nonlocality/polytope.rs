use std::sync::OnceLock;

use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, Variable};
use serde::{Deserialize, Serialize};

use super::{svetlichny_sign, outcome_value, Behavior};
use crate::error::{Error, Result};

pub const LP_TOLERANCE: f64 = 1e-9;

/// Which detector stands alone in a hybrid model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Partition {
    AVersusBC,
    BVersusCA,
    CVersusAB,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::AVersusBC, Partition::BVersusCA, Partition::CVersusAB];

    /// (single party, pair parties) as bit positions 0 = A, 1 = B, 2 = C.
    fn parties(self) -> (usize, usize, usize) {
        match self {
            Partition::AVersusBC => (0, 1, 2),
            Partition::BVersusCA => (1, 2, 0),
            Partition::CVersusAB => (2, 0, 1),
        }
    }
}

fn bit(v: usize, party: usize) -> usize {
    v >> (2 - party) & 1
}

/// Deterministic behavior: the lone party answers `single[x]`, the pair
/// answers bits of `pair` indexed by its two settings.
fn vertex(partition: Partition, single: usize, pair: usize) -> Behavior {
    let (k, p, q) = partition.parties();
    let mut b = Behavior::zero();
    for s in 0..8 {
        let lone = single >> bit(s, k) & 1;
        let slot = 2 * bit(s, p) + bit(s, q);
        let duo = pair >> (2 * slot) & 3;
        let o = (lone << (2 - k)) | ((duo >> 1) << (2 - p)) | ((duo & 1) << (2 - q));
        b.p[s][o] = 1.0;
    }
    b
}

fn vertex_table() -> &'static [Behavior] {
    static TABLE: OnceLock<Vec<Behavior>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = Vec::with_capacity(3072);
        for partition in Partition::ALL {
            for single in 0..4 {
                for pair in 0..256 {
                    out.push(vertex(partition, single, pair));
                }
            }
        }
        out
    })
}

/// All 3072 deterministic hybrid behaviors, ordered by partition, lone
/// strategy, pair strategy.
pub fn hybrid_vertices() -> Vec<Behavior> {
    vertex_table().to_vec()
}

/// Largest Svetlichny value over the hybrid vertices.
pub fn hybrid_bound() -> f64 {
    static BOUND: OnceLock<f64> = OnceLock::new();
    *BOUND.get_or_init(|| vertex_table().iter().map(Behavior::svetlichny).fold(f64::NEG_INFINITY, f64::max))
}

/// Svetlichny functional as a vector over `Behavior::flat` entries.
pub fn svetlichny_functional() -> [f64; 64] {
    let mut f = [0.0; 64];
    for s in 0..8 {
        for o in 0..8 {
            f[s * 8 + o] = svetlichny_sign(s) * outcome_value(o >> 2) * outcome_value(o >> 1) * outcome_value(o);
        }
    }
    f
}

/// Bell-like functional separating a behavior from the hybrid polytope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub functional: Vec<f64>,
    /// Functional evaluated on the tested behavior.
    pub value: f64,
    /// Functional maximized over the hybrid vertices.
    pub hybrid_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpVerdict {
    pub feasible: bool,
    /// Minimal L1 distance between the behavior and the polytope as found by
    /// the solver.
    pub residual: f64,
    /// Nonzero convex weights as (vertex index, weight) when feasible.
    pub weights: Vec<(usize, f64)>,
    pub certificate: Option<Certificate>,
}

fn lp_error(e: impl std::fmt::Display) -> Error {
    Error::Lp(e.to_string())
}

fn solve(problem: &Problem) -> Result<microlp::Solution> {
    problem
        .solve()
        .map_err(lp_error)?
        .into_solution()
        .map_err(|i| Error::Lp(format!("solver interrupted: {:?}", i.termination_reason())))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Membership of `behavior` in the convex hull of the hybrid vertices, with
/// convex weights when inside and a separating functional when outside.
pub fn hybrid_lp_feasible(behavior: &Behavior) -> Result<LpVerdict> {
    let target = behavior.flat();
    let vertices: Vec<[f64; 64]> = vertex_table().iter().map(Behavior::flat).collect();

    let mut primal = Problem::new(OptimizationDirection::Minimize);
    let weights: Vec<Variable> = vertices.iter().map(|_| primal.add_var(0.0, (0.0, f64::INFINITY))).collect();
    for i in 0..64 {
        let up = primal.add_var(1.0, (0.0, f64::INFINITY));
        let down = primal.add_var(1.0, (0.0, f64::INFINITY));
        let mut row = LinearExpr::empty();
        for (v, w) in vertices.iter().zip(&weights) {
            if v[i] != 0.0 {
                row.add(*w, v[i]);
            }
        }
        row.add(up, 1.0);
        row.add(down, -1.0);
        primal.add_constraint(row, ComparisonOp::Eq, target[i]);
    }
    primal.add_constraint(weights.iter().map(|w| (*w, 1.0)).collect::<LinearExpr>(), ComparisonOp::Eq, 1.0);
    let sol = solve(&primal)?;
    let residual = sol.objective().max(0.0);

    if residual <= LP_TOLERANCE {
        let found = weights
            .iter()
            .enumerate()
            .map(|(k, w)| (k, sol.var_value(*w)))
            .filter(|(_, w)| *w > 1e-14)
            .collect();
        return Ok(LpVerdict {
            feasible: true,
            residual,
            weights: found,
            certificate: None,
        });
    }

    let mut sep = Problem::new(OptimizationDirection::Maximize);
    let f: Vec<Variable> = target.iter().map(|p| sep.add_var(*p, (-1.0, 1.0))).collect();
    let t = sep.add_var(-1.0, (-64.0, 64.0));
    for v in &vertices {
        let mut row: LinearExpr = v
            .iter()
            .zip(&f)
            .filter(|(c, _)| **c != 0.0)
            .map(|(c, var)| (*var, *c))
            .collect();
        row.add(t, -1.0);
        sep.add_constraint(row, ComparisonOp::Le, 0.0);
    }
    let sol = solve(&sep)?;
    let functional: Vec<f64> = f.iter().map(|v| sol.var_value(*v)).collect();
    let value = dot(&functional, &target);
    let hybrid_max = vertices.iter().map(|v| dot(&functional, v)).fold(f64::NEG_INFINITY, f64::max);
    if value - hybrid_max <= LP_TOLERANCE {
        return Err(Error::Lp(format!(
            "primal residual {residual:e} but no separating functional (gap {:e})",
            value - hybrid_max
        )));
    }
    Ok(LpVerdict {
        feasible: false,
        residual,
        weights: Vec::new(),
        certificate: Some(Certificate {
            functional,
            value,
            hybrid_max,
        }),
    })
}

/// max over the hybrid polytope of a linear functional on behaviors, by LP.
pub fn lp_max_functional(functional: &[f64; 64]) -> Result<f64> {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let weights: Vec<Variable> = vertex_table()
        .iter()
        .map(|v| lp.add_var(dot(functional, &v.flat()), (0.0, f64::INFINITY)))
        .collect();
    lp.add_constraint(weights.iter().map(|w| (*w, 1.0)).collect::<LinearExpr>(), ComparisonOp::Eq, 1.0);
    Ok(solve(&lp)?.objective())
}

#[cfg(test)]
mod tests {
    use super::super::states::*;
    use super::super::{behavior_from_rho, maximize_svetlichny, MeasurementSettings, OptimizerConfig};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn vertex_count_and_validity() {
        let v = hybrid_vertices();
        assert_eq!(v.len(), 3072);
        for b in &v {
            let (sum_err, min) = b.normalization_defect();
            assert_eq!(sum_err, 0.0);
            assert!(min >= 0.0);
        }
        let distinct: std::collections::HashSet<Vec<u64>> =
            v.iter().map(|b| b.flat().iter().map(|x| x.to_bits()).collect()).collect();
        assert!(distinct.len() > 1024);
    }

    #[test]
    fn lone_party_does_not_signal() {
        for (n, b) in vertex_table().iter().enumerate() {
            let lone = n / 1024;
            let shift = 2 - lone;
            // Lone party's outcome depends only on its own setting.
            for s in 0..8 {
                let flipped = s ^ (0b111 ^ (1 << shift));
                let marg = |s: usize| (0..8).filter(|o| o >> shift & 1 == 0).map(|o| b.p[s][o]).sum::<f64>();
                assert_eq!(marg(s), marg(flipped));
            }
        }
    }

    #[test]
    fn bound_by_enumeration() {
        let bound = hybrid_bound();
        assert_eq!(bound, 4.0);
        for perm in [[1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1]] {
            let permuted = vertex_table()
                .iter()
                .map(|b| b.permuted(perm).svetlichny())
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(permuted, bound);
        }
        assert!(bound >= 2.0);
    }

    #[test]
    fn lp_dual_consistency() {
        let lp = lp_max_functional(&svetlichny_functional()).unwrap();
        assert!((lp - hybrid_bound()).abs() < 1e-8);
    }

    #[test]
    fn vertex_mixture_is_feasible() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = vertex_table();
        let mut mix = [0.0; 64];
        for _ in 0..10 {
            let k = rng.random_range(0..v.len());
            for (m, x) in mix.iter_mut().zip(v[k].flat()) {
                *m += x / 10.0;
            }
        }
        let verdict = hybrid_lp_feasible(&Behavior::from_flat(&mix)).unwrap();
        assert!(verdict.feasible);
        assert!(verdict.residual <= 1e-9);
        let mut rebuilt = [0.0; 64];
        for (k, w) in &verdict.weights {
            for (r, x) in rebuilt.iter_mut().zip(v[*k].flat()) {
                *r += w * x;
            }
        }
        assert!(rebuilt.iter().zip(&mix).all(|(a, b)| (a - b).abs() < 1e-9));
    }

    #[test]
    fn product_state_is_feasible() {
        let set = MeasurementSettings {
            directions: [
                [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]],
                [[0.6, 0.0, 0.8], [0.0, 1.0, 0.0]],
                [[0.0, 0.6, 0.8], [1.0, 0.0, 0.0]],
            ],
        };
        let b = behavior_from_rho(&pure(&basis(0)), &set, false).unwrap();
        assert!(b.svetlichny().abs() <= hybrid_bound());
        let verdict = hybrid_lp_feasible(&b).unwrap();
        assert!(verdict.feasible);
        assert!(!verdict.weights.is_empty());
    }

    #[test]
    fn w_state_is_certified() {
        let w = pure(&w());
        let opt = maximize_svetlichny(&w, &OptimizerConfig::default()).unwrap();
        let b = behavior_from_rho(&w, &opt.settings, false).unwrap();
        assert!(b.svetlichny() > hybrid_bound());
        let verdict = hybrid_lp_feasible(&b).unwrap();
        assert!(!verdict.feasible);
        let cert = verdict.certificate.unwrap();
        assert!(cert.value > cert.hybrid_max + 1e-6);
    }
}
