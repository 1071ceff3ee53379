//! Tripartite correlations from two dichotomic spin measurements per
//! detector, the Svetlichny functional, and the hybrid local-nonlocal
//! polytope.

mod entanglement;
mod optimizer;
mod polytope;

pub use entanglement::{fidelity, negativity, partial_transpose, Cut};
pub use optimizer::{maximize_svetlichny, OptimizerConfig, OptimizerResult};
pub use polytope::{
    hybrid_bound, hybrid_lp_feasible, hybrid_vertices, lp_max_functional, svetlichny_functional, Certificate,
    LpVerdict, Partition, LP_TOLERANCE,
};

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rho::{hermitian_eigenvalues, project_psd, Matrix8, Rho8};

pub const PSD_TOLERANCE: f64 = 1e-10;

/// Outcome +1 is stored at bit 0, −1 at bit 1.
pub fn outcome_value(bit: usize) -> f64 {
    if bit & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Svetlichny sign (−1)^{xy+yz+zx} for setting index 4x + 2y + z.
pub fn svetlichny_sign(setting: usize) -> f64 {
    let (x, y, z) = (setting >> 2 & 1, setting >> 1 & 1, setting & 1);
    if (x * y + y * z + z * x) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Bloch directions `directions[party][setting]`, parties in order A, B, C.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSettings {
    pub directions: [[[f64; 3]; 2]; 3],
}

impl MeasurementSettings {
    pub fn uniform(direction: [f64; 3]) -> Self {
        MeasurementSettings {
            directions: [[direction; 2]; 3],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for party in &self.directions {
            for d in party {
                let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
                if (n - 1.0).abs() > 1e-12 {
                    return Err(Error::config(format!("measurement direction {d:?} is not a unit vector")));
                }
            }
        }
        Ok(())
    }
}

/// Pauli matrices in the (↓, ↑) basis, ↓ the −1 eigenstate of σ_z.
pub fn pauli() -> [Matrix2<Complex64>; 3] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        Matrix2::new(z, one, one, z),
        Matrix2::new(z, i, -i, z),
        Matrix2::new(-one, z, z, one),
    ]
}

pub fn observable(direction: &[f64; 3]) -> Matrix2<Complex64> {
    let s = pauli();
    s[0] * Complex64::new(direction[0], 0.0)
        + s[1] * Complex64::new(direction[1], 0.0)
        + s[2] * Complex64::new(direction[2], 0.0)
}

pub fn kron3(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>, c: &Matrix2<Complex64>) -> Matrix8 {
    Matrix8::from_fn(|r, col| {
        a[(r >> 2 & 1, col >> 2 & 1)] * b[(r >> 1 & 1, col >> 1 & 1)] * c[(r & 1, col & 1)]
    })
}

/// T_ijk = tr[ρ σ_i ⊗ σ_j ⊗ σ_k].
pub fn correlation_tensor(rho: &Matrix8) -> [[[f64; 3]; 3]; 3] {
    let s = pauli();
    let mut t = [[[0.0; 3]; 3]; 3];
    for (i, si) in s.iter().enumerate() {
        for (j, sj) in s.iter().enumerate() {
            for (k, sk) in s.iter().enumerate() {
                t[i][j][k] = (rho * kron3(si, sj, sk)).trace().re;
            }
        }
    }
    t
}

pub fn contract(t: &[[[f64; 3]; 3]; 3], a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    let mut e = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                e += t[i][j][k] * a[i] * b[j] * c[k];
            }
        }
    }
    e
}

/// S = Σ (−1)^{xy+yz+zx} E_xyz from a correlation tensor.
pub fn svetlichny_from_tensor(t: &[[[f64; 3]; 3]; 3], settings: &MeasurementSettings) -> f64 {
    let d = &settings.directions;
    (0..8)
        .map(|s| svetlichny_sign(s) * contract(t, &d[0][s >> 2 & 1], &d[1][s >> 1 & 1], &d[2][s & 1]))
        .sum()
}

pub fn svetlichny_value(rho: &Rho8, settings: &MeasurementSettings) -> Result<f64> {
    settings.validate()?;
    let checked = checked_state(rho, false)?;
    Ok(svetlichny_from_tensor(&correlation_tensor(&checked.matrix), settings))
}

/// Requires a normalized state; negative eigenvalues beyond tolerance are
/// refused unless `project` is set.
pub fn checked_state(rho: &Rho8, project: bool) -> Result<Rho8> {
    let tr = rho.matrix.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::domain(format!("state is not normalized: trace = {tr}")));
    }
    let min = hermitian_eigenvalues(&rho.matrix)[0];
    if min < -PSD_TOLERANCE {
        if project {
            return project_psd(rho);
        }
        return Err(Error::NotPsd(min));
    }
    Ok(rho.clone())
}

/// Conditional probabilities `p[4x+2y+z][4a+2b+c]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Behavior {
    pub p: [[f64; 8]; 8],
}

impl Behavior {
    pub fn zero() -> Self {
        Behavior { p: [[0.0; 8]; 8] }
    }

    pub fn flat(&self) -> [f64; 64] {
        let mut out = [0.0; 64];
        for s in 0..8 {
            out[s * 8..s * 8 + 8].copy_from_slice(&self.p[s]);
        }
        out
    }

    pub fn from_flat(v: &[f64]) -> Self {
        let mut b = Behavior::zero();
        for s in 0..8 {
            b.p[s].copy_from_slice(&v[s * 8..s * 8 + 8]);
        }
        b
    }

    /// E_xyz = Σ abc·p(abc|xyz).
    pub fn correlator(&self, setting: usize) -> f64 {
        (0..8)
            .map(|o| outcome_value(o >> 2) * outcome_value(o >> 1) * outcome_value(o) * self.p[setting][o])
            .sum()
    }

    pub fn svetlichny(&self) -> f64 {
        (0..8).map(|s| svetlichny_sign(s) * self.correlator(s)).sum()
    }

    /// Largest deviation of a conditional distribution from unit sum, and
    /// the most negative entry.
    pub fn normalization_defect(&self) -> (f64, f64) {
        let sum_err = self
            .p
            .iter()
            .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max);
        let min = self.p.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        (sum_err, min)
    }

    /// Marginal of the parties other than `party` for a given setting.
    fn marginal(&self, party: usize, setting: usize) -> [f64; 4] {
        let shift = 2 - party;
        let mut m = [0.0; 4];
        for o in 0..8 {
            let rest = remove_bit(o, shift);
            m[rest] += self.p[setting][o];
        }
        m
    }

    /// Largest change in the other two parties' marginals when one party
    /// switches setting.
    pub fn signaling(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for party in 0..3 {
            let shift = 2 - party;
            for s in 0..8 {
                if s >> shift & 1 == 1 {
                    continue;
                }
                let a = self.marginal(party, s);
                let b = self.marginal(party, s | 1 << shift);
                for k in 0..4 {
                    worst = worst.max((a[k] - b[k]).abs());
                }
            }
        }
        worst
    }

    /// Relabels parties: party k of the result is party `perm[k]` of self.
    pub fn permuted(&self, perm: [usize; 3]) -> Behavior {
        let mut out = Behavior::zero();
        let map = |v: usize| -> usize {
            (0..3).fold(0, |acc, k| acc | ((v >> (2 - perm[k]) & 1) << (2 - k)))
        };
        for s in 0..8 {
            for o in 0..8 {
                out.p[map(s)][map(o)] = self.p[s][o];
            }
        }
        out
    }
}

fn remove_bit(v: usize, shift: usize) -> usize {
    let high = v >> (shift + 1);
    let low = v & ((1 << shift) - 1);
    (high << shift) | low
}

fn projector(direction: &[f64; 3], bit: usize) -> Matrix2<Complex64> {
    let o = observable(direction) * Complex64::new(outcome_value(bit), 0.0);
    (Matrix2::identity() + o) * Complex64::new(0.5, 0.0)
}

pub fn behavior_from_rho(rho: &Rho8, settings: &MeasurementSettings, project: bool) -> Result<Behavior> {
    settings.validate()?;
    let state = checked_state(rho, project)?;
    let d = &settings.directions;
    let mut b = Behavior::zero();
    for s in 0..8 {
        for o in 0..8 {
            let pa = projector(&d[0][s >> 2 & 1], o >> 2 & 1);
            let pb = projector(&d[1][s >> 1 & 1], o >> 1 & 1);
            let pc = projector(&d[2][s & 1], o & 1);
            b.p[s][o] = (state.matrix * kron3(&pa, &pb, &pc)).trace().re;
        }
    }
    Ok(b)
}

/// Standard three-qubit test states.
pub mod states {
    use super::*;
    use nalgebra::SVector;

    pub type Vector8 = SVector<Complex64, 8>;

    pub fn pure(v: &Vector8) -> Rho8 {
        let n = v.norm();
        let u = v / Complex64::new(n, 0.0);
        Rho8 {
            matrix: u * u.adjoint(),
            normalized: true,
        }
    }

    pub fn basis(index: usize) -> Vector8 {
        let mut v = Vector8::zeros();
        v[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn ghz() -> Vector8 {
        (basis(0) + basis(7)) / Complex64::new(2f64.sqrt(), 0.0)
    }

    pub fn w() -> Vector8 {
        crate::rho::w_vector()
    }

    pub fn maximally_mixed() -> Rho8 {
        Rho8 {
            matrix: Matrix8::identity() / Complex64::new(8.0, 0.0),
            normalized: true,
        }
    }

    /// λρ + (1 − λ)I/8.
    pub fn mix_with_noise(rho: &Rho8, lambda: f64) -> Rho8 {
        Rho8 {
            matrix: rho.matrix * Complex64::new(lambda, 0.0)
                + maximally_mixed().matrix * Complex64::new(1.0 - lambda, 0.0),
            normalized: true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::states::*;
    use super::*;

    fn random_settings(seed: u64) -> MeasurementSettings {
        let mut x = seed as f64 * 0.377 + 0.05;
        let mut next = || {
            x = (x * 13.7 + 0.29).fract();
            x
        };
        let mut d = [[[0.0; 3]; 2]; 3];
        for party in &mut d {
            for v in party.iter_mut() {
                let z = 2.0 * next() - 1.0;
                let phi = 2.0 * std::f64::consts::PI * next();
                let r = (1.0 - z * z).sqrt();
                *v = [r * phi.cos(), r * phi.sin(), z];
            }
        }
        MeasurementSettings { directions: d }
    }

    #[test]
    fn ground_state_along_z() {
        let b = behavior_from_rho(&pure(&basis(0)), &MeasurementSettings::uniform([0.0, 0.0, 1.0]), false).unwrap();
        for s in 0..8 {
            assert!((b.p[s][7] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn mixed_state_is_uniform() {
        let b = behavior_from_rho(&maximally_mixed(), &random_settings(3), false).unwrap();
        assert!(b.p.iter().flatten().all(|p| (p - 0.125).abs() < 1e-14));
    }

    #[test]
    fn two_evaluation_paths_agree() {
        for (k, state) in [pure(&w()), pure(&ghz()), maximally_mixed()].iter().enumerate() {
            let set = random_settings(k as u64 + 11);
            let b = behavior_from_rho(state, &set, false).unwrap();
            let direct = svetlichny_value(state, &set).unwrap();
            assert!((b.svetlichny() - direct).abs() < 1e-12);
            let (sum_err, min) = b.normalization_defect();
            assert!(sum_err < 1e-12 && min > -1e-12);
            assert!(b.signaling() < 1e-10);
        }
    }

    #[test]
    fn refuses_non_psd() {
        let mut m = Matrix8::identity() / Complex64::new(8.0, 0.0);
        m[(0, 1)] = Complex64::new(0.5, 0.0);
        m[(1, 0)] = Complex64::new(0.5, 0.0);
        let rho = Rho8 { matrix: m, normalized: true };
        let set = MeasurementSettings::uniform([0.0, 0.0, 1.0]);
        assert!(matches!(behavior_from_rho(&rho, &set, false), Err(Error::NotPsd(_))));
        assert!(behavior_from_rho(&rho, &set, true).is_ok());
    }

    #[test]
    fn rejects_non_unit_direction() {
        let set = MeasurementSettings::uniform([0.0, 0.0, 1.1]);
        assert!(svetlichny_value(&maximally_mixed(), &set).is_err());
    }

    #[test]
    fn signs() {
        let expected = [1.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -1.0];
        for (s, e) in expected.iter().enumerate() {
            assert_eq!(svetlichny_sign(s), *e);
        }
    }

    #[test]
    fn permutation_roundtrip() {
        let b = behavior_from_rho(&pure(&w()), &random_settings(5), false).unwrap();
        let p = b.permuted([1, 2, 0]).permuted([2, 0, 1]);
        assert_eq!(p, b);
    }
}
