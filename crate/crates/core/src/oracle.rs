//! Exact reference on a 1+1D ring lattice: a few Klein–Gordon momentum
//! modes in a truncated Fock space.
//!
//! Smeared operators are built as explicit ladder-operator combinations,
//! so their vacuum moments can be computed by direct multiplication and
//! compared with the Wick expansion. The joint field–detector state is
//! also evolved exactly and compared with the second-order density matrix.
//!
//! The ring has no strict light cone, so the oracle validates the algebra
//! of the pipeline, not causal disconnection.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlator::{AmplitudeSet, NORM_CONVENTION};
use crate::error::{Error, Result};
use crate::labels::{DetectorId, OperatorLabel, Sign};
use crate::quadrature::GaussLegendre;
use crate::rho::{assemble_from_pairs, excited_index, Matrix8, Rho8};
use crate::wick::PairFunction;
use crate::windows::WindowSpec;

pub const MAX_MODES: usize = 4;
pub const MAX_OCCUPATION: usize = 4;
pub const MAX_DIMENSION: usize = 1 << 13;
pub const TRUNCATION_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeFieldSpec {
    pub ring_length: f64,
    pub mass: f64,
    /// Integer mode labels n; wavenumber k = 2πn / ring_length.
    pub modes: Vec<i32>,
    /// Fock truncation per mode.
    pub max_occupation: usize,
}

impl Default for LatticeFieldSpec {
    fn default() -> Self {
        LatticeFieldSpec {
            ring_length: 2.0 * PI,
            mass: 1.0,
            modes: vec![-1, 0, 1],
            max_occupation: 4,
        }
    }
}

impl LatticeFieldSpec {
    pub fn wavenumber(&self, mode: i32) -> f64 {
        2.0 * PI * mode as f64 / self.ring_length
    }

    pub fn frequency(&self, mode: i32) -> f64 {
        (self.wavenumber(mode).powi(2) + self.mass * self.mass).sqrt()
    }

    pub fn field_dimension(&self) -> usize {
        (self.max_occupation + 1).pow(self.modes.len() as u32)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ring_length > 0.0 && self.ring_length.is_finite()) {
            return Err(Error::config("ring length must be positive"));
        }
        if self.modes.is_empty() || self.modes.len() > MAX_MODES {
            return Err(Error::config(format!("between 1 and {MAX_MODES} modes supported")));
        }
        let mut sorted = self.modes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.modes.len() {
            return Err(Error::config("lattice modes must be distinct"));
        }
        if self.max_occupation == 0 || self.max_occupation > MAX_OCCUPATION {
            return Err(Error::config(format!("occupation cutoff must lie in 1..={MAX_OCCUPATION}")));
        }
        for &n in &self.modes {
            if !(self.frequency(n) > 0.0) {
                return Err(Error::config(format!("mode {n} has zero frequency; use a massive field")));
            }
        }
        if self.field_dimension() * 8 > MAX_DIMENSION {
            return Err(Error::config(format!(
                "Hilbert dimension {} exceeds {MAX_DIMENSION}",
                self.field_dimension() * 8
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeDetector {
    /// Coordinate along the ring.
    pub position: f64,
    pub gap: f64,
    pub window: WindowSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub field: LatticeFieldSpec,
    pub detectors: [LatticeDetector; 3],
}

impl Lattice {
    /// Identical detectors spaced evenly around the ring.
    pub fn evenly_spaced(field: LatticeFieldSpec, gap: f64, window: WindowSpec) -> Self {
        let l = field.ring_length;
        let detectors = [0.0, l / 3.0, 2.0 * l / 3.0].map(|position| LatticeDetector {
            position,
            gap,
            window: window.clone(),
        });
        Lattice { field, detectors }
    }

    pub fn validate(&self) -> Result<()> {
        self.field.validate()?;
        for d in &self.detectors {
            d.window.validate()?;
            if !d.gap.is_finite() || !d.position.is_finite() {
                return Err(Error::config("lattice detector gap and position must be finite"));
            }
        }
        Ok(())
    }

    pub fn fingerprint(&self) -> String {
        serde_json::to_string(self).unwrap_or_default()
    }
}

/// ∫ ε(t) e^{iνt} dt over the window support.
pub fn window_transform(window: &WindowSpec, nu: f64) -> Complex64 {
    let h = window.half_width();
    let cycles = (nu.abs() + window.frequency_scale()) * window.duration / (2.0 * PI);
    let panels = 16 + (4.0 * cycles).ceil() as usize;
    GaussLegendre::order16().composite(-h, h, panels, |t| {
        Complex64::from_polar(window.eval(t), nu * t)
    })
}

/// ∫∫_{t > t′} ε(t) ε(t′) e^{−iν(t − t′)} dt dt′.
pub fn ordered_transform(window: &WindowSpec, nu: f64) -> Complex64 {
    let h = window.half_width();
    let cycles = (nu.abs() + window.frequency_scale()) * window.duration / (2.0 * PI);
    let panels = 16 + (4.0 * cycles).ceil() as usize;
    let rule = GaussLegendre::order16();
    rule.composite(0.0, 2.0 * h, panels, |tau| {
        let overlap = rule.composite(-h, h - tau, 16, |s| {
            Complex64::new(window.eval(s + tau) * window.eval(s), 0.0)
        });
        overlap * Complex64::from_polar(1.0, -nu * tau)
    })
}

/// Φ_i^s = Σ_k (lower_k a_k + raise_k a_k†).
#[derive(Debug, Clone)]
struct ModeCoefficients {
    lower: Vec<Complex64>,
    raise: Vec<Complex64>,
}

/// Exact lattice two-point function, usable as a Wick-engine input.
#[derive(Debug, Clone)]
pub struct OraclePairs {
    /// Indexed `[detector][sign]`.
    coefficients: [[ModeCoefficients; 2]; 3],
    fingerprint: String,
}

impl OraclePairs {
    fn coeffs(&self, op: OperatorLabel) -> &ModeCoefficients {
        &self.coefficients[op.detector.index()][op.sign.index()]
    }
}

impl PairFunction for OraclePairs {
    fn pair(&self, left: OperatorLabel, right: OperatorLabel) -> Result<Complex64> {
        let (l, r) = (self.coeffs(left), self.coeffs(right));
        Ok(l.lower.iter().zip(&r.raise).map(|(a, b)| a * b).sum())
    }

    fn fingerprint(&self) -> String {
        self.fingerprint.clone()
    }
}

pub fn oracle_pair_function(lattice: &Lattice) -> Result<OraclePairs> {
    lattice.validate()?;
    let f = &lattice.field;
    let coefficients = std::array::from_fn(|i| {
        let det = &lattice.detectors[i];
        Sign::ALL.map(|sign| {
            let mut lower = Vec::with_capacity(f.modes.len());
            let mut raise = Vec::with_capacity(f.modes.len());
            for &n in &f.modes {
                let (k, w) = (f.wavenumber(n), f.frequency(n));
                let norm = 1.0 / (2.0 * w * f.ring_length).sqrt();
                let s = sign.value() * det.gap;
                lower.push(Complex64::from_polar(norm, k * det.position) * window_transform(&det.window, s - w));
                raise.push(Complex64::from_polar(norm, -k * det.position) * window_transform(&det.window, s + w));
            }
            ModeCoefficients { lower, raise }
        })
    });
    Ok(OraclePairs {
        coefficients,
        fingerprint: lattice.fingerprint(),
    })
}

/// Θ_i on the lattice: Σ_k ∫∫_{t>t′} ε ε e^{−i(Ω+ω_k)(t−t′)} / (2ω_k L).
pub fn lattice_theta(lattice: &Lattice, detector: DetectorId) -> Complex64 {
    let f = &lattice.field;
    let det = &lattice.detectors[detector.index()];
    f.modes
        .iter()
        .map(|&n| {
            let w = f.frequency(n);
            ordered_transform(&det.window, det.gap + w) / (2.0 * w * f.ring_length)
        })
        .sum()
}

/// All ordered pair amplitudes, Θ terms and C on the lattice.
pub fn oracle_amplitude_set(lattice: &Lattice) -> Result<AmplitudeSet> {
    let pairs = oracle_pair_function(lattice)?;
    let mut set = AmplitudeSet::zero(pairs.fingerprint.clone());
    for i in DetectorId::ALL {
        for a in Sign::ALL {
            for j in DetectorId::ALL {
                for b in Sign::ALL {
                    let v = pairs.pair(OperatorLabel::new(i, a), OperatorLabel::new(j, b))?;
                    set.set(i, a, j, b, v);
                }
            }
        }
    }
    set.theta = DetectorId::ALL.map(|d| lattice_theta(lattice, d));
    set.norm_term = 2.0 * set.theta.iter().map(|t| t.re).sum::<f64>();
    set.provenance.norm_convention = NORM_CONVENTION.to_string();
    Ok(set)
}

/// Occupation-number basis with mixed-radix index Σ n_k (n_max+1)^k.
#[derive(Debug, Clone)]
struct FockSpace {
    modes: usize,
    levels: usize,
    dim: usize,
}

impl FockSpace {
    fn new(field: &LatticeFieldSpec) -> Self {
        FockSpace {
            modes: field.modes.len(),
            levels: field.max_occupation + 1,
            dim: field.field_dimension(),
        }
    }

    fn stride(&self, mode: usize) -> usize {
        self.levels.pow(mode as u32)
    }

    fn occupation(&self, index: usize, mode: usize) -> usize {
        index / self.stride(mode) % self.levels
    }

    fn total(&self, index: usize) -> usize {
        (0..self.modes).map(|m| self.occupation(index, m)).sum()
    }

    fn saturated(&self, index: usize) -> bool {
        (0..self.modes).any(|m| self.occupation(index, m) == self.levels - 1)
    }

    /// out += Σ_k (lower_k a_k + raise_k a_k†) v, dropping the part a_k†
    /// would push above the cutoff.
    fn apply_field(&self, lower: &[Complex64], raise: &[Complex64], v: &[Complex64], out: &mut [Complex64]) {
        for (b, &amp) in v.iter().enumerate() {
            if amp == ZERO {
                continue;
            }
            for m in 0..self.modes {
                let n = self.occupation(b, m);
                let s = self.stride(m);
                if n > 0 {
                    out[b - s] += lower[m] * (n as f64).sqrt() * amp;
                }
                if n + 1 < self.levels {
                    out[b + s] += raise[m] * ((n + 1) as f64).sqrt() * amp;
                }
            }
        }
    }
}

/// ⟨0|Φ_{o1} ⋯ Φ_{on}|0⟩ by applying explicit ladder-operator
/// combinations to the Fock vacuum.
pub fn oracle_npoint(lattice: &Lattice, ops: &[OperatorLabel]) -> Result<Complex64> {
    let pairs = oracle_pair_function(lattice)?;
    npoint_with(&pairs, &FockSpace::new(&lattice.field), ops)
}

fn npoint_with(pairs: &OraclePairs, space: &FockSpace, ops: &[OperatorLabel]) -> Result<Complex64> {
    let mut v = vec![ZERO; space.dim];
    v[0] = Complex64::new(1.0, 0.0);
    for (k, op) in ops.iter().enumerate().rev() {
        // Components that could still return to the vacuum after one more
        // raising step would be lost at the cutoff.
        let lost: f64 = v
            .iter()
            .enumerate()
            .filter(|(b, _)| space.saturated(*b) && space.total(*b) < k)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if lost > TRUNCATION_TOL {
            return Err(Error::Truncation(lost));
        }
        let c = pairs.coeffs(*op);
        let mut next = vec![ZERO; space.dim];
        space.apply_field(&c.lower, &c.raise, &v, &mut next);
        v = next;
    }
    Ok(v[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionOptions {
    /// Steps across each window support.
    pub steps: usize,
    /// Largest allowed change in any ρ entry when the step is halved.
    pub halving_tol: f64,
    pub max_refinements: usize,
}

impl Default for EvolutionOptions {
    fn default() -> Self {
        EvolutionOptions {
            steps: 2048,
            halving_tol: 1e-8,
            max_refinements: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub rho: Rho8,
    pub steps: usize,
    /// max |Δρ| between the accepted step and half of it.
    pub halving_change: f64,
    /// max |‖ψ‖² − 1| over all steps.
    pub norm_drift: f64,
}

struct Propagator<'a> {
    lattice: &'a Lattice,
    space: FockSpace,
    coupling: f64,
}

impl Propagator<'_> {
    /// out = −i H_i(t) ψ for the detector `det` alone.
    fn apply(&self, det: usize, t: f64, psi: &[Complex64], out: &mut [Complex64]) {
        out.fill(ZERO);
        let d = &self.lattice.detectors[det];
        let strength = self.coupling * d.window.eval(t);
        if strength == 0.0 {
            return;
        }
        let f = &self.lattice.field;
        let mut lower = Vec::with_capacity(f.modes.len());
        let mut raise = Vec::with_capacity(f.modes.len());
        for &n in &f.modes {
            let (k, w) = (f.wavenumber(n), f.frequency(n));
            let c = Complex64::from_polar(1.0 / (2.0 * w * f.ring_length).sqrt(), k * d.position - w * t);
            lower.push(c);
            raise.push(c.conj());
        }
        let bit = excited_index(DetectorId::from_index(det));
        let dim = self.space.dim;
        for q in 0..8 {
            let (target, phase) = if q & bit == 0 {
                (q | bit, Complex64::from_polar(strength, d.gap * t))
            } else {
                (q & !bit, Complex64::from_polar(strength, -d.gap * t))
            };
            let factor = phase * Complex64::new(0.0, -1.0);
            let scaled_lower: Vec<Complex64> = lower.iter().map(|c| c * factor).collect();
            let scaled_raise: Vec<Complex64> = raise.iter().map(|c| c * factor).collect();
            let (src, dst) = (q * dim, target * dim);
            let mut tmp = vec![ZERO; dim];
            self.space.apply_field(&scaled_lower, &scaled_raise, &psi[src..src + dim], &mut tmp);
            for (o, x) in out[dst..dst + dim].iter_mut().zip(tmp) {
                *o += x;
            }
        }
    }

    /// Fourth-order Magnus step with two Gauss points; the exponential is
    /// applied by its Taylor series.
    fn step(&self, det: usize, t: f64, h: f64, psi: &mut Vec<Complex64>) {
        let t1 = t + h * (0.5 - 3f64.sqrt() / 6.0);
        let t2 = t + h * (0.5 + 3f64.sqrt() / 6.0);
        let n = psi.len();
        let mut a1 = vec![ZERO; n];
        let mut a2 = vec![ZERO; n];
        let mut a12 = vec![ZERO; n];
        let mut a21 = vec![ZERO; n];
        let c = 3f64.sqrt() / 12.0 * h * h;
        let magnus = |v: &[Complex64], out: &mut Vec<Complex64>, a1: &mut Vec<Complex64>, a2: &mut Vec<Complex64>, a12: &mut Vec<Complex64>, a21: &mut Vec<Complex64>| {
            self.apply(det, t1, v, a1);
            self.apply(det, t2, v, a2);
            self.apply(det, t2, a1, a21);
            self.apply(det, t1, a2, a12);
            for i in 0..v.len() {
                out[i] = (a1[i] + a2[i]) * (0.5 * h) + (a21[i] - a12[i]) * c;
            }
        };
        let scale: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut term = psi.clone();
        let mut next = vec![ZERO; n];
        let mut acc = psi.clone();
        for m in 1..40 {
            magnus(&term, &mut next, &mut a1, &mut a2, &mut a12, &mut a21);
            let inv = 1.0 / m as f64;
            let mut size: f64 = 0.0;
            for i in 0..n {
                term[i] = next[i] * inv;
                acc[i] += term[i];
                size = size.max(term[i].norm());
            }
            if size < 1e-18 * scale {
                break;
            }
        }
        *psi = acc;
    }

    /// U_A U_B U_C |0⟩|↓↓↓⟩; each factor is the time-ordered evolution of
    /// one detector alone.
    fn run(&self, steps: usize) -> (Vec<Complex64>, f64) {
        let dim = self.space.dim;
        let mut psi = vec![ZERO; 8 * dim];
        psi[0] = Complex64::new(1.0, 0.0);
        let mut drift: f64 = 0.0;
        for det in (0..3).rev() {
            let w = &self.lattice.detectors[det].window;
            let (a, b) = (-w.half_width(), w.half_width());
            let h = (b - a) / steps as f64;
            for s in 0..steps {
                self.step(det, a + s as f64 * h, h, &mut psi);
                let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
                drift = drift.max((norm - 1.0).abs());
            }
        }
        (psi, drift)
    }

    fn reduce(&self, psi: &[Complex64]) -> Matrix8 {
        let dim = self.space.dim;
        Matrix8::from_fn(|r, c| {
            psi[r * dim..(r + 1) * dim]
                .iter()
                .zip(&psi[c * dim..(c + 1) * dim])
                .map(|(x, y)| x * y.conj())
                .sum()
        })
    }
}

fn max_entry(m: &Matrix8) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Joint evolution of field and detectors with coupling strength
/// `coupling` multiplying every window, followed by the trace over the
/// field. The step is halved until the reduced state stops changing.
pub fn exact_evolution(lattice: &Lattice, coupling: f64, opts: &EvolutionOptions) -> Result<Evolution> {
    lattice.validate()?;
    if !coupling.is_finite() {
        return Err(Error::config("coupling must be finite"));
    }
    let prop = Propagator {
        lattice,
        space: FockSpace::new(&lattice.field),
        coupling,
    };
    let mut steps = opts.steps.max(1);
    let (psi, mut drift) = prop.run(steps);
    let mut coarse = prop.reduce(&psi);
    let mut change = f64::INFINITY;
    for _ in 0..=opts.max_refinements {
        let (psi, d) = prop.run(2 * steps);
        drift = drift.max(d);
        let fine = prop.reduce(&psi);
        change = max_entry(&(fine - coarse));
        if change <= opts.halving_tol {
            return Ok(Evolution {
                rho: Rho8 {
                    matrix: coarse,
                    normalized: true,
                },
                steps,
                halving_change: change,
                norm_drift: drift,
            });
        }
        coarse = fine;
        steps *= 2;
    }
    Err(Error::Trotter(change))
}

/// Second-order density matrix from the lattice amplitudes at the given
/// coupling.
pub fn perturbative_rho(lattice: &Lattice, coupling: f64) -> Result<Rho8> {
    let set = oracle_amplitude_set(lattice)?.scaled(coupling * coupling);
    Ok(assemble_from_pairs(&set)?.rho)
}

/// Residual max|ρ_exact − ρ_2nd| at each coupling.
pub fn order_study(lattice: &Lattice, couplings: &[f64], opts: &EvolutionOptions) -> Result<Vec<(f64, f64)>> {
    couplings
        .par_iter()
        .map(|&g| {
            let exact = exact_evolution(lattice, g, opts)?;
            let pert = perturbative_rho(lattice, g)?;
            Ok((g, max_entry(&(exact.rho.matrix - pert.matrix))))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::parse_string;
    use crate::wick::{density_operator_strings, npoint};

    fn lattice() -> Lattice {
        Lattice::evenly_spaced(LatticeFieldSpec::default(), 4.0, WindowSpec::gaussian_default(1.0, 1.0).unwrap())
    }

    #[test]
    fn gaussian_transform_closed_form() {
        let w = WindowSpec::gaussian_default(1.0, 1.0).unwrap();
        let sigma = 1.0 / 13.0;
        for nu in [0.0, 3.0, 5.4, 20.0] {
            let expect = (2.0 * PI).sqrt() * sigma * (-0.5 * (sigma * nu).powi(2)).exp();
            assert!((window_transform(&w, nu) - expect).norm() < 1e-9);
        }
    }

    #[test]
    fn single_mode_emission() {
        let field = LatticeFieldSpec {
            modes: vec![1],
            ..Default::default()
        };
        let lat = Lattice::evenly_spaced(field, 4.0, WindowSpec::gaussian_default(1.0, 1.0).unwrap());
        let w = lat.field.frequency(1);
        let g = window_transform(&lat.detectors[0].window, 4.0 + w);
        let expect = g.norm_sqr() / (2.0 * w * lat.field.ring_length);
        let ops = parse_string("AA", "-+").unwrap();
        let direct = oracle_npoint(&lat, &ops).unwrap();
        assert!((direct - expect).norm() < 1e-14 * expect);
    }

    #[test]
    fn two_point_agrees_with_pair_function() {
        let lat = lattice();
        let pairs = oracle_pair_function(&lat).unwrap();
        for i in DetectorId::ALL {
            for j in DetectorId::ALL {
                for a in Sign::ALL {
                    for b in Sign::ALL {
                        let (l, r) = (OperatorLabel::new(i, a), OperatorLabel::new(j, b));
                        let direct = oracle_npoint(&lat, &[l, r]).unwrap();
                        assert!((direct - pairs.pair(l, r).unwrap()).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn odd_string_vanishes() {
        let ops = parse_string("ABC", "-+-").unwrap();
        assert!(oracle_npoint(&lattice(), &ops).unwrap().norm() < 1e-14);
    }

    #[test]
    fn wick_matches_direct_products() {
        let lat = lattice();
        let pairs = oracle_pair_function(&lat).unwrap();
        for ops in density_operator_strings() {
            let direct = oracle_npoint(&lat, &ops).unwrap();
            let wick = npoint(&ops, &pairs).unwrap();
            assert!((direct - wick).norm() <= 1e-10 * direct.norm().max(1e-300));
        }
    }

    #[test]
    fn cutoff_overflow_is_detected() {
        let field = LatticeFieldSpec {
            max_occupation: 1,
            ..Default::default()
        };
        let lat = Lattice::evenly_spaced(field, 4.0, WindowSpec::gaussian_default(1.0, 1.0).unwrap());
        let ops = parse_string("ABCABC", "---+++").unwrap();
        assert!(matches!(oracle_npoint(&lat, &ops), Err(Error::Truncation(_))));
    }

    #[test]
    fn theta_real_part_is_half_emission() {
        let lat = lattice();
        let set = oracle_amplitude_set(&lat).unwrap();
        for d in DetectorId::ALL {
            let emission = set.get(d, Sign::Minus, d, Sign::Plus).re;
            assert!((2.0 * set.theta[d.index()].re - emission).abs() < 1e-10 * emission);
        }
    }

    #[test]
    fn invalid_specs() {
        let mut f = LatticeFieldSpec::default();
        f.modes = vec![-2, -1, 0, 1, 2];
        assert!(f.validate().is_err());
        let f = LatticeFieldSpec {
            mass: 0.0,
            ..Default::default()
        };
        assert!(f.validate().is_err());
    }

    #[test]
    fn zero_coupling_evolution() {
        let ev = exact_evolution(&lattice(), 0.0, &EvolutionOptions::default()).unwrap();
        let mut expect = Matrix8::zeros();
        expect[(0, 0)] = Complex64::new(1.0, 0.0);
        assert!(max_entry(&(ev.rho.matrix - expect)) < 1e-15);
    }

    #[test]
    fn leading_order_populations() {
        let lat = lattice();
        let g = 0.05;
        let ev = exact_evolution(&lat, g, &EvolutionOptions::default()).unwrap();
        assert!(ev.norm_drift < 1e-12);
        let set = oracle_amplitude_set(&lat).unwrap();
        for d in DetectorId::ALL {
            let k = excited_index(d);
            let expect = set.get(d, Sign::Minus, d, Sign::Plus).re * g * g;
            let got = ev.rho.matrix[(k, k)].re;
            assert!((got - expect).abs() <= 0.05 * expect, "{d}: {got} vs {expect}");
        }
    }
}
