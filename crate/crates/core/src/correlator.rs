//! Vacuum Wightman function of the free Klein–Gordon field in 3+1
//! dimensions and the second-order smeared amplitudes
//! d_ij^{αβ} = ⟨0|Φ_i^α Φ_j^β|0⟩ built from it.
//!
//! The double time integral is taken in relative time τ = t − t′, because
//! the correlator depends on τ only:
//!
//!   d = ∫ dτ W(L, τ) g(τ),   g(τ) = ∫ dt′ u_i(τ + t′) u_j(t′),
//!
//! with u_i(t) = ε_i(t) e^{α iΩ_i t}. The outer integral is adaptive; the
//! inner one is a composite Gauss–Legendre rule sized to the oscillation
//! of the integrand. For coincident points the 1/(τ − iε)² singularity is
//! subtracted analytically through first order in τ.
//!
//! Each integral is evaluated on a ladder of regulators ε and extrapolated
//! polynomially to ε → 0.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel::bessel_k1;
use crate::error::{Error, Result};
use crate::labels::{DetectorId, OperatorLabel, Sign};
use crate::quadrature::{adaptive, extrapolate_to_zero, AdaptiveOptions, GaussLegendre};
use crate::windows::WindowSpec;

/// Regulator ladder in units of the longest window duration.
pub const DEFAULT_LADDER_FRACTIONS: [f64; 4] = [1e-3, 5e-4, 2.5e-4, 1.25e-4];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    #[serde(default)]
    pub mass: f64,
    /// iε used by point evaluations of the Wightman function.
    #[serde(default)]
    pub regulator: f64,
    /// Strictly decreasing regulators used for extrapolation.
    pub ladder: Vec<f64>,
    /// Relative tolerance of the adaptive quadrature.
    #[serde(default = "default_quadrature_tol")]
    pub quadrature_tol: f64,
}

fn default_quadrature_tol() -> f64 {
    1e-10
}

impl FieldSpec {
    /// Massless field with the default ladder scaled to `duration`.
    pub fn massless(duration: f64) -> Self {
        FieldSpec {
            mass: 0.0,
            regulator: DEFAULT_LADDER_FRACTIONS[DEFAULT_LADDER_FRACTIONS.len() - 1] * duration,
            ladder: DEFAULT_LADDER_FRACTIONS.iter().map(|f| f * duration).collect(),
            quadrature_tol: default_quadrature_tol(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass >= 0.0 && self.mass.is_finite()) {
            return Err(Error::config(format!("field mass must be >= 0, got {}", self.mass)));
        }
        if !(self.regulator >= 0.0 && self.regulator.is_finite()) {
            return Err(Error::config("regulator must be >= 0"));
        }
        if self.ladder.is_empty() {
            return Err(Error::config("regulator ladder is empty"));
        }
        if self.ladder.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(Error::config("ladder regulators must be positive"));
        }
        if self.ladder.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::config("regulator ladder must be strictly decreasing"));
        }
        if !(self.quadrature_tol > 0.0) {
            return Err(Error::config("quadrature tolerance must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec {
    pub id: DetectorId,
    pub position: [f64; 3],
    /// Energy gap Ω.
    pub gap: f64,
    pub window: WindowSpec,
}

impl DetectorSpec {
    pub fn distance(&self, other: &DetectorSpec) -> f64 {
        self.position
            .iter()
            .zip(&other.position)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gap.is_finite() {
            return Err(Error::config(format!("detector {} gap must be finite", self.id)));
        }
        if self.position.iter().any(|x| !x.is_finite()) {
            return Err(Error::config(format!("detector {} position must be finite", self.id)));
        }
        self.window.validate()
    }

    /// u(t) = ε(t) e^{s iΩt}
    fn smeared(&self, sign: Sign, t: f64) -> Complex64 {
        let w = self.window.eval(t);
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(w, sign.value() * self.gap * t)
    }
}

/// Three detectors at the vertices of an equilateral triangle of side
/// `separation`, sharing gap and window.
pub fn equilateral(separation: f64, gap: f64, window: &WindowSpec) -> [DetectorSpec; 3] {
    let h = separation * 3f64.sqrt() / 2.0;
    let pos = [
        [0.0, 0.0, 0.0],
        [separation, 0.0, 0.0],
        [0.5 * separation, h, 0.0],
    ];
    DetectorId::ALL.map(|id| DetectorSpec {
        id,
        position: pos[id.index()],
        gap,
        window: window.clone(),
    })
}

fn wightman_regulated(mass: f64, r: f64, dt: f64, eps: f64) -> Complex64 {
    let shifted = Complex64::new(dt, -eps);
    let s2 = Complex64::new(r * r, 0.0) - shifted * shifted;
    if mass == 0.0 {
        s2.inv() / (4.0 * PI * PI)
    } else {
        let s = s2.sqrt();
        bessel_k1(s * mass) * mass / (s * 4.0 * PI * PI)
    }
}

/// Vacuum Wightman function ⟨0|φ(x, t)φ(y, t′)|0⟩ at |x − y| = r,
/// t − t′ = dt, with the field's iε regulator.
pub fn wightman(field: &FieldSpec, r: f64, dt: f64) -> Result<Complex64> {
    if !(field.mass >= 0.0) {
        return Err(Error::config("field mass must be >= 0"));
    }
    if !(r >= 0.0) {
        return Err(Error::config(format!("distance must be >= 0, got {r}")));
    }
    if field.regulator == 0.0 && r == dt.abs() {
        return Err(Error::domain(
            "Wightman function is singular on the light cone without a regulator",
        ));
    }
    Ok(wightman_regulated(field.mass, r, dt, field.regulator))
}

/// The smeared pair integral for one regulator.
struct PairIntegrand<'a> {
    left: &'a DetectorSpec,
    left_sign: Sign,
    right: &'a DetectorSpec,
    right_sign: Sign,
    inner_panels: usize,
}

impl<'a> PairIntegrand<'a> {
    fn new(left: &'a DetectorSpec, left_sign: Sign, right: &'a DetectorSpec, right_sign: Sign) -> Self {
        let mut me = PairIntegrand {
            left,
            left_sign,
            right,
            right_sign,
            inner_panels: 1,
        };
        me.inner_panels = me.calibrate_inner();
        me
    }

    fn tau_extent(&self) -> f64 {
        self.left.window.half_width() + self.right.window.half_width()
    }

    /// g(τ) = ∫ dt′ u_left(τ + t′) u_right(t′)
    fn overlap(&self, tau: f64, panels: usize) -> Complex64 {
        let hl = self.left.window.half_width();
        let hr = self.right.window.half_width();
        let lo = (-hr).max(-hl - tau);
        let hi = hr.min(hl - tau);
        if hi <= lo {
            return Complex64::new(0.0, 0.0);
        }
        // shrink panel count with the overlap length
        let frac = (hi - lo) / (2.0 * hr.min(hl));
        let n = ((panels as f64 * frac).ceil() as usize).clamp(1, panels);
        GaussLegendre::order16().composite(lo, hi, n, |tp| {
            self.left.smeared(self.left_sign, tau + tp) * self.right.smeared(self.right_sign, tp)
        })
    }

    fn g(&self, tau: f64) -> Complex64 {
        self.overlap(tau, self.inner_panels)
    }

    /// Picks the inner panel count: at least 8 nodes per local period, then
    /// doubled until probes at several τ agree to 1e-13 of their scale.
    fn calibrate_inner(&self) -> usize {
        let omega = self.left.gap.abs()
            + self.right.gap.abs()
            + self.left.window.frequency_scale()
            + self.right.window.frequency_scale();
        let len = 2.0 * self.left.window.half_width().min(self.right.window.half_width());
        let period = 2.0 * PI / omega.max(1e-300);
        // 16 nodes per panel, 8 per period -> panel spans two periods
        let mut n = ((len / (2.0 * period)).ceil() as usize).clamp(4, 1024);
        let ext = self.tau_extent();
        let probes = [0.0, 0.013 * ext, -0.21 * ext, 0.37 * ext, -0.55 * ext];
        while n < 1024 {
            let coarse: Vec<Complex64> = probes.iter().map(|&t| self.overlap(t, n)).collect();
            let fine: Vec<Complex64> = probes.iter().map(|&t| self.overlap(t, 2 * n)).collect();
            let scale = fine.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let diff = coarse
                .iter()
                .zip(&fine)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if diff <= 1e-13 * scale.max(1e-300) {
                break;
            }
            n *= 2;
        }
        n
    }

    fn integrate(&self, mass: f64, r: f64, eps: f64, lower: f64, opts: AdaptiveOptions) -> Result<(Complex64, f64)> {
        let upper = self.tau_extent();
        if r > 0.0 {
            let est = adaptive(lower, upper, opts, |tau| {
                self.g(tau) * wightman_regulated(mass, r, tau, eps)
            })?;
            return Ok((est.value, est.error));
        }
        // Coincident points: W₀ = -1/(4π²(τ - iε)²). Subtract g(0) + g′(0)τ
        // against W₀ and integrate those pieces in closed form.
        let ext = self.tau_extent();
        let c0 = self.g(0.0);
        let d = 1e-3 * ext;
        let c1 = ((self.g(d) - self.g(-d)) * 8.0 - (self.g(2.0 * d) - self.g(-2.0 * d))) / (12.0 * d);
        let w0 = |tau: f64| -> Complex64 {
            let z = Complex64::new(tau, -eps);
            -(z * z).inv() / (4.0 * PI * PI)
        };
        let est = adaptive(lower, upper, opts, |tau| {
            let g = self.g(tau);
            let smooth = g - c0 - c1 * tau;
            let mut v = smooth * w0(tau);
            if mass > 0.0 {
                v += (c0 + c1 * tau) * (wightman_regulated(mass, 0.0, tau, eps) - w0(tau));
            }
            v
        })?;
        let za = Complex64::new(lower, -eps);
        let zb = Complex64::new(upper, -eps);
        let ie = Complex64::new(0.0, eps);
        let int_inv_sq = -zb.inv() + za.inv();
        let int_tau_inv_sq = (zb.ln() - ie / zb) - (za.ln() - ie / za);
        let analytic = -(c0 * int_inv_sq + c1 * int_tau_inv_sq) / (4.0 * PI * PI);
        Ok((est.value + analytic, est.error))
    }
}

fn adaptive_options(field: &FieldSpec) -> AdaptiveOptions {
    AdaptiveOptions {
        rel_tol: field.quadrature_tol,
        ..Default::default()
    }
}

/// One extrapolated amplitude with its error budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrapolated {
    pub value: Complex64,
    /// Summed quadrature error estimate over the ladder.
    pub quadrature_error: f64,
    /// |extrapolation over the full ladder − extrapolation without the
    /// smallest regulator|.
    pub extrapolation_residual: f64,
    /// Value at the smallest regulator.
    pub finest: Complex64,
}

fn extrapolate(ladder: &[f64], values: &[(Complex64, f64)]) -> Extrapolated {
    let v: Vec<Complex64> = values.iter().map(|(z, _)| *z).collect();
    let full = extrapolate_to_zero(ladder, &v);
    let reduced = if v.len() > 1 {
        extrapolate_to_zero(&ladder[..v.len() - 1], &v[..v.len() - 1])
    } else {
        full
    };
    Extrapolated {
        value: full,
        quadrature_error: values.iter().map(|(_, e)| e).sum(),
        extrapolation_residual: (full - reduced).norm(),
        finest: v[v.len() - 1],
    }
}

fn pair_on_ladder(
    field: &FieldSpec,
    det_i: &DetectorSpec,
    alpha: Sign,
    det_j: &DetectorSpec,
    beta: Sign,
    lower_half: bool,
) -> Result<Vec<(Complex64, f64)>> {
    field.validate()?;
    det_i.validate()?;
    det_j.validate()?;
    let r = if det_i.id == det_j.id { 0.0 } else { det_i.distance(det_j) };
    let integrand = PairIntegrand::new(det_i, alpha, det_j, beta);
    let lower = if lower_half { 0.0 } else { -integrand.tau_extent() };
    let opts = adaptive_options(field);
    field
        .ladder
        .iter()
        .map(|&eps| integrand.integrate(field.mass, r, eps, lower, opts))
        .collect()
}

/// d_ij^{αβ} = ∫∫ dt dt′ ε_i(t) ε_j(t′) e^{α iΩ_i t} e^{β iΩ_j t′} W(L_ij, t − t′),
/// extrapolated to vanishing regulator. The left operator is `det_i`.
pub fn smeared_pair(
    field: &FieldSpec,
    det_i: &DetectorSpec,
    alpha: Sign,
    det_j: &DetectorSpec,
    beta: Sign,
) -> Result<Extrapolated> {
    let vals = pair_on_ladder(field, det_i, alpha, det_j, beta, false)?;
    Ok(extrapolate(&field.ladder, &vals))
}

/// Θ_i = ∫∫_{t > t′} dt dt′ ε_i(t) ε_i(t′) e^{-iΩ_i(t − t′)} W(0, t − t′).
///
/// The real part is extrapolated. The imaginary part is the detector's
/// regulator-divergent level shift (it grows like 1/ε), so the value at the
/// smallest regulator is reported instead.
pub fn theta_term(field: &FieldSpec, det: &DetectorSpec) -> Result<Extrapolated> {
    let vals = pair_on_ladder(field, det, Sign::Minus, det, Sign::Plus, true)?;
    Ok(theta_from_ladder(&field.ladder, &vals))
}

fn theta_from_ladder(ladder: &[f64], vals: &[(Complex64, f64)]) -> Extrapolated {
    let re: Vec<(Complex64, f64)> = vals.iter().map(|(z, e)| (Complex64::new(z.re, 0.0), *e)).collect();
    let mut out = extrapolate(ladder, &re);
    out.value.im = vals[vals.len() - 1].0.im;
    out.finest = vals[vals.len() - 1].0;
    out
}

/// Error budget of an amplitude set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Identifies the detector/field configuration the set came from.
    pub fingerprint: String,
    pub quadrature_tol: f64,
    /// Largest quadrature error estimate relative to the entry magnitude.
    pub max_quadrature_error: f64,
    /// Largest extrapolation residual relative to the entry magnitude.
    pub max_extrapolation_residual: f64,
    /// Convention for C.
    pub norm_convention: String,
}

/// All ordered second-order amplitudes d_ij^{αβ} for i, j ∈ {A, B, C},
/// the Θ_i terms, and C = 2 Re ΣΘ_i.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeSet {
    /// Indexed `[i][α][j][β]` with `Sign::Minus` = 0.
    pub pairs: [[[[Complex64; 2]; 3]; 2]; 3],
    pub theta: [Complex64; 3],
    pub norm_term: f64,
    pub provenance: Provenance,
}

pub const NORM_CONVENTION: &str = "C = 2 Re sum_i Theta_i";

impl AmplitudeSet {
    pub fn zero(fingerprint: impl Into<String>) -> Self {
        AmplitudeSet {
            pairs: [[[[Complex64::new(0.0, 0.0); 2]; 3]; 2]; 3],
            theta: [Complex64::new(0.0, 0.0); 3],
            norm_term: 0.0,
            provenance: Provenance {
                fingerprint: fingerprint.into(),
                quadrature_tol: 0.0,
                max_quadrature_error: 0.0,
                max_extrapolation_residual: 0.0,
                norm_convention: NORM_CONVENTION.to_string(),
            },
        }
    }

    pub fn get(&self, i: DetectorId, alpha: Sign, j: DetectorId, beta: Sign) -> Complex64 {
        self.pairs[i.index()][alpha.index()][j.index()][beta.index()]
    }

    pub fn set(&mut self, i: DetectorId, alpha: Sign, j: DetectorId, beta: Sign, v: Complex64) {
        self.pairs[i.index()][alpha.index()][j.index()][beta.index()] = v;
    }

    pub fn pair(&self, left: OperatorLabel, right: OperatorLabel) -> Complex64 {
        self.get(left.detector, left.sign, right.detector, right.sign)
    }

    /// Key such as `d_AB_pp`.
    pub fn key(i: DetectorId, alpha: Sign, j: DetectorId, beta: Sign) -> String {
        format!("d_{}{}_{}{}", i, j, alpha.key(), beta.key())
    }

    /// Entries in a fixed order: i, j, α, β, then `C`.
    pub fn entries(&self) -> Vec<(String, Complex64)> {
        let mut out = Vec::with_capacity(37);
        for i in DetectorId::ALL {
            for j in DetectorId::ALL {
                for a in Sign::ALL {
                    for b in Sign::ALL {
                        out.push((Self::key(i, a, j, b), self.get(i, a, j, b)));
                    }
                }
            }
        }
        out
    }

    /// Multiplies every amplitude by `factor`; C and Θ scale with it.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for v in out.pairs.iter_mut().flatten().flatten().flatten() {
            *v *= factor;
        }
        for t in &mut out.theta {
            *t *= factor;
        }
        out.norm_term *= factor;
        out
    }
}

/// Checks pairwise causal disconnection: L_ij > max(T_i, T_j).
pub fn check_causality(detectors: &[DetectorSpec; 3]) -> Result<()> {
    for (k, d) in detectors.iter().enumerate() {
        if d.id != DetectorId::from_index(k) {
            return Err(Error::config("detectors must be given in the order A, B, C"));
        }
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            let (a, b) = (&detectors[i], &detectors[j]);
            let l = a.distance(b);
            let t = a.window.duration.max(b.window.duration);
            if !(l > t) {
                return Err(Error::config(format!(
                    "detectors {} and {} are causally connected: L = {l} <= T = {t}",
                    a.id, b.id
                )));
            }
        }
    }
    Ok(())
}

pub fn fingerprint(field: &FieldSpec, detectors: &[DetectorSpec; 3]) -> String {
    serde_json::to_string(&(field, detectors)).unwrap_or_default()
}

/// Evaluates every ordered pair amplitude and the Θ terms. Integrals run in
/// parallel; each is independent, so results do not depend on scheduling.
pub fn amplitude_set(field: &FieldSpec, detectors: &[DetectorSpec; 3]) -> Result<AmplitudeSet> {
    field.validate()?;
    for d in detectors {
        d.validate()?;
    }
    check_causality(detectors)?;

    #[derive(Clone, Copy)]
    enum Task {
        Pair(usize, Sign, usize, Sign),
        Theta(usize),
    }
    let mut tasks = Vec::with_capacity(39);
    for i in 0..3 {
        for a in Sign::ALL {
            for j in 0..3 {
                for b in Sign::ALL {
                    tasks.push(Task::Pair(i, a, j, b));
                }
            }
        }
    }
    for i in 0..3 {
        tasks.push(Task::Theta(i));
    }

    let results: Vec<Result<Extrapolated>> = tasks
        .par_iter()
        .map(|task| match *task {
            Task::Pair(i, a, j, b) => smeared_pair(field, &detectors[i], a, &detectors[j], b),
            Task::Theta(i) => theta_term(field, &detectors[i]),
        })
        .collect();

    let mut set = AmplitudeSet::zero(fingerprint(field, detectors));
    set.provenance.quadrature_tol = field.quadrature_tol;
    let mut max_q: f64 = 0.0;
    let mut max_x: f64 = 0.0;
    for (task, res) in tasks.iter().zip(results) {
        let ex = res?;
        let scale = ex.value.norm().max(1e-300);
        max_q = max_q.max(ex.quadrature_error / scale);
        match *task {
            Task::Pair(i, a, j, b) => {
                max_x = max_x.max(ex.extrapolation_residual / scale);
                set.pairs[i][a.index()][j][b.index()] = ex.value;
            }
            Task::Theta(i) => {
                set.theta[i] = ex.value;
            }
        }
    }
    set.norm_term = 2.0 * set.theta.iter().map(|t| t.re).sum::<f64>();
    set.provenance.max_quadrature_error = max_q;
    set.provenance.max_extrapolation_residual = max_x;
    Ok(set)
}
