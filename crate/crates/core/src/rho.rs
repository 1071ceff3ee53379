//! Reduced density matrix of the three detectors in the computational basis
//! |ABC⟩ with ↓ = 0, so basis index b = 4·A + 2·B + C.

use nalgebra::SMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlator::AmplitudeSet;
use crate::error::{Error, Result};
use crate::labels::{DetectorId, Sign};
use crate::wick::{derived_amplitudes, DerivedAmplitudes};

pub type Matrix8 = SMatrix<Complex64, 8, 8>;

pub const TRACE_FLOOR: f64 = 1e-300;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Basis state with only `detector` excited.
pub fn excited_index(detector: DetectorId) -> usize {
    1 << (2 - detector.index())
}

pub fn down_count(index: usize) -> u32 {
    3 - (index as u32 & 7).count_ones()
}

pub fn basis_label(index: usize) -> String {
    (0..3)
        .map(|k| if index >> (2 - k) & 1 == 1 { '↑' } else { '↓' })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rho8 {
    pub matrix: Matrix8,
    pub normalized: bool,
}

/// Serialized form of [`Rho8`]: basis labels and row-major real and
/// imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoRecord {
    pub basis: Vec<String>,
    pub normalized: bool,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&Rho8> for RhoRecord {
    fn from(rho: &Rho8) -> Self {
        RhoRecord {
            basis: (0..8).map(basis_label).collect(),
            normalized: rho.normalized,
            re: rho.real_part(),
            im: rho.imag_part(),
        }
    }
}

impl TryFrom<&RhoRecord> for Rho8 {
    type Error = Error;

    fn try_from(r: &RhoRecord) -> Result<Self> {
        let square = |m: &Vec<Vec<f64>>| m.len() == 8 && m.iter().all(|row| row.len() == 8);
        if !square(&r.re) || !square(&r.im) {
            return Err(Error::config("density matrix must be 8×8 in both `re` and `im`"));
        }
        Ok(Rho8 {
            matrix: Matrix8::from_fn(|i, j| Complex64::new(r.re[i][j], r.im[i][j])),
            normalized: r.normalized,
        })
    }
}

/// Spin-down attenuation factor of the local filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterParam(f64);

impl FilterParam {
    pub fn new(eta: f64) -> Result<Self> {
        if eta > 0.0 && eta <= 1.0 {
            Ok(FilterParam(eta))
        } else {
            Err(Error::domain(format!("filter parameter must lie in (0, 1], got {eta}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Output of [`assemble`]: the symmetrized matrix and the largest
/// |ρ − ρ†| entry before symmetrization.
#[derive(Debug, Clone)]
pub struct Assembly {
    pub rho: Rho8,
    pub asymmetry: f64,
}

/// Lays out the unnormalized second-order density matrix.
pub fn assemble(base: &AmplitudeSet, derived: &DerivedAmplitudes) -> Result<Assembly> {
    if base.provenance.fingerprint != derived.fingerprint {
        return Err(Error::config(
            "pair amplitudes and higher-point amplitudes come from different configurations",
        ));
    }
    use DetectorId::*;
    use Sign::*;
    let mut m = Matrix8::zeros();
    m[(0, 0)] = Complex64::new(1.0 - base.norm_term, 0.0);

    // Single excitations: ⟨Φ_n^- Φ_m^+⟩ at (m, n).
    for row in DetectorId::ALL {
        for col in DetectorId::ALL {
            m[(excited_index(row), excited_index(col))] = base.get(col, Minus, row, Plus);
        }
    }

    // Vacuum against pair excitations.
    for (i, j) in [(B, C), (C, A), (A, B)] {
        let k = excited_index(i) | excited_index(j);
        m[(0, k)] = -base.get(j, Minus, i, Minus);
        m[(k, 0)] = -base.get(i, Plus, j, Plus);
    }

    let mut place = |r: usize, c: usize, ds: &str, ss: &str| -> Result<()> {
        let v = derived.get(ds, ss)?;
        m[(r, c)] = v;
        if r != c {
            m[(c, r)] = v.conj();
        }
        Ok(())
    };
    place(3, 3, "BCBC", "--++")?;
    place(3, 5, "CABC", "--++")?;
    place(3, 6, "ABBC", "--++")?;
    place(5, 5, "CACA", "--++")?;
    place(5, 6, "ABCA", "--++")?;
    place(6, 6, "ABAB", "--++")?;
    place(1, 7, "ABCC", "---+")?;
    place(2, 7, "ABCB", "---+")?;
    place(4, 7, "ABCA", "---+")?;
    place(7, 7, "ABCABC", "---+++")?;

    let asymmetry = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let matrix = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(Assembly {
        rho: Rho8 {
            matrix,
            normalized: false,
        },
        asymmetry,
    })
}

/// Amplitudes → Wick expansion → assembled matrix.
pub fn assemble_from_pairs(base: &AmplitudeSet) -> Result<Assembly> {
    assemble(base, &derived_amplitudes(base)?)
}

/// D·ρ·D with D = diag(η^{#↓}).
pub fn filter(rho: &Rho8, eta: FilterParam) -> Rho8 {
    let d: Vec<f64> = (0..8).map(|b| eta.0.powi(down_count(b) as i32)).collect();
    Rho8 {
        matrix: Matrix8::from_fn(|r, c| rho.matrix[(r, c)] * (d[r] * d[c])),
        normalized: false,
    }
}

pub fn normalize(rho: &Rho8) -> Result<Rho8> {
    let tr = rho.matrix.trace().re;
    if !(tr > TRACE_FLOOR) {
        return Err(Error::Degenerate(tr));
    }
    Ok(Rho8 {
        matrix: rho.matrix / Complex64::new(tr, 0.0),
        normalized: true,
    })
}

/// Amplitude set in which only the B–C and C–A exchange amplitudes (and
/// their conjugate partners) are nonzero, all equal to `s`.
pub fn dominance_amplitudes(s: f64) -> AmplitudeSet {
    use DetectorId::*;
    use Sign::*;
    let mut set = AmplitudeSet::zero(format!("dominance:{s:e}"));
    let v = Complex64::new(s, 0.0);
    for (i, j) in [(B, C), (C, B), (C, A), (A, C)] {
        set.set(i, Plus, j, Plus, v);
        set.set(i, Minus, j, Minus, v);
    }
    set
}

/// Exchange-dominated limit filtered with η = √s and normalized.
pub fn dominance_limit(s: f64) -> Result<(Rho8, FilterParam)> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::domain(format!("dominance scale must lie in (0, 1], got {s}")));
    }
    let eta = FilterParam::new(s.sqrt())?;
    let raw = assemble_from_pairs(&dominance_amplitudes(s))?.rho;
    Ok((normalize(&filter(&raw, eta))?, eta))
}

/// The pure state reached in the exchange-dominated limit,
/// (|↓↓↓⟩ − |↓↑↑⟩ − |↑↓↑⟩)/√3, as a density matrix.
pub fn dominance_target() -> Matrix8 {
    let mut v = nalgebra::SVector::<Complex64, 8>::zeros();
    v[0] = ONE;
    v[3] = -ONE;
    v[5] = -ONE;
    let v = v / Complex64::new(3f64.sqrt(), 0.0);
    v * v.adjoint()
}

pub fn w_vector() -> nalgebra::SVector<Complex64, 8> {
    let mut v = nalgebra::SVector::<Complex64, 8>::zeros();
    let a = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    v[1] = a;
    v[2] = a;
    v[4] = a;
    v
}

/// Z ⊗ Z ⊗ X: phase −1 on ↑ for A and B, bit flip on C.
pub fn w_unitary() -> Matrix8 {
    Matrix8::from_fn(|r, c| {
        if r != (c ^ 1) {
            return ZERO;
        }
        let sign = if (c >> 2) & 1 == 1 { -1.0 } else { 1.0 } * if (c >> 1) & 1 == 1 { -1.0 } else { 1.0 };
        Complex64::new(sign, 0.0)
    })
}

/// Applies the fixed local unitary and returns ⟨W|ρ′|W⟩.
pub fn to_w_state(rho: &Rho8) -> (Rho8, f64) {
    let u = w_unitary();
    let out = u * rho.matrix * u.adjoint();
    let w = w_vector();
    let fidelity = (w.adjoint() * out * w)[(0, 0)].re;
    (
        Rho8 {
            matrix: out,
            normalized: rho.normalized,
        },
        fidelity,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub hermiticity_residual: f64,
    pub trace_re: f64,
    pub trace_im: f64,
    /// Eigenvalues of the Hermitian part, ascending.
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub purity: f64,
}

pub fn hermitian_eigenvalues(m: &Matrix8) -> Vec<f64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn validate(rho: &Rho8) -> Report {
    let m = &rho.matrix;
    let eigenvalues = hermitian_eigenvalues(m);
    let tr = m.trace();
    Report {
        hermiticity_residual: (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max),
        trace_re: tr.re,
        trace_im: tr.im,
        min_eigenvalue: eigenvalues[0],
        eigenvalues,
        purity: (m * m).trace().re,
    }
}

/// Clips negative eigenvalues and renormalizes.
pub fn project_psd(rho: &Rho8) -> Result<Rho8> {
    let h = (rho.matrix + rho.matrix.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let clipped = eig.eigenvalues.map(|l| Complex64::new(l.max(0.0), 0.0));
    let v = &eig.eigenvectors;
    let m = v * Matrix8::from_diagonal(&clipped) * v.adjoint();
    normalize(&Rho8 {
        matrix: m,
        normalized: false,
    })
}

/// Default attenuation for a physical set: η² = √(d_BC^{++}·d_CA^{++}).
/// The flag is true when the two exchange amplitudes differ.
pub fn default_filter(base: &AmplitudeSet) -> Result<(FilterParam, bool)> {
    use DetectorId::*;
    use Sign::*;
    let bc = base.get(B, Plus, C, Plus).norm();
    let ca = base.get(C, Plus, A, Plus).norm();
    let eta_sq = (bc * ca).sqrt();
    let differ = (bc - ca).abs() > 1e-9 * bc.max(ca);
    Ok((FilterParam::new(eta_sq.sqrt())?, differ))
}

impl Rho8 {
    pub fn from_matrix(matrix: Matrix8) -> Self {
        Rho8 {
            matrix,
            normalized: false,
        }
    }

    pub fn real_part(&self) -> Vec<Vec<f64>> {
        (0..8).map(|r| (0..8).map(|c| self.matrix[(r, c)].re).collect()).collect()
    }

    pub fn imag_part(&self) -> Vec<Vec<f64>> {
        (0..8).map(|r| (0..8).map(|c| self.matrix[(r, c)].im).collect()).collect()
    }

    /// Aligned plain-text table of real and imaginary parts.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for (title, part) in [("re", self.real_part()), ("im", self.imag_part())] {
            out.push_str(&format!("{title:>5}"));
            for c in 0..8 {
                out.push_str(&format!(" {:>13}", basis_label(c)));
            }
            out.push('\n');
            for (r, row) in part.iter().enumerate() {
                out.push_str(&format!("{:>5}", basis_label(r)));
                for v in row {
                    out.push_str(&format!(" {v:>13.6e}"));
                }
                out.push('\n');
            }
        }
        out
    }
}
