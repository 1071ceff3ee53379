use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::rho::{hermitian_eigenvalues, Matrix8, Rho8};

use super::states::Vector8;

/// Bipartition, named by the detector that is cut away from the others.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cut {
    AVersusBC,
    BVersusCA,
    CVersusAB,
}

impl Cut {
    pub const ALL: [Cut; 3] = [Cut::AVersusBC, Cut::BVersusCA, Cut::CVersusAB];

    fn mask(self) -> usize {
        match self {
            Cut::AVersusBC => 0b100,
            Cut::BVersusCA => 0b010,
            Cut::CVersusAB => 0b001,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Cut::AVersusBC => "A|BC",
            Cut::BVersusCA => "B|CA",
            Cut::CVersusAB => "C|AB",
        }
    }
}

/// Transposes the qubits selected by the cut.
pub fn partial_transpose(m: &Matrix8, cut: Cut) -> Matrix8 {
    let mask = cut.mask();
    Matrix8::from_fn(|r, c| {
        let r2 = (r & !mask) | (c & mask);
        let c2 = (c & !mask) | (r & mask);
        m[(r2, c2)]
    })
}

/// (‖ρ^{T}‖₁ − 1)/2 across the cut.
pub fn negativity(rho: &Rho8, cut: Cut) -> f64 {
    let pt = partial_transpose(&rho.matrix, cut);
    let trace_norm: f64 = hermitian_eigenvalues(&pt).iter().map(|l| l.abs()).sum();
    ((trace_norm - rho.matrix.trace().re) / 2.0).max(0.0)
}

/// ⟨target|ρ|target⟩.
pub fn fidelity(rho: &Rho8, target: &Vector8) -> f64 {
    let v: Complex64 = (target.adjoint() * rho.matrix * target)[(0, 0)];
    v.re
}
