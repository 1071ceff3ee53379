//! Modified Bessel function K₁ for complex arguments with Re z ≥ 0.

use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub fn bessel_k1(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r <= 2.0 {
        series(z)
    } else if z.re >= 0.5 * r {
        integral(z)
    } else if r >= 12.0 {
        asymptotic(z)
    } else {
        series(z)
    }
}

fn series(z: Complex64) -> Complex64 {
    let q = z * z * 0.25;
    let half = z * 0.5;
    // I₁(z) and the ψ-weighted sum share the same (z²/4)^k / (k!(k+1)!) terms.
    let mut term = Complex64::new(1.0, 0.0);
    let mut i1 = Complex64::new(0.0, 0.0);
    let mut psi_sum = Complex64::new(0.0, 0.0);
    let mut harmonic = 0.0; // H_k
    for k in 0..200usize {
        if k > 0 {
            harmonic += 1.0 / k as f64;
            term *= q / ((k * (k + 1)) as f64);
        }
        let psi = (-EULER_GAMMA + harmonic) + (-EULER_GAMMA + harmonic + 1.0 / (k + 1) as f64);
        i1 += term;
        psi_sum += term * psi;
        if term.norm() < 1e-18 * i1.norm().max(1e-300) && k > 2 {
            break;
        }
    }
    let i1 = i1 * half;
    z.inv() + (half).ln() * i1 - z * 0.25 * psi_sum
}

fn integral(z: Complex64) -> Complex64 {
    // K₁(z) = ∫₀^∞ exp(-z cosh u) cosh u du; trapezoid is spectrally
    // accurate for this doubly-exponentially decaying integrand.
    let h = 0.02;
    let mut acc = 0.5 * (-z).exp();
    let mut k = 1;
    loop {
        let u = k as f64 * h;
        let c = u.cosh();
        if z.re * c > 745.0 {
            break;
        }
        acc += (-z * c).exp() * c;
        k += 1;
    }
    acc * h
}

fn asymptotic(z: Complex64) -> Complex64 {
    let pref = (std::f64::consts::PI / (2.0 * z)).sqrt() * (-z).exp();
    let mut sum = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let a = (4.0 - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf);
        let next = term * a / z;
        if next.norm() >= last || next.norm() < 1e-18 {
            break;
        }
        last = next.norm();
        term = next;
        sum += term;
    }
    pref * sum
}
