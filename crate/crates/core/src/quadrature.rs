//! Gauss–Legendre rules, globally adaptive dyadic refinement and
//! polynomial extrapolation to a vanishing regulator.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes and weights of an `n`-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Shared 16-point rule.
    pub fn order16() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(16))
    }

    /// Shared 24-point rule.
    pub fn order24() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(24))
    }

    pub fn integrate<F>(&self, a: f64, b: f64, mut f: F) -> Complex64
    where
        F: FnMut(f64) -> Complex64,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(mid + half * x) * *w;
        }
        acc * half
    }

    pub fn integrate_real<F>(&self, a: f64, b: f64, mut f: F) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| f(mid + half * x) * w)
            .sum::<f64>()
            * half
    }

    /// Composite rule over `panels` equal sub-intervals of [a, b].
    pub fn composite<F>(&self, a: f64, b: f64, panels: usize, mut f: F) -> Complex64
    where
        F: FnMut(f64) -> Complex64,
    {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + k as f64 * h;
                self.integrate(lo, lo + h, &mut f)
            })
            .sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Controls for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Number of equal panels the interval starts with.
    pub initial_panels: usize,
    /// Deepest dyadic level a panel may be split to.
    pub max_depth: u32,
    pub max_panels: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            initial_panels: 8,
            max_depth: 48,
            max_panels: 20_000,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

struct Panel {
    a: f64,
    b: f64,
    depth: u32,
    value: Complex64,
    error: f64,
}

/// Globally adaptive Gauss–Legendre integration of a complex integrand.
///
/// Every panel carries the estimate from its two halves and the difference
/// to the single-panel rule as error. The panel with the largest error is
/// bisected until the summed error falls below tolerance. Ties resolve to
/// the leftmost panel so the refinement sequence is deterministic.
pub fn adaptive<F>(a: f64, b: f64, opts: AdaptiveOptions, f: F) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    let rule = GaussLegendre::order16();
    if a == b {
        return Ok(Estimate {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            panels: 0,
        });
    }
    let make_panel = |lo: f64, hi: f64, depth: u32| -> Panel {
        let whole = rule.integrate(lo, hi, &f);
        let mid = 0.5 * (lo + hi);
        let halves = rule.integrate(lo, mid, &f) + rule.integrate(mid, hi, &f);
        Panel {
            a: lo,
            b: hi,
            depth,
            value: halves,
            error: (halves - whole).norm(),
        }
    };

    let n0 = opts.initial_panels.max(1);
    let h = (b - a) / n0 as f64;
    let mut panels: Vec<Panel> = (0..n0)
        .map(|k| {
            let lo = a + k as f64 * h;
            let hi = if k + 1 == n0 { b } else { lo + h };
            make_panel(lo, hi, 0)
        })
        .collect();

    let mut previous = Complex64::new(f64::NAN, f64::NAN);
    loop {
        let total: Complex64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if !total.re.is_finite() || !total.im.is_finite() {
            return Err(Error::Quadrature {
                last: format!("{total}"),
                previous: format!("{previous}"),
            });
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
            return Ok(Estimate {
                value: total,
                error: err,
                panels: panels.len(),
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.depth < opts.max_depth)
            .fold((usize::MAX, -1.0), |(bi, be), (i, p)| {
                if p.error > be {
                    (i, p.error)
                } else {
                    (bi, be)
                }
            });
        if worst == usize::MAX || panels.len() >= opts.max_panels {
            return Err(Error::Quadrature {
                last: format!("{total}"),
                previous: format!("{previous}"),
            });
        }
        previous = total;
        let p = panels.remove(worst);
        let mid = 0.5 * (p.a + p.b);
        let left = make_panel(p.a, mid, p.depth + 1);
        let right = make_panel(mid, p.b, p.depth + 1);
        panels.insert(worst, right);
        panels.insert(worst, left);
    }
}

/// Evaluates at zero the interpolating polynomial through `(h_k, v_k)`
/// (Neville's scheme). With a halving ladder this is repeated Richardson
/// extrapolation eliminating the error terms h, h², …
pub fn extrapolate_to_zero(h: &[f64], v: &[Complex64]) -> Complex64 {
    assert_eq!(h.len(), v.len());
    assert!(!h.is_empty());
    let mut p = v.to_vec();
    let n = h.len();
    for m in 1..n {
        for i in 0..n - m {
            let (hi, hj) = (h[i], h[i + m]);
            p[i] = (p[i + 1] * hi - p[i] * hj) / (hi - hj);
        }
    }
    p[0]
}
