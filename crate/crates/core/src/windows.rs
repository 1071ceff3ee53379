//! Coupling windows ε(t) supported on [-T/2, T/2].
//!
//! Every family is evaluated at |t|, so evenness holds bit-for-bit. Each
//! window also has a complex generating function whose phase derivative is
//! the local frequency; for non-oscillatory families it is the real window
//! itself.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gaussian width used when none is given, as a fraction of the duration.
/// At ±T/2 the truncated tail is exp(-84.5/4) ≈ 6.8e-10 of the peak.
pub const DEFAULT_SIGMA_FRACTION: f64 = 1.0 / 13.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum WindowFamily {
    Gaussian {
        sigma: f64,
    },
    RaisedCosine,
    Superoscillatory {
        band: u32,
        boost: f64,
    },
    /// Samples on a uniform grid over [0, T/2], linearly interpolated and
    /// mirrored to negative times. The optional quadrature samples form the
    /// odd imaginary part of the generating function.
    Tabulated {
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        quadrature: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub amplitude: f64,
    pub duration: f64,
    #[serde(flatten)]
    pub family: WindowFamily,
}

impl WindowSpec {
    pub fn gaussian(amplitude: f64, duration: f64, sigma: f64) -> Result<Self> {
        let spec = WindowSpec {
            amplitude,
            duration,
            family: WindowFamily::Gaussian { sigma },
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Gaussian with σ = T/13.
    pub fn gaussian_default(amplitude: f64, duration: f64) -> Result<Self> {
        Self::gaussian(amplitude, duration, duration * DEFAULT_SIGMA_FRACTION)
    }

    pub fn raised_cosine(amplitude: f64, duration: f64) -> Result<Self> {
        let spec = WindowSpec {
            amplitude,
            duration,
            family: WindowFamily::RaisedCosine,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn tabulated(
        amplitude: f64,
        duration: f64,
        values: Vec<f64>,
        quadrature: Option<Vec<f64>>,
    ) -> Result<Self> {
        let spec = WindowSpec {
            amplitude,
            duration,
            family: WindowFamily::Tabulated { values, quadrature },
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(Error::config(format!(
                "window duration must be positive, got {}",
                self.duration
            )));
        }
        if !self.amplitude.is_finite() {
            return Err(Error::config("window amplitude must be finite"));
        }
        match &self.family {
            WindowFamily::Gaussian { sigma } => {
                if !(*sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::config(format!(
                        "gaussian width must be positive, got {sigma}"
                    )));
                }
            }
            WindowFamily::RaisedCosine => {}
            WindowFamily::Superoscillatory { band, boost } => {
                if *band < 1 {
                    return Err(Error::config("superoscillatory band index must be >= 1"));
                }
                if !(*boost > 1.0 && boost.is_finite()) {
                    return Err(Error::config(format!(
                        "superoscillatory boost must exceed 1, got {boost}"
                    )));
                }
            }
            WindowFamily::Tabulated { values, quadrature } => {
                if values.len() < 2 {
                    return Err(Error::config("tabulated window needs at least two samples"));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::config("tabulated window samples must be finite"));
                }
                if let Some(q) = quadrature {
                    if q.len() != values.len() {
                        return Err(Error::config(
                            "tabulated quadrature samples must match the value samples",
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.duration
    }

    /// ε(t); exactly zero outside the support.
    pub fn eval(&self, t: f64) -> f64 {
        let s = t.abs();
        if s > self.half_width() {
            return 0.0;
        }
        self.amplitude * self.profile(s)
    }

    fn profile(&self, s: f64) -> f64 {
        match &self.family {
            WindowFamily::Gaussian { sigma } => (-0.5 * (s / sigma).powi(2)).exp(),
            WindowFamily::RaisedCosine => (PI * s / self.duration).cos().powi(2),
            WindowFamily::Superoscillatory { band, boost } => {
                superosc_generator(*band, *boost, 2.0 * PI * s / self.duration).re
            }
            WindowFamily::Tabulated { values, .. } => interpolate(values, s / self.half_width()),
        }
    }

    /// Complex generating function whose real part is the window on its
    /// support.
    pub fn generator(&self, t: f64) -> Complex64 {
        if t.abs() > self.half_width() {
            return Complex64::new(0.0, 0.0);
        }
        let z = match &self.family {
            WindowFamily::Superoscillatory { band, boost } => {
                superosc_generator(*band, *boost, 2.0 * PI * t / self.duration)
            }
            WindowFamily::Tabulated {
                values,
                quadrature: Some(q),
            } => {
                let u = t.abs() / self.half_width();
                Complex64::new(interpolate(values, u), t.signum() * interpolate(q, u))
            }
            _ => Complex64::new(self.profile(t.abs()), 0.0),
        };
        z * self.amplitude
    }

    /// Upper bound on the angular frequency content, used to size
    /// quadrature panels.
    pub fn frequency_scale(&self) -> f64 {
        match &self.family {
            WindowFamily::Gaussian { sigma } => 6.0 / sigma,
            WindowFamily::RaisedCosine => 2.0 * PI / self.duration,
            WindowFamily::Superoscillatory { band, boost } => {
                *band as f64 * boost * 2.0 * PI / self.duration
            }
            WindowFamily::Tabulated { values, .. } => {
                PI * (values.len() - 1) as f64 / self.half_width()
            }
        }
    }
}

fn superosc_generator(band: u32, boost: f64, x: f64) -> Complex64 {
    Complex64::new(x.cos(), boost * x.sin()).powi(band as i32)
}

fn interpolate(samples: &[f64], u: f64) -> f64 {
    let n = samples.len() - 1;
    let x = (u * n as f64).clamp(0.0, n as f64);
    let i = (x.floor() as usize).min(n - 1);
    let frac = x - i as f64;
    samples[i] * (1.0 - frac) + samples[i + 1] * frac
}

/// Aharonov–Berry superoscillatory window:
/// ε0 · Re[(cos(2πt/T) + i·a·sin(2πt/T))^N], truncated to [-T/2, T/2].
pub fn superosc_window(band: u32, boost: f64, amplitude: f64, duration: f64) -> Result<WindowSpec> {
    let spec = WindowSpec {
        amplitude,
        duration,
        family: WindowFamily::Superoscillatory { band, boost },
    };
    spec.validate()?;
    Ok(spec)
}

pub fn eval_window(spec: &WindowSpec, t: f64) -> Result<f64> {
    spec.validate()?;
    Ok(spec.eval(t))
}

/// Instantaneous angular frequency of the generating function at `t`, from
/// a central difference of its phase.
pub fn local_frequency(spec: &WindowSpec, t: f64) -> Result<f64> {
    spec.validate()?;
    let h = spec.duration * 1e-6;
    let z0 = spec.generator(t);
    let zp = spec.generator(t + h);
    let zm = spec.generator(t - h);
    let scale = spec.amplitude.abs().max(f64::MIN_POSITIVE);
    let floor = 1e-12 * scale;
    if z0.norm() <= floor || zp.norm() <= floor || zm.norm() <= floor {
        return Err(Error::domain(format!(
            "local frequency undefined at t = {t}: generating function vanishes"
        )));
    }
    Ok((zp / zm).arg() / (2.0 * h))
}

/// Fourier coefficients c_n = (1/T)∫ε(t)e^{-2πint/T}dt of the periodic
/// extension for n = -max_index..=max_index, by the periodic trapezoid rule.
pub fn fourier_coefficients(spec: &WindowSpec, max_index: usize) -> Result<Vec<Complex64>> {
    spec.validate()?;
    let extra = match &spec.family {
        WindowFamily::Superoscillatory { band, .. } => *band as usize,
        _ => 0,
    };
    let m = (8 * (max_index + extra)).max(1024);
    let dt = spec.duration / m as f64;
    let samples: Vec<f64> = (0..m)
        .map(|k| spec.eval(-spec.half_width() + k as f64 * dt))
        .collect();
    let idx = max_index as i64;
    Ok((-idx..=idx)
        .map(|n| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, v) in samples.iter().enumerate() {
                let t = -spec.half_width() + k as f64 * dt;
                acc += Complex64::from_polar(*v, -2.0 * PI * n as f64 * t / spec.duration);
            }
            acc / m as f64
        })
        .collect())
}

/// Largest |n| whose Fourier coefficient magnitude exceeds `threshold`
/// relative to the largest coefficient.
pub fn band_limit(spec: &WindowSpec, max_index: usize, threshold: f64) -> Result<usize> {
    let c = fourier_coefficients(spec, max_index)?;
    let peak = c.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(c.iter()
        .enumerate()
        .filter(|(_, z)| z.norm() > threshold * peak)
        .map(|(i, _)| (i as i64 - max_index as i64).unsigned_abs() as usize)
        .max()
        .unwrap_or(0))
}

/// Evenly spaced (t, ε(t)) samples across the support.
pub fn sample(spec: &WindowSpec, points: usize) -> Result<Vec<(f64, f64)>> {
    spec.validate()?;
    let points = points.max(2);
    let h = spec.duration / (points - 1) as f64;
    Ok((0..points)
        .map(|k| {
            let t = -spec.half_width() + k as f64 * h;
            (t, spec.eval(t))
        })
        .collect())
}
