//! The homogeneous entropy function and asymptotic upper bounds on the rate
//! of quotient codes with relative distance `δ`, support `σ` and kernel `λ`.

use std::fmt::Write as _;

use num::ToPrimitive;
use thiserror::Error;

use crate::weights::{Rational, WeightFunction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymError {
    #[error("delta {delta} outside [0, {gamma}]")]
    OutOfRange { delta: f64, gamma: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

const T_FLOOR: f64 = -700.0;
const TOLERANCE: f64 = 1e-12;

/// `H(δ) = min over Z ∈ (0, 1] of log_{|A|} Σ_a Z^{w(a) − δ}`.
///
/// With `Z = e^t` the objective is a convex log-sum-exp in `t ≤ 0`, so the
/// minimizer is found by bisection on the derivative.
pub fn entropy(w: &WeightFunction, delta: f64) -> Result<f64, AsymError> {
    let gamma = to_f64(w.gamma());
    if !(0.0..=gamma).contains(&delta) || delta.is_nan() {
        return Err(AsymError::OutOfRange { delta, gamma });
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    let shifted: Vec<f64> = w.table().iter().map(|&x| to_f64(x) - delta).collect();
    let slope = |t: f64| {
        let top = shifted.iter().map(|&u| t * u).fold(f64::NEG_INFINITY, f64::max);
        let (mut num, mut den) = (0.0, 0.0);
        for &u in &shifted {
            let e = (t * u - top).exp();
            num += u * e;
            den += e;
        }
        num / den
    };
    let t = if slope(0.0) <= 0.0 {
        0.0
    } else if slope(T_FLOOR) >= 0.0 {
        T_FLOOR
    } else {
        let (mut lo, mut hi) = (T_FLOOR, 0.0);
        while hi - lo > TOLERANCE * (1.0 + lo.abs()) {
            let mid = 0.5 * (lo + hi);
            let m = slope(mid);
            if m.abs() < TOLERANCE {
                lo = mid;
                hi = mid;
                break;
            }
            if m > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let top = shifted.iter().map(|&u| t * u).fold(f64::NEG_INFINITY, f64::max);
    let lse = top + shifted.iter().map(|&u| (t * u - top).exp()).sum::<f64>().ln();
    Ok((lse / f64::from(w.size()).ln()).clamp(0.0, 1.0))
}

fn to_f64(r: Rational) -> f64 {
    r.to_f64().expect("finite rational")
}

/// How the ball exponent enters the Elias and sphere-packing bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EntropyScaling {
    /// `σ − λ − H(ξ)`.
    #[default]
    Stated,
    /// `(σ − λ)(1 − H(ξ))`: the ball lives on the `s − ℓ` free coordinates,
    /// so its exponent scales with `σ − λ`. Agrees with the stated form at
    /// `λ = 0`, `σ = 1`.
    FreeCoordinates,
}

impl EntropyScaling {
    fn apply(self, sigma: f64, lambda: f64, h: f64) -> f64 {
        match self {
            EntropyScaling::Stated => sigma - lambda - h,
            EntropyScaling::FreeCoordinates => (sigma - lambda) * (1.0 - h),
        }
    }
}

/// Relative parameters `σ = s/n`, `λ = ℓ/n`, `δ = d/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymParams {
    pub sigma: f64,
    pub lambda: f64,
    pub delta: f64,
    pub gamma: f64,
}

impl AsymParams {
    pub fn new(w: &WeightFunction, sigma: f64, lambda: f64, delta: f64) -> Result<Self, AsymError> {
        if !(0.0 <= lambda && lambda < sigma && sigma <= 1.0) {
            return Err(AsymError::InvalidParams(format!("need 0 ≤ λ < σ ≤ 1, got σ={sigma}, λ={lambda}")));
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(AsymError::InvalidParams(format!("need δ ≥ 0, got {delta}")));
        }
        Ok(AsymParams { sigma, lambda, delta, gamma: to_f64(w.gamma()) })
    }

    fn free(&self) -> f64 {
        self.sigma - self.lambda
    }
}

/// `σ − δ/γ` for `δ ≤ γσ`, else 0.
pub fn asym_plotkin(p: &AsymParams) -> f64 {
    if p.delta > p.gamma * p.sigma {
        0.0
    } else {
        p.sigma - p.delta / p.gamma
    }
}

/// The Elias radius `ξ = γ − sqrt(γ(γσ − δ)/(σ − λ))`, or `None` when the
/// bound does not apply.
pub fn elias_xi(p: &AsymParams) -> Option<f64> {
    let gs = p.gamma * p.sigma;
    if p.delta > gs || p.delta < p.gamma * p.lambda {
        return None;
    }
    let xi = p.gamma - (p.gamma * (gs - p.delta) / p.free()).sqrt();
    (xi >= 0.0).then(|| xi.min(p.gamma))
}

/// Elias at the optimal radius. The optimum sits on the boundary of the
/// strict radius condition, where it is the infimum over admissible radii.
pub fn asym_elias(p: &AsymParams, w: &WeightFunction, scaling: EntropyScaling) -> Option<f64> {
    let xi = elias_xi(p)?;
    let h = entropy(w, xi).ok()?;
    Some(scaling.apply(p.sigma, p.lambda, h))
}

/// Elias at radius `ρ`, with `ξ = (ρ − γλ)/(σ − λ)`; requires
/// `γλ ≤ ρ < γσ − sqrt(γ(σ − λ)(γσ − δ))` and `δ ≤ γσ`.
pub fn asym_elias_general_rho(p: &AsymParams, w: &WeightFunction, rho: f64, scaling: EntropyScaling) -> Option<f64> {
    let gs = p.gamma * p.sigma;
    if p.delta > gs || rho < p.gamma * p.lambda {
        return None;
    }
    if rho >= gs - (p.gamma * p.free() * (gs - p.delta)).sqrt() {
        return None;
    }
    let xi = ((rho - p.gamma * p.lambda) / p.free()).clamp(0.0, p.gamma);
    let h = entropy(w, xi).ok()?;
    Some(scaling.apply(p.sigma, p.lambda, h))
}

/// Sphere packing with entropy argument `(δ − 2γλ)/(2(σ − λ))`, for
/// `δ > 2γλ`.
pub fn asym_sphere(p: &AsymParams, w: &WeightFunction, scaling: EntropyScaling) -> Option<f64> {
    let edge = 2.0 * p.gamma * p.lambda;
    if p.delta <= edge {
        return None;
    }
    let arg = ((p.delta - edge) / (2.0 * p.free())).clamp(0.0, p.gamma);
    let h = entropy(w, arg).ok()?;
    Some(scaling.apply(p.sigma, p.lambda, h))
}

/// The three asymptotic bounds sampled on `δ = k·step ∈ (0, γσ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub delta: Vec<f64>,
    pub plotkin: Vec<Option<f64>>,
    pub elias: Vec<Option<f64>>,
    pub sphere: Vec<Option<f64>>,
}

pub const CURVE_HEADER: &str = "delta,plotkin,elias,sphere";

pub fn emit_curves(
    w: &WeightFunction,
    sigma: f64,
    lambda: f64,
    step: f64,
    scaling: EntropyScaling,
) -> Result<Curve, AsymError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(AsymError::InvalidParams(format!("step must be positive, got {step}")));
    }
    AsymParams::new(w, sigma, lambda, 0.0)?;
    let end = to_f64(w.gamma()) * sigma;
    let mut curve = Curve { delta: Vec::new(), plotkin: Vec::new(), elias: Vec::new(), sphere: Vec::new() };
    for k in 1.. {
        let delta = k as f64 * step;
        if delta > end * (1.0 + 1e-12) {
            break;
        }
        let delta = delta.min(end);
        let p = AsymParams::new(w, sigma, lambda, delta)?;
        curve.delta.push(delta);
        curve.plotkin.push(Some(asym_plotkin(&p)));
        curve.elias.push(asym_elias(&p, w, scaling));
        curve.sphere.push(asym_sphere(&p, w, scaling));
    }
    Ok(curve)
}

impl Curve {
    pub fn to_csv(&self) -> String {
        let cell = |v: Option<f64>| v.map(|x| format!("{x:.12}")).unwrap_or_default();
        let mut out = format!("{CURVE_HEADER}\n");
        for i in 0..self.delta.len() {
            let _ = writeln!(
                out,
                "{:.12},{},{},{}",
                self.delta[i],
                cell(self.plotkin[i]),
                cell(self.elias[i]),
                cell(self.sphere[i])
            );
        }
        out
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }
}
