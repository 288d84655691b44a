//! Finite upper bounds on the size of quotient codes: ball sizes, Plotkin,
//! Elias–Bassalygo, sphere packing, and their combination.

use std::fmt;

use num::bigint::{BigInt, BigUint};
use num::{BigRational, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::codes::{CodeError, QuotientCode};
use crate::weights::{format_rational, Rational, WeightFunction, WeightGrid};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    Plotkin,
    Elias,
    Sphere,
    Combined,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Plotkin => "plotkin",
            BoundKind::Elias => "elias",
            BoundKind::Sphere => "sphere",
            BoundKind::Combined => "combined",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One evaluated bound with every input it used. `value` is present exactly
/// when the bound applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub kind: BoundKind,
    /// The bound on `|C|`, rounded down.
    pub value: Option<BigUint>,
    /// The bound before rounding.
    pub exact: Option<BigRational>,
    /// Why the bound does not apply.
    pub reason: Option<String>,
    /// Radius used by the Elias and sphere-packing bounds.
    pub r: Option<Rational>,
    pub s: usize,
    pub ell: usize,
    pub d: Rational,
    pub gamma: Rational,
    /// `h(r, s, ℓ, d)` for Elias.
    pub h: Option<BigRational>,
    /// `|B^{s−ℓ}(r − γℓ)|` for Elias and sphere packing.
    pub ball: Option<BigUint>,
    /// For the combined bound, the case that attains it.
    pub winner: Option<BoundKind>,
}

impl BoundReport {
    fn blank(kind: BoundKind, s: usize, ell: usize, d: Rational, gamma: Rational) -> Self {
        BoundReport { kind, value: None, exact: None, reason: None, r: None, s, ell, d, gamma, h: None, ball: None, winner: None }
    }

    fn not_applicable(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    fn with_value(mut self, exact: BigRational) -> Self {
        self.value = Some(floor_nonneg(&exact));
        self.exact = Some(exact);
        self
    }

    pub fn applicable(&self) -> bool {
        self.value.is_some()
    }

    /// CSV row `name,applicable,value,r,s,ell,d,gamma_num,gamma_den`.
    pub fn csv_row(&self) -> String {
        let value = self.value.as_ref().map(|v| v.to_string()).unwrap_or_default();
        let r = self.r.as_ref().map(format_rational).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.kind,
            self.applicable(),
            value,
            r,
            self.s,
            self.ell,
            format_rational(&self.d),
            self.gamma.numer(),
            self.gamma.denom()
        )
    }
}

pub const CSV_HEADER: &str = "name,applicable,value,r,s,ell,d,gamma_num,gamma_den";

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<9}", self.kind.name())?;
        match (&self.value, &self.reason) {
            (Some(v), _) => write!(f, "{v}")?,
            (None, Some(why)) => write!(f, "not applicable ({why})")?,
            (None, None) => write!(f, "not applicable")?,
        }
        if let Some(r) = &self.r {
            write!(f, "  r={}", format_rational(r))?;
        }
        if let Some(h) = &self.h {
            write!(f, "  h={h}")?;
        }
        if let Some(b) = &self.ball {
            write!(f, "  ball={b}")?;
        }
        if let Some(w) = self.winner {
            write!(f, "  via {w}")?;
        }
        Ok(())
    }
}

pub(crate) fn big(r: Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn floor_nonneg(x: &BigRational) -> BigUint {
    let f = x.floor().to_integer();
    if f.is_negative() {
        BigUint::zero()
    } else {
        f.to_biguint().expect("nonnegative")
    }
}

fn pow(base: u32, exp: usize) -> BigUint {
    num::pow(BigUint::from(base), exp)
}

/// Counts of `z ∈ A^k` by exact scaled weight: entry `j` counts words of
/// weight `j/scale`.
fn weight_enumerator(grid: &WeightGrid, k: usize) -> Vec<BigUint> {
    let mut per_value: Vec<(usize, u64)> = Vec::new();
    for &v in grid.values() {
        match per_value.iter_mut().find(|(x, _)| *x == v as usize) {
            Some(entry) => entry.1 += 1,
            None => per_value.push((v as usize, 1)),
        }
    }
    let top = grid.max_value() as usize;
    let mut counts = vec![BigUint::one()];
    for i in 0..k {
        let mut next = vec![BigUint::zero(); (i + 1) * top + 1];
        for (j, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(v, mult) in &per_value {
                next[j + v] += c * mult;
            }
        }
        counts = next;
    }
    counts
}

/// `|B^k(r)|`, the number of words in `A^k` of weight at most `r`.
pub fn ball_size(w: &WeightFunction, k: usize, r: Rational) -> BigUint {
    let grid = w.grid();
    let Some(j) = grid.floor_index(r) else {
        return BigUint::zero();
    };
    weight_enumerator(&grid, k).into_iter().take(j as usize + 1).sum()
}

/// `|B^k(j/scale)|` for every grid radius `j = 0..=k·max`.
pub fn ball_sizes(w: &WeightFunction, k: usize) -> Vec<BigUint> {
    let mut total = BigUint::zero();
    weight_enumerator(&w.grid(), k)
        .into_iter()
        .map(|c| {
            total += c;
            total.clone()
        })
        .collect()
}

/// `|B^{s−ℓ}(r − γℓ)|·|A|^ℓ/|K|`, the number of cosets whose average weight
/// is at most `r`.
pub fn avg_ball_size(
    w: &WeightFunction,
    s: usize,
    ell: usize,
    kernel_size: &BigUint,
    r: Rational,
) -> Result<BigRational, BoundError> {
    let gamma = w.gamma();
    let gl = gamma * Rational::from(ell as i64);
    if r < gl {
        return Err(BoundError::NotApplicable(format!("r = {} < γℓ = {}", format_rational(&r), format_rational(&gl))));
    }
    if ell > s || kernel_size.is_zero() {
        return Err(BoundError::NotApplicable("need ℓ ≤ s and |K| ≥ 1".into()));
    }
    let ball = ball_size(w, s - ell, r - gl);
    Ok(BigRational::new((ball * pow(w.size(), ell)).into(), kernel_size.clone().into()))
}

/// Plotkin: `|C| ≤ (d − γℓ)/(d − γs)` when `d > γs`.
pub fn plotkin_bound(d: Rational, s: usize, ell: usize, gamma: Rational) -> BoundReport {
    let report = BoundReport::blank(BoundKind::Plotkin, s, ell, d, gamma);
    let gs = gamma * Rational::from(s as i64);
    if d <= gs {
        return report.not_applicable(format!("d ≤ γs = {}", format_rational(&gs)));
    }
    let gl = gamma * Rational::from(ell as i64);
    report.with_value(big(d - gl) / big(d - gs))
}

/// Both sides of `(|C| − 1)d ≤ (|C|s − ℓ)γ` for a code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotkinCheck {
    pub lhs: Rational,
    pub rhs: Rational,
}

impl PlotkinCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

pub fn plotkin_inequality_check(code: &QuotientCode) -> Result<PlotkinCheck, BoundError> {
    let d = code.min_induced_distance()?;
    let p = code.params();
    Ok(plotkin_inequality(p.size as u64, d, p.s, p.ell, code.weight().gamma()))
}

/// The Plotkin inequality for given parameters.
pub fn plotkin_inequality(size: u64, d: Rational, s: usize, ell: usize, gamma: Rational) -> PlotkinCheck {
    let c = Rational::from(size as i64);
    PlotkinCheck {
        lhs: (c - 1) * d,
        rhs: (c * Rational::from(s as i64) - Rational::from(ell as i64)) * gamma,
    }
}

/// `h(r, s, ℓ, d) = (d − γℓ)γ(s − ℓ) / ((r − γℓ)² − γ(s − ℓ)(2r − d − γℓ))`.
pub fn elias_h(r: Rational, s: usize, ell: usize, d: Rational, gamma: Rational) -> Result<BigRational, BoundError> {
    let (r, d, g) = (big(r), big(d), big(gamma));
    let s_big = BigRational::from_integer(BigInt::from(s));
    let gl = &g * BigRational::from_integer(BigInt::from(ell));
    let free = &g * BigRational::from_integer(BigInt::from(s as i64 - ell as i64));
    if r > &g * &s_big {
        return Err(BoundError::NotApplicable("r > γs".into()));
    }
    let shifted = &r - &gl;
    let two = BigRational::from_integer(BigInt::from(2));
    let denom = &shifted * &shifted - &free * (two * &r - &d - &gl);
    if !denom.is_positive() {
        return Err(BoundError::NotApplicable("(r − γℓ)² − γ(s − ℓ)(2r − d − γℓ) ≤ 0".into()));
    }
    Ok((d - gl) * free / denom)
}

/// Elias–Bassalygo at a fixed radius: `h·|A|^{s−ℓ}/|B^{s−ℓ}(r − γℓ)|`.
pub fn elias_bound(w: &WeightFunction, r: Rational, s: usize, ell: usize, d: Rational) -> BoundReport {
    let balls = EliasBalls::new(w, s, ell);
    elias_at(w, &balls, r, s, ell, d)
}

struct EliasBalls {
    grid: WeightGrid,
    free: usize,
    sizes: Vec<BigUint>,
}

impl EliasBalls {
    fn new(w: &WeightFunction, s: usize, ell: usize) -> Self {
        let free = s.saturating_sub(ell);
        EliasBalls { grid: w.grid(), free, sizes: ball_sizes(w, free) }
    }

    fn ball(&self, radius: Rational) -> BigUint {
        match self.grid.floor_index(radius) {
            None => BigUint::zero(),
            Some(j) => self.sizes[(j as usize).min(self.sizes.len() - 1)].clone(),
        }
    }
}

fn elias_at(w: &WeightFunction, balls: &EliasBalls, r: Rational, s: usize, ell: usize, d: Rational) -> BoundReport {
    let gamma = w.gamma();
    let mut report = BoundReport::blank(BoundKind::Elias, s, ell, d, gamma);
    report.r = Some(r);
    let gl = gamma * Rational::from(ell as i64);
    if s <= ell {
        return report.not_applicable("s = ℓ leaves no free coordinates");
    }
    if d <= gl {
        return report.not_applicable(format!("d ≤ γℓ = {}", format_rational(&gl)));
    }
    if r < gl {
        return report.not_applicable(format!("r < γℓ = {}", format_rational(&gl)));
    }
    let h = match elias_h(r, s, ell, d, gamma) {
        Ok(h) => h,
        Err(BoundError::NotApplicable(why)) => return report.not_applicable(why),
        Err(e) => return report.not_applicable(e.to_string()),
    };
    let ball = balls.ball(r - gl);
    let exact = &h * BigRational::from_integer(pow(w.size(), balls.free).into()) / BigRational::from_integer(ball.clone().into());
    report.h = Some(h);
    report.ball = Some(ball);
    report.with_value(exact)
}

/// Elias–Bassalygo minimized over the radius grid `r = γℓ + j/scale`,
/// `0 ≤ j/scale ≤ γ(s − ℓ)`. Between grid points the ball is constant while
/// `h` increases with `r`, so the grid holds the minimum.
pub fn elias_bound_optimized(w: &WeightFunction, s: usize, ell: usize, d: Rational) -> BoundReport {
    let gamma = w.gamma();
    let balls = EliasBalls::new(w, s, ell);
    let gl = gamma * Rational::from(ell as i64);
    let scale = balls.grid.scale();
    let top = (gamma * Rational::from(s.saturating_sub(ell) as i64) * scale).floor().to_integer();
    let mut best: Option<BoundReport> = None;
    let mut last_reason = None;
    for j in 0..=top.max(0) {
        let r = gl + Rational::new(j, scale);
        let report = elias_at(w, &balls, r, s, ell, d);
        if report.applicable() {
            if best.as_ref().map_or(true, |b| report.exact < b.exact) {
                best = Some(report);
            }
        } else {
            last_reason = report.reason;
        }
    }
    best.unwrap_or_else(|| {
        BoundReport::blank(BoundKind::Elias, s, ell, d, gamma)
            .not_applicable(last_reason.unwrap_or_else(|| "no admissible radius".into()))
    })
}

/// Sphere packing: `|A|^{s−ℓ}/|B^{s−ℓ}(r − γℓ)|` for `(d − 1)/2 ≥ r > γℓ`,
/// at the largest such grid radius.
pub fn sphere_packing_bound(w: &WeightFunction, s: usize, ell: usize, d: Rational) -> BoundReport {
    let gamma = w.gamma();
    let mut report = BoundReport::blank(BoundKind::Sphere, s, ell, d, gamma);
    if ell > s {
        return report.not_applicable("ℓ > s");
    }
    let grid = w.grid();
    let scale = grid.scale();
    let gl = gamma * Rational::from(ell as i64);
    let half = (d - 1) / 2;
    let j = ((half - gl) * scale).floor().to_integer();
    if j < 1 {
        return report.not_applicable(format!("no grid radius with (d − 1)/2 ≥ r > γℓ = {}", format_rational(&gl)));
    }
    let r = gl + Rational::new(j, scale);
    let ball = ball_size(w, s - ell, r - gl);
    let exact = BigRational::new(pow(w.size(), s - ell).into(), ball.clone().into());
    report.r = Some(r);
    report.ball = Some(ball);
    report.with_value(exact)
}

/// The least applicable bound among Plotkin, optimized Elias and sphere
/// packing.
pub fn combined_bound(w: &WeightFunction, n: usize, s: usize, ell: usize, d: Rational) -> Result<BoundReport, BoundError> {
    Ok(all_bounds(w, n, s, ell, d)?.pop().expect("four reports"))
}

/// Plotkin, Elias, sphere packing and combined reports, in that order.
pub fn all_bounds(w: &WeightFunction, n: usize, s: usize, ell: usize, d: Rational) -> Result<Vec<BoundReport>, BoundError> {
    if !(n >= s && s >= ell) {
        return Err(BoundError::NotApplicable(format!("need n ≥ s ≥ ℓ, got n={n}, s={s}, ℓ={ell}")));
    }
    let gamma = w.gamma();
    let parts = vec![plotkin_bound(d, s, ell, gamma), elias_bound_optimized(w, s, ell, d), sphere_packing_bound(w, s, ell, d)];
    let mut combined = BoundReport::blank(BoundKind::Combined, s, ell, d, gamma);
    let best = parts.iter().filter(|p| p.applicable()).min_by(|a, b| a.exact.cmp(&b.exact));
    combined = match best {
        Some(b) => {
            let mut c = combined.with_value(b.exact.clone().expect("applicable"));
            c.winner = Some(b.kind);
            c.r = b.r;
            c
        }
        None => combined.not_applicable("no case applies"),
    };
    let mut out = parts;
    out.push(combined);
    Ok(out)
}

/// The bound as a float, for display.
pub fn approx(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}
