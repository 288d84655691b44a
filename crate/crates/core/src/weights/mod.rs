//! Homogeneous weights, their extension to vectors, and induced weights on
//! quotient modules.

mod alphabet;
mod submodule;

use std::fmt::Write as _;

use num::rational::Ratio;
use num::{Integer, One, Zero};
use thiserror::Error;

use crate::algebra::{Elem, Ring};

pub use alphabet::{Alphabet, FiniteRing, MatrixRing2};
pub use submodule::{
    avg_coset_weight, induced_weight, puncture, submodule_span, submodule_span_with_cap, Submodule,
    DEFAULT_SPAN_CAP,
};

/// Exact rational used for weights and code parameters.
pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("gamma must be positive, got {0}")]
    NonPositiveGamma(Rational),
    #[error("{0} is not a field")]
    NotAField(String),
    #[error("weight table has {got} entries, alphabet has {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("weight of zero must be 0")]
    NonzeroAtZero,
    #[error("enumeration cap exceeded after {reached} elements")]
    CapExceeded { reached: usize },
    #[error("vector of length {got} where {expected} was expected")]
    Length { expected: usize, got: usize },
    #[error("coset average {enumerated} differs from the closed form {closed}")]
    LemmaViolation { enumerated: Rational, closed: Rational },
    #[error("weight function is defined on {0}, which has no vector arithmetic")]
    NoVectorArithmetic(String),
}

/// A weight table on an alphabet together with its homogeneity constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    alphabet: Alphabet,
    table: Vec<Rational>,
    gamma: Rational,
}

/// Result of checking the two homogeneity axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Homogeneity {
    Pass,
    /// `w(0) != 0`.
    ZeroNotZero,
    /// `Rx = Ry` but `w(x) != w(y)`.
    NotAssociateInvariant { x: Elem, y: Elem },
    /// The average over `Rx` is `average`, not gamma.
    BadAverage { x: Elem, average: Rational },
}

impl Homogeneity {
    pub fn passed(&self) -> bool {
        matches!(self, Homogeneity::Pass)
    }
}

fn check_gamma(gamma: Rational) -> Result<(), WeightError> {
    if gamma <= Rational::zero() {
        Err(WeightError::NonPositiveGamma(gamma))
    } else {
        Ok(())
    }
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn totient(n: u64) -> u64 {
    (1..=n).filter(|&k| k.gcd(&n) == 1).count() as u64
}

/// Ramanujan sum `c_n(k) = Σ_{d | gcd(k, n)} μ(n/d)·d`, the character sum
/// `Σ_{u ∈ Z_n^×} ζ^{ku}`.
pub fn ramanujan_sum(n: u64, k: u64) -> i64 {
    let g = k.gcd(&n);
    (1..=g).filter(|d| g % d == 0).map(|d| mobius(n / d) * d as i64).sum()
}

impl WeightFunction {
    /// The homogeneous weight `γ(1 − |R^×|^{-1} Σ_u χ(au))` for the standard
    /// generating character of `ring`.
    pub fn homogeneous(ring: &Ring, gamma: Rational) -> Result<Self, WeightError> {
        check_gamma(gamma)?;
        let table = if ring.is_field() {
            let q = ring.size() as i64;
            let nonzero = gamma * Rational::new(q, q - 1);
            ring.elements().map(|a| if a == 0 { Rational::zero() } else { nonzero }).collect()
        } else {
            let m = ring.size() as u64;
            let phi = totient(m) as i64;
            ring.elements()
                .map(|a| gamma * (Rational::one() - Rational::new(ramanujan_sum(m, a as u64), phi)))
                .collect()
        };
        Ok(WeightFunction { alphabet: Alphabet::Ring(ring.clone()), table, gamma })
    }

    /// `w(x) = γ·q/(q−1)` for every nonzero `x`, on any ring of size `q`. This is
    /// homogeneous only over fields.
    pub fn hamming(ring: &Ring, gamma: Rational) -> Result<Self, WeightError> {
        check_gamma(gamma)?;
        let q = ring.size() as i64;
        let nonzero = gamma * Rational::new(q, q - 1);
        let table = ring.elements().map(|a| if a == 0 { Rational::zero() } else { nonzero }).collect();
        Ok(WeightFunction { alphabet: Alphabet::Ring(ring.clone()), table, gamma })
    }

    /// Rank-based weight on 2×2 matrices over `field`: rank 2 maps to
    /// `(q²−q−1)/(q−1)` and rank 1 to `q` at `γ = (q²−1)/q`, rescaled linearly.
    pub fn matrix_ring(field: &Ring, gamma: Rational) -> Result<Self, WeightError> {
        check_gamma(gamma)?;
        let mat = MatrixRing2::new(field.clone()).ok_or_else(|| WeightError::NotAField(field.to_string()))?;
        let q = field.size() as i64;
        let scale = gamma / Rational::new(q * q - 1, q);
        let by_rank = [Rational::zero(), Rational::from(q) * scale, Rational::new(q * q - q - 1, q - 1) * scale];
        let table = (0..mat.size()).map(|e| by_rank[mat.rank(e) as usize]).collect();
        Ok(WeightFunction { alphabet: Alphabet::Matrix2(mat), table, gamma })
    }

    pub fn from_table(alphabet: Alphabet, table: Vec<Rational>, gamma: Rational) -> Result<Self, WeightError> {
        check_gamma(gamma)?;
        if table.len() != alphabet.size() as usize {
            return Err(WeightError::TableSize { expected: alphabet.size() as usize, got: table.len() });
        }
        if !table[0].is_zero() {
            return Err(WeightError::NonzeroAtZero);
        }
        Ok(WeightFunction { alphabet, table, gamma })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The ring for vector arithmetic; fails for table-only alphabets.
    pub fn ring(&self) -> Result<&Ring, WeightError> {
        self.alphabet.ring().ok_or_else(|| WeightError::NoVectorArithmetic(self.alphabet.to_string()))
    }

    pub fn size(&self) -> u32 {
        self.alphabet.size()
    }

    pub fn gamma(&self) -> Rational {
        self.gamma
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }

    pub fn weight(&self, a: Elem) -> Rational {
        self.table[a as usize]
    }

    pub fn max_weight(&self) -> Rational {
        self.table.iter().copied().max().unwrap_or_else(Rational::zero)
    }

    /// Multiplies every entry and gamma by `c > 0`.
    pub fn scaled(&self, c: Rational) -> Result<Self, WeightError> {
        check_gamma(c)?;
        Ok(WeightFunction {
            alphabet: self.alphabet.clone(),
            table: self.table.iter().map(|&w| w * c).collect(),
            gamma: self.gamma * c,
        })
    }

    /// Distinct weight values with their multiplicities, ascending.
    pub fn distribution(&self) -> Vec<(Rational, u64)> {
        let mut values: Vec<Rational> = self.table.clone();
        values.sort();
        let mut out: Vec<(Rational, u64)> = Vec::new();
        for w in values {
            match out.last_mut() {
                Some((v, count)) if *v == w => *count += 1,
                _ => out.push((w, 1)),
            }
        }
        out
    }

    /// `element,numerator,denominator` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("element,numerator,denominator\n");
        for (a, w) in self.table.iter().enumerate() {
            let _ = writeln!(out, "{a},{},{}", w.numer(), w.denom());
        }
        out
    }

    pub fn verify_homogeneous(&self) -> Homogeneity {
        verify_homogeneous(self)
    }

    pub fn grid(&self) -> WeightGrid {
        WeightGrid::new(self)
    }
}

/// Weights rescaled to integers: `values[a] = scale·w(a)`, with `scale` the
/// least common multiple of the table denominators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightGrid {
    scale: i64,
    values: Vec<i64>,
}

impl WeightGrid {
    pub fn new(w: &WeightFunction) -> Self {
        let scale = w.table.iter().fold(1i64, |acc, r| acc.lcm(r.denom()));
        let values = w.table.iter().map(|r| (r * scale).to_integer()).collect();
        WeightGrid { scale, values }
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, a: Elem) -> i64 {
        self.values[a as usize]
    }

    pub fn max_value(&self) -> i64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// Largest grid index `j` with `j/scale ≤ r`, or `None` for `r < 0`.
    pub fn floor_index(&self, r: Rational) -> Option<i64> {
        let j = (r * self.scale).floor().to_integer();
        (j >= 0).then_some(j)
    }

    pub fn to_rational(&self, j: i64) -> Rational {
        Rational::new(j, self.scale)
    }

    pub fn vector_value(&self, v: &[Elem]) -> i64 {
        v.iter().map(|&a| self.value(a)).sum()
    }
}

/// Exhaustive check of `w(0) = 0`, associate invariance over all pairs, and
/// the average over every nonzero left ideal `Rx`.
pub fn verify_homogeneous(w: &WeightFunction) -> Homogeneity {
    if !w.table[0].is_zero() {
        return Homogeneity::ZeroNotZero;
    }
    let ring = w.alphabet.as_finite_ring();
    let ideals: Vec<Vec<Elem>> = ring.elements().map(|x| ring.left_ideal(x)).collect();
    for x in ring.elements() {
        for y in x + 1..ring.size() {
            if ideals[x as usize] == ideals[y as usize] && w.weight(x) != w.weight(y) {
                return Homogeneity::NotAssociateInvariant { x, y };
            }
        }
    }
    for x in ring.elements().skip(1) {
        let ideal = &ideals[x as usize];
        let total: Rational = ideal.iter().map(|&z| w.weight(z)).sum();
        let average = total / Rational::from(ideal.len() as i64);
        if average != w.gamma {
            return Homogeneity::BadAverage { x, average };
        }
    }
    Homogeneity::Pass
}

/// `Σ_i w(v_i)`.
pub fn vector_weight(w: &WeightFunction, v: &[Elem]) -> Rational {
    v.iter().map(|&a| w.weight(a)).sum()
}

/// Renders `a` or `a/b`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a`, `a/b` or a finite decimal such as `0.75`, exactly.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rational::new(n.trim().parse().ok()?, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().ok()? };
        let den = 10i64.checked_pow(frac.len() as u32)?;
        let frac_part: i64 = frac.parse().ok()?;
        let magnitude = int_part.abs().checked_mul(den)?.checked_add(frac_part)?;
        return Some(Rational::new(if negative { -magnitude } else { magnitude }, den));
    }
    s.parse::<i64>().ok().map(Rational::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn z(m: u64) -> Ring {
        Ring::residue(m).unwrap()
    }

    #[test]
    fn lee_weight_on_z4() {
        let w = WeightFunction::homogeneous(&z(4), q(1, 1)).unwrap();
        assert_eq!(w.table(), &[q(0, 1), q(1, 1), q(2, 1), q(1, 1)]);
        assert!(w.verify_homogeneous().passed());
    }

    #[test]
    fn z8_table() {
        let w = WeightFunction::homogeneous(&z(8), q(1, 1)).unwrap();
        for a in 0..8 {
            let expected = match a {
                0 => q(0, 1),
                4 => q(2, 1),
                _ => q(1, 1),
            };
            assert_eq!(w.weight(a), expected, "a = {a}");
        }
        assert!(w.verify_homogeneous().passed());
    }

    #[test]
    fn hamming_on_f2() {
        let w = WeightFunction::homogeneous(&Ring::prime_field(2).unwrap(), q(1, 2)).unwrap();
        assert_eq!(w.table(), &[q(0, 1), q(1, 1)]);
        assert_eq!(vector_weight(&w, &[1, 1, 0, 1]), q(3, 1));
    }

    #[test]
    fn z_m_tables_for_composite_moduli() {
        // Z6 ≅ Z2 × Z3: the product of the two field weights shape
        let w = WeightFunction::homogeneous(&z(6), q(1, 1)).unwrap();
        assert_eq!(w.table(), &[q(0, 1), q(1, 2), q(3, 2), q(2, 1), q(3, 2), q(1, 2)]);
        for m in 2..=60 {
            let w = WeightFunction::homogeneous(&z(m), q(1, 1)).unwrap();
            assert!(w.verify_homogeneous().passed(), "Z{m}");
        }
    }

    #[test]
    fn matrix_ring_tables() {
        let f2 = Ring::prime_field(2).unwrap();
        let w = WeightFunction::matrix_ring(&f2, q(3, 2)).unwrap();
        let Alphabet::Matrix2(mat) = w.alphabet().clone() else { panic!() };
        for e in 0..16 {
            let expected = [q(0, 1), q(2, 1), q(1, 1)][mat.rank(e) as usize];
            assert_eq!(w.weight(e), expected);
        }
        assert!(w.verify_homogeneous().passed());
        let half = WeightFunction::matrix_ring(&f2, q(3, 4)).unwrap();
        assert!(w.table().iter().zip(half.table()).all(|(a, b)| *a == *b * 2));

        let f3 = Ring::prime_field(3).unwrap();
        let w3 = WeightFunction::matrix_ring(&f3, q(8, 3)).unwrap();
        let Alphabet::Matrix2(mat3) = w3.alphabet().clone() else { panic!() };
        let rank2 = (0..81).find(|&e| mat3.rank(e) == 2).unwrap();
        let rank1 = (0..81).find(|&e| mat3.rank(e) == 1).unwrap();
        assert_eq!(w3.weight(rank2), q(5, 2));
        assert_eq!(w3.weight(rank1), q(3, 1));
        assert!(w3.verify_homogeneous().passed());
        assert!(WeightFunction::matrix_ring(&z(4), q(1, 1)).is_err());
    }

    #[test]
    fn homogeneity_failures() {
        let ham = WeightFunction::hamming(&z(4), q(3, 4)).unwrap();
        assert_eq!(ham.weight(2), q(1, 1));
        assert_eq!(ham.verify_homogeneous(), Homogeneity::BadAverage { x: 2, average: q(1, 2) });
        let zero = WeightFunction::from_table(Alphabet::Ring(z(4)), vec![q(0, 1); 4], q(1, 1)).unwrap();
        assert!(matches!(zero.verify_homogeneous(), Homogeneity::BadAverage { x: 1, .. }));
        let skew =
            WeightFunction::from_table(Alphabet::Ring(z(4)), vec![q(0, 1), q(1, 1), q(2, 1), q(2, 1)], q(1, 1))
                .unwrap();
        assert_eq!(skew.verify_homogeneous(), Homogeneity::NotAssociateInvariant { x: 1, y: 3 });
        assert!(WeightFunction::from_table(Alphabet::Ring(z(2)), vec![q(1, 1), q(1, 1)], q(1, 1)).is_err());
        assert!(WeightFunction::homogeneous(&z(4), q(0, 1)).is_err());
        assert!(WeightFunction::homogeneous(&z(4), q(-1, 2)).is_err());
    }

    #[test]
    fn field_families_are_homogeneous() {
        let fields: Vec<Ring> = vec![
            Ring::prime_field(2).unwrap(),
            Ring::prime_field(3).unwrap(),
            "f2^2:1,1,1".parse().unwrap(),
            Ring::prime_field(5).unwrap(),
            "f2^3:1,1,0,1".parse().unwrap(),
            "f3^2:2,2,1".parse().unwrap(),
            "f2^4:1,1,0,0,1".parse().unwrap(),
            Ring::prime_field(251).unwrap(),
        ];
        for f in fields {
            let qn = f.size() as i64;
            let w = WeightFunction::homogeneous(&f, q(qn - 1, qn)).unwrap();
            assert!(w.verify_homogeneous().passed(), "{f}");
            assert!(w.table().iter().skip(1).all(|&x| x == q(1, 1)));
        }
    }

    #[test]
    fn scaling_and_csv() {
        let w = WeightFunction::homogeneous(&z(4), q(1, 1)).unwrap();
        let s = w.scaled(q(3, 2)).unwrap();
        assert_eq!(s, WeightFunction::homogeneous(&z(4), q(3, 2)).unwrap());
        assert_eq!(s.to_csv(), "element,numerator,denominator\n0,0,1\n1,3,2\n2,3,1\n3,3,2\n");
        assert_eq!(w.distribution(), vec![(q(0, 1), 1), (q(1, 1), 2), (q(2, 1), 1)]);
    }

    #[test]
    fn grids() {
        let w = WeightFunction::homogeneous(&z(6), q(1, 1)).unwrap();
        let g = w.grid();
        assert_eq!(g.scale(), 2);
        assert_eq!(g.values(), &[0, 1, 3, 4, 3, 1]);
        assert_eq!(g.floor_index(q(7, 4)), Some(3));
        assert_eq!(g.floor_index(q(-1, 4)), None);
        assert_eq!(g.to_rational(3), q(3, 2));
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("3/4"), Some(q(3, 4)));
        assert_eq!(parse_rational("0.75"), Some(q(3, 4)));
        assert_eq!(parse_rational("2"), Some(q(2, 1)));
        assert_eq!(parse_rational("-0.5"), Some(q(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(format_rational(&q(6, 4)), "3/2");
        assert_eq!(format_rational(&q(4, 2)), "2");
    }

    #[test]
    fn ramanujan_sums() {
        // c_n(1) = μ(n), c_n(n) = φ(n)
        for n in 1..40u64 {
            assert_eq!(ramanujan_sum(n, 1), mobius(n));
            assert_eq!(ramanujan_sum(n, n), totient(n) as i64);
        }
        // direct evaluation of the exponential sum for n = 12
        for k in 0..12u64 {
            let direct: f64 = (1..12u64)
                .filter(|u| u.gcd(&12) == 1)
                .map(|u| (2.0 * std::f64::consts::PI * (k * u) as f64 / 12.0).cos())
                .sum();
            assert!((direct - ramanujan_sum(12, k) as f64).abs() < 1e-9);
        }
    }
}
