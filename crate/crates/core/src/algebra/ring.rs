use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Ring elements are plain integer encodings: residues `0..m` for `Z_m`, and
/// little-endian base-`p` coefficient vectors for `F_{p^e}`.
pub type Elem = u32;

const MAX_DEGREE: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("residue modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extension degree {0} is not supported (expected 1..=4)")]
    UnsupportedDegree(u32),
    #[error("modulus polynomial must be monic of degree {degree} with coefficients below {p}")]
    BadModulus { p: u32, degree: u32 },
    #[error("modulus polynomial is reducible over F_{p}")]
    Reducible { p: u32 },
    #[error("ring of {0} elements is too large")]
    TooLarge(u64),
    #[error("cannot parse ring spec `{0}`")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingKind {
    /// `Z_m`.
    Residue { modulus: u32 },
    /// `F_p[x]/(f)` with `f` monic irreducible of degree `degree`.
    /// Coefficients are stored lowest degree first, length `degree + 1`.
    Field { p: u32, degree: u32, modulus_poly: Vec<u32> },
}

/// A finite commutative alphabet with exact arithmetic: a residue ring or a
/// finite field given by an explicit modulus polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    kind: RingKind,
    size: u32,
}

impl Ring {
    pub fn residue(m: u64) -> Result<Ring, RingError> {
        if m < 2 {
            return Err(RingError::ModulusTooSmall(m));
        }
        if m > u32::MAX as u64 {
            return Err(RingError::TooLarge(m));
        }
        Ok(Ring { kind: RingKind::Residue { modulus: m as u32 }, size: m as u32 })
    }

    /// `F_p` as a degree-one field.
    pub fn prime_field(p: u64) -> Result<Ring, RingError> {
        Ring::field(p, 1, &[0, 1])
    }

    pub fn field(p: u64, degree: u32, modulus_poly: &[u32]) -> Result<Ring, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if degree == 0 || degree > MAX_DEGREE {
            return Err(RingError::UnsupportedDegree(degree));
        }
        let size = (p as u128).pow(degree);
        if size > (1u128 << 31) {
            return Err(RingError::TooLarge(size.min(u64::MAX as u128) as u64));
        }
        let p = p as u32;
        if modulus_poly.len() != degree as usize + 1
            || modulus_poly[degree as usize] != 1
            || modulus_poly.iter().any(|&c| c >= p)
        {
            return Err(RingError::BadModulus { p, degree });
        }
        if !is_irreducible(p, modulus_poly) {
            return Err(RingError::Reducible { p });
        }
        // every linear modulus gives the same prime field
        let modulus_poly = if degree == 1 { vec![0, 1] } else { modulus_poly.to_vec() };
        Ok(Ring {
            kind: RingKind::Field { p, degree, modulus_poly },
            size: size as u32,
        })
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn is_field(&self) -> bool {
        match &self.kind {
            RingKind::Field { .. } => true,
            RingKind::Residue { modulus } => is_prime(*modulus as u64),
        }
    }

    /// `Some(m)` when elements can be treated as integers modulo `m`
    /// (residue rings and prime fields).
    pub fn integer_modulus(&self) -> Option<u32> {
        match &self.kind {
            RingKind::Residue { modulus } => Some(*modulus),
            RingKind::Field { p, degree: 1, .. } => Some(*p),
            RingKind::Field { .. } => None,
        }
    }

    pub fn characteristic(&self) -> u32 {
        match &self.kind {
            RingKind::Residue { modulus } => *modulus,
            RingKind::Field { p, .. } => *p,
        }
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        1
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.size
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.kind {
            RingKind::Residue { modulus } => ((a as u64 + b as u64) % *modulus as u64) as u32,
            RingKind::Field { p, degree: 1, .. } => ((a as u64 + b as u64) % *p as u64) as u32,
            RingKind::Field { p, degree, .. } => {
                let (x, y) = (digits(a, *p, *degree), digits(b, *p, *degree));
                let mut z = [0u32; MAX_DEGREE as usize];
                for i in 0..*degree as usize {
                    z[i] = (x[i] + y[i]) % p;
                }
                undigits(&z[..*degree as usize], *p)
            }
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        match &self.kind {
            RingKind::Residue { modulus: m } | RingKind::Field { p: m, degree: 1, .. } => {
                if a == 0 {
                    0
                } else {
                    m - a
                }
            }
            RingKind::Field { p, degree, .. } => {
                let x = digits(a, *p, *degree);
                let mut z = [0u32; MAX_DEGREE as usize];
                for i in 0..*degree as usize {
                    z[i] = (p - x[i]) % p;
                }
                undigits(&z[..*degree as usize], *p)
            }
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.kind {
            RingKind::Residue { modulus: m } | RingKind::Field { p: m, degree: 1, .. } => {
                ((a as u64 * b as u64) % *m as u64) as u32
            }
            RingKind::Field { p, degree, modulus_poly } => {
                let (p, e) = (*p as u64, *degree as usize);
                let (x, y) = (digits(a, p as u32, *degree), digits(b, p as u32, *degree));
                let mut prod = [0u64; 2 * MAX_DEGREE as usize];
                for i in 0..e {
                    for j in 0..e {
                        prod[i + j] = (prod[i + j] + x[i] as u64 * y[j] as u64) % p;
                    }
                }
                for k in (e..2 * e - 1).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for i in 0..e {
                        let sub = c * modulus_poly[i] as u64 % p;
                        prod[k - e + i] = (prod[k - e + i] + p - sub) % p;
                    }
                }
                let z: Vec<u32> = prod[..e].iter().map(|&c| c as u32).collect();
                undigits(&z, p as u32)
            }
        }
    }

    pub fn pow(&self, mut a: Elem, mut exp: u64) -> Elem {
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        match &self.kind {
            RingKind::Residue { modulus: m } | RingKind::Field { p: m, degree: 1, .. } => {
                inv_mod(a as u64, *m as u64).map(|x| x as u32)
            }
            RingKind::Field { .. } => {
                if a == 0 {
                    None
                } else {
                    Some(self.pow(a, self.size as u64 - 2))
                }
            }
        }
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        match &self.kind {
            RingKind::Residue { modulus } => a != 0 && gcd(a as u64, *modulus as u64) == 1,
            RingKind::Field { .. } => a != 0,
        }
    }

    pub fn units(&self) -> Vec<Elem> {
        self.elements().filter(|&a| self.is_unit(a)).collect()
    }

    /// Parses an element from its integer encoding.
    pub fn parse_elem(&self, token: &str) -> Option<Elem> {
        token.parse::<u64>().ok().filter(|&v| v < self.size as u64).map(|v| v as Elem)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RingKind::Residue { modulus } => write!(f, "z{modulus}"),
            RingKind::Field { p, degree: 1, .. } => write!(f, "f{p}"),
            RingKind::Field { p, degree, modulus_poly } => {
                let coeffs: Vec<String> = modulus_poly.iter().map(|c| c.to_string()).collect();
                write!(f, "f{p}^{degree}:{}", coeffs.join(","))
            }
        }
    }
}

/// Ring specs: `z<m>`, `f<p>`, or `f<p>^<e>:<c0>,<c1>,...,<ce>` with the
/// modulus polynomial listed lowest degree first.
impl FromStr for Ring {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Ring, RingError> {
        let bad = || RingError::Parse(s.to_string());
        let lower = s.trim().to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix('z') {
            let m: u64 = rest.parse().map_err(|_| bad())?;
            return Ring::residue(m);
        }
        let rest = lower.strip_prefix("gf").or_else(|| lower.strip_prefix('f')).ok_or_else(bad)?;
        match rest.split_once('^') {
            None => {
                let p: u64 = rest.parse().map_err(|_| bad())?;
                Ring::prime_field(p)
            }
            Some((p, tail)) => {
                let p: u64 = p.parse().map_err(|_| bad())?;
                let (e, poly) = tail.split_once(':').ok_or_else(bad)?;
                let e: u32 = e.parse().map_err(|_| bad())?;
                let poly: Vec<u32> = poly
                    .split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad())?;
                Ring::field(p, e, &poly)
            }
        }
    }
}

fn digits(a: Elem, p: u32, degree: u32) -> [u32; MAX_DEGREE as usize] {
    let mut out = [0u32; MAX_DEGREE as usize];
    let mut a = a;
    for slot in out.iter_mut().take(degree as usize) {
        *slot = a % p;
        a /= p;
    }
    out
}

fn undigits(coeffs: &[u32], p: u32) -> Elem {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Returns `(g, s, t)` with `g = gcd(a, b) = s·a + t·b` and `g ≥ 0`.
pub(crate) fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, s, _) = xgcd((a % m) as i64, m as i64);
    (g == 1).then(|| s.rem_euclid(m as i64) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(p: u32, poly: &[u32]) -> bool {
    let degree = poly.len() - 1;
    for k in 1..=degree / 2 {
        let count = (p as u64).pow(k as u32);
        for code in 0..count {
            let mut divisor = Vec::with_capacity(k + 1);
            let mut c = code;
            for _ in 0..k {
                divisor.push((c % p as u64) as u32);
                c /= p as u64;
            }
            divisor.push(1);
            if poly_rem_is_zero(poly, &divisor, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(num: &[u32], monic_div: &[u32], p: u32) -> bool {
    let mut rem: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dk = monic_div.len() - 1;
    let p = p as u64;
    for top in (dk..rem.len()).rev() {
        let c = rem[top] % p;
        if c == 0 {
            continue;
        }
        for i in 0..=dk {
            let idx = top - dk + i;
            rem[idx] = (rem[idx] + p * p - c * monic_div[i] as u64 % p) % p;
        }
    }
    rem[..dk].iter().all(|&c| c % p == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Ring {
        Ring::field(2, 2, &[1, 1, 1]).unwrap()
    }

    #[test]
    fn constructs_supported_rings() {
        let z4 = Ring::residue(4).unwrap();
        assert_eq!(z4.elements().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        let f2 = Ring::field(2, 1, &[1, 1]).unwrap();
        assert_eq!(f2.size(), 2);
        assert_eq!(f4().size(), 4);
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(Ring::residue(1), Err(RingError::ModulusTooSmall(1)));
        assert_eq!(Ring::field(4, 1, &[0, 1]), Err(RingError::NotPrime(4)));
        // x^2 + 1 = (x + 1)^2 over F_2
        assert_eq!(Ring::field(2, 2, &[1, 0, 1]), Err(RingError::Reducible { p: 2 }));
        // (x^2 + x + 1)^2 has no roots but is reducible
        assert_eq!(Ring::field(2, 4, &[1, 0, 1, 0, 1]), Err(RingError::Reducible { p: 2 }));
        assert!(matches!(Ring::field(2, 2, &[1, 1, 0]), Err(RingError::BadModulus { .. })));
    }

    #[test]
    fn f4_has_no_root_of_modulus() {
        // irreducibility oracle: x^2+x+1 has no root in F_2
        for x in 0..2u32 {
            assert_ne!((x * x + x + 1) % 2, 0);
        }
        let f = f4();
        // x * x = x + 1
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1);
    }

    #[test]
    fn units_match_definitions() {
        assert_eq!(Ring::residue(4).unwrap().units(), vec![1, 3]);
        assert_eq!(Ring::residue(8).unwrap().units(), vec![1, 3, 5, 7]);
        assert_eq!(f4().units(), vec![1, 2, 3]);
        for ring in [Ring::residue(12).unwrap(), f4(), Ring::field(3, 2, &[1, 0, 1]).unwrap()] {
            for u in ring.units() {
                let v = ring.inv(u).unwrap();
                assert_eq!(ring.mul(u, v), 1, "{ring}: {u}");
            }
        }
        assert_eq!(Ring::residue(4).unwrap().inv(2), None);
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        use rand::{Rng, SeedableRng};
        let rings = [
            Ring::residue(4).unwrap(),
            Ring::residue(12).unwrap(),
            Ring::prime_field(7).unwrap(),
            f4(),
            Ring::field(3, 3, &[1, 2, 0, 1]).unwrap(),
            Ring::field(2, 4, &[1, 1, 0, 0, 1]).unwrap(),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for ring in &rings {
            for _ in 0..200 {
                let a = rng.gen_range(0..ring.size());
                let b = rng.gen_range(0..ring.size());
                let c = rng.gen_range(0..ring.size());
                assert_eq!(ring.mul(ring.mul(a, b), c), ring.mul(a, ring.mul(b, c)));
                assert_eq!(ring.add(ring.add(a, b), c), ring.add(a, ring.add(b, c)));
                assert_eq!(ring.mul(a, ring.add(b, c)), ring.add(ring.mul(a, b), ring.mul(a, c)));
                assert_eq!(ring.mul(a, b), ring.mul(b, a));
                assert_eq!(ring.add(a, ring.neg(a)), 0);
            }
        }
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["z4", "z12", "f2", "f5", "f2^2:1,1,1", "f3^2:1,0,1"] {
            let ring: Ring = s.parse().unwrap();
            assert_eq!(ring.to_string(), s);
        }
        assert!("q7".parse::<Ring>().is_err());
    }
}
