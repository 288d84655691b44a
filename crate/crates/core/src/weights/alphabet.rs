use std::fmt;

use crate::algebra::{Elem, Ring};

/// The minimum a weight table needs from its alphabet: a finite set of
/// integer-encoded elements closed under addition and multiplication.
pub trait FiniteRing {
    fn size(&self) -> u32;
    fn add(&self, a: Elem, b: Elem) -> Elem;
    fn neg(&self, a: Elem) -> Elem;
    fn mul(&self, a: Elem, b: Elem) -> Elem;

    fn elements(&self) -> std::ops::Range<Elem> {
        0..self.size()
    }

    /// The left ideal `Rx`, as a sorted element list.
    fn left_ideal(&self, x: Elem) -> Vec<Elem> {
        let mut out: Vec<Elem> = self.elements().map(|r| self.mul(r, x)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl FiniteRing for Ring {
    fn size(&self) -> u32 {
        Ring::size(self)
    }

    fn add(&self, a: Elem, b: Elem) -> Elem {
        Ring::add(self, a, b)
    }

    fn neg(&self, a: Elem) -> Elem {
        Ring::neg(self, a)
    }

    fn mul(&self, a: Elem, b: Elem) -> Elem {
        Ring::mul(self, a, b)
    }
}

/// The ring of 2×2 matrices over a finite field. `[[a, b], [c, d]]` is encoded
/// as `a + q·b + q²·c + q³·d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixRing2 {
    field: Ring,
}

impl MatrixRing2 {
    /// Returns `None` unless `field` is a field.
    pub fn new(field: Ring) -> Option<Self> {
        field.is_field().then_some(MatrixRing2 { field })
    }

    pub fn field(&self) -> &Ring {
        &self.field
    }

    pub fn encode(&self, m: [Elem; 4]) -> Elem {
        let q = self.field.size();
        m.iter().rev().fold(0, |acc, &x| acc * q + x)
    }

    pub fn decode(&self, e: Elem) -> [Elem; 4] {
        let q = self.field.size();
        [e % q, (e / q) % q, (e / (q * q)) % q, e / (q * q * q)]
    }

    pub fn rank(&self, e: Elem) -> u32 {
        let [a, b, c, d] = self.decode(e);
        let f = &self.field;
        if e == 0 {
            0
        } else if f.sub(f.mul(a, d), f.mul(b, c)) != 0 {
            2
        } else {
            1
        }
    }
}

impl FiniteRing for MatrixRing2 {
    fn size(&self) -> u32 {
        self.field.size().pow(4)
    }

    fn add(&self, x: Elem, y: Elem) -> Elem {
        let (x, y) = (self.decode(x), self.decode(y));
        let f = &self.field;
        self.encode([f.add(x[0], y[0]), f.add(x[1], y[1]), f.add(x[2], y[2]), f.add(x[3], y[3])])
    }

    fn neg(&self, x: Elem) -> Elem {
        let x = self.decode(x);
        let f = &self.field;
        self.encode([f.neg(x[0]), f.neg(x[1]), f.neg(x[2]), f.neg(x[3])])
    }

    fn mul(&self, x: Elem, y: Elem) -> Elem {
        let ([a, b, c, d], [e, g, h, k]) = (self.decode(x), self.decode(y));
        let f = &self.field;
        let dot = |p: Elem, q: Elem, r: Elem, s: Elem| f.add(f.mul(p, q), f.mul(r, s));
        self.encode([dot(a, e, b, h), dot(a, g, b, k), dot(c, e, d, h), dot(c, g, d, k)])
    }
}

/// The alphabet a weight table is defined on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Alphabet {
    Ring(Ring),
    Matrix2(MatrixRing2),
}

impl Alphabet {
    pub fn size(&self) -> u32 {
        match self {
            Alphabet::Ring(r) => r.size(),
            Alphabet::Matrix2(m) => m.size(),
        }
    }

    /// The underlying ring when the alphabet supports vector arithmetic.
    pub fn ring(&self) -> Option<&Ring> {
        match self {
            Alphabet::Ring(r) => Some(r),
            Alphabet::Matrix2(_) => None,
        }
    }

    pub fn as_finite_ring(&self) -> &dyn FiniteRing {
        match self {
            Alphabet::Ring(r) => r,
            Alphabet::Matrix2(m) => m,
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Ring(r) => write!(f, "{r}"),
            Alphabet::Matrix2(m) => write!(f, "mat2({})", m.field),
        }
    }
}
