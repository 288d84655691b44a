use std::collections::HashSet;

use num::Zero;

use super::{vector_weight, Rational, WeightError, WeightFunction};
use crate::algebra::{vec_add, vec_scale, Elem, Ring, RingMatrix, RowReducer};

pub const DEFAULT_SPAN_CAP: usize = 1 << 24;

/// A submodule of `A^n` with its elements enumerated.
#[derive(Debug, Clone)]
pub struct Submodule {
    ring: Ring,
    n: usize,
    generators: Vec<Vec<Elem>>,
    elements: Vec<Vec<Elem>>,
    support: Vec<usize>,
    reducer: RowReducer,
}

impl Submodule {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Ambient length `n`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn generators(&self) -> &[Vec<Elem>] {
        &self.generators
    }

    /// All elements, sorted lexicographically.
    pub fn elements(&self) -> &[Vec<Elem>] {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// Zero-based coordinates where some element is nonzero.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn ell(&self) -> usize {
        self.support.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        v.len() == self.n && self.reducer.contains(v)
    }

    /// Canonical reducer for the coset `v + K`.
    pub fn reducer(&self) -> &RowReducer {
        &self.reducer
    }

    pub fn generator_matrix(&self) -> RingMatrix {
        RingMatrix::from_rows(self.ring.clone(), self.n, &self.generators).expect("generators have length n")
    }
}

pub fn submodule_span(ring: &Ring, n: usize, generators: &[Vec<Elem>]) -> Result<Submodule, WeightError> {
    submodule_span_with_cap(ring, n, generators, DEFAULT_SPAN_CAP)
}

/// Enumerates the closure of `generators` under addition and scalar
/// multiplication, giving up once more than `cap` elements are found.
pub fn submodule_span_with_cap(
    ring: &Ring,
    n: usize,
    generators: &[Vec<Elem>],
    cap: usize,
) -> Result<Submodule, WeightError> {
    if let Some(g) = generators.iter().find(|g| g.len() != n) {
        return Err(WeightError::Length { expected: n, got: g.len() });
    }
    let mut seen: HashSet<Vec<Elem>> = HashSet::from([vec![0; n]]);
    let mut elements = vec![vec![0; n]];
    for g in generators {
        let multiples: Vec<Vec<Elem>> = {
            let mut m: Vec<Vec<Elem>> = ring.elements().skip(1).map(|a| vec_scale(ring, a, g)).collect();
            m.sort();
            m.dedup();
            m.retain(|v| v.iter().any(|&x| x != 0));
            m
        };
        // Rg is an additive group, so one pass over the old elements suffices
        let base_len = elements.len();
        for i in 0..base_len {
            for mult in &multiples {
                let v = vec_add(ring, &elements[i], mult);
                if seen.insert(v.clone()) {
                    elements.push(v);
                    if elements.len() > cap {
                        return Err(WeightError::CapExceeded { reached: elements.len() });
                    }
                }
            }
        }
    }
    elements.sort();
    let support = (0..n).filter(|&i| elements.iter().any(|v| v[i] != 0)).collect();
    let matrix = RingMatrix::from_rows(ring.clone(), n, generators).expect("lengths checked");
    Ok(Submodule {
        ring: ring.clone(),
        n,
        generators: generators.to_vec(),
        elements,
        support,
        reducer: RowReducer::new(&matrix),
    })
}

/// `min { w(z) : z ∈ x + K }`.
pub fn induced_weight(w: &WeightFunction, k: &Submodule, x: &[Elem]) -> Rational {
    let ring = k.ring();
    k.elements()
        .iter()
        .map(|z| vector_weight(w, &vec_add(ring, x, z)))
        .min()
        .expect("a submodule contains zero")
}

/// Average weight over the coset `x + K`, computed by enumeration and checked
/// against the closed form `γ·|supp K| + w(x restricted off supp K)`.
pub fn avg_coset_weight(w: &WeightFunction, k: &Submodule, x: &[Elem]) -> Result<Rational, WeightError> {
    if x.len() != k.len() {
        return Err(WeightError::Length { expected: k.len(), got: x.len() });
    }
    let ring = k.ring();
    let total: Rational = k.elements().iter().map(|z| vector_weight(w, &vec_add(ring, x, z))).sum();
    let enumerated = total / Rational::from(k.size() as i64);
    let closed = w.gamma() * Rational::from(k.ell() as i64) + vector_weight(w, &puncture(x, k.support()));
    if enumerated != closed {
        return Err(WeightError::LemmaViolation { enumerated, closed });
    }
    debug_assert!(enumerated >= Rational::zero());
    Ok(enumerated)
}

/// Drops the coordinates listed in `x` (zero-based), keeping order.
pub fn puncture(v: &[Elem], x: &[usize]) -> Vec<Elem> {
    v.iter().enumerate().filter(|(i, _)| !x.contains(i)).map(|(_, &a)| a).collect()
}
