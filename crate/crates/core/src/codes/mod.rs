//! Codes in quotient modules `A^n / K`: parameters, minimum induced
//! distance, error-correction checks and exhaustive optima.

mod canon;
mod cosets;
mod file;
mod optimum;

use std::fmt;

use thiserror::Error;

use crate::algebra::{vec_sub, Elem, MatrixError, Ring};
use crate::weights::{
    induced_weight, puncture, submodule_span, Rational, Submodule, WeightError, WeightFunction,
};

pub use cosets::{CosetSpace, DEFAULT_COSET_CAP};
pub use file::{parse_vector_row, CodeFile};
pub use optimum::{exhaustive_optimum, KernelFamily, OptimumSearch, SearchLimits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("a code with a single codeword has no minimum distance")]
    DegenerateCode,
    #[error("{needed} cosets exceed the enumeration cap of {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("representatives {0} and {1} lie in the same coset")]
    SameCoset(usize, usize),
    #[error("vector of length {got} where {expected} was expected")]
    Length { expected: usize, got: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// A set of cosets `u + K` of a submodule `K ⊂ A^n`, one representative each.
#[derive(Debug, Clone)]
pub struct QuotientCode {
    weight: WeightFunction,
    kernel: Submodule,
    reps: Vec<Vec<Elem>>,
}

/// `(n, s, ℓ, |C|, d)`; `d` is `None` for codes of size one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeParams {
    pub n: usize,
    pub s: usize,
    pub ell: usize,
    pub size: usize,
    pub d: Option<Rational>,
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.d.map_or_else(|| "undefined".to_string(), |d| crate::weights::format_rational(&d));
        write!(f, "(n={}, s={}, ell={}, size={}, d={})", self.n, self.s, self.ell, self.size, d)
    }
}

impl QuotientCode {
    /// Fails if two representatives share a coset or the weight has no
    /// vector arithmetic.
    pub fn new(weight: WeightFunction, kernel: Submodule, reps: Vec<Vec<Elem>>) -> Result<Self, CodeError> {
        if weight.ring()? != kernel.ring() {
            return Err(CodeError::InvalidParams(format!(
                "weight is on {} but the kernel is over {}",
                weight.alphabet(),
                kernel.ring()
            )));
        }
        let n = kernel.len();
        if let Some(r) = reps.iter().find(|r| r.len() != n) {
            return Err(CodeError::Length { expected: n, got: r.len() });
        }
        let reduced: Vec<Vec<Elem>> = reps.iter().map(|r| kernel.reducer().reduce(r)).collect();
        for i in 0..reduced.len() {
            if let Some(j) = (i + 1..reduced.len()).find(|&j| reduced[i] == reduced[j]) {
                return Err(CodeError::SameCoset(i, j));
            }
        }
        Ok(QuotientCode { weight, kernel, reps })
    }

    /// Every coset of `K` whose representative is listed, deduplicated.
    pub fn from_vectors(
        weight: WeightFunction,
        kernel: Submodule,
        vectors: &[Vec<Elem>],
    ) -> Result<Self, CodeError> {
        let mut seen = std::collections::HashSet::new();
        let reps: Vec<Vec<Elem>> =
            vectors.iter().filter(|v| seen.insert(kernel.reducer().reduce(v))).cloned().collect();
        QuotientCode::new(weight, kernel, reps)
    }

    pub fn ring(&self) -> &Ring {
        self.kernel.ring()
    }

    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }

    pub fn kernel(&self) -> &Submodule {
        &self.kernel
    }

    pub fn reps(&self) -> &[Vec<Elem>] {
        &self.reps
    }

    pub fn n(&self) -> usize {
        self.kernel.len()
    }

    pub fn size(&self) -> usize {
        self.reps.len()
    }

    /// `supp(M)` for `M = ∪ (u + K)`, zero-based. Every coordinate in
    /// `supp(K)` is hit by each coset, so this is `supp(K)` joined with the
    /// supports of the representatives.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&i| self.kernel.support().contains(&i) || self.reps.iter().any(|r| r[i] != 0))
            .collect()
    }

    /// The coset space when small enough to index densely.
    fn coset_space(&self) -> Option<(CosetSpace, Vec<i64>)> {
        let space = CosetSpace::from_reducer(self.ring(), self.kernel.reducer().clone(), DEFAULT_COSET_CAP).ok()?;
        let table = space.weights(&self.weight.grid());
        Some((space, table))
    }

    /// Induced distance `ŵ(x − y)`.
    pub fn distance(&self, x: &[Elem], y: &[Elem]) -> Rational {
        induced_weight(&self.weight, &self.kernel, &vec_sub(self.ring(), x, y))
    }
}

impl QuotientCode {
    pub fn min_induced_distance(&self) -> Result<Rational, CodeError> {
        min_induced_distance(self)
    }

    pub fn params(&self) -> CodeParams {
        code_params(self)
    }
}

/// Minimum of `ŵ(u − v)` over ordered pairs of distinct representatives.
pub fn min_induced_distance(code: &QuotientCode) -> Result<Rational, CodeError> {
    if code.size() < 2 {
        return Err(CodeError::DegenerateCode);
    }
    let ring = code.ring();
    let pairs = code.size() * (code.size() - 1);
    let enumerate_cost = pairs.saturating_mul(code.kernel.size());
    let table = if enumerate_cost > 1 << 16 { code.coset_space() } else { None };
    let mut best: Option<Rational> = None;
    for (i, u) in code.reps.iter().enumerate() {
        for (j, v) in code.reps.iter().enumerate() {
            if i == j {
                continue;
            }
            let diff = vec_sub(ring, u, v);
            let d = match &table {
                Some((space, weights)) => code.weight.grid().to_rational(weights[space.id(&diff)]),
                None => induced_weight(&code.weight, &code.kernel, &diff),
            };
            if best.map_or(true, |b| d < b) {
                best = Some(d);
            }
        }
    }
    Ok(best.expect("at least one pair"))
}

pub fn code_params(code: &QuotientCode) -> CodeParams {
    CodeParams {
        n: code.n(),
        s: code.support().len(),
        ell: code.kernel.ell(),
        size: code.size(),
        d: min_induced_distance(code).ok(),
    }
}

/// Restricts `M` and `K` to the coordinates of `supp(M)`.
pub fn puncture_to_support(code: &QuotientCode) -> Result<QuotientCode, CodeError> {
    let support = code.support();
    let dead: Vec<usize> = (0..code.n()).filter(|i| !support.contains(i)).collect();
    let gens: Vec<Vec<Elem>> = code.kernel.generators().iter().map(|g| puncture(g, &dead)).collect();
    let kernel = submodule_span(code.ring(), support.len(), &gens)?;
    let reps = code.reps.iter().map(|r| puncture(r, &dead)).collect();
    QuotientCode::new(code.weight.clone(), kernel, reps)
}

/// Outcome of [`is_delta_error_correcting`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaCheck {
    Pass,
    /// `received` is within `delta` of codeword `nearest` but no closer to it
    /// than to codeword `rival` (indices into the representative list).
    Fail { received: Vec<Elem>, nearest: usize, rival: usize },
}

impl DeltaCheck {
    pub fn passed(&self) -> bool {
        matches!(self, DeltaCheck::Pass)
    }
}

/// Checks every coset `z + K`: whenever `d̂(z, c) < delta`, `c` must be the
/// strictly nearest codeword.
pub fn is_delta_error_correcting(code: &QuotientCode, delta: Rational) -> Result<DeltaCheck, CodeError> {
    if code.size() < 2 {
        return Ok(DeltaCheck::Pass);
    }
    let space = CosetSpace::from_reducer(code.ring(), code.kernel.reducer().clone(), DEFAULT_COSET_CAP)?;
    let grid = code.weight.grid();
    let table = space.weights(&grid);
    let rep_ids: Vec<usize> = code.reps.iter().map(|r| space.id(r)).collect();
    for z in 0..space.count() {
        let dists: Vec<Rational> = rep_ids.iter().map(|&c| grid.to_rational(table[space.sub(z, c)])).collect();
        for (c, &dc) in dists.iter().enumerate() {
            if dc >= delta {
                continue;
            }
            if let Some(rival) = (0..dists.len()).find(|&o| o != c && dists[o] <= dc) {
                return Ok(DeltaCheck::Fail { received: space.rep(z), nearest: c, rival });
            }
        }
    }
    Ok(DeltaCheck::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::vec_add;

    fn digits(s: &str) -> Vec<Elem> {
        s.bytes().map(|b| (b - b'0') as Elem).collect()
    }

    fn z4_code() -> QuotientCode {
        let z4 = Ring::residue(4).unwrap();
        let lee = WeightFunction::homogeneous(&z4, Rational::from(1)).unwrap();
        let k = submodule_span(&z4, 7, &[digits("0111333")]).unwrap();
        QuotientCode::new(lee, k, vec![digits("1022012"), digits("3331321")]).unwrap()
    }

    #[test]
    fn z4_example_parameters() {
        let code = z4_code();
        assert_eq!(code.min_induced_distance().unwrap(), Rational::from(8));
        assert_eq!(code.params(), CodeParams { n: 7, s: 7, ell: 6, size: 2, d: Some(Rational::from(8)) });
        let same = puncture_to_support(&code).unwrap();
        assert_eq!(same.params(), code.params());
    }

    #[test]
    fn representatives_must_differ_modulo_k() {
        let code = z4_code();
        let k = code.kernel().clone();
        let err = QuotientCode::new(code.weight().clone(), k, vec![digits("1022012"), digits("1133301")]);
        assert!(matches!(err, Err(CodeError::SameCoset(0, 1))));
    }

    #[test]
    fn trivial_codes() {
        let f2 = Ring::prime_field(2).unwrap();
        let ham = WeightFunction::homogeneous(&f2, Rational::new(1, 2)).unwrap();
        let k = submodule_span(&f2, 4, &[]).unwrap();
        let code = QuotientCode::new(ham.clone(), k.clone(), vec![digits("0000"), digits("1000")]).unwrap();
        assert_eq!(code.min_induced_distance().unwrap(), Rational::from(1));
        let single = QuotientCode::new(ham, k, vec![digits("0000")]).unwrap();
        assert_eq!(single.min_induced_distance(), Err(CodeError::DegenerateCode));
        assert_eq!(single.params(), CodeParams { n: 4, s: 0, ell: 0, size: 1, d: None });
        let empty = puncture_to_support(&single).unwrap();
        assert_eq!(empty.n(), 0);
        assert_eq!(empty.size(), 1);
        assert!(is_delta_error_correcting(&single, Rational::from(5)).unwrap().passed());
    }

    #[test]
    fn puncturing_drops_dead_coordinates() {
        let z4 = Ring::residue(4).unwrap();
        let lee = WeightFunction::homogeneous(&z4, Rational::from(1)).unwrap();
        let k = submodule_span(&z4, 5, &[digits("01030")]).unwrap();
        let code = QuotientCode::new(lee, k, vec![digits("00000"), digits("10200"), digits("21110")]).unwrap();
        let p = puncture_to_support(&code).unwrap();
        assert_eq!(p.n(), 4);
        assert_eq!(p.size(), code.size());
        assert_eq!(p.min_induced_distance(), code.min_induced_distance());
    }

    #[test]
    fn delta_correction_on_a_repetition_code() {
        let f2 = Ring::prime_field(2).unwrap();
        let ham = WeightFunction::homogeneous(&f2, Rational::new(1, 2)).unwrap();
        let k = submodule_span(&f2, 3, &[]).unwrap();
        let rep3 = QuotientCode::new(ham, k, vec![digits("000"), digits("111")]).unwrap();
        assert!(is_delta_error_correcting(&rep3, Rational::new(3, 2)).unwrap().passed());
        assert!(is_delta_error_correcting(&rep3, Rational::from(2)).unwrap().passed());
        assert!(!is_delta_error_correcting(&rep3, Rational::new(5, 2)).unwrap().passed());
    }

    #[test]
    fn distance_is_representative_invariant() {
        let code = z4_code();
        let ring = code.ring().clone();
        for k in code.kernel().elements() {
            let shifted = vec![vec_add(&ring, &code.reps()[0], k), code.reps()[1].clone()];
            let other = QuotientCode::new(code.weight().clone(), code.kernel().clone(), shifted).unwrap();
            assert_eq!(other.min_induced_distance().unwrap(), Rational::from(8));
        }
    }
}
