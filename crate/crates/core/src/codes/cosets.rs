use crate::algebra::{Elem, Ring, RingMatrix, RowReducer};
use crate::weights::WeightGrid;

use super::CodeError;

/// Default limit on the number of cosets a [`CosetSpace`] will index.
pub const DEFAULT_COSET_CAP: u128 = 1 << 22;

/// Dense indexing of the quotient `A^n / K` through canonical coset
/// representatives.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    ring: Ring,
    n: usize,
    reducer: RowReducer,
    radix: Vec<u32>,
    count: usize,
}

impl CosetSpace {
    pub fn new(ring: &Ring, n: usize, generators: &[Vec<Elem>]) -> Result<Self, CodeError> {
        Self::with_cap(ring, n, generators, DEFAULT_COSET_CAP)
    }

    pub fn with_cap(ring: &Ring, n: usize, generators: &[Vec<Elem>], cap: u128) -> Result<Self, CodeError> {
        let matrix = RingMatrix::from_rows(ring.clone(), n, generators)?;
        Ok(Self::from_reducer(ring, RowReducer::new(&matrix), cap)?)
    }

    pub fn from_reducer(ring: &Ring, reducer: RowReducer, cap: u128) -> Result<Self, CodeError> {
        let n = reducer.basis().cols();
        let count = reducer.quotient_size();
        if count > cap {
            return Err(CodeError::CapExceeded { needed: count, cap });
        }
        let radix = (0..n)
            .map(|c| match reducer.pivots().iter().find(|&&(pc, _)| pc == c) {
                Some(&(_, p)) if !ring.is_field() => p,
                Some(_) => 1,
                None => ring.size(),
            })
            .collect();
        Ok(CosetSpace { ring: ring.clone(), n, reducer, radix, count: count as usize })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of cosets.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn reducer(&self) -> &RowReducer {
        &self.reducer
    }

    /// Index of the coset containing `v`.
    pub fn id(&self, v: &[Elem]) -> usize {
        let r = self.reducer.reduce(v);
        self.id_of_reduced(&r)
    }

    fn id_of_reduced(&self, r: &[Elem]) -> usize {
        r.iter().zip(&self.radix).fold(0usize, |acc, (&x, &b)| acc * b as usize + x as usize)
    }

    /// Canonical representative of coset `id`.
    pub fn rep(&self, id: usize) -> Vec<Elem> {
        let mut out = vec![0; self.n];
        let mut rest = id;
        for i in (0..self.n).rev() {
            let b = self.radix[i] as usize;
            out[i] = (rest % b) as Elem;
            rest /= b;
        }
        out
    }

    /// Index of the coset of `rep(a) + rep(b)`.
    pub fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.rep(a), self.rep(b));
        let sum: Vec<Elem> = x.iter().zip(&y).map(|(&p, &q)| self.ring.add(p, q)).collect();
        self.id(&sum)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.rep(a), self.rep(b));
        let diff: Vec<Elem> = x.iter().zip(&y).map(|(&p, &q)| self.ring.sub(p, q)).collect();
        self.id(&diff)
    }

    /// Induced weight of every coset, scaled by the grid: a shortest-path
    /// sweep that adds one coordinate at a time.
    pub fn weights(&self, grid: &WeightGrid) -> Vec<i64> {
        let q = self.ring.size();
        let mut best = vec![i64::MAX; self.count];
        best[self.id(&vec![0; self.n])] = 0;
        for i in 0..self.n {
            let mut next = best.clone();
            for (c, &bc) in best.iter().enumerate() {
                if bc == i64::MAX {
                    continue;
                }
                let rep = self.rep(c);
                for a in 1..q {
                    let mut v = rep.clone();
                    v[i] = self.ring.add(v[i], a);
                    let target = self.id(&v);
                    let cand = bc + grid.value(a);
                    if cand < next[target] {
                        next[target] = cand;
                    }
                }
            }
            best = next;
        }
        debug_assert!(best.iter().all(|&b| b != i64::MAX));
        best
    }

    /// Canonical representatives of every coset, by index.
    pub fn all_reps(&self) -> Vec<Vec<Elem>> {
        (0..self.count).map(|i| self.rep(i)).collect()
    }
}
