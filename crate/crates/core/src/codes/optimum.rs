use std::collections::HashSet;

use crate::algebra::{row_canonical, vec_scale, Elem, Ring, RingMatrix, RowReducer};
use crate::weights::{Rational, WeightFunction, WeightGrid};

use super::canon::canonical_basis;
use super::{CodeError, CosetSpace};

const CANON_LIMIT: usize = 1 << 12;

/// Work limits for [`OptimumSearch`]. Searches that would exceed them fail
/// with [`CodeError::CapExceeded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest ambient space `|A|^s` searched.
    pub max_ambient: u128,
    /// Largest number of candidate kernels `K ⊂ A^ℓ` examined.
    pub max_submodules: usize,
    /// Branch-and-bound nodes allowed per clique search.
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_ambient: 1 << 16, max_submodules: 10_000, max_nodes: 2_000_000 }
    }
}

/// Largest `|C|` over quotient codes `C ⊂ A^n/K` with `|supp K| = ℓ`,
/// `|supp M| = s` and minimum induced distance at least `d`.
pub fn exhaustive_optimum(
    weight: &WeightFunction,
    n: usize,
    s: usize,
    ell: usize,
    d: Rational,
) -> Result<u64, CodeError> {
    if n < s {
        return Err(CodeError::InvalidParams(format!("n = {n} < s = {s}")));
    }
    let ring = weight.ring()?;
    let ambient = (ring.size() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let limits = SearchLimits::default();
    if ambient > limits.max_ambient {
        return Err(CodeError::CapExceeded { needed: ambient, cap: limits.max_ambient });
    }
    OptimumSearch::new(weight, s, ell, limits)?.optimum(d)
}

/// Exhaustive search for optimal quotient codes at fixed `(s, ℓ)`.
///
/// Coordinates are permuted so that `supp K` is the first `ℓ` positions and
/// `supp M` the first `s`; positions past `s` never matter, so the answer does
/// not depend on `n`. Translating a code does not change its distances, so
/// every code is taken to contain the zero coset, and the rest of it is a
/// clique in the graph joining cosets at induced distance at least `d`. A
/// maximal code supported inside the first `s` positions can be made to
/// cover all of them by switching on unused coordinates of one codeword,
/// which only increases its distances.
pub struct OptimumSearch {
    grid: WeightGrid,
    s: usize,
    ell: usize,
    limits: SearchLimits,
    kernels: Vec<KernelData>,
}

struct KernelData {
    weights: Vec<i64>,
    /// `diff[a * count + b]` indexes the coset `a − b`; filled for small spaces.
    diff: Option<Vec<u16>>,
    space: CosetSpace,
    translate: Vec<Vec<u32>>,
    neg: Vec<u32>,
}

impl KernelData {
    fn sub(&self, a: usize, b: usize) -> usize {
        match &self.diff {
            Some(table) => table[a * self.space.count() + b] as usize,
            None => self.add_by_tables(a, self.neg[b] as usize),
        }
    }

    fn add_by_tables(&self, a: usize, b: usize) -> usize {
        let q = self.space.ring().size() as usize;
        let rep = self.space.rep(b);
        let mut cur = a;
        for (i, &x) in rep.iter().enumerate() {
            if x != 0 {
                cur = self.translate[i * q + x as usize][cur] as usize;
            }
        }
        cur
    }
}

impl OptimumSearch {
    pub fn new(weight: &WeightFunction, s: usize, ell: usize, limits: SearchLimits) -> Result<Self, CodeError> {
        let family = KernelFamily::new(weight, ell, limits)?;
        Self::with_family(weight, s, &family, limits)
    }

    /// Search over the kernels of `family`, which may be shared between
    /// searches with different `s`.
    pub fn with_family(
        weight: &WeightFunction,
        s: usize,
        family: &KernelFamily,
        limits: SearchLimits,
    ) -> Result<Self, CodeError> {
        let ell = family.ell;
        if ell > s {
            return Err(CodeError::InvalidParams(format!("ell = {ell} > s = {s}")));
        }
        let ring = weight.ring()?.clone();
        if ring != family.ring {
            return Err(CodeError::InvalidParams(format!("kernels over {} for a weight over {ring}", family.ring)));
        }
        let ambient = (ring.size() as u128).checked_pow(s as u32).unwrap_or(u128::MAX);
        if ambient > limits.max_ambient {
            return Err(CodeError::CapExceeded { needed: ambient, cap: limits.max_ambient });
        }
        let grid = weight.grid();
        let mut kernels = Vec::new();
        for gens in &family.kernels {
            let padded: Vec<Vec<Elem>> =
                gens.iter().map(|g| g.iter().copied().chain(std::iter::repeat(0).take(s - ell)).collect()).collect();
            let matrix = RingMatrix::from_rows(ring.clone(), s, &padded)?;
            let space = CosetSpace::from_reducer(&ring, RowReducer::new(&matrix), ambient)?;
            kernels.push(KernelData::build(space, &grid));
        }
        Ok(OptimumSearch { grid, s, ell, limits, kernels })
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Number of kernels searched.
    pub fn kernel_count(&self) -> usize {
        self.kernels.len()
    }

    pub fn optimum(&self, d: Rational) -> Result<u64, CodeError> {
        // integer threshold: ŵ ≥ d  ⇔  scaled ŵ ≥ ceil(d·scale)
        let threshold = (d * self.grid.scale()).ceil().to_integer();
        let mut best = 1u64;
        for k in &self.kernels {
            let cands: Vec<usize> = (0..k.space.count()).filter(|&c| k.weights[c] >= threshold.max(1)).collect();
            if threshold <= 0 {
                best = best.max(k.space.count() as u64);
                continue;
            }
            if (cands.len() as u64) < best {
                continue;
            }
            let graph = BitGraph::new(cands.len(), |i, j| k.weights[k.sub(cands[i], cands[j])] >= threshold);
            let clique = graph.max_clique(best.saturating_sub(1) as usize, self.limits.max_nodes).ok_or(
                CodeError::CapExceeded { needed: self.limits.max_nodes as u128 + 1, cap: self.limits.max_nodes as u128 },
            )?;
            best = best.max(clique as u64 + 1);
        }
        Ok(best)
    }
}

impl KernelData {
    fn build(space: CosetSpace, grid: &WeightGrid) -> Self {
        let ring = space.ring().clone();
        let q = ring.size() as usize;
        let count = space.count();
        let n = space.len();
        let reps = space.all_reps();
        let mut translate = vec![Vec::new(); n * q];
        for i in 0..n {
            for a in 1..q {
                translate[i * q + a] = reps
                    .iter()
                    .map(|r| {
                        let mut v = r.clone();
                        v[i] = ring.add(v[i], a as Elem);
                        space.id(&v) as u32
                    })
                    .collect();
            }
        }
        let neg = reps.iter().map(|r| space.id(&r.iter().map(|&x| ring.neg(x)).collect::<Vec<_>>()) as u32).collect();
        let weights = space.weights(grid);
        let mut data = KernelData { weights, diff: None, space, translate, neg };
        if count <= 4096 {
            let mut table = vec![0u16; count * count];
            for a in 0..count {
                for b in 0..count {
                    table[a * count + b] = data.add_by_tables(a, data.neg[b] as usize) as u16;
                }
            }
            data.diff = Some(table);
        }
        data
    }
}

/// The kernels an optimal code with `|supp K| = ell` may be assumed to use,
/// one per equivalence class.
#[derive(Debug, Clone)]
pub struct KernelFamily {
    ring: Ring,
    ell: usize,
    kernels: Vec<Vec<Vec<Elem>>>,
}

impl KernelFamily {
    pub fn new(weight: &WeightFunction, ell: usize, limits: SearchLimits) -> Result<Self, CodeError> {
        let ring = weight.ring()?.clone();
        let units = ring.units();
        let unit_invariant =
            ring.elements().all(|a| units.iter().all(|&u| weight.weight(ring.mul(u, a)) == weight.weight(a)));
        let kernels = full_support_submodules(&ring, ell, unit_invariant, limits.max_submodules)?;
        Ok(KernelFamily { ring, ell, kernels })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    /// Generator lists of the kernels, as vectors of length `ell`.
    pub fn generators(&self) -> &[Vec<Vec<Elem>>] {
        &self.kernels
    }
}

/// Full-support kernels `K ⊂ A^ell`, one per class under coordinate
/// permutations, containing every minimal one.
///
/// Enlarging `K` lowers every induced distance and merges cosets, so a code
/// over a larger kernel lifts to a code of the same size over any smaller
/// one; only minimal full-support kernels matter. Such a `K` is reached by
/// adding one vector at a time, each enlarging the support, and after
/// reordering coordinates by first coverage every intermediate support is an
/// initial segment. The newly covered coordinates of each step may also be
/// permuted among themselves, and rescaled by units when the weight is
/// unit-invariant, so their entries are taken sorted and reduced to the
/// smallest element of their unit orbit.
fn full_support_submodules(
    ring: &Ring,
    ell: usize,
    unit_invariant: bool,
    cap: usize,
) -> Result<Vec<Vec<Vec<Elem>>>, CodeError> {
    if ell == 0 {
        return Ok(vec![Vec::new()]);
    }
    let q = ring.size() as usize;
    let units = ring.units();
    let canonical_entry: Vec<bool> = ring
        .elements()
        .map(|a| !unit_invariant || units.iter().all(|&u| ring.mul(u, a) >= a))
        .collect();
    let vectors: Vec<Vec<Elem>> = (1..q.pow(ell as u32))
        .map(|mut code| {
            (0..ell)
                .map(|_| {
                    let x = (code % q) as Elem;
                    code /= q;
                    x
                })
                .collect()
        })
        .collect();
    let admissible_block = |block: &[Elem]| {
        block.windows(2).all(|w| w[0] <= w[1]) && block.iter().all(|&x| canonical_entry[x as usize])
    };
    // equivalent states have equivalent extensions, so states are merged up
    // to a relabeling of their covered coordinates
    let key = |gens: &[Vec<Elem>], t: usize| -> Vec<Vec<Elem>> {
        let head: Vec<Vec<Elem>> = gens.iter().map(|g| g[..t].to_vec()).collect();
        match canonical_basis(ring, t, &head, CANON_LIMIT) {
            Some(rows) => rows
                .into_iter()
                .map(|mut r| {
                    r.resize(ell, 0);
                    r
                })
                .collect(),
            None => row_canonical(&RingMatrix::from_rows(ring.clone(), ell, gens).expect("lengths agree")).row_vectors(),
        }
    };
    let mut raw_seen: HashSet<Vec<Vec<Elem>>> = HashSet::new();
    let mut seen: HashSet<Vec<Vec<Elem>>> = HashSet::new();
    let mut found: HashSet<Vec<Vec<Elem>>> = HashSet::new();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<Vec<Elem>>, usize)> = vec![(Vec::new(), 0)];
    while let Some((gens, t)) = stack.pop() {
        let reducer = RowReducer::new(&RingMatrix::from_rows(ring.clone(), ell, &gens).expect("lengths agree"));
        for v in &vectors {
            // the new support must be [0, t') for some t' > t
            let tail = v[t..].iter().take_while(|&&x| x != 0).count();
            if tail == 0 || v[t + tail..].iter().any(|&x| x != 0) || !admissible_block(&v[t..t + tail]) {
                continue;
            }
            if reducer.reduce(v) != *v {
                continue;
            }
            // a unit multiple spans the same module; keep the smallest
            let dominated = units.iter().any(|&u| {
                let w = reducer.reduce(&vec_scale(ring, u, v));
                w < *v && admissible_block(&w[t..t + tail])
            });
            if dominated {
                continue;
            }
            let mut next = gens.clone();
            next.push(v.clone());
            let raw = row_canonical(&RingMatrix::from_rows(ring.clone(), ell, &next).expect("lengths agree")).row_vectors();
            if !raw_seen.insert(raw) {
                continue;
            }
            if raw_seen.len() > cap {
                return Err(CodeError::CapExceeded { needed: raw_seen.len() as u128, cap: cap as u128 });
            }
            let canon = key(&next, t + tail);
            if t + tail == ell {
                if found.insert(canon.clone()) {
                    out.push(canon);
                }
            } else if seen.insert(canon.clone()) {
                stack.push((canon, t + tail));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Dense bitset graph with a coloring branch-and-bound maximum clique search.
struct BitGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl BitGraph {
    fn new(n: usize, edge: impl Fn(usize, usize) -> bool) -> Self {
        let words = n.div_ceil(64).max(1);
        let mut adj = vec![0u64; n * words];
        for i in 0..n {
            for j in i + 1..n {
                if edge(i, j) {
                    adj[i * words + j / 64] |= 1 << (j % 64);
                    adj[j * words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        BitGraph { n, words, adj }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    /// Size of a maximum clique if it exceeds `floor`, else `floor`; `None`
    /// when more than `budget` search nodes would be needed.
    fn max_clique(&self, floor: usize, budget: u64) -> Option<usize> {
        if self.n == 0 {
            return Some(floor);
        }
        let mut all = vec![0u64; self.words];
        for v in 0..self.n {
            all[v / 64] |= 1 << (v % 64);
        }
        let mut best = floor;
        let mut nodes = 0u64;
        self.expand(&all, 0, &mut best, &mut nodes, budget).then_some(best)
    }

    fn expand(&self, cand: &[u64], size: usize, best: &mut usize, nodes: &mut u64, budget: u64) -> bool {
        *nodes += 1;
        if *nodes > budget {
            return false;
        }
        let (order, colors) = self.color_sort(cand);
        let mut remaining = cand.to_vec();
        for idx in (0..order.len()).rev() {
            if size + colors[idx] <= *best {
                return true;
            }
            let v = order[idx];
            let next: Vec<u64> = remaining.iter().zip(self.row(v)).map(|(a, b)| a & b).collect();
            if next.iter().all(|&w| w == 0) {
                if size + 1 > *best {
                    *best = size + 1;
                }
            } else if !self.expand(&next, size + 1, best, nodes, budget) {
                return false;
            }
            remaining[v / 64] &= !(1 << (v % 64));
        }
        true
    }

    /// Greedy coloring; returns vertices in color order with the running
    /// color count, which bounds the clique size among the vertices so far.
    fn color_sort(&self, cand: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = cand.to_vec();
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut color = 0;
        while uncolored.iter().any(|&w| w != 0) {
            color += 1;
            let mut avail = uncolored.clone();
            while let Some(v) = first_bit(&avail) {
                avail[v / 64] &= !(1 << (v % 64));
                uncolored[v / 64] &= !(1 << (v % 64));
                for (a, b) in avail.iter_mut().zip(self.row(v)) {
                    *a &= !b;
                }
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }
}

fn first_bit(bits: &[u64]) -> Option<usize> {
    bits.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}
