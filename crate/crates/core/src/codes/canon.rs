use std::collections::{HashMap, HashSet};

use crate::algebra::{row_canonical, vec_add, vec_scale, Elem, Ring, RingMatrix};

/// Canonical basis of the submodule spanned by `gens` under coordinate
/// permutations, or `None` when the search tree would exceed `limit` leaves.
///
/// Identical columns are interchangeable and are merged first. The remaining
/// column types are ordered by individualization and refinement on pairwise
/// column statistics; every step depends only on the isomorphism class, so
/// the least row form over the leaves is an invariant. Subtrees exchanged by
/// an automorphism already found are skipped.
pub(crate) fn canonical_basis(ring: &Ring, ell: usize, gens: &[Vec<Elem>], limit: usize) -> Option<Vec<Vec<Elem>>> {
    if gens.is_empty() || ell == 0 {
        return Some(Vec::new());
    }
    let q = ring.size() as usize;
    let elements = span(ring, ell, gens);
    let mut type_of: HashMap<Vec<Elem>, usize> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for c in 0..ell {
        let column: Vec<Elem> = elements.iter().map(|z| z[c]).collect();
        let next = members.len();
        let t = *type_of.entry(column).or_insert(next);
        if t == next {
            members.push(Vec::new());
        }
        members[t].push(c);
    }
    let types = members.len();
    let rep: Vec<usize> = members.iter().map(|m| m[0]).collect();
    let histograms: Vec<Vec<u32>> = (0..types)
        .flat_map(|i| (0..types).map(move |j| (i, j)))
        .map(|(i, j)| {
            let mut h = vec![0u32; q * q];
            for z in &elements {
                h[z[rep[i]] as usize * q + z[rep[j]] as usize] += 1;
            }
            h
        })
        .collect();
    // histograms are only ever compared, so dense ids stand in for them
    let pairs: Vec<usize> = relabel(&histograms);
    let initial: Vec<(usize, usize)> = (0..types).map(|i| (members[i].len(), pairs[i * types + i])).collect();
    let search = Search { ring, ell, gens, pairs: &pairs, members: &members, rep: &rep, elements: &elements, limit };
    let mut state = Leaves { first: None, best: None, automorphisms: Vec::new(), visited: 0 };
    search.descend(relabel(&initial), &mut Vec::new(), &mut state)?;
    state.best.map(|b| b.1)
}

struct Search<'a> {
    ring: &'a Ring,
    ell: usize,
    gens: &'a [Vec<Elem>],
    pairs: &'a [usize],
    members: &'a [Vec<usize>],
    rep: &'a [usize],
    elements: &'a [Vec<Elem>],
    limit: usize,
}

struct Leaves {
    first: Option<(Vec<usize>, Vec<Vec<Elem>>)>,
    best: Option<(Vec<usize>, Vec<Vec<Elem>>)>,
    automorphisms: Vec<Vec<usize>>,
    visited: usize,
}

const MAX_GENERATORS: usize = 64;

impl Search<'_> {
    /// Color refinement alternating between the elements of the module and
    /// its column types.
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        let n = colors.len();
        let classes = |c: &[usize]| {
            let mut d = c.to_vec();
            d.sort_unstable();
            d.dedup();
            d.len()
        };
        loop {
            let words: Vec<Vec<(usize, Elem, usize)>> = self
                .elements
                .iter()
                .map(|z| {
                    let mut sig: Vec<(usize, Elem, usize)> =
                        (0..n).map(|t| (colors[t], z[self.rep[t]], self.members[t].len())).collect();
                    sig.sort_unstable();
                    sig
                })
                .collect();
            let word_colors = relabel(&words);
            let signatures: Vec<(usize, Vec<(usize, usize)>, Vec<(usize, Elem)>)> = (0..n)
                .map(|i| {
                    let mut around: Vec<(usize, usize)> =
                        (0..n).filter(|&j| j != i).map(|j| (colors[j], self.pairs[i * n + j])).collect();
                    around.sort_unstable();
                    let mut seen: Vec<(usize, Elem)> =
                        self.elements.iter().zip(&word_colors).map(|(z, &c)| (c, z[self.rep[i]])).collect();
                    seen.sort_unstable();
                    (colors[i], around, seen)
                })
                .collect();
            let next = relabel(&signatures);
            if classes(&next) == classes(&colors) {
                return next;
            }
            colors = next;
        }
    }

    fn leaf(&self, colors: &[usize], state: &mut Leaves) -> Option<()> {
        state.visited += 1;
        if state.visited > self.limit {
            return None;
        }
        let mut order: Vec<usize> = (0..colors.len()).collect();
        order.sort_by_key(|&i| colors[i]);
        let columns: Vec<usize> = order.iter().flat_map(|&t| self.members[t].iter().copied()).collect();
        let permuted: Vec<Vec<Elem>> = self.gens.iter().map(|g| columns.iter().map(|&c| g[c]).collect()).collect();
        let canon = row_canonical(&RingMatrix::from_rows(self.ring.clone(), self.ell, &permuted).expect("lengths agree"))
            .row_vectors();
        // two leaves with the same matrix differ by an automorphism
        for known in [&state.first, &state.best].into_iter().flatten() {
            if known.1 == canon {
                if state.automorphisms.len() < MAX_GENERATORS {
                    let mut map = vec![0; order.len()];
                    for (&a, &b) in known.0.iter().zip(&order) {
                        map[a] = b;
                    }
                    state.automorphisms.push(map);
                }
                return Some(());
            }
        }
        if state.first.is_none() {
            state.first = Some((order.clone(), canon.clone()));
        }
        if state.best.as_ref().map_or(true, |b| canon < b.1) {
            state.best = Some((order, canon));
        }
        Some(())
    }

    fn descend(&self, colors: Vec<usize>, path: &mut Vec<usize>, state: &mut Leaves) -> Option<()> {
        let colors = self.refine(colors);
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for &c in &colors {
            *counts.entry(c).or_default() += 1;
        }
        let Some(target) = counts.iter().filter(|&(_, &k)| k > 1).map(|(&c, _)| c).min() else {
            return self.leaf(&colors, state);
        };
        let mut explored: Vec<usize> = Vec::new();
        for v in (0..colors.len()).filter(|&i| colors[i] == target) {
            if !explored.is_empty() {
                // automorphisms fixing the path map subtrees onto each other
                let mut orbit: Vec<usize> = (0..colors.len()).collect();
                fn find(orbit: &mut [usize], x: usize) -> usize {
                    let mut r = x;
                    while orbit[r] != r {
                        r = orbit[r];
                    }
                    orbit[x] = r;
                    r
                }
                for map in state.automorphisms.iter().filter(|m| path.iter().all(|&p| m[p] == p)) {
                    for (x, &y) in map.iter().enumerate() {
                        let (a, b) = (find(&mut orbit, x), find(&mut orbit, y));
                        orbit[a] = b;
                    }
                }
                let rv = find(&mut orbit, v);
                if explored.iter().any(|&w| find(&mut orbit, w) == rv) {
                    continue;
                }
            }
            explored.push(v);
            let split: Vec<usize> = colors
                .iter()
                .enumerate()
                .map(|(i, &c)| if c == target && i != v { 2 * c + 1 } else { 2 * c })
                .collect();
            path.push(v);
            let result = self.descend(split, path, state);
            path.pop();
            result?;
        }
        Some(())
    }
}

fn relabel<T: Ord + Clone>(items: &[T]) -> Vec<usize> {
    let mut distinct: Vec<T> = items.to_vec();
    distinct.sort();
    distinct.dedup();
    items.iter().map(|x| distinct.binary_search(x).expect("present")).collect()
}

fn span(ring: &Ring, n: usize, gens: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let mut seen: HashSet<Vec<Elem>> = HashSet::from([vec![0; n]]);
    let mut out = vec![vec![0; n]];
    for g in gens {
        let base = out.len();
        for a in ring.elements().skip(1) {
            let m = vec_scale(ring, a, g);
            for i in 0..base {
                let v = vec_add(ring, &out[i], &m);
                if seen.insert(v.clone()) {
                    out.push(v);
                }
            }
        }
    }
    out.sort();
    out
}
