//! Single-source acyclic networks with scalar linear coding: edge order,
//! local coefficients, the transfer matrix and the code seen at each sink.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{left_kernel, vec_mat_mul, Elem, MatrixError, Ring, RingError, RingMatrix};
use crate::bounds::{combined_bound, BoundReport};
use crate::codes::{parse_vector_row, CodeError, QuotientCode};
use crate::weights::{format_rational, submodule_span, Rational, Submodule, WeightError, WeightFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("the network has a directed cycle")]
    Cycle,
    #[error("{0}")]
    Structure(String),
    #[error("{0} is not a sink")]
    NotASink(String),
    #[error("coefficient at ({i}, {j}) lies off the line-graph pattern")]
    PatternViolation { i: usize, j: usize },
    #[error("coefficient matrix is not nilpotent")]
    NotNilpotent,
    #[error("sink {0} cannot distinguish the messages")]
    NotMulticast(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub tail: String,
    pub head: String,
}

/// A network with its edges in coordinate order: the `m` source edges first,
/// then the rest in a stable topological order, unless the file asks for its
/// own order with `order listed`.
#[derive(Debug, Clone)]
pub struct NetworkSpec {
    ring: Ring,
    m: usize,
    nodes: Vec<String>,
    edges: Vec<Edge>,
    source: String,
    sinks: Vec<String>,
    coefficients: Vec<(usize, usize, Elem)>,
    file_index: Vec<usize>,
}

impl NetworkSpec {
    /// Builds and validates a network. `coefficients` use zero-based indices
    /// into `edges` as given.
    pub fn new(
        ring: Ring,
        m: usize,
        edges: Vec<Edge>,
        source: &str,
        sinks: Vec<String>,
        coefficients: Vec<(usize, usize, Elem)>,
        keep_order: bool,
    ) -> Result<Self, NetworkError> {
        let mut nodes: Vec<String> = Vec::new();
        for e in &edges {
            for v in [&e.tail, &e.head] {
                if !nodes.contains(v) {
                    nodes.push(v.clone());
                }
            }
        }
        if !nodes.iter().any(|v| v == source) {
            return Err(NetworkError::Structure(format!("source {source} has no edges")));
        }
        check_acyclic(&nodes, &edges)?;
        let from_source = edges.iter().filter(|e| e.tail == source).count();
        if from_source != m {
            return Err(NetworkError::Structure(format!("header gives m = {m} but the source has {from_source} outgoing edges")));
        }
        let order = if keep_order {
            if edges.iter().take(m).any(|e| e.tail != source) {
                return Err(NetworkError::Structure("listed order must start with the source edges".into()));
            }
            (0..edges.len()).collect()
        } else {
            canonical_order(&edges, source)
        };
        let mut position = vec![0; edges.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let edges: Vec<Edge> = order.iter().map(|&i| edges[i].clone()).collect();
        for t in &sinks {
            if t == source {
                return Err(NetworkError::Structure("the source cannot be a sink".into()));
            }
            let incoming = edges.iter().filter(|e| &e.head == t).count();
            if incoming < m {
                return Err(NetworkError::Structure(format!("sink {t} has {incoming} incoming edges, fewer than m = {m}")));
            }
        }
        if sinks.is_empty() {
            return Err(NetworkError::Structure("no sinks".into()));
        }
        let mut coeffs = Vec::with_capacity(coefficients.len());
        for (i, j, a) in coefficients {
            if i >= edges.len() || j >= edges.len() {
                return Err(NetworkError::Structure(format!("coefficient index ({}, {}) out of range", i + 1, j + 1)));
            }
            if !ring.contains(a) {
                return Err(NetworkError::Structure(format!("coefficient {a} is not in {}", ring_label(&ring))));
            }
            coeffs.push((position[i], position[j], a));
        }
        Ok(NetworkSpec { ring, m, nodes, edges, source: source.to_string(), sinks, coefficients: coeffs, file_index: order })
    }

    /// Parses the text format: a header `<ring> <m>`, optional `order listed`,
    /// then `edge`, `source`, `sink` and `coeff <i> <j> <value>` lines, where
    /// coefficient indices count edges from 1 in file order.
    pub fn parse(text: &str) -> Result<Self, NetworkError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(NetworkError::Parse { line: 1, msg: "empty network file".into() })?;
        let bad = |line: usize, msg: &str| NetworkError::Parse { line, msg: msg.to_string() };
        let mut head = header.split_whitespace();
        let ring: Ring = head.next().ok_or_else(|| bad(hline, "missing ring"))?.parse()?;
        let m: usize = head
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad(hline, "header must be `<ring> <m>`"))?;
        if head.next().is_some() {
            return Err(bad(hline, "header must be `<ring> <m>`"));
        }
        let (mut edges, mut sinks, mut coeffs) = (Vec::new(), Vec::new(), Vec::new());
        let mut source: Option<String> = None;
        let mut keep_order = false;
        for (no, line) in lines {
            let words: Vec<&str> = line.split_whitespace().collect();
            match words.as_slice() {
                ["order", "listed"] => keep_order = true,
                ["edge", tail, head] => edges.push(Edge { tail: tail.to_string(), head: head.to_string() }),
                ["source", v] => {
                    if source.replace(v.to_string()).is_some() {
                        return Err(bad(no, "more than one source"));
                    }
                }
                ["sink", v] => sinks.push(v.to_string()),
                ["coeff", i, j, value] => {
                    let index = |s: &str| s.parse::<usize>().ok().filter(|&k| k >= 1).map(|k| k - 1);
                    let (Some(i), Some(j)) = (index(i), index(j)) else {
                        return Err(bad(no, "coefficient indices start at 1"));
                    };
                    let a = ring.parse_elem(value).ok_or_else(|| bad(no, &format!("bad ring element {value}")))?;
                    coeffs.push((i, j, a));
                }
                _ => return Err(bad(no, &format!("unrecognised line `{line}`"))),
            }
        }
        let source = source.ok_or_else(|| bad(hline, "no source line"))?;
        NetworkSpec::new(ring, m, edges, &source, sinks, coeffs, keep_order)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Number of source edges.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of edges.
    pub fn n(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn sinks(&self) -> &[String] {
        &self.sinks
    }

    /// Explicit coefficients `(i, j, value)` in coordinate order, zero-based.
    pub fn coefficients(&self) -> &[(usize, usize, Elem)] {
        &self.coefficients
    }

    /// For each coordinate, the zero-based line of the edge in the input.
    pub fn file_index(&self) -> &[usize] {
        &self.file_index
    }

    /// `E_t`: zero-based coordinates of the edges entering `t`.
    pub fn sink_edges(&self, t: &str) -> Result<Vec<usize>, NetworkError> {
        if !self.sinks.iter().any(|s| s == t) {
            return Err(NetworkError::NotASink(t.to_string()));
        }
        Ok((0..self.n()).filter(|&i| self.edges[i].head == t).collect())
    }

    /// Explicit coefficients when the file lists any, all ones otherwise.
    pub fn default_mode(&self) -> CoefficientMode {
        if self.coefficients.is_empty() {
            CoefficientMode::Ones
        } else {
            CoefficientMode::Explicit(self.coefficients.clone())
        }
    }
}

fn ring_label(ring: &Ring) -> String {
    format!("a ring of size {}", ring.size())
}

fn check_acyclic(nodes: &[String], edges: &[Edge]) -> Result<(), NetworkError> {
    let id: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let mut indegree = vec![0usize; nodes.len()];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for e in edges {
        out[id[e.tail.as_str()]].push(id[e.head.as_str()]);
        indegree[id[e.head.as_str()]] += 1;
    }
    let mut ready: Vec<usize> = (0..nodes.len()).filter(|&v| indegree[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = ready.pop() {
        seen += 1;
        for &w in &out[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(w);
            }
        }
    }
    if seen == nodes.len() {
        Ok(())
    } else {
        Err(NetworkError::Cycle)
    }
}

/// Source edges in input order, then repeatedly the earliest remaining edge
/// whose tail has no unplaced incoming edge.
fn canonical_order(edges: &[Edge], source: &str) -> Vec<usize> {
    let mut order: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].tail == source).collect();
    let mut placed: HashSet<usize> = order.iter().copied().collect();
    let waiting = |j: usize, placed: &HashSet<usize>| {
        edges[j].tail != source && (0..edges.len()).any(|i| !placed.contains(&i) && i != j && edges[i].head == edges[j].tail)
    };
    let mut remaining: BTreeSet<usize> = (0..edges.len()).filter(|i| !placed.contains(i)).collect();
    while let Some(&next) = remaining.iter().find(|&&j| !waiting(j, &placed)) {
        remaining.remove(&next);
        placed.insert(next);
        order.push(next);
    }
    order
}

/// `P[i][j]` is true when edge `i` ends where edge `j` starts.
pub fn line_graph_pattern(net: &NetworkSpec) -> Vec<Vec<bool>> {
    let e = net.edges();
    e.iter().map(|a| e.iter().map(|b| a.head == b.tail).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoefficientMode {
    /// 1 at every pattern position.
    Ones,
    /// Given `(i, j, value)` entries, zero-based in coordinate order.
    Explicit(Vec<(usize, usize, Elem)>),
    /// Uniform nonzero values at every pattern position.
    Random(u64),
}

/// The local coefficient matrix `K`.
pub fn assign_coefficients(net: &NetworkSpec, mode: &CoefficientMode) -> Result<RingMatrix, NetworkError> {
    let ring = net.ring().clone();
    let n = net.n();
    let pattern = line_graph_pattern(net);
    let mut k = RingMatrix::zeros(ring.clone(), n, n);
    match mode {
        CoefficientMode::Ones => {
            for (i, row) in pattern.iter().enumerate() {
                for (j, &on) in row.iter().enumerate() {
                    if on {
                        k.set(i, j, ring.one());
                    }
                }
            }
        }
        CoefficientMode::Explicit(entries) => {
            for &(i, j, a) in entries {
                if i >= n || j >= n {
                    return Err(NetworkError::PatternViolation { i: i + 1, j: j + 1 });
                }
                if a != 0 && !pattern[i][j] {
                    return Err(NetworkError::PatternViolation { i: i + 1, j: j + 1 });
                }
                k.set(i, j, a);
            }
        }
        CoefficientMode::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            for (i, row) in pattern.iter().enumerate() {
                for (j, &on) in row.iter().enumerate() {
                    if on {
                        k.set(i, j, rng.gen_range(1..ring.size()));
                    }
                }
            }
        }
    }
    Ok(k)
}

/// `F = (I − K)⁻¹ = I + K + K² + …`, which terminates because an acyclic
/// line graph makes `K` nilpotent. Checks `F(I − K) = I`.
pub fn transfer_matrix(k: &RingMatrix) -> Result<RingMatrix, NetworkError> {
    let ring = k.ring().clone();
    let n = k.rows();
    let identity = RingMatrix::identity(ring, n);
    let mut f = identity.clone();
    let mut power = identity.clone();
    for _ in 0..n {
        power = power.mul(k)?;
        if power.is_zero() {
            break;
        }
        f = f.add(&power)?;
    }
    if !power.is_zero() {
        return Err(NetworkError::NotNilpotent);
    }
    let check = f.mul(&identity.sub(k)?)?;
    debug_assert!(check.is_identity());
    if !check.is_identity() {
        return Err(NetworkError::NotNilpotent);
    }
    Ok(f)
}

/// Every vector of `A^m`, in lexicographic order.
pub fn all_messages(ring: &Ring, m: usize) -> Vec<Vec<Elem>> {
    let q = ring.size();
    let mut out: Vec<Vec<Elem>> = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..q).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

/// One message per non-empty line, in any row format the code files accept.
pub fn parse_messages(ring: &Ring, m: usize, text: &str) -> Result<Vec<Vec<Elem>>, NetworkError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_vector_row(ring, m, l).map_err(|msg| NetworkError::Parse { line: i + 1, msg }))
        .collect()
}

/// `[x₀, 0] ∈ A^n`.
pub fn embed(x0: &[Elem], n: usize) -> Vec<Elem> {
    let mut x = x0.to_vec();
    x.resize(n, 0);
    x
}

/// What sink `t` sees: `F_t`, the kernel `K_t = {e : e·F_t = 0}` and the
/// code `{[x₀, 0] + K_t}` over `A^n`.
#[derive(Debug, Clone)]
pub struct SinkView {
    pub sink: String,
    /// `E_t`, zero-based.
    pub edges: Vec<usize>,
    /// `F_t`, an `n × n_t` matrix.
    pub ft: RingMatrix,
    /// The first `m` rows of `F_t`: codewords are `x₀·G_t`.
    pub generator: RingMatrix,
    pub kernel: Submodule,
    pub code: QuotientCode,
    pub messages: Vec<Vec<Elem>>,
}

impl SinkView {
    pub fn n_t(&self) -> usize {
        self.edges.len()
    }

    /// `x₀·G_t`, the word that arrives without errors.
    pub fn codeword(&self, x0: &[Elem]) -> Vec<Elem> {
        vec_mat_mul(self.ft.ring(), x0, &self.generator)
    }
}

pub fn sink_view(
    net: &NetworkSpec,
    f: &RingMatrix,
    t: &str,
    messages: &[Vec<Elem>],
    w: &WeightFunction,
) -> Result<SinkView, NetworkError> {
    let edges = net.sink_edges(t)?;
    let ring = net.ring();
    let ft = f.select_columns(&edges);
    let generator = ft.select_rows(&(0..net.m()).collect::<Vec<_>>());
    let kernel_rows = left_kernel(&ft).row_vectors();
    let kernel = submodule_span(ring, net.n(), &kernel_rows)?;
    let reps: Vec<Vec<Elem>> = messages.iter().map(|x0| embed(x0, net.n())).collect();
    let code = QuotientCode::new(w.clone(), kernel.clone(), reps)?;
    Ok(SinkView { sink: t.to_string(), edges, ft, generator, kernel, code, messages: messages.to_vec() })
}

/// For each sink, whether `x₀ ↦ x₀·G_t` is injective on the messages.
pub fn multicast_check(net: &NetworkSpec, f: &RingMatrix, messages: &[Vec<Elem>]) -> Vec<(String, bool)> {
    net.sinks()
        .iter()
        .map(|t| {
            let edges = net.sink_edges(t).expect("listed sink");
            let g = f.select_columns(&edges).select_rows(&(0..net.m()).collect::<Vec<_>>());
            let mut seen = HashSet::new();
            let ok = messages.iter().all(|x0| seen.insert(vec_mat_mul(net.ring(), x0, &g)));
            (t.clone(), ok)
        })
        .collect()
}

/// `(n_t, s_t, ℓ_t, |C_t|, d_t)` for one sink, with the combined bound on
/// `|C_t|` for those parameters.
#[derive(Debug, Clone)]
pub struct SinkParams {
    pub sink: String,
    pub n_t: usize,
    pub s_t: usize,
    pub ell_t: usize,
    pub size: usize,
    pub d: Option<Rational>,
    pub bound: Option<BoundReport>,
}

#[derive(Debug, Clone)]
pub struct NetworkParams {
    pub n: usize,
    pub sinks: Vec<SinkParams>,
}

impl NetworkParams {
    /// `min |C_t|` over the sinks.
    pub fn size(&self) -> usize {
        self.sinks.iter().map(|s| s.size).min().unwrap_or(0)
    }
}

impl fmt::Display for NetworkParams {
    /// `(n, {(n_t, s_t, |C_t|, d_t), ...}) network code of size s`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .sinks
            .iter()
            .map(|s| {
                let d = s.d.map_or_else(|| "-".to_string(), |d| format_rational(&d));
                format!("({},{},{},{})", s.n_t, s.s_t, s.size, d)
            })
            .collect();
        write!(f, "({}, {{{}}}) network code of size {}", self.n, parts.join(","), self.size())
    }
}

pub fn network_code_params(
    net: &NetworkSpec,
    f: &RingMatrix,
    messages: &[Vec<Elem>],
    w: &WeightFunction,
) -> Result<NetworkParams, NetworkError> {
    if let Some((t, _)) = multicast_check(net, f, messages).into_iter().find(|(_, ok)| !ok) {
        return Err(NetworkError::NotMulticast(t));
    }
    let mut sinks = Vec::new();
    for t in net.sinks() {
        let view = sink_view(net, f, t, messages, w)?;
        let p = view.code.params();
        let bound = p.d.and_then(|d| combined_bound(w, p.n, p.s, p.ell, d).ok());
        sinks.push(SinkParams { sink: t.clone(), n_t: view.n_t(), s_t: p.s, ell_t: p.ell, size: p.size, d: p.d, bound });
    }
    Ok(NetworkParams { n: net.n(), sinks })
}
