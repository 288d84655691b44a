use std::fmt;

use thiserror::Error;

use super::ring::{gcd, inv_mod, xgcd, Elem, Ring, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    Shape { rows: usize, cols: usize, expected: usize, got: usize },
    #[error("entry {value} at ({row}, {col}) is not an element of {ring}")]
    EntryOutOfRange { row: usize, col: usize, value: u64, ring: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Dense row-major matrix over a [`Ring`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMatrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Elem>,
}

impl RingMatrix {
    pub fn new(ring: Ring, rows: usize, cols: usize, entries: Vec<Elem>) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::Shape { rows, cols, expected: rows * cols, got: entries.len() });
        }
        if let Some(pos) = entries.iter().position(|&e| !ring.contains(e)) {
            return Err(MatrixError::EntryOutOfRange {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
                value: entries[pos] as u64,
                ring: ring.to_string(),
            });
        }
        Ok(RingMatrix { ring, rows, cols, entries })
    }

    pub fn from_rows(ring: Ring, cols: usize, rows: &[Vec<Elem>]) -> Result<Self, MatrixError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(MatrixError::Dimension(format!("row of length {} in a {cols}-column matrix", bad.len())));
        }
        let entries = rows.iter().flatten().copied().collect();
        RingMatrix::new(ring, rows.len(), cols, entries)
    }

    pub fn zeros(ring: Ring, rows: usize, cols: usize) -> Self {
        RingMatrix { ring, rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = RingMatrix::zeros(ring, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Elem) {
        debug_assert!(self.ring.contains(value));
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == (r == c) as Elem))
    }

    pub fn transpose(&self) -> Self {
        let mut t = RingMatrix::zeros(self.ring.clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix, MatrixError> {
        if self.cols != other.rows || self.ring != other.ring {
            return Err(MatrixError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ring = &self.ring;
        let mut out = RingMatrix::zeros(ring.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.entries[idx] = ring.add(out.entries[idx], ring.mul(a, other.get(k, c)));
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &RingMatrix, f: impl Fn(Elem, Elem) -> Elem) -> Result<RingMatrix, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols || self.ring != other.ring {
            return Err(MatrixError::Dimension("operands differ in shape or ring".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(a, b)).collect();
        Ok(RingMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries })
    }

    pub fn add(&self, other: &RingMatrix) -> Result<RingMatrix, MatrixError> {
        self.zip_with(other, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, other: &RingMatrix) -> Result<RingMatrix, MatrixError> {
        self.zip_with(other, |a, b| self.ring.sub(a, b))
    }

    pub fn select_columns(&self, cols: &[usize]) -> RingMatrix {
        let mut out = RingMatrix::zeros(self.ring.clone(), self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.entries[r * cols.len() + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> RingMatrix {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            entries.extend_from_slice(self.row(r));
        }
        RingMatrix { ring: self.ring.clone(), rows: rows.len(), cols: self.cols, entries }
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &RingMatrix) -> Result<RingMatrix, MatrixError> {
        if self.rows != other.rows || self.ring != other.ring {
            return Err(MatrixError::Dimension("hconcat row mismatch".into()));
        }
        let cols = self.cols + other.cols;
        let mut entries = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            entries.extend_from_slice(self.row(r));
            entries.extend_from_slice(other.row(r));
        }
        Ok(RingMatrix { ring: self.ring.clone(), rows: self.rows, cols, entries })
    }

    /// Parses the text format: a header `rows cols ring-spec` followed by the
    /// row-major entries, whitespace separated. `#` starts a comment.
    pub fn parse_text(text: &str) -> Result<RingMatrix, MatrixError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(MatrixError::Parse { line: 1, msg: "empty input".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(MatrixError::Parse { line: hline, msg: "expected `rows cols ring-spec`".into() });
        }
        let parse_dim = |s: &str| {
            s.parse::<usize>().map_err(|_| MatrixError::Parse { line: hline, msg: format!("bad dimension `{s}`") })
        };
        let rows = parse_dim(fields[0])?;
        let cols = parse_dim(fields[1])?;
        let ring: Ring = fields[2].parse()?;
        let mut entries = Vec::with_capacity(rows * cols);
        for (line, body) in lines {
            for tok in body.split_whitespace() {
                let v = tok
                    .parse::<u64>()
                    .map_err(|_| MatrixError::Parse { line, msg: format!("bad entry `{tok}`") })?;
                if v >= ring.size() as u64 {
                    let pos = entries.len();
                    return Err(MatrixError::EntryOutOfRange {
                        row: pos / cols.max(1),
                        col: pos % cols.max(1),
                        value: v,
                        ring: ring.to_string(),
                    });
                }
                entries.push(v as Elem);
            }
        }
        RingMatrix::new(ring, rows, cols, entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows, self.cols, self.ring);
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Row-by-matrix product `v·M`.
pub fn vec_mat_mul(ring: &Ring, v: &[Elem], m: &RingMatrix) -> Vec<Elem> {
    assert_eq!(v.len(), m.rows(), "vector length must match matrix rows");
    let mut out = vec![0; m.cols()];
    for (k, &a) in v.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (c, slot) in out.iter_mut().enumerate() {
            *slot = ring.add(*slot, ring.mul(a, m.get(k, c)));
        }
    }
    out
}

pub fn vec_add(ring: &Ring, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| ring.add(x, y)).collect()
}

pub fn vec_sub(ring: &Ring, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| ring.sub(x, y)).collect()
}

pub fn vec_scale(ring: &Ring, c: Elem, a: &[Elem]) -> Vec<Elem> {
    a.iter().map(|&x| ring.mul(c, x)).collect()
}

/// Canonical row form: reduced row echelon form over fields, Howell form over
/// `Z_m`. Two matrices with the same number of columns generate the same row
/// span iff their canonical forms are equal. Zero rows are dropped.
pub fn row_canonical(m: &RingMatrix) -> RingMatrix {
    let ring = m.ring().clone();
    let rows = if ring.is_field() {
        rref_rows(&ring, m.cols(), m.row_vectors())
    } else {
        let modulus = ring.integer_modulus().expect("non-field rings are residue rings");
        howell_rows(modulus as u64, m.cols(), m.row_vectors())
    };
    let n = rows.len();
    let cols = m.cols();
    RingMatrix { ring, rows: n, cols, entries: rows.into_iter().flatten().collect() }
}

fn rref_rows(ring: &Ring, cols: usize, mut rows: Vec<Vec<Elem>>) -> Vec<Vec<Elem>> {
    let mut pr = 0;
    for c in 0..cols {
        let Some(pivot) = (pr..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(pr, pivot);
        let inv = ring.inv(rows[pr][c]).expect("nonzero field element");
        rows[pr] = vec_scale(ring, inv, &rows[pr]);
        for i in 0..rows.len() {
            if i != pr && rows[i][c] != 0 {
                let factor = rows[i][c];
                let scaled = vec_scale(ring, factor, &rows[pr]);
                rows[i] = vec_sub(ring, &rows[i], &scaled);
            }
        }
        pr += 1;
        if pr == rows.len() {
            break;
        }
    }
    rows.truncate(pr);
    rows
}

/// A unit `u` of `Z_m` with `u·a ≡ gcd(a, m)`.
fn normalizing_unit(a: u64, m: u64) -> u64 {
    let g = gcd(a, m);
    let (a1, m1) = (a / g, m / g);
    let u0 = inv_mod(a1 % m1, m1).expect("a/g is a unit modulo m/g");
    (0..g)
        .map(|k| u0 + k * m1)
        .find(|&u| gcd(u, m) == 1)
        .expect("every unit modulo m/g lifts to a unit modulo m")
}

fn howell_rows(m: u64, cols: usize, rows: Vec<Vec<Elem>>) -> Vec<Vec<Elem>> {
    let mut rows: Vec<Vec<u64>> = rows.into_iter().map(|r| r.into_iter().map(u64::from).collect()).collect();
    let combine = |x: &[u64], cx: i64, y: &[u64], cy: i64| -> Vec<u64> {
        let (cx, cy) = (cx.rem_euclid(m as i64) as u64, cy.rem_euclid(m as i64) as u64);
        x.iter().zip(y).map(|(&a, &b)| (cx * a % m + cy * b % m) % m).collect()
    };
    let mut pr = 0;
    for c in 0..cols {
        if pr >= rows.len() {
            break;
        }
        for i in pr + 1..rows.len() {
            if rows[i][c] == 0 {
                continue;
            }
            if rows[pr][c] == 0 {
                rows.swap(pr, i);
                continue;
            }
            let (a, b) = (rows[pr][c] as i64, rows[i][c] as i64);
            let (g, s, t) = xgcd(a, b);
            let top = combine(&rows[pr], s, &rows[i], t);
            let bottom = combine(&rows[pr], -(b / g), &rows[i], a / g);
            rows[pr] = top;
            rows[i] = bottom;
        }
        let a = rows[pr][c];
        if a == 0 {
            continue;
        }
        let u = normalizing_unit(a, m);
        rows[pr] = rows[pr].iter().map(|&x| x * u % m).collect();
        let g = rows[pr][c];
        if g != 1 {
            let ann: Vec<u64> = rows[pr].iter().map(|&x| x * (m / g) % m).collect();
            if ann.iter().any(|&x| x != 0) {
                rows.push(ann);
            }
        }
        pr += 1;
    }
    debug_assert!(rows[pr.min(rows.len())..].iter().all(|r| r.iter().all(|&x| x == 0)));
    rows.truncate(pr);
    for k in 0..rows.len() {
        let c = rows[k].iter().position(|&x| x != 0).expect("pivot row is nonzero");
        let p = rows[k][c];
        for j in 0..k {
            let q = rows[j][c] / p;
            if q > 0 {
                let pivot_row = rows[k].clone();
                rows[j] = combine(&rows[j], 1, &pivot_row, -(q as i64));
            }
        }
    }
    rows.into_iter().map(|r| r.into_iter().map(|x| x as Elem).collect()).collect()
}

/// Reduction of vectors against a canonical basis; gives the unique
/// representative of each coset of the row span.
#[derive(Debug, Clone)]
pub struct RowReducer {
    basis: RingMatrix,
    pivots: Vec<(usize, Elem)>,
}

impl RowReducer {
    pub fn new(generators: &RingMatrix) -> Self {
        let basis = row_canonical(generators);
        let pivots = (0..basis.rows())
            .map(|r| {
                let c = basis.row(r).iter().position(|&x| x != 0).expect("canonical rows are nonzero");
                (c, basis.get(r, c))
            })
            .collect();
        RowReducer { basis, pivots }
    }

    pub fn basis(&self) -> &RingMatrix {
        &self.basis
    }

    /// Pivot columns and pivot values, top to bottom.
    pub fn pivots(&self) -> &[(usize, Elem)] {
        &self.pivots
    }

    pub fn reduce_in_place(&self, v: &mut [Elem]) {
        let ring = self.basis.ring();
        let integer = !ring.is_field();
        for (k, &(c, p)) in self.pivots.iter().enumerate() {
            let q = if integer { v[c] / p } else { v[c] };
            if q == 0 {
                continue;
            }
            for (slot, &b) in v.iter_mut().zip(self.basis.row(k)) {
                *slot = ring.sub(*slot, ring.mul(q, b));
            }
        }
    }

    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let mut out = v.to_vec();
        self.reduce_in_place(&mut out);
        out
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Number of cosets of the span, `|A|^n / |span|`.
    pub fn quotient_size(&self) -> u128 {
        let ring = self.basis.ring();
        let q = ring.size() as u128;
        let n = self.basis.cols();
        let mut total = 1u128;
        for c in 0..n {
            match self.pivots.iter().find(|&&(pc, _)| pc == c) {
                Some(&(_, p)) if !ring.is_field() => total = total.saturating_mul(p as u128),
                Some(_) => {}
                None => total = total.saturating_mul(q),
            }
        }
        total
    }

    /// Size of the span, `∏ |A|/p` over pivots.
    pub fn span_size(&self) -> u128 {
        let ring = self.basis.ring();
        let q = ring.size() as u128;
        self.pivots
            .iter()
            .map(|&(_, p)| if ring.is_field() { q } else { q / p as u128 })
            .fold(1u128, |acc, x| acc.saturating_mul(x))
    }

    /// Every reduced vector, i.e. one representative per coset, in
    /// lexicographic order of the free coordinates.
    pub fn coset_representatives(&self) -> Vec<Vec<Elem>> {
        let ring = self.basis.ring();
        let n = self.basis.cols();
        let ranges: Vec<u32> = (0..n)
            .map(|c| match self.pivots.iter().find(|&&(pc, _)| pc == c) {
                Some(&(_, p)) if !ring.is_field() => p,
                Some(_) => 1,
                None => ring.size(),
            })
            .collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        loop {
            out.push(cur.clone());
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < ranges[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

/// Inverse of a square matrix. Tries unit-pivot Gauss-Jordan first, then
/// falls back to the canonical form of `[M | I]`.
pub fn mat_inverse(m: &RingMatrix) -> Result<RingMatrix, MatrixError> {
    if m.rows() != m.cols() {
        return Err(MatrixError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if let Some(inv) = unit_pivot_inverse(m) {
        return Ok(inv);
    }
    let n = m.rows();
    let ring = m.ring().clone();
    let aug = m.hconcat(&RingMatrix::identity(ring.clone(), n))?;
    let canon = row_canonical(&aug);
    if canon.rows() != n {
        return Err(MatrixError::NotInvertible);
    }
    let left: Vec<usize> = (0..n).collect();
    let right: Vec<usize> = (n..2 * n).collect();
    if !canon.select_columns(&left).is_identity() {
        return Err(MatrixError::NotInvertible);
    }
    Ok(canon.select_columns(&right))
}

fn unit_pivot_inverse(m: &RingMatrix) -> Option<RingMatrix> {
    let ring = m.ring();
    let n = m.rows();
    let mut a = m.row_vectors();
    let mut inv = RingMatrix::identity(ring.clone(), n).row_vectors();
    for c in 0..n {
        let pivot = (c..n).find(|&r| ring.is_unit(a[r][c]))?;
        a.swap(c, pivot);
        inv.swap(c, pivot);
        let u = ring.inv(a[c][c])?;
        a[c] = vec_scale(ring, u, &a[c]);
        inv[c] = vec_scale(ring, u, &inv[c]);
        for r in 0..n {
            if r != c && a[r][c] != 0 {
                let f = a[r][c];
                a[r] = vec_sub(ring, &a[r], &vec_scale(ring, f, &a[c]));
                inv[r] = vec_sub(ring, &inv[r], &vec_scale(ring, f, &inv[c]));
            }
        }
    }
    Some(RingMatrix::from_rows(ring.clone(), n, &inv).expect("square shape"))
}

/// Generators of the left kernel `{e : e·M = 0}`, one per row.
pub fn left_kernel(m: &RingMatrix) -> RingMatrix {
    let ring = m.ring().clone();
    let r = m.rows();
    let c = m.cols();
    let aug = m.hconcat(&RingMatrix::identity(ring.clone(), r)).expect("same row count");
    let canon = row_canonical(&aug);
    let tail: Vec<usize> = (c..c + r).collect();
    let kernel_rows: Vec<usize> = (0..canon.rows()).filter(|&i| canon.row(i)[..c].iter().all(|&x| x == 0)).collect();
    canon.select_rows(&kernel_rows).select_columns(&tail)
}
