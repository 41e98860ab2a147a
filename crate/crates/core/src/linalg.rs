//! Exact linear algebra over the rationals.
//!
//! Provides dense Gaussian elimination for small square systems and an
//! incremental sparse row-echelon builder used for the large kernel and rank
//! computations (singular-vector solving, graded exactness checks). All
//! pivoting strategies are fixed so results are deterministic.

use crate::rat::{rone, rzero, Rat};
use num_traits::Zero;

/// Dense matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            a: vec![rzero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = rone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c));
        Mat {
            rows: r,
            cols: c,
            a: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.a[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rat {
        &mut self.a[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.a[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let x = self.at(r, k);
                if x.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let y = other.at(k, c);
                    if y.is_zero() {
                        continue;
                    }
                    *out.at_mut(r, c) += x * y;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut s = rzero();
                for c in 0..self.cols {
                    let x = self.at(r, c);
                    if !x.is_zero() && !v[c].is_zero() {
                        s += x * &v[c];
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&other.a) {
            *x += y;
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&other.a) {
            *x -= y;
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> Mat {
        let mut out = self.clone();
        for x in out.a.iter_mut() {
            *x *= s;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    pub fn trace(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let mut s = rzero();
        for i in 0..self.rows {
            s += self.at(i, i);
        }
        s
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Mat) -> Mat {
        self.mul(other).sub(&other.mul(self))
    }

    /// Kronecker product (block structure: `self` indexes the blocks).
    pub fn kron(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.at(i, j);
                if x.is_zero() {
                    continue;
                }
                for a in 0..other.rows {
                    for b in 0..other.cols {
                        let y = other.at(a, b);
                        if !y.is_zero() {
                            *out.at_mut(i * other.rows + a, j * other.cols + b) = x * y;
                        }
                    }
                }
            }
        }
        out
    }

    /// Stack basis vectors as columns.
    pub fn from_cols(dim: usize, cols: &[Vec<Rat>]) -> Mat {
        let mut m = Mat::zeros(dim, cols.len());
        for (c, v) in cols.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                *m.at_mut(r, c) = x.clone();
            }
        }
        m
    }

    /// Inverse via Gauss-Jordan; `None` if singular.
    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.at(r, col).is_zero())?;
            if pivot != col {
                for c in 0..n {
                    a.a.swap(pivot * n + c, col * n + c);
                    inv.a.swap(pivot * n + c, col * n + c);
                }
            }
            let p = a.at(col, col).clone();
            for c in 0..n {
                *a.at_mut(col, c) /= &p;
                *inv.at_mut(col, c) /= &p;
            }
            for r in 0..n {
                if r == col || a.at(r, col).is_zero() {
                    continue;
                }
                let f = a.at(r, col).clone();
                for c in 0..n {
                    let x = a.at(col, c).clone();
                    *a.at_mut(r, c) -= &f * x;
                    let y = inv.at(col, c).clone();
                    *inv.at_mut(r, c) -= &f * y;
                }
            }
        }
        Some(inv)
    }
}

/// Sparse vector: sorted `(column, value)` pairs with nonzero values.
pub type SparseVec = Vec<(usize, Rat)>;

pub fn sparse_from_dense(v: &[Rat]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn sparse_to_dense(v: &SparseVec, n: usize) -> Vec<Rat> {
    let mut out = vec![rzero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `a - f * b`, both sparse and sorted.
fn sparse_axpy(a: &SparseVec, f: &Rat, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) => {
                if ca < cb {
                    out.push((*ca, va.clone()));
                    i += 1;
                } else if cb < ca {
                    let x = -(f * vb);
                    if !x.is_zero() {
                        out.push((*cb, x));
                    }
                    j += 1;
                } else {
                    let x = va - f * vb;
                    if !x.is_zero() {
                        out.push((*ca, x));
                    }
                    i += 1;
                    j += 1;
                }
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (None, Some((cb, vb))) => {
                let x = -(f * vb);
                if !x.is_zero() {
                    out.push((*cb, x));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Incremental row-echelon basis of the row space of a collection of sparse
/// vectors over Q. Pivot rows are kept normalized (pivot entry = 1) and fully
/// reduced against each other, so membership tests are exact.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    /// pivot column -> reduced row with leading 1 in that column; kept sorted by pivot.
    rows: Vec<(usize, SparseVec)>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.iter().map(|(_, r)| r)
    }

    /// Reduce `v` against the current basis; the remainder has no support on
    /// pivot columns.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        loop {
            if v.is_empty() {
                return v;
            }
            let lead = v[0].0;
            match self.rows.binary_search_by_key(&lead, |(p, _)| *p) {
                Ok(idx) => {
                    let f = v[0].1.clone();
                    v = sparse_axpy(&v, &f, &self.rows[idx].1);
                }
                Err(_) => {
                    // leading column is not a pivot; reduce deeper entries too
                    return self.reduce_tail(v);
                }
            }
        }
    }

    fn reduce_tail(&self, mut v: SparseVec) -> SparseVec {
        // Eliminate any pivot-column entries beyond the leading one.
        loop {
            let hit = v
                .iter()
                .skip(1)
                .find_map(|(c, _)| {
                    self.rows
                        .binary_search_by_key(c, |(p, _)| *p)
                        .ok()
                        .map(|idx| (*c, idx))
                })
                .map(|(_, idx)| idx);
            match hit {
                Some(idx) => {
                    let col = self.rows[idx].0;
                    let f = v
                        .iter()
                        .find(|(c, _)| *c == col)
                        .map(|(_, x)| x.clone())
                        .unwrap();
                    v = sparse_axpy(&v, &f, &self.rows[idx].1);
                }
                None => return v,
            }
        }
    }

    /// Insert a vector; returns true if it enlarged the space.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = self.reduce(v);
        if v.is_empty() {
            return false;
        }
        let lead = v[0].0;
        let inv = v[0].1.clone();
        for (_, x) in v.iter_mut() {
            *x /= &inv;
        }
        // Back-substitute into existing rows to keep full reduction.
        let idx = match self.rows.binary_search_by_key(&lead, |(p, _)| *p) {
            Ok(_) => unreachable!("reduced vector cannot have pivot lead"),
            Err(i) => i,
        };
        for (_, row) in self.rows.iter_mut() {
            if let Some(pos) = row.iter().position(|(c, _)| *c == lead) {
                let f = row[pos].1.clone();
                *row = sparse_axpy(row, &f, &v);
            }
        }
        self.rows.insert(idx, (lead, v));
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }
}

/// Rank of a set of sparse vectors.
pub fn rank_of(vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Kernel basis of the linear map given by constraint rows over `ncols`
/// unknowns: all `x` with `row . x = 0` for every row. Deterministic basis:
/// echelon pivots + free columns in increasing order, each kernel vector has
/// a 1 in its free column.
pub fn kernel_basis(rows: impl IntoIterator<Item = SparseVec>, ncols: usize) -> Vec<Vec<Rat>> {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(r);
    }
    let pivots = ech.pivots();
    let is_pivot = {
        let mut v = vec![false; ncols];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot[free] {
            continue;
        }
        let mut vec = vec![rzero(); ncols];
        vec[free] = rone();
        // pivot rows are fully reduced: pivot value = -(row entry at free col)
        for (p, row) in ech.rows.iter() {
            if let Some((_, x)) = row.iter().find(|(c, _)| *c == free) {
                vec[*p] = -x.clone();
            }
        }
        basis.push(vec);
    }
    basis
}

/// Solve `M x = b` for dense `M` (least structure, small systems);
/// returns one solution or `None` if inconsistent.
pub fn solve_dense(m: &Mat, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(m.rows, b.len());
    let mut aug = Mat::zeros(m.rows, m.cols + 1);
    for r in 0..m.rows {
        for c in 0..m.cols {
            *aug.at_mut(r, c) = m.at(r, c).clone();
        }
        *aug.at_mut(r, m.cols) = b[r].clone();
    }
    // forward elimination with partial (first nonzero) pivoting
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row >= m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !aug.at(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            for c in 0..=m.cols {
                aug.a.swap(p * (m.cols + 1) + c, row * (m.cols + 1) + c);
            }
        }
        let pv = aug.at(row, col).clone();
        for c in col..=m.cols {
            *aug.at_mut(row, c) /= &pv;
        }
        for r in 0..m.rows {
            if r != row && !aug.at(r, col).is_zero() {
                let f = aug.at(r, col).clone();
                for c in col..=m.cols {
                    let x = aug.at(row, c).clone();
                    *aug.at_mut(r, c) -= &f * x;
                }
            }
        }
        pivot_cols.push((row, col));
        row += 1;
    }
    for r in row..m.rows {
        if !aug.at(r, m.cols).is_zero() {
            return None; // inconsistent
        }
    }
    let mut x = vec![rzero(); m.cols];
    for (r, c) in pivot_cols {
        x[c] = aug.at(r, m.cols).clone();
    }
    Some(x)
}

/// Intersection of two subspaces given by spanning sets (dense vectors of a
/// common ambient dimension). Returns a deterministic basis.
pub fn intersect_spans(a: &[Vec<Rat>], b: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    // x in A cap B  <=>  x = A^T s = B^T t; solve [A^T | -B^T] null space.
    let na = a.len();
    let nb = b.len();
    if na == 0 || nb == 0 {
        return Vec::new();
    }
    let mut rows: Vec<SparseVec> = Vec::with_capacity(dim);
    for d in 0..dim {
        let mut row: SparseVec = Vec::new();
        for (j, va) in a.iter().enumerate() {
            if !va[d].is_zero() {
                row.push((j, va[d].clone()));
            }
        }
        for (j, vb) in b.iter().enumerate() {
            if !vb[d].is_zero() {
                row.push((na + j, -vb[d].clone()));
            }
        }
        if !row.is_empty() {
            rows.push(row);
        }
    }
    let ker = kernel_basis(rows, na + nb);
    let mut ech = Echelon::new();
    let mut out = Vec::new();
    for k in ker {
        let mut x = vec![rzero(); dim];
        for (j, va) in a.iter().enumerate() {
            if !k[j].is_zero() {
                for d in 0..dim {
                    if !va[d].is_zero() {
                        x[d] += &k[j] * &va[d];
                    }
                }
            }
        }
        let sv = sparse_from_dense(&x);
        if ech.insert(sv) {
            out.push(x);
        }
    }
    out
}
