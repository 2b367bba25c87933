//! Exact sparse linear algebra: incremental reduced echelon forms, kernels,
//! orthogonal complements, and a small dense matrix type.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Sparse vector as `(index, value)` pairs, sorted by index, no zero values.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn from_map(m: BTreeMap<usize, Scalar>) -> SparseVec {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Normalizes an unsorted list of entries, summing duplicates.
pub fn collect(entries: impl IntoIterator<Item = (usize, Scalar)>) -> SparseVec {
    let mut m: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (i, v) in entries {
        *m.entry(i).or_insert_with(Scalar::zero) += v;
    }
    from_map(m)
}

/// `a + c * b`.
pub fn axpy(a: &[(usize, Scalar)], c: &Scalar, b: &[(usize, Scalar)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(a: &[(usize, Scalar)], c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, v)| (*i, v * c)).collect()
}

pub fn dot(a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> Scalar {
    let mut s = Scalar::zero();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                s += &a[i].1 * &b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    s
}

pub fn get(a: &[(usize, Scalar)], idx: usize) -> Option<&Scalar> {
    a.binary_search_by_key(&idx, |(i, _)| *i)
        .ok()
        .map(|k| &a[k].1)
}

/// Reduced row echelon form grown one vector at a time.
///
/// Pivots sit on the smallest index of each row and every row is zero on the
/// pivot columns of the others, so reduction is a single pass.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivots: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors<'a>(vs: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        let mut e = Self::new();
        for v in vs {
            e.insert(v.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Removes every pivot column from `v`; the result is the canonical
    /// representative of `v` modulo the span.
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut out: SparseVec = v.to_vec();
        for (col, val) in v {
            if let Some(&r) = self.pivots.get(col) {
                let c = -val.clone();
                out = axpy(&out, &c, &self.rows[r]);
            }
        }
        out
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span. Returns false when it was already there.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut w = self.reduce(&v);
        if w.is_empty() {
            return false;
        }
        let (p, lead) = (w[0].0, w[0].1.clone());
        if !lead.is_one() {
            let inv = lead.recip();
            w = scale(&w, &inv);
        }
        for row in self.rows.iter_mut() {
            if let Some(c) = get(row, p).cloned() {
                *row = axpy(row, &(-c), &w);
            }
        }
        self.pivots.insert(p, self.rows.len());
        self.rows.push(w);
        true
    }

    /// Rows of the reduced echelon form, ordered by pivot column.
    pub fn rows(&self) -> Vec<SparseVec> {
        self.pivots.values().map(|&r| self.rows[r].clone()).collect()
    }

    /// Basis of the orthogonal complement inside coordinates `0..dim` under
    /// the standard pairing, itself in reduced echelon form.
    pub fn complement(&self, dim: usize) -> Vec<SparseVec> {
        let rows = self.rows();
        let mut e = Echelon::new();
        for f in (0..dim).filter(|c| !self.is_pivot(*c)) {
            let mut entries = vec![(f, Scalar::one())];
            for row in &rows {
                if let Some(v) = get(row, f) {
                    entries.push((row[0].0, -v.clone()));
                }
            }
            e.insert(collect(entries));
        }
        e.rows()
    }
}

/// Kernel of the linear map sending basis vector `k` to `images[k]`, as a
/// reduced echelon basis in domain coordinates.
pub fn kernel(images: &[SparseVec]) -> Vec<SparseVec> {
    let offset = images
        .iter()
        .flat_map(|v| v.last().map(|(i, _)| *i + 1))
        .max()
        .unwrap_or(0);
    let mut e = Echelon::new();
    for (k, img) in images.iter().enumerate() {
        let mut v = img.clone();
        v.push((offset + k, Scalar::one()));
        e.insert(v);
    }
    e.rows()
        .into_iter()
        .filter(|r| r[0].0 >= offset)
        .map(|r| r.into_iter().map(|(i, v)| (i - offset, v)).collect())
        .collect()
}

/// Dimension of the span of `vs`.
pub fn rank(vs: &[SparseVec]) -> usize {
    Echelon::from_vectors(vs).rank()
}

/// Dense matrix over the rationals, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_sparse(&self, r: usize) -> SparseVec {
        self.row(r)
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect()
    }

    pub fn column_sparse(&self, c: usize) -> SparseVec {
        (0..self.rows)
            .filter(|&r| !self[(r, c)].is_zero())
            .map(|r| (r, self[(r, c)].clone()))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<SparseVec> = (0..self.rows).map(|r| self.row_sparse(r)).collect();
        rank(&rows)
    }

    /// Inverse by Gauss-Jordan elimination, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a[(col, col)].recip();
            for c in 0..n {
                a[(col, c)] = &a[(col, c)] * &p;
                inv[(col, c)] = &inv[(col, c)] * &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for c in 0..n {
                    let da = &f * &a[(col, c)];
                    a[(r, c)] -= da;
                    let di = &f * &inv[(col, c)];
                    inv[(r, c)] -= di;
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        collect(entries.iter().map(|&(i, v)| (i, int(v))))
    }

    #[test]
    fn echelon_detects_dependence() {
        let mut e = Echelon::new();
        assert!(e.insert(sv(&[(0, 1), (1, 2)])));
        assert!(e.insert(sv(&[(1, 1), (2, 1)])));
        assert!(!e.insert(sv(&[(0, 1), (1, 3), (2, 1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.reduce(&sv(&[(0, 2), (1, 4)])).is_empty());
    }

    #[test]
    fn rows_are_reduced() {
        let e = Echelon::from_vectors(&[sv(&[(0, 2), (1, 2)]), sv(&[(1, 3)])]);
        assert_eq!(e.rows(), vec![sv(&[(0, 1)]), sv(&[(1, 1)])]);
    }

    #[test]
    fn kernel_of_small_map() {
        // x0 -> e0, x1 -> e0, x2 -> e1 + e0
        let k = kernel(&[sv(&[(0, 1)]), sv(&[(0, 1)]), sv(&[(0, 1), (1, 1)])]);
        assert_eq!(k, vec![sv(&[(0, 1), (1, -1)])]);
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let k = kernel(&[Vec::new(), Vec::new()]);
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn complement_is_orthogonal_and_complementary() {
        let e = Echelon::from_vectors(&[sv(&[(0, 1), (1, -1)]), sv(&[(2, 1), (3, 1)])]);
        let c = e.complement(4);
        assert_eq!(c.len(), 2);
        for u in &c {
            for v in e.rows() {
                assert!(dot(u, &v).is_zero());
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_fn(3, 3, |r, c| int([[2, 1, 0], [0, 1, 4], [1, 0, 1]][r][c]));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        let singular = Matrix::from_fn(2, 2, |_, _| int(1));
        assert!(singular.inverse().is_none());
        assert_eq!(singular.rank(), 1);
    }
}
