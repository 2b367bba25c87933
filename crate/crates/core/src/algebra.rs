//! Finite-dimensional graded algebras given by a basis and structure
//! constants.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::graded::GradedAlgebraView;
use crate::linalg::{self, SparseVec};
use crate::quiver::Path;
use crate::scalar::Scalar;

/// A homogeneous basis element `e_target · x · e_source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub source: usize,
    pub target: usize,
    pub degree: usize,
    pub weight: i32,
    pub label: String,
}

/// Basis plus multiplication table. `mul(x, y)` is the product `x·y`, which
/// is nonzero only when `source(x) == target(y)` (apply `y` first).
#[derive(Debug, Clone)]
pub struct FiniteAlgebra {
    vertex_count: usize,
    elements: Vec<BasisElement>,
    idempotents: Vec<usize>,
    products: HashMap<(usize, usize), SparseVec>,
}

impl FiniteAlgebra {
    /// Requires the idempotent of each vertex among the elements.
    pub fn new(
        vertex_count: usize,
        elements: Vec<BasisElement>,
        products: HashMap<(usize, usize), SparseVec>,
    ) -> Self {
        let mut idempotents = vec![usize::MAX; vertex_count];
        for (k, e) in elements.iter().enumerate() {
            if e.degree == 0 && e.source == e.target && idempotents[e.source] == usize::MAX {
                idempotents[e.source] = k;
            }
        }
        FiniteAlgebra {
            vertex_count,
            elements,
            idempotents,
            products: products.into_iter().filter(|(_, v)| !v.is_empty()).collect(),
        }
    }

    /// The algebra `kQ/(ρ)` of a finite-dimensional graded view, with the
    /// coset representatives as basis.
    pub fn from_view(view: &GradedAlgebraView, top: usize) -> Result<(Self, Vec<Path>)> {
        let q = view.quiver();
        let mut paths = Vec::new();
        for t in 0..=top {
            paths.extend(view.degree(t)?.basis());
        }
        let index: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let elements = paths
            .iter()
            .map(|p| BasisElement {
                source: p.source,
                target: p.target,
                degree: p.len(),
                weight: view.key_of(p).weight,
                label: q.path_name(p),
            })
            .collect();
        let mut products = HashMap::new();
        for (i, x) in paths.iter().enumerate() {
            for (j, y) in paths.iter().enumerate() {
                if y.target != x.source || x.len() + y.len() > top {
                    continue;
                }
                let prod = y.then(x);
                let nf = view.normal_form(&[(Scalar::one(), prod)])?;
                let v = linalg::collect(nf.into_iter().map(|(c, p)| (index[&p], c)));
                products.insert((i, j), v);
            }
        }
        Ok((FiniteAlgebra::new(q.vertex_count(), elements, products), paths))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn element(&self, k: usize) -> &BasisElement {
        &self.elements[k]
    }

    pub fn idempotent(&self, v: usize) -> usize {
        self.idempotents[v]
    }

    pub fn mul(&self, x: usize, y: usize) -> SparseVec {
        self.products.get(&(x, y)).cloned().unwrap_or_default()
    }

    pub fn mul_ref(&self, x: usize, y: usize) -> Option<&SparseVec> {
        self.products.get(&(x, y))
    }

    pub fn mul_vec(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
        linalg::collect(x.iter().flat_map(|(i, a)| {
            y.iter().flat_map(move |(j, b)| {
                let ab = a * b;
                self.mul(*i, *j)
                    .into_iter()
                    .map(move |(k, c)| (k, &ab * c))
            })
        }))
    }

    pub fn top_degree(&self) -> usize {
        self.elements.iter().map(|e| e.degree).max().unwrap_or(0)
    }

    pub fn dim_in_degree(&self, t: usize) -> usize {
        self.elements.iter().filter(|e| e.degree == t).count()
    }

    /// `(D_t)[i][j] = dim e_j A_t e_i`.
    pub fn dim_matrix(&self, t: usize) -> Vec<Vec<usize>> {
        let mut m = vec![vec![0; self.vertex_count]; self.vertex_count];
        for e in self.elements.iter().filter(|e| e.degree == t) {
            m[e.source][e.target] += 1;
        }
        m
    }

    /// Checks associativity and the unit on every basis triple. Quadratic in
    /// the dimension squared; meant for tests.
    pub fn check_associative(&self) -> bool {
        let n = self.dim();
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul(x, y);
                for z in 0..n {
                    let left = self.mul_vec(&xy, &[(z, Scalar::one())]);
                    let yz = self.mul(y, z);
                    let right = self.mul_vec(&[(x, Scalar::one())], &yz);
                    if left != right {
                        return false;
                    }
                }
            }
        }
        for x in 0..n {
            let e = &self.elements[x];
            let one = vec![(x, Scalar::one())];
            if self.mul(self.idempotents[e.target], x) != one
                || self.mul(x, self.idempotents[e.source]) != one
            {
                return false;
            }
        }
        true
    }

    /// Whether every element of positive degree is a sum of products of
    /// degree-one elements.
    pub fn generated_in_degree_one(&self) -> bool {
        let top = self.top_degree();
        let ones: Vec<usize> = (0..self.dim()).filter(|&k| self.elements[k].degree == 1).collect();
        let mut layer: Vec<SparseVec> = ones.iter().map(|&k| vec![(k, Scalar::one())]).collect();
        for t in 2..=top {
            let mut next = Vec::new();
            for v in &layer {
                for &a in &ones {
                    let p = self.mul_vec(&[(a, Scalar::one())], v);
                    if !p.is_empty() {
                        next.push(p);
                    }
                }
            }
            if linalg::rank(&next) != self.dim_in_degree(t) {
                return false;
            }
            layer = linalg::Echelon::from_vectors(&next).rows();
        }
        true
    }

    pub fn is_zero_product(&self, x: usize, y: usize) -> bool {
        self.products.get(&(x, y)).is_none_or(|v| v.iter().all(|(_, c)| c.is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::sync::Arc;

    #[test]
    fn auslander_algebra_table() {
        let view = GradedAlgebraView::new(Arc::new(fixtures::a4_auslander_lambda()));
        let (a, paths) = FiniteAlgebra::from_view(&view, 2).unwrap();
        assert_eq!(a.dim(), 15);
        assert_eq!(paths.len(), 15);
        assert!(a.check_associative());
        assert!(a.generated_in_degree_one());
        assert_eq!(a.dim_in_degree(2), 3);
        let e1 = a.idempotent(0);
        assert!(a.element(e1).label == "e1");
    }
}
