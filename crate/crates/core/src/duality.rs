//! Quadratic duals and bounded n-slice certification.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::Result;
use crate::graded::{check_properly_graded, GradedAlgebraView};
use crate::homology::{koszul_type, Bounds, KoszulReport};
use crate::linalg::{self, Echelon, Matrix};
use crate::quiver::{BoundQuiver, Path, Relation};
use crate::scalar::Scalar;

/// Length-2 paths from `i` to `j`, in path order.
pub fn length_two_paths(q: &BoundQuiver, i: usize, j: usize) -> Vec<Path> {
    let mut out = Vec::new();
    for &a in q.out_arrows(i) {
        let mid = q.arrow(a).target;
        for &b in q.out_arrows(mid) {
            if q.arrow(b).target == j {
                out.push(Path {
                    source: i,
                    target: j,
                    arrows: vec![a, b],
                });
            }
        }
    }
    out.sort();
    out
}

/// Pairing of the degree-2 relations from `i` to `j` against the path basis
/// of `e_j kQ_2 e_i`: row `r`, column `c` is the coefficient of path `c` in
/// relation `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingWitness {
    pub source: usize,
    pub target: usize,
    pub paths: Vec<Path>,
    pub matrix: Matrix,
}

pub fn pairing_witness(q: &BoundQuiver, i: usize, j: usize) -> PairingWitness {
    let paths = length_two_paths(q, i, j);
    let rels: Vec<&Relation> = q
        .relations()
        .iter()
        .filter(|r| r.degree() == 2 && r.source() == i && r.target() == j)
        .collect();
    let mut matrix = Matrix::zeros(rels.len(), paths.len());
    for (r, rel) in rels.iter().enumerate() {
        for (c, p) in rel.terms() {
            let col = paths.iter().position(|x| x == p).expect("relation path is a length-2 path");
            matrix[(r, col)] = c.clone();
        }
    }
    PairingWitness {
        source: i,
        target: j,
        paths,
        matrix,
    }
}

/// Relations of each `(i, j)` block as coordinate vectors over the
/// length-2 paths of the block.
fn degree_two_blocks(q: &BoundQuiver) -> BTreeMap<(usize, usize), (Vec<Path>, Echelon)> {
    let mut blocks = BTreeMap::new();
    for i in 0..q.vertex_count() {
        for j in 0..q.vertex_count() {
            let paths = length_two_paths(q, i, j);
            if !paths.is_empty() {
                blocks.insert((i, j), (paths, Echelon::new()));
            }
        }
    }
    for r in q.relations() {
        let (paths, span) = blocks.get_mut(&(r.source(), r.target())).expect("block exists");
        let v = linalg::collect(
            r.terms()
                .iter()
                .map(|(c, p)| (paths.iter().position(|x| x == p).unwrap(), c.clone())),
        );
        span.insert(v);
    }
    blocks
}

/// Same quiver; in every `(i, j)` block the relations span the orthogonal
/// complement of the given ones under the pairing that makes the path basis
/// self-dual. Output relations are the reduced echelon basis of the
/// complement, block by block.
pub fn quadratic_dual(q: &BoundQuiver) -> Result<BoundQuiver> {
    q.check_quadratic()?;
    let mut relations = Vec::new();
    for (paths, span) in degree_two_blocks(q).into_values() {
        for row in span.complement(paths.len()) {
            relations.push(Relation::new(
                row.into_iter().map(|(i, c)| (c, paths[i].clone())).collect(),
            )?);
        }
    }
    q.with_relations(relations)
}

/// Whether two quivers with the same arrows have equal degree-2 relation
/// spans in every block.
pub fn same_relation_span(a: &BoundQuiver, b: &BoundQuiver) -> bool {
    let (ba, bb) = (degree_two_blocks(a), degree_two_blocks(b));
    if ba.len() != bb.len() {
        return false;
    }
    ba.iter().all(|(k, (pa, sa))| {
        bb.get(k).is_some_and(|(pb, sb)| pa == pb && sa.rows() == sb.rows())
    })
}

/// The relation span of one `(i, j)` block in canonical echelon form.
pub fn block_span(q: &BoundQuiver, i: usize, j: usize) -> Vec<Vec<(Scalar, Path)>> {
    degree_two_blocks(q)
        .remove(&(i, j))
        .map(|(paths, span)| {
            span.rows()
                .into_iter()
                .map(|row| row.into_iter().map(|(k, c)| (c, paths[k].clone())).collect())
                .collect()
        })
        .unwrap_or_default()
}

/// Bounded evidence that a quadratic acyclic quiver presents an n-slice
/// algebra.
#[derive(Debug, Clone)]
pub struct SliceCertificate {
    pub n: usize,
    pub lambda: BoundQuiver,
    pub koszul: KoszulReport,
    /// The degree-2 kernel presents the trivial extension exactly.
    pub quadratic_extension: bool,
}

impl SliceCertificate {
    /// `q` when the trivial extension is `(n+1, q)`-Koszul.
    pub fn coxeter_index(&self) -> Option<usize> {
        self.koszul.coxeter_index()
    }
}

pub fn n_slice_certify(gamma: &BoundQuiver, bounds: &Bounds) -> Result<SliceCertificate> {
    gamma.check_quadratic()?;
    gamma.check_acyclic()?;
    let lambda = quadratic_dual(gamma)?;
    let view = GradedAlgebraView::with_cap(Arc::new(lambda.clone()), bounds.path_cap);
    let n = check_properly_graded(&view, bounds.degree)?;
    let sigma = crate::automorphism::GradedAutomorphism::nu(&lambda, n);
    let ext = crate::extension::build_trivial_extension(&lambda, &sigma, bounds)?;
    let koszul = koszul_type(&ext.algebra, bounds)?;
    Ok(SliceCertificate {
        n,
        lambda,
        koszul,
        quadratic_extension: ext.quadratic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_traits::One;

    #[test]
    fn auslander_dual_matches_gamma() {
        let dual = quadratic_dual(&fixtures::a4_auslander_lambda()).unwrap();
        assert!(same_relation_span(&dual, &fixtures::a4_auslander_gamma()));
        let back = quadratic_dual(&dual).unwrap();
        assert!(same_relation_span(&back, &fixtures::a4_auslander_lambda()));
    }

    #[test]
    fn empty_and_full_complements() {
        let a3 = fixtures::linear_a(3);
        let full = quadratic_dual(&a3).unwrap();
        assert_eq!(full.relations().len(), 1);
        assert!(quadratic_dual(&full).unwrap().relations().is_empty());
        assert!(quadratic_dual(&fixtures::kronecker(2)).unwrap().relations().is_empty());
    }

    #[test]
    fn pairing_of_path_basis_is_identity() {
        let q = fixtures::a4_auslander_lambda();
        let full = q
            .with_relations(
                length_two_paths(&q, 1, 4)
                    .into_iter()
                    .map(|p| Relation::new(vec![(Scalar::one(), p)]).unwrap())
                    .collect(),
            )
            .unwrap();
        let w = pairing_witness(&full, 1, 4);
        assert_eq!(w.matrix, Matrix::identity(2));
    }

    #[test]
    fn non_quadratic_rejected() {
        let q = fixtures::linear_a(4);
        let q = q.with_relations(vec![q.parse_relation("a1.a2.a3").unwrap()]).unwrap();
        assert!(quadratic_dual(&q).is_err());
    }
}
