//! Graded automorphisms acting blockwise on arrow spans.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, Matrix, SparseVec};
use crate::quiver::{Bidegree, BoundQuiver, Path, Relation};
use crate::scalar::{int, Scalar};

/// Fixes idempotents and sends each arrow to a combination of arrows with
/// the same endpoints and bidegree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAutomorphism {
    /// Image of arrow `k`, in arrow-index coordinates.
    images: Vec<SparseVec>,
}

type BlockId = (usize, usize, Bidegree);

fn blocks(q: &BoundQuiver) -> BTreeMap<BlockId, Vec<usize>> {
    let mut m: BTreeMap<BlockId, Vec<usize>> = BTreeMap::new();
    for (k, a) in q.arrows().iter().enumerate() {
        m.entry((a.source, a.target, a.bidegree)).or_default().push(k);
    }
    m
}

impl GradedAutomorphism {
    pub fn identity(q: &BoundQuiver) -> Self {
        Self::diagonal(q, &vec![Scalar::one(); q.arrows().len()]).expect("identity is valid")
    }

    /// `ε^m`: every arrow scaled by `(-1)^m`.
    pub fn eps(q: &BoundQuiver, m: u32) -> Self {
        let s = if m.is_multiple_of(2) { int(1) } else { int(-1) };
        Self::diagonal(q, &vec![s; q.arrows().len()]).expect("sign twist is valid")
    }

    /// `ν`: every arrow scaled by `(-1)^n`.
    pub fn nu(q: &BoundQuiver, n: usize) -> Self {
        Self::eps(q, (n % 2) as u32)
    }

    pub fn diagonal(q: &BoundQuiver, scales: &[Scalar]) -> Result<Self> {
        if scales.len() != q.arrows().len() {
            return Err(Error::InvalidAutomorphism("one scale per arrow expected".into()));
        }
        if scales.iter().any(Zero::is_zero) {
            return Err(Error::InvalidAutomorphism("zero scale".into()));
        }
        Ok(GradedAutomorphism {
            images: scales
                .iter()
                .enumerate()
                .map(|(k, s)| vec![(k, s.clone())])
                .collect(),
        })
    }

    /// From explicit arrow images. Validates shape and invertibility but not
    /// compatibility with relations; see [`Self::validate`].
    pub fn from_images(q: &BoundQuiver, images: Vec<SparseVec>) -> Result<Self> {
        if images.len() != q.arrows().len() {
            return Err(Error::InvalidAutomorphism("one image per arrow expected".into()));
        }
        for (k, img) in images.iter().enumerate() {
            let a = q.arrow(k);
            for (j, _) in img {
                let b = q.arrows().get(*j).ok_or_else(|| {
                    Error::InvalidAutomorphism(format!("image of `{}` uses unknown arrow", a.id))
                })?;
                if (b.source, b.target, b.bidegree) != (a.source, a.target, a.bidegree) {
                    return Err(Error::InvalidAutomorphism(format!(
                        "image of `{}` leaves its block",
                        a.id
                    )));
                }
            }
        }
        let sigma = GradedAutomorphism { images };
        for ks in blocks(q).values() {
            if sigma.block_matrix(ks).inverse().is_none() {
                return Err(Error::InvalidAutomorphism(format!(
                    "block of `{}` is singular",
                    q.arrow(ks[0]).id
                )));
            }
        }
        Ok(sigma)
    }

    pub fn image(&self, arrow: usize) -> &SparseVec {
        &self.images[arrow]
    }

    /// Column `c` holds the image of arrow `ks[c]` in the basis `ks`.
    fn block_matrix(&self, ks: &[usize]) -> Matrix {
        Matrix::from_fn(ks.len(), ks.len(), |r, c| {
            linalg::get(&self.images[ks[c]], ks[r])
                .cloned()
                .unwrap_or_else(Scalar::zero)
        })
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(k, img)| img.len() == 1 && img[0].0 == k && img[0].1.is_one())
    }

    pub fn inverse(&self, q: &BoundQuiver) -> Self {
        let mut images = vec![Vec::new(); self.images.len()];
        for ks in blocks(q).values() {
            let inv = self
                .block_matrix(ks)
                .inverse()
                .expect("validated automorphisms are invertible");
            for (c, &k) in ks.iter().enumerate() {
                images[k] = linalg::collect(
                    (0..ks.len()).map(|r| (ks[r], inv[(r, c)].clone())),
                );
            }
        }
        GradedAutomorphism { images }
    }

    pub fn compose(&self, then: &GradedAutomorphism) -> Self {
        // (then ∘ self)(a) = then(self(a))
        let images = self
            .images
            .iter()
            .map(|img| {
                linalg::collect(img.iter().flat_map(|(j, c)| {
                    then.images[*j].iter().map(move |(k, d)| (*k, c * d))
                }))
            })
            .collect();
        GradedAutomorphism { images }
    }

    /// Image of a path as a combination of paths.
    pub fn apply_path(&self, p: &Path) -> Vec<(Scalar, Path)> {
        let mut acc: Vec<(Scalar, Vec<usize>)> = vec![(Scalar::one(), Vec::new())];
        for &a in &p.arrows {
            let mut next = Vec::new();
            for (c, arrows) in &acc {
                for (b, d) in &self.images[a] {
                    let mut v = arrows.clone();
                    v.push(*b);
                    next.push((c * d, v));
                }
            }
            acc = next;
        }
        let mut merged: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        for (c, arrows) in acc {
            *merged.entry(arrows).or_insert_with(Scalar::zero) += c;
        }
        let mut out: Vec<(Scalar, Path)> = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(arrows, c)| {
                (
                    c,
                    Path {
                        source: p.source,
                        target: p.target,
                        arrows,
                    },
                )
            })
            .collect();
        out.sort_by(|a, b| a.1.cmp(&b.1));
        out
    }

    pub fn apply_relation(&self, r: &Relation) -> Result<Relation> {
        let terms = r
            .terms()
            .iter()
            .flat_map(|(c, p)| {
                self.apply_path(p)
                    .into_iter()
                    .map(move |(d, path)| (c * d, path))
            })
            .collect();
        Relation::new(terms)
    }

    /// Checks that the relation span of every block is mapped into itself.
    pub fn validate(&self, q: &BoundQuiver) -> Result<()> {
        let mut spans: BTreeMap<(usize, usize, usize), Vec<Relation>> = BTreeMap::new();
        for r in q.relations() {
            spans
                .entry((r.source(), r.target(), r.degree()))
                .or_default()
                .push(r.clone());
        }
        for rels in spans.values() {
            let mut span = Echelon::new();
            let mut index: BTreeMap<Path, usize> = BTreeMap::new();
            let coords = |terms: &[(Scalar, Path)], index: &mut BTreeMap<Path, usize>| {
                linalg::collect(terms.iter().map(|(c, p)| {
                    let n = index.len();
                    (*index.entry(p.clone()).or_insert(n), c.clone())
                }))
            };
            for r in rels.iter() {
                span.insert(coords(r.terms(), &mut index));
            }
            for r in rels.iter() {
                let image = self.apply_relation(r)?;
                if !span.contains(&coords(image.terms(), &mut index)) {
                    return Err(Error::InvalidAutomorphism(format!(
                        "image of relation `{}` leaves the relation span",
                        q.relation_text(r)
                    )));
                }
            }
        }
        Ok(())
    }
}
