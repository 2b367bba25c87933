//! Twisted trivial extensions `Δ_σΛ = Λ ⊕ DΛ` and their returning-arrow
//! presentations.
//!
//! Basis: the coset representatives `b_0..b_{N-1}` of `Λ`, followed by the
//! dual basis `b_0*..b_{N-1}*` of `DΛ`. The dual `b*` of a path `b: i → j`
//! runs `j → i` with bidegree `(n+1-|b|, 1)`. Multiplication is
//! `(a,x)(b,y) = (ab, a·y + x·σ(b))` with `(a·f)(z) = f(za)` and
//! `(f·a)(z) = f(az)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{BasisElement, FiniteAlgebra};
use crate::automorphism::GradedAutomorphism;
use crate::duality::quadratic_dual;
use crate::error::{Error, Result};
use crate::graded::{check_properly_graded, BlockKey, GradedAlgebraView};
use crate::homology::Bounds;
use crate::linalg::{self, Matrix, SparseVec};
use crate::quiver::{Arrow, BoundQuiver, Path, Relation};
use crate::scalar::Scalar;

/// The returning arrow `β_p: t(p) → s(p)` attached to a maximal bound path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturningArrow {
    /// Index of the arrow in `Q̃`.
    pub arrow: usize,
    /// The maximal bound path `p` in `Λ`.
    pub path: Path,
}

#[derive(Debug, Clone)]
pub struct TrivialExtension {
    pub lambda: BoundQuiver,
    pub n: usize,
    pub sigma: GradedAutomorphism,
    /// Coset representatives of `Λ`; index `k` is basis element `k` of the
    /// algebra and `N + k` is its dual.
    pub lambda_basis: Vec<Path>,
    pub algebra: FiniteAlgebra,
    /// `Q̃` with the degree-2 kernel `ρ̃^σ` as relations.
    pub tilde: BoundQuiver,
    pub returning: Vec<ReturningArrow>,
    /// Basis element of the algebra that each arrow of `Q̃` maps to.
    pub arrow_images: Vec<usize>,
    /// `kQ̃/(ρ̃^σ)` vanishes in degree `n+2`, so the presentation is exact.
    pub quadratic: bool,
    /// `σ` on the basis of `Λ`: column `k` is `σ(b_k)`.
    sigma_on_basis: Vec<SparseVec>,
}

fn returning_names(q: &BoundQuiver, maximal: &[Path]) -> Vec<String> {
    let mut by_target: BTreeMap<usize, usize> = BTreeMap::new();
    for p in maximal {
        *by_target.entry(p.target).or_default() += 1;
    }
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    let mut taken: std::collections::HashSet<String> =
        q.arrows().iter().map(|a| a.id.clone()).collect();
    maximal
        .iter()
        .map(|p| {
            let t = q.vertex_id(p.target);
            let k = seen.entry(p.target).or_default();
            *k += 1;
            let mut name = if by_target[&p.target] == 1 {
                format!("c{t}")
            } else {
                format!("c{t}_{k}")
            };
            while !taken.insert(name.clone()) {
                name.push('\'');
            }
            name
        })
        .collect()
}

/// Builds `Δ_σΛ` explicitly, reads off `ρ̃^σ` as the degree-2 kernel of
/// `kQ̃ → Δ_σΛ`, and checks the presentation dimension by dimension through
/// degree `n+1`.
pub fn build_trivial_extension(
    lambda: &BoundQuiver,
    sigma: &GradedAutomorphism,
    bounds: &Bounds,
) -> Result<TrivialExtension> {
    lambda.check_acyclic()?;
    sigma.validate(lambda)?;
    let view = GradedAlgebraView::with_cap(Arc::new(lambda.clone()), bounds.path_cap);
    let n = check_properly_graded(&view, bounds.degree)?;
    let (lam, basis) = FiniteAlgebra::from_view(&view, n)?;
    let big_n = basis.len();
    let index: HashMap<Path, usize> = basis.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();

    let mut sigma_on_basis = Vec::with_capacity(big_n);
    for b in &basis {
        let nf = view.normal_form(&sigma.apply_path(b))?;
        sigma_on_basis.push(linalg::collect(nf.into_iter().map(|(c, p)| (index[&p], c))));
    }

    let mut elements: Vec<BasisElement> = lam
        .elements()
        .iter()
        .map(|e| BasisElement {
            weight: 0,
            ..e.clone()
        })
        .collect();
    for e in lam.elements() {
        elements.push(BasisElement {
            source: e.target,
            target: e.source,
            degree: n + 1 - e.degree,
            weight: 1,
            label: format!("({})*", e.label),
        });
    }

    let mut products: HashMap<(usize, usize), SparseVec> = HashMap::new();
    for x in 0..big_n {
        for y in 0..big_n {
            if let Some(v) = lam.mul_ref(x, y) {
                products.insert((x, y), v.clone());
            }
        }
    }
    for (k, sigma_k) in sigma_on_basis.iter().enumerate() {
        // b_k · b_l* = Σ_z [b_l in z·b_k] z*
        for z in 0..big_n {
            if let Some(zk) = lam.mul_ref(z, k) {
                for (l, c) in zk {
                    products
                        .entry((k, big_n + l))
                        .or_default()
                        .push((big_n + z, c.clone()));
                }
            }
        }
        // b_l* · σ(b_k) = Σ_z [b_l in σ(b_k)·z] z*
        for z in 0..big_n {
            let prod = lam.mul_vec(sigma_k, &[(z, Scalar::one())]);
            for (l, c) in prod {
                products
                    .entry((big_n + l, k))
                    .or_default()
                    .push((big_n + z, c));
            }
        }
    }
    for v in products.values_mut() {
        *v = linalg::collect(std::mem::take(v));
    }
    let algebra = FiniteAlgebra::new(lambda.vertex_count(), elements, products);

    // Q̃: old arrows, then one returning arrow per maximal bound path.
    let maximal: Vec<Path> = view.degree(n)?.basis();
    let names = returning_names(lambda, &maximal);
    let mut arrows: Vec<Arrow> = lambda
        .arrows()
        .iter()
        .map(|a| Arrow {
            bidegree: (1, 0),
            ..a.clone()
        })
        .collect();
    let mut arrow_images: Vec<usize> = lambda
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, _)| {
            let p = Path {
                source: lambda.arrow(k).source,
                target: lambda.arrow(k).target,
                arrows: vec![k],
            };
            index[&p]
        })
        .collect();
    let mut returning = Vec::new();
    for (p, name) in maximal.iter().zip(names) {
        returning.push(ReturningArrow {
            arrow: arrows.len(),
            path: p.clone(),
        });
        arrows.push(Arrow {
            id: name,
            source: p.target,
            target: p.source,
            bidegree: (1, 1),
        });
        arrow_images.push(big_n + index[p]);
    }
    let bare = BoundQuiver::new(lambda.vertices().to_vec(), arrows, Vec::new())?;

    let relations = degree_two_kernel(&bare, &algebra, &arrow_images)?;
    let tilde = bare.with_relations(relations)?;

    // Compare dimensions block by block through degree n+1.
    let tview = GradedAlgebraView::with_cap(Arc::new(tilde.clone()), bounds.path_cap);
    for t in 0..=n + 1 {
        let expected = algebra_block_dims(&algebra, t);
        if tview.block_dims(t)? != expected {
            return Err(Error::NonQuadraticExtension { degree: t });
        }
    }
    let quadratic = matches!(tview.dim(n + 2), Ok(0));

    Ok(TrivialExtension {
        lambda: lambda.clone(),
        n,
        sigma: sigma.clone(),
        lambda_basis: basis,
        algebra,
        tilde,
        returning,
        arrow_images,
        quadratic,
        sigma_on_basis,
    })
}

fn algebra_block_dims(a: &FiniteAlgebra, t: usize) -> BTreeMap<BlockKey, usize> {
    let mut m = BTreeMap::new();
    for e in a.elements().iter().filter(|e| e.degree == t) {
        *m.entry(BlockKey {
            source: e.source,
            target: e.target,
            weight: e.weight,
        })
        .or_default() += 1;
    }
    m
}

/// Kernel of `kQ_2 → A_2` for a quiver whose arrows map to basis elements,
/// one reduced echelon basis per block.
fn degree_two_kernel(q: &BoundQuiver, a: &FiniteAlgebra, images: &[usize]) -> Result<Vec<Relation>> {
    let mut blocks: BTreeMap<BlockKey, Vec<Path>> = BTreeMap::new();
    for (x, ax) in q.arrows().iter().enumerate() {
        for &y in q.out_arrows(ax.target) {
            let ay = q.arrow(y);
            blocks
                .entry(BlockKey {
                    source: ax.source,
                    target: ay.target,
                    weight: ax.bidegree.1 + ay.bidegree.1,
                })
                .or_default()
                .push(Path {
                    source: ax.source,
                    target: ay.target,
                    arrows: vec![x, y],
                });
        }
    }
    let mut relations = Vec::new();
    for mut paths in blocks.into_values() {
        paths.sort();
        let imgs: Vec<SparseVec> = paths
            .iter()
            .map(|p| a.mul(images[p.arrows[1]], images[p.arrows[0]]))
            .collect();
        for k in linalg::kernel(&imgs) {
            relations.push(Relation::new(
                k.into_iter().map(|(i, c)| (c, paths[i].clone())).collect(),
            )?);
        }
    }
    Ok(relations)
}

impl TrivialExtension {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn lambda_dim(&self) -> usize {
        self.lambda_basis.len()
    }

    /// `μ(x) = x(1)` on the dual half, zero on `Λ`: the dual basis elements
    /// of the idempotents get 1.
    pub fn mu(&self, x: &[(usize, Scalar)]) -> Scalar {
        let big_n = self.lambda_dim();
        x.iter()
            .filter(|(k, _)| *k >= big_n && self.lambda_basis[*k - big_n].is_empty())
            .map(|(_, c)| c.clone())
            .sum()
    }

    pub fn mu_basis(&self, k: usize) -> Scalar {
        self.mu(&[(k, Scalar::one())])
    }

    /// `(x, y) = μ(xy)` on basis elements.
    pub fn bilinear_form(&self, x: usize, y: usize) -> Scalar {
        self.mu(&self.algebra.mul(x, y))
    }

    pub fn gram(&self) -> Matrix {
        let d = self.dim();
        Matrix::from_fn(d, d, |x, y| self.bilinear_form(x, y))
    }

    /// `μ` of a path in `Q̃` with exactly one returning arrow, computed by
    /// rotating the path so that the returning arrow comes last and pairing
    /// the remaining path in `Λ` with `p*`. Zero for other paths.
    pub fn mu_of_rotation(&self, view: &GradedAlgebraView, path: &Path) -> Result<Scalar> {
        let ret: Vec<usize> = path
            .arrows
            .iter()
            .enumerate()
            .filter(|(_, a)| **a >= self.lambda.arrows().len())
            .map(|(i, _)| i)
            .collect();
        if ret.len() != 1 || path.source != path.target {
            return Ok(Scalar::zero());
        }
        let r = ret[0];
        let beta = &self.returning[path.arrows[r] - self.lambda.arrows().len()];
        // Traversal after the returning arrow, then before it.
        let mut arrows: Vec<usize> = path.arrows[r + 1..].to_vec();
        arrows.extend_from_slice(&path.arrows[..r]);
        let rotated = if arrows.is_empty() {
            Path::trivial(beta.path.source)
        } else {
            self.lambda.path_from_indices(arrows)?
        };
        if rotated.len() != beta.path.len() {
            return Ok(Scalar::zero());
        }
        let nf = view.normal_form(&[(Scalar::one(), rotated)])?;
        Ok(nf
            .into_iter()
            .filter(|(_, p)| *p == beta.path)
            .map(|(c, _)| c)
            .sum())
    }

    /// Image in the algebra of a path of `Q̃`.
    pub fn path_image(&self, path: &Path) -> SparseVec {
        let mut acc: SparseVec = vec![(self.algebra.idempotent(path.source), Scalar::one())];
        for &a in &path.arrows {
            acc = self
                .algebra
                .mul_vec(&[(self.arrow_images[a], Scalar::one())], &acc);
        }
        acc
    }

    /// Dimension table `dims[t][w]` of `Δ_σΛ` by bidegree.
    pub fn bigraded_dimensions(&self) -> Vec<[usize; 2]> {
        let mut out = vec![[0; 2]; self.n + 2];
        for e in self.algebra.elements() {
            out[e.degree][e.weight as usize] += 1;
        }
        out
    }

    /// Checks `Λ̃_t = Λ_t ⊕ DΛ_{n+1-t}` with the two halves in second
    /// degrees 0 and 1.
    pub fn check_bigraded_dimensions(&self) -> bool {
        let mut lam = vec![0usize; self.n + 2];
        for p in &self.lambda_basis {
            lam[p.len()] += 1;
        }
        self.bigraded_dimensions()
            .iter()
            .enumerate()
            .all(|(t, [w0, w1])| *w0 == lam[t] && *w1 == lam[self.n + 1 - t])
    }

    /// The Nakayama automorphism `ω` with `(a, b) = (b, ω(a))`, checked
    /// against `ω = σ^{-1}` on old arrows and `ω(β_p) = p*σ`.
    pub fn nakayama_automorphism(&self) -> Result<GradedAutomorphism> {
        let g = self.gram();
        let ginv = g
            .inverse()
            .ok_or_else(|| Error::Verification("bilinear form is degenerate".into()))?;
        let w = ginv.mul(&g.transpose());
        let omega = |k: usize| w.column_sparse(k);
        for v in 0..self.algebra.vertex_count() {
            let e = self.algebra.idempotent(v);
            if omega(e) != vec![(e, Scalar::one())] {
                return Err(Error::Verification(format!("ω moves the idempotent at {v}")));
            }
        }
        let mut by_image: HashMap<usize, usize> = HashMap::new();
        for (a, &img) in self.arrow_images.iter().enumerate() {
            by_image.insert(img, a);
        }
        let mut images = Vec::with_capacity(self.arrow_images.len());
        for &img in &self.arrow_images {
            let col = omega(img);
            let mapped = col
                .iter()
                .map(|(k, c)| {
                    by_image.get(k).map(|a| (*a, c.clone())).ok_or_else(|| {
                        Error::Verification("ω leaves the arrow span".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            images.push(linalg::collect(mapped));
        }
        let omega_q = GradedAutomorphism::from_images(&self.tilde, images)?;

        let old = self.lambda.arrows().len();
        let sigma_inv = self.sigma.inverse(&self.lambda);
        for a in 0..old {
            if omega_q.image(a) != sigma_inv.image(a) {
                return Err(Error::Verification(format!(
                    "ω differs from σ⁻¹ on arrow `{}`",
                    self.lambda.arrow(a).id
                )));
            }
        }
        let big_n = self.lambda_dim();
        let top: Vec<usize> = (0..big_n)
            .filter(|&k| self.lambda_basis[k].len() == self.n)
            .collect();
        for r in &self.returning {
            let p = self.lambda_basis.iter().position(|b| *b == r.path).unwrap();
            // (p*σ)(m) = p*(σ(m)) for m in Λ_n.
            let expected = linalg::collect(top.iter().filter_map(|&m| {
                linalg::get(&self.sigma_on_basis[m], p).map(|c| (big_n + m, c.clone()))
            }));
            if omega(big_n + p) != expected {
                return Err(Error::Verification(format!(
                    "ω(β) differs from p*σ for `{}`",
                    self.tilde.arrow(r.arrow).id
                )));
            }
        }
        // Check (a, b) = (b, ω(a)) through the multiplication table.
        for a in 0..self.dim() {
            let wa = omega(a);
            for b in 0..self.dim() {
                let rhs = self.mu(&self.algebra.mul_vec(&[(b, Scalar::one())], &wa));
                if self.bilinear_form(a, b) != rhs {
                    return Err(Error::Verification("Nakayama identity fails".into()));
                }
            }
        }
        Ok(omega_q)
    }

    /// `ω` on the whole basis of the algebra, column `k` the image of `k`.
    pub fn nakayama_matrix(&self) -> Result<Matrix> {
        let g = self.gram();
        let ginv = g
            .inverse()
            .ok_or_else(|| Error::Verification("bilinear form is degenerate".into()))?;
        Ok(ginv.mul(&g.transpose()))
    }
}

/// `Π(Γ)` together with the trivial extension it dualizes.
#[derive(Debug, Clone)]
pub struct Preprojective {
    pub extension: TrivialExtension,
    /// `Q̃` with relations `(ρ̃^ν)⊥`.
    pub quiver: BoundQuiver,
}

impl Preprojective {
    /// Relations of second degree 0 form the relations of `Γ`.
    pub fn degree_zero_part(&self) -> Result<BoundQuiver> {
        let q = &self.quiver;
        let keep: Vec<Relation> = q
            .relations()
            .iter()
            .filter(|r| {
                r.terms()
                    .iter()
                    .all(|(_, p)| p.arrows.iter().all(|&a| q.arrow(a).bidegree.1 == 0))
            })
            .cloned()
            .collect();
        let arrows: Vec<Arrow> = q
            .arrows()
            .iter()
            .filter(|a| a.bidegree.1 == 0)
            .cloned()
            .collect();
        BoundQuiver::new(q.vertices().to_vec(), arrows, keep)
    }
}

/// `Π(Γ) = (Δ_νΛ)^!` with `Λ = Γ^!` and `ν = ε^n`.
pub fn preprojective_algebra(gamma: &BoundQuiver, bounds: &Bounds) -> Result<Preprojective> {
    gamma.check_quadratic()?;
    gamma.check_acyclic()?;
    let lambda = quadratic_dual(gamma)?;
    let view = GradedAlgebraView::with_cap(Arc::new(lambda.clone()), bounds.path_cap);
    let n = check_properly_graded(&view, bounds.degree)?;
    let nu = GradedAutomorphism::nu(&lambda, n);
    let extension = build_trivial_extension(&lambda, &nu, bounds)?;
    let quiver = quadratic_dual(&extension.tilde)?;
    let pre = Preprojective { extension, quiver };
    let zero = pre.degree_zero_part()?;
    if !crate::duality::same_relation_span(&zero, gamma) {
        return Err(Error::Verification(
            "second-degree-0 part of Π(Γ) differs from Γ".into(),
        ));
    }
    Ok(pre)
}
