use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::One;
use serde::Serialize;

use super::Bounds;
use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, SparseVec};
use crate::scalar::Scalar;

/// One projective term `P^t` of a minimal resolution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolutionStep {
    pub index: usize,
    /// Number of generators per `(degree, vertex)`.
    pub generators: BTreeMap<(usize, usize), usize>,
    /// Dimension of `ker f_t` per internal degree.
    pub kernel_degrees: BTreeMap<usize, usize>,
    pub dim: usize,
}

impl ResolutionStep {
    pub fn generator_degrees(&self) -> BTreeSet<usize> {
        self.generators.keys().map(|(d, _)| *d).collect()
    }

    pub fn is_linear(&self) -> bool {
        self.generators.keys().all(|(d, _)| *d == self.index)
    }

    pub fn rank(&self) -> usize {
        self.generators.values().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StopReason {
    /// The resolution is finite.
    Terminated,
    HomBound,
    DegreeBound,
    ModuleCap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Resolution {
    pub steps: Vec<ResolutionStep>,
    pub stop: StopReason,
}

/// `P = ⊕_k A e_{v_k} ⟨d_k⟩`, coordinates `(k, b)` grouped into blocks by
/// internal degree and target vertex.
struct Projective {
    gens: Vec<(usize, usize)>,
    blocks: BTreeMap<(usize, usize), Vec<(usize, usize)>>,
    lookup: HashMap<(usize, usize), usize>,
}

impl Projective {
    fn new(a: &FiniteAlgebra, gens: Vec<(usize, usize)>) -> Self {
        let mut blocks: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
        let mut lookup = HashMap::new();
        for (k, &(v, d)) in gens.iter().enumerate() {
            for (b, e) in a.elements().iter().enumerate() {
                if e.source == v {
                    let block = blocks.entry((d + e.degree, e.target)).or_default();
                    lookup.insert((k, b), block.len());
                    block.push((k, b));
                }
            }
        }
        Projective { gens, blocks, lookup }
    }

    fn dim(&self) -> usize {
        self.lookup.len()
    }

    fn max_degree(&self) -> usize {
        self.blocks.keys().map(|(d, _)| *d).max().unwrap_or(0)
    }

    /// `a · x` for `x` in block `key`; returns the target block and vector.
    fn left_mul(
        &self,
        alg: &FiniteAlgebra,
        a: usize,
        key: (usize, usize),
        x: &[(usize, Scalar)],
    ) -> ((usize, usize), SparseVec) {
        let e = alg.element(a);
        let target = (key.0 + e.degree, e.target);
        let coords = &self.blocks[&key];
        let mut out = Vec::new();
        for (i, c) in x {
            let (k, b) = coords[*i];
            if let Some(prod) = alg.mul_ref(a, b) {
                for (b2, c2) in prod {
                    out.push((self.lookup[&(k, *b2)], c * c2));
                }
            }
        }
        (target, linalg::collect(out))
    }
}

type Submodule = BTreeMap<(usize, usize), Vec<SparseVec>>;

/// Minimal generators of `k`: in each block, a complement of the part
/// generated from lower degrees. Returns `(vertex, degree, vector)`.
fn minimal_generators(
    alg: &FiniteAlgebra,
    p: &Projective,
    k: &Submodule,
) -> Vec<(usize, usize, (usize, usize), SparseVec)> {
    let mut out = Vec::new();
    for (&key, basis) in k {
        if basis.is_empty() {
            continue;
        }
        let (m, v) = key;
        let mut span = Echelon::new();
        for (&(m2, v2), lower) in k.range(..(m, 0)) {
            for a in 0..alg.dim() {
                let e = alg.element(a);
                if e.degree == 0 || e.source != v2 || e.target != v || m2 + e.degree != m {
                    continue;
                }
                for x in lower {
                    let (_, y) = p.left_mul(alg, a, (m2, v2), x);
                    span.insert(y);
                }
            }
        }
        for x in basis {
            if span.insert(x.clone()) {
                out.push((v, m, key, x.clone()));
            }
        }
    }
    out
}

/// Minimal graded projective resolution of `A_0` over `A`, computed degree
/// by degree with exact linear algebra.
pub fn minimal_resolution(alg: &FiniteAlgebra, bounds: &Bounds) -> Result<Resolution> {
    let verts = alg.vertex_count();
    let mut p = Projective::new(alg, (0..verts).map(|v| (v, 0)).collect());
    // ker f_0 is the radical.
    let mut k: Submodule = p
        .blocks
        .iter()
        .filter(|((m, _), _)| *m >= 1)
        .map(|(key, coords)| {
            (
                *key,
                (0..coords.len()).map(|i| vec![(i, Scalar::one())]).collect(),
            )
        })
        .collect();
    let mut steps = vec![step_summary(0, &p, &k)];
    for t in 1..=bounds.hom {
        let gens = minimal_generators(alg, &p, &k);
        if gens.is_empty() {
            return Ok(Resolution {
                steps,
                stop: StopReason::Terminated,
            });
        }
        for (_, _, key, x) in &gens {
            let coords = &p.blocks[key];
            if x.iter().any(|(i, _)| alg.element(coords[*i].1).degree == 0) {
                return Err(Error::Verification(format!(
                    "differential {t} has an entry outside the radical"
                )));
            }
        }
        let next = Projective::new(alg, gens.iter().map(|(v, d, _, _)| (*v, *d)).collect());
        if next.dim() > bounds.module_cap {
            return Ok(Resolution {
                steps,
                stop: StopReason::ModuleCap,
            });
        }
        if next.max_degree() > bounds.degree {
            return Ok(Resolution {
                steps,
                stop: StopReason::DegreeBound,
            });
        }
        let mut kernel: Submodule = BTreeMap::new();
        for (&key, coords) in &next.blocks {
            let images: Vec<SparseVec> = coords
                .iter()
                .map(|&(g, b)| {
                    let (_, _, gkey, gvec) = &gens[g];
                    let (tkey, y) = p.left_mul(alg, b, *gkey, gvec);
                    debug_assert_eq!(tkey, key);
                    y
                })
                .collect();
            let ker = linalg::kernel(&images);
            if !ker.is_empty() {
                kernel.insert(key, ker);
            }
        }
        p = next;
        k = kernel;
        steps.push(step_summary(t, &p, &k));
    }
    Ok(Resolution {
        steps,
        stop: StopReason::HomBound,
    })
}

fn step_summary(index: usize, p: &Projective, k: &Submodule) -> ResolutionStep {
    let mut generators = BTreeMap::new();
    for &(v, d) in &p.gens {
        *generators.entry((d, v)).or_insert(0) += 1;
    }
    let mut kernel_degrees = BTreeMap::new();
    for (&(m, _), basis) in k {
        if !basis.is_empty() {
            *kernel_degrees.entry(m).or_insert(0) += basis.len();
        }
    }
    ResolutionStep {
        index,
        generators,
        kernel_degrees,
        dim: p.dim(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum KoszulOutcome {
    /// `P^{q+1}` is the first term not generated in its homological degree.
    Nonlinear {
        q: usize,
        /// `ker f_q` lives in degree `q + p` only.
        concentrated: bool,
        stray_degrees: Vec<usize>,
    },
    /// Linear and finite.
    Terminated { length: usize },
    /// Linear as far as computed.
    LinearThrough { steps: usize, reason: StopReason },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KoszulReport {
    /// Top nonzero degree of the algebra.
    pub p: usize,
    /// `P^t` is linear for every `t` up to this index.
    pub linear_through: usize,
    pub outcome: KoszulOutcome,
    pub hom_bound: usize,
    pub degree_bound: usize,
    pub steps: Vec<ResolutionStep>,
}

impl KoszulReport {
    /// `q` when the algebra is `(p, q)`-Koszul for a finite `q`.
    pub fn q(&self) -> Option<usize> {
        match self.outcome {
            KoszulOutcome::Nonlinear {
                q,
                concentrated: true,
                ..
            } => Some(q),
            _ => None,
        }
    }

    /// For a `(n+1, q)`-Koszul trivial extension the Coxeter index is `q`.
    pub fn coxeter_index(&self) -> Option<usize> {
        self.q()
    }

    pub fn describe(&self) -> String {
        match &self.outcome {
            KoszulOutcome::Nonlinear {
                q,
                concentrated: true,
                ..
            } => format!("({},{})-Koszul", self.p, q),
            KoszulOutcome::Nonlinear {
                q, stray_degrees, ..
            } => format!(
                "linear through step {q}; step {} has generators in degrees {:?} and the kernel is not concentrated",
                q + 1,
                stray_degrees
            ),
            KoszulOutcome::Terminated { length } => {
                format!("Koszul with a finite linear resolution of length {length}")
            }
            KoszulOutcome::LinearThrough { steps, reason } => {
                format!("linear through step {steps} ({reason:?})")
            }
        }
    }
}

pub fn koszul_type(alg: &FiniteAlgebra, bounds: &Bounds) -> Result<KoszulReport> {
    let res = minimal_resolution(alg, bounds)?;
    let p = alg.top_degree();
    let first_nonlinear = res.steps.iter().position(|s| !s.is_linear());
    let (linear_through, outcome) = match first_nonlinear {
        Some(t) => {
            let q = t - 1;
            let support: Vec<usize> = res.steps[q].kernel_degrees.keys().copied().collect();
            let stray_degrees = res.steps[t]
                .generator_degrees()
                .into_iter()
                .filter(|&d| d != t)
                .collect();
            (
                q,
                KoszulOutcome::Nonlinear {
                    q,
                    concentrated: support == [q + p],
                    stray_degrees,
                },
            )
        }
        None => {
            let last = res.steps.len() - 1;
            let outcome = if res.stop == StopReason::Terminated {
                KoszulOutcome::Terminated { length: last }
            } else {
                KoszulOutcome::LinearThrough {
                    steps: last,
                    reason: res.stop,
                }
            };
            (last, outcome)
        }
    };
    Ok(KoszulReport {
        p,
        linear_through,
        outcome,
        hom_bound: bounds.hom,
        degree_bound: bounds.degree,
        steps: res.steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::GradedAutomorphism;
    use crate::extension::build_trivial_extension;
    use crate::fixtures;
    use crate::graded::GradedAlgebraView;
    use crate::quiver::BoundQuiver;
    use std::sync::Arc;

    fn delta(q: &BoundQuiver, n: usize) -> FiniteAlgebra {
        let sigma = GradedAutomorphism::nu(q, n);
        build_trivial_extension(q, &sigma, &Bounds::default())
            .unwrap()
            .algebra
    }

    #[test]
    fn semisimple_resolution_stops() {
        let q = crate::quiver::QuiverBuilder::new().vertices(["1", "2"]).build().unwrap();
        let view = GradedAlgebraView::new(Arc::new(q));
        let (a, _) = FiniteAlgebra::from_view(&view, 0).unwrap();
        let r = koszul_type(&a, &Bounds::default()).unwrap();
        assert_eq!(r.outcome, KoszulOutcome::Terminated { length: 0 });
    }

    #[test]
    fn path_algebra_has_linear_finite_resolution() {
        let view = GradedAlgebraView::new(Arc::new(fixtures::linear_a(3)));
        let (a, _) = FiniteAlgebra::from_view(&view, 2).unwrap();
        let r = koszul_type(&a, &Bounds::default()).unwrap();
        assert_eq!(r.outcome, KoszulOutcome::Terminated { length: 1 });
    }

    #[test]
    fn hereditary_a3_extension() {
        // Λ = kA3/rad², n = 1.
        let l = crate::duality::quadratic_dual(&fixtures::linear_a(3)).unwrap();
        let r = koszul_type(&delta(&l, 1), &Bounds::default()).unwrap();
        assert_eq!((r.p, r.q()), (2, Some(2)));
    }

    #[test]
    fn dual_numbers_are_koszul() {
        let r = koszul_type(&delta(&fixtures::point(), 0), &Bounds::new(6, 24)).unwrap();
        assert_eq!(r.p, 1);
        assert!(matches!(
            r.outcome,
            KoszulOutcome::LinearThrough { steps: 6, reason: StopReason::HomBound }
        ));
        assert!(r.steps.iter().all(|s| s.rank() == 1));
    }
}
