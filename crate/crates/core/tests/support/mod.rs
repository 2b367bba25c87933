//! Generators and independent oracles shared by the property suites and the
//! acceptance target. Oracles use their own exact elimination and path
//! enumeration rather than the library's linear algebra.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use qslice::duality::{length_two_paths, quadratic_dual};
use qslice::fixtures::{self, Dynkin};
use qslice::quiver::{Arrow, BoundQuiver, Path, Relation};
use qslice::scalar::{self, Scalar};
use qslice::zquiver::{build_window, WindowKind, ZBase, ZVertex, ZWindow};
use qslice::{Bounds, GradedAlgebraView};

pub const CASES: u32 = 128;

// ---------------------------------------------------------------- oracles

/// Rank by plain Gaussian elimination over the rationals.
pub fn exact_rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let zero = scalar::zero();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != zero) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != zero {
                let f = rows[r][c].clone() / pivot.clone();
                for k in 0..cols {
                    let sub = f.clone() * rows[rank][k].clone();
                    rows[r][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solves `A X = B` for square invertible `A`; `None` when singular.
pub fn exact_solve(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let zero = scalar::zero();
    let mut aug: Vec<Vec<Scalar>> = (0..n)
        .map(|r| a[r].iter().chain(b[r].iter()).cloned().collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| aug[r][c] != zero)?;
        aug.swap(c, p);
        let pivot = aug[c][c].clone();
        for k in 0..n + m {
            aug[c][k] = aug[c][k].clone() / pivot.clone();
        }
        for r in 0..n {
            if r != c && aug[r][c] != zero {
                let f = aug[r][c].clone();
                for k in 0..n + m {
                    let sub = f.clone() * aug[c][k].clone();
                    aug[r][k] -= sub;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Coefficient rows of the relations of `q` lying in block `i -> j`, over
/// the given path basis.
pub fn block_rows(q: &BoundQuiver, i: usize, j: usize, basis: &[Path]) -> Vec<Vec<Scalar>> {
    q.relations()
        .iter()
        .filter(|r| r.source() == i && r.target() == j)
        .map(|r| {
            basis
                .iter()
                .map(|p| {
                    r.terms()
                        .iter()
                        .find(|(_, t)| t == p)
                        .map_or_else(scalar::zero, |(c, _)| c.clone())
                })
                .collect()
        })
        .collect()
}

/// Every length-2 block `(i, j)` of `q` with its path basis.
pub fn blocks(q: &BoundQuiver) -> Vec<(usize, usize, Vec<Path>)> {
    let n = q.vertex_count();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let paths = length_two_paths(q, i, j);
            if !paths.is_empty() {
                out.push((i, j, paths));
            }
        }
    }
    out
}

/// Two relation sets span the same space in every block.
pub fn spans_equal(a: &BoundQuiver, b: &BoundQuiver) -> bool {
    blocks(a).into_iter().all(|(i, j, basis)| {
        let ra = block_rows(a, i, j, &basis);
        let rb = block_rows(b, i, j, &basis);
        let (ka, kb) = (exact_rank(ra.clone()), exact_rank(rb.clone()));
        let both = exact_rank(ra.into_iter().chain(rb).collect());
        ka == kb && both == ka
    })
}

/// Dimensions of `e_j A_t e_i` for every `t`, by enumerating paths and
/// reducing modulo the ideal spanned by `u·r·w` for relations `r`.
pub fn brute_force_dims(q: &BoundQuiver, max_degree: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut layer: Vec<Path> = (0..q.vertex_count()).map(Path::trivial).collect();
    let mut t = 0;
    while !layer.is_empty() && t <= max_degree {
        let index: HashMap<&Path, usize> = layer.iter().enumerate().map(|(k, p)| (p, k)).collect();
        let mut ideal = Vec::new();
        for r in q.relations() {
            let d = r.degree();
            if d > t {
                continue;
            }
            for p in &layer {
                for start in 0..=t - d {
                    let window = &p.arrows[start..start + d];
                    for (_, rp) in r.terms() {
                        if rp.arrows == window {
                            let mut row = vec![scalar::zero(); layer.len()];
                            let mut ok = true;
                            for (c, term) in r.terms() {
                                let mut arrows = p.arrows[..start].to_vec();
                                arrows.extend_from_slice(&term.arrows);
                                arrows.extend_from_slice(&p.arrows[start + d..]);
                                let path = Path {
                                    source: p.source,
                                    target: p.target,
                                    arrows,
                                };
                                match index.get(&path) {
                                    Some(&k) => row[k] += c.clone(),
                                    None => ok = false,
                                }
                            }
                            if ok {
                                ideal.push(row);
                            }
                        }
                    }
                }
            }
        }
        out.push(layer.len() - exact_rank(ideal));
        let mut next = Vec::new();
        for p in &layer {
            for &a in q.out_arrows(p.target) {
                let mut arrows = p.arrows.clone();
                arrows.push(a);
                next.push(Path {
                    source: p.source,
                    target: q.arrow(a).target,
                    arrows,
                });
            }
        }
        layer = next;
        t += 1;
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

// ------------------------------------------------------------- generators

fn build(n: usize, arrows: &[(usize, usize)], relations: Vec<Vec<(Scalar, Vec<usize>)>>) -> BoundQuiver {
    let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let arrows: Vec<Arrow> = arrows
        .iter()
        .enumerate()
        .map(|(k, &(s, t))| Arrow {
            id: format!("x{k}"),
            source: s,
            target: t,
            bidegree: (1, 0),
        })
        .collect();
    let bare = BoundQuiver::new(vertices.clone(), arrows.clone(), Vec::new()).unwrap();
    let rels = relations
        .into_iter()
        .filter_map(|terms| {
            let terms = terms
                .into_iter()
                .map(|(c, ids)| (c, bare.path_from_indices(ids).unwrap()))
                .collect();
            Relation::new(terms).ok()
        })
        .collect();
    BoundQuiver::new(vertices, arrows, rels).unwrap()
}

/// Acyclic arrows on `n` vertices, each going from a smaller to a larger index.
fn arb_arrows(n: usize, max: usize) -> impl Strategy<Value = Vec<(usize, usize)>> {
    prop::collection::vec((0..n, 0..n), 1..=max).prop_map(|pairs| {
        pairs
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect()
    })
}

/// A quadratic acyclic bound quiver with at most 6 vertices and random
/// small-integer relations in each length-2 block.
pub fn arb_quadratic() -> impl Strategy<Value = BoundQuiver> {
    (2usize..=6)
        .prop_flat_map(|n| (Just(n), arb_arrows(n, 9), prop::collection::vec(-2i64..=2, 96), prop::collection::vec(0usize..4, 36)))
        .prop_map(|(n, arrows, coefs, counts)| {
            let bare = build(n, &arrows, Vec::new());
            let mut coef = coefs.into_iter().cycle();
            let mut count = counts.into_iter().cycle();
            let mut relations = Vec::new();
            for (_, _, paths) in blocks(&bare) {
                let k = count.next().unwrap() % (paths.len() + 1);
                for _ in 0..k {
                    relations.push(
                        paths
                            .iter()
                            .map(|p| (scalar::int(coef.next().unwrap()), p.arrows.clone()))
                            .collect(),
                    );
                }
            }
            build(n, &arrows, relations)
        })
}

/// Finite-dimensional properly graded quadratic algebras on at most 6
/// vertices with quadratic trivial extensions: radical square zero quivers,
/// linear `A_m` and the Auslander algebra of `A_3`.
pub fn arb_properly_graded() -> impl Strategy<Value = BoundQuiver> {
    prop_oneof![
        (2usize..=6).prop_flat_map(|n| (Just(n), arb_arrows(n, 8))).prop_map(|(n, mut arrows)| {
            for v in 0..n {
                if !arrows.iter().any(|&(s, t)| s == v || t == v) {
                    arrows.push(if v + 1 < n { (v, v + 1) } else { (v - 1, v) });
                }
            }
            let bare = build(n, &arrows, Vec::new());
            let relations = blocks(&bare)
                .into_iter()
                .flat_map(|(_, _, paths)| paths)
                .map(|p| vec![(scalar::one(), p.arrows)])
                .collect();
            build(n, &arrows, relations)
        }),
        (2usize..=6).prop_map(|m| {
            let arrows: Vec<_> = (0..m - 1).map(|i| (i, i + 1)).collect();
            build(m, &arrows, Vec::new())
        }),
        Just(fixtures::a4_auslander_lambda()),
    ]
}

/// A Dynkin path algebra with at most 6 vertices and random orientation, or
/// the Auslander 2-slice.
pub fn arb_finite_type_gamma() -> impl Strategy<Value = BoundQuiver> {
    let types = prop_oneof![
        (2usize..=6).prop_map(Dynkin::A),
        (4usize..=6).prop_map(Dynkin::D),
        Just(Dynkin::E(6)),
    ];
    prop_oneof![
        8 => (types, 0u64..32).prop_map(|(d, mask)| d.path_algebra(mask)),
        1 => Just(fixtures::a4_auslander_gamma()),
    ]
}

/// Bases are expensive; proptest revisits the same inputs often.
pub fn cached_base(gamma: &BoundQuiver) -> Arc<ZBase> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<ZBase>>>> = OnceLock::new();
    let key = qslice::io::quiver_json(gamma, None);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().unwrap().get(&key) {
        return b.clone();
    }
    let base = Arc::new(ZBase::from_gamma(gamma, &Bounds::default()).expect("finite-type base"));
    cache.lock().unwrap().insert(key, base.clone());
    base
}

/// The window `[lo, hi]` of `Z_v Q̃` and the slice `{(i, d_i)}` given by the
/// nice grading of `Λ`.
pub fn slice_setting(gamma: &BoundQuiver, lo: i64, hi: i64) -> (ZWindow, BTreeSet<ZVertex>) {
    let base = cached_base(gamma);
    let grading = base.lambda().check_nicely_graded().unwrap();
    let w = build_window(base, WindowKind::FirstGrading, lo, hi).unwrap();
    let s = grading.iter().enumerate().map(|(i, &d)| ZVertex::new(i, d)).collect();
    (w, s)
}

// ------------------------------------------------------------- properties

pub fn prop_dual_involution(q: &BoundQuiver) -> Result<(), TestCaseError> {
    let back = quadratic_dual(&quadratic_dual(q).unwrap()).unwrap();
    prop_assert!(spans_equal(&back, q));
    Ok(())
}

/// `dim ρ_ij + dim ρ⊥_ij = #paths_ij`, and `ρ⊥` annihilates `ρ` under the
/// pairing of paths with themselves.
pub fn prop_dim_complementarity(q: &BoundQuiver) -> Result<(), TestCaseError> {
    let d = quadratic_dual(q).unwrap();
    for (i, j, basis) in blocks(q) {
        let r = block_rows(q, i, j, &basis);
        let rp = block_rows(&d, i, j, &basis);
        prop_assert_eq!(exact_rank(r.clone()) + exact_rank(rp.clone()), basis.len());
        for x in &r {
            for y in &rp {
                let dot: Scalar = x.iter().zip(y).map(|(a, b)| a.clone() * b.clone()).sum();
                prop_assert_eq!(dot, scalar::zero());
            }
        }
    }
    Ok(())
}

/// The Gram matrix of `(x, y) = μ(xy)` is invertible, and symmetric for
/// `σ = id`.
pub fn prop_form(lambda: &BoundQuiver) -> Result<(), TestCaseError> {
    let id = qslice::GradedAutomorphism::identity(lambda);
    let ext = qslice::build_trivial_extension(lambda, &id, &Bounds::default()).unwrap();
    let g = ext.gram();
    let rows: Vec<Vec<Scalar>> = (0..g.rows).map(|r| g.row(r).to_vec()).collect();
    prop_assert_eq!(exact_rank(rows), g.rows);
    prop_assert_eq!(g.transpose(), g);
    Ok(())
}

/// `(a, b) = (b, ω(a))` with `ω` solved from `G W = Gᵀ`, checked entry by
/// entry, and `ω` agrees with the library's automorphism on arrows.
pub fn prop_nakayama(lambda: &BoundQuiver, twisted: bool) -> Result<(), TestCaseError> {
    let b = Bounds::default();
    let view = GradedAlgebraView::new(Arc::new(lambda.clone()));
    let n = qslice::graded::check_properly_graded(&view, b.degree).unwrap();
    let sigma = if twisted {
        qslice::GradedAutomorphism::nu(lambda, n)
    } else {
        qslice::GradedAutomorphism::identity(lambda)
    };
    let ext = qslice::build_trivial_extension(lambda, &sigma, &b).unwrap();
    let d = ext.dim();
    let g: Vec<Vec<Scalar>> = (0..d).map(|x| (0..d).map(|y| ext.bilinear_form(x, y)).collect()).collect();
    let gt: Vec<Vec<Scalar>> = (0..d).map(|x| (0..d).map(|y| g[y][x].clone()).collect()).collect();
    let w = exact_solve(&g, &gt).expect("form is non-degenerate");
    for a in 0..d {
        for bb in 0..d {
            // (b, ω a) = Σ_k W[k][a] (b, k)
            let rhs: Scalar = (0..d).map(|k| w[k][a].clone() * g[bb][k].clone()).sum();
            prop_assert_eq!(&g[a][bb], &rhs);
        }
    }
    let omega = ext.nakayama_automorphism().unwrap();
    let inv = sigma.inverse(lambda);
    for k in 0..lambda.arrows().len() {
        prop_assert_eq!(omega.image(k), inv.image(k));
    }
    Ok(())
}

/// The second-degree-0 part of `Π(Γ)` presents `Γ`.
pub fn prop_preprojective_degree_zero(lambda: &BoundQuiver) -> Result<(), TestCaseError> {
    let gamma = quadratic_dual(lambda).unwrap();
    let pre = qslice::preprojective_algebra(&gamma, &Bounds::default()).unwrap();
    let zero = pre.degree_zero_part().unwrap();
    prop_assert_eq!(zero.vertices(), gamma.vertices());
    let ids = |q: &BoundQuiver| q.arrows().iter().map(|a| (a.id.clone(), a.source, a.target)).collect::<Vec<_>>();
    prop_assert_eq!(ids(&zero), ids(&gamma));
    prop_assert!(spans_equal(&zero, &gamma));
    Ok(())
}

/// `dim Λ̃_{(t,0)} = dim Λ_t` and `dim Λ̃_{(t,1)} = dim Λ_{n+1-t}`, against
/// brute-force path counts of `Λ`.
pub fn prop_bidegree_dims(lambda: &BoundQuiver) -> Result<(), TestCaseError> {
    let b = Bounds::default();
    let view = GradedAlgebraView::new(Arc::new(lambda.clone()));
    let n = qslice::graded::check_properly_graded(&view, b.degree).unwrap();
    let ext = qslice::build_trivial_extension(lambda, &qslice::GradedAutomorphism::nu(lambda, n), &b).unwrap();
    let lam = brute_force_dims(lambda, n + 1);
    let at = |t: usize| lam.get(t).copied().unwrap_or(0);
    let dims = ext.bigraded_dimensions();
    for (t, [w0, w1]) in dims.iter().enumerate() {
        prop_assert_eq!(*w0, at(t));
        prop_assert_eq!(*w1, if t <= n + 1 { at(n + 1 - t) } else { 0 });
    }
    prop_assert_eq!(ext.dim(), 2 * lam.iter().sum::<usize>());
    Ok(())
}

/// `ττ⊥ v = τ⊥τ v` on every window vertex whose images stay inside.
pub fn prop_translations_commute(gamma: &BoundQuiver) -> Result<(), TestCaseError> {
    use qslice::zquiver::Side;
    let (w, _) = slice_setting(gamma, -4, 8);
    let mut checked = 0;
    for &v in w.vertices() {
        let a = w.tau(Side::Tau, w.tau(Side::TauPerp, v).unwrap()).unwrap();
        let b = w.tau(Side::TauPerp, w.tau(Side::Tau, v).unwrap()).unwrap();
        if w.contains(a) || w.contains(b) {
            prop_assert_eq!(a, b);
            checked += 1;
        }
    }
    prop_assert!(checked > 0);
    Ok(())
}

/// A random walk of slice mutations; each step is undone by the inverse
/// mutation at the new vertex.
pub fn prop_slice_round_trip(gamma: &BoundQuiver, picks: &[(bool, usize)]) -> Result<(), TestCaseError> {
    use qslice::zquiver::{is_complete_slice, mutate_slice, MutationDir, Side};
    use qslice::Error;
    let (w, mut s) = slice_setting(gamma, -12, 16);
    prop_assert!(is_complete_slice(&w, &s, Side::Tau).unwrap().complete);
    for &(plus, k) in picks {
        let (dir, cands) = if plus {
            (MutationDir::Plus, w.sources_of(&s))
        } else {
            (MutationDir::Minus, w.sinks_of(&s))
        };
        let v = cands[k % cands.len()];
        let next = match mutate_slice(&w, &s, v, dir, Side::Tau) {
            Ok(next) => next,
            Err(Error::Margin { .. }) => continue,
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let added: Vec<ZVertex> = next.difference(&s).copied().collect();
        prop_assert_eq!(added.len(), 1);
        let back = mutate_slice(&w, &next, added[0], dir.inverse(), Side::Tau).unwrap();
        prop_assert_eq!(&back, &s);
        s = next;
    }
    Ok(())
}

/// Runs `f` on `CASES` values of `strategy`, for use outside `proptest!`.
pub fn run<S: Strategy>(strategy: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig {
        cases: CASES,
        failure_persistence: None,
        ..ProptestConfig::default()
    });
    runner.run(&strategy, f).map_err(|e| e.to_string())
}
