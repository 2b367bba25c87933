//! Degree-by-degree bases of `kQ / (ρ)`.
//!
//! The ideal component in degree `t` is built as `ρ_t + kQ_1·I_{t-1} +
//! I_{t-1}·kQ_1`, block by block over `(source, target, second degree)`.
//! Coset representatives are the paths that are not echelon pivots.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, SparseVec};
use crate::quiver::{BoundQuiver, Path};
use crate::scalar::Scalar;

pub const DEFAULT_PATH_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockKey {
    pub source: usize,
    pub target: usize,
    pub weight: i32,
}

/// Paths of one degree between two vertices with one second degree.
#[derive(Debug, Clone)]
pub struct Block {
    pub paths: Vec<Path>,
    index: HashMap<Vec<usize>, usize>,
    pub ideal: Echelon,
    /// Local indices of the coset representatives.
    pub basis: Vec<usize>,
}

impl Block {
    pub fn index_of(&self, p: &Path) -> Option<usize> {
        if p.is_empty() {
            return (self.paths.len() == 1).then_some(0);
        }
        self.index.get(&p.arrows).copied()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Debug, Clone)]
pub struct DegreeData {
    pub degree: usize,
    pub blocks: BTreeMap<BlockKey, Block>,
    path_count: usize,
}

impl DegreeData {
    pub fn dim(&self) -> usize {
        self.blocks.values().map(Block::dim).sum()
    }

    pub fn path_count(&self) -> usize {
        self.path_count
    }

    /// Coset representatives of this degree in path order.
    pub fn basis(&self) -> Vec<Path> {
        let mut out: Vec<Path> = self
            .blocks
            .values()
            .flat_map(|b| b.basis.iter().map(|&i| b.paths[i].clone()))
            .collect();
        out.sort();
        out
    }
}

/// Lazily computed graded pieces of the algebra of a bound quiver.
#[derive(Debug)]
pub struct GradedAlgebraView {
    quiver: Arc<BoundQuiver>,
    cap: usize,
    degrees: Mutex<Vec<Arc<DegreeData>>>,
}

impl GradedAlgebraView {
    pub fn new(quiver: Arc<BoundQuiver>) -> Self {
        Self::with_cap(quiver, DEFAULT_PATH_CAP)
    }

    pub fn with_cap(quiver: Arc<BoundQuiver>, cap: usize) -> Self {
        GradedAlgebraView {
            quiver,
            cap,
            degrees: Mutex::new(Vec::new()),
        }
    }

    pub fn quiver(&self) -> &BoundQuiver {
        &self.quiver
    }

    pub fn quiver_arc(&self) -> Arc<BoundQuiver> {
        self.quiver.clone()
    }

    /// Basis data of degree `t`, computing lower degrees as needed.
    pub fn degree(&self, t: usize) -> Result<Arc<DegreeData>> {
        let mut cache = self.degrees.lock().unwrap_or_else(|e| e.into_inner());
        while cache.len() <= t {
            let next = match cache.last() {
                None => self.degree_zero(),
                Some(prev) => self.next_degree(prev)?,
            };
            cache.push(Arc::new(next));
        }
        Ok(cache[t].clone())
    }

    pub fn dim(&self, t: usize) -> Result<usize> {
        Ok(self.degree(t)?.dim())
    }

    /// `(D_t)[i][j] = dim e_j Λ_t e_i`, row index the source.
    pub fn dim_matrix(&self, t: usize) -> Result<Vec<Vec<usize>>> {
        let data = self.degree(t)?;
        let n = self.quiver.vertex_count();
        let mut m = vec![vec![0; n]; n];
        for (k, b) in &data.blocks {
            m[k.source][k.target] += b.dim();
        }
        Ok(m)
    }

    /// Dimensions keyed by block, zero blocks omitted.
    pub fn block_dims(&self, t: usize) -> Result<BTreeMap<BlockKey, usize>> {
        Ok(self
            .degree(t)?
            .blocks
            .iter()
            .filter(|(_, b)| b.dim() > 0)
            .map(|(k, b)| (*k, b.dim()))
            .collect())
    }

    /// Degrees `0..=top` where degree `top + 1` vanishes; fails when nothing
    /// vanishes up to `bound`.
    pub fn top_degree(&self, bound: usize) -> Result<usize> {
        for t in 0..=bound + 1 {
            if self.dim(t)? == 0 {
                return Ok(t.saturating_sub(1));
            }
        }
        Err(Error::Infinite(bound))
    }

    /// Rewrites a homogeneous combination into coset representatives.
    pub fn normal_form(&self, terms: &[(Scalar, Path)]) -> Result<Vec<(Scalar, Path)>> {
        let mut groups: BTreeMap<(usize, BlockKey), Vec<(usize, Scalar)>> = BTreeMap::new();
        let mut degrees: BTreeMap<usize, Arc<DegreeData>> = BTreeMap::new();
        for (c, p) in terms {
            if c.is_zero() {
                continue;
            }
            if let std::collections::btree_map::Entry::Vacant(e) = degrees.entry(p.len()) {
                e.insert(self.degree(p.len())?);
            }
            let key = self.key_of(p);
            let idx = degrees[&p.len()]
                .blocks
                .get(&key)
                .and_then(|b| b.index_of(p))
                .ok_or_else(|| Error::Verification("path missing from its block".into()))?;
            groups
                .entry((p.len(), key))
                .or_default()
                .push((idx, c.clone()));
        }
        let mut out = Vec::new();
        for ((len, key), entries) in groups {
            let block = &degrees[&len].blocks[&key];
            for (i, c) in block.ideal.reduce(&linalg::collect(entries)) {
                out.push((c, block.paths[i].clone()));
            }
        }
        out.sort_by(|a, b| a.1.cmp(&b.1));
        Ok(out)
    }

    /// Whether a homogeneous combination lies in the ideal.
    pub fn is_zero(&self, terms: &[(Scalar, Path)]) -> Result<bool> {
        Ok(self.normal_form(terms)?.is_empty())
    }

    pub fn key_of(&self, p: &Path) -> BlockKey {
        BlockKey {
            source: p.source,
            target: p.target,
            weight: p
                .arrows
                .iter()
                .map(|&a| self.quiver.arrow(a).bidegree.1)
                .sum(),
        }
    }

    fn degree_zero(&self) -> DegreeData {
        let mut blocks = BTreeMap::new();
        for v in 0..self.quiver.vertex_count() {
            blocks.insert(
                BlockKey {
                    source: v,
                    target: v,
                    weight: 0,
                },
                Block {
                    paths: vec![Path::trivial(v)],
                    index: HashMap::new(),
                    ideal: Echelon::new(),
                    basis: vec![0],
                },
            );
        }
        DegreeData {
            degree: 0,
            blocks,
            path_count: self.quiver.vertex_count(),
        }
    }

    fn next_degree(&self, prev: &DegreeData) -> Result<DegreeData> {
        let q = &*self.quiver;
        let t = prev.degree + 1;
        let mut blocks: BTreeMap<BlockKey, Block> = BTreeMap::new();
        let mut count = 0usize;
        let mut prev_paths: Vec<&Path> = prev.blocks.values().flat_map(|b| b.paths.iter()).collect();
        prev_paths.sort();
        for p in prev_paths {
            for &a in q.out_arrows(p.target) {
                let mut arrows = p.arrows.clone();
                arrows.push(a);
                let path = Path {
                    source: p.source,
                    target: q.arrow(a).target,
                    arrows,
                };
                count += 1;
                if count > self.cap {
                    return Err(Error::ResourceBound(format!(
                        "more than {} paths of length {t}",
                        self.cap
                    )));
                }
                let key = self.key_of(&path);
                let block = blocks.entry(key).or_insert_with(|| Block {
                    paths: Vec::new(),
                    index: HashMap::new(),
                    ideal: Echelon::new(),
                    basis: Vec::new(),
                });
                block.index.insert(path.arrows.clone(), block.paths.len());
                block.paths.push(path);
            }
        }
        // Paths were generated from sorted shorter paths extended at the end,
        // which is already the path order within each block.
        let mut gens: BTreeMap<BlockKey, Vec<SparseVec>> = BTreeMap::new();
        for r in q.relations().iter().filter(|r| r.degree() == t) {
            let key = self.key_of(&r.terms()[0].1);
            let block = &blocks[&key];
            let v = linalg::collect(
                r.terms()
                    .iter()
                    .map(|(c, p)| (block.index_of(p).unwrap(), c.clone())),
            );
            gens.entry(key).or_default().push(v);
        }
        for (key, block) in &prev.blocks {
            for row in block.ideal.rows() {
                for &a in q.out_arrows(key.target) {
                    let arrow = q.arrow(a);
                    let nk = BlockKey {
                        source: key.source,
                        target: arrow.target,
                        weight: key.weight + arrow.bidegree.1,
                    };
                    let nb = &blocks[&nk];
                    let v = linalg::collect(row.iter().map(|(i, c)| {
                        let mut arrows = block.paths[*i].arrows.clone();
                        arrows.push(a);
                        (nb.index[&arrows], c.clone())
                    }));
                    gens.entry(nk).or_default().push(v);
                }
                for &a in q.in_arrows(key.source) {
                    let arrow = q.arrow(a);
                    let nk = BlockKey {
                        source: arrow.source,
                        target: key.target,
                        weight: key.weight + arrow.bidegree.1,
                    };
                    let nb = &blocks[&nk];
                    let v = linalg::collect(row.iter().map(|(i, c)| {
                        let mut arrows = vec![a];
                        arrows.extend_from_slice(&block.paths[*i].arrows);
                        (nb.index[&arrows], c.clone())
                    }));
                    gens.entry(nk).or_default().push(v);
                }
            }
        }
        for (key, vs) in gens {
            let block = blocks.get_mut(&key).unwrap();
            for v in vs {
                block.ideal.insert(v);
            }
        }
        for block in blocks.values_mut() {
            block.basis = (0..block.paths.len())
                .filter(|&i| !block.ideal.is_pivot(i))
                .collect();
        }
        Ok(DegreeData {
            degree: t,
            blocks,
            path_count: count,
        })
    }
}

/// Elements of degree `t` killed by every arrow on both sides, as
/// combinations of coset representatives.
pub fn socle_elements(view: &GradedAlgebraView, t: usize) -> Result<Vec<Vec<(Scalar, Path)>>> {
    let q = view.quiver();
    let data = view.degree(t)?;
    let next = view.degree(t + 1)?;
    let mut out = Vec::new();
    for (key, block) in &data.blocks {
        if block.dim() == 0 {
            continue;
        }
        // Coordinates of the image: (arrow, position in next-degree block).
        let mut slot: HashMap<(BlockKey, usize), usize> = HashMap::new();
        let mut images: Vec<SparseVec> = Vec::new();
        for &bi in &block.basis {
            let p = &block.paths[bi];
            let mut img = Vec::new();
            let mut extend = |path: Path| {
                let k = view.key_of(&path);
                let nb = &next.blocks[&k];
                let v = vec![(nb.index_of(&path).unwrap(), Scalar::from_integer(1.into()))];
                for (i, c) in nb.ideal.reduce(&v) {
                    let n = slot.len();
                    let s = *slot.entry((k, i)).or_insert(n);
                    img.push((s, c));
                }
            };
            for &a in q.out_arrows(key.target) {
                extend(p.then(&Path {
                    source: key.target,
                    target: q.arrow(a).target,
                    arrows: vec![a],
                }));
            }
            for &a in q.in_arrows(key.source) {
                extend(
                    Path {
                        source: q.arrow(a).source,
                        target: key.source,
                        arrows: vec![a],
                    }
                    .then(p),
                );
            }
            images.push(linalg::collect(img));
        }
        for k in linalg::kernel(&images) {
            out.push(
                k.into_iter()
                    .map(|(i, c)| (c, block.paths[block.basis[i]].clone()))
                    .collect(),
            );
        }
    }
    Ok(out)
}

/// The common length of maximal bound paths.
///
/// A graded algebra is `n`-properly graded when it is finite dimensional and
/// its two-sided socle (elements killed by every arrow on both sides) sits in
/// degree `n` only.
pub fn check_properly_graded(view: &GradedAlgebraView, bound: usize) -> Result<usize> {
    let top = view.top_degree(bound)?;
    let mut lengths = Vec::new();
    let mut witnesses = Vec::new();
    for t in 0..=top {
        let soc = socle_elements(view, t)?;
        if let Some(first) = soc.first() {
            lengths.push(t);
            witnesses.push(
                first
                    .iter()
                    .map(|(_, p)| view.quiver().path_name(p))
                    .collect::<Vec<_>>()
                    .join("+"),
            );
        }
    }
    if lengths == [top] {
        Ok(top)
    } else {
        Err(Error::NotProperlyGraded { lengths, witnesses })
    }
}

/// Chosen basis of the top degree: the maximal bound paths.
pub fn maximal_bound_paths(view: &GradedAlgebraView, bound: usize) -> Result<Vec<Path>> {
    let n = check_properly_graded(view, bound)?;
    Ok(view.degree(n)?.basis())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::quiver::QuiverBuilder;

    fn view(q: BoundQuiver) -> GradedAlgebraView {
        GradedAlgebraView::new(Arc::new(q))
    }

    #[test]
    fn auslander_dims() {
        let v = view(fixtures::a4_auslander_lambda());
        assert_eq!(v.dim(0).unwrap(), 6);
        assert_eq!(v.dim(1).unwrap(), 6);
        assert_eq!(v.dim(2).unwrap(), 3);
        assert_eq!(v.dim(3).unwrap(), 0);
        let names: Vec<String> = v
            .degree(2)
            .unwrap()
            .basis()
            .iter()
            .map(|p| v.quiver().path_name(p))
            .collect();
        assert_eq!(names, ["b2·a1", "a4·b2", "b5·a4"]);
    }

    #[test]
    fn degree_zero_is_identity() {
        let v = view(fixtures::a4_auslander_lambda());
        let d0 = v.dim_matrix(0).unwrap();
        for (i, row) in d0.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, usize::from(i == j));
            }
        }
    }

    #[test]
    fn linear_a3() {
        let v = view(fixtures::linear_a(3));
        assert_eq!(v.dim(2).unwrap(), 1);
        assert_eq!(check_properly_graded(&v, 10).unwrap(), 2);
        assert_eq!(maximal_bound_paths(&v, 10).unwrap().len(), 1);
    }

    #[test]
    fn kronecker_maximal_paths_are_arrows() {
        let v = view(fixtures::kronecker(2));
        let m = maximal_bound_paths(&v, 10).unwrap();
        assert_eq!(m.len(), 2);
        assert!(m.iter().all(|p| p.len() == 1));
    }

    #[test]
    fn one_vertex_is_zero_graded() {
        let q = QuiverBuilder::new().vertices(["1"]).build().unwrap();
        assert_eq!(check_properly_graded(&view(q), 4).unwrap(), 0);
    }

    #[test]
    fn mixed_maximal_lengths_rejected() {
        let q = QuiverBuilder::new()
            .vertices(["a", "b", "c", "d"])
            .arrow("x", "a", "b")
            .arrow("y", "a", "c")
            .arrow("z", "c", "d")
            .build()
            .unwrap();
        match check_properly_graded(&view(q), 10) {
            Err(Error::NotProperlyGraded { lengths, .. }) => assert_eq!(lengths, [1, 2]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rank_nullity_per_degree() {
        let v = view(fixtures::a4_auslander_lambda());
        for t in 0..4 {
            let d = v.degree(t).unwrap();
            let ideal: usize = d.blocks.values().map(|b| b.ideal.rank()).sum();
            assert_eq!(d.path_count(), ideal + d.dim());
        }
    }

    #[test]
    fn normal_form_identifies_commuting_paths() {
        let v = view(fixtures::a4_auslander_lambda());
        let q = v.quiver();
        let p = q.path(&["a2", "b3"]).unwrap();
        let r = q.path(&["b2", "a4"]).unwrap();
        let one = Scalar::from_integer(1.into());
        assert!(v.is_zero(&[(one.clone(), p), (-one.clone(), r.clone())]).unwrap());
        let nf = v.normal_form(&[(one, r.clone())]).unwrap();
        assert_eq!(nf.len(), 1);
    }

    #[test]
    fn cyclic_quiver_hits_cap() {
        let q = QuiverBuilder::new()
            .vertices(["1"])
            .arrow("x", "1", "1")
            .arrow("y", "1", "1")
            .build()
            .unwrap();
        let v = GradedAlgebraView::with_cap(Arc::new(q), 100);
        assert_eq!(v.dim(6).unwrap(), 64);
        assert!(matches!(v.dim(7), Err(Error::ResourceBound(_))));
    }
}
