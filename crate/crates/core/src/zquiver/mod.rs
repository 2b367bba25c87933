//! Finite windows of the translation quivers `Z_v Q̃` (first grading) and
//! `Z|_{n-1} Q` (second grading), the translations `τ` and `τ⊥`, slices,
//! hammocks, double slices, companions and AR quivers.

mod companion;
mod double_slice;
mod hammock;
mod slice;

pub use companion::{ar_quiver, companion, companion_of_certified, ArQuiver, Companion, CompanionSide};
pub use double_slice::{
    double_slice, is_double_slice, mutate_double_slice, DoubleSlice, DoubleSliceVerdict,
};
pub use hammock::{hammock, Direction, Hammock};
pub use slice::{is_complete_slice, mutate_slice, slice_algebra, MutationDir, SliceRef, SliceVerdict};

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::automorphism::GradedAutomorphism;
use crate::duality::quadratic_dual;
use crate::error::{Error, Result};
use crate::extension::{build_trivial_extension, TrivialExtension};
use crate::graded::{check_properly_graded, GradedAlgebraView};
use crate::homology::Bounds;
use crate::quiver::{Arrow, BoundQuiver, Path, Relation};

/// Vertex `(i, t)` of a window: base vertex `i` at level `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZVertex {
    pub vertex: usize,
    pub level: i64,
}

impl ZVertex {
    pub fn new(vertex: usize, level: i64) -> Self {
        ZVertex { vertex, level }
    }
}

impl Ord for ZVertex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.level, self.vertex).cmp(&(other.level, other.vertex))
    }
}

impl PartialOrd for ZVertex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    /// `Z_v Q̃`: every arrow raises the level by one.
    FirstGrading,
    /// `Z|_{n-1} Q`: arrows raise the level by their second degree.
    SecondGrading,
}

impl WindowKind {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "zv" | "first" => Ok(WindowKind::FirstGrading),
            "zn" | "second" => Ok(WindowKind::SecondGrading),
            other => Err(Error::Parse(format!("unknown window kind `{other}` (expected zv or zn)"))),
        }
    }

    fn arrow_shift(self, a: &Arrow) -> i64 {
        match self {
            WindowKind::FirstGrading => 1,
            WindowKind::SecondGrading => a.bidegree.1 as i64,
        }
    }
}

/// Which translation a slice or mutation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `τ`, from the maximal bound paths of `Λ̃`.
    Tau,
    /// `τ⊥`, from the maximal bound paths of `Γ̃ = Λ̃^{!,op}`.
    TauPerp,
}

impl Side {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "tau" | "t" => Ok(Side::Tau),
            "perp" | "tau-perp" | "dual" => Ok(Side::TauPerp),
            other => Err(Error::Parse(format!("unknown side `{other}` (expected tau or perp)"))),
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Tau => Side::TauPerp,
            Side::TauPerp => Side::Tau,
        }
    }
}

/// A translation on base vertices: `τ(i, t) = (perm[i], t - shift)` where the
/// shift is the length (first grading) or weight (second grading) of the
/// maximal bound path from `perm[i]` to `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Translation {
    pub perm: Vec<usize>,
    pub length: Vec<i64>,
    pub weight: Vec<i64>,
}

impl Translation {
    /// Reads the translation off the top degree of a graded view: every
    /// vertex must be the target of exactly one one-dimensional top block.
    fn from_top_blocks(view: &GradedAlgebraView, top: usize) -> std::result::Result<Self, String> {
        let n = view.quiver().vertex_count();
        let data = view.degree(top).map_err(|e| e.to_string())?;
        let mut found: Vec<Option<(usize, i64)>> = vec![None; n];
        for (key, block) in &data.blocks {
            if block.dim() == 0 {
                continue;
            }
            if block.dim() > 1 || found[key.target].is_some() {
                return Err(format!(
                    "top degree at `{}` is not one-dimensional",
                    view.quiver().vertex_id(key.target)
                ));
            }
            found[key.target] = Some((key.source, key.weight as i64));
        }
        let mut perm = Vec::with_capacity(n);
        let mut weight = Vec::with_capacity(n);
        for (i, f) in found.into_iter().enumerate() {
            let (j, w) = f.ok_or_else(|| {
                format!("no maximal bound path of length {top} ends at `{}`", view.quiver().vertex_id(i))
            })?;
            perm.push(j);
            weight.push(w);
        }
        let mut seen = vec![false; n];
        for &j in &perm {
            if std::mem::replace(&mut seen[j], true) {
                return Err("maximal bound paths do not define a permutation".into());
            }
        }
        Ok(Translation {
            perm,
            length: vec![top as i64; n],
            weight,
        })
    }

    fn shift(&self, kind: WindowKind, i: usize) -> i64 {
        match kind {
            WindowKind::FirstGrading => self.length[i],
            WindowKind::SecondGrading => self.weight[i],
        }
    }

    pub fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            inv[j] = i;
        }
        inv
    }

    pub fn apply(&self, kind: WindowKind, v: ZVertex) -> ZVertex {
        ZVertex::new(self.perm[v.vertex], v.level - self.shift(kind, v.vertex))
    }

    pub fn apply_inverse(&self, kind: WindowKind, v: ZVertex) -> ZVertex {
        let j = self.inverse_perm()[v.vertex];
        ZVertex::new(j, v.level + self.shift(kind, j))
    }

    /// Canonical representative of the orbit of `v`: the minimum of
    /// `(vertex, level mod period)` over the cycle of `v.vertex`.
    pub fn orbit_id(&self, kind: WindowKind, v: ZVertex) -> (usize, i64) {
        let mut cycle = Vec::new();
        let (mut i, mut t) = (v.vertex, v.level);
        loop {
            cycle.push((i, t));
            t -= self.shift(kind, i);
            i = self.perm[i];
            if i == v.vertex {
                break;
            }
        }
        let period = v.level - t;
        cycle
            .into_iter()
            .map(|(i, t)| (i, if period > 0 { t.rem_euclid(period) } else { t }))
            .min()
            .expect("cycle is non-empty")
    }

    /// Total shift along the cycle of `i`.
    pub fn period(&self, kind: WindowKind, i: usize) -> i64 {
        let mut total = 0;
        let mut j = i;
        loop {
            total += self.shift(kind, j);
            j = self.perm[j];
            if j == i {
                return total;
            }
        }
    }
}

/// Everything a window needs from `Λ`: the returning-arrow quiver with the
/// relations `ρ̃` and `ρ̃⊥`, and both translations.
#[derive(Debug, Clone)]
pub struct ZBase {
    pub extension: TrivialExtension,
    /// `Q̃` with the relations `ρ̃⊥`.
    pub dual: BoundQuiver,
    pub tau: Translation,
    /// Absent when `Γ̃` is infinite within the degree bound or its top degree
    /// does not define a permutation.
    pub tau_perp: Option<Translation>,
    /// Top degree of `Γ̃`, i.e. the Coxeter index, when finite.
    pub dual_top: Option<usize>,
    pub tau_perp_reason: Option<String>,
}

impl ZBase {
    pub fn new(extension: TrivialExtension, bounds: &Bounds) -> Result<Self> {
        let alg = &extension.algebra;
        let top = alg.top_degree();
        let n = alg.vertex_count();
        let mut perm = vec![usize::MAX; n];
        let mut weight = vec![0; n];
        for e in alg.elements().iter().filter(|e| e.degree == top) {
            if perm[e.target] != usize::MAX {
                return Err(Error::Verification(format!(
                    "socle of Λ̃ at `{}` is not simple",
                    extension.tilde.vertex_id(e.target)
                )));
            }
            perm[e.target] = e.source;
            weight[e.target] = e.weight as i64;
        }
        if perm.contains(&usize::MAX) {
            return Err(Error::Verification("Λ̃ has a vertex without top-degree socle".into()));
        }
        let tau = Translation {
            perm,
            length: vec![top as i64; n],
            weight,
        };
        let dual = quadratic_dual(&extension.tilde)?;
        let view = GradedAlgebraView::with_cap(Arc::new(dual.clone()), bounds.path_cap);
        let (tau_perp, dual_top, reason) = match view.top_degree(bounds.degree) {
            Ok(h) => match Translation::from_top_blocks(&view, h) {
                Ok(t) => (Some(t), Some(h), None),
                Err(why) => (None, Some(h), Some(why)),
            },
            Err(Error::Infinite(d)) => (None, None, Some(format!("Γ̃ is nonzero in degree {d}"))),
            Err(e) => return Err(e),
        };
        Ok(ZBase {
            extension,
            dual,
            tau,
            tau_perp,
            dual_top,
            tau_perp_reason: reason,
        })
    }

    /// The base of an `n`-slice presentation `Γ`: `Λ = Γ^{!,op}`, `Λ̃ = Δ_νΛ`.
    pub fn from_gamma(gamma: &BoundQuiver, bounds: &Bounds) -> Result<Self> {
        gamma.check_quadratic()?;
        let lambda = quadratic_dual(gamma)?;
        Self::from_lambda(&lambda, bounds)
    }

    pub fn from_lambda(lambda: &BoundQuiver, bounds: &Bounds) -> Result<Self> {
        let view = GradedAlgebraView::with_cap(Arc::new(lambda.clone()), bounds.path_cap);
        let n = check_properly_graded(&view, bounds.degree)?;
        let nu = GradedAutomorphism::nu(lambda, n);
        Self::new(build_trivial_extension(lambda, &nu, bounds)?, bounds)
    }

    pub fn tilde(&self) -> &BoundQuiver {
        &self.extension.tilde
    }

    pub fn lambda(&self) -> &BoundQuiver {
        &self.extension.lambda
    }

    pub fn n(&self) -> usize {
        self.extension.n
    }

    pub fn quiver(&self, side: Side) -> &BoundQuiver {
        match side {
            Side::Tau => &self.extension.tilde,
            Side::TauPerp => &self.dual,
        }
    }

    pub fn translation(&self, side: Side) -> Result<&Translation> {
        match side {
            Side::Tau => Ok(&self.tau),
            Side::TauPerp => self.tau_perp.as_ref().ok_or_else(|| {
                Error::NoDualTranslation(
                    self.tau_perp_reason
                        .clone()
                        .unwrap_or_else(|| "Γ̃ is not finite dimensional".into()),
                )
            }),
        }
    }

    /// `ττ⊥ = τ⊥τ` on base vertices with matching shifts.
    pub fn translations_commute(&self) -> Option<bool> {
        let p = self.tau_perp.as_ref()?;
        let t = &self.tau;
        Some((0..t.perm.len()).all(|i| {
            t.perm[p.perm[i]] == p.perm[t.perm[i]]
                && t.length[p.perm[i]] + p.length[i] == p.length[t.perm[i]] + t.length[i]
                && t.weight[p.perm[i]] + p.weight[i] == p.weight[t.perm[i]] + t.weight[i]
        }))
    }
}

/// Connected components of the infinite quiver: vertex `(i, t)` lies in
/// component `(piece(i), (t - φ(i)) mod g)` for a potential `φ` and the gcd
/// `g` of the level discrepancies around cycles of `Q̃`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentMap {
    pub piece: Vec<usize>,
    pub potential: Vec<i64>,
    pub gcd: i64,
}

/// Identifier of a connected component of the infinite quiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ComponentId {
    pub piece: usize,
    pub residue: i64,
}

impl ComponentMap {
    fn new(q: &BoundQuiver, kind: WindowKind) -> Self {
        let n = q.vertex_count();
        let mut piece = vec![usize::MAX; n];
        let mut potential = vec![0i64; n];
        let mut g = 0i64;
        let mut next = 0;
        for start in 0..n {
            if piece[start] != usize::MAX {
                continue;
            }
            piece[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &a in q.out_arrows(v).iter().chain(q.in_arrows(v)) {
                    let arrow = q.arrow(a);
                    let s = kind.arrow_shift(arrow);
                    let (w, expect) = if arrow.source == v {
                        (arrow.target, potential[v] + s)
                    } else {
                        (arrow.source, potential[v] - s)
                    };
                    if piece[w] == usize::MAX {
                        piece[w] = next;
                        potential[w] = expect;
                        queue.push_back(w);
                    } else {
                        g = g.gcd(&(potential[w] - expect));
                    }
                }
            }
            next += 1;
        }
        ComponentMap {
            piece,
            potential,
            gcd: g,
        }
    }

    pub fn component(&self, v: ZVertex) -> ComponentId {
        let raw = v.level - self.potential[v.vertex];
        ComponentId {
            piece: self.piece[v.vertex],
            residue: if self.gcd > 0 { raw.rem_euclid(self.gcd) } else { raw },
        }
    }

    /// Number of components per piece (`None` when infinite).
    pub fn count_per_piece(&self) -> Option<i64> {
        (self.gcd > 0).then_some(self.gcd)
    }
}

/// An arrow `(a, t)` of a window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowArrow {
    pub arrow: usize,
    pub level: i64,
    pub source: ZVertex,
    pub target: ZVertex,
}

/// Levels `[lo, hi]` of `Z_v Q̃` or `Z|_{n-1} Q`, materialized.
#[derive(Debug, Clone)]
pub struct ZWindow {
    base: Arc<ZBase>,
    kind: WindowKind,
    lo: i64,
    hi: i64,
    vertices: Vec<ZVertex>,
    index: HashMap<ZVertex, usize>,
    arrows: Vec<WindowArrow>,
    arrow_index: HashMap<(usize, i64), usize>,
    out_arrows: Vec<Vec<usize>>,
    in_arrows: Vec<Vec<usize>>,
    components: ComponentMap,
    quivers: [BoundQuiver; 2],
}

pub fn build_window(base: Arc<ZBase>, kind: WindowKind, lo: i64, hi: i64) -> Result<ZWindow> {
    if lo > hi {
        return Err(Error::EmptyRange(lo, hi));
    }
    let q = base.tilde();
    let mut vertices = Vec::new();
    for t in lo..=hi {
        for i in 0..q.vertex_count() {
            vertices.push(ZVertex::new(i, t));
        }
    }
    let index: HashMap<ZVertex, usize> = vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut arrows = Vec::new();
    let mut arrow_index = HashMap::new();
    let mut out_arrows = vec![Vec::new(); vertices.len()];
    let mut in_arrows = vec![Vec::new(); vertices.len()];
    for t in lo..=hi {
        for (k, a) in q.arrows().iter().enumerate() {
            let s = ZVertex::new(a.source, t);
            let e = ZVertex::new(a.target, t + kind.arrow_shift(a));
            if let (Some(&si), Some(&ei)) = (index.get(&s), index.get(&e)) {
                arrow_index.insert((k, t), arrows.len());
                out_arrows[si].push(arrows.len());
                in_arrows[ei].push(arrows.len());
                arrows.push(WindowArrow {
                    arrow: k,
                    level: t,
                    source: s,
                    target: e,
                });
            }
        }
    }
    let components = ComponentMap::new(q, kind);
    let empty = BoundQuiver::new(Vec::new(), Vec::new(), Vec::new())?;
    let mut w = ZWindow {
        base,
        kind,
        lo,
        hi,
        vertices,
        index,
        arrows,
        arrow_index,
        out_arrows,
        in_arrows,
        components,
        quivers: [empty.clone(), empty],
    };
    w.quivers = [w.materialize(Side::Tau)?, w.materialize(Side::TauPerp)?];
    Ok(w)
}

impl ZWindow {
    pub fn base(&self) -> &Arc<ZBase> {
        &self.base
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn range(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn vertices(&self) -> &[ZVertex] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[WindowArrow] {
        &self.arrows
    }

    pub fn contains(&self, v: ZVertex) -> bool {
        self.index.contains_key(&v)
    }

    pub fn index_of(&self, v: ZVertex) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn successors(&self, v: ZVertex) -> impl Iterator<Item = ZVertex> + '_ {
        self.index
            .get(&v)
            .into_iter()
            .flat_map(move |&k| self.out_arrows[k].iter().map(move |&a| self.arrows[a].target))
    }

    pub fn predecessors(&self, v: ZVertex) -> impl Iterator<Item = ZVertex> + '_ {
        self.index
            .get(&v)
            .into_iter()
            .flat_map(move |&k| self.in_arrows[k].iter().map(move |&a| self.arrows[a].source))
    }

    pub fn label(&self, v: ZVertex) -> String {
        format!("({},{})", self.base.tilde().vertex_id(v.vertex), v.level)
    }

    pub fn node_id(&self, v: ZVertex) -> String {
        format!("{}@{}", self.base.tilde().vertex_id(v.vertex), v.level)
    }

    pub fn arrow_label(&self, a: &WindowArrow) -> String {
        format!("{}@{}", self.base.tilde().arrow(a.arrow).id, a.level)
    }

    /// Parses `(i,t)` or `i@t`.
    pub fn parse_vertex(&self, text: &str) -> Result<ZVertex> {
        parse_zvertex(self.base.tilde(), text)
    }

    /// Parses a comma- or whitespace-separated list of vertices.
    pub fn parse_vertices(&self, text: &str) -> Result<BTreeSet<ZVertex>> {
        parse_zvertices(self.base.tilde(), text)
    }

    pub fn components(&self) -> &ComponentMap {
        &self.components
    }

    pub fn component(&self, v: ZVertex) -> ComponentId {
        self.components.component(v)
    }

    /// Components met by the window, with their vertices.
    pub fn component_vertices(&self) -> BTreeMap<ComponentId, Vec<ZVertex>> {
        let mut out: BTreeMap<ComponentId, Vec<ZVertex>> = BTreeMap::new();
        for &v in &self.vertices {
            out.entry(self.component(v)).or_default().push(v);
        }
        out
    }

    /// Components met by the window. Fails when the window is shorter than
    /// one period, since then it cannot witness every component.
    pub fn connected_components(&self) -> Result<Vec<ComponentId>> {
        if let Some(g) = self.components.count_per_piece() {
            if self.hi - self.lo + 1 < g {
                return Err(Error::Margin {
                    lo: self.lo,
                    hi: self.hi,
                    need_lo: self.lo,
                    need_hi: self.lo + g - 1,
                });
            }
        }
        Ok(self.component_vertices().into_keys().collect())
    }

    /// The window quiver with `ρ̃` (`Side::Tau`) or `ρ̃⊥` (`Side::TauPerp`).
    pub fn quiver(&self, side: Side) -> &BoundQuiver {
        &self.quivers[side as usize]
    }

    /// Full subquiver of the window quiver on `set`, ordered by level.
    pub fn subquiver(&self, set: &BTreeSet<ZVertex>, side: Side) -> Result<BoundQuiver> {
        self.require(set)?;
        let keep: Vec<usize> = set.iter().map(|v| self.index[v]).collect();
        self.quiver(side).full_subquiver(&keep)
    }

    pub fn translation(&self, side: Side) -> Result<&Translation> {
        self.base.translation(side)
    }

    pub fn tau(&self, side: Side, v: ZVertex) -> Result<ZVertex> {
        Ok(self.translation(side)?.apply(self.kind, v))
    }

    pub fn tau_inv(&self, side: Side, v: ZVertex) -> Result<ZVertex> {
        Ok(self.translation(side)?.apply_inverse(self.kind, v))
    }

    pub fn orbit_id(&self, side: Side, v: ZVertex) -> Result<(usize, i64)> {
        Ok(self.translation(side)?.orbit_id(self.kind, v))
    }

    /// Orbit ids of every orbit in the component `c`.
    pub fn orbits_in_component(&self, side: Side, c: ComponentId) -> Result<BTreeSet<(usize, i64)>> {
        let tr = self.translation(side)?;
        let g = self.components.gcd;
        let mut out = BTreeSet::new();
        for i in 0..self.base.tilde().vertex_count() {
            if self.components.piece[i] != c.piece {
                continue;
            }
            let base = c.residue + self.components.potential[i];
            if g == 0 {
                out.insert(tr.orbit_id(self.kind, ZVertex::new(i, base)));
                continue;
            }
            let period = tr.period(self.kind, i).abs().max(1);
            let span = period.lcm(&g);
            for k in 0..span / g {
                out.insert(tr.orbit_id(self.kind, ZVertex::new(i, base + k * g)));
            }
        }
        Ok(out)
    }

    /// Fails with a margin error unless every vertex of `set` is inside.
    pub fn require(&self, set: &BTreeSet<ZVertex>) -> Result<()> {
        match (set.iter().map(|v| v.level).min(), set.iter().map(|v| v.level).max()) {
            (Some(a), Some(b)) => self.require_levels(a, b),
            _ => Ok(()),
        }
    }

    pub fn require_levels(&self, need_lo: i64, need_hi: i64) -> Result<()> {
        if need_lo < self.lo || need_hi > self.hi {
            return Err(Error::Margin {
                lo: self.lo,
                hi: self.hi,
                need_lo: need_lo.min(self.lo),
                need_hi: need_hi.max(self.hi),
            });
        }
        Ok(())
    }

    /// Vertices of `set` with no arrow from another vertex of `set`.
    pub fn sources_of(&self, set: &BTreeSet<ZVertex>) -> Vec<ZVertex> {
        set.iter()
            .copied()
            .filter(|&v| self.predecessors(v).all(|u| !set.contains(&u)))
            .collect()
    }

    pub fn sinks_of(&self, set: &BTreeSet<ZVertex>) -> Vec<ZVertex> {
        set.iter()
            .copied()
            .filter(|&v| self.successors(v).all(|u| !set.contains(&u)))
            .collect()
    }

    /// Vertices on a path between two vertices of `set` but outside it.
    pub fn convexity_violations(&self, set: &BTreeSet<ZVertex>) -> Vec<ZVertex> {
        let reach = |forward: bool| {
            let mut seen: BTreeSet<ZVertex> = BTreeSet::new();
            let mut queue: VecDeque<ZVertex> = set.iter().copied().collect();
            while let Some(v) = queue.pop_front() {
                let next: Vec<ZVertex> = if forward {
                    self.successors(v).collect()
                } else {
                    self.predecessors(v).collect()
                };
                for w in next {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            seen
        };
        let down = reach(true);
        let up = reach(false);
        down.intersection(&up).filter(|v| !set.contains(v)).copied().collect()
    }

    fn lift(&self, p: &Path, level: i64) -> Option<Path> {
        let mut arrows = Vec::with_capacity(p.arrows.len());
        let mut t = level;
        for &a in &p.arrows {
            let k = *self.arrow_index.get(&(a, t))?;
            arrows.push(k);
            t = self.arrows[k].target.level;
        }
        Some(Path {
            source: self.index[&ZVertex::new(p.source, level)],
            target: self.index[&ZVertex::new(p.target, t)],
            arrows,
        })
    }

    fn materialize(&self, side: Side) -> Result<BoundQuiver> {
        let base = self.base.quiver(side);
        let vertices = self.vertices.iter().map(|&v| self.label(v)).collect();
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                id: self.arrow_label(a),
                source: self.index[&a.source],
                target: self.index[&a.target],
                bidegree: base.arrow(a.arrow).bidegree,
            })
            .collect();
        let mut relations = Vec::new();
        for r in base.relations() {
            for t in self.lo..=self.hi {
                let lifted: Option<Vec<_>> = r
                    .terms()
                    .iter()
                    .map(|(c, p)| self.lift(p, t).map(|l| (c.clone(), l)))
                    .collect();
                if let Some(terms) = lifted {
                    relations.push(Relation::new(terms)?);
                }
            }
        }
        BoundQuiver::new(vertices, arrows, relations)
    }
}

pub fn parse_zvertex(q: &BoundQuiver, text: &str) -> Result<ZVertex> {
    let t = text.trim();
    let (name, level) = if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        inner
            .rsplit_once(',')
            .ok_or_else(|| Error::Parse(format!("expected (i,t) in `{t}`")))?
    } else {
        t.rsplit_once('@')
            .ok_or_else(|| Error::Parse(format!("expected i@t or (i,t) in `{t}`")))?
    };
    let level: i64 = level
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad level in `{t}`")))?;
    Ok(ZVertex::new(q.vertex(name.trim())?, level))
}

pub fn parse_zvertices(q: &BoundQuiver, text: &str) -> Result<BTreeSet<ZVertex>> {
    let mut out = BTreeSet::new();
    let mut depth = 0;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' | ' ' | ';' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.insert(parse_zvertex(q, &cur)?);
                }
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.insert(parse_zvertex(q, &cur)?);
    }
    Ok(out)
}
