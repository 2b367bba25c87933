//! Bound quivers: vertices, arrows, paths and homogeneous relations.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// First and second grading of an arrow.
pub type Bidegree = (i32, i32);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
    pub bidegree: Bidegree,
}

/// A path as a list of arrow indices in traversal order (first traversed
/// first). The empty path at `source` is the idempotent at that vertex.
///
/// Paths order by length, then source, then arrow sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Traverses `self` first, then `next`. Panics unless composable.
    pub fn then(&self, next: &Path) -> Path {
        assert_eq!(self.target, next.source, "paths not composable");
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&next.arrows);
        Path {
            source: self.source,
            target: next.target,
            arrows,
        }
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then(self.source.cmp(&other.source))
            .then_with(|| self.arrows.cmp(&other.arrows))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A nonzero linear combination of paths sharing length and endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    terms: Vec<(Scalar, Path)>,
}

impl Relation {
    /// Sorts terms in path order, merges repeats and drops zero coefficients.
    pub fn new(terms: Vec<(Scalar, Path)>) -> Result<Self> {
        let mut merged: BTreeMap<Path, Scalar> = BTreeMap::new();
        for (c, p) in terms {
            *merged.entry(p).or_insert_with(Scalar::zero) += c;
        }
        let terms: Vec<(Scalar, Path)> = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| (c, p))
            .collect();
        let Some((_, first)) = terms.first() else {
            return Err(Error::InvalidRelation("relation has no nonzero term".into()));
        };
        for (_, p) in &terms {
            if p.len() != first.len() {
                return Err(Error::InvalidRelation(format!(
                    "paths of lengths {} and {} mixed; relations must combine paths of one length",
                    first.len(),
                    p.len()
                )));
            }
            if p.source != first.source || p.target != first.target {
                return Err(Error::InvalidRelation(
                    "paths with different endpoints mixed in one relation".into(),
                ));
            }
        }
        Ok(Relation { terms })
    }

    pub fn terms(&self) -> &[(Scalar, Path)] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.terms[0].1.len()
    }

    pub fn source(&self) -> usize {
        self.terms[0].1.source
    }

    pub fn target(&self) -> usize {
        self.terms[0].1.target
    }
}

/// A finite quiver with homogeneous relations.
///
/// Relations have degree at least 2 and are homogeneous for both gradings;
/// the flags below are computed once at construction.
#[derive(Debug, Clone)]
pub struct BoundQuiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    relations: Vec<Relation>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
    out_arrows: Vec<Vec<usize>>,
    in_arrows: Vec<Vec<usize>>,
    acyclic: bool,
    grading: Option<Vec<i64>>,
}

impl PartialEq for BoundQuiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.arrows == other.arrows
            && self.relations == other.relations
    }
}

impl BoundQuiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>, relations: Vec<Relation>) -> Result<Self> {
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate vertex `{v}`")));
            }
        }
        let mut arrow_index = HashMap::new();
        let mut out_arrows = vec![Vec::new(); vertices.len()];
        let mut in_arrows = vec![Vec::new(); vertices.len()];
        for (k, a) in arrows.iter().enumerate() {
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return Err(Error::InvalidQuiver(format!("arrow `{}` has a missing endpoint", a.id)));
            }
            if a.bidegree.0 != 1 || !(0..=1).contains(&a.bidegree.1) {
                return Err(Error::InvalidQuiver(format!(
                    "arrow `{}` has bidegree {:?}",
                    a.id, a.bidegree
                )));
            }
            if arrow_index.insert(a.id.clone(), k).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate arrow `{}`", a.id)));
            }
            out_arrows[a.source].push(k);
            in_arrows[a.target].push(k);
        }
        for (r, rel) in relations.iter().enumerate() {
            if rel.degree() < 2 {
                return Err(Error::InvalidRelation(format!(
                    "relation {r} has degree {}; relations start in degree 2",
                    rel.degree()
                )));
            }
            let mut weight = None;
            for (_, p) in rel.terms() {
                let mut at = p.source;
                for &a in &p.arrows {
                    let arrow = arrows.get(a).ok_or_else(|| {
                        Error::InvalidRelation(format!("relation {r} uses unknown arrow {a}"))
                    })?;
                    if arrow.source != at {
                        return Err(Error::InvalidRelation(format!(
                            "relation {r} contains a non-composable path"
                        )));
                    }
                    at = arrow.target;
                }
                if at != p.target {
                    return Err(Error::InvalidRelation(format!(
                        "relation {r} has a path with a wrong target"
                    )));
                }
                let w: i32 = p.arrows.iter().map(|&a| arrows[a].bidegree.1).sum();
                if *weight.get_or_insert(w) != w {
                    return Err(Error::InvalidRelation(format!(
                        "relation {r} mixes second degrees"
                    )));
                }
            }
        }
        let mut q = BoundQuiver {
            vertices,
            arrows,
            relations,
            vertex_index,
            arrow_index,
            out_arrows,
            in_arrows,
            acyclic: false,
            grading: None,
        };
        q.acyclic = q.topological_order().is_some();
        q.grading = q.compute_grading().ok();
        Ok(q)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow(&self, k: usize) -> &Arrow {
        &self.arrows[k]
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn arrow_by_id(&self, id: &str) -> Result<usize> {
        self.arrow_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(id.to_string()))
    }

    pub fn out_arrows(&self, v: usize) -> &[usize] {
        &self.out_arrows[v]
    }

    pub fn in_arrows(&self, v: usize) -> &[usize] {
        &self.in_arrows[v]
    }

    pub fn is_acyclic(&self) -> bool {
        self.acyclic
    }

    /// Every relation has degree 2 (vacuously true without relations).
    pub fn is_quadratic(&self) -> bool {
        self.relations.iter().all(|r| r.degree() == 2)
    }

    pub fn check_quadratic(&self) -> Result<()> {
        match self.relations.iter().position(|r| r.degree() != 2) {
            None => Ok(()),
            Some(index) => Err(Error::NotQuadratic {
                index,
                degree: self.relations[index].degree(),
            }),
        }
    }

    pub fn check_acyclic(&self) -> Result<()> {
        if self.acyclic {
            return Ok(());
        }
        let v = self.cycle_vertex().unwrap_or(0);
        Err(Error::Cyclic(self.vertices[v].clone()))
    }

    /// The degree function `d` with `d(t(a)) = d(s(a)) + 1`, normalized to
    /// minimum 0 on every connected piece, if one exists.
    pub fn nicely_graded(&self) -> Option<&[i64]> {
        self.grading.as_deref()
    }

    pub fn check_nicely_graded(&self) -> Result<Vec<i64>> {
        self.compute_grading()
    }

    /// Path built from arrow ids in traversal order.
    pub fn path(&self, ids: &[&str]) -> Result<Path> {
        let arrows = ids
            .iter()
            .map(|id| self.arrow_by_id(id))
            .collect::<Result<Vec<_>>>()?;
        self.path_from_indices(arrows)
    }

    pub fn path_from_indices(&self, arrows: Vec<usize>) -> Result<Path> {
        let Some(&first) = arrows.first() else {
            return Err(Error::InvalidRelation("empty path needs a vertex".into()));
        };
        let source = self.arrows[first].source;
        let mut at = source;
        for &a in &arrows {
            if self.arrows[a].source != at {
                return Err(Error::InvalidRelation(format!(
                    "arrow `{}` does not start where the path ends",
                    self.arrows[a].id
                )));
            }
            at = self.arrows[a].target;
        }
        Ok(Path {
            source,
            target: at,
            arrows,
        })
    }

    /// Parses a relation such as `"a2.b3 - b2.a4"` or `"2 x.y + 1/2 z.w"`.
    /// Paths list arrow ids in traversal order separated by `.`.
    pub fn parse_relation(&self, text: &str) -> Result<Relation> {
        let mut terms = Vec::new();
        let mut sign = Scalar::one();
        let mut pending: Option<Scalar> = None;
        for tok in tokenize(text) {
            match tok.as_str() {
                "+" => {}
                "-" => sign = -sign,
                _ if tok.chars().next().is_some_and(|c| c.is_ascii_digit()) => {
                    pending = Some(scalar::parse(&tok)?);
                }
                _ => {
                    let ids: Vec<&str> = tok.split('.').collect();
                    let c = pending.take().unwrap_or_else(Scalar::one);
                    terms.push((&sign * c, self.path(&ids)?));
                    sign = Scalar::one();
                }
            }
        }
        if pending.is_some() {
            return Err(Error::Parse(format!("dangling coefficient in `{text}`")));
        }
        Relation::new(terms)
    }

    /// Same quiver with a different relation list.
    pub fn with_relations(&self, relations: Vec<Relation>) -> Result<Self> {
        BoundQuiver::new(self.vertices.clone(), self.arrows.clone(), relations)
    }

    /// Renders a path as composition, last arrow first: `b2·a1`.
    pub fn path_name(&self, p: &Path) -> String {
        if p.is_empty() {
            return format!("e{}", self.vertices[p.source]);
        }
        p.arrows
            .iter()
            .rev()
            .map(|&a| self.arrows[a].id.as_str())
            .collect::<Vec<_>>()
            .join("·")
    }

    pub fn relation_text(&self, r: &Relation) -> String {
        let mut s = String::new();
        for (k, (c, p)) in r.terms().iter().enumerate() {
            let neg = scalar::is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() {
                s.push_str(&scalar::format(&abs));
                s.push(' ');
            }
            s.push_str(&self.path_name(p));
        }
        s
    }

    /// The full subquiver on `keep` (in the given order) with the relations
    /// all of whose paths stay inside it.
    pub fn full_subquiver(&self, keep: &[usize]) -> Result<BoundQuiver> {
        let mut new_index = vec![None; self.vertices.len()];
        for (k, &v) in keep.iter().enumerate() {
            new_index[v] = Some(k);
        }
        let mut arrow_map = vec![None; self.arrows.len()];
        let mut arrows = Vec::new();
        for (k, a) in self.arrows.iter().enumerate() {
            if let (Some(s), Some(t)) = (new_index[a.source], new_index[a.target]) {
                arrow_map[k] = Some(arrows.len());
                arrows.push(Arrow {
                    id: a.id.clone(),
                    source: s,
                    target: t,
                    bidegree: a.bidegree,
                });
            }
        }
        let mut relations = Vec::new();
        for r in &self.relations {
            let mapped: Option<Vec<(Scalar, Path)>> = r
                .terms()
                .iter()
                .map(|(c, p)| {
                    let arrows = p
                        .arrows
                        .iter()
                        .map(|&a| arrow_map[a])
                        .collect::<Option<Vec<_>>>()?;
                    Some((
                        c.clone(),
                        Path {
                            source: new_index[p.source]?,
                            target: new_index[p.target]?,
                            arrows,
                        },
                    ))
                })
                .collect();
            if let Some(terms) = mapped {
                relations.push(Relation::new(terms)?);
            }
        }
        let vertices = keep.iter().map(|&v| self.vertices[v].clone()).collect();
        BoundQuiver::new(vertices, arrows, relations)
    }

    /// Opposite quiver: arrows reversed, paths in relations reversed.
    pub fn opposite(&self) -> Result<BoundQuiver> {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                id: a.id.clone(),
                source: a.target,
                target: a.source,
                bidegree: a.bidegree,
            })
            .collect();
        let relations = self
            .relations
            .iter()
            .map(|r| {
                Relation::new(
                    r.terms()
                        .iter()
                        .map(|(c, p)| {
                            (
                                c.clone(),
                                Path {
                                    source: p.target,
                                    target: p.source,
                                    arrows: p.arrows.iter().rev().copied().collect(),
                                },
                            )
                        })
                        .collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        BoundQuiver::new(self.vertices.clone(), arrows, relations)
    }

    /// Vertices grouped into connected pieces of the underlying graph.
    pub fn connected_pieces(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut pieces = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut piece = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                piece.push(v);
                for &a in self.out_arrows[v].iter().chain(&self.in_arrows[v]) {
                    let w = if self.arrows[a].source == v {
                        self.arrows[a].target
                    } else {
                        self.arrows[a].source
                    };
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            piece.sort_unstable();
            pieces.push(piece);
        }
        pieces
    }

    fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.in_arrows[v].len()).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &a in &self.out_arrows[v] {
                let t = self.arrows[a].target;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    fn cycle_vertex(&self) -> Option<usize> {
        let n = self.vertices.len();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.in_arrows[v].len()).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut removed = vec![false; n];
        while let Some(v) = queue.pop_front() {
            removed[v] = true;
            for &a in &self.out_arrows[v] {
                let t = self.arrows[a].target;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        (0..n).find(|&v| !removed[v])
    }

    fn compute_grading(&self) -> Result<Vec<i64>> {
        let n = self.vertices.len();
        let mut d: Vec<Option<i64>> = vec![None; n];
        for piece in self.connected_pieces() {
            let root = piece[0];
            d[root] = Some(0);
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                let dv = d[v].unwrap();
                for &a in self.out_arrows[v].iter().chain(&self.in_arrows[v]) {
                    let arrow = &self.arrows[a];
                    let (w, dw) = if arrow.source == v {
                        (arrow.target, dv + 1)
                    } else {
                        (arrow.source, dv - 1)
                    };
                    match d[w] {
                        None => {
                            d[w] = Some(dw);
                            queue.push_back(w);
                        }
                        Some(x) if x != dw => return Err(Error::NotNicelyGraded(arrow.id.clone())),
                        _ => {}
                    }
                }
            }
            let min = piece.iter().map(|&v| d[v].unwrap()).min().unwrap_or(0);
            for &v in &piece {
                d[v] = d[v].map(|x| x - min);
            }
        }
        Ok(d.into_iter().map(|x| x.unwrap_or(0)).collect())
    }
}

fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let flush = |cur: &mut String, out: &mut Vec<String>| {
        if !cur.is_empty() {
            out.push(std::mem::take(cur));
        }
    };
    for ch in text.chars() {
        match ch {
            '+' | '-' => {
                flush(&mut cur, &mut out);
                out.push(ch.to_string());
            }
            c if c.is_whitespace() || c == '*' => flush(&mut cur, &mut out),
            c => cur.push(c),
        }
    }
    flush(&mut cur, &mut out);
    out
}

/// Incremental constructor used by fixtures and tests.
#[derive(Debug, Default, Clone)]
pub struct QuiverBuilder {
    vertices: Vec<String>,
    arrows: Vec<(String, String, String, Bidegree)>,
    relations: Vec<String>,
}

impl QuiverBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertices<S: ToString>(mut self, ids: impl IntoIterator<Item = S>) -> Self {
        self.vertices.extend(ids.into_iter().map(|s| s.to_string()));
        self
    }

    pub fn arrow(mut self, id: &str, from: &str, to: &str) -> Self {
        self.arrows
            .push((id.into(), from.into(), to.into(), (1, 0)));
        self
    }

    pub fn graded_arrow(mut self, id: &str, from: &str, to: &str, bidegree: Bidegree) -> Self {
        self.arrows.push((id.into(), from.into(), to.into(), bidegree));
        self
    }

    /// Adds a relation in the text form accepted by [`BoundQuiver::parse_relation`].
    pub fn relation(mut self, text: &str) -> Self {
        self.relations.push(text.into());
        self
    }

    pub fn build(self) -> Result<BoundQuiver> {
        let index: HashMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let lookup = |v: &str| {
            index
                .get(v)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(v.to_string()))
        };
        let arrows = self
            .arrows
            .iter()
            .map(|(id, s, t, b)| {
                Ok(Arrow {
                    id: id.clone(),
                    source: lookup(s)?,
                    target: lookup(t)?,
                    bidegree: *b,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let bare = BoundQuiver::new(self.vertices.clone(), arrows, Vec::new())?;
        let relations = self
            .relations
            .iter()
            .map(|r| bare.parse_relation(r))
            .collect::<Result<Vec<_>>>()?;
        bare.with_relations(relations)
    }
}

impl fmt::Display for BoundQuiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {}", self.vertices.join(" "))?;
        for a in &self.arrows {
            writeln!(
                f,
                "arrow {}: {} -> {}",
                a.id, self.vertices[a.source], self.vertices[a.target]
            )?;
        }
        for r in &self.relations {
            writeln!(f, "relation {}", self.relation_text(r))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> BoundQuiver {
        QuiverBuilder::new()
            .vertices(["1", "2", "3", "4"])
            .arrow("a", "1", "2")
            .arrow("b", "1", "3")
            .arrow("c", "2", "4")
            .arrow("d", "3", "4")
            .relation("a.c - b.d")
            .build()
            .unwrap()
    }

    #[test]
    fn relation_terms_are_sorted_and_merged() {
        let q = square();
        let r = q.parse_relation("b.d + a.c - b.d + b.d").unwrap();
        assert_eq!(r.terms().len(), 2);
        assert_eq!(r.terms()[0].1, q.path(&["a", "c"]).unwrap());
        assert_eq!(q.relation_text(&r), "c·a + d·b");
    }

    #[test]
    fn mixed_lengths_rejected() {
        let q = QuiverBuilder::new()
            .vertices(["1", "2", "3"])
            .arrow("a", "1", "2")
            .arrow("b", "2", "3")
            .arrow("c", "1", "3")
            .build()
            .unwrap();
        assert!(matches!(q.parse_relation("a.b - c"), Err(Error::InvalidRelation(_))));
        assert!(q.parse_relation("a.b - a.b").is_err());
    }

    #[test]
    fn flags() {
        let q = square();
        assert!(q.is_acyclic());
        assert!(q.is_quadratic());
        assert_eq!(q.nicely_graded().unwrap(), &[0, 1, 1, 2]);
        let cyc = QuiverBuilder::new()
            .vertices(["1", "2"])
            .arrow("a", "1", "2")
            .arrow("b", "2", "1")
            .build()
            .unwrap();
        assert!(!cyc.is_acyclic());
        assert!(cyc.nicely_graded().is_none());
        assert!(matches!(cyc.check_acyclic(), Err(Error::Cyclic(_))));
    }

    #[test]
    fn path_order() {
        let q = square();
        let p1 = q.path(&["a"]).unwrap();
        let p2 = q.path(&["d"]).unwrap();
        let p3 = q.path(&["a", "c"]).unwrap();
        let e4 = Path::trivial(3);
        let mut v = vec![p3.clone(), p2.clone(), e4.clone(), p1.clone()];
        v.sort();
        assert_eq!(v, vec![e4, p1, p2, p3]);
    }

    #[test]
    fn opposite_reverses_relations() {
        let q = square();
        let op = q.opposite().unwrap();
        assert_eq!(op.relation_text(&op.relations()[0]), "a·c - b·d");
        assert_eq!(op.opposite().unwrap(), q);
    }

    #[test]
    fn full_subquiver_drops_broken_relations() {
        let q = square();
        let sub = q.full_subquiver(&[0, 1, 3]).unwrap();
        assert_eq!(sub.arrows().len(), 2);
        assert!(sub.relations().is_empty());
    }
}
