//! Isomorphisms of bound quivers: a vertex bijection, an arrow bijection and
//! arrow signs under which the relation spans agree block by block.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, SparseVec};
use crate::quiver::BoundQuiver;
use crate::scalar::Scalar;
use crate::zquiver::{Side, ZWindow};

/// Search steps before giving up.
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// Arrows taking part in multi-term relations beyond this count keep sign +1.
const MAX_SIGNED_ARROWS: usize = 16;

/// Arrow bijections tried per vertex bijection.
const MAX_ARROW_MAPS: usize = 5_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuiverIso {
    pub vertex_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
    /// `+1` or `-1` per arrow of the source quiver.
    pub signs: Vec<i8>,
}

impl QuiverIso {
    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &j)| i == j)
            && self.arrow_map.iter().enumerate().all(|(i, &j)| i == j)
            && self.signs.iter().all(|&s| s == 1)
    }

    /// Pairs of vertex ids.
    pub fn vertex_pairs(&self, a: &BoundQuiver, b: &BoundQuiver) -> Vec<(String, String)> {
        self.vertex_map
            .iter()
            .enumerate()
            .map(|(i, &j)| (a.vertex_id(i).to_string(), b.vertex_id(j).to_string()))
            .collect()
    }
}

fn multiplicity(q: &BoundQuiver) -> HashMap<(usize, usize), Vec<usize>> {
    let mut m: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (k, a) in q.arrows().iter().enumerate() {
        m.entry((a.source, a.target)).or_default().push(k);
    }
    m
}

fn signature(q: &BoundQuiver, v: usize) -> (usize, usize) {
    (q.in_arrows(v).len(), q.out_arrows(v).len())
}

/// Vertex order in which each vertex after the first of its piece has an
/// earlier neighbour.
fn search_order(q: &BoundQuiver) -> Vec<usize> {
    let mut order = Vec::new();
    let mut seen = vec![false; q.vertex_count()];
    for start in 0..q.vertex_count() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &a in q.out_arrows(v).iter().chain(q.in_arrows(v)) {
                let arrow = q.arrow(a);
                let w = if arrow.source == v { arrow.target } else { arrow.source };
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

struct Search<'a> {
    a: &'a BoundQuiver,
    b: &'a BoundQuiver,
    ma: HashMap<(usize, usize), Vec<usize>>,
    mb: HashMap<(usize, usize), Vec<usize>>,
    order: Vec<usize>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    steps: usize,
    budget: usize,
}

impl Search<'_> {
    fn count(m: &HashMap<(usize, usize), Vec<usize>>, s: usize, t: usize) -> usize {
        m.get(&(s, t)).map_or(0, Vec::len)
    }

    fn consistent(&self, x: usize, y: usize) -> bool {
        if signature(self.a, x) != signature(self.b, y) {
            return false;
        }
        if Self::count(&self.ma, x, x) != Self::count(&self.mb, y, y) {
            return false;
        }
        for (u, fu) in self.map.iter().enumerate() {
            if let Some(fu) = *fu {
                if Self::count(&self.ma, x, u) != Self::count(&self.mb, y, fu)
                    || Self::count(&self.ma, u, x) != Self::count(&self.mb, fu, y)
                {
                    return false;
                }
            }
        }
        true
    }

    fn candidates(&self, x: usize) -> Vec<usize> {
        for &a in self.a.in_arrows(x).iter().chain(self.a.out_arrows(x)) {
            let arrow = self.a.arrow(a);
            let (u, incoming) = if arrow.target == x {
                (arrow.source, true)
            } else {
                (arrow.target, false)
            };
            if let Some(fu) = self.map[u] {
                let mut c: Vec<usize> = if incoming {
                    self.b.out_arrows(fu).iter().map(|&k| self.b.arrow(k).target).collect()
                } else {
                    self.b.in_arrows(fu).iter().map(|&k| self.b.arrow(k).source).collect()
                };
                c.sort_unstable();
                c.dedup();
                return c;
            }
        }
        (0..self.b.vertex_count()).collect()
    }

    fn run(&mut self, depth: usize, found: &mut dyn FnMut(&[usize]) -> Result<bool>) -> Result<bool> {
        if depth == self.order.len() {
            let map: Vec<usize> = self.map.iter().map(|m| m.expect("complete map")).collect();
            return found(&map);
        }
        let x = self.order[depth];
        for y in self.candidates(x) {
            self.steps += 1;
            if self.steps > self.budget {
                return Err(Error::ResourceBound(format!(
                    "isomorphism search exceeded {} steps",
                    self.budget
                )));
            }
            if self.used[y] || !self.consistent(x, y) {
                continue;
            }
            self.map[x] = Some(y);
            self.used[y] = true;
            if self.run(depth + 1, found)? {
                return Ok(true);
            }
            self.map[x] = None;
            self.used[y] = false;
        }
        Ok(false)
    }
}

/// Relation spans per `(source, target, degree)` block over path keys.
fn spans(
    q: &BoundQuiver,
    rename: impl Fn(&[usize]) -> (Vec<usize>, Scalar),
    index: &mut HashMap<Vec<usize>, usize>,
) -> BTreeMap<(usize, usize, usize), Echelon> {
    let mut out: BTreeMap<(usize, usize, usize), Echelon> = BTreeMap::new();
    for r in q.relations() {
        let mut key = None;
        let v: SparseVec = linalg::collect(r.terms().iter().map(|(c, p)| {
            let (arrows, sign) = rename(&p.arrows);
            if key.is_none() {
                let s = q.arrow(p.arrows[0]).source;
                let t = q.arrow(*p.arrows.last().expect("relation paths are non-empty")).target;
                key = Some((s, t, arrows.len()));
            }
            let n = index.len();
            let col = *index.entry(arrows).or_insert(n);
            (col, c * sign)
        }));
        if let Some(k) = key {
            out.entry(k).or_default().insert(v);
        }
    }
    out
}

fn relations_match(a: &BoundQuiver, b: &BoundQuiver, vmap: &[usize], amap: &[usize], signs: &[i8]) -> bool {
    let mut index = HashMap::new();
    let sb = spans(b, |p| (p.to_vec(), Scalar::one()), &mut index);
    let sa = spans(
        a,
        |p| {
            let sign = p.iter().filter(|&&k| signs[k] < 0).count() % 2;
            let s = if sign == 0 { Scalar::one() } else { -Scalar::one() };
            (p.iter().map(|&k| amap[k]).collect(), s)
        },
        &mut index,
    );
    if sa.len() != sb.len() {
        return false;
    }
    sa.iter().all(|((s, t, d), ea)| {
        sb.get(&(vmap[*s], vmap[*t], *d))
            .is_some_and(|eb| ea.rank() == eb.rank() && ea.rows().iter().all(|r| eb.contains(r)))
    })
}

/// Arrow bijections compatible with `vmap`: each bundle of parallel arrows is
/// matched by every permutation.
fn arrow_maps(a: &BoundQuiver, b: &BoundQuiver, vmap: &[usize]) -> Result<Vec<Vec<usize>>> {
    let ma = multiplicity(a);
    let mb = multiplicity(b);
    let mut bundles: Vec<(&Vec<usize>, &Vec<usize>)> = Vec::new();
    let mut keys: Vec<_> = ma.keys().copied().collect();
    keys.sort_unstable();
    for (s, t) in keys {
        let from = &ma[&(s, t)];
        let to = &mb[&(vmap[s], vmap[t])];
        bundles.push((from, to));
    }
    let mut out = vec![vec![usize::MAX; a.arrows().len()]];
    for (from, to) in bundles {
        let perms = permutations(to.len());
        let mut next = Vec::new();
        for m in &out {
            for p in &perms {
                let mut m = m.clone();
                for (k, &x) in from.iter().enumerate() {
                    m[x] = to[p[k]];
                }
                next.push(m);
            }
        }
        out = next;
        if out.len() > MAX_ARROW_MAPS {
            return Err(Error::ResourceBound(format!(
                "more than {MAX_ARROW_MAPS} arrow bijections to try"
            )));
        }
    }
    Ok(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Searches for an isomorphism of bound quivers. Parallel arrows are matched
/// by permutations and arrows rescaled only by signs, so a `None` means no
/// isomorphism of that form exists.
pub fn find_isomorphism(a: &BoundQuiver, b: &BoundQuiver) -> Result<Option<QuiverIso>> {
    find_isomorphism_with_budget(a, b, DEFAULT_BUDGET)
}

pub fn find_isomorphism_with_budget(
    a: &BoundQuiver,
    b: &BoundQuiver,
    budget: usize,
) -> Result<Option<QuiverIso>> {
    if a.vertex_count() != b.vertex_count()
        || a.arrows().len() != b.arrows().len()
    {
        return Ok(None);
    }
    let mut sa: Vec<_> = (0..a.vertex_count()).map(|v| signature(a, v)).collect();
    let mut sb: Vec<_> = (0..b.vertex_count()).map(|v| signature(b, v)).collect();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(None);
    }
    let signed: Vec<usize> = {
        let mut s: Vec<usize> = a
            .relations()
            .iter()
            .filter(|r| r.terms().len() > 1)
            .flat_map(|r| r.terms().iter().flat_map(|(_, p)| p.arrows.iter().copied()))
            .collect();
        s.sort_unstable();
        s.dedup();
        s.truncate(MAX_SIGNED_ARROWS);
        s
    };
    let mut search = Search {
        a,
        b,
        ma: multiplicity(a),
        mb: multiplicity(b),
        order: search_order(a),
        map: vec![None; a.vertex_count()],
        used: vec![false; b.vertex_count()],
        steps: 0,
        budget,
    };
    let mut result = None;
    search.run(0, &mut |vmap: &[usize]| {
        for amap in arrow_maps(a, b, vmap)? {
            for mask in 0u32..(1u32 << signed.len()) {
                let mut signs = vec![1i8; a.arrows().len()];
                for (bit, &k) in signed.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        signs[k] = -1;
                    }
                }
                if relations_match(a, b, vmap, &amap, &signs) {
                    result = Some(QuiverIso {
                        vertex_map: vmap.to_vec(),
                        arrow_map: amap,
                        signs,
                    });
                    return Ok(true);
                }
            }
        }
        Ok(false)
    })?;
    Ok(result)
}

/// Compares the window quivers with the chosen relation sets.
pub fn window_iso_check(w1: &ZWindow, side1: Side, w2: &ZWindow, side2: Side) -> Result<Option<QuiverIso>> {
    find_isomorphism(w1.quiver(side1), w2.quiver(side2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::quiver::QuiverBuilder;

    #[test]
    fn identity_on_self() {
        let q = fixtures::a4_auslander_gamma();
        let iso = find_isomorphism(&q, &q).unwrap().unwrap();
        assert!(iso.is_identity());
    }

    #[test]
    fn sign_changes_are_absorbed() {
        let a = fixtures::a4_auslander_gamma();
        let b = a
            .with_relations(vec![
                a.parse_relation("a2.b3 - b2.a4").unwrap(),
                a.parse_relation("a1.b2").unwrap(),
                a.parse_relation("a4.b5").unwrap(),
            ])
            .unwrap();
        let iso = find_isomorphism(&a, &b).unwrap().unwrap();
        assert!(iso.signs.contains(&-1));
    }

    #[test]
    fn relabelled_vertices() {
        let a = fixtures::linear_a(3);
        let b = QuiverBuilder::new()
            .vertices(["x", "y", "z"])
            .arrow("p", "z", "x")
            .arrow("q", "y", "z")
            .build()
            .unwrap();
        let iso = find_isomorphism(&a, &b).unwrap().unwrap();
        assert_eq!(iso.vertex_map, vec![1, 2, 0]);
    }

    #[test]
    fn different_relations_are_not_isomorphic() {
        let a = fixtures::linear_a(3);
        let b = crate::duality::quadratic_dual(&a).unwrap();
        assert!(find_isomorphism(&a, &b).unwrap().is_none());
    }
}
