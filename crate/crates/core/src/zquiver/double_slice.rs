use std::collections::BTreeSet;

use serde::Serialize;

use super::{hammock, is_complete_slice, Direction, MutationDir, Side, ZVertex, ZWindow};
use crate::error::{Error, Result};

/// `D(S+)` (forward) or `D(-S)` (backward) with its decomposition into the
/// `τ`-slice `S` and the `τ⊥`-slice `D \ S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleSlice {
    pub direction: Direction,
    pub vertices: BTreeSet<ZVertex>,
    pub slice: BTreeSet<ZVertex>,
    pub complement: BTreeSet<ZVertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleSliceVerdict {
    pub double_slice: bool,
    pub witness: Option<String>,
}

impl DoubleSliceVerdict {
    fn fail(witness: String) -> Self {
        DoubleSliceVerdict {
            double_slice: false,
            witness: Some(witness),
        }
    }
}

/// `S` together with every `τ⊥`-hammock starting (forward) or ending
/// (backward) at a vertex of `S`.
pub fn double_slice(w: &ZWindow, s: &BTreeSet<ZVertex>, dir: Direction) -> Result<DoubleSlice> {
    let verdict = is_complete_slice(w, s, Side::Tau)?;
    if !verdict.complete {
        return Err(Error::IncompleteSlice(verdict.witness.unwrap_or_default()));
    }
    let mut vertices = s.clone();
    for &v in s {
        vertices.extend(hammock(w, v, dir)?.support());
    }
    let complement: BTreeSet<ZVertex> = vertices.difference(s).copied().collect();
    let c = is_complete_slice(w, &complement, Side::TauPerp)?;
    if !c.complete {
        return Err(Error::Verification(format!(
            "complement of the slice is not a complete τ⊥-slice: {}",
            c.witness.unwrap_or_default()
        )));
    }
    let d = is_double_slice(w, &vertices)?;
    if !d.double_slice {
        return Err(Error::Verification(format!(
            "hammock union is not a double slice: {}",
            d.witness.unwrap_or_default()
        )));
    }
    Ok(DoubleSlice {
        direction: dir,
        vertices,
        slice: s.clone(),
        complement,
    })
}

fn violates(w: &ZWindow, d: &BTreeSet<ZVertex>, v: ZVertex) -> Result<bool> {
    Ok(d.contains(&w.tau_inv(Side::Tau, v)?) && d.contains(&w.tau(Side::TauPerp, v)?))
}

/// For every vertex at most one of `τ^{-1} v`, `τ⊥ v` lies in `D`; `D` is
/// convex; and no window vertex adjacent to `D` can be added without breaking
/// the first condition.
pub fn is_double_slice(w: &ZWindow, d: &BTreeSet<ZVertex>) -> Result<DoubleSliceVerdict> {
    w.translation(Side::TauPerp)?;
    w.require(d)?;
    let Some(&first) = d.iter().next() else {
        return Ok(DoubleSliceVerdict::fail("empty vertex set".into()));
    };
    let comp = w.component(first);
    for &v in d {
        if violates(w, d, v)? {
            return Ok(DoubleSliceVerdict::fail(format!(
                "both τ^-1 {0} and τ⊥ {0} lie in the set",
                w.label(v)
            )));
        }
    }
    if let Some(&v) = w.convexity_violations(d).first() {
        return Ok(DoubleSliceVerdict::fail(format!(
            "{} lies on a path between vertices of the set",
            w.label(v)
        )));
    }
    let candidates: BTreeSet<ZVertex> = d
        .iter()
        .flat_map(|&v| w.successors(v).chain(w.predecessors(v)).collect::<Vec<_>>())
        .filter(|u| !d.contains(u) && w.component(*u) == comp)
        .collect();
    for u in candidates {
        let mut bigger = d.clone();
        bigger.insert(u);
        let affected = [u, w.tau(Side::Tau, u)?, w.tau_inv(Side::TauPerp, u)?];
        let mut broken = false;
        for x in affected {
            if bigger.contains(&x) && violates(w, &bigger, x)? {
                broken = true;
                break;
            }
        }
        if !broken {
            return Ok(DoubleSliceVerdict::fail(format!(
                "{} can be added, so the set is not maximal",
                w.label(u)
            )));
        }
    }
    Ok(DoubleSliceVerdict {
        double_slice: true,
        witness: None,
    })
}

/// `s^v D = D - v + τ^{-1}τ⊥^{-1} v` at a source, `s_v D = D - v + ττ⊥ v` at a
/// sink.
pub fn mutate_double_slice(
    w: &ZWindow,
    d: &BTreeSet<ZVertex>,
    v: ZVertex,
    dir: MutationDir,
) -> Result<BTreeSet<ZVertex>> {
    let expected = match dir {
        MutationDir::Plus => "source",
        MutationDir::Minus => "sink",
    };
    if !d.contains(&v) {
        return Err(Error::NotSourceOrSink {
            vertex: w.label(v),
            expected,
            witness: "vertex is not in the double slice".into(),
        });
    }
    let blocker = match dir {
        MutationDir::Plus => w.predecessors(v).find(|u| d.contains(u)),
        MutationDir::Minus => w.successors(v).find(|u| d.contains(u)),
    };
    if let Some(u) = blocker {
        return Err(Error::NotSourceOrSink {
            vertex: w.label(v),
            expected,
            witness: format!("{} is adjacent inside the double slice", w.label(u)),
        });
    }
    let replacement = match dir {
        MutationDir::Plus => w.tau_inv(Side::Tau, w.tau_inv(Side::TauPerp, v)?)?,
        MutationDir::Minus => w.tau(Side::Tau, w.tau(Side::TauPerp, v)?)?,
    };
    w.require_levels(replacement.level, replacement.level)?;
    let mut out = d.clone();
    out.remove(&v);
    out.insert(replacement);
    let verdict = is_double_slice(w, &out)?;
    if !verdict.double_slice {
        return Err(Error::Verification(format!(
            "mutation at {} broke the double slice: {}",
            w.label(v),
            verdict.witness.unwrap_or_default()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::tests::auslander_base;
    use super::super::{build_window, WindowKind};
    use super::*;

    #[test]
    fn d_of_s1() {
        let w = build_window(auslander_base(), WindowKind::FirstGrading, -6, 10).unwrap();
        let s1 = w.parse_vertices("(1,0),(2,1),(3,2),(5,0),(6,1),(4,2)").unwrap();
        let d = double_slice(&w, &s1, Direction::Forward).unwrap();
        let expect = w
            .parse_vertices("(1,0),(2,1),(3,2),(1,3),(2,4),(5,0),(4,2),(5,3),(6,1),(6,4)")
            .unwrap();
        assert_eq!(d.vertices, expect);
    }

    #[test]
    fn non_maximal_set_is_rejected() {
        let w = build_window(auslander_base(), WindowKind::FirstGrading, -6, 10).unwrap();
        let s1 = w.parse_vertices("(1,0),(2,1),(3,2),(5,0),(6,1),(4,2)").unwrap();
        assert!(!is_double_slice(&w, &s1).unwrap().double_slice);
    }
}
