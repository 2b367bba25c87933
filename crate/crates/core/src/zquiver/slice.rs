use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{ComponentId, Side, ZVertex, ZWindow};
use crate::error::{Error, Result};
use crate::quiver::BoundQuiver;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutationDir {
    /// At a source `v`: replace `v` by `τ^{-1} v`.
    Plus,
    /// At a sink `v`: replace `v` by `τ v`.
    Minus,
}

impl MutationDir {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "+" | "plus" | "source" => Ok(MutationDir::Plus),
            "-" | "minus" | "sink" => Ok(MutationDir::Minus),
            other => Err(Error::Parse(format!("unknown direction `{other}` (expected + or -)"))),
        }
    }

    pub fn inverse(self) -> Self {
        match self {
            MutationDir::Plus => MutationDir::Minus,
            MutationDir::Minus => MutationDir::Plus,
        }
    }
}

/// A vertex set of a window together with the side it is a slice for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceRef {
    pub side: Side,
    pub vertices: BTreeSet<ZVertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceVerdict {
    pub complete: bool,
    pub component: Option<ComponentId>,
    pub witness: Option<String>,
}

impl SliceVerdict {
    fn fail(component: Option<ComponentId>, witness: String) -> Self {
        SliceVerdict {
            complete: false,
            component,
            witness: Some(witness),
        }
    }
}

/// Complete slice: inside one component, convex, and meeting every orbit of
/// the chosen translation exactly once.
pub fn is_complete_slice(w: &ZWindow, s: &BTreeSet<ZVertex>, side: Side) -> Result<SliceVerdict> {
    w.translation(side)?;
    let Some(&first) = s.iter().next() else {
        return Ok(SliceVerdict::fail(None, "slice is empty".into()));
    };
    w.require(s)?;
    let comp = w.component(first);
    if let Some(&v) = s.iter().find(|&&v| w.component(v) != comp) {
        return Ok(SliceVerdict::fail(
            Some(comp),
            format!("{} and {} lie in different components", w.label(first), w.label(v)),
        ));
    }
    if let Some(&v) = w.convexity_violations(s).first() {
        return Ok(SliceVerdict::fail(
            Some(comp),
            format!("{} lies on a path between slice vertices", w.label(v)),
        ));
    }
    let mut seen: BTreeMap<(usize, i64), ZVertex> = BTreeMap::new();
    for &v in s {
        let id = w.orbit_id(side, v)?;
        if let Some(&u) = seen.get(&id) {
            return Ok(SliceVerdict::fail(
                Some(comp),
                format!("{} and {} lie in the same orbit", w.label(u), w.label(v)),
            ));
        }
        seen.insert(id, v);
    }
    let all = w.orbits_in_component(side, comp)?;
    if let Some(&(i, t)) = all.iter().find(|id| !seen.contains_key(id)) {
        return Ok(SliceVerdict::fail(
            Some(comp),
            format!("the orbit of {} is missed", w.label(ZVertex::new(i, t))),
        ));
    }
    Ok(SliceVerdict {
        complete: true,
        component: Some(comp),
        witness: None,
    })
}

fn require_complete(w: &ZWindow, s: &BTreeSet<ZVertex>, side: Side) -> Result<()> {
    let verdict = is_complete_slice(w, s, side)?;
    if verdict.complete {
        Ok(())
    } else {
        Err(Error::IncompleteSlice(verdict.witness.unwrap_or_default()))
    }
}

/// `s⁺` at a source (`v ↦ τ^{-1} v`) or `s⁻` at a sink (`v ↦ τ v`).
pub fn mutate_slice(
    w: &ZWindow,
    s: &BTreeSet<ZVertex>,
    v: ZVertex,
    dir: MutationDir,
    side: Side,
) -> Result<BTreeSet<ZVertex>> {
    require_complete(w, s, side)?;
    let expected = match dir {
        MutationDir::Plus => "source",
        MutationDir::Minus => "sink",
    };
    if !s.contains(&v) {
        return Err(Error::NotSourceOrSink {
            vertex: w.label(v),
            expected,
            witness: "vertex is not in the slice".into(),
        });
    }
    let blocker = match dir {
        MutationDir::Plus => w.predecessors(v).find(|u| s.contains(u)),
        MutationDir::Minus => w.successors(v).find(|u| s.contains(u)),
    };
    if let Some(u) = blocker {
        let witness = match dir {
            MutationDir::Plus => format!("arrow {} -> {}", w.label(u), w.label(v)),
            MutationDir::Minus => format!("arrow {} -> {}", w.label(v), w.label(u)),
        };
        return Err(Error::NotSourceOrSink {
            vertex: w.label(v),
            expected,
            witness,
        });
    }
    let replacement = match dir {
        MutationDir::Plus => w.tau_inv(side, v)?,
        MutationDir::Minus => w.tau(side, v)?,
    };
    w.require_levels(replacement.level, replacement.level)?;
    let mut out = s.clone();
    out.remove(&v);
    out.insert(replacement);
    let verdict = is_complete_slice(w, &out, side)?;
    if !verdict.complete {
        return Err(Error::Verification(format!(
            "mutation at {} left the slice incomplete: {}",
            w.label(v),
            verdict.witness.unwrap_or_default()
        )));
    }
    Ok(out)
}

/// The bound quiver of a complete slice: the full subquiver with the
/// relations of the chosen side restricted to it.
pub fn slice_algebra(w: &ZWindow, s: &BTreeSet<ZVertex>, side: Side) -> Result<BoundQuiver> {
    require_complete(w, s, side)?;
    w.subquiver(s, side)
}

#[cfg(test)]
mod tests {
    use super::super::tests::auslander_base;
    use super::super::{build_window, WindowKind};
    use super::*;

    fn window() -> ZWindow {
        build_window(auslander_base(), WindowKind::FirstGrading, -6, 9).unwrap()
    }

    #[test]
    fn s1_and_t1_are_complete() {
        let w = window();
        let s1 = w.parse_vertices("(1,0),(2,1),(3,2),(5,0),(6,1),(4,2)").unwrap();
        assert!(is_complete_slice(&w, &s1, Side::Tau).unwrap().complete);
        assert!(!is_complete_slice(&w, &s1, Side::TauPerp).unwrap().complete);
        let t1 = w.parse_vertices("(1,0),(2,1),(5,0),(6,1)").unwrap();
        assert!(is_complete_slice(&w, &t1, Side::TauPerp).unwrap().complete);
    }

    #[test]
    fn missing_orbit_has_witness() {
        let w = window();
        let s = w.parse_vertices("(1,0),(2,1),(3,2),(5,0),(6,1)").unwrap();
        let v = is_complete_slice(&w, &s, Side::Tau).unwrap();
        assert!(!v.complete);
        assert!(v.witness.unwrap().contains("missed"));
    }

    #[test]
    fn mutation_round_trip_and_errors() {
        let w = window();
        let s1 = w.parse_vertices("(1,0),(2,1),(3,2),(5,0),(6,1),(4,2)").unwrap();
        let v = w.parse_vertex("(5,0)").unwrap();
        let s4 = mutate_slice(&w, &s1, v, MutationDir::Plus, Side::Tau).unwrap();
        assert_eq!(s4, w.parse_vertices("(1,0),(2,1),(3,2),(5,3),(6,1),(4,2)").unwrap());
        let back = mutate_slice(&w, &s4, w.parse_vertex("(5,3)").unwrap(), MutationDir::Minus, Side::Tau).unwrap();
        assert_eq!(back, s1);
        let err = mutate_slice(&w, &s1, w.parse_vertex("(2,1)").unwrap(), MutationDir::Plus, Side::Tau);
        assert!(matches!(err, Err(Error::NotSourceOrSink { .. })));
    }

    #[test]
    fn margin_is_reported() {
        let w = build_window(auslander_base(), WindowKind::FirstGrading, 0, 2).unwrap();
        let s1 = w.parse_vertices("(1,0),(2,1),(3,2),(5,0),(6,1),(4,2)").unwrap();
        let err = mutate_slice(&w, &s1, w.parse_vertex("(5,0)").unwrap(), MutationDir::Plus, Side::Tau);
        assert!(matches!(err, Err(Error::Margin { need_hi: 3, .. })));
    }
}
