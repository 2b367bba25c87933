use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{build_window, Side, ZVertex, ZWindow};
use crate::error::{Error, Result};
use crate::graded::GradedAlgebraView;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `H^v`, starting at `v` and ending at `τ⊥^{-1} v`.
    Forward,
    /// `H_v`, starting at `τ⊥ v` and ending at `v`.
    Backward,
}

impl Direction {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "forward" | "+" | "plus" => Ok(Direction::Forward),
            "backward" | "-" | "minus" => Ok(Direction::Backward),
            other => Err(Error::Parse(format!(
                "unknown direction `{other}` (expected forward or backward)"
            ))),
        }
    }
}

/// A `τ⊥`-hammock: vertices with multiplicities `dim e_u Ĝ e_v` (forward) or
/// `dim e_v Ĝ e_u` (backward), where `Ĝ` is the window algebra with the
/// relations `ρ̃⊥`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hammock {
    pub anchor: ZVertex,
    pub direction: Direction,
    pub terminal: ZVertex,
    pub entries: BTreeMap<ZVertex, usize>,
}

impl Hammock {
    pub fn support(&self) -> BTreeSet<ZVertex> {
        self.entries.keys().copied().collect()
    }

    pub fn multiplicity(&self, v: ZVertex) -> usize {
        self.entries.get(&v).copied().unwrap_or(0)
    }
}

pub fn hammock(w: &ZWindow, v: ZVertex, dir: Direction) -> Result<Hammock> {
    let top = w
        .base()
        .dual_top
        .ok_or_else(|| Error::NoDualTranslation("Γ̃ is not finite dimensional".into()))?;
    let terminal = match dir {
        Direction::Forward => w.tau_inv(Side::TauPerp, v)?,
        Direction::Backward => w.tau(Side::TauPerp, v)?,
    };
    let (lo, hi) = match dir {
        Direction::Forward => (v.level, terminal.level),
        Direction::Backward => (terminal.level, v.level),
    };
    w.require_levels(lo, hi)?;
    let local = build_window(Arc::clone(w.base()), w.kind(), lo, hi)?;
    let view = GradedAlgebraView::new(Arc::new(local.quiver(Side::TauPerp).clone()));
    let anchor = local.index_of(v).expect("anchor inside its own range");
    let mut entries: BTreeMap<ZVertex, usize> = BTreeMap::new();
    for d in 0..=top {
        for (key, dim) in view.block_dims(d)? {
            let other = match dir {
                Direction::Forward if key.source == anchor => key.target,
                Direction::Backward if key.target == anchor => key.source,
                _ => continue,
            };
            if dim > 0 {
                *entries.entry(local.vertices()[other]).or_default() += dim;
            }
        }
    }
    let h = Hammock {
        anchor: v,
        direction: dir,
        terminal,
        entries,
    };
    if h.multiplicity(v) != 1 || h.multiplicity(terminal) != 1 {
        return Err(Error::Verification(format!(
            "hammock at {} has end multiplicities {} and {}",
            w.label(v),
            h.multiplicity(v),
            h.multiplicity(terminal)
        )));
    }
    Ok(h)
}
