use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{build_window, double_slice, Direction, DoubleSlice, Side, ZBase, ZVertex, ZWindow, WindowKind};
use crate::duality::{n_slice_certify, quadratic_dual};
use crate::error::{Error, Result};
use crate::graded::{check_properly_graded, GradedAlgebraView};
use crate::homology::Bounds;
use crate::quiver::{Arrow, BoundQuiver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompanionSide {
    /// From `τ(-S⊥)`, the complement of `S` in `D(S+)` moved back by `τ`.
    Right,
    /// From `τ^{-1}(S⊥+)`, the complement of `S` in `D(-S)` moved on by `τ^{-1}`.
    Left,
}

/// The embedding of `Q` as a slice of `Z_v Q̃` together with the double
/// slice it spans.
#[derive(Debug, Clone)]
struct Setting {
    window: ZWindow,
    n: usize,
    coxeter_index: usize,
    slice: BTreeSet<ZVertex>,
}

fn setting(gamma: &BoundQuiver, bounds: &Bounds) -> Result<Setting> {
    let cert = n_slice_certify(gamma, bounds)?;
    let coxeter_index = cert.coxeter_index().ok_or_else(|| {
        Error::NotFiniteType(format!("Λ̃ is {}", cert.koszul.describe()))
    })?;
    let grading = cert.lambda.check_nicely_graded()?;
    let base = Arc::new(ZBase::from_lambda(&cert.lambda, bounds)?);
    let h = base
        .dual_top
        .ok_or_else(|| Error::NotFiniteType("Γ̃ is not finite dimensional".into()))?;
    base.translation(Side::TauPerp)?;
    let n = cert.n as i64;
    let top = grading.iter().copied().max().unwrap_or(0);
    let reach = n + 1 + h as i64 + 1;
    let window = build_window(base, WindowKind::FirstGrading, -reach, top + reach)?;
    let slice = grading
        .iter()
        .enumerate()
        .map(|(i, &d)| ZVertex::new(i, d))
        .collect();
    Ok(Setting {
        window,
        n: cert.n,
        coxeter_index,
        slice,
    })
}

/// Bound quiver of a window subset with vertex ids `i@t`, arrow ids `a@t`
/// and plain bidegrees.
fn relabel(w: &ZWindow, set: &BTreeSet<ZVertex>, side: Side) -> Result<BoundQuiver> {
    let q = w.subquiver(set, side)?;
    let vertices = set.iter().map(|&v| w.node_id(v)).collect();
    let arrows = q
        .arrows()
        .iter()
        .map(|a| Arrow {
            bidegree: (1, 0),
            ..a.clone()
        })
        .collect();
    BoundQuiver::new(vertices, arrows, q.relations().to_vec())
}

/// The companion `Γ^c` of an `n`-slice algebra of finite type.
#[derive(Debug, Clone)]
pub struct Companion {
    pub side: CompanionSide,
    pub n: usize,
    pub coxeter_index: usize,
    pub window: ZWindow,
    /// `Q` placed by its nice grading.
    pub slice: BTreeSet<ZVertex>,
    pub double_slice: DoubleSlice,
    /// The complete `τ⊥`-slice defining the companion.
    pub companion_slice: BTreeSet<ZVertex>,
    /// `Q'` with the relations `ρ̃⊥` restricted to it.
    pub slice_quiver: BoundQuiver,
    /// `Γ^c = (Q')^{!,op}`.
    pub quiver: BoundQuiver,
}

impl Companion {
    /// The companion is a `q`-slice algebra with `q = coxeter_index - 1`.
    pub fn q(&self) -> usize {
        self.coxeter_index - 1
    }
}

pub fn companion(gamma: &BoundQuiver, side: CompanionSide, bounds: &Bounds) -> Result<Companion> {
    let Setting {
        window,
        n,
        coxeter_index,
        slice,
    } = setting(gamma, bounds)?;
    let dir = match side {
        CompanionSide::Right => Direction::Forward,
        CompanionSide::Left => Direction::Backward,
    };
    let d = double_slice(&window, &slice, dir)?;
    let companion_slice = d
        .complement
        .iter()
        .map(|&v| match side {
            CompanionSide::Right => window.tau(Side::Tau, v),
            CompanionSide::Left => window.tau_inv(Side::Tau, v),
        })
        .collect::<Result<BTreeSet<_>>>()?;
    let verdict = super::is_complete_slice(&window, &companion_slice, Side::TauPerp)?;
    if !verdict.complete {
        return Err(Error::Verification(format!(
            "companion slice is not a complete τ⊥-slice: {}",
            verdict.witness.unwrap_or_default()
        )));
    }
    let slice_quiver = relabel(&window, &companion_slice, Side::TauPerp)?;
    let q = coxeter_index - 1;
    let view = GradedAlgebraView::with_cap(Arc::new(slice_quiver.clone()), bounds.path_cap);
    let graded = check_properly_graded(&view, bounds.degree)?;
    if graded != q {
        return Err(Error::Verification(format!(
            "companion slice is {graded}-properly graded, expected {q}"
        )));
    }
    let quiver = quadratic_dual(&slice_quiver)?;
    Ok(Companion {
        side,
        n,
        coxeter_index,
        window,
        slice,
        double_slice: d,
        companion_slice,
        slice_quiver,
        quiver,
    })
}

/// Convenience for the default right companion.
pub fn companion_of_certified(gamma: &BoundQuiver, bounds: &Bounds) -> Result<BoundQuiver> {
    Ok(companion(gamma, CompanionSide::Right, bounds)?.quiver)
}

/// The quiver of the `n`-preprojective component: `D(Q+)^op`, with the
/// relations `ρ̃⊥` restricted to it.
#[derive(Debug, Clone)]
pub struct ArQuiver {
    pub window: ZWindow,
    pub double_slice: DoubleSlice,
    pub quiver: BoundQuiver,
    /// Vertex ids of the copy of `Q`.
    pub slice_ids: Vec<String>,
    /// Vertex ids of the copy of the companion's quiver.
    pub complement_ids: Vec<String>,
}

pub fn ar_quiver(gamma: &BoundQuiver, bounds: &Bounds) -> Result<ArQuiver> {
    let Setting { window, slice, .. } = setting(gamma, bounds)?;
    let d = double_slice(&window, &slice, Direction::Forward)?;
    let quiver = relabel(&window, &d.vertices, Side::TauPerp)?.opposite()?;
    let slice_ids = d.slice.iter().map(|&v| window.node_id(v)).collect();
    let complement_ids = d.complement.iter().map(|&v| window.node_id(v)).collect();
    Ok(ArQuiver {
        window,
        double_slice: d,
        quiver,
        slice_ids,
        complement_ids,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn auslander_companion_is_a4() {
        let c = companion(&fixtures::a4_auslander_gamma(), CompanionSide::Right, &Bounds::default()).unwrap();
        assert_eq!(c.coxeter_index, 2);
        assert_eq!(c.q(), 1);
        assert_eq!(c.quiver.vertex_count(), 4);
        assert_eq!(c.quiver.arrows().len(), 3);
        assert!(c.quiver.relations().is_empty());
        let ids: Vec<String> = c.companion_slice.iter().map(|&v| c.window.label(v)).collect();
        assert_eq!(ids, ["(1,0)", "(2,1)", "(4,2)", "(1,3)"]);
    }

    #[test]
    fn a2_ar_quiver_has_three_vertices() {
        let ar = ar_quiver(&fixtures::linear_a(2), &Bounds::default()).unwrap();
        assert_eq!(ar.quiver.vertex_count(), 3);
        assert_eq!(ar.slice_ids.len(), 2);
    }
}
