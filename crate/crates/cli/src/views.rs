//! JSON views of core values. Vertices are written as `(i,t)` labels and
//! window nodes as `i@t` ids.

use std::collections::BTreeSet;

use qslice::homology::{KoszulOutcome, KoszulReport};
use qslice::zquiver::{DoubleSlice, Hammock, Side, SliceVerdict, ZVertex, ZWindow};
use qslice::ClassificationReport;
use serde::Serialize;

pub fn labels(w: &ZWindow, set: &BTreeSet<ZVertex>) -> Vec<String> {
    set.iter().map(|&v| w.label(v)).collect()
}

pub fn side_name(side: Side) -> &'static str {
    match side {
        Side::Tau => "tau",
        Side::TauPerp => "tau-perp",
    }
}

#[derive(Debug, Serialize)]
pub struct VertexView {
    pub id: String,
    pub label: String,
    pub vertex: String,
    pub level: i64,
    /// `piece:residue`.
    pub component: String,
}

#[derive(Debug, Serialize)]
pub struct ArrowView {
    pub id: String,
    pub source: String,
    pub target: String,
    pub returning: bool,
}

#[derive(Debug, Serialize)]
pub struct WindowView {
    pub kind: String,
    pub range: [i64; 2],
    pub components: usize,
    pub vertices: Vec<VertexView>,
    pub arrows: Vec<ArrowView>,
}

impl WindowView {
    pub fn new(w: &ZWindow) -> Self {
        let tilde = w.base().tilde();
        let (lo, hi) = w.range();
        let vertices = w
            .vertices()
            .iter()
            .map(|&v| {
                let c = w.component(v);
                VertexView {
                    id: w.node_id(v),
                    label: w.label(v),
                    vertex: tilde.vertex_id(v.vertex).to_string(),
                    level: v.level,
                    component: format!("{}:{}", c.piece, c.residue),
                }
            })
            .collect();
        let arrows = w
            .arrows()
            .iter()
            .map(|a| ArrowView {
                id: w.arrow_label(a),
                source: w.node_id(a.source),
                target: w.node_id(a.target),
                returning: tilde.arrow(a.arrow).bidegree.1 != 0,
            })
            .collect();
        WindowView {
            kind: format!("{:?}", w.kind()),
            range: [lo, hi],
            components: w.component_vertices().len(),
            vertices,
            arrows,
        }
    }

    pub fn text(&self) -> String {
        let mut out = format!(
            "window {} levels {}..{}: {} vertices, {} arrows, {} components\n",
            self.kind,
            self.range[0],
            self.range[1],
            self.vertices.len(),
            self.arrows.len(),
            self.components
        );
        for level in self.range[0]..=self.range[1] {
            let row: Vec<&str> = self
                .vertices
                .iter()
                .filter(|v| v.level == level)
                .map(|v| v.label.as_str())
                .collect();
            out.push_str(&format!("{level:>4}: {}\n", row.join(" ")));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct SliceView {
    pub side: &'static str,
    pub complete: bool,
    pub witness: Option<String>,
    pub vertices: Vec<String>,
    pub sources: Vec<String>,
    pub sinks: Vec<String>,
}

impl SliceView {
    pub fn new(w: &ZWindow, side: Side, set: &BTreeSet<ZVertex>, verdict: &SliceVerdict) -> Self {
        let list = |vs: Vec<ZVertex>| vs.into_iter().map(|v| w.label(v)).collect();
        SliceView {
            side: side_name(side),
            complete: verdict.complete,
            witness: verdict.witness.clone(),
            vertices: labels(w, set),
            sources: list(w.sources_of(set)),
            sinks: list(w.sinks_of(set)),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct EntryView {
    pub vertex: String,
    pub multiplicity: usize,
}

#[derive(Debug, Serialize)]
pub struct HammockView {
    pub anchor: String,
    pub direction: String,
    pub terminal: String,
    pub entries: Vec<EntryView>,
}

impl HammockView {
    pub fn new(w: &ZWindow, h: &Hammock) -> Self {
        HammockView {
            anchor: w.label(h.anchor),
            direction: format!("{:?}", h.direction).to_lowercase(),
            terminal: w.label(h.terminal),
            entries: h
                .entries
                .iter()
                .map(|(&v, &m)| EntryView {
                    vertex: w.label(v),
                    multiplicity: m,
                })
                .collect(),
        }
    }

    pub fn text(&self) -> String {
        let entries: Vec<String> = self
            .entries
            .iter()
            .map(|e| {
                if e.multiplicity == 1 {
                    e.vertex.clone()
                } else {
                    format!("{}x{}", e.multiplicity, e.vertex)
                }
            })
            .collect();
        format!(
            "hammock {} {} -> {}: {}\n",
            self.direction,
            self.anchor,
            self.terminal,
            entries.join(" ")
        )
    }
}

#[derive(Debug, Serialize)]
pub struct DoubleSliceView {
    pub direction: String,
    pub vertices: Vec<String>,
    pub slice: Vec<String>,
    pub complement: Vec<String>,
}

impl DoubleSliceView {
    pub fn new(w: &ZWindow, d: &DoubleSlice) -> Self {
        DoubleSliceView {
            direction: format!("{:?}", d.direction).to_lowercase(),
            vertices: labels(w, &d.vertices),
            slice: labels(w, &d.slice),
            complement: labels(w, &d.complement),
        }
    }

    pub fn text(&self) -> String {
        format!(
            "double slice ({}), {} vertices: {}\n  slice: {}\n  complement: {}\n",
            self.direction,
            self.vertices.len(),
            self.vertices.join(" "),
            self.slice.join(" "),
            self.complement.join(" ")
        )
    }
}

#[derive(Debug, Serialize)]
pub struct StepView {
    pub index: usize,
    pub rank: usize,
    pub generator_degrees: Vec<usize>,
    pub linear: bool,
}

#[derive(Debug, Serialize)]
pub struct KoszulView {
    pub summary: String,
    pub p: usize,
    pub q: Option<usize>,
    pub linear_through: usize,
    pub outcome: String,
    pub hom_bound: usize,
    pub degree_bound: usize,
    pub steps: Vec<StepView>,
}

impl KoszulView {
    pub fn new(k: &KoszulReport) -> Self {
        KoszulView {
            summary: k.describe(),
            p: k.p,
            q: k.q(),
            linear_through: k.linear_through,
            outcome: match k.outcome {
                KoszulOutcome::Nonlinear { .. } => "nonlinear",
                KoszulOutcome::Terminated { .. } => "terminated",
                KoszulOutcome::LinearThrough { .. } => "linear-through",
            }
            .into(),
            hom_bound: k.hom_bound,
            degree_bound: k.degree_bound,
            steps: k
                .steps
                .iter()
                .map(|s| StepView {
                    index: s.index,
                    rank: s.rank(),
                    generator_degrees: s.generator_degrees().into_iter().collect(),
                    linear: s.is_linear(),
                })
                .collect(),
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&format!(
                "P^{}: rank {}, generators in degrees {:?}{}\n",
                s.index,
                s.rank,
                s.generator_degrees,
                if s.linear { "" } else { " (nonlinear)" }
            ));
        }
        out.push_str(&self.summary);
        out.push('\n');
        out
    }
}

#[derive(Debug, Serialize)]
pub struct ClassificationView {
    pub verdict: String,
    pub class: &'static str,
    pub coxeter_index: Option<usize>,
    pub n: usize,
    pub koszul: KoszulView,
    pub radius: Option<f64>,
    pub radius_error: Option<f64>,
    pub tolerance: f64,
    pub evidence: Vec<String>,
}

impl ClassificationView {
    pub fn new(r: &ClassificationReport) -> Self {
        use qslice::Verdict;
        let (class, coxeter_index) = match r.verdict {
            Verdict::Finite { coxeter_index } => ("finite", Some(coxeter_index)),
            Verdict::Tame => ("tame", None),
            Verdict::Wild => ("wild", None),
            Verdict::Inconclusive { .. } => ("inconclusive", None),
        };
        ClassificationView {
            verdict: r.verdict.to_string(),
            class,
            coxeter_index,
            n: r.n,
            koszul: KoszulView::new(&r.koszul),
            radius: r.radius.map(|x| x.value),
            radius_error: r.radius.map(|x| x.error),
            tolerance: r.tolerance,
            evidence: r.evidence.clone(),
        }
    }
}
