use serde::Serialize;

use super::{koszul_type, spectral_radius, Bounds, KoszulOutcome, KoszulReport, LoewyMatrix, SpectralRadius};
use crate::automorphism::GradedAutomorphism;
use crate::duality::quadratic_dual;
use crate::error::{Error, Result};
use crate::extension::{build_trivial_extension, TrivialExtension};
use crate::quiver::BoundQuiver;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Finite { coxeter_index: usize },
    Tame,
    Wild,
    Inconclusive { bound: usize },
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Finite { coxeter_index } => write!(f, "Finite, Coxeter index {coxeter_index}"),
            Verdict::Tame => write!(f, "Tame"),
            Verdict::Wild => write!(f, "Wild"),
            Verdict::Inconclusive { bound } => write!(f, "Inconclusive (linear through bound {bound})"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub n: usize,
    pub koszul: KoszulReport,
    pub loewy: LoewyMatrix,
    pub radius: Option<SpectralRadius>,
    pub tolerance: f64,
    pub evidence: Vec<String>,
}

/// Finite when the resolution of `Δ_νΛ` becomes nonlinear with a
/// concentrated kernel; otherwise the spectral radius of the Loewy matrix
/// separates tame from wild.
pub fn classify(gamma: &BoundQuiver, bounds: &Bounds) -> Result<ClassificationReport> {
    gamma.check_quadratic()?;
    gamma.check_acyclic()?;
    let lambda = quadratic_dual(gamma)?;
    let view = crate::graded::GradedAlgebraView::with_cap(
        std::sync::Arc::new(lambda.clone()),
        bounds.path_cap,
    );
    let n = crate::graded::check_properly_graded(&view, bounds.degree)?;
    let ext = build_trivial_extension(&lambda, &GradedAutomorphism::nu(&lambda, n), bounds)?;
    classify_extension(&ext, bounds, super::TAME_TOLERANCE)
}

pub fn classify_extension(
    ext: &TrivialExtension,
    bounds: &Bounds,
    tolerance: f64,
) -> Result<ClassificationReport> {
    let koszul = koszul_type(&ext.algebra, bounds)?;
    let loewy = LoewyMatrix::new(&ext.algebra, false);
    let radius = spectral_radius(&loewy.entries).ok();
    let mut evidence = vec![
        format!("n = {}", ext.n),
        format!("trivial extension: {}", koszul.describe()),
    ];
    if !ext.quadratic {
        evidence.push("degree-2 presentation of the trivial extension is not exact".into());
    }
    if let Some(r) = radius {
        evidence.push(format!("Loewy spectral radius {:.9} ± {:.1e}", r.value, r.error));
    }
    let verdict = match &koszul.outcome {
        KoszulOutcome::Nonlinear {
            q,
            concentrated: true,
            ..
        } => Verdict::Finite { coxeter_index: *q },
        KoszulOutcome::Nonlinear { q, .. } => {
            return Err(Error::NotSlice(format!(
                "resolution turns nonlinear after step {q} without a concentrated kernel"
            )))
        }
        KoszulOutcome::Terminated { .. } => {
            return Err(Error::NotSlice(
                "trivial extension has a finite resolution, so it is not self-injective".into(),
            ))
        }
        KoszulOutcome::LinearThrough { steps, .. } => match radius {
            Some(r) if (r.value - 1.0).abs() + r.error <= tolerance => Verdict::Tame,
            Some(r) if r.value - r.error > 1.0 + tolerance => Verdict::Wild,
            _ => Verdict::Inconclusive { bound: *steps },
        },
    };
    Ok(ClassificationReport {
        verdict,
        n: ext.n,
        koszul,
        loewy,
        radius,
        tolerance,
        evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn auslander_is_finite_of_index_two() {
        let r = classify(&fixtures::a4_auslander_gamma(), &Bounds::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Finite { coxeter_index: 2 });
        assert_eq!(r.koszul.p, 3);
    }

    #[test]
    fn kronecker_trichotomy() {
        let r = classify(&fixtures::kronecker(2), &Bounds::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Tame);
        let r = classify(&fixtures::kronecker(3), &Bounds::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Wild);
    }
}
