//! Minimal graded resolutions, Koszul type, Loewy matrices, spectral radii
//! and the finite/tame/wild verdict.

mod classify;
mod loewy;
mod resolution;
mod spectral;

pub use classify::{classify, ClassificationReport, Verdict};
pub use loewy::LoewyMatrix;
pub use resolution::{
    koszul_type, minimal_resolution, KoszulOutcome, KoszulReport, Resolution, ResolutionStep,
    StopReason,
};
pub use spectral::{characteristic_polynomial, spectral_radius, Polynomial, SpectralRadius};

/// Limits shared by every bounded computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Homological steps of a resolution.
    pub hom: usize,
    /// Internal degree up to which modules are computed.
    pub degree: usize,
    /// Paths enumerated per degree.
    pub path_cap: usize,
    /// Total dimension of one projective term before a resolution stops.
    pub module_cap: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            hom: 12,
            degree: 24,
            path_cap: crate::graded::DEFAULT_PATH_CAP,
            module_cap: 6_000,
        }
    }
}

impl Bounds {
    pub fn new(hom: usize, degree: usize) -> Self {
        Bounds {
            hom,
            degree,
            ..Bounds::default()
        }
    }

    /// Parses overrides such as `hom=12,deg=24,paths=100000,module=5000`.
    pub fn parse_overrides(&self, text: &str) -> crate::Result<Bounds> {
        let mut b = *self;
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| crate::Error::Parse(format!("expected key=value in `{part}`")))?;
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| crate::Error::Parse(format!("bad number in `{part}`")))?;
            match k.trim() {
                "hom" => b.hom = v,
                "deg" | "degree" => b.degree = v,
                "paths" => b.path_cap = v,
                "module" => b.module_cap = v,
                other => return Err(crate::Error::Parse(format!("unknown bound `{other}`"))),
            }
        }
        Ok(b)
    }
}

/// Default tolerance for the tame test `|ρ - 1| ≤ tol`.
pub const TAME_TOLERANCE: f64 = 1e-6;
