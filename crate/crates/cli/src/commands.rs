//! Argument definitions and the command implementations.

use std::io::Read;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use qslice::io::{quiver_dot, window_dot, Highlight, Metadata, QuiverDocument};
use qslice::zquiver::{
    ar_quiver, build_window, companion, double_slice, hammock, is_complete_slice, mutate_slice, CompanionSide,
    Direction, MutationDir, Side, WindowKind, ZBase, ZWindow,
};
use qslice::{fixtures, BoundQuiver, Bounds, GradedAutomorphism, GradedAlgebraView};
use serde_json::{json, Value};

use crate::views::{
    labels, side_name, ClassificationView, DoubleSliceView, HammockView, KoszulView, SliceView, WindowView,
};

#[derive(Debug, Parser)]
#[command(name = "qslice", version, about = "Quadratic duals, Koszul certification and Z-quiver slices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Bound overrides such as `hom=12,deg=24,paths=100000,module=6000`.
    #[arg(long, global = true, env = "QSLICE_BOUNDS")]
    pub bounds: Option<String>,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Quiver document path, `-` for stdin, or `fixture:NAME`.
    pub input: String,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    /// `zv` (first grading) or `zn` (second grading).
    #[arg(long, default_value = "zv")]
    pub kind: String,
    /// Level range `lo..hi`.
    #[arg(long, default_value = "-6..10", allow_hyphen_values = true)]
    pub range: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quadratic dual `Q^{!}`.
    Dual(Input),
    /// Trivial extension `Δ_σΛ` of the input, presented by `Q̃`.
    Tilde {
        #[command(flatten)]
        input: Input,
        /// `id`, `eps^m` or `nu`.
        #[arg(long, default_value = "nu")]
        twist: String,
    },
    /// Preprojective algebra `Π(Γ)`.
    Pi(Input),
    /// Minimal resolution of the trivial extension and its Koszul type.
    Resolve {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        hom_bound: Option<usize>,
        #[arg(long)]
        deg_bound: Option<usize>,
    },
    /// Finite, tame or wild.
    Classify(Input),
    /// A window of `Z_v Q̃` or `Z|_{n-1} Q`.
    Zwindow {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Whether a vertex set is a complete slice.
    SliceCheck {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        window: WindowArgs,
        /// Vertices such as `(1,0),(2,1)`.
        #[arg(long)]
        slice: String,
        /// `tau` or `perp`.
        #[arg(long, default_value = "tau")]
        side: String,
    },
    /// Mutate a slice at a source (`+`) or sink (`-`).
    Mutate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        slice: String,
        #[arg(long)]
        vertex: String,
        #[arg(long, allow_hyphen_values = true)]
        dir: String,
        #[arg(long, default_value = "tau")]
        side: String,
    },
    /// The `τ⊥`-hammock starting (forward) or ending (backward) at a vertex.
    Hammock {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        vertex: String,
        #[arg(long, default_value = "forward")]
        dir: String,
    },
    /// `D(S+)` (forward) or `D(-S)` (backward) of a complete `τ`-slice.
    DoubleSlice {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long)]
        slice: String,
        #[arg(long, default_value = "forward")]
        dir: String,
    },
    /// Companion `Γ^c` of an n-slice algebra of finite type.
    Companion {
        #[command(flatten)]
        input: Input,
        /// Left companion instead of the right one.
        #[arg(long)]
        left: bool,
    },
    /// Quiver of the preprojective component, `D(Q+)^op`.
    ArQuiver(Input),
    /// DOT rendering of the input quiver, or of a window with `--range`.
    Dot {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "zv")]
        kind: String,
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
        /// Vertex sets to shade, one per flag.
        #[arg(long)]
        highlight: Vec<String>,
    },
    /// JSON session API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

/// Result of a command: text and JSON forms, and whether it refutes the
/// property asked about.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub refuted: bool,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            refuted: false,
        }
    }

    /// Quiver results print the document itself so they can be piped.
    fn quiver(q: &BoundQuiver, metadata: Option<Metadata>) -> Self {
        let doc = QuiverDocument::from_quiver(q, metadata);
        let mut text = doc.to_json();
        text.push('\n');
        Output::new(text, serde_json::to_value(&doc).expect("documents serialize"))
    }
}

pub fn bounds(overrides: Option<&str>) -> anyhow::Result<Bounds> {
    match overrides {
        Some(text) => Ok(Bounds::default().parse_overrides(text)?),
        None => Ok(Bounds::default()),
    }
}

/// Named quivers accepted as `fixture:NAME` and by the session API.
pub fn named_fixture(name: &str) -> Option<BoundQuiver> {
    match name {
        "a4-auslander" => Some(fixtures::a4_auslander_gamma()),
        "a4-auslander-dual" => Some(fixtures::a4_auslander_lambda()),
        "kronecker" => Some(fixtures::kronecker(2)),
        "kronecker-3" => Some(fixtures::kronecker(3)),
        "point" => Some(fixtures::point()),
        _ => {
            let n: usize = name.strip_prefix('a')?.parse().ok()?;
            (n >= 1).then(|| fixtures::linear_a(n))
        }
    }
}

pub fn load_input(source: &str) -> anyhow::Result<BoundQuiver> {
    if let Some(name) = source.strip_prefix("fixture:") {
        return named_fixture(name).ok_or_else(|| anyhow!("unknown fixture `{name}`"));
    }
    let text = if source == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        s
    } else {
        std::fs::read_to_string(source).with_context(|| format!("reading {source}"))?
    };
    Ok(qslice::io::load_quiver(&text)?)
}

pub fn parse_range(text: &str) -> anyhow::Result<(i64, i64)> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| anyhow!("expected a range lo..hi, got `{text}`"))?;
    let lo = lo.trim().parse().with_context(|| format!("bad lower bound in `{text}`"))?;
    let hi = hi.trim().parse().with_context(|| format!("bad upper bound in `{text}`"))?;
    Ok((lo, hi))
}

pub fn make_window(gamma: &BoundQuiver, kind: &str, range: &str, bounds: &Bounds) -> anyhow::Result<ZWindow> {
    let kind = WindowKind::parse(kind)?;
    let (lo, hi) = parse_range(range)?;
    let base = Arc::new(ZBase::from_gamma(gamma, bounds)?);
    Ok(build_window(base, kind, lo, hi)?)
}

fn twist(lambda: &BoundQuiver, text: &str, bounds: &Bounds) -> anyhow::Result<GradedAutomorphism> {
    let text = text.trim();
    if text == "id" {
        return Ok(GradedAutomorphism::identity(lambda));
    }
    if text == "nu" {
        let view = GradedAlgebraView::with_cap(Arc::new(lambda.clone()), bounds.path_cap);
        let n = qslice::graded::check_properly_graded(&view, bounds.degree)?;
        return Ok(GradedAutomorphism::nu(lambda, n));
    }
    if let Some(m) = text.strip_prefix("eps^").or_else(|| text.strip_prefix("eps")) {
        let m: u32 = if m.is_empty() { 1 } else { m.parse().with_context(|| format!("bad exponent in `{text}`"))? };
        return Ok(GradedAutomorphism::eps(lambda, m));
    }
    bail!("unknown twist `{text}`; expected id, eps^m or nu")
}

fn summary(q: &BoundQuiver) -> String {
    if q.relations().is_empty() {
        "no relations".into()
    } else {
        q.relations().iter().map(|r| q.relation_text(r)).collect::<Vec<_>>().join(", ")
    }
}

fn note(name: &str, notes: String) -> Option<Metadata> {
    Some(Metadata {
        name: Some(name.into()),
        n: None,
        notes: Some(notes),
    })
}

pub fn run(cli: &Cli) -> anyhow::Result<Output> {
    let b = bounds(cli.bounds.as_deref())?;
    match &cli.command {
        Command::Dual(i) => {
            let q = load_input(&i.input)?;
            let d = qslice::quadratic_dual(&q)?;
            let notes = format!("ρ⊥ = {}", if d.relations().is_empty() { "∅".into() } else { summary(&d) });
            Ok(Output::quiver(&d, note("quadratic dual", notes)))
        }
        Command::Tilde { input, twist: t } => {
            let lambda = load_input(&input.input)?;
            let sigma = twist(&lambda, t, &b)?;
            let ext = qslice::build_trivial_extension(&lambda, &sigma, &b)?;
            let meta = Metadata {
                name: Some("trivial extension".into()),
                n: Some(ext.n),
                notes: Some(format!("dim {} = 2 x {}", ext.dim(), ext.lambda_dim())),
            };
            Ok(Output::quiver(&ext.tilde, Some(meta)))
        }
        Command::Pi(i) => {
            let gamma = load_input(&i.input)?;
            let pre = qslice::preprojective_algebra(&gamma, &b)?;
            Ok(Output::quiver(&pre.quiver, note("preprojective algebra", summary(&pre.quiver))))
        }
        Command::Resolve {
            input,
            hom_bound,
            deg_bound,
        } => {
            let gamma = load_input(&input.input)?;
            let mut rb = b;
            if let Some(h) = hom_bound {
                rb.hom = *h;
            }
            if let Some(d) = deg_bound {
                rb.degree = *d;
            }
            let cert = qslice::n_slice_certify(&gamma, &rb)?;
            let view = KoszulView::new(&cert.koszul);
            let text = format!("n = {}\n{}", cert.n, view.text());
            Ok(Output::new(text, json!({ "n": cert.n, "koszul": view })))
        }
        Command::Classify(i) => {
            let gamma = load_input(&i.input)?;
            let report = qslice::classify(&gamma, &b)?;
            let view = ClassificationView::new(&report);
            Ok(Output::new(format!("{}\n", view.verdict), serde_json::to_value(&view)?))
        }
        Command::Zwindow { input, window } => {
            let gamma = load_input(&input.input)?;
            let w = make_window(&gamma, &window.kind, &window.range, &b)?;
            let view = WindowView::new(&w);
            Ok(Output::new(view.text(), serde_json::to_value(&view)?))
        }
        Command::SliceCheck {
            input,
            window,
            slice,
            side,
        } => {
            let gamma = load_input(&input.input)?;
            let w = make_window(&gamma, &window.kind, &window.range, &b)?;
            let side = Side::parse(side)?;
            let set = w.parse_vertices(slice)?;
            let verdict = is_complete_slice(&w, &set, side)?;
            let view = SliceView::new(&w, side, &set, &verdict);
            let text = match &verdict.witness {
                None => format!("complete {}-slice of {} vertices\n", side_name(side), set.len()),
                Some(why) => format!("not a complete {}-slice: {why}\n", side_name(side)),
            };
            Ok(Output {
                refuted: !verdict.complete,
                ..Output::new(text, serde_json::to_value(&view)?)
            })
        }
        Command::Mutate {
            input,
            window,
            slice,
            vertex,
            dir,
            side,
        } => {
            let gamma = load_input(&input.input)?;
            let w = make_window(&gamma, &window.kind, &window.range, &b)?;
            let side = Side::parse(side)?;
            let set = w.parse_vertices(slice)?;
            let v = w.parse_vertex(vertex)?;
            let dir = MutationDir::parse(dir)?;
            let next = mutate_slice(&w, &set, v, dir, side)?;
            let verdict = is_complete_slice(&w, &next, side)?;
            let view = SliceView::new(&w, side, &next, &verdict);
            Ok(Output::new(format!("{}\n", labels(&w, &next).join(",")), serde_json::to_value(&view)?))
        }
        Command::Hammock {
            input,
            window,
            vertex,
            dir,
        } => {
            let gamma = load_input(&input.input)?;
            let w = make_window(&gamma, &window.kind, &window.range, &b)?;
            let v = w.parse_vertex(vertex)?;
            let h = hammock(&w, v, Direction::parse(dir)?)?;
            let view = HammockView::new(&w, &h);
            Ok(Output::new(view.text(), serde_json::to_value(&view)?))
        }
        Command::DoubleSlice {
            input,
            window,
            slice,
            dir,
        } => {
            let gamma = load_input(&input.input)?;
            let w = make_window(&gamma, &window.kind, &window.range, &b)?;
            let set = w.parse_vertices(slice)?;
            let d = double_slice(&w, &set, Direction::parse(dir)?)?;
            let view = DoubleSliceView::new(&w, &d);
            Ok(Output::new(view.text(), serde_json::to_value(&view)?))
        }
        Command::Companion { input, left } => {
            let gamma = load_input(&input.input)?;
            let side = if *left { CompanionSide::Left } else { CompanionSide::Right };
            let c = companion(&gamma, side, &b)?;
            let meta = Metadata {
                name: Some(format!("{side:?} companion").to_lowercase()),
                n: Some(c.q()),
                notes: Some(format!(
                    "slice {{{}}} of Z_v Q̃; Coxeter index {}",
                    labels(&c.window, &c.companion_slice).join(","),
                    c.coxeter_index
                )),
            };
            Ok(Output::quiver(&c.quiver, Some(meta)))
        }
        Command::ArQuiver(i) => {
            let gamma = load_input(&i.input)?;
            let ar = ar_quiver(&gamma, &b)?;
            let meta = Metadata {
                name: Some("preprojective component".into()),
                n: None,
                notes: Some(format!(
                    "Q = {{{}}}; companion = {{{}}}",
                    ar.slice_ids.join(","),
                    ar.complement_ids.join(",")
                )),
            };
            Ok(Output::quiver(&ar.quiver, Some(meta)))
        }
        Command::Dot {
            input,
            kind,
            range,
            highlight,
        } => {
            let gamma = load_input(&input.input)?;
            let text = match range {
                None => quiver_dot(&gamma, "quiver"),
                Some(r) => {
                    let w = make_window(&gamma, kind, r, &b)?;
                    const COLORS: [&str; 4] = ["lightblue", "orange", "palegreen", "pink"];
                    let sets = highlight
                        .iter()
                        .enumerate()
                        .map(|(k, h)| {
                            Ok(Highlight {
                                name: format!("set {}", k + 1),
                                color: COLORS[k % COLORS.len()].into(),
                                vertices: w.parse_vertices(h)?,
                            })
                        })
                        .collect::<qslice::Result<Vec<_>>>()?;
                    window_dot(&w, &sets)
                }
            };
            Ok(Output::new(text.clone(), json!({ "dot": text })))
        }
        Command::Serve { .. } => bail!("serve is handled by the binary"),
    }
}

/// Exit code for an error: 2 when it refutes a mathematical property, 1
/// otherwise.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    match e.downcast_ref::<qslice::Error>() {
        Some(q) if q.is_refutation() => 2,
        _ => 1,
    }
}

