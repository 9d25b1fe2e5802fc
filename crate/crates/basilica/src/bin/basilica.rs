//! Command-line surface over the library: exact map algebra, lamination and
//! partition data, tree actions, approximation, ray tracing, and figures.
//!
//! Outputs are machine readable: angles as `p/q`, maps in the `plmap v1`
//! format, reports as JSON (`report v1`). Domain errors print their name on
//! stderr and exit 1; argument errors exit 2.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::json;

use basilica::approx::{
    approximate_with_steps, distortion_estimate, sup_distance, TargetOracle, DEFAULT_SEED,
    DEFAULT_SNAP_LEVEL,
};
use basilica::circle::Angle;
use basilica::geometry::{trace_ray, DEFAULT_RAY_STEPS, DEFAULT_RAY_TOL};
use basilica::group::{
    act_on_component, decompose_to_word, extend_inner_to_outer, inner_word_to_map,
    transitivity_element, word_to_map, ComponentAddress, GroupWord,
};
use basilica::lamination::{build_lamination, partition, preserves_lamination};
use basilica::plmap::{piecewise_dynamical_decomposition, PLCircleMap};
use basilica::render::{render_png, render_svg, Layer, RenderSpec};

#[derive(Parser)]
#[command(name = "basilica", version, about = "Exact arithmetic for the extended Thompson group of basilica quasisymmetries")]
struct Cli {
    /// Seed for randomized estimators; echoed into JSON reports.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a map at an angle (word maps act on the outer circle unless --inner).
    Eval {
        /// Word over A B C iota, e.g. "A B^-1 iota".
        #[arg(long, conflicts_with = "map")]
        word: Option<String>,
        /// Path to a plmap v1 file.
        #[arg(long)]
        map: Option<PathBuf>,
        /// Angle "p/q".
        #[arg(long)]
        angle: String,
        /// Interpret an iota-free word as an inner Thompson element.
        #[arg(long)]
        inner: bool,
    },
    /// Compose a plmap file with another map and emit plmap v1.
    Compose {
        map: PathBuf,
        /// "identity", "word:<letters>", or a plmap file path.
        #[arg(long)]
        with: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invert a plmap file.
    Invert {
        map: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pseudo-group decomposition of a Thompson(-like) map (JSON).
    Decompose {
        #[arg(long, conflicts_with = "map")]
        word: Option<String>,
        #[arg(long)]
        map: Option<PathBuf>,
        /// Decompose the inner map of an iota-free word instead of its extension.
        #[arg(long)]
        inner: bool,
    },
    /// Extend an inner Thompson element to the outer circle (plmap v1).
    Extend {
        #[arg(long, conflicts_with = "map")]
        word: Option<String>,
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Membership report: class, lamination preservation, word decomposition (JSON).
    Check {
        #[arg(long, conflicts_with = "map")]
        word: Option<String>,
        #[arg(long)]
        map: Option<PathBuf>,
        /// Include the recovered word in the report.
        #[arg(long)]
        emit_word: bool,
    },
    /// Image of a component address under a word's map.
    Act {
        #[arg(long)]
        word: String,
        /// Address like "()", "(0)", "(0, 1/2)".
        #[arg(long)]
        address: String,
    },
    /// Transitivity element taking an address to the central component (JSON).
    Transit {
        #[arg(long)]
        address: String,
    },
    /// Approximate a target on D_n and emit plmap v1 (optionally a JSON report).
    Approximate {
        /// "word:<letters>" or a plmap file path.
        #[arg(long)]
        target: String,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit a JSON report ("json").
        #[arg(long)]
        report: Option<String>,
    },
    /// Lamination leaves by level, as JSON or SVG.
    Lamination {
        #[arg(long)]
        depth: u32,
        #[arg(long, default_value = "json")]
        format: String,
        /// Draw chords as hyperbolic geodesics (SVG only).
        #[arg(long)]
        hyperbolic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The 2^{n+1} partition arcs of level n with case tags (JSON).
    Partition {
        #[arg(long)]
        level: u32,
    },
    /// Trace an external ray to its landing point (JSON).
    Ray {
        #[arg(long)]
        angle: String,
        #[arg(long, default_value_t = DEFAULT_RAY_STEPS)]
        steps: u32,
        #[arg(long, default_value_t = DEFAULT_RAY_TOL)]
        tol: f64,
    },
    /// Render figures with overlays to SVG or PNG.
    Render {
        /// View rectangle "x0,y0,x1,y1".
        #[arg(long)]
        view: Option<String>,
        /// Resolution "WxH".
        #[arg(long)]
        px: Option<String>,
        #[arg(long, default_value_t = 200)]
        iters: u32,
        /// Comma-separated: filled, rays[:n], partition:n, lamination:n, action:<word>
        /// (word letters inside action may be separated by '.' or spaces).
        #[arg(long, default_value = "filled")]
        layers: String,
        #[arg(long)]
        hyperbolic: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::FAILURE
        }
    }
}

type Failure = Box<dyn std::error::Error>;

fn read_map(path: &Path) -> Result<PLCircleMap, Failure> {
    let text = std::fs::read_to_string(path)?;
    Ok(PLCircleMap::from_plmap_v1(&text)?)
}

fn resolve_map(
    word: &Option<String>,
    map: &Option<PathBuf>,
    inner: bool,
) -> Result<PLCircleMap, Failure> {
    match (word, map) {
        (Some(w), None) => {
            let word: GroupWord = w.parse()?;
            Ok(if inner {
                inner_word_to_map(&word)?
            } else {
                word_to_map(&word)
            })
        }
        (None, Some(p)) => read_map(p),
        _ => Err("expected exactly one of --word or --map".into()),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn ratio_str(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval {
            word,
            map,
            angle,
            inner,
        } => {
            let m = resolve_map(&word, &map, inner)?;
            let a: Angle = angle.parse()?;
            println!("{}", m.evaluate(&a));
        }
        Command::Compose { map, with, out } => {
            let lhs = read_map(&map)?;
            let rhs = if with == "identity" {
                PLCircleMap::identity()
            } else if let Some(w) = with.strip_prefix("word:") {
                word_to_map(&w.parse::<GroupWord>()?)
            } else {
                read_map(Path::new(&with))?
            };
            emit(&out, &lhs.compose(&rhs).to_plmap_v1())?;
        }
        Command::Invert { map, out } => {
            emit(&out, &read_map(&map)?.invert().to_plmap_v1())?;
        }
        Command::Decompose { word, map, inner } => {
            let m = resolve_map(&word, &map, inner)?;
            let pieces = piecewise_dynamical_decomposition(&m)?;
            let items: Vec<_> = pieces
                .iter()
                .map(|p| {
                    json!({
                        "start": p.segment.start.to_string(),
                        "length": ratio_str(&p.segment.length),
                        "forward": p.branch.forward,
                        "backward": p.branch.backward,
                        "anchor": p.branch.anchor.to_string(),
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "schema": "report v1",
                    "pieces": items,
                }))?
            );
        }
        Command::Extend { word, map, out } => {
            let m = resolve_map(&word, &map, true)?;
            emit(&out, &extend_inner_to_outer(&m)?.to_plmap_v1())?;
        }
        Command::Check {
            word,
            map,
            emit_word,
        } => {
            let m = resolve_map(&word, &map, false)?;
            let class = m.membership_class();
            let max_level = m
                .nodes()
                .iter()
                .flat_map(|(b, v)| [b, v])
                .filter_map(|a| a.d_infinity_level().or(a.dyadic_level()))
                .max()
                .unwrap_or(0);
            let preserving = preserves_lamination(&m, max_level + 2);
            let decomposition = decompose_to_word(&m);
            let mut report = json!({
                "schema": "report v1",
                "class": class.to_string(),
                "lamination_preserving": preserving,
                "member": decomposition.is_ok(),
            });
            if emit_word {
                if let Ok(w) = &decomposition {
                    report["word"] = json!(w.to_string());
                }
            }
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Act { word, address } => {
            let m = word_to_map(&word.parse::<GroupWord>()?);
            let addr: ComponentAddress = address.parse()?;
            println!("{}", act_on_component(&m, &addr)?);
        }
        Command::Transit { address } => {
            let addr: ComponentAddress = address.parse()?;
            let (word, bookkeeping) = transitivity_element(&addr)?;
            let rotations: serde_json::Map<String, serde_json::Value> = bookkeeping
                .0
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v.to_string())))
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "schema": "report v1",
                    "address": addr.to_string(),
                    "word": word.to_string(),
                    "bookkeeping": rotations,
                }))?
            );
        }
        Command::Approximate {
            target,
            level,
            out,
            report,
        } => {
            let oracle = if let Some(w) = target.strip_prefix("word:") {
                TargetOracle::from_word(&w.parse::<GroupWord>()?)
            } else {
                TargetOracle::from_map(read_map(Path::new(&target))?)
            };
            let (m, steps) = approximate_with_steps(&oracle, level, DEFAULT_SNAP_LEVEL)?;
            emit(&out, &m.to_plmap_v1())?;
            if report.as_deref() == Some("json") {
                let sup = sup_distance(&m, &oracle, 10_000);
                let scales: Vec<BigRational> = (1..=10)
                    .map(|k| BigRational::new(BigInt::from(1), BigInt::from(1) << k))
                    .collect();
                let distortion =
                    distortion_estimate(|a| m.evaluate(a), 1000, &scales, cli.seed);
                let steps_json: Vec<_> = steps
                    .iter()
                    .map(|s| {
                        json!({
                            "arc": [s.arc.start().to_string(), s.arc.end().to_string()],
                            "forward": s.forward,
                            "backward": s.backward,
                            "bridge_nodes": s.bridge_nodes,
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "schema": "report v1",
                        "seed": cli.seed,
                        "level": level,
                        "nodes": m.nodes().len(),
                        "sup_distance": sup.to_f64(),
                        "sup_distance_exact": ratio_str(&sup),
                        "distortion": {
                            "samples": distortion.samples,
                            "max_ratio": distortion.max_ratio,
                        },
                        "steps": steps_json,
                    }))?
                );
            }
        }
        Command::Lamination {
            depth,
            format,
            hyperbolic,
            out,
        } => match format.as_str() {
            "json" => {
                let lam = build_lamination(depth)?;
                let levels: Vec<Vec<[String; 2]>> = (0..=depth)
                    .map(|k| {
                        lam.level(k)
                            .iter()
                            .map(|leaf| [leaf.small().to_string(), leaf.big().to_string()])
                            .collect()
                    })
                    .collect();
                let text = serde_json::to_string_pretty(&json!({
                    "schema": "report v1",
                    "depth": depth,
                    "levels": levels,
                }))?;
                emit(&out, &format!("{text}\n"))?;
            }
            "svg" => {
                let mut spec = RenderSpec::disk(640);
                spec.layers = vec![Layer::Lamination(depth)];
                spec.hyperbolic = hyperbolic;
                emit(&out, &render_svg(&spec)?)?;
            }
            other => return Err(format!("unknown format {other:?} (json|svg)").into()),
        },
        Command::Partition { level } => {
            let arcs = partition(level)?;
            let items: Vec<_> = arcs
                .iter()
                .map(|p| {
                    json!({
                        "start": p.arc.start().to_string(),
                        "end": p.arc.end().to_string(),
                        "case": match p.case {
                            basilica::lamination::ArcCase::LimbArc => "LimbArc",
                            basilica::lamination::ArcCase::SpanArc => "SpanArc",
                        },
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "schema": "report v1",
                    "level": level,
                    "arcs": items,
                }))?
            );
        }
        Command::Ray { angle, steps, tol } => {
            let theta: Angle = angle.parse()?;
            let trace = trace_ray(&theta, steps, tol)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "schema": "report v1",
                    "angle": theta.to_string(),
                    "landing": { "re": trace.landing.re, "im": trace.landing.im },
                    "residual": trace.residual,
                    "points": trace.points.len(),
                }))?
            );
        }
        Command::Render {
            view,
            px,
            iters,
            layers,
            hyperbolic,
            out,
        } => {
            let mut spec = RenderSpec {
                max_iter: iters,
                hyperbolic,
                ..RenderSpec::default()
            };
            if let Some(v) = view {
                let parts: Vec<f64> = v
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<Result<_, _>>()?;
                if parts.len() != 4 {
                    return Err("--view expects x0,y0,x1,y1".into());
                }
                spec.view = (parts[0], parts[1], parts[2], parts[3]);
            }
            if let Some(p) = px {
                let (w, h) = p.split_once('x').ok_or("--px expects WxH")?;
                spec.width = w.trim().parse()?;
                spec.height = h.trim().parse()?;
            }
            spec.layers = parse_layers(&layers)?;
            let is_svg = out
                .extension()
                .map(|e| e.eq_ignore_ascii_case("svg"))
                .unwrap_or(false);
            if is_svg {
                std::fs::write(&out, render_svg(&spec)?)?;
            } else {
                std::fs::write(&out, render_png(&spec)?)?;
            }
        }
    }
    Ok(())
}

fn parse_layers(text: &str) -> Result<Vec<Layer>, Failure> {
    let mut layers = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, arg) = match part.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (part, None),
        };
        let layer = match name {
            "filled" => Layer::Filled,
            "rays" => Layer::Rays(arg.map(|a| a.parse()).transpose()?.unwrap_or(3)),
            "partition" => Layer::Partition(arg.ok_or("partition needs :n")?.parse()?),
            "lamination" => Layer::Lamination(arg.ok_or("lamination needs :n")?.parse()?),
            "action" => {
                let word_text = arg.ok_or("action needs :<word>")?.replace('.', " ");
                Layer::Action(word_text.parse::<GroupWord>()?)
            }
            other => return Err(format!("unknown layer {other:?}").into()),
        };
        layers.push(layer);
    }
    Ok(layers)
}
