use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{
    parse_block_vector, parse_certificate, parse_complex, parse_graph, parse_morphism, parse_realizer,
    parse_report, serialize_block_vector, serialize_certificate, serialize_morphism, serialize_realizer,
    serialize_report, BlockVector, Document, IoError, RealizerDoc, Report,
};
use crate::blocks::{enumerate_vertex_blocks, is_pi_complex, BlockError, DEFAULT_BUDGET};
use crate::complex::{is_compatible_complex, is_essential, BranchedComplex, LinkPredicate};
use crate::lp::{fmt_rational, Rational, Sense};
use crate::origami::{certify_pi1_injective, verify_certificate};
use crate::pipeline::{build_cone, extremize_cone, ConeSystem, Extended, ExtremumReport, PipelineError};
use crate::serre_graph::stallings_fold;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "rcurv", version, about = "Exact curvature invariants of finite 2-complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a document of any kind and run its validators.
    Validate { file: PathBuf },
    /// Area, χ of the 1-skeleton, τ and κ of a complex.
    Kappa {
        /// Also print κ to K decimal places, on a comment line.
        #[arg(long, value_name = "K")]
        decimal: Option<usize>,
        file: PathBuf,
    },
    /// Extremal curvatures by linear programming.
    Invariant {
        #[arg(long, value_enum, default_value = "all")]
        which: Which,
        /// Link class `builtin:surface` or `builtin:irreducible`; replaces
        /// the classes behind ρ and σ, and `--which` then takes max|min|all.
        #[arg(long)]
        pi: Option<String>,
        #[arg(long)]
        emit_realizer: Option<PathBuf>,
        #[arg(long)]
        emit_certificate: Option<PathBuf>,
        #[arg(long, env = "RCURV_MAX_BLOCKS", default_value_t = DEFAULT_BUDGET)]
        max_blocks: u64,
        /// Also print finite values to K decimal places, on comment lines.
        #[arg(long, value_name = "K")]
        decimal: Option<usize>,
        file: PathBuf,
    },
    /// Enumerate vertex blocks and print per-vertex counts.
    Blocks {
        #[arg(long, default_value = "builtin:irreducible")]
        pi: String,
        /// Also print the canonical key of every block.
        #[arg(long)]
        dump: bool,
        #[arg(long, env = "RCURV_MAX_BLOCKS", default_value_t = DEFAULT_BUDGET)]
        max_blocks: u64,
        file: PathBuf,
    },
    /// Stallings-fold a graph morphism and print the immersion it factors through.
    FoldGraph { file: PathBuf },
    /// Print an origami certificate of π1-injectivity, or NOT_INJECTIVE.
    Certify { file: PathBuf },
    /// Re-check an origami certificate against a morphism.
    VerifyCertificate { morphism: PathBuf, certificate: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    #[value(name = "rho+")]
    RhoPlus,
    #[value(name = "rho-")]
    RhoMinus,
    #[value(name = "sigma+")]
    SigmaPlus,
    #[value(name = "sigma-")]
    SigmaMinus,
    All,
    Max,
    Min,
}

/// A failure with its exit code.
struct Failure(i32, String);

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure(EXIT_INVALID, e.to_string())
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match e {
            PipelineError::Block(BlockError::EnumerationBudgetExceeded { .. }) => EXIT_BUDGET,
            _ => EXIT_INVALID,
        };
        Failure(code, e.to_string())
    }
}

impl From<BlockError> for Failure {
    fn from(e: BlockError) -> Self {
        PipelineError::from(e).into()
    }
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
/// Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

/// Display only: `r` rounded half away from zero to `k` places.
fn fmt_decimal(r: &Rational, k: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), k);
    let (n, d) = (r.numer().abs() * &scale, r.denom().clone());
    let rounded: BigInt = (n * 2 + &d) / (d * 2);
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if k == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>k$}", frac.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(EXIT_INVALID, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(EXIT_INVALID, format!("{}: {e}", path.display())))
}

fn predicate(spec: &str) -> Result<LinkPredicate, Failure> {
    spec.strip_prefix("builtin:")
        .and_then(LinkPredicate::builtin)
        .ok_or_else(|| Failure(EXIT_INVALID, format!("unknown link class {spec:?}; use builtin:surface or builtin:irreducible")))
}

fn emit(w: &mut dyn Write, text: &str) -> Result<(), Failure> {
    w.write_all(text.as_bytes())
        .map_err(|e| Failure(EXIT_INVALID, format!("write failed: {e}")))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Validate { file } => validate(&read(&file)?, out),
        Command::Kappa { decimal, file } => {
            let x = parse_complex(&read(&file)?)?;
            let c = x.curvature();
            let kappa = c.kappa.as_ref().map_or("undefined".to_string(), fmt_rational);
            emit(
                out,
                &format!("Area={} chi={} tau={} kappa={}\n", fmt_rational(&c.area), c.chi, fmt_rational(&c.tau), kappa),
            )?;
            if let (Some(k), Some(v)) = (decimal, &c.kappa) {
                emit(out, &format!("# kappa ~ {}\n", fmt_decimal(v, k)))?;
            }
            Ok(EXIT_OK)
        }
        Command::Invariant {
            which,
            pi,
            emit_realizer,
            emit_certificate,
            max_blocks,
            decimal,
            file,
        } => {
            let x = parse_complex(&read(&file)?)?;
            let reports = invariant(&x, which, pi.as_deref(), max_blocks)?;
            let refs: Vec<&ExtremumReport> = reports.iter().map(|(r, _)| r).collect();
            emit(out, &serialize_report(&Report::from_reports(&refs)))?;
            if let Some(k) = decimal {
                for r in &refs {
                    if let Extended::Finite(v) = &r.value {
                        emit(out, &format!("# {} ~ {}\n", r.label, fmt_decimal(v, k)))?;
                    }
                }
            }
            let several = reports.len() > 1;
            for (r, cone) in &reports {
                let target = |p: &PathBuf| {
                    if several {
                        PathBuf::from(format!("{}.{}", p.display(), r.label))
                    } else {
                        p.clone()
                    }
                };
                if let (Some(p), Some(real)) = (&emit_realizer, &r.realizer) {
                    let kappa = real.kappa().expect("realizers have positive area");
                    let doc = RealizerDoc {
                        pi: cone.pred.name().to_string(),
                        kappa,
                        map: real.map.clone(),
                        origami: real.origami.clone(),
                    };
                    write_file(&target(p), &serialize_realizer(&doc))?;
                }
                if let (Some(p), Some(t)) = (&emit_certificate, &r.integer) {
                    let v = BlockVector::new(cone.pred.name(), t.clone(), &cone.catalogue);
                    write_file(&target(p), &serialize_block_vector(&v))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Blocks {
            pi,
            dump,
            max_blocks,
            file,
        } => {
            let x = parse_complex(&read(&file)?)?;
            let pred = predicate(&pi)?;
            let cat = enumerate_vertex_blocks(&x, &pred, max_blocks)?;
            let mut text = String::new();
            for (v, n) in cat.per_vertex.iter().enumerate() {
                text.push_str(&format!("vertex {v}: {n}\n"));
            }
            text.push_str(&format!("total: {}\n", cat.len()));
            if dump {
                for (i, b) in cat.blocks.iter().enumerate() {
                    text.push_str(&format!("block {i}: {}\n", b.canonical_key()));
                }
            }
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::FoldGraph { file } => {
            let f = parse_morphism(&read(&file)?)?;
            let s = stallings_fold(&f);
            let header = format!("# folds={} essential={}\n", s.folds.len(), s.all_essential());
            emit(out, &(header + &serialize_morphism(&s.fbar)))?;
            Ok(EXIT_OK)
        }
        Command::Certify { file } => {
            let f = parse_morphism(&read(&file)?)?;
            match certify_pi1_injective(&f).map_err(IoError::from)? {
                Some(o) => emit(out, &serialize_certificate(&o))?,
                None => emit(out, "NOT_INJECTIVE\n")?,
            }
            Ok(EXIT_OK)
        }
        Command::VerifyCertificate { morphism, certificate } => {
            let f = parse_morphism(&read(&morphism)?)?;
            let o = parse_certificate(&read(&certificate)?)?;
            match verify_certificate(&f, &o) {
                Ok(true) => {
                    emit(out, "VALID\n")?;
                    Ok(EXIT_OK)
                }
                Ok(false) => {
                    emit(out, "INVALID\n")?;
                    Ok(EXIT_INVALID)
                }
                Err(e) => {
                    emit(out, &format!("INVALID: {e}\n"))?;
                    Ok(EXIT_INVALID)
                }
            }
        }
    }
}

fn invariant(
    x: &BranchedComplex,
    which: Which,
    pi: Option<&str>,
    budget: u64,
) -> Result<Vec<(ExtremumReport, ConeSystem)>, Failure> {
    // (class, sense, label)
    let wanted: Vec<(LinkPredicate, Sense, String)> = match pi {
        Some(spec) => {
            let pred = predicate(spec)?;
            let senses = match which {
                Which::Max => vec![Sense::Max],
                Which::Min => vec![Sense::Min],
                Which::All => vec![Sense::Max, Sense::Min],
                _ => return Err(Failure(EXIT_INVALID, "with --pi, --which takes max, min or all".into())),
            };
            senses
                .into_iter()
                .map(|s| {
                    let sign = if s == Sense::Max { "+" } else { "-" };
                    (pred.clone(), s, format!("{}{sign}", pred.name()))
                })
                .collect()
        }
        None => {
            let all = [
                (Which::RhoPlus, LinkPredicate::Irreducible, Sense::Max, "rho+"),
                (Which::RhoMinus, LinkPredicate::Irreducible, Sense::Min, "rho-"),
                (Which::SigmaPlus, LinkPredicate::Surface, Sense::Max, "sigma+"),
                (Which::SigmaMinus, LinkPredicate::Surface, Sense::Min, "sigma-"),
            ];
            if matches!(which, Which::Max | Which::Min) {
                return Err(Failure(EXIT_INVALID, "--which max|min needs --pi".into()));
            }
            all.into_iter()
                .filter(|(w, ..)| which == Which::All || *w == which)
                .map(|(_, p, s, l)| (p, s, l.to_string()))
                .collect()
        }
    };
    let mut cones: Vec<ConeSystem> = Vec::new();
    let mut reports = Vec::new();
    for (pred, sense, label) in wanted {
        let cone = match cones.iter().find(|c| c.pred.name() == pred.name()) {
            Some(c) => c.clone(),
            None => {
                let c = build_cone(x, &pred, budget)?;
                cones.push(c.clone());
                c
            }
        };
        let r = extremize_cone(x, &cone, sense, &label)?;
        reports.push((r, cone));
    }
    Ok(reports)
}

/// Dispatches on the document kind and runs the matching checks.
fn validate(text: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let kind = Document::parse(text).map_err(IoError::from)?.kind;
    let summary = match kind.as_str() {
        "graph" => {
            let g = parse_graph(text)?;
            format!("valid graph: {} vertices, {} edges", g.vertex_count(), g.geometric_edge_count())
        }
        "morphism" => {
            let f = parse_morphism(text)?;
            format!("valid morphism: immersion={}", f.is_immersion())
        }
        "complex" => {
            let x = parse_complex(text)?;
            format!(
                "valid complex: {} vertices, {} edges, {} faces",
                x.skeleton().vertex_count(),
                x.skeleton().geometric_edge_count(),
                x.face_count()
            )
        }
        "certificate" => {
            let o = parse_certificate(text)?;
            let violations = o.violations();
            if !violations.is_empty() {
                emit(out, &format!("invalid certificate: {violations:?}\n"))?;
                return Ok(EXIT_INVALID);
            }
            format!("valid origami: essential={}", o.is_essential().map_err(IoError::from)?)
        }
        "blockvector" => {
            let v = parse_block_vector(text)?;
            format!("valid block vector: {} coordinates", v.t.len())
        }
        "report" => {
            let r = parse_report(text)?;
            format!("valid report: {} values", r.values.len())
        }
        "realizer" => {
            let r = parse_realizer(text)?;
            let failures = realizer_failures(&r)?;
            if !failures.is_empty() {
                emit(out, &format!("invalid realizer: {}\n", failures.join("; ")))?;
                return Ok(EXIT_INVALID);
            }
            format!("valid realizer: {} complex, kappa={}", r.pi, fmt_rational(&r.kappa))
        }
        other => return Err(Failure(EXIT_INVALID, format!("unknown document kind {other:?}"))),
    };
    emit(out, &format!("{summary}\n"))?;
    Ok(EXIT_OK)
}

/// Everything a realizer claims, re-checked from scratch.
fn realizer_failures(r: &RealizerDoc) -> Result<Vec<String>, Failure> {
    let mut failures = Vec::new();
    let pred = predicate(&format!("builtin:{}", r.pi))?;
    if let Err(e) = is_pi_complex(&r.map, &pred) {
        failures.push(e.to_string());
    }
    if !r.origami.is_origami() {
        failures.push("not an origami".into());
    } else if !r.origami.is_essential().map_err(IoError::from)? {
        failures.push("origami not essential".into());
    } else if !is_compatible_complex(&r.origami, &r.map).map_err(IoError::from)? {
        failures.push("origami not compatible".into());
    }
    if !is_essential(&r.map).map_err(IoError::from)? {
        failures.push("map not essential".into());
    }
    let kappa = r.map.domain().curvature().kappa;
    if kappa.as_ref() != Some(&r.kappa) {
        failures.push(format!("curvature is {}", kappa.as_ref().map_or("undefined".into(), fmt_rational)));
    }
    Ok(failures)
}
