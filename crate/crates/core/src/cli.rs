//! Command-line frontend over the library pipeline.
//!
//! Root and factor indices in text output and text arguments are 1-based;
//! JSON artifacts (dumps, JSONL reports) keep the library's 0-based line
//! indexing.  Roots may also be given as exact coordinate strings such as
//! "1,-1,0" (with `r5` denoting √5 where the field needs it).
//!
//! Exit codes: 0 success, 1 verification disagreement, 2 budget or resource
//! limit, 3 input error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::circuits;
use crate::classify;
use crate::dihedral;
use crate::hurwitz;
use crate::rootsys::{build, dump, GroupType, Line, RootIdx, RootSystem};
use crate::scalar::{ExactScalar, QuadraticScalar};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREEMENT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser)]
#[command(
    name = "root-circuits",
    version,
    about = "Root system circuits, Hurwitz orbits, and orbit classification",
    after_help = "Indices in text input/output are 1-based; JSON artifacts use \
                  0-based library indexing."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Node budget for orbit walks and factorization enumeration.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget: usize,
    /// Worker threads for parallel phases (0 keeps the library default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Seed recorded for reproducibility; every subcommand is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Enable checkpointed enumeration for groups too large for one sitting.
    #[arg(long, global = true)]
    long_running: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dump a root system (roots, simple system, classes) as JSON.
    Rootsys { type_tag: String },
    /// Enumerate basis and spanning-circuit orbits; write JSONL and DOT
    /// reports next to a printed summary.
    Classify {
        type_tag: String,
        /// Directory receiving <TYPE>.jsonl and <TYPE>.dot.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Partition the length-m factorizations of a Coxeter element into
    /// Hurwitz orbits and compare with the class-multiset partition.
    Verify {
        type_tag: String,
        /// Factorization length m.
        #[arg(long)]
        length: usize,
        /// Simple-reflection order for the Coxeter element, e.g. "2,1".
        #[arg(long)]
        coxeter_order: Option<String>,
    },
    /// Hurwitz orbit of one reflection factorization.
    Orbit {
        type_tag: String,
        /// Factors: 1-based root indices or coordinate strings.
        #[arg(required = true)]
        factors: Vec<String>,
    },
    /// Rewrite a factorization into standard form (equal pairs, then a
    /// shortest factorization of the product).
    StandardForm {
        type_tag: String,
        #[arg(required = true)]
        factors: Vec<String>,
    },
    /// Reduce an integer reflection triple in the infinite dihedral model.
    Dihedral { a: i64, b: i64, c: i64 },
    /// Enumerate all circuits up to a size bound with acuteness data.
    Circuits {
        type_tag: String,
        /// Largest circuit size to report (default: rank + 1).
        #[arg(long)]
        max_size: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

pub fn run() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut stdout = std::io::stdout().lock();
    execute(args.iter().map(|s| s.as_str()), &mut stdout)
}

/// Runs one invocation against an arbitrary writer; returns the exit code.
pub fn execute<'a>(args: impl IntoIterator<Item = &'a str>, out: &mut dyn Write) -> i32 {
    let parsed = Cli::try_parse_from(std::iter::once("root-circuits").chain(args));
    let cli = match parsed {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    if cli.global.threads > 0 {
        // A failure only means a pool already exists; keep going with it.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global();
    }
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            match e {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                Error::Internal(_) => EXIT_DISAGREEMENT,
                _ => EXIT_INPUT,
            }
        }
    }
}

fn parse_type(tag: &str) -> Result<GroupType> {
    GroupType::parse(tag)
}

/// Accepts a 1-based positive-root index or an exact coordinate string.
fn parse_root_token(rs: &RootSystem, token: &str) -> Result<Line> {
    if token.contains(',') {
        let dim = rs.ambient_dim().ok_or_else(|| {
            Error::Input("this system has no coordinates; give indices".into())
        })?;
        let mut coords = token
            .split(',')
            .map(ExactScalar::parse)
            .collect::<Result<Vec<_>>>()?;
        let quad_field = matches!(
            rs.root_coords(0).and_then(|v| v.into_iter().next()),
            Some(ExactScalar::Quad(_))
        );
        if quad_field {
            for c in &mut coords {
                if let ExactScalar::Rat(r) = c {
                    *c = ExactScalar::Quad(QuadraticScalar::from_rational(r.clone()));
                }
            }
        }
        if coords.len() != dim {
            return Err(Error::Input(format!(
                "expected {dim} coordinates, got {}",
                coords.len()
            )));
        }
        for r in 0..2 * rs.n_pos() as RootIdx {
            if rs.root_coords(r).as_deref() == Some(coords.as_slice()) {
                return Ok(rs.line_of(r));
            }
        }
        Err(Error::Input(format!("no root has coordinates {token}")))
    } else {
        let idx: usize = token
            .parse()
            .map_err(|_| Error::Input(format!("bad root index {token:?}")))?;
        if idx == 0 || idx > rs.n_pos() {
            return Err(Error::Input(format!(
                "root index {idx} out of range 1..={}",
                rs.n_pos()
            )));
        }
        Ok((idx - 1) as Line)
    }
}

fn parse_factors(rs: &RootSystem, tokens: &[String]) -> Result<Vec<Line>> {
    tokens.iter().map(|t| parse_root_token(rs, t)).collect()
}

fn one_based(lines: &[Line]) -> String {
    lines
        .iter()
        .map(|&l| (l + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn moves_str(trace: &[hurwitz::HurwitzMove]) -> String {
    trace
        .iter()
        .map(|mv| format!("{:+}", mv.0))
        .collect::<Vec<_>>()
        .join(" ")
}

fn file_stem(tag: GroupType) -> String {
    tag.to_string().replace(':', "_")
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.cmd {
        Cmd::Rootsys { type_tag } => {
            let rs = build(parse_type(type_tag)?)?;
            let text = serde_json::to_string_pretty(&dump(&rs))?;
            writeln!(out, "{text}")?;
            Ok(EXIT_OK)
        }
        Cmd::Classify { type_tag, out: dir } => cmd_classify(cli, type_tag, dir, out),
        Cmd::Verify { type_tag, length, coxeter_order } => {
            let rs = build(parse_type(type_tag)?)?;
            let order: Vec<usize> = match coxeter_order {
                None => (0..rs.rank()).collect(),
                Some(s) => {
                    let mut v = Vec::new();
                    for part in s.split(',') {
                        let k: usize = part.trim().parse().map_err(|_| {
                            Error::Input(format!("bad simple index {part:?}"))
                        })?;
                        if k == 0 || k > rs.rank() {
                            return Err(Error::Input(format!(
                                "simple index {k} out of range 1..={}",
                                rs.rank()
                            )));
                        }
                        v.push(k - 1);
                    }
                    v
                }
            };
            let c = rs.coxeter_element(&order)?;
            let report = hurwitz::verify_theorem(&rs, &c, *length, cli.global.budget)?;
            writeln!(out, "type: {}", rs.type_tag)?;
            writeln!(out, "factorizations: {}", report.total_factorizations)?;
            writeln!(out, "orbits: {}", report.orbits.len())?;
            for (i, orbit) in report.orbits.iter().enumerate() {
                writeln!(
                    out,
                    "orbit {i}: size {}, classes {:?}, witness [{}]",
                    orbit.size,
                    orbit.multiset,
                    one_based(&orbit.witness)
                )?;
            }
            writeln!(out, "agreement: {}", report.agreement)?;
            Ok(if report.agreement { EXIT_OK } else { EXIT_DISAGREEMENT })
        }
        Cmd::Orbit { type_tag, factors } => {
            let rs = build(parse_type(type_tag)?)?;
            let f = parse_factors(&rs, factors)?;
            let orbit = hurwitz::hurwitz_orbit(&rs, &f, cli.global.budget)?;
            writeln!(out, "start: [{}]", one_based(&f))?;
            writeln!(out, "classes: {:?}", hurwitz::class_multiset(&rs, &f))?;
            if orbit.complete {
                writeln!(out, "orbit size: {}", orbit.len())?;
                Ok(EXIT_OK)
            } else {
                writeln!(
                    out,
                    "orbit size: at least {} (budget {} exhausted)",
                    orbit.len(),
                    cli.global.budget
                )?;
                Ok(EXIT_BUDGET)
            }
        }
        Cmd::StandardForm { type_tag, factors } => {
            let rs = build(parse_type(type_tag)?)?;
            let f = parse_factors(&rs, factors)?;
            let (form, trace) = hurwitz::standard_form(&rs, &f)?;
            let product = rs.product_of_lines(&f);
            let suffix_len = hurwitz::reflection_length(&rs, &product);
            let pairs = (form.len() - suffix_len) / 2;
            writeln!(out, "input:  [{}]", one_based(&f))?;
            writeln!(out, "output: [{}]", one_based(&form))?;
            writeln!(out, "equal pairs: {pairs}")?;
            writeln!(
                out,
                "suffix ({} factors): [{}]",
                suffix_len,
                one_based(&form[2 * pairs..])
            )?;
            writeln!(out, "moves ({}): {}", trace.len(), moves_str(&trace))?;
            Ok(EXIT_OK)
        }
        Cmd::Dihedral { a, b, c } => {
            let start = [*a, *b, *c];
            let (end, trace) = dihedral::reduce_triple(start);
            let mut cur = start;
            writeln!(out, "({}, {}, {})", cur[0], cur[1], cur[2])?;
            for &mv in &trace {
                cur = dihedral::apply_move(&cur, mv);
                writeln!(out, "({}, {}, {})", cur[0], cur[1], cur[2])?;
            }
            debug_assert_eq!(cur, end);
            writeln!(out, "moves ({}): {}", trace.len(), moves_str(&trace))?;
            Ok(EXIT_OK)
        }
        Cmd::Circuits { type_tag, max_size, format } => {
            let rs = build(parse_type(type_tag)?)?;
            let cap = max_size.unwrap_or(rs.rank() + 1);
            let all = circuits::all_circuits(&rs, cap)?;
            match format {
                Format::Text => {
                    writeln!(out, "type: {}", rs.type_tag)?;
                    writeln!(out, "circuits (size <= {cap}): {}", all.len())?;
                    for c in &all {
                        let g = circuits::circuit_acuteness(&rs, c)?;
                        let coeffs = c
                            .coeffs
                            .iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(" ");
                        writeln!(
                            out,
                            "[{}] coeffs [{}] acute {} obtuse {}{}",
                            one_based(&c.members),
                            coeffs,
                            g.acute.len(),
                            g.obtuse.len(),
                            if circuits::is_full(&rs, &c.members) { " full" } else { "" }
                        )?;
                    }
                }
                Format::Json => {
                    for c in &all {
                        writeln!(out, "{}", serde_json::to_string(c)?)?;
                    }
                }
                Format::Dot => {
                    write!(out, "{}", circuits::atlas_dot(&rs, &all)?)?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn cmd_classify(
    cli: &Cli,
    type_tag: &str,
    dir: &PathBuf,
    out: &mut dyn Write,
) -> Result<i32> {
    let tag = parse_type(type_tag)?;
    let rs = build(tag)?;
    std::fs::create_dir_all(dir)?;
    if rs.ambient_dim().is_none() {
        // Pure angle model: every 3-subset of lines is a circuit already.
        let survey = classify::i2_triple_survey(&rs)?;
        let full = survey.orbits.iter().filter(|o| o.full).count();
        writeln!(out, "type: {}", rs.type_tag)?;
        writeln!(out, "triple orbits: {}, full: {full}", survey.orbits.len())?;
        if let Some(bad) = survey.orbits.iter().find(|o| !o.gamma_disconnected) {
            writeln!(out, "connected acuteness graph at {:?}", bad.members)?;
            return Ok(EXIT_DISAGREEMENT);
        }
        writeln!(out, "acuteness: all {} representatives disconnected", survey.orbits.len())?;
        let path = dir.join(format!("{}.jsonl", file_stem(tag)));
        let mut text = String::new();
        for orbit in &survey.orbits {
            text.push_str(&serde_json::to_string(orbit)?);
            text.push('\n');
        }
        std::fs::write(&path, text)?;
        writeln!(out, "wrote {}", path.display())?;
        return Ok(EXIT_OK);
    }
    let basis_orbits = if rs.type_tag.group_order() > classify::SWEEP_ORDER_LIMIT {
        if !cli.global.long_running {
            return Err(Error::BudgetExceeded {
                visited: rs.type_tag.group_order() as usize,
                budget: classify::SWEEP_ORDER_LIMIT as usize,
            });
        }
        let state = dir.join(format!("{}.basis.ckpt.json", file_stem(tag)));
        let chunk = 4096;
        let max_chunks = (cli.global.budget / chunk).max(1);
        let outcome = classify::enumerate_basis_orbits_streaming(
            &rs,
            Some(&state),
            chunk,
            Some(max_chunks),
        )?;
        writeln!(
            out,
            "streaming: {} candidate bases processed, {} representatives so far",
            outcome.processed,
            outcome.reps.len()
        )?;
        if !outcome.complete {
            writeln!(out, "checkpoint saved to {}; rerun to continue", state.display())?;
            return Ok(EXIT_BUDGET);
        }
        outcome.reps
    } else {
        classify::enumerate_basis_orbits(&rs)?
    };
    let circuit_orbits = classify::enumerate_circuit_orbits(&rs, &basis_orbits)?;
    let report = classify::ClassificationReport {
        type_tag: rs.type_tag.to_string(),
        basis_orbit_count: basis_orbits.len(),
        total_bases: basis_orbits.iter().map(|r| r.orbit_size).sum(),
        spanning_circuit_orbit_count: circuit_orbits.len(),
        full_circuit_orbit_count: circuit_orbits.iter().filter(|r| r.full).count(),
        basis_orbits,
        circuit_orbits,
    };
    writeln!(out, "type: {}", report.type_tag)?;
    writeln!(
        out,
        "bases: {}, full circuits: {}",
        report.basis_orbit_count, report.full_circuit_orbit_count
    )?;
    writeln!(
        out,
        "spanning circuit orbits: {}, total bases: {}",
        report.spanning_circuit_orbit_count, report.total_bases
    )?;
    let survey = classify::verify_acuteness_lemma(&rs, &report.circuit_orbits)?;
    writeln!(out, "acuteness: all {} representatives disconnected", survey.reps_checked)?;
    let jsonl_path = dir.join(format!("{}.jsonl", file_stem(tag)));
    std::fs::write(&jsonl_path, classify::report_jsonl(&report))?;
    let dot_path = dir.join(format!("{}.dot", file_stem(tag)));
    std::fs::write(&dot_path, classify::atlas_dot(&rs, &report)?)?;
    writeln!(out, "wrote {} and {}", jsonl_path.display(), dot_path.display())?;
    Ok(EXIT_OK)
}
