//! Command-line front end. Exit codes: 0 pass, 1 verified violation, 2 usage or IO.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::coords::{self, CanonicalCoords};
use crate::crystal::{self, fat_vertices, generate_decorated, weight_of, DecoratedCrystal};
use crate::io::{export_dot, write_atomic, GraphDocument, Kind, ReportDocument, ReportStats};
use crate::model::{Bounds, Configuration};
use crate::sky::{self, check_lemma1, contract, sail_model};
use crate::verify::{self, AxiomReport, Location, Rule, VerifyError, VerifyOptions};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "b2crystal",
    version,
    about = "Regular B2 crystal graphs from the crossing model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Interval {
    #[arg(long = "H")]
    pub h: i64,
    #[arg(long = "A")]
    pub a: i64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the decorated interval B(H, A) as a graph document.
    Generate {
        #[command(flatten)]
        interval: Interval,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check a graph document against the axioms.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// An axiom or derived-check id, or ALL.
        #[arg(long, default_value = "ALL")]
        axiom: String,
        #[arg(long)]
        derived: bool,
    },
    /// Contract a crystal to its sky graph.
    Sky {
        #[arg(long = "in", conflicts_with_all = ["h", "a"])]
        input: Option<PathBuf>,
        #[arg(long = "H", requires = "a")]
        h: Option<i64>,
        #[arg(long = "A", requires = "h")]
        a: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Compare with the glued sails and run the sky graph checks.
        #[arg(long)]
        check: bool,
    },
    /// Print canonical coordinates, one JSON row per vertex.
    Coords {
        #[command(flatten)]
        interval: Interval,
        #[arg(long, conflicts_with = "vertex")]
        all: bool,
        #[arg(long)]
        vertex: Option<usize>,
        #[arg(long)]
        check: bool,
    },
    /// Print counts, weights and the expected dimension.
    Stats {
        #[command(flatten)]
        interval: Interval,
    },
    /// Decide whether two graph documents are isomorphic.
    Iso {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

/// A failure that maps to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<i32, UsageError>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(cmd: &Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Generate {
            interval,
            out: path,
            dot,
        } => cmd_generate(interval, path, dot.as_deref()),
        Command::Verify {
            input,
            axiom,
            derived,
        } => {
            let doc = GraphDocument::read(input)?;
            let (report, code) = verify_document(&doc, axiom, *derived)?;
            out.write_all(report.to_json().as_bytes())?;
            Ok(code)
        }
        Command::Sky {
            input,
            h,
            a,
            out: path,
            dot,
            check,
        } => cmd_sky(
            input.as_deref(),
            h.zip(*a),
            path.as_deref(),
            dot.as_deref(),
            *check,
            out,
        ),
        Command::Coords {
            interval,
            vertex,
            check,
            ..
        } => cmd_coords(interval, *vertex, *check, out),
        Command::Stats { interval } => cmd_stats(interval, out),
        Command::Iso { a, b } => cmd_iso(a, b, out),
    }
}

fn bounds(i: &Interval) -> Result<Bounds, UsageError> {
    Ok(Bounds::interval(i.h, i.a)?)
}

fn crystal_of(i: &Interval) -> Result<DecoratedCrystal, UsageError> {
    Ok(generate_decorated(&bounds(i)?)?)
}

fn cmd_generate(i: &Interval, path: &Path, dot: Option<&Path>) -> CmdResult {
    let g = crystal_of(i)?;
    let doc = GraphDocument::from_crystal(&g);
    write_atomic(path, &doc.to_json())?;
    if let Some(d) = dot {
        write_atomic(d, &export_dot(&doc))?;
    }
    log::info!(
        "wrote {} vertices to {}",
        doc.vertices.len(),
        path.display()
    );
    Ok(EXIT_PASS)
}

fn report_stats(doc: &GraphDocument) -> ReportStats {
    let dimension_expected = match (doc.meta.kind, doc.meta.h, doc.meta.a) {
        (Kind::Crystal, Some(h), Some(a)) => Some(crystal::weyl_dimension(h, a)),
        _ => None,
    };
    ReportStats {
        vertex_count: doc.vertices.len(),
        edge_count: doc.edges.len(),
        dimension_expected,
    }
}

fn precondition_report(msg: String) -> AxiomReport {
    let mut rep = AxiomReport::default();
    rep.push(Rule::Structure, Location::default(), msg);
    rep
}

/// Runs the `verify` command on a parsed document and returns its report and exit code.
///
/// Sky documents get the sky graph checks; other kinds get the axioms. A graph
/// too broken for the requested check is reported as a structure violation.
pub fn verify_document(
    doc: &GraphDocument,
    axiom: &str,
    derived: bool,
) -> Result<(ReportDocument, i32), UsageError> {
    doc.validate()?;
    let report = if doc.meta.kind == Kind::Sky {
        check_lemma1(&doc.to_sky()?)
    } else {
        let g = doc.to_colored();
        let result = if axiom.eq_ignore_ascii_case("ALL") {
            verify::verify_all(
                &g,
                VerifyOptions {
                    derived,
                    diagnostics: true,
                },
            )
        } else {
            let rule = Rule::parse(axiom).ok_or_else(|| {
                UsageError(format!("{axiom} is not an axiom or derived-check id"))
            })?;
            if Rule::AXIOMS.contains(&rule) {
                verify::check_axiom(&g, rule)
            } else {
                verify::check_derived(&g, rule)
            }
        };
        match result {
            Ok(r) => r,
            Err(VerifyError::Precondition(msg)) => {
                precondition_report(format!("precondition failed: {msg}"))
            }
            Err(e) => return Err(e.into()),
        }
    };
    let code = if report.passed() {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    };
    Ok((ReportDocument::new(report, Some(report_stats(doc))), code))
}

fn cmd_sky(
    input: Option<&Path>,
    interval: Option<(i64, i64)>,
    path: Option<&Path>,
    dot: Option<&Path>,
    check: bool,
    out: &mut dyn Write,
) -> CmdResult {
    let (g, xy_hint) = match (input, interval) {
        (Some(p), _) => {
            let doc = GraphDocument::read(p)?;
            if doc.meta.kind != Kind::Crystal {
                return Err(UsageError(format!(
                    "{} is not a crystal document",
                    p.display()
                )));
            }
            let hint = doc.meta.h.zip(doc.meta.a);
            (doc.to_colored(), hint)
        }
        (None, Some((h, a))) => {
            let c = crystal_of(&Interval { h, a })?;
            (crystal::to_colored(&c), Some((h, a)))
        }
        (None, None) => return Err(UsageError("give --in or both --H and --A".into())),
    };
    let contraction = match contract(&g) {
        Ok(c) => c,
        Err(e @ (sky::SkyError::Precondition(_) | sky::SkyError::Structure(_))) => {
            let report = ReportDocument::new(precondition_report(e.to_string()), None);
            out.write_all(report.to_json().as_bytes())?;
            return Ok(EXIT_VIOLATION);
        }
        Err(e) => return Err(e.into()),
    };
    let s = contraction.sky;
    let (h, a) = match xy_hint {
        Some((h, a)) => (Some(h), Some(a)),
        None => (None, None),
    };
    let doc = GraphDocument::from_sky(&s, h, a);
    if let Some(d) = dot {
        write_atomic(d, &export_dot(&doc))?;
    }
    match path {
        Some(p) => write_atomic(p, &doc.to_json())?,
        None if !check => out.write_all(doc.to_json().as_bytes())?,
        None => {}
    }
    if !check {
        return Ok(EXIT_PASS);
    }
    let (h, a) = xy_hint.ok_or_else(|| {
        UsageError("--check needs H and A in the document or on the command line".into())
    })?;
    let mut report = check_lemma1(&s);
    if s.expansion_count() != g.vertices.len() as u64 {
        report.push(
            Rule::Structure,
            Location::default(),
            format!(
                "expansion count {} differs from {} crystal vertices",
                s.expansion_count(),
                g.vertices.len()
            ),
        );
    }
    let model = sail_model(u32::try_from(h)?, u32::try_from(a)?)?;
    let iso = sky::iso(&s, &model)?;
    if !iso.isomorphic {
        report.push(
            Rule::Structure,
            Location::default(),
            format!(
                "not isomorphic to the glued sails: {}",
                iso.reason.unwrap_or_default()
            ),
        );
    }
    report.sort();
    let code = if report.passed() {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    };
    let stats = ReportStats {
        vertex_count: s.len(),
        edge_count: s.edges.len(),
        dimension_expected: None,
    };
    out.write_all(
        ReportDocument::new(report, Some(stats))
            .to_json()
            .as_bytes(),
    )?;
    Ok(code)
}

#[derive(Serialize)]
struct CoordRow {
    id: usize,
    config: Configuration,
    first: coords::Quad,
    second: coords::Quad,
    #[serde(skip_serializing_if = "Option::is_none")]
    failures: Option<Vec<&'static str>>,
}

fn cmd_coords(i: &Interval, vertex: Option<usize>, check: bool, out: &mut dyn Write) -> CmdResult {
    let b = bounds(i)?;
    let g = crystal::generate(&b)?;
    let ids: Vec<usize> = match vertex {
        Some(v) if v < g.len() => vec![v],
        Some(v) => return Err(UsageError(format!("no vertex with id {v}"))),
        None => (0..g.len()).collect(),
    };
    let mut ok = true;
    for v in ids {
        let f = g.vertices[v];
        let c: CanonicalCoords = coords::coords(&f, &b)?;
        let failures = if check {
            let r = coords::check_coords(&f, &c, &b)?;
            ok &= r.passed();
            Some(r.failures())
        } else {
            None
        };
        let row = CoordRow {
            id: v,
            config: f,
            first: c.first,
            second: c.second,
            failures,
        };
        writeln!(out, "{}", serde_json::to_string(&row)?)?;
    }
    Ok(if ok { EXIT_PASS } else { EXIT_VIOLATION })
}

fn cmd_stats(i: &Interval, out: &mut dyn Write) -> CmdResult {
    let g = crystal_of(i)?;
    let src = weight_of(&g, g.graph.source())?;
    let sink = g
        .graph
        .sink()
        .ok_or_else(|| UsageError("interval has no sink".into()))?;
    let snk = weight_of(&g, sink)?;
    writeln!(out, "vertices={}", g.graph.len())?;
    writeln!(out, "edges={}", g.graph.edge_count())?;
    writeln!(out, "fat={}", fat_vertices(&g.graph).len())?;
    writeln!(out, "source_weight=({},{})", src.w1, src.w2)?;
    writeln!(out, "sink_weight=({},{})", snk.w1, snk.w2)?;
    writeln!(
        out,
        "dimension_expected={}",
        crystal::weyl_dimension(i.h, i.a)
    )?;
    Ok(EXIT_PASS)
}

fn cmd_iso(a: &Path, b: &Path, out: &mut dyn Write) -> CmdResult {
    let (da, db) = (GraphDocument::read(a)?, GraphDocument::read(b)?);
    let result = match sky::iso_colored(&da.to_colored(), &da.xy(), &db.to_colored(), &db.xy()) {
        Ok(r) => r,
        Err(e) => sky::IsoResult {
            isomorphic: false,
            witness: None,
            reason: Some(e.to_string()),
        },
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&result)?)?;
    Ok(if result.isomorphic {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    })
}
