//! Library side of the `equipart` command; [`run`] executes one invocation
//! and returns its output instead of printing it.

pub mod args;
mod commands;
pub mod report;

use std::ffi::OsString;
use std::path::Path;

use clap::Parser;
use equipart_core::scheme::from_distance_regular_graph;
use equipart_core::{io, named_scheme, verify_axioms, AssociationScheme, Error, Family, SpectralData, Tolerances};
use serde::Serialize;
use sha2::{Digest, Sha256};

use args::{Cli, Command, SchemeInput};
use report::{Arithmetic, ErrorInfo, InputDigest, RunReport, SchemeSummary, EXIT_INCONSISTENT, EXIT_INPUT};

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
pub(crate) enum Failure {
    Input(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(Error::Inconsistent(_)) => EXIT_INCONSISTENT,
            _ => EXIT_INPUT,
        }
    }

    fn info(&self) -> ErrorInfo {
        match self {
            Failure::Input(m) => ErrorInfo {
                kind: "input".into(),
                message: m.clone(),
            },
            Failure::Core(e) => ErrorInfo {
                kind: error_kind(e).into(),
                message: e.to_string(),
            },
        }
    }
}

pub(crate) fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Axiom(_) => "axiom",
        Error::Disconnected { .. } => "disconnected",
        Error::NotDistanceRegular { .. } => "not-distance-regular",
        Error::Parse { .. } => "parse",
        Error::Inconsistent(_) => "inconsistent",
        Error::TooLarge { .. } => "too-large",
        Error::OverlappingCells(_) | Error::EmptyCell(_) | Error::Uncovered(_) | Error::UnknownVertex(_) => {
            "partition"
        }
        Error::NotBijection(_) => "permutation",
        Error::NotEquitable => "not-equitable",
        Error::InvalidSizeRange { .. } | Error::InvalidParameter(_) | Error::RelationOutOfRange { .. } => {
            "parameter"
        }
        _ => "computation",
    }
}

pub(crate) struct Context {
    pub tolerances: Tolerances,
    pub max_vertices: usize,
}

pub(crate) struct Loaded {
    pub scheme: AssociationScheme,
    pub source: String,
}

pub(crate) fn read_input(report: &mut RunReport, role: &str, path: &Path) -> Result<String, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    report.inputs.push(InputDigest {
        role: role.into(),
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    });
    String::from_utf8(bytes).map_err(|_| Failure::Input(format!("{} is not UTF-8", path.display())))
}

fn check_size(v: usize, cap: usize) -> Result<(), Failure> {
    if v > cap {
        return Err(Error::TooLarge { v, cap }.into());
    }
    Ok(())
}

pub(crate) fn load_scheme(report: &mut RunReport, input: &SchemeInput, ctx: &Context) -> Result<Loaded, Failure> {
    let src = &input.source;
    if let Some(path) = &src.relations {
        let text = read_input(report, "relations", path)?;
        let file = io::parse_relation_file(&text)?;
        check_size(file.matrices.first().map_or(0, |m| m.rows()), ctx.max_vertices)?;
        let scheme = verify_axioms(file.matrices, file.labels)?;
        return Ok(Loaded {
            scheme,
            source: format!("relations {}", path.display()),
        });
    }
    if let Some(path) = &src.edges {
        if !input.drg {
            return Err(Failure::Input("--edges requires --drg".into()));
        }
        let text = read_input(report, "edges", path)?;
        let graph = io::parse_edge_list(&text)?;
        check_size(graph.vertex_count(), ctx.max_vertices)?;
        let scheme = from_distance_regular_graph(&graph)?;
        return Ok(Loaded {
            scheme,
            source: format!("distance-regular graph {}", path.display()),
        });
    }
    let name = src.family.as_deref().ok_or_else(|| Failure::Input("no scheme input given".into()))?;
    let family: Family = name.parse()?;
    let scheme = named_scheme(family, ctx.max_vertices)?;
    Ok(Loaded {
        scheme,
        source: format!("family {family}"),
    })
}

/// Fills in the scheme summary and arithmetic sections.
pub(crate) fn describe_scheme(report: &mut RunReport, loaded: &Loaded, spec: Option<&SpectralData>, ctx: &Context) {
    let s = &loaded.scheme;
    report.scheme = Some(SchemeSummary {
        source: loaded.source.clone(),
        v: s.vertex_count(),
        d: s.classes(),
        valencies: s.valencies().to_vec(),
        multiplicities: spec.map(|sp| sp.multiplicities().to_vec()),
        labels: s.labels().to_vec(),
    });
    report.arithmetic = Some(Arithmetic {
        mode: spec.map_or("exact", |sp| sp.mode().name()).into(),
        tol_eigen: ctx.tolerances.eigen,
        tol_int: ctx.tolerances.integrality,
    });
    if let Some(sp) = spec {
        report.warnings.extend(sp.warnings.iter().cloned());
    }
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("value serializes")
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            return if e.use_stderr() {
                Outcome {
                    exit_code: code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    exit_code: code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut report = RunReport::new(echo);
    let ctx = Context {
        tolerances: Tolerances {
            eigen: cli.tol_eigen,
            integrality: cli.tol_int,
        },
        max_vertices: cli.max_vertices,
    };
    let result = if !(cli.tol_eigen > 0.0 && cli.tol_int > 0.0) {
        Err(Failure::Input("tolerances must be positive".into()))
    } else {
        match &cli.command {
            Command::SchemeVerify(a) => commands::scheme_verify(&mut report, a, &ctx),
            Command::Spectra(a) => commands::spectra(&mut report, a, &ctx),
            Command::PartitionCheck(a) => commands::partition_check(&mut report, a, &ctx),
            Command::Automorphism(a) => commands::automorphism(&mut report, a, &ctx),
            Command::CrcSearch(a) => commands::crc_search(&mut report, a, &ctx),
        }
    };
    let mut stderr = String::new();
    match result {
        Ok(code) => report.exit_status = code,
        Err(f) => {
            report.exit_status = f.exit_code();
            let info = f.info();
            stderr = format!("error: {}\n", info.message);
            report.error = Some(info);
        }
    }
    Outcome {
        exit_code: report.exit_status,
        stdout: if cli.json { report.to_json() } else { report.to_text() },
        stderr,
    }
}
