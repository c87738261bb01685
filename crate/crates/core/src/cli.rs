//! Command-line front end: `construct`, `verify`, `search`, `table` and
//! `cosets`. Output goes to stdout (or `--out`), errors to stderr as JSON.
//! Exit status 0 on success, 1 on a verification mismatch, 2 on invalid input.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::codes::{distance_exceeds, CodeJson, DistanceMethod, DistanceProvenance, LinearCode};
use crate::cosets::all_cosets;
use crate::error::{Error, Result};
use crate::families::{
    build_family_instance, minimal_s, table_one, window_specs, Family, FamilyInstance, FamilySpec,
    TableMismatch, CSV_HEADER,
};
use crate::galois::{build_tower, Duality};
use crate::locality::LocalityCertificate;
use crate::quantum::{is_dual_containing, stabilizer_from_dual_containing, QuantumCodeRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "qlrc", version, about = "Optimal pure quantum (r, δ)-locally recoverable codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build and verify one family instance.
    Construct(ConstructArgs),
    /// Re-check a document written by `construct`.
    Verify(VerifyArgs),
    /// Sweep family windows up to a length cap.
    Search(SearchArgs),
    /// Instantiate the parameter table.
    Table(TableArgs),
    /// List the cyclotomic cosets of a base modulo a modulus.
    Cosets(CosetsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Json,
    Csv,
    Matrix,
}

fn parse_family(s: &str) -> std::result::Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub q: u32,
    /// Extension degree; defaults to the smallest admissible one.
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub lambda: usize,
    #[arg(long)]
    pub u: Option<usize>,
    #[arg(long)]
    pub v: Option<usize>,
    /// Extra axis sizes n2,n3,...
    #[arg(long, value_delimiter = ',')]
    pub axes: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    pub emit: Emit,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// JSON document produced by `construct`.
    pub input: std::path::PathBuf,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    /// Comma-separated q values.
    #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3, 4, 5])]
    pub q: Vec<u32>,
    #[arg(long, default_value_t = 64)]
    pub max_length: usize,
    #[arg(long)]
    pub optimal_only: bool,
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    pub emit: Emit,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [2u32, 3, 4, 5])]
    pub q: Vec<u32>,
    #[arg(long, default_value_t = 64)]
    pub max_length: usize,
    #[arg(long, value_enum, default_value_t = Emit::Json)]
    pub emit: Emit,
}

#[derive(Args, Debug)]
pub struct CosetsArgs {
    #[arg(long)]
    pub modulus: usize,
    #[arg(long)]
    pub base: usize,
}

/// Tower parameters, enough to rebuild the field and decode element codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerJson {
    pub p: u32,
    pub q_exponent: u32,
    pub s: u32,
    pub mode: Duality,
}

/// What `construct --emit json` writes and `verify` reads.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionDocument {
    pub spec: FamilySpec,
    pub tower: TowerJson,
    pub code: CodeJson,
    pub locality: LocalityCertificate,
    pub record: QuantumCodeRecord,
    pub quantum_locality: Option<bool>,
    pub verified: bool,
}

impl ConstructionDocument {
    pub fn from_instance(inst: &FamilyInstance) -> Self {
        let t = &inst.tower;
        ConstructionDocument {
            spec: inst.spec.clone(),
            tower: TowerJson { p: t.p(), q_exponent: t.q_exponent(), s: t.s(), mode: t.mode() },
            code: inst.outer.to_json(),
            locality: inst.certificate.clone(),
            record: inst.record.clone(),
            quantum_locality: inst.quantum_locality,
            verified: inst.verified,
        }
    }
}

/// What a run produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::VerificationMismatch(_)
        | Error::NotDualContaining
        | Error::NotSelfOrthogonal
        | Error::NotLocallyRecoverable { .. }
        | Error::Infeasible(_)
        | Error::SearchInfeasible(_) => EXIT_MISMATCH,
        _ => EXIT_INVALID,
    }
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": kind, "message": message }).to_string() + "\n"
}

fn failure(e: &Error) -> Outcome {
    Outcome { code: exit_code(e), stdout: String::new(), stderr: error_json(e.kind(), &e.to_string()) }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: e.to_string(), stderr: String::new() }
                }
                _ => Outcome {
                    code: EXIT_INVALID,
                    stdout: String::new(),
                    stderr: error_json("Usage", e.to_string().trim_end()),
                },
            };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => return failure(&Error::Parse(e.to_string())),
    };
    let outcome = pool.install(|| match &cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Search(a) => search(a),
        Command::Table(a) => table(a),
        Command::Cosets(a) => cosets(a),
    });
    match (&cli.out, outcome) {
        (Some(path), Ok(mut o)) => match std::fs::write(path, &o.stdout) {
            Ok(()) => {
                o.stdout.clear();
                o
            }
            Err(e) => failure(&Error::Parse(format!("cannot write {}: {e}", path.display()))),
        },
        (None, Ok(o)) => o,
        (_, Err(e)) => failure(&e),
    }
}

fn spec_from_args(a: &ConstructArgs) -> Result<FamilySpec> {
    let family = if a.axes.is_empty() {
        a.family
    } else {
        match a.family {
            Family::A | Family::CartA => Family::CartA,
            Family::B | Family::CartB => Family::CartB,
            _ => Family::CartC,
        }
    };
    let x = if family.uses_u() {
        if a.v.is_some() {
            return Err(Error::SpecInvalid(format!("family {family} takes --u, not --v")));
        }
        a.u.ok_or_else(|| Error::SpecInvalid(format!("family {family} needs --u")))?
    } else {
        if a.u.is_some() {
            return Err(Error::SpecInvalid(format!("family {family} takes --v, not --u")));
        }
        a.v.ok_or_else(|| Error::SpecInvalid(format!("family {family} needs --v")))?
    };
    let probe = FamilySpec::new(family, a.q, 0, a.lambda, x, a.axes.clone());
    let s = match a.s {
        Some(s) => s,
        None => {
            let m = a.lambda * family.block_length(a.q);
            let hermitian = family.mode() == Duality::Hermitian;
            match minimal_s(a.q, m, hermitian, family == Family::CartC) {
                Some(s) => s,
                None => {
                    // surface the window violation if there is one
                    FamilySpec { s: if hermitian { 4 } else { 3 }, ..probe.clone() }.validate()?;
                    return Err(Error::SpecInvalid(format!(
                        "family {family}: no admissible s with {m} | q^s - 1"
                    )));
                }
            }
        }
    };
    let spec = FamilySpec { s, ..probe };
    spec.validate()?;
    Ok(spec)
}

fn construct(a: &ConstructArgs) -> Result<Outcome> {
    let spec = spec_from_args(a)?;
    let inst = build_family_instance(&spec)?;
    let stdout = match a.emit {
        Emit::Json => to_json(&ConstructionDocument::from_instance(&inst)),
        Emit::Csv => format!("{CSV_HEADER}\n{}\n", inst.summary().csv()),
        Emit::Matrix => inst.outer.generator().export(),
    };
    Ok(Outcome { code: EXIT_OK, stdout, stderr: String::new() })
}

/// Re-runs the duality, distance, locality and bound checks on a document.
pub fn verify_document(doc: &ConstructionDocument) -> Result<()> {
    let t = doc.tower;
    let tower = Arc::new(build_tower(t.p, t.q_exponent, t.s, t.mode)?);
    let code = LinearCode::from_json(tower, &doc.code)?;
    let mode = t.mode;
    if !is_dual_containing(&code, mode)? {
        return Err(Error::VerificationMismatch(format!("code is not {mode} dual-containing")));
    }
    let d = doc.code.d.ok_or_else(|| Error::Parse("document has no distance".into()))?;
    let verified = doc.code.d_method == DistanceProvenance::Verified.to_string();
    let code = if verified {
        let measured = code.min_distance(DistanceMethod::Auto)?;
        if measured != d {
            return Err(Error::VerificationMismatch(format!("distance is {measured}, document says {d}")));
        }
        code.with_distance(d, DistanceProvenance::Verified)
    } else {
        if d > 0 && !distance_exceeds(&code, d - 1)? {
            return Err(Error::VerificationMismatch(format!("distance is below {d}")));
        }
        code.with_distance(d, DistanceProvenance::Predicted)
    };
    let cert = &doc.locality;
    if !cert.recheck(&code)? {
        return Err(Error::VerificationMismatch(format!(
            "recovery sets do not give ({}, {})-locality",
            cert.r, cert.delta
        )));
    }
    let recomputed = cert.clone().with_defect(code.len(), code.dimension(), d);
    if recomputed.classical_defect != cert.classical_defect {
        return Err(Error::VerificationMismatch(format!(
            "classical defect is {:?}, document says {:?}",
            recomputed.classical_defect, cert.classical_defect
        )));
    }
    let record = stabilizer_from_dual_containing(&code, mode)?
        .with_certificate(cert)
        .with_family(&doc.record.family, doc.record.family_params.clone());
    if record != doc.record {
        return Err(Error::VerificationMismatch(format!(
            "quantum record is {}, document says {}",
            record.label(),
            doc.record.label()
        )));
    }
    Ok(())
}

fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", a.input.display())))?;
    let doc: ConstructionDocument =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad document: {e}")))?;
    verify_document(&doc)?;
    let stdout = to_json(&serde_json::json!({ "verified": true, "record": doc.record.label() }));
    Ok(Outcome { code: EXIT_OK, stdout, stderr: String::new() })
}

#[derive(Serialize)]
struct SearchReport {
    records: Vec<QuantumCodeRecord>,
    mismatches: Vec<TableMismatch>,
}

fn search(a: &SearchArgs) -> Result<Outcome> {
    let families: Vec<Family> = match a.family {
        Some(f) => vec![f],
        None => Family::ALL.to_vec(),
    };
    let specs = window_specs(&families, &a.q, a.max_length);
    let outcomes: Vec<Result<FamilyInstance>> = specs.par_iter().map(build_family_instance).collect();
    let mut built = Vec::new();
    let mut mismatches = Vec::new();
    for (spec, outcome) in specs.into_iter().zip(outcomes) {
        match outcome {
            Ok(inst) if !a.optimal_only || inst.record.optimal => built.push(inst),
            Ok(_) => {}
            Err(e) => mismatches.push(TableMismatch { spec, message: e.to_string() }),
        }
    }
    let stdout = match a.emit {
        Emit::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for inst in &built {
                s += &inst.summary().csv();
                s.push('\n');
            }
            s
        }
        _ => to_json(&SearchReport { records: built.iter().map(|i| i.record.clone()).collect(), mismatches: mismatches.clone() }),
    };
    Ok(mismatch_outcome(stdout, &mismatches))
}

fn mismatch_outcome(stdout: String, mismatches: &[TableMismatch]) -> Outcome {
    if mismatches.is_empty() {
        return Outcome { code: EXIT_OK, stdout, stderr: String::new() };
    }
    let shown: Vec<String> = mismatches
        .iter()
        .take(5)
        .map(|m| format!("{} q={} lambda={} param={} axes={:?}: {}", m.spec.family, m.spec.q, m.spec.lambda, m.spec.u_or_v, m.spec.axes, m.message))
        .collect();
    let mut message = format!("{} instance(s) failed verification: {}", mismatches.len(), shown.join("; "));
    if mismatches.len() > shown.len() {
        message += &format!("; and {} more", mismatches.len() - shown.len());
    }
    Outcome { code: EXIT_MISMATCH, stdout, stderr: error_json("VerificationMismatch", &message) }
}

fn table(a: &TableArgs) -> Result<Outcome> {
    let rows = table_one(&a.q, a.max_length);
    let mismatches: Vec<TableMismatch> = rows.iter().flat_map(|r| r.mismatches.clone()).collect();
    let stdout = match a.emit {
        Emit::Csv => {
            let mut s = format!("{CSV_HEADER}\n");
            for row in &rows {
                for sum in &row.summaries {
                    s += &sum.csv();
                    s.push('\n');
                }
            }
            s
        }
        _ => to_json(&rows),
    };
    Ok(mismatch_outcome(stdout, &mismatches))
}

fn cosets(a: &CosetsArgs) -> Result<Outcome> {
    let cosets = all_cosets(a.modulus, a.base)?;
    let lists: Vec<&[usize]> = cosets.iter().map(|c| c.elements()).collect();
    Ok(Outcome { code: EXIT_OK, stdout: to_json(&lists), stderr: String::new() })
}
