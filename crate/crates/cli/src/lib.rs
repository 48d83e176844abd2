//! Workbench behind the `snc` binary: loads instances, runs one command and
//! assembles a [`Report`].

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use snc_core::dependency::{good_edges, is_good_digraph, ComponentIndex};
use snc_core::digraph::{Digraph, Weighting};
use snc_core::forge::{fixture, ForgeError, InstanceSpec, SpecError};
use snc_core::format::{emit_instance, parse_instance, FormatError};
use snc_core::order::{
    analyze, exact_median_order, local_median_order, satisfies_feedback, sediment, LinearOrder, OrderError, SedimentOutcome,
    Tiebreak,
};
use snc_core::sweep::{self, SweepReport};
use snc_core::theorems::{certify, check_hypotheses, snp_set, verdict, TheoremError, TheoremId};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: String, source: FormatError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Forge(#[from] ForgeError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// Where an instance comes from. A command-line argument naming an existing file is a
/// file, one containing `:` is a spec, anything else a fixture name.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum Source {
    File { path: PathBuf },
    Fixture { name: String },
    Spec { spec: String },
}

impl Source {
    pub fn resolve(arg: &str) -> Source {
        let path = PathBuf::from(arg);
        if path.is_file() {
            Source::File { path }
        } else if arg.contains(':') {
            Source::Spec { spec: arg.to_string() }
        } else {
            Source::Fixture { name: arg.to_string() }
        }
    }

    pub fn label(&self) -> String {
        match self {
            Source::File { path } => path.display().to_string(),
            Source::Fixture { name } => format!("fixture:{name}"),
            Source::Spec { spec } => spec.clone(),
        }
    }

    pub fn load(&self) -> Result<(Digraph, Option<Weighting>), CliError> {
        match self {
            Source::File { path } => {
                let label = path.display().to_string();
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: label.clone(), source })?;
                parse_instance(&text).map_err(|source| CliError::Parse { path: label, source })
            }
            Source::Fixture { name } => Ok((fixture(name)?, None)),
            Source::Spec { spec } => Ok((spec.parse::<InstanceSpec>()?.build()?, None)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    Oracle,
    Median { local: bool },
    Sediment { order: Option<String> },
    Delta,
    Verify { theorem: TheoremId },
    Sweep { family: String },
    Gen { spec: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Human,
    Machine,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "human" => Ok(Format::Human),
            "machine" => Ok(Format::Machine),
            _ => Err(format!("unknown format {s:?}; expected human or machine")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    pub instance: Option<Source>,
    pub cap_exact: usize,
    pub seed: u64,
    pub budget: Option<u64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Record wall-clock times; off by default so reports are reproducible.
    pub timings: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            instance: None,
            cap_exact: snc_core::order::DEFAULT_EXACT_CAP,
            seed: 0,
            budget: None,
            format: Format::Human,
            out: None,
            timings: false,
        }
    }

    pub fn with_instance(mut self, source: Source) -> Self {
        self.instance = Some(source);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Info,
    HypothesisFailed,
    Finding,
    Failed,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Info => "info",
            Status::HypothesisFailed => "hypothesis-failed",
            Status::Finding => "finding",
            Status::Failed => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub instance: String,
    /// First 16 hex digits of the SHA-256 of the instance text.
    pub fingerprint: String,
    pub status: Status,
    pub detail: String,
    pub hypotheses: Option<Value>,
    pub certificate: Option<Value>,
    pub findings: Vec<String>,
    pub data: Value,
    pub elapsed_us: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub instances: usize,
    pub pass: usize,
    pub fail: usize,
    pub finding: usize,
    pub gated: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub config: RunConfig,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    /// 0 when everything verified or was gated, 1 on any failure.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            1
        } else {
            0
        }
    }
}

pub fn fingerprint(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(8).fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn record(label: String, text: &str, status: Status, detail: String, data: Value) -> Record {
    Record {
        instance: label,
        fingerprint: fingerprint(text),
        status,
        detail,
        hypotheses: None,
        certificate: None,
        findings: Vec::new(),
        data,
        elapsed_us: None,
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report data serializes")
}

pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    if config.cap_exact == 0 {
        return Err(CliError::Usage("--cap-exact must be at least 1".into()));
    }
    let start = Instant::now();
    let mut records = match &config.command {
        Command::Sweep { family } => run_sweep(family, config)?,
        Command::Gen { spec } => {
            let parsed: InstanceSpec = spec.parse()?;
            let d = parsed.build()?;
            let text = emit_instance(&d, None);
            vec![record(
                parsed.to_string(),
                &text,
                Status::Info,
                format!("{} vertices, {} arcs", d.n(), d.arc_count()),
                json!({ "text": text }),
            )]
        }
        command => {
            let source = config.instance.as_ref().ok_or_else(|| CliError::Usage("this command needs an instance".into()))?;
            let (d, w) = source.load()?;
            vec![run_instance(command, config, source.label(), &d, w)?]
        }
    };
    if config.timings {
        let us = start.elapsed().as_micros() as u64;
        for r in &mut records {
            r.elapsed_us.get_or_insert(us);
        }
    }
    let mut summary = Summary { instances: records.len(), ..Summary::default() };
    for r in &records {
        match r.status {
            Status::Verified | Status::Info => summary.pass += 1,
            Status::HypothesisFailed => summary.gated += 1,
            Status::Finding => summary.finding += 1,
            Status::Failed => summary.fail += 1,
        }
        if r.status != Status::Finding && !r.findings.is_empty() {
            summary.finding += 1;
        }
    }
    Ok(Report { tool_version: TOOL_VERSION.to_string(), config: config.clone(), records, summary })
}

fn run_instance(
    command: &Command,
    config: &RunConfig,
    label: String,
    d: &Digraph,
    w: Option<Weighting>,
) -> Result<Record, CliError> {
    let text = emit_instance(d, w.as_ref());
    let weights = w.clone().unwrap_or_else(|| Weighting::unit(d.n()));
    let rec = match command {
        Command::Oracle => {
            let snp = snp_set(d);
            let verdicts: Vec<_> = (0..d.n()).map(|v| verdict(d, v)).collect();
            let (status, detail) = if snp.is_empty() && d.n() > 0 {
                (Status::Finding, "no vertex has the second neighborhood property".to_string())
            } else {
                (Status::Verified, format!("SNP vertices {snp}"))
            };
            record(label, &text, status, detail, json!({ "snp_set": to_value(&snp), "verdicts": to_value(&verdicts) }))
        }
        Command::Median { local } => {
            let order = if *local {
                local_median_order(d, &weights, &LinearOrder::identity(d.n()))?
            } else {
                exact_median_order(d, &weights, &Tiebreak::None, config.cap_exact)?.order
            };
            let analysis = analyze(d, &weights, &order)?;
            let feedback = satisfies_feedback(d, &weights, &order)?;
            let status = if feedback { Status::Verified } else { Status::Failed };
            let detail = format!("order {order}, forward weight {}, feed {}", analysis.forward_weight, analysis.feed);
            record(
                label,
                &text,
                status,
                detail,
                json!({ "exact": !local, "order": to_value(&order), "analysis": to_value(&analysis), "feedback": feedback }),
            )
        }
        Command::Sediment { order } => {
            let start = match order {
                Some(s) => LinearOrder::for_digraph(d, parse_order(s)?)?,
                None => LinearOrder::identity(d.n()),
            };
            let trace = sediment(d, &weights, &start, config.budget)?;
            let (status, detail) = match trace.outcome {
                _ if !trace.consistent() => {
                    (Status::Finding, "an equality step changed the weight or broke the feedback property".into())
                }
                SedimentOutcome::Stable { q } => (Status::Info, format!("stable after {q} steps")),
                SedimentOutcome::Periodic { start, length } => {
                    (Status::Info, format!("periodic from step {start}, cycle length {length}"))
                }
                SedimentOutcome::BudgetExceeded => (Status::Info, "budget exceeded".into()),
                SedimentOutcome::Invalid { q } => (Status::Info, format!("order at step {q} violates the Lemma 1 inequality")),
            };
            record(label, &text, status, detail, to_value(&trace))
        }
        Command::Delta => {
            let index = ComponentIndex::build(d);
            let goodness = is_good_digraph(d);
            let good = good_edges(d);
            let detail = format!(
                "{} missing edges, {} Δ arcs, {} components, {} good edges, {}",
                index.delta.len(),
                index.delta.arcs().len(),
                index.components.len(),
                good.len(),
                if goodness.good { "good digraph" } else { "not good" }
            );
            record(
                label,
                &text,
                Status::Info,
                detail,
                json!({
                    "delta": to_value(&index.delta),
                    "stats": to_value(&index.delta.stats()),
                    "components": to_value(&index.components),
                    "strong_components": to_value(&index.strong),
                    "k_sets": to_value(&index.k_sets),
                    "xi_sets": to_value(&index.xi_sets),
                    "good_edges": to_value(&good),
                    "goodness": to_value(&goodness),
                }),
            )
        }
        Command::Verify { theorem } => verify(*theorem, config, label, &text, d)?,
        Command::Sweep { .. } | Command::Gen { .. } => unreachable!("handled without an instance"),
    };
    Ok(rec)
}

fn verify(theorem: TheoremId, config: &RunConfig, label: String, text: &str, d: &Digraph) -> Result<Record, CliError> {
    let hypotheses = check_hypotheses(d).into_iter().find(|r| r.theorem == theorem).expect("every theorem is checked");
    let mut rec = match certify(theorem, d, config.cap_exact) {
        Ok(cert) => {
            let mut rec = record(label, text, Status::Verified, format!("witnesses {:?}", cert.witnesses), Value::Null);
            rec.findings = cert.findings.clone();
            rec.certificate = Some(to_value(&cert));
            rec
        }
        Err(e) if e.is_gate() => record(label, text, Status::HypothesisFailed, e.to_string(), Value::Null),
        Err(TheoremError::ExceedsExactCap { n, cap }) => {
            return Err(CliError::Usage(format!("{n} items exceed the exact cap {cap}; raise --cap-exact (at most 20)")))
        }
        Err(e) => record(label, text, Status::Failed, e.to_string(), Value::Null),
    };
    rec.hypotheses = Some(to_value(&hypotheses));
    Ok(rec)
}

fn parse_order(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::Usage(format!("bad vertex {t:?} in --order"))))
        .collect()
}

/// Sweep names accepted by `snc sweep`.
pub const SWEEPS: [&str; 10] = [
    "tournaments-n6",
    "two-witness",
    "gadgets",
    "good-edges",
    "lemma2",
    "lemma3",
    "oracle-n4",
    "oracle-n7",
    "feedback",
    "<theorem-id>",
];

fn suffix_n(family: &str, prefix: &str, max: usize) -> Result<Option<usize>, CliError> {
    let Some(rest) = family.strip_prefix(prefix) else {
        return Ok(None);
    };
    match rest.parse::<usize>() {
        Ok(n) if (1..=max).contains(&n) => Ok(Some(n)),
        _ => Err(CliError::Usage(format!("{family}: n must be between 1 and {max}"))),
    }
}

fn run_sweep(family: &str, config: &RunConfig) -> Result<Vec<Record>, CliError> {
    let seed = config.seed;
    let budget = |default: u64| config.budget.unwrap_or(default);
    let report: SweepReport = if let Some(n) = suffix_n(family, "tournaments-n", 7)? {
        sweep::feed_sweep(n)
    } else if family == "two-witness" {
        sweep::two_witness_sweep(6)
    } else if let Some(n) = suffix_n(family, "two-witness-n", 7)? {
        sweep::two_witness_sweep(n)
    } else if family == "gadgets" {
        sweep::gadget_sweep(2..=8)
    } else if family == "good-edges" {
        sweep::good_edge_sweep(budget(1000), seed)
    } else if family == "lemma2" {
        sweep::sedimentation_sweep(budget(6000), seed)
    } else if family == "lemma3" {
        sweep::lemma3_sweep(budget(600), seed)
    } else if let Some(n) = suffix_n(family, "oracle-n", 7)? {
        if n <= 5 {
            sweep::oracle_exhaustive(n)
        } else {
            sweep::oracle_random(n, budget(100_000), seed)
        }
    } else if family == "feedback" {
        sweep::feedback_sweep(budget(1000), seed)
    } else {
        let id = family.strip_prefix("theorem:").unwrap_or(family);
        let theorem: TheoremId = id
            .parse()
            .map_err(|_| CliError::Usage(format!("unknown sweep {family:?}; expected one of {}", SWEEPS.join(", "))))?;
        sweep::theorem_sweep(theorem, budget(100) as usize, 14, seed, 1500, 30)
    };
    Ok(sweep_records(&report))
}

/// A summary record for the sweep, then one record per flagged instance, sorted by fingerprint.
fn sweep_records(report: &SweepReport) -> Vec<Record> {
    let status = if report.passed() { Status::Verified } else { Status::Failed };
    let detail = format!(
        "{} checked of {} generated, {} failures, {} findings",
        report.checked,
        report.generated,
        report.failures.len(),
        report.findings.len()
    );
    let head = record(
        format!("sweep:{}", report.name),
        &report.name,
        status,
        detail,
        json!({ "checked": report.checked, "generated": report.generated, "counters": to_value(&report.counters) }),
    );
    let mut flagged: Vec<Record> = report
        .failures
        .iter()
        .map(|f| (Status::Failed, f))
        .chain(report.findings.iter().map(|f| (Status::Finding, f)))
        .map(|(status, f)| {
            let fp = fingerprint(&f.instance);
            record(format!("{}#{fp}", report.name), &f.instance, status, f.detail.clone(), json!({ "text": f.instance }))
        })
        .collect();
    flagged.sort_by(|a, b| (&a.fingerprint, a.status.as_str(), &a.detail).cmp(&(&b.fingerprint, b.status.as_str(), &b.detail)));
    let mut out = vec![head];
    out.extend(flagged);
    out
}

/// Renders a report.
///
/// Machine format is JSON Lines: a `run` object with the version and config, one
/// `instance` object per record (fields as in [`Record`]), and a closing `summary` object.
pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Machine => {
            let mut out = String::new();
            let head = json!({ "kind": "run", "tool_version": report.tool_version, "config": to_value(&report.config) });
            let _ = writeln!(out, "{head}");
            for r in &report.records {
                let mut v = to_value(r);
                v.as_object_mut().expect("record is an object").insert("kind".into(), json!("instance"));
                let _ = writeln!(out, "{v}");
            }
            let mut s = to_value(&report.summary);
            s.as_object_mut().expect("summary is an object").insert("kind".into(), json!("summary"));
            let _ = writeln!(out, "{s}");
            out
        }
        Format::Human => {
            let mut out = format!("snc {}\n", report.tool_version);
            let width = report.records.iter().map(|r| r.instance.len()).max().unwrap_or(8).clamp(8, 48);
            let _ = writeln!(out, "{:<17} {:<16} {:<width$} detail", "status", "fingerprint", "instance");
            for r in &report.records {
                let detail = r.detail.lines().next().unwrap_or("");
                let _ = writeln!(out, "{:<17} {:<16} {:<width$} {detail}", r.status.as_str(), r.fingerprint, r.instance);
                for f in &r.findings {
                    let _ = writeln!(out, "{:<17} {:<16} {:<width$} {f}", "  finding", "", "");
                }
                if let Some(us) = r.elapsed_us {
                    let _ = writeln!(out, "{:<17} {:<16} {:<width$} {:.3} ms", "  time", "", "", us as f64 / 1000.0);
                }
            }
            let s = &report.summary;
            let _ = writeln!(
                out,
                "{} instances: {} pass, {} fail, {} finding, {} hypothesis-failed",
                s.instances, s.pass, s.fail, s.finding, s.gated
            );
            out
        }
    }
}
