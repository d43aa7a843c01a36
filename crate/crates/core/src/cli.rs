//! The `varlat` commands as library functions writing to any [`Write`].
//!
//! The binary only parses arguments, calls into here and maps errors to exit codes.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::check::{axioms_suite, default_suites, SuiteReport};
use crate::error::{Error, Result};
use crate::lattice::LatticeJson;
use crate::pipeline::PipelineStats;
use crate::poset::{enumerate_posets, Poset, PosetJson, MAX_ENUMERATION_SIZE};
use crate::subdirect::ConnectionFamily;
use crate::variety::{fm_finite, free_lattice, FreeLattice, FreeOptions, SiCount, VarietySpec, DEFAULT_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

/// Largest batch size that is computed rather than only classified.
pub const BATCH_COMPUTE_LIMIT: usize = 6;

/// Bad input exits with 2, resource limits with 3, failed cross-checks with 4.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::UnknownElement(_)
        | Error::DuplicateElement(_)
        | Error::Cycle(_)
        | Error::NotACover { .. }
        | Error::NotALattice(..)
        | Error::InvalidArgument(_)
        | Error::NotModular
        | Error::Axioms(_)
        | Error::Io(_) => EXIT_PARSE,
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::OracleMismatch(_) | Error::Reconstruction(_) => EXIT_ORACLE,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Count,
    Json,
    Dot,
    Table,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "count" => Ok(OutputFormat::Count),
            "json" => Ok(OutputFormat::Json),
            "dot" => Ok(OutputFormat::Dot),
            "table" => Ok(OutputFormat::Table),
            other => Err(Error::Parse(format!("unknown output format `{other}` (count, json, dot, table)"))),
        }
    }
}

/// Where the poset comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosetSource {
    /// `.json` files hold a [`PosetJson`]; anything else is read as DSL text.
    File(PathBuf),
    Dsl(String),
    /// `chain:N`, `antichain:N` or `sum:1+1+2`.
    Generated(String),
}

impl PosetSource {
    /// Existing paths are files, `kind:args` is generated, the rest is DSL.
    pub fn from_arg(arg: &str) -> Self {
        let path = Path::new(arg);
        if path.is_file() || arg.ends_with(".json") {
            PosetSource::File(path.to_path_buf())
        } else if ["chain:", "antichain:", "sum:"].iter().any(|k| arg.starts_with(k)) {
            PosetSource::Generated(arg.to_string())
        } else {
            PosetSource::Dsl(arg.to_string())
        }
    }

    pub fn load(&self) -> Result<Poset> {
        match self {
            PosetSource::Dsl(text) => Poset::parse_dsl(text),
            PosetSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                if path.extension().is_some_and(|e| e == "json") {
                    Poset::from_json_str(&text)
                } else {
                    Poset::parse_dsl(text.trim())
                }
            }
            PosetSource::Generated(recipe) => {
                let (kind, arg) = recipe.split_once(':').expect("generated sources contain `:`");
                let number = |s: &str| -> Result<usize> {
                    s.trim().parse().map_err(|_| Error::Parse(format!("bad size `{s}` in `{recipe}`")))
                };
                match kind {
                    "chain" => Ok(Poset::chain(number(arg)?)),
                    "antichain" => Ok(Poset::antichain(number(arg)?)),
                    _ => {
                        let parts = arg.split('+').map(number).collect::<Result<Vec<_>>>()?;
                        Poset::sum(&parts)
                    }
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub poset: Option<PosetSource>,
    pub variety: String,
    pub out: OutputFormat,
    pub oracle: bool,
    pub cap: usize,
    pub check_good_only: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            poset: None,
            variety: "m3".into(),
            out: OutputFormat::Count,
            oracle: false,
            cap: DEFAULT_CAP,
            check_good_only: false,
        }
    }
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if self.cap == 0 {
            return Err(Error::InvalidArgument("cap must be positive".into()));
        }
        Ok(())
    }

    fn options(&self) -> FreeOptions {
        FreeOptions {
            cap: Some(self.cap),
            oracle: self.oracle,
        }
    }

    fn load_poset(&self) -> Result<Poset> {
        self.poset
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("--poset is required".into()))?
            .load()
    }
}

#[derive(Serialize)]
struct ComputeJson<'a> {
    poset: String,
    variety: &'a str,
    cardinality: u128,
    s: usize,
    t: &'a [SiCount],
    length: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pipeline: Option<&'a PipelineStats>,
}

#[derive(Serialize)]
struct ExportJson<'a> {
    #[serde(flatten)]
    summary: ComputeJson<'a>,
    generators: PosetJson,
    factors: Vec<FactorJson<'a>>,
    lattice: LatticeJson,
}

#[derive(Serialize)]
struct FactorJson<'a> {
    si: &'a str,
    labelling: Vec<&'a str>,
}

fn summary_json(free: &FreeLattice) -> ComputeJson<'_> {
    ComputeJson {
        poset: free.poset.to_dsl(),
        variety: &free.variety,
        cardinality: free.stats.cardinality,
        s: free.stats.s,
        t: &free.stats.t,
        length: free.stats.length,
        pipeline: free.stats.pipeline.as_ref(),
    }
}

/// `compute`: the summary line by default, or any other format.
pub fn cmd_compute(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    cfg.validate()?;
    let p = cfg.load_poset()?;
    let v = VarietySpec::from_name(&cfg.variety)?;
    let free = free_lattice(&p, &v, &cfg.options())?;
    match cfg.out {
        OutputFormat::Count => writeln!(out, "{}", free.stats.summary())?,
        OutputFormat::Json => writeln!(out, "{}", serde_json::to_string(&summary_json(&free))?)?,
        OutputFormat::Dot => write!(out, "{}", free.to_lattice()?.to_dot())?,
        OutputFormat::Table => write!(out, "{}", render_table(&free))?,
    }
    Ok(())
}

/// `export`: like `compute`, but `json` carries the whole lattice.
pub fn cmd_export(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    if cfg.out != OutputFormat::Json {
        return cmd_compute(cfg, out);
    }
    cfg.validate()?;
    let p = cfg.load_poset()?;
    let v = VarietySpec::from_name(&cfg.variety)?;
    let free = free_lattice(&p, &v, &cfg.options())?;
    let factors = free
        .factors
        .iter()
        .map(|f| {
            let si = &v.irreducibles[f.si];
            FactorJson {
                si: &f.si_name,
                labelling: f.labelling.iter().map(|&x| si.name(x)).collect(),
            }
        })
        .collect();
    let doc = ExportJson {
        summary: summary_json(&free),
        generators: p.to_json(),
        factors,
        lattice: free.to_lattice()?.to_json(),
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    Ok(())
}

/// Row contexts and surviving rows for the pipeline path, element tuples otherwise.
pub fn render_table(free: &FreeLattice) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {} in {}: {}", free.poset.to_dsl(), free.variety, free.stats.summary());
    match free.assembly() {
        Some(a) => {
            let ground: Vec<String> = (0..a.ground.len())
                .map(|p| {
                    let (i, x) = a.ground.origin(p);
                    format!("{}_{i}", free.family.factors()[i].name(x))
                })
                .collect();
            let _ = writeln!(s, "ground {}", ground.join(" "));
            s.push_str(&a.render_contexts());
            let _ = writeln!(s, "result ({} rows)", a.family.rows().len());
            s.push_str(&a.family.render());
        }
        None => {
            for t in free.tuples() {
                let names: Vec<&str> = t
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| free.family.factors()[i].name(x as usize))
                    .collect();
                let _ = writeln!(s, "({})", names.join(","));
            }
        }
    }
    s
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct BatchLine {
    pub poset: String,
    pub good: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fd: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct BatchSummary {
    pub size: usize,
    pub variety: String,
    pub posets: usize,
    pub good: usize,
    pub completed: usize,
    pub skipped: usize,
}

/// One line per poset class; cap failures are marked, other errors abort.
pub fn batch_line(p: &Poset, v: &VarietySpec, fd: &VarietySpec, opts: &FreeOptions) -> Result<BatchLine> {
    let mut line = BatchLine {
        poset: p.to_dsl(),
        good: fm_finite(p),
        fd: None,
        free: None,
        s: None,
        t: None,
        length: None,
        skipped: None,
    };
    let skip = |e: Error, line: &mut BatchLine| -> Result<()> {
        match e {
            Error::CapExceeded { .. } => {
                line.skipped = Some(e.to_string());
                Ok(())
            }
            other => Err(other),
        }
    };
    match free_lattice(p, fd, opts) {
        Ok(l) => line.fd = Some(l.cardinality()),
        Err(e) => skip(e, &mut line)?,
    }
    match free_lattice(p, v, opts) {
        Ok(l) => {
            line.free = Some(l.cardinality());
            line.s = Some(l.stats.s);
            line.t = Some(l.stats.t_total());
            line.length = Some(l.stats.length);
        }
        Err(e) => skip(e, &mut line)?,
    }
    Ok(line)
}

/// `batch n`: JSON lines in canonical poset order, then a summary line.
/// With `check_good_only` nothing is computed; only good classes are listed.
pub fn cmd_batch(n: usize, cfg: &RunConfig, out: &mut dyn Write) -> Result<BatchSummary> {
    cfg.validate()?;
    let limit = if cfg.check_good_only { MAX_ENUMERATION_SIZE } else { BATCH_COMPUTE_LIMIT };
    if n == 0 || n > limit {
        return Err(Error::InvalidArgument(format!("batch size {n} outside 1..={limit}")));
    }
    let v = VarietySpec::from_name(&cfg.variety)?;
    let fd = VarietySpec::distributive();
    let posets = enumerate_posets(n)?;
    let mut summary = BatchSummary {
        size: n,
        variety: v.name.clone(),
        posets: posets.len(),
        ..Default::default()
    };
    for p in &posets {
        let good = fm_finite(p);
        summary.good += good as usize;
        if cfg.check_good_only {
            if good {
                writeln!(out, "{}", serde_json::json!({ "poset": p.to_dsl(), "good": true }))?;
            }
            continue;
        }
        let line = batch_line(p, &v, &fd, &cfg.options())?;
        if line.skipped.is_some() {
            summary.skipped += 1;
        } else {
            summary.completed += 1;
        }
        writeln!(out, "{}", serde_json::to_string(&line)?)?;
    }
    writeln!(out, "{}", serde_json::json!({ "summary": summary }))?;
    Ok(summary)
}

/// `check`: the default suites, or the axioms of one family file.
/// Any failing suite is reported as an oracle mismatch.
pub fn cmd_check(family: Option<&Path>, out: &mut dyn Write) -> Result<Vec<SuiteReport>> {
    let reports = match family {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            vec![axioms_suite(&ConnectionFamily::from_json_str(&text)?)]
        }
        None => default_suites(),
    };
    for r in &reports {
        writeln!(out, "{r}")?;
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name.as_str()).collect();
    if !failed.is_empty() {
        return Err(Error::OracleMismatch(format!("failing suites: {}", failed.join(", "))));
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(cfg: &RunConfig) -> Result<String> {
        let mut buf = Vec::new();
        cmd_compute(cfg, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    fn dsl(text: &str) -> RunConfig {
        RunConfig {
            poset: Some(PosetSource::from_arg(text)),
            ..Default::default()
        }
    }

    #[test]
    fn compute_count() {
        assert_eq!(run(&dsl("a;b;c")).unwrap(), "28 (s=6, t=1, length=8)\n");
        assert_eq!(run(&dsl("chain:4")).unwrap(), "4 (s=3, t=0, length=3)\n");
    }

    #[test]
    fn source_detection() {
        assert_eq!(PosetSource::from_arg("a<b"), PosetSource::Dsl("a<b".into()));
        assert_eq!(PosetSource::from_arg("sum:1+2"), PosetSource::Generated("sum:1+2".into()));
        assert!(matches!(PosetSource::from_arg("x.json"), PosetSource::File(_)));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&run(&dsl("a<b, b<a")).unwrap_err()), EXIT_PARSE);
        assert_eq!(exit_code(&run(&dsl("missing.json")).unwrap_err()), EXIT_PARSE);
        let capped = RunConfig { cap: 10, ..dsl("a;b;c") };
        assert_eq!(exit_code(&run(&capped).unwrap_err()), EXIT_CAP);
        let zero = RunConfig { cap: 0, ..dsl("a") };
        assert_eq!(exit_code(&run(&zero).unwrap_err()), EXIT_PARSE);
    }

    #[test]
    fn batch_two() {
        let mut buf = Vec::new();
        let s = cmd_batch(2, &RunConfig::default(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(s.posets, 2);
        assert_eq!(text.lines().count(), 3);
        assert!(text.contains(r#""free":4"#));
    }

    #[test]
    fn table_and_dot() {
        let t = run(&RunConfig { out: OutputFormat::Table, ..dsl("a;b") }).unwrap();
        assert!(t.starts_with("# a;b in m3: 4 (s=2, t=0, length=2)\nground "), "{t}");
        let d = run(&RunConfig { out: OutputFormat::Dot, ..dsl("a;b") }).unwrap();
        assert!(d.starts_with("digraph lattice {"));
        assert!(d.contains("a"));
    }
}
