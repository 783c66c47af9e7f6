use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use workbench_core::chevalley::{build_algebra, CartanDatum};
use workbench_core::parabolic::build_parabolic;
use workbench_core::suites::{
    default_case_matrix, CaseSpec, Status, SuiteError, SuiteResult, Workbench, DEFAULT_MAX_WORD_LEN, DEFAULT_SEED,
    SUITE_NAMES,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "workbench", version, about = "Exact verification runner for parabolic twist data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites and report pass / fail / hypothesis-gated per case
    Verify {
        /// Suite to run (repeatable); all suites by default
        #[arg(long = "suite", value_name = "NAME")]
        suites: Vec<String>,
        /// Case as TYPE:Γ, e.g. A3:1,3 or B2:- (repeatable); default matrix otherwise
        #[arg(long = "case", value_name = "TYPE:Γ")]
        cases: Vec<String>,
        /// Add the D4 cases to the default matrix
        #[arg(long)]
        include_d4: bool,
        #[arg(long, env = "WORKBENCH_SEED", value_parser = parse_seed)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_MAX_WORD_LEN as u64, value_parser = clap::value_parser!(u64).range(1..=64))]
        max_word_len: u64,
        /// Write the JSON report here
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Treat hypothesis-gated results as failures
        #[arg(long)]
        strict_hypotheses: bool,
        /// Print every check, not only the failing and gated ones
        #[arg(long, short)]
        verbose: bool,
    },
    /// Print the dimension report of a parabolic
    Dossier {
        #[arg(long, value_name = "TYPE:Γ")]
        case: String,
    },
    /// Print a Richardson element and its tangent dimension
    Richardson {
        #[arg(long, value_name = "TYPE:Γ")]
        case: String,
    },
}

/// Decimal or `0x` hexadecimal.
fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => t.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

mod decimal {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &usize, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    #[serde(with = "decimal")]
    pub total: usize,
    #[serde(with = "decimal")]
    pub pass: usize,
    #[serde(with = "decimal")]
    pub fail: usize,
    #[serde(with = "decimal", rename = "hypothesis-gated")]
    pub hypothesis_gated: usize,
    #[serde(with = "decimal")]
    pub skipped: usize,
}

impl Summary {
    pub fn tally(results: &[SuiteResult]) -> Self {
        let mut s = Summary {
            total: results.len(),
            ..Summary::default()
        };
        for r in results {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::HypothesisGated => s.hypothesis_gated += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool_version: String,
    /// Unix seconds, taken from `SOURCE_DATE_EPOCH` (default 0) so reports are reproducible.
    pub timestamp: String,
    pub cases: Vec<CaseSpec>,
    pub suites: Vec<SuiteResult>,
    pub summary: Summary,
}

impl ReportDocument {
    pub fn new(cases: Vec<CaseSpec>, suites: Vec<SuiteResult>) -> Self {
        let timestamp = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
            .unwrap_or(0)
            .to_string();
        ReportDocument {
            tool_version: TOOL_VERSION.to_string(),
            timestamp,
            summary: Summary::tally(&suites),
            cases,
            suites,
        }
    }

    /// Keys sorted at every level, two-space indent, trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> anyhow::Result<Self> {
        let doc: ReportDocument = serde_json::from_str(s)?;
        if doc.summary != Summary::tally(&doc.suites) {
            bail!("summary counts disagree with the suite statuses");
        }
        Ok(doc)
    }
}

/// Parses case tokens; the error echoes the offending token.
pub fn parse_cases(tokens: &[String], seed: u64, max_word_len: usize) -> Result<Vec<CaseSpec>, SuiteError> {
    let mut cases = tokens
        .iter()
        .map(|t| CaseSpec::parse(t.trim(), seed, max_word_len))
        .collect::<Result<Vec<_>, _>>()?;
    cases.sort();
    cases.dedup();
    Ok(cases)
}

pub fn run_verify(suites: &[&str], cases: &[CaseSpec]) -> Result<Vec<SuiteResult>, SuiteError> {
    let bench = Workbench::for_cases(cases);
    let mut out = Vec::new();
    for s in suites {
        out.extend(bench.run(s, cases)?);
    }
    Ok(out)
}

fn render_table(results: &[SuiteResult], verbose: bool) -> String {
    let mut s = String::new();
    let width = results.iter().map(|r| r.suite.len()).max().unwrap_or(0);
    for r in results {
        let _ = writeln!(s, "{:<w$}  {:<10}  {}", r.suite, r.case.label(), r.status, w = width);
        for c in &r.checks {
            if verbose || matches!(c.status, Status::Fail | Status::HypothesisGated) {
                let _ = writeln!(
                    s,
                    "    [{}] {}: expected {}, got {}",
                    c.status, c.name, c.expected, c.actual
                );
                if let Some(w) = &c.witness {
                    if !w.is_empty() {
                        let _ = writeln!(s, "        witness: {w}");
                    }
                }
            }
        }
    }
    s
}

fn usage_error(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    2
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Verify {
            suites,
            cases,
            include_d4,
            seed,
            max_word_len,
            json,
            strict_hypotheses,
            verbose,
        } => {
            let seed = seed.unwrap_or(DEFAULT_SEED);
            let max_word_len = max_word_len as usize;
            let cases = if cases.is_empty() {
                default_case_matrix(include_d4, seed, max_word_len)
            } else {
                match parse_cases(&cases, seed, max_word_len) {
                    Ok(c) => c,
                    Err(e) => return usage_error(e),
                }
            };
            let names: Vec<&str> = if suites.is_empty() {
                SUITE_NAMES.to_vec()
            } else {
                let mut picked = Vec::new();
                for s in &suites {
                    match SUITE_NAMES.iter().find(|n| **n == s.as_str()) {
                        Some(n) if !picked.contains(n) => picked.push(*n),
                        Some(_) => {}
                        None => return usage_error(SuiteError::UnknownSuite(s.clone())),
                    }
                }
                picked
            };
            let results = match run_verify(&names, &cases) {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            };
            let doc = ReportDocument::new(cases, results);
            print!("{}", render_table(&doc.suites, verbose));
            let sm = &doc.summary;
            println!(
                "{} results: {} pass, {} fail, {} hypothesis-gated, {} skipped",
                sm.total, sm.pass, sm.fail, sm.hypothesis_gated, sm.skipped
            );
            if let Some(path) = json {
                if let Err(e) = std::fs::write(&path, doc.to_canonical_json()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 1;
                }
            }
            if sm.fail > 0 || (strict_hypotheses && sm.hypothesis_gated > 0) {
                1
            } else {
                0
            }
        }
        Command::Dossier { case } => single_case(&case, dossier),
        Command::Richardson { case } => single_case(&case, richardson),
    }
}

fn single_case(token: &str, f: fn(&CaseSpec) -> anyhow::Result<String>) -> i32 {
    let case = match CaseSpec::parse(token.trim(), DEFAULT_SEED, DEFAULT_MAX_WORD_LEN) {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    match f(&case) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

pub fn dossier(case: &CaseSpec) -> anyhow::Result<String> {
    let alg = build_algebra(&CartanDatum::from_label(case.type_label)).context("building the algebra")?;
    let pd = build_parabolic(Arc::new(alg), &case.gamma_zero_based()).context("building the parabolic")?;
    let rep = pd.dimension_report();
    let mut s = String::new();
    let _ = writeln!(s, "case {}", rep.case);
    let rows = rep.rows();
    let w = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    for (k, v) in rows {
        let pad = w - k.chars().count();
        let _ = writeln!(s, "  {k}{}  {v}", " ".repeat(pad));
    }
    let _ = writeln!(
        s,
        "  leaf_dim = 2 dim C: {}",
        if rep.leaf_identity_holds() { "holds" } else { "FAILS" }
    );
    let h1 = pd.hypothesis_h1();
    match h1.witness {
        None => {
            let _ = writeln!(s, "  H1 [[l,l],u] ⊆ [u,u]: holds");
        }
        Some(w) => {
            let _ = writeln!(
                s,
                "  H1 [[l,l],u] ⊆ [u,u]: fails, [{}, {}] = {} ∉ [u,u]",
                w.left, w.right, w.bracket
            );
        }
    }
    Ok(s)
}

pub fn richardson(case: &CaseSpec) -> anyhow::Result<String> {
    let alg = build_algebra(&CartanDatum::from_label(case.type_label)).context("building the algebra")?;
    let pd = build_parabolic(Arc::new(alg), &case.gamma_zero_based()).context("building the parabolic")?;
    let cert = pd.find_richardson()?;
    let torsor = pd.torsor_certificate(&cert)?;
    let mut s = String::new();
    let _ = writeln!(s, "case {}", case.label());
    let _ = writeln!(s, "  x = {}", pd.alg().describe(&cert.element));
    let _ = writeln!(s, "  dim [p, x] = {} (dim u = {})", cert.tangent.dim(), pd.u.dim());
    let _ = writeln!(s, "  open orbit: {}", if cert.is_open { "yes" } else { "no" });
    let inv: Vec<String> = torsor.invariants.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(s, "  stabilizer in h_Γ: dim {}", torsor.stabilizer_dim);
    let _ = writeln!(s, "  Smith invariants of the characters: [{}]", inv.join(", "));
    let _ = writeln!(
        s,
        "  torus acts freely: {}",
        if torsor.infinitesimal_free && torsor.lattice_generating { "yes" } else { "no" }
    );
    Ok(s)
}
