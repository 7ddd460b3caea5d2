//! Command-line front end.
//!
//! Every command prints (or writes with `--output`) a single JSON document
//! `{"manifest": .., "result": ..}`; the manifest carries the command,
//! parameters, seed, crate version, timestamp and output path, while
//! `result` depends only on the parameters. `subspace` emits CSV instead and
//! `search` additionally appends one JSON line per record to `--log`.
//!
//! Exit codes: 0 success, 1 failed verification, 2 input or domain error,
//! 3 bracket error.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bipartite::{
    mapped_dicke_rank, ppt_is_entangled, ppt_threshold, schmidt, DEFAULT_SCHMIDT_TOL,
};
use crate::error::{Error, Result};
use crate::geomeasure::{geometric_measure, mapped_lower_bound, mes_candidate, DEFAULT_STARTS};
use crate::mapping::{decompose, map_mixed, map_pure, AmplitudeMatrix, SymmetricDensity};
use crate::search::{self, Proxy, SearchConfig};
use crate::subspace::{gd_sweep, sweep_csv, DEFAULT_G_STARTS};
use crate::symcore::{dicke, ghz, w_state, SymmetricState};
use crate::verify;

#[derive(Debug, Parser)]
#[command(
    name = "symmap",
    version,
    about = "Entanglement of symmetric N-qubit states via their two-qudit image"
)]
pub struct Cli {
    /// Write the result here (atomically) instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Map a state and report its amplitude matrix, subspace weights and Schmidt data.
    Map(MapArgs),
    /// Closed-form and numerical Schmidt ranks of mapped Dicke, W and GHZ states.
    Rank(RankArgs),
    /// PPT test on a mixture family, at one point or as a bisected threshold.
    Detect(DetectArgs),
    /// Geometric measure of a state, or the comparison table of known states.
    Gm(GmArgs),
    /// Proxy-driven search for highly entangled states.
    Search(SearchArgs),
    /// Lower bound g_d of the complementary subspace as CSV.
    Subspace(SubspaceArgs),
    /// Run the reproduction checks and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(group(ArgGroup::new("state").args(STATE_FLAGS)))]
pub struct StateArgs {
    /// Dicke state `N,k`.
    #[arg(long, value_name = "N,k")]
    pub dicke: Option<String>,
    /// GHZ state on N qubits.
    #[arg(long, value_name = "N")]
    pub ghz: Option<usize>,
    /// W state on N qubits.
    #[arg(long, value_name = "N")]
    pub w: Option<usize>,
    /// Known maximally entangled candidate (N in 4, 6, 8, 10, 12, 20).
    #[arg(long, value_name = "N")]
    pub mes: Option<usize>,
    /// Real Dicke amplitudes `c0,c1,...,cN`; rescaled to unit norm.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    /// JSON file with complex Dicke amplitudes as `[re, im]` pairs.
    #[arg(long, value_name = "PATH")]
    pub coeffs_file: Option<PathBuf>,
}

const STATE_FLAGS: [&str; 6] = ["dicke", "ghz", "w", "mes", "coeffs", "coeffs_file"];

#[derive(Debug, Clone, Args, Serialize)]
#[command(group(ArgGroup::new("input").required(true).args(STATE_FLAGS)))]
pub struct MapArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RankArgs {
    /// Number of qubits (even).
    #[arg(long)]
    pub n: usize,
    /// Schmidt cut relative to the largest coefficient.
    #[arg(long, default_value_t = DEFAULT_SCHMIDT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `p W + (1 - p) 1/(N+1)`
    WMix,
    /// `p GHZ + (1 - p) 1/(N+1)`
    GhzMix,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(group(ArgGroup::new("mode").required(true).args(["p", "threshold"])))]
pub struct DetectArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Family::WMix)]
    pub family: Family,
    /// Mixing weight of the pure state.
    #[arg(long)]
    pub p: Option<f64>,
    /// Bisect for the smallest detected weight.
    #[arg(long)]
    pub threshold: bool,
    #[arg(long, default_value_t = 0.0)]
    pub lo: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Table {
    Mes,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(group(ArgGroup::new("input").required(true).args(STATE_FLAGS).arg("table")))]
pub struct GmArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub state: StateArgs,
    /// Regenerate a comparison table instead of analyzing one state.
    #[arg(long, value_enum)]
    pub table: Option<Table>,
    /// Lattice starts of the product-state search.
    #[arg(long, default_value_t = DEFAULT_STARTS)]
    pub starts: usize,
    #[arg(long, env = "SYMMAP_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProxyChoice {
    Purity,
    Det,
    Both,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = ProxyChoice::Both)]
    pub proxy: ProxyChoice,
    /// Restarts per proxy; 200 up to N = 12 and 500 beyond by default.
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long, env = "SYMMAP_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,
    /// JSON Lines log each record is appended to.
    #[arg(long, default_value = "search_results.jsonl")]
    pub log: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SubspaceArgs {
    #[arg(long, default_value_t = 20)]
    pub dmax: usize,
    #[arg(long, default_value_t = DEFAULT_G_STARTS)]
    pub starts: usize,
    #[arg(long, env = "SYMMAP_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, env = "SYMMAP_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Comma-separated subset of check ids.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub version: String,
    pub timestamp: String,
    pub output: Option<PathBuf>,
}

impl RunManifest {
    fn new(command: &str, params: Value, seed: Option<u64>, output: Option<&Path>) -> Self {
        Self {
            command: command.to_string(),
            params,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            output: output.map(Path::to_path_buf),
        }
    }
}

impl StateArgs {
    pub fn resolve(&self) -> Result<SymmetricState> {
        if let Some(spec) = &self.dicke {
            let parts = parse_list::<usize>(spec)?;
            let [n, k] = parts[..] else {
                return Err(Error::Parse {
                    line: 1,
                    column: 1,
                    msg: format!("expected N,k, got '{spec}'"),
                });
            };
            return dicke(n, k);
        }
        if let Some(n) = self.ghz {
            return ghz(n);
        }
        if let Some(n) = self.w {
            return w_state(n);
        }
        if let Some(n) = self.mes {
            return mes_candidate(n);
        }
        if let Some(list) = &self.coeffs {
            return SymmetricState::from_real(&parse_list::<f64>(list)?);
        }
        if let Some(path) = &self.coeffs_file {
            return parse_coeffs_json(&fs::read_to_string(path)?);
        }
        Err(Error::Domain("no state given".into()))
    }
}

/// Comma-separated values on one line; errors carry the 1-based column of
/// the offending token.
fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>> {
    let mut column = 1;
    let mut out = Vec::new();
    for token in text.split(',') {
        let trimmed = token.trim();
        let offset = token.len() - token.trim_start().len();
        out.push(trimmed.parse().map_err(|_| Error::Parse {
            line: 1,
            column: column + offset,
            msg: format!("cannot read '{trimmed}' as a number"),
        })?);
        column += token.chars().count() + 1;
    }
    Ok(out)
}

/// Accepts `[[re, im], ...]`, `{"coeffs": [...]}` or a `map`/`gm` output
/// document (`result.state.coeffs`).
pub fn parse_coeffs_json(text: &str) -> Result<SymmetricState> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let pairs = doc
        .pointer("/result/state/coeffs")
        .or_else(|| doc.get("coeffs"))
        .unwrap_or(&doc);
    let pairs: Vec<[f64; 2]> = serde_json::from_value(pairs.clone()).map_err(|e| Error::Parse {
        line: 1,
        column: 1,
        msg: format!("expected an array of [re, im] pairs: {e}"),
    })?;
    let coeffs: Vec<Complex64> = pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    // unit-norm input is kept bit for bit
    SymmetricState::new(coeffs.clone()).or_else(|_| SymmetricState::normalized(coeffs))
}

/// Writes through a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        name.to_string_lossy(),
        std::process::id()
    ));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(result?)
}

/// Appends one line and flushes.
pub fn append_json_line(path: &Path, value: &Value) -> Result<()> {
    let mut line = serde_json::to_string(value).expect("json value");
    line.push('\n');
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    f.write_all(line.as_bytes())?;
    f.sync_data()?;
    Ok(())
}

fn params_of<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn document(manifest: RunManifest, result: Value) -> String {
    let mut text = serde_json::to_string_pretty(&json!({ "manifest": manifest, "result": result }))
        .expect("json");
    text.push('\n');
    text
}

fn state_json(state: &SymmetricState) -> Value {
    serde_json::to_value(state).expect("state serializes")
}

fn cmd_map(args: &MapArgs) -> Result<Value> {
    let state = args.state.resolve()?;
    let psi = map_pure(&state)?;
    let dec = decompose(&psi)?;
    let sd = schmidt(&psi, DEFAULT_SCHMIDT_TOL);
    Ok(json!({
        "state": state_json(&state),
        "dim": psi.dim(),
        "amplitudes": AmplitudeMatrix::from(&psi),
        "weights": { "image": dec.weights.0, "complement": dec.weights.1 },
        "schmidt": sd,
    }))
}

fn cmd_rank(args: &RankArgs) -> Result<Value> {
    let n = args.n;
    let mut rows = Vec::new();
    for k in 0..=n {
        let numeric = schmidt(&map_pure(&dicke(n, k)?)?, args.tol).rank;
        rows.push(json!({ "k": k, "closed_form": mapped_dicke_rank(n, k)?, "numerical": numeric }));
    }
    Ok(json!({
        "n": n,
        "dicke": rows,
        "w": schmidt(&map_pure(&w_state(n)?)?, args.tol).rank,
        "ghz": schmidt(&map_pure(&ghz(n)?)?, args.tol).rank,
    }))
}

fn family_state(family: Family, n: usize, p: f64) -> Result<SymmetricDensity> {
    match family {
        Family::WMix => SymmetricDensity::w_mixture(n, p),
        Family::GhzMix => SymmetricDensity::ghz_mixture(n, p),
    }
}

fn cmd_detect(args: &DetectArgs) -> Result<Value> {
    if args.threshold {
        let t = ppt_threshold(
            |p| map_mixed(&family_state(args.family, args.n, p)?),
            args.lo,
            args.hi,
        )?;
        return Ok(json!({ "n": args.n, "family": args.family, "threshold": t }));
    }
    let p = args.p.expect("clap enforces --p or --threshold");
    let v = ppt_is_entangled(&map_mixed(&family_state(args.family, args.n, p)?)?)?;
    Ok(json!({
        "n": args.n,
        "family": args.family,
        "p": p,
        "verdict": if v.entangled { "NPT" } else { "PPT" },
        "entangled": v.entangled,
        "min_eigenvalue": v.min_eigenvalue,
    }))
}

fn cmd_gm(args: &GmArgs) -> Result<Value> {
    if args.table.is_some() {
        let mut rows = Vec::new();
        for n in (4..=30).step_by(2) {
            let candidate = match mes_candidate(n) {
                Ok(s) => Some(geometric_measure(&s, args.starts, args.seed).value),
                Err(Error::NotTabulated(_)) => None,
                Err(e) => return Err(e),
            };
            let omega = SymmetricState::from_real(&search::published_omega(n)?)?;
            rows.push(json!({
                "n": n,
                "omega_star": geometric_measure(&omega, args.starts, args.seed).value,
                "omega_star_reported": search::published_e(n),
                "mes": candidate,
                "mes_reported": search::mes_e(n),
                "upper_bound": 1.0 - 1.0 / (n as f64 + 1.0),
            }));
        }
        return Ok(json!({ "table": "mes", "rows": rows }));
    }
    let state = args.state.resolve()?;
    let r = geometric_measure(&state, args.starts, args.seed);
    let lower = if state.n_qubits() % 2 == 0 {
        Some(mapped_lower_bound(&state)?)
    } else {
        None
    };
    Ok(json!({
        "state": state_json(&state),
        "geometric_measure": r,
        "lower_bound": lower,
        "upper_bound": 1.0 - 1.0 / (state.n_qubits() as f64 + 1.0),
    }))
}

fn cmd_search(args: &SearchArgs) -> Result<Vec<Value>> {
    let proxies: &[Proxy] = match args.proxy {
        ProxyChoice::Purity => &[Proxy::PurityDeficit],
        ProxyChoice::Det => &[Proxy::Determinant],
        ProxyChoice::Both => &[Proxy::PurityDeficit, Proxy::Determinant],
    };
    let mut out = Vec::new();
    for &proxy in proxies {
        let mut cfg = SearchConfig::new(args.n, proxy, args.seed);
        if let Some(r) = args.restarts {
            cfg.n_restarts = r;
        }
        cfg.max_iters = args.max_iters;
        let record = search::optimize_proxy(&cfg)?;
        let value = serde_json::to_value(&record).expect("record serializes");
        append_json_line(&args.log, &value)?;
        out.push(value);
    }
    Ok(out)
}

/// Runs a parsed command; returns the process exit code. Output goes to
/// `stdout` unless `--output` is set.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let output = cli.output.as_deref();
    let emit = |text: &str, stdout: &mut dyn Write| -> Result<()> {
        match output {
            Some(path) => write_atomic(path, text.as_bytes()),
            None => Ok(stdout.write_all(text.as_bytes())?),
        }
    };
    let (name, params, seed, result) = match &cli.command {
        Command::Map(a) => ("map", params_of(a), None, cmd_map(a)?),
        Command::Rank(a) => ("rank", params_of(a), None, cmd_rank(a)?),
        Command::Detect(a) => ("detect", params_of(a), None, cmd_detect(a)?),
        Command::Gm(a) => ("gm", params_of(a), Some(a.seed), cmd_gm(a)?),
        Command::Search(a) => {
            let records = cmd_search(a)?;
            let best = records
                .iter()
                .max_by(|x, y| {
                    let key =
                        |v: &Value| v["geometric_value"].as_f64().unwrap_or(f64::NEG_INFINITY);
                    key(x).total_cmp(&key(y))
                })
                .cloned()
                .expect("at least one proxy");
            let result = json!({ "best": best, "records": records });
            ("search", params_of(a), Some(a.seed), result)
        }
        Command::Subspace(a) => {
            let rows = gd_sweep(a.dmax, a.starts, a.seed)?;
            emit(&sweep_csv(&rows), stdout)?;
            return Ok(0);
        }
        Command::Verify(a) => {
            let report = verify::run(a.seed, &a.only, |c| eprintln!("{}", c.line()))?;
            stdout.write_all(report.table().as_bytes())?;
            if let Some(path) = output {
                let manifest = RunManifest::new("verify", params_of(a), Some(a.seed), Some(path));
                write_atomic(path, document(manifest, report.payload()).as_bytes())?;
            }
            return Ok(if report.all_ok() { 0 } else { 1 });
        }
    };
    let manifest = RunManifest::new(name, params, seed, output);
    emit(&document(manifest, result), stdout)?;
    Ok(0)
}

/// Entry point for the binary: parses `std::env::args`, runs, and maps
/// errors to exit codes.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
