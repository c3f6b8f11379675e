//! The `wks` command line.
//!
//! Data go to stdout (or `--out`), diagnostics to stderr. Exit status is 0
//! when a result was computed, 2 on usage or input errors and 3 when
//! `test --strict` rejects the null.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::distribution::{
    ks_classical_critical_value, survival_at_horizon, validity_warnings, QuantileWindow, TestLaw,
};
use crate::error::{Error, Warning};
use crate::montecarlo::{self, SimulationConfig, SurvivalEstimate};
use crate::spectral::{self, K_MAX, K_MIN};
use crate::statistic::{run_test, NullDistribution};

/// Environment variable supplying the default seed.
pub const SEED_ENV: &str = "WKS_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REJECT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "wks", version, about = "Variance-weighted Kolmogorov-Smirnov test")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a sample against a fully specified null distribution.
    Test(TestArgs),
    /// Critical value of the weighted (or classical) statistic.
    Critical(CriticalArgs),
    /// Spectral quantities on a k grid, as CSV.
    Tabulate(TabulateArgs),
    /// Law S(N; k) on a k grid for several sample sizes, as CSV.
    Curves(CurvesArgs),
    /// Monte Carlo survival estimates, as CSV.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// Input file: one value per line, '#' lines ignored.
    #[arg(long)]
    pub data: PathBuf,
    /// uniform | normal:mu,sigma | exp:rate | pit
    #[arg(long)]
    pub null: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Quantile window "a,b"; defaults to [1/(N+1), N/(N+1)].
    #[arg(long, value_parser = parse_pair)]
    pub window: Option<(f64, f64)>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Read a delimited file with a header row and take this column (name or 1-based index).
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    /// Exit with status 3 when the null is rejected.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[arg(long, required_unless_present = "classical")]
    pub n: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Unweighted Kolmogorov law (N-independent).
    #[arg(long)]
    pub classical: bool,
}

#[derive(Debug, Args)]
pub struct TabulateArgs {
    #[arg(long, default_value_t = 0.1)]
    pub k_min: f64,
    #[arg(long, default_value_t = 6.0)]
    pub k_max: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 60)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[arg(long, value_delimiter = ',', default_value = "1e3,1e4,1e5,1e6")]
    pub n_list: Vec<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub k_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub k_max: f64,
    #[arg(long, default_value_t = 61)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMode {
    /// Sample the statistic directly from N uniforms.
    Direct,
    /// Walled Ornstein-Uhlenbeck particle.
    Ou,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub mode: SimMode,
    /// Sample size (direct mode).
    #[arg(long)]
    pub n: Option<usize>,
    /// Thresholds; several for direct mode, one for ou mode.
    #[arg(long, value_delimiter = ',', required = true)]
    pub k: Vec<f64>,
    /// Horizons in log-quantile time (ou mode).
    #[arg(long, value_delimiter = ',')]
    pub t: Vec<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Report the dt / dt/2 extrapolated survival (ou mode).
    #[arg(long)]
    pub extrapolate: bool,
    #[arg(long, default_value_t = 10_000)]
    pub replicas: usize,
    /// Overrides the WKS_SEED environment variable.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected \"a,b\", got {s:?}"))?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("bad number {v:?}"));
    Ok((p(a)?, p(b)?))
}

/// Summary of the ingested sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

/// JSON document written by `wks test --format json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReportDocument {
    pub version: String,
    pub input: InputDigest,
    pub null: NullDistribution,
    pub window: QuantileWindow,
    pub alpha: f64,
    pub k_obs: f64,
    pub arg_u: f64,
    pub k_star: f64,
    pub pvalue: f64,
    pub reject: bool,
    pub warnings: Vec<Warning>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A failure reported with exit status 2.
#[derive(Debug)]
pub struct CliError(pub String);

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Formats with 15 significant digits, positional notation for moderate magnitudes.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { format!("{x}") };
    }
    let sci = format!("{x:.14e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..15).contains(&exp) {
        format!("{:.*}", (14 - exp) as usize, x)
    } else {
        sci
    }
}

/// Parses one value per line, or one column of a delimited file with a
/// header. Blank lines and lines starting with '#' are skipped.
pub fn read_values(text: &str, column: Option<&str>, delimiter: char) -> Result<Vec<f64>, CliError> {
    let mut rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let col = match column {
        None => None,
        Some(name) => {
            let (line, header) = rows.next().ok_or_else(|| CliError("input has no header row".into()))?;
            let fields: Vec<&str> = header.split(delimiter).map(str::trim).collect();
            let idx = fields.iter().position(|f| *f == name).or_else(|| {
                name.parse::<usize>().ok().filter(|&i| i >= 1 && i <= fields.len()).map(|i| i - 1)
            });
            Some(idx.ok_or_else(|| CliError(format!("line {line}: no column {name:?} in header")))?)
        }
    };

    let mut values = Vec::new();
    for (line, row) in rows {
        let field = match col {
            None => row,
            Some(c) => row
                .split(delimiter)
                .nth(c)
                .map(str::trim)
                .ok_or_else(|| CliError(format!("line {line}: missing column {}", c + 1)))?,
        };
        let v: f64 = field
            .parse()
            .map_err(|_| CliError(format!("line {line}: cannot parse {field:?} as a number")))?;
        if !v.is_finite() {
            return Err(CliError(format!("line {line}: non-finite value {field:?}")));
        }
        values.push(v);
    }
    Ok(values)
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let seed_env = std::env::var(SEED_ENV).ok();
    match dispatch(cli.command, seed_env.as_deref(), out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command, seed_env: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Test(a) => cmd_test(&a, out, err),
        Command::Critical(a) => cmd_critical(&a, out, err),
        Command::Tabulate(a) => emit(&cmd_tabulate(&a)?, a.out.as_ref(), out),
        Command::Curves(a) => emit(&cmd_curves(&a)?, a.out.as_ref(), out),
        Command::Simulate(a) => {
            let seed = resolve_seed(a.seed, seed_env)?;
            let csv = cmd_simulate(&a, seed, err)?;
            emit(&csv, a.out.as_ref(), out)
        }
    }
}

fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64, CliError> {
    match (flag, env) {
        (Some(s), _) => Ok(s),
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| CliError(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        (None, None) => Ok(0),
    }
}

fn emit(text: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<i32, CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError(format!("cannot write {}: {e}", p.display())))?,
        None => out.write_all(text.as_bytes()).map_err(|e| CliError(format!("cannot write output: {e}")))?,
    }
    Ok(EXIT_OK)
}

fn warn(err: &mut dyn Write, warnings: &[Warning]) {
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
}

fn cmd_test(a: &TestArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let null: NullDistribution = a.null.parse()?;
    let text = std::fs::read_to_string(&a.data)
        .map_err(|e| CliError(format!("cannot read {}: {e}", a.data.display())))?;
    let data = read_values(&text, a.column.as_deref(), a.delimiter)?;
    if data.is_empty() {
        return Err(CliError(format!("{}: no data values", a.data.display())));
    }
    let window = a.window.map(|(lo, hi)| QuantileWindow::new(lo, hi)).transpose()?;
    let report = run_test(&data, &null, a.alpha, window)?;

    let doc = TestReportDocument {
        version: env!("CARGO_PKG_VERSION").to_string(),
        input: InputDigest {
            count: data.len(),
            min: data.iter().copied().fold(f64::INFINITY, f64::min),
            max: data.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        },
        null,
        window: report.window,
        alpha: report.alpha,
        k_obs: report.k_obs,
        arg_u: report.arg_u,
        k_star: report.k_star,
        pvalue: report.pvalue,
        reject: report.reject,
        warnings: report.warnings.clone(),
        seed: None,
    };
    warn(err, &doc.warnings);

    let body = match a.format {
        Format::Json => serde_json::to_string_pretty(&doc).map_err(|e| CliError(e.to_string()))? + "\n",
        Format::Text => render_text(&doc),
    };
    out.write_all(body.as_bytes()).map_err(|e| CliError(e.to_string()))?;
    Ok(if a.strict && doc.reject { EXIT_REJECT } else { EXIT_OK })
}

fn render_text(d: &TestReportDocument) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "n        {}", d.input.count);
    let _ = writeln!(s, "null     {}", d.null);
    let _ = writeln!(s, "window   [{}, {}]", fmt_num(d.window.a()), fmt_num(d.window.b()));
    let _ = writeln!(s, "k_obs    {}", fmt_num(d.k_obs));
    let _ = writeln!(s, "arg_u    {}", fmt_num(d.arg_u));
    let _ = writeln!(s, "k_star   {}", fmt_num(d.k_star));
    let _ = writeln!(s, "pvalue   {}", fmt_num(d.pvalue));
    let _ = writeln!(s, "alpha    {}", fmt_num(d.alpha));
    let _ = writeln!(s, "reject   {}", d.reject);
    s
}

fn cmd_critical(a: &CriticalArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let k = if a.classical {
        ks_classical_critical_value(a.alpha)?
    } else {
        let n = a.n.expect("clap enforces --n");
        let law = TestLaw::weighted(n)?;
        warn(err, &law.warnings());
        law.critical_value(a.alpha)?
    };
    writeln!(out, "{}", fmt_num(k)).map_err(|e| CliError(e.to_string()))?;
    Ok(EXIT_OK)
}

fn grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps < 2 {
        return Err(CliError(format!("--steps must be >= 2, got {steps}")));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(CliError(format!("need k-min < k-max, got [{lo}, {hi}]")));
    }
    let h = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps).map(|i| if i + 1 == steps { hi } else { lo + i as f64 * h }).collect())
}

/// CSV of the spectral quantities and their limiting forms.
pub fn cmd_tabulate(a: &TabulateArgs) -> Result<String, CliError> {
    if !(a.k_min >= K_MIN && a.k_max <= K_MAX) {
        return Err(CliError(format!("k range must lie in [{K_MIN}, {K_MAX}], got [{}, {}]", a.k_min, a.k_max)));
    }
    let ks = grid(a.k_min, a.k_max, a.steps)?;
    let mut s = String::from(
        "k,theta0,theta1,delta1,inv_delta1,a_tilde,theta0_small_k,theta0_large_k,a_tilde_small_k,a_tilde_large_k\n",
    );
    for k in ks {
        let g = spectral::ground_state(k)?;
        let row = [
            k,
            g.theta0,
            g.theta1,
            g.delta1(),
            1.0 / g.delta1(),
            g.a_tilde,
            spectral::theta0_asymptotic_small_k(k),
            spectral::theta0_asymptotic_large_k(k),
            spectral::a_tilde_asymptotic_small_k(k),
            spectral::a_tilde_asymptotic_large_k(k),
        ];
        s.push_str(&csv_row(&row));
    }
    Ok(s)
}

fn csv_row(values: &[f64]) -> String {
    let mut s = values.iter().map(|&v| fmt_num(v)).collect::<Vec<_>>().join(",");
    s.push('\n');
    s
}

/// CSV of `S(N; k)` with one column per sample size.
pub fn cmd_curves(a: &CurvesArgs) -> Result<String, CliError> {
    if a.n_list.is_empty() {
        return Err(CliError("--n-list is empty".into()));
    }
    if let Some(n) = a.n_list.iter().find(|n| !(**n >= 2.0) || !n.is_finite()) {
        return Err(CliError(format!("sample sizes must be >= 2, got {n}")));
    }
    if !(a.k_min > 0.0) {
        return Err(CliError(format!("--k-min must be positive, got {}", a.k_min)));
    }
    let ks = grid(a.k_min, a.k_max, a.steps)?;
    let mut s = String::from("k");
    for n in &a.n_list {
        let _ = write!(s, ",S_{n}");
    }
    s.push('\n');
    for k in ks {
        let mut row = vec![k];
        for &n in &a.n_list {
            row.push(survival_at_horizon(n.ln(), k)?);
        }
        s.push_str(&csv_row(&row));
    }
    Ok(s)
}

/// CSV `parameter,survival,std_error`; the parameter is k (direct) or T (ou).
pub fn cmd_simulate(a: &SimulateArgs, seed: u64, err: &mut dyn Write) -> Result<String, CliError> {
    let cfg = SimulationConfig { replicas: a.replicas, seed, dt: a.dt };
    let (params, est): (Vec<f64>, Vec<SurvivalEstimate>) = match a.mode {
        SimMode::Direct => {
            let n = a.n.ok_or_else(|| CliError("direct mode needs --n".into()))?;
            warn(err, &validity_warnings(n as f64));
            (a.k.clone(), montecarlo::direct_survival(n, &a.k, &cfg)?)
        }
        SimMode::Ou => {
            let [k] = a.k[..] else {
                return Err(CliError("ou mode takes a single --k".into()));
            };
            if a.t.is_empty() {
                return Err(CliError("ou mode needs --t".into()));
            }
            let est = if a.extrapolate {
                let runs = montecarlo::ou_survival_dt_halving(k, &a.t, &cfg)?;
                for r in &runs {
                    let _ = writeln!(
                        err,
                        "T={}: S(dt)={} S(dt/2)={} bias(dt)={}",
                        fmt_num(r.horizon),
                        fmt_num(r.coarse.survival),
                        fmt_num(r.fine.survival),
                        fmt_num(r.bias_estimate)
                    );
                }
                runs.into_iter().map(|r| r.extrapolated).collect()
            } else {
                montecarlo::ou_survival_curve(k, &a.t, &cfg)?
            };
            (a.t.clone(), est)
        }
    };
    let mut s = String::from("parameter,survival,std_error\n");
    for (p, e) in params.iter().zip(&est) {
        s.push_str(&csv_row(&[*p, e.survival, e.std_error]));
    }
    Ok(s)
}
