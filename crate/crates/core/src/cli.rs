//! `kfrac` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input (including unknown flags and
//! uncertifiable θ), 2 budget refusal. Results go to `--out PATH` or standard
//! output; errors go to standard error. With `--out PATH` a side file
//! `PATH.meta.json` records the command line and crate version.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::experiments::{
    ck_estimate, fit_to_json, lemma1_ratio_sweep_with_budget, refute_strong_bound, thm2_sweep, write_fit_csv,
    write_lemma1_csv, write_refute_csv, write_sweep_csv, SweepConfig, ThetaSampler, DEFAULT_MAX_DEN,
};
use crate::kernel::{aliasing_mean, s_sum_with_budget, tail_sum};
use crate::lcmset::{DenominatorMode, LcmBuildOptions, LcmSet};
use crate::numtheory::{build_sieves, DEFAULT_WORK_BUDGET};
use crate::solver::{best_approx, best_approx_bruteforce_with_budget, dirichlet_k1, format_fraction, ThetaValue};

#[derive(Debug, Parser)]
#[command(name = "kfrac", version, about = "Best approximation by sums of k fractions with denominators ≤ N")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output format; tables default to csv, single results to json.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write results to PATH instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ParallelArgs {
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Work budget (tuples, gcd operations or lcm relaxations).
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// φ(n), μ(n), d(n) for n ≤ N.
    Sieve {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Σ* q_1⋯q_k / x^{2k} over a grid of x.
    Lemma1 {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<u64>,
        #[command(flatten)]
        par: ParallelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Kernel tail sums against the aliasing identity for m = 1..=N, or the
    /// counting-sum gap when --theta is given.
    KernelCheck {
        #[arg(long)]
        delta: f64,
        /// Largest modulus (tail mode) or denominator bound (counting-sum mode).
        #[arg(long, default_value_t = 50)]
        n: u64,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        theta: Option<String>,
        #[command(flatten)]
        par: ParallelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Entries of Λ_k(N) with --n, or a density census with --grid.
    Lcmset {
        #[arg(long, required_unless_present = "grid", conflicts_with = "grid")]
        n: Option<u64>,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<u64>>,
        /// Restrict to pairwise-coprime denominator tuples.
        #[arg(long)]
        coprime: bool,
        #[command(flatten)]
        par: ParallelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Best approximation of θ by Σ a_i/q_i with q_i ≤ N.
    Approx {
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Method::Lcm)]
        method: Method,
        #[arg(long)]
        coprime: bool,
        #[command(flatten)]
        par: ParallelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Best error scaled by N^k across a grid, for seeded or listed θ.
    Sweep(SweepArgs),
    /// Fit of the exponent c_k.
    Ck(SweepArgs),
    /// 4C·|Λ_k(N)|/N^k across a grid.
    Refute {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<u64>,
        #[arg(long, default_value = "1")]
        c: String,
        #[command(flatten)]
        par: ParallelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Scan of the lcm set.
    Lcm,
    /// Enumeration of every denominator tuple.
    Brute,
    /// Continued fractions (k = 1 only).
    Dirichlet,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    grid: Vec<u64>,
    /// Comma-separated θ list, or `worst` for θ = 1/(2N^k); omit for seeded
    /// random rationals plus the named constants.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_MAX_DEN)]
    max_den: u64,
    #[command(flatten)]
    par: ParallelArgs,
    #[command(flatten)]
    output: OutputArgs,
}

/// Runs the CLI, writing results and errors to the given streams.
pub fn run_with_io<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    return 0;
                }
                _ => 1,
            };
            let _ = write!(stderr, "{}", e.render());
            return code;
        }
    };
    let out_path = output_args(&cli.command).out.clone();
    match execute(&cli.command) {
        Ok(bytes) => {
            let written = match &out_path {
                Some(path) => write_file(path, &bytes).and_then(|_| write_meta(path, &argv)),
                None => stdout.write_all(&bytes).map_err(|e| Error::invalid(format!("stdout: {e}"))),
            };
            match written {
                Ok(()) => 0,
                Err(e) => report(stderr, &e),
            }
        }
        Err(e) => report(stderr, &e),
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_io(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn report(stderr: &mut dyn Write, e: &Error) -> i32 {
    let _ = writeln!(stderr, "error: {e}");
    match e {
        Error::ResourceRefusal { .. } => 2,
        _ => 1,
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

fn write_meta(path: &Path, argv: &[OsString]) -> Result<()> {
    let args: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let meta = json!({
        "tool": "kfrac",
        "version": env!("CARGO_PKG_VERSION"),
        "args": args,
        "rng": "ChaCha8Rng::seed_from_u64 (rand_chacha 0.9)",
    });
    let mut meta_path = path.as_os_str().to_owned();
    meta_path.push(".meta.json");
    let text = serde_json::to_string_pretty(&meta).expect("json") + "\n";
    write_file(&PathBuf::from(meta_path), text.as_bytes())
}

fn output_args(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::Sieve { output, .. }
        | Command::Lemma1 { output, .. }
        | Command::KernelCheck { output, .. }
        | Command::Lcmset { output, .. }
        | Command::Approx { output, .. }
        | Command::Refute { output, .. } => output,
        Command::Sweep(a) | Command::Ck(a) => &a.output,
    }
}

fn budget(par: &ParallelArgs) -> u64 {
    par.budget.unwrap_or(DEFAULT_WORK_BUDGET)
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::invalid(format!("output: {e}"))
}

/// Rows as CSV (with header) or JSON lines keyed by the header.
fn table(format: Format, header: &[&str], rows: Vec<Vec<serde_json::Value>>) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut wr = csv::Writer::from_writer(Vec::new());
            wr.write_record(header).map_err(csv_err)?;
            for row in rows {
                wr.write_record(row.iter().map(|v| match v {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Array(items) => items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "),
                    other => other.to_string(),
                }))
                .map_err(csv_err)?;
            }
            wr.into_inner().map_err(csv_err)
        }
        Format::Json => {
            let mut out = Vec::new();
            for row in rows {
                let obj: serde_json::Map<String, serde_json::Value> =
                    header.iter().map(|h| h.to_string()).zip(row).collect();
                out.extend(serde_json::to_vec(&obj).expect("json"));
                out.push(b'\n');
            }
            Ok(out)
        }
    }
}

fn json_bytes(v: &serde_json::Value) -> Vec<u8> {
    let mut out = serde_json::to_vec(v).expect("json");
    out.push(b'\n');
    out
}

fn num(v: impl ToString) -> serde_json::Value {
    serde_json::Value::Number(v.to_string().parse().expect("numeric literal"))
}

fn float(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v).map(serde_json::Value::Number).unwrap_or(serde_json::Value::Null)
}

fn parse_theta_list(s: &str) -> Result<Vec<ThetaValue>> {
    s.split(',').map(ThetaValue::parse).collect()
}

fn execute(cmd: &Command) -> Result<Vec<u8>> {
    match cmd {
        Command::Sieve { n, output } => {
            let s = build_sieves(*n)?;
            let rows = (1..=*n)
                .map(|i| vec![num(i), num(s.phi(i)), num(s.mu(i)), num(s.divcount(i))])
                .collect();
            table(output.format.unwrap_or(Format::Csv), &["n", "phi", "mu", "divcount"], rows)
        }
        Command::Lemma1 { k, grid, par, output } => {
            let rows = lemma1_ratio_sweep_with_budget(grid, *k, budget(par))?;
            match output.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_lemma1_csv(&rows, &mut buf)?;
                    Ok(buf)
                }
                f => table(
                    f,
                    &["x", "k", "sum", "ratio"],
                    rows.iter().map(|r| vec![num(r.x), num(r.k), num(r.sum), float(r.ratio)]).collect(),
                ),
            }
        }
        Command::KernelCheck { delta, n, k, theta, par, output } => {
            let format = output.format.unwrap_or(Format::Csv);
            if let Some(theta) = theta {
                let k = k.ok_or_else(|| Error::invalid("--k is required with --theta"))?;
                let rows = parse_theta_list(theta)?
                    .iter()
                    .map(|t| {
                        let s = s_sum_with_budget(t.to_f64(), *n, k, *delta, budget(par))?;
                        Ok(vec![
                            serde_json::Value::String(t.to_string()),
                            num(n),
                            num(k),
                            float(*delta),
                            float(s.direct),
                            float(s.main_term),
                            float(s.gap()),
                            float(s.gap_bound),
                            num(s.tuples),
                            serde_json::Value::Bool(s.gap_holds()),
                        ])
                    })
                    .collect::<Result<Vec<_>>>()?;
                return table(
                    format,
                    &["theta", "N", "k", "delta", "direct", "main_term", "gap", "gap_bound", "tuples", "holds"],
                    rows,
                );
            }
            let rows = (1..=*n)
                .map(|m| {
                    let t = tail_sum(m, *delta)?;
                    let alias = aliasing_mean(m, *delta)?;
                    let gap = ((delta + t.value) - alias).abs().max(((delta + t.lower) - alias).abs());
                    Ok(vec![
                        num(m),
                        float(*delta),
                        float(t.lower),
                        float(t.value),
                        float(t.bound),
                        serde_json::Value::Bool(t.within_bound()),
                        float(alias),
                        float(gap),
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            table(
                format,
                &["m", "delta", "tail_lower", "tail_value", "bound", "within_bound", "aliasing", "alias_gap"],
                rows,
            )
        }
        Command::Lcmset { n, k, grid, coprime, par, output } => {
            let opts = LcmBuildOptions {
                mode: if *coprime { DenominatorMode::PairwiseCoprime } else { DenominatorMode::All },
                threads: par.threads,
                max_relaxations: par.budget.unwrap_or(LcmBuildOptions::default().max_relaxations),
                ..Default::default()
            };
            let format = output.format.unwrap_or(Format::Csv);
            if let Some(grid) = grid {
                let rows = grid
                    .iter()
                    .map(|&n| {
                        let d = LcmSet::build_with(n, *k, &opts)?.density();
                        Ok(vec![num(d.n), num(d.k), num(d.size), float(d.ratio)])
                    })
                    .collect::<Result<Vec<_>>>()?;
                return table(format, &["N", "k", "size", "ratio"], rows);
            }
            let set = LcmSet::build_with(n.expect("clap enforces --n or --grid"), *k, &opts)?;
            let rows = set
                .entries()
                .map(|e| {
                    vec![
                        num(e.lcm),
                        num(e.min_product),
                        serde_json::Value::Array(e.witness.iter().map(|&q| num(q)).collect()),
                    ]
                })
                .collect();
            table(format, &["L", "min_product", "witness"], rows)
        }
        Command::Approx { theta, n, k, method, coprime, par, output } => {
            let theta = ThetaValue::parse(theta)?;
            let mode = if *coprime { DenominatorMode::PairwiseCoprime } else { DenominatorMode::All };
            let sol = match method {
                Method::Lcm => {
                    let opts = LcmBuildOptions {
                        mode,
                        threads: par.threads,
                        ..Default::default()
                    };
                    best_approx(&theta, &LcmSet::build_with(*n, *k, &opts)?)?
                }
                Method::Brute => best_approx_bruteforce_with_budget(&theta, *n, *k, mode, budget(par))?,
                Method::Dirichlet => {
                    if *k != 1 {
                        return Err(Error::invalid("--method dirichlet requires --k 1"));
                    }
                    dirichlet_k1(&theta, *n)?
                }
            };
            let v = sol.to_json();
            match output.format.unwrap_or(Format::Json) {
                Format::Json => Ok(json_bytes(&v)),
                Format::Csv => {
                    let header = ["theta", "N", "k", "error_num", "error_den", "m", "L", "a", "q", "certified"];
                    let row = header.iter().map(|h| v[*h].clone()).collect();
                    table(Format::Csv, &header, vec![row])
                }
            }
        }
        Command::Sweep(args) => {
            let cfg = sweep_config(args)?;
            let out = thm2_sweep(&cfg)?;
            match args.output.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_sweep_csv(&out, &mut buf)?;
                    Ok(buf)
                }
                Format::Json => {
                    let mut buf = Vec::new();
                    for r in &out.records {
                        buf.extend(json_bytes(&json!({
                            "N": r.n,
                            "k": r.k,
                            "theta_id": r.theta_id,
                            "theta": r.theta,
                            "error": r.error.as_ref().map(format_fraction),
                            "error_float": r.error_float,
                            "scaled_error": r.scaled_error,
                            "product_scaled": r.product_scaled,
                            "L": num(r.lcm),
                            "witness_product": num(r.witness_product),
                            "certified": r.certified,
                        })));
                    }
                    for s in &out.summaries {
                        buf.extend(json_bytes(&json!({
                            "N": s.n,
                            "k": s.k,
                            "max_scaled_error": s.max_scaled_error,
                            "mean_scaled_error": s.mean_scaled_error,
                            "count": s.count,
                        })));
                    }
                    if let Some(t) = &out.truncated {
                        buf.extend(json_bytes(&json!({ "truncated": t })));
                    }
                    Ok(buf)
                }
            }
        }
        Command::Ck(args) => {
            let fit = ck_estimate(&sweep_config(args)?)?;
            match args.output.format.unwrap_or(Format::Json) {
                Format::Json => Ok(json_bytes(&fit_to_json(&fit))),
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_fit_csv(&fit, &mut buf)?;
                    Ok(buf)
                }
            }
        }
        Command::Refute { k, grid, c, par, output } => {
            let c = match ThetaValue::parse(c)?.exact_value() {
                Some(v) => v.clone(),
                None => return Err(Error::invalid("--c must be a rational")),
            };
            let t = refute_strong_bound(&c, *k, grid, par.threads)?;
            match output.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_refute_csv(&t, &mut buf)?;
                    Ok(buf)
                }
                Format::Json => {
                    let rows = t
                        .rows
                        .iter()
                        .map(|r| {
                            vec![
                                num(r.n),
                                num(r.k),
                                serde_json::Value::String(format_fraction(&t.c)),
                                num(r.size),
                                serde_json::Value::String(format_fraction(&r.measure)),
                                float(r.measure_float),
                                serde_json::Value::Bool(r.refuted),
                                float(r.divisor_sum_pow),
                                float(r.lower_ratio),
                                float(r.log_shape),
                            ]
                        })
                        .collect();
                    table(
                        Format::Json,
                        &["N", "k", "C", "size", "measure", "measure_float", "refuted", "divisor_sum_pow", "lower_ratio", "log_shape"],
                        rows,
                    )
                }
            }
        }
    }
}

fn sweep_config(args: &SweepArgs) -> Result<SweepConfig> {
    let sampler = match args.theta.as_deref() {
        Some("worst") => ThetaSampler::WorstCase,
        Some(list) => ThetaSampler::FixedList(parse_theta_list(list)?),
        None => {
            if args.seed.is_none() {
                return Err(Error::invalid("--seed is required for randomly sampled θ"));
            }
            ThetaSampler::UniformRational {
                max_den: args.max_den,
                with_constants: true,
            }
        }
    };
    let mut cfg = SweepConfig::new(args.k, args.grid.clone(), sampler, args.samples, args.seed.unwrap_or(0));
    cfg.threads = args.par.threads;
    if let Some(b) = args.par.budget {
        cfg.cell_cap = b as u128;
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("kfrac").chain(args.iter().copied());
        let code = run_with_io(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn approx_examples() {
        let (code, out, _) = run_capture(&["approx", "--theta", "1/8", "--n", "2", "--k", "2"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!((v["error_num"].to_string(), v["error_den"].to_string()), ("1".into(), "8".into()));
        let (code, out, _) = run_capture(&["approx", "--theta", "0", "--n", "9", "--k", "1"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["error_num"].to_string(), "0");
    }

    #[test]
    fn lcmset_rows() {
        let (code, out, _) = run_capture(&["lcmset", "--n", "4", "--k", "2", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 7);
        assert_eq!(out.lines().last().unwrap(), "12,12,3 4");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["approx", "--theta", "1/0", "--n", "2"]).0, 1);
        assert_eq!(run_capture(&["approx", "--theta", "1/3", "--n", "2", "--bogus"]).0, 1);
        assert_eq!(run_capture(&["sweep", "--k", "2", "--grid", "4,8"]).0, 1);
        let (code, _, err) = run_capture(&["approx", "--theta", "1/3", "--n", "1000", "--k", "3", "--method", "brute", "--budget", "1000"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error: resource refusal"));
        assert_eq!(run_capture(&["--help"]).0, 0);
    }
}
