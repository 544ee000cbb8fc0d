//! Seeded sweeps over (θ, N): the `N^{-k}` scaling of the best error, the
//! coprime-tuple ratio, the density of the lcm set against the
//! `(q_1⋯q_k)^{-1} N^{-k}` covering argument, and a log-log fit for the
//! exponent `c_k`.
//!
//! Randomness: θ values come from `ChaCha8Rng::seed_from_u64(seed)` (crate
//! `rand_chacha` 0.9). Each sample draws a denominator uniformly from
//! `1..=max_den` and then a numerator uniformly from `0..den`, reduced.
//! All θ are drawn up front on one thread, so `threads` never changes output.

use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lcmset::{LcmBuildOptions, LcmSet};
use crate::numtheory::{build_sieves, coprime_weighted_sum_with_budget, DEFAULT_WORK_BUDGET};
use crate::solver::{best_approx, format_fraction, Fraction, ThetaValue, NAMED_CONSTANTS};

pub const DEFAULT_MAX_DEN: u64 = 1_000_000;

/// Default cap on N^k per sweep cell.
pub const DEFAULT_CELL_CAP: u128 = 1 << 26;

#[derive(Debug, Clone, PartialEq)]
pub enum ThetaSampler {
    /// `samples` seeded random rationals with denominator ≤ `max_den`, then
    /// the named constants when `with_constants` is set.
    UniformRational { max_den: u64, with_constants: bool },
    FixedList(Vec<ThetaValue>),
    /// Only the per-N worst case θ = 1/(2N^k).
    WorstCase,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub k: usize,
    pub n_grid: Vec<u64>,
    pub sampler: ThetaSampler,
    pub samples: usize,
    pub seed: u64,
    pub threads: usize,
    /// Refuse cells with N^k above this.
    pub cell_cap: u128,
}

impl SweepConfig {
    pub fn new(k: usize, n_grid: Vec<u64>, sampler: ThetaSampler, samples: usize, seed: u64) -> Self {
        Self {
            k,
            n_grid,
            sampler,
            samples,
            seed,
            threads: 1,
            cell_cap: DEFAULT_CELL_CAP,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("k must be positive"));
        }
        if self.n_grid.is_empty() || self.n_grid[0] == 0 {
            return Err(Error::invalid("N grid must be nonempty and positive"));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("N grid must be strictly increasing"));
        }
        if self.samples == 0 {
            return Err(Error::invalid("samples must be at least 1"));
        }
        Ok(())
    }
}

/// A θ with a stable identifier for output rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTheta {
    pub id: String,
    pub theta: ThetaValue,
}

/// The θ list a config describes, minus the per-N worst case.
pub fn sample_thetas(config: &SweepConfig) -> Result<Vec<LabeledTheta>> {
    match &config.sampler {
        ThetaSampler::UniformRational { max_den, with_constants } => {
            if *max_den == 0 {
                return Err(Error::invalid("denominator bound must be positive"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut out: Vec<LabeledTheta> = (0..config.samples)
                .map(|i| {
                    let den = rng.random_range(1..=*max_den);
                    let num = rng.random_range(0..den);
                    LabeledTheta {
                        id: format!("r{i}"),
                        theta: ThetaValue::exact(BigRational::new(num.into(), den.into())),
                    }
                })
                .collect();
            if *with_constants {
                for name in NAMED_CONSTANTS {
                    out.push(LabeledTheta {
                        id: (*name).to_string(),
                        theta: ThetaValue::named(name)?,
                    });
                }
            }
            Ok(out)
        }
        ThetaSampler::FixedList(list) => Ok(list
            .iter()
            .enumerate()
            .map(|(i, t)| LabeledTheta {
                id: format!("f{i}"),
                theta: t.clone(),
            })
            .collect()),
        ThetaSampler::WorstCase => Ok(Vec::new()),
    }
}

/// θ = 1/(2N^k).
pub fn worst_case_theta(n: u64, k: usize) -> ThetaValue {
    let nk = BigInt::from(n).pow(k as u32);
    ThetaValue::exact(BigRational::new(1.into(), nk * 2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub n: u64,
    pub k: usize,
    pub theta_id: String,
    pub theta: String,
    /// Exact error `p/q`; `None` when θ is inexact.
    pub error: Option<Fraction>,
    pub error_float: f64,
    /// error·N^k.
    pub scaled_error: f64,
    /// error·(Π q_i)·N^k with the returned witness.
    pub product_scaled: f64,
    pub lcm: u128,
    pub witness_product: u128,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub n: u64,
    pub k: usize,
    /// Over sampled θ only; the injected worst case is excluded.
    pub max_scaled_error: f64,
    pub mean_scaled_error: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub records: Vec<SweepRecord>,
    pub summaries: Vec<SweepSummary>,
    /// Reason the sweep stopped early, if it did.
    pub truncated: Option<String>,
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))
}

fn scale(error: &Fraction, factor: &BigInt) -> f64 {
    (error * BigRational::from_integer(factor.clone()))
        .to_f64()
        .unwrap_or(f64::NAN)
}

fn build_cell(n: u64, config: &SweepConfig) -> Result<LcmSet> {
    let cells = (n as u128).checked_pow(config.k as u32).unwrap_or(u128::MAX);
    if cells > config.cell_cap {
        return Err(Error::refusal(
            format!("N^k = {n}^{} exceeds the cell cap {}", config.k, config.cell_cap),
            None,
        ));
    }
    LcmSet::build_with(
        n,
        config.k,
        &LcmBuildOptions {
            threads: config.threads,
            ..Default::default()
        },
    )
}

/// Best error for every sampled θ (plus θ = 1/(2N^k)) at every grid N.
pub fn thm2_sweep(config: &SweepConfig) -> Result<SweepOutput> {
    config.validate()?;
    let thetas = sample_thetas(config)?;
    let pool = pool(config.threads)?;
    let mut out = SweepOutput {
        records: Vec::new(),
        summaries: Vec::new(),
        truncated: None,
    };
    for &n in &config.n_grid {
        let set = match build_cell(n, config) {
            Ok(s) => s,
            Err(e @ Error::ResourceRefusal { .. }) => {
                out.truncated = Some(format!("N = {n}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        };
        let nk = BigInt::from(n).pow(config.k as u32);
        let mut cell: Vec<LabeledTheta> = thetas.clone();
        cell.push(LabeledTheta {
            id: "worst".to_string(),
            theta: worst_case_theta(n, config.k),
        });
        let records: Vec<SweepRecord> = pool.install(|| {
            cell.par_iter()
                .map(|lt| {
                    let sol = best_approx(&lt.theta, &set)?;
                    let prod = sol.denominator_product();
                    Ok(SweepRecord {
                        n,
                        k: config.k,
                        theta_id: lt.id.clone(),
                        theta: sol.theta.clone(),
                        error: lt.theta.is_exact().then(|| sol.error.clone()),
                        error_float: sol.error_f64(),
                        scaled_error: scale(&sol.error, &nk),
                        product_scaled: scale(&sol.error, &(&nk * BigInt::from(prod))),
                        lcm: sol.lcm,
                        witness_product: prod,
                        certified: sol.certified,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })?;
        let sampled: Vec<f64> = records
            .iter()
            .filter(|r| r.theta_id != "worst")
            .map(|r| r.scaled_error)
            .collect();
        if !sampled.is_empty() {
            out.summaries.push(SweepSummary {
                n,
                k: config.k,
                max_scaled_error: sampled.iter().cloned().fold(f64::MIN, f64::max),
                mean_scaled_error: sampled.iter().sum::<f64>() / sampled.len() as f64,
                count: sampled.len(),
            });
        }
        out.records.extend(records);
    }
    Ok(out)
}

/// min over L ∈ Λ of (‖Lθ‖/L)·min_product(L).
///
/// The error of a tuple depends on it only through its lcm, so minimising
/// error·Π q_i over tuples splits into: for each L, the nearest multiple
/// error at L times the least product among tuples with that lcm.
pub fn min_product_error(theta: &ThetaValue, set: &LcmSet) -> Fraction {
    set.entries()
        .map(|e| {
            let near = crate::solver::nearest_multiple(theta, e.lcm).expect("L ≥ 1");
            near.error * BigRational::from_integer(BigInt::from(e.min_product))
        })
        .min()
        .unwrap_or_else(Fraction::zero)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub k: usize,
    /// Slope of ln(max_θ stat) against ln ln(3N).
    pub exponent: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
    pub grid: Vec<u64>,
    /// max over θ of N^k · min_L (‖Lθ‖/L)·min_product(L), per grid N.
    pub maxima: Vec<f64>,
}

/// Least squares fit of ln(max_θ N^k·min_L err_L·P_L) on ln ln(3N).
pub fn ck_estimate(config: &SweepConfig) -> Result<FitResult> {
    config.validate()?;
    if config.n_grid.len() < 2 {
        return Err(Error::DegenerateFit("need at least two grid points".into()));
    }
    let thetas = sample_thetas(config)?;
    let pool = pool(config.threads)?;
    let mut maxima = Vec::with_capacity(config.n_grid.len());
    for &n in &config.n_grid {
        let set = build_cell(n, config)?;
        let nk = BigInt::from(n).pow(config.k as u32);
        let mut cell: Vec<ThetaValue> = thetas.iter().map(|t| t.theta.clone()).collect();
        if config.sampler == ThetaSampler::WorstCase {
            cell.push(worst_case_theta(n, config.k));
        }
        let best = pool.install(|| {
            cell.par_iter()
                .map(|t| min_product_error(t, &set))
                .max()
        });
        let best = best.ok_or_else(|| Error::DegenerateFit("no θ values".into()))?;
        maxima.push(scale(&best, &nk));
    }
    if maxima.iter().any(|&v| v <= 0.0) {
        return Err(Error::DegenerateFit(
            "a per-N maximum is zero (θ hit exactly); logarithm undefined".into(),
        ));
    }
    let xs: Vec<f64> = config.n_grid.iter().map(|&n| (3.0 * n as f64).ln().ln()).collect();
    let ys: Vec<f64> = maxima.iter().map(|v| v.ln()).collect();
    let (slope, intercept) = least_squares(&xs, &ys)?;
    let residuals = xs.iter().zip(&ys).map(|(x, y)| y - (intercept + slope * x)).collect();
    Ok(FitResult {
        k: config.k,
        exponent: slope,
        intercept,
        residuals,
        grid: config.n_grid.clone(),
        maxima,
    })
}

fn least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("regressor has no spread".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Row {
    pub x: u64,
    pub k: usize,
    pub sum: u128,
    /// sum / x^{2k}.
    pub ratio: f64,
}

pub fn lemma1_ratio_sweep(x_grid: &[u64], k: usize) -> Result<Vec<Lemma1Row>> {
    lemma1_ratio_sweep_with_budget(x_grid, k, DEFAULT_WORK_BUDGET)
}

pub fn lemma1_ratio_sweep_with_budget(x_grid: &[u64], k: usize, budget: u64) -> Result<Vec<Lemma1Row>> {
    x_grid
        .iter()
        .map(|&x| {
            let sum = coprime_weighted_sum_with_budget(x, k, budget)?;
            let ratio = sum as f64 / (x as f64).powi(2 * k as i32);
            Ok(Lemma1Row { x, k, sum, ratio })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefuteRow {
    pub n: u64,
    pub k: usize,
    pub size: usize,
    /// 4C·|Λ_k(N)|/N^k.
    pub measure: Fraction,
    pub measure_float: f64,
    /// measure < 1: the covering by intervals of radius C/(qN^k) around
    /// fractions with denominators in Λ cannot contain [0, 1].
    pub refuted: bool,
    /// (Σ_{q≤N} 1/d(q))^k.
    pub divisor_sum_pow: f64,
    /// |Λ_k(N)| / (Σ_{q≤N} 1/d(q))^k.
    pub lower_ratio: f64,
    /// N^k (log 3N)^{-k}.
    pub log_shape: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefuteTable {
    pub c: Fraction,
    pub rows: Vec<RefuteRow>,
    /// measure at the largest N ≤ measure at the smallest N.
    pub endpoints_nonincreasing: bool,
}

pub fn refute_strong_bound(c: &Fraction, k: usize, n_grid: &[u64], threads: usize) -> Result<RefuteTable> {
    if c <= &Fraction::zero() {
        return Err(Error::invalid("C must be positive"));
    }
    if n_grid.is_empty() {
        return Err(Error::invalid("N grid must be nonempty"));
    }
    let opts = LcmBuildOptions {
        threads,
        ..Default::default()
    };
    let sieves = build_sieves(*n_grid.iter().max().expect("nonempty") as usize)?;
    let mut rows = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let set = LcmSet::build_with(n, k, &opts)?;
        let nk = BigInt::from(n).pow(k as u32);
        let measure = c * BigRational::new(BigInt::from(4u32 as usize * set.len()), nk);
        let drs = sieves
            .divisor_reciprocal_sum(n as usize)?
            .to_f64()
            .unwrap_or(f64::NAN);
        let divisor_sum_pow = drs.powi(k as i32);
        let nkf = (n as f64).powi(k as i32);
        rows.push(RefuteRow {
            n,
            k,
            size: set.len(),
            measure_float: measure.to_f64().unwrap_or(f64::NAN),
            refuted: measure < Fraction::from_integer(1.into()),
            measure,
            divisor_sum_pow,
            lower_ratio: set.len() as f64 / divisor_sum_pow,
            log_shape: nkf / (3.0 * n as f64).ln().powi(k as i32),
        });
    }
    let endpoints_nonincreasing = rows.last().unwrap().measure <= rows[0].measure;
    Ok(RefuteTable {
        c: c.clone(),
        rows,
        endpoints_nonincreasing,
    })
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::invalid(format!("output: {e}"))
}

pub const SWEEP_HEADER: [&str; 13] = [
    "kind",
    "N",
    "k",
    "theta_id",
    "theta",
    "error",
    "error_float",
    "scaled_error",
    "product_scaled",
    "L",
    "witness_product",
    "certified",
    "count",
];

/// Records, then one `max` and one `mean` row per N, then a `truncated` row
/// if the sweep stopped early.
pub fn write_sweep_csv<W: Write>(out: &SweepOutput, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(SWEEP_HEADER).map_err(csv_err)?;
    for r in &out.records {
        wr.write_record([
            "record".to_string(),
            r.n.to_string(),
            r.k.to_string(),
            r.theta_id.clone(),
            r.theta.clone(),
            r.error.as_ref().map(format_fraction).unwrap_or_default(),
            r.error_float.to_string(),
            r.scaled_error.to_string(),
            r.product_scaled.to_string(),
            r.lcm.to_string(),
            r.witness_product.to_string(),
            r.certified.to_string(),
            String::new(),
        ])
        .map_err(csv_err)?;
    }
    for s in &out.summaries {
        for (kind, v) in [("max", s.max_scaled_error), ("mean", s.mean_scaled_error)] {
            let mut row = vec![String::new(); SWEEP_HEADER.len()];
            row[0] = kind.to_string();
            row[1] = s.n.to_string();
            row[2] = s.k.to_string();
            row[7] = v.to_string();
            row[12] = s.count.to_string();
            wr.write_record(&row).map_err(csv_err)?;
        }
    }
    if let Some(reason) = &out.truncated {
        let mut row = vec![String::new(); SWEEP_HEADER.len()];
        row[0] = "truncated".to_string();
        row[4] = reason.clone();
        wr.write_record(&row).map_err(csv_err)?;
    }
    wr.flush().map_err(csv_err)?;
    Ok(())
}

pub fn write_fit_csv<W: Write>(fit: &FitResult, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["N", "k", "max_stat", "log_log_3n", "log_max_stat", "residual", "exponent", "intercept"])
        .map_err(csv_err)?;
    for (i, &n) in fit.grid.iter().enumerate() {
        wr.write_record([
            n.to_string(),
            fit.k.to_string(),
            fit.maxima[i].to_string(),
            (3.0 * n as f64).ln().ln().to_string(),
            fit.maxima[i].ln().to_string(),
            fit.residuals[i].to_string(),
            fit.exponent.to_string(),
            fit.intercept.to_string(),
        ])
        .map_err(csv_err)?;
    }
    wr.flush().map_err(csv_err)?;
    Ok(())
}

pub fn fit_to_json(fit: &FitResult) -> serde_json::Value {
    serde_json::json!({
        "k": fit.k,
        "exponent": fit.exponent,
        "intercept": fit.intercept,
        "grid": fit.grid,
        "maxima": fit.maxima,
        "residuals": fit.residuals,
    })
}

pub fn write_lemma1_csv<W: Write>(rows: &[Lemma1Row], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["x", "k", "sum", "ratio"]).map_err(csv_err)?;
    for r in rows {
        wr.write_record([r.x.to_string(), r.k.to_string(), r.sum.to_string(), r.ratio.to_string()])
            .map_err(csv_err)?;
    }
    wr.flush().map_err(csv_err)?;
    Ok(())
}

pub fn write_refute_csv<W: Write>(t: &RefuteTable, w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record([
        "N",
        "k",
        "C",
        "size",
        "measure",
        "measure_float",
        "refuted",
        "divisor_sum_pow",
        "lower_ratio",
        "log_shape",
    ])
    .map_err(csv_err)?;
    for r in &t.rows {
        wr.write_record([
            r.n.to_string(),
            r.k.to_string(),
            format_fraction(&t.c),
            r.size.to_string(),
            format_fraction(&r.measure),
            r.measure_float.to_string(),
            r.refuted.to_string(),
            r.divisor_sum_pow.to_string(),
            r.lower_ratio.to_string(),
            r.log_shape.to_string(),
        ])
        .map_err(csv_err)?;
    }
    wr.flush().map_err(csv_err)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: i64, d: i64) -> Fraction {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn worst_case_rows_are_one_half() {
        let cfg = SweepConfig::new(2, vec![2, 3, 5, 8], ThetaSampler::WorstCase, 1, 0);
        let out = thm2_sweep(&cfg).unwrap();
        assert_eq!(out.records.len(), 4);
        for r in &out.records {
            assert_eq!(r.error, Some(worst_case_theta(r.n, 2).center().clone()));
            assert_eq!((r.scaled_error, r.product_scaled), (0.5, 0.5));
        }
        assert!(out.summaries.is_empty());
    }

    #[test]
    fn k1_examples() {
        let golden = ThetaValue::named("golden").unwrap();
        let cfg = SweepConfig::new(1, vec![5], ThetaSampler::FixedList(vec![golden.clone(), ThetaValue::from_ratio(0, 1).unwrap()]), 1, 0);
        let out = thm2_sweep(&cfg).unwrap();
        let g = &out.records[0];
        let exact = best_approx(&golden, &LcmSet::build(5, 1).unwrap()).unwrap();
        assert_eq!(g.scaled_error, exact.error_f64() * 5.0);
        assert!(g.error.is_none() && g.certified);
        assert!(g.scaled_error * 5.0 <= 1.0);
        assert_eq!(out.records[1].scaled_error, 0.0);
    }

    #[test]
    fn sweep_is_thread_independent() {
        let sampler = ThetaSampler::UniformRational {
            max_den: DEFAULT_MAX_DEN,
            with_constants: true,
        };
        let mut cfg = SweepConfig::new(2, vec![4, 8, 16], sampler, 30, 7);
        let mut a = Vec::new();
        write_sweep_csv(&thm2_sweep(&cfg).unwrap(), &mut a).unwrap();
        cfg.threads = 3;
        let mut b = Vec::new();
        write_sweep_csv(&thm2_sweep(&cfg).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn truncation_marker() {
        let mut cfg = SweepConfig::new(2, vec![4, 100], ThetaSampler::WorstCase, 1, 0);
        cfg.cell_cap = 1000;
        let out = thm2_sweep(&cfg).unwrap();
        assert_eq!(out.records.len(), 1);
        assert!(out.truncated.unwrap().contains("N = 100"));
    }

    #[test]
    fn ck_examples() {
        let cfg = SweepConfig::new(2, vec![4, 8, 16], ThetaSampler::WorstCase, 1, 0);
        let fit = ck_estimate(&cfg).unwrap();
        assert!(fit.maxima.iter().all(|&m| m == 0.5));
        assert!(fit.exponent.abs() < 1e-12);
        let one = SweepConfig::new(2, vec![8], ThetaSampler::WorstCase, 1, 0);
        assert!(matches!(ck_estimate(&one), Err(Error::DegenerateFit(_))));
        let hit = SweepConfig::new(2, vec![4, 8], ThetaSampler::FixedList(vec![ThetaValue::from_ratio(1, 2).unwrap()]), 1, 0);
        assert!(matches!(ck_estimate(&hit), Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn min_product_error_matches_tuple_enumeration() {
        let t = ThetaValue::from_ratio(5, 17).unwrap();
        let (n, k) = (6u64, 2usize);
        let set = LcmSet::build(n, k).unwrap();
        let mut best: Option<Fraction> = None;
        for q1 in 1..=n {
            for q2 in 1..=n {
                let l = num_integer::lcm(q1, q2) as u128;
                let e = crate::solver::nearest_multiple(&t, l).unwrap().error * frac((q1 * q2) as i64, 1);
                best = Some(best.map_or(e.clone(), |b| b.min(e)));
            }
        }
        assert_eq!(min_product_error(&t, &set), best.unwrap());
    }

    #[test]
    fn lemma1_examples() {
        let rows = lemma1_ratio_sweep(&[50, 3], 1).unwrap();
        assert_eq!((rows[0].sum, rows[0].ratio), (1275, 0.51));
        let rows = lemma1_ratio_sweep(&[3], 2).unwrap();
        assert_eq!((rows[0].sum, rows[0].ratio), (23, 23.0 / 81.0));
    }

    #[test]
    fn refute_examples() {
        let t = refute_strong_bound(&frac(1, 1), 2, &[3, 4], 1).unwrap();
        assert_eq!(t.rows[0].measure, frac(16, 9));
        assert_eq!(t.rows[1].measure, frac(3, 2));
        assert!(t.endpoints_nonincreasing);
        let t = refute_strong_bound(&frac(1, 1), 1, &[4], 1).unwrap();
        assert_eq!(t.rows[0].measure, frac(4, 1));
        assert!(!t.rows[0].refuted);
        assert!(refute_strong_bound(&frac(0, 1), 2, &[3], 1).is_err());
    }

    #[test]
    fn config_validation() {
        let bad = SweepConfig::new(2, vec![8, 4], ThetaSampler::WorstCase, 1, 0);
        assert!(thm2_sweep(&bad).is_err());
        let bad = SweepConfig::new(2, vec![], ThetaSampler::WorstCase, 1, 0);
        assert!(thm2_sweep(&bad).is_err());
    }
}
