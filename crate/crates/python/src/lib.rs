//! Python bindings for `kfrac`.
//!
//! Exact quantities cross the boundary as Python `int` and
//! `fractions.Fraction`. θ arguments accept an `int`, a `Fraction`, or a
//! string understood by the CLI (`"3/7"`, `"0.125"`, `"golden"`, `"sqrt2m1"`).

use kfrac::experiments::{self, SweepConfig, ThetaSampler};
use kfrac::kernel;
use kfrac::lcmset::{self, LcmBuildOptions};
use kfrac::numtheory;
use kfrac::solver;
use kfrac::{DenominatorMode, Error, ThetaValue};
use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyString};

create_exception!(kfrac_py, ResourceRefusal, PyRuntimeError, "A work or memory budget was exceeded.");
create_exception!(kfrac_py, UncertifiedError, PyValueError, "θ is known too imprecisely to certify the result.");

fn py_err(e: Error) -> PyErr {
    match e {
        Error::ResourceRefusal { .. } => ResourceRefusal::new_err(e.to_string()),
        Error::Uncertified(_) => UncertifiedError::new_err(e.to_string()),
        Error::InvalidInput(_) | Error::DegenerateFit(_) => PyValueError::new_err(e.to_string()),
    }
}

fn theta_arg(obj: &Bound<'_, PyAny>) -> PyResult<ThetaValue> {
    if let Ok(s) = obj.cast::<PyString>() {
        return ThetaValue::parse(s.to_str()?).map_err(py_err);
    }
    if let Ok(i) = obj.extract::<BigInt>() {
        return Ok(ThetaValue::exact(BigRational::from_integer(i)));
    }
    let r: BigRational = obj.extract()?;
    Ok(ThetaValue::exact(r))
}

fn mode(coprime: bool) -> DenominatorMode {
    if coprime {
        DenominatorMode::PairwiseCoprime
    } else {
        DenominatorMode::All
    }
}

/// Totient, Möbius and divisor-count tables for `1..=bound`.
#[pyclass(frozen, module = "kfrac_py")]
struct Sieve {
    inner: numtheory::SieveTables,
}

#[pymethods]
impl Sieve {
    #[new]
    fn new(py: Python<'_>, bound: usize) -> PyResult<Self> {
        let inner = py.detach(|| numtheory::build_sieves(bound)).map_err(py_err)?;
        Ok(Sieve { inner })
    }

    #[getter]
    fn bound(&self) -> usize {
        self.inner.bound()
    }

    fn phi(&self, n: usize) -> PyResult<u64> {
        self.check(n)?;
        Ok(self.inner.phi(n))
    }

    fn mu(&self, n: usize) -> PyResult<i8> {
        self.check(n)?;
        Ok(self.inner.mu(n))
    }

    fn divcount(&self, n: usize) -> PyResult<u32> {
        self.check(n)?;
        Ok(self.inner.divcount(n))
    }

    fn restricted_power_sum(&self, x: usize, m: u64, alpha: u32) -> PyResult<BigRational> {
        self.inner.restricted_power_sum(x, m, alpha).map_err(py_err)
    }

    fn totient_ratio_sum(&self, x: usize, m: u64, alpha: u32) -> PyResult<BigRational> {
        self.inner.totient_ratio_sum(x, m, alpha).map_err(py_err)
    }

    /// Returns `(sum, main_term, remainder)`.
    fn coprime_linear_sum(&self, x: usize, m: u64) -> PyResult<(u128, BigRational, BigRational)> {
        let s = self.inner.coprime_linear_sum(x, m).map_err(py_err)?;
        Ok((s.sum, s.main_term.clone(), s.remainder()))
    }

    fn divisor_reciprocal_sum(&self, n: usize) -> PyResult<BigRational> {
        self.inner.divisor_reciprocal_sum(n).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Sieve(bound={})", self.inner.bound())
    }
}

impl Sieve {
    fn check(&self, n: usize) -> PyResult<()> {
        if n == 0 || n > self.inner.bound() {
            return Err(PyValueError::new_err(format!("n must lie in 1..={}", self.inner.bound())));
        }
        Ok(())
    }
}

/// The set Λ_k(N) of least common multiples of k denominators up to N.
#[pyclass(frozen, module = "kfrac_py")]
struct LcmSet {
    inner: lcmset::LcmSet,
}

#[pymethods]
impl LcmSet {
    #[new]
    #[pyo3(signature = (n, k, coprime = false, threads = 1))]
    fn new(py: Python<'_>, n: u64, k: usize, coprime: bool, threads: usize) -> PyResult<Self> {
        let opts = LcmBuildOptions {
            mode: mode(coprime),
            threads,
            ..Default::default()
        };
        let inner = py.detach(|| lcmset::LcmSet::build_with(n, k, &opts)).map_err(py_err)?;
        Ok(LcmSet { inner })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, lcm: u128) -> bool {
        self.inner.contains(lcm)
    }

    /// Sorted `(L, min_product, witness)` triples.
    fn entries(&self) -> Vec<(u128, u128, Vec<u64>)> {
        self.inner.entries().map(|e| (e.lcm, e.min_product, e.witness.to_vec())).collect()
    }

    fn get(&self, lcm: u128) -> Option<(u128, u128, Vec<u64>)> {
        self.inner.get(lcm).map(|e| (e.lcm, e.min_product, e.witness.to_vec()))
    }

    /// `|Λ_k(N)| / N^k`.
    fn density(&self) -> f64 {
        self.inner.density().ratio
    }

    fn __repr__(&self) -> String {
        format!("LcmSet(n={}, k={}, len={})", self.inner.n(), self.inner.k(), self.inner.len())
    }
}

#[pyclass(frozen, module = "kfrac_py")]
struct ApproxSolution {
    inner: solver::ApproxSolution,
}

#[pymethods]
impl ApproxSolution {
    #[getter]
    fn theta(&self) -> &str {
        &self.inner.theta
    }

    #[getter]
    fn numerators(&self) -> Vec<BigInt> {
        self.inner.numerators.clone()
    }

    #[getter]
    fn denominators(&self) -> Vec<u64> {
        self.inner.denominators.clone()
    }

    #[getter]
    fn lcm(&self) -> u128 {
        self.inner.lcm
    }

    #[getter]
    fn m(&self) -> BigInt {
        self.inner.m.clone()
    }

    #[getter]
    fn error(&self) -> BigRational {
        self.inner.error.clone()
    }

    #[getter]
    fn certified(&self) -> bool {
        self.inner.certified
    }

    /// Σ a_i/q_i.
    fn value(&self) -> BigRational {
        self.inner.value()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __repr__(&self) -> String {
        format!("ApproxSolution({})", self.inner.to_json())
    }
}

#[pyfunction]
#[pyo3(signature = (x, k, budget = numtheory::DEFAULT_WORK_BUDGET))]
fn coprime_weighted_sum(py: Python<'_>, x: u64, k: usize, budget: u64) -> PyResult<u128> {
    py.detach(|| numtheory::coprime_weighted_sum_with_budget(x, k, budget)).map_err(py_err)
}

/// Returns `(g, coeffs)` with `Σ coeffs[i]·values[i] = g = gcd(values)`.
#[pyfunction]
fn ext_gcd_chain(values: Vec<u128>) -> PyResult<(u128, Vec<BigInt>)> {
    numtheory::ext_gcd_chain(&values).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (x, delta, periodized = true))]
fn kernel_eval(x: f64, delta: f64, periodized: bool) -> PyResult<f64> {
    kernel::kernel_eval(x, delta, periodized).map_err(py_err)
}

#[pyfunction]
fn fourier_coeff(h: i64, delta: f64) -> PyResult<f64> {
    kernel::fourier_coeff(h, delta).map_err(py_err)
}

#[pyfunction]
fn aliasing_mean(m: u64, delta: f64) -> PyResult<f64> {
    kernel::aliasing_mean(m, delta).map_err(py_err)
}

#[pyfunction]
fn tail_sum<'py>(py: Python<'py>, m: u64, delta: f64) -> PyResult<Bound<'py, PyDict>> {
    let t = py.detach(|| kernel::tail_sum(m, delta)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("value", t.value)?;
    d.set_item("lower", t.lower)?;
    d.set_item("bound", t.bound)?;
    d.set_item("terms", t.terms)?;
    d.set_item("within_bound", t.within_bound())?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (theta, n, k, delta, budget = numtheory::DEFAULT_WORK_BUDGET))]
fn s_sum<'py>(py: Python<'py>, theta: f64, n: u64, k: usize, delta: f64, budget: u64) -> PyResult<Bound<'py, PyDict>> {
    let s = py.detach(|| kernel::s_sum_with_budget(theta, n, k, delta, budget)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("direct", s.direct)?;
    d.set_item("main_term", s.main_term)?;
    d.set_item("gap", s.gap())?;
    d.set_item("gap_bound", s.gap_bound)?;
    d.set_item("tuples", s.tuples)?;
    d.set_item("holds", s.gap_holds())?;
    Ok(d)
}

#[pyfunction]
fn best_approx(py: Python<'_>, theta: &Bound<'_, PyAny>, lcmset: &LcmSet) -> PyResult<ApproxSolution> {
    let theta = theta_arg(theta)?;
    let inner = py.detach(|| solver::best_approx(&theta, &lcmset.inner)).map_err(py_err)?;
    Ok(ApproxSolution { inner })
}

#[pyfunction]
#[pyo3(signature = (theta, n, k, coprime = false, budget = numtheory::DEFAULT_WORK_BUDGET))]
fn best_approx_bruteforce(
    py: Python<'_>,
    theta: &Bound<'_, PyAny>,
    n: u64,
    k: usize,
    coprime: bool,
    budget: u64,
) -> PyResult<ApproxSolution> {
    let theta = theta_arg(theta)?;
    let inner = py
        .detach(|| solver::best_approx_bruteforce_with_budget(&theta, n, k, mode(coprime), budget))
        .map_err(py_err)?;
    Ok(ApproxSolution { inner })
}

#[pyfunction]
fn dirichlet_k1(theta: &Bound<'_, PyAny>, n: u64) -> PyResult<ApproxSolution> {
    let inner = solver::dirichlet_k1(&theta_arg(theta)?, n).map_err(py_err)?;
    Ok(ApproxSolution { inner })
}

#[pyfunction]
fn reconstruct_tuple(lcm: u128, witness: Vec<u64>, m: BigInt) -> PyResult<Vec<BigInt>> {
    solver::reconstruct_tuple(lcm, &witness, &m).map_err(py_err)
}

/// `(x, sum, ratio)` rows of Σ* q_1⋯q_k / x^{2k}.
#[pyfunction]
#[pyo3(signature = (grid, k, budget = numtheory::DEFAULT_WORK_BUDGET))]
fn lemma1_ratio_sweep(py: Python<'_>, grid: Vec<u64>, k: usize, budget: u64) -> PyResult<Vec<(u64, u128, f64)>> {
    let rows = py
        .detach(|| experiments::lemma1_ratio_sweep_with_budget(&grid, k, budget))
        .map_err(py_err)?;
    Ok(rows.iter().map(|r| (r.x, r.sum, r.ratio)).collect())
}

/// `(N, size, measure, refuted)` rows of 4C·|Λ_k(N)|/N^k.
#[pyfunction]
#[pyo3(signature = (c, k, grid, threads = 1))]
fn refute_strong_bound(
    py: Python<'_>,
    c: BigRational,
    k: usize,
    grid: Vec<u64>,
    threads: usize,
) -> PyResult<Vec<(u64, usize, BigRational, bool)>> {
    let t = py
        .detach(|| experiments::refute_strong_bound(&c, k, &grid, threads))
        .map_err(py_err)?;
    Ok(t.rows.iter().map(|r| (r.n, r.size, r.measure.clone(), r.refuted)).collect())
}

fn sweep_config(k: usize, grid: Vec<u64>, thetas: Option<Vec<Bound<'_, PyAny>>>, samples: usize, seed: u64, threads: usize) -> PyResult<SweepConfig> {
    let sampler = match thetas {
        Some(list) => ThetaSampler::FixedList(list.iter().map(theta_arg).collect::<PyResult<_>>()?),
        None => ThetaSampler::UniformRational {
            max_den: experiments::DEFAULT_MAX_DEN,
            with_constants: true,
        },
    };
    let mut cfg = SweepConfig::new(k, grid, sampler, samples, seed);
    cfg.threads = threads;
    Ok(cfg)
}

/// CSV text of the scaled-error sweep, identical to `kfrac sweep`.
#[pyfunction]
#[pyo3(signature = (k, grid, seed, samples = 100, thetas = None, threads = 1))]
fn thm2_sweep(
    py: Python<'_>,
    k: usize,
    grid: Vec<u64>,
    seed: u64,
    samples: usize,
    thetas: Option<Vec<Bound<'_, PyAny>>>,
    threads: usize,
) -> PyResult<String> {
    let cfg = sweep_config(k, grid, thetas, samples, seed, threads)?;
    let out = py.detach(|| experiments::thm2_sweep(&cfg)).map_err(py_err)?;
    let mut buf = Vec::new();
    experiments::write_sweep_csv(&out, &mut buf).map_err(py_err)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

/// Fitted exponent of max scaled error against log N, with the fitted data.
#[pyfunction]
#[pyo3(signature = (k, grid, seed, samples = 100, thetas = None, threads = 1))]
fn ck_estimate<'py>(
    py: Python<'py>,
    k: usize,
    grid: Vec<u64>,
    seed: u64,
    samples: usize,
    thetas: Option<Vec<Bound<'_, PyAny>>>,
    threads: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = sweep_config(k, grid, thetas, samples, seed, threads)?;
    let fit = py.detach(|| experiments::ck_estimate(&cfg)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("exponent", fit.exponent)?;
    d.set_item("intercept", fit.intercept)?;
    d.set_item("grid", fit.grid)?;
    d.set_item("maxima", fit.maxima)?;
    d.set_item("residuals", fit.residuals)?;
    Ok(d)
}

/// `|Λ_k(N)| / N^k` without keeping the set.
#[pyfunction]
fn density(py: Python<'_>, n: u64, k: usize) -> PyResult<f64> {
    py.detach(|| lcmset::density(n, k)).map(|d| d.ratio).map_err(py_err)
}

#[pymodule]
fn kfrac_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("ResourceRefusal", m.py().get_type::<ResourceRefusal>())?;
    m.add("UncertifiedError", m.py().get_type::<UncertifiedError>())?;
    m.add_class::<Sieve>()?;
    m.add_class::<LcmSet>()?;
    m.add_class::<ApproxSolution>()?;
    m.add_function(wrap_pyfunction!(coprime_weighted_sum, m)?)?;
    m.add_function(wrap_pyfunction!(ext_gcd_chain, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_eval, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_coeff, m)?)?;
    m.add_function(wrap_pyfunction!(aliasing_mean, m)?)?;
    m.add_function(wrap_pyfunction!(tail_sum, m)?)?;
    m.add_function(wrap_pyfunction!(s_sum, m)?)?;
    m.add_function(wrap_pyfunction!(best_approx, m)?)?;
    m.add_function(wrap_pyfunction!(best_approx_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_k1, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct_tuple, m)?)?;
    m.add_function(wrap_pyfunction!(lemma1_ratio_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(refute_strong_bound, m)?)?;
    m.add_function(wrap_pyfunction!(thm2_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(ck_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(density, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pyo3::types::PyModule;

    fn with_module<F: FnOnce(&Bound<'_, PyModule>)>(f: F) {
        Python::initialize();
        Python::attach(|py| {
            let m = PyModule::new(py, "kfrac_py").unwrap();
            kfrac_py(&m).unwrap();
            f(&m);
        });
    }

    #[test]
    fn theta_arguments() {
        Python::initialize();
        Python::attach(|py| {
            let s = PyString::new(py, "3/7");
            assert_eq!(theta_arg(s.as_any()).unwrap().to_string(), "3/7");
            let i = 5i64.into_pyobject(py).unwrap();
            assert_eq!(theta_arg(i.as_any()).unwrap().to_string(), "5");
            let frac = BigRational::new(2.into(), 6.into()).into_pyobject(py).unwrap();
            assert_eq!(theta_arg(frac.as_any()).unwrap().to_string(), "1/3");
            let bad = PyString::new(py, "1/0");
            assert!(theta_arg(bad.as_any()).unwrap_err().is_instance_of::<PyValueError>(py));
        });
    }

    #[test]
    fn error_classes() {
        Python::initialize();
        Python::attach(|py| {
            assert!(py_err(Error::ResourceRefusal { reason: "budget".into(), partial: None }).is_instance_of::<PyRuntimeError>(py));
            assert!(py_err(Error::Uncertified("x".into())).is_instance_of::<UncertifiedError>(py));
            assert!(py_err(Error::DegenerateFit("x".into())).is_instance_of::<PyValueError>(py));
        });
    }

    #[test]
    fn module_round_trip() {
        with_module(|m| {
            let set = m.getattr("LcmSet").unwrap().call1((4u64, 2usize)).unwrap();
            assert_eq!(set.len().unwrap(), 6);
            let sol = m.getattr("best_approx").unwrap().call1(("1/8", &set)).unwrap();
            let err: BigRational = sol.getattr("error").unwrap().extract().unwrap();
            assert_eq!(err, BigRational::new(1.into(), 24.into()));
            let total: u128 = m.getattr("coprime_weighted_sum").unwrap().call1((2u64, 2usize)).unwrap().extract().unwrap();
            assert_eq!(total, 5);
            let refusal = m.getattr("coprime_weighted_sum").unwrap().call1((1000u64, 3usize, 10u64)).unwrap_err();
            assert!(refusal.is_instance_of::<ResourceRefusal>(m.py()));
        });
    }
}
