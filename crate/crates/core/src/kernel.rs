//! The triangle kernel `t(x) = max(1 − |x|/Δ, 0)`, its 1-periodization `g`,
//! the Fourier coefficients `ĝ_h = Δ (sin πΔh / πΔh)²`, bracketed tail sums
//! over multiples of `m`, and the counting sum over coprime denominators.
//!
//! Everything here is double precision. Truncated series are always reported
//! together with a rigorous bracket for the part that was not summed.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numtheory::{for_each_coprime_tuple, DEFAULT_WORK_BUDGET};

/// Target width of the bracket reported by [`tail_sum`].
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// Hard cap on the number of terms [`tail_sum`] sums explicitly.
pub const TAIL_TERM_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    delta: f64,
    trunc: u64,
}

impl KernelParams {
    pub fn new(delta: f64, trunc: u64) -> Result<Self> {
        check_delta(delta)?;
        if trunc == 0 {
            return Err(Error::invalid("Fourier truncation must be at least 1"));
        }
        Ok(Self { delta, trunc })
    }

    /// Width `delta` with truncation `H = ⌈1/(Δm)⌉`.
    pub fn for_modulus(delta: f64, m: u64) -> Result<Self> {
        check_delta(delta)?;
        if m == 0 {
            return Err(Error::invalid("modulus must be positive"));
        }
        Self::new(delta, (1.0 / (delta * m as f64)).ceil() as u64)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn trunc(&self) -> u64 {
        self.trunc
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 0.5 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "kernel width must lie in (0, 1/2), got {delta}"
        )))
    }
}

/// ‖x‖, the distance from `x` to the nearest integer.
pub fn dist_to_nearest_int(x: f64) -> f64 {
    (x - x.round()).abs()
}

fn triangle(x: f64, delta: f64) -> f64 {
    (1.0 - x.abs() / delta).max(0.0)
}

/// `t(x)` when `periodized` is false, else `g(x) = Σ_n t(x − n)`. Translates
/// have disjoint supports for Δ < 1/2, so `g(x) = t(‖x‖)`.
pub fn kernel_eval(x: f64, delta: f64, periodized: bool) -> Result<f64> {
    check_delta(delta)?;
    Ok(if periodized {
        triangle(dist_to_nearest_int(x), delta)
    } else {
        triangle(x, delta)
    })
}

fn coeff_unchecked(h: f64, delta: f64) -> f64 {
    if h == 0.0 {
        return delta;
    }
    let arg = PI * delta * h;
    let s = arg.sin() / arg;
    delta * s * s
}

/// ĝ_h = Δ (sin πΔh / πΔh)², with ĝ_0 = Δ.
pub fn fourier_coeff(h: i64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    Ok(coeff_unchecked(h as f64, delta))
}

/// Σ_{|h| ≤ H} ĝ_h e(hx). The coefficients are even in `h`, so the series is
/// the cosine sum `ĝ_0 + 2 Σ_{h=1}^{H} ĝ_h cos 2πhx`.
pub fn fourier_partial_sum(x: f64, params: &KernelParams) -> f64 {
    let mut acc = Neumaier::default();
    acc.add(params.delta);
    for h in 1..=params.trunc {
        let hf = h as f64;
        acc.add(2.0 * coeff_unchecked(hf, params.delta) * (2.0 * PI * hf * x).cos());
    }
    acc.total()
}

/// Bound on |fourier_partial_sum − g| coming from the discarded coefficients.
pub fn fourier_truncation_bound(params: &KernelParams) -> f64 {
    2.0 / (PI * PI * params.delta * params.trunc as f64)
}

/// Σ_{a=1}^{q} e(ha/q): equal to `q` when `q | h` and to 0 otherwise.
pub fn root_of_unity_sum(h: i64, q: u64) -> Complex64 {
    (1..=q)
        .map(|a| {
            // reduce ha mod q first so the angle stays in [0, 2π)
            let r = (h as i128 * a as i128).rem_euclid(q as i128) as f64;
            Complex64::from_polar(1.0, 2.0 * PI * r / q as f64)
        })
        .sum()
}

/// (1/m) Σ_{j<m} g(j/m), which equals Σ_{h ≡ 0 mod m} ĝ_h by Poisson summation.
pub fn aliasing_mean(m: u64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if m == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    let total: f64 = (0..m)
        .map(|j| triangle(dist_to_nearest_int(j as f64 / m as f64), delta))
        .sum();
    Ok(total / m as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSum {
    pub m: u64,
    pub delta: f64,
    /// Upper end of the bracket for Σ_{h≠0} |ĝ_{mh}|.
    pub value: f64,
    /// Lower end of the bracket.
    pub lower: f64,
    /// 6/m when Δ ≤ 1/m, else 4/m.
    pub bound: f64,
    /// Number of positive `h` summed explicitly.
    pub terms: u64,
}

impl TailSum {
    pub fn within_bound(&self) -> bool {
        self.value <= self.bound
    }
}

/// Enveloping bracket for the trigamma value ψ'(x) = Σ_{n≥0} 1/(x+n)², x ≥ 1.
fn trigamma_bracket(x: f64) -> (f64, f64) {
    let x2 = x * x;
    let hi = 1.0 / x + 1.0 / (2.0 * x2) + 1.0 / (6.0 * x2 * x);
    let lo = hi - 1.0 / (30.0 * x2 * x2 * x);
    (lo, hi)
}

/// Σ_{h≠0} |ĝ_{mh}| bracketed to within [`TAIL_TOLERANCE`] where the term cap
/// allows it.
///
/// With β = Δm the summand is `sin²(πβh)/(π²Δm²h²)`. Writing
/// `sin² = (1 − cos 2πβh)/2`, the tail past `H` is `A (ψ'(H+1) − C)` with
/// `A = 1/(π²Δm²)` and `C = Σ_{h>H} cos(2πβh)/h²`. Partial sums of
/// `cos 2πβh` are at most `1/|sin πβ|` in size, so Abel summation gives
/// `|C| ≤ 1/(|sin πβ| (H+1)²)`; trivially `|C| ≤ ψ'(H+1)` as well.
pub fn tail_sum(m: u64, delta: f64) -> Result<TailSum> {
    check_delta(delta)?;
    if m == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    let mf = m as f64;
    let beta = delta * mf;
    let bound = if delta <= 1.0 / mf { 6.0 / mf } else { 4.0 / mf };

    if beta.fract() == 0.0 {
        // sin(πβh) vanishes for every h
        return Ok(TailSum {
            m,
            delta,
            value: 0.0,
            lower: 0.0,
            bound,
            terms: 0,
        });
    }

    let amp = 1.0 / (PI * PI * delta * mf * mf);
    let s = (PI * beta).sin().abs();
    let h_abel = (2.0 * amp / (s * TAIL_TOLERANCE)).sqrt();
    let h_crude = 2.0 * amp / TAIL_TOLERANCE;
    let wanted = h_abel.min(h_crude).max((1.0 / beta).ceil());
    let terms = (wanted.ceil() as u64).clamp(1, TAIL_TERM_CAP);

    let mut acc = Neumaier::default();
    for h in 1..=terms {
        acc.add(coeff_unchecked(h as f64 * mf, delta));
    }
    let partial = 2.0 * acc.total();

    let x = terms as f64 + 1.0;
    let (psi_lo, psi_hi) = trigamma_bracket(x);
    let c_bound = psi_hi.min(1.0 / (s * x * x));
    let tail_lo = amp * (psi_lo - c_bound).max(0.0);
    let tail_hi = amp * (psi_hi + c_bound);

    let out = TailSum {
        m,
        delta,
        value: partial + tail_hi,
        lower: partial + tail_lo,
        bound,
        terms,
    };
    debug_assert!(out.within_bound(), "tail bound violated: {out:?}");
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SSum {
    /// Σ* Σ_a g(Σ a_i/q_i − θ), evaluated pointwise.
    pub direct: f64,
    /// Δ · Σ* q_1⋯q_k.
    pub main_term: f64,
    /// 6 · (number of pairwise-coprime tuples).
    pub gap_bound: f64,
    pub tuples: u64,
    pub weighted_count: u128,
}

impl SSum {
    pub fn gap(&self) -> f64 {
        (self.direct - self.main_term).abs()
    }

    pub fn gap_holds(&self) -> bool {
        self.gap() <= self.gap_bound
    }
}

pub fn s_sum(theta: f64, n: u64, k: usize, delta: f64) -> Result<SSum> {
    s_sum_with_budget(theta, n, k, delta, DEFAULT_WORK_BUDGET)
}

/// The counting sum over pairwise-coprime denominator tuples and all
/// numerators `1 ≤ a_i ≤ q_i`. The kernel is evaluated in closed form.
pub fn s_sum_with_budget(theta: f64, n: u64, k: usize, delta: f64, budget: u64) -> Result<SSum> {
    check_delta(delta)?;
    let mut tuples: Vec<Vec<u64>> = Vec::new();
    for_each_coprime_tuple(n, k, budget, |t| tuples.push(t.to_vec()))?;
    let weighted_count: u128 = tuples
        .iter()
        .map(|t| t.iter().map(|&q| q as u128).product::<u128>())
        .sum();
    if weighted_count > budget as u128 {
        return Err(Error::refusal(
            format!("{weighted_count} kernel evaluations exceed work budget {budget}"),
            None,
        ));
    }

    let mut direct = Neumaier::default();
    let mut numerators = vec![0u64; k];
    for q in &tuples {
        // pairwise coprime, so the common denominator is the product
        let prod: u64 = q.iter().product();
        let cofactors: Vec<u64> = q.iter().map(|&qi| prod / qi).collect();
        numerators.iter_mut().for_each(|a| *a = 1);
        loop {
            let r = numerators
                .iter()
                .zip(&cofactors)
                .fold(0u64, |acc, (&a, &c)| (acc + a * c) % prod);
            let x = r as f64 / prod as f64 - theta;
            direct.add(triangle(dist_to_nearest_int(x), delta));
            if !advance(&mut numerators, q) {
                break;
            }
        }
    }

    let out = SSum {
        direct: direct.total(),
        main_term: delta * weighted_count as f64,
        gap_bound: 6.0 * tuples.len() as f64,
        tuples: tuples.len() as u64,
        weighted_count,
    };
    debug_assert!(out.gap_holds(), "counting-sum gap violated: {out:?}");
    Ok(out)
}

/// Odometer over `1 ≤ a_i ≤ q_i`; returns false after the last tuple.
fn advance(a: &mut [u64], q: &[u64]) -> bool {
    for i in (0..a.len()).rev() {
        if a[i] < q[i] {
            a[i] += 1;
            return true;
        }
        a[i] = 1;
    }
    false
}

/// Neumaier's compensated summation.
#[derive(Debug, Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}
