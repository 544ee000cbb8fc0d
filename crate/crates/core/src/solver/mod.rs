//! Exact best approximation of θ by `a_1/q_1 + ... + a_k/q_k` with
//! `1 ≤ q_i ≤ N`.
//!
//! Every such sum is some `m/L` with `L ∈ Λ_k(N)`, and every `m/L` with
//! `L ∈ Λ_k(N)` is such a sum, so the minimum error is
//! `min_{L ∈ Λ} dist(θ, (1/L)·Z) = min_L ‖Lθ‖/L`. [`best_approx`] scans the
//! lcm set; [`best_approx_bruteforce`] enumerates denominator tuples
//! directly and is kept as the independent check of that reduction.

mod cf;
mod theta;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lcmset::{DenominatorMode, LcmSet};
use crate::numtheory::{ext_gcd_chain, DEFAULT_WORK_BUDGET};

pub use cf::{convergents, dirichlet_k1};
pub use theta::{format_fraction, ThetaValue, FIXED_POINT_BITS, NAMED_CONSTANTS};

/// Exact rational, always reduced with a positive denominator.
pub type Fraction = BigRational;

/// The multiple `m/L` nearest to θ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearestMultiple {
    pub m: BigInt,
    /// |m/L − center(θ)|, exact.
    pub error: Fraction,
    /// Uncertainty of `error` inherited from θ.
    pub radius: Fraction,
}

impl NearestMultiple {
    pub fn interval(&self) -> (Fraction, Fraction) {
        let lo = (&self.error - &self.radius).max(Fraction::zero());
        (lo, &self.error + &self.radius)
    }
}

/// `m = ⌈Lθ − 1/2⌉`, i.e. round to nearest with exact halves going down.
pub fn nearest_multiple(theta: &ThetaValue, lcm: u128) -> Result<NearestMultiple> {
    if lcm == 0 {
        return Err(Error::invalid("L must be positive"));
    }
    Ok(nearest_unchecked(theta, &BigInt::from(lcm)))
}

fn nearest_unchecked(theta: &ThetaValue, lcm: &BigInt) -> NearestMultiple {
    let c = theta.center();
    let (p, r) = (c.numer(), c.denom());
    // ⌈(2Lp − r)/(2r)⌉
    let two_r: BigInt = r << 1;
    let num: BigInt = ((lcm * p) << 1) - r;
    let m = -((-num).div_floor(&two_r));
    let error = (BigRational::new(m.clone(), lcm.clone()) - c).abs();
    NearestMultiple {
        m,
        error,
        radius: theta.eps().clone(),
    }
}

/// A certified-or-not best approximation together with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxSolution {
    pub theta: String,
    pub n: u64,
    pub k: usize,
    pub numerators: Vec<BigInt>,
    pub denominators: Vec<u64>,
    pub lcm: u128,
    pub m: BigInt,
    /// |m/L − θ| (exact when θ is exact, else measured from θ's center).
    pub error: Fraction,
    pub error_radius: Fraction,
    pub certified: bool,
    /// Closest competing value when the argmin could not be certified.
    pub runner_up: Option<RunnerUp>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunnerUp {
    pub lcm: u128,
    pub m: BigInt,
    pub error: Fraction,
}

impl ApproxSolution {
    /// Checks `lcm(q) = L`, `1 ≤ q_i ≤ N` and `Σ a_i/q_i = m/L` exactly.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        theta: &ThetaValue,
        n: u64,
        numerators: Vec<BigInt>,
        denominators: Vec<u64>,
        lcm: u128,
        m: BigInt,
        error: Fraction,
        certified: bool,
    ) -> Result<Self> {
        if numerators.len() != denominators.len() || denominators.is_empty() {
            return Err(Error::invalid("numerator/denominator tuples must have equal nonzero length"));
        }
        if denominators.iter().any(|&q| q == 0 || q > n) {
            return Err(Error::invalid(format!("denominators {denominators:?} outside [1, {n}]")));
        }
        let l = denominators.iter().fold(1u128, |acc, &q| acc.lcm(&(q as u128)));
        if l != lcm {
            return Err(Error::invalid(format!("lcm{denominators:?} = {l}, expected {lcm}")));
        }
        let sum: Fraction = numerators
            .iter()
            .zip(&denominators)
            .map(|(a, &q)| BigRational::new(a.clone(), BigInt::from(q)))
            .sum();
        if sum != BigRational::new(m.clone(), BigInt::from(lcm)) {
            return Err(Error::invalid(format!("Σ a_i/q_i = {sum} differs from {m}/{lcm}")));
        }
        Ok(Self {
            theta: theta.to_string(),
            n,
            k: denominators.len(),
            numerators,
            denominators,
            lcm,
            m,
            error,
            error_radius: theta.eps().clone(),
            certified,
            runner_up: None,
        })
    }

    pub fn value(&self) -> Fraction {
        BigRational::new(self.m.clone(), BigInt::from(self.lcm))
    }

    pub fn denominator_product(&self) -> u128 {
        self.denominators.iter().map(|&q| q as u128).product()
    }

    pub fn error_f64(&self) -> f64 {
        self.error.to_f64().unwrap_or(f64::NAN)
    }

    /// `{theta, N, k, error_num, error_den, m, L, a, q, certified}`, plus
    /// `error_radius` (as `p/q`) and `runner_up` when θ is inexact.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "theta": self.theta,
            "N": self.n,
            "k": self.k,
            "error_num": big_number(self.error.numer()),
            "error_den": big_number(self.error.denom()),
            "m": big_number(&self.m),
            "L": big_number(&BigInt::from(self.lcm)),
            "a": self.numerators.iter().map(big_number).collect::<Vec<_>>(),
            "q": self.denominators,
            "certified": self.certified,
        });
        if !self.error_radius.is_zero() {
            v["error_radius"] = Value::String(format_fraction(&self.error_radius));
        }
        if let Some(r) = &self.runner_up {
            v["runner_up"] = json!({
                "L": big_number(&BigInt::from(r.lcm)),
                "m": big_number(&r.m),
                "error": format_fraction(&r.error),
            });
        }
        v
    }
}

pub(crate) fn big_number(v: &BigInt) -> Value {
    Value::Number(v.to_string().parse().expect("integer literal is a JSON number"))
}

/// Integers `a_i` with `Σ a_i (L/q_i) = m`, so that `Σ a_i/q_i = m/L`.
///
/// Solvable since `gcd_i(L/q_i) = 1`: for each prime `p | L` some `q_i`
/// carries the full power `p^{v_p(L)}`. The result is normalised to
/// `0 ≤ a_i < q_i` for `i ≥ 2`, with `a_1` absorbing integer parts.
pub fn reconstruct_tuple(lcm: u128, witness: &[u64], m: &BigInt) -> Result<Vec<BigInt>> {
    if witness.is_empty() || witness.contains(&0) {
        return Err(Error::invalid("witness must be a nonempty tuple of positive integers"));
    }
    let l = witness.iter().fold(1u128, |acc, &q| acc.lcm(&(q as u128)));
    if l != lcm {
        return Err(Error::invalid(format!("lcm{witness:?} = {l}, not {lcm}")));
    }
    let cofactors: Vec<u128> = witness.iter().map(|&q| lcm / q as u128).collect();
    let (g, coeffs) = ext_gcd_chain(&cofactors)?;
    debug_assert_eq!(g, 1);
    let mut a: Vec<BigInt> = coeffs.into_iter().map(|c| c * m).collect();
    let q1 = BigInt::from(witness[0]);
    for i in 1..a.len() {
        let qi = BigInt::from(witness[i]);
        let (t, r) = a[i].div_mod_floor(&qi);
        a[i] = r;
        a[0] += t * &q1;
    }
    debug_assert_eq!(
        a.iter()
            .zip(&cofactors)
            .map(|(ai, &c)| ai * BigInt::from(c))
            .sum::<BigInt>(),
        *m
    );
    Ok(a)
}

/// Candidate ordering key: error, then L, then m, then product, then witness.
#[derive(Debug, Clone)]
struct Candidate {
    error: Fraction,
    lcm: u128,
    m: BigInt,
    product: u128,
    witness: Vec<u64>,
}

impl Candidate {
    fn cmp_key(&self, other: &Self) -> Ordering {
        self.error
            .cmp(&other.error)
            .then(self.lcm.cmp(&other.lcm))
            .then(self.m.cmp(&other.m))
            .then(self.product.cmp(&other.product))
            .then_with(|| self.witness.cmp(&other.witness))
    }

    fn same_value(&self, lcm: u128, m: &BigInt) -> bool {
        &self.m * BigInt::from(lcm) == m * BigInt::from(self.lcm)
    }
}

/// Running argmin plus the smallest error among values different from it,
/// which is what interval certification needs.
#[derive(Debug, Default)]
struct Tracker {
    best: Option<Candidate>,
    runner_up: Option<RunnerUp>,
}

impl Tracker {
    fn note_runner_up(&mut self, lcm: u128, m: BigInt, error: Fraction) {
        if self.runner_up.as_ref().is_none_or(|r| error < r.error) {
            self.runner_up = Some(RunnerUp { lcm, m, error });
        }
    }

    fn offer(&mut self, cand: Candidate, theta: &ThetaValue) {
        let track = !theta.is_exact();
        // second-nearest multiple at the same L competes for certification
        if track {
            let lf = BigInt::from(cand.lcm);
            let scaled = theta.center() * BigRational::from_integer(lf.clone());
            let m2 = if scaled >= BigRational::from_integer(cand.m.clone()) {
                &cand.m + BigInt::one()
            } else {
                &cand.m - BigInt::one()
            };
            let e2 = (BigRational::new(m2.clone(), lf) - theta.center()).abs();
            self.note_runner_up(cand.lcm, m2, e2);
        }
        match &self.best {
            None => self.best = Some(cand),
            Some(best) => {
                if cand.cmp_key(best) == Ordering::Less {
                    let old = self.best.replace(cand).expect("checked above");
                    if track && !self.best.as_ref().unwrap().same_value(old.lcm, &old.m) {
                        self.note_runner_up(old.lcm, old.m, old.error);
                    }
                } else if track && !best.same_value(cand.lcm, &cand.m) {
                    self.note_runner_up(cand.lcm, cand.m, cand.error);
                }
            }
        }
    }

    fn finish(self, theta: &ThetaValue, n: u64) -> Result<ApproxSolution> {
        let best = self.best.ok_or_else(|| Error::invalid("no candidates"))?;
        let two_eps = theta.eps() * Fraction::from_integer(BigInt::from(2));
        let certified = theta.is_exact()
            || self
                .runner_up
                .as_ref()
                .is_none_or(|r| r.error.clone() - &best.error > two_eps);
        let numerators = reconstruct_tuple(best.lcm, &best.witness, &best.m)?;
        let mut sol = ApproxSolution::new(
            theta,
            n,
            numerators,
            best.witness,
            best.lcm,
            best.m,
            best.error,
            certified,
        )?;
        if !certified {
            sol.runner_up = self.runner_up;
        }
        Ok(sol)
    }
}

/// Exact minimum of |Σ a_i/q_i − θ| over the lcm set `lcmset`.
///
/// Ties go to the smaller `L`, then the smaller `m`; the witness is the
/// stored minimal-product tuple.
pub fn best_approx(theta: &ThetaValue, lcmset: &LcmSet) -> Result<ApproxSolution> {
    if let Some(idx) = fast_scan(theta, lcmset) {
        let e = lcmset.entry(idx);
        let near = nearest_unchecked(theta, &BigInt::from(e.lcm));
        let numerators = reconstruct_tuple(e.lcm, e.witness, &near.m)?;
        return ApproxSolution::new(
            theta,
            lcmset.n(),
            numerators,
            e.witness.to_vec(),
            e.lcm,
            near.m,
            near.error,
            true,
        );
    }
    let mut tracker = Tracker::default();
    for e in lcmset.entries() {
        let near = nearest_unchecked(theta, &BigInt::from(e.lcm));
        tracker.offer(
            Candidate {
                error: near.error,
                lcm: e.lcm,
                m: near.m,
                product: e.min_product,
                witness: e.witness.to_vec(),
            },
            theta,
        );
    }
    tracker.finish(theta, lcmset.n())
}

/// Machine-integer scan for exact θ = p/r with `r < 2^64` and `L < 2^64`.
///
/// The error at `L` is `dist/(L r)` with `dist = min(t, r − t)`,
/// `t = Lp mod r`, so candidates compare by `dist_1 L_2` vs `dist_2 L_1`.
/// Entries are sorted by `L`, so keeping the first strict minimum applies the
/// smaller-`L` tie-break.
fn fast_scan(theta: &ThetaValue, lcmset: &LcmSet) -> Option<usize> {
    let c = theta.exact_value()?;
    let r = c.denom().to_u64()?;
    if lcmset.lcm_values().last().is_none_or(|&l| l > u64::MAX as u128) {
        return None;
    }
    let p_mod = c.numer().mod_floor(&BigInt::from(r)).to_u64()? as u128;
    let r = r as u128;
    let mut best: Option<(u128, u128, usize)> = None;
    for (i, &l) in lcmset.lcm_values().iter().enumerate() {
        let t = (l % r) * p_mod % r;
        let dist = t.min(r - t);
        match best {
            Some((bd, bl, _)) if dist * bl >= bd * l => {}
            _ => best = Some((dist, l, i)),
        }
    }
    best.map(|(_, _, i)| i)
}

/// Direct enumeration of every denominator tuple in `[1, N]^k` (only the
/// pairwise-coprime ones under [`DenominatorMode::PairwiseCoprime`]),
/// taking the nearest multiple of `1/lcm(q)` for each.
pub fn best_approx_bruteforce(theta: &ThetaValue, n: u64, k: usize, mode: DenominatorMode) -> Result<ApproxSolution> {
    best_approx_bruteforce_with_budget(theta, n, k, mode, DEFAULT_WORK_BUDGET)
}

pub fn best_approx_bruteforce_with_budget(
    theta: &ThetaValue,
    n: u64,
    k: usize,
    mode: DenominatorMode,
    budget: u64,
) -> Result<ApproxSolution> {
    if n == 0 || k == 0 {
        return Err(Error::invalid("N and k must be positive"));
    }
    let work = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if work > budget as u128 {
        return Err(Error::refusal(
            format!("{n}^{k} denominator tuples exceed work budget {budget}"),
            None,
        ));
    }
    let mut tracker = Tracker::default();
    let mut q = vec![1u64; k];
    loop {
        let pairwise_ok = mode == DenominatorMode::All
            || (0..k).all(|i| (i + 1..k).all(|j| q[i].gcd(&q[j]) == 1));
        if pairwise_ok {
            let lcm = q.iter().fold(1u128, |acc, &qi| acc.lcm(&(qi as u128)));
            let near = nearest_unchecked(theta, &BigInt::from(lcm));
            tracker.offer(
                Candidate {
                    error: near.error,
                    lcm,
                    m: near.m,
                    product: q.iter().map(|&x| x as u128).product(),
                    witness: q.clone(),
                },
                theta,
            );
        }
        if !odometer(&mut q, n) {
            break;
        }
    }
    tracker.finish(theta, n)
}

fn odometer(q: &mut [u64], n: u64) -> bool {
    for i in (0..q.len()).rev() {
        if q[i] < n {
            q[i] += 1;
            return true;
        }
        q[i] = 1;
    }
    false
}
