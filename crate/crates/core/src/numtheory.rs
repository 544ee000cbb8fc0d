//! Arithmetic substrate: a linear sieve for φ, μ and d, Bézout chains, and the
//! direct (oracle-grade) summations over coprime integers and coprime tuples.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest sieve bound accepted by [`build_sieves`].
pub const DEFAULT_SIEVE_CAP: usize = 100_000_000;

/// Default cap on gcd operations for direct tuple enumeration.
pub const DEFAULT_WORK_BUDGET: u64 = 1_000_000_000;

/// φ(n), μ(n) and d(n) for `1 <= n <= bound`. Index 0 is unused and holds 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveTables {
    bound: usize,
    phi: Vec<u64>,
    mu: Vec<i8>,
    divcount: Vec<u32>,
    spf: Vec<u32>,
}

pub fn build_sieves(x: usize) -> Result<SieveTables> {
    build_sieves_capped(x, DEFAULT_SIEVE_CAP)
}

/// Linear sieve: each composite is visited once, through its smallest prime
/// factor, which gives φ, μ and d multiplicatively in the same pass.
pub fn build_sieves_capped(x: usize, cap: usize) -> Result<SieveTables> {
    if x == 0 {
        return Err(Error::invalid("sieve bound must be at least 1"));
    }
    if x > cap {
        return Err(Error::refusal(
            format!("sieve bound {x} exceeds cap {cap}"),
            None,
        ));
    }
    let len = x + 1;
    let mut phi = vec![0u64; len];
    let mut mu = vec![0i8; len];
    let mut divcount = vec![0u32; len];
    let mut spf = vec![0u32; len];
    // exponent of the smallest prime factor
    let mut spf_exp = vec![0u32; len];
    let mut primes: Vec<usize> = Vec::new();

    phi[1] = 1;
    mu[1] = 1;
    divcount[1] = 1;
    spf[1] = 1;
    for i in 2..len {
        if spf[i] == 0 {
            spf[i] = i as u32;
            spf_exp[i] = 1;
            phi[i] = (i - 1) as u64;
            mu[i] = -1;
            divcount[i] = 2;
            primes.push(i);
        }
        for &p in &primes {
            let ip = i * p;
            if ip >= len || p > spf[i] as usize {
                break;
            }
            spf[ip] = p as u32;
            if p == spf[i] as usize {
                let e = spf_exp[i];
                spf_exp[ip] = e + 1;
                phi[ip] = phi[i] * p as u64;
                mu[ip] = 0;
                divcount[ip] = divcount[i] / (e + 1) * (e + 2);
            } else {
                spf_exp[ip] = 1;
                phi[ip] = phi[i] * (p as u64 - 1);
                mu[ip] = -mu[i];
                divcount[ip] = divcount[i] * 2;
            }
        }
    }
    Ok(SieveTables {
        bound: x,
        phi,
        mu,
        divcount,
        spf,
    })
}

impl SieveTables {
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn phi(&self, n: usize) -> u64 {
        self.phi[n]
    }

    pub fn mu(&self, n: usize) -> i8 {
        self.mu[n]
    }

    pub fn divcount(&self, n: usize) -> u32 {
        self.divcount[n]
    }

    pub fn smallest_prime_factor(&self, n: usize) -> u32 {
        self.spf[n]
    }

    fn check_range(&self, x: usize, m: u64) -> Result<()> {
        if x == 0 || m == 0 {
            return Err(Error::invalid("x and m must be positive"));
        }
        if x > self.bound {
            return Err(Error::invalid(format!(
                "x = {x} exceeds sieve bound {}",
                self.bound
            )));
        }
        Ok(())
    }

    /// Σ_{n ≤ x, (n,m)=1} φ(n)^α n^{1−α}, computed as φ(n)^α / n^{α−1}.
    pub fn restricted_power_sum(&self, x: usize, m: u64, alpha: u32) -> Result<BigRational> {
        self.check_range(x, m)?;
        let mut int_part = BigInt::zero();
        let mut frac_part = BigRational::zero();
        for n in (1..=x).filter(|&n| (n as u64).gcd(&m) == 1) {
            let phi = BigInt::from(self.phi[n]);
            match alpha {
                0 => int_part += n,
                1 => int_part += phi,
                _ => {
                    frac_part +=
                        BigRational::new(phi.pow(alpha), BigInt::from(n).pow(alpha - 1));
                }
            }
        }
        Ok(frac_part + BigRational::from_integer(int_part))
    }

    /// Σ_{n ≤ x, (n,m)=1} (n/φ(n))^α.
    pub fn totient_ratio_sum(&self, x: usize, m: u64, alpha: u32) -> Result<BigRational> {
        self.check_range(x, m)?;
        let mut acc = BigRational::zero();
        for n in (1..=x).filter(|&n| (n as u64).gcd(&m) == 1) {
            acc += BigRational::new(BigInt::from(n).pow(alpha), BigInt::from(self.phi[n]).pow(alpha));
        }
        Ok(acc)
    }

    /// Σ_{n ≤ x, (n,m)=1} n together with its main term φ(m)x²/(2m).
    pub fn coprime_linear_sum(&self, x: usize, m: u64) -> Result<CoprimeLinearSum> {
        self.check_range(x, m)?;
        let sum: u128 = (1..=x)
            .filter(|&n| (n as u64).gcd(&m) == 1)
            .map(|n| n as u128)
            .sum();
        let xb = BigInt::from(x);
        let main_term = BigRational::new(BigInt::from(phi_of(m)) * &xb * &xb, BigInt::from(2 * m as u128));
        Ok(CoprimeLinearSum {
            x: x as u64,
            m,
            sum,
            main_term,
        })
    }

    /// Σ_{q ≤ n} 1/d(q).
    pub fn divisor_reciprocal_sum(&self, n: usize) -> Result<BigRational> {
        self.check_range(n, 1)?;
        let mut acc = BigRational::zero();
        for q in 1..=n {
            acc += BigRational::new(BigInt::one(), BigInt::from(self.divcount[q]));
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoprimeLinearSum {
    pub x: u64,
    pub m: u64,
    pub sum: u128,
    pub main_term: BigRational,
}

impl CoprimeLinearSum {
    pub fn remainder(&self) -> BigRational {
        (BigRational::from_integer(BigInt::from(self.sum)) - &self.main_term).abs()
    }

    /// |sum − main_term| / (x·d(m)); the implied constant of the remainder.
    pub fn remainder_ratio(&self) -> f64 {
        let denom = BigRational::from_integer(BigInt::from(self.x) * BigInt::from(divisor_count_of(self.m)));
        (self.remainder() / denom).to_f64().unwrap_or(f64::NAN)
    }
}

pub fn restricted_power_sum(x: usize, m: u64, alpha: u32) -> Result<BigRational> {
    build_sieves(x)?.restricted_power_sum(x, m, alpha)
}

pub fn totient_ratio_sum(x: usize, m: u64, alpha: u32) -> Result<BigRational> {
    build_sieves(x)?.totient_ratio_sum(x, m, alpha)
}

pub fn coprime_linear_sum(x: usize, m: u64) -> Result<CoprimeLinearSum> {
    build_sieves(x)?.coprime_linear_sum(x, m)
}

pub fn divisor_reciprocal_sum(n: usize) -> Result<BigRational> {
    build_sieves(n)?.divisor_reciprocal_sum(n)
}

/// Ratio of the totient-ratio sum to x·φ(m)/m.
pub fn totient_ratio_report(sum: &BigRational, x: usize, m: u64) -> f64 {
    let scale = BigRational::new(BigInt::from(x) * BigInt::from(phi_of(m)), BigInt::from(m));
    (sum / scale).to_f64().unwrap_or(f64::NAN)
}

/// Prime factorisation by trial division, as (p, e) pairs in increasing p.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn phi_of(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn divisor_count_of(n: u64) -> u64 {
    factorize(n).into_iter().map(|(_, e)| e as u64 + 1).product()
}

pub fn lcm_u128(a: u128, b: u128) -> Option<u128> {
    (a / a.gcd(&b)).checked_mul(b)
}

fn ext_gcd_pair(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    (old_r, old_s, old_t)
}

/// gcd of `values` with Bézout coefficients, by left-folding the two-term
/// extended Euclid: Σ coeffs[i]·values[i] = g.
pub fn ext_gcd_chain(values: &[u128]) -> Result<(u128, Vec<BigInt>)> {
    let (first, rest) = values
        .split_first()
        .ok_or_else(|| Error::invalid("ext_gcd_chain needs at least one value"))?;
    if values.contains(&0) {
        return Err(Error::invalid("ext_gcd_chain values must be positive"));
    }
    let mut g = BigInt::from(*first);
    let mut coeffs = vec![BigInt::one()];
    for &v in rest {
        let (next, s, t) = ext_gcd_pair(&g, &BigInt::from(v));
        for c in coeffs.iter_mut() {
            *c *= &s;
        }
        coeffs.push(t);
        g = next;
    }
    debug_assert_eq!(
        values
            .iter()
            .zip(&coeffs)
            .map(|(&v, c)| c * BigInt::from(v))
            .sum::<BigInt>(),
        g
    );
    let g = g.to_u128().expect("gcd of u128 values fits u128");
    Ok((g, coeffs))
}

/// Visits every k-tuple in `[1, x]^k` whose entries are pairwise coprime, in
/// lexicographic order. Pairwise coprimality is tested incrementally against
/// the running product, which is coprime to `q` iff every earlier entry is.
pub fn for_each_coprime_tuple<F>(x: u64, k: usize, budget: u64, mut visit: F) -> Result<u64>
where
    F: FnMut(&[u64]),
{
    if x == 0 || k == 0 {
        return Err(Error::invalid("x and k must be positive"));
    }
    let work = (x as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if work > budget as u128 {
        return Err(Error::refusal(
            format!("x^k = {x}^{k} tuples exceed work budget {budget}"),
            None,
        ));
    }
    let mut tuple = vec![0u64; k];
    let mut products = vec![1u128; k + 1];
    let mut count = 0u64;
    recurse(x, 0, &mut tuple, &mut products, &mut count, &mut visit);
    Ok(count)
}

fn recurse<F: FnMut(&[u64])>(
    x: u64,
    depth: usize,
    tuple: &mut [u64],
    products: &mut [u128],
    count: &mut u64,
    visit: &mut F,
) {
    if depth == tuple.len() {
        *count += 1;
        visit(tuple);
        return;
    }
    for q in 1..=x {
        if (q as u128).gcd(&products[depth]) != 1 {
            continue;
        }
        tuple[depth] = q;
        products[depth + 1] = products[depth] * q as u128;
        recurse(x, depth + 1, tuple, products, count, visit);
    }
}

/// Σ* q_1⋯q_k over pairwise-coprime tuples with q_i ≤ x.
pub fn coprime_weighted_sum(x: u64, k: usize) -> Result<u128> {
    coprime_weighted_sum_with_budget(x, k, DEFAULT_WORK_BUDGET)
}

pub fn coprime_weighted_sum_with_budget(x: u64, k: usize, budget: u64) -> Result<u128> {
    let mut total = 0u128;
    for_each_coprime_tuple(x, k, budget, |t| {
        total += t.iter().map(|&q| q as u128).product::<u128>();
    })?;
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sieve_values() {
        let s = build_sieves(12).unwrap();
        assert_eq!((s.phi(12), s.mu(12), s.divcount(12)), (4, 0, 6));
        assert_eq!((s.phi(7), s.mu(7), s.divcount(7)), (6, -1, 2));
        let one = build_sieves(1).unwrap();
        assert_eq!((one.phi(1), one.mu(1), one.divcount(1)), (1, 1, 1));
    }

    #[test]
    fn sieve_rejects_bad_bounds() {
        assert!(matches!(build_sieves(0), Err(Error::InvalidInput(_))));
        assert!(matches!(
            build_sieves_capped(1000, 999),
            Err(Error::ResourceRefusal { .. })
        ));
    }

    #[test]
    fn sieve_divisor_identities() {
        let s = build_sieves(10_000).unwrap();
        let mut phi_sum = vec![0u64; 10_001];
        let mut mu_sum = vec![0i64; 10_001];
        for d in 1..=10_000 {
            for n in (d..=10_000).step_by(d) {
                phi_sum[n] += s.phi(d);
                mu_sum[n] += s.mu(d) as i64;
            }
        }
        for n in 1..=10_000 {
            assert_eq!(phi_sum[n], n as u64, "Σφ(d) at {n}");
            assert_eq!(mu_sum[n], (n == 1) as i64, "Σμ(d) at {n}");
            assert_eq!(s.divcount(n) as u64, divisor_count_of(n as u64));
            assert_eq!(s.phi(n), phi_of(n as u64));
        }
    }

    #[test]
    fn ext_gcd_examples() {
        let (g, c) = ext_gcd_chain(&[3, 2]).unwrap();
        assert_eq!(g, 1);
        assert_eq!(c, vec![BigInt::from(1), BigInt::from(-1)]);
        assert_eq!(ext_gcd_chain(&[5]).unwrap(), (5, vec![BigInt::one()]));
        let (g, c) = ext_gcd_chain(&[4, 6, 9]).unwrap();
        assert_eq!(g, 1);
        let s: BigInt = c[0].clone() * 4 + c[1].clone() * 6 + c[2].clone() * 9;
        assert_eq!(s, BigInt::one());
        assert!(ext_gcd_chain(&[]).is_err());
        assert!(ext_gcd_chain(&[3, 0]).is_err());
    }

    #[test]
    fn coprime_weighted_sum_examples() {
        assert_eq!(coprime_weighted_sum(3, 2).unwrap(), 23);
        assert_eq!(coprime_weighted_sum(4, 1).unwrap(), 10);
        assert_eq!(coprime_weighted_sum(2, 3).unwrap(), 7);
        assert!(matches!(
            coprime_weighted_sum_with_budget(100, 3, 1000),
            Err(Error::ResourceRefusal { .. })
        ));
    }

    #[test]
    fn power_and_ratio_sums() {
        assert_eq!(restricted_power_sum(5, 2, 1).unwrap(), rat(7, 1));
        assert_eq!(restricted_power_sum(4, 1, 0).unwrap(), rat(10, 1));
        assert_eq!(restricted_power_sum(4, 2, 2).unwrap(), rat(7, 3));
        assert_eq!(totient_ratio_sum(5, 1, 0).unwrap(), rat(5, 1));
        assert_eq!(totient_ratio_sum(3, 1, 1).unwrap(), rat(9, 2));
        assert_eq!(totient_ratio_sum(4, 2, 1).unwrap(), rat(5, 2));
        let r = totient_ratio_report(&rat(5, 2), 4, 2);
        assert!((r - 1.25).abs() < 1e-12);
        assert!(restricted_power_sum(5, 0, 1).is_err());
    }

    #[test]
    fn linear_sum_examples() {
        let a = coprime_linear_sum(6, 2).unwrap();
        assert_eq!((a.sum, a.main_term.clone()), (9, rat(9, 1)));
        let b = coprime_linear_sum(5, 1).unwrap();
        assert_eq!((b.sum, b.main_term.clone()), (15, rat(25, 2)));
        assert_eq!(coprime_linear_sum(10, 6).unwrap().sum, 13);
    }

    #[test]
    fn linear_remainder_constant_on_grid() {
        let s = build_sieves(300).unwrap();
        let worst = (1..=300)
            .flat_map(|x| (1..=60u64).map(move |m| (x, m)))
            .map(|(x, m)| s.coprime_linear_sum(x, m).unwrap().remainder_ratio())
            .fold(0.0f64, f64::max);
        assert!(worst <= 1.0, "remainder constant {worst}");
    }

    #[test]
    fn divisor_reciprocal_examples() {
        assert_eq!(divisor_reciprocal_sum(4).unwrap(), rat(7, 3));
        assert_eq!(divisor_reciprocal_sum(1).unwrap(), rat(1, 1));
        assert_eq!(divisor_reciprocal_sum(6).unwrap(), rat(37, 12));
    }

    #[test]
    fn power_sum_alpha_zero_matches_linear_sum() {
        let s = build_sieves(120).unwrap();
        for x in [1usize, 7, 30, 120] {
            for m in [1u64, 2, 6, 30, 77, 210] {
                let lin = s.coprime_linear_sum(x, m).unwrap().sum;
                assert_eq!(
                    s.restricted_power_sum(x, m, 0).unwrap(),
                    BigRational::from_integer(BigInt::from(lin))
                );
            }
        }
    }
}
