use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

use super::theta::format_fraction;
use super::{ApproxSolution, Fraction, ThetaValue};

/// Convergents `p_j/q_j` of the continued fraction of `x` with `q_j ≤ max_den`,
/// plus the partial quotient that would produce the next one (if any).
pub fn convergents(x: &Fraction, max_den: u64) -> (Vec<(BigInt, BigInt)>, Option<BigInt>) {
    let bound = BigInt::from(max_den);
    let (mut p_prev, mut p) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q) = (BigInt::one(), BigInt::zero());
    let mut out = Vec::new();
    let mut rest = x.clone();
    loop {
        let a = rest.floor().to_integer();
        let q_next = &a * &q + &q_prev;
        if q_next > bound {
            return (out, Some(a));
        }
        let p_next = &a * &p + &p_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push((p.clone(), q.clone()));
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            return (out, None);
        }
        rest = frac.recip();
    }
}

/// Rational `a/q` with `1 ≤ q ≤ N` and `|θ − a/q| < 1/(qN)`.
///
/// The last convergent with `q ≤ N` always satisfies the inequality, since
/// the next denominator exceeds `N`. The largest admissible semiconvergent
/// can be closer; it is returned instead when it is strictly closer (or as
/// close with a smaller `q`) and still satisfies the inequality.
pub fn dirichlet_k1(theta: &ThetaValue, n: u64) -> Result<ApproxSolution> {
    if n == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    let c = theta.center();
    let (convs, next_quotient) = convergents(c, n);
    let (p, q) = convs.last().cloned().expect("q_0 = 1 is always admissible");

    let mut candidates = vec![(p.clone(), q.clone())];
    if next_quotient.is_some() {
        // p_{j-1}, q_{j-1}; before the first convergent these are 1, 0
        let (pp, qp) = if convs.len() >= 2 {
            convs[convs.len() - 2].clone()
        } else {
            (BigInt::one(), BigInt::zero())
        };
        let steps = (BigInt::from(n) - &qp).div_floor(&q);
        if steps.is_positive() {
            candidates.push((&pp + &steps * &p, &qp + &steps * &q));
        }
    }

    let err_of = |(a, d): &(BigInt, BigInt)| (BigRational::new(a.clone(), d.clone()) - c).abs();
    let certifies = |cand: &(BigInt, BigInt)| {
        let limit = BigRational::new(BigInt::one(), &cand.1 * BigInt::from(n));
        err_of(cand) + theta.eps() < limit
    };
    candidates.sort_by(|x, y| err_of(x).cmp(&err_of(y)).then(x.1.cmp(&y.1)));
    let chosen = candidates
        .into_iter()
        .find(certifies)
        .ok_or_else(|| {
            Error::Uncertified(format!(
                "θ radius {} too large to certify |θ − a/q| < 1/(qN) at N = {n}",
                format_fraction(theta.eps())
            ))
        })?;

    let error = err_of(&chosen);
    let (a, q) = chosen;
    let q = q.to_u64().expect("q ≤ N");
    ApproxSolution::new(theta, n, vec![a.clone()], vec![q], q as u128, a, error, true)
}
