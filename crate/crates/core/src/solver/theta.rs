use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

use super::Fraction;

/// Bits of the fixed-point approximation used for irrational constants.
pub const FIXED_POINT_BITS: u32 = 200;

/// Names accepted by [`ThetaValue::named`].
pub const NAMED_CONSTANTS: &[&str] = &["golden", "sqrt2m1"];

/// A target θ: either an exact rational, or a dyadic `center` with a radius
/// `eps > 0` such that the true value lies in `[center − eps, center + eps]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaValue {
    center: Fraction,
    eps: Fraction,
    name: Option<&'static str>,
}

impl ThetaValue {
    pub fn exact(value: Fraction) -> Self {
        Self {
            center: value,
            eps: Fraction::zero(),
            name: None,
        }
    }

    /// An inexact value known to lie within `eps` of `center`.
    pub fn with_eps(center: Fraction, eps: Fraction) -> Self {
        Self {
            center,
            eps: eps.abs(),
            name: None,
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::invalid("zero denominator"));
        }
        Ok(Self::exact(BigRational::new(num.into(), den.into())))
    }

    /// `golden` = (√5 − 1)/2 and `sqrt2m1` = √2 − 1, each to 200 bits.
    pub fn named(name: &str) -> Result<Self> {
        let one = BigInt::one() << FIXED_POINT_BITS;
        let (name, center) = match name {
            "golden" => {
                // isqrt(5·4^B) ≤ √5·2^B, error below one unit; halving halves it
                let s = (BigInt::from(5) << (2 * FIXED_POINT_BITS)).sqrt();
                ("golden", BigRational::new(s - &one, one.clone() << 1))
            }
            "sqrt2m1" => {
                let s = (BigInt::from(2) << (2 * FIXED_POINT_BITS)).sqrt();
                ("sqrt2m1", BigRational::new(s - &one, one.clone()))
            }
            other => return Err(Error::invalid(format!("unknown constant {other:?}"))),
        };
        Ok(Self {
            center,
            eps: BigRational::new(BigInt::one(), one),
            name: Some(name),
        })
    }

    /// Grammar, first match wins: `p/q`, decimal (`-0.125`, `3`, `.5`), named
    /// constant.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad numerator in {s:?}")))?;
            let q: BigInt = q
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad denominator in {s:?}")))?;
            if q.is_zero() {
                return Err(Error::invalid(format!("zero denominator in {s:?}")));
            }
            return Ok(Self::exact(BigRational::new(p, q)));
        }
        if let Some(v) = parse_decimal(s) {
            return Ok(Self::exact(v));
        }
        Self::named(s).map_err(|_| {
            Error::invalid(format!(
                "cannot parse θ {s:?}: expected p/q, a decimal, or one of {NAMED_CONSTANTS:?}"
            ))
        })
    }

    pub fn is_exact(&self) -> bool {
        self.eps.is_zero()
    }

    pub fn exact_value(&self) -> Option<&Fraction> {
        self.is_exact().then_some(&self.center)
    }

    pub fn center(&self) -> &Fraction {
        &self.center
    }

    pub fn eps(&self) -> &Fraction {
        &self.eps
    }

    pub fn name(&self) -> Option<&str> {
        self.name
    }

    pub fn to_f64(&self) -> f64 {
        self.center.to_f64().unwrap_or(f64::NAN)
    }
}

fn parse_decimal(s: &str) -> Option<Fraction> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    if int_part.is_empty() && frac_part.is_empty() || !all_digits(int_part) || !all_digits(frac_part) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    if neg {
        num = -num;
    }
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Some(BigRational::new(num, den))
}

/// Canonical form: the constant's name, else `p/q` (or `p` for integers).
impl fmt::Display for ThetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name {
            Some(name) => f.write_str(name),
            None => write_fraction(f, &self.center),
        }
    }
}

pub(crate) fn write_fraction(f: &mut impl fmt::Write, v: &Fraction) -> fmt::Result {
    if v.denom().is_one() {
        write!(f, "{}", v.numer())
    } else {
        write!(f, "{}/{}", v.numer(), v.denom())
    }
}

pub fn format_fraction(v: &Fraction) -> String {
    let mut s = String::new();
    write_fraction(&mut s, v).expect("writing to a String");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grammar() {
        assert_eq!(ThetaValue::parse("1/8").unwrap().to_string(), "1/8");
        assert_eq!(ThetaValue::parse("2/4").unwrap().to_string(), "1/2");
        assert_eq!(ThetaValue::parse("0.125").unwrap().to_string(), "1/8");
        assert_eq!(ThetaValue::parse("-.5").unwrap().to_string(), "-1/2");
        assert_eq!(ThetaValue::parse("0").unwrap().to_string(), "0");
        assert_eq!(ThetaValue::parse("3.").unwrap().to_string(), "3");
        assert_eq!(ThetaValue::parse("golden").unwrap().to_string(), "golden");
        assert!(ThetaValue::parse("1/0").is_err());
        assert!(ThetaValue::parse("pi").is_err());
        assert!(ThetaValue::parse(".").is_err());
        assert!(ThetaValue::parse("1e5").is_err());
    }

    #[test]
    fn constants_are_accurate() {
        let g = ThetaValue::named("golden").unwrap();
        assert!(!g.is_exact());
        assert!((g.to_f64() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        // θ² + θ − 1 = 0: residual at the center is O(2^-200)
        let c = g.center();
        let resid = (c * c + c - Fraction::one()).abs();
        assert!(resid < g.eps() * Fraction::from_integer(3.into()));

        let r = ThetaValue::named("sqrt2m1").unwrap();
        let c = r.center() + Fraction::one();
        let resid = (&c * &c - Fraction::from_integer(2.into())).abs();
        assert!(resid < r.eps() * Fraction::from_integer(3.into()));
    }

    proptest! {
        #[test]
        fn format_parse_is_canonical(p in -10_000i64..10_000, q in 1i64..10_000) {
            let once = ThetaValue::parse(&format!("{p}/{q}")).unwrap().to_string();
            let twice = ThetaValue::parse(&once).unwrap().to_string();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn decimal_is_exact(int in 0u32..1000, frac in 0u32..1000) {
            let t = ThetaValue::parse(&format!("{int}.{frac:03}")).unwrap();
            let want = BigRational::new(BigInt::from(int * 1000 + frac), BigInt::from(1000));
            prop_assert_eq!(t.center(), &want);
        }
    }
}
