//! Exact integer and rational helpers shared by the numeric modules, plus
//! their JSON encodings.
//!
//! Integers cross JSON as decimal strings. Rationals cross as
//! `{numerator, denominator, approx}` where `approx` is a display-only
//! floating point value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

pub fn q(n: impl Into<BigInt>) -> Q {
    Q::from_integer(n.into())
}

pub fn q_frac(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Q {
    Q::new(n.into(), d.into())
}

/// Returns the integer value if `x` is integral.
pub fn as_integer(x: &Q) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(text: &str) -> Result<Q> {
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    let (num, den) = match text.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Q::new(num, den))
}

/// `"p/q"`, or `"p"` when integral.
pub fn format_rational(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Display-only decimal approximation.
pub fn approx(x: &Q) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale both down for very large values.
            let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000);
            let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// JSON form of an exact rational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactJson {
    pub numerator: String,
    pub denominator: String,
    /// Non-authoritative.
    pub approx: f64,
}

impl From<&Q> for ExactJson {
    fn from(x: &Q) -> Self {
        Self {
            numerator: x.numer().to_string(),
            denominator: x.denom().to_string(),
            approx: approx(x),
        }
    }
}

impl TryFrom<ExactJson> for Q {
    type Error = Error;
    fn try_from(j: ExactJson) -> Result<Q> {
        parse_rational(&format!("{}/{}", j.numerator, j.denominator))
    }
}

/// `#[serde(with = "exact::rational")]`
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExactJson::from(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let j = ExactJson::deserialize(d)?;
        Q::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "exact::opt_rational")]`
pub mod opt_rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        x.as_ref().map(ExactJson::from).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        Option::<ExactJson>::deserialize(d)?
            .map(|j| Q::try_from(j).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// `#[serde(with = "exact::decimal")]`: a `BigInt` as a decimal string.
pub mod decimal {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        text.parse()
            .map_err(|_| serde::de::Error::custom(format!("not a decimal integer: {text:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_and_binomials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(factorial(25).to_string(), "15511210043330985984000000");
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("1/10").unwrap(), q_frac(1, 10));
        assert_eq!(parse_rational("-6/4").unwrap(), q_frac(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), q(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&q_frac(-3, 2)), "-3/2");
        assert_eq!(format_rational(&q(4)), "4");
    }

    #[test]
    fn json_keeps_exact_value() {
        #[derive(Serialize, Deserialize)]
        struct W {
            #[serde(with = "rational")]
            x: Q,
            #[serde(with = "decimal")]
            n: BigInt,
        }
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let w = W {
            x: q_frac(big.clone(), 7),
            n: big.clone(),
        };
        let text = serde_json::to_string(&w).unwrap();
        assert!(text.contains("\"123456789012345678901234567890\""));
        let back: W = serde_json::from_str(&text).unwrap();
        assert_eq!(back.x, w.x);
        assert_eq!(back.n, big);
    }

    #[test]
    fn approx_handles_huge_values() {
        let huge = q_frac(BigInt::from(10).pow(400) + 1, BigInt::from(10).pow(399));
        assert!((approx(&huge) - 10.0).abs() < 1e-9);
    }
}
