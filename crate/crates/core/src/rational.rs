//! Arbitrary-precision rationals and their `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number used throughout the crate.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"0.125"` (exactly).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("invalid rational literal {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| if q.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Closest rational to `x` with denominator at most `max_den`, via continued fractions.
pub fn approximate(x: f64, max_den: u64) -> Rational {
    assert!(x.is_finite(), "cannot rationalize a non-finite value");
    let negative = x < 0.0;
    let mut rem = x.abs();
    // convergents h/k
    let (mut h0, mut h1) = (0u128, 1u128);
    let (mut k0, mut k1) = (1u128, 0u128);
    let max_den = max_den.max(1) as u128;
    for _ in 0..64 {
        let a = rem.floor();
        if a > 1e18 {
            break;
        }
        let a_int = a as u128;
        let h2 = a_int * h1 + h0;
        let k2 = a_int * k1 + k0;
        if k2 > max_den {
            // best semiconvergent that still fits
            let m = (max_den - k0) / k1.max(1);
            let (hs, ks) = (m * h1 + h0, m * k1 + k0);
            let cand_semi = hs as f64 / ks as f64;
            let cand_conv = h1 as f64 / k1 as f64;
            if k1 == 0 || (ks > 0 && (cand_semi - x.abs()).abs() < (cand_conv - x.abs()).abs()) {
                h1 = hs;
                k1 = ks;
            }
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = rem - a;
        if frac < 1e-300 {
            break;
        }
        rem = 1.0 / frac;
    }
    let value = Rational::new(BigInt::from(h1), BigInt::from(k1.max(1)));
    if negative {
        -value
    } else {
        value
    }
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Same as [`serde_string`] for vectors.
pub mod serde_string_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let text = Vec::<String>::deserialize(d)?;
        text.iter().map(|t| parse_rational(t).map_err(serde::de::Error::custom)).collect()
    }
}

/// Same as [`serde_string`] for matrices and ragged arrays.
pub mod serde_string_mat {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|row| row.iter().map(format_rational).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let text = Vec::<Vec<String>>::deserialize(d)?;
        text.iter()
            .map(|row| row.iter().map(|t| parse_rational(t).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("1/6").unwrap(), ratio(1, 6));
        assert_eq!(parse_rational("-2/4").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse_rational("-.5").unwrap(), ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1e-3").is_err());
    }

    #[test]
    fn formats_as_p_over_q() {
        assert_eq!(format_rational(&ratio(-1, 3)), "-1/3");
        assert_eq!(format_rational(&int(2)), "2");
    }

    #[test]
    fn continued_fraction_rounding() {
        assert_eq!(approximate(0.5, 100), ratio(1, 2));
        assert_eq!(approximate(-0.75, 100), ratio(-3, 4));
        assert_eq!(approximate(std::f64::consts::PI, 1000), ratio(355, 113));
        let q = approximate(0.825_482_2, 1_000_000);
        assert!(q.denom() <= &BigInt::from(1_000_000));
        assert!((to_f64(&q) - 0.825_482_2).abs() < 1e-11);
        assert_eq!(approximate(3.0, 10), int(3));
    }
}
