//! Exact rationals for parameters that feed floors and ceilings.

use std::str::FromStr;

use num_rational::Ratio;

use super::ConstructionError;

pub type Rational = Ratio<i128>;

/// Parses `p/q`, an integer, or a finite decimal such as `0.45`.
pub fn parse_rational(text: &str) -> Result<Rational, ConstructionError> {
    let bad = || ConstructionError::InvalidRational(text.to_string());
    let s = text.trim();
    if s.contains('/') {
        let r = Rational::from_str(s).map_err(|_| bad())?;
        return Ok(r);
    }
    let (negative, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) || frac_part.len() > 30 {
        return Err(bad());
    }
    let joined = format!("{int_part}{frac_part}");
    let numer: i128 = joined.parse().map_err(|_| bad())?;
    let denom = 10i128.checked_pow(frac_part.len() as u32).ok_or_else(bad)?;
    let r = Rational::new(numer, denom);
    Ok(if negative { -r } else { r })
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn floor_int(r: &Rational) -> i128 {
    r.floor().to_integer()
}

pub fn ceil_int(r: &Rational) -> i128 {
    r.ceil().to_integer()
}

/// Serializes a rational as its `p/q` (or integer) display string.
pub mod serde_str {
    use std::str::FromStr;

    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        Rational::from_str(&text).map_err(serde::de::Error::custom)
    }
}
