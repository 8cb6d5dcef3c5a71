//! Exact rational judgment values.
//!
//! Pairwise judgments are kept as reduced integer fractions so that `1/3`
//! survives any number of parse/serialize cycles unchanged. Conversion to
//! floating point happens only when a comparison matrix is built.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// The judgment values conventionally used on the Saaty scale.
pub const SAATY_VALUES: [i64; 5] = [1, 3, 5, 7, 9];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatioError {
    #[error("empty ratio")]
    Empty,
    #[error("`{0}` is not a number, a fraction or a decimal")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("`{0}` does not fit in 64-bit rational arithmetic")]
    Overflow(String),
}

/// A reduced fraction `numer/denom` with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ratio(Rational64);

impl Ratio {
    pub const ONE: Ratio = Ratio(Rational64::new_raw(1, 1));

    /// Builds a ratio; returns `None` when `denom` is zero.
    pub fn new(numer: i64, denom: i64) -> Option<Self> {
        if denom == 0 {
            return None;
        }
        Some(Ratio(Rational64::new(numer, denom)))
    }

    pub fn integer(value: i64) -> Self {
        Ratio(Rational64::from_integer(value))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_positive(&self) -> bool {
        self.numer() > 0
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.numer() == 0 {
            None
        } else {
            Some(Ratio(self.0.recip()))
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// True when the value lies in the canonical judgment domain `[1/9, 9]`.
    pub fn in_canonical_range(&self) -> bool {
        let lo = Rational64::new(1, 9);
        let hi = Rational64::from_integer(9);
        self.0 >= lo && self.0 <= hi
    }

    /// True for 1, 3, 5, 7, 9 and their reciprocals.
    pub fn is_saaty_value(&self) -> bool {
        let (n, d) = (self.numer(), self.denom());
        (d == 1 && SAATY_VALUES.contains(&n)) || (n == 1 && SAATY_VALUES.contains(&d))
    }
}

impl From<i64> for Ratio {
    fn from(value: i64) -> Self {
        Ratio::integer(value)
    }
}

impl fmt::Display for Ratio {
    /// Integers print bare (`3`); everything else prints as `p/q` (`1/7`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Ratio {
    type Err = RatioError;

    /// Accepts integers (`7`), fractions (`1/7`, `14/4`) and decimals (`3.5`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(RatioError::Empty);
        }
        if let Some((num, den)) = s.split_once('/') {
            let num = parse_decimal(num.trim(), s)?;
            let den = parse_decimal(den.trim(), s)?;
            if den.numer() == 0 {
                return Err(RatioError::ZeroDenominator(s.to_string()));
            }
            // (a/b) / (c/d) = (a·d) / (b·c)
            let overflow = || RatioError::Overflow(s.to_string());
            let numer = num.numer().checked_mul(den.denom()).ok_or_else(overflow)?;
            let denom = num.denom().checked_mul(den.numer()).ok_or_else(overflow)?;
            return Ok(Ratio(Rational64::new(numer, denom)));
        }
        parse_decimal(s, s)
    }
}

fn parse_decimal(token: &str, whole: &str) -> Result<Ratio, RatioError> {
    let malformed = || RatioError::Malformed(whole.to_string());
    let overflow = || RatioError::Overflow(whole.to_string());
    let (negative, digits) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token.strip_prefix('+').unwrap_or(token)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let mut numer: i64 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        numer = numer
            .checked_mul(10)
            .and_then(|n| n.checked_add(i64::from(b - b'0')))
            .ok_or_else(overflow)?;
    }
    let exp = u32::try_from(frac_part.len()).map_err(|_| overflow())?;
    let denom = 10i64.checked_pow(exp).ok_or_else(overflow)?;
    if negative {
        numer = -numer;
    }
    Ok(Ratio(Rational64::new(numer, denom)))
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Visitor;

        impl de::Visitor<'_> for Visitor {
            type Value = Ratio;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a ratio string such as \"1/7\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Ratio, E> {
                Ok(Ratio::integer(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Ratio, E> {
                i64::try_from(v)
                    .map(Ratio::integer)
                    .map_err(|_| E::custom("ratio out of range"))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Ratio, E> {
                v.to_string().parse().map_err(E::custom)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Ratio, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(Visitor)
    }
}
