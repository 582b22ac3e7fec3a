//! Coefficient fields.
//!
//! Coefficients are always stored as [`BigRational`]. Over a prime field every
//! stored value is kept as an integer representative in `[0, p)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::LpaError;

pub type Coeff = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}

impl Field {
    /// Canonical representative, or `None` when a denominator vanishes mod p.
    pub fn reduce(&self, x: Coeff) -> Option<Coeff> {
        match *self {
            Field::Rational => Some(x),
            Field::Prime(p) => {
                let p = BigInt::from(p);
                let num = x.numer().mod_floor(&p);
                let den = x.denom().mod_floor(&p);
                if den.is_zero() {
                    return None;
                }
                let inv = den.modpow(&(&p - BigInt::from(2)), &p);
                Some(BigRational::from_integer((num * inv).mod_floor(&p)))
            }
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.fix(a + b)
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.fix(a * b)
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        self.fix(-a)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Coeff) -> Option<Coeff> {
        if a.is_zero() {
            return None;
        }
        self.reduce(a.recip())
    }

    pub fn one(&self) -> Coeff {
        Coeff::one()
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        self.fix(Coeff::from_integer(BigInt::from(v)))
    }

    // Sums and products of reduced values never have a zero denominator.
    fn fix(&self, x: Coeff) -> Coeff {
        match self {
            Field::Rational => x,
            Field::Prime(_) => self.reduce(x).expect("integer representative"),
        }
    }

    pub fn parse_coeff(&self, text: &str) -> Result<Coeff, LpaError> {
        let raw = parse_rational(text).ok_or_else(|| LpaError::Field(format!("bad coefficient {text}")))?;
        self.reduce(raw)
            .ok_or_else(|| LpaError::Field(format!("{text} has no value in {self}")))
    }
}

pub fn parse_rational(text: &str) -> Option<Coeff> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(text.parse().ok()?)),
    }
}

pub fn format_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Absolute value split off for printing `a - b` style sums.
pub(crate) fn sign_and_abs(c: &Coeff, field: Field) -> (bool, Coeff) {
    match field {
        Field::Rational if c.is_negative() => (true, c.abs()),
        _ => (false, c.clone()),
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FromStr for Field {
    type Err = LpaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "q" | "Q" | "rational" => Ok(Field::Rational),
            _ => {
                let p = s
                    .strip_prefix("gf:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| LpaError::Field(format!("expected `q` or `gf:<prime>`, got `{s}`")))?;
                if !is_prime(p) || p > u32::MAX as u64 {
                    return Err(LpaError::Field(format!("{p} is not a supported prime")));
                }
                Ok(Field::Prime(p))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "gf:{p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverts_denominators() {
        let f: Field = "gf:7".parse().unwrap();
        let half = f.parse_coeff("1/2").unwrap();
        assert_eq!(f.mul(&half, &f.from_i64(2)), f.one());
        assert_eq!(f.from_i64(-1), f.from_i64(6));
        assert!(f.parse_coeff("1/7").is_err());
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!("gf:9".parse::<Field>().is_err());
        assert!("gf:x".parse::<Field>().is_err());
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rational);
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_coeff(&parse_rational("6/4").unwrap()), "3/2");
        assert_eq!(format_coeff(&parse_rational("-3").unwrap()), "-3");
    }
}
