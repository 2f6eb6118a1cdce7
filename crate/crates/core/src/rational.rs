//! Exact rational numbers and the integer rescaling used by the solvers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

/// Parses `"3"`, `"-2"` or `"3/2"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational number: '{text}'"));
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().map_err(|_| bad())?;
    let denom: BigInt = denom.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(numer, denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(value.into())
}

/// Nonnegative weights expressed as integers over a common denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Scaled {
    pub numer: Vec<u64>,
    pub denom: BigInt,
}

impl Scaled {
    pub fn new<'a>(weights: impl IntoIterator<Item = &'a Rational> + Clone) -> Result<Self> {
        let mut denom = BigInt::one();
        for w in weights.clone() {
            if w.is_negative() {
                return Err(Error::InvalidModel(format!("negative weight {w}")));
            }
            denom = denom.lcm(w.denom());
        }
        let numer = weights
            .into_iter()
            .map(|w| {
                (w.numer() * (&denom / w.denom()))
                    .to_u64()
                    .ok_or(Error::WeightOverflow)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Scaled { numer, denom })
    }

    pub fn unscale(&self, value: u128) -> Rational {
        BigRational::new(BigInt::from(value), self.denom.clone())
    }
}
