//! Scalar types usable as probability weights.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, ToPrimitive};

use crate::error::{Error, Result};

/// A probability scalar. Rational types compare exactly; floating-point
/// types accept totals within a small tolerance of one.
pub trait Probability: Num + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync {
    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_rational(r: &BigRational) -> Self;

    /// Whether `self` counts as a total probability of one.
    fn is_unit(&self) -> bool {
        self.is_one()
    }
}

impl Probability for BigRational {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
}

impl Probability for Ratio<i64> {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(numer, denom)
    }

    fn from_rational(r: &BigRational) -> Self {
        let n = r.numer().to_i64().expect("numerator fits in i64");
        let d = r.denom().to_i64().expect("denominator fits in i64");
        Ratio::new(n, d)
    }
}

impl Probability for f64 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn is_unit(&self) -> bool {
        (self - 1.0).abs() <= 1e-9
    }
}

impl Probability for f32 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f32 / denom as f32
    }

    fn from_rational(r: &BigRational) -> Self {
        r.to_f32().unwrap_or(f32::NAN)
    }

    fn is_unit(&self) -> bool {
        (self - 1.0).abs() <= 1e-5
    }
}

pub(crate) fn check_distribution<P: Probability>(weights: &[P]) -> Result<()> {
    if let Some(w) = weights.iter().find(|w| **w < P::zero()) {
        return Err(Error::InvalidWeights(format!("negative weight {w}")));
    }
    let total = sum(weights.iter());
    if !total.is_unit() {
        return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

pub(crate) fn sum<'a, P: Probability + 'a>(weights: impl Iterator<Item = &'a P>) -> P {
    weights.fold(P::zero(), |acc, w| acc + w.clone())
}

/// `numer / denom`, or `ZeroProbabilityCandidate` when `denom` is zero.
pub(crate) fn conditional<P: Probability>(numer: P, denom: P) -> Result<P> {
    if denom.is_zero() {
        return Err(Error::ZeroProbabilityCandidate);
    }
    Ok(numer / denom)
}
