//! Kac labels, central charges, and highest weights of the unitary Virasoro minimal series.

use crate::exactnum::{rat, Rational};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Errors raised by minimal-model bookkeeping.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum KacError {
    /// The series parameter p is below 2.
    #[error("invalid parameter p={0}, need p >= 2")]
    InvalidParameter(u64),
    /// A Kac label lies outside the valid range for the given p.
    #[error("invalid label ({0},{1}) for p={2}")]
    InvalidLabel(u64, u64, u64),
}

/// A Kac label (i',i) naming an irreducible module of the p-th unitary minimal model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct KacLabel {
    pub i_prime: u64,
    pub i: u64,
}

impl KacLabel {
    /// Builds a label from its two components.
    pub fn new(i_prime: u64, i: u64) -> Self {
        KacLabel { i_prime, i }
    }
}

impl fmt::Display for KacLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}',{}", self.i_prime, self.i)
    }
}

/// The p-th unitary minimal model with its exact central charge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalModel {
    pub p: u64,
    pub central_charge: Rational,
}

impl MinimalModel {
    /// Builds the model for a given series parameter.
    pub fn new(p: u64) -> Result<Self, KacError> {
        Ok(MinimalModel { p, central_charge: central_charge(p)? })
    }
}

/// Returns the exact central charge 1 - 6/(p(p+1)).
pub fn central_charge(p: u64) -> Result<Rational, KacError> {
    if p < 2 {
        return Err(KacError::InvalidParameter(p));
    }
    let pp = (p * (p + 1)) as i64;
    Ok(rat(1, 1) - rat(6, pp))
}

/// Returns true when the label lies in the valid range 1 <= i' <= p, 1 <= i <= p-1.
pub fn label_in_range(p: u64, label: KacLabel) -> bool {
    label.i_prime >= 1 && label.i_prime <= p && label.i >= 1 && label.i < p
}

/// Returns the Kac-symmetric partner (p+1-i', p-i) of a label.
pub fn flip(p: u64, label: KacLabel) -> KacLabel {
    KacLabel::new(p + 1 - label.i_prime, p - label.i)
}

/// Returns the canonical representative, preferring smaller i' and then smaller i.
pub fn canonical(p: u64, label: KacLabel) -> KacLabel {
    let other = flip(p, label);
    if (other.i_prime, other.i) < (label.i_prime, label.i) {
        other
    } else {
        label
    }
}

/// Returns the exact highest weight h of a labelled irreducible module.
pub fn highest_weight(p: u64, label: KacLabel) -> Result<Rational, KacError> {
    if p < 2 {
        return Err(KacError::InvalidParameter(p));
    }
    if !label_in_range(p, label) {
        return Err(KacError::InvalidLabel(label.i_prime, label.i, p));
    }
    let diff = (p * label.i_prime) as i64 - ((p + 1) * label.i) as i64;
    Ok(rat(diff * diff - 1, (4 * p * (p + 1)) as i64))
}

/// Returns every distinct weight of the model with its canonical Kac label.
pub fn kac_table(p: u64) -> Result<Vec<(KacLabel, Rational)>, KacError> {
    if p < 2 {
        return Err(KacError::InvalidParameter(p));
    }
    let mut out = Vec::new();
    for i_prime in 1..=p {
        for i in 1..p {
            let label = KacLabel::new(i_prime, i);
            if canonical(p, label) == label {
                out.push((label, highest_weight(p, label)?));
            }
        }
    }
    out.sort_by_key(|(l, _)| (l.i_prime, l.i));
    Ok(out)
}
