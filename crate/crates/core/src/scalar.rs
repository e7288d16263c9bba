//! Scalar field abstraction shared by the exact and floating-point paths.
//!
//! Permutation groups are handled with arbitrary-precision rationals so every
//! equality test is exact. Groups with irrational entries (2D rotations) use
//! `f64` with the tolerances in [`Tolerances`].

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Central tolerance configuration for the floating-point path. Ignored in
/// exact mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Entrywise equality of matrices and vectors.
    pub equality: f64,
    /// Pivot threshold for rank-revealing elimination.
    pub rank_pivot: f64,
    /// Inner products below this are treated as orthogonal.
    pub orthogonality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            equality: 1e-9,
            rank_pivot: 1e-9,
            orthogonality: 1e-12,
        }
    }
}

impl Tolerances {
    /// Same defaults with the equality and pivot thresholds overridden.
    pub fn with_eps(eps: f64) -> Self {
        Tolerances {
            equality: eps,
            rank_pivot: eps,
            ..Tolerances::default()
        }
    }
}

pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Signed + Send + Sync + 'static
{
    /// True when arithmetic is exact and tolerances are ignored.
    const EXACT: bool;

    /// Converts a float. Exact for rationals (every finite f64 is a dyadic rational).
    fn from_f64(x: f64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// `|self| <= eps` in float mode, `self == 0` in exact mode.
    fn negligible(&self, eps: f64) -> bool;
    /// Square root when it is representable in this field.
    fn sqrt_exact(&self) -> Option<Self>;
    /// Serialization form: a fraction string in exact mode, a number otherwise.
    fn to_entry(&self) -> Entry;
    fn from_entry(entry: &Entry) -> Option<Self>;

    fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        (self.clone() - other.clone()).negligible(eps)
    }

    fn from_i64(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }
}

/// One matrix or vector entry as it appears in emitted JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Exact(String),
    Float(f64),
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn negligible(&self, _eps: f64) -> bool {
        self.is_zero()
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }

    fn to_entry(&self) -> Entry {
        if self.denom().is_one() {
            Entry::Exact(self.numer().to_string())
        } else {
            Entry::Exact(format!("{}/{}", self.numer(), self.denom()))
        }
    }

    fn from_entry(entry: &Entry) -> Option<Self> {
        match entry {
            Entry::Exact(s) => parse_fraction(s),
            Entry::Float(x) if x.is_finite() => Some(<Self as Scalar>::from_f64(*x)),
            Entry::Float(_) => None,
        }
    }
}

fn parse_fraction(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_f64(x: f64) -> Self {
        x
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn negligible(&self, eps: f64) -> bool {
        self.abs() <= eps
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }

    fn to_entry(&self) -> Entry {
        Entry::Float(*self)
    }

    fn from_entry(entry: &Entry) -> Option<Self> {
        match entry {
            Entry::Float(x) => Some(*x),
            Entry::Exact(s) => parse_fraction(s).map(|r| Scalar::to_f64(&r)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_entry_round_trip() {
        let q = BigRational::from_ratio(-3, 6);
        assert_eq!(q.to_entry(), Entry::Exact("-1/2".into()));
        assert_eq!(BigRational::from_entry(&q.to_entry()), Some(q));
        assert_eq!(BigRational::from_entry(&Entry::Exact("1/0".into())), None);
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(
            BigRational::from_ratio(9, 4).sqrt_exact(),
            Some(BigRational::from_ratio(3, 2))
        );
        assert_eq!(BigRational::from_ratio(2, 1).sqrt_exact(), None);
        assert_eq!(BigRational::from_ratio(-1, 1).sqrt_exact(), None);
    }

    #[test]
    fn float_tolerance() {
        assert!(1e-10f64.negligible(1e-9));
        assert!(!1e-8f64.negligible(1e-9));
        assert!(!BigRational::from_f64(1e-300).negligible(1.0));
    }
}
