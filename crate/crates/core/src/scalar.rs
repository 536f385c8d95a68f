//! The field of scalars every structure in this crate is generic over.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Zero};

use crate::error::Error;

/// A field in which all arithmetic is exact.
///
/// Blanket-implemented for every type with the right arithmetic. The
/// algorithms test for exact zero, so only exact fields such as
/// [`BigRational`] or `Ratio<i64>` give meaningful results.
pub trait Scalar:
    Clone + PartialEq + Debug + Num + Neg<Output = Self> + FromPrimitive + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable in scalar field")
    }

    /// `n!` as a scalar.
    fn factorial(n: usize) -> Self {
        (1..=n).fold(Self::one(), |acc, k| acc * Self::from_int(k as i64))
    }

    /// `(-1)^n`.
    fn sign(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Self::one()
        } else {
            -Self::one()
        }
    }
}

impl<T> Scalar for T where
    T: Clone + PartialEq + Debug + Num + Neg<Output = T> + FromPrimitive + Send + Sync + 'static
{
}

/// Parses `"p/q"` or `"p"` into a normalized rational.
pub fn parse_rational(text: &str) -> Result<BigRational, Error> {
    let text = text.trim();
    let bad = || Error::Parse(format!("malformed rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Formats a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn is_zero_vec<T: Scalar>(v: &[T]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `acc += factor * v`.
pub fn axpy<T: Scalar>(acc: &mut [T], factor: &T, v: &[T]) {
    if factor.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = a.clone() + factor.clone() * x.clone();
        }
    }
}

pub fn add_assign<T: Scalar>(acc: &mut [T], v: &[T]) {
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = a.clone() + x.clone();
        }
    }
}

pub fn sub_vec<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale_vec<T: Scalar>(factor: &T, v: &[T]) -> Vec<T> {
    v.iter().map(|x| factor.clone() * x.clone()).collect()
}

pub fn unit_vec<T: Scalar>(len: usize, at: usize) -> Vec<T> {
    let mut v = vec![T::zero(); len];
    v[at] = T::one();
    v
}
