//! The coefficient field.
//!
//! Everything in this crate is generic over an exact field implementing
//! [`Scalar`]. The default instantiation is [`BigRational`]; `Rational64` is
//! also provided for small experiments where overflow is not a concern.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

/// An exact field of characteristic zero.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + FromStr
{
    fn from_i64(v: i64) -> Self;

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// `self += a`
    fn add_assign_ref(&mut self, a: &Self);

    /// `self -= a`
    fn sub_assign_ref(&mut self, a: &Self);

    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self);

    fn mul_ref(&self, a: &Self) -> Self;

    fn is_negative(&self) -> bool;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

macro_rules! impl_ratio_scalar {
    ($ty:ty, $int:ty, $conv:expr) => {
        impl Scalar for $ty {
            fn from_i64(v: i64) -> Self {
                <$ty>::from_integer($conv(v))
            }

            fn add_assign_ref(&mut self, a: &Self) {
                *self += a;
            }

            fn sub_assign_ref(&mut self, a: &Self) {
                *self -= a;
            }

            fn add_mul(&mut self, a: &Self, b: &Self) {
                *self += a * b;
            }

            fn mul_ref(&self, a: &Self) -> Self {
                self * a
            }

            fn is_negative(&self) -> bool {
                Signed::is_negative(self)
            }
        }
    };
}

impl_ratio_scalar!(BigRational, BigInt, BigInt::from);
impl_ratio_scalar!(Rational64, i64, |v: i64| v);

/// Parses a rational written as `"p/q"` or `"p"`.
pub fn parse_scalar<S: Scalar>(text: &str) -> Option<S> {
    text.trim().parse::<S>().ok()
}
