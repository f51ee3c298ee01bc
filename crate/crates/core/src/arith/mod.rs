//! Exact ordered-field arithmetic.
//!
//! Two field instances are provided: [`Rational`] and
//! [`NumberFieldElement`], an element of a real number field `Q(λ)` whose
//! order is decided by refining an isolating interval of `λ`. Everything in
//! the induction engine is generic over [`ExactField`], so the same code runs
//! on random rationals and on the exact thin-type example.

pub mod algebraic;
pub mod linalg;
pub mod number_field;
pub mod poly;
pub mod rational;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::error::ArithError;

pub use algebraic::{build_number_field, factor_small, isolate_real_roots, AlgebraicReal};
pub use number_field::{nf_arith, nf_compare, NumberField, NumberFieldElement};
pub use poly::{IntPoly, QPoly};
pub use rational::{rational_arith, ArithOp, Rational};

/// An ordered field with exact arithmetic and decidable comparison.
///
/// Constants are produced from an existing value (`zero_like`, ...) because
/// number-field elements carry their field with them.
pub trait ExactField:
    Clone
    + PartialEq
    + Eq
    + PartialOrd
    + Ord
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rational_like(&self, q: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError>;
    fn floor(&self) -> BigInt;
    fn to_f64(&self) -> f64;
    /// Decimal approximation correct to `digits` places (an annotation only).
    fn to_decimal(&self, digits: usize) -> String;
    /// Coordinates over `Q`: the value itself for rationals, the residue
    /// coefficients for number-field elements.
    fn rational_coordinates(&self) -> Vec<Rational>;

    fn from_int_like(&self, n: i64) -> Self {
        self.from_rational_like(&Rational::from_integer(n))
    }

    fn scale_int(&self, k: i64) -> Self {
        self.clone() * self.from_int_like(k)
    }

    fn signum(&self) -> Ordering {
        self.cmp(&self.zero_like())
    }

    fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }
}

impl ExactField for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }

    fn one_like(&self) -> Self {
        Rational::one()
    }

    fn from_rational_like(&self, q: &Rational) -> Self {
        q.clone()
    }

    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        Rational::checked_div(self, rhs)
    }

    fn floor(&self) -> BigInt {
        Rational::floor(self)
    }

    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }

    fn to_decimal(&self, digits: usize) -> String {
        Rational::to_decimal(self, digits)
    }

    fn rational_coordinates(&self) -> Vec<Rational> {
        vec![self.clone()]
    }

    fn signum(&self) -> Ordering {
        Rational::signum(self)
    }
}
