use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::algebraic::AlgebraicReal;
use super::poly::{IntPoly, QPoly};
use super::rational::{ArithOp, Rational};
use super::ExactField;
use crate::error::ArithError;

/// Bisections applied to the generator when the field is created, so that
/// most comparisons are settled without further refinement.
const PRESET_BISECTIONS: usize = 96;
/// Bisections per round when a comparison is still undecided.
const ROUND_BISECTIONS: usize = 32;

/// The real field `Q(λ)` for an algebraic real `λ`.
pub struct NumberField {
    generator: AlgebraicReal,
    working: AlgebraicReal,
    modulus: QPoly,
}

impl NumberField {
    pub fn new(generator: AlgebraicReal) -> Arc<NumberField> {
        let working = generator.refine_times(PRESET_BISECTIONS);
        let modulus = generator.poly().to_qpoly().monic();
        Arc::new(NumberField { generator, working, modulus })
    }

    pub fn generator(&self) -> &AlgebraicReal {
        &self.generator
    }

    pub fn degree(&self) -> usize {
        self.generator.degree()
    }

    pub fn modulus(&self) -> &QPoly {
        &self.modulus
    }

    /// Same generator: identical field object, or the same polynomial with the
    /// same designated root.
    pub fn same_as(self: &Arc<Self>, other: &Arc<NumberField>) -> bool {
        Arc::ptr_eq(self, other) || self.generator.same_root(&other.generator)
    }

    pub fn element(self: &Arc<Self>, coeffs: Vec<Rational>) -> NumberFieldElement {
        NumberFieldElement::from_poly(self.clone(), QPoly::new(coeffs))
    }

    pub fn rational(self: &Arc<Self>, q: Rational) -> NumberFieldElement {
        self.element(vec![q])
    }

    /// `λ` itself.
    pub fn gen(self: &Arc<Self>) -> NumberFieldElement {
        self.element(vec![Rational::zero(), Rational::one()])
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({:?})", self.generator)
    }
}

/// An element of `Q(λ)`, stored as a residue of degree below `deg λ`.
#[derive(Clone)]
pub struct NumberFieldElement {
    field: Arc<NumberField>,
    value: QPoly,
}

impl NumberFieldElement {
    fn from_poly(field: Arc<NumberField>, p: QPoly) -> Self {
        let value = if p.degree().unwrap_or(0) >= field.degree() {
            p.rem(&field.modulus).expect("modulus is nonzero")
        } else {
            p
        };
        NumberFieldElement { field, value }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// Residue coefficients, lowest degree first, trailing zeros removed.
    pub fn coeffs(&self) -> &[Rational] {
        self.value.coeffs()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.value.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.value.coeffs()[0].clone()),
            _ => None,
        }
    }

    fn check(&self, other: &Self) -> Result<(), ArithError> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(ArithError::GeneratorMismatch)
        }
    }

    pub fn inverse(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let (g, s, _) = QPoly::ext_gcd(&self.value, &self.field.modulus);
        debug_assert_eq!(g.degree(), Some(0));
        Ok(NumberFieldElement::from_poly(self.field.clone(), s))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        self.check(rhs)?;
        Ok(self.clone() * &rhs.inverse()?)
    }

    /// Rational enclosure of the value over an isolating interval of `λ`.
    fn enclosure(&self, gen: &AlgebraicReal) -> (Rational, Rational) {
        self.value.eval_interval(gen.lo(), gen.hi())
    }

    /// Refines until `accept` holds for the enclosure or `max_rounds` is spent.
    fn settle<T>(
        &self,
        max_rounds: usize,
        mut accept: impl FnMut(&Rational, &Rational) -> Option<T>,
    ) -> Result<T, (Rational, Rational)> {
        let mut gen = self.field.working.clone();
        let mut rounds = 0;
        loop {
            let (lo, hi) = self.enclosure(&gen);
            if let Some(t) = accept(&lo, &hi) {
                return Ok(t);
            }
            if rounds == max_rounds {
                return Err((lo, hi));
            }
            gen = gen.refine_times(ROUND_BISECTIONS);
            rounds += 1;
        }
    }

    pub fn signum(&self) -> Ordering {
        if let Some(q) = self.as_rational() {
            return q.signum();
        }
        // A nonzero element has a nonzero value, so this terminates.
        self.settle(usize::MAX, |lo, hi| {
            if lo.is_positive() {
                Some(Ordering::Greater)
            } else if hi.is_negative() {
                Some(Ordering::Less)
            } else {
                None
            }
        })
        .unwrap()
    }

    pub fn floor(&self) -> BigInt {
        if let Some(q) = self.as_rational() {
            return q.floor();
        }
        // Irrational, so it is never an integer and the floors eventually agree.
        self.settle(usize::MAX, |lo, hi| {
            let f = lo.floor();
            (f == hi.floor()).then_some(f)
        })
        .unwrap()
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(q) = self.as_rational() {
            return q.to_f64();
        }
        let tol = Rational::new(1, BigInt::from(2).pow(64)).unwrap();
        match self.settle(8, |lo, hi| (&(hi - lo) < &tol).then(|| Rational::midpoint(lo, hi))) {
            Ok(m) | Err((m, _)) => m.to_f64(),
        }
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        if let Some(q) = self.as_rational() {
            return q.to_decimal(digits);
        }
        let rounds = 4 + digits / 8;
        let result = self.settle(rounds, |lo, hi| {
            let (a, b) = (lo.to_decimal(digits), hi.to_decimal(digits));
            (a == b).then_some(a)
        });
        match result {
            Ok(s) => s,
            Err((lo, hi)) => Rational::midpoint(&lo, &hi).to_decimal(digits),
        }
    }
}

/// Residue arithmetic with explicit errors for mismatched fields and zero divisors.
pub fn nf_arith(
    x: &NumberFieldElement,
    y: &NumberFieldElement,
    op: ArithOp,
) -> Result<NumberFieldElement, ArithError> {
    x.check(y)?;
    Ok(match op {
        ArithOp::Add => x.clone() + y,
        ArithOp::Sub => x.clone() - y,
        ArithOp::Mul => x.clone() * y,
        ArithOp::Div => x.try_div(y)?,
    })
}

pub fn nf_compare(x: &NumberFieldElement, y: &NumberFieldElement) -> Result<Ordering, ArithError> {
    x.check(y)?;
    Ok((x.clone() - y).signum())
}

impl PartialEq for NumberFieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.value == other.value
    }
}

impl Eq for NumberFieldElement {}

impl PartialOrd for NumberFieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Panics when the elements live in different fields; use [`nf_compare`] to
/// get an error instead.
impl Ord for NumberFieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        nf_compare(self, other).expect("elements of different number fields")
    }
}

macro_rules! nf_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a NumberFieldElement> for NumberFieldElement {
            type Output = NumberFieldElement;
            fn $method(self, rhs: &'a NumberFieldElement) -> NumberFieldElement {
                self.check(rhs).expect("elements of different number fields");
                let f: fn(&QPoly, &QPoly) -> QPoly = $body;
                let value = f(&self.value, &rhs.value);
                NumberFieldElement::from_poly(self.field, value)
            }
        }
        impl $tr<NumberFieldElement> for NumberFieldElement {
            type Output = NumberFieldElement;
            fn $method(self, rhs: NumberFieldElement) -> NumberFieldElement {
                self.$method(&rhs)
            }
        }
    };
}

nf_binop!(Add, add, |x, y| x + y);
nf_binop!(Sub, sub, |x, y| x - y);
nf_binop!(Mul, mul, |x, y| x * y);

impl Neg for NumberFieldElement {
    type Output = NumberFieldElement;
    fn neg(self) -> NumberFieldElement {
        NumberFieldElement { value: -&self.value, field: self.field }
    }
}

impl fmt::Display for NumberFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown = self.value.to_string().replace('t', "λ");
        write!(f, "{shown}")
    }
}

impl fmt::Debug for NumberFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (≈{})", self.to_decimal(6))
    }
}

impl ExactField for NumberFieldElement {
    fn zero_like(&self) -> Self {
        self.field.element(Vec::new())
    }

    fn one_like(&self) -> Self {
        self.field.rational(Rational::one())
    }

    fn from_rational_like(&self, q: &Rational) -> Self {
        self.field.rational(q.clone())
    }

    fn is_zero(&self) -> bool {
        NumberFieldElement::is_zero(self)
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        self.try_div(rhs)
    }

    fn floor(&self) -> BigInt {
        NumberFieldElement::floor(self)
    }

    fn to_f64(&self) -> f64 {
        NumberFieldElement::to_f64(self)
    }

    fn to_decimal(&self, digits: usize) -> String {
        NumberFieldElement::to_decimal(self, digits)
    }

    fn rational_coordinates(&self) -> Vec<Rational> {
        let mut c = self.value.coeffs().to_vec();
        c.resize(self.field.degree(), Rational::zero());
        c
    }

    fn scale_int(&self, k: i64) -> Self {
        NumberFieldElement {
            value: self.value.scale(&Rational::from_integer(k)),
            field: self.field.clone(),
        }
    }

    fn signum(&self) -> Ordering {
        NumberFieldElement::signum(self)
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    poly: IntPoly,
    interval: [Rational; 2],
    coeffs: Vec<Rational>,
}

impl Serialize for NumberFieldElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let g = &self.field.generator;
        ElementRepr {
            poly: g.poly().clone(),
            interval: [g.lo().clone(), g.hi().clone()],
            coeffs: self.value.coeffs().to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NumberFieldElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(deserializer)?;
        let [lo, hi] = repr.interval;
        let gen = AlgebraicReal::new(repr.poly, lo, hi).map_err(serde::de::Error::custom)?;
        if repr.coeffs.len() > gen.degree() {
            return Err(serde::de::Error::custom("more coefficients than the field degree"));
        }
        Ok(NumberField::new(gen).element(repr.coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn sqrt2_field() -> Arc<NumberField> {
        NumberField::new(AlgebraicReal::new(IntPoly::from_i64s(&[-2, 0, 1]), q("1"), q("2")).unwrap())
    }

    #[test]
    fn sqrt2_squared_is_two() {
        let k = sqrt2_field();
        let r = k.gen();
        let sq = nf_arith(&r, &r, ArithOp::Mul).unwrap();
        assert_eq!(sq, k.rational(q("2")));
        assert_eq!(sq.as_rational(), Some(q("2")));
    }

    #[test]
    fn rationalizes_denominator() {
        let k = sqrt2_field();
        let one = k.rational(q("1"));
        let x = one.clone() + &k.gen();
        let inv = nf_arith(&one, &x, ArithOp::Div).unwrap();
        assert_eq!(inv, k.gen() - &one);
        assert_eq!(
            nf_arith(&one, &k.element(vec![]), ArithOp::Div),
            Err(ArithError::DivisionByZero)
        );
    }

    #[test]
    fn compares_by_refinement() {
        let k = sqrt2_field();
        assert_eq!(nf_compare(&k.gen(), &k.rational(q("3/2"))), Ok(Ordering::Less));
        assert_eq!(nf_compare(&k.gen(), &k.rational(q("7/5"))), Ok(Ordering::Greater));
        // convergents of √2 on either side, within 3e-6
        assert_eq!(nf_compare(&k.gen(), &k.rational(q("1393/985"))), Ok(Ordering::Greater));
        assert_eq!(nf_compare(&k.gen(), &k.rational(q("577/408"))), Ok(Ordering::Less));
        assert_eq!(nf_compare(&k.gen(), &k.gen()), Ok(Ordering::Equal));
        assert_eq!(k.gen().floor(), BigInt::from(1));
        assert_eq!((-k.gen()).floor(), BigInt::from(-2));
        assert_eq!(k.gen().to_decimal(5), "1.41421");
    }

    #[test]
    fn distinct_roots_are_distinct_fields() {
        let k = sqrt2_field();
        let other = NumberField::new(
            AlgebraicReal::new(IntPoly::from_i64s(&[-2, 0, 1]), q("-2"), q("-1")).unwrap(),
        );
        let same = NumberField::new(
            AlgebraicReal::new(IntPoly::from_i64s(&[-2, 0, 1]), q("5/4"), q("3/2")).unwrap(),
        );
        assert_eq!(nf_compare(&k.gen(), &other.gen()), Err(ArithError::GeneratorMismatch));
        assert_eq!(nf_compare(&k.gen(), &same.gen()), Ok(Ordering::Equal));
    }

    #[test]
    fn json_round_trip() {
        let k = sqrt2_field();
        let x = k.element(vec![q("1/3"), q("-2")]);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"poly":["-2","0","1"],"interval":["1/1","2/1"],"coeffs":["1/3","-2/1"]}"#);
        let back: NumberFieldElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }
}
