use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linalg::charpoly;
use super::poly::{IntPoly, QPoly};
use super::rational::Rational;
use crate::error::ArithError;

/// Largest |coefficient| accepted by the divisor enumeration in `factor_small`.
const FACTOR_COEFF_LIMIT: u64 = 1_000_000_000_000;

/// Sturm sequence of a squarefree polynomial.
pub fn sturm_chain(p: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain.last().unwrap().is_zero() {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]).expect("nonzero divisor");
        chain.push(-&r);
    }
    chain.pop();
    chain
}

fn sign_changes(chain: &[QPoly], x: &Rational) -> usize {
    let signs: Vec<Ordering> = chain
        .iter()
        .map(|q| q.eval(x).signum())
        .filter(|s| *s != Ordering::Equal)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of the squarefree `chain[0]` in `(lo, hi]`.
pub fn count_roots(chain: &[QPoly], lo: &Rational, hi: &Rational) -> usize {
    sign_changes(chain, lo).saturating_sub(sign_changes(chain, hi))
}

/// Strict bound on the absolute value of every root (Cauchy).
fn cauchy_bound(p: &QPoly) -> Rational {
    let lead = p.leading().unwrap().abs();
    let max = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(Rational::zero);
    Rational::one() + max / lead
}

/// A point of `(lo, hi)` that is not a root of `p`, as close to the midpoint as
/// the polynomial allows.
fn split_point(p: &QPoly, lo: &Rational, hi: &Rational) -> Rational {
    let mid = Rational::midpoint(lo, hi);
    if !p.eval(&mid).is_zero() {
        return mid;
    }
    let width = hi - lo;
    let mut k = 3i64;
    loop {
        let x = &mid + &(&width / &Rational::from_integer(k));
        if !p.eval(&x).is_zero() {
            return x;
        }
        k += 1;
    }
}

/// Isolating intervals for the distinct real roots of `p`, in increasing order.
///
/// Endpoints are never roots, and consecutive intervals do not touch.
pub fn isolate_real_roots(p: &IntPoly) -> Result<Vec<(Rational, Rational)>, ArithError> {
    if p.is_zero() {
        return Err(ArithError::ZeroPolynomial);
    }
    let q = p.to_qpoly().squarefree();
    if q.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let chain = sturm_chain(&q);
    let bound = cauchy_bound(&q);
    let mut stack = vec![(-&bound, bound)];
    let mut found = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        match count_roots(&chain, &lo, &hi) {
            0 => {}
            1 => found.push((lo, hi)),
            _ => {
                let mid = split_point(&q, &lo, &hi);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    found.sort();
    // Separate intervals that share an endpoint.
    for i in 1..found.len() {
        while found[i - 1].1 >= found[i].0 {
            found[i - 1] = bisect(&q, &found[i - 1].0, &found[i - 1].1);
            found[i] = bisect(&q, &found[i].0, &found[i].1);
        }
    }
    Ok(found)
}

/// One bisection step on an interval isolating a simple root of `q`.
fn bisect(q: &QPoly, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    let mid = Rational::midpoint(lo, hi);
    let fm = q.eval(&mid);
    if fm.is_zero() {
        let quarter = (hi - lo) / Rational::from_integer(4);
        return (&mid - &quarter, &mid + &quarter);
    }
    if q.eval(lo).signum() == fm.signum() {
        (mid, hi.clone())
    } else {
        (lo.clone(), mid)
    }
}

fn positive_divisors(n: &BigInt) -> Result<Vec<BigInt>, ArithError> {
    let n = n.abs();
    let small = n
        .to_u64()
        .filter(|v| *v <= FACTOR_COEFF_LIMIT)
        .ok_or_else(|| ArithError::CoefficientTooLarge(n.to_string()))?;
    let mut out = Vec::new();
    let r = small.sqrt();
    for d in 1..=r {
        if small % d == 0 {
            out.push(BigInt::from(d));
            if d != small / d {
                out.push(BigInt::from(small / d));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Irreducible factorization over `Q` for degree at most 4.
///
/// Returns primitive factors with positive leading coefficient, repeated
/// according to multiplicity and sorted by degree; the content is dropped.
pub fn factor_small(p: &IntPoly) -> Result<Vec<IntPoly>, ArithError> {
    let deg = p.degree().ok_or(ArithError::ZeroPolynomial)?;
    if deg > 4 {
        return Err(ArithError::DegreeTooLarge(deg));
    }
    let mut rest = p.primitive_part();
    let mut factors = Vec::new();

    // Linear factors, from the rational root test.
    while rest.degree().unwrap_or(0) >= 1 {
        let a0 = rest.coeffs()[0].clone();
        if a0.is_zero() {
            let t = IntPoly::from_i64s(&[0, 1]);
            rest = rest.div_exact(&t).unwrap();
            factors.push(t);
            continue;
        }
        let lead = rest.leading().unwrap().clone();
        let mut hit = None;
        'search: for r in positive_divisors(&a0)? {
            for s in positive_divisors(&lead)? {
                if !r.gcd(&s).is_one() {
                    continue;
                }
                for num in [r.clone(), -r.clone()] {
                    let cand = IntPoly::new(vec![-num.clone(), s.clone()]);
                    if let Some(q) = rest.div_exact(&cand) {
                        hit = Some((cand, q));
                        break 'search;
                    }
                }
            }
        }
        match hit {
            Some((f, q)) => {
                factors.push(f);
                rest = q;
            }
            None => break,
        }
    }

    // A quartic without rational roots may still split into two quadratics.
    if rest.degree() == Some(4) {
        if let Some((f, g)) = quadratic_split(&rest)? {
            factors.push(f);
            factors.push(g);
            rest = IntPoly::from_i64s(&[1]);
        }
    }
    if rest.degree().unwrap_or(0) >= 1 {
        factors.push(rest);
    }
    factors.sort_by(|x, y| x.degree().cmp(&y.degree()).then_with(|| x.coeffs().cmp(y.coeffs())));
    Ok(factors)
}

fn quadratic_split(p: &IntPoly) -> Result<Option<(IntPoly, IntPoly)>, ArithError> {
    let norm2: BigInt = p.coeffs().iter().map(|c| c * c).sum();
    // Mignotte: the middle coefficient of a quadratic factor is at most 2·‖p‖₂.
    let bound: BigInt = (norm2.sqrt() + BigInt::one()) * 2;
    let bound = bound
        .to_i64()
        .filter(|b| *b <= 10_000_000)
        .ok_or_else(|| ArithError::CoefficientTooLarge(bound.to_string()))?;
    let a0 = &p.coeffs()[0];
    let lead = p.leading().unwrap();
    for c2 in positive_divisors(lead)? {
        for d0 in positive_divisors(a0)? {
            for c0 in [d0.clone(), -d0] {
                for c1 in -bound..=bound {
                    let f = IntPoly::new(vec![c0.clone(), BigInt::from(c1), c2.clone()]);
                    if let Some(g) = p.div_exact(&f) {
                        return Ok(Some((f.primitive_part(), g.primitive_part())));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// A real algebraic number: an irreducible primitive polynomial and a rational
/// interval containing exactly one of its roots.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraicReal {
    poly: IntPoly,
    lo: Rational,
    hi: Rational,
}

impl AlgebraicReal {
    /// Validates irreducibility and that `[lo, hi]` isolates one root with
    /// non-root endpoints.
    pub fn new(poly: IntPoly, lo: Rational, hi: Rational) -> Result<Self, ArithError> {
        let poly = poly.primitive_part();
        let factors = factor_small(&poly)?;
        if factors.len() != 1 {
            return Err(ArithError::Reducible(poly.to_string()));
        }
        Self::isolating(poly, lo, hi)
    }

    /// Like [`AlgebraicReal::new`] but trusts the caller on irreducibility.
    pub(crate) fn isolating(poly: IntPoly, lo: Rational, hi: Rational) -> Result<Self, ArithError> {
        let q = poly.to_qpoly();
        let bad = || ArithError::NotIsolating {
            poly: poly.to_string(),
            lo: lo.to_string(),
            hi: hi.to_string(),
        };
        if lo >= hi || q.eval(&lo).is_zero() || q.eval(&hi).is_zero() {
            return Err(bad());
        }
        if count_roots(&sturm_chain(&q), &lo, &hi) != 1 {
            return Err(bad());
        }
        Ok(AlgebraicReal { poly, lo, hi })
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        Rational::midpoint(&self.lo, &self.hi)
    }

    /// The exact value when the polynomial is linear.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.degree() != 1 {
            return None;
        }
        let c = self.poly.coeffs();
        Some(Rational::new(-c[0].clone(), c[1].clone()).unwrap())
    }

    /// Halves the interval; the designated root is unchanged.
    pub fn refine(&self) -> AlgebraicReal {
        let (lo, hi) = bisect(&self.poly.to_qpoly(), &self.lo, &self.hi);
        AlgebraicReal { poly: self.poly.clone(), lo, hi }
    }

    pub fn refine_times(&self, n: usize) -> AlgebraicReal {
        let q = self.poly.to_qpoly();
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        for _ in 0..n {
            (lo, hi) = bisect(&q, &lo, &hi);
        }
        AlgebraicReal { poly: self.poly.clone(), lo, hi }
    }

    pub fn refine_to_width(&self, width: &Rational) -> AlgebraicReal {
        let q = self.poly.to_qpoly();
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        while &(&hi - &lo) >= width {
            (lo, hi) = bisect(&q, &lo, &hi);
        }
        AlgebraicReal { poly: self.poly.clone(), lo, hi }
    }

    /// Interval narrowed to `[lo, hi] ∩ [a, b]`, if that still holds the root.
    pub fn clamp(&self, a: &Rational, b: &Rational) -> Option<AlgebraicReal> {
        let lo = a.max(&self.lo).clone();
        let hi = b.min(&self.hi).clone();
        AlgebraicReal::isolating(self.poly.clone(), lo, hi).ok()
    }

    /// Whether `other` designates the same root of the same polynomial.
    pub fn same_root(&self, other: &AlgebraicReal) -> bool {
        if self.poly != other.poly {
            return false;
        }
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        lo < hi && count_roots(&sturm_chain(&self.poly.to_qpoly()), &lo, &hi) == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.refine_times(64).midpoint().to_f64()
    }
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} in [{}, {}]", self.poly, self.lo, self.hi)
    }
}

/// The unique eigenvalue of `m` in `(0, 1)`, as a root of the irreducible
/// factor of the characteristic polynomial that carries it.
pub fn build_number_field(m: &[[i64; 4]; 4]) -> Result<AlgebraicReal, ArithError> {
    let chi = charpoly(m)?;
    let zero = Rational::zero();
    let one = Rational::one();
    let mut found: Vec<AlgebraicReal> = Vec::new();
    let mut factors = factor_small(&chi)?;
    factors.dedup();
    for f in factors {
        for (lo, hi) in isolate_real_roots(&f)? {
            let mut root = AlgebraicReal::isolating(f.clone(), lo, hi)?;
            if let Some(r) = root.as_rational() {
                if r > zero && r < one {
                    let quarter = Rational::new(1, 4).unwrap();
                    let w = (&r).min(&(&one - &r)).clone() * quarter;
                    found.push(AlgebraicReal::isolating(f.clone(), &r - &w, &r + &w)?);
                }
                continue;
            }
            // Irrational roots are never 0 or 1, so refinement settles the side.
            loop {
                if root.hi <= zero || root.lo >= one {
                    break;
                }
                if root.lo >= zero && root.hi <= one {
                    found.push(root);
                    break;
                }
                root = root.refine();
            }
        }
    }
    match found.len() {
        0 => Err(ArithError::NoEigenvalueInUnitInterval),
        1 => Ok(found.pop().unwrap()),
        n => Err(ArithError::AmbiguousEigenvalue(n)),
    }
}
