//! Oriented interval identification systems and the special symmetric form.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{ExactField, Rational};
use crate::error::SystemError;

/// Default bound on the number of points explored by [`orbit`].
pub const DEFAULT_ORBIT_MAX: usize = 10_000;
/// Coefficient bound of the genericity search.
pub const RELATION_BOUND: i64 = 8;

/// A closed interval `[lo, hi]` with `lo < hi`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval<F> {
    lo: F,
    hi: F,
}

impl<F: ExactField> Interval<F> {
    pub fn new(lo: F, hi: F) -> Result<Self, SystemError> {
        if lo >= hi {
            return Err(SystemError::EmptyInterval(lo.to_string(), hi.to_string()));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> &F {
        &self.lo
    }

    pub fn hi(&self) -> &F {
        &self.hi
    }

    pub fn length(&self) -> F {
        self.hi.clone() - &self.lo
    }

    pub fn contains_point(&self, x: &F) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains(&self, other: &Interval<F>) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn interior_contains(&self, x: &F) -> bool {
        &self.lo < x && x < &self.hi
    }

    pub fn shifted(&self, delta: &F) -> Interval<F> {
        Interval { lo: self.lo.clone() + delta, hi: self.hi.clone() + delta }
    }

    /// Image under `x ↦ axis - x`.
    pub fn reflected(&self, axis: &F) -> Interval<F> {
        Interval { lo: axis.clone() - &self.hi, hi: axis.clone() - &self.lo }
    }

    /// `[lo, hi]` with a new upper end; callers guarantee `lo < hi`.
    pub(crate) fn with_hi(&self, hi: F) -> Interval<F> {
        debug_assert!(self.lo < hi);
        Interval { lo: self.lo.clone(), hi }
    }
}

impl<F: fmt::Display> fmt::Display for Interval<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl<F: fmt::Debug> fmt::Debug for Interval<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl<F: Serialize> Serialize for Interval<F> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [&self.lo, &self.hi].serialize(serializer)
    }
}

impl<'de, F: ExactField + DeserializeOwned> Deserialize<'de> for Interval<F> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [lo, hi] = <[F; 2]>::deserialize(deserializer)?;
        Interval::new(lo, hi).map_err(serde::de::Error::custom)
    }
}

/// Name of an identification pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairLabel {
    A,
    B,
    C,
    Index(usize),
}

impl fmt::Display for PairLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairLabel::A => write!(f, "a"),
            PairLabel::B => write!(f, "b"),
            PairLabel::C => write!(f, "c"),
            PairLabel::Index(i) => write!(f, "{i}"),
        }
    }
}

impl FromStr for PairLabel {
    type Err = SystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" => Ok(PairLabel::A),
            "b" => Ok(PairLabel::B),
            "c" => Ok(PairLabel::C),
            _ => s.parse().map(PairLabel::Index).map_err(|_| SystemError::UnknownLabel(s.to_string())),
        }
    }
}

impl Serialize for PairLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PairLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// One of the two intervals of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Member {
    Left,
    Right,
}

impl Member {
    pub fn other(self) -> Member {
        match self {
            Member::Left => Member::Right,
            Member::Right => Member::Left,
        }
    }
}

/// Two equal-length intervals identified by a translation, `left.lo <= right.lo`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct IdentificationPair<F> {
    left: Interval<F>,
    right: Interval<F>,
    label: PairLabel,
}

impl<F: ExactField> IdentificationPair<F> {
    /// Orders the two intervals canonically; errors if their lengths differ.
    pub fn new(x: Interval<F>, y: Interval<F>, label: PairLabel) -> Result<Self, SystemError> {
        if x.length() != y.length() {
            return Err(SystemError::UnequalLengths(label.to_string()));
        }
        let (left, right) = if x.lo <= y.lo { (x, y) } else { (y, x) };
        Ok(IdentificationPair { left, right, label })
    }

    pub fn left(&self) -> &Interval<F> {
        &self.left
    }

    pub fn right(&self) -> &Interval<F> {
        &self.right
    }

    pub fn label(&self) -> PairLabel {
        self.label
    }

    pub fn member(&self, m: Member) -> &Interval<F> {
        match m {
            Member::Left => &self.left,
            Member::Right => &self.right,
        }
    }

    pub fn length(&self) -> F {
        self.left.length()
    }

    /// Translation taking the left interval onto the right one.
    pub fn shift(&self) -> F {
        self.right.lo.clone() - &self.left.lo
    }

    /// Center of symmetry of the two intervals, times two.
    pub fn double_midpoint(&self) -> F {
        self.left.lo.clone() + &self.right.hi
    }

    fn endpoints(&self) -> [&F; 4] {
        [&self.left.lo, &self.left.hi, &self.right.lo, &self.right.hi]
    }
}

impl<'de, F: ExactField + DeserializeOwned> Deserialize<'de> for IdentificationPair<F> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(bound = "G: ExactField + DeserializeOwned")]
        struct Repr<G> {
            left: Interval<G>,
            right: Interval<G>,
            label: PairLabel,
        }
        let r = Repr::<F>::deserialize(deserializer)?;
        IdentificationPair::new(r.left, r.right, r.label).map_err(serde::de::Error::custom)
    }
}

/// A support interval and an ordered list of identification pairs.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct IISystem<F> {
    support: Interval<F>,
    pairs: Vec<IdentificationPair<F>>,
}

impl<F: ExactField> IISystem<F> {
    pub fn new(support: Interval<F>, pairs: Vec<IdentificationPair<F>>) -> Result<Self, SystemError> {
        for (i, p) in pairs.iter().enumerate() {
            if !support.contains(&p.left) || !support.contains(&p.right) {
                return Err(SystemError::OutsideSupport(p.label.to_string()));
            }
            if pairs[..i].iter().any(|q| q.label == p.label) {
                return Err(SystemError::DuplicateLabel(p.label.to_string()));
            }
        }
        Ok(IISystem { support, pairs })
    }

    pub fn support(&self) -> &Interval<F> {
        &self.support
    }

    pub fn pairs(&self) -> &[IdentificationPair<F>] {
        &self.pairs
    }

    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair(&self, label: PairLabel) -> Option<&IdentificationPair<F>> {
        self.pairs.iter().find(|p| p.label == label)
    }

    pub fn pair_index(&self, label: PairLabel) -> Option<usize> {
        self.pairs.iter().position(|p| p.label == label)
    }

    /// Replaces one pair; the caller keeps the support invariant.
    pub(crate) fn with_pair(&self, index: usize, pair: IdentificationPair<F>) -> IISystem<F> {
        let mut pairs = self.pairs.clone();
        pairs[index] = pair;
        IISystem { support: self.support.clone(), pairs }
    }

    /// Image under the reflection `x ↦ A + B - x` of the support.
    pub fn reflect(&self) -> IISystem<F> {
        let axis = self.support.lo.clone() + &self.support.hi;
        let pairs = self
            .pairs
            .iter()
            .map(|p| {
                IdentificationPair::new(p.right.reflected(&axis), p.left.reflected(&axis), p.label)
                    .expect("reflection preserves lengths")
            })
            .collect();
        IISystem { support: self.support.clone(), pairs }
    }

    pub fn total_length(&self) -> F {
        let zero = self.support.lo.zero_like();
        self.pairs.iter().fold(zero, |s, p| s + p.length())
    }

    pub fn all_intervals(&self) -> impl Iterator<Item = (usize, Member, &Interval<F>)> {
        self.pairs.iter().enumerate().flat_map(|(i, p)| {
            [(i, Member::Left, &p.left), (i, Member::Right, &p.right)].into_iter()
        })
    }
}

impl<'de, F: ExactField + DeserializeOwned> Deserialize<'de> for IISystem<F> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(bound = "G: ExactField + DeserializeOwned")]
        struct Repr<G> {
            support: Interval<G>,
            pairs: Vec<IdentificationPair<G>>,
        }
        let r = Repr::<F>::deserialize(deserializer)?;
        IISystem::new(r.support, r.pairs).map_err(serde::de::Error::custom)
    }
}

/// The parameters `(a, b, c, u)` of a special symmetric system.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SymmetricParams<F> {
    pub a: F,
    pub b: F,
    pub c: F,
    pub u: F,
}

impl<F: ExactField> SymmetricParams<F> {
    /// Requires `a, b, c, u > 0` and `u < a + b`.
    pub fn new(a: F, b: F, c: F, u: F) -> Result<Self, SystemError> {
        for (name, v) in [("a", &a), ("b", &b), ("c", &c), ("u", &u)] {
            if !v.is_positive() {
                return Err(SystemError::NonPositiveParameter(name));
            }
        }
        if u >= a.clone() + &b {
            return Err(SystemError::ShiftTooLarge);
        }
        Ok(SymmetricParams { a, b, c, u })
    }

    pub fn from_array([a, b, c, u]: [F; 4]) -> Result<Self, SystemError> {
        SymmetricParams::new(a, b, c, u)
    }

    pub fn to_array(&self) -> [F; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.u.clone()]
    }

    pub fn total(&self) -> F {
        self.a.clone() + &self.b + &self.c
    }

    /// `a + b - u`, the position of the right c-interval.
    pub fn mirror_u(&self) -> F {
        self.a.clone() + &self.b - &self.u
    }

    /// Swaps `a, b` and reflects `u` as needed so that `a >= b` and
    /// `u <= a + b - u`. Describes the same system.
    pub fn normalized(&self) -> SymmetricParams<F> {
        let mut p = self.clone();
        if p.a < p.b {
            std::mem::swap(&mut p.a, &mut p.b);
        }
        let mirror = p.mirror_u();
        if p.u > mirror {
            p.u = mirror;
        }
        p
    }

    pub fn is_normalized(&self) -> bool {
        self.a > self.b && self.u < self.mirror_u()
    }

    pub fn scaled(&self, k: &F) -> SymmetricParams<F> {
        SymmetricParams {
            a: self.a.clone() * k,
            b: self.b.clone() * k,
            c: self.c.clone() * k,
            u: self.u.clone() * k,
        }
    }

    /// A nonzero `(α, β, γ, δ)` with `|·| <= bound` and `αa + βb + γc + δu = 0`.
    pub fn integer_relation(&self, bound: i64) -> Option<[i64; 4]> {
        let coords: Vec<Vec<Rational>> =
            [&self.a, &self.b, &self.c, &self.u].iter().map(|x| x.rational_coordinates()).collect();
        let dim = coords.iter().map(Vec::len).max().unwrap_or(0);
        let lcm = coords.iter().flatten().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        // column j of the integer matrix holds coordinate j of a, b, c, u
        let cols: Vec<[BigInt; 4]> = (0..dim)
            .map(|j| {
                std::array::from_fn(|i| {
                    coords[i].get(j).map(|q| q.numer() * (&lcm / q.denom())).unwrap_or_default()
                })
            })
            .collect();
        let limit = BigInt::one() << 100;
        if cols.iter().flatten().all(|v| v.abs() < limit) {
            let small: Vec<[i128; 4]> =
                cols.iter().map(|c| std::array::from_fn(|i| c[i].to_i128().unwrap())).collect();
            relation_search(&small, bound)
        } else {
            relation_search(&cols, bound)
        }
    }

    pub fn is_generic(&self) -> bool {
        self.integer_relation(RELATION_BOUND).is_none()
    }

    pub fn map<G>(&self, f: impl Fn(&F) -> G) -> SymmetricParams<G> {
        SymmetricParams { a: f(&self.a), b: f(&self.b), c: f(&self.c), u: f(&self.u) }
    }
}

fn relation_search<T>(cols: &[[T; 4]], bound: i64) -> Option<[i64; 4]>
where
    T: Integer + Signed + Clone + From<i64>,
{
    let pivot = cols.iter().position(|c| !c[3].is_zero())?;
    for alpha in -bound..=bound {
        for beta in -bound..=bound {
            for gamma in -bound..=bound {
                let partial = |c: &[T; 4]| {
                    T::from(alpha) * c[0].clone() + T::from(beta) * c[1].clone() + T::from(gamma) * c[2].clone()
                };
                let s = partial(&cols[pivot]);
                let (delta, rem) = (-s).div_rem(&cols[pivot][3]);
                if !rem.is_zero() || delta.abs() > T::from(bound) {
                    continue;
                }
                if alpha == 0 && beta == 0 && gamma == 0 && delta.is_zero() {
                    continue;
                }
                if cols.iter().all(|c| (partial(c) + delta.clone() * c[3].clone()).is_zero()) {
                    let d = (-bound..=bound).find(|v| T::from(*v) == delta).unwrap();
                    return Some([alpha, beta, gamma, d]);
                }
            }
        }
    }
    None
}

impl<F: fmt::Display> fmt::Display for SymmetricParams<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.u)
    }
}

impl<F: fmt::Debug> fmt::Debug for SymmetricParams<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?}, {:?}, {:?})", self.a, self.b, self.c, self.u)
    }
}

impl<'de, F: ExactField + DeserializeOwned> Deserialize<'de> for SymmetricParams<F> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(bound = "G: DeserializeOwned")]
        struct Repr<G> {
            a: G,
            b: G,
            c: G,
            u: G,
        }
        let r = Repr::<F>::deserialize(deserializer)?;
        SymmetricParams::new(r.a, r.b, r.c, r.u).map_err(serde::de::Error::custom)
    }
}

/// Parses `"a,b,c,u"` with each entry an exact rational `p` or `p/q`.
impl FromStr for SymmetricParams<Rational> {
    type Err = SystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = s
            .split(',')
            .map(|x| x.trim().parse::<Rational>())
            .collect::<Result<Vec<_>, _>>()?;
        let arr: [Rational; 4] = parts
            .try_into()
            .map_err(|v: Vec<Rational>| SystemError::NotSpecialForm(format!("expected 4 parameters, got {}", v.len())))?;
        SymmetricParams::from_array(arr)
    }
}

/// The special symmetric system with support `[0, a+b+c]`.
pub fn build_special_symmetric<F: ExactField>(p: &SymmetricParams<F>) -> Result<IISystem<F>, SystemError> {
    let p = SymmetricParams::new(p.a.clone(), p.b.clone(), p.c.clone(), p.u.clone())?;
    let zero = p.a.zero_like();
    let total = p.total();
    let iv = |lo: F, hi: F| Interval::new(lo, hi);
    let a_pair = IdentificationPair::new(
        iv(zero.clone(), p.a.clone())?,
        iv(p.b.clone() + &p.c, total.clone())?,
        PairLabel::A,
    )?;
    let b_pair = IdentificationPair::new(
        iv(zero.clone(), p.b.clone())?,
        iv(p.a.clone() + &p.c, total.clone())?,
        PairLabel::B,
    )?;
    let m = p.mirror_u();
    let c_pair = IdentificationPair::new(
        iv(p.u.clone(), p.u.clone() + &p.c)?,
        iv(m.clone(), m + &p.c)?,
        PairLabel::C,
    )?;
    IISystem::new(iv(zero, total)?, vec![a_pair, b_pair, c_pair])
}

pub fn is_symmetric<F: ExactField>(s: &IISystem<F>) -> bool {
    let ends = s.support.lo.clone() + &s.support.hi;
    s.pairs.iter().all(|p| p.double_midpoint() == ends)
}

pub fn is_balanced<F: ExactField>(s: &IISystem<F>) -> bool {
    let Some(min_lo) = s.pairs.iter().map(|p| &p.left.lo).min() else {
        return false;
    };
    let max_hi = s.pairs.iter().map(|p| &p.right.hi).max().unwrap();
    min_lo == &s.support.lo && max_hi == &s.support.hi && s.total_length() == s.support.length()
}

/// Number of pairs spanning the support: `left.lo = A` and `right.hi = B`.
pub fn full_pairs<F: ExactField>(s: &IISystem<F>) -> usize {
    s.pairs
        .iter()
        .filter(|p| p.left.lo == s.support.lo && p.right.hi == s.support.hi)
        .count()
}

/// Symmetric, balanced, of order 3, with at least two spanning pairs.
pub fn is_special<F: ExactField>(s: &IISystem<F>) -> bool {
    s.order() == 3 && full_pairs(s) >= 2 && is_symmetric(s) && is_balanced(s)
}

/// Maximal open subintervals of the support covered by no pair interval.
pub fn coverage_gaps<F: ExactField>(s: &IISystem<F>) -> Vec<(F, F)> {
    let mut ivs: Vec<&Interval<F>> = s.all_intervals().map(|(_, _, iv)| iv).collect();
    ivs.sort_by(|x, y| x.lo.cmp(&y.lo));
    let mut gaps = Vec::new();
    let mut reach = s.support.lo.clone();
    for iv in ivs {
        if iv.lo > reach {
            gaps.push((reach.clone(), iv.lo.clone()));
        }
        if iv.hi > reach {
            reach = iv.hi.clone();
        }
    }
    if reach < s.support.hi {
        gaps.push((reach, s.support.hi.clone()));
    }
    gaps
}

pub fn has_hole<F: ExactField>(s: &IISystem<F>) -> bool {
    !coverage_gaps(s).is_empty()
}

/// Sorted, deduplicated endpoints of all pair intervals.
pub fn critical_points<F: ExactField>(s: &IISystem<F>) -> Vec<F> {
    let set: BTreeSet<&F> = s.pairs.iter().flat_map(|p| p.endpoints()).collect();
    set.into_iter().cloned().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitStatus {
    Exhausted,
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitResult<F> {
    pub points: Vec<F>,
    pub status: OrbitStatus,
}

/// Breadth-first closure of `{x}` under the identifications, with at most
/// `max_size` points.
pub fn orbit<F: ExactField>(s: &IISystem<F>, x: &F, max_size: usize) -> Result<OrbitResult<F>, SystemError> {
    if !s.support.contains_point(x) {
        return Err(SystemError::PointOutsideSupport(x.to_string()));
    }
    let shifts: Vec<F> = s.pairs.iter().map(|p| p.shift()).collect();
    let mut seen: BTreeSet<F> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(x.clone());
    queue.push_back(x.clone());
    while let Some(y) = queue.pop_front() {
        for (p, shift) in s.pairs.iter().zip(&shifts) {
            let mut images = Vec::with_capacity(2);
            if p.left.contains_point(&y) {
                images.push(y.clone() + shift);
            }
            if p.right.contains_point(&y) {
                images.push(y.clone() - shift);
            }
            for z in images {
                if seen.contains(&z) {
                    continue;
                }
                if seen.len() >= max_size {
                    return Ok(OrbitResult { points: seen.into_iter().collect(), status: OrbitStatus::Truncated });
                }
                seen.insert(z.clone());
                queue.push_back(z);
            }
        }
    }
    Ok(OrbitResult { points: seen.into_iter().collect(), status: OrbitStatus::Exhausted })
}

/// Recovers `(a, b, c, u)` from a special symmetric system of order 3, up to
/// pair renaming, normalized so that `a >= b` and `u <= a + b - u`.
pub fn params_of<F: ExactField>(s: &IISystem<F>) -> Result<SymmetricParams<F>, SystemError> {
    let bad = |why: &str| SystemError::NotSpecialForm(why.to_string());
    if s.order() != 3 {
        return Err(bad("order is not 3"));
    }
    if !is_symmetric(s) {
        return Err(bad("not symmetric"));
    }
    if !is_balanced(s) {
        return Err(bad("not balanced"));
    }
    let (full, rest): (Vec<_>, Vec<_>) = s
        .pairs
        .iter()
        .partition(|p| p.left.lo == s.support.lo && p.right.hi == s.support.hi);
    if full.len() != 2 {
        return Err(bad(&format!("{} pairs span the support", full.len())));
    }
    let (x, y) = (full[0].length(), full[1].length());
    let (a, b) = if x >= y { (x, y) } else { (y, x) };
    let c_pair = rest[0];
    let c = c_pair.length();
    let u = c_pair.left.lo.clone() - &s.support.lo;
    let p = SymmetricParams::new(a, b, c, u)?;
    Ok(p.normalized())
}
