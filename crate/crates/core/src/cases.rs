//! The eight-case classification of special symmetric systems, the transition
//! matrices of each case, and the two routes to the next symmetric system:
//! the matrix route (classify, instantiate, select) and the engine route
//! (run the induction until the system is symmetric again).

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::linalg::{apply4, det4, IntMatrix4};
use crate::arith::ExactField;
use crate::engine::{group_generalized, run_induction, InductionTrace, Outcome, Side, StopWhen};
use crate::error::{ArithError, CaseError};
use crate::system::{build_special_symmetric, has_hole, params_of, IISystem, SymmetricParams};

/// Default cap on ordinary iterations for one symmetrize call.
pub const DEFAULT_STEP_CAP: usize = 10_000_000;

/// Sub-case of Cases 7 and 8, decided by the position of `a - b` relative to `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// `a - b < b`
    #[serde(rename = "7a")]
    Near,
    /// `a - b - c > b`
    #[serde(rename = "7b")]
    Far,
    /// `2b < a < 2b + c`: the first iteration opens a hole.
    #[serde(rename = "hole")]
    Gap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseLabel {
    pub index: u8,
    pub branch: Option<Branch>,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.branch {
            None => write!(f, "Case {}", self.index),
            Some(Branch::Near) => write!(f, "Case {} (a-b<b)", self.index),
            Some(Branch::Far) => write!(f, "Case {} (a-b-c>b)", self.index),
            Some(Branch::Gap) => write!(f, "Case {} (2b<a<2b+c)", self.index),
        }
    }
}

/// Integer counts entering the matrices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CaseCounts {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Provenance {
    A,
    B { k: i64 },
    CN { n: i64 },
    CXy { x: i64, y: i64 },
    /// Not from a case list (e.g. a product or the thin-type matrix).
    Other,
}

/// A 4×4 integer matrix acting on `(a, b, c, u)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TransitionMatrix {
    pub entries: IntMatrix4,
    pub provenance: Provenance,
    /// Case whose list the matrix comes from (Cases 2, 4, 6, 8 reuse the
    /// lists of Cases 1, 3, 5, 7).
    pub list_case: u8,
    /// Rows 0 and 1 exchanged relative to the listed matrix (`a ↔ b`).
    pub swapped: bool,
    /// Row 3 replaced by row 0 + row 1 - row 3 (`u ↦ a + b - u`).
    pub reflected: bool,
}

impl TransitionMatrix {
    pub fn new(entries: IntMatrix4, provenance: Provenance, list_case: u8) -> Self {
        TransitionMatrix { entries, provenance, list_case, swapped: false, reflected: false }
    }

    pub fn row(&self, i: usize) -> [i64; 4] {
        self.entries[i]
    }

    pub fn apply<F: ExactField>(&self, v: &[F; 4]) -> [F; 4] {
        apply4(&self.entries, v)
    }

    pub fn determinant(&self) -> BigInt {
        det4(&self.entries)
    }

    pub fn is_unimodular(&self) -> bool {
        let d = self.determinant();
        d == BigInt::from(1) || d == BigInt::from(-1)
    }

    pub fn trace(&self) -> i64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }

    /// Exchanges the roles of `a` and `b` in the output.
    pub fn swap_ab(&self) -> TransitionMatrix {
        let mut m = self.clone();
        m.entries.swap(0, 1);
        m.swapped = !m.swapped;
        m
    }

    /// Replaces `u'` by `a' + b' - u'` in the output.
    pub fn reflect_u(&self) -> TransitionMatrix {
        let mut m = self.clone();
        let e = self.entries;
        m.entries[3] = std::array::from_fn(|j| e[0][j] + e[1][j] - e[3][j]);
        m.reflected = !m.reflected;
        m
    }
}

/// Normalization with strict inequalities: ties are degenerate.
pub fn normalize_params<F: ExactField>(p: &SymmetricParams<F>) -> Result<SymmetricParams<F>, CaseError> {
    if p.a == p.b {
        return Err(CaseError::Degenerate("a = b".into()));
    }
    if p.u.scale_int(2) == p.a.clone() + &p.b {
        return Err(CaseError::Degenerate("u = a + b - u".into()));
    }
    Ok(p.normalized())
}

/// The eight interior critical values of the special form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Crit {
    U,
    UC,
    B,
    BC,
    A,
    AC,
    M,
    MC,
}

impl Crit {
    const ALL: [Crit; 8] = [Crit::U, Crit::UC, Crit::B, Crit::BC, Crit::A, Crit::AC, Crit::M, Crit::MC];

    fn eval<F: ExactField>(self, p: &SymmetricParams<F>) -> F {
        match self {
            Crit::U => p.u.clone(),
            Crit::UC => p.u.clone() + &p.c,
            Crit::B => p.b.clone(),
            Crit::BC => p.b.clone() + &p.c,
            Crit::A => p.a.clone(),
            Crit::AC => p.a.clone() + &p.c,
            Crit::M => p.mirror_u(),
            Crit::MC => p.mirror_u() + &p.c,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Crit::U => "u",
            Crit::UC => "u+c",
            Crit::B => "b",
            Crit::BC => "b+c",
            Crit::A => "a",
            Crit::AC => "a+c",
            Crit::M => "a+b-u",
            Crit::MC => "a+b+c-u",
        }
    }
}

/// Order of the critical values in each case. Case 4 leaves out `b + c`.
fn chain(case: u8) -> &'static [Crit] {
    use Crit::*;
    match case {
        1 => &[U, UC, B, BC, A, AC, M, MC],
        2 => &[U, B, UC, BC, A, M, AC, MC],
        3 => &[U, B, A, M, UC, BC, AC, MC],
        4 => &[B, U, M, A, UC, MC, AC],
        5 => &[B, U, BC, UC, M, A, MC, AC],
        6 => &[B, U, BC, M, UC, A, MC, AC],
        7 => &[B, BC, U, UC, M, MC, A, AC],
        8 => &[B, BC, U, M, UC, MC, A, AC],
        _ => &[],
    }
}

fn sorted_names<F: ExactField>(p: &SymmetricParams<F>, skip_bc: bool) -> Vec<Crit> {
    let mut vals: Vec<(F, Crit)> = Crit::ALL
        .iter()
        .filter(|c| !(skip_bc && **c == Crit::BC))
        .map(|c| (c.eval(p), *c))
        .collect();
    vals.sort_by(|x, y| x.0.cmp(&y.0));
    vals.into_iter().map(|(_, c)| c).collect()
}

fn case_index<F: ExactField>(p: &SymmetricParams<F>) -> Result<u8, CaseError> {
    let (a, b, c, u) = (&p.a, &p.b, &p.c, &p.u);
    let bc = b.clone() + c;
    let uc = u.clone() + c;
    let m = p.mirror_u();
    let index = if u.clone() + c < *b {
        1
    } else if u < b {
        if *a > bc {
            2
        } else {
            3
        }
    } else if *u < bc {
        if uc < m {
            5
        } else if uc < *a {
            6
        } else {
            4
        }
    } else if uc < m {
        7
    } else if uc < *a {
        8
    } else {
        return Err(CaseError::Degenerate("b+c<u and u+c>a cannot hold for normalized parameters".into()));
    };
    Ok(index)
}

fn branch_of<F: ExactField>(p: &SymmetricParams<F>) -> Result<Branch, CaseError> {
    let d = p.a.clone() - &p.b;
    if d == p.b || d.clone() - &p.c == p.b {
        return Err(CaseError::Degenerate("a = 2b or a = 2b + c".into()));
    }
    Ok(if d < p.b {
        Branch::Near
    } else if d - &p.c > p.b {
        Branch::Far
    } else {
        Branch::Gap
    })
}

/// Case label of (the normalization of) `p`, and whether the initial system
/// has a hole.
///
/// The case comes from the inequality regions; for systems without a hole the
/// sorted order of the critical values must also match the case's chain.
pub fn classify_case<F: ExactField>(p: &SymmetricParams<F>) -> Result<(CaseLabel, bool), CaseError> {
    let p = normalize_params(p)?;
    let vals: Vec<F> = Crit::ALL.iter().map(|c| c.eval(&p)).collect();
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            if vals[i] == vals[j] {
                return Err(CaseError::Degenerate(format!(
                    "{} = {}",
                    Crit::ALL[i].name(),
                    Crit::ALL[j].name()
                )));
            }
        }
    }
    let index = case_index(&p)?;
    let hole = has_hole(&build_special_symmetric(&p)?);
    if !hole {
        let order = sorted_names(&p, index == 4);
        if order.as_slice() != chain(index) {
            let names: Vec<&str> = order.iter().map(|c| c.name()).collect();
            return Err(CaseError::ChainMismatch { case: index, order: names.join("<") });
        }
    }
    let branch = if index >= 7 { Some(branch_of(&p)?) } else { None };
    Ok((CaseLabel { index, branch }, hole))
}

fn floor_i64<F: ExactField>(x: &F) -> Result<i64, CaseError> {
    let f = x.floor();
    f.to_i64().ok_or_else(|| CaseError::Arith(ArithError::Overflow(f.to_string())))
}

/// `k`, `n`, `m`, `x`, `y` as far as they apply to `label`.
pub fn case_counts<F: ExactField>(label: &CaseLabel, p: &SymmetricParams<F>) -> Result<CaseCounts, CaseError> {
    let p = normalize_params(p)?;
    let (a, b, c, u) = (&p.a, &p.b, &p.c, &p.u);
    let mut counts = CaseCounts::default();
    match (label.index, label.branch) {
        (3 | 4, _) => {
            let num = c.clone() + u - a;
            let den = a.clone() + b - &u.scale_int(2);
            counts.k = Some(floor_i64(&num.checked_div(&den)?)? + 1);
        }
        (7 | 8, Some(Branch::Near)) => {
            let n = floor_i64(&b.checked_div(&(a.clone() - b))?)?;
            counts.n = Some(n);
            counts.m = Some(n - 1);
        }
        (7 | 8, Some(Branch::Far)) => {
            let bc = b.clone() + c;
            counts.x = Some(floor_i64(&u.checked_div(&bc)?)?);
            counts.y = Some(floor_i64(&(a.clone() - u - c).checked_div(&bc)?)?);
        }
        _ => {}
    }
    Ok(counts)
}

/// Four matrices `M, R(M), S(M), S(R(M))` from a first matrix and its
/// alternative `u'` row, in the order they are listed.
fn family(rows: [[i64; 4]; 3], u_row: [i64; 4], alt_u_row: [i64; 4], provenance: Provenance, case: u8) -> Vec<TransitionMatrix> {
    let m1 = TransitionMatrix::new([rows[0], rows[1], rows[2], u_row], provenance, case);
    let mut m2 = TransitionMatrix::new([rows[0], rows[1], rows[2], alt_u_row], provenance, case);
    m2.reflected = true;
    let mut m3 = TransitionMatrix::new([rows[1], rows[0], rows[2], u_row], provenance, case);
    m3.swapped = true;
    let mut m4 = TransitionMatrix::new([rows[1], rows[0], rows[2], alt_u_row], provenance, case);
    m4.swapped = true;
    m4.reflected = true;
    vec![m1, m2, m3, m4]
}

/// The listed candidate matrices of the case, with the counts instantiated.
pub fn case_matrices<F: ExactField>(label: &CaseLabel, p: &SymmetricParams<F>) -> Result<Vec<TransitionMatrix>, CaseError> {
    let counts = case_counts(label, p)?;
    let list_case = match label.index {
        1 | 2 => 1,
        3 | 4 => 3,
        5 | 6 => 5,
        _ => 7,
    };
    Ok(match (label.index, label.branch) {
        (1 | 2 | 5 | 6, _) => family(
            [[1, -1, -1, 0], [0, 1, 0, 0], [0, 0, 1, 0]],
            [0, 0, 0, 1],
            [1, 0, -1, -1],
            Provenance::A,
            list_case,
        ),
        (3 | 4, _) => {
            let k = counts.k.unwrap();
            family(
                [[1 + k, -1 + k, -1, -2 * k], [0, 1, 0, 0], [-k, -k, 1, 2 * k]],
                [0, 0, 0, 1],
                [1 + k, k, -1, -1 - 2 * k],
                Provenance::B { k },
                list_case,
            )
        }
        (7 | 8, Some(Branch::Near)) => {
            let n = counts.n.unwrap();
            let prov = Provenance::CN { n };
            let first = [[1 + n, -n - 2, -2, 0], [-n, 1 + n, 0, 0], [0, 0, 1, 0], [0, -1, 0, 1]];
            let second = [[-n, 1 + n, 0, 0], [1 + n, -n - 2, 0, 0], [0, 0, 1, 0], [0, -1, 0, 1]];
            vec![TransitionMatrix::new(first, prov, 7), TransitionMatrix::new(second, prov, 7)]
        }
        (7 | 8, Some(Branch::Far)) => {
            let (x, y) = (counts.x.unwrap(), counts.y.unwrap());
            let prov = Provenance::CXy { x, y };
            let top = [1, -(x + y) - 1, -(x + y) - 1, 0];
            let rows = [top, [0, 1, 0, 0], [0, 0, 1, 0], [1, -y, -y - 1, -1]];
            let first = TransitionMatrix::new(rows, prov, 7);
            let second = first.swap_ab();
            vec![first, second]
        }
        _ => {
            return Err(CaseError::HoleExpected(format!("{label}: the first iteration leaves a hole")));
        }
    })
}

/// Closes a candidate list under the two normalizations `a ↔ b` and
/// `u ↦ a + b - u`, keeping the listed matrices first.
pub fn normalization_closure(list: &[TransitionMatrix]) -> Vec<TransitionMatrix> {
    let mut out: Vec<TransitionMatrix> = Vec::new();
    for m in list {
        for cand in [m.clone(), m.swap_ab(), m.reflect_u(), m.reflect_u().swap_ab()] {
            if !out.iter().any(|o| o.entries == cand.entries) {
                out.push(cand);
            }
        }
    }
    out
}

fn image_params<F: ExactField>(m: &TransitionMatrix, p: &SymmetricParams<F>) -> Option<SymmetricParams<F>> {
    let [a, b, c, u] = m.apply(&p.to_array());
    if !(a.is_positive() && b.is_positive() && c.is_positive() && u.is_positive()) {
        return None;
    }
    let q = SymmetricParams::new(a, b, c, u).ok()?;
    q.is_normalized().then_some(q)
}

/// Candidates whose image is positive and satisfies `a' > b'`, `a' + b' - u' > u'`.
pub fn qualifying<F: ExactField>(cands: &[TransitionMatrix], p: &SymmetricParams<F>) -> Vec<(TransitionMatrix, SymmetricParams<F>)> {
    cands.iter().filter_map(|m| image_params(m, p).map(|q| (m.clone(), q))).collect()
}

/// The unique qualifying candidate and its image. Candidates with the same
/// image count once.
pub fn select_matrix<F: ExactField>(
    cands: &[TransitionMatrix],
    p: &SymmetricParams<F>,
) -> Result<(TransitionMatrix, SymmetricParams<F>), CaseError> {
    let mut found = qualifying(cands, p);
    let distinct = {
        let mut images: Vec<&SymmetricParams<F>> = Vec::new();
        for (_, q) in &found {
            if !images.contains(&q) {
                images.push(q);
            }
        }
        images.len()
    };
    match distinct {
        0 => Err(CaseError::NoCandidate),
        1 => Ok(found.swap_remove(0)),
        n => Err(CaseError::AmbiguousCandidates(n)),
    }
}

/// Matrix route: classify, instantiate the case's matrices (closed under the
/// normalizations), select by the inequalities.
pub fn predict_next<F: ExactField>(
    p: &SymmetricParams<F>,
) -> Result<(SymmetricParams<F>, CaseLabel, TransitionMatrix), CaseError> {
    let p = normalize_params(p)?;
    let (label, hole) = classify_case(&p)?;
    if hole {
        return Err(CaseError::HoleExpected("the system has a hole".into()));
    }
    let cands = normalization_closure(&case_matrices(&label, &p)?);
    let (m, q) = select_matrix(&cands, &p)?;
    Ok((q, label, m))
}

/// Verdict of either route.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RouteVerdict<F> {
    Symmetric { params: SymmetricParams<F> },
    Hole,
    Degenerate { reason: String },
    Ambiguous { images: Vec<SymmetricParams<F>> },
    StepCap,
}

impl<F> RouteVerdict<F> {
    pub fn kind(&self) -> &'static str {
        match self {
            RouteVerdict::Symmetric { .. } => "symmetric",
            RouteVerdict::Hole => "hole",
            RouteVerdict::Degenerate { .. } => "degenerate",
            RouteVerdict::Ambiguous { .. } => "ambiguous",
            RouteVerdict::StepCap => "step_cap",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixRoute<F> {
    pub label: Option<CaseLabel>,
    pub counts: CaseCounts,
    pub matrix: Option<TransitionMatrix>,
    pub verdict: RouteVerdict<F>,
    /// All qualifying candidates when the selection is not unique.
    #[serde(skip)]
    pub candidates: Vec<(TransitionMatrix, SymmetricParams<F>)>,
}

/// The matrix route with every failure mapped to a verdict.
pub fn matrix_route<F: ExactField>(p: &SymmetricParams<F>) -> MatrixRoute<F> {
    let mut route = MatrixRoute { label: None, counts: CaseCounts::default(), matrix: None, verdict: RouteVerdict::Hole, candidates: Vec::new() };
    let degenerate = |e: CaseError| RouteVerdict::Degenerate { reason: e.to_string() };
    let p = match normalize_params(p) {
        Ok(p) => p,
        Err(e) => {
            route.verdict = degenerate(e);
            return route;
        }
    };
    let (label, hole) = match classify_case(&p) {
        Ok(x) => x,
        Err(e) => {
            route.verdict = degenerate(e);
            return route;
        }
    };
    route.label = Some(label);
    route.counts = case_counts(&label, &p).unwrap_or_default();
    if hole {
        return route;
    }
    let cands = match case_matrices(&label, &p) {
        Ok(list) => normalization_closure(&list),
        Err(CaseError::HoleExpected(_)) => return route,
        Err(e) => {
            route.verdict = degenerate(e);
            return route;
        }
    };
    match select_matrix(&cands, &p) {
        Ok((m, q)) => {
            route.matrix = Some(m);
            route.verdict = if has_hole(&build_special_symmetric(&q).expect("qualifying image is valid")) {
                RouteVerdict::Hole
            } else {
                RouteVerdict::Symmetric { params: q }
            };
        }
        Err(CaseError::NoCandidate) => {}
        Err(CaseError::AmbiguousCandidates(_)) => {
            let found = qualifying(&cands, &p);
            let mut images: Vec<SymmetricParams<F>> = Vec::new();
            for (_, q) in &found {
                if !images.contains(q) {
                    images.push(q.clone());
                }
            }
            route.verdict = RouteVerdict::Ambiguous { images };
            route.candidates = found;
        }
        Err(e) => route.verdict = degenerate(e),
    }
    route
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetrizeOutcome<F> {
    pub result: RouteVerdict<F>,
    pub generalized_iterations_used: usize,
    pub ordinary_iterations: usize,
    /// Listed matrix (or normalization of one) reproducing the engine's result, if any.
    pub matrix_used: Option<TransitionMatrix>,
    #[serde(skip)]
    pub trace: InductionTrace<F>,
}

/// Engine route: right-side induction until the first special symmetric
/// system or a hole.
pub fn symmetrize<F: ExactField>(s: &IISystem<F>) -> Result<SymmetrizeOutcome<F>, CaseError> {
    symmetrize_with_cap(s, DEFAULT_STEP_CAP)
}

pub fn symmetrize_with_cap<F: ExactField>(s: &IISystem<F>, cap: usize) -> Result<SymmetrizeOutcome<F>, CaseError> {
    let start = params_of(s)?;
    let trace = run_induction(s, Side::Right, cap, StopWhen::Symmetric);
    let groups = group_generalized(&trace);
    let result = match trace.outcome {
        Outcome::Symmetric if has_hole(&trace.final_system) => RouteVerdict::Hole,
        Outcome::Symmetric => RouteVerdict::Symmetric { params: params_of(&trace.final_system)? },
        Outcome::Hole => RouteVerdict::Hole,
        Outcome::StepCap => RouteVerdict::StepCap,
        Outcome::Degenerate => RouteVerdict::Degenerate { reason: trace.note.clone().unwrap_or_default() },
    };
    let matrix_used = match &result {
        RouteVerdict::Symmetric { params } => identify_matrix(&start, params),
        _ => None,
    };
    Ok(SymmetrizeOutcome {
        result,
        generalized_iterations_used: groups.len(),
        ordinary_iterations: trace.ordinary_iterations(),
        matrix_used,
        trace,
    })
}

/// Closure candidate of the start's case mapping `start` to `target`.
fn identify_matrix<F: ExactField>(start: &SymmetricParams<F>, target: &SymmetricParams<F>) -> Option<TransitionMatrix> {
    let p = normalize_params(start).ok()?;
    let (label, _) = classify_case(&p).ok()?;
    let cands = normalization_closure(&case_matrices(&label, &p).ok()?);
    cands.into_iter().find(|m| m.apply(&p.to_array()) == target.to_array())
}

fn serialize_entries<S: Serializer>(m: &Option<TransitionMatrix>, s: S) -> Result<S::Ok, S::Error> {
    m.as_ref().map(|m| m.entries).serialize(s)
}

/// Both routes on one parameter tuple.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport<F> {
    pub params: SymmetricParams<F>,
    pub case: Option<CaseLabel>,
    pub counts: CaseCounts,
    #[serde(serialize_with = "serialize_entries")]
    pub matrix: Option<TransitionMatrix>,
    pub engine_params: Option<SymmetricParams<F>>,
    pub engine_verdict: &'static str,
    pub matrix_verdict: &'static str,
    pub agree: bool,
    pub generalized_iterations: usize,
    pub ordinary_iterations: usize,
    pub within_bound: bool,
    pub anomalies: Vec<String>,
    #[serde(skip)]
    pub trace: InductionTrace<F>,
}

/// Runs the engine and the matrix route and compares them.
pub fn verify_theorem1<F: ExactField>(p: &SymmetricParams<F>) -> Result<TheoremReport<F>, CaseError> {
    verify_theorem1_with_cap(p, DEFAULT_STEP_CAP)
}

pub fn verify_theorem1_with_cap<F: ExactField>(p: &SymmetricParams<F>, cap: usize) -> Result<TheoremReport<F>, CaseError> {
    let system = build_special_symmetric(p)?;
    let engine = symmetrize_with_cap(&system, cap)?;
    let mut route = matrix_route(p);
    let mut anomalies = Vec::new();

    let engine_params = match &engine.result {
        RouteVerdict::Symmetric { params } => Some(params.clone()),
        _ => None,
    };
    // An ambiguous selection is settled by the engine, and recorded.
    if let RouteVerdict::Ambiguous { images } = &route.verdict {
        anomalies.push(format!("{} candidate images satisfy the inequalities", images.len()));
        if let Some(ep) = &engine_params {
            if let Some((m, q)) = route.candidates.iter().find(|(_, q)| q == ep) {
                route.matrix = Some(m.clone());
                route.verdict = RouteVerdict::Symmetric { params: q.clone() };
            }
        }
    }
    if let Some(m) = &route.matrix {
        if !m.is_unimodular() {
            anomalies.push(format!("selected matrix has determinant {}", m.determinant()));
        }
    }
    let agree = match (&engine.result, &route.verdict) {
        (RouteVerdict::Symmetric { params: e }, RouteVerdict::Symmetric { params: m }) => e == m,
        (RouteVerdict::Hole, RouteVerdict::Hole) => true,
        (RouteVerdict::Degenerate { .. }, RouteVerdict::Degenerate { .. }) => true,
        _ => false,
    };
    let within_bound = !matches!(engine.result, RouteVerdict::Symmetric { .. }) || engine.generalized_iterations_used <= 3;
    if !within_bound {
        anomalies.push(format!(
            "{} generalized iterations, reduction pattern {}",
            engine.generalized_iterations_used,
            pattern_string(&engine.trace)
        ));
    }
    Ok(TheoremReport {
        params: p.clone(),
        case: route.label,
        counts: route.counts,
        matrix: route.matrix,
        engine_params,
        engine_verdict: engine.result.kind(),
        matrix_verdict: route.verdict.kind(),
        agree,
        generalized_iterations: engine.generalized_iterations_used,
        ordinary_iterations: engine.ordinary_iterations,
        within_bound,
        anomalies,
        trace: engine.trace,
    })
}

/// Run-length form of the reduced pairs, e.g. `a c^2 a`.
pub fn pattern_string<F: ExactField>(t: &InductionTrace<F>) -> String {
    group_generalized(t)
        .iter()
        .map(|g| {
            if g.ordinary_iterations == 1 {
                g.reduced_pair.to_string()
            } else {
                format!("{}^{}", g.reduced_pair, g.ordinary_iterations)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;

    fn params(s: &str) -> SymmetricParams<Rational> {
        s.parse().unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_params(&params("4,10,1,2")).unwrap(), params("10,4,1,2"));
        assert_eq!(normalize_params(&params("10,4,1,12")).unwrap(), params("10,4,1,2"));
        assert_eq!(normalize_params(&params("10,4,1,2")).unwrap(), params("10,4,1,2"));
        assert!(matches!(normalize_params(&params("1,1,1,1")), Err(CaseError::Degenerate(_))));
        assert!(matches!(normalize_params(&params("3,1,1,2")), Err(CaseError::Degenerate(_))));
    }

    #[test]
    fn classifies_first_case() {
        let (label, hole) = classify_case(&params("10,4,1,2")).unwrap();
        assert_eq!((label.index, label.branch, hole), (1, None, false));
        let (label, hole) = classify_case(&params("4,3,2,1/2")).unwrap();
        assert_eq!((label.index, hole), (1, true));
    }

    #[test]
    fn classifies_case_seven() {
        // b + c < u and u + c < a + b - u
        let (label, _) = classify_case(&params("20,2,1,5")).unwrap();
        assert_eq!(label.index, 7);
        assert_eq!(label.branch, Some(Branch::Far));
    }

    #[test]
    fn listed_matrices() {
        let p = params("10,4,1,2");
        let (label, _) = classify_case(&p).unwrap();
        let list = case_matrices(&label, &p).unwrap();
        assert_eq!(list.len(), 4);
        assert_eq!(list[0].row(0), [1, -1, -1, 0]);
        assert_eq!(list[1].row(3), [1, 0, -1, -1]);
        assert_eq!(normalization_closure(&list).len(), 4);

        let label = CaseLabel { index: 3, branch: None };
        let list = case_matrices(&label, &params("5,4,2,3")).unwrap();
        let k = match list[0].provenance {
            Provenance::B { k } => k,
            _ => unreachable!(),
        };
        assert_eq!(list[0].row(0), [1 + k, -1 + k, -1, -2 * k]);
        assert_eq!(list[3].row(3), [1 + k, k, -1, -1 - 2 * k]);
        assert_eq!(normalization_closure(&list).len(), 4);

        let label = CaseLabel { index: 7, branch: Some(Branch::Far) };
        let p = params("20,2,1,5");
        let counts = case_counts(&label, &p).unwrap();
        let (x, y) = (counts.x.unwrap(), counts.y.unwrap());
        let list = case_matrices(&label, &p).unwrap();
        assert_eq!(list.len(), 2);
        assert_eq!(list[0].row(0), [1, -(x + y) - 1, -(x + y) - 1, 0]);
    }

    #[test]
    fn gap_branch_predicts_hole() {
        let label = CaseLabel { index: 7, branch: Some(Branch::Gap) };
        assert!(matches!(case_matrices(&label, &params("9,4,2,7")), Err(CaseError::HoleExpected(_))));
    }

    #[test]
    fn selection_by_inequalities() {
        let p = params("10,4,1,2");
        let (label, _) = classify_case(&p).unwrap();
        let list = case_matrices(&label, &p).unwrap();
        let (m, q) = select_matrix(&list, &p).unwrap();
        assert_eq!(m.entries, list[0].entries);
        assert_eq!(q, params("5,4,1,2"));
        // the swapped matrix gives a' < b'
        assert!(qualifying(&list[2..3], &p).is_empty());
        // negative c'
        let neg = TransitionMatrix::new([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]], Provenance::Other, 0);
        assert!(qualifying(&[neg], &p).is_empty());
        assert_eq!(select_matrix::<Rational>(&[], &p).unwrap_err(), CaseError::NoCandidate);
    }

    #[test]
    fn matrix_route_matches_engine_in_case_one() {
        let (q, label, m) = predict_next(&params("10,4,1,2")).unwrap();
        assert_eq!((q, label.index, m.row(0)), (params("5,4,1,2"), 1, [1, -1, -1, 0]));

        let s = build_special_symmetric(&params("10,4,1,2")).unwrap();
        let out = symmetrize(&s).unwrap();
        assert_eq!(out.result, RouteVerdict::Symmetric { params: params("5,4,1,2") });
        assert_eq!(out.ordinary_iterations, 2);
        assert!(out.generalized_iterations_used <= 3);

        let report = verify_theorem1(&params("10,4,1,2")).unwrap();
        assert!(report.agree && report.within_bound);
    }

    #[test]
    fn holes_on_both_routes() {
        assert!(matches!(predict_next(&params("4,3,2,1/2")), Err(CaseError::HoleExpected(_))));
        let s = build_special_symmetric(&params("4,3,2,1/2")).unwrap();
        assert_eq!(symmetrize(&s).unwrap().result, RouteVerdict::Hole);
        let report = verify_theorem1(&params("4,3,2,1/2")).unwrap();
        assert!(report.agree);
        assert_eq!(report.engine_verdict, "hole");
    }

    #[test]
    fn degenerate_on_both_routes() {
        let report = verify_theorem1(&params("1,1,1,1")).unwrap();
        assert_eq!((report.engine_verdict, report.matrix_verdict), ("degenerate", "degenerate"));
        assert!(report.agree);
    }

    #[test]
    fn report_json_fields() {
        let report = verify_theorem1(&params("10,4,1,2")).unwrap();
        let v = serde_json::to_value(&report).unwrap();
        assert_eq!(v["case"]["index"], 1);
        assert_eq!(v["matrix"][0], serde_json::json!([1, -1, -1, 0]));
        assert_eq!(v["engine_params"]["a"], "5/1");
        assert_eq!(v["agree"], true);
    }
}
