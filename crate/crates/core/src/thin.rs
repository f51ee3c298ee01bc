//! The self-similar example of thin type: the matrix `M`, its eigenvalue
//! `λ ∈ (0, 1)` with positive eigenvector, and a scanner that iterates the
//! symmetrization looking for shrinking supports.

use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::arith::linalg::{apply4, mat_mul4, null_vector, IntMatrix4};
use crate::arith::{build_number_field, ExactField, NumberField, NumberFieldElement, Rational};
use crate::cases::{case_counts, classify_case, predict_next, symmetrize, CaseCounts, CaseLabel, Provenance, RouteVerdict, TransitionMatrix};
use crate::engine::{rauzy_step, Side};
use crate::error::CaseError;
use crate::system::{build_special_symmetric, has_hole, params_of, SymmetricParams};

pub const M_ENTRIES: IntMatrix4 = [[3, 1, -1, -4], [-1, 2, 0, 0], [-2, -2, 1, 4], [3, 2, -1, -5]];

/// Ordinary iterations in one period of the thin example.
pub const THIN_PERIOD: usize = 6;

pub fn matrix_m() -> TransitionMatrix {
    TransitionMatrix::new(M_ENTRIES, Provenance::Other, 0)
}

/// `Q(λ)` for the eigenvalue of `M` in `(0, 1)`.
pub fn thin_field() -> Arc<NumberField> {
    static FIELD: OnceLock<Arc<NumberField>> = OnceLock::new();
    FIELD
        .get_or_init(|| NumberField::new(build_number_field(&M_ENTRIES).expect("M has a unique eigenvalue in (0, 1)")))
        .clone()
}

pub fn thin_lambda() -> NumberFieldElement {
    thin_field().gen()
}

/// The positive eigenvector of `M` for `λ`, scaled so that `a + b + c = 1`.
pub fn thin_eigen_params() -> SymmetricParams<NumberFieldElement> {
    let field = thin_field();
    let lambda = field.gen();
    let rows = M_ENTRIES
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &x)| {
                    let e = field.rational(Rational::from_integer(x));
                    if i == j {
                        e - &lambda
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let v = null_vector(rows).expect("λ is an eigenvalue");
    let total = v[0].clone() + &v[1] + &v[2];
    let inv = total.inverse().expect("a + b + c is nonzero");
    let v: Vec<NumberFieldElement> = v.into_iter().map(|x| x * &inv).collect();
    SymmetricParams::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())
        .expect("eigenvector coordinates are positive")
}

/// `M·v - λ·v` for the given parameters.
pub fn eigen_residual(p: &SymmetricParams<NumberFieldElement>) -> [NumberFieldElement; 4] {
    let v = p.to_array();
    let mv = apply4(&M_ENTRIES, &v);
    let lambda = thin_lambda();
    std::array::from_fn(|i| mv[i].clone() - lambda.clone() * &v[i])
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfSimilarity {
    pub self_similar: bool,
    pub iterations: usize,
    pub final_params: Option<SymmetricParams<NumberFieldElement>>,
    pub diagnostic: Option<String>,
}

/// Runs exactly six ordinary right-side iterations and checks whether the
/// result is `λ` times the start.
pub fn verify_self_similarity(p: &SymmetricParams<NumberFieldElement>) -> SelfSimilarity {
    let fail = |iterations, diagnostic: String| SelfSimilarity {
        self_similar: false,
        iterations,
        final_params: None,
        diagnostic: Some(diagnostic),
    };
    let mut s = match build_special_symmetric(p) {
        Ok(s) => s,
        Err(e) => return fail(0, e.to_string()),
    };
    for i in 0..THIN_PERIOD {
        match rauzy_step(&s, Side::Right) {
            Ok((next, _)) => s = next,
            Err(e) => return fail(i, e.to_string()),
        }
    }
    let q = match params_of(&s) {
        Ok(q) => q,
        Err(e) => return fail(THIN_PERIOD, e.to_string()),
    };
    let target = p.normalized().scaled(&thin_lambda());
    let self_similar = q == target;
    SelfSimilarity {
        self_similar,
        iterations: THIN_PERIOD,
        diagnostic: (!self_similar).then(|| format!("got {q}, expected {target}")),
        final_params: Some(q),
    }
}

/// Rational parameters embedded in `Q(λ)`.
pub fn embed(p: &SymmetricParams<Rational>) -> SymmetricParams<NumberFieldElement> {
    let field = thin_field();
    p.map(|x| field.rational(x.clone()))
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixProduct {
    pub matches: bool,
    pub factors: Vec<TransitionMatrix>,
    pub labels: Vec<CaseLabel>,
    pub product: Option<IntMatrix4>,
    pub diagnostic: Option<String>,
}

/// The matrices selected along one period, in application order.
pub fn period_factors() -> Result<(Vec<TransitionMatrix>, Vec<CaseLabel>), CaseError> {
    let p = thin_eigen_params();
    let (q1, l1, m1) = predict_next(&p)?;
    let (_, l2, m2) = predict_next(&q1)?;
    Ok((vec![m1, m2], vec![l1, l2]))
}

/// Product of `factors` (applied first to last), compared with `target` up to
/// the normalizations of the output.
pub fn product_matches(factors: &[TransitionMatrix], target: &IntMatrix4) -> (bool, Option<IntMatrix4>) {
    let mut acc: IntMatrix4 = std::array::from_fn(|i| std::array::from_fn(|j| (i == j) as i64));
    for f in factors {
        match mat_mul4(&f.entries, &acc) {
            Some(m) => acc = m,
            None => return (false, None),
        }
    }
    let prod = TransitionMatrix::new(acc, Provenance::Other, 0);
    let variants = [prod.clone(), prod.swap_ab(), prod.reflect_u(), prod.reflect_u().swap_ab()];
    (variants.iter().any(|v| v.entries == *target), Some(acc))
}

/// Multiplies the selected case matrices of one period and compares with `M`.
pub fn verify_matrix_product() -> MatrixProduct {
    match period_factors() {
        Ok((factors, labels)) => {
            let (matches, product) = product_matches(&factors, &M_ENTRIES);
            MatrixProduct {
                matches,
                diagnostic: (!matches).then(|| format!("product {product:?}")),
                factors,
                labels,
                product,
            }
        }
        Err(e) => MatrixProduct { matches: false, factors: vec![], labels: vec![], product: None, diagnostic: Some(e.to_string()) },
    }
}

/// Case labels met along `rounds` matrix-route steps from `p`.
pub fn case_route<F: ExactField>(p: &SymmetricParams<F>, rounds: usize) -> Result<Vec<(CaseLabel, CaseCounts)>, CaseError> {
    let mut out = Vec::new();
    let mut p = p.clone();
    for _ in 0..rounds {
        let (label, _) = classify_case(&p)?;
        out.push((label, case_counts(&label, &p)?));
        p = predict_next(&p)?.0;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanStop {
    Hole,
    Epsilon,
    Cap,
    StepCap,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThinReport<F> {
    /// Generalized iterations run.
    pub depth: usize,
    pub rounds: usize,
    /// Support length at the start and after each symmetrize round.
    pub support_lengths: Vec<F>,
    pub hole_found: bool,
    /// Rounds after which the params normalized to unit support repeat exactly.
    pub self_similar_period: Option<usize>,
    pub scale_factor: Option<F>,
    pub stop: ScanStop,
}

impl<F: ExactField> ThinReport<F> {
    /// A thin verdict needs exact periodic self-similarity; a deep scan alone
    /// is inconclusive.
    pub fn is_thin(&self) -> bool {
        self.self_similar_period.is_some() && !self.hole_found
    }
}

/// Repeated symmetrization from `p`, until a hole, a support at most
/// `epsilon` times the initial one, or `max_generalized` generalized iterations.
pub fn thin_scan<F: ExactField>(
    p: &SymmetricParams<F>,
    max_generalized: usize,
    epsilon: &Rational,
) -> Result<ThinReport<F>, CaseError> {
    let start = p.normalized();
    let initial = start.total();
    let threshold = initial.from_rational_like(epsilon) * &initial;
    let unit = |q: &SymmetricParams<F>| -> Result<SymmetricParams<F>, CaseError> {
        let inv = q.total().one_like().checked_div(&q.total())?;
        Ok(q.scaled(&inv))
    };
    let shape = unit(&start)?;
    let mut report = ThinReport {
        depth: 0,
        rounds: 0,
        support_lengths: vec![initial.clone()],
        hole_found: false,
        self_similar_period: None,
        scale_factor: None,
        stop: ScanStop::Cap,
    };
    let mut current = start;
    loop {
        if has_hole(&build_special_symmetric(&current)?) {
            report.hole_found = true;
            report.stop = ScanStop::Hole;
            break;
        }
        if current.total() <= threshold {
            report.stop = ScanStop::Epsilon;
            break;
        }
        if report.depth >= max_generalized {
            report.stop = ScanStop::Cap;
            break;
        }
        let out = symmetrize(&build_special_symmetric(&current)?)?;
        report.depth += out.generalized_iterations_used;
        match out.result {
            RouteVerdict::Symmetric { params } => {
                report.rounds += 1;
                report.support_lengths.push(params.total());
                if report.self_similar_period.is_none() && unit(&params)? == shape {
                    report.self_similar_period = Some(report.rounds);
                    report.scale_factor = Some(params.total().checked_div(&initial)?);
                }
                current = params;
            }
            RouteVerdict::Hole => {
                report.hole_found = true;
                report.stop = ScanStop::Hole;
                break;
            }
            RouteVerdict::StepCap => {
                report.stop = ScanStop::StepCap;
                break;
            }
            RouteVerdict::Degenerate { reason } => return Err(CaseError::Degenerate(reason)),
            RouteVerdict::Ambiguous { .. } => unreachable!("the engine route is never ambiguous"),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_rows_and_trace() {
        let m = matrix_m();
        assert_eq!(m.row(0), [3, 1, -1, -4]);
        assert_eq!(m.row(3), [3, 2, -1, -5]);
        assert_eq!(m.trace(), 1);
    }

    #[test]
    fn eigenvector_is_exact() {
        let p = thin_eigen_params();
        assert!(eigen_residual(&p).iter().all(|x| x.is_zero()));
        assert_eq!((p.a.clone() + &p.b + &p.c).as_rational(), Some(Rational::one()));
        let approx = [0.444, 0.254, 0.302, 0.292];
        for (x, e) in p.to_array().iter().zip(approx) {
            assert!((x.to_f64() - e).abs() < 1e-3);
        }
    }

    #[test]
    fn six_iterations_scale_by_lambda() {
        assert!(verify_self_similarity(&thin_eigen_params()).self_similar);
        let r = verify_self_similarity(&embed(&"10,4,1,2".parse().unwrap()));
        assert!(!r.self_similar);
    }

    #[test]
    fn product_of_period_matrices() {
        let r = verify_matrix_product();
        assert!(r.matches, "{:?}", r.diagnostic);
        let mut bad = r.factors.clone();
        bad[0].entries[1][1] += 1;
        assert!(!product_matches(&bad, &M_ENTRIES).0);
    }

    #[test]
    fn scan_stops_on_epsilon_and_hole() {
        let r = thin_scan(&"10,4,1,2".parse::<SymmetricParams<Rational>>().unwrap(), 10, &Rational::one()).unwrap();
        assert_eq!((r.depth, r.stop), (0, ScanStop::Epsilon));
        let r = thin_scan(&"4,3,2,1/2".parse::<SymmetricParams<Rational>>().unwrap(), 10, &Rational::zero()).unwrap();
        assert!(r.hole_found);
        assert_eq!(r.depth, 0);
    }
}
