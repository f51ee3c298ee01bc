use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use iis_core::arith::build_number_field;
use iis_core::cases::{
    case_counts, case_matrices, normalization_closure, normalize_params, pattern_string, symmetrize_with_cap,
};
use iis_core::engine::{group_generalized, run_induction, StopWhen};
use iis_core::sampling::verify_samples;
use iis_core::system::{orbit as orbit_of, params_of};
use iis_core::thin::{
    case_route, eigen_residual, thin_eigen_params, thin_scan, verify_matrix_product, verify_self_similarity, M_ENTRIES,
};
use iis_core::{
    build_special_symmetric, classify_case, CaseError, ExactField, IISystem, InductionTrace, Rational, RouteVerdict, Side,
    SymmetricParams, SystemError,
};

use crate::input::{parse_params, parse_rational, read_system, read_trace, with_params, AnyTrace};
use crate::render::{ascii, frames, svg};
use crate::{CliError, Output, RenderFormat, SideArg, Until, SCHEMA_VERSION};

fn case_err(e: CaseError) -> CliError {
    match e {
        CaseError::System(SystemError::NonPositiveParameter(_) | SystemError::ShiftTooLarge) => CliError::Usage(e.to_string()),
        _ => CliError::Degenerate(e.to_string()),
    }
}

fn system_err(e: SystemError) -> CliError {
    CliError::Usage(e.to_string())
}

fn emit_json(out: &Output, v: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(v).expect("serializable");
    text.push('\n');
    out.emit(&text)
}

fn approx<F: ExactField>(p: &SymmetricParams<F>, digits: usize) -> Vec<String> {
    p.to_array().iter().map(|x| x.to_decimal(digits)).collect()
}

fn envelope(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Value::Object(m), Value::Object(b)) = (&mut v, body) {
        m.extend(b);
    }
    v
}

pub fn classify(params: &str, out: &Output, digits: usize) -> Result<(), CliError> {
    let body = with_params!(parse_params(params)?, p => classify_json(&p, digits)?);
    emit_json(out, &envelope("classify", body))
}

fn classify_json<F: ExactField + Serialize>(p: &SymmetricParams<F>, digits: usize) -> Result<Value, CliError> {
    let normalized = normalize_params(p).map_err(case_err)?;
    let (label, hole) = classify_case(p).map_err(case_err)?;
    let counts = case_counts(&label, p).map_err(case_err)?;
    let candidates = match case_matrices(&label, p) {
        Ok(list) => normalization_closure(&list),
        Err(CaseError::HoleExpected(_)) => Vec::new(),
        Err(e) => return Err(case_err(e)),
    };
    Ok(json!({
        "params": p,
        "normalized": normalized,
        "approx": approx(&normalized, digits),
        "case": label,
        "counts": counts,
        "hole": hole,
        "candidates": candidates,
    }))
}

fn side_of(side: SideArg) -> Side {
    match side {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    }
}

fn trace_json<F: ExactField + Serialize>(t: &InductionTrace<F>, side: Side) -> Value {
    json!({
        "side": side,
        "ordinary_iterations": t.ordinary_iterations(),
        "generalized": group_generalized(t),
        "pattern": pattern_string(t),
        "trace": t,
    })
}

pub fn induce(
    params: Option<&str>,
    system: Option<&Path>,
    side: SideArg,
    steps: usize,
    until: Until,
    out: &Output,
) -> Result<(), CliError> {
    let side = side_of(side);
    let stop = match until {
        Until::Symmetric => StopWhen::Symmetric,
        Until::Hole => StopWhen::HoleOnly,
    };
    let body = match (params, system) {
        (_, Some(path)) => trace_json(&run_induction(&read_system(path)?, side, steps, stop), side),
        (Some(s), None) => with_params!(parse_params(s)?, p => {
            let sys = build_special_symmetric(&p).map_err(system_err)?;
            trace_json(&run_induction(&sys, side, steps, stop), side)
        }),
        (None, None) => return Err(CliError::Usage("either --params or --system is required".into())),
    };
    emit_json(out, &envelope("induce", body))
}

pub fn symmetrize(params: &str, cap: usize, out: &Output, digits: usize) -> Result<(), CliError> {
    let (body, degenerate) = with_params!(parse_params(params)?, p => symmetrize_json(&p, cap, digits)?);
    emit_json(out, &envelope("symmetrize", body))?;
    match degenerate {
        Some(reason) => Err(CliError::Degenerate(reason)),
        None => Ok(()),
    }
}

fn symmetrize_json<F: ExactField + Serialize>(
    p: &SymmetricParams<F>,
    cap: usize,
    digits: usize,
) -> Result<(Value, Option<String>), CliError> {
    let sys = build_special_symmetric(p).map_err(system_err)?;
    let outcome = symmetrize_with_cap(&sys, cap).map_err(case_err)?;
    let case = classify_case(p).ok().map(|(label, _)| label);
    let approx_result = match &outcome.result {
        RouteVerdict::Symmetric { params } => Some(approx(params, digits)),
        _ => None,
    };
    let degenerate = match &outcome.result {
        RouteVerdict::Degenerate { reason } => Some(reason.clone()),
        _ => None,
    };
    let body = json!({
        "params": p,
        "case": case,
        "result": outcome.result,
        "approx": approx_result,
        "generalized_iterations_used": outcome.generalized_iterations_used,
        "ordinary_iterations": outcome.ordinary_iterations,
        "pattern": pattern_string(&outcome.trace),
        "matrix_used": outcome.matrix_used,
    });
    Ok((body, degenerate))
}

fn thin_json(digits: usize) -> (Value, bool) {
    let root = build_number_field(&M_ENTRIES).expect("M has an eigenvalue in (0, 1)");
    let fine = root.refine_to_width(&Rational::new(1, 1_000_000_000_000i64).unwrap());
    let p = thin_eigen_params();
    let residual_zero = eigen_residual(&p).iter().all(|x| x.is_zero());
    let similarity = verify_self_similarity(&p);
    let product = verify_matrix_product();
    let route = case_route(&p, 3);
    let route_ok = route
        .as_ref()
        .map(|r| r.iter().map(|(l, _)| l.index).collect::<Vec<_>>() == [4, 2, 4] && r[0].1.k == Some(2))
        .unwrap_or(false);
    let pass = residual_zero && similarity.self_similar && product.matches && route_ok;
    let route_json = match &route {
        Ok(r) => json!(r.iter().map(|(l, c)| json!({ "case": l, "counts": c })).collect::<Vec<_>>()),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let v = json!({
        "lambda": {
            "poly": root.poly(),
            "interval": [fine.lo(), fine.hi()],
            "approx": fine.midpoint().to_decimal(digits),
        },
        "params": p,
        "approx": approx(&p, digits),
        "residual_zero": residual_zero,
        "self_similarity": similarity,
        "matrix_product": {
            "matches": product.matches,
            "cases": product.labels,
            "factors": product.factors.iter().map(|m| m.entries).collect::<Vec<_>>(),
            "product": product.product,
            "diagnostic": product.diagnostic,
        },
        "case_route": route_json,
        "pass": pass,
    });
    (v, pass)
}

pub fn thin_check(out: &Output, digits: usize) -> Result<(), CliError> {
    let (v, pass) = thin_json(digits);
    emit_json(out, &envelope("thin-check", v))?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Mismatch("the thin example does not check out".into()))
    }
}

pub fn orbit(params: Option<&str>, system: Option<&Path>, point: &str, max: usize, out: &Output) -> Result<(), CliError> {
    let x = parse_rational(point)?;
    let body = match (params, system) {
        (_, Some(path)) => orbit_json(&read_system(path)?, &x, max)?,
        (Some(s), None) => with_params!(parse_params(s)?, p => {
            let sys = build_special_symmetric(&p).map_err(system_err)?;
            orbit_json(&sys, &x, max)?
        }),
        (None, None) => return Err(CliError::Usage("either --params or --system is required".into())),
    };
    emit_json(out, &envelope("orbit", body))
}

fn orbit_json<F: ExactField + Serialize>(s: &IISystem<F>, x: &Rational, max: usize) -> Result<Value, CliError> {
    let point = s.support().lo().from_rational_like(x);
    let o = orbit_of(s, &point, max).map_err(system_err)?;
    Ok(json!({ "point": point, "status": o.status, "size": o.points.len(), "points": o.points }))
}

fn draw<F: ExactField>(t: &InductionTrace<F>, format: RenderFormat, title: &str) -> Result<String, CliError> {
    let rows = frames(t).map_err(|e| CliError::Usage(format!("malformed trace: {e}")))?;
    Ok(match format {
        RenderFormat::Svg => svg(&rows, title),
        RenderFormat::Ascii => ascii(&rows),
    })
}

pub fn render(
    params: Option<&str>,
    trace: Option<&Path>,
    steps: Option<usize>,
    format: RenderFormat,
    out: &Output,
) -> Result<(), CliError> {
    let text = match (params, trace) {
        (_, Some(path)) => match read_trace(path)? {
            AnyTrace::Rational(t) => draw(&t, format, "Rauzy induction")?,
            AnyTrace::Thin(t) => draw(&t, format, "Rauzy induction")?,
        },
        (Some(s), None) => {
            let title = format!("Rauzy induction of {s}");
            let (cap, stop) = match steps {
                Some(n) => (n, StopWhen::HoleOnly),
                None => (10_000, StopWhen::Symmetric),
            };
            with_params!(parse_params(s)?, p => {
                let sys = build_special_symmetric(&p).map_err(system_err)?;
                draw(&run_induction(&sys, Side::Right, cap, stop), format, &title)?
            })
        }
        (None, None) => return Err(CliError::Usage("either --params or --trace is required".into())),
    };
    out.emit(&text)
}

#[derive(Default, Serialize)]
struct CaseTally {
    total: usize,
    agree: usize,
    symmetric: usize,
    hole: usize,
}

pub fn verify(
    samples: Option<usize>,
    seed: u64,
    height: i64,
    thin: bool,
    out: &Output,
    digits: usize,
) -> Result<(), CliError> {
    if height < 1 {
        return Err(CliError::Usage("--height must be positive".into()));
    }
    let count = samples.unwrap_or(if thin { 0 } else { 1000 });
    if count == 0 && !thin {
        eprintln!("warning: no samples requested; nothing was checked");
    }
    let run = verify_samples(seed, count, height);
    let mut by_case: BTreeMap<String, CaseTally> = BTreeMap::new();
    let mut mismatches = Vec::new();
    let mut over_bound = 0;
    for r in &run.reports {
        let key = r.case.map(|c| c.to_string()).unwrap_or_else(|| "unclassified".into());
        let tally = by_case.entry(key).or_default();
        tally.total += 1;
        tally.agree += usize::from(r.agree);
        tally.symmetric += usize::from(r.engine_verdict == "symmetric");
        tally.hole += usize::from(r.engine_verdict == "hole");
        over_bound += usize::from(!r.within_bound);
        if !r.agree || !r.within_bound {
            mismatches.push(json!({
                "params": r.params,
                "case": r.case,
                "engine_verdict": r.engine_verdict,
                "matrix_verdict": r.matrix_verdict,
                "engine_params": r.engine_params,
                "generalized_iterations": r.generalized_iterations,
                "pattern": pattern_string(&r.trace),
                "anomalies": r.anomalies,
            }));
        }
    }
    let agree = run.reports.iter().filter(|r| r.agree).count();
    let (thin_value, thin_pass) = if thin || count > 0 {
        let (v, pass) = thin_json(digits);
        (v, pass)
    } else {
        (Value::Null, true)
    };
    let pass = mismatches.is_empty() && thin_pass;
    let body = json!({
        "seed": seed,
        "height": height,
        "samples": run.reports.len(),
        "rejections": run.rejections,
        "agree": agree,
        "disagree": run.reports.len() - agree,
        "over_bound": over_bound,
        "by_case": by_case,
        "mismatches": mismatches,
        "thin": thin_value,
        "pass": pass,
    });
    emit_json(out, &envelope("verify", body))?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Mismatch(format!(
            "{} of {} samples disagree, {over_bound} exceed three generalized iterations, thin example {}",
            run.reports.len() - agree,
            run.reports.len(),
            if thin_pass { "ok" } else { "failed" }
        )))
    }
}

pub fn scan(params: &str, max_generalized: usize, epsilon: &str, out: &Output, digits: usize) -> Result<(), CliError> {
    let eps = parse_rational(epsilon)?;
    if eps.is_negative() {
        return Err(CliError::Usage("--epsilon must be non-negative".into()));
    }
    let body = with_params!(parse_params(params)?, p => {
        let report = thin_scan(&p, max_generalized, &eps).map_err(case_err)?;
        let lengths: Vec<String> = report.support_lengths.iter().map(|x| x.to_decimal(digits)).collect();
        let start = params_of(&build_special_symmetric(&p).map_err(system_err)?).map_err(system_err)?;
        json!({
            "params": start,
            "report": report,
            "thin": report.is_thin(),
            "approx_support_lengths": lengths,
        })
    });
    emit_json(out, &envelope("scan", body))
}
