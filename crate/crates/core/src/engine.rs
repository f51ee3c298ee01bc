//! One-sided Rauzy induction: transmissions, reductions, ordinary iterations
//! and recorded traces.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::arith::ExactField;
use crate::error::{EngineError, SystemError};
use crate::system::{critical_points, has_hole, is_balanced, is_special, IISystem, IdentificationPair, Interval, Member, PairLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
#[serde(bound(deserialize = "F: ExactField + serde::de::DeserializeOwned"))]
pub enum StepRecord<F> {
    Transmission {
        side: Side,
        moved_pair: PairLabel,
        moved_from: Interval<F>,
        moved_to: Interval<F>,
        along_pair: PairLabel,
        support_after: Interval<F>,
    },
    Reduction {
        side: Side,
        moved_pair: PairLabel,
        cut_point: F,
        support_after: Interval<F>,
    },
}

impl<F> StepRecord<F> {
    pub fn side(&self) -> Side {
        match self {
            StepRecord::Transmission { side, .. } | StepRecord::Reduction { side, .. } => *side,
        }
    }

    pub fn moved_pair(&self) -> PairLabel {
        match self {
            StepRecord::Transmission { moved_pair, .. } | StepRecord::Reduction { moved_pair, .. } => *moved_pair,
        }
    }

    pub fn support_after(&self) -> &Interval<F> {
        match self {
            StepRecord::Transmission { support_after, .. } | StepRecord::Reduction { support_after, .. } => {
                support_after
            }
        }
    }

    pub fn is_reduction(&self) -> bool {
        matches!(self, StepRecord::Reduction { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Hole,
    Symmetric,
    StepCap,
    Degenerate,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Hole => "hole",
            Outcome::Symmetric => "symmetric",
            Outcome::StepCap => "step_cap",
            Outcome::Degenerate => "degenerate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopWhen {
    /// Stop after the first ordinary iteration that yields a special symmetric system.
    Symmetric,
    /// Run until a hole or the step cap.
    HoleOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(deserialize = "F: ExactField + serde::de::DeserializeOwned"))]
pub struct InductionTrace<F> {
    pub initial: IISystem<F>,
    pub steps: Vec<StepRecord<F>>,
    #[serde(rename = "final")]
    pub final_system: IISystem<F>,
    pub outcome: Outcome,
    /// Reason for a degenerate outcome.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl<F: ExactField> InductionTrace<F> {
    pub fn ordinary_iterations(&self) -> usize {
        self.steps.iter().filter(|s| s.is_reduction()).count()
    }

    /// Pairs hit by successive reductions.
    pub fn reduction_pattern(&self) -> Vec<PairLabel> {
        self.steps.iter().filter(|s| s.is_reduction()).map(|s| s.moved_pair()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralizedIteration {
    pub reduced_pair: PairLabel,
    pub step_span: Range<usize>,
    pub ordinary_iterations: usize,
}

fn degenerate(why: impl Into<String>) -> EngineError {
    EngineError::Degenerate(why.into())
}

/// Moves one interval of a pair by the translation taking the `along` member
/// that contains it onto its partner.
pub fn transmission<F: ExactField>(
    s: &IISystem<F>,
    moved: (PairLabel, Member),
    along: (PairLabel, Member),
) -> Result<IISystem<F>, EngineError> {
    let unknown = |l: PairLabel| SystemError::UnknownLabel(l.to_string());
    let mi = s.pair_index(moved.0).ok_or_else(|| unknown(moved.0))?;
    let carrier = s.pair(along.0).ok_or_else(|| unknown(along.0))?;
    let moving = s.pairs()[mi].member(moved.1);
    let from = carrier.member(along.1);
    if !from.contains(moving) {
        return Err(EngineError::NotContained { moved: moving.to_string(), along: from.to_string() });
    }
    let delta = carrier.member(along.1.other()).lo().clone() - from.lo();
    let image = moving.shifted(&delta);
    let kept = s.pairs()[mi].member(moved.1.other()).clone();
    let pair = IdentificationPair::new(image, kept, moved.0)?;
    Ok(s.with_pair(mi, pair))
}

/// Intervals whose right end is the right end of the support.
fn ending_at_b<F: ExactField>(s: &IISystem<F>) -> Vec<(usize, Member)> {
    let b = s.support().hi();
    s.all_intervals().filter(|(_, _, iv)| iv.hi() == b).map(|(i, m, _)| (i, m)).collect()
}

/// The transmission forced when two or more intervals end at `B`: the
/// shortest of them moves along the strictly longest one.
fn boundary_transmission<F: ExactField>(
    s: &IISystem<F>,
    ending: &[(usize, Member)],
) -> Result<((usize, Member), (usize, Member)), EngineError> {
    let mut by_len: Vec<(F, usize, Member)> =
        ending.iter().map(|&(i, m)| (s.pairs()[i].member(m).length(), i, m)).collect();
    by_len.sort_by(|x, y| x.0.cmp(&y.0));
    if by_len.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(degenerate("two intervals ending at the boundary have equal length"));
    }
    let (_, ci, cm) = by_len.last().unwrap();
    let (_, mi, mm) = &by_len[0];
    if mi == ci {
        return Err(degenerate("both intervals of one pair end at the boundary"));
    }
    Ok(((*mi, *mm), (*ci, *cm)))
}

fn right_transmission<F: ExactField>(
    s: &IISystem<F>,
    allow_interior: bool,
) -> Result<(IISystem<F>, StepRecord<F>), EngineError> {
    let ending = ending_at_b(s);
    let (moved, along) = if ending.len() >= 2 {
        boundary_transmission(s, &ending)?
    } else if allow_interior && ending.len() == 1 {
        let (ci, cm) = ending[0];
        let carrier = s.pairs()[ci].member(cm);
        // the strictly contained interval reaching furthest right
        let best = s
            .all_intervals()
            .filter(|(i, _, iv)| *i != ci && carrier.contains(iv) && *iv != carrier)
            .max_by(|x, y| x.2.hi().cmp(y.2.hi()).then_with(|| y.2.lo().cmp(x.2.lo())))
            .map(|(i, m, _)| (i, m))
            .ok_or(EngineError::NoAdmissibleTransmission("right"))?;
        (best, (ci, cm))
    } else {
        return Err(EngineError::NoAdmissibleTransmission("right"));
    };
    let label = s.pairs()[moved.0].label();
    let along_label = s.pairs()[along.0].label();
    let moved_from = s.pairs()[moved.0].member(moved.1).clone();
    let next = transmission(s, (label, moved.1), (along_label, along.1))?;
    let kept = s.pairs()[moved.0].member(moved.1.other());
    let p = next.pair(label).unwrap();
    let moved_to = if p.left() == kept { p.right() } else { p.left() }.clone();
    let record = StepRecord::Transmission {
        side: Side::Right,
        moved_pair: label,
        moved_from,
        moved_to,
        along_pair: along_label,
        support_after: next.support().clone(),
    };
    Ok((next, record))
}

fn right_reduction<F: ExactField>(s: &IISystem<F>) -> Result<(IISystem<F>, StepRecord<F>), EngineError> {
    let ending = ending_at_b(s);
    let (ci, cm) = match ending.len() {
        0 => return Err(EngineError::Hole),
        1 => ending[0],
        n => return Err(EngineError::BoundaryCoveredTwice(n)),
    };
    let pair = &s.pairs()[ci];
    let carrier = pair.member(cm);
    let w = critical_points(s)
        .into_iter()
        .filter(|x| carrier.interior_contains(x))
        .next_back()
        .ok_or_else(|| degenerate(format!("no critical point inside {carrier}")))?;
    let cut = s.support().hi().clone() - &w;
    let partner = pair.member(cm.other());
    let new_carrier = carrier.with_hi(w.clone());
    let new_partner = partner.with_hi(partner.hi().clone() - &cut);
    let label = pair.label();
    let new_pair = IdentificationPair::new(new_carrier, new_partner, label)?;
    let support = s.support().with_hi(w.clone());
    let next = IISystem::new(support, s.with_pair(ci, new_pair).pairs().to_vec())?;
    let record = StepRecord::Reduction {
        side: Side::Right,
        moved_pair: label,
        cut_point: w,
        support_after: next.support().clone(),
    };
    Ok((next, record))
}

fn reflect_record<F: ExactField>(r: StepRecord<F>, axis: &F) -> StepRecord<F> {
    match r {
        StepRecord::Transmission { moved_pair, moved_from, moved_to, along_pair, support_after, .. } => {
            StepRecord::Transmission {
                side: Side::Left,
                moved_pair,
                moved_from: moved_from.reflected(axis),
                moved_to: moved_to.reflected(axis),
                along_pair,
                support_after: support_after.reflected(axis),
            }
        }
        StepRecord::Reduction { moved_pair, cut_point, support_after, .. } => StepRecord::Reduction {
            side: Side::Left,
            moved_pair,
            cut_point: axis.clone() - &cut_point,
            support_after: support_after.reflected(axis),
        },
    }
}

/// Runs a right-side operation, conjugating by the reflection for the left side.
fn sided<F: ExactField, T>(
    s: &IISystem<F>,
    side: Side,
    op: impl FnOnce(&IISystem<F>) -> Result<(IISystem<F>, T), EngineError>,
    fix: impl FnOnce(T, &F) -> T,
) -> Result<(IISystem<F>, T), EngineError> {
    match side {
        Side::Right => op(s),
        Side::Left => {
            let axis = s.support().lo().clone() + s.support().hi();
            let (out, extra) = op(&reflect_about(s, &axis))?;
            Ok((reflect_about(&out, &axis), fix(extra, &axis)))
        }
    }
}

/// Image of a system under `x ↦ axis - x`.
fn reflect_about<F: ExactField>(s: &IISystem<F>, axis: &F) -> IISystem<F> {
    let pairs = s
        .pairs()
        .iter()
        .map(|p| IdentificationPair::new(p.right().reflected(axis), p.left().reflected(axis), p.label()).unwrap())
        .collect();
    IISystem::new(s.support().reflected(axis), pairs).expect("reflection preserves containment")
}

/// One admissible transmission on `side`: the shortest interval ending at the
/// boundary moves along the longest one, or, with a single interval at the
/// boundary, the contained interval reaching closest to it.
pub fn admissible_transmission<F: ExactField>(
    s: &IISystem<F>,
    side: Side,
) -> Result<(IISystem<F>, StepRecord<F>), EngineError> {
    sided(s, side, |x| right_transmission(x, true), reflect_record).map_err(|e| match e {
        EngineError::NoAdmissibleTransmission(_) => EngineError::NoAdmissibleTransmission(side_name(side)),
        e => e,
    })
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

/// Cuts the support at the extreme critical point interior to the unique
/// interval covering the boundary on `side`.
pub fn reduction<F: ExactField>(s: &IISystem<F>, side: Side) -> Result<(IISystem<F>, StepRecord<F>), EngineError> {
    sided(s, side, right_reduction, reflect_record)
}

/// One ordinary iteration: boundary transmissions until a single interval
/// covers the boundary, then one reduction.
pub fn rauzy_step<F: ExactField>(s: &IISystem<F>, side: Side) -> Result<(IISystem<F>, Vec<StepRecord<F>>), EngineError> {
    if has_hole(s) {
        return Err(EngineError::Hole);
    }
    sided(
        s,
        side,
        |x| {
            let mut cur = x.clone();
            let mut records = Vec::new();
            while ending_at_b(&cur).len() >= 2 {
                let (next, rec) = right_transmission(&cur, false)?;
                cur = next;
                records.push(rec);
            }
            let (next, rec) = right_reduction(&cur)?;
            records.push(rec);
            Ok((next, records))
        },
        |records, axis| records.into_iter().map(|r| reflect_record(r, axis)).collect(),
    )
}

/// Iterates [`rauzy_step`], checking for a hole before each ordinary iteration.
pub fn run_induction<F: ExactField>(
    s: &IISystem<F>,
    side: Side,
    max_ordinary_steps: usize,
    stop_when: StopWhen,
) -> InductionTrace<F> {
    let mut cur = s.clone();
    let mut steps = Vec::new();
    let mut done = 0;
    let finish = |cur: IISystem<F>, steps, outcome, note| InductionTrace {
        initial: s.clone(),
        steps,
        final_system: cur,
        outcome,
        note,
    };
    loop {
        if has_hole(&cur) {
            return finish(cur, steps, Outcome::Hole, None);
        }
        if done == max_ordinary_steps {
            return finish(cur, steps, Outcome::StepCap, None);
        }
        match rauzy_step(&cur, side) {
            Ok((next, records)) => {
                cur = next;
                steps.extend(records);
                done += 1;
            }
            Err(EngineError::Hole) => return finish(cur, steps, Outcome::Hole, None),
            Err(e) => return finish(cur, steps, Outcome::Degenerate, Some(e.to_string())),
        }
        if stop_when == StopWhen::Symmetric && is_special(&cur) {
            return finish(cur, steps, Outcome::Symmetric, None);
        }
    }
}

/// Maximal runs of ordinary iterations whose reductions act on the same pair.
pub fn group_generalized<F>(t: &InductionTrace<F>) -> Vec<GeneralizedIteration> {
    let mut groups: Vec<GeneralizedIteration> = Vec::new();
    let mut start = 0;
    for (i, step) in t.steps.iter().enumerate() {
        if let StepRecord::Reduction { moved_pair, .. } = step {
            match groups.last_mut() {
                Some(g) if g.reduced_pair == *moved_pair => {
                    g.step_span.end = i + 1;
                    g.ordinary_iterations += 1;
                }
                _ => groups.push(GeneralizedIteration {
                    reduced_pair: *moved_pair,
                    step_span: start..i + 1,
                    ordinary_iterations: 1,
                }),
            }
            start = i + 1;
        }
    }
    groups
}

/// Re-applies recorded steps, checking every record, and returns all
/// intermediate systems (the initial one first).
pub fn replay<F: ExactField>(initial: &IISystem<F>, steps: &[StepRecord<F>]) -> Result<Vec<IISystem<F>>, EngineError> {
    let mut states = vec![initial.clone()];
    for (index, step) in steps.iter().enumerate() {
        let cur = states.last().unwrap();
        let mismatch = |reason: String| EngineError::ReplayMismatch { index, reason };
        let next = match step {
            StepRecord::Transmission { moved_pair, moved_from, moved_to, along_pair, .. } => {
                let pair = cur.pair(*moved_pair).ok_or_else(|| mismatch(format!("no pair {moved_pair}")))?;
                let member = [Member::Left, Member::Right]
                    .into_iter()
                    .find(|m| pair.member(*m) == moved_from)
                    .ok_or_else(|| mismatch(format!("pair {moved_pair} has no interval {moved_from}")))?;
                // the carrier member is whichever one yields the recorded image
                [Member::Right, Member::Left]
                    .into_iter()
                    .filter_map(|m| transmission(cur, (*moved_pair, member), (*along_pair, m)).ok())
                    .find(|next| {
                        let p = next.pair(*moved_pair).unwrap();
                        p.left() == moved_to || p.right() == moved_to
                    })
                    .ok_or_else(|| mismatch(format!("transmission did not produce {moved_to}")))?
            }
            StepRecord::Reduction { side, moved_pair, cut_point, .. } => {
                let (next, rec) = reduction(cur, *side)?;
                match rec {
                    StepRecord::Reduction { moved_pair: p, cut_point: w, .. } if p == *moved_pair && &w == cut_point => {}
                    _ => return Err(mismatch("reduction cut elsewhere".to_string())),
                }
                next
            }
        };
        if next.support() != step.support_after() {
            return Err(mismatch(format!("support {} instead of {}", next.support(), step.support_after())));
        }
        states.push(next);
    }
    Ok(states)
}

/// Whether replaying the trace reproduces its final system exactly.
pub fn replay_matches<F: ExactField>(t: &InductionTrace<F>) -> bool {
    replay(&t.initial, &t.steps).is_ok_and(|states| states.last() == Some(&t.final_system))
}

/// Replays the trace and checks that every state is balanced and every
/// reduction strictly shortens the support.
pub fn check_trace_invariants<F: ExactField>(t: &InductionTrace<F>) -> Result<(), String> {
    let states = replay(&t.initial, &t.steps).map_err(|e| e.to_string())?;
    if states.last() != Some(&t.final_system) {
        return Err("replay does not end at the recorded final system".into());
    }
    for (i, (step, pair)) in t.steps.iter().zip(states.windows(2)).enumerate() {
        if !is_balanced(&pair[1]) {
            return Err(format!("state after step {i} is not balanced"));
        }
        if step.is_reduction() && pair[1].support().length() >= pair[0].support().length() {
            return Err(format!("reduction at step {i} does not shorten the support"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use crate::system::{build_special_symmetric, is_balanced, is_symmetric, SymmetricParams};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn iv(lo: &str, hi: &str) -> Interval<Rational> {
        Interval::new(q(lo), q(hi)).unwrap()
    }

    fn special(p: &str) -> IISystem<Rational> {
        build_special_symmetric(&p.parse::<SymmetricParams<Rational>>().unwrap()).unwrap()
    }

    #[test]
    fn transmission_shifts_by_carrier_offset() {
        let s = special("10,4,1,2");
        let t = transmission(&s, (PairLabel::B, Member::Right), (PairLabel::A, Member::Right)).unwrap();
        let b = t.pair(PairLabel::B).unwrap();
        assert_eq!((b.left(), b.right()), (&iv("0", "4"), &iv("6", "10")));
        assert_eq!(t.support(), s.support());

        let err = transmission(&s, (PairLabel::C, Member::Left), (PairLabel::B, Member::Right));
        assert!(matches!(err, Err(EngineError::NotContained { .. })));
    }

    #[test]
    fn transmission_along_identity_pair() {
        let fixed = IdentificationPair::new(iv("0", "2"), iv("0", "2"), PairLabel::Index(1)).unwrap();
        let other = IdentificationPair::new(iv("1/2", "1"), iv("1", "3/2"), PairLabel::Index(2)).unwrap();
        let s = IISystem::new(iv("0", "2"), vec![fixed, other]).unwrap();
        let t = transmission(&s, (PairLabel::Index(2), Member::Left), (PairLabel::Index(1), Member::Left)).unwrap();
        assert_eq!(t, s);
    }

    #[test]
    fn admissible_transmissions_on_the_right() {
        let s = special("10,4,1,2");
        let (s1, r1) = admissible_transmission(&s, Side::Right).unwrap();
        assert_eq!(s1.pair(PairLabel::B).unwrap().right(), &iv("6", "10"));
        assert!(matches!(r1, StepRecord::Transmission { moved_pair: PairLabel::B, along_pair: PairLabel::A, .. }));
        let (s2, _) = admissible_transmission(&s1, Side::Right).unwrap();
        assert_eq!(s2.pair(PairLabel::C).unwrap().right(), &iv("7", "8"));

        let (s3, rec) = reduction(&s2, Side::Right).unwrap();
        assert_eq!(s3.support(), &iv("0", "10"));
        let a = s3.pair(PairLabel::A).unwrap();
        assert_eq!((a.left(), a.right()), (&iv("0", "5"), &iv("5", "10")));
        assert!(matches!(rec, StepRecord::Reduction { cut_point, .. } if cut_point == q("10")));
        assert!(is_balanced(&s3));

        let single = IdentificationPair::new(iv("0", "1"), iv("2", "3"), PairLabel::Index(1)).unwrap();
        let lonely = IISystem::new(iv("0", "3"), vec![single]).unwrap();
        assert_eq!(
            admissible_transmission(&lonely, Side::Right).unwrap_err(),
            EngineError::NoAdmissibleTransmission("right")
        );
        assert!(matches!(reduction(&lonely, Side::Right), Err(EngineError::Degenerate(_))));
    }

    #[test]
    fn ordinary_iterations() {
        let s = special("10,4,1,2");
        let (s1, recs) = rauzy_step(&s, Side::Right).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(s1.support(), &iv("0", "13"));
        assert!(!is_symmetric(&s1));
        let (s2, _) = rauzy_step(&s1, Side::Right).unwrap();
        assert_eq!(s2.support(), &iv("0", "10"));
        assert!(is_special(&s2));
        assert!(matches!(rauzy_step(&special("4,3,2,1/2"), Side::Right), Err(EngineError::Hole)));
    }

    #[test]
    fn left_side_mirrors_right_side() {
        let s = special("10,4,1,2");
        let (l, lrec) = rauzy_step(&s, Side::Left).unwrap();
        let (r, _) = rauzy_step(&s, Side::Right).unwrap();
        assert_eq!(l.support(), &iv("2", "15"));
        let axis = q("15");
        for (pl, pr) in l.pairs().iter().zip(r.pairs()) {
            assert_eq!(pl.left(), &pr.right().reflected(&axis));
        }
        assert!(lrec.iter().all(|r| r.side() == Side::Left));
        assert_eq!(replay(&s, &lrec).unwrap().last(), Some(&l));
    }

    #[test]
    fn induction_outcomes() {
        let t = run_induction(&special("10,4,1,2"), Side::Right, 100, StopWhen::Symmetric);
        assert_eq!(t.outcome, Outcome::Symmetric);
        assert_eq!(t.ordinary_iterations(), 2);
        assert!(group_generalized(&t).len() <= 3);
        assert!(replay_matches(&t));

        let t = run_induction(&special("4,3,2,1/2"), Side::Right, 100, StopWhen::Symmetric);
        assert_eq!((t.outcome, t.steps.len()), (Outcome::Hole, 0));

        let t = run_induction(&special("10,4,1,2"), Side::Right, 0, StopWhen::Symmetric);
        assert_eq!((t.outcome, t.steps.len()), (Outcome::StepCap, 0));
    }

    #[test]
    fn grouping_by_reduced_pair() {
        let s = special("10,4,1,2");
        let red = |p| StepRecord::Reduction {
            side: Side::Right,
            moved_pair: p,
            cut_point: q("1"),
            support_after: iv("0", "1"),
        };
        let tr = StepRecord::Transmission {
            side: Side::Right,
            moved_pair: PairLabel::B,
            moved_from: iv("0", "1"),
            moved_to: iv("0", "1"),
            along_pair: PairLabel::A,
            support_after: iv("0", "1"),
        };
        use PairLabel::{A, C};
        let steps = vec![red(A), tr.clone(), red(A), red(C), tr, red(C), red(C), red(A)];
        let t = InductionTrace { initial: s.clone(), steps, final_system: s.clone(), outcome: Outcome::StepCap, note: None };
        let g = group_generalized(&t);
        let summary: Vec<_> = g.iter().map(|g| (g.reduced_pair, g.ordinary_iterations, g.step_span.clone())).collect();
        assert_eq!(summary, vec![(A, 2, 0..3), (C, 3, 3..7), (A, 1, 7..8)]);

        let empty = InductionTrace { initial: s.clone(), steps: vec![], final_system: s, outcome: Outcome::StepCap, note: None };
        assert!(group_generalized(&empty).is_empty());
    }

    #[test]
    fn replay_detects_tampering() {
        let mut t = run_induction(&special("10,4,1,2"), Side::Right, 100, StopWhen::Symmetric);
        if let StepRecord::Reduction { cut_point, .. } = t.steps.last_mut().unwrap() {
            *cut_point = q("11");
        }
        assert!(matches!(replay(&t.initial, &t.steps), Err(EngineError::ReplayMismatch { .. })));
    }

    #[test]
    fn trace_json_shape() {
        let t = run_induction(&special("10,4,1,2"), Side::Right, 100, StopWhen::Symmetric);
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["outcome"], "symmetric");
        assert_eq!(v["steps"][0]["kind"], "transmission");
        assert_eq!(v["steps"][1]["kind"], "reduction");
        assert_eq!(v["steps"][1]["cut_point"], "13/1");
        assert_eq!(v["final"]["support"][1], "10/1");
        let back: InductionTrace<Rational> = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
    }
}
