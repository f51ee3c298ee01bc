//! SVG and ASCII drawings of induction traces: one row per ordinary
//! iteration, the support as a segment, each pair as a family of arcs.

use std::fmt::Write;

use iis_core::engine::replay;
use iis_core::{EngineError, ExactField, IISystem, InductionTrace, PairLabel};

/// One drawn system, in floating coordinates (drawing only).
pub struct Frame {
    pub label: String,
    pub support: (f64, f64),
    pub pairs: Vec<(PairLabel, (f64, f64), (f64, f64))>,
}

fn frame<F: ExactField>(label: String, s: &IISystem<F>) -> Frame {
    let span = |i: &iis_core::Interval<F>| (i.lo().to_f64(), i.hi().to_f64());
    Frame {
        label,
        support: span(s.support()),
        pairs: s.pairs().iter().map(|p| (p.label(), span(p.left()), span(p.right()))).collect(),
    }
}

/// The initial system and the system after each ordinary iteration.
pub fn frames<F: ExactField>(trace: &InductionTrace<F>) -> Result<Vec<Frame>, EngineError> {
    let states = replay(&trace.initial, &trace.steps)?;
    let mut out = vec![frame("initial".into(), &states[0])];
    let mut n = 0;
    for (step, state) in trace.steps.iter().zip(&states[1..]) {
        if step.is_reduction() {
            n += 1;
            out.push(frame(format!("iteration {n}"), state));
        }
    }
    Ok(out)
}

const WIDTH: f64 = 900.0;
const MARGIN: f64 = 40.0;
const ROW: f64 = 120.0;

fn color(label: PairLabel) -> &'static str {
    match label {
        PairLabel::A => "#1f5fa8",
        PairLabel::B => "#c0392b",
        PairLabel::C => "#2e8b3e",
        PairLabel::Index(_) => "#6b6b6b",
    }
}

/// Arc between two points on the baseline: rectangular for `a`, triangular
/// for `b`, circular otherwise.
fn arc(label: PairLabel, x1: f64, x2: f64, y: f64) -> String {
    let h = (0.35 * (x2 - x1).abs()).clamp(6.0, 60.0);
    match label {
        PairLabel::A => format!("M {x1:.2} {y:.2} L {x1:.2} {:.2} L {x2:.2} {:.2} L {x2:.2} {y:.2}", y - h, y - h),
        PairLabel::B => format!("M {x1:.2} {y:.2} L {:.2} {:.2} L {x2:.2} {y:.2}", (x1 + x2) / 2.0, y - h),
        _ => {
            let r = (x2 - x1).abs() / 2.0;
            format!("M {x1:.2} {y:.2} A {r:.2} {r:.2} 0 0 1 {x2:.2} {y:.2}")
        }
    }
}

pub fn svg(frames: &[Frame], title: &str) -> String {
    let (lo0, hi0) = frames.first().map(|f| f.support).unwrap_or((0.0, 1.0));
    let scale = (WIDTH - 2.0 * MARGIN) / (hi0 - lo0).max(f64::MIN_POSITIVE);
    let x = |v: f64| MARGIN + (v - lo0) * scale;
    let height = ROW * frames.len() as f64 + 40.0;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {WIDTH:.0} {height:.0}\">"
    )
    .unwrap();
    writeln!(s, "  <title>{}</title>", escape(title)).unwrap();
    writeln!(s, "  <rect x=\"0\" y=\"0\" width=\"{WIDTH:.0}\" height=\"{height:.0}\" fill=\"white\"/>").unwrap();
    for (row, f) in frames.iter().enumerate() {
        let base = 40.0 + ROW * row as f64 + 80.0;
        writeln!(s, "  <g id=\"row{row}\">").unwrap();
        writeln!(
            s,
            "    <text x=\"{MARGIN:.0}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\">{}: [{:.4}, {:.4}]</text>",
            base - 68.0,
            escape(&f.label),
            f.support.0,
            f.support.1
        )
        .unwrap();
        let (a, b) = (x(f.support.0), x(f.support.1));
        writeln!(s, "    <line x1=\"{a:.2}\" y1=\"{:.2}\" x2=\"{b:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1.5\"/>", base + 10.0, base + 10.0).unwrap();
        for t in [a, b] {
            writeln!(s, "    <line x1=\"{t:.2}\" y1=\"{:.2}\" x2=\"{t:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", base + 4.0, base + 16.0).unwrap();
        }
        for (i, (label, left, right)) in f.pairs.iter().enumerate() {
            let c = color(*label);
            let y = base - 3.0 * i as f64;
            for (lo, hi) in [left, right] {
                writeln!(
                    s,
                    "    <line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{c}\" stroke-width=\"3\"/>",
                    x(*lo),
                    x(*hi)
                )
                .unwrap();
            }
            let mids = [(left.0, right.0), ((left.0 + left.1) / 2.0, (right.0 + right.1) / 2.0), (left.1, right.1)];
            for (p, q) in mids {
                writeln!(s, "    <path d=\"{}\" fill=\"none\" stroke=\"{c}\" stroke-width=\"1\"/>", arc(*label, x(p), x(q), y)).unwrap();
            }
            writeln!(
                s,
                "    <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"11\" fill=\"{c}\">{label}</text>",
                x(left.0) + 2.0,
                y + 14.0
            )
            .unwrap();
        }
        writeln!(s, "  </g>").unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

const COLUMNS: usize = 64;

pub fn ascii(frames: &[Frame]) -> String {
    let (lo0, hi0) = frames.first().map(|f| f.support).unwrap_or((0.0, 1.0));
    let col = |v: f64| (((v - lo0) / (hi0 - lo0)) * COLUMNS as f64).round().clamp(0.0, COLUMNS as f64) as usize;
    let mut s = String::new();
    for f in frames {
        writeln!(s, "{}: [{:.6}, {:.6}]", f.label, f.support.0, f.support.1).unwrap();
        let (a, b) = (col(f.support.0), col(f.support.1));
        let mut line: Vec<char> = vec![' '; COLUMNS + 1];
        for c in line.iter_mut().take(b + 1).skip(a) {
            *c = '-';
        }
        line[a] = '|';
        line[b] = '|';
        writeln!(s, "      {}", line.iter().collect::<String>().trim_end()).unwrap();
        for (label, left, right) in &f.pairs {
            let name = label.to_string();
            let lower = name.chars().next().unwrap_or('?');
            let upper = lower.to_ascii_uppercase();
            let mut line: Vec<char> = vec![' '; COLUMNS + 1];
            for c in line.iter_mut().take(b + 1).skip(a) {
                *c = '.';
            }
            for (i, c) in line.iter_mut().enumerate().take(col(left.1)).skip(col(left.0)) {
                *c = if i >= col(right.0) && i < col(right.1) { '*' } else { lower };
            }
            for c in line.iter_mut().take(col(right.1)).skip(col(right.0)) {
                if *c != '*' {
                    *c = upper;
                }
            }
            writeln!(s, "  {name:>2}  {}", line.iter().collect::<String>().trim_end()).unwrap();
        }
    }
    s
}
