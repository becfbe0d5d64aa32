//! Standalone SVG drawings of wiring diagrams and of straight-line realizations.

use std::fmt::Write;

use crate::arrangement::{Label, TripleSystem};
use crate::error::Result;
use crate::geometry::HomLine;
use crate::sweep::{Block, Move, MoveKind, SweepWord};

const DX: f64 = 28.0;
const DY: f64 = 22.0;
const MARGIN: f64 = 30.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

fn header(out: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

/// The wiring diagram of a complete sweep. Line 1 first passes all other
/// wires (the start pairing), then every move of the word takes its own
/// column. Each triple point gets a `<circle class="triple">`.
pub fn render_wiring_svg(w: &SweepWord) -> Result<String> {
    w.replay()?;
    let n = w.pairing.n() as usize;

    // the whole sweep as moves on all n wires, line 1 starting on top
    let mut steps: Vec<(usize, MoveKind)> = Vec::new();
    let mut at = 0;
    for b in w.pairing.blocks() {
        match b {
            Block::Pair(..) => {
                steps.push((at, MoveKind::TripleFlip));
                at += 2;
            }
            Block::Single(_) => {
                steps.push((at, MoveKind::Swap));
                at += 1;
            }
        }
    }
    steps.extend(w.moves.iter().map(|m: &Move| (m.window().0, m.kind)));

    let width = 2.0 * MARGIN + DX * (steps.len() as f64 + 2.0);
    let height = 2.0 * MARGIN + DY * (n as f64 - 1.0);
    let y = |pos: usize| MARGIN + DY * pos as f64;
    let mut order: Vec<Label> = (1..=n as Label).collect();
    let mut paths: Vec<Vec<(f64, f64)>> = (0..n).map(|i| vec![(MARGIN, y(i))]).collect();
    let mut marks = Vec::new();

    for (k, &(start, kind)) in steps.iter().enumerate() {
        let x0 = MARGIN + DX * (k as f64 + 1.0);
        let len = if kind == MoveKind::Swap { 2 } else { 3 };
        for pos in start..start + len {
            paths[order[pos] as usize - 1].push((x0, y(pos)));
        }
        order[start..start + len].reverse();
        for pos in start..start + len {
            paths[order[pos] as usize - 1].push((x0 + DX, y(pos)));
        }
        if kind == MoveKind::TripleFlip {
            marks.push((x0 + DX / 2.0, y(start + 1)));
        }
    }

    let mut out = String::new();
    header(&mut out, width, height);
    let x_end = width - MARGIN;
    for (i, path) in paths.iter_mut().enumerate() {
        let last_y = path.last().expect("path starts with a point").1;
        path.push((x_end, last_y));
        let pts: Vec<String> = path.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
        let _ = writeln!(
            out,
            r#"<polyline class="wire" data-line="{}" fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            i + 1,
            PALETTE[i % PALETTE.len()],
            pts.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">{}</text>"#,
            MARGIN - 6.0,
            path[0].1 + 4.0,
            i + 1
        );
    }
    for (x, y) in marks {
        let _ = writeln!(out, r#"<circle class="triple" cx="{x:.1}" cy="{y:.1}" r="4" fill="black"/>"#);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Segment of `l` inside the box, if any.
fn clip(l: &HomLine<f64>, lo: (f64, f64), hi: (f64, f64)) -> Option<((f64, f64), (f64, f64))> {
    let [a, b, c] = l.coords();
    let mut pts = Vec::new();
    if b.abs() > 1e-12 {
        for x in [lo.0, hi.0] {
            let y = -(a * x + c) / b;
            if (lo.1..=hi.1).contains(&y) {
                pts.push((x, y));
            }
        }
    }
    if a.abs() > 1e-12 {
        for y in [lo.1, hi.1] {
            let x = -(b * y + c) / a;
            if (lo.0..=hi.0).contains(&x) {
                pts.push((x, y));
            }
        }
    }
    let first = *pts.first()?;
    let far = pts
        .iter()
        .copied()
        .max_by(|p, q| {
            let d = |r: &(f64, f64)| (r.0 - first.0).hypot(r.1 - first.1);
            d(p).total_cmp(&d(q))
        })
        .expect("non-empty");
    Some((first, far))
}

/// Straight lines in the affine chart `z = 1`, framed around their finite
/// triple points; triple points get a `<circle class="triple">`.
pub fn render_lines_svg(lines: &[HomLine<f64>], ts: &TripleSystem) -> String {
    let meets: Vec<(f64, f64)> = ts
        .triples()
        .iter()
        .filter_map(|t| {
            let [a, b, _] = t.labels().map(|l| l as usize - 1);
            lines[a].meet(&lines[b]).to_affine(1e-9)
        })
        .filter(|(x, y)| x.abs() < 1e3 && y.abs() < 1e3)
        .collect();
    let (mut lo, mut hi) = ((-1.0f64, -1.0f64), (1.0f64, 1.0f64));
    for &(x, y) in &meets {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    let pad = 0.15 * (hi.0 - lo.0).max(hi.1 - lo.1);
    lo = (lo.0 - pad, lo.1 - pad);
    hi = (hi.0 + pad, hi.1 + pad);
    let size = 600.0;
    let scale = size / (hi.0 - lo.0).max(hi.1 - lo.1);
    let map = |(x, y): (f64, f64)| (MARGIN + (x - lo.0) * scale, MARGIN + (hi.1 - y) * scale);

    let mut out = String::new();
    header(&mut out, size + 2.0 * MARGIN, size + 2.0 * MARGIN);
    for (i, l) in lines.iter().enumerate() {
        let Some((p, q)) = clip(l, lo, hi) else { continue };
        let (p, q) = (map(p), map(q));
        let _ = writeln!(
            out,
            r#"<line class="line" data-line="{}" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="1.2"/>"#,
            i + 1,
            p.0,
            p.1,
            q.0,
            q.1,
            PALETTE[i % PALETTE.len()]
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
            p.0 + 3.0,
            p.1 - 3.0,
            i + 1
        );
    }
    for m in meets {
        let (x, y) = map(m);
        let _ = writeln!(out, r#"<circle class="triple" cx="{x:.2}" cy="{y:.2}" r="3.5" fill="black"/>"#);
    }
    out.push_str("</svg>\n");
    out
}
