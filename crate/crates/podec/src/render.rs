//! Plain-text and SVG pictures of rank-2 downsets.
//!
//! ASCII grids print `#` for members and `.` for non-members, with the
//! coordinate axes overlaid at 0.  SVG output is static SVG 1.1: one panel
//! per component, each a shaded staircase with axes and a face label, laid
//! out left to right.  Both renderers are deterministic, so their output
//! can be compared byte for byte.

use crate::bounds::{Lower, Upper};
use crate::downset::IntDownset;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("rendering needs a rank-2 downset, got rank {0}")]
    RankNotTwo(usize),
    #[error("empty render window")]
    EmptyWindow,
    #[error(transparent)]
    Downset(#[from] crate::downset::DownsetError),
}

/// One picture: a downset plus the face label shown above it.
#[derive(Clone, Debug)]
pub struct Panel {
    pub label: String,
    pub downset: IntDownset,
}

/// Human-readable name of an orthant face for rank <= 3: coordinates are
/// called x, y, z; larger ranks fall back to indices.
pub fn face_label(face: &BTreeSet<usize>, rank: usize) -> String {
    let name = |i: &usize| {
        if rank <= 3 {
            ["x", "y", "z"][*i].to_string()
        } else {
            i.to_string()
        }
    };
    let inner: Vec<String> = face.iter().map(name).collect();
    format!("{{{}}}", inner.join(","))
}

fn check_window(d: &IntDownset, lo: &[i64], hi: &[i64]) -> Result<(), RenderError> {
    if d.rank() != 2 {
        return Err(RenderError::RankNotTwo(d.rank()));
    }
    if lo.len() != 2 || hi.len() != 2 || (0..2).any(|i| lo[i] > hi[i]) {
        return Err(RenderError::EmptyWindow);
    }
    Ok(())
}

/// ASCII grid over the inclusive window `[lo, hi]`, highest y-row first.
/// Members print `#`; on non-member cells the axes show as `|`, `-` and `+`.
pub fn render_ascii(d: &IntDownset, lo: &[i64], hi: &[i64]) -> Result<String, RenderError> {
    check_window(d, lo, hi)?;
    let mut out = String::new();
    for y in (lo[1]..=hi[1]).rev() {
        for x in lo[0]..=hi[0] {
            let c = if d.member(&[x, y])? {
                '#'
            } else if x == 0 && y == 0 {
                '+'
            } else if x == 0 {
                '|'
            } else if y == 0 {
                '-'
            } else {
                '.'
            };
            out.push(c);
        }
        out.push('\n');
    }
    Ok(out)
}

const CELL: i64 = 12;
const PAD: i64 = 24;
const GAP: i64 = 16;
const FILL: &str = "#9ec5e8";
const EDGE: &str = "#2a5d8f";

/// Pixel x of lattice coordinate `v` inside a panel whose window starts at
/// `lo`; the +1 on the upper end is handled by the caller.
fn px(v: i64, lo: i64) -> i64 {
    (v - lo) * CELL
}

/// SVG 1.1 document with one shaded-staircase panel per entry, drawn over
/// the inclusive lattice window `[lo, hi]` shared by all panels.
pub fn render_svg(panels: &[Panel], lo: &[i64], hi: &[i64]) -> Result<String, RenderError> {
    for p in panels {
        check_window(&p.downset, lo, hi)?;
    }
    // Lattice point q occupies the unit cell [q, q+1), so the drawable area
    // spans hi - lo + 1 cells each way.
    let cells_x = hi[0] - lo[0] + 1;
    let cells_y = hi[1] - lo[1] + 1;
    let panel_w = cells_x * CELL;
    let panel_h = cells_y * CELL;
    let n = panels.len().max(1) as i64;
    let width = n * (panel_w + 2 * PAD) + (n - 1) * GAP;
    let height = panel_h + 2 * PAD;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    for (k, panel) in panels.iter().enumerate() {
        let ox = k as i64 * (panel_w + 2 * PAD + GAP) + PAD;
        let oy = PAD;
        let _ = writeln!(s, "  <g transform=\"translate({ox},{oy})\">");
        // Shaded staircase: one rect per box of the region normal form,
        // clipped to the window.
        for b in panel.downset.to_region().boxes() {
            let (xl, xh) = clip(&b.intervals[0], lo[0], hi[0]);
            let (yl, yh) = clip(&b.intervals[1], lo[1], hi[1]);
            if xl > xh || yl > yh {
                continue;
            }
            let x = px(xl, lo[0]);
            let w = (xh - xl + 1) * CELL;
            // SVG y grows downward; lattice y grows upward.
            let y = panel_h - px(yh, lo[1]) - CELL;
            let h = (yh - yl + 1) * CELL;
            let _ = writeln!(
                s,
                "    <rect x=\"{x}\" y=\"{y}\" width=\"{w}\" height=\"{h}\" \
                 fill=\"{FILL}\" stroke=\"{EDGE}\" stroke-width=\"1\"/>"
            );
        }
        // Axes through lattice 0 (left edge of the 0 cell / bottom of it).
        if lo[0] <= 0 && 0 <= hi[0] {
            let x = px(0, lo[0]);
            let _ = writeln!(
                s,
                "    <line x1=\"{x}\" y1=\"0\" x2=\"{x}\" y2=\"{panel_h}\" \
                 stroke=\"#000000\" stroke-width=\"1\"/>"
            );
        }
        if lo[1] <= 0 && 0 <= hi[1] {
            let y = panel_h - px(0, lo[1]);
            let _ = writeln!(
                s,
                "    <line x1=\"0\" y1=\"{y}\" x2=\"{panel_w}\" y2=\"{y}\" \
                 stroke=\"#000000\" stroke-width=\"1\"/>"
            );
        }
        let _ = writeln!(
            s,
            "    <text x=\"0\" y=\"-8\" font-family=\"monospace\" \
             font-size=\"12\">{}</text>",
            xml_escape(&panel.label)
        );
        s.push_str("  </g>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Clip one interval of a generalized box to the inclusive window `[lo, hi]`.
fn clip(iv: &(Lower<i64>, Upper<i64>), lo: i64, hi: i64) -> (i64, i64) {
    let l = match &iv.0 {
        Lower::NegInf => lo,
        Lower::Incl(c) => (*c).max(lo),
        Lower::Excl(c) => (c + 1).max(lo),
    };
    let h = match &iv.1 {
        Upper::PosInf => hi,
        Upper::Incl(c) => (*c).min(hi),
        Upper::Excl(c) => (c - 1).min(hi),
    };
    (l, h)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
