//! SVG 1.1 barcode diagrams.
//!
//! Bars are drawn as horizontal lines ordered by birth, coloured by parity.
//! Infinite ends run to the plot edge with an arrowhead, truncated ends are
//! dashed past the cut. Tick labels are exact rationals; floating point is
//! used only for pixel positions.

use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::persistence::{Barcode, Parity};
use crate::scalar::{format_rational, Rational, Scalar};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 40.0;
const ROW: f64 = 14.0;
const MAX_TICKS: usize = 16;

fn colour(p: Parity) -> &'static str {
    match p {
        Parity::Even => "#1f5fa8",
        Parity::Odd => "#c0392b",
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

struct Axis {
    lo: Rational,
    hi: Rational,
}

impl Axis {
    fn new(b: &Barcode) -> Self {
        let mut lo = b.spectrum().lo().clone();
        let mut hi = b.spectrum().hi().clone();
        for bar in b.bars() {
            for end in [
                bar.birth.finite(),
                bar.nominal_death().finite().cloned().as_ref(),
            ]
            .into_iter()
            .flatten()
            {
                lo = lo.min(end.clone());
                hi = hi.max(end.clone());
            }
        }
        if lo == hi {
            hi = &lo + Rational::from_integer(1.into());
        }
        Axis { lo, hi }
    }

    fn x(&self, v: &Rational) -> f64 {
        let t = ((v - &self.lo) / (&self.hi - &self.lo))
            .to_f64()
            .unwrap_or(0.0);
        MARGIN + t * (WIDTH - 2.0 * MARGIN)
    }

    fn x_of(&self, s: &Scalar) -> f64 {
        match s {
            Scalar::NegInf => MARGIN / 2.0,
            Scalar::PosInf => WIDTH - MARGIN / 2.0,
            Scalar::Finite(v) => self.x(v),
        }
    }
}

/// Tick positions: the horizon ends plus spectrum points, thinned to at most
/// [`MAX_TICKS`] evenly spread entries.
fn ticks(b: &Barcode) -> Vec<Rational> {
    let mut all = vec![b.spectrum().lo().clone()];
    all.extend(b.spectrum().points().iter().cloned());
    all.push(b.spectrum().hi().clone());
    all.sort();
    all.dedup();
    if all.len() <= MAX_TICKS {
        return all;
    }
    let last = all.len() - 1;
    (0..MAX_TICKS)
        .map(|k| all[k * last / (MAX_TICKS - 1)].clone())
        .collect()
}

/// Renders `b` with an optional title.
pub fn barcode_svg(b: &Barcode, title: Option<&str>) -> String {
    let axis = Axis::new(b);
    let bars = b.sorted_bars();
    let top = if title.is_some() { 36.0 } else { 16.0 };
    let axis_y = top + ROW * bars.len() as f64 + 10.0;
    let height = axis_y + 40.0;

    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}">"#
    );
    let _ = writeln!(
        w,
        r#"<defs><marker id="arrow" viewBox="0 0 6 6" refX="5" refY="3" markerWidth="6" markerHeight="6" orient="auto-start-reverse"><path d="M0,0 L6,3 L0,6 z" fill="context-stroke"/></marker></defs>"#
    );
    if let Some(t) = title {
        let _ = writeln!(
            w,
            r#"<text x="{MARGIN}" y="20" font-family="sans-serif" font-size="14">{}</text>"#,
            escape(t)
        );
    }
    for (row, bar) in bars.iter().enumerate() {
        let y = top + ROW * row as f64 + ROW / 2.0;
        let x1 = axis.x_of(&bar.birth);
        let stroke = colour(bar.parity);
        let start_marker = if bar.birth == Scalar::NegInf {
            r#" marker-start="url(#arrow)""#
        } else {
            ""
        };
        let label = escape(&bar.to_string());
        match &bar.truncated_at {
            Some(cut) => {
                let xc = axis.x(cut);
                let _ = writeln!(
                    w,
                    r#"<line x1="{x1:.2}" y1="{y:.2}" x2="{xc:.2}" y2="{y:.2}" stroke="{stroke}" stroke-width="4"{start_marker}><title>{label}</title></line>"#
                );
                let _ = writeln!(
                    w,
                    r#"<line x1="{xc:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{stroke}" stroke-width="2" stroke-dasharray="4 3" marker-end="url(#arrow)"/>"#,
                    axis.x_of(&Scalar::PosInf)
                );
            }
            None => {
                let x2 = axis.x_of(&bar.death);
                let end_marker = if bar.death == Scalar::PosInf {
                    r#" marker-end="url(#arrow)""#
                } else {
                    ""
                };
                let _ = writeln!(
                    w,
                    r#"<line x1="{x1:.2}" y1="{y:.2}" x2="{x2:.2}" y2="{y:.2}" stroke="{stroke}" stroke-width="4"{start_marker}{end_marker}><title>{label}</title></line>"#
                );
            }
        }
    }
    let _ = writeln!(
        w,
        r#"<line x1="{MARGIN}" y1="{axis_y:.2}" x2="{:.2}" y2="{axis_y:.2}" stroke="black" stroke-width="1"/>"#,
        WIDTH - MARGIN
    );
    for t in ticks(b) {
        let x = axis.x(&t);
        let _ = writeln!(
            w,
            r#"<line x1="{x:.2}" y1="{axis_y:.2}" x2="{x:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
            axis_y + 5.0
        );
        let _ = writeln!(
            w,
            r#"<text x="{x:.2}" y="{:.2}" font-family="monospace" font-size="10" text-anchor="middle">{}</text>"#,
            axis_y + 18.0,
            format_rational(&t)
        );
    }
    let _ = writeln!(w, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ellipsoid::{ellipsoid_barcode, EllipsoidParams};
    use crate::scalar::int;

    #[test]
    fn diagram_has_one_line_per_bar_and_rational_ticks() {
        let b = ellipsoid_barcode(&EllipsoidParams::new(vec![int(1)], int(3)).unwrap());
        let svg = barcode_svg(&b, Some("a = (1), T = 3"));
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains(r#"version="1.1""#));
        assert_eq!(svg.matches("<title>").count(), 3);
        assert!(svg.contains(">3/1</text>"));
        assert!(svg.contains("stroke-dasharray"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn empty_barcode_renders() {
        let b = Barcode::empty(crate::persistence::Spectrum::new(vec![], int(0), int(0)).unwrap());
        assert!(barcode_svg(&b, None).contains("</svg>"));
    }
}
