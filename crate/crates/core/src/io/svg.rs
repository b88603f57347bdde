//! Static SVG 1.1 figures: planar scenes drawn to scale and radius-vs-dimension
//! line plots.

use std::fmt::Write;

use crate::space::NormKind;

const SIZE: f64 = 480.0;
const PAD: f64 = 24.0;

#[derive(Debug, Default)]
pub(crate) struct Scene {
    points: Vec<[f64; 2]>,
    balls: Vec<([f64; 2], f64, &'static str)>,
    markers: Vec<[f64; 2]>,
    links: Vec<([f64; 2], [f64; 2])>,
}

fn pt(x: &[f64]) -> [f64; 2] {
    [x[0], x[1]]
}

impl Scene {
    pub fn point(&mut self, x: &[f64]) {
        self.points.push(pt(x));
    }

    pub fn ball(&mut self, c: &[f64], r: f64, color: &'static str) {
        self.balls.push((pt(c), r, color));
    }

    pub fn marker(&mut self, x: &[f64]) {
        self.markers.push(pt(x));
    }

    pub fn link(&mut self, a: &[f64], b: &[f64]) {
        self.links.push((pt(a), pt(b)));
    }

    pub fn render(&self, kind: &NormKind) -> String {
        let (sx, sy) = match kind {
            NormKind::WeightedSup(s) => (1.0 / s[0], 1.0 / s[1]),
            _ => (1.0, 1.0),
        };
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        let mut grow = |p: [f64; 2], hx: f64, hy: f64| {
            lo[0] = lo[0].min(p[0] - hx);
            lo[1] = lo[1].min(p[1] - hy);
            hi[0] = hi[0].max(p[0] + hx);
            hi[1] = hi[1].max(p[1] + hy);
        };
        for p in self.points.iter().chain(&self.markers) {
            grow(*p, 0.0, 0.0);
        }
        for (c, r, _) in &self.balls {
            grow(*c, r * sx, r * sy);
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        let scale = (SIZE - 2.0 * PAD) / span;
        let map = |p: [f64; 2]| -> (f64, f64) {
            (
                PAD + (p[0] - lo[0]) * scale,
                SIZE - PAD - (p[1] - lo[1]) * scale,
            )
        };

        let mut out = header();
        for (c, r, color) in &self.balls {
            let (cx, cy) = map(*c);
            let (rx, ry) = (r * sx * scale, r * sy * scale);
            let style = format!(
                "fill=\"{color}\" fill-opacity=\"0.12\" stroke=\"{color}\" stroke-width=\"1.5\""
            );
            match kind {
                NormKind::L2 => {
                    writeln!(out, "  <circle cx=\"{cx:.3}\" cy=\"{cy:.3}\" r=\"{rx:.3}\" {style}/>")
                }
                NormKind::L1 => writeln!(
                    out,
                    "  <polygon points=\"{:.3},{cy:.3} {cx:.3},{:.3} {:.3},{cy:.3} {cx:.3},{:.3}\" {style}/>",
                    cx - rx,
                    cy - ry,
                    cx + rx,
                    cy + ry
                ),
                NormKind::LInf | NormKind::WeightedSup(_) => writeln!(
                    out,
                    "  <rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" {style}/>",
                    cx - rx,
                    cy - ry,
                    2.0 * rx,
                    2.0 * ry
                ),
            }
            .expect("writing to a String");
        }
        for (a, b) in &self.links {
            let (ax, ay) = map(*a);
            let (bx, by) = map(*b);
            writeln!(
                out,
                "  <line x1=\"{ax:.3}\" y1=\"{ay:.3}\" x2=\"{bx:.3}\" y2=\"{by:.3}\" stroke=\"#888888\" stroke-dasharray=\"4 3\"/>"
            )
            .expect("writing to a String");
        }
        for p in &self.points {
            let (x, y) = map(*p);
            writeln!(
                out,
                "  <circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3.5\" fill=\"#1f3a93\"/>"
            )
            .expect("writing to a String");
        }
        for p in &self.markers {
            let (x, y) = map(*p);
            writeln!(
                out,
                "  <path d=\"M {:.3} {:.3} L {:.3} {:.3} M {:.3} {:.3} L {:.3} {:.3}\" stroke=\"#c0392b\" stroke-width=\"2\"/>",
                x - 5.0,
                y - 5.0,
                x + 5.0,
                y + 5.0,
                x - 5.0,
                y + 5.0,
                x + 5.0,
                y - 5.0
            )
            .expect("writing to a String");
        }
        out.push_str("</svg>\n");
        out
    }
}

fn header() -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// Polyline of `(x, y)` samples with axis extents printed in the corners.
pub(crate) fn line_plot(samples: &[(f64, f64)]) -> String {
    let mut out = header();
    if samples.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let (x0, x1) = extent(samples.iter().map(|s| s.0));
    let (y0, y1) = extent(samples.iter().map(|s| s.1));
    let map = |(x, y): (f64, f64)| -> (f64, f64) {
        (
            2.0 * PAD + (x - x0) / (x1 - x0) * (SIZE - 3.0 * PAD),
            SIZE - 2.0 * PAD - (y - y0) / (y1 - y0) * (SIZE - 3.0 * PAD),
        )
    };
    writeln!(
        out,
        "  <path d=\"M {p} {b} L {r} {b}\" stroke=\"black\"/>\n  <path d=\"M {p} {b} L {p} {t}\" stroke=\"black\"/>",
        p = 2.0 * PAD,
        b = SIZE - 2.0 * PAD,
        r = SIZE - PAD,
        t = PAD
    )
    .expect("writing to a String");
    let coords: Vec<String> = samples
        .iter()
        .map(|s| {
            let (x, y) = map(*s);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    writeln!(
        out,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"#1f3a93\" stroke-width=\"2\"/>",
        coords.join(" ")
    )
    .expect("writing to a String");
    for s in samples {
        let (x, y) = map(*s);
        writeln!(
            out,
            "  <circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\" fill=\"#1f3a93\"/>"
        )
        .expect("writing to a String");
    }
    let label = |v: f64| super::record::format_number(v);
    writeln!(
        out,
        "  <text x=\"{}\" y=\"{}\" font-size=\"11\" font-family=\"sans-serif\">{}</text>\n  <text x=\"{}\" y=\"{}\" font-size=\"11\" font-family=\"sans-serif\" text-anchor=\"end\">{}</text>\n  <text x=\"4\" y=\"{}\" font-size=\"11\" font-family=\"sans-serif\">{}</text>\n  <text x=\"4\" y=\"{}\" font-size=\"11\" font-family=\"sans-serif\">{}</text>",
        2.0 * PAD,
        SIZE - PAD,
        label(x0),
        SIZE - PAD,
        SIZE - PAD,
        label(x1),
        SIZE - 2.0 * PAD,
        label(y0),
        PAD + 4.0,
        label(y1)
    )
    .expect("writing to a String");
    out.push_str("</svg>\n");
    out
}

fn extent(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}
