use std::fmt::Write;

use crate::curves::{Curve, JordanConfiguration};
use crate::geometry::Point;

/// Formats `x` with 9 significant digits, without exponent or trailing zeros.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci[sci.find('e').expect("exponent form") + 1..]
        .parse()
        .expect("integer exponent");
    let rounded: f64 = sci.parse().expect("valid float");
    let decimals = (8 - exp).max(0) as usize;
    let mut s = format!("{rounded:.decimals$}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// SVG `viewBox` fitted to a set of frames, with the y axis flipped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SvgViewport {
    pub min: Point,
    pub max: Point,
}

impl SvgViewport {
    pub fn fit<'a>(frames: impl IntoIterator<Item = &'a JordanConfiguration>) -> Self {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for f in frames {
            if let Some((a, b)) = f.bbox() {
                lo = Point::new(lo.x.min(a.x), lo.y.min(a.y));
                hi = Point::new(hi.x.max(b.x), hi.y.max(b.y));
            }
        }
        if !lo.x.is_finite() {
            return Self {
                min: Point::new(-1.0, -1.0),
                max: Point::new(1.0, 1.0),
            };
        }
        let pad = 0.05 * (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        Self {
            min: Point::new(lo.x - pad, lo.y - pad),
            max: Point::new(hi.x + pad, hi.y + pad),
        }
    }

    fn view_box(&self) -> String {
        format!(
            "{} {} {} {}",
            fmt_sig(self.min.x),
            fmt_sig(-self.max.y),
            fmt_sig(self.max.x - self.min.x),
            fmt_sig(self.max.y - self.min.y)
        )
    }
}

fn header(out: &mut String, vp: &SvgViewport) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{}" fill="none" stroke="black" stroke-width="1">"#,
        vp.view_box()
    );
}

fn write_frame(out: &mut String, frame: &JordanConfiguration, id: usize, opacity: f64) {
    let _ = writeln!(
        out,
        r#"<g id="frame-{id}" stroke-opacity="{}">"#,
        fmt_sig(opacity)
    );
    for (i, c) in frame.curves.iter().enumerate() {
        match c {
            Curve::Round(c) => {
                let _ = writeln!(
                    out,
                    r#"<circle data-curve="{}" cx="{}" cy="{}" r="{}" vector-effect="non-scaling-stroke"/>"#,
                    i + 1,
                    fmt_sig(c.x),
                    fmt_sig(-c.y),
                    fmt_sig(c.r)
                );
            }
            Curve::Polygon(p) => {
                let pts: Vec<String> = p
                    .vertices()
                    .iter()
                    .map(|v| format!("{},{}", fmt_sig(v.x), fmt_sig(-v.y)))
                    .collect();
                let _ = writeln!(
                    out,
                    r#"<polygon data-curve="{}" points="{}" vector-effect="non-scaling-stroke"/>"#,
                    i + 1,
                    pts.join(" ")
                );
            }
        }
    }
    out.push_str("</g>\n");
}

/// One frame as a standalone SVG document.
pub fn frame_to_svg(frame: &JordanConfiguration, vp: &SvgViewport) -> String {
    let mut out = String::new();
    header(&mut out, vp);
    write_frame(&mut out, frame, 0, 1.0);
    out.push_str("</svg>\n");
    out
}

/// All frames overlaid in one SVG, later frames drawn darker.
pub fn frames_to_svg(frames: &[JordanConfiguration]) -> String {
    let vp = SvgViewport::fit(frames);
    let mut out = String::new();
    header(&mut out, &vp);
    let last = frames.len().saturating_sub(1).max(1) as f64;
    for (k, f) in frames.iter().enumerate() {
        write_frame(&mut out, f, k, 0.15 + 0.85 * k as f64 / last);
    }
    out.push_str("</svg>\n");
    out
}
