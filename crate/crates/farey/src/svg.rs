//! A minimal SVG writer for the figures produced by the crate.

use std::fmt::Write;

/// An SVG document assembled element by element.
#[derive(Debug, Clone)]
pub struct SvgDoc {
    width: f64,
    height: f64,
    body: String,
}

/// Stroke style of a line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stroke {
    /// Continuous line.
    Solid,
    /// Dashed line.
    Dashed,
}

impl SvgDoc {
    /// Empty document of the given size in pixels.
    pub fn new(width: f64, height: f64) -> Self {
        SvgDoc {
            width,
            height,
            body: String::new(),
        }
    }

    /// Width in pixels.
    pub fn width(&self) -> f64 {
        self.width
    }

    /// Height in pixels.
    pub fn height(&self) -> f64 {
        self.height
    }

    /// Straight line segment.
    pub fn line(&mut self, p: (f64, f64), q: (f64, f64), color: &str, width: f64, stroke: Stroke) {
        let dash = match stroke {
            Stroke::Solid => "",
            Stroke::Dashed => " stroke-dasharray=\"4 3\"",
        };
        let _ = writeln!(
            self.body,
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"{color}\" stroke-width=\"{width}\"{dash}/>",
            p.0, p.1, q.0, q.1
        );
    }

    /// Closed polygon.
    pub fn polygon(&mut self, pts: &[(f64, f64)], fill: &str, stroke: &str, width: f64) {
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
        let _ = writeln!(
            self.body,
            "<polygon points=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>",
            coords.join(" ")
        );
    }

    /// Filled circle.
    pub fn circle(&mut self, c: (f64, f64), r: f64, fill: &str) {
        let _ = writeln!(
            self.body,
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{r}\" fill=\"{fill}\"/>",
            c.0, c.1
        );
    }

    /// Text label anchored at its centre.
    pub fn text(&mut self, p: (f64, f64), size: f64, content: &str) {
        let escaped = content
            .replace('&', "&amp;")
            .replace('<', "&lt;")
            .replace('>', "&gt;");
        let _ = writeln!(
            self.body,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"{size}\" font-family=\"sans-serif\" text-anchor=\"middle\">{escaped}</text>",
            p.0, p.1
        );
    }

    /// The complete document.
    pub fn render(&self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{}</svg>\n",
            self.body,
            w = self.width,
            h = self.height
        )
    }
}

/// Maps a point of the plane `x1 + x2 + x3 = 1` to picture coordinates.
///
/// The basis vectors land on the corners of an equilateral triangle
/// inscribed in a square of side `size` with a margin.
pub fn barycentric_to_screen(p: [f64; 3], size: f64) -> (f64, f64) {
    let margin = 0.06 * size;
    let side = size - 2.0 * margin;
    let h = side * 3f64.sqrt() / 2.0;
    let top = margin + (side - h) / 2.0;
    let corners = [
        (margin, top + h),
        (margin + side, top + h),
        (margin + side / 2.0, top),
    ];
    let s = p[0] + p[1] + p[2];
    let (w0, w1, w2) = (p[0] / s, p[1] / s, p[2] / s);
    (
        w0 * corners[0].0 + w1 * corners[1].0 + w2 * corners[2].0,
        w0 * corners[0].1 + w1 * corners[1].1 + w2 * corners[2].1,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_elements() {
        let mut d = SvgDoc::new(100.0, 100.0);
        d.line((0.0, 0.0), (1.0, 1.0), "black", 1.0, Stroke::Dashed);
        d.text((5.0, 5.0), 10.0, "a<b");
        let s = d.render();
        assert!(s.starts_with("<svg"));
        assert!(s.contains("stroke-dasharray"));
        assert!(s.contains("a&lt;b"));
    }

    #[test]
    fn corners_are_distinct() {
        let a = barycentric_to_screen([1.0, 0.0, 0.0], 100.0);
        let b = barycentric_to_screen([0.0, 1.0, 0.0], 100.0);
        assert!((a.0 - b.0).abs() > 10.0);
    }
}
