//! Deterministic SVG rendering of wall diagrams: beta horizontal, alpha
//! vertical upward, on a fixed 800x400 canvas. Geometry is written in
//! data coordinates inside a single transform group, so the exact wall
//! endpoints appear in the path data as 12-significant-digit decimals.

use mukai_walls::walls::{Wall, WallShape};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::fmt::Write as _;

pub const CANVAS_W: f64 = 800.0;
pub const CANVAS_H: f64 = 400.0;

#[derive(Debug, Clone)]
pub struct WallDiagram {
    pub walls: Vec<Wall>,
    /// (beta_min, beta_max, alpha_max)
    pub viewport: (BigRational, BigRational, BigRational),
}

impl WallDiagram {
    /// Viewport derived from the walls: spans every semicircle and vertical
    /// line with a fixed margin, snapped to hundredths.
    pub fn with_auto_viewport(walls: Vec<Wall>) -> Self {
        let mut lo: f64 = -1.0;
        let mut hi: f64 = 0.5;
        let mut top: f64 = 1.0;
        for w in &walls {
            match &w.shape {
                WallShape::Semicircle { center, radius_sq } => {
                    let c = rat_f64(center);
                    let r = rat_f64(radius_sq).sqrt();
                    lo = lo.min(c - r);
                    hi = hi.max(c + r);
                    top = top.max(r);
                }
                WallShape::Vertical { beta } => {
                    let b = rat_f64(beta);
                    lo = lo.min(b - 0.5);
                    hi = hi.max(b + 0.5);
                }
            }
        }
        let snap = |x: f64| BigRational::new(((x * 100.0).round() as i64).into(), 100.into());
        WallDiagram {
            walls,
            viewport: (snap(lo - 0.25), snap(hi + 0.25), snap(top * 1.1)),
        }
    }
}

fn rat_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

/// Fixed-point decimal with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".to_owned();
    }
    let mag = x.abs().log10().floor() as i32;
    let prec = (11 - mag).clamp(0, 24) as usize;
    format!("{x:.prec$}")
}

/// Pure function of the diagram: identical input gives byte-identical
/// output. Each wall carries its destabilizing class in a title element;
/// the vertical wall is labeled HC.
pub fn render_walls_svg(dg: &WallDiagram) -> String {
    let beta_min = rat_f64(&dg.viewport.0);
    let beta_max = rat_f64(&dg.viewport.1);
    let alpha_max = rat_f64(&dg.viewport.2);
    let width = (beta_max - beta_min).max(1e-9);
    let sx = CANVAS_W / width;
    let sy = -CANVAS_H / alpha_max.max(1e-9);
    let tx = -beta_min * sx;
    let ty = CANVAS_H;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS_W}" height="{CANVAS_H}" viewBox="0 0 {CANVAS_W} {CANVAS_H}">"#
    );
    let _ = writeln!(out, "  <title>walls in the (beta, alpha) half-plane</title>");
    let _ = writeln!(
        out,
        r#"  <rect x="0" y="0" width="{CANVAS_W}" height="{CANVAS_H}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"  <g transform="matrix({} 0 0 {} {} {})" fill="none" stroke-linecap="round">"#,
        sig12(sx),
        sig12(sy),
        sig12(tx),
        sig12(ty)
    );
    // axes
    let _ = writeln!(
        out,
        r##"    <line x1="{}" y1="0" x2="{}" y2="0" stroke="#888" stroke-width="1" vector-effect="non-scaling-stroke"/>"##,
        sig12(beta_min),
        sig12(beta_max)
    );
    if beta_min < 0.0 && beta_max > 0.0 {
        let _ = writeln!(
            out,
            r##"    <line x1="0" y1="0" x2="0" y2="{}" stroke="#888" stroke-width="1" vector-effect="non-scaling-stroke"/>"##,
            sig12(alpha_max)
        );
    }
    for w in &dg.walls {
        match &w.shape {
            WallShape::Semicircle { center, radius_sq } => {
                let c = rat_f64(center);
                let r = rat_f64(radius_sq).sqrt();
                let _ = writeln!(
                    out,
                    r##"    <path d="M {} 0 A {} {} 0 0 1 {} 0" stroke="#1f4e9c" stroke-width="1.5" vector-effect="non-scaling-stroke"><title>u = {}</title></path>"##,
                    sig12(c - r),
                    sig12(r),
                    sig12(r),
                    sig12(c + r),
                    w.destabilizer
                );
            }
            WallShape::Vertical { beta } => {
                let b = rat_f64(beta);
                let _ = writeln!(
                    out,
                    r##"    <line x1="{}" y1="0" x2="{}" y2="{}" stroke="#9c1f1f" stroke-width="1.5" vector-effect="non-scaling-stroke"><title>HC</title></line>"##,
                    sig12(b),
                    sig12(b),
                    sig12(alpha_max)
                );
            }
        }
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(out, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use mukai_walls::mukai::MukaiVector;
    use mukai_walls::walls::{wall_from_destabilizer, WallOutcome};
    use num_bigint::BigInt;

    fn sample_walls() -> Vec<Wall> {
        let d = BigInt::from(1);
        let n = BigInt::from(2);
        let mut walls = Vec::new();
        for u in [
            MukaiVector::from_i64(0, &[0], 1),
            MukaiVector::from_i64(0, &[1], -3),
        ] {
            if let WallOutcome::Wall(w) = wall_from_destabilizer(&d, &n, &u).unwrap() {
                walls.push(w);
            }
        }
        walls
    }

    #[test]
    fn deterministic_output() {
        let dg = WallDiagram::with_auto_viewport(sample_walls());
        let a = render_walls_svg(&dg);
        let b = render_walls_svg(&dg);
        assert_eq!(a, b);
    }

    #[test]
    fn empty_diagram_has_axes_only() {
        let dg = WallDiagram::with_auto_viewport(vec![]);
        let svg = render_walls_svg(&dg);
        assert!(svg.contains("<line"));
        assert!(!svg.contains("<path"));
    }

    #[test]
    fn arc_endpoints_are_12_digit_decimals() {
        // center -3/2, radius sqrt(5)/2: endpoints -3/2 -+ sqrt(5)/2
        let dg = WallDiagram::with_auto_viewport(sample_walls());
        let svg = render_walls_svg(&dg);
        let r = (5.0f64 / 4.0).sqrt();
        assert!(svg.contains(&format!("M {} 0", sig12(-1.5 - r))));
        assert!(svg.contains(&format!("A {} {}", sig12(r), sig12(r))));
        assert!(svg.contains(&format!("{} 0\"", sig12(-1.5 + r))));
        assert!(svg.contains("<title>HC</title>"));
        assert!(svg.contains("<title>u = (0, [1], -3)</title>"));
    }

    #[test]
    fn sig12_formatting() {
        assert_eq!(sig12(1.25f64.sqrt()), "1.11803398875");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(-2.5), "-2.50000000000");
        assert_eq!(sig12(100.0), "100.000000000");
    }
}
