use std::fmt::Write;

const WIDTH: f64 = 320.0;
const HEIGHT: f64 = 120.0;
const PAD: f64 = 8.0;

/// A log-log polyline of `(t, y)`; points with `t <= 0` or `y <= 0` are skipped.
pub fn sparkline(title: &str, t: &[f64], y: &[f64]) -> String {
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && a.is_finite() && b.is_finite())
        .map(|(a, b)| (a.log10(), b.log10()))
        .collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    if pts.len() >= 2 {
        let (x0, x1) = bounds(pts.iter().map(|p| p.0));
        let (y0, y1) = bounds(pts.iter().map(|p| p.1));
        let sx = |x: f64| PAD + (WIDTH - 2.0 * PAD) * (x - x0) / (x1 - x0);
        let sy = |y: f64| HEIGHT - PAD - (HEIGHT - 2.0 * PAD) * (y - y0) / (y1 - y0);
        let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="black" stroke-width="1" points="{}"/>"#,
            coords.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{PAD}" y="{}" font-size="9">{} (log-log, t {:.3e}..{:.3e})</text>"#,
            PAD + 4.0,
            escape(title),
            10f64.powf(x0),
            10f64.powf(x1)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(it: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_is_a_straight_line() {
        let t: Vec<f64> = (1..=5).map(|i| 10f64.powi(i)).collect();
        let y: Vec<f64> = t.iter().map(|x| x.powf(-0.5)).collect();
        let svg = sparkline("l2_sq", &t, &y);
        assert!(svg.contains("points=\"8.00,8.00 "));
        assert!(svg.contains("312.00,112.00\""));
        assert_eq!(svg, sparkline("l2_sq", &t, &y));
    }

    #[test]
    fn degenerate_input_has_no_polyline() {
        let svg = sparkline("a<b", &[0.0, 1.0], &[1.0, -1.0]);
        assert!(!svg.contains("polyline"));
        assert!(svg.contains("a&lt;b"));
    }
}
