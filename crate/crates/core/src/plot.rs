//! CSV and SVG emitters for the growth-bound figure and image-domain plots.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::bounds::{log_m, log_n, AlphaParam, BoundsError};
use crate::geometry::PolygonCurve;
use crate::report::fmt_sig;

/// Number of points in the growth-bound figure.
pub const FIGURE1_POINTS: usize = 197;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure1Row {
    pub alpha: f64,
    pub log_m: f64,
    pub log_n: f64,
}

/// `log M` and `log N` at `α = 0.005, 0.010, …, 0.985`.
pub fn figure1_rows() -> Result<Vec<Figure1Row>, BoundsError> {
    (1..=FIGURE1_POINTS)
        .map(|k| {
            let alpha = 0.005 * k as f64;
            let a = AlphaParam::new(alpha)?;
            // both forms of M must agree before the log form is trusted
            crate::bounds::bound_m(&a)?;
            Ok(Figure1Row {
                alpha,
                log_m: log_m(&a),
                log_n: log_n(&a),
            })
        })
        .collect()
}

pub fn figure1_csv(rows: &[Figure1Row]) -> String {
    let mut out = String::from("alpha,logM,logN\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.alpha, r.log_m, r.log_n);
    }
    out
}

fn num(x: f64) -> String {
    fmt_sig(x, 6)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const PAD: f64 = 60.0;

/// Line chart of both curves with labelled axes.
pub fn figure1_svg(rows: &[Figure1Row]) -> String {
    let x_max = 1.0;
    let y_min = rows
        .iter()
        .map(|r| r.log_m.min(r.log_n))
        .fold(0.0, f64::min);
    let y_max = rows
        .iter()
        .map(|r| r.log_m.max(r.log_n))
        .fold(f64::MIN, f64::max);
    let sx = |x: f64| PAD + x / x_max * (WIDTH - 2.0 * PAD);
    let sy = |y: f64| HEIGHT - PAD - (y - y_min) / (y_max - y_min) * (HEIGHT - 2.0 * PAD);
    let points = |pick: fn(&Figure1Row) -> f64| {
        rows.iter()
            .map(|r| format!("{},{}", num(sx(r.alpha)), num(sy(pick(r)))))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    // axes
    let (x0, x1, y0, y1) = (sx(0.0), sx(x_max), sy(y_min), sy(y_max));
    let _ = writeln!(
        svg,
        r#"<path d="M{} {} L{} {} M{} {} L{} {}" stroke="black" fill="none"/>"#,
        num(x0),
        num(y0),
        num(x1),
        num(y0),
        num(x0),
        num(y0),
        num(x0),
        num(y1)
    );
    for k in 0..=4 {
        let x = 0.25 * k as f64;
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
            num(sx(x)),
            num(y0 + 18.0),
            x
        );
    }
    for k in 0..=4 {
        let y = y_min + (y_max - y_min) * k as f64 / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="end">{}</text>"#,
            num(x0 - 6.0),
            num(sy(y) + 4.0),
            fmt_sig(y, 3)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="14" text-anchor="middle">alpha</text>"#,
        num(WIDTH / 2.0),
        num(HEIGHT - 15.0)
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{}" font-size="14" text-anchor="middle" transform="rotate(-90 15 {})">log M(alpha), log N(alpha)</text>"#,
        num(HEIGHT / 2.0),
        num(HEIGHT / 2.0)
    );
    let _ = writeln!(
        svg,
        r#"<polyline id="logM" points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#,
        points(|r| r.log_m)
    );
    let _ = writeln!(
        svg,
        r#"<polyline id="logN" points="{}" fill="none" stroke="firebrick" stroke-width="1.5"/>"#,
        points(|r| r.log_n)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="12" fill="steelblue">log M</text>"#,
        num(PAD + 10.0),
        num(PAD + 10.0)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="12" fill="firebrick">log N</text>"#,
        num(PAD + 10.0),
        num(PAD + 26.0)
    );
    svg.push_str("</svg>\n");
    svg
}

/// Image curves `f(|z| = r)` with optional spiral overlays, in the `w`-plane
/// (imaginary axis up).
pub fn domain_svg(curves: &[(f64, PolygonCurve)], spirals: &[Vec<Complex64>]) -> String {
    let all = curves
        .iter()
        .flat_map(|(_, c)| c.vertices().iter().copied())
        .chain(spirals.iter().flatten().copied());
    let (mut lo, mut hi) = (
        Complex64::new(f64::MAX, f64::MAX),
        Complex64::new(f64::MIN, f64::MIN),
    );
    for w in all {
        lo = Complex64::new(lo.re.min(w.re), lo.im.min(w.im));
        hi = Complex64::new(hi.re.max(w.re), hi.im.max(w.im));
    }
    if lo.re > hi.re {
        lo = Complex64::new(-1.0, -1.0);
        hi = Complex64::new(1.0, 1.0);
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-9);
    let margin = 0.05 * span;
    let (vx, vy, vs) = (lo.re - margin, -(hi.im + margin), span + 2.0 * margin);
    let stroke = vs / 400.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="600" height="600" viewBox="{} {} {} {}">"#,
        num(vx),
        num(vy),
        num(vs),
        num(vs)
    );
    let _ = writeln!(svg, r#"<g transform="scale(1,-1)">"#);
    let _ = writeln!(
        svg,
        r#"<path d="M{} 0 L{} 0 M0 {} L0 {}" stroke="gray" stroke-width="{}" fill="none"/>"#,
        num(vx),
        num(vx + vs),
        num(-vy - vs),
        num(-vy),
        num(stroke / 2.0)
    );
    for (r, curve) in curves {
        let d: Vec<String> = curve
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                format!(
                    "{}{} {}",
                    if i == 0 { 'M' } else { 'L' },
                    num(v.re),
                    num(v.im)
                )
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<path class="curve" data-r="{}" d="{} Z" stroke="black" stroke-width="{}" fill="none"/>"#,
            r,
            d.join(" "),
            num(stroke)
        );
    }
    for s in spirals {
        let pts: Vec<String> = s
            .iter()
            .map(|w| format!("{},{}", num(w.re), num(w.im)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="spiral" points="{}" stroke="firebrick" stroke-width="{}" fill="none"/>"#,
            pts.join(" "),
            num(stroke / 2.0)
        );
    }
    svg.push_str("</g>\n</svg>\n");
    svg
}

/// CSV `r,theta,re,im` over all curves.
pub fn domain_csv(curves: &[(f64, PolygonCurve)]) -> String {
    let mut out = String::from("r,theta,re,im\n");
    for (r, curve) in curves {
        for line in curve.to_csv().lines().skip(1) {
            let _ = writeln!(out, "{r},{line}");
        }
    }
    out
}
