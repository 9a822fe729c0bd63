//! λ-arguments, logarithmic spirals, the region `V_α`, polygon winding
//! numbers, and the brute-force domain oracles.
//!
//! The oracles here decide spirallikeness of a discretized image curve by
//! walking λ-spiral segments toward the origin and checking that they never
//! leave the polygon. They use no derivative information at all, which is
//! what makes them useful as an independent check on the analytic criteria
//! in [`crate::classify`].

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::harmonic::HarmonicMap;
use crate::verdict::Verdict;

/// Points closer than this to a polyline are treated as lying on it.
pub const PROXIMITY: f64 = 1e-12;

/// Inner radius at which spiral segments are cut off.
pub const SPIRAL_EPSILON: f64 = 1e-6;

/// Default polygon resolution for image curves.
pub const DEFAULT_VERTICES: usize = 2048;

/// Default number of probe points per oracle run.
pub const DEFAULT_PROBES: usize = 256;

/// Default number of samples along each spiral segment.
pub const DEFAULT_SPIRAL_SAMPLES: usize = 4096;

/// Vertices used to discretize the boundary of `V_α`.
pub const V_ALPHA_VERTICES: usize = 8192;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("spiral tilt must satisfy |λ| < π/2, got {0}")]
    LambdaRange(f64),
    #[error("λ-argument of 0 is undefined")]
    ZeroArgument,
    #[error("consecutive λ-arguments jump by {jump} at sample {index}; sampling is too coarse")]
    UnwrapJump { index: usize, jump: f64 },
    #[error("point {point} lies within {distance:e} of the curve")]
    NearCurve { point: Complex64, distance: f64 },
    #[error("α must lie in (0, 1), got {0}")]
    AlphaRange(f64),
    #[error("polygon needs at least 3 vertices")]
    DegeneratePolygon,
}

/// A tilt angle `λ`, `|λ| < π/2`, with the quantities the criteria reuse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralFrame {
    lambda: f64,
    tan: f64,
    cos: f64,
    e_i: Complex64,
    e_2i: Complex64,
}

impl SpiralFrame {
    pub fn new(lambda: f64) -> Result<Self, GeometryError> {
        if !(lambda.abs() < FRAC_PI_2) {
            return Err(GeometryError::LambdaRange(lambda));
        }
        Ok(Self {
            lambda,
            tan: lambda.tan(),
            cos: lambda.cos(),
            e_i: Complex64::from_polar(1.0, lambda),
            e_2i: Complex64::from_polar(1.0, 2.0 * lambda),
        })
    }

    /// The starlike frame `λ = 0`.
    pub fn starlike() -> Self {
        Self::new(0.0).expect("0 is a valid tilt")
    }

    /// Frames `λ = ±π(1−α)/2` whose intersection is strong starlikeness of
    /// order `α`.
    pub fn strong_pair(alpha: f64) -> Result<[Self; 2], GeometryError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(GeometryError::AlphaRange(alpha));
        }
        let lambda = FRAC_PI_2 * (1.0 - alpha);
        Ok([Self::new(lambda)?, Self::new(-lambda)?])
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn tan(&self) -> f64 {
        self.tan
    }

    pub fn cos(&self) -> f64 {
        self.cos
    }

    /// `e^{iλ}`
    pub fn e_i(&self) -> Complex64 {
        self.e_i
    }

    /// `e^{2iλ}`
    pub fn e_2i(&self) -> Complex64 {
        self.e_2i
    }

    /// Mirror image `c = −e^{2iλ}` of 1 in the boundary line of the
    /// half-plane `Re(e^{−iλ} w) > 0`.
    pub fn mirror(&self) -> Complex64 {
        -self.e_2i
    }

    /// Point at parameter `t` on the λ-spiral through `w0`.
    pub fn spiral_point(&self, w0: Complex64, t: f64) -> Complex64 {
        w0 * (self.e_i * t).exp()
    }
}

/// Reduction of an angle to `(−π, π]`.
pub fn principal(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

/// `arg w − tan λ · log|w|`, reduced to `(−π, π]`.
pub fn lambda_arg(w: Complex64, frame: &SpiralFrame) -> Result<f64, GeometryError> {
    if w == Complex64::new(0.0, 0.0) {
        return Err(GeometryError::ZeroArgument);
    }
    Ok(principal(w.arg() - frame.tan * w.norm().ln()))
}

/// Continuous branch of the λ-argument along a sample sequence.
pub fn unwrap_lambda_arg(
    samples: &[Complex64],
    frame: &SpiralFrame,
) -> Result<Vec<f64>, GeometryError> {
    let mut out = Vec::with_capacity(samples.len());
    let mut prev_raw = None;
    for (index, &w) in samples.iter().enumerate() {
        let raw = lambda_arg(w, frame)?;
        match prev_raw {
            None => out.push(raw),
            Some(prev) => {
                let jump = principal(raw - prev);
                if jump.abs() >= PI - 1e-12 {
                    return Err(GeometryError::UnwrapJump { index, jump });
                }
                let last = *out.last().expect("non-empty after first sample");
                out.push(last + jump);
            }
        }
        prev_raw = Some(raw);
    }
    Ok(out)
}

/// The λ-spiral segment from `w0` toward the origin, sampled at `m` points
/// `t_0 = 0 > t_1 > … > t_{m−1} = −T`, with `T` chosen so the last sample
/// has modulus [`SPIRAL_EPSILON`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralSegment {
    pub endpoint: Complex64,
    pub frame: SpiralFrame,
    pub samples: usize,
}

impl SpiralSegment {
    pub fn new(endpoint: Complex64, frame: SpiralFrame, samples: usize) -> Self {
        Self {
            endpoint,
            frame,
            samples: samples.max(2),
        }
    }

    /// `T = log(|w₀|/ε)/cos λ`, zero when `|w₀| ≤ ε`.
    pub fn cutoff(&self) -> f64 {
        ((self.endpoint.norm() / SPIRAL_EPSILON).ln() / self.frame.cos).max(0.0)
    }

    pub fn parameters(&self) -> impl Iterator<Item = f64> + '_ {
        let t_max = self.cutoff();
        let last = (self.samples - 1) as f64;
        (0..self.samples).map(move |k| -t_max * k as f64 / last)
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.parameters()
            .map(|t| (t, self.frame.spiral_point(self.endpoint, t)))
    }
}

/// Closed polygon; the last vertex connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonCurve {
    vertices: Vec<Complex64>,
    params: Option<Vec<f64>>,
    positive: bool,
}

impl PolygonCurve {
    pub fn new(vertices: Vec<Complex64>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::DegeneratePolygon);
        }
        let positive = signed_area(&vertices) > 0.0;
        Ok(Self {
            vertices,
            params: None,
            positive,
        })
    }

    /// The image `f(r e^{iθ_k})`, `θ_k = 2πk/count`.
    pub fn from_map(f: &HarmonicMap, r: f64, count: usize) -> Result<Self, GeometryError> {
        let params: Vec<f64> = (0..count).map(|k| TAU * k as f64 / count as f64).collect();
        let vertices = params
            .iter()
            .map(|&t| f.eval_f(Complex64::from_polar(r, t)))
            .collect();
        let mut curve = Self::new(vertices)?;
        curve.params = Some(params);
        Ok(curve)
    }

    /// Regular polygon inscribed in the circle `|w| = radius`.
    pub fn circle(radius: f64, count: usize) -> Result<Self, GeometryError> {
        Self::from_map(&HarmonicMap::identity(), radius, count)
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn is_positively_oriented(&self) -> bool {
        self.positive
    }

    fn edges(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Winding number about `w` from the summed signed edge angles.
    pub fn winding_number(&self, w: Complex64) -> Result<i32, GeometryError> {
        let mut total = 0.0;
        for (a, b) in self.edges() {
            let d = segment_distance(w, a, b);
            if d < PROXIMITY {
                return Err(GeometryError::NearCurve {
                    point: w,
                    distance: d,
                });
            }
            let u = a - w;
            let v = b - w;
            total += (u.re * v.im - u.im * v.re).atan2(u.re * v.re + u.im * v.im);
        }
        Ok((total / TAU).round() as i32)
    }

    /// Winding number and distance to the curve in one pass, using signed
    /// crossings of the rightward ray. Agrees with [`Self::winding_number`]
    /// away from the curve.
    pub fn winding_and_distance(&self, w: Complex64) -> Result<(i32, f64), GeometryError> {
        let mut winding = 0;
        let mut dist_sq = f64::INFINITY;
        for (a, b) in self.edges() {
            dist_sq = dist_sq.min(segment_distance_sq(w, a, b));
            let is_left = (b.re - a.re) * (w.im - a.im) - (w.re - a.re) * (b.im - a.im);
            if a.im <= w.im {
                if b.im > w.im && is_left > 0.0 {
                    winding += 1;
                }
            } else if b.im <= w.im && is_left < 0.0 {
                winding -= 1;
            }
        }
        let distance = dist_sq.sqrt();
        if distance < PROXIMITY {
            return Err(GeometryError::NearCurve { point: w, distance });
        }
        Ok((winding, distance))
    }

    /// Distance from `w` to the polyline.
    pub fn distance(&self, w: Complex64) -> f64 {
        self.edges()
            .map(|(a, b)| segment_distance_sq(w, a, b))
            .fold(f64::INFINITY, f64::min)
            .sqrt()
    }

    /// SVG path data in mathematical coordinates (`M x y L … Z`).
    pub fn to_svg_path(&self) -> String {
        let mut d = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{} {} ", v.re, v.im);
        }
        d.push('Z');
        d
    }

    /// CSV `theta,re,im`, one row per vertex.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,re,im\n");
        let n = self.vertices.len();
        for (k, v) in self.vertices.iter().enumerate() {
            let theta = match &self.params {
                Some(p) => p[k],
                None => TAU * k as f64 / n as f64,
            };
            let _ = writeln!(out, "{theta},{},{}", v.re, v.im);
        }
        out
    }
}

fn signed_area(vertices: &[Complex64]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            a.re * b.im - b.re * a.im
        })
        .sum::<f64>()
        * 0.5
}

fn segment_distance_sq(w: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sqr();
    let t = if len_sq == 0.0 {
        0.0
    } else {
        (((w - a) * ab.conj()).re / len_sq).clamp(0.0, 1.0)
    };
    (a + ab * t - w).norm_sqr()
}

fn segment_distance(w: Complex64, a: Complex64, b: Complex64) -> f64 {
    segment_distance_sq(w, a, b).sqrt()
}

/// Boundary of `V_α`: the arcs `e^{(−τ+i)θ}`, `0 ≤ θ ≤ π`, and
/// `e^{(τ+i)θ}`, `−π ≤ θ ≤ 0`, with `τ = tan(πα/2)`.
pub fn v_alpha_boundary(alpha: f64, vertices: usize) -> Result<PolygonCurve, GeometryError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(GeometryError::AlphaRange(alpha));
    }
    let tau = (FRAC_PI_2 * alpha).tan();
    let half = (vertices / 2).max(2);
    let mut pts = Vec::with_capacity(2 * half);
    for j in 0..half {
        let theta = PI * j as f64 / half as f64;
        pts.push((Complex64::new(-tau, 1.0) * theta).exp());
    }
    for j in 0..half {
        let theta = -PI + PI * j as f64 / half as f64;
        pts.push((Complex64::new(tau, 1.0) * theta).exp());
    }
    PolygonCurve::new(pts)
}

/// Membership in `V_α` by the winding number of its discretized boundary.
pub fn in_v_alpha(w: Complex64, alpha: f64) -> Result<bool, GeometryError> {
    let boundary = v_alpha_boundary(alpha, V_ALPHA_VERTICES)?;
    Ok(boundary.winding_number(w)? == 1)
}

/// Witness of a spiral segment leaving the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralExit {
    /// Interior point whose spiral segment leaves the domain.
    pub probe: Complex64,
    /// Parameter (relative to the probe) of the first exterior sample.
    pub t: f64,
    /// The exterior sample itself.
    pub exit: Complex64,
    /// Its distance to the curve.
    pub depth: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum ProbeOutcome {
    Inside,
    Exit(SpiralExit),
    NearCurve,
}

/// Sampling plan of the polygon oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub probes: usize,
    pub spiral_samples: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            probes: DEFAULT_PROBES,
            spiral_samples: DEFAULT_SPIRAL_SAMPLES,
        }
    }
}

/// Walk the inward spiral from the boundary vertex `start`.
///
/// Samples that begin outside the polygon (the spiral leaving the vertex
/// outward) are skipped; the first interior sample becomes the probe, and
/// any later exterior sample is an exit. A sample at distance `d` from the
/// curve certifies every later sample within spiral arc length `d`, since
/// the arc between them stays inside the disk of radius `d`; those samples
/// are not re-evaluated. Once the spiral enters the disk about the origin
/// that misses the curve, the rest of the segment is inside.
fn walk_spiral(
    curve: &PolygonCurve,
    frame: &SpiralFrame,
    start: Complex64,
    samples: usize,
    inner_radius: f64,
    inside_sign: i32,
) -> ProbeOutcome {
    let segment = SpiralSegment::new(start, *frame, samples);
    let cutoff = segment.cutoff();
    if cutoff == 0.0 {
        return ProbeOutcome::Inside;
    }
    let dt = cutoff / (segment.samples - 1) as f64;
    let mut probe: Option<(Complex64, f64)> = None;
    let mut certified_until = f64::INFINITY;
    // arc length from t = 0 to t: |w0| (1 − e^{t cos λ}) / cos λ
    let arc = |t: f64| start.norm() * (1.0 - (t * frame.cos).exp()) / frame.cos;
    for k in 1..segment.samples {
        let t = -dt * k as f64;
        let w = frame.spiral_point(start, t);
        if w.norm() < inner_radius {
            return ProbeOutcome::Inside;
        }
        let s = arc(t);
        if probe.is_some() && s <= certified_until {
            continue;
        }
        match curve.winding_and_distance(w) {
            Err(_) => return ProbeOutcome::NearCurve,
            Ok((winding, distance)) => {
                let inside = winding == inside_sign;
                match probe {
                    None if inside => {
                        probe = Some((w, t));
                        certified_until = s + distance;
                    }
                    None => {}
                    Some(_) if inside => certified_until = s + distance,
                    Some((p, tp)) => {
                        return ProbeOutcome::Exit(SpiralExit {
                            probe: p,
                            t: t - tp,
                            exit: w,
                            depth: distance,
                        })
                    }
                }
            }
        }
    }
    ProbeOutcome::Inside
}

/// Geometric λ-spirallikeness test of the domain bounded by `curve`.
///
/// Probes start from `probes` evenly spaced boundary vertices; see
/// [`walk_spiral`] for the walk itself. FAIL witnesses are the probe of the
/// lowest-index failing vertex, so the result does not depend on the order
/// in which probes are evaluated. Polygon verdicts carry no analytic
/// margin: PASS reports 0 and FAIL reports minus the exit depth.
pub fn spirallike_polygon_oracle(
    curve: &PolygonCurve,
    frame: &SpiralFrame,
    config: &OracleConfig,
) -> (Verdict, Option<SpiralExit>) {
    let resolution = format!(
        "polygon {} vertices, {} probes, {} spiral samples",
        curve.vertices.len(),
        config.probes,
        config.spiral_samples
    );
    let method = format!("polygon-oracle λ={}", frame.lambda);
    let origin = Complex64::new(0.0, 0.0);
    let inside_sign = match curve.winding_and_distance(origin) {
        Ok((w, _)) if w == 1 || w == -1 => w,
        _ => {
            return (
                Verdict::inconclusive(
                    Some(origin),
                    0.0,
                    method + " (origin not enclosed)",
                    resolution,
                ),
                None,
            )
        }
    };
    let inner_radius = curve.distance(origin);
    let n = curve.vertices.len();
    let probes = config.probes.clamp(1, n);
    let outcomes: Vec<ProbeOutcome> = (0..probes)
        .into_par_iter()
        .map(|p| {
            let start = curve.vertices[p * n / probes];
            walk_spiral(
                curve,
                frame,
                start,
                config.spiral_samples,
                inner_radius,
                inside_sign,
            )
        })
        .collect();
    if let Some(exit) = outcomes.iter().find_map(|o| match o {
        ProbeOutcome::Exit(e) => Some(*e),
        _ => None,
    }) {
        return (
            Verdict::fail(exit.probe, -exit.depth, method, resolution),
            Some(exit),
        );
    }
    if outcomes.contains(&ProbeOutcome::NearCurve) {
        return (
            Verdict::inconclusive(None, 0.0, method + " (sample on curve)", resolution),
            None,
        );
    }
    (Verdict::pass(0.0, method, resolution), None)
}

/// Geometric strong starlikeness of order `α`: both frames `±π(1−α)/2`.
pub fn strongly_starlike_polygon_oracle(
    curve: &PolygonCurve,
    alpha: f64,
    config: &OracleConfig,
) -> Result<(Verdict, Option<SpiralExit>), GeometryError> {
    let [plus, minus] = SpiralFrame::strong_pair(alpha)?;
    let (v_plus, e_plus) = spirallike_polygon_oracle(curve, &plus, config);
    let (v_minus, e_minus) = spirallike_polygon_oracle(curve, &minus, config);
    let exit = if v_plus.is_fail() { e_plus } else { e_minus };
    Ok((v_plus.and(v_minus), exit))
}
