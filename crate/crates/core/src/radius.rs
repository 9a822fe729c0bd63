//! Radius of hereditary spirallikeness.
//!
//! `g(r) = min_{|z|=r} Re(e^{−iλ} Df/f)` is continuous off the origin, so the
//! first radius where the property breaks is a sign change of `g`. The search
//! brackets that sign change on `[0.05, 0.9999]` and shrinks the bracket with
//! a safeguarded false-position step (Illinois variant, bisection whenever the
//! bracket fails to halve). It finishes by re-checking radii below the lower
//! end so that an earlier, narrower violation is not skipped.

use std::f64::consts::TAU;
use std::io::Write;

use rayon::prelude::*;

use crate::classify::{near_origin_check, spiral_quotient, ClassifyError};
use crate::geometry::SpiralFrame;
use crate::harmonic::HarmonicMap;
use crate::report::fmt9;

pub const DEFAULT_ANGLES: usize = 4096;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const SEARCH_LOW: f64 = 0.05;
pub const SEARCH_HIGH: f64 = 0.9999;
/// Smallest radius tried when the circle minimum is already negative at
/// [`SEARCH_LOW`].
pub const SEARCH_FLOOR: f64 = 1e-8;
pub const ANGLE_TOL: f64 = 1e-10;
pub const REVERIFY_RADII: usize = 8;
const MAX_ITERATIONS: usize = 400;
/// The bracket is shrunk to `tol / CLOSE_FACTOR` so both ends sit close to
/// the sign change, not only within `tol` of each other.
const CLOSE_FACTOR: f64 = 10.0;

/// Settings of the radius search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusConfig {
    pub tol: f64,
    pub angles: usize,
}

impl Default for RadiusConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            angles: DEFAULT_ANGLES,
        }
    }
}

/// A bracket `lower < r* ≤ upper` with `upper − lower ≤ tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusResult {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    /// Angle of the circle minimum at `upper`, in `(−π, π]`.
    pub argmin: f64,
    /// Circle minima at the two ends.
    pub value_lower: f64,
    pub value_upper: f64,
    pub criterion: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RadiusOutcome {
    Bracket(RadiusResult),
    /// The circle minimum stays positive up to [`SEARCH_HIGH`].
    NoViolation {
        criterion: String,
        min_at_high: f64,
    },
    /// Already violated at [`SEARCH_LOW`] or in the origin limit set: the
    /// radius is 0.
    ViolatedNearOrigin {
        criterion: String,
        value: f64,
    },
}

impl RadiusOutcome {
    pub fn bracket(&self) -> Option<&RadiusResult> {
        match self {
            Self::Bracket(r) => Some(r),
            _ => None,
        }
    }

    pub fn criterion(&self) -> &str {
        match self {
            Self::Bracket(r) => &r.criterion,
            Self::NoViolation { criterion, .. } | Self::ViolatedNearOrigin { criterion, .. } => {
                criterion
            }
        }
    }

    /// Point estimate: bracket midpoint, 1 or 0.
    pub fn radius(&self) -> f64 {
        match self {
            Self::Bracket(r) => 0.5 * (r.lower + r.upper),
            Self::NoViolation { .. } => 1.0,
            Self::ViolatedNearOrigin { .. } => 0.0,
        }
    }

    pub fn report(&self) -> String {
        match self {
            Self::Bracket(r) => format!(
                "criterion: {}\nresult: BRACKET\nlower: {}\nupper: {}\nwidth: {}\niterations: {}\nargmin: {}\nmin_lower: {}\nmin_upper: {}\n",
                r.criterion,
                fmt9(r.lower),
                fmt9(r.upper),
                fmt9(r.upper - r.lower),
                r.iterations,
                fmt9(r.argmin),
                fmt9(r.value_lower),
                fmt9(r.value_upper)
            ),
            Self::NoViolation { criterion, min_at_high } => format!(
                "criterion: {criterion}\nresult: NO-VIOLATION\nradius: 1\nmin_at_{}: {}\n",
                SEARCH_HIGH,
                fmt9(*min_at_high)
            ),
            Self::ViolatedNearOrigin { criterion, value } => format!(
                "criterion: {criterion}\nresult: VIOLATED-NEAR-ORIGIN\nradius: 0\nmin_near_origin: {}\n",
                fmt9(*value)
            ),
        }
    }

    pub const CSV_HEADER: &'static str = "criterion,result,lower,upper,iterations,argmin";

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        let line = match self {
            Self::Bracket(r) => format!(
                "{},BRACKET,{},{},{},{}",
                r.criterion, r.lower, r.upper, r.iterations, r.argmin
            ),
            Self::NoViolation { criterion, .. } => format!("{criterion},NO-VIOLATION,1,1,0,"),
            Self::ViolatedNearOrigin { criterion, .. } => {
                format!("{criterion},VIOLATED-NEAR-ORIGIN,0,0,0,")
            }
        };
        writeln!(out, "{line}")
    }
}

/// Minimum of the spiral quotient over `|z| = r` with [`DEFAULT_ANGLES`]
/// samples and golden-section refinement; returns `(value, angle)`.
pub fn min_quotient_on_circle(
    f: &HarmonicMap,
    frame: &SpiralFrame,
    r: f64,
) -> Result<(f64, f64), ClassifyError> {
    min_quotient_on_circle_with(f, frame, r, DEFAULT_ANGLES)
}

pub fn min_quotient_on_circle_with(
    f: &HarmonicMap,
    frame: &SpiralFrame,
    r: f64,
    angles: usize,
) -> Result<(f64, f64), ClassifyError> {
    assert!(r > 0.0 && r < 1.0, "radius {r} outside (0, 1)");
    let q = |theta: f64| spiral_quotient(f, num_complex::Complex64::from_polar(r, theta), frame);
    let step = TAU / angles as f64;
    let (best, j) = (0..angles)
        .into_par_iter()
        .map(|j| q(step * j as f64).map(|v| (v, j)))
        .try_reduce(
            || (f64::INFINITY, usize::MAX),
            |a, b| {
                Ok(if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                })
            },
        )?;

    // golden section on [θ_j − step, θ_j + step]
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let centre = step * j as f64;
    let (mut lo, mut hi) = (centre - step, centre + step);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = q(x1)?;
    let mut f2 = q(x2)?;
    while hi - lo > ANGLE_TOL {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = q(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = q(x2)?;
        }
    }
    let (value, angle) =
        [(best, centre), (f1, x1), (f2, x2)]
            .into_iter()
            .fold(
                (f64::INFINITY, 0.0),
                |acc, c| if c.0 < acc.0 { c } else { acc },
            );
    Ok((value, crate::geometry::principal(angle)))
}

fn frame_tag(frame: &SpiralFrame) -> String {
    format!("spirallike lambda={}", fmt9(frame.lambda()))
}

/// Largest `r` with the hereditary λ-spirallike condition on `𝔻_r`.
pub fn find_radius(
    f: &HarmonicMap,
    frame: &SpiralFrame,
    tol: f64,
) -> Result<RadiusOutcome, ClassifyError> {
    find_radius_with(
        f,
        frame,
        &RadiusConfig {
            tol,
            ..RadiusConfig::default()
        },
    )
}

pub fn find_radius_with(
    f: &HarmonicMap,
    frame: &SpiralFrame,
    config: &RadiusConfig,
) -> Result<RadiusOutcome, ClassifyError> {
    let criterion = frame_tag(frame);
    let tol = config.tol;
    assert!(tol > 0.0, "tolerance must be positive");
    let g = |r: f64| min_quotient_on_circle_with(f, frame, r, config.angles);

    let origin = near_origin_check(f, frame, f64::MIN_POSITIVE);
    if !origin.is_pass() {
        return Ok(RadiusOutcome::ViolatedNearOrigin {
            criterion,
            value: origin.margin(),
        });
    }
    let (g_low, arg_low) = g(SEARCH_LOW)?;
    if g_low <= 0.0 {
        // the limit at 0 is fine, so the first violation lies below SEARCH_LOW
        let (mut hi, mut g_hi, mut arg_hi) = (SEARCH_LOW, g_low, arg_low);
        let mut lo = SEARCH_LOW / 2.0;
        while lo >= SEARCH_FLOOR {
            let (g_lo, arg_lo) = g(lo)?;
            if g_lo > 0.0 {
                return bracket_search(&g, (lo, g_lo), (hi, g_hi, arg_hi), tol, criterion)
                    .map(RadiusOutcome::Bracket);
            }
            (hi, g_hi, arg_hi) = (lo, g_lo, arg_lo);
            lo /= 2.0;
        }
        return Ok(RadiusOutcome::ViolatedNearOrigin {
            criterion,
            value: g_hi,
        });
    }
    let (g_high, arg_high) = g(SEARCH_HIGH)?;
    if g_high > 0.0 {
        // a violation could still hide strictly inside; scan a coarse ladder
        let hidden = first_failing_below(&g, SEARCH_LOW, SEARCH_HIGH, 64)?;
        match hidden {
            None => {
                return Ok(RadiusOutcome::NoViolation {
                    criterion,
                    min_at_high: g_high,
                })
            }
            Some((lo, glo, hi, ghi, arg)) => {
                return bracket_search(&g, (lo, glo), (hi, ghi, arg), tol, criterion)
                    .map(RadiusOutcome::Bracket);
            }
        }
    }
    bracket_search(
        &g,
        (SEARCH_LOW, g_low),
        (SEARCH_HIGH, g_high, arg_high),
        tol,
        criterion,
    )
    .map(RadiusOutcome::Bracket)
}

type Probe = (f64, f64, f64, f64, f64);

/// Smallest failing radius among `count` evenly spaced radii in `(lo, hi)`,
/// returned with its passing predecessor.
fn first_failing_below<G>(
    g: &G,
    lo: f64,
    hi: f64,
    count: usize,
) -> Result<Option<Probe>, ClassifyError>
where
    G: Fn(f64) -> Result<(f64, f64), ClassifyError> + Sync,
{
    let radii: Vec<f64> = (1..=count)
        .map(|k| lo + (hi - lo) * k as f64 / (count + 1) as f64)
        .collect();
    let values: Vec<(f64, f64)> = radii.par_iter().map(|&r| g(r)).collect::<Result<_, _>>()?;
    let mut prev = (lo, g(lo)?.0);
    for (&r, &(v, arg)) in radii.iter().zip(&values) {
        if v <= 0.0 {
            return Ok(Some((prev.0, prev.1, r, v, arg)));
        }
        prev = (r, v);
    }
    Ok(None)
}

fn bracket_search<G>(
    g: &G,
    low: (f64, f64),
    high: (f64, f64, f64),
    tol: f64,
    criterion: String,
) -> Result<RadiusResult, ClassifyError>
where
    G: Fn(f64) -> Result<(f64, f64), ClassifyError> + Sync,
{
    let (mut a, mut ga) = low;
    let (mut b, mut gb, _) = high;
    let mut iterations = 0;
    let target = tol / CLOSE_FACTOR;
    loop {
        let mut side = 0i8;
        let mut last_width = b - a;
        while b - a > target {
            assert!(ga > 0.0 && gb <= 0.0, "bracket lost its sign change");
            iterations += 1;
            if iterations > MAX_ITERATIONS {
                break;
            }
            let width = b - a;
            let mut x = (a * gb - b * ga) / (gb - ga);
            // keep the trial point away from the ends so the bracket closes
            let guard = 0.25 * target;
            if !(x > a + guard && x < b - guard) {
                x = 0.5 * (a + b);
            } else if x - a < guard * 2.0 {
                x = a + guard;
            } else if b - x < guard * 2.0 {
                x = b - guard;
            }
            if width > 0.5 * last_width && side != 0 && iterations % 3 == 0 {
                x = 0.5 * (a + b);
            }
            last_width = width;
            let (gx, _) = g(x)?;
            if gx > 0.0 {
                a = x;
                ga = gx;
                if side == 1 {
                    gb *= 0.5;
                }
                side = 1;
            } else {
                b = x;
                gb = gx;
                if side == -1 {
                    ga *= 0.5;
                }
                side = -1;
            }
        }
        // the halved end values are only for the step rule; refresh them
        ga = g(a)?.0;
        let (gb_fresh, arg_b) = g(b)?;
        gb = gb_fresh;

        match first_failing_below(g, SEARCH_LOW.min(0.5 * a), a, REVERIFY_RADII)? {
            None => {
                assert!(ga > 0.0 && gb <= 0.0, "bracket lost its sign change");
                return Ok(RadiusResult {
                    lower: a,
                    upper: b,
                    iterations,
                    argmin: arg_b,
                    value_lower: ga,
                    value_upper: gb,
                    criterion,
                });
            }
            Some((lo, glo, hi, ghi, _)) => {
                a = lo;
                ga = glo;
                b = hi;
                gb = ghi;
            }
        }
    }
}

/// Radius of hereditary strong starlikeness of order `α`: the smaller of the
/// two radii at `λ = ±π(1−α)/2`.
pub fn find_radius_strong(
    f: &HarmonicMap,
    alpha: f64,
    tol: f64,
) -> Result<RadiusOutcome, ClassifyError> {
    find_radius_strong_with(
        f,
        alpha,
        &RadiusConfig {
            tol,
            ..RadiusConfig::default()
        },
    )
}

pub fn find_radius_strong_with(
    f: &HarmonicMap,
    alpha: f64,
    config: &RadiusConfig,
) -> Result<RadiusOutcome, ClassifyError> {
    let [plus, minus] = SpiralFrame::strong_pair(alpha)?;
    let criterion = format!("strongly starlike alpha={}", fmt9(alpha));
    let p = find_radius_with(f, &plus, config)?;
    let m = find_radius_with(f, &minus, config)?;
    use RadiusOutcome::*;
    Ok(match (p, m) {
        (ViolatedNearOrigin { value: v1, .. }, ViolatedNearOrigin { value: v2, .. }) => {
            ViolatedNearOrigin {
                criterion,
                value: v1.min(v2),
            }
        }
        (ViolatedNearOrigin { value, .. }, _) | (_, ViolatedNearOrigin { value, .. }) => {
            ViolatedNearOrigin { criterion, value }
        }
        (NoViolation { min_at_high: a, .. }, NoViolation { min_at_high: b, .. }) => NoViolation {
            criterion,
            min_at_high: a.min(b),
        },
        (Bracket(r), NoViolation { .. }) | (NoViolation { .. }, Bracket(r)) => {
            Bracket(RadiusResult { criterion, ..r })
        }
        (Bracket(r1), Bracket(r2)) => {
            // both brackets have width ≤ tol, so [min lower, min upper] does too
            let lead = if r2.upper < r1.upper { &r2 } else { &r1 };
            let (lower, value_lower) = if r2.lower < r1.lower {
                (r2.lower, r2.value_lower)
            } else {
                (r1.lower, r1.value_lower)
            };
            Bracket(RadiusResult {
                lower,
                upper: lead.upper,
                iterations: r1.iterations + r2.iterations,
                argmin: lead.argmin,
                value_lower,
                value_upper: lead.value_upper,
                criterion,
            })
        }
    })
}
