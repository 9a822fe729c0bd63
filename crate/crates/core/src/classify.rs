//! Analytic classification of harmonic maps.
//!
//! For a normalized `f = h + conj(g)` with nonvanishing Jacobian and no
//! zeros off the origin, hereditary λ-spirallikeness is equivalent to
//!
//! ```text
//! Re(e^{−iλ} Df(z)/f(z)) > 0,   0 < |z| < 1,
//! ```
//!
//! and hereditary strong starlikeness of order `α` to the same condition at
//! both tilts `λ = ±π(1−α)/2`, i.e. `|arg Df/f| < πα/2`. The grid checks
//! here sample that condition; PASS is a sampled certificate with a declared
//! margin, not a proof. The coefficient conditions are genuine sufficient
//! conditions for polynomial maps, and the convolution tests re-express the
//! half-plane condition as non-vanishing of `f * φ_{λ,ζ}`.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{seq_a, seq_b, AlphaParam, BoundsError};
use crate::geometry::{GeometryError, SpiralFrame};
use crate::harmonic::HarmonicMap;
use crate::series::Kernel;
use crate::verdict::Verdict;

/// `|f(z)|` below this counts as a zero of `f`.
pub const ZERO_F: f64 = 1e-14;

/// Direction samples in the origin limit-set check.
pub const NEAR_ORIGIN_SAMPLES: usize = 720;

/// Local density multiplier of the refinement pass.
pub const REFINE_FACTOR: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("|f(z)| = {modulus:e} at z = {z}; the quotient Df/f is undefined")]
    ZeroOfF { z: Complex64, modulus: f64 },
    #[error("f(z) = Df(z) = 0 at z = {0}")]
    Degenerate(Complex64),
    #[error("map is not normalized (need h(0) = 0, h'(0) = 1, g(0) = 0)")]
    NotNormalized,
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

/// Radial/angular sampling plan for the grid checks.
///
/// Radii are geometric between `r_min` and `r_max`; angles are uniform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub radial: usize,
    pub angular: usize,
    pub refinement: usize,
    pub margin: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            r_min: 0.05,
            r_max: 0.995,
            radial: 64,
            angular: 512,
            refinement: 1,
            margin: 1e-9,
        }
    }
}

impl GridSpec {
    /// The default grid with a different outer radius.
    pub fn up_to(r_max: f64) -> Self {
        Self {
            r_max,
            r_min: Self::default().r_min.min(0.5 * r_max),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), ClassifyError> {
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.r_max < 1.0) {
            return Err(ClassifyError::Grid(format!(
                "need 0 < r_min < r_max < 1, got r_min = {}, r_max = {}",
                self.r_min, self.r_max
            )));
        }
        if self.radial < 16 || self.angular < 16 {
            return Err(ClassifyError::Grid(format!(
                "need at least 16 radial and angular samples, got {} x {}",
                self.radial, self.angular
            )));
        }
        if !(self.margin > 0.0) {
            return Err(ClassifyError::Grid(format!(
                "margin must be positive, got {}",
                self.margin
            )));
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<f64> {
        let ratio = (self.r_max / self.r_min).ln();
        let last = (self.radial - 1) as f64;
        (0..self.radial)
            .map(|i| {
                if i + 1 == self.radial {
                    self.r_max
                } else {
                    self.r_min * (ratio * i as f64 / last).exp()
                }
            })
            .collect()
    }

    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.angular as f64
    }

    pub fn circle(&self, r: f64) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.angular).map(move |j| Complex64::from_polar(r, self.angle(j)))
    }

    pub fn describe(&self) -> String {
        format!(
            "r in [{}, {}], {} radii x {} angles, refinement {} (x{}), eps {:e}",
            self.r_min,
            self.r_max,
            self.radial,
            self.angular,
            self.refinement,
            REFINE_FACTOR,
            self.margin
        )
    }
}

/// `Re(e^{−iλ} Df(z)/f(z))`.
pub fn spiral_quotient(
    f: &HarmonicMap,
    z: Complex64,
    frame: &SpiralFrame,
) -> Result<f64, ClassifyError> {
    let (fz, dfz) = f.eval_f_and_d(z);
    let modulus = fz.norm();
    if modulus < ZERO_F {
        return Err(ClassifyError::ZeroOfF { z, modulus });
    }
    Ok((frame.e_i().conj() * dfz / fz).re)
}

/// Principal argument of `Df(z)/f(z)`.
pub fn arg_quotient(f: &HarmonicMap, z: Complex64) -> Result<f64, ClassifyError> {
    let (fz, dfz) = f.eval_f_and_d(z);
    let modulus = fz.norm();
    if modulus < ZERO_F {
        return Err(ClassifyError::ZeroOfF { z, modulus });
    }
    Ok((dfz / fz).arg())
}

/// Origin limit set of `e^{−iλ} Df/f`.
///
/// With `f ≈ z + conj(b₁ z)`, the quotient tends to
/// `e^{−iλ}(1 − s u)/(1 + s u)` along the direction `u = z̄/z`, with
/// `s = |b₁|` after absorbing the phase of `b₁` into `u`. PASS iff the
/// real part exceeds `ε` on all [`NEAR_ORIGIN_SAMPLES`] directions; the
/// margin is the minimum minus `ε`.
pub fn near_origin_check(f: &HarmonicMap, frame: &SpiralFrame, eps: f64) -> Verdict {
    let resolution = format!("{NEAR_ORIGIN_SAMPLES} directions, eps {eps:e}");
    let b1 = f.b1();
    let s = b1.norm();
    if s >= 1.0 {
        return Verdict::fail(
            Complex64::new(0.0, 0.0),
            -1.0,
            "near-origin (|b1| >= 1)",
            resolution,
        );
    }
    let one = Complex64::new(1.0, 0.0);
    let rot = frame.e_i().conj();
    let mut best = (f64::INFINITY, 0usize);
    for k in 0..NEAR_ORIGIN_SAMPLES {
        let u = Complex64::from_polar(1.0, TAU * k as f64 / NEAR_ORIGIN_SAMPLES as f64);
        let value = (rot * (one - s * u) / (one + s * u)).re;
        if value < best.0 {
            best = (value, k);
        }
    }
    let margin = best.0 - eps;
    if margin > 0.0 {
        return Verdict::pass(margin, "near-origin", resolution);
    }
    // conj(b1) z̄/z = s u  ⇒  e^{−2iθ} = u e^{i arg b1}
    let u_arg = TAU * best.1 as f64 / NEAR_ORIGIN_SAMPLES as f64;
    let theta = -(u_arg + b1.arg()) / 2.0;
    let witness = Complex64::from_polar(1e-6, theta);
    if best.0 < 0.0 {
        Verdict::fail(witness, margin, "near-origin", resolution)
    } else {
        Verdict::inconclusive(Some(witness), margin, "near-origin", resolution)
    }
}

#[derive(Debug, Clone, Copy)]
struct PointEval {
    z: Complex64,
    jacobian: f64,
    quotient: Option<f64>,
}

fn eval_point(f: &HarmonicMap, frame: &SpiralFrame, z: Complex64) -> PointEval {
    PointEval {
        z,
        jacobian: f.jacobian(z),
        quotient: spiral_quotient(f, z, frame).ok(),
    }
}

#[derive(Debug, Clone, Copy)]
struct Extremes {
    min_quotient: (f64, Complex64, usize, usize),
    min_jacobian: (f64, Complex64),
    zero: Option<Complex64>,
}

impl Extremes {
    fn empty() -> Self {
        let origin = Complex64::new(0.0, 0.0);
        Self {
            min_quotient: (f64::INFINITY, origin, 0, 0),
            min_jacobian: (f64::INFINITY, origin),
            zero: None,
        }
    }

    /// Strict comparisons keep the earliest sample on ties.
    fn absorb(&mut self, p: PointEval, i: usize, j: usize) {
        if p.jacobian < self.min_jacobian.0 {
            self.min_jacobian = (p.jacobian, p.z);
        }
        match p.quotient {
            Some(q) if q < self.min_quotient.0 => self.min_quotient = (q, p.z, i, j),
            Some(_) => {}
            None => {
                if self.zero.is_none() {
                    self.zero = Some(p.z);
                }
            }
        }
    }

    fn merge(&mut self, other: &Extremes) {
        if other.min_jacobian.0 < self.min_jacobian.0 {
            self.min_jacobian = other.min_jacobian;
        }
        if other.min_quotient.0 < self.min_quotient.0 {
            self.min_quotient = other.min_quotient;
        }
        if self.zero.is_none() {
            self.zero = other.zero;
        }
    }
}

/// Sampled check of `Re(e^{−iλ} Df/f) > ε` with `J_f > ε` and `f ≠ 0` on the
/// grid, plus the exact origin limit set.
///
/// After the coarse pass, the neighbourhood of the minimizing sample is
/// resampled [`REFINE_FACTOR`] times more densely, `grid.refinement` times.
/// FAIL carries the minimizing sample as its witness (or the offending
/// sample for Jacobian and zero failures); the margin is the minimum
/// observed quotient. A minimum in `[0, ε)` is INCONCLUSIVE.
pub fn check_hereditary_spirallike(
    f: &HarmonicMap,
    frame: &SpiralFrame,
    grid: &GridSpec,
) -> Result<Verdict, ClassifyError> {
    grid.validate()?;
    if !f.is_normalized() {
        return Err(ClassifyError::NotNormalized);
    }
    let resolution = grid.describe();
    let method = format!("grid λ={}", frame.lambda());

    let origin = near_origin_check(f, frame, grid.margin);
    if origin.is_fail() {
        return Ok(origin);
    }

    let radii = grid.radii();
    let per_radius: Vec<Extremes> = radii
        .par_iter()
        .enumerate()
        .map(|(i, &r)| {
            let mut ex = Extremes::empty();
            for j in 0..grid.angular {
                let z = Complex64::from_polar(r, grid.angle(j));
                ex.absorb(eval_point(f, frame, z), i, j);
            }
            ex
        })
        .collect();
    let mut ex = Extremes::empty();
    for e in &per_radius {
        ex.merge(e);
    }

    if let Some(z) = ex.zero {
        return Ok(Verdict::fail(
            z,
            f64::NEG_INFINITY,
            method + " (f = 0)",
            resolution,
        ));
    }
    if ex.min_jacobian.0 < 0.0 {
        return Ok(Verdict::fail(
            ex.min_jacobian.1,
            ex.min_jacobian.0,
            method + " (jacobian)",
            resolution,
        ));
    }

    // local refinement around the minimizer
    let (_, _, i0, j0) = ex.min_quotient;
    let mut r_lo = radii[i0.saturating_sub(1)];
    let mut r_hi = radii[(i0 + 1).min(radii.len() - 1)];
    let mut half_dtheta = TAU / grid.angular as f64;
    let mut theta_c = grid.angle(j0);
    for _ in 0..grid.refinement {
        let n = 2 * REFINE_FACTOR;
        let mut local = Extremes::empty();
        for a in 0..=n {
            let r = r_lo + (r_hi - r_lo) * a as f64 / n as f64;
            for b in 0..=n {
                let theta = theta_c - half_dtheta + 2.0 * half_dtheta * b as f64 / n as f64;
                let z = Complex64::from_polar(r, theta);
                local.absorb(eval_point(f, frame, z), a, b);
            }
        }
        if let Some(z) = local.zero {
            return Ok(Verdict::fail(
                z,
                f64::NEG_INFINITY,
                method + " (f = 0)",
                resolution,
            ));
        }
        if local.min_jacobian.0 < 0.0 {
            return Ok(Verdict::fail(
                local.min_jacobian.1,
                local.min_jacobian.0,
                method + " (jacobian)",
                resolution,
            ));
        }
        ex.merge(&local);
        let centre = local.min_quotient.1;
        let dr = (r_hi - r_lo) / REFINE_FACTOR as f64;
        r_lo = (centre.norm() - dr).max(grid.r_min);
        r_hi = (centre.norm() + dr).min(grid.r_max);
        half_dtheta /= REFINE_FACTOR as f64;
        theta_c = centre.arg();
    }

    let (q_min, z_min, _, _) = ex.min_quotient;
    if q_min < 0.0 {
        return Ok(Verdict::fail(z_min, q_min, method, resolution));
    }
    if q_min < grid.margin || ex.min_jacobian.0 <= grid.margin {
        return Ok(Verdict::inconclusive(
            Some(z_min),
            q_min,
            method,
            resolution,
        ));
    }
    if !origin.is_pass() {
        return Ok(origin);
    }
    Ok(Verdict::pass(q_min, method, resolution))
}

/// Grid check at both tilts `±π(1−α)/2`.
pub fn check_hereditary_strongly_starlike(
    f: &HarmonicMap,
    alpha: f64,
    grid: &GridSpec,
) -> Result<Verdict, ClassifyError> {
    let [plus, minus] = SpiralFrame::strong_pair(alpha)?;
    let v_plus = check_hereditary_spirallike(f, &plus, grid)?;
    let v_minus = check_hereditary_spirallike(f, &minus, grid)?;
    Ok(v_plus.and(v_minus))
}

/// `Σ (n−1+|n−c|)|a_n| + Σ (n+1+|n+c|)|b_n|` with `c = −e^{2iλ}`, over the
/// stored coefficients (`n ≥ 2` for `h`, `n ≥ 1` for `g`). At
/// `λ = ±π(1−α)/2` the weights are `A_n(α)` and `B_n(α)`.
pub fn spiral_coefficient_sum(f: &HarmonicMap, frame: &SpiralFrame) -> f64 {
    let c = frame.mirror();
    let h = f.h_series().coeffs();
    let g = f.g_series().coeffs();
    let a_part: f64 = h
        .iter()
        .enumerate()
        .skip(2)
        .map(|(n, a)| {
            let n = n as f64;
            (n - 1.0 + (n - c).norm()) * a.norm()
        })
        .sum();
    let b_part: f64 = g
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, b)| {
            let n = n as f64;
            (n + 1.0 + (n + c).norm()) * b.norm()
        })
        .sum();
    a_part + b_part
}

/// `Σ A_n(α)|a_n| + Σ B_n(α)|b_n|`.
pub fn strong_coefficient_sum(f: &HarmonicMap, alpha: &AlphaParam) -> f64 {
    let h = f.h_series().coeffs();
    let g = f.g_series().coeffs();
    let a_part: f64 = h
        .iter()
        .enumerate()
        .skip(2)
        .map(|(n, a)| seq_a(n as u32, alpha) * a.norm())
        .sum();
    let b_part: f64 = g
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, b)| seq_b(n as u32, alpha) * b.norm())
        .sum();
    a_part + b_part
}

fn sufficiency_verdict(sum: f64, bound: f64, f: &HarmonicMap, method: &str) -> Verdict {
    let resolution = format!(
        "{} stored coefficients",
        f.h_series().degree().max(f.g_series().degree()) + 1
    );
    if !f.is_normalized() {
        return Verdict::inconclusive(
            None,
            bound - sum,
            format!("{method} (not normalized)"),
            resolution,
        );
    }
    let slack = bound - sum;
    // equality cases such as |b| = C_n(α) land within rounding of 0
    if slack >= -1e-12 * bound {
        if f.is_exact() {
            Verdict::pass(slack.max(0.0), method, resolution)
        } else {
            Verdict::inconclusive(
                None,
                slack,
                format!("{method} (truncated series)"),
                resolution,
            )
        }
    } else {
        Verdict::inconclusive(
            None,
            slack,
            format!("{method} (sufficient condition not met)"),
            resolution,
        )
    }
}

/// Sufficient coefficient condition for hereditary strong starlikeness of
/// order `α`: `Σ A_n|a_n| + Σ B_n|b_n| ≤ 2 sin(πα/2)`.
///
/// PASS (margin = slack) needs the stored coefficients to be all of `h`
/// and `g`; for truncated series the finite sum only bounds the true sum
/// from below, so satisfying it is INCONCLUSIVE. Violating a sufficient
/// condition proves nothing either, so that case is INCONCLUSIVE with a
/// negative margin rather than FAIL.
pub fn coefficient_condition(f: &HarmonicMap, alpha: f64) -> Result<Verdict, ClassifyError> {
    let a = AlphaParam::new(alpha)?;
    let sum = strong_coefficient_sum(f, &a);
    Ok(sufficiency_verdict(
        sum,
        2.0 * a.sin_half(),
        f,
        "coefficient",
    ))
}

/// Same sufficient condition at a single tilt: weights built from
/// `c = −e^{2iλ}` and bound `2 cos λ`. Invariant under `λ ↦ −λ`.
pub fn spiral_coefficient_condition(f: &HarmonicMap, frame: &SpiralFrame) -> Verdict {
    let sum = spiral_coefficient_sum(f, frame);
    sufficiency_verdict(sum, 2.0 * frame.cos(), f, "coefficient")
}

/// Strict condition `Σ_{n≥2} n|a_n| + Σ_{n≥1} n|b_n| < 1`.
pub fn silverman_condition(f: &HarmonicMap) -> Verdict {
    let sum: f64 = f
        .h_series()
        .coeffs()
        .iter()
        .enumerate()
        .skip(2)
        .map(|(n, a)| n as f64 * a.norm())
        .chain(
            f.g_series()
                .coeffs()
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, b)| n as f64 * b.norm()),
        )
        .sum();
    let resolution = format!(
        "{} stored coefficients",
        f.h_series().degree().max(f.g_series().degree()) + 1
    );
    let slack = 1.0 - sum;
    if slack > 0.0 && f.is_exact() && f.is_normalized() {
        Verdict::pass(slack, "silverman", resolution)
    } else {
        Verdict::inconclusive(None, slack, "silverman", resolution)
    }
}

/// Coefficient condition first, grid second.
///
/// The coefficient condition is sufficient, so its PASS stands even when the
/// grid margin is 0 (the equality case `|b| = C_n(α)`).
pub fn classify_strongly_starlike(
    f: &HarmonicMap,
    alpha: f64,
    grid: &GridSpec,
) -> Result<Verdict, ClassifyError> {
    let coeff = coefficient_condition(f, alpha)?;
    if coeff.is_pass() {
        return Ok(coeff);
    }
    check_hereditary_strongly_starlike(f, alpha, grid)
}

/// Single-tilt counterpart of [`classify_strongly_starlike`].
pub fn classify_spirallike(
    f: &HarmonicMap,
    frame: &SpiralFrame,
    grid: &GridSpec,
) -> Result<Verdict, ClassifyError> {
    let coeff = spiral_coefficient_condition(f, frame);
    if coeff.is_pass() {
        return Ok(coeff);
    }
    check_hereditary_spirallike(f, frame, grid)
}

/// Pointwise non-vanishing of `f * φ_{λ,ζ}` over all `ζ ∈ 𝕋∖{−1}`.
///
/// The convolution equals `ζ(Df − f) + (Df + e^{2iλ} f)`, affine in `ζ`;
/// the test is `|Df + e^{2iλ} f| > |Df − f|`, which is the half-plane
/// condition `|w − 1| < |w − c|` for `w = Df/f`.
pub fn convolution_test_exact(
    f: &HarmonicMap,
    frame: &SpiralFrame,
    z: Complex64,
) -> Result<bool, ClassifyError> {
    let (fz, dfz) = f.eval_f_and_d(z);
    if fz.norm() < ZERO_F && dfz.norm() < ZERO_F {
        return Err(ClassifyError::Degenerate(z));
    }
    Ok((dfz + frame.e_2i() * fz).norm() > (dfz - fz).norm())
}

/// `ζ(Df − f) + (Df + e^{2iλ} f)` from closed-form `f` and `Df`.
pub fn convolution_direct(
    f: &HarmonicMap,
    frame: &SpiralFrame,
    zeta: Complex64,
    z: Complex64,
) -> Complex64 {
    let (fz, dfz) = f.eval_f_and_d(z);
    zeta * (dfz - fz) + (dfz + frame.e_2i() * fz)
}

/// `(f * φ_{λ,ζ})(z)` from truncated series: `Σ a_n φ_n z^n + Σ b̄_n ψ_n z̄^n`
/// where `φ_n`, `ψ_n` are the coefficients of the two kernel halves and
/// `b̄_n` the coefficients of `z̄^n` in `f`.
pub fn convolution_test_series(
    f: &HarmonicMap,
    frame: &SpiralFrame,
    zeta: Complex64,
    z: Complex64,
) -> Complex64 {
    let lambda = frame.lambda();
    let h = f.h_series();
    let g_bar = f.g_series().conj_coeffs();
    let analytic = Kernel::PhiAnalytic { lambda, zeta }
        .series(h.degree().max(1))
        .expect("degree ≥ 1");
    let anti = Kernel::PhiAntiAnalytic { lambda, zeta }
        .series(g_bar.degree().max(1))
        .expect("degree ≥ 1");
    h.hadamard(&analytic).evaluate(z) + g_bar.hadamard(&anti).evaluate(z.conj())
}

/// First grid point where [`convolution_test_exact`] fails, scanning radii
/// outward and angles in order.
pub fn convolution_scan(
    f: &HarmonicMap,
    frame: &SpiralFrame,
    grid: &GridSpec,
) -> Result<Option<Complex64>, ClassifyError> {
    grid.validate()?;
    let radii = grid.radii();
    let hits: Vec<Result<Option<Complex64>, ClassifyError>> = radii
        .par_iter()
        .map(|&r| {
            for z in grid.circle(r) {
                if !convolution_test_exact(f, frame, z)? {
                    return Ok(Some(z));
                }
            }
            Ok(None)
        })
        .collect();
    for hit in hits {
        if let Some(z) = hit? {
            return Ok(Some(z));
        }
    }
    Ok(None)
}

/// `πα/2` for an order `α`, the bound in `|arg Df/f| < πα/2`.
pub fn arg_bound(alpha: f64) -> f64 {
    FRAC_PI_2 * alpha
}
