//! Cross-validation between the analytic and geometric checks, and the
//! generators of the golden values used by the test suite.
//!
//! The golden generators deliberately avoid the library's own evaluation
//! paths: each value is recomputed from an explicit formula or a brute-force
//! sum so that a regression in the library shows up as drift.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::{Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{check_hereditary_spirallike, ClassifyError, GridSpec};
use crate::geometry::{
    spirallike_polygon_oracle, OracleConfig, PolygonCurve, SpiralFrame, DEFAULT_VERTICES,
};
use crate::harmonic::HarmonicMap;
use crate::radius::min_quotient_on_circle;
use crate::report::fmt9;
use crate::verdict::{Status, Verdict};

/// Analytic margins smaller than this are not decisive.
pub const ANALYTIC_BAND: f64 = 1e-6;
/// Exit depths smaller than this are not decisive.
pub const GEOMETRIC_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    /// At least one side is INCONCLUSIVE.
    Undecided,
    /// PASS against FAIL with both margins inside their bands.
    WithinBand,
    /// The analytic FAIL lies strictly inside `𝔻_r` and the circle `|z| = r`
    /// itself satisfies the condition, so the image of `𝔻_r` may still be
    /// spirallike.
    InteriorViolation,
    HardMismatch,
}

impl Agreement {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Agree => "agree",
            Self::Undecided => "undecided",
            Self::WithinBand => "within-band",
            Self::InteriorViolation => "interior-violation",
            Self::HardMismatch => "MISMATCH",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CrossRow {
    pub r: f64,
    pub analytic: Verdict,
    pub geometric: Verdict,
    pub circle_min: f64,
    pub agreement: Agreement,
}

#[derive(Debug, Clone)]
pub struct CrossReport {
    pub function: String,
    pub lambda: f64,
    pub rows: Vec<CrossRow>,
}

impl CrossReport {
    pub fn hard_mismatches(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.agreement == Agreement::HardMismatch)
            .count()
    }

    pub fn report(&self) -> String {
        let mut out = format!(
            "function: {}\nlambda: {}\n",
            self.function,
            fmt9(self.lambda)
        );
        for row in &self.rows {
            out.push_str(&format!(
                "r={} analytic={} (margin {}, {}) geometric={} (margin {}, {}) -> {}\n",
                fmt9(row.r),
                row.analytic.status(),
                fmt9(row.analytic.margin()),
                row.analytic.resolution(),
                row.geometric.status(),
                fmt9(row.geometric.margin()),
                row.geometric.resolution(),
                row.agreement.as_str()
            ));
        }
        out
    }
}

fn compare(analytic: &Verdict, geometric: &Verdict, circle_min: f64) -> Agreement {
    match (analytic.status(), geometric.status()) {
        (a, g) if a == g => Agreement::Agree,
        (Status::Inconclusive, _) | (_, Status::Inconclusive) => Agreement::Undecided,
        (Status::Fail, Status::Pass) if circle_min > 0.0 => Agreement::InteriorViolation,
        _ => {
            let a_decisive = analytic.margin().abs() >= ANALYTIC_BAND;
            let g_decisive = geometric.is_pass() || geometric.margin().abs() >= GEOMETRIC_BAND;
            if a_decisive && g_decisive {
                Agreement::HardMismatch
            } else {
                Agreement::WithinBand
            }
        }
    }
}

/// For each `r`, the analytic grid verdict on `𝔻_r` against the polygon
/// oracle on the image of `|z| = r`.
pub fn crosscheck_spirallike(
    f: &HarmonicMap,
    frame: &SpiralFrame,
    radii: &[f64],
) -> Result<CrossReport, ClassifyError> {
    crosscheck_spirallike_with(f, frame, radii, DEFAULT_VERTICES, &OracleConfig::default())
}

pub fn crosscheck_spirallike_with(
    f: &HarmonicMap,
    frame: &SpiralFrame,
    radii: &[f64],
    vertices: usize,
    config: &OracleConfig,
) -> Result<CrossReport, ClassifyError> {
    let rows = radii
        .par_iter()
        .map(|&r| {
            let analytic = check_hereditary_spirallike(f, frame, &GridSpec::up_to(r))?;
            let curve = PolygonCurve::from_map(f, r, vertices)?;
            let (geometric, _) = spirallike_polygon_oracle(&curve, frame, config);
            let (circle_min, _) = min_quotient_on_circle(f, frame, r)?;
            let agreement = compare(&analytic, &geometric, circle_min);
            Ok(CrossRow {
                r,
                analytic,
                geometric,
                circle_min,
                agreement,
            })
        })
        .collect::<Result<Vec<_>, ClassifyError>>()?;
    Ok(CrossReport {
        function: f.name(),
        lambda: frame.lambda(),
        rows,
    })
}

/// Crosscheck at both tilts `±π(1−α)/2`.
pub fn crosscheck_strongly_starlike(
    f: &HarmonicMap,
    alpha: f64,
    radii: &[f64],
) -> Result<[CrossReport; 2], ClassifyError> {
    let [plus, minus] = SpiralFrame::strong_pair(alpha)?;
    Ok([
        crosscheck_spirallike(f, &plus, radii)?,
        crosscheck_spirallike(f, &minus, radii)?,
    ])
}

/// One golden value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Golden {
    pub name: String,
    pub value_re: f64,
    pub value_im: f64,
    pub tolerance: f64,
    pub oracle: String,
}

impl Golden {
    fn real(name: &str, value: f64, tolerance: f64, oracle: &str) -> Self {
        Self::complex(name, Complex64::new(value, 0.0), tolerance, oracle)
    }

    fn complex(name: &str, value: Complex64, tolerance: f64, oracle: &str) -> Self {
        Self {
            name: name.into(),
            value_re: value.re,
            value_im: value.im,
            tolerance,
            oracle: oracle.into(),
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }
}

/// A golden whose fresh value moved beyond its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Drift {
    pub name: String,
    pub committed: Complex64,
    pub fresh: Complex64,
    pub tolerance: f64,
}

impl std::fmt::Display for Drift {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: committed {} vs fresh {} (tolerance {:e})",
            self.name, self.committed, self.fresh, self.tolerance
        )
    }
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// harmonic Koebe halves and derivatives written out as rational functions
fn koebe_h(z: Complex64) -> Complex64 {
    (z - z * z / 2.0 + z * z * z / 6.0) / (1.0 - z).powu(3)
}

fn koebe_g(z: Complex64) -> Complex64 {
    (z * z / 2.0 + z * z * z / 6.0) / (1.0 - z).powu(3)
}

fn koebe_dh(z: Complex64) -> Complex64 {
    (1.0 + z) / (1.0 - z).powu(4)
}

fn koebe_dg(z: Complex64) -> Complex64 {
    z * (1.0 + z) / (1.0 - z).powu(4)
}

/// `ψ(x) = −γ + Σ_{k≥0} (1/(k+1) − 1/(k+x))`, summed to `K` terms with the
/// tail `(x − 1)/(K + x/2)`.
fn digamma_series(x: f64) -> f64 {
    const K: u32 = 200_000;
    let mut sum = 0.0;
    for k in (0..K).rev() {
        let k = f64::from(k);
        sum += 1.0 / (k + 1.0) - 1.0 / (k + x);
    }
    let k = f64::from(K);
    -EULER_GAMMA + sum + (x - 1.0) / (k + 0.5 * x)
}

/// `exp(2α Σ_{k<10⁶} 1/((2k+1)(2k+1−α)))` plus the integral tail.
fn m_brute_force(alpha: f64) -> f64 {
    const K: u32 = 1_000_000;
    let mut sum = 0.0;
    for k in (0..K).rev() {
        let u = 2.0 * f64::from(k) + 1.0;
        sum += 1.0 / (u * (u - alpha));
    }
    // Σ_{k≥K} ≈ ∫_{K−1/2}^∞ dx/((2x+1)(2x+1−α))
    let u = 2.0 * f64::from(K);
    let tail = -(1.0 - alpha / u).ln() / (2.0 * alpha);
    (2.0 * alpha * (sum + tail)).exp()
}

fn seq_b_direct(n: f64, alpha: f64) -> f64 {
    // n + 1 + |n + e^{iπα}|
    n + 1.0 + (n + Complex64::from_polar(1.0, PI * alpha)).norm()
}

fn seq_a_direct(n: f64, alpha: f64) -> f64 {
    // n − 1 + |n − e^{−iπα}|
    n - 1.0 + (n - Complex64::from_polar(1.0, -PI * alpha)).norm()
}

/// Winding number of a closed polyline around `w` by summed angle increments.
fn winding_brute_force(points: &[Complex64], w: Complex64) -> f64 {
    let n = points.len();
    let total: f64 = (0..n)
        .map(|k| ((points[(k + 1) % n] - w) / (points[k] - w)).arg())
        .sum();
    total / (2.0 * PI)
}

/// Plain bisection on the sign of `min_θ Re(Dk/k)` over 8192 angles.
fn koebe_r1_bisection() -> f64 {
    let circle_min = |r: f64| {
        (0..8192)
            .map(|j| {
                let z = Complex64::from_polar(r, 2.0 * PI * f64::from(j) / 8192.0);
                let f = koebe_h(z) + koebe_g(z).conj();
                let df = z * koebe_dh(z) - (z * koebe_dg(z)).conj();
                (df / f).re
            })
            .fold(f64::INFINITY, f64::min)
    };
    let (mut lo, mut hi) = (0.5, 0.7);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if circle_min(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Recompute every golden value from its oracle.
pub fn derive_goldens() -> Vec<Golden> {
    let z0 = c(1.0, 2.0) / 3.0;
    let k = koebe_h(z0) + koebe_g(z0).conj();
    let dk = z0 * koebe_dh(z0) - (z0 * koebe_dg(z0)).conj();
    let tip = 0.9999;
    let slit = koebe_h(c(-tip, 0.0)) + koebe_g(c(-tip, 0.0)).conj();

    let v_half = {
        // boundary arc e^{(−τ+i)θ}, θ ∈ [0, π]
        let tau = (FRAC_PI_2 * 0.5).tan();
        let m = 4096;
        let upper: Vec<Complex64> = (0..=m)
            .map(|j| {
                let t = PI * f64::from(j) / f64::from(m);
                Complex64::from_polar((-tau * t).exp(), t)
            })
            .collect();
        // the lower arc is the mirror image, walked from θ = −π back to 0
        let lower = upper[1..m as usize].iter().rev().map(|p| p.conj());
        upper.iter().copied().chain(lower).collect::<Vec<_>>()
    };
    let koebe_c05: Vec<Complex64> = (0..4096)
        .map(|j| {
            let z = Complex64::from_polar(0.5, 2.0 * PI * f64::from(j) / 4096.0);
            koebe_h(z) + koebe_g(z).conj()
        })
        .collect();

    let dilatation_sup = {
        let mut best: f64 = 0.0;
        for i in 0..=90 {
            let r = 0.9 * f64::from(i) / 90.0;
            for j in 0..64 {
                let z = Complex64::from_polar(r, 2.0 * PI * f64::from(j) / 64.0);
                best = best.max((koebe_dg(z) / koebe_dh(z)).norm());
            }
        }
        best
    };

    let near_origin_min = (0..720)
        .map(|j| {
            let u = Complex64::from_polar(1.0, 2.0 * PI * f64::from(j) / 720.0);
            ((1.0 - 0.5 * u) / (1.0 + 0.5 * u)).re
        })
        .fold(f64::INFINITY, f64::min);

    let m_half = m_brute_force(0.5);
    let n_half = FRAC_PI_2 * PI.exp();
    let cot8 = 1.0 / (PI / 8.0).tan();

    vec![
        Golden::complex("koebe_f_z0", k, 1e-12, "closed-form rational h, g"),
        Golden::complex("koebe_df_z0", dk, 1e-12, "closed-form rational h', g'"),
        Golden::real(
            "koebe_quotient_re_z0",
            (dk / k).re,
            1e-12,
            "closed-form rational h, g",
        ),
        Golden::real(
            "koebe_quotient_arg_z0",
            (dk / k).arg(),
            1e-12,
            "closed-form rational h, g",
        ),
        Golden::real("koebe_slit_tip_re", slit.re, 1e-12, "closed-form k(-r)"),
        Golden::real(
            "koebe_dilatation_sup_0.9",
            dilatation_sup,
            1e-6,
            "grid sup of g'/h'",
        ),
        Golden::real(
            "koebe_r1",
            koebe_r1_bisection(),
            1e-6,
            "plain bisection, 8192 angles",
        ),
        Golden::real(
            "koebe_winding_c05_origin",
            winding_brute_force(&koebe_c05, c(0.0, 0.0)),
            1e-9,
            "angle-sum winding",
        ),
        Golden::real(
            "v_half_winding_0.5",
            winding_brute_force(&v_half, c(0.5, 0.0)),
            1e-9,
            "angle-sum winding",
        ),
        Golden::complex(
            "family_b0.3_n1_f_i",
            c(0.0, 1.0) + 0.3 * c(0.0, 1.0).conj(),
            1e-15,
            "hand evaluation",
        ),
        Golden::real(
            "family_b0.1_n2_df_half",
            0.5 - 2.0 * 0.1 * 0.25,
            1e-15,
            "hand differentiation",
        ),
        Golden::real(
            "family_b0.2_n1_jacobian",
            1.0 - 0.04,
            1e-15,
            "hand computation",
        ),
        Golden::real(
            "near_origin_b0.5_min",
            near_origin_min,
            1e-12,
            "Mobius circle image sampled",
        ),
        Golden::real(
            "lambda_arg_e_ei",
            1.0 - (PI / 4.0).tan() * 1.0,
            1e-15,
            "direct substitution",
        ),
        Golden::real("A_1(0.5)", seq_a_direct(1.0, 0.5), 1e-12, "chord length"),
        Golden::real("A_2(0.5)", seq_a_direct(2.0, 0.5), 1e-12, "modulus form"),
        Golden::real("B_2(0.5)", seq_b_direct(2.0, 0.5), 1e-12, "modulus form"),
        Golden::real(
            "C_1(0.5)",
            2.0 * (PI / 4.0).sin() / seq_b_direct(1.0, 0.5),
            1e-12,
            "B_1 evaluation",
        ),
        Golden::real(
            "C_2(0.5)",
            2.0 * (PI / 4.0).sin() / seq_b_direct(2.0, 0.5),
            1e-12,
            "B_2 evaluation",
        ),
        Golden::real("psi(1/2)", digamma_series(0.5), 1e-12, "digamma series"),
        Golden::real("psi(1/4)", digamma_series(0.25), 1e-12, "digamma series"),
        Golden::real("M(0.5)", m_half, 1e-9, "brute-force series 1e6 terms"),
        Golden::real("N(0.5)", n_half, 1e-9, "direct evaluation"),
        Golden::real(
            "N(0.01)",
            FRAC_PI_2 * (PI * (0.005 * PI).tan()).exp(),
            1e-12,
            "direct evaluation",
        ),
        Golden::real("N/M(0.5)", n_half / m_half, 1e-9, "quotient"),
        Golden::real("qc(0.5,1)", cot8 * cot8, 1e-12, "cot(pi/8)^2"),
        Golden::real(
            "qc(0.5,5/3)",
            5.0 / 3.0 * cot8 * cot8,
            1e-12,
            "K from |omega| = 1/4",
        ),
        Golden::real(
            "coef_sum_z+0.5z2_alpha0.5",
            0.5 * seq_a_direct(2.0, 0.5),
            1e-12,
            "A_2 weight",
        ),
    ]
}

pub const GOLDEN_HEADER: [&str; 5] = ["name", "value_re", "value_im", "tolerance", "oracle"];

pub fn write_goldens_csv<W: Write>(goldens: &[Golden], out: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for g in goldens {
        w.serialize(g)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_goldens_csv<R: Read>(input: R) -> Result<Vec<Golden>, csv::Error> {
    csv::Reader::from_reader(input).deserialize().collect()
}

/// Names missing on either side also count as drift (with NaN values).
pub fn compare_goldens(committed: &[Golden], fresh: &[Golden]) -> Vec<Drift> {
    let nan = c(f64::NAN, f64::NAN);
    let mut drifts = Vec::new();
    for g in committed {
        match fresh.iter().find(|f| f.name == g.name) {
            Some(f) if (f.value() - g.value()).norm() <= g.tolerance => {}
            Some(f) => drifts.push(Drift {
                name: g.name.clone(),
                committed: g.value(),
                fresh: f.value(),
                tolerance: g.tolerance,
            }),
            None => drifts.push(Drift {
                name: g.name.clone(),
                committed: g.value(),
                fresh: nan,
                tolerance: g.tolerance,
            }),
        }
    }
    for f in fresh {
        if !committed.iter().any(|g| g.name == f.name) {
            drifts.push(Drift {
                name: f.name.clone(),
                committed: nan,
                fresh: f.value(),
                tolerance: f.tolerance,
            });
        }
    }
    drifts
}
