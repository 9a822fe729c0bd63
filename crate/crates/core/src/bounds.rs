//! Closed-form constants and coefficient sequences.
//!
//! * `A_n(α) = n − 1 + |n − e^{−iπα}|`, `B_n(α) = n + 1 + |n + e^{iπα}|`
//! * `C_n(α) = 2 sin(πα/2) / B_n(α)`, the sharp bound on `|b|` for `z + b z̄^n`
//! * `M(α)`, the growth bound for strongly starlike analytic functions, in its
//!   series form and its digamma form
//! * `N(α) = (π/2) exp(π tan(πα/2))`, the growth bound for the harmonic class
//! * `K cot²(π(1−α)/4)`, the quasiconformal extension constant

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use thiserror::Error;

/// Euler–Mascheroni constant, 0.57721566490153286061.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// Largest disagreement tolerated between the two forms of `M(α)`.
pub const M_FORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("α must lie in (0, 1), got {0}")]
    AlphaRange(f64),
    #[error("digamma needs x > 0, got {0}")]
    DigammaDomain(f64),
    #[error("the two forms of M({alpha}) disagree: series {series}, digamma {digamma}")]
    MFormsDisagree {
        alpha: f64,
        series: f64,
        digamma: f64,
    },
    #[error("quasiconformal constant needs K ≥ 1, got {0}")]
    QcK(f64),
    #[error("n must be ≥ 1")]
    IndexZero,
}

/// Order `α ∈ (0, 1)` with its trigonometric values cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaParam {
    alpha: f64,
    sin_half: f64,
    cos_full: f64,
    tan_half: f64,
}

impl AlphaParam {
    pub fn new(alpha: f64) -> Result<Self, BoundsError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(BoundsError::AlphaRange(alpha));
        }
        Ok(Self {
            alpha,
            sin_half: (FRAC_PI_2 * alpha).sin(),
            cos_full: (PI * alpha).cos(),
            tan_half: (FRAC_PI_2 * alpha).tan(),
        })
    }

    pub fn value(&self) -> f64 {
        self.alpha
    }

    /// `sin(πα/2)`
    pub fn sin_half(&self) -> f64 {
        self.sin_half
    }

    /// `cos(πα)`
    pub fn cos_full(&self) -> f64 {
        self.cos_full
    }

    /// `tan(πα/2)`
    pub fn tan_half(&self) -> f64 {
        self.tan_half
    }

    /// Tilt `π(1−α)/2` of the two spiral frames.
    pub fn spiral_angle(&self) -> f64 {
        FRAC_PI_2 * (1.0 - self.alpha)
    }
}

pub fn seq_a(n: u32, a: &AlphaParam) -> f64 {
    let n = f64::from(n);
    n - 1.0 + (n * n - 2.0 * n * a.cos_full + 1.0).sqrt()
}

pub fn seq_b(n: u32, a: &AlphaParam) -> f64 {
    let n = f64::from(n);
    n + 1.0 + (n * n + 2.0 * n * a.cos_full + 1.0).sqrt()
}

pub fn seq_c(n: u32, a: &AlphaParam) -> f64 {
    2.0 * a.sin_half / seq_b(n, a)
}

/// Digamma `ψ(x) = Γ'(x)/Γ(x)` for `x > 0`.
///
/// Shifts `x` up to at least 8 with `ψ(x) = ψ(x+1) − 1/x`, then uses the
/// asymptotic series in `1/x²` through the `B₁₄` term.
pub fn digamma(x: f64) -> Result<f64, BoundsError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(BoundsError::DigammaDomain(x));
    }
    // B_{2k}/(2k), k = 1..7
    const ASYMPTOTIC: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let mut x = x;
    let mut shift = 0.0;
    while x < 8.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut poly = 0.0;
    for &coef in ASYMPTOTIC.iter().rev() {
        poly = poly * inv2 + coef;
    }
    Ok(shift + x.ln() - 0.5 / x - poly * inv2)
}

/// Series form `exp(2α Σ_{k≥0} 1/((2k+1)(2k+1−α)))`.
///
/// The sum is cut at the first term below `1e−11` and the remainder is
/// replaced by its Euler–Maclaurin expansion (integral, half term and first
/// derivative correction). The neglected remainder is `O(K⁻⁵)` at the cut
/// index `K ≈ 1.6·10⁵`.
pub fn bound_m_series(a: &AlphaParam) -> f64 {
    let alpha = a.alpha;
    let term = |k: f64| {
        let u = 2.0 * k + 1.0;
        1.0 / (u * (u - alpha))
    };
    let mut sum = 0.0;
    let mut k = 0u64;
    loop {
        let t = term(k as f64);
        if t < 1e-11 {
            break;
        }
        sum += t;
        k += 1;
    }
    let kf = k as f64;
    let u = 2.0 * kf + 1.0;
    // ∫_K^∞ dx/((2x+1)(2x+1−α)) = −ln(1 − α/u)/(2α)
    let integral = -(-alpha / u).ln_1p() / (2.0 * alpha);
    // d/dk of the term: −2(2u − α)/(u(u−α))²
    let derivative = -2.0 * (2.0 * u - alpha) / (u * (u - alpha)).powi(2);
    let tail = integral + 0.5 * term(kf) - derivative / 12.0;
    (2.0 * alpha * (sum + tail)).exp()
}

/// Digamma form `(1/4) exp(−ψ((1−α)/2) − γ)`.
pub fn bound_m_digamma(a: &AlphaParam) -> f64 {
    let psi = digamma(0.5 * (1.0 - a.alpha)).expect("(1−α)/2 > 0 for α ∈ (0,1)");
    0.25 * (-psi - EULER_GAMMA).exp()
}

/// `M(α)`, returned in the digamma form after checking both forms agree.
pub fn bound_m(a: &AlphaParam) -> Result<f64, BoundsError> {
    let series = bound_m_series(a);
    let digamma = bound_m_digamma(a);
    if (series - digamma).abs() > M_FORM_TOLERANCE * digamma.max(1.0) {
        return Err(BoundsError::MFormsDisagree {
            alpha: a.alpha,
            series,
            digamma,
        });
    }
    Ok(digamma)
}

pub fn bound_n(a: &AlphaParam) -> f64 {
    FRAC_PI_2 * (PI * a.tan_half).exp()
}

/// `ln M(α) = −ψ((1−α)/2) − γ − ln 4`, finite where `M` overflows.
pub fn log_m(a: &AlphaParam) -> f64 {
    let psi = digamma(0.5 * (1.0 - a.alpha)).expect("(1−α)/2 > 0 for α ∈ (0,1)");
    -psi - EULER_GAMMA - 4f64.ln()
}

/// `ln N(α) = ln(π/2) + π tan(πα/2)`.
pub fn log_n(a: &AlphaParam) -> f64 {
    FRAC_PI_2.ln() + PI * a.tan_half
}

/// `N(α)/M(α)`, cross-checked against `2π exp(π cot(πt) + ψ(t) + γ)` with
/// `t = (1−α)/2`.
pub fn ratio_nm(a: &AlphaParam) -> Result<f64, BoundsError> {
    bound_m(a)?;
    let ratio = (log_n(a) - log_m(a)).exp();
    let closed = ratio_nm_closed(a);
    debug_assert!(
        (ratio - closed).abs() <= 1e-9 * closed,
        "ratio {ratio} vs closed form {closed}"
    );
    Ok(ratio)
}

/// `2π exp(π cot(πt) + ψ(t) + γ)`, `t = (1−α)/2`.
pub fn ratio_nm_closed(a: &AlphaParam) -> f64 {
    let t = 0.5 * (1.0 - a.alpha);
    let psi = digamma(t).expect("t > 0");
    2.0 * PI * (PI / (PI * t).tan() + psi + EULER_GAMMA).exp()
}

/// `K cot²(π(1−α)/4)`; `+∞` once `α > 1 − 1e−12`.
pub fn qc_constant(alpha: f64, k: f64) -> Result<f64, BoundsError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(BoundsError::AlphaRange(alpha));
    }
    if !(k >= 1.0) {
        return Err(BoundsError::QcK(k));
    }
    if alpha > 1.0 - 1e-12 {
        return Ok(f64::INFINITY);
    }
    let cot = 1.0 / (PI * (1.0 - alpha) / 4.0).tan();
    Ok(k * cot * cot)
}

/// `K = (1 + s)/(1 − s)` for a dilatation bound `s = sup|ω| < 1`.
pub fn qc_k_from_dilatation(sup_omega: f64) -> f64 {
    (1.0 + sup_omega) / (1.0 - sup_omega)
}

/// `α = 0.01, 0.02, …, 0.99`.
pub fn alpha_grid() -> Vec<f64> {
    (1..=99).map(|i| f64::from(i) / 100.0).collect()
}

/// One row of the bounds table.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsRow {
    pub alpha: f64,
    pub m: f64,
    pub n: f64,
    pub log_m: f64,
    pub log_n: f64,
    pub ratio: f64,
    /// `(A_k, B_k, C_k)` for `k = 1..=n_max`.
    pub sequences: Vec<(f64, f64, f64)>,
}

pub fn bounds_row(alpha: f64, n_max: u32) -> Result<BoundsRow, BoundsError> {
    let a = AlphaParam::new(alpha)?;
    let m = bound_m(&a)?;
    let n = bound_n(&a);
    Ok(BoundsRow {
        alpha,
        m,
        n,
        log_m: log_m(&a),
        log_n: log_n(&a),
        ratio: ratio_nm(&a)?,
        sequences: (1..=n_max)
            .map(|k| (seq_a(k, &a), seq_b(k, &a), seq_c(k, &a)))
            .collect(),
    })
}

/// CSV with header `alpha,M,N,logM,logN,N_over_M` followed by
/// `A_k,B_k,C_k` for `k = 1..=n_max`. Full precision, LF line endings.
pub fn write_bounds_csv<W: Write>(
    mut out: W,
    alphas: &[f64],
    n_max: u32,
) -> Result<(), Box<dyn std::error::Error>> {
    let mut header = String::from("alpha,M,N,logM,logN,N_over_M");
    for k in 1..=n_max {
        header.push_str(&format!(",A_{k},B_{k},C_{k}"));
    }
    writeln!(out, "{header}")?;
    for &alpha in alphas {
        let row = bounds_row(alpha, n_max)?;
        let mut line = format!(
            "{},{},{},{},{},{}",
            row.alpha, row.m, row.n, row.log_m, row.log_n, row.ratio
        );
        for (a, b, c) in &row.sequences {
            line.push_str(&format!(",{a},{b},{c}"));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}
