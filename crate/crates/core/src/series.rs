//! Truncated complex power series on the unit disk.
//!
//! A [`TruncatedSeries`] holds the Taylor coefficients `c_0..c_N` of an
//! analytic function. The operations here are the ones the convolution
//! machinery needs: Horner evaluation, differentiation, the Hadamard
//! (coefficientwise) product, and the builtin rational kernels whose
//! Hadamard products reproduce `h`, `z h'` and the two halves of the
//! spirallikeness kernel `φ_{λ,ζ}`.

use std::ops::{Add, Mul};

use num_complex::Complex64;
use thiserror::Error;

/// Truncation degree used by the builtin catalog when a series is needed.
pub const DEFAULT_DEGREE: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error(
        "unknown kernel `{0}` (expected cayley, koebe-analytic, phi-analytic or phi-anti-analytic)"
    )]
    UnknownKernel(String),
    #[error("kernel `{kernel}` expects {expected} parameter(s), got {got}")]
    KernelParams {
        kernel: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("kernel degree must be at least 1")]
    ZeroDegree,
}

/// Taylor polynomial `Σ_{k=0}^{N} c_k z^k`.
///
/// The coefficient vector is never empty; its length is always
/// `degree() + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

impl TruncatedSeries {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(degree: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); degree + 1])
    }

    /// The series of `z`.
    pub fn identity() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    /// Series whose only nonzero coefficient is `coeff` at `z^power`.
    pub fn monomial(coeff: Complex64, power: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); power + 1];
        coeffs[power] = coeff;
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero past the truncation degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Horner evaluation of the polynomial at `z`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Antiderivative vanishing at the origin.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k + 1) as f64),
        );
        Self::new(coeffs)
    }

    /// Coefficientwise product, truncated to the smaller of the two degrees.
    pub fn hadamard(&self, other: &Self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a * b)
                .collect(),
        )
    }

    /// The series of `z s'(z)`.
    pub fn z_derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Coefficients conjugated: the series of `conj(s(conj z))`.
    pub fn conj_coeffs(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    /// Truncate (or zero-pad) to the given degree.
    pub fn with_degree(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree + 1, Complex64::new(0.0, 0.0));
        Self::new(coeffs)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * factor).collect())
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: Self) -> TruncatedSeries {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        TruncatedSeries::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Mul<Complex64> for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: Complex64) -> TruncatedSeries {
        self.scale(rhs)
    }
}

/// Builtin rational kernels with known Taylor expansions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `z/(1−z)`; the Hadamard identity for series with `c_0 = 0`.
    Cayley,
    /// `z/(1−z)²`; Hadamard product with it yields `z s'(z)`.
    KoebeAnalytic,
    /// `((1+e^{2iλ})z + (ζ−e^{2iλ})z²)/(1−z)²`.
    PhiAnalytic { lambda: f64, zeta: Complex64 },
    /// `((−1+e^{2iλ}−2ζ)z + (ζ−e^{2iλ})z²)/(1−z)²`, the coefficients of the
    /// `z̄^n` half of `φ_{λ,ζ}`.
    PhiAntiAnalytic { lambda: f64, zeta: Complex64 },
}

impl Kernel {
    /// Look a kernel up by name. The phi kernels take `[λ, ζ]` with `λ`
    /// read from the real part of the first parameter.
    pub fn from_name(name: &str, params: &[Complex64]) -> Result<Self, SeriesError> {
        let phi_params = |kernel: &'static str| -> Result<(f64, Complex64), SeriesError> {
            match params {
                [lambda, zeta] => Ok((lambda.re, *zeta)),
                _ => Err(SeriesError::KernelParams {
                    kernel,
                    expected: 2,
                    got: params.len(),
                }),
            }
        };
        match name {
            "cayley" => Ok(Self::Cayley),
            "koebe-analytic" => Ok(Self::KoebeAnalytic),
            "phi-analytic" => {
                let (lambda, zeta) = phi_params("phi-analytic")?;
                Ok(Self::PhiAnalytic { lambda, zeta })
            }
            "phi-anti-analytic" => {
                let (lambda, zeta) = phi_params("phi-anti-analytic")?;
                Ok(Self::PhiAntiAnalytic { lambda, zeta })
            }
            other => Err(SeriesError::UnknownKernel(other.to_string())),
        }
    }

    /// Numerator coefficients `(A, B)` of `(Az + Bz²)/(1−z)²`.
    fn numerator(&self) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        match *self {
            Self::Cayley => (one, -one),
            Self::KoebeAnalytic => (one, Complex64::new(0.0, 0.0)),
            Self::PhiAnalytic { lambda, zeta } => {
                let e2 = Complex64::from_polar(1.0, 2.0 * lambda);
                (one + e2, zeta - e2)
            }
            Self::PhiAntiAnalytic { lambda, zeta } => {
                let e2 = Complex64::from_polar(1.0, 2.0 * lambda);
                (-one + e2 - 2.0 * zeta, zeta - e2)
            }
        }
    }

    /// Coefficient of `z^n`: `A n + B (n−1)` for `n ≥ 1`, zero at `n = 0`.
    pub fn coefficient(&self, n: usize) -> Complex64 {
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let (a, b) = self.numerator();
        a * n as f64 + b * (n - 1) as f64
    }

    pub fn series(&self, degree: usize) -> Result<TruncatedSeries, SeriesError> {
        if degree == 0 {
            return Err(SeriesError::ZeroDegree);
        }
        Ok(TruncatedSeries::new(
            (0..=degree).map(|n| self.coefficient(n)).collect(),
        ))
    }

    /// Closed-form value at `z`, `|z| < 1`.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        let (a, b) = self.numerator();
        let one = Complex64::new(1.0, 0.0);
        (a * z + b * z * z) / ((one - z) * (one - z))
    }
}

/// Taylor truncation of a named kernel.
pub fn rational_kernel(
    name: &str,
    params: &[Complex64],
    degree: usize,
) -> Result<TruncatedSeries, SeriesError> {
    Kernel::from_name(name, params)?.series(degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evaluate_small_cases() {
        let s = TruncatedSeries::from_real(&[0.0, 1.0]);
        assert_eq!(s.evaluate(c(0.5, 0.0)), c(0.5, 0.0));
        let sq = TruncatedSeries::from_real(&[0.0, 0.0, 1.0]);
        let v = sq.evaluate(c(0.0, 1.0));
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn evaluate_at_origin_is_constant_term() {
        let s = TruncatedSeries::new(vec![c(0.3, -0.7), c(2.0, 1.0), c(-4.0, 0.5)]);
        assert_eq!(s.evaluate(c(0.0, 0.0)), c(0.3, -0.7));
    }

    #[test]
    fn koebe_cube_geometric_truncation() {
        // z/(1−z)^3 = Σ n(n+1)/2 z^n
        let s = TruncatedSeries::new(
            (0..=60)
                .map(|n| c((n * (n + 1)) as f64 / 2.0, 0.0))
                .collect(),
        );
        let z = c(-0.3, 0.0);
        let exact = -0.3 / 1.3f64.powi(3);
        assert!((s.evaluate(z) - c(exact, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn derivative_small_cases() {
        assert_eq!(
            TruncatedSeries::from_real(&[0.0, 1.0]).derivative(),
            TruncatedSeries::from_real(&[1.0])
        );
        assert_eq!(
            TruncatedSeries::from_real(&[0.0, 0.0, 1.0]).derivative(),
            TruncatedSeries::from_real(&[0.0, 2.0])
        );
        assert_eq!(
            TruncatedSeries::from_real(&[5.0]).derivative(),
            TruncatedSeries::from_real(&[0.0])
        );
    }

    #[test]
    fn derivative_of_koebe_matches_binomial_oracle() {
        let n_max = 40;
        let koebe = Kernel::KoebeAnalytic.series(n_max).unwrap();
        let d = koebe.derivative();
        // (1+z)/(1−z)^3 = (1+z) Σ C(k+2,2) z^k
        for k in 0..n_max {
            let binom = |j: usize| ((j + 1) * (j + 2)) as f64 / 2.0;
            let expected = binom(k) + if k >= 1 { binom(k - 1) } else { 0.0 };
            assert_eq!(d.coeff(k), c(expected, 0.0), "k = {k}");
        }
    }

    #[test]
    fn hadamard_small_cases() {
        let s = TruncatedSeries::from_real(&[0.0, 1.0, 1.0]);
        let t = TruncatedSeries::from_real(&[0.0, 2.0, 3.0]);
        assert_eq!(s.hadamard(&t), TruncatedSeries::from_real(&[0.0, 2.0, 3.0]));

        let s = TruncatedSeries::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.2, -0.4), c(0.0, 3.0)]);
        let cayley = Kernel::Cayley.series(3).unwrap();
        assert_eq!(s.hadamard(&cayley), s);
        let koebe = Kernel::KoebeAnalytic.series(3).unwrap();
        assert_eq!(s.hadamard(&koebe), s.z_derivative());
    }

    #[test]
    fn hadamard_truncates_to_shorter() {
        let s = TruncatedSeries::from_real(&[1.0, 2.0, 3.0, 4.0]);
        let t = TruncatedSeries::from_real(&[1.0, 1.0]);
        assert_eq!(s.hadamard(&t).degree(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(
            rational_kernel("cayley", &[], 3).unwrap(),
            TruncatedSeries::from_real(&[0.0, 1.0, 1.0, 1.0])
        );
        assert_eq!(
            rational_kernel("koebe-analytic", &[], 3).unwrap(),
            TruncatedSeries::from_real(&[0.0, 1.0, 2.0, 3.0])
        );
        let phi = rational_kernel("phi-analytic", &[c(0.0, 0.0), c(1.0, 0.0)], 5).unwrap();
        for n in 1..=5 {
            assert!((phi.coeff(n) - c(2.0 * n as f64, 0.0)).norm() < 1e-15);
        }
        assert!((phi.coeff(2) - c(4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn kernel_errors() {
        assert!(matches!(
            rational_kernel("mobius", &[], 3),
            Err(SeriesError::UnknownKernel(_))
        ));
        assert!(matches!(
            rational_kernel("cayley", &[], 0),
            Err(SeriesError::ZeroDegree)
        ));
        assert!(matches!(
            rational_kernel("phi-analytic", &[c(0.1, 0.0)], 3),
            Err(SeriesError::KernelParams { .. })
        ));
    }

    #[test]
    fn kernel_series_matches_closed_form() {
        let kernel = Kernel::PhiAntiAnalytic {
            lambda: 0.4,
            zeta: Complex64::from_polar(1.0, 1.1),
        };
        let s = kernel.series(200).unwrap();
        let z = c(0.3, -0.35);
        assert!((s.evaluate(z) - kernel.evaluate(z)).norm() < 1e-12);
    }

    #[test]
    fn integral_then_derivative_round_trip() {
        let s = TruncatedSeries::new(vec![c(0.0, 0.0), c(1.0, 2.0), c(-3.0, 0.5), c(0.25, 0.0)]);
        let back = s.derivative().integral();
        assert_eq!(back.coeffs()[1..], s.coeffs()[1..]);
    }
}
