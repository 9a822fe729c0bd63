//! Harmonic maps `f = h + conj(g)` on the unit disk.
//!
//! Every map carries truncated series for `h` and `g`. The catalog entries
//! (identity, harmonic Koebe, `z + b z̄^n`) also carry closed-form
//! evaluators, which the evaluation routines prefer; custom maps built from
//! coefficient lists are polynomials, so their series are exact.
//!
//! The derived quantities follow the usual conventions:
//!
//! * `Df(z) = z f_z − z̄ f_z̄ = z h'(z) − conj(z g'(z))`
//! * `J_f = |h'|² − |g'|²`
//! * `ω = g'/h'` (second complex dilatation)

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::GridSpec;
use crate::series::{TruncatedSeries, DEFAULT_DEGREE};

#[derive(Debug, Error)]
pub enum MapError {
    #[error(
        "unknown catalog function `{0}` (expected identity, harmonic-koebe, family or custom)"
    )]
    UnknownFunction(String),
    #[error("family maps need n ≥ 1")]
    FamilyDegree,
    #[error("|h'| = {modulus:e} < 1e-12 at z = {z}")]
    VanishingDerivative { z: Complex64, modulus: f64 },
    #[error("coefficient CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("coefficient CSV row {row}: index {got} out of order (expected {expected})")]
    CsvIndex {
        row: usize,
        expected: usize,
        got: usize,
    },
}

/// How the analytic parts are evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum MapKind {
    Identity,
    /// `h = (z − z²/2 + z³/6)/(1−z)³`, `g = (z²/2 + z³/6)/(1−z)³`.
    HarmonicKoebe,
    /// `f_{b,n}(z) = z + b z̄^n`, i.e. `h = z`, `g = conj(b) z^n`.
    Family {
        b: Complex64,
        n: u32,
    },
    /// Polynomial `h`, `g` given by their coefficients.
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicMap {
    kind: MapKind,
    h: TruncatedSeries,
    g: TruncatedSeries,
    exact: bool,
    /// `θ₀` of the rotation conjugate `e^{−iθ₀} f(e^{iθ₀} z)`.
    rotation: f64,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl HarmonicMap {
    pub fn identity() -> Self {
        Self {
            kind: MapKind::Identity,
            h: TruncatedSeries::identity(),
            g: TruncatedSeries::zero(1),
            exact: true,
            rotation: 0.0,
        }
    }

    pub fn harmonic_koebe() -> Self {
        Self::harmonic_koebe_with_degree(DEFAULT_DEGREE)
    }

    /// Harmonic Koebe function with its series truncated at `degree`.
    ///
    /// `a_n = (n+1)(2n+1)/6`, `b_n = (n−1)(2n−1)/6`.
    pub fn harmonic_koebe_with_degree(degree: usize) -> Self {
        let degree = degree.max(1);
        let a = (0..=degree)
            .map(|n| {
                if n == 0 {
                    c(0.0, 0.0)
                } else {
                    let n = n as f64;
                    c((n + 1.0) * (2.0 * n + 1.0) / 6.0, 0.0)
                }
            })
            .collect();
        let b = (0..=degree)
            .map(|n| {
                if n == 0 {
                    c(0.0, 0.0)
                } else {
                    let n = n as f64;
                    c((n - 1.0) * (2.0 * n - 1.0) / 6.0, 0.0)
                }
            })
            .collect();
        Self {
            kind: MapKind::HarmonicKoebe,
            h: TruncatedSeries::new(a),
            g: TruncatedSeries::new(b),
            exact: false,
            rotation: 0.0,
        }
    }

    /// `f_{b,n}(z) = z + b z̄^n`. Construction is total in `b`; `|b| ≥ 1`
    /// simply yields a map that fails the downstream checks.
    pub fn family(b: Complex64, n: u32) -> Result<Self, MapError> {
        if n == 0 {
            return Err(MapError::FamilyDegree);
        }
        Ok(Self {
            kind: MapKind::Family { b, n },
            h: TruncatedSeries::identity(),
            g: TruncatedSeries::monomial(b.conj(), n as usize),
            exact: true,
            rotation: 0.0,
        })
    }

    /// Polynomial map from coefficient lists (`h[k]`, `g[k]` multiply `z^k`).
    pub fn custom(h: TruncatedSeries, g: TruncatedSeries) -> Self {
        Self {
            kind: MapKind::Custom,
            h,
            g,
            exact: true,
            rotation: 0.0,
        }
    }

    /// Catalog lookup by name; `family` reads `b` and `n` from `params`.
    pub fn catalog(name: &str, params: &CatalogParams) -> Result<Self, MapError> {
        match name.parse::<CatalogName>()? {
            CatalogName::Identity => Ok(Self::identity()),
            CatalogName::HarmonicKoebe => Ok(Self::harmonic_koebe_with_degree(params.degree)),
            CatalogName::Family => Self::family(params.b, params.n),
            CatalogName::Custom => Ok(Self::custom(params.h.clone(), params.g.clone())),
        }
    }

    /// The rotation conjugate `e^{−iθ₀} f(e^{iθ₀} z)`.
    pub fn rotated(&self, theta0: f64) -> Self {
        let mut out = self.clone();
        out.rotation += theta0;
        // a_n ↦ a_n e^{i(n−1)θ₀}, b_n ↦ b_n e^{i(n+1)θ₀}
        out.h = TruncatedSeries::new(
            self.h
                .coeffs()
                .iter()
                .enumerate()
                .map(|(n, &a)| a * Complex64::from_polar(1.0, (n as f64 - 1.0) * theta0))
                .collect(),
        );
        out.g = TruncatedSeries::new(
            self.g
                .coeffs()
                .iter()
                .enumerate()
                .map(|(n, &b)| b * Complex64::from_polar(1.0, (n as f64 + 1.0) * theta0))
                .collect(),
        );
        out
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            MapKind::Identity => "identity".into(),
            MapKind::HarmonicKoebe => "harmonic-koebe".into(),
            MapKind::Family { b, n } => format!("family(b={},{};n={n})", b.re, b.im),
            MapKind::Custom => "custom".into(),
        }
    }

    pub fn h_series(&self) -> &TruncatedSeries {
        &self.h
    }

    pub fn g_series(&self) -> &TruncatedSeries {
        &self.g
    }

    /// Whether the stored series are the whole of `h` and `g`.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// `h(0) = 0`, `h'(0) = 1`, `g(0) = 0`.
    pub fn is_normalized(&self) -> bool {
        let tol = 1e-14;
        self.h.coeff(0).norm() <= tol
            && (self.h.coeff(1) - c(1.0, 0.0)).norm() <= tol
            && self.g.coeff(0).norm() <= tol
    }

    /// `b₁ = g'(0)`; `f ≈ z + conj(b₁ z)` near the origin.
    pub fn b1(&self) -> Complex64 {
        self.g.coeff(1)
    }

    fn unrotate(&self, z: Complex64) -> Complex64 {
        if self.rotation == 0.0 {
            z
        } else {
            z * Complex64::from_polar(1.0, self.rotation)
        }
    }

    /// `(h, h', g, g')` at the unrotated point through closed forms.
    fn base_parts(&self, z: Complex64) -> Parts {
        let one = c(1.0, 0.0);
        match &self.kind {
            MapKind::Identity => Parts {
                h: z,
                dh: one,
                g: c(0.0, 0.0),
                dg: c(0.0, 0.0),
            },
            MapKind::HarmonicKoebe => {
                let w = one - z;
                let w3 = w * w * w;
                let w4 = w3 * w;
                let z2 = z * z;
                let z3 = z2 * z;
                Parts {
                    h: (z - 0.5 * z2 + z3 / 6.0) / w3,
                    dh: (one + z) / w4,
                    g: (0.5 * z2 + z3 / 6.0) / w3,
                    dg: z * (one + z) / w4,
                }
            }
            MapKind::Family { b, n } => {
                let zn1 = z.powu(n - 1);
                Parts {
                    h: z,
                    dh: one,
                    g: b.conj() * zn1 * z,
                    dg: b.conj() * (*n as f64) * zn1,
                }
            }
            MapKind::Custom => Parts {
                h: self.h.evaluate(z),
                dh: self.h.derivative().evaluate(z),
                g: self.g.evaluate(z),
                dg: self.g.derivative().evaluate(z),
            },
        }
    }

    /// `(h, h', g, g')` at `z`, honouring the rotation conjugate.
    pub fn parts(&self, z: Complex64) -> Parts {
        if self.rotation == 0.0 || self.kind == MapKind::Custom {
            return self.base_parts(z);
        }
        let rot = Complex64::from_polar(1.0, self.rotation);
        let p = self.base_parts(self.unrotate(z));
        Parts {
            h: p.h / rot,
            dh: p.dh,
            g: p.g * rot,
            dg: p.dg * rot * rot,
        }
    }

    /// Series-only evaluation of `(h, h', g, g')`, ignoring closed forms.
    pub fn series_parts(&self, z: Complex64) -> Parts {
        Parts {
            h: self.h.evaluate(z),
            dh: self.h.derivative().evaluate(z),
            g: self.g.evaluate(z),
            dg: self.g.derivative().evaluate(z),
        }
    }

    pub fn eval_f(&self, z: Complex64) -> Complex64 {
        let p = self.parts(z);
        p.h + p.g.conj()
    }

    pub fn eval_d(&self, z: Complex64) -> Complex64 {
        let p = self.parts(z);
        z * p.dh - (z * p.dg).conj()
    }

    /// `f(z)` and `Df(z)` from a single evaluation of the parts.
    pub fn eval_f_and_d(&self, z: Complex64) -> (Complex64, Complex64) {
        let p = self.parts(z);
        (p.h + p.g.conj(), z * p.dh - (z * p.dg).conj())
    }

    pub fn jacobian(&self, z: Complex64) -> f64 {
        let p = self.parts(z);
        p.dh.norm_sqr() - p.dg.norm_sqr()
    }

    pub fn dilatation(&self, z: Complex64) -> Result<Complex64, MapError> {
        let p = self.parts(z);
        let modulus = p.dh.norm();
        if modulus < 1e-12 {
            return Err(MapError::VanishingDerivative { z, modulus });
        }
        Ok(p.dg / p.dh)
    }

    /// `sup |g'/h'|` over the sample points of `grid` (origin included).
    pub fn dilatation_sup(&self, grid: &GridSpec) -> Result<f64, MapError> {
        let origin = self.dilatation(c(0.0, 0.0))?.norm();
        let radii = grid.radii();
        let per_radius: Vec<Result<f64, MapError>> = radii
            .par_iter()
            .map(|&r| {
                let mut best = 0.0f64;
                for z in grid.circle(r) {
                    best = best.max(self.dilatation(z)?.norm());
                }
                Ok(best)
            })
            .collect();
        per_radius
            .into_iter()
            .try_fold(origin, |acc, r| Ok(acc.max(r?)))
    }

    /// Coefficient rows `(n, a_n, b_n)` for export.
    pub fn coefficient_rows(&self) -> Vec<CoefficientRow> {
        let len = self.h.degree().max(self.g.degree()) + 1;
        (0..len)
            .map(|n| {
                let a = self.h.coeff(n);
                let b = self.g.coeff(n);
                CoefficientRow {
                    n,
                    re_a: a.re,
                    im_a: a.im,
                    re_b: b.re,
                    im_b: b.im,
                }
            })
            .collect()
    }

    pub fn write_coefficients_csv<W: Write>(&self, out: W) -> Result<(), MapError> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        for row in self.coefficient_rows() {
            writer.serialize(row)?;
        }
        writer.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    /// Read a custom map from the coefficient CSV (`n,re_a,im_a,re_b,im_b`).
    /// Rows must list `n = 0, 1, 2, …` in order.
    pub fn read_coefficients_csv<R: Read>(input: R) -> Result<Self, MapError> {
        let mut reader = csv::Reader::from_reader(input);
        let mut h = Vec::new();
        let mut g = Vec::new();
        for (row, record) in reader.deserialize::<CoefficientRow>().enumerate() {
            let record = record?;
            if record.n != row {
                return Err(MapError::CsvIndex {
                    row: row + 1,
                    expected: row,
                    got: record.n,
                });
            }
            h.push(c(record.re_a, record.im_a));
            g.push(c(record.re_b, record.im_b));
        }
        Ok(Self::custom(
            TruncatedSeries::new(h),
            TruncatedSeries::new(g),
        ))
    }
}

impl fmt::Display for HarmonicMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Values of the analytic parts at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parts {
    pub h: Complex64,
    pub dh: Complex64,
    pub g: Complex64,
    pub dg: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub n: usize,
    pub re_a: f64,
    pub im_a: f64,
    pub re_b: f64,
    pub im_b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogName {
    Identity,
    HarmonicKoebe,
    Family,
    Custom,
}

impl FromStr for CatalogName {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self, MapError> {
        match s {
            "identity" => Ok(Self::Identity),
            "harmonic-koebe" | "koebe" => Ok(Self::HarmonicKoebe),
            "family" => Ok(Self::Family),
            "custom" => Ok(Self::Custom),
            other => Err(MapError::UnknownFunction(other.to_string())),
        }
    }
}

/// Parameters consumed by [`HarmonicMap::catalog`].
#[derive(Debug, Clone)]
pub struct CatalogParams {
    pub b: Complex64,
    pub n: u32,
    pub degree: usize,
    pub h: TruncatedSeries,
    pub g: TruncatedSeries,
}

impl Default for CatalogParams {
    fn default() -> Self {
        Self {
            b: c(0.0, 0.0),
            n: 1,
            degree: DEFAULT_DEGREE,
            h: TruncatedSeries::identity(),
            g: TruncatedSeries::zero(1),
        }
    }
}
