//! Spirallike and strongly starlike harmonic maps of the unit disk.
//!
//! A sense-preserving harmonic map `f = h + conj(g)` is checked pointwise
//! through the quotient `Df/f` with `Df = z h' − conj(z g')`. The crate
//! provides truncated power series, a catalog of maps, spiral geometry and a
//! polygon oracle, analytic classifiers, growth bounds, a radius finder and a
//! command-line front end.
//!
//! ```
//! use spiralkit::{HarmonicMap, SpiralFrame, GridSpec, check_hereditary_spirallike};
//!
//! let koebe = HarmonicMap::harmonic_koebe();
//! let frame = SpiralFrame::starlike();
//! let v = check_hereditary_spirallike(&koebe, &frame, &GridSpec::up_to(0.5)).unwrap();
//! assert!(v.is_pass());
//! ```

pub mod bounds;
pub mod classify;
pub mod cli;
pub mod geometry;
pub mod harmonic;
pub mod oracles;
pub mod plot;
pub mod radius;
pub mod report;
pub mod series;
pub mod verdict;

pub use bounds::{bound_m, bound_n, qc_constant, AlphaParam, BoundsError};
pub use classify::{
    check_hereditary_spirallike, check_hereditary_strongly_starlike, classify_spirallike,
    classify_strongly_starlike, coefficient_condition, convolution_test_exact, silverman_condition,
    spiral_quotient, ClassifyError, GridSpec,
};
pub use geometry::{lambda_arg, GeometryError, PolygonCurve, SpiralFrame};
pub use harmonic::{HarmonicMap, MapError, MapKind};
pub use series::{Kernel, SeriesError, TruncatedSeries};
pub use verdict::{Status, Verdict};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/harmonic.md")]
    mod harmonic {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/classify.md")]
    mod classify {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/radius.md")]
    mod radius {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
