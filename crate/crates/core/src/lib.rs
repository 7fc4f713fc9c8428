//! Dispersive and Strichartz estimates for the Schrödinger equation on
//! symmetric spaces of noncompact type whose root multiplicities are all 1
//! (normal real forms) or all 2 (complex doubles).
//!
//! On the complex double every kernel has a closed form: `Φ₀` times a
//! Euclidean Gaussian in `N = dim X` variables. The normal real form reuses
//! it at half time and half argument. The modules follow that chain:
//!
//! - [`root_system`]: roots, charts, norms, chamber points, densities
//! - [`spherical`]: `Φ₀`, radial profiles, spherical transforms
//! - [`kernels`]: complex times, heat and Schrödinger kernels, bounds
//! - [`estimates`]: sup norms, Kunze–Stein functionals, slope reports
//! - [`strichartz`]: admissible exponents and the rank-one evolution model
//! - [`report`]: canonical JSON/CSV output
//!
//! ```
//! use symdisperse::kernels::{schrodinger_kernel_normal, ComplexTime};
//! use symdisperse::root_system::{ChamberPoint, Family, RootSpace};
//!
//! let a1 = RootSpace::build(Family::A, 1)?;
//! let s = schrodinger_kernel_normal(&a1, ComplexTime::schrodinger(1.0)?, &ChamberPoint::origin(1))?;
//! // (2π)^{-N/2} e^{-i|ρ|²/2 - iNπ/4} with N = 3 at the origin
//! assert!((s.norm() - (2.0 * std::f64::consts::PI).powf(-1.5)).abs() < 1e-15);
//! # Ok::<(), symdisperse::error::Error>(())
//! ```

pub mod bessel;
pub mod error;
pub mod estimates;
pub mod kernels;
pub mod quadrature;
pub mod report;
pub mod root_system;
pub mod spherical;
pub mod strichartz;

pub use error::{Error, Result};
pub use kernels::ComplexTime;
pub use num_complex::Complex64;
pub use root_system::{ChamberPoint, Covector, Family, Form, RootSpace, SpaceName};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/root-systems.md")]
    mod root_systems {}
    #[doc = include_str!("../../../book/src/spherical-transform.md")]
    mod spherical_transform {}
    #[doc = include_str!("../../../book/src/kernels.md")]
    mod kernels {}
    #[doc = include_str!("../../../book/src/dispersive.md")]
    mod dispersive {}
    #[doc = include_str!("../../../book/src/strichartz.md")]
    mod strichartz {}
    #[doc = include_str!("../../../book/src/reports-cli.md")]
    mod reports_cli {}
}
