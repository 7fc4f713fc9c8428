//! Elementary spherical function `Φ₀` of the complex double, its bound
//! surrogate on the real form, and spherical transforms on the complex double.
//!
//! On a complex group the spherical transform of a bi-invariant function `f`
//! is the Euclidean Fourier transform (over `𝔭 ≅ ℝ^N`) of `f/Φ₀`. Radial
//! profiles therefore come in two flavours:
//!
//! * spectral profiles `f(‖λ‖)`, functions of the complex side dual norm;
//! * spatial profiles `g(‖H‖)`, the `Φ₀`-reduced Euclidean factor of a
//!   bi-invariant function `u(exp H) = Φ₀(exp H) g(‖H‖)`.
//!
//! Both transforms reduce to a one dimensional integral against the kernel
//! `J_ν(kr)/(kr)^ν`, `ν = N/2 − 1`. The Fourier measure on `𝔭*` carries the
//! factor `(2π)^{-N}`, which makes the inverse transform of `e^{-τ(|ρ|²+|λ|²)}`
//! exactly the Gaussian kernel of [`crate::kernels`].

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bessel::{bessel_j_scaled, Order};
use crate::error::{Error, Result};
use crate::kernels::ComplexTime;
use crate::quadrature::{integrate, AdaptiveOptions, Integral};
use crate::root_system::{ChamberPoint, Covector, DualSide, Multiplicity, RootSpace};

/// Constants `(c, a)` of a bound `c(1 + ‖H‖)^a e^{-ρ(H)}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateConstants {
    pub c: f64,
    pub a: f64,
}

impl EstimateConstants {
    pub fn new(c: f64, a: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0 && a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "estimate constants must be positive and finite, got c = {c}, a = {a}"
            )));
        }
        Ok(EstimateConstants { c, a })
    }

    /// `c = 2^{|Σ⁺|}`, `a = |Σ⁺|`: constants for which the two sided bound on
    /// `Φ₀` holds on every catalog space.
    pub fn sandwich(rs: &RootSpace) -> Self {
        let m = rs.num_positive_roots() as f64;
        EstimateConstants { c: 2f64.powf(m), a: m }
    }
}

impl Default for EstimateConstants {
    fn default() -> Self {
        EstimateConstants { c: 1.0, a: 1.0 }
    }
}

/// `x / sinh x`, with the removable singularity filled in.
pub fn x_over_sinh(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-4 {
        let x2 = ax * ax;
        1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0
    } else if ax < 20.0 {
        ax / ax.sinh()
    } else {
        2.0 * ax * (-ax).exp() / -(-2.0 * ax).exp_m1()
    }
}

fn ln_x_over_sinh(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 20.0 {
        x_over_sinh(ax).ln()
    } else {
        (2.0 * ax).ln() - ax - (-(-2.0 * ax).exp()).ln_1p()
    }
}

/// `Φ₀(exp H) = ∏_{α∈Σ⁺} α(H)/sinh α(H)` on the complex double.
pub fn phi0_complex(rs: &RootSpace, h: &ChamberPoint) -> Result<f64> {
    Ok(rs.chamber_values(h)?.into_iter().map(x_over_sinh).product())
}

/// `ln Φ₀(exp H)`, free of underflow far out in the chamber.
pub fn ln_phi0_complex(rs: &RootSpace, h: &ChamberPoint) -> Result<f64> {
    Ok(rs.chamber_values(h)?.into_iter().map(ln_x_over_sinh).sum())
}

/// Upper bound surrogate `c(1 + ‖H‖₀)^a e^{-ρ₀(H)}` for the real form `φ₀`.
pub fn phi0_normal_upper(rs: &RootSpace, h: &ChamberPoint, k: EstimateConstants) -> f64 {
    ln_phi0_normal_upper(rs, h, k).exp()
}

pub fn ln_phi0_normal_upper(rs: &RootSpace, h: &ChamberPoint, k: EstimateConstants) -> f64 {
    let rho0 = rs.rho(Multiplicity::Normal);
    k.c.ln() + k.a * rs.norm0(h).ln_1p() - rho0.apply(h)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Spectral,
    Spatial,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProfileKind {
    /// Spectral: `e^{-τ(shift + ‖λ‖²)}`. Spatial: its inverse transform
    /// `(4πτ)^{-N/2} e^{-τ·shift} e^{-r²/4τ}` on `ℝ^N`.
    Gaussian { tau: ComplexTime, shift: f64 },
    /// Samples on a strictly increasing grid, cubic Hermite in between and
    /// zero past the last node.
    Sampled { grid: Vec<f64>, values: Vec<Complex64> },
}

/// A radial function on the spectral or spatial side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile", into = "RawProfile")]
pub struct RadialProfile {
    side: Side,
    kind: ProfileKind,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawProfile {
    side: Side,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tau: Option<ComplexTime>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shift: Option<f64>,
}

impl From<RadialProfile> for RawProfile {
    fn from(p: RadialProfile) -> Self {
        match p.kind {
            ProfileKind::Gaussian { tau, shift } => RawProfile {
                side: p.side,
                kind: "gaussian".into(),
                grid: None,
                values: None,
                tau: Some(tau),
                shift: Some(shift),
            },
            ProfileKind::Sampled { grid, values } => RawProfile {
                side: p.side,
                kind: "sampled".into(),
                grid: Some(grid),
                values: Some(values.iter().map(|z| [z.re, z.im]).collect()),
                tau: None,
                shift: None,
            },
        }
    }
}

impl TryFrom<RawProfile> for RadialProfile {
    type Error = Error;

    fn try_from(raw: RawProfile) -> Result<Self> {
        match raw.kind.as_str() {
            "gaussian" => {
                let tau = raw
                    .tau
                    .ok_or_else(|| Error::InvalidProfile("gaussian profile without tau".into()))?;
                Ok(RadialProfile::gaussian(raw.side, tau, raw.shift.unwrap_or(0.0)))
            }
            "sampled" => {
                let grid = raw
                    .grid
                    .ok_or_else(|| Error::InvalidProfile("sampled profile without grid".into()))?;
                let values = raw
                    .values
                    .ok_or_else(|| Error::InvalidProfile("sampled profile without values".into()))?
                    .into_iter()
                    .map(|[re, im]| Complex64::new(re, im))
                    .collect();
                RadialProfile::sampled(raw.side, grid, values)
            }
            other => Err(Error::InvalidProfile(format!("unknown profile kind {other:?}"))),
        }
    }
}

impl RadialProfile {
    pub fn gaussian(side: Side, tau: ComplexTime, shift: f64) -> Self {
        RadialProfile {
            side,
            kind: ProfileKind::Gaussian { tau, shift },
        }
    }

    /// The spectral Schrödinger/heat multiplier `e^{-τ(|ρ|² + ‖λ‖²)}`.
    pub fn propagator(rs: &RootSpace, tau: ComplexTime) -> Self {
        Self::gaussian(Side::Spectral, tau, rs.rho_sq_complex())
    }

    pub fn sampled(side: Side, grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::EmptyGrid("profile grid"));
        }
        if grid.len() != values.len() {
            return Err(Error::InvalidProfile(format!(
                "{} grid points but {} values",
                grid.len(),
                values.len()
            )));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidProfile("grid must be finite and strictly increasing".into()));
        }
        Ok(RadialProfile {
            side,
            kind: ProfileKind::Sampled { grid, values },
        })
    }

    /// Samples `f` on `grid`.
    pub fn from_fn<F: Fn(f64) -> Complex64>(side: Side, grid: Vec<f64>, f: F) -> Result<Self> {
        let values = grid.iter().map(|&x| f(x)).collect();
        Self::sampled(side, grid, values)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    /// Value at radius `r`; `dim` is the Euclidean dimension `N` (only spatial
    /// Gaussians depend on it).
    pub fn value(&self, r: f64, dim: usize) -> Complex64 {
        match &self.kind {
            ProfileKind::Gaussian { tau, shift } => {
                let z = tau.value();
                match self.side {
                    Side::Spectral => (-z * (shift + r * r)).exp(),
                    Side::Spatial => {
                        let ln = -(dim as f64 / 2.0) * (4.0 * PI * z).ln() - z * shift - r * r / (4.0 * z);
                        ln.exp()
                    }
                }
            }
            ProfileKind::Sampled { grid, values } => interpolate(grid, values, r),
        }
    }

    /// Radius past which the profile is treated as zero.
    pub fn support_radius(&self, spec: &QuadratureSpec) -> f64 {
        match &self.kind {
            ProfileKind::Sampled { grid, .. } => *grid.last().expect("non-empty grid"),
            ProfileKind::Gaussian { tau, .. } => spec.radius.unwrap_or_else(|| match self.side {
                Side::Spectral => 40.0 / tau.eps().sqrt(),
                Side::Spatial => {
                    let m = tau.value().norm();
                    (160.0 * m * m / tau.eps()).sqrt()
                }
            }),
        }
    }
}

/// Cubic Hermite interpolation with centred-difference slopes.
fn interpolate(grid: &[f64], values: &[Complex64], x: f64) -> Complex64 {
    let n = grid.len();
    if x <= grid[0] {
        return values[0];
    }
    if x > grid[n - 1] || n == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let i = grid.partition_point(|g| *g <= x).saturating_sub(1).min(n - 2);
    let (x0, x1) = (grid[i], grid[i + 1]);
    let h = x1 - x0;
    let slope = |j: usize| -> Complex64 {
        if j == 0 {
            (values[1] - values[0]) / (grid[1] - grid[0])
        } else if j == n - 1 {
            (values[n - 1] - values[n - 2]) / (grid[n - 1] - grid[n - 2])
        } else {
            (values[j + 1] - values[j - 1]) / (grid[j + 1] - grid[j - 1])
        }
    };
    let s = (x - x0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    values[i] * h00 + slope(i) * (h10 * h) + values[i + 1] * h01 + slope(i + 1) * (h11 * h)
}

/// Truncation radius and tolerances of the radial quadratures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Upper integration limit; `None` picks `40/√(Re τ)` for Gaussians.
    pub radius: Option<f64>,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Smallest `Re τ` at which an oscillatory Gaussian is integrated
    /// directly; below it the value is extrapolated in `Re τ`.
    pub eps_min: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radius: None,
            rel_tol: 1e-8,
            max_subdivisions: 50_000,
            eps_min: 1e-3,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if let Some(r) = self.radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
            }
        }
        if !(self.eps_min > 0.0) {
            return Err(Error::InvalidParameter("eps_min must be positive".into()));
        }
        Ok(())
    }

    fn adaptive(&self, panels: usize) -> AdaptiveOptions {
        AdaptiveOptions {
            rel_tol: self.rel_tol,
            abs_tol: 1e-300,
            max_subdivisions: self.max_subdivisions,
            initial_panels: panels,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

fn panels_for(upper: f64, r: f64) -> usize {
    (8.0 + upper * r / PI).ceil().min(4096.0) as usize
}

/// `(2π)^{-N} ∫_{ℝ^N} f(‖k‖) e^{ik·x} dk` at `‖x‖ = r`, over `‖k‖ ≤ upper`.
pub fn radial_inverse_fourier<F>(dim: usize, f: F, r: f64, upper: f64, spec: &QuadratureSpec) -> Integral<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let order = Order::for_dimension(dim);
    let p = (dim - 1) as i32;
    let pref = (2.0 * PI).powf(-(dim as f64) / 2.0);
    let mut res = integrate(
        |k: f64| f(k) * (k.powi(p) * bessel_j_scaled(order, k * r)),
        0.0,
        upper,
        &spec.adaptive(panels_for(upper, r)),
    );
    res.value *= pref;
    res.abs_error *= pref;
    res
}

/// `∫_{ℝ^N} g(‖x‖) e^{-ik·x} dx` at `‖k‖ = k`, over `‖x‖ ≤ upper`.
pub fn radial_forward_fourier<F>(dim: usize, g: F, k: f64, upper: f64, spec: &QuadratureSpec) -> Integral<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let order = Order::for_dimension(dim);
    let p = (dim - 1) as i32;
    let pref = (2.0 * PI).powf(dim as f64 / 2.0);
    let mut res = integrate(
        |r: f64| g(r) * (r.powi(p) * bessel_j_scaled(order, k * r)),
        0.0,
        upper,
        &spec.adaptive(panels_for(upper, k)),
    );
    res.value *= pref;
    res.abs_error *= pref;
    res
}

/// Inverse spherical transform on the complex double at `exp H`.
///
/// `ClosedForm` is available for Gaussian profiles only. `Quadrature`
/// integrates the Bessel reduction directly when `Re τ ≥ eps_min` and
/// otherwise extrapolates from `Re τ ∈ eps_min·{1, 2, 4, 8}`.
pub fn inverse_spherical_complex(
    rs: &RootSpace,
    f: &RadialProfile,
    h: &ChamberPoint,
    method: Method,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if f.side != Side::Spectral {
        return Err(Error::InvalidProfile("inverse transform needs a spectral profile".into()));
    }
    spec.validate()?;
    let phi = phi0_complex(rs, h)?;
    let r = rs.norm_complex(h);
    let dim = rs.big_n();
    match (method, &f.kind) {
        (Method::ClosedForm, ProfileKind::Gaussian { .. }) => {
            Ok(f.with_side(Side::Spatial).value(r, dim) * phi)
        }
        (Method::ClosedForm, ProfileKind::Sampled { .. }) => Err(Error::InvalidProfile(
            "closed form inverse is only available for Gaussian profiles".into(),
        )),
        (Method::Quadrature, ProfileKind::Gaussian { tau, shift }) if tau.eps() < spec.eps_min => {
            let g = extrapolate_in_eps(*tau, spec.eps_min, |tau_j| {
                let prof = RadialProfile::gaussian(Side::Spectral, tau_j, *shift);
                let upper = prof.support_radius(spec);
                radial_inverse_fourier(dim, |k| prof.value(k, dim), r, upper, spec)
                    .strict(&spec.adaptive(0))
            })?;
            Ok(g * phi)
        }
        (Method::Quadrature, _) => {
            let upper = f.support_radius(spec);
            let g = radial_inverse_fourier(dim, |k| f.value(k, dim), r, upper, spec)
                .strict(&spec.adaptive(0))?;
            Ok(g * phi)
        }
    }
}

/// Inverse spherical transform of an arbitrary spectral function `f(‖λ‖)`
/// supported in `‖λ‖ ≤ upper`.
pub fn inverse_spherical_complex_fn<F>(
    rs: &RootSpace,
    f: F,
    h: &ChamberPoint,
    upper: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    let phi = phi0_complex(rs, h)?;
    let r = rs.norm_complex(h);
    let g = radial_inverse_fourier(rs.big_n(), f, r, upper, spec).strict(&spec.adaptive(0))?;
    Ok(g * phi)
}

/// Polynomial (Neville) extrapolation of `value(eps)` from
/// `eps_min·{1, 2, 4, 8}` down to the requested `Re τ`.
fn extrapolate_in_eps<F>(tau: ComplexTime, eps_min: f64, mut value: F) -> Result<Complex64>
where
    F: FnMut(ComplexTime) -> Result<Complex64>,
{
    let nodes: Vec<f64> = (0..4).map(|j| eps_min * 2f64.powi(j)).collect();
    let mut table = Vec::with_capacity(nodes.len());
    for &e in &nodes {
        table.push(value(ComplexTime::new(e, tau.t())?)?);
    }
    let x = tau.eps();
    for level in 1..nodes.len() {
        for i in 0..nodes.len() - level {
            let (xi, xj) = (nodes[i], nodes[i + level]);
            table[i] = (table[i] * (x - xj) - table[i + 1] * (x - xi)) / (xi - xj);
        }
    }
    Ok(table[0])
}

impl RadialProfile {
    fn with_side(&self, side: Side) -> RadialProfile {
        RadialProfile {
            side,
            kind: self.kind.clone(),
        }
    }
}

/// Forward spherical transform on the complex double of the bi-invariant
/// function `Φ₀·g(‖H‖)` given by its reduced spatial profile `g`.
pub fn forward_spherical_complex(
    rs: &RootSpace,
    kernel: &RadialProfile,
    lambda: &Covector,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if kernel.side != Side::Spatial {
        return Err(Error::InvalidProfile("forward transform needs a spatial profile".into()));
    }
    spec.validate()?;
    let dim = rs.big_n();
    let k = rs.dual_norm(lambda, DualSide::Complex);
    let upper = kernel.support_radius(spec);
    radial_forward_fourier(dim, |r| kernel.value(r, dim), k, upper, spec).strict(&spec.adaptive(0))
}

/// Forward spherical transform of a bi-invariant kernel given pointwise on
/// the chamber. The kernel is reduced by `Φ₀` along the ray through `ρ`,
/// which presumes that `kernel/Φ₀` depends on `‖H‖` only.
pub fn forward_spherical_complex_kernel<F>(
    rs: &RootSpace,
    kernel: F,
    lambda: &Covector,
    upper: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64>
where
    F: Fn(&ChamberPoint) -> Result<Complex64>,
{
    spec.validate()?;
    let dim = rs.big_n();
    let dir = rs.reference_direction();
    let k = rs.dual_norm(lambda, DualSide::Complex);
    let mut failure = None;
    let reduced = |r: f64| -> Complex64 {
        let h = dir.scaled(r);
        match (kernel(&h), phi0_complex(rs, &h)) {
            (Ok(v), Ok(phi)) if phi > 0.0 => v / phi,
            (Ok(_), Ok(_)) => Complex64::new(0.0, 0.0),
            (Err(e), _) | (_, Err(e)) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let cell = std::cell::RefCell::new(reduced);
    let res = radial_forward_fourier(dim, |r| (cell.borrow_mut())(r), k, upper, spec);
    drop(cell);
    if let Some(e) = failure {
        return Err(e);
    }
    res.strict(&spec.adaptive(0))
}
