//! Strichartz admissibility, the pair-exclusion rule for inhomogeneous
//! estimates, the NLS exponent window, and a spectral evolution engine for
//! the linear Schrödinger equation on the rank-one complex model.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, trapezoid, AdaptiveOptions};
use crate::root_system::{ChamberPoint, Family, RootSpace};
use crate::spherical::{phi0_complex, radial_inverse_fourier, Method, ProfileKind, QuadratureSpec, RadialProfile, Side};

/// Slack for the boundary of the admissible triangle.
const ADMISSIBLE_SLACK: f64 = 1e-12;

/// A point `(1/p, 1/q)` of `[0, 1/2]²` together with the dimension `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissiblePair {
    pub inv_p: f64,
    pub inv_q: f64,
    pub n: usize,
}

/// Outcome of an admissibility test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub reason: String,
}

impl AdmissiblePair {
    pub fn new(inv_p: f64, inv_q: f64, n: usize) -> Result<Self> {
        for (name, v) in [("1/p", inv_p), ("1/q", inv_q)] {
            if !(0.0..=0.5).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must lie in [0, 1/2]")));
            }
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!("dimension n = {n} must be at least 2")));
        }
        Ok(AdmissiblePair { inv_p, inv_q, n })
    }

    /// From exponents `p, q ∈ [2, ∞]`.
    pub fn from_exponents(p: f64, q: f64, n: usize) -> Result<Self> {
        Self::new(reciprocal(p)?, reciprocal(q)?, n)
    }

    pub fn check(&self) -> Admissibility {
        admissibility(self.inv_p, self.inv_q, self.n)
    }
}

fn reciprocal(p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidParameter(format!("exponent {p} must be positive")));
    }
    Ok(if p.is_infinite() { 0.0 } else { 1.0 / p })
}

/// Membership in `T_n = {2/p + n/q ≥ n/2, 0 < 1/p ≤ 1/2, 0 < 1/q < 1/2} ∪ {(0, 1/2)}`
/// with the reason for the verdict.
pub fn admissibility(inv_p: f64, inv_q: f64, n: usize) -> Admissibility {
    let verdict = |admissible: bool, reason: String| Admissibility { admissible, reason };
    let nf = n as f64;
    if inv_p == 0.0 && inv_q == 0.5 {
        return verdict(true, "isolated point (1/p, 1/q) = (0, 1/2)".into());
    }
    if !(0.0..=0.5).contains(&inv_p) || !(0.0..=0.5).contains(&inv_q) {
        return verdict(false, "(1/p, 1/q) must lie in [0, 1/2]^2".into());
    }
    if inv_q == 0.5 {
        return verdict(false, "inv_q = 1/2 only admitted at inv_p = 0 exactly".into());
    }
    if inv_p == 0.0 {
        return verdict(false, "inv_p = 0 only admitted at inv_q = 1/2".into());
    }
    if inv_q == 0.0 {
        return verdict(false, "inv_q = 0 lies outside the open strip 0 < 1/q < 1/2".into());
    }
    let lhs = 2.0 * inv_p + nf * inv_q;
    if lhs >= nf / 2.0 - ADMISSIBLE_SLACK {
        verdict(true, format!("2/p + n/q = {lhs} >= n/2 = {}", nf / 2.0))
    } else {
        verdict(false, format!("2/p + n/q = {lhs} < n/2 = {}", nf / 2.0))
    }
}

pub fn is_admissible(inv_p: f64, inv_q: f64, n: usize) -> bool {
    admissibility(inv_p, inv_q, n).admissible
}

/// Upper end `2n/(n−2)` of the exclusion window (`∞` for `n ≤ 2`).
pub fn exclusion_upper(n: usize) -> f64 {
    if n <= 2 {
        f64::INFINITY
    } else {
        2.0 * n as f64 / (n as f64 - 2.0)
    }
}

/// Whether `2 < q ≠ q̃ ≤ 2n/(n−2)`, read as `q ≠ q̃` with both `q, q̃` in
/// `(2, 2n/(n−2)]` (in `(2, ∞)` for `n = 2`).
pub fn exclusion_window_applies(q: f64, q_tilde: f64, n: usize) -> bool {
    let upper = exclusion_upper(n);
    let inside = |x: f64| {
        if n <= 2 {
            x > 2.0 && x < upper
        } else {
            x > 2.0 && x <= upper * (1.0 + 1e-12)
        }
    };
    !same_exponent(q, q_tilde) && inside(q) && inside(q_tilde)
}

fn same_exponent(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// How the chained inequality of the exclusion rule is parsed; reported with
/// every verdict.
pub const EXCLUSION_READING: &str = "q != q~ and both q, q~ in (2, 2n/(n-2)]";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub allowed: bool,
    pub reason: String,
    pub reading: String,
    /// Set for `n = 2`, where the lower end of the window is not pinned down.
    pub caveat: Option<String>,
}

/// Whether the inhomogeneous estimate with pairs `(p, q)` and `(p̃, q̃)` is
/// asserted. Both pairs must be admissible.
pub fn theorem2_pair_allowed(p: f64, q: f64, p_tilde: f64, q_tilde: f64, n: usize) -> Result<PairVerdict> {
    for (pp, qq) in [(p, q), (p_tilde, q_tilde)] {
        let pair = AdmissiblePair::from_exponents(pp, qq, n)?;
        if !pair.check().admissible {
            return Err(Error::NotAdmissible {
                inv_p: pair.inv_p,
                inv_q: pair.inv_q,
                n,
            });
        }
    }
    let excluded = exclusion_window_applies(q, q_tilde, n);
    let upper = exclusion_upper(n);
    let reason = if excluded {
        format!("excluded: q = {q} and q~ = {q_tilde} differ and both lie in (2, {upper}]")
    } else if same_exponent(q, q_tilde) {
        "allowed: q = q~".to_string()
    } else {
        format!("allowed: q = {q} or q~ = {q_tilde} lies outside (2, {upper}]")
    };
    let caveat = (n == 2).then(|| {
        "n = 2: the window's lower end is taken to be 2; the source ties it to an undefined quantity".to_string()
    });
    Ok(PairVerdict {
        allowed: !excluded,
        reason,
        reading: EXCLUSION_READING.to_string(),
        caveat,
    })
}

/// The open interval `(1, 1 + 4/n)` of admissible NLS powers `γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GammaWindow {
    pub lower: Ratio<i64>,
    pub upper: Ratio<i64>,
}

impl GammaWindow {
    pub fn contains(&self, gamma: f64) -> bool {
        let to_f = |r: Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
        gamma > to_f(self.lower) && gamma < to_f(self.upper)
    }
}

impl fmt::Display for GammaWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lower, self.upper)
    }
}

pub fn nls_gamma_window(n: usize) -> Result<GammaWindow> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension n must be at least 1".into()));
    }
    Ok(GammaWindow {
        lower: Ratio::from_integer(1),
        upper: Ratio::from_integer(1) + Ratio::new(4, n as i64),
    })
}

type SpectralFn = dyn Fn(f64) -> Complex64 + Send + Sync;

/// Radial spectral data `û(k)`, `k = ‖λ‖`, on the rank-one model.
#[derive(Clone)]
pub enum Spectrum {
    /// `amplitude · e^{-σk²}`, `Re σ > 0`.
    Gaussian { amplitude: Complex64, sigma: Complex64 },
    /// An arbitrary function supported in `k ≤ support`.
    General { f: Arc<SpectralFn>, support: f64 },
}

impl fmt::Debug for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spectrum::Gaussian { amplitude, sigma } => f
                .debug_struct("Gaussian")
                .field("amplitude", amplitude)
                .field("sigma", sigma)
                .finish(),
            Spectrum::General { support, .. } => f.debug_struct("General").field("support", support).finish_non_exhaustive(),
        }
    }
}

impl Spectrum {
    /// Gaussian data whose spatial profile has standard deviation `width`:
    /// `f̂(k) = e^{-width²k²/2}`.
    pub fn gaussian_width(width: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidParameter(format!("width must be positive, got {width}")));
        }
        Ok(Spectrum::Gaussian {
            amplitude: Complex64::new(1.0, 0.0),
            sigma: Complex64::new(0.5 * width * width, 0.0),
        })
    }

    pub fn general<F>(support: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        if !(support.is_finite() && support > 0.0) {
            return Err(Error::InvalidParameter(format!("support must be positive, got {support}")));
        }
        Ok(Spectrum::General {
            f: Arc::new(f),
            support,
        })
    }

    /// Spectral profiles only; Gaussians keep their closed form.
    pub fn from_profile(profile: &RadialProfile, spec: &QuadratureSpec) -> Result<Self> {
        if profile.side() != Side::Spectral {
            return Err(Error::InvalidProfile("evolution needs a spectral profile".into()));
        }
        match profile.kind() {
            ProfileKind::Gaussian { tau, shift } if tau.eps() > 0.0 => Ok(Spectrum::Gaussian {
                amplitude: (-tau.value() * *shift).exp(),
                sigma: tau.value(),
            }),
            ProfileKind::Gaussian { .. } => Err(Error::InvalidProfile(
                "a Gaussian with Re tau = 0 is not square integrable".into(),
            )),
            ProfileKind::Sampled { .. } => {
                let p = profile.clone();
                let support = p.support_radius(spec);
                Spectrum::general(support, move |k| p.value(k, 0))
            }
        }
    }

    pub fn value(&self, k: f64) -> Complex64 {
        match self {
            Spectrum::Gaussian { amplitude, sigma } => amplitude * (-sigma * k * k).exp(),
            Spectrum::General { f, support } => {
                if k > *support {
                    Complex64::new(0.0, 0.0)
                } else {
                    f(k)
                }
            }
        }
    }

    fn support(&self) -> f64 {
        match self {
            Spectrum::Gaussian { sigma, .. } => (40.0 / sigma.re).sqrt(),
            Spectrum::General { support, .. } => *support,
        }
    }
}

/// Forcing `F̂(s, k)` sampled at increasing times; zero outside the grid.
#[derive(Clone, Debug)]
pub struct Forcing {
    times: Vec<f64>,
    slices: Vec<Spectrum>,
}

impl Forcing {
    pub fn new(times: Vec<f64>, slices: Vec<Spectrum>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::EmptyGrid("forcing time grid"));
        }
        if times.len() != slices.len() {
            return Err(Error::InvalidParameter(format!(
                "{} forcing times but {} slices",
                times.len(),
                slices.len()
            )));
        }
        if times[0] < 0.0 || times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "forcing times must be non-negative and strictly increasing".into(),
            ));
        }
        Ok(Forcing { times, slices })
    }

    /// The same spectrum at every node of a uniform grid on `[0, t_end]`.
    pub fn constant(slice: Spectrum, t_end: f64, steps: usize) -> Result<Self> {
        if steps == 0 || !(t_end > 0.0) {
            return Err(Error::InvalidParameter("constant forcing needs steps >= 1 and t_end > 0".into()));
        }
        let times = (0..=steps).map(|i| t_end * i as f64 / steps as f64).collect();
        Self::new(times, vec![slice; steps + 1])
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    fn support(&self) -> f64 {
        self.slices.iter().map(Spectrum::support).fold(0.0, f64::max)
    }

    /// `∫₀^t e^{-i(t−s)L} F̂(s, k) ds` by the trapezoid rule on the forcing
    /// grid, the last partial panel closed by linear interpolation.
    fn duhamel(&self, t: f64, k: f64, big_l: f64) -> Complex64 {
        let prop = |s: f64| Complex64::new(0.0, -(t - s) * big_l).exp();
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..self.times.len().saturating_sub(1) {
            let (s0, s1) = (self.times[j], self.times[j + 1]);
            if s0 >= t {
                break;
            }
            let f0 = self.slices[j].value(k);
            let mut f1 = self.slices[j + 1].value(k);
            let mut e = s1;
            if s1 > t {
                let w = (t - s0) / (s1 - s0);
                f1 = f0 * (1.0 - w) + f1 * w;
                e = t;
            }
            acc += (prop(s0) * f0 + prop(e) * f1) * (0.5 * (e - s0));
        }
        acc
    }
}

/// The rank-one complex model: `X = SL(2,ℂ)/SU(2)`, hyperbolic 3-space with
/// curvature `−κ²`.
#[derive(Clone, Debug)]
pub struct ModelSpace {
    rs: RootSpace,
    dir: ChamberPoint,
    kappa: f64,
}

impl ModelSpace {
    pub fn new(rs: RootSpace) -> Result<Self> {
        if rs.rank() != 1 {
            return Err(Error::InvalidParameter(format!(
                "the evolution model needs a rank-one space, got rank {}",
                rs.rank()
            )));
        }
        let dir = rs.reference_direction();
        let kappa = rs.positive_roots()[0].apply(&dir);
        Ok(ModelSpace { rs, dir, kappa })
    }

    /// `A₁` in the standard chart: `κ = 1`, `|ρ|² = 1`.
    pub fn a1() -> Self {
        Self::new(RootSpace::build(Family::A, 1).expect("A1 exists")).expect("A1 has rank one")
    }

    pub fn root_space(&self) -> &RootSpace {
        &self.rs
    }

    pub fn dim(&self) -> usize {
        self.rs.big_n()
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `Φ₀` at distance `r` from the base point.
    pub fn phi0(&self, r: f64) -> f64 {
        phi0_complex(&self.rs, &self.dir.scaled(r)).expect("reference ray lies in the chamber")
    }

    /// Radial volume density `|S^{N−1}| (sinh κr / κ)^{N−1}`.
    pub fn density(&self, r: f64) -> f64 {
        let n = self.dim();
        sphere_area(n) * ((self.kappa * r).sinh() / self.kappa).powi(n as i32 - 1)
    }

    /// `e^{-itL} f̂ − i∫₀^t e^{-i(t−s)L} F̂(s) ds`, `L = |ρ|² + k²`.
    pub fn evolve(&self, f: &Spectrum, t: f64, forcing: Option<&Forcing>) -> Result<Spectrum> {
        if !t.is_finite() {
            return Err(Error::InvalidTime(format!("non-finite time {t}")));
        }
        let rho_sq = self.rs.rho_sq_complex();
        let free = match f {
            Spectrum::Gaussian { amplitude, sigma } => Spectrum::Gaussian {
                amplitude: amplitude * Complex64::new(0.0, -t * rho_sq).exp(),
                sigma: sigma + Complex64::new(0.0, t),
            },
            Spectrum::General { f, support } => {
                let f = f.clone();
                Spectrum::General {
                    f: Arc::new(move |k| f(k) * Complex64::new(0.0, -t * (rho_sq + k * k)).exp()),
                    support: *support,
                }
            }
        };
        let Some(forcing) = forcing else {
            return Ok(free);
        };
        if t < 0.0 {
            return Err(Error::InvalidTime("forced evolution runs forward from t = 0".into()));
        }
        let forcing = forcing.clone();
        let support = free.support().max(forcing.support());
        Spectrum::general(support, move |k| {
            free.value(k) - Complex64::i() * forcing.duhamel(t, k, rho_sq + k * k)
        })
    }

    /// Reduced spatial profile `g(r)` with `u(exp H) = Φ₀(exp H) g(‖H‖)`.
    pub fn reduced(&self, f: &Spectrum, r: f64, spec: &QuadratureSpec) -> Result<Complex64> {
        match f {
            Spectrum::Gaussian { amplitude, sigma } => Ok(amplitude * gaussian_spatial(self.dim(), *sigma, r)),
            Spectrum::General { .. } => radial_inverse_fourier(self.dim(), |k| f.value(k), r, f.support(), spec)
                .strict(&AdaptiveOptions {
                    rel_tol: spec.rel_tol,
                    ..Default::default()
                }),
        }
    }

    /// `u(exp H)` at distance `r`.
    pub fn value(&self, f: &Spectrum, r: f64, spec: &QuadratureSpec) -> Result<Complex64> {
        Ok(self.reduced(f, r, spec)? * self.phi0(r))
    }

    /// `‖u‖_{L²(X)}`, computed on the spatial side. Since `Φ₀² · density`
    /// is the Euclidean `|S^{N−1}| r^{N−1}`, this is a Euclidean radial norm
    /// of the reduced profile.
    pub fn l2_norm(&self, f: &Spectrum, spec: &QuadratureSpec) -> Result<f64> {
        let n = self.dim();
        let area = sphere_area(n);
        match f {
            Spectrum::Gaussian { amplitude, sigma } => {
                // |g|² ∝ e^{-r²/std²}; the integrand is even in r, so the
                // trapezoid rule from 0 is spectrally accurate
                let std = 1.0 / (0.5 / sigma).re.sqrt();
                let grid = uniform_grid(10.0 * std, 2000);
                let vals: Vec<f64> = grid
                    .iter()
                    .map(|&r| (amplitude * gaussian_spatial(n, *sigma, r)).norm_sqr() * r.powi(n as i32 - 1))
                    .collect();
                Ok((area * trapezoid(&grid, &vals)).sqrt())
            }
            Spectrum::General { .. } => {
                let upper = spec.radius.unwrap_or(40.0);
                let mut failure = None;
                let cell = std::cell::RefCell::new(&mut failure);
                let res = integrate(
                    |r: f64| match self.reduced(f, r, spec) {
                        Ok(g) => g.norm_sqr() * r.powi(n as i32 - 1),
                        Err(e) => {
                            cell.borrow_mut().get_or_insert(e);
                            0.0
                        }
                    },
                    0.0,
                    upper,
                    &AdaptiveOptions {
                        rel_tol: spec.rel_tol.max(1e-10),
                        ..Default::default()
                    },
                );
                if let Some(e) = failure {
                    return Err(e);
                }
                let v = res.strict(&AdaptiveOptions::default())?;
                Ok((area * v).sqrt())
            }
        }
    }

    /// `u(t, r)` on a grid, one row per time.
    pub fn sample(&self, f: &Spectrum, t_grid: &[f64], r_grid: &[f64], spec: &QuadratureSpec) -> Result<SampledField> {
        let rows: Result<Vec<Vec<Complex64>>> = t_grid
            .par_iter()
            .map(|&t| {
                let u = self.evolve(f, t, None)?;
                r_grid.iter().map(|&r| self.value(&u, r, spec)).collect()
            })
            .collect();
        SampledField::new(
            t_grid.to_vec(),
            r_grid.to_vec(),
            rows?,
            r_grid.iter().map(|&r| self.density(r)).collect(),
        )
    }
}

/// `(4πσ)^{-N/2} e^{-r²/4σ}`, the inverse transform of `e^{-σk²}` on `ℝ^N`.
fn gaussian_spatial(n: usize, sigma: Complex64, r: f64) -> Complex64 {
    (-(n as f64 / 2.0) * (4.0 * PI * sigma).ln() - r * r / (4.0 * sigma)).exp()
}

/// `|S^{n−1}| = 2π^{n/2}/Γ(n/2)`.
pub fn sphere_area(n: usize) -> f64 {
    // Γ(n/2) by the half-integer recursion
    let mut g = if n % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut x = if n % 2 == 0 { 1.0 } else { 0.5 };
    while x < n as f64 / 2.0 - 1e-9 {
        g *= x;
        x += 1.0;
    }
    2.0 * PI.powf(n as f64 / 2.0) / g
}

fn uniform_grid(upper: f64, intervals: usize) -> Vec<f64> {
    (0..=intervals).map(|i| upper * i as f64 / intervals as f64).collect()
}

/// Evolves spectral data and samples the reduced spatial profile on
/// `r_grid`. `ClosedForm` needs Gaussian data and no forcing.
pub fn evolve_linear(
    model: &ModelSpace,
    f_hat: &RadialProfile,
    t: f64,
    forcing: Option<&Forcing>,
    r_grid: &[f64],
    method: Method,
    spec: &QuadratureSpec,
) -> Result<RadialProfile> {
    let f = Spectrum::from_profile(f_hat, spec)?;
    let u = model.evolve(&f, t, forcing)?;
    let u = match (method, u) {
        (Method::ClosedForm, g @ Spectrum::Gaussian { .. }) => g,
        (Method::ClosedForm, Spectrum::General { .. }) => {
            return Err(Error::InvalidProfile(
                "closed form evolution needs Gaussian data and no forcing".into(),
            ))
        }
        (Method::Quadrature, Spectrum::Gaussian { amplitude, sigma }) => {
            Spectrum::general((40.0 / sigma.re).sqrt(), move |k| amplitude * (-sigma * k * k).exp())?
        }
        (Method::Quadrature, g) => g,
    };
    let values = r_grid
        .par_iter()
        .map(|&r| model.reduced(&u, r, spec))
        .collect::<Result<Vec<_>>>()?;
    RadialProfile::sampled(Side::Spatial, r_grid.to_vec(), values)
}

/// `u(t, r)` on a time × radius grid with the radial volume density.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    t_grid: Vec<f64>,
    r_grid: Vec<f64>,
    values: Vec<Vec<Complex64>>,
    density: Vec<f64>,
}

impl SampledField {
    pub fn new(t_grid: Vec<f64>, r_grid: Vec<f64>, values: Vec<Vec<Complex64>>, density: Vec<f64>) -> Result<Self> {
        if t_grid.is_empty() {
            return Err(Error::EmptyGrid("time grid"));
        }
        if r_grid.is_empty() {
            return Err(Error::EmptyGrid("radial grid"));
        }
        for (name, g) in [("time", &t_grid), ("radial", &r_grid)] {
            if g.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::InvalidParameter(format!("{name} grid must be strictly increasing")));
            }
        }
        if values.len() != t_grid.len() || values.iter().any(|row| row.len() != r_grid.len()) {
            return Err(Error::InvalidParameter("field values do not match the grid shape".into()));
        }
        if density.len() != r_grid.len() {
            return Err(Error::InvalidParameter("density does not match the radial grid".into()));
        }
        Ok(SampledField {
            t_grid,
            r_grid,
            values,
            density,
        })
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn r_grid(&self) -> &[f64] {
        &self.r_grid
    }

    pub fn values(&self) -> &[Vec<Complex64>] {
        &self.values
    }

    /// `‖u(t)‖_{L^q}` for each sampled time.
    pub fn spatial_norms(&self, q: f64) -> Result<Vec<f64>> {
        check_exponent(q)?;
        Ok(self
            .values
            .iter()
            .map(|row| {
                let mods: Vec<f64> = row.iter().map(|z| z.norm()).collect();
                lebesgue(&self.r_grid, &mods, Some(&self.density), q)
            })
            .collect())
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!("Lebesgue exponent {p} must lie in [1, inf]")));
    }
    Ok(())
}

/// Discrete `L^p` norm by the trapezoid rule; `p = ∞` is the grid maximum.
fn lebesgue(grid: &[f64], mods: &[f64], weight: Option<&[f64]>, p: f64) -> f64 {
    if p.is_infinite() {
        return mods.iter().cloned().fold(0.0, f64::max);
    }
    let vals: Vec<f64> = match weight {
        Some(w) => mods.iter().zip(w).map(|(m, w)| m.powf(p) * w).collect(),
        None => mods.iter().map(|m| m.powf(p)).collect(),
    };
    trapezoid(grid, &vals).powf(1.0 / p)
}

/// The discrete mixed norm `‖u‖_{L^p_t L^q_x}`: the spatial `L^q` against the
/// radial volume density inside, the temporal `L^p` outside.
pub fn strichartz_norm(field: &SampledField, p: f64, q: f64) -> Result<f64> {
    check_exponent(p)?;
    let inner = field.spatial_norms(q)?;
    Ok(lebesgue(&field.t_grid, &inner, None, p))
}

/// One row of a Gaussian width sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub width: f64,
    pub strichartz_norm: f64,
    pub data_norm: f64,
    pub ratio: f64,
    /// `max_t |‖u(t)‖₂/‖f‖₂ − 1|` over the time grid.
    pub mass_error: f64,
}

/// Result of a boundedness probe over several widths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeSummary {
    pub p: f64,
    pub q: f64,
    pub rows: Vec<ProbeRow>,
    /// `max ratio / min ratio`.
    pub spread: f64,
    pub max_mass_error: f64,
    pub pass: bool,
}

/// Largest accepted ratio spread of the width sweep.
pub const PROBE_SPREAD_LIMIT: f64 = 2.0;
/// Largest accepted deviation from mass conservation.
pub const PROBE_MASS_TOL: f64 = 1e-5;

/// Times `{0} ∪ geometric(1e-3·w², 1e4·w²)` used for a width `w`.
pub fn probe_time_grid(width: f64, points: usize) -> Vec<f64> {
    let (a, b) = (1e-3 * width * width, 1e4 * width * width);
    let mut g = vec![0.0];
    let m = points.max(2);
    g.extend((0..m).map(|i| a * (b / a).powf(i as f64 / (m - 1) as f64)));
    g
}

/// Radial grid `[0, 40 + 12w]` with spacing at most `min(w/10, 0.05)`.
pub fn probe_radial_grid(width: f64) -> Vec<f64> {
    let upper = 40.0 + 12.0 * width;
    let h = (width / 10.0).min(0.05);
    uniform_grid(upper, (upper / h).ceil() as usize)
}

/// `‖u‖_{L^p(ℝ, L^q)}/‖f‖₂` for Gaussian data of the given widths with
/// `F = 0`, together with the mass drift along the way.
pub fn strichartz_probe(model: &ModelSpace, p: f64, q: f64, widths: &[f64], spec: &QuadratureSpec) -> Result<ProbeSummary> {
    if widths.is_empty() {
        return Err(Error::EmptyGrid("width list"));
    }
    check_exponent(p)?;
    check_exponent(q)?;
    let rows = widths
        .par_iter()
        .map(|&w| probe_row(model, p, q, w, spec))
        .collect::<Result<Vec<_>>>()?;
    let ratios = rows.iter().map(|r| r.ratio);
    let max = ratios.clone().fold(f64::NEG_INFINITY, f64::max);
    let min = ratios.fold(f64::INFINITY, f64::min);
    let spread = max / min;
    let max_mass_error = rows.iter().map(|r| r.mass_error).fold(0.0, f64::max);
    Ok(ProbeSummary {
        p,
        q,
        rows,
        spread,
        max_mass_error,
        pass: spread <= PROBE_SPREAD_LIMIT && max_mass_error <= PROBE_MASS_TOL,
    })
}

fn probe_row(model: &ModelSpace, p: f64, q: f64, width: f64, spec: &QuadratureSpec) -> Result<ProbeRow> {
    let f = Spectrum::gaussian_width(width)?;
    let t_grid = probe_time_grid(width, 400);
    let r_grid = probe_radial_grid(width);
    let field = model.sample(&f, &t_grid, &r_grid, spec)?;
    let data_norm = model.l2_norm(&f, spec)?;
    let mut mass_error: f64 = 0.0;
    for &t in &t_grid {
        let u = model.evolve(&f, t, None)?;
        mass_error = mass_error.max((model.l2_norm(&u, spec)? / data_norm - 1.0).abs());
    }
    // |u(−t)| = |u(t)|: the norm over ℝ is 2^{1/p} times the one over [0, T]
    let half_line = strichartz_norm(&field, p, q)?;
    let norm = if p.is_infinite() { half_line } else { 2f64.powf(1.0 / p) * half_line };
    Ok(ProbeRow {
        width,
        strichartz_norm: norm,
        data_norm,
        ratio: norm / data_norm,
        mass_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_examples() {
        assert!(is_admissible(0.0, 0.5, 3));
        assert!(is_admissible(0.5, 1.0 / 6.0, 3));
        assert!(!is_admissible(0.25, 0.5, 3));
        let a = admissibility(1e-6, 0.5, 3);
        assert!(!a.admissible);
        assert_eq!(a.reason, "inv_q = 1/2 only admitted at inv_p = 0 exactly");
        assert!(!is_admissible(0.1, 0.1, 3));
        assert!(AdmissiblePair::new(0.6, 0.1, 3).is_err());
        assert!(AdmissiblePair::from_exponents(f64::INFINITY, 2.0, 3).unwrap().check().admissible);
    }

    #[test]
    fn exclusion_examples() {
        let v = theorem2_pair_allowed(8.0 / 3.0, 4.0, 8.0 / 3.0, 4.0, 3).unwrap();
        assert!(v.allowed);
        // (p, q) = (4, 3) and (8/3, 4) are admissible for n = 3
        let v = theorem2_pair_allowed(4.0, 3.0, 8.0 / 3.0, 4.0, 3).unwrap();
        assert!(!v.allowed, "{}", v.reason);
        assert!(v.caveat.is_none());
        assert!(!exclusion_window_applies(8.0, 4.0, 3));
        assert!(exclusion_window_applies(3.0, 4.0, 3));
        assert!(exclusion_window_applies(6.0, 4.0, 3));
        assert!(!exclusion_window_applies(6.5, 4.0, 3));
        // q = 8 is not admissible for n = 3, whatever p is
        assert!(matches!(
            theorem2_pair_allowed(2.0, 8.0, 8.0 / 3.0, 4.0, 3),
            Err(Error::NotAdmissible { .. })
        ));
        let v = theorem2_pair_allowed(4.0, 4.0, 8.0, 8.0 / 3.0, 2).unwrap();
        assert!(!v.allowed);
        assert!(v.caveat.is_some());
    }

    #[test]
    fn gamma_windows() {
        assert_eq!(nls_gamma_window(2).unwrap().to_string(), "(1, 3)");
        assert_eq!(nls_gamma_window(4).unwrap().to_string(), "(1, 2)");
        assert_eq!(nls_gamma_window(3).unwrap().to_string(), "(1, 7/3)");
        assert!(nls_gamma_window(0).is_err());
        let w = nls_gamma_window(1000).unwrap();
        assert!(w.contains(1.003) && !w.contains(1.005));
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((sphere_area(5) - 8.0 * PI * PI / 3.0).abs() < 1e-13);
    }

    #[test]
    fn model_is_hyperbolic_space() {
        let m = ModelSpace::a1();
        assert!((m.kappa() - 1.0).abs() < 1e-15);
        for r in [0.1, 1.0, 5.0] {
            let euclid = m.phi0(r).powi(2) * m.density(r);
            assert!((euclid - 4.0 * PI * r * r).abs() < 1e-12 * euclid);
        }
        assert!(ModelSpace::new(RootSpace::build(Family::A, 2).unwrap()).is_err());
    }

    #[test]
    fn zero_field_has_zero_norm() {
        let f = SampledField::new(vec![0.0, 1.0], vec![0.0, 1.0, 2.0], vec![vec![Complex64::new(0.0, 0.0); 3]; 2], vec![1.0; 3])
            .unwrap();
        assert_eq!(strichartz_norm(&f, 4.0, 3.0).unwrap(), 0.0);
        assert!(SampledField::new(vec![], vec![0.0], vec![], vec![1.0]).is_err());
        assert!(SampledField::new(vec![0.0], vec![], vec![vec![]], vec![]).is_err());
    }

    #[test]
    fn separable_mixed_norm() {
        let t: Vec<f64> = (0..=400).map(|i| i as f64 / 100.0).collect();
        let r: Vec<f64> = (0..=400).map(|i| i as f64 / 50.0).collect();
        let a = |t: f64| (-t).exp();
        let b = |r: f64| (-r * r).exp();
        let values = t.iter().map(|&ti| r.iter().map(|&ri| Complex64::new(a(ti) * b(ri), 0.0)).collect()).collect();
        let f = SampledField::new(t.clone(), r.clone(), values, vec![1.0; r.len()]).unwrap();
        let na = (0.5 * (1.0 - (-8f64).exp())).sqrt();
        let nb = (0.25 * (2.0 * PI).sqrt()).sqrt();
        let got = strichartz_norm(&f, 2.0, 2.0).unwrap();
        assert!((got - na * nb).abs() < 1e-4 * na * nb, "{got} vs {}", na * nb);
        let sup = strichartz_norm(&f, f64::INFINITY, f64::INFINITY).unwrap();
        assert_eq!(sup, 1.0);
    }

    #[test]
    fn identity_evolution() {
        let m = ModelSpace::a1();
        let spec = QuadratureSpec::default();
        let f = Spectrum::gaussian_width(1.0).unwrap();
        let u = m.evolve(&f, 0.0, None).unwrap();
        for r in [0.0, 0.5, 2.0] {
            assert_eq!(m.reduced(&u, r, &spec).unwrap(), m.reduced(&f, r, &spec).unwrap());
        }
        // and the closed form is the inverse transform of the data
        let g = RadialProfile::gaussian(Side::Spectral, crate::kernels::ComplexTime::new(0.5, 0.0).unwrap(), 0.0);
        let grid = vec![0.0, 0.7, 1.9];
        let a = evolve_linear(&m, &g, 0.0, None, &grid, Method::ClosedForm, &spec).unwrap();
        let b = evolve_linear(&m, &g, 0.0, None, &grid, Method::Quadrature, &spec).unwrap();
        for &r in &grid {
            assert!((a.value(r, 3) - b.value(r, 3)).norm() < 1e-8 * a.value(0.0, 3).norm());
        }
    }
}
