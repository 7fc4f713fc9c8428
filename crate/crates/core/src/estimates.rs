//! Numerical probes of the dispersive estimate chain on `X₀`: sup-norm decay
//! of the kernel, the Kunze–Stein functional, the `t`-free majorant, and the
//! Riesz–Thorin exponent bookkeeping.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{ln_modulus_normal, ComplexTime};
use crate::quadrature::{chamber_integral, AdaptiveOptions};
use crate::root_system::{ChamberPoint, Multiplicity, RootSpace};
use crate::spherical::{ln_phi0_normal_upper, EstimateConstants, QuadratureSpec};
use crate::strichartz::{ModelSpace, Spectrum};

/// Tail below this fraction of the value counts as converged.
pub const TAIL_CONVERGED: f64 = 1e-8;
/// Tail above this fraction of the value counts as divergent.
pub const TAIL_DIVERGED: f64 = 0.1;
/// Largest default truncation radius of chamber integrals.
pub const R_MAX: f64 = 2000.0;

/// Slope tolerance for quantities with an exact closed form.
pub const CLOSED_FORM_SLOPE_TOL: f64 = 1e-3;
/// Relative slope tolerance for quadrature-backed quantities.
pub const QUADRATURE_SLOPE_TOL: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailStatus {
    Converged,
    Diverged,
    Inconclusive,
}

impl TailStatus {
    /// Classifies a truncated integral by its shell-to-value ratio.
    pub fn classify(value: f64, tail: f64) -> Self {
        let ratio = tail / value;
        if !ratio.is_finite() || ratio > TAIL_DIVERGED {
            TailStatus::Diverged
        } else if ratio <= TAIL_CONVERGED {
            TailStatus::Converged
        } else {
            TailStatus::Inconclusive
        }
    }
}

impl fmt::Display for TailStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TailStatus::Converged => "converged",
            TailStatus::Diverged => "diverged",
            TailStatus::Inconclusive => "inconclusive",
        })
    }
}

/// What a fitted slope is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// `|fitted − formula| ≤ tol`, with the slope implied by the closed form.
    MatchesFormula,
    /// `|fitted − claimed| ≤ tol`.
    MatchesClaimed,
    /// `fitted ≤ claimed + tol`: decay at least as fast as claimed.
    DecaysAtLeastClaimed,
}

/// A fitted decay exponent and its verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub quantity: String,
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub fitted_slope: f64,
    /// Slope claimed with `n = n₀ = dim X₀`.
    pub claimed_slope: f64,
    /// Slope implied by the closed form, with `N = dim X`.
    pub formula_slope: f64,
    pub check: Check,
    pub tolerance: f64,
    pub truncation_radius: Option<f64>,
    pub tail_status: TailStatus,
    pub pass: bool,
}

impl EstimateReport {
    /// Fits the slope and sets the verdict. A report only passes when every
    /// underlying integral converged.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        quantity: impl Into<String>,
        t_grid: Vec<f64>,
        values: Vec<f64>,
        claimed_slope: f64,
        formula_slope: f64,
        check: Check,
        tolerance: f64,
        truncation_radius: Option<f64>,
        tail_status: TailStatus,
    ) -> Result<Self> {
        let fitted_slope = fit_loglog_slope(&t_grid, &values)?;
        let slope_ok = match check {
            Check::MatchesFormula => (fitted_slope - formula_slope).abs() <= tolerance,
            Check::MatchesClaimed => (fitted_slope - claimed_slope).abs() <= tolerance,
            Check::DecaysAtLeastClaimed => fitted_slope <= claimed_slope + tolerance,
        };
        Ok(EstimateReport {
            quantity: quantity.into(),
            t_grid,
            values,
            fitted_slope,
            claimed_slope,
            formula_slope,
            check,
            tolerance,
            truncation_radius,
            tail_status,
            pass: slope_ok && tail_status == TailStatus::Converged,
        })
    }
}

/// Least-squares slope of `ln v` against `ln t`.
pub fn fit_loglog_slope(t: &[f64], v: &[f64]) -> Result<f64> {
    if t.is_empty() {
        return Err(Error::EmptyGrid("t grid"));
    }
    if t.len() != v.len() {
        return Err(Error::InvalidParameter(format!(
            "{} times but {} values",
            t.len(),
            v.len()
        )));
    }
    if t.len() < 2 {
        return Err(Error::InvalidParameter("a slope needs at least two points".into()));
    }
    if t.windows(2).any(|w| !(w[1] > w[0])) || t[0] <= 0.0 {
        return Err(Error::InvalidParameter("t grid must be positive and strictly increasing".into()));
    }
    if v.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidParameter("slope fit needs positive finite values".into()));
    }
    let n = t.len() as f64;
    let xs: Vec<f64> = t.iter().map(|x| x.ln()).collect();
    let ys: Vec<f64> = v.iter().map(|x| x.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

/// `t₀·2^k`, `k = 0, …`, up to and including `t₁`.
pub fn dyadic_grid(t0: f64, t1: f64) -> Result<Vec<f64>> {
    if !(t0 > 0.0 && t1 >= t0 && t1.is_finite()) {
        return Err(Error::InvalidParameter(format!("invalid dyadic range {t0}:{t1}")));
    }
    let mut out = vec![t0];
    while *out.last().unwrap() * 2.0 <= t1 * (1.0 + 1e-12) {
        let next = out.last().unwrap() * 2.0;
        out.push(next);
    }
    Ok(out)
}

/// Maximum of `|s⁰_t|` over a chamber grid, with its location.
#[derive(Clone, Debug, PartialEq)]
pub struct SupNorm {
    pub value: f64,
    pub argmax: ChamberPoint,
}

/// Radial steps and simplex subdivisions of the sup-norm search grid.
const SUP_RADII: usize = 40;
const SUP_RADIUS_MAX: f64 = 6.0;
const SUP_SIMPLEX_STEPS: usize = 4;

/// Maximises `|s⁰_t(exp H)|` over a grid of the chamber ball of radius 6.
pub fn sup_norm_dispersive(rs: &RootSpace, tau: ComplexTime) -> Result<SupNorm> {
    if tau.eps() != 0.0 {
        return Err(Error::InvalidTime(format!(
            "sup-norm probe needs a purely oscillatory time, got eps = {}",
            tau.eps()
        )));
    }
    let dirs = simplex_directions(rs, SUP_SIMPLEX_STEPS);
    let mut best = (f64::NEG_INFINITY, ChamberPoint::origin(rs.rank()));
    for i in 0..=SUP_RADII {
        let r = SUP_RADIUS_MAX * i as f64 / SUP_RADII as f64;
        // at r = 0 every direction gives the origin
        let dirs = if i == 0 { &dirs[..1] } else { &dirs[..] };
        for d in dirs {
            let h = d.scaled(r);
            let ln = ln_modulus_normal(rs, tau, &h)?;
            if ln > best.0 {
                best = (ln, h);
            }
        }
    }
    Ok(SupNorm {
        value: best.0.exp(),
        argmax: best.1,
    })
}

/// Unit (for `‖·‖₀`) directions `Σ uᵢϖᵢ`, `u` on a simplex lattice.
fn simplex_directions(rs: &RootSpace, steps: usize) -> Vec<ChamberPoint> {
    let rank = rs.rank();
    let mut out = Vec::new();
    let mut c = vec![0usize; rank];
    fn rec(level: usize, left: usize, c: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if level + 1 == c.len() {
            c[level] = left;
            out.push(c.clone());
            return;
        }
        for k in 0..=left {
            c[level] = k;
            rec(level + 1, left - k, c, out);
        }
    }
    let mut lattice = Vec::new();
    rec(0, steps, &mut c, &mut lattice);
    for u in lattice {
        let w: Vec<f64> = u.iter().map(|&k| k as f64 / steps as f64).collect();
        let h = rs.from_coweight_coords(&w);
        out.push(h.scaled(1.0 / rs.norm0(&h)));
    }
    out
}

/// A chamber integral truncated at `‖H‖₀ ≤ R`, with the mass of the shell
/// `R ≤ ‖H‖₀ ≤ R_far` as tail estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncatedIntegral {
    pub value: f64,
    pub tail: f64,
    pub radius: f64,
    pub far_radius: f64,
    pub status: TailStatus,
}

/// Exponential rate `(q/2 − 1)·min ρ₀(Ĥ)` shared by the functional and the
/// majorant.
fn decay_rate(rs: &RootSpace, q: f64) -> f64 {
    (q / 2.0 - 1.0) * rs.min_rho0_rate()
}

/// Smallest radius with `(1+R)^d e^{-rate·R} ≤ 1e-12`, capped at [`R_MAX`];
/// `d` is the polynomial degree of the integrand including the radial
/// Jacobian. With `d = 0` this is the radius where the exponential factor
/// alone reaches `1e-12`.
pub fn radius_for(rate: f64, degree: f64) -> f64 {
    let target = 12.0 * std::f64::consts::LN_10;
    if !(rate > 0.0) {
        return R_MAX;
    }
    // fixed point of R = (target + d·ln(1+R)) / rate, increasing from below
    let mut r = target / rate;
    for _ in 0..200 {
        let next = (target + degree * r.ln_1p()) / rate;
        if (next - r).abs() <= 1e-9 * next {
            r = next;
            break;
        }
        r = next;
    }
    r.min(R_MAX)
}

/// Default truncation radius of the Kunze–Stein functional.
pub fn default_radius(rs: &RootSpace, q: f64, k: EstimateConstants) -> f64 {
    // |s⁰|^{q/2} contributes α^{q/2} per root, φ₀'s bound (1+‖H‖₀)^a
    let degree = k.a + 0.5 * q * rs.num_positive_roots() as f64 + (rs.rank() - 1) as f64;
    radius_for(decay_rate(rs, q), degree)
}

/// Default truncation radius of the majorant: its integrand has degree
/// `a(1 + q/2)` plus the radial Jacobian.
pub fn majorant_radius(rs: &RootSpace, q: f64, k: EstimateConstants) -> f64 {
    let degree = k.a * (1.0 + 0.5 * q) + (rs.rank() - 1) as f64;
    radius_for(decay_rate(rs, q), degree)
}

fn truncated<F>(rs: &RootSpace, q: f64, radius: f64, rel_tol: f64, f: F) -> Result<TruncatedIntegral>
where
    F: Fn(&ChamberPoint) -> f64,
{
    let rate = decay_rate(rs, q);
    let far = if rate > 0.0 { radius + 40.0 / rate } else { 2.0 * radius };
    let opts = AdaptiveOptions {
        rel_tol,
        ..AdaptiveOptions::default()
    };
    let value = chamber_integral(rs, &f, 0.0, radius, &opts)?.strict(&opts)?;
    // the shell only needs to be accurate relative to the value it is compared with
    let shell_opts = AdaptiveOptions {
        abs_tol: rel_tol * TAIL_CONVERGED * value.abs(),
        ..opts
    };
    let tail = chamber_integral(rs, &f, radius, far, &shell_opts)?.strict(&shell_opts)?;
    Ok(TruncatedIntegral {
        value,
        tail,
        radius,
        far_radius: far,
        status: TailStatus::classify(value, tail),
    })
}

/// `∫_{𝔞₊} |s⁰_t(exp H)|^{q/2} φ₀(exp H) δ₀(H) dH` with `φ₀` replaced by its
/// upper bound `c(1+‖H‖₀)^a e^{-ρ₀(H)}`; a certified upper bound for the
/// Kunze–Stein functional.
pub fn kunze_stein_functional(
    rs: &RootSpace,
    q: f64,
    t: f64,
    spec: &QuadratureSpec,
    k: EstimateConstants,
) -> Result<TruncatedIntegral> {
    check_q(q)?;
    spec.validate()?;
    let tau = ComplexTime::schrodinger(t)?;
    let radius = spec.radius.unwrap_or_else(|| default_radius(rs, q, k));
    let mut failure = None;
    let cell = std::cell::RefCell::new(&mut failure);
    let f = |h: &ChamberPoint| -> f64 {
        let ln = ln_modulus_normal(rs, tau, h).and_then(|m| Ok((m, rs.ln_delta_normal(h)?)));
        match ln {
            Ok((m, d)) => (0.5 * q * m + ln_phi0_normal_upper(rs, h, k) + d).exp(),
            Err(e) => {
                cell.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let res = truncated(rs, q, radius, spec.rel_tol, f);
    if let Some(e) = failure {
        return Err(e);
    }
    res
}

/// `∫_{𝔞₊, ‖H‖₀≤R} (1+‖H‖₀)^{a(1+q/2)} e^{-ρ₀(H)(q/2−1)} dH`.
///
/// Divergence is reported through the tail status, not as an error.
pub fn majorant_integral(rs: &RootSpace, q: f64, k: EstimateConstants, radius: f64) -> Result<TruncatedIntegral> {
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::InvalidParameter(format!("q must be finite and positive, got {q}")));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let rho0 = rs.rho(Multiplicity::Normal);
    let power = k.a * (1.0 + q / 2.0);
    let decay = q / 2.0 - 1.0;
    truncated(rs, q, radius, 1e-10, |h| {
        (power * rs.norm0(h).ln_1p() - decay * rho0.apply(h)).exp()
    })
}

fn check_q(q: f64) -> Result<()> {
    if q.is_nan() || q <= 2.0 {
        return Err(Error::Divergent { q });
    }
    Ok(())
}

/// A Lebesgue exponent in `[1, ∞]`, kept exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exponent {
    Finite(Ratio<i64>),
    Infinite,
}

impl Exponent {
    pub fn finite(numer: i64, denom: i64) -> Self {
        Exponent::Finite(Ratio::new(numer, denom))
    }

    /// `1/p`.
    pub fn reciprocal(self) -> Ratio<i64> {
        match self {
            Exponent::Finite(p) => p.recip(),
            Exponent::Infinite => Ratio::from_integer(0),
        }
    }

    fn from_reciprocal(r: Ratio<i64>) -> Self {
        if r == Ratio::from_integer(0) {
            Exponent::Infinite
        } else {
            Exponent::Finite(r.recip())
        }
    }

    /// Hölder conjugate `p′`.
    pub fn conjugate(self) -> Self {
        Self::from_reciprocal(Ratio::from_integer(1) - self.reciprocal())
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => *p.numer() as f64 / *p.denom() as f64,
            Exponent::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

/// Interpolation between `L¹→L^∞` and `L²→L²` at `θ = 1 − 2/q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interpolation {
    pub theta: Ratio<i64>,
    pub p_theta: Exponent,
    pub q_theta: Exponent,
    /// `nθ/2 = n(1/2 − 1/q)`.
    pub exponent: Ratio<i64>,
}

pub fn interpolation_exponent(n: usize, q: Exponent) -> Result<Interpolation> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension n must be positive".into()));
    }
    let two = Ratio::from_integer(2);
    let one = Ratio::from_integer(1);
    if let Exponent::Finite(qf) = q {
        if qf <= two {
            return Err(Error::Divergent {
                q: Exponent::Finite(qf).to_f64(),
            });
        }
    }
    let theta = one - two * q.reciprocal();
    // 1/p_θ = (1+θ)/2, 1/q_θ = (1−θ)/2
    let p_theta = Exponent::from_reciprocal((one + theta) / two);
    let q_theta = Exponent::from_reciprocal((one - theta) / two);
    Ok(Interpolation {
        theta,
        p_theta,
        q_theta,
        exponent: Ratio::from_integer(n as i64) * theta / two,
    })
}

/// `‖u(t)‖₂ / ‖f‖₂` for each profile, evolved on the rank-one model and
/// measured on the spatial side.
pub fn l2_conservation_check(model: &ModelSpace, t: f64, profiles: &[Spectrum], spec: &QuadratureSpec) -> Result<Vec<f64>> {
    profiles
        .iter()
        .map(|f| {
            let u = model.evolve(f, t, None)?;
            Ok(model.l2_norm(&u, spec)? / model.l2_norm(f, spec)?)
        })
        .collect()
}
