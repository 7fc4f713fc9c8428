//! Heat and Schrödinger kernels on the complex double `X`, their pullback to
//! the normal real form `X₀`, and the pointwise decay bounds.
//!
//! Everything is evaluated at a complex time `τ = ε + it`; `τ = ε` is the heat
//! kernel and `τ = it` the Schrödinger kernel. The fractional power
//! `(4πτ)^{-N/2}` uses the principal branch, which is continuous on the closed
//! right half plane minus the origin.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::root_system::{ChamberPoint, Multiplicity, RootSpace};
use crate::spherical::{ln_phi0_complex, phi0_complex, EstimateConstants};

/// `τ = eps + i·t` with `eps ≥ 0` and `τ ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTime")]
pub struct ComplexTime {
    eps: f64,
    t: f64,
}

#[derive(Deserialize)]
struct RawTime {
    eps: f64,
    t: f64,
}

impl TryFrom<RawTime> for ComplexTime {
    type Error = Error;

    fn try_from(raw: RawTime) -> Result<Self> {
        ComplexTime::new(raw.eps, raw.t)
    }
}

impl ComplexTime {
    pub fn new(eps: f64, t: f64) -> Result<Self> {
        if !(eps.is_finite() && t.is_finite()) {
            return Err(Error::InvalidTime(format!("non-finite time ({eps}, {t})")));
        }
        if eps < 0.0 {
            return Err(Error::InvalidTime(format!("eps must be >= 0, got {eps}")));
        }
        if eps == 0.0 && t == 0.0 {
            return Err(Error::InvalidTime("tau = 0 is not allowed".into()));
        }
        Ok(ComplexTime { eps, t })
    }

    /// Purely diffusive time `τ = t > 0`.
    pub fn heat(t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::InvalidTime(format!("heat time must be > 0, got {t}")));
        }
        Self::new(t, 0.0)
    }

    /// Purely oscillatory time `τ = it`, `t ≠ 0`.
    pub fn schrodinger(t: f64) -> Result<Self> {
        Self::new(0.0, t)
    }

    pub fn eps(self) -> f64 {
        self.eps
    }

    pub fn t(self) -> f64 {
        self.t
    }

    pub fn value(self) -> Complex64 {
        Complex64::new(self.eps, self.t)
    }

    pub fn modulus(self) -> f64 {
        self.value().norm()
    }

    pub fn half(self) -> ComplexTime {
        ComplexTime {
            eps: 0.5 * self.eps,
            t: 0.5 * self.t,
        }
    }
}

/// `ln` of `(4πτ)^{-N/2} e^{-τ|ρ|²} e^{-‖H‖²/4τ}`, principal branch.
fn ln_gaussian_factor(rs: &RootSpace, tau: ComplexTime, h: &ChamberPoint) -> Complex64 {
    let z = tau.value();
    let r = rs.norm_complex(h);
    -(rs.big_n() as f64 / 2.0) * (4.0 * PI * z).ln() - z * rs.rho_sq_complex() - r * r / (4.0 * z)
}

/// `h_t(exp H) = Φ₀(exp H)(4πt)^{-N/2} e^{-t|ρ|²} e^{-‖H‖²/4t}`.
pub fn heat_kernel_complex(rs: &RootSpace, t: f64, h: &ChamberPoint) -> Result<f64> {
    let tau = ComplexTime::heat(t)?;
    Ok(schrodinger_kernel_complex(rs, tau, h)?.re)
}

/// The kernel of `e^{τΔ}` on `X` at complex time `τ`.
pub fn schrodinger_kernel_complex(rs: &RootSpace, tau: ComplexTime, h: &ChamberPoint) -> Result<Complex64> {
    let phi = phi0_complex(rs, h)?;
    let k = ln_gaussian_factor(rs, tau, h).exp() * phi;
    // real time has no imaginary part by symmetry; drop the round-off
    Ok(if tau.t() == 0.0 { Complex64::new(k.re, 0.0) } else { k })
}

/// `ln |s_τ(exp H)|`, finite far out where the kernel itself underflows.
pub fn ln_modulus_complex(rs: &RootSpace, tau: ComplexTime, h: &ChamberPoint) -> Result<f64> {
    Ok(ln_phi0_complex(rs, h)? + ln_gaussian_factor(rs, tau, h).re)
}

/// Kernel on the normal real form `X₀`: `s⁰_τ(exp H) = s_{τ/2}(exp(H/2))`.
pub fn schrodinger_kernel_normal(rs: &RootSpace, tau: ComplexTime, h: &ChamberPoint) -> Result<Complex64> {
    schrodinger_kernel_complex(rs, tau.half(), &h.scaled(0.5))
}

/// `ln |s⁰_τ(exp H)|`.
pub fn ln_modulus_normal(rs: &RootSpace, tau: ComplexTime, h: &ChamberPoint) -> Result<f64> {
    ln_modulus_complex(rs, tau.half(), &h.scaled(0.5))
}

/// Which power of `|t|` a bound on `X₀` carries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DecayExponent {
    /// `N/2`, the rate of the closed form.
    #[default]
    Formula,
    /// `n₀/2`, with `n₀ = dim X₀`.
    Claimed,
    Custom(f64),
}

impl DecayExponent {
    pub fn value(self, rs: &RootSpace) -> f64 {
        match self {
            DecayExponent::Formula => rs.big_n() as f64 / 2.0,
            DecayExponent::Claimed => rs.n0() as f64 / 2.0,
            DecayExponent::Custom(e) => e,
        }
    }
}

/// `c|t|^{-N/2}(1 + ‖H‖)^a e^{-ρ(H)}`.
pub fn kernel_bound_complex(rs: &RootSpace, t: f64, h: &ChamberPoint, k: EstimateConstants) -> f64 {
    let rho = rs.rho(Multiplicity::Complex);
    let ln = k.c.ln() - (rs.big_n() as f64 / 2.0) * t.abs().ln() + k.a * rs.norm_complex(h).ln_1p()
        - rho.apply(h);
    ln.exp()
}

/// `c|t|^{-N/2}(1 + ‖H‖₀)^a e^{-ρ₀(H)}`.
pub fn kernel_bound_normal(rs: &RootSpace, t: f64, h: &ChamberPoint, k: EstimateConstants) -> f64 {
    kernel_bound_normal_with(rs, t, h, k, DecayExponent::Formula)
}

/// `c|t|^{-e}(1 + ‖H‖₀)^a e^{-ρ₀(H)}` with a chosen exponent `e`.
pub fn kernel_bound_normal_with(
    rs: &RootSpace,
    t: f64,
    h: &ChamberPoint,
    k: EstimateConstants,
    exponent: DecayExponent,
) -> f64 {
    let rho0 = rs.rho(Multiplicity::Normal);
    let ln = k.c.ln() - exponent.value(rs) * t.abs().ln() + k.a * rs.norm0(h).ln_1p() - rho0.apply(h);
    ln.exp()
}
