//! Adaptive Gauss–Kronrod quadrature and integration over the positive
//! chamber.

use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::root_system::{ChamberPoint, RootSpace};

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptiveOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Number of equal panels the interval is split into before adapting.
    pub initial_panels: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions {
            rel_tol: 1e-8,
            abs_tol: 1e-300,
            max_subdivisions: 20_000,
            initial_panels: 8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub abs_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl<T: QuadValue> Integral<T> {
    /// Turns a non-converged result into an error.
    pub fn strict(self, opts: &AdaptiveOptions) -> Result<T> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::QuadratureNotConverged {
                residual: self.abs_error,
                tolerance: opts.abs_tol.max(opts.rel_tol * self.value.magnitude()),
            })
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 15-point Kronrod estimate, its difference from the embedded 7-point Gauss
/// rule, and the Kronrod estimate of `∫|f|` (the round-off scale).
fn gk15<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> (T, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.magnitude() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (fl, fr) = (f(c - dx), f(c + dx));
        abs += (fl.magnitude() + fr.magnitude()) * WGK[j];
        let pair = fl + fr;
        kron = kron + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let kron = kron * h;
    let gauss = gauss * h;
    (kron, (kron - gauss).magnitude(), abs * h.abs())
}

/// Errors below this multiple of `ε·∫|f|` are round-off and cannot be reduced.
const ROUNDOFF_FACTOR: f64 = 50.0 * f64::EPSILON;

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    abs: f64,
}

struct ByError(f64, usize);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByError {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of `f` over `[a, b]`.
///
/// Never fails; check [`Integral::converged`] or use [`Integral::strict`].
pub fn integrate<T, F>(f: F, a: f64, b: f64, opts: &AdaptiveOptions) -> Integral<T>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    if a == b {
        return Integral {
            value: T::zero(),
            abs_error: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    let n0 = opts.initial_panels.max(1);
    let mut panels: Vec<Panel<T>> = Vec::with_capacity(n0 + 64);
    let mut heap = BinaryHeap::new();
    let step = (b - a) / n0 as f64;
    for i in 0..n0 {
        let pa = a + step * i as f64;
        let pb = if i + 1 == n0 { b } else { pa + step };
        let (value, error, abs) = gk15(&f, pa, pb);
        heap.push(ByError(error, panels.len()));
        panels.push(Panel {
            a: pa,
            b: pb,
            value,
            error,
            abs,
        });
    }
    let mut evaluations = 15 * n0;
    let mut subdivisions = 0;
    let mut total = panels.iter().fold(T::zero(), |acc, p| acc + p.value);
    let mut err: f64 = panels.iter().map(|p| p.error).sum();
    let mut abs: f64 = panels.iter().map(|p| p.abs).sum();
    let target = |total: &T, abs: f64| {
        opts.abs_tol
            .max(opts.rel_tol * total.magnitude())
            .max(ROUNDOFF_FACTOR * abs)
    };
    loop {
        if err <= target(&total, abs) {
            // resum to shed drift from the running updates
            total = panels.iter().fold(T::zero(), |acc, p| acc + p.value);
            err = panels.iter().map(|p| p.error).sum();
            abs = panels.iter().map(|p| p.abs).sum();
            if err <= target(&total, abs) {
                return Integral {
                    value: total,
                    abs_error: err,
                    evaluations,
                    converged: true,
                };
            }
        }
        if subdivisions >= opts.max_subdivisions || !total.magnitude().is_finite() {
            return Integral {
                value: total,
                abs_error: err,
                evaluations,
                converged: false,
            };
        }
        let Some(ByError(_, idx)) = heap.pop() else {
            unreachable!("panel heap is never empty")
        };
        let (pa, pb) = (panels[idx].a, panels[idx].b);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // interval exhausted at machine precision
            return Integral {
                value: total,
                abs_error: err,
                evaluations,
                converged: false,
            };
        }
        let (lv, le, la) = gk15(&f, pa, mid);
        let (rv, re, ra) = gk15(&f, mid, pb);
        evaluations += 30;
        subdivisions += 1;
        total = total - panels[idx].value + lv + rv;
        err = (err - panels[idx].error + le + re).max(0.0);
        abs = (abs - panels[idx].abs + la + ra).max(0.0);
        panels[idx] = Panel {
            a: pa,
            b: mid,
            value: lv,
            error: le,
            abs: la,
        };
        heap.push(ByError(le, idx));
        heap.push(ByError(re, panels.len()));
        panels.push(Panel {
            a: mid,
            b: pb,
            value: rv,
            error: re,
            abs: ra,
        });
    }
}

/// Trapezoid rule on an arbitrary increasing grid.
pub fn trapezoid<T: QuadValue>(grid: &[f64], values: &[T]) -> T {
    grid.windows(2)
        .zip(values.windows(2))
        .fold(T::zero(), |acc, (x, y)| acc + (y[0] + y[1]) * (0.5 * (x[1] - x[0])))
}

/// Integrates `f` over the part of the closed positive chamber with
/// `r_inner ≤ ‖H‖₀ ≤ r_outer`.
///
/// The chamber is parametrised as `H = s·Σ uᵢϖᵢ` with `u` on the standard
/// simplex and `ϖᵢ` the fundamental coweights; the radial variable `s` is
/// integrated innermost. Cost grows like the 15·(panels) power of the rank,
/// so this is meant for ranks up to 3 or 4.
pub fn chamber_integral<F>(
    rs: &RootSpace,
    f: F,
    r_inner: f64,
    r_outer: f64,
    opts: &AdaptiveOptions,
) -> Result<Integral<f64>>
where
    F: Fn(&ChamberPoint) -> f64,
{
    if !(r_inner >= 0.0 && r_outer >= r_inner) {
        return Err(Error::InvalidParameter(format!(
            "chamber shell [{r_inner}, {r_outer}] is not a valid radius range"
        )));
    }
    let rank = rs.rank();
    let inner_opts = AdaptiveOptions {
        rel_tol: opts.rel_tol * 0.1,
        ..*opts
    };
    let mut u = vec![0.0; rank];
    let mut unconverged = false;
    let value = simplex_level(rs, &f, r_inner, r_outer, &mut u, 0, 1.0, opts, &inner_opts, &mut unconverged);
    let jac = rs.coweight_jacobian();
    Ok(Integral {
        value: value.value * jac,
        abs_error: value.abs_error * jac,
        evaluations: value.evaluations,
        converged: value.converged && !unconverged,
    })
}

#[allow(clippy::too_many_arguments)]
fn simplex_level<F>(
    rs: &RootSpace,
    f: &F,
    r_inner: f64,
    r_outer: f64,
    u: &mut Vec<f64>,
    level: usize,
    remaining: f64,
    outer: &AdaptiveOptions,
    inner: &AdaptiveOptions,
    unconverged: &mut bool,
) -> Integral<f64>
where
    F: Fn(&ChamberPoint) -> f64,
{
    let rank = rs.rank();
    if level + 1 == rank {
        u[level] = remaining;
        let dir = rs.from_coweight_coords(u);
        let dn = rs.norm0(&dir);
        let (s0, s1) = (r_inner / dn, r_outer / dn);
        let power = (rank - 1) as i32;
        let opts = if level == 0 { outer } else { inner };
        return integrate(|s: f64| s.powi(power) * f(&dir.scaled(s)), s0, s1, opts);
    }
    let opts = if level == 0 { outer } else { inner };
    let cell = std::cell::RefCell::new((u.clone(), false));
    let res = integrate(
        |x: f64| {
            let mut guard = cell.borrow_mut();
            let (ref mut uu, ref mut flag) = *guard;
            uu[level] = x;
            let r = simplex_level(rs, f, r_inner, r_outer, uu, level + 1, remaining - x, outer, inner, flag);
            if !r.converged {
                *flag = true;
            }
            r.value
        },
        0.0,
        remaining,
        opts,
    );
    if cell.borrow().1 {
        *unconverged = true;
    }
    res
}
