//! Root data of the normal real form families and the Cartan geometry of the
//! radial chart.
//!
//! A [`RootSpace`] carries one root system together with the two multiplicity
//! conventions that matter here: every root has multiplicity 1 on the normal
//! real form `X₀ = G₀/K₀` and multiplicity 2 on its complex double
//! `X = G/K`. Points of the closed positive chamber are [`ChamberPoint`]s in
//! coordinates of a fixed chart of `𝔞₀ ≅ ℝ^ℓ`. The chart is orthonormal for
//! the real form inner product, so `‖H‖₀` is the Euclidean norm of the
//! coordinates (times an optional metric scale) and the complex side norm is
//! `‖H‖ = √2 ‖H‖₀`.
//!
//! Group elements are never materialised: everything downstream works with
//! `K`-bi-invariant functions restricted to `exp 𝔞₊`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack used when deciding closed chamber membership.
pub const CHAMBER_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::A, Family::B, Family::C, Family::D];

    /// Smallest rank accepted by [`RootSpace::build`].
    pub fn min_rank(self) -> usize {
        match self {
            Family::D => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            other => Err(Error::UnknownSpace(other.to_string())),
        }
    }
}

/// Which of the two symmetric spaces sharing a root system is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    /// The normal real form `X₀`, root multiplicity 1.
    Normal,
    /// The complex double `X`, root multiplicity 2.
    Complex,
}

impl Form {
    pub fn multiplicity(self) -> Multiplicity {
        match self {
            Form::Normal => Multiplicity::Normal,
            Form::Complex => Multiplicity::Complex,
        }
    }
}

/// Root multiplicity. All roots share it in the spaces considered here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Multiplicity {
    Normal = 1,
    Complex = 2,
}

impl Multiplicity {
    pub fn value(self) -> f64 {
        self as i32 as f64
    }
}

/// Which side of the complex/real-form pair a dual norm refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualSide {
    RealForm,
    Complex,
}

/// A linear functional on the chart, in dual coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Covector(pub Vec<f64>);

impl Covector {
    pub fn new(components: Vec<f64>) -> Self {
        Covector(components)
    }

    pub fn zero(dim: usize) -> Self {
        Covector(vec![0.0; dim])
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// The pairing `λ(H)`. Chart level, so independent of any norm convention.
    pub fn apply(&self, h: &ChamberPoint) -> f64 {
        self.0.iter().zip(h.coords()).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, c: f64) -> Covector {
        Covector(self.0.iter().map(|x| c * x).collect())
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0.0)
    }
}

/// A point `H` of `𝔞₀` in chart coordinates; usually, but not necessarily, in
/// the closed positive chamber.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChamberPoint {
    coords: Vec<f64>,
}

impl ChamberPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        ChamberPoint { coords }
    }

    pub fn origin(rank: usize) -> Self {
        ChamberPoint {
            coords: vec![0.0; rank],
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn scaled(&self, c: f64) -> ChamberPoint {
        ChamberPoint {
            coords: self.coords.iter().map(|x| c * x).collect(),
        }
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|x| *x == 0.0)
    }
}

impl From<Vec<f64>> for ChamberPoint {
    fn from(coords: Vec<f64>) -> Self {
        ChamberPoint::new(coords)
    }
}

/// Root data of one normal real form family member and its complex double.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawDescriptor", into = "RawDescriptor")]
pub struct RootSpace {
    family: Family,
    rank: usize,
    positive_roots: Vec<Covector>,
    n0: usize,
    big_n: usize,
    metric_scale: f64,
    simple: Vec<usize>,
    coweights: Vec<ChamberPoint>,
    coweight_det: f64,
}

impl PartialEq for RootSpace {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
            && self.rank == other.rank
            && self.positive_roots == other.positive_roots
            && self.metric_scale == other.metric_scale
    }
}

/// JSON shape of a descriptor: `{family, rank, positive_roots, n0, N}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawDescriptor {
    family: Family,
    rank: usize,
    positive_roots: Vec<Covector>,
    n0: usize,
    #[serde(rename = "N")]
    big_n: usize,
    #[serde(default = "unit_scale", skip_serializing_if = "is_unit_scale")]
    metric_scale: f64,
}

fn unit_scale() -> f64 {
    1.0
}

fn is_unit_scale(s: &f64) -> bool {
    *s == 1.0
}

impl From<RootSpace> for RawDescriptor {
    fn from(rs: RootSpace) -> Self {
        RawDescriptor {
            family: rs.family,
            rank: rs.rank,
            positive_roots: rs.positive_roots,
            n0: rs.n0,
            big_n: rs.big_n,
            metric_scale: rs.metric_scale,
        }
    }
}

impl TryFrom<RawDescriptor> for RootSpace {
    type Error = Error;

    fn try_from(raw: RawDescriptor) -> Result<Self> {
        let rs = RootSpace::from_roots(raw.family, raw.rank, raw.positive_roots)?
            .with_metric_scale(raw.metric_scale)?;
        if rs.n0 != raw.n0 || rs.big_n != raw.big_n {
            return Err(Error::InvalidDescriptor(format!(
                "dimensions (n0, N) = ({}, {}) disagree with the root data ({}, {})",
                raw.n0, raw.big_n, rs.n0, rs.big_n
            )));
        }
        Ok(rs)
    }
}

/// Orthonormal basis of the trace-zero hyperplane of `ℝ^{ℓ+1}` (Helmert basis).
fn trace_zero_basis(rank: usize) -> Vec<Vec<f64>> {
    (1..=rank)
        .map(|k| {
            let norm = ((k * (k + 1)) as f64).sqrt();
            let mut v = vec![0.0; rank + 1];
            for x in v.iter_mut().take(k) {
                *x = 1.0 / norm;
            }
            v[k] = -(k as f64) / norm;
            v
        })
        .collect()
}

fn unit(dim: usize, i: usize, c: f64) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = c;
    v
}

fn combine(dim: usize, i: usize, j: usize, sign: f64) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = 1.0;
    v[j] = sign;
    v
}

fn standard_roots(family: Family, rank: usize) -> Vec<Covector> {
    let mut roots = Vec::new();
    match family {
        Family::A => {
            let basis = trace_zero_basis(rank);
            for i in 0..=rank {
                for j in (i + 1)..=rank {
                    let comps = basis.iter().map(|u| u[i] - u[j]).collect();
                    roots.push(Covector(comps));
                }
            }
        }
        Family::B | Family::C | Family::D => {
            for i in 0..rank {
                for j in (i + 1)..rank {
                    roots.push(Covector(combine(rank, i, j, -1.0)));
                    roots.push(Covector(combine(rank, i, j, 1.0)));
                }
            }
            match family {
                Family::B => roots.extend((0..rank).map(|i| Covector(unit(rank, i, 1.0)))),
                Family::C => roots.extend((0..rank).map(|i| Covector(unit(rank, i, 2.0)))),
                _ => {}
            }
        }
    }
    roots
}

fn close(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9 * (1.0 + x.abs() + y.abs()))
}

impl RootSpace {
    /// Standard coordinate realisation of the positive roots of `family` in
    /// rank `rank`.
    pub fn build(family: Family, rank: usize) -> Result<Self> {
        if rank < family.min_rank() {
            return Err(Error::InvalidRank {
                family,
                rank,
                reason: if family == Family::D {
                    "D requires rank >= 2"
                } else {
                    "rank must be >= 1"
                },
            });
        }
        Self::from_roots(family, rank, standard_roots(family, rank))
    }

    /// Builds a descriptor from explicit positive roots, checking the
    /// structural invariants.
    pub fn from_roots(family: Family, rank: usize, positive_roots: Vec<Covector>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidRank {
                family,
                rank,
                reason: "rank must be >= 1",
            });
        }
        if positive_roots.is_empty() {
            return Err(Error::InvalidDescriptor("no positive roots".into()));
        }
        for (i, a) in positive_roots.iter().enumerate() {
            if a.dim() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    got: a.dim(),
                });
            }
            if a.is_zero() {
                return Err(Error::InvalidDescriptor(format!("root {i} is zero")));
            }
            for b in &positive_roots[..i] {
                // b = c·a with c < 0 iff b and a are antiparallel
                let dot: f64 = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
                let na = a.euclidean_norm();
                let nb = b.euclidean_norm();
                if dot < 0.0 && (dot + na * nb).abs() <= 1e-12 * na * nb {
                    return Err(Error::InvalidDescriptor(format!(
                        "root {i} is a negative multiple of another positive root"
                    )));
                }
            }
        }

        let simple = simple_root_indices(&positive_roots);
        if simple.len() != rank {
            return Err(Error::InvalidDescriptor(format!(
                "found {} simple roots, expected {rank}",
                simple.len()
            )));
        }
        let s = DMatrix::from_fn(rank, rank, |i, j| positive_roots[simple[i]].0[j]);
        let inv = s
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidDescriptor("simple roots are linearly dependent".into()))?;
        let coweights = (0..rank)
            .map(|i| ChamberPoint::new(inv.column(i).iter().copied().collect()))
            .collect();
        let coweight_det = inv.determinant().abs();

        let m = positive_roots.len();
        Ok(RootSpace {
            family,
            rank,
            positive_roots,
            n0: rank + m,
            big_n: rank + 2 * m,
            metric_scale: 1.0,
            simple,
            coweights,
            coweight_det,
        })
    }

    /// Rescales the real form metric by `scale`: `‖H‖₀ ↦ scale·‖H‖₀` and dual
    /// norms by `1/scale`. Useful for comparing with model spaces normalised
    /// to a different curvature.
    pub fn with_metric_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "metric scale must be positive and finite, got {scale}"
            )));
        }
        self.metric_scale = scale;
        Ok(self)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn positive_roots(&self) -> &[Covector] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn metric_scale(&self) -> f64 {
        self.metric_scale
    }

    /// `(n₀, N)`: dimensions of the real form and of the complex double.
    pub fn dimensions(&self) -> (usize, usize) {
        (self.n0, self.big_n)
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    /// `N = dim X`.
    pub fn big_n(&self) -> usize {
        self.big_n
    }

    pub fn dim(&self, form: Form) -> usize {
        match form {
            Form::Normal => self.n0,
            Form::Complex => self.big_n,
        }
    }

    /// Half sum of positive roots counted with multiplicity.
    pub fn rho(&self, mult: Multiplicity) -> Covector {
        let mut acc = vec![0.0; self.rank];
        for a in &self.positive_roots {
            for (s, x) in acc.iter_mut().zip(&a.0) {
                *s += x;
            }
        }
        let half_m = 0.5 * mult.value();
        Covector(acc.into_iter().map(|x| half_m * x).collect())
    }

    /// `|ρ|²` with the complex side dual norm; the constant term of the
    /// Laplacian spectrum on `X`.
    pub fn rho_sq_complex(&self) -> f64 {
        let n = self.dual_norm(&self.rho(Multiplicity::Complex), DualSide::Complex);
        n * n
    }

    /// `‖H‖₀`.
    pub fn norm0(&self, h: &ChamberPoint) -> f64 {
        self.metric_scale * h.euclidean_norm()
    }

    /// `‖H‖ = √2‖H‖₀`, the norm induced by the Killing form of `𝔤` as a real
    /// Lie algebra.
    pub fn norm_complex(&self, h: &ChamberPoint) -> f64 {
        std::f64::consts::SQRT_2 * self.norm0(h)
    }

    /// Dual norm of `λ`; the complex side value is the real form value over `√2`.
    pub fn dual_norm(&self, lambda: &Covector, side: DualSide) -> f64 {
        let real = lambda.euclidean_norm() / self.metric_scale;
        match side {
            DualSide::RealForm => real,
            DualSide::Complex => real / std::f64::consts::SQRT_2,
        }
    }

    fn check_dim(&self, h: &ChamberPoint) -> Result<()> {
        if h.dim() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: h.dim(),
            });
        }
        Ok(())
    }

    /// `α(H)` for every positive root, in root order.
    pub fn root_values(&self, h: &ChamberPoint) -> Vec<f64> {
        self.positive_roots.iter().map(|a| a.apply(h)).collect()
    }

    pub fn in_chamber(&self, h: &ChamberPoint) -> bool {
        h.dim() == self.rank && self.chamber_values(h).is_ok()
    }

    /// Root values of a closed chamber point, with round-off negatives
    /// clamped to zero.
    pub fn chamber_values(&self, h: &ChamberPoint) -> Result<Vec<f64>> {
        self.check_dim(h)?;
        let slack = CHAMBER_TOL * (1.0 + h.euclidean_norm());
        self.positive_roots
            .iter()
            .map(|a| {
                let v = a.apply(h);
                if v < -slack {
                    Err(Error::OutsideChamber { root_value: v })
                } else {
                    Ok(v.max(0.0))
                }
            })
            .collect()
    }

    /// `δ₀(H) = ∏_{α∈Σ⁺} sinh α(H)`.
    pub fn delta_normal(&self, h: &ChamberPoint) -> Result<f64> {
        Ok(self.chamber_values(h)?.into_iter().map(f64::sinh).product())
    }

    /// `δ(H) = δ₀(H)²`.
    pub fn delta_complex(&self, h: &ChamberPoint) -> Result<f64> {
        let d = self.delta_normal(h)?;
        Ok(d * d)
    }

    /// `ln δ₀(H)`, finite away from the walls and overflow free.
    pub fn ln_delta_normal(&self, h: &ChamberPoint) -> Result<f64> {
        Ok(self.chamber_values(h)?.into_iter().map(ln_sinh).sum())
    }

    /// Indices (into [`positive_roots`](Self::positive_roots)) of the simple roots.
    pub fn simple_root_indices(&self) -> &[usize] {
        &self.simple
    }

    /// Fundamental coweights `ϖᵢ` with `αⱼ(ϖᵢ) = δᵢⱼ`; the closed chamber is
    /// the cone they span.
    pub fn coweights(&self) -> &[ChamberPoint] {
        &self.coweights
    }

    /// `|det|` of the coweight matrix: the Jacobian of `c ↦ Σ cᵢϖᵢ`.
    pub fn coweight_jacobian(&self) -> f64 {
        self.coweight_det
    }

    /// Chamber point `Σ cᵢϖᵢ` for coweight coordinates `c`.
    pub fn from_coweight_coords(&self, c: &[f64]) -> ChamberPoint {
        let mut coords = vec![0.0; self.rank];
        for (ci, w) in c.iter().zip(&self.coweights) {
            for (x, wx) in coords.iter_mut().zip(w.coords()) {
                *x += ci * wx;
            }
        }
        ChamberPoint::new(coords)
    }

    /// Moves `h` into the closed positive chamber by successive root
    /// reflections. The result lies in the Weyl orbit of `h`.
    pub fn fold_into_chamber(&self, h: &ChamberPoint) -> Result<ChamberPoint> {
        self.check_dim(h)?;
        let mut x = h.coords.clone();
        let slack = CHAMBER_TOL * (1.0 + h.euclidean_norm());
        // Each reflection strictly increases ρ₀(H), so this terminates; the
        // cap only guards against round-off cycling.
        for _ in 0..10_000 {
            let worst = self
                .positive_roots
                .iter()
                .map(|a| (a, a.0.iter().zip(&x).map(|(p, q)| p * q).sum::<f64>()))
                .min_by(|l, r| l.1.total_cmp(&r.1));
            match worst {
                Some((a, v)) if v < -slack => {
                    let nsq: f64 = a.0.iter().map(|c| c * c).sum();
                    for (xi, ai) in x.iter_mut().zip(&a.0) {
                        *xi -= 2.0 * v / nsq * ai;
                    }
                }
                _ => break,
            }
        }
        Ok(ChamberPoint::new(x))
    }

    /// Unit vector (for `‖·‖`) along `ρ`, interior to the chamber.
    pub fn reference_direction(&self) -> ChamberPoint {
        let rho0 = self.rho(Multiplicity::Normal);
        let h = ChamberPoint::new(rho0.0);
        let n = self.norm_complex(&h);
        h.scaled(1.0 / n)
    }

    /// `min ρ₀(H)/‖H‖₀` over the closed chamber, attained on a coweight ray.
    pub fn min_rho0_rate(&self) -> f64 {
        let rho0 = self.rho(Multiplicity::Normal);
        self.coweights
            .iter()
            .map(|w| rho0.apply(w) / self.norm0(w))
            .fold(f64::INFINITY, f64::min)
    }
}

/// `ln sinh x` for `x ≥ 0`; `-∞` at zero.
pub fn ln_sinh(x: f64) -> f64 {
    if x <= 0.0 {
        f64::NEG_INFINITY
    } else if x < 20.0 {
        x.sinh().ln()
    } else {
        x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
    }
}

fn simple_root_indices(roots: &[Covector]) -> Vec<usize> {
    (0..roots.len())
        .filter(|&k| {
            let target = &roots[k].0;
            !roots.iter().enumerate().any(|(i, a)| {
                i != k
                    && roots.iter().enumerate().any(|(j, b)| {
                        j != k && {
                            let sum: Vec<f64> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
                            close(&sum, target)
                        }
                    })
            })
        })
        .collect()
}

/// Normal real form catalog used by the scans and checks: one representative
/// per isomorphism class of simple root system up to `max_rank`, plus `C₂`
/// which shares its type with `B₂` but not its realisation.
pub fn catalog(max_rank: usize) -> Vec<RootSpace> {
    let mut out = Vec::new();
    for rank in 1..=max_rank {
        for family in Family::ALL {
            let keep = match family {
                Family::A => true,
                Family::B | Family::C => rank >= 2,
                Family::D => rank >= 4,
            };
            if keep {
                out.push(RootSpace::build(family, rank).expect("catalog ranks are valid"));
            }
        }
    }
    out
}

/// A space named as in `"A:2"`, `"C:3"` or `"A:1complex"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpaceName {
    pub family: Family,
    pub rank: usize,
    pub form: Form,
}

impl SpaceName {
    pub fn build(&self) -> Result<RootSpace> {
        RootSpace::build(self.family, self.rank)
    }
}

impl FromStr for SpaceName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::UnknownSpace(s.to_string());
        let (fam, rest) = s.split_once(':').ok_or_else(err)?;
        let family: Family = fam.parse().map_err(|_| err())?;
        let (digits, form) = match rest.strip_suffix("complex") {
            Some(d) => (d, Form::Complex),
            None => (rest, Form::Normal),
        };
        let rank: usize = digits.trim().parse().map_err(|_| err())?;
        if rank < family.min_rank() {
            return Err(err());
        }
        Ok(SpaceName { family, rank, form })
    }
}

impl fmt::Display for SpaceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.rank)?;
        if self.form == Form::Complex {
            f.write_str("complex")?;
        }
        Ok(())
    }
}
