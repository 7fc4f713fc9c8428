//! The subcommands. Each returns its artifacts and whether every estimate
//! check passed; nothing here touches the terminal.

use rayon::prelude::*;
use serde::Serialize;
use symdisperse::error::{Error, Result};
use symdisperse::estimates::{
    fit_loglog_slope, kunze_stein_functional, majorant_integral, majorant_radius, Check, EstimateReport, TailStatus,
    QUADRATURE_SLOPE_TOL,
};
use symdisperse::kernels::{
    kernel_bound_complex, kernel_bound_normal, schrodinger_kernel_complex, schrodinger_kernel_normal, ComplexTime,
};
use symdisperse::report::{csv_table, format_float, to_canonical_json};
use symdisperse::root_system::{ChamberPoint, Form, RootSpace, SpaceName};
use symdisperse::spherical::{inverse_spherical_complex, EstimateConstants, Method, QuadratureSpec, RadialProfile};
use symdisperse::strichartz::{
    admissibility, nls_gamma_window, strichartz_probe, theorem2_pair_allowed, ModelSpace, PairVerdict,
};

use crate::parse::reciprocal;

/// A named output stream of a command.
#[derive(Debug)]
pub struct Artifact {
    pub kind: ArtifactKind,
    pub text: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArtifactKind {
    Json,
    Csv,
    Text,
}

#[derive(Debug)]
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    /// `false` when some estimate check failed.
    pub pass: bool,
}

impl Outcome {
    fn json<T: Serialize>(body: &T, pass: bool) -> Result<Self> {
        Ok(Outcome {
            artifacts: vec![Artifact {
                kind: ArtifactKind::Json,
                text: to_canonical_json(body)?,
            }],
            pass,
        })
    }
}

fn space_label(name: &SpaceName) -> String {
    match name.form {
        Form::Normal => format!("{}:{}", name.family, name.rank),
        Form::Complex => format!("{}:{}complex", name.family, name.rank),
    }
}

/// `c = 1`, `a = |Σ⁺|` unless overridden: the constants under which the
/// kernel bounds dominate the closed forms.
pub fn constants(rs: &RootSpace, c: Option<f64>, a: Option<f64>) -> Result<EstimateConstants> {
    EstimateConstants::new(c.unwrap_or(1.0), a.unwrap_or(rs.num_positive_roots() as f64))
}

#[derive(Serialize)]
struct SpaceInfo {
    space: String,
    family: String,
    rank: usize,
    form: Form,
    positive_roots: usize,
    n0: usize,
    #[serde(rename = "N")]
    big_n: usize,
    /// Dimension of the selected form.
    dim: usize,
    rho_sq: f64,
}

pub fn space_info(name: &SpaceName) -> Result<Outcome> {
    let rs = name.build()?;
    Outcome::json(
        &SpaceInfo {
            space: space_label(name),
            family: name.family.to_string(),
            rank: rs.rank(),
            form: name.form,
            positive_roots: rs.num_positive_roots(),
            n0: rs.n0(),
            big_n: rs.big_n(),
            dim: rs.dim(name.form),
            rho_sq: rs.rho_sq_complex(),
        },
        true,
    )
}

#[derive(Serialize)]
struct OracleValue {
    value_re: f64,
    value_im: f64,
    abs_difference: f64,
}

#[derive(Serialize)]
struct KernelEval {
    space: String,
    eps: f64,
    t: f64,
    #[serde(rename = "H")]
    h: Vec<f64>,
    value_re: f64,
    value_im: f64,
    modulus: f64,
    /// `None` at `t = 0`, where the bound is infinite.
    bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleValue>,
}

pub fn kernel_eval(
    name: &SpaceName,
    eps: f64,
    t: f64,
    h: &[f64],
    oracle: bool,
    k: (Option<f64>, Option<f64>),
    spec: &QuadratureSpec,
) -> Result<Outcome> {
    let rs = name.build()?;
    let tau = ComplexTime::new(eps, t)?;
    if h.len() != rs.rank() {
        return Err(Error::DimensionMismatch {
            expected: rs.rank(),
            got: h.len(),
        });
    }
    let h = ChamberPoint::new(h.to_vec());
    let k = constants(&rs, k.0, k.1)?;
    let (value, bound) = match name.form {
        Form::Normal => (schrodinger_kernel_normal(&rs, tau, &h)?, kernel_bound_normal(&rs, t, &h, k)),
        Form::Complex => (schrodinger_kernel_complex(&rs, tau, &h)?, kernel_bound_complex(&rs, t, &h, k)),
    };
    let oracle = if oracle {
        // the normal form kernel is the complex one at (τ/2, H/2)
        let (tau_c, h_c) = match name.form {
            Form::Normal => (tau.half(), h.scaled(0.5)),
            Form::Complex => (tau, h.clone()),
        };
        let profile = RadialProfile::propagator(&rs, tau_c);
        let v = inverse_spherical_complex(&rs, &profile, &h_c, Method::Quadrature, spec)?;
        Some(OracleValue {
            value_re: v.re,
            value_im: v.im,
            abs_difference: (v - value).norm(),
        })
    } else {
        None
    };
    Outcome::json(
        &KernelEval {
            space: space_label(name),
            eps,
            t,
            h: h.coords().to_vec(),
            value_re: value.re,
            value_im: value.im,
            modulus: value.norm(),
            bound: bound.is_finite().then_some(bound),
            oracle,
        },
        true,
    )
}

/// Validated inputs of a dispersive scan.
#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub space: SpaceName,
    pub t_grid: Vec<f64>,
    pub q: Vec<f64>,
    pub spec: QuadratureSpec,
    pub constants: (Option<f64>, Option<f64>),
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.t_grid.is_empty() {
            return Err(Error::EmptyGrid("t grid"));
        }
        if self.q.is_empty() {
            return Err(Error::EmptyGrid("q list"));
        }
        if self.t_grid.len() < 2 || self.t_grid[0] <= 0.0 {
            return Err(Error::InvalidParameter(
                "a scan needs at least two positive times to fit a slope".into(),
            ));
        }
        if self.space.form != Form::Normal {
            return Err(Error::InvalidParameter(
                "dispersive scans run on the normal real form; drop the \"complex\" suffix".into(),
            ));
        }
        self.spec.validate()
    }
}

#[derive(Serialize)]
struct ScanBundle {
    space: String,
    reports: Vec<EstimateReport>,
}

fn worst(a: TailStatus, b: TailStatus) -> TailStatus {
    let rank = |s: TailStatus| match s {
        TailStatus::Converged => 0,
        TailStatus::Inconclusive => 1,
        TailStatus::Diverged => 2,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

/// Kunze–Stein functional over the time grid for each `q`, with the
/// proof-chain majorant `c^{1+q/2}|t|^{-Nq/4}·M(q)` alongside.
pub fn dispersive_scan(cfg: &ScanConfig) -> Result<Outcome> {
    cfg.validate()?;
    let rs = cfg.space.build()?;
    let k = constants(&rs, cfg.constants.0, cfg.constants.1)?;
    let big_n = rs.big_n() as f64;
    let n0 = rs.n0() as f64;
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for &q in &cfg.q {
        let cells = cfg
            .t_grid
            .par_iter()
            .map(|&t| kunze_stein_functional(&rs, q, t, &cfg.spec, k))
            .collect::<Result<Vec<_>>>()?;
        let m = majorant_integral(&rs, q, k, majorant_radius(&rs, q, k))?;
        let values: Vec<f64> = cells.iter().map(|c| c.value).collect();
        for (i, (&t, v)) in cfg.t_grid.iter().zip(&values).enumerate() {
            let slope = if i == 0 {
                String::new()
            } else {
                format_float(fit_loglog_slope(&cfg.t_grid[..=i], &values[..=i])?)
            };
            rows.push(vec![
                format_float(t),
                format_float(q),
                format_float(*v),
                format_float(k.c.powf(1.0 + q / 2.0) * t.abs().powf(-big_n * q / 4.0) * m.value),
                slope,
            ]);
        }
        let status = cells.iter().map(|c| c.status).fold(m.status, worst);
        let formula = -big_n * q / 4.0;
        reports.push(EstimateReport::new(
            "kunze_stein_functional",
            cfg.t_grid.clone(),
            values,
            -n0 * q / 4.0,
            formula,
            Check::MatchesFormula,
            QUADRATURE_SLOPE_TOL * formula.abs(),
            Some(cells[0].radius),
            status,
        )?);
    }
    let pass = reports.iter().all(|r| r.pass);
    let csv = csv_table(&["t", "q", "functional", "majorant", "slope_so_far"], &rows)?;
    let json = if reports.len() == 1 {
        to_canonical_json(&reports[0])?
    } else {
        to_canonical_json(&ScanBundle {
            space: space_label(&cfg.space),
            reports,
        })?
    };
    Ok(Outcome {
        artifacts: vec![
            Artifact {
                kind: ArtifactKind::Csv,
                text: csv,
            },
            Artifact {
                kind: ArtifactKind::Json,
                text: json,
            },
        ],
        pass,
    })
}

#[derive(Serialize)]
struct ProbeOutput {
    space: String,
    n: usize,
    p: f64,
    q: f64,
    admissible: bool,
    spread: f64,
    spread_limit: f64,
    max_mass_error: f64,
    pass: bool,
}

/// Gaussian width sweep of `‖u‖_{L^p L^q}/‖f‖₂` on a rank-one model.
pub fn strichartz_check(name: &SpaceName, pair: (f64, f64), widths: &[f64], spec: &QuadratureSpec) -> Result<Outcome> {
    let rs = name.build()?;
    let model = ModelSpace::new(rs)?;
    let n = model.dim();
    let (p, q) = pair;
    let verdict = admissibility(reciprocal(p), reciprocal(q), n);
    if !verdict.admissible {
        return Err(Error::NotAdmissible {
            inv_p: reciprocal(p),
            inv_q: reciprocal(q),
            n,
        });
    }
    let summary = strichartz_probe(&model, p, q, widths, spec)?;
    let rows: Vec<Vec<String>> = summary
        .rows
        .iter()
        .map(|r| {
            vec![
                format_float(r.width),
                format_float(r.strichartz_norm),
                format_float(r.data_norm),
                format_float(r.ratio),
                format_float(r.mass_error),
            ]
        })
        .collect();
    let csv = csv_table(&["width", "strichartz_norm", "data_norm", "ratio", "mass_error"], &rows)?;
    let json = to_canonical_json(&ProbeOutput {
        space: space_label(name),
        n,
        p,
        q,
        admissible: true,
        spread: summary.spread,
        spread_limit: symdisperse::strichartz::PROBE_SPREAD_LIMIT,
        max_mass_error: summary.max_mass_error,
        pass: summary.pass,
    })?;
    Ok(Outcome {
        artifacts: vec![
            Artifact {
                kind: ArtifactKind::Csv,
                text: csv,
            },
            Artifact {
                kind: ArtifactKind::Json,
                text: json,
            },
        ],
        pass: summary.pass,
    })
}

#[derive(Serialize)]
struct AdmissibleOutput {
    n: usize,
    p: String,
    q: String,
    inv_p: f64,
    inv_q: f64,
    admissible: bool,
    reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pair_verdict: Option<PairVerdictOutput>,
}

#[derive(Serialize)]
struct PairVerdictOutput {
    p_tilde: String,
    q_tilde: String,
    #[serde(flatten)]
    verdict: PairVerdict,
}

/// Exponents as text: JSON has no infinity.
fn exponent_text(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        p.to_string()
    }
}

pub fn admissible(n: usize, p: f64, q: f64, with: Option<(f64, f64)>) -> Result<Outcome> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    let (inv_p, inv_q) = (reciprocal(p), reciprocal(q));
    let verdict = admissibility(inv_p, inv_q, n);
    let pair_verdict = match with {
        Some((pt, qt)) => Some(PairVerdictOutput {
            p_tilde: exponent_text(pt),
            q_tilde: exponent_text(qt),
            verdict: theorem2_pair_allowed(p, q, pt, qt, n)?,
        }),
        None => None,
    };
    Outcome::json(
        &AdmissibleOutput {
            n,
            p: exponent_text(p),
            q: exponent_text(q),
            inv_p,
            inv_q,
            admissible: verdict.admissible,
            reason: verdict.reason,
            pair_verdict,
        },
        true,
    )
}

pub fn gamma_window(n: usize) -> Result<Outcome> {
    let w = nls_gamma_window(n)?;
    Ok(Outcome {
        artifacts: vec![Artifact {
            kind: ArtifactKind::Text,
            text: format!("{w}\n"),
        }],
        pass: true,
    })
}
