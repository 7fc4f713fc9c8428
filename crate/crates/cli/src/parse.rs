//! Value parsers for grid specs, exponents and pairs.

use symdisperse::error::{Error, Result};
use symdisperse::estimates::dyadic_grid;

/// `start:stop:scheme` with scheme `dyadic`, `log<count>` or `lin<count>`,
/// or an explicit comma separated list.
pub fn grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::InvalidParameter(format!("bad grid {spec:?}: {why}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let g = match parts.as_slice() {
        [list] => list
            .split(',')
            .map(|x| number(x).map_err(|_| bad("expected numbers")))
            .collect::<Result<Vec<f64>>>()?,
        [a, b, scheme] => {
            let (a, b) = (number(a)?, number(b)?);
            if !(a.is_finite() && b.is_finite() && b >= a) {
                return Err(bad("need finite start <= stop"));
            }
            let count = |s: &str| -> Result<usize> {
                s.parse::<usize>()
                    .ok()
                    .filter(|&c| c >= 2)
                    .ok_or_else(|| bad("point count must be an integer >= 2"))
            };
            if *scheme == "dyadic" {
                dyadic_grid(a, b)?
            } else if let Some(c) = scheme.strip_prefix("log") {
                if a <= 0.0 {
                    return Err(bad("log grids need a positive start"));
                }
                let c = count(c)?;
                (0..c).map(|i| a * (b / a).powf(i as f64 / (c - 1) as f64)).collect()
            } else if let Some(c) = scheme.strip_prefix("lin") {
                let c = count(c)?;
                (0..c).map(|i| a + (b - a) * i as f64 / (c - 1) as f64).collect()
            } else {
                return Err(bad("scheme must be dyadic, log<count> or lin<count>"));
            }
        }
        _ => return Err(bad("expected start:stop:scheme or a comma separated list")),
    };
    if g.is_empty() {
        return Err(Error::EmptyGrid("grid"));
    }
    if g.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(bad("values must be strictly increasing"));
    }
    Ok(g)
}

/// A float or a fraction `a/b`.
pub fn number(s: &str) -> Result<f64> {
    let bad = || Error::InvalidParameter(format!("not a number: {s:?}"));
    let float = |x: &str| x.trim().parse::<f64>().map_err(|_| bad());
    match s.split_once('/') {
        Some((a, b)) => Ok(float(a)? / float(b)?),
        None => float(s),
    }
}

/// A Lebesgue exponent; `inf` is accepted.
pub fn exponent(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        other => {
            let x = number(other)?;
            if x.is_nan() || x < 1.0 {
                return Err(Error::InvalidParameter(format!("exponent must lie in [1, inf], got {s:?}")));
            }
            Ok(x)
        }
    }
}

/// `p,q`.
pub fn pair(s: &str) -> Result<(f64, f64)> {
    match s.split_once(',') {
        Some((p, q)) => Ok((exponent(p)?, exponent(q)?)),
        None => Err(Error::InvalidParameter(format!("expected a pair p,q, got {s:?}"))),
    }
}

/// `1/p`, with `1/∞ = 0`.
pub fn reciprocal(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}
