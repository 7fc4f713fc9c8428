//! Canonical report serialisation: fixed field order, floats rounded to 12
//! significant digits, a versioned `schema` key, newline-terminated output.

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::estimates::EstimateReport;

pub const SCHEMA: &str = "symdisperse/1";

/// Rounds to 12 significant decimal digits; non-finite values pass through.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Canonical text of a float in tables: 12 significant digits, shortest form.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{:e}", round12(x))
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round12(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Serialises `body` as a pretty JSON object led by `"schema"`, with every
/// float rounded. Struct field order is kept.
pub fn to_canonical_json<T: Serialize>(body: &T) -> Result<String> {
    let mut value = serde_json::to_value(body).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    round_value(&mut value);
    let Value::Object(fields) = value else {
        return Err(Error::InvalidParameter("report body must serialise to a JSON object".into()));
    };
    let mut out = Map::new();
    out.insert("schema".into(), Value::String(SCHEMA.into()));
    out.extend(fields.into_iter().filter(|(k, _)| k != "schema"));
    let mut text = serde_json::to_string_pretty(&Value::Object(out)).expect("JSON values always serialise");
    text.push('\n');
    Ok(text)
}

/// Parses canonical JSON, checking the schema tag.
pub fn from_canonical_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("bad report JSON: {e}")))?;
    let Value::Object(map) = &mut value else {
        return Err(Error::InvalidParameter("report must be a JSON object".into()));
    };
    match map.remove("schema") {
        Some(Value::String(s)) if s == SCHEMA => {}
        other => {
            return Err(Error::InvalidParameter(format!(
                "expected schema {SCHEMA:?}, found {other:?}"
            )))
        }
    }
    serde_json::from_value(value).map_err(|e| Error::InvalidParameter(format!("bad report JSON: {e}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Writes rows to CSV with a header; floats should already be formatted.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidParameter(format!("CSV emission failed: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields is UTF-8"))
}

/// Canonical bytes of a report: the full JSON object, or a per-time CSV
/// table carrying the summary in every row.
pub fn emit_report(report: &EstimateReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => Ok(to_canonical_json(report)?.into_bytes()),
        Format::Csv => {
            let header = [
                "quantity",
                "t",
                "value",
                "fitted_slope",
                "claimed_slope",
                "formula_slope",
                "tail_status",
                "pass",
            ];
            let rows: Vec<Vec<String>> = report
                .t_grid
                .iter()
                .zip(&report.values)
                .map(|(t, v)| {
                    vec![
                        report.quantity.clone(),
                        format_float(*t),
                        format_float(*v),
                        format_float(report.fitted_slope),
                        format_float(report.claimed_slope),
                        format_float(report.formula_slope),
                        report.tail_status.to_string(),
                        report.pass.to_string(),
                    ]
                })
                .collect();
            Ok(csv_table(&header, &rows)?.into_bytes())
        }
    }
}

pub fn parse_report(bytes: &[u8]) -> Result<EstimateReport> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    from_canonical_json(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::{Check, TailStatus};

    fn sample() -> EstimateReport {
        let t = vec![1.0, 2.0, 4.0, 8.0];
        let v: Vec<f64> = t.iter().map(|x: &f64| std::f64::consts::PI * x.powf(-1.5)).collect();
        EstimateReport::new("sup_norm", t, v, -1.0, -1.5, Check::MatchesFormula, 1e-3, None, TailStatus::Converged).unwrap()
    }

    #[test]
    fn rounding() {
        assert_eq!(round12(std::f64::consts::PI), 3.14159265359);
        assert_eq!(round12(-1.0 / 3.0), -0.333333333333);
        assert_eq!(round12(0.0), 0.0);
        assert!(round12(f64::NAN).is_nan());
        assert_eq!(round12(1e300), 1e300);
        assert_eq!(format_float(0.5), "5e-1");
        assert_eq!(format_float(f64::INFINITY), "inf");
    }

    #[test]
    fn json_layout() {
        let text = String::from_utf8(emit_report(&sample(), Format::Json).unwrap()).unwrap();
        assert!(text.starts_with("{\n  \"schema\": \"symdisperse/1\",\n  \"quantity\": \"sup_norm\""));
        assert!(text.ends_with("}\n"));
        let order: Vec<usize> = ["t_grid", "values", "fitted_slope", "claimed_slope", "tail_status", "pass"]
            .iter()
            .map(|k| text.find(&format!("\"{k}\"")).unwrap())
            .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
        assert!(text.contains("3.14159265359"));
    }

    #[test]
    fn roundtrip_is_idempotent() {
        let r = sample();
        let a = emit_report(&r, Format::Json).unwrap();
        let back = parse_report(&a).unwrap();
        assert_eq!(emit_report(&back, Format::Json).unwrap(), a);
        assert_eq!(back.quantity, r.quantity);
        assert_eq!(back.pass, r.pass);
        for (x, y) in back.values.iter().zip(&r.values) {
            assert!((x - y).abs() <= 1e-11 * y.abs());
        }
    }

    #[test]
    fn schema_is_checked() {
        let text = String::from_utf8(emit_report(&sample(), Format::Json).unwrap()).unwrap();
        let wrong = text.replace("symdisperse/1", "symdisperse/0");
        assert!(parse_report(wrong.as_bytes()).is_err());
    }

    #[test]
    fn csv_layout() {
        let text = String::from_utf8(emit_report(&sample(), Format::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "quantity,t,value,fitted_slope,claimed_slope,formula_slope,tail_status,pass");
        assert!(lines[1].starts_with("sup_norm,1e0,3.14159265359e0,"));
        assert!(text.ends_with('\n'));
    }
}
