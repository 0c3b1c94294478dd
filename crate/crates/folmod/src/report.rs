//! Report documents and self-contained certificates.
//!
//! A report is one JSON object with the fields `command`, `inputs`,
//! `verdict`, `ledger`, `certificates` and `timings`. Object keys are sorted
//! and timings are omitted unless requested, so equal inputs give equal
//! bytes. Certificates carry their polynomials as text over named
//! variables and can be re-expanded without the originating files.

use std::fmt::Write as _;

use folmod_core::algebra::display::poly_to_string;
use folmod_core::algebra::{MembershipCertificate, Polynomial};
use folmod_core::geometry::{PolyMap, SubmersionCertificate, VectorField};
use serde_json::{json, Value};

use crate::expr::{parse_field, parse_polynomial};

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub verdict: String,
    pub exit: i32,
    pub detail: Value,
    pub ledger: Value,
    pub certificates: Vec<Value>,
    pub timings: Option<Value>,
}

impl Report {
    pub fn new(command: &str, inputs: Value) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            verdict: String::new(),
            exit: 0,
            detail: Value::Null,
            ledger: Value::Null,
            certificates: Vec::new(),
            timings: None,
        }
    }

    pub fn verdict(mut self, label: &str, exit: i32, detail: Value) -> Self {
        self.verdict = label.to_string();
        self.exit = exit;
        self.detail = detail;
        self
    }

    pub fn to_value(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "verdict": { "label": self.verdict, "exit": self.exit, "detail": self.detail },
            "ledger": self.ledger,
            "certificates": self.certificates,
            "timings": self.timings.clone().unwrap_or(Value::Null),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("values serialize");
        s.push('\n');
        s
    }

    /// Plain-text rendering for terminals.
    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.command, self.verdict);
        render_detail(&mut out, &self.detail, 1);
        if let Value::Array(rows) = &self.ledger {
            let _ = writeln!(out, "ledger:");
            let _ = writeln!(out, "  {:<16} {:<12} {:<12} {:<16}", "map", "submersion", "surjective", "connected_fibers");
            for r in rows {
                let f = |k: &str| r.get(k).and_then(Value::as_str).unwrap_or("").to_string();
                let _ = writeln!(out, "  {:<16} {:<12} {:<12} {:<16}", f("map"), f("submersion"), f("surjective"), f("connected_fibers"));
            }
        }
        if !self.certificates.is_empty() {
            let _ = writeln!(out, "certificates: {}", self.certificates.len());
        }
        if let Some(t) = &self.timings {
            let _ = writeln!(out, "timings: {t}");
        }
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Null => Some("-".into()),
        _ => None,
    }
}

/// Aligned rows for an array of objects sharing keys and holding scalars.
fn table(items: &[Value]) -> Option<Vec<String>> {
    let first = items.first()?.as_object()?;
    let keys: Vec<&String> = first.keys().collect();
    let mut cells = vec![keys.iter().map(|k| k.to_string()).collect::<Vec<_>>()];
    for i in items {
        let obj = i.as_object()?;
        if obj.len() != keys.len() {
            return None;
        }
        cells.push(keys.iter().map(|k| obj.get(*k).and_then(scalar)).collect::<Option<Vec<_>>>()?);
    }
    let widths: Vec<usize> = (0..keys.len()).map(|c| cells.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    Some(
        cells
            .iter()
            .map(|r| r.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect::<Vec<_>>().join("  "))
            .collect(),
    )
}

fn render_detail(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                match scalar(v) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        if let Value::Array(items) = v {
                            if items.iter().all(|i| scalar(i).is_some()) {
                                let parts: Vec<String> = items.iter().filter_map(scalar).collect();
                                let _ = writeln!(out, "{pad}{k}: [{}]", parts.join(", "));
                                continue;
                            }
                            if let Some(table) = table(items) {
                                let _ = writeln!(out, "{pad}{k}:");
                                for row in table {
                                    let _ = writeln!(out, "{pad}  {}", row.trim_end());
                                }
                                continue;
                            }
                        }
                        let _ = writeln!(out, "{pad}{k}:");
                        render_detail(out, v, depth + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for i in items {
                match scalar(i) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render_detail(out, i, depth + 1);
                    }
                }
            }
        }
        other => {
            if let Some(s) = scalar(other) {
                let _ = writeln!(out, "{pad}{s}");
            }
        }
    }
}

/// `h^power * target = Σ coefficients[i] * generators[i]`.
pub fn membership_certificate(claim: &str, target: &VectorField, gens: &[VectorField], h: &Polynomial, cert: &MembershipCertificate) -> Value {
    let vars = target.chart().vars();
    json!({
        "kind": "membership",
        "claim": claim,
        "vars": vars,
        "h": poly_to_string(h, vars),
        "power": cert.power,
        "target": target.to_string(),
        "generators": gens.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "coefficients": cert.coefficients.iter().map(|c| poly_to_string(c, vars)).collect::<Vec<_>>(),
    })
}

/// `J * right_inverse = h^power * Id` for a map certified everywhere.
pub fn submersion_certificate(claim: &str, f: &PolyMap, cert: &SubmersionCertificate) -> Option<Value> {
    let SubmersionCertificate::CertifiedEverywhere { power, right_inverse } = cert else {
        return None;
    };
    let vars = f.source().vars();
    Some(json!({
        "kind": "right-inverse",
        "claim": claim,
        "vars": vars,
        "h": poly_to_string(&f.source().avoid_product(), vars),
        "power": power,
        "components": f.components().iter().map(|c| poly_to_string(c, vars)).collect::<Vec<_>>(),
        "right_inverse": right_inverse
            .iter()
            .map(|row| row.iter().map(|c| poly_to_string(c, vars)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("certificate {index}: {message}")]
pub struct CertificateFormatError {
    pub index: usize,
    pub message: String,
}

fn strings(v: &Value, key: &str) -> Result<Vec<String>, String> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| format!("missing array {key}"))?
        .iter()
        .map(|s| s.as_str().map(str::to_string).ok_or_else(|| format!("{key} must hold strings")))
        .collect()
}

fn string(v: &Value, key: &str) -> Result<String, String> {
    v.get(key).and_then(Value::as_str).map(str::to_string).ok_or_else(|| format!("missing string {key}"))
}

/// Re-expands one certificate. `Ok(false)` means it parsed but does not hold.
pub fn verify_certificate(cert: &Value) -> Result<bool, String> {
    let vars = strings(cert, "vars")?;
    let n = vars.len();
    let poly = |s: &str| parse_polynomial(s, &vars).map_err(|e| format!("{s:?}: {e}"));
    let h = poly(&string(cert, "h")?)?;
    let power = cert.get("power").and_then(Value::as_u64).ok_or("missing power")?;
    let hm = h.pow(u32::try_from(power).map_err(|_| "power too large")?);
    match string(cert, "kind")?.as_str() {
        "membership" => {
            let field = |s: &str| parse_field(s, &vars).map_err(|e| format!("{s:?}: {e}"));
            let target = field(&string(cert, "target")?)?;
            let gens = strings(cert, "generators")?.iter().map(|g| field(g)).collect::<Result<Vec<_>, _>>()?;
            let coeffs = strings(cert, "coefficients")?.iter().map(|c| poly(c)).collect::<Result<Vec<_>, _>>()?;
            if gens.len() != coeffs.len() {
                return Ok(false);
            }
            let mut sum = vec![Polynomial::zero(n); n];
            for (c, g) in coeffs.iter().zip(&gens) {
                for (s, gi) in sum.iter_mut().zip(g) {
                    *s = &*s + &(c * gi);
                }
            }
            Ok(sum.iter().zip(&target).all(|(s, t)| *s == &hm * t))
        }
        "right-inverse" => {
            let comps = strings(cert, "components")?.iter().map(|c| poly(c)).collect::<Result<Vec<_>, _>>()?;
            let rows = cert.get("right_inverse").and_then(Value::as_array).ok_or("missing right_inverse")?;
            let s: Vec<Vec<Polynomial>> = rows
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| "right_inverse rows must be arrays".to_string())?
                        .iter()
                        .map(|c| c.as_str().ok_or_else(|| "entries must be strings".to_string()).and_then(&poly))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<_, _>>()?;
            let p = comps.len();
            if s.len() != n || s.iter().any(|r| r.len() != p) {
                return Ok(false);
            }
            for (i, ci) in comps.iter().enumerate() {
                for j in 0..p {
                    let entry = (0..n).fold(Polynomial::zero(n), |acc, k| &acc + &(&ci.derivative(k) * &s[k][j]));
                    let expected = if i == j { hm.clone() } else { Polynomial::zero(n) };
                    if entry != expected {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        other => Err(format!("unknown certificate kind {other:?}")),
    }
}

/// Verifies every certificate of a report document. Returns the indices
/// of certificates that do not hold.
pub fn verify_report(doc: &Value) -> Result<(usize, Vec<usize>), CertificateFormatError> {
    let certs = doc
        .get("certificates")
        .and_then(Value::as_array)
        .ok_or(CertificateFormatError { index: 0, message: "report has no certificates array".into() })?;
    let mut failed = Vec::new();
    for (index, c) in certs.iter().enumerate() {
        match verify_certificate(c) {
            Ok(true) => {}
            Ok(false) => failed.push(index),
            Err(message) => return Err(CertificateFormatError { index, message }),
        }
    }
    Ok((certs.len(), failed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use folmod_core::geometry::Chart;

    #[test]
    fn membership_round_trip() {
        let c = Chart::affine("R2", ["x", "y"]);
        let (x, y) = (c.coordinate(0), c.coordinate(1));
        let g = VectorField::new(&c, vec![x.clone(), y.clone()]).unwrap();
        let target = VectorField::new(&c, vec![&x * &y, &y * &y]).unwrap();
        let good = MembershipCertificate { power: 0, coefficients: vec![y.clone()] };
        let v = membership_certificate("y E in <E>", &target, std::slice::from_ref(&g), &Polynomial::one(2), &good);
        assert_eq!(verify_certificate(&v), Ok(true));
        let bad = MembershipCertificate { power: 0, coefficients: vec![x] };
        let v = membership_certificate("wrong", &target, &[g], &Polynomial::one(2), &bad);
        assert_eq!(verify_certificate(&v), Ok(false));
    }

    #[test]
    fn right_inverse_round_trip() {
        let c = Chart::affine("R2", ["x", "y"]);
        let l = Chart::affine("R", ["x"]);
        let pr = PolyMap::projection("pr1", &c, &l, &[0]).unwrap();
        let cert = pr.submersion_certificate(&[]).unwrap();
        let v = submersion_certificate("pr1", &pr, &cert).unwrap();
        assert_eq!(verify_certificate(&v), Ok(true));
        let mut tampered = v.clone();
        tampered["right_inverse"][0][0] = json!("2");
        assert_eq!(verify_certificate(&tampered), Ok(false));
    }

    #[test]
    fn malformed_certificates() {
        assert!(verify_certificate(&json!({"kind": "membership"})).is_err());
        let v = json!({"kind": "x", "vars": [], "h": "1", "power": 0});
        assert!(verify_certificate(&v).is_err());
    }
}
