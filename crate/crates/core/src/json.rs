//! JSON report schemas: fields, elements, period polynomials, operators, eigensystems and
//! congruence graphs. Scalars are decimal strings "num/den"; objects have sorted keys.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::arith::numfield::{Embedding, Field, NFElement, NumberField};
use crate::arith::rational::{format_rational, parse_rational};
use crate::congruence::{CandidateModulus, CongruenceGraph, PairingReport};
use crate::error::{Error, Result};
use crate::hecke::{Domain, HeckeOperator};
use crate::linalg::Matrix;
use crate::quad::QuadInt;
use crate::spectral::{EigenSystem, Label};
use crate::weight::dim;

pub const FORMAT_VERSION: u64 = 1;

fn bad(what: &str) -> Error {
    Error::Parse(format!("malformed JSON: {what}"))
}

pub fn field_to_json(f: &Field) -> Value {
    json!({
        "name": f.name(),
        "modulus": f.modulus().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    })
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    let name = v["name"].as_str().ok_or_else(|| bad("field name"))?;
    let modulus = v["modulus"]
        .as_array()
        .ok_or_else(|| bad("field modulus"))?
        .iter()
        .map(|c| {
            c.as_str()
                .and_then(|s| s.parse::<BigInt>().ok())
                .ok_or_else(|| bad("modulus coefficient"))
        })
        .collect::<Result<Vec<_>>>()?;
    NumberField::new(modulus, name)
}

pub fn element_to_json(x: &NFElement) -> Value {
    Value::Array(x.coords().iter().map(|c| Value::String(format_rational(c))).collect())
}

pub fn element_from_json(v: &Value, field: &Field) -> Result<NFElement> {
    let coords = v
        .as_array()
        .filter(|a| a.len() == field.degree())
        .ok_or_else(|| bad("element"))?
        .iter()
        .map(|c| parse_rational(c.as_str().ok_or_else(|| bad("coordinate"))?))
        .collect::<Result<Vec<_>>>()?;
    Ok(NFElement::from_coords(field, &coords))
}

pub fn matrix_to_json(rows: &[Vec<NFElement>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(element_to_json).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value, field: &Field) -> Result<Vec<Vec<NFElement>>> {
    v.as_array()
        .ok_or_else(|| bad("matrix"))?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| bad("matrix row"))?
                .iter()
                .map(|x| element_from_json(x, field))
                .collect()
        })
        .collect()
}

/// A coefficient vector in V_{k,k} with its context.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodPolynomial {
    pub d: u32,
    pub k: usize,
    pub field: Field,
    /// Row-major coefficients, flat index i(k+1)+j for X^{k−i}Y^i X̄^{k−j}Ȳ^j.
    pub coeffs: Vec<NFElement>,
}

pub fn polynomial_to_json(p: &PeriodPolynomial) -> Value {
    let rows: Vec<Vec<NFElement>> = p.coeffs.chunks(p.k + 1).map(|r| r.to_vec()).collect();
    json!({
        "d": p.d,
        "k": p.k,
        "field": field_to_json(&p.field),
        "coeffs": matrix_to_json(&rows),
    })
}

pub fn polynomial_from_json(v: &Value) -> Result<PeriodPolynomial> {
    let d = v["d"].as_u64().ok_or_else(|| bad("d"))? as u32;
    let k = v["k"].as_u64().ok_or_else(|| bad("k"))? as usize;
    let field = field_from_json(&v["field"])?;
    let rows = matrix_from_json(&v["coeffs"], &field)?;
    if rows.len() != k + 1 || rows.iter().any(|r| r.len() != k + 1) {
        return Err(bad("coefficient matrix shape"));
    }
    let coeffs: Vec<NFElement> = rows.into_iter().flatten().collect();
    debug_assert_eq!(coeffs.len(), dim(k));
    Ok(PeriodPolynomial { d, k, field, coeffs })
}

pub fn operator_to_json(op: &HeckeOperator) -> Value {
    json!({
        "d": op.d,
        "k": op.k,
        "prime": op.pi.to_literal(),
        "adjoint": op.adjoint,
        "domain": op.domain.to_string(),
        "field": field_to_json(&op.matrix.ctx),
        "rows": op.matrix.rows,
        "cols": op.matrix.cols,
        "matrix": matrix_to_json(&op.matrix.data),
    })
}

pub fn operator_from_json(v: &Value) -> Result<HeckeOperator> {
    let d = v["d"].as_u64().ok_or_else(|| bad("d"))? as u32;
    let k = v["k"].as_u64().ok_or_else(|| bad("k"))? as usize;
    let pi = QuadInt::parse(d, v["prime"].as_str().ok_or_else(|| bad("prime"))?)?;
    let adjoint = v["adjoint"].as_bool().ok_or_else(|| bad("adjoint"))?;
    let domain = Domain::parse(v["domain"].as_str().ok_or_else(|| bad("domain"))?)?;
    let field = field_from_json(&v["field"])?;
    let cols = v["cols"].as_u64().ok_or_else(|| bad("cols"))? as usize;
    let data = matrix_from_json(&v["matrix"], &field)?;
    Ok(HeckeOperator {
        d,
        k,
        pi,
        adjoint,
        domain,
        matrix: Matrix::from_rows(&field, cols, data),
    })
}

pub fn label_name(l: Label) -> &'static str {
    match l {
        Label::Eisenstein => "eisenstein",
        Label::BaseChangeCandidate => "base-change",
        Label::Genuine => "genuine",
    }
}

pub fn label_from_name(s: &str) -> Result<Label> {
    match s {
        "eisenstein" => Ok(Label::Eisenstein),
        "base-change" => Ok(Label::BaseChangeCandidate),
        "genuine" => Ok(Label::Genuine),
        _ => Err(bad("label")),
    }
}

pub fn eigensystem_to_json(s: &EigenSystem) -> Value {
    let eigenvalues: Vec<Value> = s
        .eigenvalues
        .iter()
        .map(|(pi, a)| {
            json!({
                "prime": pi.to_literal(),
                "norm": pi.norm().to_string(),
                "value": element_to_json(a),
            })
        })
        .collect();
    json!({
        "d": s.d,
        "k": s.k,
        "label": label_name(s.label),
        "field": field_to_json(&s.field),
        "omega_image": element_to_json(&s.k_embedding.image),
        "splitting_poly": s.splitting_poly.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "orbit": s.orbit,
        "orbit_degree": s.orbit_degree,
        "eigenvalues": eigenvalues,
        "plus_coords": Value::Array(s.plus_coords.iter().map(element_to_json).collect()),
        "eigenvector": polynomial_to_json(&PeriodPolynomial {
            d: s.d,
            k: s.k,
            field: s.field.clone(),
            coeffs: s.eigenvector.clone(),
        }),
    })
}

pub fn eigensystem_from_json(v: &Value) -> Result<EigenSystem> {
    let d = v["d"].as_u64().ok_or_else(|| bad("d"))? as u32;
    let k = v["k"].as_u64().ok_or_else(|| bad("k"))? as usize;
    let field = field_from_json(&v["field"])?;
    let kf = crate::quad::quadratic_field(d)?;
    let omega_image = element_from_json(&v["omega_image"], &field)?;
    let k_embedding = Embedding::new(&kf, &field, omega_image)?;
    let splitting_poly = v["splitting_poly"]
        .as_array()
        .ok_or_else(|| bad("splitting_poly"))?
        .iter()
        .map(|c| c.as_str().and_then(|s| s.parse::<BigInt>().ok()).ok_or_else(|| bad("coefficient")))
        .collect::<Result<Vec<_>>>()?;
    let eigenvalues = v["eigenvalues"]
        .as_array()
        .ok_or_else(|| bad("eigenvalues"))?
        .iter()
        .map(|e| {
            let pi = QuadInt::parse(d, e["prime"].as_str().ok_or_else(|| bad("prime"))?)?;
            Ok((pi, element_from_json(&e["value"], &field)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let plus_coords = v["plus_coords"]
        .as_array()
        .ok_or_else(|| bad("plus_coords"))?
        .iter()
        .map(|x| element_from_json(x, &field))
        .collect::<Result<Vec<_>>>()?;
    let eigenvector = polynomial_from_json(&v["eigenvector"])?.coeffs;
    Ok(EigenSystem {
        d,
        k,
        label: label_from_name(v["label"].as_str().ok_or_else(|| bad("label"))?)?,
        field,
        k_embedding,
        splitting_poly,
        orbit: v["orbit"].as_u64().ok_or_else(|| bad("orbit"))? as usize,
        orbit_degree: v["orbit_degree"].as_u64().ok_or_else(|| bad("orbit_degree"))? as usize,
        eigenvector,
        plus_coords,
        eigenvalues,
    })
}

/// Short names: E{k+2} for the Eisenstein line, BC1, BC2, ... and F1, F2, ... in system order.
pub fn system_names(systems: &[EigenSystem]) -> Vec<String> {
    let (mut bc, mut g) = (0, 0);
    systems
        .iter()
        .map(|s| match s.label {
            Label::Eisenstein => format!("E{}", s.k + 2),
            Label::BaseChangeCandidate => {
                bc += 1;
                format!("BC{bc}")
            }
            Label::Genuine => {
                g += 1;
                format!("F{g}")
            }
        })
        .collect()
}

fn factorization_to_json(f: &[(BigInt, i64)]) -> Value {
    Value::Array(f.iter().map(|(p, e)| json!([p.to_string(), e])).collect())
}

fn candidate_to_json(c: &CandidateModulus) -> Value {
    json!({
        "p": c.p.to_string(),
        "prime_norm": c.ideal.as_ref().map(|i| i.norm().to_string()),
        "valuation": c.valuation,
        "small_weight": c.small_weight,
    })
}

fn pairing_to_json(r: &PairingReport) -> Value {
    json!({
        "value": r.value.as_ref().map(element_to_json),
        "norm": format_rational(&r.norm),
        "factorization": factorization_to_json(&r.factorization),
        "candidates": r.candidates.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
    })
}

pub fn congruence_graph_to_json(d: u32, k: usize, norm_bound: u64, g: &CongruenceGraph) -> Value {
    let systems: Vec<EigenSystem> = g.normalized.iter().map(|n| n.system.clone()).collect();
    let names = system_names(&systems);
    let nodes: Vec<Value> = g
        .normalized
        .iter()
        .enumerate()
        .map(|(i, n)| {
            json!({
                "id": i,
                "name": names[i],
                "label": label_name(n.system.label),
                "field": field_to_json(&n.system.field),
                "orbit": n.system.orbit,
                "d": n.d.as_ref().map(format_rational),
                "d_norm": format_rational(&n.d_norm()),
                "r_multiplier": n.r_multiplier.as_ref().map(format_rational),
                "candidates": crate::congruence::candidate_moduli(n).iter().map(candidate_to_json).collect::<Vec<_>>(),
                "pairing": g.pairings[i].as_ref().map(pairing_to_json),
            })
        })
        .collect();
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|e| {
            let c = &e.certificate;
            json!({
                "f": names[e.f],
                "g": names[e.g],
                "p": c.prime.p.to_string(),
                "prime_norm": c.prime.norm().to_string(),
                "prime_model": field_to_json(&c.field),
                "unit": c.unit.coords().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "unit_int": c.unit_integer(),
                "scaling": format!("{:?}", c.scaling),
                "eigenvalue_checks": c.eigenvalue_checks.len(),
            })
        })
        .collect();
    json!({
        "format_version": FORMAT_VERSION,
        "d": d,
        "k": k,
        "norm_bound": norm_bound,
        "moduli": g.moduli.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "nodes": nodes,
        "edges": edges,
        "skipped": g.skipped.iter().map(|(f, h, p)| json!([names[*f], names[*h], p.to_string()])).collect::<Vec<_>>(),
    })
}

/// Serializes with a trailing newline; object keys are already sorted.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::scalar::Scalar;
    use crate::quad::quadratic_field;

    #[test]
    fn polynomial_round_trip() {
        let k = quadratic_field(11).unwrap();
        let w = NFElement::generator(&k);
        let mut coeffs = vec![NFElement::zero_in(&k); dim(2)];
        coeffs[0] = NFElement::from_int(&k, 1);
        coeffs[4] = w.mul_ref(&NFElement::rational(&k, &crate::arith::rational::rat(-3, 7)));
        let p = PeriodPolynomial { d: 11, k: 2, field: k, coeffs };
        let v = polynomial_to_json(&p);
        let text = to_string(&v);
        let back = polynomial_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, p);
        assert_eq!(to_string(&polynomial_to_json(&back)), text);
    }

    #[test]
    fn rationals_field_round_trip() {
        let q = NumberField::rationals();
        let back = field_from_json(&field_to_json(&q)).unwrap();
        assert_eq!(back, q);
    }
}
