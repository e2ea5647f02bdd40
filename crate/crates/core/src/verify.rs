//! Invariant checks for one (d, k): relators and conjugation identities on V_{k,k}, the
//! W ⊕ ker Φ decomposition, and Hecke operator identities for small primes.

use crate::arith::numfield::NFElement;
use crate::error::Result;
use crate::hecke::cache::HeilbronnCache;
use crate::hecke::{commute, operator, stabilises_kernel, Domain};
use crate::linalg::{charpoly, Matrix};
use crate::pipeline::{bundle, heilbronn_sets};
use crate::presentation::{conjugation_identities, fixed_space_triples, relators, table};
use crate::spaces::SpaceBundle;
use crate::weight::{action_matrix, GMatrix, QuadMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

fn acts_equal(a: &GMatrix, b: &GMatrix, k: usize, map: &QuadMap<NFElement>) -> Result<bool> {
    Ok(action_matrix(a, k, map)? == action_matrix(b, k, map)?)
}

/// Every relator acts as the identity, and the conjugation identities hold as matrix
/// identities on V_{k,k}.
pub fn presentation_checks(d: u32, k: usize, map: &QuadMap<NFElement>) -> Result<Vec<Check>> {
    let tab = table(d)?;
    let id = GMatrix::identity(d);
    let mut out = Vec::new();
    for r in relators(d)? {
        let g = r.word.eval(&tab)?;
        let ok = acts_equal(&g, &id, k, map)?;
        out.push(Check::new(format!("relator {} acts trivially", r.word), ok, ""));
    }
    for c in conjugation_identities(d)? {
        let ok = c.holds() && acts_equal(&c.lhs, &c.rhs, k, map)?;
        out.push(Check::new(format!("identity {}", c.name), ok, ""));
    }
    for (a, b, g) in fixed_space_triples(d)? {
        let conj = g.inverse()?.mul(&b).mul(&g);
        let ok = acts_equal(&conj, &a, k, map)?;
        out.push(Check::new("fixed-space transport V^A = V^B g", ok, ""));
    }
    Ok(out)
}

/// W = ker(Φ)^⊥, V = W ⊕ ker Φ, W^+ ⊆ W, and plain fixed spaces inside ker Φ.
pub fn space_checks(b: &SpaceBundle<NFElement>) -> Vec<Check> {
    let dims = format!("dim W = {}, dim ker = {}, dim W+ = {}", b.w.dim(), b.ker_phi.dim(), b.w_plus.dim());
    let dec = b.verify_decomposition();
    let fixed = b.check_fixed_vectors_in_kernel();
    vec![
        Check::new(
            "W = perp(ker Φ) and V = W ⊕ ker Φ",
            dec.is_ok(),
            dec.err().map(|e| e.to_string()).unwrap_or(dims),
        ),
        Check::new(
            "fixed vectors lie in ker Φ",
            fixed.is_ok(),
            fixed.err().map(|e| e.to_string()).unwrap_or_default(),
        ),
    ]
}

fn charpoly_string(p: &[NFElement]) -> String {
    p.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}

/// For every prime of norm ≤ `norm_bound`: the adjoint operator preserves W, the plain operator
/// preserves ker Φ, the operators on W commute with each other and with δ, and the adjoint
/// operator on W has the characteristic polynomial of the operator on V / ker Φ.
pub fn hecke_checks(b: &SpaceBundle<NFElement>, norm_bound: u64, cache: &HeilbronnCache) -> Result<Vec<Check>> {
    let sets = heilbronn_sets(b.d, norm_bound, cache)?;
    let mut out = Vec::new();
    let mut w_ops: Vec<(String, Matrix<NFElement>)> = Vec::new();
    for s in &sets {
        let name = s.pi.to_literal();
        let w_op = operator(b, s, true, Domain::W, true);
        out.push(Check::new(
            format!("T*({name}) preserves W"),
            w_op.is_ok(),
            w_op.as_ref().err().map(|e| e.to_string()).unwrap_or_default(),
        ));
        out.push(Check::new(
            format!("T({name}) preserves ker Φ"),
            stabilises_kernel(b, s, false),
            "",
        ));
        let Ok(w_op) = w_op else { continue };
        let q_op = operator(b, s, false, Domain::Quotient, false)?;
        let (cw, cq) = (charpoly(&w_op.matrix), charpoly(&q_op.matrix));
        let detail = if cw == cq { String::new() } else { format!("[{}] vs [{}]", charpoly_string(&cw), charpoly_string(&cq)) };
        out.push(Check::new(format!("charpoly T*({name}) on W = charpoly T({name}) on V/ker Φ"), cw == cq, detail));
        w_ops.push((name, w_op.matrix));
    }
    let delta = b.delta_on_w()?;
    for (i, (ni, mi)) in w_ops.iter().enumerate() {
        out.push(Check::new(format!("T*({ni}) commutes with δ"), commute(mi, &delta)?, ""));
        for (nj, mj) in &w_ops[i + 1..] {
            out.push(Check::new(format!("T*({ni}) commutes with T*({nj})"), commute(mi, mj)?, ""));
        }
    }
    Ok(out)
}

/// The full suite for one (d, k).
pub fn invariant_suite(d: u32, k: usize, norm_bound: u64, cache: &HeilbronnCache) -> Result<Vec<Check>> {
    let b = bundle(d, k)?;
    let mut out = presentation_checks(d, k, &b.map)?;
    out.extend(space_checks(&b));
    out.extend(hecke_checks(&b, norm_bound, cache)?);
    Ok(out)
}
