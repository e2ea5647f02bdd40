//! Heilbronn Hecke operators on V_{k,k}, on W, on the plus space and on V / ker Φ.

pub mod cache;
pub mod heilbronn;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;

use crate::arith::numfield::{Field, NFElement};
use crate::arith::scalar::Scalar;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::quad::QuadInt;
use crate::spaces::SpaceBundle;
use crate::weight::{rho_k, GMatrix};

pub use cache::HeilbronnCache;
pub use heilbronn::{heilbronn_set, manin_path, HeilbronnSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    V,
    W,
    WPlus,
    Quotient,
}

impl Domain {
    pub fn parse(s: &str) -> Result<Domain> {
        Ok(match s {
            "V" => Domain::V,
            "W" => Domain::W,
            "Wplus" => Domain::WPlus,
            "Q" => Domain::Quotient,
            _ => return Err(Error::Parse(format!("unknown domain {s}"))),
        })
    }

    /// W and the plus space carry the adjoint operators; V and the quotient the plain ones.
    pub fn default_adjoint(self) -> bool {
        matches!(self, Domain::W | Domain::WPlus)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::V => "V",
            Domain::W => "W",
            Domain::WPlus => "Wplus",
            Domain::Quotient => "Q",
        })
    }
}

#[derive(Clone, Debug)]
pub struct HeckeOperator {
    pub d: u32,
    pub k: usize,
    pub pi: QuadInt,
    pub adjoint: bool,
    pub domain: Domain,
    pub matrix: Matrix<NFElement>,
}

/// ρ_k(h) and ρ_k(conj h) with O_d entries.
#[derive(Clone, Debug)]
pub struct IntAction {
    pub left: Vec<Vec<QuadInt>>,
    pub right: Vec<Vec<QuadInt>>,
}

impl IntAction {
    pub fn new(g: &GMatrix, k: usize) -> Self {
        IntAction {
            left: rho_k(g, k),
            right: rho_k(&g.conj(), k),
        }
    }

    /// v·g for an integral coefficient vector.
    pub fn apply(&self, v: &[QuadInt], k: usize) -> Vec<QuadInt> {
        let n = k + 1;
        let d = v[0].d;
        let mut m1 = vec![QuadInt::zero(d); n * n];
        for i in 0..n {
            for j in 0..n {
                let c = &v[i * n + j];
                if c.is_zero() {
                    continue;
                }
                for jp in 0..n {
                    let b = &self.right[j][jp];
                    if !b.is_zero() {
                        m1[i * n + jp] = m1[i * n + jp].add(&c.mul(b));
                    }
                }
            }
        }
        let mut out = vec![QuadInt::zero(d); n * n];
        for i in 0..n {
            for ip in 0..n {
                let a = &self.left[i][ip];
                if a.is_zero() {
                    continue;
                }
                for jp in 0..n {
                    let m = &m1[i * n + jp];
                    if !m.is_zero() {
                        out[ip * n + jp] = out[ip * n + jp].add(&a.mul(m));
                    }
                }
            }
        }
        out
    }

    /// Selected coordinates of v·g.
    pub fn apply_at(&self, v: &[QuadInt], k: usize, positions: &[usize]) -> Vec<QuadInt> {
        let n = k + 1;
        let d = v[0].d;
        positions
            .iter()
            .map(|&p| {
                let (ip, jp) = (p / n, p % n);
                let mut acc = QuadInt::zero(d);
                for i in 0..n {
                    let a = &self.left[i][ip];
                    if a.is_zero() {
                        continue;
                    }
                    let mut inner = QuadInt::zero(d);
                    for j in 0..n {
                        let c = &v[i * n + j];
                        let b = &self.right[j][jp];
                        if !c.is_zero() && !b.is_zero() {
                            inner = inner.add(&c.mul(b));
                        }
                    }
                    acc = acc.add(&a.mul(&inner));
                }
                acc
            })
            .collect()
    }
}

/// Clears denominators: v = w / den with w integral.
pub fn to_integral(v: &[NFElement], d: u32) -> (Vec<QuadInt>, BigInt) {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denominator()));
    let w = v
        .iter()
        .map(|x| {
            let s = &den / x.denominator();
            let n = x.numerators();
            QuadInt::new(d, &n[0] * &s, &n[1] * &s)
        })
        .collect();
    (w, den)
}

pub fn from_integral(v: &[QuadInt], den: &BigInt, field: &Field) -> Vec<NFElement> {
    v.iter()
        .map(|q| NFElement::from_integers(field, vec![q.x.clone(), q.y.clone()], den.clone()))
        .collect()
}

fn sum_vectors(a: Vec<QuadInt>, b: Vec<QuadInt>) -> Vec<QuadInt> {
    a.iter().zip(&b).map(|(x, y)| x.add(y)).collect()
}

/// The actions of H_π (or of its adjugates).
pub fn heilbronn_actions(set: &HeilbronnSet, k: usize, adjoint: bool) -> Vec<IntAction> {
    set.matrices
        .par_iter()
        .map(|h| IntAction::new(&if adjoint { h.iota() } else { h.clone() }, k))
        .collect()
}

/// v · Σ_h ρ(h).
pub fn apply_sum(v: &[NFElement], acts: &[IntAction], k: usize, d: u32, field: &Field) -> Vec<NFElement> {
    let (w, den) = to_integral(v, d);
    let zero = vec![QuadInt::zero(d); v.len()];
    let total = acts
        .par_iter()
        .map(|a| a.apply(&w, k))
        .reduce(|| zero.clone(), sum_vectors);
    from_integral(&total, &den, field)
}

/// Selected coordinates of v · Σ_h ρ(h).
pub fn apply_sum_at(
    v: &[NFElement],
    acts: &[IntAction],
    k: usize,
    d: u32,
    field: &Field,
    positions: &[usize],
) -> Vec<NFElement> {
    let (w, den) = to_integral(v, d);
    let zero = vec![QuadInt::zero(d); positions.len()];
    let total = acts
        .par_iter()
        .map(|a| a.apply_at(&w, k, positions))
        .reduce(|| zero.clone(), sum_vectors);
    from_integral(&total, &den, field)
}

/// Full (k+1)^2 matrix Σ_h ρ(h) ⊗ ρ(conj h).
pub fn full_matrix(acts: &[IntAction], k: usize, d: u32, field: &Field) -> Matrix<NFElement> {
    let n = k + 1;
    let nn = n * n;
    let zero = vec![QuadInt::zero(d); nn * nn];
    let total = acts
        .par_iter()
        .map(|a| {
            let mut m = vec![QuadInt::zero(d); nn * nn];
            for i in 0..n {
                for ip in 0..n {
                    let x = &a.left[i][ip];
                    if x.is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        for jp in 0..n {
                            let y = &a.right[j][jp];
                            if !y.is_zero() {
                                let idx = (i * n + j) * nn + ip * n + jp;
                                m[idx] = m[idx].add(&x.mul(y));
                            }
                        }
                    }
                }
            }
            m
        })
        .reduce(|| zero.clone(), sum_vectors);
    let one = BigInt::one();
    let rows = total
        .chunks(nn)
        .map(|r| from_integral(r, &one, field))
        .collect();
    Matrix::from_rows(field, nn, rows)
}

/// Matrix of v ↦ v·T on a subspace known (or checked) to be stable.
pub fn restrict_to(
    space: &Subspace<NFElement>,
    acts: &[IntAction],
    k: usize,
    d: u32,
    check_stability: bool,
) -> Result<Matrix<NFElement>> {
    let field = &space.ctx;
    let mut rows = Vec::with_capacity(space.dim());
    for v in &space.basis {
        if check_stability {
            let img = apply_sum(v, acts, k, d, field);
            let c = space
                .coordinates(&img)
                .ok_or_else(|| Error::DomainNotStable("Hecke image leaves the subspace".into()))?;
            rows.push(c);
        } else {
            rows.push(apply_sum_at(v, acts, k, d, field, &space.pivots));
        }
    }
    Ok(Matrix::from_rows(field, space.dim(), rows))
}

/// Norm bound up to which restricted operators are checked for stability by default.
pub const STABILITY_CHECK_NORM: u64 = 11;

pub fn operator(
    bundle: &SpaceBundle<NFElement>,
    set: &HeilbronnSet,
    adjoint: bool,
    domain: Domain,
    check_stability: bool,
) -> Result<HeckeOperator> {
    let (d, k) = (bundle.d, bundle.k);
    if set.d != d {
        return Err(Error::FieldMismatch);
    }
    let field = bundle.ctx();
    let acts = heilbronn_actions(set, k, adjoint);
    let matrix = match domain {
        Domain::V => full_matrix(&acts, k, d, field),
        Domain::W => restrict_to(&bundle.w, &acts, k, d, check_stability)?,
        Domain::WPlus => restrict_to(&bundle.w_plus, &acts, k, d, check_stability)?,
        Domain::Quotient => {
            let rows = bundle
                .w
                .basis
                .iter()
                .map(|w| bundle.project(&apply_sum(w, &acts, k, d, field)))
                .collect();
            Matrix::from_rows(field, bundle.quotient_dim(), rows)
        }
    };
    Ok(HeckeOperator {
        d,
        k,
        pi: set.pi.clone(),
        adjoint,
        domain,
        matrix,
    })
}

/// Whether T maps ker Φ into itself.
pub fn stabilises_kernel(bundle: &SpaceBundle<NFElement>, set: &HeilbronnSet, adjoint: bool) -> bool {
    let acts = heilbronn_actions(set, bundle.k, adjoint);
    bundle.ker_phi.basis.par_iter().all(|v| {
        let img = apply_sum(v, &acts, bundle.k, bundle.d, bundle.ctx());
        bundle.project(&img).iter().all(|x| x.eq_zero())
    })
}

/// Scalar matrix helper used by callers comparing operators.
pub fn commute(a: &Matrix<NFElement>, b: &Matrix<NFElement>) -> Result<bool> {
    Ok(a.mul(b)? == b.mul(a)?)
}

pub fn is_zero_matrix(m: &Matrix<NFElement>) -> bool {
    m.data.iter().all(|r| r.iter().all(|x| x.eq_zero()))
}

