//! Simultaneous eigen-decomposition of the adjoint Hecke operators on the plus space.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::factor::factor_z;
use crate::arith::numfield::{compositum_over, roots_in_field, Embedding, Field, NFElement, NumberField};
use crate::arith::poly::{q_to_primitive_z, ZPoly};
use crate::arith::rational::Rational;
use crate::arith::scalar::Scalar;
use crate::error::{Error, Result};
use crate::linalg::{charpoly, eval_poly_matrix, vec_mat, Matrix, Subspace};
use crate::quad::{quadratic_field, QuadInt};
use crate::spaces::SpaceBundle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Eisenstein,
    BaseChangeCandidate,
    Genuine,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Eisenstein => "eisenstein",
            Label::BaseChangeCandidate => "base-change candidate",
            Label::Genuine => "genuine",
        })
    }
}

#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub d: u32,
    pub k: usize,
    pub label: Label,
    /// Coefficient field H ⊇ K.
    pub field: Field,
    /// K → H.
    pub k_embedding: Embedding,
    /// Irreducible integer polynomial whose root generates the eigenvalue at the splitting prime.
    pub splitting_poly: ZPoly,
    /// Index of the Galois orbit this system belongs to, and [H : K] for that orbit.
    pub orbit: usize,
    pub orbit_degree: usize,
    /// Eigenvector in V_{k,k}(H).
    pub eigenvector: Vec<NFElement>,
    /// Coordinates of the eigenvector in the echelon basis of W^+.
    pub plus_coords: Vec<NFElement>,
    pub eigenvalues: Vec<(QuadInt, NFElement)>,
}

impl EigenSystem {
    pub fn eigenvalue(&self, pi: &QuadInt) -> Option<&NFElement> {
        self.eigenvalues.iter().find(|(p, _)| p == pi).map(|(_, a)| a)
    }

    pub fn is_rational(&self) -> bool {
        self.eigenvalues.iter().all(|(_, a)| a.as_rational().is_some())
    }
}

/// Matrix over Q of an m×m matrix over a number field of degree n, acting on row vectors with
/// respect to the Q-basis θ^s e_i (index i*n + s).
pub fn restrict_scalars(m: &Matrix<NFElement>) -> Matrix<Rational> {
    let field = &m.ctx;
    let n = field.degree();
    let gen = NFElement::generator(field);
    let mut rows = Vec::with_capacity(m.rows * n);
    for i in 0..m.rows {
        let mut power = NFElement::one_in(field);
        for _ in 0..n {
            let mut row = vec![Rational::zero(); m.cols * n];
            for j in 0..m.cols {
                let c = power.mul_ref(&m.data[i][j]).coords();
                for (t, x) in c.into_iter().enumerate() {
                    row[j * n + t] = x;
                }
            }
            rows.push(row);
            power = power.mul_ref(&gen);
        }
    }
    Matrix::from_rows(&(), m.cols * n, rows)
}

/// Irreducible factors (with multiplicity) of the characteristic polynomial of the restriction
/// of scalars of `m`.
pub fn rational_charpoly_factors(m: &Matrix<NFElement>) -> Vec<(ZPoly, u32)> {
    let cp = charpoly(&restrict_scalars(m));
    factor_z(&q_to_primitive_z(&cp)).1
}

fn zpoly_in(p: &[BigInt], field: &Field) -> Vec<NFElement> {
    p.iter()
        .map(|c| NFElement::rational(field, &Rational::from_integer(c.clone())))
        .collect()
}

fn restrict_piece(piece: &Subspace<NFElement>, m: &Matrix<NFElement>) -> Result<Matrix<NFElement>> {
    piece.restrict(|v| vec_mat(v, m))
}

#[derive(Clone, Debug)]
struct Piece {
    space: Subspace<NFElement>,
    final_data: Option<(ZPoly, usize)>,
}

/// A field containing K and a root of q, with the root.
fn field_with_root(k: &Field, q: &ZPoly) -> Result<(Field, Embedding, NFElement)> {
    if q.len() == 2 {
        let r = Rational::new(-q[0].clone(), q[1].clone());
        return Ok((k.clone(), Embedding::identity(k), NFElement::rational(k, &r)));
    }
    let qf = NumberField::new(q.clone(), "y")?;
    // identify the rational numbers of both fields: any compositum works
    let one_k = NFElement::one_in(k);
    let one_q = NFElement::one_in(&qf);
    let c = compositum_over(k, &qf, &one_k, &one_q, "z")?;
    let root = c.right.image.clone();
    Ok((c.field.clone(), c.left, root))
}

fn map_matrix(m: &Matrix<NFElement>, emb: &Embedding) -> Matrix<NFElement> {
    m.map(&emb.target, |x| emb.apply(x))
}

fn eigenline(m: &Matrix<NFElement>, lambda: &NFElement) -> Subspace<NFElement> {
    let n = m.rows;
    let shifted = m.sub(&Matrix::identity(&m.ctx, n).scale(lambda)).expect("square");
    shifted.left_kernel()
}

/// Splits W^+ into joint eigenlines of the given operators (ordered primes, matrices on the
/// echelon basis of W^+).
pub fn eigensystems(bundle: &SpaceBundle<NFElement>, ops: &[(QuadInt, Matrix<NFElement>)]) -> Result<Vec<EigenSystem>> {
    let kf = quadratic_field(bundle.d)?;
    let m = bundle.w_plus.dim();
    if ops.is_empty() {
        return Err(Error::UnsplitSpace("no operators supplied".into()));
    }
    let mut pieces = vec![Piece {
        space: Subspace::full(&kf, m),
        final_data: None,
    }];
    for (_, op) in ops {
        let mut next = Vec::new();
        for piece in pieces {
            if piece.final_data.is_some() {
                next.push(piece);
                continue;
            }
            let mp = restrict_piece(&piece.space, op)?;
            let factors = rational_charpoly_factors(&mp);
            if factors.len() > 1 {
                let mut total = 0;
                for (q, _) in &factors {
                    let qm = eval_poly_matrix(&zpoly_in(q, &kf), &mp);
                    let ker = qm.left_kernel();
                    let rows = ker.basis.iter().map(|c| piece.space.combine(c)).collect();
                    let sub = Subspace::from_rows(&kf, m, rows);
                    total += sub.dim();
                    next.push(Piece {
                        space: sub,
                        final_data: None,
                    });
                }
                if total != piece.space.dim() {
                    return Err(Error::UnsplitSpace("operator is not semisimple on a piece".into()));
                }
            } else {
                next.push(piece);
            }
        }
        pieces = next;
        // mark pieces whose eigenline over the field of one root is one-dimensional
        for piece in pieces.iter_mut().filter(|p| p.final_data.is_none()) {
            let mp = restrict_piece(&piece.space, op)?;
            let factors = rational_charpoly_factors(&mp);
            if factors.len() != 1 {
                continue;
            }
            let q = factors[0].0.clone();
            let (h, emb, root) = field_with_root(&kf, &q)?;
            if eigenline(&map_matrix(&mp, &emb), &root).dim() == 1 {
                let _ = h;
                let pos = ops.iter().position(|(_, o)| std::ptr::eq(o, op)).unwrap();
                piece.final_data = Some((q, pos));
            }
        }
    }
    if let Some(p) = pieces.iter().find(|p| p.final_data.is_none()) {
        return Err(Error::UnsplitSpace(format!(
            "a piece of dimension {} is not split by the given primes",
            p.space.dim()
        )));
    }
    pieces.sort_by(|a, b| {
        let (qa, qb) = (&a.final_data.as_ref().unwrap().0, &b.final_data.as_ref().unwrap().0);
        qa.len().cmp(&qb.len()).then_with(|| qa.iter().rev().cmp(qb.iter().rev()))
    });

    let mut systems = Vec::new();
    for (orbit, piece) in pieces.iter().enumerate() {
        let (q, pos) = piece.final_data.clone().unwrap();
        let mp = restrict_piece(&piece.space, &ops[pos].1)?;
        let (h, emb, _) = field_with_root(&kf, &q)?;
        let mph = map_matrix(&mp, &emb);
        let mut found = 0;
        for root in roots_in_field(&q, &h)? {
            let line = eigenline(&mph, &root);
            if line.dim() != 1 {
                continue;
            }
            found += 1;
            let piece_coords = &line.basis[0];
            let piece_basis: Vec<Vec<NFElement>> = piece
                .space
                .basis
                .iter()
                .map(|r| r.iter().map(|x| emb.apply(x)).collect())
                .collect();
            let plus_coords = vec_mat(piece_coords, &Matrix::from_rows(&h, m, piece_basis));
            let plus_basis: Vec<Vec<NFElement>> = bundle
                .w_plus
                .basis
                .iter()
                .map(|r| r.iter().map(|x| emb.apply(x)).collect())
                .collect();
            let eigenvector = vec_mat(&plus_coords, &Matrix::from_rows(&h, bundle.ambient(), plus_basis));
            let mut eigenvalues = Vec::new();
            for (pi, op) in ops {
                let image = vec_mat(&plus_coords, &map_matrix(op, &emb));
                let a = eigenvalue_of(&plus_coords, &image)?;
                eigenvalues.push((pi.clone(), a));
            }
            systems.push(EigenSystem {
                d: bundle.d,
                k: bundle.k,
                label: Label::Genuine,
                field: h.clone(),
                k_embedding: emb.clone(),
                splitting_poly: q.clone(),
                orbit,
                orbit_degree: piece.space.dim(),
                eigenvector,
                plus_coords,
                eigenvalues,
            });
        }
        if found != piece.space.dim() {
            return Err(Error::UnsplitSpace(format!(
                "orbit of dimension {} produced {found} eigenlines",
                piece.space.dim()
            )));
        }
    }
    for s in systems.iter_mut() {
        s.label = classify(s);
    }
    Ok(systems)
}

/// a with image = a·v, verified on every coordinate.
pub fn eigenvalue_of(v: &[NFElement], image: &[NFElement]) -> Result<NFElement> {
    let p = v.iter().position(|x| !x.eq_zero()).ok_or(Error::ZeroReduction)?;
    let a = image[p].div_ref(&v[p])?;
    for (x, y) in v.iter().zip(image) {
        if x.mul_ref(&a) != *y {
            return Err(Error::UnsplitSpace("vector is not an eigenvector".into()));
        }
    }
    Ok(a)
}

fn classify(s: &EigenSystem) -> Label {
    let eis = s.eigenvalues.iter().all(|(pi, a)| {
        let n = pi.norm();
        let target = num_traits::pow::pow(n, s.k + 1) + BigInt::one();
        a.as_rational() == Some(Rational::from_integer(target))
    });
    if eis {
        return Label::Eisenstein;
    }
    let mut base_change = true;
    for (pi, a) in &s.eigenvalues {
        let conj = pi.conj();
        if conj.is_associate(pi) {
            if a.as_rational().is_none() {
                base_change = false;
            }
        } else if let Some(b) = s.eigenvalues.iter().find(|(p, _)| p.is_associate(&conj)).map(|(_, b)| b) {
            if a != b {
                base_change = false;
            }
        }
    }
    if base_change {
        Label::BaseChangeCandidate
    } else {
        Label::Genuine
    }
}

/// Applies the automorphism of H that fixes K and moves the eigenvalues, if there is one.
pub fn conjugate_system(s: &EigenSystem) -> Result<EigenSystem> {
    if s.is_rational() {
        return Ok(s.clone());
    }
    let kf = &s.k_embedding.source;
    let w = s.k_embedding.apply(&NFElement::generator(kf));
    let sigma = crate::arith::numfield::automorphisms(&s.field)?
        .into_iter()
        .filter(|a| *a != Embedding::identity(&s.field) && a.apply(&w) == w)
        .find(|a| s.eigenvalues.iter().any(|(_, x)| a.apply(x) != *x))
        .ok_or(Error::NoAutomorphism)?;
    let mut out = s.clone();
    out.eigenvector = s.eigenvector.iter().map(|x| sigma.apply(x)).collect();
    out.plus_coords = s.plus_coords.iter().map(|x| sigma.apply(x)).collect();
    out.eigenvalues = s.eigenvalues.iter().map(|(p, a)| (p.clone(), sigma.apply(a))).collect();
    Ok(out)
}

/// Whether two systems have the same eigenvalues at every shared prime.
pub fn same_eigenvalues(a: &EigenSystem, b: &EigenSystem) -> bool {
    a.field == b.field
        && a.eigenvalues.len() == b.eigenvalues.len()
        && a.eigenvalues.iter().zip(&b.eigenvalues).all(|(x, y)| x == y)
}

/// Sum over Galois orbits of [coefficient field : K]; equals dim_K W^+ after a full split.
pub fn orbit_dimension_total(systems: &[EigenSystem]) -> usize {
    let mut seen = Vec::new();
    let mut total = 0;
    for s in systems {
        if !seen.contains(&s.orbit) {
            seen.push(s.orbit);
            total += s.orbit_degree;
        }
    }
    total
}

