//! Normalization of eigen-polynomials, fractional-ideal contents, candidate moduli, projective
//! congruence certificates and the pairing report.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::finite_field::FFElement;
use crate::arith::integer::factor_integer;
use crate::arith::numfield::{Embedding, Field, NFElement, NumberField};
use crate::arith::poly::ZPoly;
use crate::arith::rational::{int_valuation, Rational};
use crate::arith::scalar::Scalar;
use crate::error::{Error, Result};
use crate::linalg::{rref_rows, vec_mat, vec_sub, Matrix, Subspace};
use crate::quad::ideal::{is_regular, primes_above, PrimeIdeal};
use crate::quad::order::MaximalOrder;
use crate::quad::QuadInt;
use crate::spaces::SpaceBundle;
use crate::spectral::{EigenSystem, Label};
use crate::weight::{dim, index, pairing};

/// Local part of a fractional ideal content at one rational prime.
#[derive(Clone, Debug)]
pub struct LocalContent {
    pub p: BigInt,
    /// Valuations at every prime above p, when p is regular for the equation order.
    pub primes: Vec<(PrimeIdeal, i64)>,
    /// t such that the local part equals p^t O, when it is the extension of a rational ideal.
    pub rational_exponent: Option<i64>,
    /// v_p of the absolute norm of the local part.
    pub norm_exponent: i64,
}

/// The fractional ideal generated by a finite set of field elements, described prime by prime.
/// Primes not listed have valuation zero.
#[derive(Clone, Debug)]
pub struct Content {
    pub field: Field,
    pub locals: Vec<LocalContent>,
    /// The nonzero generators.
    pub gens: Vec<NFElement>,
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

fn rational_norm_valuation(r: &Rational, p: &BigInt) -> i64 {
    int_valuation(r.numer(), p) as i64 - int_valuation(r.denom(), p) as i64
}

/// Largest t with x / p^t integral at p, read off the characteristic polynomial.
fn integrality_exponent(x: &NFElement, p: &BigInt) -> i64 {
    let cp = x.charpoly();
    let n = cp.len() - 1;
    let mut t = i64::MAX;
    for (j, c) in cp.iter().enumerate().take(n) {
        if c.is_zero() {
            continue;
        }
        t = t.min(floor_div(rational_norm_valuation(c, p), (n - j) as i64));
    }
    t
}

fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    if n.abs() <= BigInt::one() {
        return Vec::new();
    }
    factor_integer(&n.abs()).into_iter().map(|(p, _)| p).collect()
}

impl Content {
    /// Content of the nonzero elements of `xs`.
    pub fn of(field: &Field, xs: &[NFElement]) -> Result<Content> {
        let xs: Vec<&NFElement> = xs.iter().filter(|x| !x.eq_zero()).collect();
        if xs.is_empty() {
            return Err(Error::ZeroReduction);
        }
        let mut den = BigInt::one();
        let mut g = BigInt::zero();
        for x in &xs {
            den = den.lcm(x.denominator());
            g = g.gcd(x.norm().numer());
        }
        let mut ps: Vec<BigInt> = prime_factors(&den);
        ps.extend(prime_factors(&g));
        ps.sort();
        ps.dedup();
        let mut locals = Vec::new();
        for p in ps {
            let local = local_content(field, &xs, &p)?;
            if local.norm_exponent != 0 || local.primes.iter().any(|(_, v)| *v != 0) {
                locals.push(local);
            }
        }
        Ok(Content {
            field: field.clone(),
            locals,
            gens: xs.into_iter().cloned().collect(),
        })
    }

    /// Absolute norm of the ideal.
    pub fn norm(&self) -> Rational {
        self.locals.iter().fold(Rational::one(), |acc, l| {
            let e = l.norm_exponent;
            let pe = Rational::from_integer(num_traits::pow(l.p.clone(), e.unsigned_abs() as usize));
            if e >= 0 {
                acc * pe
            } else {
                acc / pe
            }
        })
    }

    /// The positive rational generator, when the ideal is the extension of a rational ideal.
    pub fn rational_generator(&self) -> Option<Rational> {
        let mut r = Rational::one();
        for l in &self.locals {
            let t = l.rational_exponent?;
            let pe = Rational::from_integer(num_traits::pow(l.p.clone(), t.unsigned_abs() as usize));
            r = if t >= 0 { r * pe } else { r / pe };
        }
        Some(r)
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.locals.is_empty()
    }

    /// Primes of positive valuation, and rational primes (with the norm exponent of the local
    /// part) where the equation order is irregular and the local part has positive norm.
    pub fn positive_part(&self) -> (Vec<(PrimeIdeal, i64)>, Vec<(BigInt, i64)>) {
        let mut ideals = Vec::new();
        let mut rational = Vec::new();
        for l in &self.locals {
            if l.primes.is_empty() {
                if l.norm_exponent > 0 {
                    rational.push((l.p.clone(), l.norm_exponent));
                }
            } else {
                ideals.extend(l.primes.iter().filter(|(_, v)| *v > 0).cloned());
            }
        }
        (ideals, rational)
    }

    /// Whether `x` generates this ideal, compared as lattices over the maximal order.
    pub fn is_generated_by(&self, x: &NFElement) -> Result<bool> {
        if x.eq_zero() || x.norm().abs() != self.norm() {
            return Ok(false);
        }
        let o = MaximalOrder::of(&self.field)?;
        Ok(o.ideal(&self.gens)? == o.ideal(std::slice::from_ref(x))?)
    }
}

fn local_content(field: &Field, xs: &[&NFElement], p: &BigInt) -> Result<LocalContent> {
    let pu = p.to_u64();
    if let Some(pu) = pu.filter(|&q| is_regular(field, q)) {
        let mut primes = Vec::new();
        for pr in primes_above(pu, field)? {
            let mut v = i64::MAX;
            for x in xs {
                v = v.min(pr.valuation(x)?);
            }
            primes.push((pr, v));
        }
        let rational_exponent = {
            let (first, v0) = (&primes[0].0, primes[0].1);
            let e0 = first.ramification as i64;
            if v0 % e0 == 0 && primes.iter().all(|(pr, v)| *v == (v0 / e0) * pr.ramification as i64) {
                Some(v0 / e0)
            } else {
                None
            }
        };
        let norm_exponent = primes.iter().map(|(pr, v)| pr.residue_degree as i64 * v).sum();
        return Ok(LocalContent {
            p: p.clone(),
            primes,
            rational_exponent,
            norm_exponent,
        });
    }
    let n = field.degree() as i64;
    if let Some(t) = rational_local_exponent(field, xs, p) {
        return Ok(LocalContent {
            p: p.clone(),
            primes: Vec::new(),
            rational_exponent: Some(t),
            norm_exponent: n * t,
        });
    }
    let gens: Vec<NFElement> = xs.iter().map(|x| (*x).clone()).collect();
    let norm = MaximalOrder::of(field)?.ideal_norm(&gens)?;
    Ok(LocalContent {
        p: p.clone(),
        primes: Vec::new(),
        rational_exponent: None,
        norm_exponent: rational_norm_valuation(&norm, p),
    })
}

/// At an irregular prime: the exponent t with content = p^t locally, certified by integrality
/// of every x / p^t and a witness in the content whose norm is a p-unit after scaling.
fn rational_local_exponent(field: &Field, xs: &[&NFElement], p: &BigInt) -> Option<i64> {
    let n = field.degree() as i64;
    let t = xs.iter().map(|x| integrality_exponent(x, p)).min().unwrap();
    let is_witness = |x: &NFElement| !x.eq_zero() && rational_norm_valuation(&x.norm(), p) == n * t;
    if xs.iter().any(|x| is_witness(x)) {
        return Some(t);
    }
    let theta = NFElement::generator(field);
    let pool: Vec<&NFElement> = xs.iter().take(40).copied().collect();
    for (i, a) in pool.iter().enumerate() {
        for b in pool.iter().skip(i + 1) {
            for mult in [NFElement::one_in(field), theta.clone()] {
                let c = a.add_ref(&b.mul_ref(&mult));
                if is_witness(&c) {
                    return Some(t);
                }
            }
        }
    }
    None
}

/// Eigen-polynomial data scaled as in the congruence method.
#[derive(Clone, Debug)]
pub struct NormalizedEigenData {
    pub system: EigenSystem,
    /// Flat index of the coefficient scaled to 1; 0 unless the (0,0) coefficient vanishes.
    pub leading_index: usize,
    pub degenerate_leading: bool,
    pub empty_middle: bool,
    /// The eigenvector scaled so that the leading coefficient is 1.
    pub p: Vec<NFElement>,
    /// Content of the middle coefficients of `p`.
    pub middle_content: Option<Content>,
    /// Generator of the middle content when it is rational (1 when the middle is empty).
    pub d: Option<Rational>,
    /// p / D, when D is available.
    pub r: Option<Vec<NFElement>>,
    /// Content of all coefficients of `p`.
    pub full_content: Content,
    /// Rational m with m·p of unit content, when the full content is rational.
    pub r_multiplier: Option<Rational>,
    /// m·p, integrally scaled with unit content.
    pub big_r: Option<Vec<NFElement>>,
}

fn middle_indices(k: usize) -> impl Iterator<Item = usize> {
    let last = index(k, k, k);
    (0..dim(k)).filter(move |&i| i != 0 && i != last)
}

fn scale_vec(v: &[NFElement], c: &NFElement) -> Vec<NFElement> {
    v.iter().map(|x| x.mul_ref(c)).collect()
}

fn rational_in(field: &Field, r: &Rational) -> NFElement {
    NFElement::rational(field, r)
}

pub fn normalize(system: &EigenSystem) -> Result<NormalizedEigenData> {
    let field = system.field.clone();
    let v = &system.eigenvector;
    let k = system.k;
    let (leading_index, degenerate_leading) = if !v[0].eq_zero() {
        (0, false)
    } else {
        let i = v.iter().position(|x| !x.eq_zero()).ok_or(Error::ZeroReduction)?;
        (i, true)
    };
    let p = scale_vec(v, &v[leading_index].inv()?);
    let middle: Vec<NFElement> = middle_indices(k).map(|i| p[i].clone()).filter(|x| !x.eq_zero()).collect();
    let full_content = Content::of(&field, &p)?;
    let r_multiplier = full_content.rational_generator().map(|g| g.recip());
    let big_r = r_multiplier.as_ref().map(|m| scale_vec(&p, &rational_in(&field, m)));
    if middle.is_empty() {
        return Ok(NormalizedEigenData {
            system: system.clone(),
            leading_index,
            degenerate_leading,
            empty_middle: true,
            middle_content: None,
            d: Some(Rational::one()),
            r: Some(p.clone()),
            p,
            full_content,
            r_multiplier,
            big_r,
        });
    }
    let content = Content::of(&field, &middle)?;
    let d = content.rational_generator();
    let r = d.as_ref().map(|d| scale_vec(&p, &rational_in(&field, &d.recip())));
    Ok(NormalizedEigenData {
        system: system.clone(),
        leading_index,
        degenerate_leading,
        empty_middle: false,
        p,
        middle_content: Some(content),
        d,
        r,
        full_content,
        r_multiplier,
        big_r,
    })
}

impl NormalizedEigenData {
    /// Norm of the middle content (the norm of D up to sign).
    pub fn d_norm(&self) -> Rational {
        self.middle_content.as_ref().map(|c| c.norm()).unwrap_or_else(Rational::one)
    }

    /// r = p / D for a candidate generator D of the middle content; fails if D does not
    /// generate it.
    pub fn r_with_generator(&self, d: &NFElement) -> Result<Vec<NFElement>> {
        let ok = match &self.middle_content {
            Some(c) => c.is_generated_by(d)?,
            None => d.eq_one(),
        };
        if !ok {
            return Err(Error::RecipeViolation("element does not generate the middle content".into()));
        }
        Ok(scale_vec(&self.p, &d.inv()?))
    }
}

/// A prime dividing the denominator of the leading coefficient of r.
#[derive(Clone, Debug)]
pub struct CandidateModulus {
    pub p: BigInt,
    /// The prime ideal, when p is regular for the equation order.
    pub ideal: Option<PrimeIdeal>,
    pub valuation: i64,
    /// Residue characteristic at most k + 2.
    pub small_weight: bool,
}

pub fn candidate_moduli(data: &NormalizedEigenData) -> Vec<CandidateModulus> {
    let Some(c) = &data.middle_content else {
        return Vec::new();
    };
    let bound = BigInt::from(data.system.k + 2);
    let (ideals, rational) = c.positive_part();
    let mut out: Vec<CandidateModulus> = ideals
        .into_iter()
        .map(|(pr, v)| CandidateModulus {
            p: BigInt::from(pr.p),
            small_weight: BigInt::from(pr.p) <= bound,
            ideal: Some(pr),
            valuation: v,
        })
        .collect();
    out.extend(rational.into_iter().map(|(p, t)| CandidateModulus {
        small_weight: p <= bound,
        p,
        ideal: None,
        valuation: t,
    }));
    out
}

/// A field holding both systems, with embeddings of each coefficient field.
pub fn common_field(f: &EigenSystem, g: &EigenSystem) -> Result<(Field, Embedding, Embedding)> {
    let is_base = |s: &EigenSystem| s.k_embedding.source == s.k_embedding.target;
    if f.field == g.field {
        return Ok((f.field.clone(), Embedding::identity(&f.field), Embedding::identity(&g.field)));
    }
    if is_base(f) && f.field == g.k_embedding.source {
        return Ok((g.field.clone(), g.k_embedding.clone(), Embedding::identity(&g.field)));
    }
    if is_base(g) && g.field == f.k_embedding.source {
        return Ok((f.field.clone(), Embedding::identity(&f.field), f.k_embedding.clone()));
    }
    Err(Error::FieldMismatch)
}

/// How the vectors were scaled before reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scaling {
    /// The integrally scaled vectors R with unit content.
    UnitContent,
    /// Division by a coefficient of minimal valuation at the prime.
    MinimalValuation,
}

#[derive(Clone, Debug)]
pub struct EigenvalueCheck {
    pub pi: QuadInt,
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct CongruenceCertificate {
    pub f_label: Label,
    pub g_label: Label,
    pub field: Field,
    pub prime: PrimeIdeal,
    /// reduce(R_f) = unit · reduce(R_g).
    pub unit: FFElement,
    pub scaling: Scaling,
    pub eigenvalue_checks: Vec<EigenvalueCheck>,
    pub norm_bound: u64,
}

impl CongruenceCertificate {
    pub fn eigenvalues_agree(&self) -> bool {
        self.eigenvalue_checks.iter().all(|c| c.holds)
    }

    /// The unit factor as an integer when it lies in the prime field.
    pub fn unit_integer(&self) -> Option<u64> {
        self.unit.as_prime_field()
    }
}

#[derive(Clone, Debug)]
pub enum CongruenceOutcome {
    Certified(CongruenceCertificate),
    /// First coordinate where the reduced vectors stop being proportional.
    Refuted { mismatch: usize },
}

impl CongruenceOutcome {
    pub fn certificate(&self) -> Option<&CongruenceCertificate> {
        match self {
            CongruenceOutcome::Certified(c) => Some(c),
            CongruenceOutcome::Refuted { .. } => None,
        }
    }
}

fn scaled_for_prime(v: &[NFElement], prime: &PrimeIdeal) -> Result<(Vec<NFElement>, bool)> {
    let mut best: Option<(i64, usize)> = None;
    for (i, x) in v.iter().enumerate() {
        if x.eq_zero() {
            continue;
        }
        let val = prime.valuation(x)?;
        if best.map_or(true, |(b, _)| val < b) {
            best = Some((val, i));
        }
    }
    let (val, i) = best.ok_or(Error::ZeroReduction)?;
    if val == 0 {
        Ok((v.to_vec(), false))
    } else {
        Ok((scale_vec(v, &v[i].inv()?), true))
    }
}

fn reduce_vec(v: &[NFElement], prime: &PrimeIdeal) -> Result<Vec<FFElement>> {
    v.iter().map(|x| prime.reduce(x)).collect()
}

/// Projective congruence of the two eigen-polynomials modulo a prime of the common field, plus
/// eigenvalue congruences at every shared prime π of norm ≤ `norm_bound` coprime to P.
pub fn verify_congruence(
    f: &NormalizedEigenData,
    g: &NormalizedEigenData,
    prime: &PrimeIdeal,
    norm_bound: u64,
) -> Result<CongruenceOutcome> {
    let (h, ef, eg) = common_field(&f.system, &g.system)?;
    if *prime.field() != h {
        return Err(Error::FieldMismatch);
    }
    verify_in(f, g, &ef, &eg, prime, norm_bound)
}

/// Verification at every prime above the rational prime p. When p is irregular for the
/// equation order of the common field, the data is moved to an isomorphic model in which p is
/// regular (found by `regular_model`).
pub fn verify_at(
    f: &NormalizedEigenData,
    g: &NormalizedEigenData,
    p: u64,
    norm_bound: u64,
) -> Result<Vec<CongruenceOutcome>> {
    let (h, ef, eg) = common_field(&f.system, &g.system)?;
    let (ef, eg, model) = if is_regular(&h, p) {
        (ef, eg, h)
    } else {
        let to_model = regular_model(&h, p)?;
        (ef.compose(&to_model), eg.compose(&to_model), to_model.target.clone())
    };
    primes_above(p, &model)?
        .iter()
        .map(|prime| verify_in(f, g, &ef, &eg, prime, norm_bound))
        .collect()
}

/// An isomorphism from `field` onto Q(θ') for an integral primitive element θ' whose equation
/// order is regular at p. Candidates are small combinations of a basis of the maximal order.
pub fn regular_model(field: &Field, p: u64) -> Result<Embedding> {
    let n = field.degree();
    let basis = MaximalOrder::of(field)?.lattice.basis_elements();
    let range: [i64; 5] = [0, 1, -1, 2, -2];
    let total = range.len().pow(n as u32);
    for code in 1..total {
        let mut c = code;
        let mut theta = NFElement::zero_in(field);
        for b in &basis {
            let digit = range[c % range.len()];
            c /= range.len();
            theta = theta.add_ref(&b.mul_ref(&NFElement::from_int(field, digit)));
        }
        let mp = theta.minpoly();
        if mp.len() != n + 1 || mp.iter().any(|x| !x.is_integer()) {
            continue;
        }
        let zp: ZPoly = mp.iter().map(|x| x.to_integer()).collect();
        let model = NumberField::new(zp, &format!("{}{}", field.name(), p))?;
        if !is_regular(&model, p) {
            continue;
        }
        let from_model = Embedding::new(&model, field, theta)?;
        return from_model.inverse();
    }
    Err(Error::IrregularPrime(p.to_string()))
}

fn verify_in(
    f: &NormalizedEigenData,
    g: &NormalizedEigenData,
    ef: &Embedding,
    eg: &Embedding,
    prime: &PrimeIdeal,
    norm_bound: u64,
) -> Result<CongruenceOutcome> {
    let h = prime.field().clone();
    if !is_regular(&h, prime.p) {
        return Err(Error::IrregularPrime(prime.p.to_string()));
    }
    let pick = |d: &NormalizedEigenData, e: &Embedding| -> (Vec<NFElement>, bool) {
        match &d.big_r {
            Some(r) => (r.iter().map(|x| e.apply(x)).collect(), true),
            None => (d.p.iter().map(|x| e.apply(x)).collect(), false),
        }
    };
    let (vf, uf) = pick(f, ef);
    let (vg, ug) = pick(g, eg);
    let (vf, sf) = scaled_for_prime(&vf, prime)?;
    let (vg, sg) = scaled_for_prime(&vg, prime)?;
    let scaling = if uf && ug && !sf && !sg {
        Scaling::UnitContent
    } else {
        Scaling::MinimalValuation
    };
    let rf = reduce_vec(&vf, prime)?;
    let rg = reduce_vec(&vg, prime)?;
    let pivot = rg.iter().position(|x| !x.eq_zero()).ok_or(Error::ZeroReduction)?;
    if rf.iter().all(|x| x.eq_zero()) {
        return Err(Error::ZeroReduction);
    }
    let unit = rf[pivot].div_ref(&rg[pivot])?;
    if let Some(i) = (0..rf.len()).find(|&i| rf[i] != unit.mul_ref(&rg[i])) {
        return Ok(CongruenceOutcome::Refuted { mismatch: i });
    }
    let eigenvalue_checks = eigenvalue_checks(f, g, ef, eg, prime, norm_bound)?;
    Ok(CongruenceOutcome::Certified(CongruenceCertificate {
        f_label: f.system.label,
        g_label: g.system.label,
        field: h,
        prime: prime.clone(),
        unit,
        scaling,
        eigenvalue_checks,
        norm_bound,
    }))
}

fn eigenvalue_checks(
    f: &NormalizedEigenData,
    g: &NormalizedEigenData,
    ef: &Embedding,
    eg: &Embedding,
    prime: &PrimeIdeal,
    norm_bound: u64,
) -> Result<Vec<EigenvalueCheck>> {
    let mut out = Vec::new();
    for (pi, a) in &f.system.eigenvalues {
        if pi.norm() > BigInt::from(norm_bound) || (pi.norm() % prime.p).is_zero() {
            continue;
        }
        let Some(b) = g.system.eigenvalue(pi) else {
            continue;
        };
        let diff = ef.apply(a).sub_ref(&eg.apply(b));
        let holds = diff.eq_zero() || prime.valuation(&diff)? > 0;
        out.push(EigenvalueCheck { pi: pi.clone(), holds });
    }
    Ok(out)
}

/// Eigenvalues of several systems written in a single field generated by one eigenvalue.
#[derive(Clone, Debug)]
pub struct EigenvalueField {
    pub field: Field,
    /// The prime whose eigenvalue generates the field, and the system it came from.
    pub generator: Option<(usize, QuadInt)>,
    pub values: Vec<Vec<(QuadInt, NFElement)>>,
}

/// Writes the eigenvalues of the given systems in the field generated by the eigenvalue of
/// largest degree. Non-rational systems must share a coefficient field.
pub fn eigenvalue_field(systems: &[&EigenSystem], name: &str) -> Result<EigenvalueField> {
    let mut best: Option<(usize, usize, QuadInt, ZPoly)> = None;
    for (s, sys) in systems.iter().enumerate() {
        for (pi, a) in &sys.eigenvalues {
            let mp = a.minpoly();
            let deg = mp.len() - 1;
            if best.as_ref().map_or(deg > 1, |b| deg > b.0) {
                if mp.iter().any(|c| !c.is_integer()) {
                    return Err(Error::InvalidModulus("eigenvalue is not an algebraic integer".into()));
                }
                best = Some((deg, s, pi.clone(), mp.iter().map(|c| c.to_integer()).collect()));
            }
        }
    }
    let Some((deg, s, pi, mp)) = best else {
        let field = NumberField::rationals();
        let values = systems
            .iter()
            .map(|sys| {
                sys.eigenvalues
                    .iter()
                    .map(|(p, a)| (p.clone(), rational_in(&field, &a.as_rational().unwrap())))
                    .collect()
            })
            .collect();
        return Ok(EigenvalueField {
            field,
            generator: None,
            values,
        });
    };
    let field = NumberField::new(mp, name)?;
    let source = &systems[s].field;
    let gen = systems[s].eigenvalue(&pi).unwrap().clone();
    let mut rows = Vec::with_capacity(deg);
    let mut pw = NFElement::one_in(source);
    for _ in 0..deg {
        rows.push(pw.coords());
        pw = pw.mul_ref(&gen);
    }
    let basis = Matrix::from_rows(&(), source.degree(), rows);
    let mut values = Vec::new();
    for sys in systems {
        let mut vals = Vec::new();
        for (p, a) in &sys.eigenvalues {
            let x = if let Some(r) = a.as_rational() {
                rational_in(&field, &r)
            } else {
                if a.field() != source {
                    return Err(Error::FieldMismatch);
                }
                let c = basis.solve_left(&a.coords()).map_err(|_| Error::FieldMismatch)?;
                NFElement::from_coords(&field, &c)
            };
            vals.push((p.clone(), x));
        }
        values.push(vals);
    }
    Ok(EigenvalueField {
        field,
        generator: Some((s, pi)),
        values,
    })
}

impl EigenvalueField {
    /// a_π(f) ≡ a_π(g) modulo `prime` (a prime of `self.field`) for the shared primes of norm
    /// ≤ `norm_bound` coprime to it.
    pub fn congruences(&self, f: usize, g: usize, prime: &PrimeIdeal, norm_bound: u64) -> Result<Vec<EigenvalueCheck>> {
        let mut out = Vec::new();
        for (pi, a) in &self.values[f] {
            if pi.norm() > BigInt::from(norm_bound) || (pi.norm() % prime.p).is_zero() {
                continue;
            }
            let Some((_, b)) = self.values[g].iter().find(|(p, _)| p == pi) else {
                continue;
            };
            let diff = a.sub_ref(b);
            let holds = diff.eq_zero() || prime.valuation(&diff)? > 0;
            out.push(EigenvalueCheck { pi: pi.clone(), holds });
        }
        Ok(out)
    }
}

/// Reduction modulo ker Φ over an extension of the field of the bundle.
struct KernelReducer {
    rows: Vec<Vec<NFElement>>,
    pivots: Vec<usize>,
}

impl KernelReducer {
    fn new(bundle: &SpaceBundle<NFElement>, emb: &Embedding) -> Self {
        let order: Vec<usize> = (0..bundle.ambient()).rev().collect();
        let (rows, pivots) = rref_rows(bundle.ker_phi.basis.clone(), &order);
        let rows = rows.iter().map(|r| r.iter().map(|x| emb.apply(x)).collect()).collect();
        KernelReducer { rows, pivots }
    }

    fn reduce(&self, v: &[NFElement]) -> Vec<NFElement> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].eq_zero() {
                continue;
            }
            let shifted = scale_vec(row, &out[p]);
            out = vec_sub(&out, &shifted);
        }
        out
    }
}

/// A representative in V of the quotient eigenclass realising a system.
#[derive(Clone, Debug)]
pub struct H2Vector {
    /// Joint eigenvector of the quotient operators on the echelon basis of W.
    pub quotient_coords: Vec<NFElement>,
    /// Reduced modulo ker Φ and scaled: denominators cleared, middle content removed where it
    /// is rational, first nonzero rational coefficient positive.
    pub vector: Vec<NFElement>,
    /// Content of the middle coefficients of `vector`.
    pub middle_content: Content,
}

fn joint_eigenline(
    ops: &[(QuadInt, Matrix<NFElement>)],
    system: &EigenSystem,
    emb: &Embedding,
    delta: Option<&Matrix<NFElement>>,
) -> Result<Subspace<NFElement>> {
    let h = &system.field;
    let mut space: Option<Subspace<NFElement>> = None;
    let mut add = |m: Matrix<NFElement>| -> Result<()> {
        let ker = m.left_kernel();
        space = Some(match space.take() {
            None => ker,
            Some(s) => s.intersect(&ker)?,
        });
        Ok(())
    };
    for (pi, m) in ops {
        let Some(a) = system.eigenvalue(pi) else {
            continue;
        };
        let mh = m.map(h, |x| emb.apply(x));
        add(mh.sub(&Matrix::identity(h, m.rows).scale(a))?)?;
    }
    if let Some(dm) = delta {
        let dh = dm.map(h, |x| emb.apply(x));
        add(dh.sub(&Matrix::identity(h, dm.rows))?)?;
    }
    space.ok_or_else(|| Error::UnsplitSpace("no quotient operators supplied".into()))
}

/// Lift to V of the joint eigenvector of the quotient operators with the system's eigenvalues.
/// `quotient_ops` are matrices on the echelon basis of W acting on quotient coordinates.
pub fn h2_eigenvector(
    bundle: &SpaceBundle<NFElement>,
    system: &EigenSystem,
    quotient_ops: &[(QuadInt, Matrix<NFElement>)],
) -> Result<H2Vector> {
    let emb = &system.k_embedding;
    let h = &system.field;
    let mut line = joint_eigenline(quotient_ops, system, emb, None)?;
    if line.dim() > 1 {
        let delta = bundle.delta_on_w()?;
        line = joint_eigenline(quotient_ops, system, emb, Some(&delta))?;
    }
    if line.dim() != 1 {
        return Err(Error::UnsplitSpace(format!(
            "quotient eigenspace has dimension {}",
            line.dim()
        )));
    }
    let coords = line.basis[0].clone();
    let w_basis: Vec<Vec<NFElement>> = bundle
        .w
        .basis
        .iter()
        .map(|r| r.iter().map(|x| emb.apply(x)).collect())
        .collect();
    let lift = vec_mat(&coords, &Matrix::from_rows(h, bundle.ambient(), w_basis));
    let reduced = KernelReducer::new(bundle, emb).reduce(&lift);
    let (vector, middle_content) = scale_h2(&reduced, system.k, h)?;
    Ok(H2Vector {
        quotient_coords: coords,
        vector,
        middle_content,
    })
}

/// Clears denominators and divides by the rational part of the middle content; the sign makes
/// the first nonzero coefficient positive when that coefficient is rational.
pub fn scale_h2(v: &[NFElement], k: usize, field: &Field) -> Result<(Vec<NFElement>, Content)> {
    let middle: Vec<NFElement> = middle_indices(k).map(|i| v[i].clone()).filter(|x| !x.eq_zero()).collect();
    let source: &[NFElement] = if middle.is_empty() { v } else { &middle };
    let content = Content::of(field, source)?;
    let mut g = Rational::one();
    for l in &content.locals {
        if let Some(t) = l.rational_exponent {
            let pe = Rational::from_integer(num_traits::pow(l.p.clone(), t.unsigned_abs() as usize));
            g = if t >= 0 { g * pe } else { g / pe };
        }
    }
    let mut out = scale_vec(v, &rational_in(field, &g.recip()));
    if let Some(first) = out.iter().find(|x| !x.eq_zero()) {
        if first.as_rational().is_some_and(|r| r.is_negative()) {
            out = out.iter().map(|x| x.neg_ref()).collect();
        }
    }
    let middle: Vec<NFElement> = middle_indices(k).map(|i| out[i].clone()).filter(|x| !x.eq_zero()).collect();
    let content = Content::of(field, if middle.is_empty() { &out } else { &middle })?;
    Ok((out, content))
}

/// The pairing ⟨r_f, v_f⟩ with the factorization of its norm.
#[derive(Clone, Debug)]
pub struct PairingReport {
    /// The exact value, when r_f is available as a vector.
    pub value: Option<NFElement>,
    /// |N(⟨p, v⟩)| / (N(middle content of p) · N(middle content of v)): the absolute norm of
    /// the pairing for any normalization of r_f and v_f with unit middle content.
    pub norm: Rational,
    /// Factorization of `norm` with signed exponents.
    pub factorization: Vec<(BigInt, i64)>,
    /// Primes of the factorization above k + 2.
    pub candidates: Vec<BigInt>,
}

pub fn factor_rational(r: &Rational) -> Vec<(BigInt, i64)> {
    let mut out: Vec<(BigInt, i64)> = Vec::new();
    if !r.numer().abs().is_one() && !r.numer().is_zero() {
        out.extend(factor_integer(&r.numer().abs()).into_iter().map(|(p, e)| (p, e as i64)));
    }
    if !r.denom().is_one() {
        out.extend(factor_integer(r.denom()).into_iter().map(|(p, e)| (p, -(e as i64))));
    }
    out.sort();
    out
}

/// Pairing report for a normalized system against a representative v of its quotient class
/// (over the same coefficient field).
pub fn pairing_report(data: &NormalizedEigenData, v: &[NFElement]) -> Result<PairingReport> {
    let field = &data.system.field;
    let k = data.system.k;
    let value = data.r.as_ref().map(|r| pairing(r, v, k, field));
    let raw = pairing(&data.p, v, k, field);
    let scale_norm = {
        let m: Vec<NFElement> = middle_indices(k).map(|i| v[i].clone()).filter(|x| !x.eq_zero()).collect();
        Content::of(field, if m.is_empty() { v } else { &m })?.norm()
    };
    let norm = if raw.eq_zero() {
        Rational::zero()
    } else {
        raw.norm().abs() / (data.d_norm() * scale_norm)
    };
    let factorization = if norm.is_zero() { Vec::new() } else { factor_rational(&norm) };
    let bound = BigInt::from(k + 2);
    let candidates = factorization
        .iter()
        .filter(|(p, e)| *e > 0 && *p > bound)
        .map(|(p, _)| p.clone())
        .collect();
    Ok(PairingReport {
        value,
        norm,
        factorization,
        candidates,
    })
}

/// Vector over the coefficient field from rational entries given as (i, j, value) triples.
pub fn vector_from_terms(field: &Field, k: usize, terms: &[(usize, usize, Rational)]) -> Vec<NFElement> {
    let mut v = vec![NFElement::zero_in(field); dim(k)];
    for (i, j, c) in terms {
        v[index(k, *i, *j)] = rational_in(field, c);
    }
    v
}

/// A certified edge of the congruence graph.
#[derive(Clone, Debug)]
pub struct GraphEdge {
    pub f: usize,
    pub g: usize,
    pub certificate: CongruenceCertificate,
}

/// Nodes are the systems in their given order; edges are certified congruences at primes above
/// the detected moduli.
#[derive(Clone, Debug)]
pub struct CongruenceGraph {
    pub normalized: Vec<NormalizedEigenData>,
    /// Rational primes above k + 2 detected by the denominator or pairing methods.
    pub moduli: Vec<BigInt>,
    pub pairings: Vec<Option<PairingReport>>,
    pub edges: Vec<GraphEdge>,
    /// (f, g, p) combinations that could not be tested because p is irregular.
    pub skipped: Vec<(usize, usize, BigInt)>,
}

/// Detects moduli from denominators and (when quotient operators are supplied) from pairings,
/// then certifies every pair of systems at every regular prime above those moduli.
pub fn congruence_graph(
    bundle: &SpaceBundle<NFElement>,
    systems: &[EigenSystem],
    quotient_ops: Option<&[(QuadInt, Matrix<NFElement>)]>,
    norm_bound: u64,
) -> Result<CongruenceGraph> {
    let normalized: Vec<NormalizedEigenData> = systems.iter().map(normalize).collect::<Result<_>>()?;
    let mut moduli: Vec<BigInt> = Vec::new();
    for n in &normalized {
        moduli.extend(candidate_moduli(n).into_iter().filter(|c| !c.small_weight).map(|c| c.p));
    }
    let mut pairings = Vec::new();
    for (s, n) in systems.iter().zip(&normalized) {
        let report = match quotient_ops {
            Some(ops) if s.label != Label::Eisenstein => {
                let v = h2_eigenvector(bundle, s, ops)?;
                let rep = pairing_report(n, &v.vector)?;
                moduli.extend(rep.candidates.iter().cloned());
                Some(rep)
            }
            _ => None,
        };
        pairings.push(report);
    }
    moduli.sort();
    moduli.dedup();
    let mut edges = Vec::new();
    let mut skipped = Vec::new();
    for f in 0..systems.len() {
        for g in f + 1..systems.len() {
            for p in &moduli {
                let pu = p.to_u64().ok_or_else(|| Error::IrregularPrime(p.to_string()))?;
                let outcomes = match verify_at(&normalized[f], &normalized[g], pu, norm_bound) {
                    Err(Error::IrregularPrime(_)) => {
                        skipped.push((f, g, p.clone()));
                        continue;
                    }
                    r => r?,
                };
                for o in outcomes {
                    if let CongruenceOutcome::Certified(c) = o {
                        if c.eigenvalues_agree() {
                            edges.push(GraphEdge { f, g, certificate: c });
                        }
                    }
                }
            }
        }
    }
    Ok(CongruenceGraph {
        normalized,
        moduli,
        pairings,
        edges,
        skipped,
    })
}
