//! W_{k,k}, ker(Φ^k), the plus space and the quotient V / ker(Φ^k).

use crate::arith::scalar::Scalar;
use crate::error::{Error, Result};
use crate::linalg::{rref_rows, vec_sub, Matrix, Subspace};
use crate::presentation::{recipe, table, GeneratorTable, GroupAlgebra, Summand};
use crate::quad::check_field;
use crate::weight::{dim, gram_matrix, j_matrix, pairing, Action, GMatrix, QuadMap};

pub const MAX_WEIGHT: usize = 40;

/// Applies Σ c_i ρ(g_i) to a vector.
pub fn apply_algebra<T: Scalar>(v: &[T], terms: &[(i64, Action<T>)], ctx: &T::Ctx) -> Vec<T> {
    let mut out = vec![T::zero_in(ctx); v.len()];
    for (c, act) in terms {
        let img = act.apply(v);
        let c = T::from_int(ctx, *c);
        for (o, x) in out.iter_mut().zip(img) {
            if !x.eq_zero() {
                *o = o.add_ref(&c.mul_ref(&x));
            }
        }
    }
    out
}

fn algebra_actions<T: Scalar>(
    e: &GroupAlgebra,
    tab: &GeneratorTable,
    k: usize,
    map: &QuadMap<T>,
) -> Result<Vec<(i64, Action<T>)>> {
    Ok(e.eval(tab)?
        .into_iter()
        .map(|(c, g)| (c, Action::new(&g, k, map)))
        .collect())
}

/// Left kernel of v ↦ Σ c_i v·g_i restricted to `space`.
pub fn kernel_within<T: Scalar>(
    space: &Subspace<T>,
    terms: &[(i64, Action<T>)],
    ctx: &T::Ctx,
) -> Subspace<T> {
    if space.dim() == 0 {
        return space.clone();
    }
    let images: Vec<Vec<T>> = space.basis.iter().map(|v| apply_algebra(v, terms, ctx)).collect();
    let m = Matrix::from_rows(ctx, space.ambient, images);
    let ker = m.left_kernel();
    let rows = ker.basis.iter().map(|c| space.combine(c)).collect();
    Subspace::from_rows(ctx, space.ambient, rows)
}

/// V^g = ker(1 - ρ(g)).
pub fn fixed_space<T: Scalar>(g: &GMatrix, k: usize, map: &QuadMap<T>) -> Subspace<T> {
    let full = Subspace::full(&map.ctx, dim(k));
    let terms = vec![(1, Action::new(&GMatrix::identity(g.field()), k, map)), (-1, Action::new(g, k, map))];
    kernel_within(&full, &terms, &map.ctx)
}

#[derive(Clone, Debug)]
pub struct SpaceBundle<T: Scalar> {
    pub d: u32,
    pub k: usize,
    pub map: QuadMap<T>,
    pub w: Subspace<T>,
    pub ker_phi: Subspace<T>,
    pub w_plus: Subspace<T>,
    /// Inverse Gram matrix of the pairing on the echelon basis of W.
    gram_w_inv: Matrix<T>,
}

impl<T: Scalar> SpaceBundle<T> {
    pub fn build(d: u32, k: usize, map: &QuadMap<T>) -> Result<Self> {
        check_field(d).map_err(|_| Error::UnsupportedField(d))?;
        if k % 2 != 0 || k > MAX_WEIGHT {
            return Err(Error::InvalidWeight(k as u32));
        }
        let ctx = &map.ctx;
        let tab = table(d)?;
        let rec = recipe(d)?;
        let n = dim(k);

        let mut w = Subspace::full(ctx, n);
        for cond in &rec.wkk_conditions {
            let terms = algebra_actions(cond, &tab, k, map)?;
            w = kernel_within(&w, &terms, ctx);
        }
        let ker_phi = sum_of_summands(&rec.kernel_summands, &tab, k, map)?;
        let w_plus = plus_space(&w, d, k, map)?;

        let gram_w = w.gram(&gram_matrix(k, ctx));
        let gram_w_inv = if w.dim() == 0 {
            Matrix::zeros(ctx, 0, 0)
        } else {
            gram_w
                .inverse()
                .map_err(|_| Error::RecipeViolation("pairing degenerate on W".into()))?
        };
        let bundle = SpaceBundle {
            d,
            k,
            map: map.clone(),
            w,
            ker_phi,
            w_plus,
            gram_w_inv,
        };
        bundle.verify_decomposition()?;
        Ok(bundle)
    }

    pub fn ctx(&self) -> &T::Ctx {
        &self.map.ctx
    }

    pub fn ambient(&self) -> usize {
        dim(self.k)
    }

    /// dim W + dim ker Φ = dim V, W ∩ ker Φ = 0 and W = ker(Φ)^⊥.
    pub fn verify_decomposition(&self) -> Result<()> {
        let n = self.ambient();
        if self.w.dim() + self.ker_phi.dim() != n {
            return Err(Error::RecipeViolation(format!(
                "dim W = {} and dim ker = {} do not sum to {n}",
                self.w.dim(),
                self.ker_phi.dim()
            )));
        }
        if self.w.intersect(&self.ker_phi)?.dim() != 0 {
            return Err(Error::RecipeViolation("W meets ker Φ".into()));
        }
        let perp = self.ker_phi.perp(&gram_matrix(self.k, self.ctx()))?;
        if perp != self.w {
            return Err(Error::RecipeViolation("W differs from the orthogonal complement of ker Φ".into()));
        }
        if !self.w.contains_subspace(&self.w_plus) {
            return Err(Error::RecipeViolation("plus space not inside W".into()));
        }
        Ok(())
    }

    /// Quotient coordinates: c with Σ c_i w_i ≡ v mod ker Φ, where w_i is the basis of W.
    pub fn project(&self, v: &[T]) -> Vec<T> {
        let ctx = self.ctx();
        let b: Vec<T> = self.w.basis.iter().map(|wj| pairing(v, wj, self.k, ctx)).collect();
        crate::linalg::vec_mat(&b, &self.gram_w_inv)
    }

    /// The representative inside W of a quotient class.
    pub fn lift(&self, coords: &[T]) -> Vec<T> {
        self.w.combine(coords)
    }

    pub fn quotient_dim(&self) -> usize {
        self.w.dim()
    }

    /// Reduction of v modulo ker Φ, eliminating coordinates from the highest index down.
    pub fn normal_form(&self, v: &[T]) -> Vec<T> {
        let n = self.ambient();
        let order: Vec<usize> = (0..n).rev().collect();
        let (rows, pivots) = rref_rows(self.ker_phi.basis.clone(), &order);
        let mut out = v.to_vec();
        for (row, &p) in rows.iter().zip(&pivots) {
            if out[p].eq_zero() {
                continue;
            }
            let c = out[p].clone();
            let shifted: Vec<T> = row.iter().map(|x| x.mul_ref(&c)).collect();
            out = vec_sub(&out, &shifted);
        }
        out
    }

    /// Whether V^g ⊆ ker Φ for a given g.
    pub fn fixed_space_in_kernel(&self, g: &GMatrix) -> bool {
        let fixed = fixed_space(g, self.k, &self.map);
        fixed.basis.iter().all(|v| self.project(v).iter().all(|x| x.eq_zero()))
    }

    /// δ restricted to W as a matrix on the echelon basis.
    pub fn delta_on_w(&self) -> Result<Matrix<T>> {
        let act = Action::new(&j_matrix(self.d), self.k, &self.map);
        self.w.restrict(|v| act.apply(v))
    }

    /// Every vector fixed by a plain fixed-space summand generator lies in ker Φ.
    pub fn check_fixed_vectors_in_kernel(&self) -> Result<()> {
        let tab = table(self.d)?;
        let rec = recipe(self.d)?;
        for s in rec.kernel_summands.iter().filter(|s| s.post.is_none()) {
            let g = s.fixed.eval(&tab)?;
            let fixed = fixed_space(&g, self.k, &self.map);
            for v in &fixed.basis {
                if self.project(v).iter().any(|x| !x.eq_zero()) {
                    return Err(Error::RecipeViolation(format!("V^{} not in ker Φ", s.fixed)));
                }
            }
        }
        Ok(())
    }
}

fn sum_of_summands<T: Scalar>(
    summands: &[Summand],
    tab: &GeneratorTable,
    k: usize,
    map: &QuadMap<T>,
) -> Result<Subspace<T>> {
    let ctx = &map.ctx;
    let mut rows = Vec::new();
    for s in summands {
        let g = s.fixed.eval(tab)?;
        let fixed = fixed_space(&g, k, map);
        match &s.post {
            None => rows.extend(fixed.basis),
            Some(post) => {
                let terms = algebra_actions(post, tab, k, map)?;
                rows.extend(fixed.basis.iter().map(|v| apply_algebra(v, &terms, ctx)));
            }
        }
    }
    Ok(Subspace::from_rows(ctx, dim(k), rows))
}

fn plus_space<T: Scalar>(w: &Subspace<T>, d: u32, k: usize, map: &QuadMap<T>) -> Result<Subspace<T>> {
    let ctx = &map.ctx;
    let act = Action::new(&j_matrix(d), k, map);
    let dm = w.restrict(|v| act.apply(v))?;
    let sq = dm.mul(&dm)?;
    if sq != Matrix::identity(ctx, w.dim()) {
        return Err(Error::RecipeViolation("δ is not an involution on W".into()));
    }
    let fixed = dm.sub(&Matrix::identity(ctx, w.dim()))?.left_kernel();
    let rows = fixed.basis.iter().map(|c| w.combine(c)).collect();
    Ok(Subspace::from_rows(ctx, w.ambient, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::numfield::NFElement;
    use crate::presentation::SUPPORTED;
    use crate::quad::quadratic_field;
    use crate::weight::eisenstein_vector;

    fn kmap(d: u32) -> QuadMap<NFElement> {
        let f = quadratic_field(d).unwrap();
        QuadMap::new(&f, NFElement::generator(&f))
    }

    #[test]
    fn small_weights_decompose() {
        for d in SUPPORTED {
            for k in [0, 2, 4] {
                let b = SpaceBundle::build(d, k, &kmap(d)).unwrap();
                let e = eisenstein_vector::<NFElement>(k, b.ctx());
                if k > 0 {
                    assert!(b.w.contains(&e), "d={d} k={k}");
                    assert!(b.w_plus.contains(&e), "d={d} k={k}");
                }
                b.check_fixed_vectors_in_kernel().unwrap();
            }
        }
    }

    #[test]
    fn a_fixed_vectors_need_the_post_multiplier() {
        for d in [7, 11] {
            let b = SpaceBundle::build(d, 4, &kmap(d)).unwrap();
            let a = table(d).unwrap().a.unwrap();
            assert!(!b.fixed_space_in_kernel(&a), "d={d}");
        }
    }

    #[test]
    fn constant_weight_is_trivial_for_gaussian_field() {
        let b = SpaceBundle::build(1, 0, &kmap(1)).unwrap();
        assert_eq!(b.w.dim(), 0);
    }

    #[test]
    fn quotient_section() {
        let b = SpaceBundle::build(11, 4, &kmap(11)).unwrap();
        for v in &b.ker_phi.basis {
            assert!(b.project(v).iter().all(|x| x.eq_zero()));
        }
        let q = b.quotient_dim();
        for i in 0..q {
            let mut e = vec![NFElement::zero_in(b.ctx()); q];
            e[i] = NFElement::one_in(b.ctx());
            assert_eq!(b.project(&b.lift(&e)), e);
        }
        let e = eisenstein_vector::<NFElement>(4, b.ctx());
        assert_eq!(b.project(&b.normal_form(&e)), b.project(&e));
    }
}
