//! End-to-end assembly: spaces, Heilbronn sets, Hecke operators and eigensystems for one (d, k).

use rayon::prelude::*;

use crate::arith::numfield::NFElement;
use crate::error::Result;
use crate::hecke::cache::HeilbronnCache;
use crate::hecke::heilbronn::HeilbronnSet;
use crate::hecke::{operator, Domain, STABILITY_CHECK_NORM};
use crate::linalg::Matrix;
use crate::quad::{primes_up_to_norm, quadratic_field, QuadInt};
use crate::spaces::SpaceBundle;
use crate::spectral::{eigensystems, EigenSystem};
use crate::weight::QuadMap;

/// The space bundle over K = Q(√−d) with ω mapped to the field generator.
pub fn bundle(d: u32, k: usize) -> Result<SpaceBundle<NFElement>> {
    let kf = quadratic_field(d)?;
    let map = QuadMap::new(&kf, NFElement::generator(&kf));
    SpaceBundle::build(d, k, &map)
}

/// Heilbronn sets for every prime of norm ≤ `norm_bound`, in the order of `primes_up_to_norm`.
pub fn heilbronn_sets(d: u32, norm_bound: u64, cache: &HeilbronnCache) -> Result<Vec<HeilbronnSet>> {
    let primes = primes_up_to_norm(d, norm_bound)?;
    primes.par_iter().map(|pi| cache.get(pi)).collect()
}

/// Operator matrices for the given sets on one domain, with the domain's default adjointness.
/// Stability is checked for primes of norm ≤ `STABILITY_CHECK_NORM` on the W domains.
pub fn operators(
    bundle: &SpaceBundle<NFElement>,
    sets: &[HeilbronnSet],
    domain: Domain,
) -> Result<Vec<(QuadInt, Matrix<NFElement>)>> {
    sets.par_iter()
        .map(|s| {
            let check = s.pi.norm() <= STABILITY_CHECK_NORM.into();
            let op = operator(bundle, s, domain.default_adjoint(), domain, check)?;
            Ok((s.pi.clone(), op.matrix))
        })
        .collect()
}

/// Everything needed for the congruence analysis at one (d, k).
pub struct Computation {
    pub bundle: SpaceBundle<NFElement>,
    pub sets: Vec<HeilbronnSet>,
    pub plus_ops: Vec<(QuadInt, Matrix<NFElement>)>,
    pub systems: Vec<EigenSystem>,
}

impl Computation {
    pub fn run(d: u32, k: usize, norm_bound: u64, cache: &HeilbronnCache) -> Result<Computation> {
        let bundle = bundle(d, k)?;
        let sets = heilbronn_sets(d, norm_bound, cache)?;
        let plus_ops = operators(&bundle, &sets, Domain::WPlus)?;
        let systems = eigensystems(&bundle, &plus_ops)?;
        Ok(Computation {
            bundle,
            sets,
            plus_ops,
            systems,
        })
    }

    /// Quotient operators for the primes of norm ≤ `norm_bound`.
    pub fn quotient_ops(&self, norm_bound: u64) -> Result<Vec<(QuadInt, Matrix<NFElement>)>> {
        let sets: Vec<HeilbronnSet> = self
            .sets
            .iter()
            .filter(|s| s.pi.norm() <= norm_bound.into())
            .cloned()
            .collect();
        operators(&self.bundle, &sets, Domain::Quotient)
    }
}
