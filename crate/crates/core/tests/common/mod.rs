#![allow(dead_code)]

use std::sync::OnceLock;

use bianchi_core::arith::rational::parse_rational;
use bianchi_core::congruence::{normalize, NormalizedEigenData};
use bianchi_core::hecke::cache::HeilbronnCache;
use bianchi_core::pipeline::Computation;
use bianchi_core::spectral::{EigenSystem, Label};
use bianchi_core::Rational;

/// The (d, k) = (11, 10) computation with all primes of norm ≤ 100, shared by one test binary.
pub fn weight10() -> &'static Computation {
    static C: OnceLock<Computation> = OnceLock::new();
    C.get_or_init(|| Computation::run(11, 10, 100, &HeilbronnCache::disabled()).expect("pipeline"))
}

pub struct Forms {
    pub eis: usize,
    pub delta: usize,
    pub f1: usize,
    pub f2: usize,
}

pub fn forms(systems: &[EigenSystem]) -> Forms {
    let find = |l: Label| systems.iter().position(|s| s.label == l).expect("label present");
    let genuine: Vec<usize> = (0..systems.len()).filter(|&i| systems[i].label == Label::Genuine).collect();
    Forms {
        eis: find(Label::Eisenstein),
        delta: find(Label::BaseChangeCandidate),
        f1: genuine[0],
        f2: genuine[1],
    }
}

pub fn normalized() -> &'static Vec<NormalizedEigenData> {
    static N: OnceLock<Vec<NormalizedEigenData>> = OnceLock::new();
    N.get_or_init(|| weight10().systems.iter().map(|s| normalize(s).expect("normalize")).collect())
}

/// The 121 coefficients of the stored normalized polynomial, row-major.
pub fn r_delta_fixture() -> Vec<Rational> {
    include_str!("../fixtures/r_delta.txt")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .flat_map(|l| l.split_whitespace().map(|t| parse_rational(t).expect("rational")).collect::<Vec<_>>())
        .collect()
}

/// The stored quotient representative for the base-change form: −358 X^10 X̄^8 Ȳ^2 +
/// 3080 X^10 X̄^6 Ȳ^4 + 22253 X^10 X̄^4 Ȳ^6.
pub fn stored_v_delta_terms() -> Vec<(usize, usize, Rational)> {
    vec![
        (0, 2, Rational::from_integer((-358).into())),
        (0, 4, Rational::from_integer(3080.into())),
        (0, 6, Rational::from_integer(22253.into())),
    ]
}

/// The generator of the middle content of F1 in Q[T]/(T^4 + 3725 T^2 + 3448449):
/// (245047560419778865 T^3 + 491449950388685970467 T) / 15099638400.
pub fn stored_d_coefficients() -> (Rational, Rational) {
    (
        parse_rational("245047560419778865/15099638400").unwrap(),
        parse_rational("491449950388685970467/15099638400").unwrap(),
    )
}
