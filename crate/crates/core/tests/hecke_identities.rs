use std::fs;

use bianchi_core::hecke::cache::{from_json, to_json, HeilbronnCache};
use bianchi_core::hecke::heilbronn_set;
use bianchi_core::pipeline::bundle;
use bianchi_core::presentation::SUPPORTED;
use bianchi_core::quad::primes_up_to_norm;
use bianchi_core::verify::{hecke_checks, invariant_suite, space_checks};

fn assert_all_pass(checks: &[bianchi_core::verify::Check], what: &str) {
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} {}", c.name, c.detail))
        .collect();
    assert!(failed.is_empty(), "{what}: {failed:?}");
}

#[test]
fn weight_ten_hecke_operators_commute_with_each_other_and_delta() {
    let b = bundle(11, 10).unwrap();
    let checks = hecke_checks(&b, 11, &HeilbronnCache::disabled()).unwrap();
    // 6 primes of norm ≤ 11 (two of norm 3, 2, two of norm 5, the ramified prime): 3 checks
    // each, 6 δ checks and 15 commutators.
    assert_eq!(checks.len(), 6 * 3 + 6 + 15);
    assert_all_pass(&checks, "d=11 k=10");
}

#[test]
fn small_weight_suites_pass_for_every_field() {
    for d in SUPPORTED {
        for k in [2, 4] {
            let checks = invariant_suite(d, k, 11, &HeilbronnCache::disabled()).unwrap();
            assert_all_pass(&checks, &format!("d={d} k={k}"));
        }
    }
}

#[test]
fn duality_holds_through_weight_six() {
    for d in SUPPORTED {
        for k in [2, 4, 6] {
            let b = bundle(d, k).unwrap();
            assert_eq!(b.w.dim() + b.ker_phi.dim(), (k + 1) * (k + 1));
            assert_all_pass(&space_checks(&b), &format!("d={d} k={k}"));
        }
    }
}

#[test]
fn cache_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let cache = HeilbronnCache::new(dir.path());
    for pi in primes_up_to_norm(11, 30).unwrap() {
        let fresh = heilbronn_set(&pi).unwrap();
        let stored = cache.get(&pi).unwrap();
        assert_eq!(stored, fresh);
        let path = cache.path_for(&pi).unwrap();
        let first = fs::read(&path).unwrap();
        let reloaded = cache.get(&pi).unwrap();
        assert_eq!(reloaded, fresh);
        assert_eq!(fs::read(&path).unwrap(), first);
        let value: serde_json::Value = serde_json::from_slice(&first).unwrap();
        assert_eq!(to_json(&from_json(&value).unwrap()), value);
    }
    // A second cache directory receives byte-identical files.
    let other = tempfile::tempdir().unwrap();
    let cache2 = HeilbronnCache::new(other.path());
    for pi in primes_up_to_norm(11, 30).unwrap() {
        cache2.get(&pi).unwrap();
        assert_eq!(
            fs::read(cache.path_for(&pi).unwrap()).unwrap(),
            fs::read(cache2.path_for(&pi).unwrap()).unwrap()
        );
    }
}

#[test]
fn corrupted_cache_entries_are_regenerated() {
    let dir = tempfile::tempdir().unwrap();
    let cache = HeilbronnCache::new(dir.path());
    let pi = primes_up_to_norm(11, 5).unwrap().remove(0);
    let good = cache.get(&pi).unwrap();
    let path = cache.path_for(&pi).unwrap();
    fs::write(&path, b"{ not json").unwrap();
    assert_eq!(cache.get(&pi).unwrap(), good);
    assert!(serde_json::from_slice::<serde_json::Value>(&fs::read(&path).unwrap()).is_ok());
}
