use std::collections::BTreeSet;

use cyclo_core::bounds::{exact_1modp, upper1_bound};
use cyclo_core::family::{compute_mpq, FamilyOptions};
use cyclo_core::kaplan::{height_of, TernaryInstance};
use cyclo_core::numtheory::{gcd, is_prime, primes_between};
use cyclo_core::witnesses::{instantiate, verify, verify_all, LemmaId, Outcome};
use cyclo_core::Error;

#[test]
fn matrix_up_to_nineteen_has_no_refutations() {
    let matrix = verify_all(19);
    for row in &matrix.rows {
        assert!(row.error.is_none(), "{} p = {}: {:?}", row.lemma, row.p, row.error);
        assert_eq!(row.outcome, Some(Outcome::Confirmed), "{row:?}");
    }
    assert_eq!((matrix.refuted(), matrix.errors()), (0, 0));
    let covered: BTreeSet<&str> = matrix.rows.iter().map(|r| r.lemma.name()).collect();
    assert_eq!(covered.len(), LemmaId::ALL.len());
    for row in &matrix.rows {
        let p = row.p as i64;
        assert!(row.predicted.unwrap().abs() <= p);
    }
}

#[test]
fn specs_satisfy_their_own_conditions() {
    for lemma in LemmaId::ALL {
        for p in primes_between(3, 19).into_iter().filter(|&p| lemma.admits_p(p)) {
            let Ok(s) = instantiate(lemma, p, None, None) else { continue };
            assert!(is_prime(s.q) && is_prime(s.r) && s.p < s.q && s.q < s.r, "{lemma} {s:?}");
            assert_eq!(gcd(s.r, s.p * s.q), 1);
            let inst = TernaryInstance::new(s.p, s.q, s.r).unwrap();
            assert!(s.k <= inst.degree(), "{lemma} p = {p}: k = {} past the degree", s.k);
        }
    }
}

#[test]
fn stated_examples() {
    let s = instantiate(LemmaId::Moeller, 5, Some(7), None).unwrap();
    assert_eq!((s.r, s.k, s.predicted), (17, 240, 3));
    assert_eq!(verify(&s).unwrap().computed, 3);

    let s = instantiate(LemmaId::Elf11, 11, Some(59), None).unwrap();
    assert_eq!((s.aux, s.r % 11, (22 * s.r) % 59, s.predicted), (Some(2), 8, 1, -7));
    assert_eq!(verify(&s).unwrap().outcome, Outcome::Confirmed);

    let s = instantiate(LemmaId::D2pM1, 7, Some(13), None).unwrap();
    assert_eq!((s.r, s.k, s.predicted), (191, 7372, 3));
    assert_eq!(verify(&s).unwrap().outcome, Outcome::Confirmed);

    let s = instantiate(LemmaId::L19, 19, Some(53), None).unwrap();
    let v = verify(&s).unwrap();
    assert_eq!((v.outcome, v.computed), (Outcome::Confirmed, -12));
    assert_eq!(height_of(19, 53, 859).unwrap().height, 12);
}

#[test]
fn hypotheses_are_enforced() {
    // q = 5 (mod 7) but q < 49/2
    assert!(matches!(instantiate(LemmaId::Wilms1, 7, Some(19), None), Err(Error::ConditionUnsatisfiable(_))));
    assert!(instantiate(LemmaId::Wilms1, 7, Some(47), None).is_ok());
    // q = 3 (mod 7) but q < max(21, 14)
    assert!(matches!(instantiate(LemmaId::PMinus1, 7, Some(17), None), Err(Error::ConditionUnsatisfiable(_))));
    assert!(instantiate(LemmaId::PMinus1, 7, Some(31), None).is_ok());
    assert!(instantiate(LemmaId::L11_3, 11, Some(113), None).is_err());
    assert!(instantiate(LemmaId::Moeller, 3, Some(5), None).is_err());
}

#[test]
fn out_of_degree_index_is_refuted_with_zero() {
    let mut s = instantiate(LemmaId::Moeller, 5, Some(7), None).unwrap();
    s.k = TernaryInstance::new(5, 7, 17).unwrap().degree() + 1;
    let v = verify(&s).unwrap();
    assert_eq!((v.outcome, v.computed), (Outcome::Refuted, 0));
}

/// Moeller's value meets the upper bound when `q = 2 (mod p)`.
#[test]
fn moeller_and_upper1_pin_the_family_maximum() {
    for p in [5u64, 7, 11, 13] {
        for q in primes_between(p + 1, 120).into_iter().filter(|q| q % p == 2) {
            let s = instantiate(LemmaId::Moeller, p, Some(q), None).unwrap();
            assert_eq!(verify(&s).unwrap().outcome, Outcome::Confirmed);
            assert_eq!(upper1_bound(p, q).unwrap(), s.predicted as u64, "({p}, {q})");
            if p * q <= 400 {
                assert_eq!(compute_mpq(p, q, &FamilyOptions::default()).unwrap().m, (p + 1) / 2);
            }
        }
    }
}

#[test]
fn wilms2_magnitude_is_the_1modp_value() {
    for p in [5u64, 7, 11, 13, 17, 19] {
        for q in primes_between(p + 1, 400).into_iter().filter(|q| q % p == 1) {
            let s = instantiate(LemmaId::Wilms2, p, Some(q), None).unwrap();
            assert_eq!(s.predicted.unsigned_abs(), exact_1modp(p, q).unwrap(), "({p}, {q})");
        }
    }
}

#[test]
fn witnesses_bound_family_maxima_from_below() {
    let mut checked = 0;
    for lemma in LemmaId::ALL {
        for p in primes_between(3, 11).into_iter().filter(|&p| lemma.admits_p(p)) {
            let Ok(s) = instantiate(lemma, p, None, None) else { continue };
            if p * s.q > 600 {
                continue;
            }
            let m = compute_mpq(p, s.q, &FamilyOptions::default()).unwrap().m;
            assert!(m >= s.predicted.unsigned_abs(), "{lemma}: M({p};{}) = {m} < {}", s.q, s.predicted);
            checked += 1;
        }
    }
    assert!(checked >= 8, "only {checked} pairs");
}
