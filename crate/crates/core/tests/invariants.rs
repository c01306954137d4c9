use num_bigint::BigInt;
use wss_core::intmath::{primes_up_to, FactorBudget};
use wss_core::quadring::{eval_fp_alpha, eval_fp_beta};
use wss_core::trinomial::{
    discriminant_resultant, fp_discriminant, gh_coprimality, is_monogenic_fp, jks_check_prime,
    Trinomial,
};
use wss_core::wss::{classify, search, validate_k, Criterion, SearchConfig};

fn valid_ks(limit: u64) -> Vec<u64> {
    (1..=limit)
        .filter(|&k| validate_k(k, FactorBudget::default()).unwrap().holds())
        .collect()
}

#[test]
fn closed_form_discriminant_matches_sylvester_determinant() {
    for k in 1..=10u64 {
        for p in [2u64, 3, 5, 7, 11, 13] {
            assert_eq!(
                fp_discriminant(k, p),
                discriminant_resultant(&Trinomial::fp(k, p)),
                "k={k} p={p}"
            );
        }
    }
}

#[test]
fn primes_other_than_p_never_divide_the_index() {
    let budget = FactorBudget::default();
    for k in valid_ks(30) {
        for p in primes_up_to(50) {
            let report = is_monogenic_fp(k, p, budget).unwrap();
            for v in report.verdicts.iter().filter(|v| v.q != p) {
                assert!(!v.divides_index, "k={k} p={p} q={}: {}", v.q, v.detail);
                let expected_item = if v.q == 2 { 2 } else { 5 };
                assert_eq!(v.item_used, expected_item, "k={k} p={p} q={}", v.q);
            }
        }
    }
}

#[test]
fn gh_coprimality_is_the_verdict_at_p() {
    let budget = FactorBudget::default();
    for k in valid_ks(30) {
        for p in primes_up_to(200) {
            let coprime = gh_coprimality(k, p).unwrap();
            let at_p = jks_check_prime(&Trinomial::fp(k, p), p).unwrap();
            if p >= 3 {
                assert_eq!(coprime, !at_p.divides_index, "k={k} p={p}: {}", at_p.detail);
            }
            let report = is_monogenic_fp(k, p, budget).unwrap();
            assert_eq!(report.monogenic, coprime, "k={k} p={p}");
        }
    }
}

#[test]
fn report_covers_exactly_the_discriminant_primes() {
    let budget = FactorBudget::default();
    for k in valid_ks(20) {
        for p in [2u64, 3, 5, 7, 13] {
            let report = is_monogenic_fp(k, p, budget).unwrap();
            let disc = &report.discriminant;
            let mut rest = disc.magnitude().clone();
            for v in &report.verdicts {
                let q = num_bigint::BigUint::from(v.q);
                assert!((&rest % &q) == num_bigint::BigUint::from(0u32));
                while (&rest % &q) == num_bigint::BigUint::from(0u32) {
                    rest /= &q;
                }
            }
            assert_eq!(rest, num_bigint::BigUint::from(1u32), "k={k} p={p}");
            assert_eq!(
                report.monogenic,
                report.verdicts.iter().all(|v| !v.divides_index)
            );
        }
    }
}

#[test]
fn divisors_of_k_squared_plus_four_give_monogenic_trinomials() {
    let budget = FactorBudget::default();
    for k in valid_ks(60) {
        let kk4 = k * k + 4;
        for p in primes_up_to(kk4).into_iter().filter(|p| kk4 % p == 0) {
            assert!(
                is_monogenic_fp(k, p, budget).unwrap().monogenic,
                "k={k} p={p}"
            );
            let c = classify(k, p, budget).unwrap();
            assert!(
                !c.by_period && !c.by_entry && !c.by_alpha && !c.by_monogenic,
                "{c}"
            );
        }
    }
}

#[test]
fn two_is_never_a_hit_under_the_hypotheses() {
    let budget = FactorBudget::default();
    for k in valid_ks(200) {
        let c = classify(k, 2, budget).unwrap();
        assert!(!c.is_wss(), "{c}");
        assert!(is_monogenic_fp(k, 2, budget).unwrap().monogenic, "k={k}");
    }
}

#[test]
fn root_evaluations_vanish_together() {
    for k in valid_ks(30) {
        for p in primes_up_to(200).into_iter().skip(1) {
            assert_eq!(
                eval_fp_alpha(k, p).unwrap().is_zero(),
                eval_fp_beta(k, p).unwrap().is_zero(),
                "k={k} p={p}"
            );
        }
    }
}

#[test]
fn main_equivalence_on_small_grid() {
    let budget = FactorBudget::default();
    for k in valid_ks(50) {
        for p in primes_up_to(200) {
            let c = classify(k, p, budget).unwrap_or_else(|e| panic!("k={k} p={p}: {e}"));
            assert!(c.consistent);
            assert!(c.pi_p2 == c.pi_p || c.pi_p2 == p * c.pi_p);
        }
    }
}

#[test]
fn search_is_independent_of_worker_count() {
    let run = |jobs| {
        search(&SearchConfig {
            k_min: 1,
            k_max: 12,
            p_max: 400,
            criterion: Criterion::All,
            jobs: Some(jobs),
            budget: FactorBudget::default(),
        })
        .unwrap()
    };
    let reference = run(1);
    for jobs in [1, 2, 3, 8] {
        assert_eq!(run(jobs), reference, "jobs={jobs}");
    }
    let hits: Vec<_> = reference.hits.iter().map(|h| (h.k, h.p)).collect();
    assert!(hits.contains(&(2, 13)) && hits.contains(&(2, 31)));
    assert!(hits.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn trinomial_discriminant_sign_follows_parity_of_p() {
    for k in 1..=5u64 {
        for p in [2u64, 3, 5, 7] {
            let sign_negative = fp_discriminant(k, p) < BigInt::from(0);
            assert_eq!(sign_negative, p == 2, "k={k} p={p}");
        }
    }
}
