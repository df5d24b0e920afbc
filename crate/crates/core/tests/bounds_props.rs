mod common;

use common::*;
use permbound_core::bounds::{
    cycle_sum_ratio, diag_dominance_certify, entry_bound_check, exp_family, exp_family_cap,
    exp_family_closed_form, perm_ratio_check, rowsum_bound, solve_majorant, verify_majorant,
    MajorantCertificate, MajorantMode,
};
use permbound_core::process::recursive_u;
use permbound_core::sample::{random_dd, random_nonnegative, random_unit_diagonal};
use permbound_core::{permanent_ryser, process_bound, run_process, IndexSet};

#[test]
fn solved_majorants_verify_and_bound() {
    let mut r = rng(61);
    for n in 1..=7 {
        for _ in 0..4 {
            let a = random_nonnegative(&mut r, n, 5);
            let b = solve_majorant(&a).unwrap();
            let cert = verify_majorant(MajorantCertificate::new(a.clone(), b.clone(), MajorantMode::Equality)).unwrap();
            assert!(cert.verified);
            assert!(b.dominates(recursive_u(&a).unwrap().entries()));
            let pb = process_bound(&a).unwrap();
            assert!(pb <= cert.bound());
            assert!(perm_by_permutations(&a) <= pb);
        }
    }
}

#[test]
fn dominance_certificates_bound_the_process() {
    let mut r = rng(62);
    for n in 2..=7 {
        for eps in [q(1, 4), q(1, 1), q(2, 1)] {
            let a = random_dd(&mut r, n, &eps, &q(1, 6));
            let cert = diag_dominance_certify(&a, &eps).unwrap();
            let bound = cert.bound.unwrap();
            assert!(process_bound(&a).unwrap() <= bound);
            assert!(permanent_ryser(&a).unwrap() <= bound);
        }
    }
}

#[test]
fn boundedness_checks_on_unit_diagonal_inputs() {
    let mut r = rng(63);
    for n in 2..=5 {
        for m in [1, 2, 5] {
            let mq = q(m, 1);
            let a = random_unit_diagonal(&mut r, n, &mq);
            assert_eq!(entry_bound_check(&a, &mq).unwrap().first_violation, None);
            for s in IndexSet::all_subsets(n) {
                for i in (1..=n).filter(|i| !s.contains(*i)) {
                    for j in (1..=n).filter(|j| !s.contains(*j)) {
                        assert!(perm_ratio_check(&a, &s, i, j, &mq).unwrap().holds);
                    }
                }
                for t in 1..n {
                    if s.len() < 2 || s.iter().any(|i| i <= t) {
                        continue;
                    }
                    for i0 in s.iter() {
                        assert!(cycle_sum_ratio(&a, t, &s, i0, &mq).unwrap().holds);
                    }
                }
            }
        }
    }
}

#[test]
fn exp_family_closed_form_is_exact() {
    for c in [q(2, 1), q(3, 1), q(5, 2)] {
        for n in 1..=10 {
            let a = exp_family(n, &c).unwrap();
            let by_hand = process_by_hand(&a);
            assert_eq!(exp_family_closed_form(n, &c).unwrap(), by_hand[n - 1]);
            let bound = run_process(&a, false, None).unwrap().bound();
            assert!(bound < exp_family_cap(n, &c).unwrap());
        }
    }
}

#[test]
fn exp_family_rowsum_grows() {
    for n in [16usize, 64] {
        let c = (n as f64).sqrt();
        let a = exp_family(n, &c).unwrap();
        let rs = rowsum_bound(&a).unwrap();
        assert!((1.0 + 1.0 / c).powi(n as i32) <= rs);
    }
}
