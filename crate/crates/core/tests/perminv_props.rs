mod common;

use common::*;
use permbound_core::perminv::{check_identity_dominance, minor_ratio_with, permanental_inverse};
use permbound_core::sample::random_nonnegative;
use permbound_core::{permanent_ryser, IndexSet, Matrix};

#[test]
fn identity_dominance_has_unit_diagonal() {
    let mut r = rng(21);
    let mut witness = false;
    for n in 1..=6 {
        for _ in 0..5 {
            let b = random_nonnegative(&mut r, n, 5);
            let dom = check_identity_dominance(&b).unwrap();
            assert!(dom.holds);
            assert!(dom.left.diagonal().iter().all(|v| *v == q(1, 1)));
            assert!(dom.right.diagonal().iter().all(|v| *v == q(1, 1)));
            witness |= dom.left != dom.right;

            let inv = permanental_inverse(&b).unwrap();
            assert!(permanent_ryser(&inv.entries).unwrap() * &inv.source_perm >= q(1, 1));
        }
    }
    assert!(witness, "B*B and BB* coincided on every instance");
}

#[test]
fn inverse_entries_follow_the_transposed_minor() {
    let b: Matrix<Q> = Matrix::from_int_rows([[2, 0, 1], [1, 3, 0], [0, 1, 4]]);
    let inv = permanental_inverse(&b).unwrap();
    let per = perm_by_permutations(&b);
    for i in 0..3 {
        for j in 0..3 {
            let rows: Vec<usize> = (0..3).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..3).filter(|&c| c != i).collect();
            assert_eq!(inv.entries[(i, j)], perm_by_permutations(&gather(&b, &rows, &cols)) / &per);
        }
    }
}

#[test]
fn minor_ratio_exhaustive() {
    let mut r = rng(22);
    for n in 1..=5 {
        for _ in 0..3 {
            let b = random_nonnegative(&mut r, n, 5);
            let inv = permanental_inverse(&b).unwrap();
            for s in IndexSet::all_subsets(n) {
                for t in IndexSet::all_subsets(n).filter(|t| t.len() == s.len()) {
                    let sides = minor_ratio_with(&b, &inv, &s, &t).unwrap();
                    assert!(sides.holds(), "n={n} S={s} T={t}");
                }
            }
        }
    }
}
