//! Deliberately broken inputs must be rejected by the checks that the
//! acceptance suite relies on.

use kpcat_core::homological::{ext1_classes, realize_extension, standard_filtration, Category};
use kpcat_core::kp::{check_lemma_pqpq, FullTilting};
use kpcat_core::linalg::{q, SparseMatrix, SparseVec};
use kpcat_core::perm::{lambda_n, Permutation, Weight};
use kpcat_core::ringel::{ringel_f_graded, verify_ringel_graded};
use kpcat_core::weightmod::{roots, WeightModule};
use kpcat_core::Error;

fn flip_sign(t: &FullTilting, k: usize) -> FullTilting {
    let d = SparseMatrix::from_triplets(
        t.dim(),
        t.dim(),
        (0..t.dim()).map(|i| (i, i, q(if i == k { -1 } else { 1 }))).collect(),
    );
    t.with_swap(d.mul(&t.swap))
}

fn commutes(t: &FullTilting) -> bool {
    let n = t.n();
    roots(n).into_iter().all(|(p, qq)| {
        let e = t.module.gen(p, qq);
        roots(n).into_iter().all(|(a, b)| {
            let ep = t.eprime(a, b);
            e.mul(ep) == ep.mul(e)
        })
    })
}

// At n = 3 every single sign flip is a change of basis that keeps `[e, e'] = 0`;
// at n = 4 most are not.
#[test]
fn corrupted_swap_breaks_commutation() {
    let t3 = FullTilting::new(3);
    assert!((0..t3.dim()).all(|k| commutes(&flip_sign(&t3, k))));
    let t = FullTilting::new(4);
    assert!(commutes(&t));
    let k = t.monomial_index(&[(1, 1), (1, 3), (2, 2)]).unwrap();
    assert!(!commutes(&flip_sign(&t, k)));
}

#[test]
fn corrupted_swap_breaks_pqpq_lemma() {
    let t = FullTilting::new(4);
    let k = t.monomial_index(&[(1, 1), (1, 3), (2, 2)]).unwrap();
    let bad = flip_sign(&t, k);
    let mut failures = 0;
    for w in Permutation::all(4).into_iter().filter(|w| w.length() <= 3) {
        for i in 1..4 {
            assert!(check_lemma_pqpq(&t, &w, i).unwrap().passed());
            if !check_lemma_pqpq(&bad, &w, i).unwrap().passed() {
                failures += 1;
            }
        }
    }
    assert!(failures > 0);
}

#[test]
fn simple_module_is_not_standardly_filtered() {
    let k = WeightModule::one_dim(&Weight(vec![0, 1, 0]));
    let cat = Category::new(3);
    assert!(cat.contains(&k));
    assert!(!cat.has_standard_filtration(&k));
    assert!(matches!(standard_filtration(&k), Err(Error::NotStandardlyFiltered(_))));
    assert!(!cat.is_tilting(&k));
}

// Nonsplit extensions among simples, standards and costandards over Λ_3 are
// all filtered: the only non-standard simple, `K_(0,1,0)`, cannot be a
// nonsplit submodule there. Both filtration tests must agree on them and on
// modules built around `K_(0,1,0)`.
#[test]
fn filtration_tests_agree_on_extensions() {
    let cat = Category::new(3);
    let mut mods = Vec::new();
    for l in lambda_n(3) {
        mods.push(WeightModule::one_dim(&l));
        mods.push(cat.standard(&l).unwrap().module.clone());
        mods.push(cat.costandard(&l).unwrap().clone());
    }
    let mut nonsplit = 0;
    for m in &mods {
        for nm in &mods {
            for class in ext1_classes(m, nm) {
                let ext = realize_extension(m, nm, &class).unwrap();
                assert!(!ext.splits(m));
                nonsplit += 1;
                assert!(standard_filtration(&ext.module).is_ok());
                assert!(cat.has_standard_filtration(&ext.module));
            }
        }
    }
    assert!(nonsplit > 0);

    let simple = WeightModule::one_dim(&Weight(vec![0, 1, 0]));
    let s132 = cat.standard(&Weight(vec![0, 1, 0])).unwrap().module.clone();
    let hi = (0..s132.dim())
        .find(|&i| s132.weight(i) == &Weight(vec![1, 0, 0]))
        .unwrap();
    let bottom = s132.submodule_generated(&[SparseVec::unit(hi)]);
    let top = s132.quotient(&bottom.span).unwrap().module;
    assert!(top.is_isomorphic(&simple).is_witness());
    for bad in [simple.clone(), s132.direct_sum(&simple), top.direct_sum(&s132)] {
        assert!(standard_filtration(&bad).is_err());
        assert!(!cat.has_standard_filtration(&bad));
    }
}

#[test]
fn reversed_grading_fails_ringel_check() {
    let n = 3;
    let reverse = |w: &Weight| Weight(w.0.iter().rev().cloned().collect());
    let report = verify_ringel_graded(n, None, &reverse).unwrap();
    assert!(!report.passed());
    let t = FullTilting::new(n);
    let cat = Category::new(n);
    let m = &cat.standard(&Weight(vec![1, 0, 0])).unwrap().module;
    let fm = ringel_f_graded(m, &t, &reverse);
    assert!(fm.module.validate().is_err());
}
