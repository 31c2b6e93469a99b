use kpcat_core::homological::{
    ext1_classes, ext_dims, realize_extension, standard_filtration, Category, CochainComplex,
};
use kpcat_core::kp::{kp_module, tilting_module, FullTilting};
use kpcat_core::perm::{Permutation, Weight};
use kpcat_core::ringel::{ringel_f, ringel_f_morphism, tensor_duality};
use kpcat_core::schubert::schubert_expand;
use kpcat_core::weightmod::WeightModule;
use num::{BigInt, ToPrimitive};
use proptest::prelude::*;

fn perm(s: &str) -> Permutation {
    Permutation::parse(s).unwrap()
}

fn std_module(w: &str, n: usize) -> WeightModule {
    kp_module(&perm(w), n).unwrap().module
}

#[test]
fn ringel_functor_is_contravariant() {
    let t = FullTilting::new(3);
    let mods: Vec<WeightModule> = Permutation::all(3)
        .iter()
        .map(|w| kp_module(w, 3).unwrap().module)
        .collect();
    let images: Vec<_> = mods.iter().map(|m| ringel_f(m, &t)).collect();
    let mut composites = 0;
    for a in 0..mods.len() {
        for b in 0..mods.len() {
            for c in 0..mods.len() {
                for f in mods[a].hom_space(&mods[b]) {
                    for g in mods[b].hom_space(&mods[c]) {
                        let fgf = ringel_f_morphism(&g.mul(&f), &images[a], &images[c]).unwrap();
                        let ff = ringel_f_morphism(&f, &images[a], &images[b]).unwrap();
                        let fg = ringel_f_morphism(&g, &images[b], &images[c]).unwrap();
                        assert_eq!(fgf, ff.mul(&fg));
                        composites += 1;
                    }
                }
            }
        }
    }
    assert!(composites > 0);
}

#[test]
fn nonsplit_extension_and_exactness_of_f() {
    let m = std_module("231", 3);
    let nm = std_module("312", 3);
    let classes = ext1_classes(&m, &nm);
    assert_eq!(classes.len(), 1);
    let ext = realize_extension(&m, &nm, &classes[0]).unwrap();
    assert!(!ext.splits(&m));
    assert_eq!(ext.module.character(), &m.character() + &nm.character());
    assert!(nm.is_morphism_to(&ext.module, &ext.inclusion));
    assert!(ext.module.is_morphism_to(&m, &ext.projection));
    let filt = standard_filtration(&ext.module).unwrap();
    assert_eq!(filt.multiplicity(&Weight(vec![1, 1, 0])), 1);
    assert_eq!(filt.multiplicity(&Weight(vec![2, 0, 0])), 1);

    let t = FullTilting::new(3);
    let (fm, fx, fnn) = (ringel_f(&m, &t), ringel_f(&ext.module, &t), ringel_f(&nm, &t));
    assert_eq!(fx.module.dim(), fm.module.dim() + fnn.module.dim());
    let f_incl = ringel_f_morphism(&ext.inclusion, &fnn, &fx).unwrap();
    let f_proj = ringel_f_morphism(&ext.projection, &fx, &fm).unwrap();
    assert_eq!(f_incl.rank(), fnn.module.dim());
    assert_eq!(f_proj.rank(), fm.module.dim());
    assert!(f_incl.mul(&f_proj).is_zero());
    assert!(fx.module.is_morphism_to(&fnn.module, &f_incl));
    assert!(fm.module.is_morphism_to(&fx.module, &f_proj));
}

#[test]
fn ext_is_stable_under_one_times() {
    for w in Permutation::all(3) {
        for v in Permutation::all(3) {
            let small = ext_dims(&kp_module(&w, 3).unwrap().module, &kp_module(&v, 3).unwrap().module, 1);
            let big = ext_dims(
                &kp_module(&w.one_times(), 4).unwrap().module,
                &kp_module(&v.one_times(), 4).unwrap().module,
                1,
            );
            assert_eq!(small, big, "({w}, {v})");
        }
    }
}

#[test]
fn envelopes_of_standards_are_indecomposable_tiltings() {
    let cat = Category::new(3);
    for l in cat.weights() {
        let env = cat.tilting_envelope(&cat.standard(l).unwrap().module).unwrap();
        let t = tilting_module(l).unwrap();
        assert!(env.module.is_isomorphic(&t).is_witness(), "{l}");
        assert_eq!(cat.filtration_multiplicity(&t, l).unwrap(), 1);
    }
}

#[test]
fn full_tilting_filtration_matches_schubert_expansion() {
    for n in [2, 3] {
        let t = FullTilting::new(n);
        let filt = standard_filtration(&t.module).unwrap();
        let expansion = schubert_expand(&t.module.character()).unwrap();
        let total: usize = expansion.values().map(|c| c.to_usize().unwrap()).sum();
        assert_eq!(filt.layers.iter().map(|l| l.multiplicity).sum::<usize>(), total);
        for (w, c) in &expansion {
            let code = w.code(n).unwrap();
            assert_eq!(BigInt::from(filt.multiplicity(&code)), *c, "n = {n}, w = {w}");
        }
    }
}

#[test]
fn tensor_duality_has_nontrivial_instances() {
    let t = FullTilting::new(3);
    let mut nonzero = 0;
    for w in Permutation::all(3) {
        for v in Permutation::all(3) {
            let td = tensor_duality(&t, &kp_module(&w, 3).unwrap().module, &kp_module(&v, 3).unwrap().module).unwrap();
            assert!(td.is_isomorphism(), "({w}, {v})");
            if td.source.dim() > 0 {
                nonzero += 1;
            }
        }
    }
    assert_eq!(nonzero, 19);
}

fn perm_in(n: usize) -> impl Strategy<Value = Permutation> {
    let all = Permutation::all(n);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn json_round_trip(w in perm_in(4)) {
        let m = kp_module(&w, 4).unwrap().module;
        let text = serde_json::to_string(&m.to_json()).unwrap();
        let back = WeightModule::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn cochains_form_a_complex_with_matching_euler_characteristic(w in perm_in(3), v in perm_in(3)) {
        let m = kp_module(&w, 3).unwrap().module;
        let nm = kp_module(&v, 3).unwrap().module;
        let c = CochainComplex::new(&m, &nm, 3);
        prop_assert!(c.is_complex());
        let euler = |f: &dyn Fn(usize) -> usize| (0..=3).map(|d| if d % 2 == 0 { f(d) as i64 } else { -(f(d) as i64) }).sum::<i64>();
        prop_assert_eq!(euler(&|d| c.dim(d)), euler(&|d| c.cohomology_dim(d)));
    }

    #[test]
    fn characters_respect_tensor_and_dual(w in perm_in(3), v in perm_in(3)) {
        let m = kp_module(&w, 3).unwrap().module;
        let nm = kp_module(&v, 3).unwrap().module;
        prop_assert_eq!(m.tensor(&nm).character(), m.character().mul(&nm.character()));
        prop_assert_eq!(m.dual().character(), m.character().invert_vars());
    }
}
