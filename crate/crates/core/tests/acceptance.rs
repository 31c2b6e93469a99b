//! Acceptance suite: each numbered criterion prints one PASS/FAIL line with
//! its running time and budget. Exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use kpcat_core::homological::indecomposable_by_end;
use kpcat_core::homological::{ext_dim, standard_filtration, Category};
use kpcat_core::kp::{check_lemma_pqpq, kp_module, tilting_module, FullTilting};
use kpcat_core::linalg::Echelon;
use kpcat_core::perm::{lambda_n, Permutation, Weight};
use kpcat_core::ringel::{
    conjecture_dims, verify_ext_symmetry, verify_hw_axioms, verify_ringel, verify_tensor_dual, Report,
};
use kpcat_core::schubert::{cauchy_product, iota_hn, reduce_hn, schubert_poly, HnElement};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn report_outcome(r: &Report) -> Outcome {
    let failed: Vec<String> = r
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    if failed.is_empty() {
        Ok(format!("{} checks", r.checks.len()))
    } else {
        Err(failed.join(" | "))
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn character_theorem() -> Outcome {
    let all = Permutation::all(4);
    for w in &all {
        let kp = kp_module(w, 4).map_err(|e| e.to_string())?;
        let s = schubert_poly(w, 4).map_err(|e| e.to_string())?;
        ensure(kp.module.character() == s, format!("ch S_{w} differs"))?;
    }
    Ok(format!("{} permutations", all.len()))
}

fn cauchy_identity() -> Outcome {
    for n in [3, 4] {
        let (lhs, rhs) = cauchy_product(n);
        ensure(lhs == rhs, format!("n = {n}"))?;
    }
    Ok("n = 3, 4".into())
}

fn involution() -> Outcome {
    for w in Permutation::all(4) {
        let image = iota_hn(&HnElement::basis(&w, 4).unwrap());
        let expected = HnElement::basis(&w.conjugate_w0(4).unwrap(), 4).unwrap();
        ensure(image == expected, format!("ι(S_{w})"))?;
    }
    Ok("24 permutations".into())
}

fn vanishing() -> Outcome {
    let mut codes: Vec<Weight> = Vec::new();
    for a in 0..=4 {
        for b in 0..=4 {
            for c in 0..=4 {
                let code = Weight(vec![a, b, c]);
                if !code.in_lambda() {
                    codes.push(code);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let sample: Vec<&Weight> = codes.choose_multiple(&mut rng, 10).collect();
    for code in &sample {
        let w = Permutation::from_code(code).unwrap();
        ensure(!w.in_s_n(3), format!("{code} lies in S_3"))?;
        let red = reduce_hn(&schubert_poly(&w, 3).unwrap(), 3).map_err(|e| e.to_string())?;
        ensure(red.is_zero(), format!("S_{w} survives"))?;
    }
    Ok(format!(
        "codes {}",
        sample.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
    ))
}

fn hw_axioms() -> Outcome {
    report_outcome(&verify_hw_axioms(3).map_err(|e| e.to_string())?)
}

fn orthogonality() -> Outcome {
    let cat = Category::new(3);
    let lam = lambda_n(3);
    let mut count = 0;
    for a in &lam {
        for b in &lam {
            let s = &cat.standard(a).unwrap().module;
            let c = cat.costandard(b).unwrap();
            let hom = ext_dim(s, c, 0);
            ensure(hom == usize::from(a == b), format!("Hom(Δ{a}, ∇{b}) = {hom}"))?;
            ensure(hom == s.hom_space(c).len(), "Ext^0 differs from Hom")?;
            for i in [1, 2] {
                let d = ext_dim(s, c, i);
                ensure(d == 0, format!("Ext^{i}(Δ{a}, ∇{b}) = {d}"))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} pairs, degrees 0..=2"))
}

fn ringel_self_duality() -> Outcome {
    let r3 = verify_ringel(3, None).map_err(|e| e.to_string())?;
    report_outcome(&r3)?;
    let sample: Vec<Permutation> = ["1342", "2413", "3142", "4231"]
        .iter()
        .map(|s| Permutation::parse(s).unwrap())
        .collect();
    let r4 = verify_ringel(4, Some(sample)).map_err(|e| e.to_string())?;
    report_outcome(&r4)?;
    Ok("S_3 exhaustive, 4 samples in S_4, dim End(T) = 8, 64".into())
}

fn ext_symmetry() -> Outcome {
    report_outcome(&verify_ext_symmetry(3, 2, Some(1)).map_err(|e| e.to_string())?)
}

fn tensor_duality() -> Outcome {
    report_outcome(&verify_tensor_dual(3, None).map_err(|e| e.to_string())?)
}

fn lemma_pqpq() -> Outcome {
    let mut cases = 0;
    let t3 = FullTilting::new(3);
    for w in Permutation::all(3) {
        for i in 1..3 {
            let r = check_lemma_pqpq(&t3, &w, i).map_err(|e| e.to_string())?;
            ensure(r.passed(), format!("w = {w}, i = {i}"))?;
            cases += r.cases.len();
        }
    }
    let t4 = FullTilting::new(4);
    let mut perms = 0;
    for w in Permutation::all(4).into_iter().filter(|w| w.length() <= 3) {
        perms += 1;
        for i in 1..4 {
            let r = check_lemma_pqpq(&t4, &w, i).map_err(|e| e.to_string())?;
            ensure(r.passed(), format!("w = {w}, i = {i}"))?;
            cases += r.cases.len();
        }
    }
    Ok(format!("{cases} cases, {perms} permutations in S_4"))
}

fn conjecture() -> Outcome {
    let mut lines = Vec::new();
    for (n, k) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        let row = conjecture_dims(n, k);
        ensure(
            row.matches(),
            format!(
                "(n, k) = ({n}, {k}): {} {:?} vs {} {:?}",
                row.dim, row.graded, row.expected, row.expected_graded
            ),
        )?;
        lines.push(format!("({n},{k})={}", row.dim));
    }
    for (n, k) in [(3, 3), (4, 2)] {
        let start = Instant::now();
        let row = conjecture_dims(n, k);
        println!(
            "    report ({n},{k}): dim {} graded {:?}; conjectured {} {:?}; {} [{:.1?}]",
            row.dim,
            row.graded,
            row.expected,
            row.expected_graded,
            if row.matches() { "agrees" } else { "differs" },
            start.elapsed()
        );
    }
    Ok(lines.join(" "))
}

fn tilting_machinery() -> Outcome {
    let cat = Category::new(3);
    for lambda in cat.weights() {
        let s = &cat.standard(lambda).unwrap().module;
        let env = cat.tilting_envelope(s).map_err(|e| e.to_string())?;
        ensure(
            cat.is_tilting(&env.module),
            format!("envelope of S_{lambda} is not tilting"),
        )?;
        ensure(
            s.is_morphism_to(&env.module, &env.injection),
            "injection is not a module map",
        )?;
        ensure(env.injection.rank() == s.dim(), "injection is not injective")?;
        let mut image = Echelon::new(env.module.dim());
        for c in env.injection.columns() {
            image.insert(c.clone());
        }
        let coker = env.module.quotient(&image).map_err(|e| e.to_string())?;
        let filt = standard_filtration(&coker.module).map_err(|e| format!("cokernel for {lambda}: {e}"))?;
        let interior = cat.interior(&cat.support(s).unwrap());
        for l in filt.labels() {
            ensure(
                interior.contains(&l),
                format!("cokernel label {l} outside (supp S_{lambda})°"),
            )?;
        }
        let res = cat.tilting_resolution(s).map_err(|e| e.to_string())?;
        ensure(res.is_exact(s), format!("resolution of S_{lambda} is not exact"))?;
        for t in &res.terms {
            ensure(cat.is_tilting(t), format!("resolution term for {lambda} not tilting"))?;
        }
        let t = tilting_module(lambda).unwrap();
        ensure(cat.is_tilting(&t), format!("T({lambda}) not tilting"))?;
        ensure(indecomposable_by_end(&t) == Some(true), format!("End T({lambda}) > 1"))?;
    }
    Ok(format!("{} weights", cat.weights().len()))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("character theorem on S_4", 120, character_theorem),
        ("Cauchy identity n = 3, 4", 10, cauchy_identity),
        ("involution ι on S_4", 30, involution),
        ("vanishing outside S_3", 10, vanishing),
        ("highest weight axioms over Λ_3", 300, hw_axioms),
        ("standard/costandard orthogonality over Λ_3", 300, orthogonality),
        ("Ringel self-duality", 300, ringel_self_duality),
        ("Ext symmetry and resolution oracle", 600, ext_symmetry),
        ("tensor–duality compatibility", 600, tensor_duality),
        ("pqpq lemma", 120, lemma_pqpq),
        ("tensor power counts", 600, conjecture),
        ("tilting envelopes and resolutions", 600, tilting_machinery),
    ];
    let mut failed = 0;
    for (k, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status}  {name}  [{:.2?} / {budget}s]  {detail}",
            k + 1,
            elapsed
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 12 criteria passed");
}
