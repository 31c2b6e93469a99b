//! Schubert polynomials, expansion in the Schubert basis, the coinvariant
//! ring `H_n` and its involution.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::perm::{OrderKey, Permutation, Weight};
use crate::poly::MultiPoly;

type Cache = RwLock<HashMap<Permutation, Arc<MultiPoly>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `𝔖_w` in `m` variables, `m` the window length of `w` (at least one).
fn schubert_in_window(w: &Permutation) -> Arc<MultiPoly> {
    if let Some(p) = cache().read().unwrap().get(w) {
        return p.clone();
    }
    let m = w.window_len().max(1);
    let window = w.padded(m);
    let poly = match (1..m).find(|&i| window[i - 1] < window[i]) {
        None => {
            // decreasing window: x1^{w(1)-1} x2^{w(2)-1} ...
            let exp: Vec<i32> = window.iter().map(|&v| v as i32 - 1).collect();
            MultiPoly::monomial(exp, 1)
        }
        Some(i) => {
            let up = w.compose(&Permutation::simple(i));
            schubert_in_window(&up).divided_difference(i)
        }
    };
    let poly = Arc::new(poly);
    cache()
        .write()
        .unwrap()
        .entry(w.clone())
        .or_insert_with(|| poly.clone())
        .clone()
}

/// The Schubert polynomial `𝔖_w` as a polynomial in `x_1, ..., x_n`.
pub fn schubert_poly(w: &Permutation, n: usize) -> Result<MultiPoly> {
    if !w.in_s_inf(n) {
        return Err(Error::NotInSInfinity(w.to_string(), n));
    }
    schubert_in_window(w).resize(n)
}

/// `𝔖_λ := ch(𝒮_λ)` for an arbitrary `λ ∈ Z^n`, a Laurent polynomial.
pub fn schubert_of_weight(lambda: &Weight) -> MultiPoly {
    let n = lambda.n();
    let k = (-lambda.0.iter().copied().min().unwrap_or(0)).max(0);
    let w = Permutation::from_code(&lambda.shifted(k)).expect("nonnegative after shift");
    schubert_poly(&w, n)
        .expect("codes give elements of S_inf^(n)")
        .shift(&vec![-k; n])
}

/// Writes `f` (nonnegative exponents) as `Σ c_w 𝔖_w`.
///
/// Repeatedly removes the leading term at a `≺`-maximal exponent, breaking
/// ties by the lexicographically largest exponent.
pub fn schubert_expand(f: &MultiPoly) -> Result<BTreeMap<Permutation, BigInt>> {
    let n = f.nvars();
    if !f.is_nonnegative_exponent() {
        return Err(Error::Internal("schubert_expand needs nonnegative exponents".into()));
    }
    let mut rest = f.clone();
    let mut out = BTreeMap::new();
    let degree = f.max_degree().max(0) as u64;
    let monomials = binomial(degree + n as u64, n as u64).max(1);
    let bound = (f.len() as u64).max(1).saturating_mul(monomials);
    let mut steps = 0u64;
    while !rest.is_zero() {
        steps += 1;
        if steps > bound {
            return Err(Error::Internal(
                "Schubert expansion did not terminate; ordering is inconsistent".into(),
            ));
        }
        let lead = maximal_exponent(&rest);
        let c = rest.coeff(&lead);
        let w = Permutation::from_code(&Weight(lead)).expect("nonnegative");
        let s = schubert_poly(&w, n)?;
        rest.add_assign_scaled(&s, &-c.clone());
        *out.entry(w).or_insert_with(BigInt::zero) += c;
    }
    out.retain(|_, c: &mut BigInt| !c.is_zero());
    Ok(out)
}

fn binomial(n: u64, k: u64) -> u64 {
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn maximal_exponent(f: &MultiPoly) -> Vec<i32> {
    let exps: Vec<&Vec<i32>> = f.terms().keys().rev().collect();
    let keys: Vec<OrderKey> = exps.iter().map(|e| OrderKey::new(&Weight((*e).clone()))).collect();
    for (i, ki) in keys.iter().enumerate() {
        if !keys.iter().any(|kj| ki.precedes(kj)) {
            return exps[i].clone();
        }
    }
    unreachable!("a finite poset has maximal elements")
}

/// An element `Σ c_w 𝔖_w` of `H_n`, `w ∈ S_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnElement {
    n: usize,
    coeffs: BTreeMap<Permutation, BigInt>,
}

impl HnElement {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(w: &Permutation, n: usize) -> Result<Self> {
        if !w.in_s_n(n) {
            return Err(Error::InvalidPermutation(format!("{w} is not in S_{n}")));
        }
        Ok(Self {
            n,
            coeffs: BTreeMap::from([(w.clone(), BigInt::one())]),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &BTreeMap<Permutation, BigInt> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The representative `Σ c_w 𝔖_w` as a polynomial.
    pub fn to_poly(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(self.n);
        for (w, c) in &self.coeffs {
            out.add_assign_scaled(&schubert_poly(w, self.n).expect("w in S_n"), c);
        }
        out
    }

    pub fn mul(&self, other: &HnElement) -> HnElement {
        reduce_hn(&self.to_poly().mul(&other.to_poly()), self.n).expect("nonnegative product")
    }

    pub fn add(&self, other: &HnElement) -> HnElement {
        let mut coeffs = self.coeffs.clone();
        for (w, c) in &other.coeffs {
            *coeffs.entry(w.clone()).or_insert_with(BigInt::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        HnElement { n: self.n, coeffs }
    }
}

/// Class of `f` in `H_n`: expand in Schubert polynomials and drop every
/// `w ∉ S_n`.
pub fn reduce_hn(f: &MultiPoly, n: usize) -> Result<HnElement> {
    let f = f.resize(n)?;
    let mut coeffs = schubert_expand(&f)?;
    coeffs.retain(|w, _| w.in_s_n(n));
    Ok(HnElement { n, coeffs })
}

/// Class in `H_n` of a module character. Characters of modules with weights
/// in `Z_{>=0}^n` are ordinary polynomials; anything else is rejected.
pub fn reduce_character(ch: &MultiPoly) -> Result<HnElement> {
    if !ch.is_nonnegative_exponent() {
        return Err(Error::Internal("character has negative exponents".into()));
    }
    reduce_hn(ch, ch.nvars())
}

/// The involution `x_i ↦ −x_{n+1−i}` on `H_n`, computed on a polynomial
/// representative.
pub fn iota_hn(e: &HnElement) -> HnElement {
    let n = e.n;
    let images: Vec<MultiPoly> = (1..=n)
        .map(|i| MultiPoly::var(n, n + 1 - i).scaled(&-BigInt::one()))
        .collect();
    let f = e.to_poly().substitute(&images);
    reduce_hn(&f, n).expect("substitution keeps exponents nonnegative")
}

/// Both sides of `Σ_{w ∈ S_n} 𝔖_w(x) 𝔖_{w w0}(y) = Π_{i+j ≤ n} (x_i + y_j)`
/// in the variables `x_1..x_n, y_1..y_n` (the `y_j` are variables `n+j`).
pub fn cauchy_product(n: usize) -> (MultiPoly, MultiPoly) {
    let vars = 2 * n;
    let w0 = Permutation::longest(n);
    let embed_x = |f: &MultiPoly| -> MultiPoly {
        let mut out = MultiPoly::zero(vars);
        for (e, c) in f.terms() {
            let mut e2 = e.clone();
            e2.resize(vars, 0);
            out.add_term(e2, c.clone());
        }
        out
    };
    let embed_y = |f: &MultiPoly| -> MultiPoly {
        let mut out = MultiPoly::zero(vars);
        for (e, c) in f.terms() {
            let mut e2 = vec![0; n];
            e2.extend(e.iter().copied());
            out.add_term(e2, c.clone());
        }
        out
    };
    let mut lhs = MultiPoly::zero(vars);
    for w in Permutation::all(n) {
        let sx = embed_x(&schubert_poly(&w, n).unwrap());
        let sy = embed_y(&schubert_poly(&w.compose(&w0), n).unwrap());
        lhs = &lhs + &sx.mul(&sy);
    }
    let mut rhs = MultiPoly::one(vars);
    for i in 1..=n {
        for j in 1..=n {
            if i + j <= n {
                rhs = rhs.mul(&(&MultiPoly::var(vars, i) + &MultiPoly::var(vars, n + j)));
            }
        }
    }
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    fn poly(s: &str, n: usize) -> MultiPoly {
        MultiPoly::parse(s, n).unwrap()
    }

    #[test]
    fn small_schubert_polynomials() {
        assert_eq!(schubert_poly(&Permutation::identity(), 3).unwrap(), poly("1", 3));
        assert_eq!(schubert_poly(&perm("321"), 3).unwrap(), poly("x1^2*x2", 3));
        assert_eq!(schubert_poly(&perm("132"), 3).unwrap(), poly("x1+x2", 3));
        assert_eq!(schubert_poly(&perm("231"), 3).unwrap(), poly("x1*x2", 3));
        assert_eq!(schubert_poly(&perm("312"), 3).unwrap(), poly("x1^2", 3));
        assert_eq!(
            schubert_poly(&perm("1432"), 4).unwrap(),
            poly("x1^2*x2 + x1^2*x3 + x1*x2^2 + x1*x2*x3 + x2^2*x3", 4)
        );
        assert!(schubert_poly(&perm("1243"), 2).is_err());
    }

    #[test]
    fn leading_term_is_the_code() {
        for w in Permutation::all(4) {
            let s = schubert_poly(&w, 4).unwrap();
            let code = w.code(4).unwrap();
            assert_eq!(s.coeff(&code.0), BigInt::one());
            for e in s.terms().keys() {
                let l = Weight(e.clone());
                assert!(crate::perm::precedes_eq(&l, &code), "{w}: {l} vs {code}");
            }
        }
    }

    #[test]
    fn expansion_examples() {
        assert!(schubert_expand(&MultiPoly::zero(3)).unwrap().is_empty());
        let e = schubert_expand(&poly("x1*x2", 3)).unwrap();
        assert_eq!(e, BTreeMap::from([(perm("231"), BigInt::one())]));
        let f = poly("(x1+1)^2*(x2+1)", 3);
        let e = schubert_expand(&f).unwrap();
        let mut total = MultiPoly::zero(3);
        let mut at_one = BigInt::zero();
        for (w, c) in &e {
            let s = schubert_poly(w, 3).unwrap();
            at_one += c * s.specialize_ones();
            total.add_assign_scaled(&s, c);
        }
        assert_eq!(total, f);
        assert_eq!(at_one, BigInt::from(8));
    }

    #[test]
    fn expansion_inverts_schubert_on_s4_and_beyond() {
        for w in Permutation::all(4) {
            let e = schubert_expand(&schubert_poly(&w, 4).unwrap()).unwrap();
            assert_eq!(e, BTreeMap::from([(w.clone(), BigInt::one())]));
        }
        // codes in S_inf^(4) with entries <= 4
        for code in [[4, 0, 1, 2], [1, 4, 0, 3], [2, 2, 2, 2], [0, 0, 4, 1], [3, 1, 4, 0]] {
            let w = Permutation::from_code(&Weight(code.to_vec())).unwrap();
            let e = schubert_expand(&schubert_poly(&w, 4).unwrap()).unwrap();
            assert_eq!(e, BTreeMap::from([(w, BigInt::one())]));
        }
    }

    #[test]
    fn reduction_examples() {
        assert!(reduce_hn(&poly("x1^3", 3), 3).unwrap().is_zero());
        assert!(reduce_hn(&poly("x1+x2+x3", 3), 3).unwrap().is_zero());
        for w in Permutation::all(3) {
            let r = reduce_hn(&schubert_poly(&w, 3).unwrap(), 3).unwrap();
            assert_eq!(r, HnElement::basis(&w, 3).unwrap());
        }
    }

    #[test]
    fn iota_examples() {
        let w0 = HnElement::basis(&Permutation::longest(3), 3).unwrap();
        assert_eq!(iota_hn(&w0), w0);
        let s1 = HnElement::basis(&perm("213"), 3).unwrap();
        assert_eq!(iota_hn(&s1), HnElement::basis(&perm("132"), 3).unwrap());
    }

    #[test]
    fn cauchy_small() {
        let (l, r) = cauchy_product(1);
        assert_eq!(l, MultiPoly::one(2));
        assert_eq!(r, MultiPoly::one(2));
        let (l, r) = cauchy_product(2);
        assert_eq!(l, poly("x1+x3", 4));
        assert_eq!(l, r);
        let (l, r) = cauchy_product(3);
        assert_eq!(l, r);
    }

    fn h3_element() -> impl Strategy<Value = HnElement> {
        proptest::collection::vec(-2i64..3, 6).prop_map(|cs| {
            let mut e = HnElement::zero(3);
            for (w, c) in Permutation::all(3).iter().zip(cs) {
                if c != 0 {
                    e.coeffs.insert(w.clone(), BigInt::from(c));
                }
            }
            e
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn reduction_is_multiplicative(
            a in proptest::collection::vec((proptest::collection::vec(0i32..3, 3), -2i64..3), 0..4),
            b in proptest::collection::vec((proptest::collection::vec(0i32..3, 3), -2i64..3), 0..4),
        ) {
            let build = |ts: &Vec<(Vec<i32>, i64)>| {
                let mut f = MultiPoly::zero(3);
                for (e, c) in ts { f.add_term(e.clone(), BigInt::from(*c)); }
                f
            };
            let (f, g) = (build(&a), build(&b));
            let lhs = reduce_hn(&f.mul(&g), 3).unwrap();
            let rhs = reduce_hn(&f, 3).unwrap().mul(&reduce_hn(&g, 3).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn iota_is_an_involutive_ring_map(a in h3_element(), b in h3_element()) {
            prop_assert_eq!(iota_hn(&iota_hn(&a)), a.clone());
            prop_assert_eq!(iota_hn(&a.mul(&b)), iota_hn(&a).mul(&iota_hn(&b)));
            prop_assert_eq!(iota_hn(&a.add(&b)), iota_hn(&a).add(&iota_hn(&b)));
        }
    }
}
