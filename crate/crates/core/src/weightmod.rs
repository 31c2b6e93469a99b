//! Finite-dimensional weight modules over the upper-triangular Lie algebra.
//!
//! A module is a basis tagged by weights in `Z^n` together with one sparse
//! matrix per positive root `e_pq`, `p < q`. The roots are listed in
//! lexicographic order of `(p, q)`; see [`roots`].

use std::collections::{BTreeMap, HashMap};

use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{kernel_of_rows, q, q_parse, q_to_string, Echelon, SparseMatrix, SparseVec, Q};
use crate::perm::Weight;
use crate::poly::MultiPoly;

/// A module homomorphism, stored as a `target.dim() × source.dim()` matrix.
pub type Morphism = SparseMatrix;

/// Positive roots `(p, q)`, `1 <= p < q <= n`, in lexicographic order.
pub fn roots(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for p in 1..=n {
        for q in p + 1..=n {
            out.push((p, q));
        }
    }
    out
}

pub fn root_index(n: usize, p: usize, q: usize) -> usize {
    assert!(1 <= p && p < q && q <= n, "no root e_{p}{q} for n = {n}");
    // roots with first index < p come first
    let before: usize = (1..p).map(|a| n - a).sum();
    before + (q - p - 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightModule {
    n: usize,
    weights: Vec<Weight>,
    gens: Vec<SparseMatrix>,
    distinguished: Option<usize>,
}

impl WeightModule {
    /// Builds a module after checking shapes; call [`Self::validate`] for
    /// the algebraic identities.
    pub fn new(n: usize, weights: Vec<Weight>, gens: Vec<SparseMatrix>, distinguished: Option<usize>) -> Result<Self> {
        let dim = weights.len();
        if let Some(w) = weights.iter().find(|w| w.n() != n) {
            return Err(Error::RankMismatch {
                expected: n,
                got: w.n(),
            });
        }
        if gens.len() != roots(n).len() {
            return Err(Error::InvalidModule(format!(
                "expected {} generator matrices, got {}",
                roots(n).len(),
                gens.len()
            )));
        }
        if gens.iter().any(|g| g.nrows() != dim || g.ncols() != dim) {
            return Err(Error::InvalidModule("generator matrix of wrong size".into()));
        }
        if let Some(d) = distinguished {
            if d >= dim {
                return Err(Error::InvalidIndex {
                    what: "distinguished generator",
                    index: d,
                });
            }
        }
        Ok(Self {
            n,
            weights,
            gens,
            distinguished,
        })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            weights: Vec::new(),
            gens: vec![SparseMatrix::zero(0, 0); roots(n).len()],
            distinguished: None,
        }
    }

    /// `K_λ`.
    pub fn one_dim(lambda: &Weight) -> Self {
        let n = lambda.n();
        Self {
            n,
            weights: vec![lambda.clone()],
            gens: vec![SparseMatrix::zero(1, 1); roots(n).len()],
            distinguished: Some(0),
        }
    }

    /// `K^i = span(u_1, ..., u_i) ⊂ K^n` with `e_pq u_j = δ_qj u_p`.
    pub fn truncated_vector(n: usize, i: usize) -> Self {
        assert!(i <= n);
        let weights = (1..=i).map(|j| Weight::unit(n, j)).collect();
        let gens = roots(n)
            .into_iter()
            .map(|(p, qq)| {
                let t = if qq <= i {
                    vec![(p - 1, qq - 1, q(1))]
                } else {
                    Vec::new()
                };
                SparseMatrix::from_triplets(i, i, t)
            })
            .collect();
        Self {
            n,
            weights,
            gens,
            distinguished: if i > 0 { Some(i - 1) } else { None },
        }
    }

    pub fn vector_rep(n: usize) -> Self {
        Self::truncated_vector(n, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &Weight {
        &self.weights[i]
    }

    pub fn gens(&self) -> &[SparseMatrix] {
        &self.gens
    }

    /// Matrix of `e_pq`.
    pub fn gen(&self, p: usize, q: usize) -> &SparseMatrix {
        &self.gens[root_index(self.n, p, q)]
    }

    pub fn distinguished(&self) -> Option<usize> {
        self.distinguished
    }

    pub fn with_distinguished(mut self, d: Option<usize>) -> Self {
        self.distinguished = d;
        self
    }

    /// Basis indices grouped by weight.
    pub fn weight_spaces(&self) -> BTreeMap<Weight, Vec<usize>> {
        let mut out: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (i, w) in self.weights.iter().enumerate() {
            out.entry(w.clone()).or_default().push(i);
        }
        out
    }

    pub fn weight_space_dim(&self, lambda: &Weight) -> usize {
        self.weights.iter().filter(|w| *w == lambda).count()
    }

    /// `ch(M) = Σ dim M_λ x^λ`, a Laurent polynomial.
    pub fn character(&self) -> MultiPoly {
        let mut ch = MultiPoly::zero(self.n);
        for w in &self.weights {
            ch.add_term(w.0.clone(), BigInt::one());
        }
        ch
    }

    /// Splits `v` into its weight components.
    pub fn weight_components(&self, v: &SparseVec) -> BTreeMap<Weight, SparseVec> {
        let mut parts: BTreeMap<Weight, Vec<(usize, Q)>> = BTreeMap::new();
        for (i, c) in v.entries() {
            parts.entry(self.weights[*i].clone()).or_default().push((*i, c.clone()));
        }
        parts.into_iter().map(|(w, p)| (w, SparseVec::from_pairs(p))).collect()
    }

    /// Checks the weight-shift property, the commutator relations and
    /// nilpotency; reports the first violation.
    pub fn validate(&self) -> Result<()> {
        let rs = roots(self.n);
        for (k, &(p, qq)) in rs.iter().enumerate() {
            let alpha = Weight::alpha(self.n, p, qq);
            for (r, c, _) in self.gens[k].triplets() {
                if self.weights[r] != &self.weights[c] + &alpha {
                    return Err(Error::InvalidModule(format!(
                        "weight shift: e_{p}_{qq} maps basis vector {c} (weight {}) to {r} (weight {})",
                        self.weights[c], self.weights[r]
                    )));
                }
            }
        }
        for (a, &(p, qq)) in rs.iter().enumerate() {
            for (b, &(r, s)) in rs.iter().enumerate() {
                if b <= a {
                    continue;
                }
                let lhs = self.gens[a].mul(&self.gens[b]).sub(&self.gens[b].mul(&self.gens[a]));
                let mut rhs = SparseMatrix::zero(self.dim(), self.dim());
                if qq == r {
                    rhs = rhs.add(self.gen(p, s));
                }
                if s == p {
                    rhs = rhs.sub(self.gen(r, qq));
                }
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "bracket relation [e_{p}_{qq}, e_{r}_{s}]"
                    )));
                }
            }
        }
        for (k, &(p, qq)) in rs.iter().enumerate() {
            if !self.gens[k].pow(self.dim().max(1)).is_zero() {
                return Err(Error::InvalidModule(format!("nilpotency of e_{p}_{qq}")));
            }
        }
        Ok(())
    }

    /// `M ⊗ K_λ`.
    pub fn twist(&self, lambda: &Weight) -> Self {
        Self {
            n: self.n,
            weights: self.weights.iter().map(|w| w + lambda).collect(),
            gens: self.gens.clone(),
            distinguished: self.distinguished,
        }
    }

    /// `M ⊗ N` with basis `m_i ⊗ n_j` at index `i * dim N + j`.
    pub fn tensor(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut weights = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.weights {
            for b in &other.weights {
                weights.push(a + b);
            }
        }
        let (ia, ib) = (SparseMatrix::identity(self.dim()), SparseMatrix::identity(other.dim()));
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(ea, eb)| ea.kron(&ib).add(&ia.kron(eb)))
            .collect();
        let distinguished = match (self.distinguished, other.distinguished) {
            (Some(a), Some(b)) => Some(a * other.dim() + b),
            _ => None,
        };
        Self {
            n: self.n,
            weights,
            gens,
            distinguished,
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut weights = self.weights.clone();
        weights.extend(other.weights.iter().cloned());
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Self {
            n: self.n,
            weights,
            gens,
            distinguished: None,
        }
    }

    /// `⋀^l M` on increasing index tuples (lexicographic order).
    pub fn exterior_power(&self, l: usize) -> Self {
        let subsets = increasing_tuples(self.dim(), l);
        let index: HashMap<Vec<usize>, usize> = subsets.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect();
        let weights = subsets
            .iter()
            .map(|s| s.iter().fold(Weight::zero(self.n), |acc, &i| &acc + &self.weights[i]))
            .collect();
        let gens = self
            .gens
            .iter()
            .map(|e| {
                let mut triplets = Vec::new();
                for (col, s) in subsets.iter().enumerate() {
                    for (pos, &i) in s.iter().enumerate() {
                        for (r, c) in e.col(i).entries() {
                            let mut t = s.clone();
                            t[pos] = *r;
                            if let Some((sorted, sign)) = sort_with_sign(t) {
                                let row = index[&sorted];
                                triplets.push((row, col, if sign { -c.clone() } else { c.clone() }));
                            }
                        }
                    }
                }
                SparseMatrix::from_triplets(subsets.len(), subsets.len(), triplets)
            })
            .collect();
        Self {
            n: self.n,
            weights,
            gens,
            distinguished: None,
        }
    }

    /// The contragredient `M^*`: weights negated, `e` acting by `−e^T`.
    pub fn dual(&self) -> Self {
        Self {
            n: self.n,
            weights: self.weights.iter().map(|w| -w).collect(),
            gens: self.gens.iter().map(|e| e.transpose().scaled(&q(-1))).collect(),
            distinguished: None,
        }
    }

    /// `M^* ⊗ K_ρ`.
    pub fn dual_twist(&self) -> Self {
        self.dual().twist(&Weight::rho(self.n))
    }

    pub fn act(&self, p: usize, q: usize, v: &SparseVec) -> SparseVec {
        self.gen(p, q).mul_vec(v)
    }

    /// Whether `f` (a `other.dim() × self.dim()` matrix) is a module map.
    pub fn is_morphism_to(&self, other: &Self, f: &SparseMatrix) -> bool {
        if f.nrows() != other.dim() || f.ncols() != self.dim() {
            return false;
        }
        for (r, c, _) in f.triplets() {
            if other.weights[r] != self.weights[c] {
                return false;
            }
        }
        self.gens.iter().zip(&other.gens).all(|(em, en)| f.mul(em) == en.mul(f))
    }

    /// The submodule generated by `vectors` (closure under `e_pq` and the
    /// weight projections).
    pub fn submodule_generated(&self, vectors: &[SparseVec]) -> Submodule {
        let span = self.generated_span(vectors);
        Submodule::from_span(self, span).expect("generated span is closed")
    }

    /// Echelon basis of the submodule generated by `vectors`.
    ///
    /// Every `e_pq` raises the height `Σ (n−i) λ_i`, so one pass over the
    /// weights in increasing height reaches the fixpoint.
    pub fn generated_span(&self, vectors: &[SparseVec]) -> Echelon {
        let mut pending: HashMap<Weight, Vec<SparseVec>> = HashMap::new();
        for v in vectors {
            for (w, part) in self.weight_components(v) {
                pending.entry(w).or_default().push(part);
            }
        }
        let spaces = self.weight_spaces();
        let mut order: Vec<&Weight> = spaces.keys().collect();
        order.sort_by_key(|w| (w.height(), (*w).clone()));
        let rs = roots(self.n);
        let mut ech = Echelon::new(self.dim());
        let mut rows_of: HashMap<Weight, Vec<usize>> = HashMap::new();
        for lambda in order {
            let mut candidates = pending.remove(lambda).unwrap_or_default();
            for (k, &(p, qq)) in rs.iter().enumerate() {
                let below = lambda - &Weight::alpha(self.n, p, qq);
                if let Some(rows) = rows_of.get(&below) {
                    for &r in rows {
                        candidates.push(self.gens[k].mul_vec(&ech.basis()[r]));
                    }
                }
            }
            let mut mine = Vec::new();
            for c in candidates {
                if ech.insert(c).is_some() {
                    mine.push(ech.rank() - 1);
                }
            }
            if !mine.is_empty() {
                rows_of.insert(lambda.clone(), mine);
            }
        }
        ech
    }

    /// Largest submodule whose weights all satisfy `allowed`.
    pub fn largest_submodule(&self, allowed: impl Fn(&Weight) -> bool) -> Submodule {
        let spaces = self.weight_spaces();
        let mut order: Vec<&Weight> = spaces.keys().collect();
        order.sort_by_key(|w| (std::cmp::Reverse(w.height()), (*w).clone()));
        let rs = roots(self.n);
        let mut ech = Echelon::new(self.dim());
        for lambda in order {
            if !allowed(lambda) {
                continue;
            }
            let idx = &spaces[lambda];
            // unknowns: coefficients over the basis vectors of weight λ
            let mut equations: Vec<SparseVec> = Vec::new();
            for (k, &(p, qq)) in rs.iter().enumerate() {
                let above = lambda + &Weight::alpha(self.n, p, qq);
                let Some(targets) = spaces.get(&above) else { continue };
                let images: Vec<SparseVec> = idx.iter().map(|&i| ech.reduce(self.gens[k].col(i))).collect();
                for &t in targets {
                    let row = SparseVec::from_pairs(
                        images
                            .iter()
                            .enumerate()
                            .filter_map(|(a, img)| img.get(t).map(|c| (a, c.clone())))
                            .collect(),
                    );
                    if !row.is_zero() {
                        equations.push(row);
                    }
                }
            }
            for sol in kernel_of_rows(&equations, idx.len()) {
                ech.insert(sol.remap(|a| Some(idx[a])));
            }
        }
        Submodule::from_span(self, ech).expect("invariant subspace")
    }

    /// `M / S` for a submodule given by its echelon span.
    pub fn quotient(&self, span: &Echelon) -> Result<Quotient> {
        Submodule::from_span(self, span.clone())?;
        Ok(Quotient::new(self, span.clone()))
    }

    /// `M / ⟨M_μ : μ not allowed⟩`, the largest quotient with all weights
    /// allowed when `allowed` describes an order ideal.
    pub fn largest_quotient(&self, allowed: impl Fn(&Weight) -> bool) -> Quotient {
        let gens: Vec<SparseVec> = (0..self.dim())
            .filter(|&i| !allowed(&self.weights[i]))
            .map(SparseVec::unit)
            .collect();
        let span = self.generated_span(&gens);
        Quotient::new(self, span)
    }

    /// Basis of `Hom(self, other)`.
    pub fn hom_space(&self, other: &Self) -> Vec<Morphism> {
        assert_eq!(self.n, other.n);
        let ws_m = self.weight_spaces();
        let ws_n = other.weight_spaces();
        let mut var: HashMap<(usize, usize), usize> = HashMap::new();
        let mut vars: Vec<(usize, usize)> = Vec::new();
        for (w, bs) in &ws_n {
            if let Some(as_) = ws_m.get(w) {
                for &b in bs {
                    for &a in as_ {
                        var.insert((b, a), vars.len());
                        vars.push((b, a));
                    }
                }
            }
        }
        if vars.is_empty() {
            return Vec::new();
        }
        let mut equations = Vec::new();
        for (k, &(p, qq)) in roots(self.n).iter().enumerate() {
            let alpha = Weight::alpha(self.n, p, qq);
            let em = &self.gens[k];
            let en_rows = other.gens[k].transpose();
            for (mu, a_primes) in &ws_m {
                let Some(bs) = ws_n.get(&(mu + &alpha)) else { continue };
                for &a_prime in a_primes {
                    for &b in bs {
                        // (φ E^M)[b, a'] − (E^N φ)[b, a'] = 0
                        let mut pairs = Vec::new();
                        for (a, c) in em.col(a_prime).entries() {
                            if let Some(&v) = var.get(&(b, *a)) {
                                pairs.push((v, c.clone()));
                            }
                        }
                        for (b_prime, c) in en_rows.col(b).entries() {
                            if let Some(&v) = var.get(&(*b_prime, a_prime)) {
                                pairs.push((v, -c.clone()));
                            }
                        }
                        let row = SparseVec::from_pairs(pairs);
                        if !row.is_zero() {
                            equations.push(row);
                        }
                    }
                }
            }
        }
        kernel_of_rows(&equations, vars.len())
            .into_iter()
            .map(|sol| {
                let triplets = sol
                    .entries()
                    .iter()
                    .map(|(v, c)| (vars[*v].0, vars[*v].1, c.clone()))
                    .collect();
                SparseMatrix::from_triplets(other.dim(), self.dim(), triplets)
            })
            .collect()
    }

    /// Decides whether two modules are isomorphic and returns a witness.
    pub fn is_isomorphic(&self, other: &Self) -> Isomorphism {
        if self.n != other.n || self.character() != other.character() {
            return Isomorphism::Distinct;
        }
        if self.dim() == 0 {
            return Isomorphism::Witness(SparseMatrix::zero(0, 0));
        }
        let homs = self.hom_space(other);
        if homs.is_empty() {
            return Isomorphism::Distinct;
        }
        if let Some(g) = self.distinguished {
            let lambda = &self.weights[g];
            if self.weight_space_dim(lambda) == 1 && other.weight_space_dim(lambda) == 1 {
                // a map out of a cyclic module is fixed by the image of its generator
                return match homs.iter().find(|f| !f.col(g).is_zero()) {
                    Some(f) if f.is_invertible() => Isomorphism::Witness(f.clone()),
                    _ => Isomorphism::Distinct,
                };
            }
        }
        if let Some(g) = other.distinguished {
            let lambda = &other.weights[g];
            if self.weight_space_dim(lambda) == 1 && other.weight_space_dim(lambda) == 1 {
                let back = other.hom_space(self);
                return match back.iter().find(|f| !f.col(g).is_zero()) {
                    Some(f) => match f.inverse() {
                        Some(inv) => Isomorphism::Witness(inv),
                        None => Isomorphism::Distinct,
                    },
                    None => Isomorphism::Distinct,
                };
            }
        }
        if let Some(f) = homs.iter().find(|f| f.is_invertible()) {
            return Isomorphism::Witness(f.clone());
        }
        // The determinant is a polynomial of degree dim in the coefficients;
        // random points from a wide range detect a nonzero one.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..12 {
            let mut f = SparseMatrix::zero(other.dim(), self.dim());
            for h in &homs {
                let c: i64 = rng.gen_range(-1000..=1000);
                f = f.add(&h.scaled(&q(c)));
            }
            if f.is_invertible() {
                return Isomorphism::Witness(f);
            }
        }
        Isomorphism::Distinct
    }

    /// Canonical JSON: basis stably sorted by weight (lexicographic), entries
    /// row-major.
    pub fn to_json(&self) -> Value {
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| self.weights[a].cmp(&self.weights[b]));
        let mut pos = vec![0; self.dim()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let weights: Vec<&Vec<i32>> = order.iter().map(|&i| &self.weights[i].0).collect();
        let mut gens = serde_json::Map::new();
        for (k, (p, qq)) in roots(self.n).into_iter().enumerate() {
            let mut entries: Vec<(usize, usize, Q)> = self.gens[k]
                .triplets()
                .into_iter()
                .map(|(r, c, v)| (pos[r], pos[c], v))
                .collect();
            entries.sort_by_key(|(r, c, _)| (*r, *c));
            let list: Vec<Value> = entries
                .into_iter()
                .map(|(r, c, v)| json!([r, c, q_to_string(&v)]))
                .collect();
            gens.insert(format!("e_{p}_{qq}"), Value::Array(list));
        }
        let distinguished = self.distinguished.map(|d| pos[d]);
        json!({"n": self.n, "weights": weights, "gens": gens, "distinguished": distinguished})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("module JSON: {m}"));
        let n = v["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let weights: Vec<Vec<i32>> = serde_json::from_value(v["weights"].clone()).map_err(|_| bad("weights"))?;
        let dim = weights.len();
        let mut gens = Vec::new();
        for (p, qq) in roots(n) {
            let key = format!("e_{p}_{qq}");
            let mut triplets = Vec::new();
            if let Some(list) = v["gens"].get(&key) {
                for e in list.as_array().ok_or_else(|| bad(&key))? {
                    let r = e[0].as_u64().ok_or_else(|| bad(&key))? as usize;
                    let c = e[1].as_u64().ok_or_else(|| bad(&key))? as usize;
                    let val = e[2].as_str().and_then(q_parse).ok_or_else(|| bad(&key))?;
                    if r >= dim || c >= dim {
                        return Err(bad("entry out of range"));
                    }
                    triplets.push((r, c, val));
                }
            }
            gens.push(SparseMatrix::from_triplets(dim, dim, triplets));
        }
        let distinguished = match &v["distinguished"] {
            Value::Null => None,
            d => Some(d.as_u64().ok_or_else(|| bad("distinguished"))? as usize),
        };
        Self::new(n, weights.into_iter().map(Weight).collect(), gens, distinguished)
    }
}

/// Outcome of an isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isomorphism {
    Witness(Morphism),
    Distinct,
}

impl Isomorphism {
    pub fn is_witness(&self) -> bool {
        matches!(self, Isomorphism::Witness(_))
    }
}

/// A submodule `S ⊂ M` with its own basis (the echelon rows of the span).
#[derive(Clone, Debug)]
pub struct Submodule {
    pub module: WeightModule,
    /// `M.dim() × S.dim()`, columns are the basis of `S` inside `M`.
    pub inclusion: SparseMatrix,
    pub span: Echelon,
}

impl Submodule {
    /// Checks that `span` is stable under every `e_pq` and builds the
    /// induced module.
    pub fn from_span(ambient: &WeightModule, span: Echelon) -> Result<Self> {
        let basis = span.basis();
        let mut weights = Vec::with_capacity(basis.len());
        for v in basis {
            let comps = ambient.weight_components(v);
            if comps.len() != 1 {
                return Err(Error::InvalidModule("subspace is not spanned by weight vectors".into()));
            }
            weights.push(comps.into_keys().next().unwrap());
        }
        let mut gens = Vec::new();
        for (k, &(p, qq)) in roots(ambient.n).iter().enumerate() {
            let mut cols = Vec::with_capacity(basis.len());
            for v in basis {
                let image = ambient.gens[k].mul_vec(v);
                let coords = span.coordinates(&image).ok_or(Error::NotSubmodule(p, qq))?;
                cols.push(coords);
            }
            gens.push(SparseMatrix::from_columns(basis.len(), cols));
        }
        let inclusion = SparseMatrix::from_columns(ambient.dim(), basis.to_vec());
        let distinguished = ambient
            .distinguished
            .and_then(|d| span.coordinates(&SparseVec::unit(d)))
            .and_then(|c| if c.nnz() == 1 { Some(c.entries()[0].0) } else { None });
        let module = WeightModule {
            n: ambient.n,
            weights,
            gens,
            distinguished,
        };
        Ok(Self {
            module,
            inclusion,
            span,
        })
    }
}

/// A quotient `M / S` whose basis is the non-pivot coordinates of `S`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: WeightModule,
    /// `Q.dim() × M.dim()`.
    pub projection: SparseMatrix,
    /// Basis vectors of `M` whose images form the basis of the quotient.
    pub complement: Vec<usize>,
    pub kernel: Echelon,
}

impl Quotient {
    fn new(ambient: &WeightModule, kernel: Echelon) -> Self {
        let complement = kernel.free_columns();
        let mut pos = vec![usize::MAX; ambient.dim()];
        for (k, &c) in complement.iter().enumerate() {
            pos[c] = k;
        }
        let project = |v: &SparseVec| -> SparseVec {
            kernel.reduce(v).remap(|i| {
                debug_assert!(pos[i] != usize::MAX);
                Some(pos[i])
            })
        };
        let qdim = complement.len();
        let projection =
            SparseMatrix::from_columns(qdim, (0..ambient.dim()).map(|i| project(&SparseVec::unit(i))).collect());
        let gens = ambient
            .gens
            .iter()
            .map(|e| SparseMatrix::from_columns(qdim, complement.iter().map(|&c| project(e.col(c))).collect()))
            .collect();
        let weights = complement.iter().map(|&c| ambient.weights[c].clone()).collect();
        let distinguished = ambient.distinguished.and_then(|d| {
            let img = projection.col(d);
            if img.nnz() == 1 {
                Some(img.entries()[0].0)
            } else {
                None
            }
        });
        let module = WeightModule {
            n: ambient.n,
            weights,
            gens,
            distinguished,
        };
        Self {
            module,
            projection,
            complement,
            kernel,
        }
    }
}

/// Strictly increasing `l`-tuples from `0..m`, in lexicographic order.
pub fn increasing_tuples(m: usize, l: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, l: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < l - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if l <= m {
        rec(0, m, l, &mut Vec::new(), &mut out);
    }
    out
}

/// Sorts `t` increasingly; returns `None` on a repeated entry, otherwise the
/// sorted tuple and whether the sorting permutation is odd.
pub fn sort_with_sign(mut t: Vec<usize>) -> Option<(Vec<usize>, bool)> {
    let mut odd = false;
    for i in 1..t.len() {
        let mut j = i;
        while j > 0 && t[j - 1] > t[j] {
            t.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
        if j > 0 && t[j - 1] == t[j] {
            return None;
        }
    }
    if t.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((t, odd))
}

/// `Σ_i c_i f_i` for morphisms of equal shape.
pub fn combine(morphisms: &[Morphism], coeffs: &[Q]) -> Morphism {
    let first = &morphisms[0];
    let mut out = SparseMatrix::zero(first.nrows(), first.ncols());
    for (f, c) in morphisms.iter().zip(coeffs) {
        if !c.is_zero() {
            out = out.add(&f.scaled(c));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i32]) -> Weight {
        Weight(v.to_vec())
    }

    #[test]
    fn root_indexing() {
        let rs = roots(4);
        for (k, &(p, qq)) in rs.iter().enumerate() {
            assert_eq!(root_index(4, p, qq), k);
        }
    }

    #[test]
    fn constructors_validate() {
        WeightModule::one_dim(&w(&[1, 0, 2])).validate().unwrap();
        let v = WeightModule::vector_rep(4);
        v.validate().unwrap();
        assert_eq!(v.character(), MultiPoly::parse("x1+x2+x3+x4", 4).unwrap());
        assert_eq!(v.act(1, 2, &SparseVec::unit(1)), SparseVec::unit(0));
        assert_eq!(WeightModule::truncated_vector(4, 2).dim(), 2);
        v.tensor(&v).validate().unwrap();
        v.exterior_power(2).validate().unwrap();
        v.dual_twist().validate().unwrap();
    }

    #[test]
    fn corrupted_generator_is_rejected() {
        let v = WeightModule::vector_rep(3);
        let mut gens = v.gens().to_vec();
        let k = root_index(3, 1, 2);
        gens[k] = SparseMatrix::from_triplets(3, 3, vec![(0, 1, q(2))]);
        let bad = WeightModule::new(3, v.weights().to_vec(), gens, None).unwrap();
        let err = bad.validate().unwrap_err();
        assert!(err.to_string().contains("bracket"), "{err}");
    }

    #[test]
    fn tensor_and_wedge_characters() {
        let a = WeightModule::one_dim(&w(&[1, 0, 0]));
        let b = WeightModule::one_dim(&w(&[0, 2, 1]));
        assert_eq!(a.tensor(&b).weights(), &[w(&[1, 2, 1])]);
        let v = WeightModule::vector_rep(3);
        let l2 = v.exterior_power(2);
        assert_eq!(l2.dim(), 3);
        assert_eq!(l2.character(), MultiPoly::parse("x1*x2+x1*x3+x2*x3", 3).unwrap());
        let top = WeightModule::truncated_vector(3, 2).exterior_power(2);
        assert_eq!(top.weights(), &[w(&[1, 1, 0])]);
        assert_eq!(v.exterior_power(4).dim(), 0);
        let vv = v.tensor(&v);
        assert_eq!(vv.character(), v.character().mul(&v.character()));
    }

    #[test]
    fn dual_twist_examples() {
        let rho = Weight::rho(3);
        assert_eq!(WeightModule::one_dim(&rho).dual_twist().weights(), &[Weight::zero(3)]);
        let v = WeightModule::vector_rep(3);
        let back = v.dual_twist().dual_twist();
        assert!(v.is_isomorphic(&back).is_witness());
    }

    #[test]
    fn submodules_and_quotients() {
        let v = WeightModule::vector_rep(3);
        let l2 = v.exterior_power(2);
        // u1 ∧ u2 is index 0 and spans a trivial submodule
        let s = l2.submodule_generated(&[SparseVec::unit(0)]);
        assert_eq!(s.module.dim(), 1);
        s.module.validate().unwrap();
        let all = l2.submodule_generated(&(0..3).map(SparseVec::unit).collect::<Vec<_>>());
        assert_eq!(all.module.dim(), 3);
        let quot = l2.quotient(&s.span).unwrap();
        quot.module.validate().unwrap();
        assert_eq!(quot.module.character(), &l2.character() - &s.module.character());
        assert!(l2
            .quotient(&l2.generated_span(&[]))
            .unwrap()
            .module
            .is_isomorphic(&l2)
            .is_witness());
        assert_eq!(l2.quotient(&all.span).unwrap().module.dim(), 0);
        assert!(quot.module.is_morphism_to(&quot.module, &SparseMatrix::identity(2)));
        assert!(l2.is_morphism_to(&quot.module, &quot.projection));
        assert!(s.module.is_morphism_to(&l2, &s.inclusion));
        // u3 generates everything in K^3
        assert_eq!(v.submodule_generated(&[SparseVec::unit(2)]).module.dim(), 3);
    }

    #[test]
    fn non_submodule_is_rejected() {
        let v = WeightModule::vector_rep(3);
        let mut e = Echelon::new(3);
        e.insert(SparseVec::unit(2));
        assert!(matches!(v.quotient(&e), Err(Error::NotSubmodule(_, _))));
    }

    #[test]
    fn largest_quotient_and_submodule() {
        let v = WeightModule::vector_rep(3);
        let q1 = v.largest_quotient(|l| l != &w(&[1, 0, 0]));
        assert_eq!(q1.module.dim(), 2);
        let q0 = WeightModule::one_dim(&w(&[1, 0, 0])).largest_quotient(|_| false);
        assert_eq!(q0.module.dim(), 0);
        let s = v.largest_submodule(|l| l != &w(&[0, 0, 1]));
        assert_eq!(s.module.dim(), 2);
        let s = v.largest_submodule(|l| l == &w(&[0, 1, 0]));
        assert_eq!(s.module.dim(), 0);
    }

    #[test]
    fn hom_spaces() {
        let a = WeightModule::one_dim(&w(&[1, 0, 0]));
        let b = WeightModule::one_dim(&w(&[0, 1, 0]));
        assert!(a.hom_space(&b).is_empty());
        assert_eq!(a.hom_space(&a).len(), 1);
        let v = WeightModule::vector_rep(3);
        assert_eq!(v.hom_space(&v).len(), 1);
        // K_{(1,0,0)} sits in K^3 as the span of u1
        assert_eq!(a.hom_space(&v).len(), 1);
        assert!(v.hom_space(&a).is_empty());
        for f in v.tensor(&v).hom_space(&v.tensor(&v)) {
            assert!(v.tensor(&v).is_morphism_to(&v.tensor(&v), &f));
        }
        assert_eq!(a.is_isomorphic(&b), Isomorphism::Distinct);
    }

    #[test]
    fn json_round_trip() {
        let v = WeightModule::vector_rep(3).exterior_power(2).dual_twist();
        let back = WeightModule::from_json(&v.to_json()).unwrap();
        back.validate().unwrap();
        assert_eq!(back.character(), v.character());
        assert_eq!(back.to_json(), v.to_json());
    }

    #[test]
    fn sign_of_sorting() {
        assert_eq!(sort_with_sign(vec![2, 0, 1]), Some((vec![0, 1, 2], false)));
        assert_eq!(sort_with_sign(vec![1, 0]), Some((vec![0, 1], true)));
        assert_eq!(sort_with_sign(vec![1, 0, 1]), None);
        assert_eq!(increasing_tuples(4, 2).len(), 6);
    }
}
