//! KP modules `𝒮_w`, the tilting modules `T(λ)` and the full tilting module
//! `T = ⋀^•(K^{n-1} ⊕ ... ⊕ K^1)` with its commuting second action.

use std::collections::HashMap;

use num::Zero;

use crate::error::{Error, Result};
use crate::linalg::{q, SparseMatrix, SparseVec, Q};
use crate::perm::{inversion_cells, Permutation, Weight};
use crate::weightmod::{increasing_tuples, roots, sort_with_sign, WeightModule};

/// A KP module together with the data it was built from.
#[derive(Clone, Debug)]
pub struct KpModule {
    pub module: WeightModule,
    pub w: Permutation,
    /// `𝒮_λ = 𝒮_w ⊗ K_{−k·1}` with `code(w) = λ + k·1`.
    pub shift: i32,
    /// Index of `u_λ` in the basis of `module`.
    pub generator: usize,
}

impl KpModule {
    pub fn highest_weight(&self) -> &Weight {
        self.module.weight(self.generator)
    }
}

/// Rows `{i < j : w(i) > w(j)}` for every column `j` of the window.
fn columns_of(w: &Permutation) -> Vec<Vec<usize>> {
    let m = w.window_len();
    (1..=m)
        .map(|j| (1..j).filter(|&i| w.apply(i) > w.apply(j)).collect())
        .collect()
}

/// `𝒮_w = U(𝔫⁺) u_w` inside `⊗_{j : l_j > 0} ⋀^{l_j} K^n`.
pub fn kp_module(w: &Permutation, n: usize) -> Result<KpModule> {
    if !w.in_s_inf(n) {
        return Err(Error::NotInSInfinity(w.to_string(), n));
    }
    let vector = WeightModule::vector_rep(n);
    let mut ambient = WeightModule::one_dim(&Weight::zero(n));
    let mut index = 0usize;
    for rows in columns_of(w) {
        if rows.is_empty() {
            continue;
        }
        let factor = vector.exterior_power(rows.len());
        let tuple: Vec<usize> = rows.iter().map(|i| i - 1).collect();
        let pos = increasing_tuples(n, rows.len())
            .iter()
            .position(|t| *t == tuple)
            .expect("rows are at most n");
        index = index * factor.dim() + pos;
        ambient = ambient.tensor(&factor);
    }
    let sub = ambient.submodule_generated(&[SparseVec::unit(index)]);
    let coords = sub
        .span
        .coordinates(&SparseVec::unit(index))
        .expect("generator lies in span");
    let generator = coords.entries()[0].0;
    let module = sub.module.with_distinguished(Some(generator));
    Ok(KpModule {
        module,
        w: w.clone(),
        shift: 0,
        generator,
    })
}

/// `𝒮_λ` for arbitrary `λ ∈ Z^n`.
pub fn kp_module_gen(lambda: &Weight) -> KpModule {
    let n = lambda.n();
    let k = (-lambda.0.iter().copied().min().unwrap_or(0)).max(0);
    let w = Permutation::from_code(&lambda.shifted(k)).expect("nonnegative after shift");
    let mut kp = kp_module(&w, n).expect("codes give S_inf^(n)");
    if k > 0 {
        kp.module = kp.module.twist(&Weight(vec![-k; n]));
        kp.shift = k;
    }
    kp
}

/// `T(λ) = ⊗_{1 <= j <= n−1} ⋀^{λ̄_j} K^{n−j}`.
pub fn tilting_module(lambda: &Weight) -> Result<WeightModule> {
    let n = lambda.n();
    let bar = lambda.bar()?;
    let mut out = WeightModule::one_dim(&Weight::zero(n)).with_distinguished(None);
    for j in 1..n {
        out = out.tensor(&WeightModule::truncated_vector(n, n - j).exterior_power(bar.0[j - 1] as usize));
    }
    Ok(out.with_distinguished(None))
}

/// `T = ⋀^•V`, `V` with basis `u_ij`, `i + j <= n`, carrying the action of
/// `𝔟` (`e_pq u_ij = δ_qi u_pj`) and of a second copy `𝔟'`
/// (`e'_pq u_ij = δ_qj u_ip`).
///
/// Basis vectors are subsets of the pairs, ordered by size and then
/// lexicographically on the sorted pair indices; all signs come from sorting
/// wedge factors into that order.
#[derive(Clone, Debug)]
pub struct FullTilting {
    n: usize,
    pairs: Vec<(usize, usize)>,
    subsets: Vec<Vec<usize>>,
    index_of: HashMap<Vec<usize>, usize>,
    /// The `𝔟`-module `T`.
    pub module: WeightModule,
    /// The same space as a module over `𝔟'`; its weights are the `h'`-weights.
    pub bprime: WeightModule,
    pub swap: SparseMatrix,
}

impl FullTilting {
    pub fn new(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (1..n).flat_map(|i| (1..=n - i).map(move |j| (i, j))).collect();
        let pos: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let m = pairs.len();
        let gens_for = |image: &dyn Fn(usize, usize, usize, usize) -> Option<(usize, usize)>| {
            roots(n)
                .into_iter()
                .map(|(p, qq)| {
                    let t = pairs
                        .iter()
                        .enumerate()
                        .filter_map(|(c, &(i, j))| image(p, qq, i, j).map(|img| (pos[&img], c, q(1))))
                        .collect();
                    SparseMatrix::from_triplets(m, m, t)
                })
                .collect::<Vec<_>>()
        };
        let v = WeightModule::new(
            n,
            pairs.iter().map(|&(i, _)| Weight::unit(n, i)).collect(),
            gens_for(&|p, qq, i, j| (qq == i).then_some((p, j))),
            None,
        )
        .expect("shapes agree");
        let vprime = WeightModule::new(
            n,
            pairs.iter().map(|&(_, j)| Weight::unit(n, j)).collect(),
            gens_for(&|p, qq, i, j| (qq == j).then_some((i, p))),
            None,
        )
        .expect("shapes agree");
        let mut module = WeightModule::one_dim(&Weight::zero(n)).with_distinguished(None);
        let mut bprime = module.clone();
        let mut subsets = vec![Vec::new()];
        for l in 1..=m {
            module = module.direct_sum(&v.exterior_power(l));
            bprime = bprime.direct_sum(&vprime.exterior_power(l));
            subsets.extend(increasing_tuples(m, l));
        }
        let index_of: HashMap<Vec<usize>, usize> = subsets.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect();
        let swap_triplets = subsets
            .iter()
            .enumerate()
            .map(|(c, s)| {
                let image: Vec<usize> = s
                    .iter()
                    .map(|&k| {
                        let (i, j) = pairs[k];
                        pos[&(j, i)]
                    })
                    .collect();
                let (sorted, odd) = sort_with_sign(image).expect("swap is injective");
                (index_of[&sorted], c, q(if odd { -1 } else { 1 }))
            })
            .collect();
        let dim = subsets.len();
        let swap = SparseMatrix::from_triplets(dim, dim, swap_triplets);
        Self {
            n,
            pairs,
            subsets,
            index_of,
            module,
            bprime,
            swap,
        }
    }

    /// Replaces the involution and recomputes `e'_pq = swap ∘ e_pq ∘ swap`
    /// from it; used to probe how the checks react to other conventions.
    pub fn with_swap(&self, swap: SparseMatrix) -> Self {
        let gens: Vec<SparseMatrix> = self.module.gens().iter().map(|e| swap.mul(e).mul(&swap)).collect();
        let bprime = WeightModule::new(self.n, self.bprime.weights().to_vec(), gens, None).expect("shapes agree");
        Self {
            swap,
            bprime,
            ..self.clone()
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.subsets.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// The pairs `(i, j)` making up basis vector `k`.
    pub fn subset(&self, k: usize) -> Vec<(usize, usize)> {
        self.subsets[k].iter().map(|&i| self.pairs[i]).collect()
    }

    pub fn degree(&self, k: usize) -> usize {
        self.subsets[k].len()
    }

    pub fn hprime_weight(&self, k: usize) -> &Weight {
        self.bprime.weight(k)
    }

    /// Matrix of `e'_pq` for `p < q`.
    pub fn eprime(&self, p: usize, q: usize) -> &SparseMatrix {
        self.bprime.gen(p, q)
    }

    /// `e'_pq` for `p <= q`; on the diagonal this is `h'_q`.
    pub fn act_prime(&self, p: usize, qq: usize, v: &SparseVec) -> SparseVec {
        if p == qq {
            SparseVec::from_pairs(
                v.entries()
                    .iter()
                    .map(|(k, c)| (*k, c * q(self.hprime_weight(*k).0[p - 1] as i64)))
                    .collect(),
            )
        } else {
            self.eprime(p, qq).mul_vec(v)
        }
    }

    /// Wedge monomial `⋀_{(i,j) ∈ cells} u_ij` in sorted order; `None` if some
    /// cell is not a pair of `T`.
    pub fn monomial(&self, cells: &[(usize, usize)]) -> Option<SparseVec> {
        let mut idx: Vec<usize> = Vec::with_capacity(cells.len());
        for c in cells {
            idx.push(self.pairs.iter().position(|p| p == c)?);
        }
        let (sorted, odd) = sort_with_sign(idx)?;
        let k = self.index_of[&sorted];
        Some(SparseVec::from_pairs(vec![(k, q(if odd { -1 } else { 1 }))]))
    }

    /// Basis index of the monomial on the given cells (sorted order).
    pub fn monomial_index(&self, cells: &[(usize, usize)]) -> Option<usize> {
        self.monomial(cells).map(|v| v.entries()[0].0)
    }

    fn wedge_basis(&self, a: usize, b: usize) -> Option<(usize, bool)> {
        let (s, r) = (&self.subsets[a], &self.subsets[b]);
        let mut odd = false;
        for x in s {
            for y in r {
                if x == y {
                    return None;
                }
                if x > y {
                    odd = !odd;
                }
            }
        }
        let mut u: Vec<usize> = s.iter().chain(r).copied().collect();
        u.sort_unstable();
        Some((self.index_of[&u], odd))
    }

    /// Exterior product.
    pub fn wedge(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut pairs = Vec::new();
        for (a, ca) in x.entries() {
            for (b, cb) in y.entries() {
                if let Some((k, odd)) = self.wedge_basis(*a, *b) {
                    let c = ca * cb;
                    pairs.push((k, if odd { -c } else { c }));
                }
            }
        }
        SparseVec::from_pairs(pairs)
    }

    /// Coefficient of `u_P` (the top wedge) in `x ∧ y`.
    pub fn pairing(&self, x: &SparseVec, y: &SparseVec) -> Q {
        let top = self.dim() - 1;
        self.wedge(x, y).get(top).cloned().unwrap_or_else(Q::zero)
    }

    /// `u_w = ⋀_{(i, j) ∈ J(w)} u_ij` for `w ∈ S_n`.
    pub fn embed_kp(&self, w: &Permutation) -> Result<SparseVec> {
        if !w.in_s_n(self.n) {
            return Err(Error::InvalidPermutation(format!("{w} is not in S_{}", self.n)));
        }
        Ok(self
            .monomial(&inversion_cells(w, self.n))
            .expect("J(w) consists of pairs"))
    }

    /// Projection onto the summand of `h'`-weight `μ`.
    pub fn hprime_projection(&self, mu: &Weight) -> SparseMatrix {
        let t: Vec<(usize, usize, Q)> = (0..self.dim())
            .filter(|&k| self.hprime_weight(k) == mu)
            .map(|k| (k, k, q(1)))
            .collect();
        SparseMatrix::from_triplets(self.dim(), self.dim(), t)
    }

    /// Basis indices of the summand `T(λ)`, i.e. `h'`-weight `λ̄`.
    pub fn summand(&self, lambda: &Weight) -> Result<Vec<usize>> {
        let bar = lambda.bar()?;
        Ok((0..self.dim()).filter(|&k| *self.hprime_weight(k) == bar).collect())
    }
}

/// `m_pq(w) = #{r > q : w(p) < w(r) < w(q)}`.
pub fn m_pq(w: &Permutation, p: usize, qq: usize) -> usize {
    let m = w.window_len().max(qq);
    (qq + 1..=m)
        .filter(|&r| w.apply(p) < w.apply(r) && w.apply(r) < w.apply(qq))
        .count()
}

fn covers(x: &Permutation, p: usize, qq: usize) -> bool {
    x.compose(&Permutation::transposition(p, qq)).length() == x.length() + 1
}

/// `v_pq(x) = e_pq^{m_pq(x)} u_x ⊗ u_p ∈ 𝒮_x ⊗ K^n`, returned with the module
/// `𝒮_x ⊗ K^n` it lives in.
pub fn v_pq(x: &Permutation, n: usize, p: usize, qq: usize) -> Result<(WeightModule, SparseVec)> {
    if !(p < qq && qq <= n + 1) || !x.in_s_n(n) {
        return Err(Error::InvalidIndex {
            what: "pair (p, q)",
            index: qq,
        });
    }
    if !covers(x, p, qq) {
        return Err(Error::LengthCondition { p, q: qq });
    }
    let kp = kp_module(x, n)?;
    let mut v = SparseVec::unit(kp.generator);
    if qq <= n {
        for _ in 0..m_pq(x, p, qq) {
            v = kp.module.act(p, qq, &v);
        }
    }
    let target = kp.module.tensor(&WeightModule::vector_rep(n));
    let v = v.remap(|i| Some(i * n + (p - 1)));
    Ok((target, v))
}

/// One evaluated instance of the `(p, q), (p', q')` statement.
#[derive(Clone, Debug)]
pub struct PqpqCase {
    pub p: usize,
    pub q: usize,
    pub p2: usize,
    pub q2: usize,
    pub nonzero: bool,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct PqpqReport {
    pub w: Permutation,
    pub i: usize,
    pub cases: Vec<PqpqCase>,
}

impl PqpqReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }
}

/// Evaluates `(e'_{q̄',p̄'})^{m} e_pq^{m'} u_w ∧ u_{p,q̄'}` for all admissible
/// `1 <= p, p' <= i < q, q' <= n`: a nonzero value must force
/// `w(p) <= w(p')` and `w(q) <= w(q')`, and on the diagonal the value must be
/// a nonzero multiple of `u_{w t_pq}`.
pub fn check_lemma_pqpq(t: &FullTilting, w: &Permutation, i: usize) -> Result<PqpqReport> {
    let n = t.n();
    if !w.in_s_n(n) || i == 0 || i >= n {
        return Err(Error::InvalidIndex {
            what: "split position i",
            index: i,
        });
    }
    let bar = |k: usize| n + 1 - k;
    let wbar = w.conjugate_w0(n)?;
    let uw = t.embed_kp(w)?;
    let admissible: Vec<(usize, usize)> = (1..=i)
        .flat_map(|p| (i + 1..=n).map(move |qq| (p, qq)))
        .filter(|&(p, qq)| covers(w, p, qq))
        .collect();
    let mut cases = Vec::new();
    for &(p, qq) in &admissible {
        let mut x = uw.clone();
        for _ in 0..m_pq(w, p, qq) {
            x = t.module.act(p, qq, &x);
        }
        for &(p2, q2) in &admissible {
            let (a, b) = (bar(q2), bar(p2));
            let mut y = x.clone();
            for _ in 0..m_pq(&wbar, a, b) {
                y = t.eprime(a, b).mul_vec(&y);
            }
            let cell = t.monomial(&[(p, bar(q2))]).expect("p < q' gives a pair");
            let value = t.wedge(&y, &cell);
            let nonzero = !value.is_zero();
            let mut passed = !nonzero || (w.apply(p) <= w.apply(p2) && w.apply(qq) <= w.apply(q2));
            if (p, qq) == (p2, q2) {
                let target = t.embed_kp(&w.compose(&Permutation::transposition(p, qq)))?;
                let k = target.entries()[0].0;
                passed &= nonzero && value.nnz() == 1 && value.entries()[0].0 == k;
            }
            cases.push(PqpqCase {
                p,
                q: qq,
                p2,
                q2,
                nonzero,
                passed,
            });
        }
    }
    Ok(PqpqReport { w: w.clone(), i, cases })
}
