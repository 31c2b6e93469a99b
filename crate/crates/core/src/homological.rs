//! Ext groups through relative Lie algebra cohomology, extensions, standard
//! filtrations, and tilting modules in the categories `C_Λ`.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kp::{kp_module_gen, KpModule};
use crate::linalg::{q, Echelon, SparseMatrix, SparseVec, Q};
use crate::perm::{lambda_n, precedes_eq, OrderKey, Weight};
use crate::weightmod::{increasing_tuples, roots, Morphism, WeightModule};

/// `[e_α, e_β] = κ e_γ` for every pair of roots `α < β` that brackets to a root.
fn bracket_table(n: usize) -> Vec<(usize, usize, usize, i64)> {
    let rs = roots(n);
    let pos: HashMap<(usize, usize), usize> = rs.iter().enumerate().map(|(k, &r)| (r, k)).collect();
    let mut out = Vec::new();
    for (a, &(p, qq)) in rs.iter().enumerate() {
        for (b, &(r, s)) in rs.iter().enumerate().skip(a + 1) {
            if qq == r {
                out.push((a, b, pos[&(p, s)], 1));
            } else if s == p {
                out.push((a, b, pos[&(r, qq)], -1));
            }
        }
    }
    out
}

/// A cochain in degree `d`: basis element `(S, a, b)` is the map sending
/// `e_S` to the matrix unit `m_a ↦ n_b`.
type CochainBasis = Vec<(usize, usize, usize)>;

/// Weight-zero part of `Hom(⋀^d 𝔫, Hom(M, N))` with the Chevalley–Eilenberg
/// differential, for `d = 0, ..., top`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    subsets: Vec<Vec<Vec<usize>>>,
    basis: Vec<CochainBasis>,
    /// `d_k : C^k → C^{k+1}` for `k < top`.
    pub differentials: Vec<SparseMatrix>,
    ranks: Vec<usize>,
}

impl CochainComplex {
    /// Builds degrees `0..=top` (clamped to the number of roots).
    pub fn new(m: &WeightModule, nmod: &WeightModule, top: usize) -> Self {
        assert_eq!(m.n(), nmod.n());
        let n = m.n();
        let rs = roots(n);
        let top = top.min(rs.len());
        let alphas: Vec<Weight> = rs.iter().map(|&(p, qq)| Weight::alpha(n, p, qq)).collect();
        let ws_n = nmod.weight_spaces();
        let mut subsets = Vec::new();
        let mut basis = Vec::new();
        let mut index: Vec<HashMap<(usize, usize, usize), usize>> = Vec::new();
        let mut subset_index: Vec<HashMap<Vec<usize>, usize>> = Vec::new();
        for d in 0..=top + 1 {
            let subs = if d <= rs.len() {
                increasing_tuples(rs.len(), d)
            } else {
                Vec::new()
            };
            let mut b: CochainBasis = Vec::new();
            for (si, s) in subs.iter().enumerate() {
                let shift = s.iter().fold(Weight::zero(n), |acc, &k| &acc + &alphas[k]);
                for a in 0..m.dim() {
                    if let Some(bs) = ws_n.get(&(m.weight(a) + &shift)) {
                        b.extend(bs.iter().map(|&bb| (si, a, bb)));
                    }
                }
            }
            index.push(b.iter().enumerate().map(|(k, &t)| (t, k)).collect());
            subset_index.push(subs.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect());
            subsets.push(subs);
            basis.push(b);
        }
        let brackets = bracket_table(n);
        let m_rows: Vec<SparseMatrix> = m.gens().iter().map(|e| e.transpose()).collect();
        let mut differentials = Vec::new();
        for d in 0..=top {
            let rows = basis[d + 1].len();
            let mut cols = Vec::with_capacity(basis[d].len());
            for &(si, a, b) in &basis[d] {
                let s = &subsets[d][si];
                let mut pairs: Vec<(usize, Q)> = Vec::new();
                let mut push = |t: &[usize], a2: usize, b2: usize, c: Q| {
                    let ti = subset_index[d + 1][t];
                    let row = index[d + 1][&(ti, a2, b2)];
                    pairs.push((row, c));
                };
                for r in 0..rs.len() {
                    if s.contains(&r) {
                        continue;
                    }
                    let mut t = s.clone();
                    t.push(r);
                    t.sort_unstable();
                    let i = t.iter().position(|&x| x == r).unwrap();
                    let sign = if i % 2 == 0 { q(1) } else { q(-1) };
                    for (b2, c) in nmod.gens()[r].col(b).entries() {
                        push(&t, a, *b2, &sign * c);
                    }
                    for (a2, c) in m_rows[r].col(a).entries() {
                        push(&t, *a2, b, -(&sign * c));
                    }
                }
                for (g, &gamma) in s.iter().enumerate() {
                    let rest: Vec<usize> = s.iter().copied().filter(|&x| x != gamma).collect();
                    for &(al, be, ga, kappa) in &brackets {
                        if ga != gamma || rest.contains(&al) || rest.contains(&be) {
                            continue;
                        }
                        let mut t = rest.clone();
                        t.push(al);
                        t.push(be);
                        t.sort_unstable();
                        let i = t.iter().position(|&x| x == al).unwrap();
                        let j = t.iter().position(|&x| x == be).unwrap();
                        let sign = if (i + j + g) % 2 == 0 { kappa } else { -kappa };
                        push(&t, a, b, q(sign));
                    }
                }
                cols.push(SparseVec::from_pairs(pairs));
            }
            differentials.push(SparseMatrix::from_columns(rows, cols));
        }
        let ranks = differentials.iter().map(|d| d.rank()).collect();
        basis.truncate(top + 1);
        subsets.truncate(top + 1);
        Self {
            subsets,
            basis,
            differentials,
            ranks,
        }
    }

    pub fn top(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn dim(&self, d: usize) -> usize {
        self.basis.get(d).map_or(0, |b| b.len())
    }

    pub fn rank(&self, d: usize) -> usize {
        self.ranks.get(d).copied().unwrap_or(0)
    }

    /// `dim H^d`.
    pub fn cohomology_dim(&self, d: usize) -> usize {
        if d > self.top() {
            return 0;
        }
        let below = if d == 0 { 0 } else { self.rank(d - 1) };
        self.dim(d) - self.rank(d) - below
    }

    /// Whether `d_{k+1} ∘ d_k = 0` for all built degrees.
    pub fn is_complex(&self) -> bool {
        self.differentials.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    /// Values of a 1-cochain on each root, as `N.dim × M.dim` matrices.
    pub fn one_cochain_values(&self, c: &SparseVec, m_dim: usize, n_dim: usize, nroots: usize) -> Vec<Morphism> {
        let mut triplets: Vec<Vec<(usize, usize, Q)>> = vec![Vec::new(); nroots];
        for (k, val) in c.entries() {
            let (si, a, b) = self.basis[1][*k];
            triplets[self.subsets[1][si][0]].push((b, a, val.clone()));
        }
        triplets
            .into_iter()
            .map(|t| SparseMatrix::from_triplets(n_dim, m_dim, t))
            .collect()
    }
}

/// `dim Ext^i(M, N)` in the category of weight `𝔟`-modules.
pub fn ext_dim(m: &WeightModule, nmod: &WeightModule, i: usize) -> usize {
    if i > roots(m.n()).len() {
        return 0;
    }
    CochainComplex::new(m, nmod, i).cohomology_dim(i)
}

/// `dim Ext^i(M, N)` for `i = 0..=top`.
pub fn ext_dims(m: &WeightModule, nmod: &WeightModule, top: usize) -> Vec<usize> {
    let c = CochainComplex::new(m, nmod, top);
    (0..=top).map(|i| c.cohomology_dim(i)).collect()
}

/// Representatives of a basis of `Ext^1(M, N)`, each given by its values
/// `c(e_pq) : M → N` on the roots.
pub fn ext1_classes(m: &WeightModule, nmod: &WeightModule) -> Vec<Vec<Morphism>> {
    let c = CochainComplex::new(m, nmod, 1);
    if c.top() < 1 {
        return Vec::new();
    }
    let mut boundaries = Echelon::new(c.dim(1));
    for col in c.differentials[0].columns() {
        boundaries.insert(col.clone());
    }
    let cocycles = c.differentials[1].kernel();
    let nroots = roots(m.n()).len();
    cocycles
        .into_iter()
        .filter(|z| boundaries.insert(z.clone()).is_some())
        .map(|z| c.one_cochain_values(&z, m.dim(), nmod.dim(), nroots))
        .collect()
}

/// A short exact sequence `0 → N → X → M → 0` with `X = N ⊕ M` as a space.
#[derive(Clone, Debug)]
pub struct Extension {
    pub module: WeightModule,
    pub inclusion: Morphism,
    pub projection: Morphism,
}

/// `e·(n, m) = (e·n + c(e) m, e·m)`.
pub fn realize_extension(m: &WeightModule, nmod: &WeightModule, class: &[Morphism]) -> Result<Extension> {
    let (dn, dm) = (nmod.dim(), m.dim());
    if class.len() != roots(m.n()).len() {
        return Err(Error::InvalidModule("cochain has the wrong number of roots".into()));
    }
    let gens = class
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let mut t = nmod.gens()[k].triplets();
            t.extend(c.triplets().into_iter().map(|(r, s, v)| (r, s + dn, v)));
            t.extend(m.gens()[k].triplets().into_iter().map(|(r, s, v)| (r + dn, s + dn, v)));
            SparseMatrix::from_triplets(dn + dm, dn + dm, t)
        })
        .collect();
    let weights = nmod.weights().iter().chain(m.weights()).cloned().collect();
    let module = WeightModule::new(m.n(), weights, gens, None)?;
    module.validate()?;
    let inclusion = SparseMatrix::from_triplets(dn + dm, dn, (0..dn).map(|i| (i, i, q(1))).collect());
    let projection = SparseMatrix::from_triplets(dm, dn + dm, (0..dm).map(|i| (i, i + dn, q(1))).collect());
    Ok(Extension {
        module,
        inclusion,
        projection,
    })
}

fn flatten(f: &SparseMatrix) -> SparseVec {
    let cols = f.ncols();
    SparseVec::from_pairs(f.triplets().into_iter().map(|(r, c, v)| (r * cols + c, v)).collect())
}

impl Extension {
    /// Whether some module map `s : M → X` satisfies `π ∘ s = id`.
    pub fn splits(&self, m: &WeightModule) -> bool {
        let homs = m.hom_space(&self.module);
        let images: Vec<SparseVec> = homs.iter().map(|h| flatten(&self.projection.mul(h))).collect();
        let dim = m.dim() * m.dim();
        let a = SparseMatrix::from_columns(dim, images);
        a.solve(&flatten(&SparseMatrix::identity(m.dim()))).is_some()
    }
}

/// Maximal elements of `set` under `≺`, lexicographically largest first.
pub fn maximal_elements(set: &[Weight]) -> Vec<Weight> {
    let shift = set.iter().flat_map(|w| w.0.iter().copied()).min().unwrap_or(0).min(0);
    let keys: Vec<OrderKey> = set.iter().map(|w| OrderKey::new(&w.shifted(-shift))).collect();
    let mut out: Vec<Weight> = (0..set.len())
        .filter(|&i| !(0..set.len()).any(|j| keys[i].precedes(&keys[j])))
        .map(|i| set[i].clone())
        .collect();
    out.sort_by(|a, b| b.cmp(a));
    out.dedup();
    out
}

/// Homomorphism `C^{⊕m} → L` from copies of a module `C` generated by basis
/// vector `generator`, sending the `k`-th generator to `targets[k]`, if it
/// exists.
pub fn map_from_cyclic(
    src: &WeightModule,
    generator: usize,
    target: &WeightModule,
    targets: &[SparseVec],
) -> Option<Morphism> {
    let homs = src.hom_space(target);
    let at_gen = SparseMatrix::from_columns(target.dim(), homs.iter().map(|h| h.col(generator).clone()).collect());
    let s = src.dim();
    let mut triplets = Vec::new();
    for (k, v) in targets.iter().enumerate() {
        let coeffs = at_gen.solve(v)?;
        let mut f = SparseMatrix::zero(target.dim(), s);
        for (j, c) in coeffs.entries() {
            f = f.add(&homs[*j].scaled(c));
        }
        triplets.extend(f.triplets().into_iter().map(|(r, col, val)| (r, col + k * s, val)));
    }
    Some(SparseMatrix::from_triplets(target.dim(), s * targets.len(), triplets))
}

/// One step `M_{k−1} ⊂ M_k` of a standard filtration.
#[derive(Clone, Debug)]
pub struct FiltrationLayer {
    pub label: Weight,
    pub multiplicity: usize,
    /// `M_k` inside `M`.
    pub span: Echelon,
    /// `M_k / M_{k−1}`.
    pub layer: WeightModule,
    /// Isomorphism `𝒮_λ^{⊕m} → M_k / M_{k−1}`.
    pub witness: Morphism,
}

/// `0 = M_0 ⊂ M_1 ⊂ ⋯ ⊂ M_r = M`, listed from the bottom.
#[derive(Clone, Debug)]
pub struct Filtration {
    pub layers: Vec<FiltrationLayer>,
}

impl Filtration {
    pub fn multiplicity(&self, lambda: &Weight) -> usize {
        self.layers
            .iter()
            .filter(|l| &l.label == lambda)
            .map(|l| l.multiplicity)
            .sum()
    }

    pub fn labels(&self) -> Vec<Weight> {
        self.layers.iter().map(|l| l.label.clone()).collect()
    }
}

/// Repeatedly splits off the submodule generated by a `≺`-maximal weight
/// space and checks that it is a sum of copies of the standard module.
pub fn standard_filtration(m: &WeightModule) -> Result<Filtration> {
    let mut current = m.clone();
    let mut proj = SparseMatrix::identity(m.dim());
    let mut layers = Vec::new();
    while current.dim() > 0 {
        let weights: Vec<Weight> = current.weight_spaces().into_keys().collect();
        let lambda = maximal_elements(&weights).remove(0);
        let top: Vec<SparseVec> = (0..current.dim())
            .filter(|&i| current.weight(i) == &lambda)
            .map(SparseVec::unit)
            .collect();
        let sub = current.submodule_generated(&top);
        let std = kp_module_gen(&lambda);
        let targets: Vec<SparseVec> = top.iter().map(|v| sub.span.coordinates(v).unwrap()).collect();
        let witness = map_from_cyclic(&std.module, std.generator, &sub.module, &targets)
            .filter(|w| w.nrows() == w.ncols() && w.is_invertible())
            .ok_or_else(|| Error::NotStandardlyFiltered(lambda.clone()))?;
        let quot = current.quotient(&sub.span)?;
        proj = quot.projection.mul(&proj);
        let mut span = Echelon::new(m.dim());
        for v in proj.kernel() {
            span.insert(v);
        }
        layers.push(FiltrationLayer {
            label: lambda,
            multiplicity: top.len(),
            span,
            layer: sub.module,
            witness,
        });
        current = quot.module;
    }
    Ok(Filtration { layers })
}

/// `Some(true)` when `End(M)` is one-dimensional; `None` when the test is
/// inconclusive.
pub fn indecomposable_by_end(m: &WeightModule) -> Option<bool> {
    (m.hom_space(m).len() == 1).then_some(true)
}

/// `C_Λ`: weight `𝔟`-modules with weights in a finite order ideal `Λ`.
#[derive(Debug)]
pub struct Category {
    n: usize,
    weights: Vec<Weight>,
    index: HashMap<Weight, usize>,
    standards: Vec<OnceLock<KpModule>>,
    costandards: Vec<OnceLock<WeightModule>>,
}

/// A tilting module containing `M`.
#[derive(Clone, Debug)]
pub struct TiltingEnvelope {
    pub module: WeightModule,
    pub injection: Morphism,
    /// Weights at which an extension was glued on, in order.
    pub steps: Vec<Weight>,
}

/// `0 → M → T_0 → ⋯ → T_r → 0`.
#[derive(Clone, Debug)]
pub struct TiltingResolution {
    pub terms: Vec<WeightModule>,
    /// `M → T_0`, then `T_k → T_{k+1}`.
    pub maps: Vec<Morphism>,
}

impl TiltingResolution {
    pub fn length(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }

    /// Exactness at every term, including injectivity of `M → T_0`.
    pub fn is_exact(&self, m: &WeightModule) -> bool {
        if self.maps.is_empty() {
            return m.dim() == 0;
        }
        if self.maps[0].rank() != m.dim() {
            return false;
        }
        for k in 0..self.terms.len() {
            let incoming = self.maps[k].rank();
            let outgoing = self.maps.get(k + 1).map_or(0, |f| f.rank());
            if let Some(f) = self.maps.get(k + 1) {
                if !f.mul(&self.maps[k]).is_zero() {
                    return false;
                }
            }
            if incoming + outgoing != self.terms[k].dim() {
                return false;
            }
        }
        true
    }
}

impl Category {
    /// `C_n = C_{Λ_n}`.
    pub fn new(n: usize) -> Self {
        Self::with_weights(n, lambda_n(n))
    }

    /// The caller guarantees that `weights` is an order ideal.
    pub fn with_weights(n: usize, weights: Vec<Weight>) -> Self {
        let index = weights.iter().enumerate().map(|(k, w)| (w.clone(), k)).collect();
        let standards = weights.iter().map(|_| OnceLock::new()).collect();
        let costandards = weights.iter().map(|_| OnceLock::new()).collect();
        Self {
            n,
            weights,
            index,
            standards,
            costandards,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn contains_weight(&self, lambda: &Weight) -> bool {
        self.index.contains_key(lambda)
    }

    pub fn contains(&self, m: &WeightModule) -> bool {
        m.n() == self.n && m.weights().iter().all(|w| self.contains_weight(w))
    }

    fn slot(&self, lambda: &Weight) -> Result<usize> {
        self.index
            .get(lambda)
            .copied()
            .ok_or_else(|| Error::NotInLambda(lambda.clone(), self.n))
    }

    /// `Δ(λ) = 𝒮_λ`.
    pub fn standard(&self, lambda: &Weight) -> Result<&KpModule> {
        let k = self.slot(lambda)?;
        Ok(self.standards[k].get_or_init(|| kp_module_gen(lambda)))
    }

    /// `∇(λ) = 𝒮_{ρ−λ}^* ⊗ K_ρ`.
    pub fn costandard(&self, lambda: &Weight) -> Result<&WeightModule> {
        let k = self.slot(lambda)?;
        Ok(self.costandards[k].get_or_init(|| kp_module_gen(&(&Weight::rho(self.n) - lambda)).module.dual_twist()))
    }

    /// `{μ ∈ Λ : μ ⪯ g for some g}`.
    pub fn ideal(&self, gens: &[Weight]) -> Vec<Weight> {
        self.weights
            .iter()
            .filter(|mu| gens.iter().any(|g| precedes_eq(mu, g)))
            .cloned()
            .collect()
    }

    /// An order ideal without its maximal elements.
    pub fn interior(&self, ideal: &[Weight]) -> Vec<Weight> {
        let maxes: BTreeSet<Weight> = maximal_elements(ideal).into_iter().collect();
        ideal.iter().filter(|w| !maxes.contains(w)).cloned().collect()
    }

    /// `(M : Δ(λ)) = dim Hom(M, ∇(λ))`.
    pub fn filtration_multiplicity(&self, m: &WeightModule, lambda: &Weight) -> Result<usize> {
        Ok(m.hom_space(self.costandard(lambda)?).len())
    }

    /// `Ext^1(M, ∇(λ)) = 0` for all `λ ∈ Λ`.
    pub fn has_standard_filtration(&self, m: &WeightModule) -> bool {
        self.contains(m)
            && self
                .weights
                .par_iter()
                .all(|l| ext_dim(m, self.costandard(l).unwrap(), 1) == 0)
    }

    /// The order ideal generated by the labels of a standard filtration.
    pub fn support(&self, m: &WeightModule) -> Result<Vec<Weight>> {
        let gens: Vec<Weight> = self
            .weights
            .iter()
            .filter(|l| self.filtration_multiplicity(m, l).is_ok_and(|c| c > 0))
            .cloned()
            .collect();
        Ok(self.ideal(&gens))
    }

    fn defect_generators(&self, m: &WeightModule) -> Vec<Weight> {
        self.weights
            .par_iter()
            .filter(|l| ext_dim(&self.standard(l).unwrap().module, m, 1) > 0)
            .cloned()
            .collect()
    }

    /// The order ideal generated by `{λ : Ext^1(Δ(λ), M) ≠ 0}`.
    pub fn defect(&self, m: &WeightModule) -> Vec<Weight> {
        self.ideal(&self.defect_generators(m))
    }

    pub fn is_tilting(&self, m: &WeightModule) -> bool {
        self.has_standard_filtration(m) && self.defect_generators(m).is_empty()
    }

    /// Glues on nonsplit extensions by `Δ(λ)` for a `≺`-maximal defect
    /// weight `λ` until the defect is empty.
    pub fn tilting_envelope(&self, m: &WeightModule) -> Result<TiltingEnvelope> {
        if !self.has_standard_filtration(m) {
            return Err(Error::NotStandardlyFiltered(
                m.weights().first().cloned().unwrap_or_else(|| Weight::zero(self.n)),
            ));
        }
        let mut x = m.clone();
        let mut injection = SparseMatrix::identity(m.dim());
        let mut steps = Vec::new();
        let guard = 64 * (self.weights.len() + 1) * (m.dim() + 1);
        loop {
            let gens = self.defect_generators(&x);
            if gens.is_empty() {
                break;
            }
            if steps.len() > guard {
                return Err(Error::Internal("tilting envelope did not terminate".into()));
            }
            let lambda = maximal_elements(&gens).remove(0);
            let std = &self.standard(&lambda)?.module;
            let class = ext1_classes(std, &x)
                .into_iter()
                .next()
                .ok_or_else(|| Error::Internal("defect weight without extension class".into()))?;
            let ext = realize_extension(std, &x, &class)?;
            injection = ext.inclusion.mul(&injection);
            x = ext.module;
            steps.push(lambda);
        }
        Ok(TiltingEnvelope {
            module: x,
            injection,
            steps,
        })
    }

    /// Iterated tilting envelopes of cokernels.
    pub fn tilting_resolution(&self, m: &WeightModule) -> Result<TiltingResolution> {
        let mut terms = Vec::new();
        let mut maps = Vec::new();
        let mut source = m.clone();
        let mut from_prev: Option<Morphism> = None;
        for _ in 0..=self.weights.len() + 1 {
            let env = self.tilting_envelope(&source)?;
            let map = match from_prev.take() {
                Some(p) => env.injection.mul(&p),
                None => env.injection.clone(),
            };
            maps.push(map);
            let mut image = Echelon::new(env.module.dim());
            for c in env.injection.columns() {
                image.insert(c.clone());
            }
            let quot = env.module.quotient(&image)?;
            terms.push(env.module);
            if quot.module.dim() == 0 {
                return Ok(TiltingResolution { terms, maps });
            }
            from_prev = Some(quot.projection);
            source = quot.module;
        }
        Err(Error::Internal("tilting resolution did not terminate".into()))
    }
}
