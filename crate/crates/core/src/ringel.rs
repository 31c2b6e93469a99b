//! The functor `F = Hom(−, T)` with the `𝔟'`-induced module structure, the
//! algebra `E = End(T)`, projective covers in `C_n`, an Ext computation by
//! projective resolutions over `E`, restricted tensor products, and the
//! verification suites built on top of them.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homological::{ext_dims, map_from_cyclic, standard_filtration, Category};
use crate::kp::{kp_module, FullTilting};
use crate::linalg::{Echelon, SparseMatrix, SparseVec, TrackedEchelon, Q};
use crate::perm::{lambda_n, precedes, Permutation, Weight};
use crate::schubert::{iota_hn, reduce_character, schubert_poly};
use crate::weightmod::{roots, Morphism, Quotient, Submodule, WeightModule};

fn flatten(f: &SparseMatrix) -> SparseVec {
    let cols = f.ncols();
    SparseVec::from_pairs(f.triplets().into_iter().map(|(r, c, v)| (r * cols + c, v)).collect())
}

/// The summand of `T` of `h'`-weight `μ`; it is `T(μ̄)`.
#[derive(Clone, Debug)]
pub struct Summand {
    pub weight: Weight,
    pub indices: Vec<usize>,
    pub module: WeightModule,
}

/// Summands of `T` by `h'`-weight, in lexicographic order of the weight.
pub fn hprime_summands(t: &FullTilting) -> Vec<Summand> {
    let mut groups: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
    for k in 0..t.dim() {
        groups.entry(t.hprime_weight(k).clone()).or_default().push(k);
    }
    groups
        .into_iter()
        .map(|(weight, indices)| {
            let weights = indices.iter().map(|&k| t.module.weight(k).clone()).collect();
            let gens = t
                .module
                .gens()
                .iter()
                .map(|e| e.submatrix(&indices, &indices))
                .collect();
            let module = WeightModule::new(t.n(), weights, gens, None).expect("summand shapes agree");
            Summand {
                weight,
                indices,
                module,
            }
        })
        .collect()
}

fn embed_rows(f: &SparseMatrix, rows: &[usize], nrows: usize) -> SparseMatrix {
    SparseMatrix::from_triplets(
        nrows,
        f.ncols(),
        f.triplets().into_iter().map(|(r, c, v)| (rows[r], c, v)).collect(),
    )
}

/// `FM = Hom(M, T)` with `(e·φ)(m) = e'(φ(m))`, graded by `h'`.
#[derive(Clone, Debug)]
pub struct RingelImage {
    pub module: WeightModule,
    /// Basis of `Hom(M, T)`, each a `T.dim × M.dim` matrix.
    pub homs: Vec<Morphism>,
    tracker: TrackedEchelon,
}

impl RingelImage {
    pub fn coordinates(&self, phi: &Morphism) -> Option<SparseVec> {
        self.tracker.express(&flatten(phi))
    }
}

pub fn ringel_f(m: &WeightModule, t: &FullTilting) -> RingelImage {
    ringel_f_graded(m, t, &|w: &Weight| w.clone())
}

/// As [`ringel_f`], with the weight of a homomorphism into the `h'`-weight
/// `μ` summand replaced by `grading(μ)`.
pub fn ringel_f_graded(m: &WeightModule, t: &FullTilting, grading: &dyn Fn(&Weight) -> Weight) -> RingelImage {
    let mut homs = Vec::new();
    let mut weights = Vec::new();
    for s in hprime_summands(t) {
        for h in m.hom_space(&s.module) {
            homs.push(embed_rows(&h, &s.indices, t.dim()));
            weights.push(grading(&s.weight));
        }
    }
    let mut tracker = TrackedEchelon::new(t.dim() * m.dim());
    for h in &homs {
        tracker.insert(flatten(h));
    }
    let gens = roots(t.n())
        .into_iter()
        .map(|(p, qq)| {
            let cols = homs
                .iter()
                .map(|h| {
                    tracker
                        .express(&flatten(&t.eprime(p, qq).mul(h)))
                        .expect("Hom(M, T) is stable under e'")
                })
                .collect();
            SparseMatrix::from_columns(homs.len(), cols)
        })
        .collect();
    let module = WeightModule::new(t.n(), weights, gens, None).expect("shapes agree");
    RingelImage { module, homs, tracker }
}

/// `F(f) : FN → FM`, `ψ ↦ ψ ∘ f`, for `f : M → N`.
pub fn ringel_f_morphism(f: &Morphism, fm: &RingelImage, fnn: &RingelImage) -> Result<Morphism> {
    let cols = fnn
        .homs
        .iter()
        .map(|psi| {
            fm.coordinates(&psi.mul(f))
                .ok_or_else(|| Error::Internal("ψ∘f is not a homomorphism into T".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrix::from_columns(fm.homs.len(), cols))
}

/// `E = End(T)` with a basis adapted to the decomposition of `T` by
/// `h'`-weight: every basis element maps one summand into another.
#[derive(Debug)]
pub struct EndAlgebra {
    n: usize,
    pub weights: Vec<Weight>,
    pub basis: Vec<Morphism>,
    /// `(target, source)` summand of each basis element.
    pub blocks: Vec<(usize, usize)>,
    summand_indices: Vec<Vec<usize>>,
    eprime: Vec<SparseMatrix>,
    tracker: TrackedEchelon,
    dim_t: usize,
    table: OnceLock<Vec<Vec<SparseVec>>>,
}

impl EndAlgebra {
    pub fn new(t: &FullTilting) -> Self {
        let summands = hprime_summands(t);
        let pairs: Vec<(usize, usize)> = (0..summands.len())
            .flat_map(|a| (0..summands.len()).map(move |b| (a, b)))
            .collect();
        let homs: Vec<Vec<Morphism>> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let (sa, sb) = (&summands[a], &summands[b]);
                sb.module
                    .hom_space(&sa.module)
                    .into_iter()
                    .map(|h| {
                        SparseMatrix::from_triplets(
                            t.dim(),
                            t.dim(),
                            h.triplets()
                                .into_iter()
                                .map(|(r, c, v)| (sa.indices[r], sb.indices[c], v))
                                .collect(),
                        )
                    })
                    .collect()
            })
            .collect();
        let mut basis = Vec::new();
        let mut blocks = Vec::new();
        for (&pair, hs) in pairs.iter().zip(homs) {
            for h in hs {
                basis.push(h);
                blocks.push(pair);
            }
        }
        let mut tracker = TrackedEchelon::new(t.dim() * t.dim());
        for b in &basis {
            tracker.insert(flatten(b));
        }
        let eprime = roots(t.n())
            .into_iter()
            .map(|(p, qq)| t.eprime(p, qq).clone())
            .collect();
        Self {
            n: t.n(),
            weights: summands.iter().map(|s| s.weight.clone()).collect(),
            summand_indices: summands.into_iter().map(|s| s.indices).collect(),
            basis,
            blocks,
            eprime,
            tracker,
            dim_t: t.dim(),
            table: OnceLock::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn weight_index(&self, lambda: &Weight) -> Option<usize> {
        self.weights.iter().position(|w| w == lambda)
    }

    pub fn coordinates(&self, x: &Morphism) -> Option<SparseVec> {
        self.tracker.express(&flatten(x))
    }

    /// The projection `π_λ` onto the `h'`-weight `λ` summand.
    pub fn idempotent_matrix(&self, idx: usize) -> Morphism {
        let t = self.summand_indices[idx]
            .iter()
            .map(|&k| (k, k, Q::from_integer(1.into())))
            .collect();
        SparseMatrix::from_triplets(self.dim_t, self.dim_t, t)
    }

    pub fn idempotent(&self, idx: usize) -> SparseVec {
        self.coordinates(&self.idempotent_matrix(idx))
            .expect("π_λ commutes with 𝔟")
    }

    /// `dim π_λ E π_λ`.
    pub fn corner_dim(&self, idx: usize) -> usize {
        self.blocks.iter().filter(|&&b| b == (idx, idx)).count()
    }

    /// `e'_pq` as an element of `E`, for the roots in order.
    pub fn eprime_matrix(&self, root: usize) -> &Morphism {
        &self.eprime[root]
    }

    /// Structure constants: `table()[i][j]` are the coordinates of `b_i b_j`.
    pub fn table(&self) -> &Vec<Vec<SparseVec>> {
        self.table.get_or_init(|| {
            (0..self.dim())
                .into_par_iter()
                .map(|i| {
                    (0..self.dim())
                        .map(|j| {
                            self.coordinates(&self.basis[i].mul(&self.basis[j]))
                                .expect("E is closed under composition")
                        })
                        .collect()
                })
                .collect()
        })
    }

    pub fn product(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let table = self.table();
        let mut out = SparseVec::new();
        for (i, a) in x.entries() {
            for (j, b) in y.entries() {
                out.add_scaled(&table[*i][*j], &(a * b));
            }
        }
        out
    }

    pub fn is_associative(&self) -> bool {
        let d = self.dim();
        (0..d).into_par_iter().all(|i| {
            (0..d).all(|j| {
                (0..d).all(|k| {
                    let (ei, ej, ek) = (SparseVec::unit(i), SparseVec::unit(j), SparseVec::unit(k));
                    self.product(&self.product(&ei, &ej), &ek) == self.product(&ei, &self.product(&ej, &ek))
                })
            })
        })
    }

    /// Checks `Σ π_λ = 1` and `π_λ π_μ = δ_λμ π_λ`.
    pub fn idempotents_are_complete(&self) -> bool {
        let pis: Vec<SparseVec> = (0..self.weights.len()).map(|i| self.idempotent(i)).collect();
        let mut sum = SparseVec::new();
        for p in &pis {
            sum.add_scaled(p, &Q::from_integer(1.into()));
        }
        let one = self
            .coordinates(&SparseMatrix::identity(self.dim_t))
            .expect("identity lies in E");
        if sum != one {
            return false;
        }
        for (a, pa) in pis.iter().enumerate() {
            for (b, pb) in pis.iter().enumerate() {
                let prod = self.product(pa, pb);
                let expected = if a == b { pa.clone() } else { SparseVec::new() };
                if prod != expected {
                    return false;
                }
            }
        }
        true
    }

    /// The left ideal `E π_μ` as a weight module: an element of
    /// `π_ν E π_μ` has weight `ν`, and `e_pq` acts by composing with `e'_pq`.
    /// Returns the module and the index of the element spanning `π_μ E π_μ`.
    pub fn left_ideal(&self, mu: usize) -> (WeightModule, usize) {
        let members: Vec<usize> = (0..self.dim()).filter(|&k| self.blocks[k].1 == mu).collect();
        let local: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let weights = members
            .iter()
            .map(|&k| self.weights[self.blocks[k].0].clone())
            .collect();
        let gens = self
            .eprime
            .iter()
            .map(|ep| {
                let cols = members
                    .iter()
                    .map(|&k| {
                        self.coordinates(&ep.mul(&self.basis[k]))
                            .expect("e' lies in E")
                            .remap(|g| Some(local[&g]))
                    })
                    .collect();
                SparseMatrix::from_columns(members.len(), cols)
            })
            .collect();
        let generator = members
            .iter()
            .position(|&k| self.blocks[k] == (mu, mu))
            .expect("π_μ lies in π_μ E π_μ");
        (
            WeightModule::new(self.n, weights, gens, None).expect("shapes agree"),
            generator,
        )
    }
}

/// Weights of `M / 𝔫M` with multiplicity, sorted.
pub fn head(m: &WeightModule) -> Vec<Weight> {
    let mut rad = Echelon::new(m.dim());
    for e in m.gens() {
        for c in e.columns() {
            rad.insert(c.clone());
        }
    }
    let mut out: Vec<Weight> = rad.free_columns().into_iter().map(|i| m.weight(i).clone()).collect();
    out.sort();
    out
}

/// Projective cover of `K_λ` in `C_n`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    pub module: WeightModule,
    pub generator: usize,
    /// The `μ` with `P(λ) = E π_μ`.
    pub idempotent: Weight,
    /// `P(λ) → K_λ`.
    pub surjection: Morphism,
}

/// Searches the left ideals `E π_μ` for the one whose head is `K_λ`.
pub fn projective_cover(e: &EndAlgebra, lambda: &Weight) -> Result<ProjectiveCover> {
    if !lambda.in_lambda() || lambda.n() != e.n() {
        return Err(Error::NotInLambda(lambda.clone(), e.n()));
    }
    for mu in 0..e.weights.len() {
        let (module, generator) = e.left_ideal(mu);
        if head(&module) != vec![lambda.clone()] {
            continue;
        }
        let surjection = SparseMatrix::from_triplets(1, module.dim(), vec![(0, generator, Q::from_integer(1.into()))]);
        return Ok(ProjectiveCover {
            module,
            generator,
            idempotent: e.weights[mu].clone(),
            surjection,
        });
    }
    Err(Error::Internal(format!("no left ideal of E has head K_{lambda}")))
}

/// Expressions of the basis of `E` as linear combinations of words
/// `e'_{r_1} ⋯ e'_{r_k} π_μ`.
#[derive(Clone, Debug)]
pub struct ELift {
    /// Roots from the outermost factor inwards, and the summand index `μ`.
    pub words: Vec<(Vec<usize>, usize)>,
    pub coeffs: Vec<SparseVec>,
}

/// Finds word expressions for every basis element of `E`; fails when the
/// words do not span `E`.
pub fn lift_basis(e: &EndAlgebra) -> Result<ELift> {
    let nroots = e.eprime.len();
    let mut tracker = TrackedEchelon::new(e.dim_t * e.dim_t);
    let mut words = Vec::new();
    let mut queue: VecDeque<(Vec<usize>, usize, Morphism)> = (0..e.weights.len())
        .map(|mu| (Vec::new(), mu, e.idempotent_matrix(mu)))
        .collect();
    while let Some((word, mu, mat)) = queue.pop_front() {
        if mat.is_zero() {
            continue;
        }
        let fresh = tracker.insert(flatten(&mat));
        if fresh {
            for r in 0..nroots {
                let mut w = vec![r];
                w.extend(&word);
                queue.push_back((w, mu, e.eprime[r].mul(&mat)));
            }
        }
        // tracker ids count every insertion attempt
        words.push((word, mu));
    }
    let coeffs = e
        .basis
        .iter()
        .map(|b| tracker.express(&flatten(b)))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Internal("lift system singular: words do not span End(T)".into()))?;
    Ok(ELift { words, coeffs })
}

/// A module over `E` given by the action of every basis element; basis
/// vectors carry the index of the idempotent fixing them.
#[derive(Clone, Debug)]
pub struct EModule {
    pub weights: Vec<usize>,
    pub act: Vec<SparseMatrix>,
}

impl EModule {
    /// A weight module in `C_n` viewed as an `E`-module through the lifts.
    pub fn from_weight_module(m: &WeightModule, e: &EndAlgebra, lift: &ELift) -> Result<Self> {
        let weights = m
            .weights()
            .iter()
            .map(|w| e.weight_index(w).ok_or_else(|| Error::NotInLambda(w.clone(), e.n())))
            .collect::<Result<Vec<_>>>()?;
        let dim = m.dim();
        let word_mats: Vec<SparseMatrix> = lift
            .words
            .iter()
            .map(|(word, mu)| {
                let proj = SparseMatrix::from_triplets(
                    dim,
                    dim,
                    (0..dim)
                        .filter(|&i| weights[i] == *mu)
                        .map(|i| (i, i, Q::from_integer(1.into())))
                        .collect(),
                );
                word.iter().rev().fold(proj, |acc, &r| m.gens()[r].mul(&acc))
            })
            .collect();
        let act = lift
            .coeffs
            .iter()
            .map(|c| {
                c.entries().iter().fold(SparseMatrix::zero(dim, dim), |acc, (w, x)| {
                    acc.add(&word_mats[*w].scaled(x))
                })
            })
            .collect();
        Ok(Self { weights, act })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// `b_i (b_j v) = (b_i b_j) v` on all basis pairs.
    pub fn is_module(&self, e: &EndAlgebra) -> bool {
        let table = e.table();
        (0..e.dim()).all(|i| {
            (0..e.dim()).all(|j| {
                let lhs = self.act[i].mul(&self.act[j]);
                let rhs = table[i][j]
                    .entries()
                    .iter()
                    .fold(SparseMatrix::zero(self.dim(), self.dim()), |acc, (k, c)| {
                        acc.add(&self.act[*k].scaled(c))
                    });
                lhs == rhs
            })
        })
    }
}

/// One term `⊕_g E π_{λ_g}` of a projective resolution.
#[derive(Clone, Debug)]
struct FreeTerm {
    /// Idempotent index of each generator.
    gens: Vec<usize>,
    /// Basis `(g, k)` with `b_k ∈ E π_{λ_g}`.
    basis: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl FreeTerm {
    fn new(e: &EndAlgebra, gens: Vec<usize>) -> Self {
        let basis: Vec<(usize, usize)> = gens
            .iter()
            .enumerate()
            .flat_map(|(g, &mu)| (0..e.dim()).filter(move |&k| e.blocks[k].1 == mu).map(move |k| (g, k)))
            .collect();
        let index = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        Self { gens, basis, index }
    }

    fn weight(&self, e: &EndAlgebra, i: usize) -> usize {
        e.blocks[self.basis[i].1].0
    }

    fn act(&self, e: &EndAlgebra, j: usize, v: &SparseVec) -> SparseVec {
        let table = e.table();
        let mut out = SparseVec::new();
        for (i, c) in v.entries() {
            let (g, k) = self.basis[*i];
            for (l, d) in table[j][k].entries() {
                out.add_scaled(&SparseVec::unit(self.index[&(g, *l)]), &(c * d));
            }
        }
        out
    }
}

/// Generators of `X / rad X`, one homogeneous vector each.
fn top_generators(e: &EndAlgebra, x: &EModule) -> Vec<(usize, SparseVec)> {
    let mut ech = Echelon::new(x.dim());
    for k in 0..e.dim() {
        if e.blocks[k].0 != e.blocks[k].1 {
            for c in x.act[k].columns() {
                ech.insert(c.clone());
            }
        }
    }
    let mut out = Vec::new();
    for i in 0..x.dim() {
        if ech.insert(SparseVec::unit(i)).is_some() {
            out.push((x.weights[i], SparseVec::unit(i)));
        }
    }
    out
}

/// `dim Ext^i_E(M, N)` for `i = 0..=top` from a minimal projective
/// resolution of `M` over `E`.
pub fn ext_oracle_via_e(
    m: &WeightModule,
    nmod: &WeightModule,
    top: usize,
    e: &EndAlgebra,
    lift: &ELift,
) -> Result<Vec<usize>> {
    let mut x = EModule::from_weight_module(m, e, lift)?;
    let nm = EModule::from_weight_module(nmod, e, lift)?;
    // differentials: for each level L >= 1, images of the generators in P_{L-1}
    let mut terms: Vec<FreeTerm> = Vec::new();
    let mut boundaries: Vec<Vec<SparseVec>> = Vec::new();
    // coordinates of the current X inside the previous term
    let mut embed: Option<Vec<SparseVec>> = None;
    for _level in 0..=top + 1 {
        let gens = top_generators(e, &x);
        let term = FreeTerm::new(e, gens.iter().map(|g| g.0).collect());
        if let Some(basis) = &embed {
            boundaries.push(
                gens.iter()
                    .map(|(_, v)| {
                        let mut out = SparseVec::new();
                        for (i, c) in v.entries() {
                            out.add_scaled(&basis[*i], c);
                        }
                        out
                    })
                    .collect(),
            );
        }
        // P → X, (g, k) ↦ b_k v_g
        let images: Vec<SparseVec> = term.basis.iter().map(|&(g, k)| x.act[k].mul_vec(&gens[g].1)).collect();
        let mut kernel: Vec<SparseVec> = Vec::new();
        let mut kernel_weights = Vec::new();
        for mu in 0..e.weights.len() {
            let cols: Vec<usize> = (0..term.basis.len()).filter(|&i| term.weight(e, i) == mu).collect();
            if cols.is_empty() {
                continue;
            }
            let a = SparseMatrix::from_columns(x.dim(), cols.iter().map(|&c| images[c].clone()).collect());
            for v in a.kernel() {
                kernel.push(v.remap(|i| Some(cols[i])));
                kernel_weights.push(mu);
            }
        }
        let mut kech = Echelon::new(term.basis.len());
        let mut kbasis = Vec::new();
        let mut kw = Vec::new();
        for (v, w) in kernel.into_iter().zip(kernel_weights) {
            if kech.insert(v.clone()).is_some() {
                kbasis.push(v);
                kw.push(w);
            }
        }
        let mut solver = TrackedEchelon::new(term.basis.len());
        for v in &kbasis {
            solver.insert(v.clone());
        }
        let act = (0..e.dim())
            .map(|j| {
                let cols = kbasis
                    .iter()
                    .map(|v| {
                        solver
                            .express(&term.act(e, j, v))
                            .ok_or_else(|| Error::Internal("kernel is not an E-submodule".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(SparseMatrix::from_columns(kbasis.len(), cols))
            })
            .collect::<Result<Vec<_>>>()?;
        terms.push(term);
        embed = Some(kbasis.clone());
        x = EModule { weights: kw, act };
    }
    // Hom(P_L, N) = ⊕_g π_{λ_g} N
    let nw = &nm.weights;
    let hom_basis: Vec<Vec<(usize, usize)>> = terms
        .iter()
        .map(|t| {
            t.gens
                .iter()
                .enumerate()
                .flat_map(|(g, &mu)| (0..nw.len()).filter(move |&b| nw[b] == mu).map(move |b| (g, b)))
                .collect()
        })
        .collect();
    let mut ranks = Vec::new();
    for level in 0..=top {
        let source = &hom_basis[level];
        let target: HashMap<(usize, usize), usize> =
            hom_basis[level + 1].iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let term = &terms[level];
        let cols = source
            .iter()
            .map(|&(g, b)| {
                let mut pairs = Vec::new();
                for (h, dh) in boundaries[level].iter().enumerate() {
                    let mut value = SparseVec::new();
                    for (i, c) in dh.entries() {
                        let (g2, k) = term.basis[*i];
                        if g2 == g {
                            value.add_scaled(nm.act[k].col(b), c);
                        }
                    }
                    for (b2, c) in value.entries() {
                        pairs.push((target[&(h, *b2)], c.clone()));
                    }
                }
                SparseVec::from_pairs(pairs)
            })
            .collect();
        ranks.push(SparseMatrix::from_columns(hom_basis[level + 1].len(), cols).rank());
    }
    Ok((0..=top)
        .map(|i| hom_basis[i].len() - ranks[i] - if i == 0 { 0 } else { ranks[i - 1] })
        .collect())
}

/// `(M ⊗ N)^{Λ_n}`.
pub fn restricted_tensor(m: &WeightModule, nmod: &WeightModule) -> Quotient {
    m.tensor(nmod).largest_quotient(|w| w.in_lambda())
}

/// The map `FM ⊗ FN → F(M ⊗ N)`, `φ ⊗ ψ ↦ (m ⊗ n ↦ φ(m) ∧ ψ(n))`, with the
/// modules involved.
#[derive(Clone, Debug)]
pub struct CauchyPairing {
    pub fm: RingelImage,
    pub fnn: RingelImage,
    pub fmn: RingelImage,
    pub map: Morphism,
}

impl CauchyPairing {
    pub fn is_surjective(&self) -> bool {
        self.map.rank() == self.fmn.module.dim()
    }
}

pub fn cauchy_pairing_map(t: &FullTilting, m: &WeightModule, nmod: &WeightModule) -> Result<CauchyPairing> {
    let fm = ringel_f(m, t);
    let fnn = ringel_f(nmod, t);
    let mn = m.tensor(nmod);
    let fmn = ringel_f(&mn, t);
    let mut cols = Vec::with_capacity(fm.homs.len() * fnn.homs.len());
    for phi in &fm.homs {
        for psi in &fnn.homs {
            let chi_cols = (0..m.dim())
                .flat_map(|a| (0..nmod.dim()).map(move |b| (a, b)))
                .map(|(a, b)| t.wedge(phi.col(a), psi.col(b)))
                .collect();
            let chi = SparseMatrix::from_columns(t.dim(), chi_cols);
            cols.push(
                fmn.coordinates(&chi)
                    .ok_or_else(|| Error::Internal("wedge pairing is not a homomorphism".into()))?,
            );
        }
    }
    let map = SparseMatrix::from_columns(fmn.homs.len(), cols);
    Ok(CauchyPairing { fm, fnn, fmn, map })
}

/// `(FM ⊗ FN)^{Λ_n} → F((M ⊗ N)^{Λ_n})` induced by the wedge pairing.
#[derive(Clone, Debug)]
pub struct TensorDuality {
    pub pairing: CauchyPairing,
    pub source: WeightModule,
    pub target: WeightModule,
    pub map: Morphism,
}

impl TensorDuality {
    pub fn is_isomorphism(&self) -> bool {
        self.map.nrows() == self.map.ncols()
            && self.map.is_invertible()
            && self.source.is_morphism_to(&self.target, &self.map)
    }
}

pub fn tensor_duality(t: &FullTilting, m: &WeightModule, nmod: &WeightModule) -> Result<TensorDuality> {
    let pairing = cauchy_pairing_map(t, m, nmod)?;
    let prod = pairing.fm.module.tensor(&pairing.fnn.module);
    let quot = prod.largest_quotient(|w| w.in_lambda());
    for v in quot.kernel.basis() {
        if !pairing.map.mul_vec(v).is_zero() {
            return Err(Error::Internal(
                "pairing does not factor through the restricted tensor".into(),
            ));
        }
    }
    let induced = SparseMatrix::from_columns(
        pairing.fmn.homs.len(),
        quot.complement.iter().map(|&c| pairing.map.col(c).clone()).collect(),
    );
    let r = restricted_tensor(m, nmod);
    let fr = ringel_f(&r.module, t);
    let f_pi = ringel_f_morphism(&r.projection, &pairing.fmn, &fr)?;
    let inv = f_pi
        .inverse()
        .ok_or_else(|| Error::Internal("F of the restriction is not invertible".into()))?;
    let map = inv.mul(&induced);
    Ok(TensorDuality {
        pairing,
        source: quot.module,
        target: fr.module,
        map,
    })
}

/// One line of the tensor power count.
#[derive(Clone, Debug, Serialize)]
pub struct ConjectureRow {
    pub n: usize,
    pub k: usize,
    pub dim: usize,
    pub expected: usize,
    pub graded: Vec<usize>,
    pub expected_graded: Vec<usize>,
    /// Whether this scale is pinned as an assertion rather than a report.
    pub asserted: bool,
}

impl ConjectureRow {
    pub fn matches(&self) -> bool {
        self.dim == self.expected && self.graded == self.expected_graded
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn conjecture_is_asserted(n: usize, k: usize) -> bool {
    matches!((n, k), (2, 1..=3) | (3, 1..=2))
}

/// `dim (T^{⊗k})^{Λ_n}` and its pieces by exterior degree, against
/// `(k+1)^{n(n−1)/2}` and `k^d C(n(n−1)/2, d)`.
pub fn conjecture_dims(n: usize, k: usize) -> ConjectureRow {
    let t = FullTilting::new(n);
    let mut power = WeightModule::one_dim(&Weight::zero(n));
    for _ in 0..k {
        power = power.tensor(&t.module);
    }
    let quot = power.largest_quotient(|w| w.in_lambda());
    let big_n = n * (n - 1) / 2;
    let mut graded = vec![0usize; big_n + 1];
    for w in quot.module.weights() {
        let d = w.degree() as usize;
        if d >= graded.len() {
            graded.resize(d + 1, 0);
        }
        graded[d] += 1;
    }
    let expected_graded: Vec<usize> = (0..=big_n).map(|d| k.pow(d as u32) * binomial(big_n, d)).collect();
    ConjectureRow {
        n,
        k,
        dim: quot.module.dim(),
        expected: (k + 1).pow(big_n as u32),
        graded,
        expected_graded,
        asserted: conjecture_is_asserted(n, k),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub n: usize,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn failures<T: std::fmt::Display>(items: Vec<T>) -> String {
    if items.is_empty() {
        "ok".into()
    } else {
        items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; ")
    }
}

/// Axioms (1)–(3) of a highest weight category for `C_n`, exhaustively.
pub fn verify_hw_axioms(n: usize) -> Result<Report> {
    let cat = Category::new(n);
    let t = FullTilting::new(n);
    let e = EndAlgebra::new(&t);
    let lam = lambda_n(n);
    let pairs: Vec<(Weight, Weight)> = lam
        .iter()
        .flat_map(|a| lam.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let bad1: Vec<String> = pairs
        .par_iter()
        .filter(|(a, b)| {
            let h = cat
                .standard(a)
                .unwrap()
                .module
                .hom_space(&cat.standard(b).unwrap().module);
            !h.is_empty() && !(a == b || precedes(a, b))
        })
        .map(|(a, b)| format!("Hom({a}, {b}) != 0"))
        .collect();
    let bad2: Vec<String> = lam
        .par_iter()
        .filter(|l| {
            let s = &cat.standard(l).unwrap().module;
            s.hom_space(s).len() != 1
        })
        .map(|l| format!("End({l})"))
        .collect();
    e.table();
    let bad3: Vec<String> = lam
        .par_iter()
        .filter_map(|l| match check_projective_axiom(&cat, &e, l) {
            Ok(None) => None,
            Ok(Some(msg)) => Some(msg),
            Err(err) => Some(format!("{l}: {err}")),
        })
        .collect();
    Ok(Report {
        suite: "axioms".into(),
        n,
        checks: vec![
            CheckResult::new("Hom(S_λ, S_μ) = 0 unless λ ⪯ μ", bad1.is_empty(), failures(bad1)),
            CheckResult::new("End(S_λ) = K", bad2.is_empty(), failures(bad2)),
            CheckResult::new(
                "P(λ) → S_λ with kernel filtered by S_ν, ν ≻ λ",
                bad3.is_empty(),
                failures(bad3),
            ),
        ],
    })
}

/// `None` when `P(λ) ↠ 𝒮_λ` exists and its kernel has a standard filtration
/// with labels `≻ λ`; otherwise a description of the failure.
pub fn check_projective_axiom(cat: &Category, e: &EndAlgebra, lambda: &Weight) -> Result<Option<String>> {
    let p = projective_cover(e, lambda)?;
    let s = cat.standard(lambda)?;
    let target = SparseVec::unit(s.generator);
    let Some(f) = map_from_cyclic(&p.module, p.generator, &s.module, &[target]) else {
        return Ok(Some(format!("{lambda}: no map P → S")));
    };
    if f.rank() != s.module.dim() {
        return Ok(Some(format!("{lambda}: P → S not surjective")));
    }
    let mut span = Echelon::new(p.module.dim());
    for v in f.kernel() {
        span.insert(v);
    }
    let kernel = Submodule::from_span(&p.module, span)?;
    match standard_filtration(&kernel.module) {
        Ok(filt) => {
            let bad: Vec<Weight> = filt.labels().into_iter().filter(|nu| !precedes(lambda, nu)).collect();
            Ok((!bad.is_empty()).then(|| format!("{lambda}: kernel has labels {bad:?}")))
        }
        Err(err) => Ok(Some(format!("{lambda}: kernel not filtered ({err})"))),
    }
}

/// `F(𝒮_w) ≅ 𝒮_{w₀ww₀}` and the structure of `End(T)`.
pub fn verify_ringel(n: usize, sample: Option<Vec<Permutation>>) -> Result<Report> {
    verify_ringel_graded(n, sample, &|w: &Weight| w.clone())
}

/// As [`verify_ringel`] with a modified `h'`-grading on `F`.
pub fn verify_ringel_graded(
    n: usize,
    sample: Option<Vec<Permutation>>,
    grading: &(dyn Fn(&Weight) -> Weight + Sync),
) -> Result<Report> {
    let t = FullTilting::new(n);
    let e = EndAlgebra::new(&t);
    let perms = sample.unwrap_or_else(|| Permutation::all(n));
    let results: Vec<(String, bool, bool, bool)> = perms
        .par_iter()
        .map(|w| {
            let kp = kp_module(w, n)?;
            let wbar = w.conjugate_w0(n)?;
            let target = kp_module(&wbar, n)?;
            let fs = ringel_f_graded(&kp.module, &t, grading);
            let iso = target.module.is_isomorphic(&fs.module).is_witness();
            let ones = schubert_poly(&wbar, n)?.specialize_ones();
            let dims = num::BigInt::from(fs.module.dim()) == ones;
            let ch = reduce_character(&fs.module.character())
                .map(|c| c == iota_hn(&reduce_character(&kp.module.character()).unwrap()))
                .unwrap_or(false);
            Ok((w.notation(n), iso, dims, ch))
        })
        .collect::<Result<Vec<_>>>()?;
    let iso_bad: Vec<String> = results.iter().filter(|r| !r.1).map(|r| r.0.clone()).collect();
    let dim_bad: Vec<String> = results.iter().filter(|r| !r.2).map(|r| r.0.clone()).collect();
    let ch_bad: Vec<String> = results.iter().filter(|r| !r.3).map(|r| r.0.clone()).collect();
    let expected = 1usize << (n * (n - 1) / 2);
    let corners: Vec<String> = (0..e.weights.len())
        .filter(|&i| e.corner_dim(i) != 1)
        .map(|i| e.weights[i].to_string())
        .collect();
    let outside: Vec<String> = outside_samples(n)
        .into_iter()
        .filter(|w| !ringel_f(&kp_module(w, n).unwrap().module, &t).homs.is_empty())
        .map(|w| w.to_string())
        .collect();
    let mut checks = vec![
        CheckResult::new("F(S_w) ≅ S_{w0 w w0}", iso_bad.is_empty(), failures(iso_bad)),
        CheckResult::new(
            "dim Hom(S_w, T) = S_{w0 w w0}(1)",
            dim_bad.is_empty(),
            failures(dim_bad),
        ),
        CheckResult::new("ch F(S_w) = ι(ch S_w) in H_n", ch_bad.is_empty(), failures(ch_bad)),
        CheckResult::new(
            "dim End(T) = 2^(n choose 2)",
            e.dim() == expected,
            format!("{} (expected {expected})", e.dim()),
        ),
        CheckResult::new("π_λ E π_λ = K", corners.is_empty(), failures(corners)),
        CheckResult::new("F(S_w) = 0 for w outside S_n", outside.is_empty(), failures(outside)),
    ];
    if e.dim() <= 16 {
        checks.push(CheckResult::new(
            "E associative",
            e.is_associative(),
            "structure constants",
        ));
        checks.push(CheckResult::new(
            "Σ π_λ = 1, π_λ π_μ = δ π_λ",
            e.idempotents_are_complete(),
            "idempotents",
        ));
    }
    Ok(Report {
        suite: "ringel".into(),
        n,
        checks,
    })
}

/// A few permutations in `S_∞^(n)` outside `S_n`.
pub fn outside_samples(n: usize) -> Vec<Permutation> {
    let mut first = vec![0; n];
    first[0] = n as i32;
    let mut last = vec![0; n];
    last[n - 1] = 1;
    [first, last, vec![1; n]]
        .into_iter()
        .map(|c| Permutation::from_code(&Weight(c)).expect("nonnegative code"))
        .collect()
}

/// Tensor–duality isomorphisms for the given pairs and surjectivity of the
/// wedge pairing on `(𝒮_w, 𝒮_{s_i})`.
pub fn verify_tensor_dual(n: usize, pairs: Option<Vec<(Permutation, Permutation)>>) -> Result<Report> {
    let t = FullTilting::new(n);
    let all = Permutation::all(n);
    let pairs = pairs.unwrap_or_else(|| {
        all.iter()
            .flat_map(|w| all.iter().map(move |v| (w.clone(), v.clone())))
            .collect()
    });
    let iso_bad: Vec<String> = pairs
        .par_iter()
        .map(|(w, v)| {
            let m = kp_module(w, n)?.module;
            let nm = kp_module(v, n)?.module;
            let td = tensor_duality(&t, &m, &nm)?;
            Ok((!td.is_isomorphism()).then(|| format!("({}, {})", w.notation(n), v.notation(n))))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let simple_pairs: Vec<(Permutation, Permutation)> = all
        .iter()
        .flat_map(|w| (1..n).map(move |i| (w.clone(), Permutation::simple(i))))
        .collect();
    let surj_bad: Vec<String> = simple_pairs
        .par_iter()
        .map(|(w, s)| {
            let cp = cauchy_pairing_map(&t, &kp_module(w, n)?.module, &kp_module(s, n)?.module)?;
            Ok((!cp.is_surjective()).then(|| format!("({}, {})", w.notation(n), s.notation(n))))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(Report {
        suite: "tensor-dual".into(),
        n,
        checks: vec![
            CheckResult::new(
                format!("F((S_w⊗S_v)^Λ) ≅ (FS_w⊗FS_v)^Λ on {} pairs", pairs.len()),
                iso_bad.is_empty(),
                failures(iso_bad),
            ),
            CheckResult::new(
                format!("wedge pairing surjective on {} pairs (S_w, S_si)", simple_pairs.len()),
                surj_bad.is_empty(),
                failures(surj_bad),
            ),
        ],
    })
}

/// `dim Ext^i(𝒮_w, 𝒮_v)` for all `w, v ∈ S_n`, `i <= top`.
pub type ExtTable = BTreeMap<(Permutation, Permutation), Vec<usize>>;

pub fn ext_table(n: usize, top: usize) -> Result<ExtTable> {
    let all = Permutation::all(n);
    let modules: Vec<WeightModule> = all
        .iter()
        .map(|w| kp_module(w, n).map(|k| k.module))
        .collect::<Result<_>>()?;
    let idx: Vec<(usize, usize)> = (0..all.len())
        .flat_map(|a| (0..all.len()).map(move |b| (a, b)))
        .collect();
    let rows: Vec<((Permutation, Permutation), Vec<usize>)> = idx
        .par_iter()
        .map(|&(a, b)| {
            (
                (all[a].clone(), all[b].clone()),
                ext_dims(&modules[a], &modules[b], top),
            )
        })
        .collect();
    Ok(rows.into_iter().collect())
}

/// The symmetry `Ext^i(𝒮_w, 𝒮_v) = Ext^i(𝒮_{w₀vw₀}, 𝒮_{w₀ww₀})`, `Ext^0 =
/// Hom`, and agreement with the resolution over `E` up to `oracle_top`.
pub fn verify_ext_symmetry(n: usize, top: usize, oracle_top: Option<usize>) -> Result<Report> {
    let table = ext_table(n, top)?;
    let mut asym = Vec::new();
    for ((w, v), dims) in &table {
        let key = (v.conjugate_w0(n)?, w.conjugate_w0(n)?);
        if table[&key] != *dims {
            asym.push(format!("({}, {})", w.notation(n), v.notation(n)));
        }
    }
    let hom_bad: Vec<String> = table
        .par_iter()
        .filter(|((w, v), dims)| {
            let a = kp_module(w, n).unwrap().module;
            let b = kp_module(v, n).unwrap().module;
            a.hom_space(&b).len() != dims[0]
        })
        .map(|((w, v), _)| format!("({}, {})", w.notation(n), v.notation(n)))
        .collect();
    let nonzero: usize = table
        .values()
        .map(|d| d.iter().skip(1).filter(|&&x| x > 0).count())
        .sum();
    let mut checks = vec![
        CheckResult::new(
            format!("Ext symmetry on {} pairs, degrees 0..={top}", table.len()),
            asym.is_empty(),
            if asym.is_empty() {
                format!("ok ({nonzero} nonzero higher entries)")
            } else {
                failures(asym)
            },
        ),
        CheckResult::new("Ext^0 = Hom", hom_bad.is_empty(), failures(hom_bad)),
    ];
    if let Some(otop) = oracle_top {
        let t = FullTilting::new(n);
        let e = EndAlgebra::new(&t);
        e.table();
        let lift = lift_basis(&e)?;
        let bad: Vec<String> = table
            .par_iter()
            .map(|((w, v), dims)| {
                let a = kp_module(w, n)?.module;
                let b = kp_module(v, n)?.module;
                let oracle = ext_oracle_via_e(&a, &b, otop, &e, &lift)?;
                Ok((oracle[..] != dims[..=otop.min(top)])
                    .then(|| format!("({}, {}): {:?} vs {:?}", w.notation(n), v.notation(n), oracle, dims)))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        checks.push(CheckResult::new(
            format!("resolution over End(T) agrees, degrees 0..={otop}"),
            bad.is_empty(),
            failures(bad),
        ));
    }
    Ok(Report {
        suite: "ext-symmetry".into(),
        n,
        checks,
    })
}
