//! Exact sparse linear algebra over the rationals.
//!
//! Vectors are sorted `(index, value)` lists with no stored zeros; matrices
//! are column-major lists of such vectors. Row reduction goes through
//! [`Echelon`], which keeps a fully reduced basis whose pivots are chosen by
//! smallest bit-length to keep coefficient growth in check.

use std::collections::HashMap;

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

fn bit_size(x: &Q) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// `"n"` for integers, `"num/den"` otherwise.
pub fn q_to_string(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_parse(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(Q::new(a, b))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Q)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self { entries: Vec::new() }
    }

    pub fn unit(i: usize) -> Self {
        Self {
            entries: vec![(i, Q::one())],
        }
    }

    /// Builds from unsorted pairs, summing duplicates and dropping zeros.
    pub fn from_pairs(mut pairs: Vec<(usize, Q)>) -> Self {
        pairs.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, Q)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match entries.last_mut() {
                Some((j, w)) if *j == i => *w += v,
                _ => entries.push((i, v)),
            }
        }
        entries.retain(|(_, v)| !v.is_zero());
        Self { entries }
    }

    pub fn from_dense(values: &[Q]) -> Self {
        Self {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Q)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Q)> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> Option<&Q> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn scale(&mut self, c: &Q) {
        if c.is_zero() {
            self.entries.clear();
            return;
        }
        for (_, v) in &mut self.entries {
            *v *= c;
        }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        let mut out = self.clone();
        out.scale(c);
        out
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &SparseVec, c: &Q) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut merged = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut a = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut b = other.entries.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, _)), Some((j, _))) => {
                    if i < j {
                        merged.push(a.next().unwrap());
                    } else if j < i {
                        let (j, w) = b.next().unwrap();
                        merged.push((*j, w * c));
                    } else {
                        let (i, v) = a.next().unwrap();
                        let (_, w) = b.next().unwrap();
                        let s = v + w * c;
                        if !s.is_zero() {
                            merged.push((i, s));
                        }
                    }
                }
                (Some(_), None) => merged.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (j, w) = b.next().unwrap();
                    merged.push((*j, w * c));
                }
                (None, None) => break,
            }
        }
        self.entries = merged;
    }

    pub fn dot(&self, other: &SparseVec) -> Q {
        let mut acc = Q::zero();
        let (mut x, mut y) = (0, 0);
        while x < self.entries.len() && y < other.entries.len() {
            let (i, a) = &self.entries[x];
            let (j, b) = &other.entries[y];
            match i.cmp(j) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    acc += a * b;
                    x += 1;
                    y += 1;
                }
            }
        }
        acc
    }

    /// Reindexes entries through `map`; entries mapped to `None` are dropped.
    pub fn remap(&self, map: impl Fn(usize) -> Option<usize>) -> Self {
        Self::from_pairs(
            self.entries
                .iter()
                .filter_map(|(i, v)| map(*i).map(|j| (j, v.clone())))
                .collect(),
        )
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }
}

impl std::ops::Add<&SparseVec> for &SparseVec {
    type Output = SparseVec;
    fn add(self, rhs: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(rhs, &Q::one());
        out
    }
}

impl std::ops::Sub<&SparseVec> for &SparseVec {
    type Output = SparseVec;
    fn sub(self, rhs: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

/// A column-major sparse matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: (0..n).map(SparseVec::unit).collect(),
        }
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.max_index().is_none_or(|i| i < rows)));
        Self { rows, cols }
    }

    pub fn from_triplets(rows: usize, cols: usize, triplets: Vec<(usize, usize, Q)>) -> Self {
        let mut buckets: Vec<Vec<(usize, Q)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) out of range");
            buckets[c].push((r, v));
        }
        Self {
            rows,
            cols: buckets.into_iter().map(SparseVec::from_pairs).collect(),
        }
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut triplets = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    triplets.push((r, c, v.clone()));
                }
            }
        }
        Self::from_triplets(nrows, ncols, triplets)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.cols[c].get(r).cloned().unwrap_or_else(Q::zero)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    /// Nonzero entries in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, Q)> {
        let mut out: Vec<(usize, usize, Q)> = self
            .cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.entries().iter().map(move |(r, v)| (*r, c, v.clone())))
            .collect();
        out.sort_by_key(|(r, c, _)| (*r, *c));
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::zero(); self.ncols()]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v;
        }
        out
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in v.entries() {
            out.add_scaled(&self.cols[*j], c);
        }
        out
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), rhs.rows, "dimension mismatch in product");
        SparseMatrix {
            rows: self.rows,
            cols: rhs.cols.iter().map(|c| self.mul_vec(c)).collect(),
        }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut buckets: Vec<Vec<(usize, Q)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col.entries() {
                buckets[*r].push((c, v.clone()));
            }
        }
        SparseMatrix {
            rows: self.ncols(),
            cols: buckets.into_iter().map(SparseVec::from_pairs).collect(),
        }
    }

    pub fn add(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.lin_comb(rhs, &Q::one())
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> SparseMatrix {
        self.lin_comb(rhs, &-Q::one())
    }

    fn lin_comb(&self, rhs: &SparseMatrix, c: &Q) -> SparseMatrix {
        assert_eq!((self.rows, self.ncols()), (rhs.rows, rhs.ncols()));
        SparseMatrix {
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .zip(&rhs.cols)
                .map(|(a, b)| {
                    let mut a = a.clone();
                    a.add_scaled(b, c);
                    a
                })
                .collect(),
        }
    }

    pub fn scaled(&self, c: &Q) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols.iter().map(|col| col.scaled(c)).collect(),
        }
    }

    /// Restriction to the given rows and columns, renumbered in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let row_pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        SparseMatrix {
            rows: rows.len(),
            cols: cols
                .iter()
                .map(|&c| self.cols[c].remap(|r| row_pos.get(&r).copied()))
                .collect(),
        }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, rhs: &SparseMatrix) -> SparseMatrix {
        let shift = self.rows;
        let mut cols = self.cols.clone();
        cols.extend(rhs.cols.iter().map(|c| c.remap(|r| Some(r + shift))));
        SparseMatrix {
            rows: self.rows + rhs.rows,
            cols,
        }
    }

    /// Kronecker product `self ⊗ rhs` with index `(i, j) ↦ i * rhs.dim + j`.
    pub fn kron(&self, rhs: &SparseMatrix) -> SparseMatrix {
        let (r2, c2) = (rhs.rows, rhs.ncols());
        let mut cols = Vec::with_capacity(self.ncols() * c2);
        for a in &self.cols {
            for b in &rhs.cols {
                let mut pairs = Vec::with_capacity(a.nnz() * b.nnz());
                for (i, x) in a.entries() {
                    for (j, y) in b.entries() {
                        pairs.push((i * r2 + j, x * y));
                    }
                }
                cols.push(SparseVec::from_pairs(pairs));
            }
        }
        SparseMatrix {
            rows: self.rows * r2,
            cols,
        }
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.rows);
        for c in &self.cols {
            ech.insert(c.clone());
        }
        ech.rank()
    }

    /// A basis of `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<SparseVec> {
        kernel_of_rows(&self.transpose().cols, self.ncols())
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.ncols() && self.rank() == self.rows
    }

    /// Solves `self * x = b`, returning any solution.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let mut ech = TrackedEchelon::new(self.rows);
        for c in &self.cols {
            ech.insert(c.clone());
        }
        ech.express(b)
    }

    /// Inverse of a square invertible matrix.
    pub fn inverse(&self) -> Option<SparseMatrix> {
        if self.rows != self.ncols() {
            return None;
        }
        let mut ech = TrackedEchelon::new(self.rows);
        for c in &self.cols {
            ech.insert(c.clone());
        }
        if ech.rank() != self.rows {
            return None;
        }
        let cols = (0..self.rows)
            .map(|i| ech.express(&SparseVec::unit(i)).expect("full rank"))
            .collect();
        Some(SparseMatrix { rows: self.rows, cols })
    }

    /// `self^k`; requires a square matrix.
    pub fn pow(&self, k: usize) -> SparseMatrix {
        let mut out = SparseMatrix::identity(self.rows);
        for _ in 0..k {
            out = self.mul(&out);
        }
        out
    }
}

/// Basis of the solution space of the homogeneous system whose equations are
/// the given sparse rows over `nvars` unknowns.
pub fn kernel_of_rows(rows: &[SparseVec], nvars: usize) -> Vec<SparseVec> {
    let mut ech = Echelon::new(nvars);
    for r in rows {
        ech.insert(r.clone());
    }
    ech.nullspace()
}

/// Fully reduced row-echelon basis of a subspace of `K^dim`.
///
/// Every stored vector has its pivot entry equal to one and vanishes at the
/// pivots of all other stored vectors, so the coordinates of a vector of the
/// span are its entries at the pivot positions.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
    pivot_of: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_of: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.pivot_of.contains_key(&i)
    }

    /// Non-pivot positions in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.dim).filter(|i| !self.is_pivot(*i)).collect()
    }

    /// Residual of `v` modulo the span; vanishes at every pivot.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        for (i, c) in v.entries() {
            if let Some(&k) = self.pivot_of.get(i) {
                out.add_scaled(&self.rows[k], &-c.clone());
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of `v` with respect to [`Self::basis`]; `None` if `v` is
    /// outside the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        if !self.contains(v) {
            return None;
        }
        Some(SparseVec::from_pairs(
            v.entries()
                .iter()
                .filter_map(|(i, c)| self.pivot_of.get(i).map(|&k| (k, c.clone())))
                .collect(),
        ))
    }

    fn choose_pivot(v: &SparseVec) -> usize {
        v.entries()
            .iter()
            .min_by_key(|(i, c)| (bit_size(c), *i))
            .map(|(i, _)| *i)
            .expect("nonzero vector")
    }

    /// Adds `v` to the span; returns the new pivot if `v` was independent.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        let mut r = self.reduce(&v);
        if r.is_zero() {
            return None;
        }
        let p = Self::choose_pivot(&r);
        let inv = r.get(p).unwrap().recip();
        r.scale(&inv);
        for row in &mut self.rows {
            if let Some(c) = row.get(p).cloned() {
                row.add_scaled(&r, &-c);
            }
        }
        self.pivot_of.insert(p, self.rows.len());
        self.pivots.push(p);
        self.rows.push(r);
        Some(p)
    }

    /// Basis of the orthogonal complement under the standard pairing, i.e. of
    /// the solutions of the system whose equations are the stored rows.
    pub fn nullspace(&self) -> Vec<SparseVec> {
        let free = self.free_columns();
        let mut pairs: HashMap<usize, Vec<(usize, Q)>> = free.iter().map(|&f| (f, vec![(f, Q::one())])).collect();
        for (k, row) in self.rows.iter().enumerate() {
            let p = self.pivots[k];
            for (j, c) in row.entries() {
                if *j != p {
                    pairs.get_mut(j).expect("non-pivot entry").push((p, -c.clone()));
                }
            }
        }
        free.iter()
            .map(|f| SparseVec::from_pairs(pairs.remove(f).unwrap()))
            .collect()
    }
}

/// Echelon form that remembers how each basis vector arises from the
/// inserted vectors, so membership tests also return a preimage.
#[derive(Clone, Debug)]
pub struct TrackedEchelon {
    ech: Echelon,
    coords: Vec<SparseVec>,
    inserted: usize,
}

impl TrackedEchelon {
    pub fn new(dim: usize) -> Self {
        Self {
            ech: Echelon::new(dim),
            coords: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Inserts `v` as generator number `self.inserted()`.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let mut r = v;
        let mut c = SparseVec::unit(id);
        let entries: Vec<(usize, Q)> = r.entries().to_vec();
        for (i, val) in &entries {
            if let Some(&k) = self.ech.pivot_of.get(i) {
                r.add_scaled(&self.ech.rows[k], &-val.clone());
                c.add_scaled(&self.coords[k], &-val.clone());
            }
        }
        if r.is_zero() {
            return false;
        }
        let p = Echelon::choose_pivot(&r);
        let inv = r.get(p).unwrap().recip();
        r.scale(&inv);
        c.scale(&inv);
        for k in 0..self.ech.rows.len() {
            if let Some(val) = self.ech.rows[k].get(p).cloned() {
                self.ech.rows[k].add_scaled(&r, &-val.clone());
                let ck = self.coords[k].clone();
                let mut ck2 = ck;
                ck2.add_scaled(&c, &-val);
                self.coords[k] = ck2;
            }
        }
        self.ech.pivot_of.insert(p, self.ech.rows.len());
        self.ech.pivots.push(p);
        self.ech.rows.push(r);
        self.coords.push(c);
        true
    }

    /// Coefficients `a` over the inserted generators with `Σ a_i g_i = v`.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        if !self.ech.contains(v) {
            return None;
        }
        let mut out = SparseVec::new();
        for (i, c) in v.entries() {
            if let Some(&k) = self.ech.pivot_of.get(i) {
                out.add_scaled(&self.coords[k], c);
            }
        }
        Some(out)
    }

    pub fn echelon(&self) -> &Echelon {
        &self.ech
    }
}

/// Rank of a list of vectors.
pub fn rank_of(vectors: &[SparseVec], dim: usize) -> usize {
    let mut ech = Echelon::new(dim);
    for v in vectors {
        ech.insert(v.clone());
    }
    ech.rank()
}

pub fn is_one(x: &Q) -> bool {
    x.is_one()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(pairs: &[(usize, i64)]) -> SparseVec {
        SparseVec::from_pairs(pairs.iter().map(|&(i, c)| (i, q(c))).collect())
    }

    #[test]
    fn add_scaled_cancels() {
        let mut a = v(&[(0, 1), (2, 3)]);
        a.add_scaled(&v(&[(2, 1), (5, 2)]), &q(-3));
        assert_eq!(a, v(&[(0, 1), (5, -6)]));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(q_to_string(&q(5)), "5");
        assert_eq!(q_to_string(&q_frac(-2, 4)), "-1/2");
        assert_eq!(q_parse("-1/2"), Some(q_frac(-1, 2)));
        assert_eq!(q_parse("7"), Some(q(7)));
        assert_eq!(q_parse("1/0"), None);
    }

    #[test]
    fn kernel_of_small_matrix() {
        let m = SparseMatrix::from_dense(&[vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for x in &k {
            assert!(m.mul_vec(x).is_zero());
        }
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_and_express() {
        let m = SparseMatrix::from_dense(&[vec![q(2), q(0)], vec![q(1), q(3)]]);
        let b = v(&[(0, 4), (1, 5)]);
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        let singular = SparseMatrix::from_dense(&[vec![q(1), q(1)], vec![q(1), q(1)]]);
        assert!(singular.solve(&v(&[(0, 1)])).is_none());
    }

    #[test]
    fn echelon_coordinates_reconstruct() {
        let mut e = Echelon::new(4);
        e.insert(v(&[(0, 2), (1, 1)]));
        e.insert(v(&[(1, 3), (3, 1)]));
        let target = v(&[(0, 2), (1, 4), (3, 1)]);
        let c = e.coordinates(&target).unwrap();
        let mut rebuilt = SparseVec::new();
        for (k, x) in c.entries() {
            rebuilt.add_scaled(&e.basis()[*k], x);
        }
        assert_eq!(rebuilt, target);
        assert!(e.coordinates(&v(&[(2, 1)])).is_none());
    }

    #[test]
    fn kron_and_transpose() {
        let a = SparseMatrix::from_dense(&[vec![q(0), q(1)], vec![q(0), q(0)]]);
        let i = SparseMatrix::identity(2);
        let k = a.kron(&i);
        assert_eq!(k.nrows(), 4);
        assert_eq!(k.get(0, 2), q(1));
        assert_eq!(k.get(1, 3), q(1));
        assert_eq!(a.transpose().get(1, 0), q(1));
        assert_eq!(a.pow(2), SparseMatrix::zero(2, 2));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
            (1usize..6, 1usize..6)
                .prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r))
        }

        proptest! {
            #[test]
            fn rank_nullity(rows in matrix()) {
                let dense: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
                let m = SparseMatrix::from_dense(&dense);
                let k = m.kernel();
                prop_assert_eq!(k.len() + m.rank(), m.ncols());
                for x in &k {
                    prop_assert!(m.mul_vec(x).is_zero());
                }
                prop_assert_eq!(m.rank(), m.transpose().rank());
            }

            #[test]
            fn tracked_express_is_a_preimage(rows in matrix(), coeffs in proptest::collection::vec(-2i64..3, 6)) {
                let dense: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
                let m = SparseMatrix::from_dense(&dense);
                let x = SparseVec::from_pairs(coeffs.iter().take(m.ncols()).enumerate().map(|(i, &c)| (i, q(c))).collect());
                let b = m.mul_vec(&x);
                let y = m.solve(&b).unwrap();
                prop_assert_eq!(m.mul_vec(&y), b);
            }
        }
    }
}
