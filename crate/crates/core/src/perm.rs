//! Permutations of `S_n` and `S_inf^(n)`, Lehmer codes, and the three orders
//! `<`, `<'` and `≺` on weight vectors.
//!
//! A [`Permutation`] is stored through its one-line window `w(1), ..., w(m)`
//! with `m` minimal, i.e. trailing fixed points are dropped. Every binary
//! operation pads both operands to a common window first.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation {
    window: Vec<u32>,
}

impl Permutation {
    pub fn identity() -> Self {
        Self { window: Vec::new() }
    }

    /// Builds a permutation from its one-line notation `w(1) ... w(m)`.
    pub fn from_window(values: Vec<u32>) -> Result<Self> {
        let m = values.len();
        let mut seen = vec![false; m];
        for &v in &values {
            if v == 0 || v as usize > m || seen[v as usize - 1] {
                return Err(Error::InvalidPermutation(format!("{values:?}")));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Self::trimmed(values))
    }

    fn trimmed(mut window: Vec<u32>) -> Self {
        while let Some(&last) = window.last() {
            if last as usize == window.len() {
                window.pop();
            } else {
                break;
            }
        }
        Self { window }
    }

    pub fn window(&self) -> &[u32] {
        &self.window
    }

    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    /// `w(i)` for a 1-based position `i`.
    pub fn apply(&self, i: usize) -> u32 {
        assert!(i >= 1, "positions are 1-based");
        if i <= self.window.len() {
            self.window[i - 1]
        } else {
            i as u32
        }
    }

    /// The one-line notation padded to at least `m` entries.
    pub fn padded(&self, m: usize) -> Vec<u32> {
        let len = m.max(self.window.len());
        (1..=len).map(|i| self.apply(i)).collect()
    }

    pub fn simple(i: usize) -> Self {
        Self::transposition(i, i + 1)
    }

    /// The transposition `t_ij` (1-based, `i != j`).
    pub fn transposition(i: usize, j: usize) -> Self {
        assert!(i >= 1 && j >= 1 && i != j);
        let m = i.max(j);
        let mut w: Vec<u32> = (1..=m as u32).collect();
        w.swap(i - 1, j - 1);
        Self::trimmed(w)
    }

    /// The longest element `w0` of `S_n`.
    pub fn longest(n: usize) -> Self {
        Self::trimmed((1..=n as u32).rev().collect())
    }

    pub fn length(&self) -> usize {
        let w = &self.window;
        let mut count = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.window.len()];
        for (i, &v) in self.window.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Self { window: inv }
    }

    /// The composition `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        let m = self.window.len().max(other.window.len());
        let w = (1..=m).map(|i| self.apply(other.apply(i) as usize)).collect();
        Self::trimmed(w)
    }

    /// `true` when `w(i) = i` for all `i > n`.
    pub fn in_s_n(&self, n: usize) -> bool {
        self.window.len() <= n
    }

    /// `true` when `w(n+1) < w(n+2) < ...`.
    pub fn in_s_inf(&self, n: usize) -> bool {
        let m = self.window.len();
        (n + 1..m).all(|i| self.apply(i) < self.apply(i + 1))
    }

    /// The full Lehmer code over the window.
    pub fn full_code(&self) -> Vec<i32> {
        let w = &self.window;
        (0..w.len())
            .map(|i| w[i + 1..].iter().filter(|&&v| v < w[i]).count() as i32)
            .collect()
    }

    /// The first `n` entries of the Lehmer code. Requires `w ∈ S_inf^(n)`.
    pub fn code(&self, n: usize) -> Result<Weight> {
        if !self.in_s_inf(n) {
            return Err(Error::NotInSInfinity(self.to_string(), n));
        }
        let full = self.full_code();
        Ok(Weight((0..n).map(|i| full.get(i).copied().unwrap_or(0)).collect()))
    }

    /// The unique `w ∈ S_inf^(n)` whose code is `code` (`n = code.len()`).
    pub fn from_code(code: &Weight) -> Result<Self> {
        if code.0.iter().any(|&c| c < 0) {
            return Err(Error::NegativeCode(code.clone()));
        }
        let n = code.0.len();
        let m = code
            .0
            .iter()
            .enumerate()
            .map(|(i, &c)| i + 1 + c as usize)
            .max()
            .unwrap_or(0)
            .max(n);
        let mut available: Vec<u32> = (1..=m as u32).collect();
        let mut window = Vec::with_capacity(m);
        for i in 0..m {
            let c = code.0.get(i).copied().unwrap_or(0) as usize;
            window.push(available.remove(c));
        }
        Ok(Self::trimmed(window))
    }

    /// Conjugation by the longest element of `S_n`: `w0 w w0`.
    pub fn conjugate_w0(&self, n: usize) -> Result<Self> {
        if !self.in_s_n(n) {
            return Err(Error::InvalidPermutation(format!("{self} is not in S_{n}")));
        }
        let w0 = Self::longest(n);
        Ok(w0.compose(self).compose(&w0))
    }

    /// `1 × w`: shifts `w` one step to the right and fixes `1`.
    pub fn one_times(&self) -> Self {
        let mut w = vec![1u32];
        w.extend(self.window.iter().map(|v| v + 1));
        Self::trimmed(w)
    }

    /// One-line notation padded to `n` entries: `2143` when every value is a
    /// single digit, `[2,1,4,3]` otherwise.
    pub fn notation(&self, n: usize) -> String {
        let w = self.padded(n.max(1));
        if w.iter().all(|&v| v <= 9) {
            w.iter().map(|v| v.to_string()).collect()
        } else {
            let inner: Vec<String> = w.iter().map(|v| v.to_string()).collect();
            format!("[{}]", inner.join(","))
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let values: Vec<u32> = if let Some(inner) = s.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or_else(|| Error::InvalidPermutation(s.to_string()))?;
            inner
                .split(',')
                .map(|t| t.trim().parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidPermutation(s.to_string()))?
        } else {
            s.chars()
                .map(|c| c.to_digit(10))
                .collect::<Option<Vec<u32>>>()
                .ok_or_else(|| Error::InvalidPermutation(s.to_string()))?
        };
        if values.is_empty() {
            return Err(Error::InvalidPermutation(s.to_string()));
        }
        Self::from_window(values)
    }

    /// All permutations of `S_n` in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current: Vec<u32> = (1..=n as u32).collect();
        loop {
            out.push(Self::trimmed(current.clone()));
            // next lexicographic permutation
            let Some(i) = (1..current.len()).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..current.len()).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.notation(self.window.len()))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

/// An integer vector in `Z^n`, used both for weights and for Lehmer codes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i32>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn rho(n: usize) -> Self {
        Self((0..n).map(|i| (n - 1 - i) as i32).collect())
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i - 1] = 1;
        Self(v)
    }

    /// `α_pq = ε_p − ε_q` for `1 <= p < q <= n`.
    pub fn alpha(n: usize, p: usize, q: usize) -> Self {
        let mut v = vec![0; n];
        v[p - 1] += 1;
        v[q - 1] -= 1;
        Self(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&a| a as i64).sum()
    }

    /// `Σ (n − i) a_i`; every `e_pq` raises it by `q − p > 0`.
    pub fn height(&self) -> i64 {
        let n = self.0.len();
        self.0
            .iter()
            .enumerate()
            .map(|(i, &a)| (n - 1 - i) as i64 * a as i64)
            .sum()
    }

    pub fn shifted(&self, k: i32) -> Self {
        Self(self.0.iter().map(|a| a + k).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    /// Membership in `Λ_n = {0 <= a_i <= n − i}`.
    pub fn in_lambda(&self) -> bool {
        let n = self.0.len();
        self.0
            .iter()
            .enumerate()
            .all(|(i, &a)| a >= 0 && a as usize <= n - 1 - i)
    }

    pub fn bar(&self) -> Result<Self> {
        let n = self.0.len();
        if !self.in_lambda() {
            return Err(Error::NotInLambda(self.clone(), n));
        }
        Permutation::from_code(self)?.conjugate_w0(n)?.code(n)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        s.split(',')
            .map(|t| t.trim().parse::<i32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Self)
            .map_err(|_| Error::Parse(format!("bad weight `{s}`")))
    }
}

impl std::ops::Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.0.len(), rhs.0.len());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl std::ops::Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.0.len(), rhs.0.len());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl std::ops::Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Which of the three orders to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderKind {
    /// `λ < μ`: `w^{-1}` is lexicographically larger than `v^{-1}`.
    Lex,
    /// `λ <' μ`: `w^{-1}` is larger in reverse-lexicographic order.
    RevLex,
    /// `λ ≺ μ`: both of the above.
    Both,
}

/// Inverse permutation of the code `λ + k·1`, padded to a common length.
fn shifted_inverses(lambda: &Weight, mu: &Weight) -> (Vec<u32>, Vec<u32>) {
    let min = lambda.0.iter().chain(&mu.0).copied().min().unwrap_or(0);
    let k = (-min).max(0);
    let w = Permutation::from_code(&lambda.shifted(k)).expect("nonnegative after shift");
    let v = Permutation::from_code(&mu.shifted(k)).expect("nonnegative after shift");
    let m = w.window_len().max(v.window_len());
    (w.inverse().padded(m), v.inverse().padded(m))
}

fn lex_greater(x: &[u32], y: &[u32]) -> bool {
    x.cmp(y) == Ordering::Greater
}

fn revlex_greater(x: &[u32], y: &[u32]) -> bool {
    for (a, b) in x.iter().zip(y).rev() {
        if a != b {
            return a > b;
        }
    }
    false
}

/// Strict comparison `λ (kind) μ`.
///
/// Returns `None` when the weights have different coordinate sums (they are
/// incomparable in all three orders), otherwise whether the strict relation
/// holds.
pub fn compare(kind: OrderKind, lambda: &Weight, mu: &Weight) -> Option<bool> {
    assert_eq!(lambda.n(), mu.n(), "weights of different rank");
    if lambda.degree() != mu.degree() {
        return None;
    }
    let (w, v) = shifted_inverses(lambda, mu);
    Some(match kind {
        OrderKind::Lex => lex_greater(&w, &v),
        OrderKind::RevLex => revlex_greater(&w, &v),
        OrderKind::Both => lex_greater(&w, &v) && revlex_greater(&w, &v),
    })
}

/// `λ ≺ μ`.
pub fn precedes(lambda: &Weight, mu: &Weight) -> bool {
    compare(OrderKind::Both, lambda, mu) == Some(true)
}

/// `λ ⪯ μ`.
pub fn precedes_eq(lambda: &Weight, mu: &Weight) -> bool {
    lambda == mu || precedes(lambda, mu)
}

/// Precomputed inverse permutations for repeated `≺` tests on a fixed set of
/// nonnegative weights of equal degree.
#[derive(Clone, Debug)]
pub struct OrderKey {
    inverse: Vec<u32>,
    degree: i64,
}

impl OrderKey {
    /// Requires a nonnegative weight.
    pub fn new(lambda: &Weight) -> Self {
        let w = Permutation::from_code(lambda).expect("OrderKey needs a nonnegative weight");
        Self {
            inverse: w.inverse().window,
            degree: lambda.degree(),
        }
    }

    fn padded_pair<'a>(&'a self, other: &'a Self) -> (Vec<u32>, Vec<u32>) {
        let m = self.inverse.len().max(other.inverse.len());
        let pad = |v: &[u32]| -> Vec<u32> {
            (1..=m)
                .map(|i| if i <= v.len() { v[i - 1] } else { i as u32 })
                .collect()
        };
        (pad(&self.inverse), pad(&other.inverse))
    }

    /// `self ≺ other`.
    pub fn precedes(&self, other: &Self) -> bool {
        if self.degree != other.degree {
            return false;
        }
        let (x, y) = self.padded_pair(other);
        lex_greater(&x, &y) && revlex_greater(&x, &y)
    }
}

/// The box `Λ_n` in lexicographic order.
pub fn lambda_n(n: usize) -> Vec<Weight> {
    let mut out = vec![Vec::new()];
    for i in 0..n {
        let bound = (n - 1 - i) as i32;
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i32>| {
                (0..=bound).map(move |a| {
                    let mut v = prefix.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(Weight).collect()
}

/// All nonnegative vectors of length `n` with coordinate sum `d`, in
/// lexicographic order.
pub fn compositions(n: usize, d: usize) -> Vec<Weight> {
    fn rec(n: usize, d: usize, prefix: &mut Vec<i32>, out: &mut Vec<Weight>) {
        if prefix.len() + 1 == n {
            prefix.push(d as i32);
            out.push(Weight(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in 0..=d {
            prefix.push(a as i32);
            rec(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Weight(Vec::new()));
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// `J(w) = {(i, n+1−j) : i < j, w(i) > w(j)}` for `w ∈ S_n`.
pub fn inversion_cells(w: &Permutation, n: usize) -> Vec<(usize, usize)> {
    let mut cells = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if w.apply(i) > w.apply(j) {
                cells.push((i, n + 1 - j));
            }
        }
    }
    cells.sort();
    cells
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    fn code_by_definition(w: &Permutation, n: usize) -> Vec<i32> {
        let m = w.window_len().max(n);
        (1..=n)
            .map(|i| (i + 1..=m).filter(|&j| w.apply(i) > w.apply(j)).count() as i32)
            .collect()
    }

    #[test]
    fn codes_of_small_permutations() {
        assert_eq!(Permutation::identity().code(3).unwrap(), Weight(vec![0, 0, 0]));
        assert_eq!(p("321").code(3).unwrap(), Weight(vec![2, 1, 0]));
        assert_eq!(p("2143").code(4).unwrap(), Weight(vec![1, 0, 1, 0]));
        for w in Permutation::all(4) {
            assert_eq!(w.code(4).unwrap().0, code_by_definition(&w, 4));
        }
    }

    #[test]
    fn from_code_examples() {
        assert_eq!(
            Permutation::from_code(&Weight(vec![0, 0, 0])).unwrap(),
            Permutation::identity()
        );
        assert_eq!(Permutation::from_code(&Weight(vec![2, 1, 0])).unwrap(), p("321"));
        let w = Permutation::from_code(&Weight(vec![3, 0, 0])).unwrap();
        assert_eq!(w.apply(1), 4);
        assert!(w.in_s_inf(3) && !w.in_s_n(3));
        assert!(Permutation::from_code(&Weight(vec![0, -1])).is_err());
    }

    #[test]
    fn lengths_and_conjugation() {
        assert_eq!(Permutation::identity().length(), 0);
        for n in 1..6 {
            assert_eq!(Permutation::longest(n).length(), n * (n - 1) / 2);
        }
        assert_eq!(p("312").conjugate_w0(3).unwrap(), p("231"));
        assert_eq!(p("21").one_times(), p("132"));
    }

    #[test]
    fn permutation_parsing_and_notation() {
        assert_eq!(p("2143").notation(4), "2143");
        assert_eq!(p("[2,1,4,3]"), p("2143"));
        let big = Permutation::from_window((1..=10).rev().collect()).unwrap();
        assert_eq!(big.notation(10), "[10,9,8,7,6,5,4,3,2,1]");
        assert_eq!(Permutation::identity().notation(3), "123");
        assert!(Permutation::parse("1224").is_err());
        assert!(Permutation::parse("").is_err());
    }

    #[test]
    fn weight_order_examples() {
        let a = Weight(vec![1, 0, 0]);
        let b = Weight(vec![0, 1, 0]);
        assert_eq!(compare(OrderKind::Both, &a, &b), Some(true));
        for kind in [OrderKind::Lex, OrderKind::RevLex, OrderKind::Both] {
            assert_eq!(compare(kind, &a, &a), Some(false));
        }
        assert_eq!(compare(OrderKind::Both, &Weight(vec![2, 1, 0]), &a), None);
    }

    #[test]
    fn order_is_shift_invariant() {
        let ws = compositions(3, 2);
        for l in &ws {
            for m in &ws {
                for kind in [OrderKind::Lex, OrderKind::RevLex, OrderKind::Both] {
                    let base = compare(kind, l, m);
                    assert_eq!(compare(kind, &l.shifted(-3), &m.shifted(-3)), base);
                    assert_eq!(compare(kind, &l.shifted(2), &m.shifted(2)), base);
                }
            }
        }
    }

    #[test]
    fn lambda_box_and_bar() {
        assert_eq!(lambda_n(3).len(), 6);
        assert_eq!(lambda_n(4).len(), 24);
        let rho = Weight::rho(3);
        assert_eq!(rho.bar().unwrap(), rho);
        let c312 = p("312").code(3).unwrap();
        let c231 = p("231").code(3).unwrap();
        assert_eq!(c312.bar().unwrap(), c231);
        assert!(Weight(vec![3, 0, 0]).bar().is_err());
        for l in lambda_n(4) {
            assert_eq!(l.bar().unwrap().bar().unwrap(), l);
        }
    }

    #[test]
    fn bar_reverses_orders_on_lambda_3() {
        // λ <= μ iff bar(λ) >=' bar(μ)
        let box3 = lambda_n(3);
        for l in &box3 {
            for m in &box3 {
                let le = l == m || compare(OrderKind::Lex, l, m) == Some(true);
                let (lb, mb) = (l.bar().unwrap(), m.bar().unwrap());
                let ge_prime = lb == mb || compare(OrderKind::RevLex, &mb, &lb) == Some(true);
                assert_eq!(le, ge_prime, "{l} {m}");
            }
        }
    }

    #[test]
    fn lex_order_is_total_within_degree() {
        for d in 0..5 {
            let ws = compositions(3, d);
            for l in &ws {
                for m in &ws {
                    let a = compare(OrderKind::Lex, l, m).unwrap();
                    let b = compare(OrderKind::Lex, m, l).unwrap();
                    assert_eq!([a, b, l == m].iter().filter(|&&x| x).count(), 1);
                }
            }
        }
    }

    #[test]
    fn rho_minus_reverses_lex_into_revlex_on_lambda_4() {
        let rho = Weight::rho(4);
        let box4 = lambda_n(4);
        for l in &box4 {
            for m in &box4 {
                assert_eq!(
                    compare(OrderKind::Lex, l, m),
                    compare(OrderKind::RevLex, &(&rho - l), &(&rho - m)),
                    "{l} {m}"
                );
            }
        }
    }

    #[test]
    fn lambda_3_is_an_order_ideal() {
        for l in lambda_n(3) {
            let d = l.degree() as usize;
            for mu in compositions(3, d) {
                if !mu.in_lambda() {
                    assert!(!precedes(&mu, &l), "{mu} ≺ {l}");
                }
            }
        }
    }

    #[test]
    fn order_key_matches_compare() {
        let ws = compositions(4, 3);
        let keys: Vec<_> = ws.iter().map(OrderKey::new).collect();
        for (a, ka) in ws.iter().zip(&keys) {
            for (b, kb) in ws.iter().zip(&keys) {
                assert_eq!(ka.precedes(kb), precedes(a, b));
            }
        }
    }

    #[test]
    fn inversion_cells_extremes() {
        assert!(inversion_cells(&Permutation::identity(), 3).is_empty());
        assert_eq!(
            inversion_cells(&Permutation::longest(3), 3),
            vec![(1, 1), (1, 2), (2, 1)]
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn code_round_trip(code in proptest::collection::vec(0i32..6, 1..6)) {
                let w = Permutation::from_code(&Weight(code.clone())).unwrap();
                prop_assert!(w.in_s_inf(code.len()));
                prop_assert_eq!(w.code(code.len()).unwrap().0, code.clone());
                prop_assert_eq!(w.length() as i32, code.iter().sum::<i32>());
            }

            #[test]
            fn inverse_composes_to_identity(code in proptest::collection::vec(0i32..4, 1..5)) {
                let w = Permutation::from_code(&Weight(code)).unwrap();
                prop_assert_eq!(w.compose(&w.inverse()), Permutation::identity());
            }
        }
    }
}
