//! Sparse multivariate (Laurent) polynomials with arbitrary-precision integer
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, BigInt>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn monomial(exp: Vec<i32>, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c.into());
        p
    }

    /// The variable `x_i` (1-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i - 1] = 1;
        Self::monomial(e, 1)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i32>, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, exp: &[i32]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: Vec<i32>, c: BigInt) {
        assert_eq!(exp.len(), self.nvars, "exponent of wrong length");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &MultiPoly, c: &BigInt) {
        assert_eq!(self.nvars, other.nvars);
        for (e, a) in &other.terms {
            self.add_term(e.clone(), a * c);
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (e1, a) in &self.terms {
            for (e2, b) in &other.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(e, a * b);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut out = MultiPoly::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn scaled(&self, c: &BigInt) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        out.add_assign_scaled(self, c);
        out
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &[i32]) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Replaces `x_i` by `x_i^{-1}`.
    pub fn invert_vars(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|a| -a).collect(), c.clone()))
                .collect(),
        }
    }

    /// Changes the number of variables; dropped variables must not occur.
    pub fn resize(&self, nvars: usize) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(nvars);
        for (e, c) in &self.terms {
            if e.iter().skip(nvars).any(|&a| a != 0) {
                return Err(Error::Internal(format!("polynomial uses variables beyond x{nvars}")));
            }
            let mut e2: Vec<i32> = e.iter().take(nvars).copied().collect();
            e2.resize(nvars, 0);
            out.add_term(e2, c.clone());
        }
        Ok(out)
    }

    /// Ring map sending `x_i` to the polynomial `images[i-1]`. Exponents must
    /// be nonnegative.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(0, MultiPoly::nvars);
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (img, &a) in images.iter().zip(e) {
                assert!(a >= 0, "substitution needs nonnegative exponents");
                if a > 0 {
                    t = t.mul(&img.pow(a as u32));
                }
            }
            out.add_assign_scaled(&t, &BigInt::one());
        }
        out
    }

    /// Value at `x_1 = ... = x_n = 1`.
    pub fn specialize_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    pub fn is_nonnegative_exponent(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&a| a >= 0))
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.keys().flat_map(|e| e.iter().copied()).min()
    }

    pub fn max_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&a| a as i64).sum())
            .max()
            .unwrap_or(0)
    }

    /// `∂_i f = (f − s_i f)/(x_i − x_{i+1})`, computed monomial by monomial.
    pub fn divided_difference(&self, i: usize) -> MultiPoly {
        assert!(i >= 1 && i < self.nvars, "∂_{i} needs 1 <= i < nvars");
        let (a_idx, b_idx) = (i - 1, i);
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let (a, b) = (e[a_idx], e[b_idx]);
            if a == b {
                continue;
            }
            // (x^a y^b − x^b y^a)/(x − y) = ± x^m y^m Σ_{k<d} x^k y^{d−1−k}
            let (lo, d, sign) = if a > b {
                (b, a - b, c.clone())
            } else {
                (a, b - a, -c.clone())
            };
            for k in 0..d {
                let mut e2 = e.clone();
                e2[a_idx] = lo + k;
                e2[b_idx] = lo + d - 1 - k;
                out.add_term(e2, sign.clone());
            }
        }
        out
    }

    /// Swaps `x_i` and `x_{i+1}`.
    pub fn swap_vars(&self, i: usize) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.swap(i - 1, i);
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| json!({"exp": e, "coeff": c.to_string()}))
            .collect();
        json!({"n": self.nvars, "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<MultiPoly> {
        let bad = |m: &str| Error::Parse(format!("polynomial JSON: {m}"));
        let n = v["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let mut p = MultiPoly::zero(n);
        for t in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let exp: Vec<i32> = serde_json::from_value(t["exp"].clone()).map_err(|_| bad("exp"))?;
            if exp.len() != n {
                return Err(bad("exponent length"));
            }
            let c: BigInt = t["coeff"]
                .as_str()
                .ok_or_else(|| bad("coeff"))?
                .parse()
                .map_err(|_| bad("coeff"))?;
            p.add_term(exp, c);
        }
        Ok(p)
    }

    /// Parses expressions such as `x1^2*x2 - 3*(x1+x3)`.
    pub fn parse(s: &str, nvars: usize) -> Result<MultiPoly> {
        let tokens = tokenize(s)?;
        let mut parser = Parser { tokens, pos: 0, nvars };
        let p = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::Parse(format!("unexpected trailing input in `{s}`")));
        }
        Ok(p)
    }
}

impl std::ops::Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &BigInt::one());
        out
    }
}

impl std::ops::Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out.add_assign_scaled(rhs, &-BigInt::one());
        out
    }
}

impl std::ops::Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        MultiPoly::mul(self, rhs)
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scaled(&-BigInt::one())
    }
}

fn fmt_monomial(e: &[i32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(i, &a)| {
            if a == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, a)
            }
        })
        .collect();
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    /// Terms in decreasing lexicographic order of exponents, e.g.
    /// `x1^2*x2 + 2*x1 - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono = fmt_monomial(e);
            let mag = c.abs();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => mono,
                (false, false) => format!("{mag}*{mono}"),
            };
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1
            }
            '-' => {
                out.push(Token::Minus);
                i += 1
            }
            '*' => {
                out.push(Token::Star);
                i += 1
            }
            '^' => {
                out.push(Token::Caret);
                i += 1
            }
            '(' => {
                out.push(Token::LParen);
                i += 1
            }
            ')' => {
                out.push(Token::RParen);
                i += 1
            }
            'x' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let idx: usize = chars[start..j]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad variable at position {i}")))?;
                out.push(Token::Var(idx));
                i = j;
            }
            d if d.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let n: BigInt = chars[i..j].iter().collect::<String>().parse().unwrap();
                out.push(Token::Num(n));
                i = j;
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                -&self.term()?
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        while self.peek() == Some(&Token::Star) {
            self.pos += 1;
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let negative = if self.peek() == Some(&Token::Minus) {
                self.pos += 1;
                true
            } else {
                false
            };
            let k = match self.next() {
                Some(Token::Num(k)) => u32::try_from(k).map_err(|_| Error::Parse("exponent too large".into()))?,
                _ => return Err(Error::Parse("expected exponent".into())),
            };
            if negative {
                if base.len() != 1 || !base.terms.values().next().unwrap().is_one() {
                    return Err(Error::Parse("negative exponents need a monomial base".into()));
                }
                return Ok(base.pow(k).invert_vars());
            }
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.next() {
            Some(Token::Num(c)) => Ok(MultiPoly::constant(self.nvars, c)),
            Some(Token::Var(i)) => {
                if i == 0 || i > self.nvars {
                    return Err(Error::Parse(format!("variable x{i} out of range 1..={}", self.nvars)));
                }
                Ok(MultiPoly::var(self.nvars, i))
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                if self.next() != Some(Token::RParen) {
                    return Err(Error::Parse("missing `)`".into()));
                }
                Ok(inner)
            }
            Some(Token::Minus) => Ok(-&self.atom()?),
            t => Err(Error::Parse(format!("unexpected token {t:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str, n: usize) -> MultiPoly {
        MultiPoly::parse(s, n).unwrap()
    }

    #[test]
    fn divided_difference_examples() {
        assert_eq!(p("x1", 2).divided_difference(1), p("1", 2));
        assert_eq!(p("x1^2*x2", 3).divided_difference(1), p("x1*x2", 3));
        assert!(p("x1*x2 + x1 + x2", 3).divided_difference(1).is_zero());
        assert_eq!(p("x2^3", 3).divided_difference(1), p("-x1^2 - x1*x2 - x2^2", 3));
    }

    #[test]
    fn display_and_parse_round_trip() {
        let f = p("x1^2*x2 - 3*(x1 + x3) + 7", 3);
        assert_eq!(f.to_string(), "x1^2*x2 - 3*x1 - 3*x3 + 7");
        assert_eq!(p(&f.to_string(), 3), f);
        assert_eq!(MultiPoly::zero(2).to_string(), "0");
        assert_eq!(p("-x1", 1).to_string(), "-x1");
        let laurent = p("x1^-2*x2", 2);
        assert_eq!(laurent.to_string(), "x1^-2*x2");
        assert_eq!(p(&laurent.to_string(), 2), laurent);
    }

    #[test]
    fn parse_errors() {
        assert!(MultiPoly::parse("x4", 3).is_err());
        assert!(MultiPoly::parse("x1 +", 3).is_err());
        assert!(MultiPoly::parse("(x1", 3).is_err());
        assert!(MultiPoly::parse("x1 $ x2", 3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = p("x1^2*x2 - 12345678901234567890*x3", 3);
        assert_eq!(MultiPoly::from_json(&f.to_json()).unwrap(), f);
        assert_eq!(f.to_json()["terms"][0]["coeff"], "-12345678901234567890");
    }

    #[test]
    fn substitution_and_specialization() {
        let f = p("x1^2*x2", 2);
        let g = f.substitute(&[p("x2", 2), p("-x1", 2)]);
        assert_eq!(g, p("-x1*x2^2", 2));
        assert_eq!(p("x1 + x2", 2).specialize_ones(), BigInt::from(2));
    }

    fn poly_strategy(n: usize) -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec((proptest::collection::vec(0i32..4, n), -3i64..4), 0..6).prop_map(move |terms| {
            let mut f = MultiPoly::zero(n);
            for (e, c) in terms {
                f.add_term(e, BigInt::from(c));
            }
            f
        })
    }

    proptest! {
        #[test]
        fn divided_difference_relations(f in poly_strategy(4)) {
            for i in 1..4 {
                prop_assert!(f.divided_difference(i).divided_difference(i).is_zero());
                // definition check: (x_i − x_{i+1}) ∂_i f = f − s_i f
                let lhs = (&MultiPoly::var(4, i) - &MultiPoly::var(4, i + 1)).mul(&f.divided_difference(i));
                prop_assert_eq!(lhs, &f - &f.swap_vars(i));
            }
            prop_assert_eq!(
                f.divided_difference(1).divided_difference(3),
                f.divided_difference(3).divided_difference(1)
            );
            for i in 1..3 {
                let a = f.divided_difference(i).divided_difference(i + 1).divided_difference(i);
                let b = f.divided_difference(i + 1).divided_difference(i).divided_difference(i + 1);
                prop_assert_eq!(a, b);
            }
        }

        #[test]
        fn parse_display_round_trip(f in poly_strategy(3)) {
            prop_assert_eq!(MultiPoly::parse(&f.to_string(), 3).unwrap(), f);
        }
    }
}
