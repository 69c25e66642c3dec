//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rational::{render, Rational};
use crate::error::{check_dim, Result};

/// Dense exponent vector. Ordered graded-lexicographically: total degree
/// first, then lexicographically on the entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Exponent, Rational>,
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        MultiPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        Self::monomial(arity, vec![0; arity], c)
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(arity: usize, i: usize) -> Self {
        assert!(i < arity, "variable index {i} out of range for arity {arity}");
        let mut e = vec![0; arity];
        e[i] = 1;
        Self::monomial(arity, e, Rational::one())
    }

    pub fn monomial(arity: usize, exponents: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exponents.len(), arity);
        let mut p = Self::zero(arity);
        if !c.is_zero() {
            p.terms.insert(Exponent(exponents), c);
        }
        p
    }

    /// Builds `Σ coeffs[i]·x_i + constant`.
    pub fn linear(coeffs: &[Rational], constant: Rational) -> Self {
        let arity = coeffs.len();
        let mut p = Self::constant(arity, constant);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; arity];
                e[i] = 1;
                p.add_term(Exponent(e), c.clone());
            }
        }
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            assert_eq!(e.len(), arity);
            p.add_term(Exponent(e), c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
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

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Exponent::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e.0[var]).max().unwrap_or(0)
    }

    /// The constant term, if the polynomial has no other terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                (e.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(&Exponent(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        MultiPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(self.arity);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        check_dim(self.arity, x.len())?;
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &k) in x.iter().zip(&e.0) {
                if k > 0 {
                    term *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Evaluation at an integer point, accumulating over a common
    /// denominator.
    pub fn eval_int(&self, x: &[BigInt]) -> Result<Rational> {
        check_dim(self.arity, x.len())?;
        let mut acc = Rational::zero();
        let mut powers: Vec<Vec<BigInt>> = x.iter().map(|v| vec![BigInt::one(), v.clone()]).collect();
        for (e, c) in &self.terms {
            let mut m = BigInt::one();
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= k as usize {
                    let next = pw.last().unwrap() * &x[i];
                    pw.push(next);
                }
                m *= &pw[k as usize];
            }
            acc += c * Rational::from_integer(m);
        }
        Ok(acc)
    }

    pub fn eval_i64(&self, x: &[i64]) -> Result<Rational> {
        let big: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        self.eval_int(&big)
    }

    /// Replaces variable `i` by `subs[i]`; all substitutes share one arity,
    /// which becomes the arity of the result.
    pub fn substitute(&self, subs: &[MultiPoly]) -> Result<MultiPoly> {
        check_dim(self.arity, subs.len())?;
        let out_arity = subs.first().map(|s| s.arity).unwrap_or(0);
        for s in subs {
            check_dim(out_arity, s.arity)?;
        }
        // variables mapped to themselves stay in the monomial
        let identity: Vec<bool> = subs
            .iter()
            .enumerate()
            .map(|(i, s)| i < out_arity && *s == MultiPoly::var(out_arity, i))
            .collect();
        let mut powers: Vec<Vec<MultiPoly>> = subs
            .iter()
            .map(|s| vec![MultiPoly::one(out_arity), s.clone()])
            .collect();
        let mut result = MultiPoly::zero(out_arity);
        for (e, c) in &self.terms {
            let mut kept = vec![0; out_arity];
            let mut term: Option<MultiPoly> = None;
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if identity[i] {
                    kept[i] = k;
                    continue;
                }
                let pw = &mut powers[i];
                while pw.len() <= k as usize {
                    let next = pw.last().unwrap() * &subs[i];
                    pw.push(next);
                }
                term = Some(match term {
                    None => pw[k as usize].clone(),
                    Some(t) => &t * &pw[k as usize],
                });
            }
            match term {
                None => result.add_term(Exponent(kept), c.clone()),
                Some(t) => result.add_shifted(&t, &kept, c),
            }
        }
        Ok(result)
    }

    /// `self += c · x^shift · p`
    pub fn add_shifted(&mut self, p: &MultiPoly, shift: &[u32], c: &Rational) {
        assert_eq!(self.arity, p.arity, "arity mismatch in addition");
        for (e, v) in &p.terms {
            let e: Vec<u32> = e.0.iter().zip(shift).map(|(a, b)| a + b).collect();
            self.add_term(Exponent(e), v * c);
        }
    }

    /// Replaces the last variable by `l`, a polynomial in the remaining ones.
    pub fn substitute_last(&self, l: &MultiPoly) -> MultiPoly {
        assert_eq!(l.arity + 1, self.arity, "arity mismatch in substitution");
        let last = self.arity - 1;
        let mut acc = MultiPoly::zero(l.arity);
        for q in self.coefficients_in(last).into_iter().rev() {
            acc = &acc * l;
            for (e, c) in q.terms {
                let mut e = e.0;
                e.pop();
                acc.add_term(Exponent(e), c);
            }
        }
        acc
    }

    /// Embeds into a larger arity by appending unused variables.
    pub fn extend_arity(&self, arity: usize) -> MultiPoly {
        assert!(arity >= self.arity);
        MultiPoly {
            arity,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut v = e.0.clone();
                    v.resize(arity, 0);
                    (Exponent(v), c.clone())
                })
                .collect(),
        }
    }

    /// Splits on the powers of variable `var`: returns `a_j` with
    /// `self = Σ_j a_j · x_var^j`, each `a_j` keeping the full arity with a
    /// zero exponent at `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![MultiPoly::zero(self.arity); deg + 1];
        for (e, c) in &self.terms {
            let j = e.0[var] as usize;
            let mut rest = e.0.clone();
            rest[var] = 0;
            out[j].add_term(Exponent(rest), c.clone());
        }
        out
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch in addition");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        assert_eq!(self.arity, rhs.arity, "arity mismatch in addition");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        assert_eq!(self.arity, rhs.arity, "arity mismatch in subtraction");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c.clone());
        }
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch in subtraction");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        assert_eq!(self.arity, rhs.arity, "arity mismatch in product");
        let mut out = MultiPoly::zero(self.arity);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.0.iter().zip(&e2.0).map(|(a, b)| a + b).collect();
                out.add_term(Exponent(e), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

/// Highest graded-lex term first; variables print as `x1 … xt`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || e.degree() == 0 {
                factors.push(render(&mag));
            }
            for (i, &k) in e.0.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    _ => factors.push(format!("x{}^{}", i + 1, k)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
