//! Quasi-polynomials: one polynomial per residue class of the arguments
//! modulo a common period.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{check_dim, Error, Result};
use crate::exactmath::rational::{denominator_lcm, floor_int, rat, Rational};
use crate::exactmath::MultiPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiPolynomial {
    arity: usize,
    period: u64,
    pieces: BTreeMap<Vec<u64>, MultiPoly>,
}

/// Inner bracket applied to the affine form before the outer floor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rounding {
    Floor,
    CeilingInner,
}

pub fn residue_of(x: &[i64], d: u64) -> Vec<u64> {
    x.iter().map(|&v| v.rem_euclid(d as i64) as u64).collect()
}

/// All residue tuples of length `t` modulo `d`, lexicographically.
pub fn residues(t: usize, d: u64) -> impl Iterator<Item = Vec<u64>> {
    let total = (d as u128).pow(t as u32);
    (0..total).map(move |mut idx| {
        let mut r = vec![0u64; t];
        for slot in r.iter_mut().rev() {
            *slot = (idx % d as u128) as u64;
            idx /= d as u128;
        }
        r
    })
}

impl QuasiPolynomial {
    pub fn zero(arity: usize) -> Self {
        QuasiPolynomial {
            arity,
            period: 1,
            pieces: BTreeMap::new(),
        }
    }

    pub fn from_polynomial(p: MultiPoly) -> Self {
        let mut q = Self::zero(p.arity());
        if !p.is_zero() {
            q.pieces.insert(vec![0; p.arity()], p);
        }
        q
    }

    pub fn with_period(arity: usize, period: u64) -> Result<Self> {
        if period == 0 {
            return Err(Error::Argument("period must be at least 1".into()));
        }
        Ok(QuasiPolynomial {
            arity,
            period,
            pieces: BTreeMap::new(),
        })
    }

    pub fn set_piece(&mut self, residue: Vec<u64>, p: MultiPoly) -> Result<()> {
        check_dim(self.arity, residue.len())?;
        check_dim(self.arity, p.arity())?;
        if residue.iter().any(|&r| r >= self.period) {
            return Err(Error::Argument(format!("residue {residue:?} not below period {}", self.period)));
        }
        if p.is_zero() {
            self.pieces.remove(&residue);
        } else {
            self.pieces.insert(residue, p);
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&Vec<u64>, &MultiPoly)> {
        self.pieces.iter()
    }

    /// The polynomial of a residue class (zero when absent).
    pub fn piece(&self, residue: &[u64]) -> MultiPoly {
        self.pieces
            .get(residue)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.arity))
    }

    /// The polynomial selected at the integer point `x`.
    pub fn piece_at(&self, x: &[i64]) -> MultiPoly {
        self.piece(&residue_of(x, self.period))
    }

    pub fn eval(&self, x: &[i64]) -> Result<Rational> {
        check_dim(self.arity, x.len())?;
        match self.pieces.get(&residue_of(x, self.period)) {
            Some(p) => p.eval_i64(x),
            None => Ok(Rational::zero()),
        }
    }

    /// Restates `self` with period `k`, a multiple of the current period.
    pub fn refit(&self, k: u64) -> Result<Self> {
        if k == 0 || k % self.period != 0 {
            return Err(Error::Argument(format!(
                "period {k} is not a multiple of {}",
                self.period
            )));
        }
        let mut out = Self::with_period(self.arity, k)?;
        if self.pieces.is_empty() {
            return Ok(out);
        }
        for r in residues(self.arity, k) {
            let coarse: Vec<u64> = r.iter().map(|v| v % self.period).collect();
            if let Some(p) = self.pieces.get(&coarse) {
                out.pieces.insert(r, p.clone());
            }
        }
        Ok(out)
    }

    /// Shrinks the period to the smallest divisor under which the table is
    /// still well defined.
    pub fn canonicalize(&self) -> Self {
        if self.pieces.is_empty() {
            return Self::zero(self.arity);
        }
        let mut divisors: Vec<u64> = (1..=self.period).filter(|d| self.period % d == 0).collect();
        divisors.sort_unstable();
        for d in divisors {
            if d == self.period {
                break;
            }
            let mut table: BTreeMap<Vec<u64>, MultiPoly> = BTreeMap::new();
            let mut consistent = true;
            for r in residues(self.arity, self.period) {
                let p = self.piece(&r);
                let coarse: Vec<u64> = r.iter().map(|v| v % d).collect();
                match table.get(&coarse) {
                    Some(q) if *q != p => {
                        consistent = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        table.insert(coarse, p);
                    }
                }
            }
            if consistent {
                table.retain(|_, p| !p.is_zero());
                return QuasiPolynomial {
                    arity: self.arity,
                    period: d,
                    pieces: table,
                };
            }
        }
        self.clone()
    }
}

/// Pointwise sum; the period of the result is the lcm of the periods.
pub fn qp_add(a: &QuasiPolynomial, b: &QuasiPolynomial) -> Result<QuasiPolynomial> {
    check_dim(a.arity, b.arity)?;
    let d = a.period.lcm(&b.period);
    let mut out = a.refit(d)?;
    for (r, p) in b.refit(d)?.pieces {
        let sum = &out.piece(&r) + &p;
        out.set_piece(r, sum)?;
    }
    Ok(out)
}

pub fn qp_eval(q: &QuasiPolynomial, x: &[i64]) -> Result<Rational> {
    q.eval(x)
}

pub fn qp_refit(q: &QuasiPolynomial, k: u64) -> Result<QuasiPolynomial> {
    q.refit(k)
}

fn bracket(v: &Rational, mode: Rounding) -> BigInt {
    match mode {
        Rounding::Floor => floor_int(v),
        // ⌈v⌉ = −⌊−v⌋
        Rounding::CeilingInner => -floor_int(&-v),
    }
}

/// Period `g·d` of the floor-affine quasi-polynomial, `g` the lcm of the
/// denominators of `b`.
pub fn floor_affine_period(b: &[Rational], d: u64) -> u64 {
    let g = denominator_lcm(b.iter());
    g.to_u64().expect("denominators fit in u64") * d
}

/// Linear polynomial equal to `⌊(⟦b·x⟧ + k)/d⌋` on the residue class
/// `x ≡ residue (mod g·d)`.
pub fn floor_affine_piece(b: &[Rational], k: i64, d: u64, mode: Rounding, residue: &[u64]) -> MultiPoly {
    let dr = rat(d as i64);
    let lam_r: Rational = b
        .iter()
        .zip(residue)
        .map(|(bi, &ri)| bi * rat(ri as i64))
        .sum();
    let top = bracket(&lam_r, mode) + BigInt::from(k);
    let c_r = Rational::from_integer(top.div_floor(&BigInt::from(d)));
    let coeffs: Vec<Rational> = b.iter().map(|bi| bi / &dr).collect();
    let shift: Rational = coeffs
        .iter()
        .zip(residue)
        .map(|(c, &ri)| c * rat(ri as i64))
        .sum();
    MultiPoly::linear(&coeffs, c_r - shift)
}

/// The quasi-polynomial `x ↦ ⌊(⟦Σ b_i x_i⟧ + k)/d⌋` with `⟦·⟧` the floor or
/// the ceiling according to `mode`.
pub fn floor_affine_qp(b: &[Rational], k: i64, d: u64, mode: Rounding) -> Result<QuasiPolynomial> {
    if d == 0 {
        return Err(Error::Argument("divisor must be positive".into()));
    }
    let t = b.len();
    let period = floor_affine_period(b, d);
    let mut q = QuasiPolynomial::with_period(t, period)?;
    for r in residues(t, period) {
        let p = floor_affine_piece(b, k, d, mode, &r);
        q.set_piece(r, p)?;
    }
    Ok(q)
}

impl fmt::Display for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "period {}", self.period)?;
        if self.pieces.is_empty() {
            return writeln!(f, "  * : 0");
        }
        for (r, p) in &self.pieces {
            let rs: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  ({}) : {}", rs.join(","), p)?;
        }
        Ok(())
    }
}

impl QuasiPolynomial {
    pub fn to_json(&self) -> serde_json::Value {
        let pieces: Vec<serde_json::Value> = self
            .pieces
            .iter()
            .map(|(r, p)| serde_json::json!({ "residue": r, "poly": p.to_string() }))
            .collect();
        serde_json::json!({ "period": self.period, "pieces": pieces })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::ratio;

    fn floor_half() -> QuasiPolynomial {
        let x = MultiPoly::var(1, 0);
        let mut q = QuasiPolynomial::with_period(1, 2).unwrap();
        q.set_piece(vec![0], x.scale(&ratio(1, 2))).unwrap();
        q.set_piece(vec![1], (&x - &MultiPoly::one(1)).scale(&ratio(1, 2))).unwrap();
        q
    }

    #[test]
    fn parity_floor() {
        assert_eq!(floor_half().eval(&[7]).unwrap(), rat(3));
        assert!(floor_half().eval(&[1, 2]).is_err());
    }

    #[test]
    fn sum_of_floors() {
        let third = floor_affine_qp(&[rat(1)], 0, 3, Rounding::Floor).unwrap();
        let s = qp_add(&floor_half(), &third).unwrap();
        assert_eq!(s.period(), 6);
        for x in 0..=20i64 {
            assert_eq!(s.eval(&[x]).unwrap(), rat(x / 2 + x / 3));
        }
    }

    #[test]
    fn refit_and_canonicalize() {
        let q = floor_half().refit(6).unwrap();
        assert_eq!(q.period(), 6);
        for x in 0..=30i64 {
            assert_eq!(q.eval(&[x]).unwrap(), rat(x / 2));
        }
        assert_eq!(q.canonicalize(), floor_half());
        assert!(floor_half().refit(3).is_err());
        let c = QuasiPolynomial::from_polynomial(MultiPoly::one(1)).refit(4).unwrap();
        assert_eq!(c.pieces().count(), 4);
    }

    #[test]
    fn floor_affine_examples() {
        let q = floor_affine_qp(&[ratio(1, 2)], 0, 3, Rounding::Floor).unwrap();
        assert_eq!(q.eval(&[8]).unwrap(), rat(1));
        let lin = floor_affine_qp(&[rat(2), rat(-1)], 0, 1, Rounding::Floor).unwrap();
        assert_eq!(lin.period(), 1);
        assert_eq!(lin.piece(&[0, 0]), MultiPoly::linear(&[rat(2), rat(-1)], rat(0)));
    }
}
