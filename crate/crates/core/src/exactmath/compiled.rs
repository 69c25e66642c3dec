//! Fixed-width evaluation of a polynomial at small integer points.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::poly::MultiPoly;
use super::rational::{denominator_lcm, Rational};

/// A polynomial scaled to integer coefficients over a common denominator.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    arity: usize,
    denom: i128,
    terms: Vec<(Vec<u32>, i128)>,
    source: MultiPoly,
}

impl CompiledPoly {
    pub fn new(p: &MultiPoly) -> Self {
        let l = denominator_lcm(p.terms().map(|(_, c)| c));
        let lr = Rational::from_integer(l.clone());
        let mut ok = true;
        let terms = p
            .terms()
            .map(|(e, c)| {
                let scaled = (c * &lr).to_integer().to_i128();
                ok &= scaled.is_some();
                (e.0.clone(), scaled.unwrap_or(0))
            })
            .collect();
        let denom = l.to_i128();
        CompiledPoly {
            arity: p.arity(),
            denom: if ok { denom.unwrap_or(0) } else { 0 },
            terms,
            source: p.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.source.is_zero()
    }

    fn eval_fast(&self, x: &[i64]) -> Option<i128> {
        if self.denom == 0 {
            return None;
        }
        let mut acc: i128 = 0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t = t.checked_mul(*xi as i128)?;
                }
            }
            acc = acc.checked_add(t)?;
        }
        Some(acc)
    }

    /// Exact value at an integer point.
    pub fn eval(&self, x: &[i64]) -> Rational {
        debug_assert_eq!(x.len(), self.arity);
        match self.eval_fast(x) {
            Some(n) => Rational::new(BigInt::from(n), BigInt::from(self.denom)),
            None => self.source.eval_i64(x).unwrap_or_else(|_| Rational::zero()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::{rat, ratio};

    #[test]
    fn agrees_with_rational_eval() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let p = &(&(&x * &y).scale(&ratio(3, 4)) + &x.pow(3)) - &MultiPoly::constant(2, ratio(1, 6));
        let c = CompiledPoly::new(&p);
        for a in -5..6 {
            for b in -5..6 {
                assert_eq!(c.eval(&[a, b]), p.eval_i64(&[a, b]).unwrap());
            }
        }
        let big = x.pow(9).scale(&rat(1_000_000_007));
        let cb = CompiledPoly::new(&big);
        assert_eq!(cb.eval(&[1_000_000, 0]), big.eval_i64(&[1_000_000, 0]).unwrap());
    }
}
