//! Exact Fourier–Motzkin feasibility of a sign-vector cone.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use super::arrangement::{Arrangement, SignVector};
use crate::error::{check_dim, Result};
use crate::exactmath::rational::{rat, Rational};

/// `coeffs · x ≥ rhs`
#[derive(Clone, PartialEq, Eq, Hash)]
struct Ineq {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

impl Ineq {
    fn normalized(mut self) -> Self {
        let scale = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.abs());
        if let Some(s) = scale {
            for c in self.coeffs.iter_mut() {
                *c /= &s;
            }
            self.rhs /= &s;
        }
        self
    }
}

/// Whether some point of ℝ^t_{≥0} (equivalently, of ℕ^t) realizes `sv`.
/// Strict signs become `≥ 1`, which is harmless on a cone.
pub fn cone_is_feasible(arr: &Arrangement, sv: &SignVector) -> Result<bool> {
    check_dim(arr.len(), sv.len())?;
    let t = arr.dim();
    let mut eqs: Vec<Vec<Rational>> = Vec::new();
    let mut ineqs: Vec<Ineq> = Vec::new();
    for (h, &s) in arr.planes().iter().zip(&sv.0) {
        let n: Vec<Rational> = h.normal().iter().map(|&v| rat(v)).collect();
        match s {
            0 => eqs.push(n),
            1 => ineqs.push(Ineq { coeffs: n, rhs: Rational::one() }),
            _ => ineqs.push(Ineq {
                coeffs: n.into_iter().map(|v| -v).collect(),
                rhs: Rational::one(),
            }),
        }
    }
    for i in 0..t {
        let mut c = vec![Rational::zero(); t];
        c[i] = Rational::one();
        ineqs.push(Ineq { coeffs: c, rhs: Rational::zero() });
    }

    // substitute equalities away
    while let Some(eq) = eqs.pop() {
        let Some(p) = eq.iter().position(|c| !c.is_zero()) else {
            continue;
        };
        // x_p = −Σ_{i≠p} (eq_i/eq_p) x_i
        let expr: Vec<Rational> = eq.iter().map(|c| -(c / &eq[p])).collect();
        let apply = |v: &mut Vec<Rational>| {
            let f = v[p].clone();
            if f.is_zero() {
                return;
            }
            for i in 0..t {
                if i != p {
                    let delta = &f * &expr[i];
                    v[i] += delta;
                }
            }
            v[p] = Rational::zero();
        };
        for e in eqs.iter_mut() {
            apply(e);
        }
        for q in ineqs.iter_mut() {
            apply(&mut q.coeffs);
        }
    }

    for var in 0..t {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest: HashSet<Ineq> = HashSet::new();
        for q in ineqs.drain(..) {
            let q = q.normalized();
            if q.coeffs[var].is_positive() {
                pos.push(q);
            } else if q.coeffs[var].is_negative() {
                neg.push(q);
            } else {
                rest.insert(q);
            }
        }
        for p in &pos {
            for n in &neg {
                // both normalized so the variable has coefficient ±1 there
                let coeffs: Vec<Rational> = p.coeffs.iter().zip(&n.coeffs).map(|(a, b)| a + b).collect();
                rest.insert(Ineq { coeffs, rhs: &p.rhs + &n.rhs }.normalized());
            }
        }
        ineqs = rest.into_iter().collect();
    }
    Ok(ineqs.iter().all(|q| !q.rhs.is_positive()))
}
