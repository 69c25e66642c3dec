//! Closed forms for sums of polynomials over `0..=n`.
//!
//! `λ^m` is rewritten in the binomial basis `Σ b_i·C(λ, i)`, and the hockey
//! stick identity `Σ_{λ≤n} C(λ, i) = C(n+1, i+1)` sums each basis element.

use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::rational::{rat, Rational};

/// Binomial coefficient C(k, i) for small non-negative integers.
fn binom(k: u64, i: u64) -> Rational {
    if i > k {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    for j in 0..i {
        acc = acc * rat((k - j) as i64) / rat((j + 1) as i64);
    }
    acc
}

/// Coefficients `b_0..b_m` with `k^m = Σ b_i·C(k, i)` for all `k ≥ 0`,
/// found by forward substitution on `k = 0..m` (the system is unit lower
/// triangular since `C(k, k) = 1`).
pub fn binomial_basis_coefficients(m: u32) -> Vec<Rational> {
    let m = m as u64;
    let mut b: Vec<Rational> = Vec::with_capacity(m as usize + 1);
    for k in 0..=m {
        let target = if m == 0 { Rational::one() } else { rat((k as i64).pow(m as u32)) };
        let partial: Rational = (0..k).map(|i| &b[i as usize] * binom(k, i)).sum();
        b.push(target - partial);
    }
    b
}

/// `C(x + 1, r + 1)` as a polynomial in one variable.
fn shifted_binomial(r: u32) -> MultiPoly {
    let x = MultiPoly::var(1, 0);
    let mut p = MultiPoly::one(1);
    // (x+1)·x·(x-1)···(x-r+1) / (r+1)!
    for j in 0..=r {
        let factor = &x - &MultiPoly::constant(1, rat(j as i64 - 1));
        p = &p * &factor;
    }
    let fact: Rational = (1..=(r as i64 + 1)).map(rat).product();
    p.scale(&(Rational::one() / fact))
}

fn power_sum_cache() -> &'static RwLock<Vec<MultiPoly>> {
    static CACHE: OnceLock<RwLock<Vec<MultiPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Vec::new()))
}

fn build_power_sum(m: u32) -> MultiPoly {
    let b = binomial_basis_coefficients(m);
    let mut p = MultiPoly::zero(1);
    for (i, bi) in b.iter().enumerate() {
        if !bi.is_zero() {
            p = &p + &shifted_binomial(i as u32).scale(bi);
        }
    }
    p
}

/// The polynomial `p` in one variable with `p(n) = Σ_{λ=0..n} λ^m` for every
/// `n ≥ 0` (with `0^0 = 1`) and `p(-1) = 0`.
pub fn power_sum_polynomial(m: u32) -> MultiPoly {
    {
        let cache = power_sum_cache().read().unwrap();
        if let Some(p) = cache.get(m as usize) {
            return p.clone();
        }
    }
    let mut cache = power_sum_cache().write().unwrap();
    while cache.len() <= m as usize {
        let next = build_power_sum(cache.len() as u32);
        cache.push(next);
    }
    cache[m as usize].clone()
}

/// Sums `q` over its last variable: the result `p` satisfies
/// `p(x, n) = Σ_{λ=0..n} q(x, λ)` for `n ≥ 0` and `p(x, -1) = 0`.
pub fn prefix_sum_polynomial(q: &MultiPoly) -> MultiPoly {
    let arity = q.arity();
    assert!(arity >= 1, "prefix sum needs a summation variable");
    let last = arity - 1;
    let mut result = MultiPoly::zero(arity);
    for (j, a_j) in q.coefficients_in(last).into_iter().enumerate() {
        if a_j.is_zero() {
            continue;
        }
        let pj = power_sum_polynomial(j as u32);
        for (e, c) in pj.terms() {
            let mut shift = vec![0; arity];
            shift[last] = e.0[0];
            result.add_shifted(&a_j, &shift, c);
        }
    }
    result
}
