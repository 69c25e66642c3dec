//! Lazily materialized quasi-polynomials.
//!
//! A piece is either an explicit table, a sum of pieces, or a signed
//! combination of prefix sums `Σ_{λ=0..top(x)} s(x − λa)` whose upper index
//! is a floor or ceiling of a rational linear form. Class polynomials are
//! built on demand and memoized.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::exactmath::rational::{denominator_lcm, rat, Rational};
use crate::exactmath::{prefix_sum_polynomial, CompiledPoly, MultiPoly};
use crate::quasipoly::{floor_affine_period, residue_of, residues, QuasiPolynomial, Rounding};

/// One signed prefix sum `sign · Σ_{λ=0..top(x)} summand(x − λ·column)`,
/// with `top = ⌊b·x⌋` (floor) or `⌈b·x⌉ − 1` (ceiling-inner).
#[derive(Clone, Debug)]
pub struct PrefixTerm {
    pub summand: Arc<Piece>,
    pub column: Vec<i64>,
    pub functional: Vec<Rational>,
    pub mode: Rounding,
    pub sign: i8,
    numer: Vec<i64>,
    denom: i64,
}

impl PrefixTerm {
    pub fn new(summand: Arc<Piece>, column: Vec<i64>, functional: Vec<Rational>, mode: Rounding, sign: i8) -> Self {
        let g = denominator_lcm(functional.iter());
        let gr = Rational::from_integer(g.clone());
        let numer = functional
            .iter()
            .map(|b| (b * &gr).to_integer().to_i64().expect("functional fits in i64"))
            .collect();
        PrefixTerm {
            summand,
            column,
            functional,
            mode,
            sign,
            numer,
            denom: g.to_i64().expect("denominator fits in i64"),
        }
    }

    fn top(&self, x: &[i64]) -> i64 {
        let n: i128 = self.numer.iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum();
        let g = self.denom as i128;
        let v = match self.mode {
            Rounding::Floor => Integer::div_floor(&n, &g),
            Rounding::CeilingInner => -(Integer::div_floor(&(-n), &g)) - 1,
        };
        v as i64
    }

    /// `⌊(⟦λ(r)⟧ + k)/p⌋` extended affinely over the residue class of `r`,
    /// computed in integers; agrees with `floor_affine_piece`.
    fn top_piece(&self, k: i64, p: u64, r: &[u64]) -> MultiPoly {
        let n: i128 = self.numer.iter().zip(r).map(|(&a, &b)| a as i128 * b as i128).sum();
        let g = self.denom as i128;
        let bracket = match self.mode {
            Rounding::Floor => Integer::div_floor(&n, &g),
            Rounding::CeilingInner => -Integer::div_floor(&(-n), &g),
        };
        let c = Integer::div_floor(&(bracket + k as i128), &(p as i128));
        let shift = Rational::new((c * g * p as i128).into(), (g * p as i128).into()) - Rational::new(n.into(), (g * p as i128).into());
        let coeffs: Vec<Rational> = self.numer.iter().map(|&a| Rational::new(a.into(), (g * p as i128).into())).collect();
        MultiPoly::linear(&coeffs, shift)
    }

    /// Smallest `p > 0` with `p·a ≡ 0 (mod d)`, `d` the summand period: the
    /// summand restricted to the ray is periodic in `λ` with period `p`.
    fn step(&self) -> u64 {
        let d = self.summand.period();
        self.column
            .iter()
            .fold(1u64, |acc, &ai| acc.lcm(&(d / d.gcd(&ai.unsigned_abs()))))
    }

    fn period(&self) -> u64 {
        self.summand
            .period()
            .lcm(&floor_affine_period(&self.functional, self.step()))
    }
}

#[derive(Debug)]
pub enum PieceKind {
    Table(QuasiPolynomial),
    Sum(Vec<Arc<Piece>>),
    RaySum(Vec<PrefixTerm>),
}

struct Prefix {
    poly: MultiPoly,
    compiled: CompiledPoly,
}

type PrefixKey = (Vec<i64>, u64, Vec<u64>);

/// A period of the function on a region: `period` works for every integer
/// point of the region, which is either open in ℝ^t (`normal` absent) or open
/// in the hyperplane `normal·x = 0`.
#[derive(Clone, Debug)]
pub struct Modulus {
    pub period: u64,
    pub normal: Option<Vec<i64>>,
}

/// How a shared residue is lifted to a residue modulo the full period whose
/// class actually meets the region.
#[derive(Debug)]
struct Lift {
    full: u64,
    /// primitive normal `n` and a vector `u` with `n·u = 1`
    normal: Option<(Vec<i64>, Vec<i64>)>,
}

fn bezout_vector(n: &[i64]) -> Vec<i64> {
    let mut u = vec![0i64; n.len()];
    let mut g = 0i64;
    for (i, &v) in n.iter().enumerate() {
        if v == 0 {
            continue;
        }
        if g == 0 {
            g = v;
            u[i] = 1;
            continue;
        }
        let e = g.extended_gcd(&v);
        for w in u.iter_mut() {
            *w *= e.x;
        }
        u[i] = e.y;
        g = e.gcd;
    }
    if g < 0 {
        for w in u.iter_mut() {
            *w = -*w;
        }
    }
    u
}


pub struct Piece {
    arity: usize,
    period: u64,
    kind: PieceKind,
    lift: Option<Lift>,
    classes: RwLock<HashMap<Vec<u64>, Arc<MultiPoly>>>,
    compiled: RwLock<HashMap<Vec<u64>, Arc<CompiledPoly>>>,
    prefixes: RwLock<HashMap<PrefixKey, Arc<Prefix>>>,
}

impl std::fmt::Debug for Piece {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Piece")
            .field("arity", &self.arity)
            .field("period", &self.period)
            .field("kind", &self.kind)
            .finish()
    }
}

fn memo<K, V>(map: &RwLock<HashMap<K, Arc<V>>>, key: K, build: impl FnOnce() -> V) -> Arc<V>
where
    K: std::hash::Hash + Eq,
{
    if let Some(v) = map.read().unwrap().get(&key) {
        return v.clone();
    }
    let v = Arc::new(build());
    // a racing writer may have inserted an identical value first
    map.write().unwrap().entry(key).or_insert(v).clone()
}

impl Piece {
    fn build(arity: usize, period: u64, kind: PieceKind) -> Arc<Piece> {
        Arc::new(Self::build_raw(arity, period, kind))
    }

    fn build_raw(arity: usize, period: u64, kind: PieceKind) -> Piece {
        Piece {
            arity,
            period,
            kind,
            lift: None,
            classes: RwLock::new(HashMap::new()),
            compiled: RwLock::new(HashMap::new()),
            prefixes: RwLock::new(HashMap::new()),
        }
    }

    pub fn table(q: QuasiPolynomial) -> Arc<Piece> {
        Self::build(q.arity(), q.period(), PieceKind::Table(q))
    }

    pub fn zero(arity: usize) -> Arc<Piece> {
        Self::table(QuasiPolynomial::zero(arity))
    }

    /// Shared zero piece per arity.
    pub fn shared_zero(arity: usize) -> Arc<Piece> {
        static ZEROS: OnceLock<RwLock<HashMap<usize, Arc<Piece>>>> = OnceLock::new();
        memo_arc(ZEROS.get_or_init(|| RwLock::new(HashMap::new())), arity, || Self::zero(arity))
    }

    pub fn sum(arity: usize, parts: Vec<Arc<Piece>>) -> Arc<Piece> {
        let parts: Vec<Arc<Piece>> = parts.into_iter().filter(|p| !p.is_zero()).collect();
        match parts.len() {
            0 => Self::zero(arity),
            1 => parts.into_iter().next().unwrap(),
            _ => {
                let period = parts.iter().fold(1u64, |acc, p| acc.lcm(&p.period));
                Self::build(arity, period, PieceKind::Sum(parts))
            }
        }
    }

    /// With a `modulus`, class polynomials are shared modulo
    /// `gcd(modulus.period, ·)`.
    pub fn ray_sum(arity: usize, terms: Vec<PrefixTerm>, modulus: Option<Modulus>) -> Arc<Piece> {
        let terms: Vec<PrefixTerm> = terms.into_iter().filter(|t| !t.summand.is_zero()).collect();
        if terms.is_empty() {
            return Self::zero(arity);
        }
        let full = terms.iter().fold(1u64, |acc, t| acc.lcm(&t.period()));
        let Some(m) = modulus else {
            return Self::build(arity, full, PieceKind::RaySum(terms));
        };
        let period = full.gcd(&m.period);
        let mut piece = Self::build_raw(arity, period, PieceKind::RaySum(terms));
        if period != full {
            piece.lift = Some(Lift {
                full,
                normal: m.normal.map(|n| {
                    let u = bezout_vector(&n);
                    (n, u)
                }),
            });
        }
        Arc::new(piece)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn kind(&self) -> &PieceKind {
        &self.kind
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.kind, PieceKind::Table(q) if q.is_zero())
    }

    /// Polynomial of the residue class `residue` (taken modulo the period).
    pub fn class_poly(&self, residue: &[u64]) -> Arc<MultiPoly> {
        let r: Vec<u64> = residue.iter().map(|v| v % self.period).collect();
        if let PieceKind::Table(q) = &self.kind {
            return Arc::new(q.piece(&r));
        }
        memo(&self.classes, r.clone(), || match self.lifted(&r) {
            Some(rep) => self.build_class(&rep),
            None => MultiPoly::zero(self.arity),
        })
    }

    /// A residue modulo the full period, congruent to `r` modulo the shared
    /// one, whose class meets the region; `None` when no integer point of
    /// the region is congruent to `r`.
    fn lifted(&self, r: &[u64]) -> Option<Vec<u64>> {
        let Some(lift) = &self.lift else {
            return Some(r.to_vec());
        };
        let Some((n, u)) = &lift.normal else {
            return Some(r.to_vec());
        };
        let d = self.period as i128;
        let m = lift.full as i128;
        let nc: i128 = n.iter().zip(r).map(|(&a, &b)| a as i128 * b as i128).sum();
        if nc % d != 0 {
            return None;
        }
        // n·(r + d·s·u) = nc + d·s ≡ 0 (mod m)
        let s = Integer::mod_floor(&(-nc / d), &(m / d));
        Some(
            r.iter()
                .zip(u)
                .map(|(&ri, &ui)| Integer::mod_floor(&(ri as i128 + d * s * ui as i128), &m) as u64)
                .collect(),
        )
    }

    fn build_class(&self, r: &[u64]) -> MultiPoly {
        let t = self.arity;
        match &self.kind {
            PieceKind::Table(q) => q.piece(r),
            PieceKind::Sum(parts) => parts
                .iter()
                .fold(MultiPoly::zero(t), |mut acc, p| {
                    acc += p.class_poly(r).as_ref();
                    acc
                }),
            PieceKind::RaySum(terms) => {
                let mut acc = MultiPoly::zero(t);
                for term in terms {
                    let d = term.summand.period;
                    let p = term.step();
                    let mut part = MultiPoly::zero(t);
                    for j in 0..p {
                        let c = shifted_residue(r, &term.column, j, d);
                        let q = term.summand.prefix(&term.column, j, p, &c);
                        let k = match term.mode {
                            Rounding::Floor => -(j as i64),
                            Rounding::CeilingInner => -1 - j as i64,
                        };
                        let top = term.top_piece(k, p, r);
                        part += &q.poly.substitute_last(&top);
                    }
                    if term.sign > 0 {
                        acc += &part;
                    } else {
                        acc -= &part;
                    }
                }
                acc
            }
        }
    }

    /// `Q(x, N) = Σ_{ν=0..N} s_c(x − (j + ν·p)·a)` where `s_c` is this piece's
    /// class polynomial at `c`; `p·a` must vanish modulo the period.
    fn prefix(&self, a: &[i64], j: u64, p: u64, c: &[u64]) -> Arc<Prefix> {
        let key = (a.to_vec(), j, c.to_vec());
        memo(&self.prefixes, key, || {
            let t = self.arity;
            let q = self.class_poly(c);
            let d = p as i64;
            let subs: Vec<MultiPoly> = (0..t)
                .map(|i| {
                    let shift = MultiPoly::constant(t + 1, rat(-(j as i64) * a[i]));
                    let step = MultiPoly::var(t + 1, t).scale(&rat(-d * a[i]));
                    &(&MultiPoly::var(t + 1, i) + &shift) + &step
                })
                .collect();
            let shifted = q.substitute(&subs).expect("arity checked");
            let poly = prefix_sum_polynomial(&shifted);
            let compiled = CompiledPoly::new(&poly);
            Prefix { poly, compiled }
        })
    }

    fn compiled_class(&self, r: Vec<u64>) -> Arc<CompiledPoly> {
        memo(&self.compiled, r.clone(), || CompiledPoly::new(&self.class_poly(&r)))
    }

    /// Exact value at an integer point of the region this piece serves.
    pub fn eval(&self, x: &[i64]) -> Rational {
        match &self.kind {
            PieceKind::Table(q) => {
                if q.is_zero() {
                    return Rational::zero();
                }
                self.compiled_class(residue_of(x, self.period)).eval(x)
            }
            PieceKind::Sum(parts) => parts.iter().map(|p| p.eval(x)).sum(),
            PieceKind::RaySum(terms) => {
                let mut acc = Rational::zero();
                let mut point: Vec<i64> = Vec::with_capacity(x.len() + 1);
                for term in terms {
                    let top = term.top(x);
                    if top < 0 {
                        continue;
                    }
                    let d = term.summand.period as i64;
                    let p = term.step() as i64;
                    let mut part = Rational::zero();
                    for j in 0..=top.min(p - 1) {
                        let c: Vec<u64> = x
                            .iter()
                            .zip(&term.column)
                            .map(|(&xi, &ai)| (xi - j * ai).rem_euclid(d) as u64)
                            .collect();
                        let q = term.summand.prefix(&term.column, j as u64, p as u64, &c);
                        point.clear();
                        point.extend_from_slice(x);
                        point.push(Integer::div_floor(&(top - j), &p));
                        part += q.compiled.eval(&point);
                    }
                    if term.sign > 0 {
                        acc += part;
                    } else {
                        acc -= part;
                    }
                }
                acc
            }
        }
    }

    /// Number of residue classes a full table would hold.
    pub fn class_count(&self) -> u128 {
        (self.period as u128).saturating_pow(self.arity as u32)
    }

    pub fn materialize(&self) -> QuasiPolynomial {
        if let PieceKind::Table(q) = &self.kind {
            return q.clone();
        }
        let mut q = QuasiPolynomial::with_period(self.arity, self.period).expect("period ≥ 1");
        for r in residues(self.arity, self.period) {
            let p = self.class_poly(&r);
            q.set_piece(r, p.as_ref().clone()).expect("residue in range");
        }
        q
    }

    /// Materializes only when the table has at most `max_classes` entries.
    pub fn materialize_bounded(&self, max_classes: u128) -> Option<QuasiPolynomial> {
        (self.class_count() <= max_classes).then(|| self.materialize())
    }
}

fn memo_arc<K: std::hash::Hash + Eq>(
    map: &RwLock<HashMap<K, Arc<Piece>>>,
    key: K,
    build: impl FnOnce() -> Arc<Piece>,
) -> Arc<Piece> {
    if let Some(v) = map.read().unwrap().get(&key) {
        return v.clone();
    }
    let v = build();
    map.write().unwrap().entry(key).or_insert(v).clone()
}

/// `(r − j·a) mod d`, componentwise.
fn shifted_residue(r: &[u64], a: &[i64], j: u64, d: u64) -> Vec<u64> {
    r.iter()
        .zip(a)
        .map(|(&ri, &ai)| (ri as i128 - j as i128 * ai as i128).rem_euclid(d as i128) as u64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_one(t: usize) -> Arc<Piece> {
        Piece::table(QuasiPolynomial::from_polynomial(MultiPoly::one(t)))
    }

    #[test]
    fn half_open_count() {
        // Σ_{λ ∈ [0, x)} 1 = x
        let term = PrefixTerm::new(constant_one(1), vec![1], vec![rat(1)], Rounding::CeilingInner, 1);
        let p = Piece::ray_sum(1, vec![term], None);
        for x in 0..20 {
            assert_eq!(p.eval(&[x]), rat(x));
            assert_eq!(p.materialize().eval(&[x]).unwrap(), rat(x));
        }
    }

    #[test]
    fn numeric_and_symbolic_agree_with_periodic_summand() {
        // summand: 1 on even points, 0 on odd; sum over λ ∈ [0, ⌊x/3⌋] of s(x − λ)
        let mut q = QuasiPolynomial::with_period(1, 2).unwrap();
        q.set_piece(vec![0], MultiPoly::one(1)).unwrap();
        let s = Piece::table(q);
        let term = PrefixTerm::new(s.clone(), vec![1], vec![crate::exactmath::rational::ratio(1, 3)], Rounding::Floor, 1);
        let p = Piece::ray_sum(1, vec![term], None);
        let table = p.materialize();
        for x in 0..40i64 {
            let brute = (0..=x / 3).filter(|l| (x - l) % 2 == 0).count() as i64;
            assert_eq!(p.eval(&[x]), rat(brute), "x = {x}");
            assert_eq!(table.eval(&[x]).unwrap(), rat(brute), "x = {x}");
        }
    }

    #[test]
    fn integer_top_piece_matches_rational_one() {
        use crate::exactmath::rational::ratio;
        use crate::quasipoly::floor_affine_piece;
        let b = vec![ratio(3, 7), ratio(-2, 5), rat(1)];
        for mode in [Rounding::Floor, Rounding::CeilingInner] {
            let term = PrefixTerm::new(constant_one(3), vec![1, 0, 2], b.clone(), mode, 1);
            for (k, p) in [(0, 1), (-3, 4), (-1, 6)] {
                for r in [[0u64, 0, 0], [5, 1, 3], [12, 7, 2]] {
                    assert_eq!(term.top_piece(k, p, &r), floor_affine_piece(&b, k, p, mode, &r));
                }
            }
        }
    }

    #[test]
    fn bezout_vectors() {
        for n in [vec![1, -2], vec![0, 6, 10, 15], vec![-3, 0, 4]] {
            let u = bezout_vector(&n);
            assert_eq!(n.iter().zip(&u).map(|(a, b)| a * b).sum::<i64>(), 1, "{n:?}");
        }
    }
}
