//! Integer points of a pointed rational polyhedron as a disjoint union of
//! sets `base + ℕ·{independent periods}`: homogenize, triangulate the cone
//! by pulling, make the cones half-open, and read off the level-one points
//! of each fundamental parallelepiped.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lattice::{column_echelon, dot, solve_integer, ZVec};
use crate::exactmath::linalg;
use crate::exactmath::rational::Rational;

/// `a·y ≥ c`
pub type Ineq = (ZVec, BigInt);

/// One `base + ℕ·periods` piece in the coordinates of the polyhedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub base: ZVec,
    pub periods: Vec<ZVec>,
}

fn to_rational(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

fn rank_of(vectors: &[&ZVec]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m: linalg::Matrix = vectors.iter().map(|v| to_rational(v)).collect();
    linalg::rank(&m)
}

fn primitive(v: &[Rational]) -> ZVec {
    linalg::primitive_integer(v)
}

/// Extreme rays of the pointed cone `{z : n·z ≥ 0 for n in normals}` in
/// dimension `d`, as primitive integer vectors.
fn extreme_rays(normals: &[ZVec], d: usize) -> Vec<ZVec> {
    let mut rays: BTreeSet<ZVec> = BTreeSet::new();
    let m = normals.len();
    if d == 1 {
        for s in [1i64, -1] {
            let z = vec![BigInt::from(s)];
            if normals.iter().all(|n| !dot(n, &z).is_negative()) {
                rays.insert(z);
            }
        }
        return rays.into_iter().collect();
    }
    let mut pick: Vec<usize> = Vec::new();
    fn walk(
        normals: &[ZVec],
        d: usize,
        start: usize,
        pick: &mut Vec<usize>,
        rays: &mut BTreeSet<ZVec>,
    ) {
        if pick.len() == d - 1 {
            let rows: linalg::Matrix = pick.iter().map(|&i| to_rational(&normals[i])).collect();
            if linalg::rank(&rows) != d - 1 {
                return;
            }
            let k = linalg::kernel(&rows, d);
            let z = primitive(&k[0]);
            for cand in [z.clone(), z.iter().map(|v| -v).collect::<ZVec>()] {
                if normals.iter().all(|n| !dot(n, &cand).is_negative()) {
                    rays.insert(cand);
                }
            }
            return;
        }
        let rank_now = {
            let rows: Vec<&ZVec> = pick.iter().map(|&i| &normals[i]).collect();
            rank_of(&rows)
        };
        if rank_now < pick.len() {
            return;
        }
        for i in start..normals.len() {
            pick.push(i);
            walk(normals, d, i + 1, pick, rays);
            pick.pop();
        }
    }
    if m >= d - 1 {
        walk(normals, d, 0, &mut pick, &mut rays);
    }
    rays.into_iter().collect()
}

/// Pulling triangulation of the cone spanned by `face` (indices into
/// `rays`), of dimension `dim`.
fn triangulate(face: &[usize], dim: usize, rays: &[ZVec], normals: &[ZVec], out: &mut Vec<Vec<usize>>) {
    if face.len() == dim {
        out.push(face.to_vec());
        return;
    }
    let apex = face[0];
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for n in normals {
        let tight: Vec<usize> = face.iter().copied().filter(|&i| dot(n, &rays[i]).is_zero()).collect();
        if tight.len() == face.len() || tight.contains(&apex) {
            continue;
        }
        let vs: Vec<&ZVec> = tight.iter().map(|&i| &rays[i]).collect();
        if rank_of(&vs) == dim - 1 {
            facets.insert(tight);
        }
    }
    for f in facets {
        let mut sub = Vec::new();
        triangulate(&f, dim - 1, rays, normals, &mut sub);
        for mut s in sub {
            s.insert(0, apex);
            out.push(s);
        }
    }
}

/// Coefficients of `q` in the independent generators `gens`.
fn coefficients(gens: &[&ZVec], q: &[Rational]) -> Vec<Rational> {
    let n = q.len();
    let d = gens.len();
    // n × (d + 1) augmented system, solved by row reduction
    let mut aug: linalg::Matrix = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = gens.iter().map(|g| Rational::from_integer(g[i].clone())).collect();
            row.push(q[i].clone());
            row
        })
        .collect();
    let pivots = linalg::rref(&mut aug);
    let mut lam = vec![Rational::zero(); d];
    for (row, &c) in pivots.iter().enumerate() {
        if c < d {
            lam[c] = aug[row][d].clone();
        }
    }
    lam
}

/// Integer points `y` with `a·y ≥ c` for every inequality, assuming the
/// polyhedron is pointed. The pieces are pairwise disjoint.
/// Normals and extreme rays of the cone over the polyhedron, in `(y, h)`:
/// `a·y − c·h ≥ 0`, `h ≥ 0`. `None` when the polyhedron is empty.
fn homogenized(ineqs: &[Ineq], dim: usize) -> Option<(Vec<ZVec>, Vec<ZVec>)> {
    let mut normals: BTreeSet<ZVec> = BTreeSet::new();
    for (a, c) in ineqs {
        let mut n = a.clone();
        n.push(-c);
        if n.iter().all(|v| v.is_zero()) {
            continue;
        }
        let g = n.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        normals.insert(n.into_iter().map(|v| v / &g).collect());
    }
    let mut h = vec![BigInt::zero(); dim + 1];
    h[dim] = BigInt::one();
    normals.insert(h);
    let normals: Vec<ZVec> = normals.into_iter().collect();
    let rays = extreme_rays(&normals, dim + 1);
    if !rays.iter().any(|r| r[dim].is_positive()) {
        return None;
    }
    Some((normals, rays))
}

/// No rational point satisfies the inequalities (assumed pointed).
pub fn is_rationally_empty(ineqs: &[Ineq], dim: usize) -> bool {
    homogenized(ineqs, dim).is_none()
}

pub fn integer_points(ineqs: &[Ineq], dim: usize) -> Vec<Piece> {
    let Some((normals, rays)) = homogenized(ineqs, dim) else {
        return Vec::new();
    };
    let all: Vec<&ZVec> = rays.iter().collect();
    let cone_dim = rank_of(&all);
    let mut simplices = Vec::new();
    let face: Vec<usize> = (0..rays.len()).collect();
    triangulate(&face, cone_dim, &rays, &normals, &mut simplices);

    let q = generic_interior_point(&rays, &simplices);
    let mut pieces = Vec::new();
    for s in &simplices {
        let gens: Vec<&ZVec> = s.iter().map(|&i| &rays[i]).collect();
        let lam = coefficients(&gens, &q);
        let open: Vec<bool> = lam.iter().map(|l| l.is_negative()).collect();
        for pi in parallelepiped_points(&gens, &open) {
            let height = &pi[dim];
            let free: Vec<ZVec> = gens
                .iter()
                .filter(|g| g[dim].is_zero())
                .map(|g| g[..dim].to_vec())
                .collect();
            if height.is_one() {
                pieces.push(Piece {
                    base: pi[..dim].to_vec(),
                    periods: free,
                });
            } else if height.is_zero() {
                for g in gens.iter().filter(|g| g[dim].is_one()) {
                    let base = pi[..dim].iter().zip(&g[..dim]).map(|(a, b)| a + b).collect();
                    pieces.push(Piece {
                        base,
                        periods: free.clone(),
                    });
                }
            }
        }
    }
    pieces
}

/// A positive combination of all rays avoiding every facet hyperplane of
/// every simplicial cone.
fn generic_interior_point(rays: &[ZVec], simplices: &[Vec<usize>]) -> Vec<Rational> {
    let n = rays[0].len();
    for attempt in 1i64.. {
        let mut q = vec![Rational::zero(); n];
        for (i, r) in rays.iter().enumerate() {
            let w = Rational::one() + Rational::new(BigInt::from((i as i64 + 1) * (i as i64 + 2)), BigInt::from(97 * attempt + 13));
            for (qi, ri) in q.iter_mut().zip(r) {
                *qi += &w * Rational::from_integer(ri.clone());
            }
        }
        let ok = simplices.iter().all(|s| {
            let gens: Vec<&ZVec> = s.iter().map(|&i| &rays[i]).collect();
            coefficients(&gens, &q).iter().all(|l| !l.is_zero())
        });
        if ok {
            return q;
        }
    }
    unreachable!()
}

/// Lattice points `Σ λ_i g_i` with `λ_i ∈ [0, 1)`, or `(0, 1]` where
/// `open[i]`, over the integer points of the span of `gens`.
fn parallelepiped_points(gens: &[&ZVec], open: &[bool]) -> Vec<ZVec> {
    let n = gens[0].len();
    let d = gens.len();
    // integer points of the span: kernel of the orthogonal complement
    let grows: Vec<ZVec> = gens.iter().map(|g| (*g).clone()).collect();
    let (_, comp) = solve_integer(&grows, n, &vec![BigInt::zero(); d]).expect("homogeneous");
    let basis: Vec<ZVec> = if comp.is_empty() {
        (0..n)
            .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    } else {
        let (_, k) = solve_integer(&comp, n, &vec![BigInt::zero(); comp.len()]).expect("homogeneous");
        k
    };
    debug_assert_eq!(basis.len(), d);
    let brows: Vec<ZVec> = (0..n).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
    // gens = basis · t
    let t: Vec<ZVec> = gens
        .iter()
        .map(|g| solve_integer(&brows, d, g).expect("generator in span").0)
        .collect();
    let trows: Vec<ZVec> = (0..d).map(|i| t.iter().map(|c| c[i].clone()).collect()).collect();
    let (h, _, _) = column_echelon(&trows, d);
    let mut out = Vec::new();
    let mut z = vec![BigInt::zero(); d];
    loop {
        let y: ZVec = (0..n).map(|i| basis.iter().zip(&z).map(|(b, zi)| &b[i] * zi).sum()).collect();
        let lam = coefficients(gens, &to_rational(&y));
        let mut p = vec![Rational::zero(); n];
        for (i, l) in lam.iter().enumerate() {
            let mut f = l - l.floor();
            if open[i] && f.is_zero() {
                f = Rational::one();
            }
            for (pk, gk) in p.iter_mut().zip(gens[i].iter()) {
                *pk += &f * Rational::from_integer(gk.clone());
            }
        }
        out.push(p.into_iter().map(|v| v.to_integer()).collect());
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            z[i] += 1;
            if z[i] < h[i][i] {
                break;
            }
            z[i] = BigInt::zero();
            i += 1;
        }
    }
}
