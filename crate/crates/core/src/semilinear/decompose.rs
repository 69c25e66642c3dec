//! Semi-simple decomposition. Linear sets are first split until their
//! periods are independent; the union is then made disjoint left to right,
//! each difference being a finite union of lattice polyhedra that are
//! triangulated back into simple sets.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::cones::{self, Ineq};
use super::lattice::{dot, AffineLattice, ZVec};
use super::{LinearSet, SemiSimpleSet, SemilinearSet};
use crate::error::{Error, Result};
use crate::exactmath::linalg;
use crate::exactmath::rational::{from_big, Rational};

pub const DEFAULT_DEPTH_CAP: usize = 12;

fn big(v: &[u64]) -> ZVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn small(v: &[BigInt]) -> Result<Vec<u64>> {
    v.iter()
        .map(|x| {
            x.to_u64()
                .ok_or_else(|| Error::Consistency(format!("coordinate {x} outside ℕ")))
        })
        .collect()
}

/// Splits `l` into linear sets with independent periods whose union is `l`.
fn simplify(l: LinearSet, depth: usize, cap: usize, out: &mut Vec<LinearSet>) -> Result<()> {
    if l.is_simple() {
        out.push(l);
        return Ok(());
    }
    if depth >= cap {
        return Err(Error::DepthExceeded { cap });
    }
    let r = l.periods.len();
    let rows: linalg::Matrix = (0..l.dim())
        .map(|i| l.periods.iter().map(|p| Rational::from_integer(BigInt::from(p[i]))).collect())
        .collect();
    let z = linalg::primitive_integer(&linalg::kernel(&rows, r)[0]);
    // Σ_{z>0} z_i p_i = Σ_{z<0} −z_i p_i; every point has a representation
    // in which some period on the cheaper side is used fewer than |z_i| times
    let pos: BigInt = z.iter().filter(|v| v.is_positive()).sum();
    let neg: BigInt = z.iter().filter(|v| v.is_negative()).map(|v| -v).sum();
    let side: Vec<(usize, u64)> = z
        .iter()
        .enumerate()
        .filter(|(_, v)| if pos <= neg { v.is_positive() } else { v.is_negative() })
        .map(|(i, v)| (i, v.abs().to_u64().expect("small relation")))
        .collect();
    for (i, bound) in side {
        let rest: Vec<Vec<u64>> = l
            .periods
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p.clone())
            .collect();
        for c in 0..bound {
            let base = l.base.iter().zip(&l.periods[i]).map(|(b, p)| b + c * p).collect();
            simplify(LinearSet { base, periods: rest.clone() }, depth + 1, cap, out)?;
        }
    }
    Ok(())
}

/// Lattice points satisfying `a·x ≥ c` for every inequality.
#[derive(Clone, Debug)]
struct ZPoly {
    lat: AffineLattice,
    ineqs: Vec<Ineq>,
}

fn normalized(a: ZVec, c: BigInt) -> Ineq {
    let g = a.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g.is_zero() {
        return (a, c);
    }
    let c = Integer::div_ceil(&c, &g);
    (a.into_iter().map(|v| v / &g).collect(), c)
}

impl ZPoly {
    /// `l` with independent periods: the lattice `base + ℤ·periods` cut by
    /// the dual functionals of the periods.
    fn of_simple(l: &LinearSet) -> ZPoly {
        let base = big(&l.base);
        let periods: Vec<ZVec> = l.periods.iter().map(|p| big(p)).collect();
        let lat = AffineLattice::new(base.clone(), &periods);
        let r = periods.len();
        let mut ineqs = Vec::new();
        if r > 0 {
            let pr: Vec<Vec<Rational>> = periods.iter().map(|p| p.iter().cloned().map(from_big).collect()).collect();
            let gram: linalg::Matrix = (0..r)
                .map(|i| (0..r).map(|j| pr[i].iter().zip(&pr[j]).map(|(a, b)| a * b).sum()).collect())
                .collect();
            let inv = linalg::inverse(&gram).expect("independent periods");
            for i in 0..r {
                let f: Vec<Rational> = (0..l.dim())
                    .map(|c| (0..r).map(|j| &inv[j][i] * &pr[j][c]).sum())
                    .collect();
                let f = linalg::primitive_integer(&f);
                let c = dot(&f, &base);
                ineqs.push((f, c));
            }
        }
        ZPoly { lat, ineqs }
    }

    fn with(&self, lat: AffineLattice, extra: impl IntoIterator<Item = Ineq>) -> ZPoly {
        let mut ineqs = self.ineqs.clone();
        for (a, c) in extra {
            let e = normalized(a, c);
            if !ineqs.contains(&e) {
                ineqs.push(e);
            }
        }
        ZPoly { lat, ineqs }
    }

    /// Inequalities in the coordinates of the lattice basis.
    fn local(&self) -> Vec<Ineq> {
        let set: BTreeSet<Ineq> = self
            .ineqs
            .iter()
            .map(|(a, c)| {
                let la: ZVec = self.lat.basis.iter().map(|b| dot(a, b)).collect();
                normalized(la, c - dot(a, &self.lat.point))
            })
            .collect();
        set.into_iter().collect()
    }

    fn is_empty(&self) -> bool {
        cones::is_rationally_empty(&self.local(), self.lat.rank())
    }

    fn meets(&self, other: &ZPoly) -> bool {
        match self.lat.intersect(&other.lat) {
            None => false,
            Some(lat) => !self.with(lat, other.ineqs.iter().cloned()).is_empty(),
        }
    }

    /// `self \ z` as a disjoint list of nonempty pieces.
    fn minus(&self, z: &ZPoly) -> Vec<ZPoly> {
        let mut out = Vec::new();
        let push = |p: ZPoly, out: &mut Vec<ZPoly>| {
            if !p.is_empty() {
                out.push(p);
            }
        };
        // outside the lattice of z
        let mut cur = self.lat.clone();
        let mut inside = true;
        for (f, g) in z.lat.equations() {
            let moving = cur.basis.iter().any(|b| !dot(&f, b).is_zero());
            if !moving {
                if dot(&f, &cur.point) != g {
                    push(self.with(cur.clone(), []), &mut out);
                    inside = false;
                    break;
                }
                continue;
            }
            let neg: ZVec = f.iter().map(|v| -v).collect();
            push(self.with(cur.clone(), [(f.clone(), &g + 1)]), &mut out);
            push(self.with(cur.clone(), [(neg, -&g + 1)]), &mut out);
            match cur.meet_hyperplane(&f, &g) {
                Some(next) => cur = next,
                None => {
                    inside = false;
                    break;
                }
            }
        }
        if !inside {
            return out;
        }
        let Some(common) = cur.intersect(&z.lat) else {
            push(self.with(cur, []), &mut out);
            return out;
        };
        for coset in cur.other_cosets(&common) {
            push(self.with(coset, []), &mut out);
        }
        // on the lattice of z, violating one of its inequalities
        let mut held: Vec<Ineq> = Vec::new();
        for (a, c) in &z.ineqs {
            let neg: ZVec = a.iter().map(|v| -v).collect();
            let mut extra = held.clone();
            extra.push((neg, BigInt::from(1) - c));
            push(self.with(common.clone(), extra), &mut out);
            held.push((a.clone(), c.clone()));
        }
        out
    }

    fn simple_sets(&self) -> Result<Vec<LinearSet>> {
        let mut out = Vec::new();
        for piece in cones::integer_points(&self.local(), self.lat.rank()) {
            let base = self.lat.at(&piece.base);
            let periods = piece.periods.iter().map(|g| self.lat.linear(g)).collect::<Vec<_>>();
            out.push(LinearSet {
                base: small(&base)?,
                periods: periods.iter().map(|p| small(p)).collect::<Result<_>>()?,
            });
        }
        Ok(out)
    }
}

/// Largest number of the simple sets `sets` sharing a common point.
pub fn max_overlap(sets: &[LinearSet]) -> usize {
    let polys: Vec<ZPoly> = sets.iter().map(ZPoly::of_simple).collect();
    fn grow(polys: &[ZPoly], from: usize, cur: &ZPoly, size: usize, best: &mut usize) {
        *best = (*best).max(size);
        for i in from..polys.len() {
            if size + polys.len() - i <= *best {
                return;
            }
            let Some(lat) = cur.lat.intersect(&polys[i].lat) else { continue };
            let next = cur.with(lat, polys[i].ineqs.iter().cloned());
            if !next.is_empty() && !cones::integer_points(&next.local(), next.lat.rank()).is_empty() {
                grow(polys, i + 1, &next, size + 1, best);
            }
        }
    }
    let mut best = 0;
    for (i, p) in polys.iter().enumerate() {
        grow(&polys, i + 1, p, 1, &mut best);
    }
    best
}

/// Rewrites `s` as a disjoint union of simple linear sets. `cap` bounds the
/// splitting depth of dependent periods.
pub fn decompose_semisimple(s: &SemilinearSet, cap: usize) -> Result<SemiSimpleSet> {
    let mut simple = Vec::new();
    for c in &s.components {
        simplify(c.clone(), 0, cap, &mut simple)?;
    }
    let mut seen = BTreeSet::new();
    simple.retain(|l| seen.insert(l.clone()));
    let polys: Vec<ZPoly> = simple.iter().map(ZPoly::of_simple).collect();
    let mut out: Vec<LinearSet> = Vec::new();
    for (j, l) in simple.iter().enumerate() {
        let earlier: Vec<&ZPoly> = polys[..j].iter().filter(|z| polys[j].meets(z)).collect();
        if earlier.is_empty() {
            out.push(l.clone());
            continue;
        }
        let mut pieces = vec![polys[j].clone()];
        for z in earlier {
            pieces = pieces.iter().flat_map(|p| p.minus(z)).collect();
        }
        for p in pieces {
            out.extend(p.simple_sets()?);
        }
    }
    SemiSimpleSet::new(s.dim(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semilinear::for_each_point;

    fn ls(base: &[u64], periods: &[&[u64]]) -> LinearSet {
        LinearSet::new(base.to_vec(), periods.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    fn check(s: &SemilinearSet, bound: u64) -> SemiSimpleSet {
        let d = decompose_semisimple(s, DEFAULT_DEPTH_CAP).unwrap();
        for c in d.components() {
            assert!(c.is_simple(), "{c}");
        }
        for_each_point(s.dim(), bound, |v| {
            let want = s.components.iter().any(|c| c.contains(v));
            let got: u64 = d.components().iter().map(|c| c.representations(v, 2)).sum();
            assert_eq!(got, want as u64, "{v:?} in\n{d}");
            true
        });
        d
    }

    #[test]
    fn identity_and_absorption() {
        let s = SemilinearSet::new(2, vec![ls(&[1, 0], &[&[1, 2]])]).unwrap();
        assert_eq!(check(&s, 10).components(), &s.components[..]);
        let s = SemilinearSet::new(1, vec![ls(&[0], &[&[1]]), ls(&[0], &[&[2]])]).unwrap();
        let d = check(&s, 50);
        assert_eq!(d.components(), &[ls(&[0], &[&[1]])]);
    }

    #[test]
    fn dependent_periods() {
        let s = SemilinearSet::new(2, vec![ls(&[0, 0], &[&[1, 1], &[2, 2]])]).unwrap();
        check(&s, 20);
        let s = SemilinearSet::new(2, vec![ls(&[0, 0], &[&[1, 0], &[0, 1], &[1, 1]])]).unwrap();
        check(&s, 20);
        let s = SemilinearSet::new(2, vec![ls(&[1, 0], &[&[2, 1], &[3, 0], &[0, 2], &[1, 1]])]).unwrap();
        check(&s, 20);
    }

    #[test]
    fn overlapping_unions() {
        let s = SemilinearSet::new(
            2,
            vec![
                ls(&[0, 0], &[&[1, 2], &[2, 1]]),
                ls(&[1, 1], &[&[1, 0], &[0, 3]]),
                ls(&[0, 0], &[&[1, 1]]),
                ls(&[3, 3], &[]),
                ls(&[2, 0], &[&[1, 1], &[2, 0]]),
            ],
        )
        .unwrap();
        check(&s, 20);
        let s = SemilinearSet::new(
            3,
            vec![
                ls(&[0, 0, 0], &[&[1, 1, 0], &[0, 1, 1]]),
                ls(&[0, 0, 0], &[&[1, 0, 1], &[1, 1, 1]]),
                ls(&[1, 0, 0], &[&[1, 2, 1]]),
            ],
        )
        .unwrap();
        check(&s, 8);
    }

    #[test]
    fn overlaps() {
        let sets = [ls(&[0, 0], &[&[1, 0]]), ls(&[0, 0], &[&[0, 1]]), ls(&[2, 0], &[&[1, 1]])];
        assert_eq!(max_overlap(&sets), 2);
        let sets = [ls(&[0], &[&[2]]), ls(&[1], &[&[2]])];
        assert_eq!(max_overlap(&sets), 1);
        assert_eq!(max_overlap(&[]), 0);
        let sets = [ls(&[0], &[&[2]]), ls(&[0], &[&[3]]), ls(&[1], &[&[5]])];
        assert_eq!(max_overlap(&sets), 3);
    }

    #[test]
    fn depth_cap_is_reported() {
        let s = SemilinearSet::new(2, vec![ls(&[0, 0], &[&[1, 0], &[0, 1], &[1, 1], &[2, 1]])]).unwrap();
        assert_eq!(decompose_semisimple(&s, 1).unwrap_err(), Error::DepthExceeded { cap: 1 });
    }
}
