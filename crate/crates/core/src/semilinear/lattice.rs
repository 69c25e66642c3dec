//! Integer lattices: column echelon reduction, linear Diophantine systems
//! and affine lattices with their coset structure.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type ZVec = Vec<BigInt>;

#[cfg(test)]
pub fn zvec(v: &[i64]) -> ZVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [BigInt], q: &BigInt, x: &[BigInt]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi -= q * xi;
    }
}

/// Column echelon form by unimodular column operations.
///
/// `a` is given by rows (`m × n`). Returns `(h, u, pivots)` with `a·u = h`,
/// `u` unimodular, and `pivots[j]` the row of the leading entry of column
/// `j`; columns `pivots.len()..n` of `h` are zero. Leading entries are
/// positive and rows of pivots strictly increase.
pub fn column_echelon(a: &[ZVec], n: usize) -> (Vec<ZVec>, Vec<ZVec>, Vec<usize>) {
    let m = a.len();
    // work column-major
    let mut cols: Vec<ZVec> = (0..n).map(|j| (0..m).map(|i| a[i][j].clone()).collect()).collect();
    let mut u: Vec<ZVec> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut c = 0;
    for r in 0..m {
        if c == n {
            break;
        }
        loop {
            let best = (c..n)
                .filter(|&j| !cols[j][r].is_zero())
                .min_by_key(|&j| cols[j][r].abs());
            let Some(b) = best else { break };
            cols.swap(c, b);
            u.swap(c, b);
            let mut done = true;
            for j in c + 1..n {
                if cols[j][r].is_zero() {
                    continue;
                }
                let q = cols[j][r].div_floor(&cols[c][r]);
                let (head, tail) = cols.split_at_mut(j);
                axpy(&mut tail[0], &q, &head[c]);
                let (uh, ut) = u.split_at_mut(j);
                axpy(&mut ut[0], &q, &uh[c]);
                if !cols[j][r].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if c < n && !cols[c][r].is_zero() {
            if cols[c][r].is_negative() {
                for v in cols[c].iter_mut().chain(u[c].iter_mut()) {
                    *v = -&*v;
                }
            }
            pivots.push(r);
            c += 1;
        }
    }
    let h: Vec<ZVec> = (0..m).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
    let u: Vec<ZVec> = (0..n).map(|i| (0..n).map(|j| u[j][i].clone()).collect()).collect();
    (h, u, pivots)
}

/// All integer solutions of `a·y = b` (`a` by rows, `n` unknowns): a
/// particular solution and a basis of the integer kernel.
pub fn solve_integer(a: &[ZVec], n: usize, b: &[BigInt]) -> Option<(ZVec, Vec<ZVec>)> {
    let (h, u, pivots) = column_echelon(a, n);
    let mut w = vec![BigInt::zero(); n];
    for (j, &r) in pivots.iter().enumerate() {
        let partial: BigInt = (0..j).map(|l| &h[r][l] * &w[l]).sum();
        let rest = &b[r] - partial;
        if !rest.is_multiple_of(&h[r][j]) {
            return None;
        }
        w[j] = rest / &h[r][j];
    }
    for (r, row) in h.iter().enumerate() {
        if dot(row, &w) != b[r] {
            return None;
        }
    }
    let apply = |w: &[BigInt]| -> ZVec { (0..n).map(|i| dot(&u[i], w)).collect() };
    let particular = apply(&w);
    let kernel = (pivots.len()..n)
        .map(|j| (0..n).map(|i| u[i][j].clone()).collect())
        .collect();
    Some((particular, kernel))
}

/// A basis (as a list of vectors) of the lattice generated by `gens`.
pub fn lattice_basis(gens: &[ZVec], dim: usize) -> Vec<ZVec> {
    if gens.is_empty() {
        return Vec::new();
    }
    let rows: Vec<ZVec> = (0..dim).map(|i| gens.iter().map(|g| g[i].clone()).collect()).collect();
    let (h, _, pivots) = column_echelon(&rows, gens.len());
    (0..pivots.len()).map(|j| (0..dim).map(|i| h[i][j].clone()).collect()).collect()
}

/// `point + ℤ·basis` with linearly independent basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLattice {
    pub point: ZVec,
    pub basis: Vec<ZVec>,
}

impl AffineLattice {
    pub fn new(point: ZVec, gens: &[ZVec]) -> Self {
        let dim = point.len();
        AffineLattice {
            basis: lattice_basis(gens, dim),
            point,
        }
    }

    pub fn dim(&self) -> usize {
        self.point.len()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// `point + Σ y_i·basis_i`
    pub fn at(&self, y: &[BigInt]) -> ZVec {
        let mut x = self.point.clone();
        for (b, yi) in self.basis.iter().zip(y) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += yi * bi;
            }
        }
        x
    }

    /// Applies the linear part only.
    pub fn linear(&self, y: &[BigInt]) -> ZVec {
        let mut x = vec![BigInt::zero(); self.dim()];
        for (b, yi) in self.basis.iter().zip(y) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += yi * bi;
            }
        }
        x
    }

    fn basis_rows(&self) -> Vec<ZVec> {
        (0..self.dim())
            .map(|i| self.basis.iter().map(|b| b[i].clone()).collect())
            .collect()
    }

    /// Integer coordinates of `x − point`, if `x` lies on the lattice.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<ZVec> {
        let rhs: ZVec = x.iter().zip(&self.point).map(|(a, b)| a - b).collect();
        self.linear_coordinates(&rhs)
    }

    fn linear_coordinates(&self, v: &[BigInt]) -> Option<ZVec> {
        solve_integer(&self.basis_rows(), self.rank(), v).map(|(y, _)| y)
    }

    pub fn intersect(&self, other: &AffineLattice) -> Option<AffineLattice> {
        let r1 = self.rank();
        let r2 = other.rank();
        // basis1·y − basis2·z = point2 − point1
        let rows: Vec<ZVec> = (0..self.dim())
            .map(|i| {
                self.basis
                    .iter()
                    .map(|b| b[i].clone())
                    .chain(other.basis.iter().map(|b| -&b[i]))
                    .collect()
            })
            .collect();
        let rhs: ZVec = other.point.iter().zip(&self.point).map(|(a, b)| a - b).collect();
        let (sol, kernel) = solve_integer(&rows, r1 + r2, &rhs)?;
        let point = self.at(&sol[..r1]);
        let gens: Vec<ZVec> = kernel.iter().map(|k| self.linear(&k[..r1])).collect();
        Some(AffineLattice::new(point, &gens))
    }

    /// Points with `f·x = g`.
    pub fn meet_hyperplane(&self, f: &[BigInt], g: &BigInt) -> Option<AffineLattice> {
        let row: ZVec = self.basis.iter().map(|b| dot(f, b)).collect();
        let rhs = g - dot(f, &self.point);
        let (sol, kernel) = solve_integer(&[row], self.rank(), &[rhs])?;
        let point = self.at(&sol);
        let gens: Vec<ZVec> = kernel.iter().map(|k| self.linear(k)).collect();
        Some(AffineLattice::new(point, &gens))
    }

    /// Integer normals `f` with `f·x = f·point` cutting out the affine span.
    pub fn equations(&self) -> Vec<(ZVec, BigInt)> {
        let n = self.dim();
        let rows: Vec<ZVec> = self.basis.clone();
        let zero = vec![BigInt::zero(); rows.len()];
        let (_, kernel) = solve_integer(&rows, n, &zero).expect("homogeneous system");
        kernel
            .into_iter()
            .map(|f| {
                let g = dot(&f, &self.point);
                (f, g)
            })
            .collect()
    }

    /// Cosets of `sub` (a finite-index sublattice of the same rank) inside
    /// `self`, other than `sub` itself.
    pub fn other_cosets(&self, sub: &AffineLattice) -> Vec<AffineLattice> {
        let r = self.rank();
        debug_assert_eq!(r, sub.rank());
        let t: Vec<ZVec> = sub
            .basis
            .iter()
            .map(|b| self.linear_coordinates(b).expect("sublattice"))
            .collect();
        // t[j] is column j
        let rows: Vec<ZVec> = (0..r).map(|i| t.iter().map(|c| c[i].clone()).collect()).collect();
        let (h, _, _) = column_echelon(&rows, r);
        let reduce = |mut y: ZVec| -> ZVec {
            for i in 0..r {
                let q = y[i].div_floor(&h[i][i]);
                for l in i..r {
                    let d = &q * &h[l][i];
                    y[l] -= d;
                }
            }
            y
        };
        let own = reduce(self.coordinates(&sub.point).expect("sublattice point"));
        let mut out = Vec::new();
        let mut z = vec![BigInt::zero(); r];
        loop {
            if z != own {
                out.push(AffineLattice {
                    point: self.at(&z),
                    basis: sub.basis.clone(),
                });
            }
            let mut i = 0;
            loop {
                if i == r {
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
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diophantine_solutions() {
        // 2y1 + 4y2 = 6
        let (p, k) = solve_integer(&[zvec(&[2, 4])], 2, &zvec(&[6])).unwrap();
        assert_eq!(dot(&zvec(&[2, 4]), &p), BigInt::from(6));
        assert_eq!(k.len(), 1);
        assert_eq!(dot(&zvec(&[2, 4]), &k[0]), BigInt::zero());
        assert!(solve_integer(&[zvec(&[2, 4])], 2, &zvec(&[3])).is_none());
    }

    #[test]
    fn lattice_intersection_and_cosets() {
        let a = AffineLattice::new(zvec(&[0, 0]), &[zvec(&[2, 0]), zvec(&[0, 1])]);
        let b = AffineLattice::new(zvec(&[1, 0]), &[zvec(&[3, 0]), zvec(&[0, 2])]);
        let c = a.intersect(&b).unwrap();
        // x1 ≡ 4 (mod 6), x2 even
        assert!(c.coordinates(&zvec(&[4, 2])).is_some());
        assert!(c.coordinates(&zvec(&[10, 0])).is_some());
        assert!(c.coordinates(&zvec(&[4, 1])).is_none());
        let others = a.other_cosets(&c);
        assert_eq!(others.len(), 5);
        let line = a.meet_hyperplane(&zvec(&[1, -1]), &BigInt::zero()).unwrap();
        assert_eq!(line.rank(), 1);
        assert!(line.coordinates(&zvec(&[2, 2])).is_some());
        assert!(line.coordinates(&zvec(&[1, 1])).is_none());
        assert_eq!(line.equations().len(), 1);
    }
}
