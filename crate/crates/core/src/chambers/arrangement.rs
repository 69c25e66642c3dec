use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;

use crate::error::{check_dim, Error, Result};

/// A hyperplane through the origin, stored by its normalized normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    normal: Vec<i64>,
}

impl Hyperplane {
    /// Normalizes to a primitive vector whose first nonzero entry is positive.
    pub fn new(mut normal: Vec<i64>) -> Result<Self> {
        let g = normal.iter().fold(0i64, |acc, &v| acc.gcd(&v));
        if g == 0 {
            return Err(Error::Argument("hyperplane normal must be nonzero".into()));
        }
        let lead = *normal.iter().find(|&&v| v != 0).unwrap();
        let g = if lead < 0 { -g } else { g };
        for v in normal.iter_mut() {
            *v /= g;
        }
        Ok(Hyperplane { normal })
    }

    pub fn coordinate(t: usize, i: usize) -> Self {
        let mut normal = vec![0; t];
        normal[i] = 1;
        Hyperplane { normal }
    }

    pub fn normal(&self) -> &[i64] {
        &self.normal
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn eval(&self, x: &[i64]) -> i128 {
        self.normal
            .iter()
            .zip(x)
            .map(|(&n, &v)| n as i128 * v as i128)
            .sum()
    }
}

/// An ordered, duplicate-free family of hyperplanes containing the
/// coordinate planes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    dim: usize,
    planes: Vec<Hyperplane>,
    flat: Vec<i64>,
    seen: HashSet<Vec<i64>>,
}

impl Arrangement {
    pub fn coordinate(dim: usize) -> Self {
        let mut arr = Arrangement {
            dim,
            planes: Vec::new(),
            flat: Vec::new(),
            seen: HashSet::new(),
        };
        for i in 0..dim {
            arr.push(Hyperplane::coordinate(dim, i));
        }
        arr
    }

    pub fn with_planes(dim: usize, planes: impl IntoIterator<Item = Hyperplane>) -> Result<Self> {
        let mut arr = Self::coordinate(dim);
        for h in planes {
            check_dim(dim, h.dim())?;
            arr.push(h);
        }
        Ok(arr)
    }

    /// Appends `h` unless already present; returns whether it was new.
    pub fn push(&mut self, h: Hyperplane) -> bool {
        debug_assert_eq!(h.dim(), self.dim);
        if !self.seen.insert(h.normal.clone()) {
            return false;
        }
        self.flat.extend_from_slice(&h.normal);
        self.planes.push(h);
        true
    }

    /// Ordered union: the planes of `self`, then the new planes of `other`.
    pub fn union(&self, other: &Arrangement) -> Result<Arrangement> {
        check_dim(self.dim, other.dim)?;
        let mut out = self.clone();
        for h in &other.planes {
            out.push(h.clone());
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    pub fn planes(&self) -> &[Hyperplane] {
        &self.planes
    }

    pub fn contains(&self, h: &Hyperplane) -> bool {
        self.seen.contains(&h.normal)
    }

    fn signs(&self, x: &[i64]) -> Vec<i8> {
        let t = self.dim;
        self.flat
            .chunks_exact(t.max(1))
            .map(|n| {
                let v: i128 = n.iter().zip(x).map(|(&a, &b)| a as i128 * b as i128).sum();
                v.signum() as i8
            })
            .collect()
    }
}

/// Signs of the arrangement's linear forms at a point, in arrangement order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(1),
                '0' => Ok(0),
                '-' | '−' => Ok(-1),
                other => Err(Error::Argument(format!("bad sign character {other:?}"))),
            })
            .collect::<Result<Vec<i8>>>()
            .map(SignVector)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            let c = match s {
                1 => '+',
                0 => '0',
                _ => '-',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub fn sign_vector(arr: &Arrangement, x: &[i64]) -> Result<SignVector> {
    check_dim(arr.dim, x.len())?;
    Ok(SignVector(arr.signs(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        assert_eq!(Hyperplane::new(vec![-2, 4]).unwrap().normal(), &[1, -2]);
        assert_eq!(Hyperplane::new(vec![0, -3]).unwrap().normal(), &[0, 1]);
        assert!(Hyperplane::new(vec![0, 0]).is_err());
    }

    #[test]
    fn coordinate_signs() {
        let arr = Arrangement::coordinate(2);
        assert_eq!(sign_vector(&arr, &[0, 0]).unwrap().to_string(), "00");
        assert_eq!(sign_vector(&arr, &[1, 0]).unwrap().to_string(), "+0");
        let arr = Arrangement::with_planes(2, [Hyperplane::new(vec![1, -1]).unwrap()]).unwrap();
        assert_eq!(sign_vector(&arr, &[2, 1]).unwrap().to_string(), "+++");
        assert!(sign_vector(&arr, &[1]).is_err());
    }

    #[test]
    fn union_keeps_coordinate_planes_once() {
        let a = Arrangement::with_planes(2, [Hyperplane::new(vec![1, -1]).unwrap()]).unwrap();
        let b = Arrangement::with_planes(2, [Hyperplane::new(vec![1, -2]).unwrap()]).unwrap();
        let u = a.union(&b).unwrap();
        assert_eq!(u.len(), 4);
        assert_eq!(SignVector::parse("+0-").unwrap().0, vec![1, 0, -1]);
    }
}
