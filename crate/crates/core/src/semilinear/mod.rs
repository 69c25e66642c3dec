//! Linear, simple, semilinear and semi-simple subsets of ℕ^k, and the
//! decomposition of a semilinear set into disjoint simple sets.

mod cones;
mod decompose;
mod lattice;

use std::fmt;

use crate::error::{check_dim, Error, Result};
use crate::exactmath::linalg;

pub use decompose::{decompose_semisimple, max_overlap, DEFAULT_DEPTH_CAP};

/// `base + ℕ·periods`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearSet {
    pub base: Vec<u64>,
    pub periods: Vec<Vec<u64>>,
}

impl LinearSet {
    pub fn new(base: Vec<u64>, periods: Vec<Vec<u64>>) -> Result<Self> {
        let k = base.len();
        let mut clean: Vec<Vec<u64>> = Vec::new();
        for p in periods {
            check_dim(k, p.len())?;
            if p.iter().all(|&v| v == 0) {
                return Err(Error::Invariant("zero period".into()));
            }
            if !clean.contains(&p) {
                clean.push(p);
            }
        }
        Ok(LinearSet { base, periods: clean })
    }

    pub fn singleton(base: Vec<u64>) -> Self {
        LinearSet { base, periods: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    /// Periods are linearly independent over the rationals.
    pub fn is_simple(&self) -> bool {
        let rows: Vec<Vec<i64>> = self
            .periods
            .iter()
            .map(|p| p.iter().map(|&v| v as i64).collect())
            .collect();
        linalg::independent(&rows)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.representations(v, 1) > 0
    }

    /// Number of multiplicity vectors `m` with `base + Σ m_i·p_i = v`,
    /// counted up to `limit`.
    pub fn representations(&self, v: &[u64], limit: u64) -> u64 {
        if v.len() != self.dim() || v.iter().zip(&self.base).any(|(a, b)| a < b) {
            return 0;
        }
        let rest: Vec<u64> = v.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        let mut found = 0;
        count_reps(&self.periods, rest, limit, &mut found);
        found
    }
}

fn count_reps(periods: &[Vec<u64>], rest: Vec<u64>, limit: u64, found: &mut u64) {
    if *found >= limit {
        return;
    }
    let Some((p, tail)) = periods.split_first() else {
        if rest.iter().all(|&r| r == 0) {
            *found += 1;
        }
        return;
    };
    let max = p
        .iter()
        .zip(&rest)
        .filter(|(&pi, _)| pi > 0)
        .map(|(pi, r)| r / pi)
        .min()
        .unwrap_or(0);
    let mut cur = rest;
    for m in 0..=max {
        if m > 0 {
            for (c, pi) in cur.iter_mut().zip(p) {
                *c -= pi;
            }
        }
        count_reps(tail, cur.clone(), limit, found);
        if *found >= limit {
            return;
        }
    }
}

impl fmt::Display for LinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        write!(f, "base: {} ; periods:", join(&self.base))?;
        let ps: Vec<String> = self.periods.iter().map(|p| join(p)).collect();
        if !ps.is_empty() {
            write!(f, " {}", ps.join(" | "))?;
        }
        Ok(())
    }
}

/// A finite union of linear sets of one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearSet {
    dim: usize,
    pub components: Vec<LinearSet>,
}

impl SemilinearSet {
    pub fn new(dim: usize, components: Vec<LinearSet>) -> Result<Self> {
        for c in &components {
            check_dim(dim, c.dim())?;
        }
        Ok(SemilinearSet { dim, components })
    }

    pub fn empty(dim: usize) -> Self {
        SemilinearSet { dim, components: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (dim, components) = parse_components(text)?;
        SemilinearSet::new(dim, components)
    }
}

impl fmt::Display for SemilinearSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {}", self.dim)?;
        for c in &self.components {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

pub fn sl_member(s: &SemilinearSet, v: &[u64]) -> Result<bool> {
    check_dim(s.dim, v.len())?;
    Ok(s.components.iter().any(|c| c.contains(v)))
}

pub fn is_simple(l: &LinearSet) -> bool {
    l.is_simple()
}

/// A finite disjoint union of simple linear sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiSimpleSet {
    dim: usize,
    components: Vec<LinearSet>,
}

impl SemiSimpleSet {
    /// Checks simplicity of every component; disjointness is the caller's
    /// responsibility (see [`SemiSimpleSet::check_disjoint_on_box`]).
    pub fn new(dim: usize, mut components: Vec<LinearSet>) -> Result<Self> {
        for c in &components {
            check_dim(dim, c.dim())?;
            if !c.is_simple() {
                return Err(Error::Invariant(format!("component {c} is not simple")));
            }
        }
        components.sort();
        Ok(SemiSimpleSet { dim, components })
    }

    pub fn empty(dim: usize) -> Self {
        SemiSimpleSet { dim, components: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[LinearSet] {
        &self.components
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.components.iter().any(|c| c.contains(v))
    }

    pub fn to_semilinear(&self) -> SemilinearSet {
        SemilinearSet {
            dim: self.dim,
            components: self.components.clone(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (dim, components) = parse_components(text)?;
        SemiSimpleSet::new(dim, components)
    }

    /// Every point of `[0, bound]^k` lies in at most one component, with
    /// exactly one representation there. Returns the first offending point.
    pub fn check_disjoint_on_box(&self, bound: u64) -> Option<Vec<u64>> {
        let mut bad = None;
        for_each_point(self.dim, bound, |v| {
            let total: u64 = self.components.iter().map(|c| c.representations(v, 2)).sum();
            if total > 1 {
                bad = Some(v.to_vec());
                return false;
            }
            true
        });
        bad
    }
}

impl fmt::Display for SemiSimpleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_semilinear().fmt(f)
    }
}

/// Visits `[0, bound]^dim`, first coordinate fastest, until `visit`
/// returns false.
pub fn for_each_point(dim: usize, bound: u64, mut visit: impl FnMut(&[u64]) -> bool) {
    let mut v = vec![0u64; dim];
    loop {
        if !visit(&v) {
            return;
        }
        let mut i = 0;
        loop {
            if i == dim {
                return;
            }
            if v[i] < bound {
                v[i] += 1;
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

fn parse_vector(text: &str, dim: usize, line: usize) -> Result<Vec<u64>> {
    let v: Vec<u64> = text
        .split_whitespace()
        .map(|t| {
            t.parse::<u64>().map_err(|_| Error::Parse {
                line,
                message: format!("{t:?} is not a natural number"),
            })
        })
        .collect::<Result<_>>()?;
    if v.len() != dim {
        return Err(Error::Parse {
            line,
            message: format!("expected {dim} entries, got {}", v.len()),
        });
    }
    Ok(v)
}

fn parse_components(text: &str) -> Result<(usize, Vec<LinearSet>)> {
    let mut dim = None;
    let mut comps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("dim") {
            let d = rest.trim().parse::<usize>().map_err(|_| Error::Parse {
                line: ln,
                message: "expected \"dim k\"".into(),
            })?;
            dim = Some(d);
            continue;
        }
        let k = dim.ok_or(Error::Parse {
            line: ln,
            message: "\"dim k\" must come first".into(),
        })?;
        let rest = line.strip_prefix("base:").ok_or(Error::Parse {
            line: ln,
            message: "expected \"base: …\"".into(),
        })?;
        let (base, periods) = match rest.split_once(';') {
            Some((b, p)) => {
                let p = p.trim();
                let p = p.strip_prefix("periods:").ok_or(Error::Parse {
                    line: ln,
                    message: "expected \"periods:\" after ';'".into(),
                })?;
                (b, p)
            }
            None => (rest, ""),
        };
        let base = parse_vector(base, k, ln)?;
        let mut ps = Vec::new();
        if !periods.trim().is_empty() {
            for p in periods.split('|') {
                ps.push(parse_vector(p, k, ln)?);
            }
        }
        let l = LinearSet::new(base, ps).map_err(|e| Error::Parse {
            line: ln,
            message: e.to_string(),
        })?;
        comps.push(l);
    }
    let dim = dim.ok_or(Error::Parse {
        line: 1,
        message: "missing \"dim k\"".into(),
    })?;
    Ok((dim, comps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ls(base: &[u64], periods: &[&[u64]]) -> LinearSet {
        LinearSet::new(base.to_vec(), periods.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn membership() {
        let quadrant = SemilinearSet::new(2, vec![ls(&[0, 0], &[&[1, 0], &[0, 1]])]).unwrap();
        assert!(sl_member(&quadrant, &[3, 5]).unwrap());
        let odd = SemilinearSet::new(2, vec![ls(&[1, 0], &[&[2, 0]])]).unwrap();
        assert!(!sl_member(&odd, &[4, 0]).unwrap());
        let diag = SemilinearSet::new(2, vec![ls(&[0, 0], &[&[1, 1]])]).unwrap();
        assert!(sl_member(&diag, &[3, 3]).unwrap());
        assert!(!sl_member(&diag, &[3, 2]).unwrap());
        assert!(sl_member(&diag, &[3]).is_err());
    }

    #[test]
    fn simplicity() {
        assert!(ls(&[0, 0], &[&[1, 0], &[0, 1]]).is_simple());
        assert!(!ls(&[0, 0], &[&[1, 0], &[0, 1], &[1, 1]]).is_simple());
        assert!(ls(&[0, 0], &[&[2, 3]]).is_simple());
        assert!(ls(&[4, 0], &[]).is_simple());
    }

    #[test]
    fn parse_round_trip() {
        let text = "dim 2\nbase: 1 0 ; periods: 2 0 | 0 1\nbase: 0 0 ; periods:\n";
        let s = SemilinearSet::parse(text).unwrap();
        assert_eq!(s.components.len(), 2);
        assert_eq!(s.components[1].periods.len(), 0);
        assert_eq!(SemilinearSet::parse(&s.to_string()).unwrap(), s);
        assert!(matches!(
            SemilinearSet::parse("dim 2\nbase: 1 ; periods: 1 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(SemilinearSet::parse("dim 1\nbase: 0 ; periods: 0\n").is_err());
    }

    #[test]
    fn representation_counts() {
        let l = ls(&[0, 0], &[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(l.representations(&[2, 2], 100), 3);
        assert_eq!(l.representations(&[2, 2], 2), 2);
    }
}
