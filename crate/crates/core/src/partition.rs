//! Counting functions of non-negative Diophantine systems `Ax = n` as box
//! splines, built one unknown at a time by summing along lattice rays.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::chambers::{Arrangement, BoxSpline, Hyperplane, Modulus, Piece, PieceSource, PrefixTerm};
use crate::error::{check_dim, Error, Result};
use crate::exactmath::rational::{denominator_lcm, rat, Rational};
use crate::exactmath::{linalg, MultiPoly};
use crate::quasipoly::{residues, QuasiPolynomial, Rounding};

/// `A x + c = n` with `A ∈ ℕ^{t×k}` free of zero columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiophantineSystem {
    matrix: Vec<Vec<u64>>,
    offset: Vec<u64>,
}

impl DiophantineSystem {
    pub fn new(matrix: Vec<Vec<u64>>, offset: Option<Vec<u64>>) -> Result<Self> {
        let t = matrix.len();
        if t == 0 {
            return Err(Error::Invariant("system needs at least one row".into()));
        }
        let k = matrix[0].len();
        if k == 0 {
            return Err(Error::Invariant("system needs at least one column".into()));
        }
        for row in &matrix {
            check_dim(k, row.len())?;
        }
        if let Some(j) = (0..k).find(|&j| matrix.iter().all(|row| row[j] == 0)) {
            return Err(Error::Invariant(format!("column {} is zero", j + 1)));
        }
        let offset = offset.unwrap_or_else(|| vec![0; t]);
        check_dim(t, offset.len())?;
        Ok(DiophantineSystem { matrix, offset })
    }

    /// Builds the system from its columns.
    pub fn from_columns(columns: &[Vec<u64>], offset: Vec<u64>) -> Result<Self> {
        let t = offset.len();
        if columns.is_empty() {
            return Err(Error::Invariant("system needs at least one column".into()));
        }
        for c in columns {
            check_dim(t, c.len())?;
        }
        let matrix = (0..t).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
        Self::new(matrix, Some(offset))
    }

    /// Parses "t k", then t rows of k integers, then an optional
    /// "offset: c₁ … c_t" line. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty system file".into(),
        })?;
        let dims = parse_ints(header, ln)?;
        if dims.len() != 2 {
            return Err(Error::Parse { line: ln, message: "expected \"t k\"".into() });
        }
        let (t, k) = (dims[0] as usize, dims[1] as usize);
        let mut matrix = Vec::with_capacity(t);
        for _ in 0..t {
            let (ln, row) = lines.next().ok_or(Error::Parse {
                line: ln,
                message: format!("expected {t} matrix rows"),
            })?;
            let row = parse_ints(row, ln)?;
            if row.len() != k {
                return Err(Error::Parse { line: ln, message: format!("expected {k} entries, found {}", row.len()) });
            }
            matrix.push(row);
        }
        let mut offset = None;
        if let Some((ln, line)) = lines.next() {
            let rest = line.strip_prefix("offset:").ok_or(Error::Parse {
                line: ln,
                message: "expected \"offset: …\"".into(),
            })?;
            let c = parse_ints(rest, ln)?;
            if c.len() != t {
                return Err(Error::Parse { line: ln, message: format!("offset needs {t} entries") });
            }
            offset = Some(c);
            if let Some((ln, _)) = lines.next() {
                return Err(Error::Parse { line: ln, message: "unexpected trailing line".into() });
            }
        }
        Self::new(matrix, offset).map_err(|e| Error::Parse { line: 1, message: e.to_string() })
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn offset(&self) -> &[u64] {
        &self.offset
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        self.matrix.iter().map(|row| row[j]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols()).map(|j| self.column(j)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "matrix": self.matrix, "offset": self.offset })
    }
}

fn parse_ints(s: &str, line: usize) -> Result<Vec<u64>> {
    s.split_whitespace()
        .map(|w| {
            w.parse::<u64>().map_err(|_| Error::Parse {
                line,
                message: format!("expected a non-negative integer, found {w:?}"),
            })
        })
        .collect()
}

impl fmt::Display for DiophantineSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows(), self.cols())?;
        for row in &self.matrix {
            let r: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", r.join(" "))?;
        }
        if self.offset.iter().any(|&c| c != 0) {
            let c: Vec<String> = self.offset.iter().map(|v| v.to_string()).collect();
            writeln!(f, "offset: {}", c.join(" "))?;
        }
        Ok(())
    }
}

/// The ray parameter at which `x − λ·a` meets a hyperplane: `λ = β·x / β·a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayFunctional {
    pub coefficients: Vec<Rational>,
    pub source: Hyperplane,
}

impl RayFunctional {
    pub fn eval(&self, x: &[i64]) -> Rational {
        self.coefficients.iter().zip(x).map(|(c, &v)| c * rat(v)).sum()
    }
}

pub fn lambda_functional(h: &Hyperplane, a: &[i64]) -> Option<RayFunctional> {
    let gamma: i64 = h.normal().iter().zip(a).map(|(b, a)| b * a).sum();
    if gamma == 0 {
        return None;
    }
    Some(RayFunctional {
        coefficients: h.normal().iter().map(|&b| Rational::new(b.into(), gamma.into())).collect(),
        source: h.clone(),
    })
}

fn crossing_functionals(arr: &Arrangement, a: &[i64]) -> Vec<RayFunctional> {
    arr.planes().iter().filter_map(|h| lambda_functional(h, a)).collect()
}

/// Adds the planes `λ_π = λ_π'` for every pair of planes crossed by the ray.
pub fn extend_arrangement(arr: &Arrangement, a: &[i64]) -> Arrangement {
    let mut out = arr.clone();
    let crossing: Vec<(i64, &Hyperplane)> = arr
        .planes()
        .iter()
        .filter_map(|h| {
            let gamma: i64 = h.normal().iter().zip(a).map(|(b, a)| b * a).sum();
            (gamma != 0).then_some((gamma, h))
        })
        .collect();
    for (i, (g1, h1)) in crossing.iter().enumerate() {
        for (g2, h2) in &crossing[i + 1..] {
            // γ₁γ₂(λ₁ − λ₂) = γ₂β₁ − γ₁β₂
            let normal: Vec<i64> = h1
                .normal()
                .iter()
                .zip(h2.normal())
                .map(|(&b1, &b2)| g2 * b1 - g1 * b2)
                .collect();
            if let Ok(h) = Hyperplane::new(normal) {
                out.push(h);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bounds {
    Closed,
    ClosedOpen,
    OpenClosed,
    Open,
}

fn prefix(summand: &Arc<Piece>, a: &[i64], f: &[Rational], mode: Rounding, sign: i8) -> Option<PrefixTerm> {
    // ⌈0⌉ − 1 < 0: the empty prefix
    if mode == Rounding::CeilingInner && f.iter().all(|c| c.is_zero()) {
        return None;
    }
    Some(PrefixTerm::new(summand.clone(), a.to_vec(), f.to_vec(), mode, sign))
}

/// Prefix terms of `Σ_{λ ∈ I} s(x − λa)` for an interval between two
/// functionals; `lower = None` stands for the constant 0.
pub fn interval_terms(
    summand: &Arc<Piece>,
    a: &[i64],
    lower: Option<&[Rational]>,
    upper: &[Rational],
    bounds: Bounds,
) -> Vec<PrefixTerm> {
    let zero = vec![Rational::zero(); a.len()];
    let lower = lower.unwrap_or(&zero);
    let (upper_mode, lower_mode) = match bounds {
        Bounds::Closed => (Rounding::Floor, Rounding::CeilingInner),
        Bounds::Open => (Rounding::CeilingInner, Rounding::Floor),
        Bounds::ClosedOpen => (Rounding::CeilingInner, Rounding::CeilingInner),
        Bounds::OpenClosed => (Rounding::Floor, Rounding::Floor),
    };
    [
        prefix(summand, a, upper, upper_mode, 1),
        prefix(summand, a, lower, lower_mode, -1),
    ]
    .into_iter()
    .flatten()
    .collect()
}

/// `G(x) = Σ_{λ ∈ I(x)} p(x − λa)` as a quasi-polynomial.
pub fn sum_over_interval(
    p: &QuasiPolynomial,
    a: &[i64],
    lower: Option<&RayFunctional>,
    upper: &RayFunctional,
    bounds: Bounds,
) -> Result<QuasiPolynomial> {
    check_dim(p.arity(), a.len())?;
    check_dim(p.arity(), upper.coefficients.len())?;
    let summand = Piece::table(p.clone());
    let terms = interval_terms(
        &summand,
        a,
        lower.map(|f| f.coefficients.as_slice()),
        &upper.coefficients,
        bounds,
    );
    Ok(Piece::ray_sum(p.arity(), terms, None).materialize().canonicalize())
}

/// Counts of `λ ≥ 0` with `λa = n`.
struct RaySource {
    column: Vec<i64>,
    on_ray: Arc<Piece>,
    origin: Arc<Piece>,
}

impl RaySource {
    fn new(column: Vec<i64>) -> Self {
        let t = column.len();
        let period = column.iter().filter(|&&v| v > 0).fold(1i64, |acc, &v| acc.lcm(&v)) as u64;
        let mut table = QuasiPolynomial::with_period(t, period).expect("period ≥ 1");
        for r in residues(t, period) {
            let hit = r
                .iter()
                .zip(&column)
                .all(|(&ri, &ai)| if ai == 0 { ri == 0 } else { ri as i64 % ai == 0 });
            if hit {
                table.set_piece(r, MultiPoly::one(t)).expect("residue in range");
            }
        }
        RaySource {
            column,
            on_ray: Piece::table(table),
            origin: Piece::table(QuasiPolynomial::from_polynomial(MultiPoly::one(t))),
        }
    }

    fn arrangement(&self) -> Arrangement {
        let a = &self.column;
        let t = a.len();
        let mut arr = Arrangement::coordinate(t);
        for i in 0..t {
            for j in i + 1..t {
                let mut n = vec![0; t];
                n[i] = a[j];
                n[j] = -a[i];
                if let Ok(h) = Hyperplane::new(n) {
                    arr.push(h);
                }
            }
        }
        arr
    }
}

impl PieceSource for RaySource {
    fn derive(&self, arr: &Arrangement, x: &[i64]) -> Result<Arc<Piece>> {
        check_dim(arr.dim(), x.len())?;
        if x.iter().all(|&v| v == 0) {
            return Ok(self.origin.clone());
        }
        let a = &self.column;
        let t = a.len();
        let support = (0..t).all(|i| (x[i] > 0) == (a[i] > 0));
        let parallel = (0..t).all(|i| (i + 1..t).all(|j| a[j] * x[i] == a[i] * x[j]));
        Ok(if support && parallel {
            self.on_ray.clone()
        } else {
            Piece::shared_zero(t)
        })
    }
}

/// Sums an inner spline along the ray spanned by `column`.
struct RaySumSource {
    inner: BoxSpline,
    column: Vec<i64>,
    crossings: Vec<Vec<Rational>>,
    modulus: Option<(u64, Option<Vec<i64>>)>,
}

fn scaled_point(x: &[i64], mu: &Rational, a: &[i64]) -> Vec<i64> {
    let y: Vec<Rational> = x.iter().zip(a).map(|(&xi, &ai)| rat(xi) - mu * rat(ai)).collect();
    let l = Rational::from_integer(denominator_lcm(y.iter()));
    y.iter()
        .map(|v| (v * &l).to_integer().to_i64().expect("witness fits in i64"))
        .collect()
}

impl PieceSource for RaySumSource {
    fn derive(&self, arr: &Arrangement, x: &[i64]) -> Result<Arc<Piece>> {
        check_dim(arr.dim(), x.len())?;
        let a = &self.column;
        let t = a.len();
        let cap = (0..t)
            .filter(|&i| a[i] > 0)
            .map(|i| Rational::new(x[i].into(), a[i].into()))
            .min()
            .expect("column is nonzero");

        let zero = vec![Rational::zero(); t];
        let mut breaks: Vec<(Rational, &[Rational])> = vec![(Rational::zero(), zero.as_slice())];
        for f in &self.crossings {
            let v: Rational = f.iter().zip(x).map(|(c, &xi)| c * rat(xi)).sum();
            if !v.is_negative() && v <= cap {
                breaks.push((v, f.as_slice()));
            }
        }
        breaks.sort_by(|p, q| p.0.cmp(&q.0));
        breaks.dedup_by(|later, earlier| later.0 == earlier.0);

        let mut terms = Vec::new();
        for (i, (v, f)) in breaks.iter().enumerate() {
            let g = self.inner.piece_at(&scaled_point(x, v, a))?;
            let lower = (!f.iter().all(|c| c.is_zero())).then_some(*f);
            terms.extend(interval_terms(&g, a, lower, f, Bounds::Closed));
            if let Some((w, h)) = breaks.get(i + 1) {
                let mid = (v + w) / rat(2);
                let g = self.inner.piece_at(&scaled_point(x, &mid, a))?;
                terms.extend(interval_terms(&g, a, lower, h, Bounds::Open));
            }
        }
        Ok(Piece::ray_sum(t, terms, self.modulus_at(arr, x)))
    }
}

impl RaySumSource {
    /// A period valid on the region of `x`, provided that region is open in
    /// the span of the columns.
    fn modulus_at(&self, arr: &Arrangement, x: &[i64]) -> Option<Modulus> {
        let (period, normal) = self.modulus.clone()?;
        let t = x.len();
        let mut zeros: Vec<Vec<i64>> = arr
            .planes()
            .iter()
            .filter(|h| h.eval(x) == 0)
            .map(|h| h.normal().to_vec())
            .collect();
        zeros.extend((0..t).filter(|&i| x[i] == 0).map(|i| {
            let mut e = vec![0; t];
            e[i] = 1;
            e
        }));
        let codim = linalg::rank(&linalg::from_ints(&zeros));
        match normal {
            None => (codim == 0).then_some(Modulus { period, normal: None }),
            Some(n) => {
                let mut with = zeros.clone();
                with.push(n.clone());
                let inside = codim == 1 && linalg::rank(&linalg::from_ints(&with)) == 1;
                inside.then_some(Modulus { period, normal: Some(n) })
            }
        }
    }
}

/// For columns spanning a subspace of codimension at most one: a period of
/// their counting function on each chamber, and the primitive normal of the
/// span when it is a hyperplane. Each basis `σ` among the columns generates
/// a lattice containing `g_σ` times the integer points of the span, `g_σ`
/// the gcd of the maximal minors of `σ`; the period is the lcm of the `g_σ`.
fn lattice_modulus(columns: &[Vec<i64>]) -> Option<(u64, Option<Vec<i64>>)> {
    let t = columns.first()?.len();
    let rank = linalg::rank(&linalg::from_ints(columns));
    let normal = match t - rank {
        0 => None,
        1 => {
            let k = linalg::kernel(&linalg::from_ints(columns), t);
            let n = linalg::primitive_integer(&k[0]);
            Some(n.iter().map(|v| v.to_i64().expect("normal fits in i64")).collect())
        }
        _ => return None,
    };
    let rows = row_subsets(t, rank);
    let mut acc = 1u64;
    for basis in row_subsets(columns.len(), rank) {
        let g = rows.iter().fold(0u64, |g, r| {
            let m: Vec<Vec<i64>> = r.iter().map(|&i| basis.iter().map(|&j| columns[j][i]).collect()).collect();
            let det = linalg::determinant(&linalg::from_ints(&m));
            g.gcd(&det.to_integer().abs().to_u64().expect("minor fits in u64"))
        });
        if g != 0 {
            acc = acc.lcm(&g);
        }
    }
    Some((acc, normal))
}

fn row_subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == r)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect()
}

/// The counting function `n ↦ #{x ∈ ℕ^k : Ax = n}` as a box spline.
pub fn box_spline_of_system(sys: &DiophantineSystem) -> Result<BoxSpline> {
    if sys.offset.iter().any(|&c| c != 0) {
        return Err(Error::Argument(
            "offsets are applied by shifted evaluation, not inside the spline".into(),
        ));
    }
    let columns: Vec<Vec<i64>> = sys
        .columns()
        .into_iter()
        .map(|c| c.into_iter().map(|v| v as i64).collect())
        .collect();
    let last = columns.last().expect("at least one column").clone();
    let base = RaySource::new(last);
    let mut spline = BoxSpline::from_source(base.arrangement(), Box::new(base));
    for (i, a) in columns.iter().enumerate().rev().skip(1) {
        let arr = extend_arrangement(spline.arrangement(), a);
        let crossings = crossing_functionals(spline.arrangement(), a)
            .into_iter()
            .map(|f| f.coefficients)
            .collect();
        let source = RaySumSource {
            inner: spline,
            column: a.clone(),
            crossings,
            modulus: lattice_modulus(&columns[i..]),
        };
        spline = BoxSpline::from_source(arr, Box::new(source));
    }
    Ok(spline)
}

/// Whether every hyperplane is a homogeneous linear form: normals are
/// nonzero integer vectors and there is no affine term to carry.
pub fn is_homogeneous(arr: &Arrangement) -> bool {
    arr.planes().iter().all(|h| {
        let n = h.normal();
        n.iter().any(|&v| v != 0) && h.eval(&vec![0; n.len()]) == 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chambers::bs_eval;
    use crate::exactmath::rational::ratio;
    use num_bigint::BigUint;

    fn count(matrix: Vec<Vec<u64>>, n: &[i64]) -> u64 {
        let sys = DiophantineSystem::new(matrix, None).unwrap();
        let b = box_spline_of_system(&sys).unwrap();
        let v: BigUint = bs_eval(&b, n).unwrap();
        v.try_into().unwrap()
    }

    #[test]
    fn parse_and_print() {
        let sys = DiophantineSystem::parse("2 2\n1 0\n0 1\noffset: 1 1\n").unwrap();
        assert_eq!(sys.offset(), &[1, 1]);
        assert_eq!(DiophantineSystem::parse(&sys.to_string()).unwrap(), sys);
        let err = DiophantineSystem::parse("1 2\n1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(DiophantineSystem::new(vec![vec![1, 0]], None).is_err());
    }

    #[test]
    fn functionals() {
        let x1 = Hyperplane::coordinate(2, 0);
        let f = lambda_functional(&x1, &[2, 0]).unwrap();
        assert_eq!(f.coefficients, vec![ratio(1, 2), rat(0)]);
        let diag = Hyperplane::new(vec![1, -1]).unwrap();
        assert_eq!(lambda_functional(&diag, &[1, 0]).unwrap().coefficients, vec![rat(1), rat(-1)]);
        assert!(lambda_functional(&diag, &[1, 1]).is_none());
    }

    #[test]
    fn extension() {
        let arr = Arrangement::coordinate(2);
        let ext = extend_arrangement(&arr, &[1, 1]);
        assert_eq!(ext.len(), 3);
        assert_eq!(ext.planes()[2].normal(), &[1, -1]);
        assert_eq!(extend_arrangement(&arr, &[1, 0]).len(), 2);
        assert_eq!(extend_arrangement(&ext, &[1, 1]).len(), extend_arrangement(&extend_arrangement(&ext, &[1, 1]), &[1, 1]).len());
    }

    #[test]
    fn interval_sums() {
        let one = QuasiPolynomial::from_polynomial(MultiPoly::one(1));
        let x = lambda_functional(&Hyperplane::coordinate(1, 0), &[1]).unwrap();
        let g = sum_over_interval(&one, &[1], None, &x, Bounds::ClosedOpen).unwrap();
        assert_eq!(g, QuasiPolynomial::from_polynomial(MultiPoly::var(1, 0)));
        let id = QuasiPolynomial::from_polynomial(MultiPoly::var(1, 0));
        let tri = sum_over_interval(&id, &[1], None, &x, Bounds::Closed).unwrap();
        for n in 0..=30 {
            assert_eq!(tri.eval(&[n]).unwrap(), rat(n * (n + 1) / 2));
        }
        let zero_top = RayFunctional { coefficients: vec![rat(0)], source: Hyperplane::coordinate(1, 0) };
        let g = sum_over_interval(&one, &[1], None, &zero_top, Bounds::ClosedOpen).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn small_systems() {
        for n in 0..=50 {
            assert_eq!(count(vec![vec![1, 1]], &[n]), n as u64 + 1);
        }
        let expected = [1, 0, 1, 1, 1, 1, 2, 1, 2, 2, 2, 2];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(count(vec![vec![2, 3]], &[n as i64]), e, "n = {n}");
        }
        assert_eq!(count(vec![vec![2], vec![3]], &[4, 6]), 1);
        assert_eq!(count(vec![vec![2], vec![3]], &[2, 2]), 0);
        assert_eq!(count(vec![vec![2], vec![3]], &[0, 0]), 1);
    }
}
