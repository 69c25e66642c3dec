//! Central hyperplane arrangements, their sign-vector regions, and
//! piecewise quasi-polynomials over those regions.

mod arrangement;
mod fm;
mod piece;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_traits::Signed;

pub use arrangement::{sign_vector, Arrangement, Hyperplane, SignVector};
pub use fm::cone_is_feasible;
pub use piece::{Modulus, Piece, PieceKind, PrefixTerm};

use crate::error::{check_dim, Error, Result};
use crate::quasipoly::QuasiPolynomial;

/// Produces the piece of a region from any lattice witness inside it.
pub trait PieceSource: Send + Sync {
    fn derive(&self, arr: &Arrangement, witness: &[i64]) -> Result<Arc<Piece>>;
}

/// Explicitly tabulated pieces; unlisted regions carry zero.
pub struct TableSource {
    pieces: HashMap<SignVector, Arc<Piece>>,
}

impl PieceSource for TableSource {
    fn derive(&self, arr: &Arrangement, witness: &[i64]) -> Result<Arc<Piece>> {
        let sv = sign_vector(arr, witness)?;
        Ok(self
            .pieces
            .get(&sv)
            .cloned()
            .unwrap_or_else(|| Piece::shared_zero(arr.dim())))
    }
}

struct SumSource {
    parts: Vec<BoxSpline>,
}

impl PieceSource for SumSource {
    fn derive(&self, arr: &Arrangement, witness: &[i64]) -> Result<Arc<Piece>> {
        let pieces = self
            .parts
            .iter()
            .map(|b| b.piece_at(witness))
            .collect::<Result<Vec<_>>>()?;
        Ok(Piece::sum(arr.dim(), pieces))
    }
}

struct Inner {
    arr: Arrangement,
    source: Box<dyn PieceSource>,
    cache: RwLock<HashMap<SignVector, Arc<Piece>>>,
    overrides: BTreeMap<Vec<i64>, BigUint>,
}

/// A function on ℕ^t that is a quasi-polynomial on each region of its
/// arrangement, with a finite table of point overrides.
#[derive(Clone)]
pub struct BoxSpline {
    inner: Arc<Inner>,
}

/// A region met during enumeration.
#[derive(Clone, Debug)]
pub struct Region {
    pub sign: SignVector,
    pub witness: Vec<i64>,
    pub piece: Arc<Piece>,
}

impl BoxSpline {
    pub fn from_source(arr: Arrangement, source: Box<dyn PieceSource>) -> Self {
        BoxSpline {
            inner: Arc::new(Inner {
                arr,
                source,
                cache: RwLock::new(HashMap::new()),
                overrides: BTreeMap::new(),
            }),
        }
    }

    /// Tabulated spline. Every listed sign vector must be realized by the
    /// paired witness point.
    pub fn from_table(arr: Arrangement, entries: Vec<(Vec<i64>, QuasiPolynomial)>) -> Result<Self> {
        let mut pieces = HashMap::new();
        for (w, q) in entries {
            check_dim(arr.dim(), q.arity())?;
            if w.iter().any(|&v| v < 0) {
                return Err(Error::Argument(format!("witness {w:?} is not in ℕ^t")));
            }
            pieces.insert(sign_vector(&arr, &w)?, Piece::table(q));
        }
        Ok(Self::from_source(arr, Box::new(TableSource { pieces })))
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_source(
            Arrangement::coordinate(dim),
            Box::new(TableSource { pieces: HashMap::new() }),
        )
    }

    pub fn with_overrides(&self, overrides: BTreeMap<Vec<i64>, BigUint>) -> Result<Self> {
        for p in overrides.keys() {
            check_dim(self.dim(), p.len())?;
        }
        let mut all = self.inner.overrides.clone();
        all.extend(overrides);
        let source = Box::new(SumSource { parts: vec![self.clone()] });
        Ok(BoxSpline {
            inner: Arc::new(Inner {
                arr: self.inner.arr.clone(),
                source,
                cache: RwLock::new(HashMap::new()),
                overrides: all,
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.inner.arr.dim()
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.inner.arr
    }

    pub fn overrides(&self) -> &BTreeMap<Vec<i64>, BigUint> {
        &self.inner.overrides
    }

    /// Number of regions whose pieces have been derived so far.
    pub fn cached_regions(&self) -> usize {
        self.inner.cache.read().unwrap().len()
    }

    /// The piece of the region containing the lattice point `x`.
    pub fn piece_at(&self, x: &[i64]) -> Result<Arc<Piece>> {
        let sv = sign_vector(&self.inner.arr, x)?;
        if let Some(p) = self.inner.cache.read().unwrap().get(&sv) {
            return Ok(p.clone());
        }
        let p = self.inner.source.derive(&self.inner.arr, x)?;
        Ok(self.inner.cache.write().unwrap().entry(sv).or_insert(p).clone())
    }

    /// Derives the piece at `x` afresh, bypassing this spline's region cache.
    pub fn derive_uncached(&self, x: &[i64]) -> Result<Arc<Piece>> {
        check_dim(self.dim(), x.len())?;
        self.inner.source.derive(&self.inner.arr, x)
    }

    /// All regions realized by points of `[0, bound]^t`, in order of their
    /// first witness in lexicographic scan order.
    pub fn regions(&self, bound: u64) -> Result<Vec<Region>> {
        let t = self.dim();
        let mut seen: HashMap<SignVector, ()> = HashMap::new();
        let mut out = Vec::new();
        for x in box_points(t, bound) {
            let sv = sign_vector(&self.inner.arr, &x)?;
            if seen.insert(sv.clone(), ()).is_none() {
                let piece = self.piece_at(&x)?;
                out.push(Region { sign: sv, witness: x, piece });
            }
        }
        Ok(out)
    }
}

/// All points of `[0, bound]^t` in lexicographic order.
pub fn box_points(t: usize, bound: u64) -> impl Iterator<Item = Vec<i64>> {
    let side = bound as u128 + 1;
    let total = side.pow(t as u32);
    (0..total).map(move |mut idx| {
        let mut x = vec![0i64; t];
        for slot in x.iter_mut().rev() {
            *slot = (idx % side) as i64;
            idx /= side;
        }
        x
    })
}

/// Value of the spline at `x ∈ ℕ^t`.
pub fn bs_eval(b: &BoxSpline, x: &[i64]) -> Result<BigUint> {
    check_dim(b.dim(), x.len())?;
    if x.iter().any(|&v| v < 0) {
        return Err(Error::Argument(format!("point {x:?} is not in ℕ^t")));
    }
    if let Some(v) = b.inner.overrides.get(x) {
        return Ok(v.clone());
    }
    let v = b.piece_at(x)?.eval(x);
    if !v.is_integer() || v.is_negative() {
        return Err(Error::Consistency(format!("value {v} at {x:?} is not a count")));
    }
    Ok(v.to_integer().to_biguint().expect("non-negative"))
}

/// Pointwise sum over the union of the two arrangements.
pub fn bs_add(a: &BoxSpline, b: &BoxSpline) -> Result<BoxSpline> {
    let arr = a.arrangement().union(b.arrangement())?;
    let mut overrides = BTreeMap::new();
    for p in a.overrides().keys().chain(b.overrides().keys()) {
        overrides.insert(p.clone(), bs_eval(a, p)? + bs_eval(b, p)?);
    }
    let sum = BoxSpline::from_source(
        arr,
        Box::new(SumSource {
            parts: vec![a.clone(), b.clone()],
        }),
    );
    if overrides.is_empty() {
        return Ok(sum);
    }
    Ok(BoxSpline {
        inner: Arc::new(Inner {
            arr: sum.inner.arr.clone(),
            source: Box::new(SumSource { parts: vec![sum] }),
            cache: RwLock::new(HashMap::new()),
            overrides,
        }),
    })
}

/// Regions realized in `[0, bound]^t` with their materialized pieces.
pub fn enumerate_regions(b: &BoxSpline, bound: u64) -> Result<Vec<(SignVector, QuasiPolynomial)>> {
    if bound == 0 {
        return Err(Error::Argument("bound must be positive".into()));
    }
    Ok(b.regions(bound)?
        .into_iter()
        .map(|r| (r.sign, r.piece.materialize().canonicalize()))
        .collect())
}

/// Tables with more residue classes than this are summarized in text output.
pub const MAX_PRINTED_CLASSES: u128 = 4096;

pub fn render_text(b: &BoxSpline, bound: u64) -> Result<String> {
    let mut s = String::new();
    writeln!(s, "dimension {}", b.dim()).unwrap();
    writeln!(s, "hyperplanes {}", b.arrangement().len()).unwrap();
    for h in b.arrangement().planes() {
        let n: Vec<String> = h.normal().iter().map(|v| v.to_string()).collect();
        writeln!(s, "  [{}]", n.join(" ")).unwrap();
    }
    let regions = b.regions(bound)?;
    writeln!(s, "regions {} (realized in [0,{}]^{})", regions.len(), bound, b.dim()).unwrap();
    for r in &regions {
        let w: Vec<String> = r.witness.iter().map(|v| v.to_string()).collect();
        writeln!(s, "region {} witness ({})", r.sign, w.join(",")).unwrap();
        match r.piece.materialize_bounded(MAX_PRINTED_CLASSES) {
            Some(q) => {
                for line in q.canonicalize().to_string().lines() {
                    writeln!(s, "  {line}").unwrap();
                }
            }
            None => writeln!(s, "  period {} ({} classes, evaluated lazily)", r.piece.period(), r.piece.class_count()).unwrap(),
        }
    }
    writeln!(s, "overrides {}", b.overrides().len()).unwrap();
    for (p, v) in b.overrides() {
        writeln!(s, "  {p:?} -> {v}").unwrap();
    }
    Ok(s)
}

pub fn render_json(b: &BoxSpline, bound: u64) -> Result<serde_json::Value> {
    let planes: Vec<&[i64]> = b.arrangement().planes().iter().map(|h| h.normal()).collect();
    let regions = b
        .regions(bound)?
        .into_iter()
        .map(|r| {
            let piece = match r.piece.materialize_bounded(MAX_PRINTED_CLASSES) {
                Some(q) => q.canonicalize().to_json(),
                None => serde_json::json!({ "period": r.piece.period(), "lazy": true }),
            };
            serde_json::json!({ "sign": r.sign.to_string(), "witness": r.witness, "piece": piece })
        })
        .collect::<Vec<_>>();
    let overrides: Vec<serde_json::Value> = b
        .overrides()
        .iter()
        .map(|(p, v)| serde_json::json!({ "point": p, "value": v.to_string() }))
        .collect();
    Ok(serde_json::json!({
        "dimension": b.dim(),
        "hyperplanes": planes,
        "regions": regions,
        "overrides": overrides,
    }))
}
