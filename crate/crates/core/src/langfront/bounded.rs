//! Bounded languages: index sets, their Diophantine systems and the Parikh
//! counting function.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::Zero;

use super::cross::cross_section;
use super::grammar::{Grammar, GrammarFile, Symbol};
use super::morphism::{block_letter, parikh_vector, transduce, Morphism};
use super::parikh::parikh_image;
use crate::chambers::{bs_eval, sign_vector, Arrangement, BoxSpline, SignVector};
use crate::error::{Error, Result};
use crate::exactmath::{linalg, MultiPoly, Rational};
use crate::partition::{box_spline_of_system, DiophantineSystem};
use crate::quasipoly::{residue_of, QuasiPolynomial};
use crate::semilinear::{decompose_semisimple, max_overlap, LinearSet, SemiSimpleSet};

pub const DEFAULT_CHECK_LENGTH: usize = 24;

/// A grammar whose language lies in `u_1* … u_k*`.
#[derive(Clone, Debug)]
pub struct BoundedLanguage {
    grammar: Grammar,
    morphism: Morphism,
}

impl BoundedLanguage {
    /// Checks containment on every word of the language up to `check_len`.
    pub fn new(grammar: Grammar, morphism: Morphism, check_len: usize) -> Result<Self> {
        let mut words: Vec<String> = words_up_to(&grammar, check_len)?.into_iter().collect();
        words.sort_by_key(|w| w.len());
        for w in words {
            if !morphism.spans(&w) {
                return Err(Error::Containment { word: w });
            }
        }
        Ok(BoundedLanguage { grammar, morphism })
    }

    pub fn from_file(file: GrammarFile, check_len: usize) -> Result<Self> {
        let words = file
            .bounds
            .ok_or_else(|| Error::Argument("grammar file has no \"bounds:\" line".into()))?;
        Self::new(file.grammar, Morphism::from_words(words)?, check_len)
    }

    pub fn parse(text: &str, check_len: usize) -> Result<Self> {
        Self::from_file(Grammar::parse(text)?, check_len)
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    /// The ordered alphabet `a_1 … a_t` of Parikh vectors.
    pub fn alphabet(&self) -> &[char] {
        self.grammar.terminals()
    }
}

/// All words of `L(g)` of length at most `maxlen`.
pub fn words_up_to(g: &Grammar, maxlen: usize) -> Result<BTreeSet<String>> {
    const CAP: usize = 1 << 20;
    let n = g.nonterminal_count();
    let mut words: Vec<BTreeSet<String>> = vec![BTreeSet::new(); n];
    loop {
        let mut changed = false;
        for r in g.rules() {
            let mut acc: BTreeSet<String> = [String::new()].into();
            for s in &r.rhs {
                let mut next = BTreeSet::new();
                for prefix in &acc {
                    match *s {
                        Symbol::T(c) => {
                            if prefix.len() < maxlen {
                                next.insert(format!("{prefix}{c}"));
                            }
                        }
                        Symbol::N(m) => {
                            for w in &words[m] {
                                if prefix.len() + w.len() <= maxlen {
                                    next.insert(format!("{prefix}{w}"));
                                }
                            }
                        }
                    }
                }
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            for w in acc {
                if words[r.lhs].insert(w) {
                    changed = true;
                }
            }
            if words[r.lhs].len() > CAP {
                return Err(Error::Argument(format!(
                    "more than {CAP} words of length ≤ {maxlen}; lower the check length"
                )));
            }
        }
        if !changed {
            break;
        }
    }
    Ok(std::mem::take(&mut words[g.start()]))
}

fn block_letters(k: usize) -> Vec<char> {
    (0..k).map(block_letter).collect()
}

/// Grammar for `ζ⁻¹(L(g)) ∩ a_1* … a_k*`, with `a_i` written as the `i`-th
/// lowercase letter.
pub fn inverse_morphism_intersect(g: &Grammar, m: &Morphism) -> Result<Grammar> {
    transduce(g, &m.block_transducer(), &block_letters(m.len()))
}

/// Exponent vectors of the words of `L` read through the cross-section, as
/// a disjoint union of simple sets.
pub fn index_set(bl: &BoundedLanguage, depth_cap: usize) -> Result<SemiSimpleSet> {
    let k = bl.morphism.len();
    let inverse = inverse_morphism_intersect(&bl.grammar, &bl.morphism)?;
    let section = cross_section(&bl.morphism).as_transducer();
    let canonical = transduce(&inverse, &section, &block_letters(k))?;
    let image = parikh_image(&canonical);
    decompose_semisimple(&image, depth_cap)
}

/// One simple set read through `ψ ∘ ζ`: `offset + ℕ·columns`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSystem {
    pub offset: Vec<u64>,
    pub columns: Vec<Vec<u64>>,
}

impl BlockSystem {
    /// The system `A x + c = n`, if there is at least one column.
    pub fn system(&self) -> Option<DiophantineSystem> {
        if self.columns.is_empty() {
            return None;
        }
        DiophantineSystem::from_columns(&self.columns, self.offset.clone()).ok()
    }
}

pub fn diophantine_systems(b: &SemiSimpleSet, m: &Morphism, alphabet: &[char]) -> Result<Vec<BlockSystem>> {
    if b.dim() != m.len() {
        return Err(Error::Dimension {
            expected: m.len(),
            got: b.dim(),
        });
    }
    let image = |l: &[u64]| parikh_vector(&m.apply_exponents(l), alphabet);
    b.components()
        .iter()
        .map(|c| {
            let offset = image(&c.base)?;
            let columns = c.periods.iter().map(|p| image(p)).collect::<Result<Vec<_>>>()?;
            if let Some(j) = columns.iter().position(|col| col.iter().all(|&v| v == 0)) {
                return Err(Error::Invariant(format!("column {} of {c} has an empty image", j + 1)));
            }
            Ok(BlockSystem { offset, columns })
        })
        .collect()
}

/// One shifted summand of a counting function.
#[derive(Clone)]
pub struct Summand {
    pub block: BlockSystem,
    pub spline: BoxSpline,
}

/// `v ↦ Σ spline_i(v − c_i)` over the summands with `v ≥ c_i`.
#[derive(Clone)]
pub struct CountingFunction {
    dim: usize,
    summands: Vec<Summand>,
}

/// Indicator of the origin.
fn point_spline(t: usize) -> Result<BoxSpline> {
    let one = QuasiPolynomial::from_polynomial(MultiPoly::one(t));
    BoxSpline::from_table(Arrangement::coordinate(t), vec![(vec![0; t], one)])
}

impl CountingFunction {
    pub fn from_blocks(dim: usize, blocks: Vec<BlockSystem>) -> Result<Self> {
        let summands = blocks
            .into_iter()
            .map(|block| {
                let spline = if block.columns.is_empty() {
                    point_spline(dim)?
                } else {
                    box_spline_of_system(&DiophantineSystem::from_columns(&block.columns, vec![0; dim])?)?
                };
                Ok(Summand { block, spline })
            })
            .collect::<Result<_>>()?;
        Ok(CountingFunction { dim, summands })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn eval(&self, v: &[u64]) -> Result<BigUint> {
        crate::error::check_dim(self.dim, v.len())?;
        let mut total = BigUint::zero();
        for s in &self.summands {
            if v.iter().zip(&s.block.offset).any(|(a, c)| a < c) {
                continue;
            }
            let x: Vec<i64> = v.iter().zip(&s.block.offset).map(|(a, c)| (a - c) as i64).collect();
            total += bs_eval(&s.spline, &x)?;
        }
        Ok(total)
    }
}

pub fn parikh_counting_function(bl: &BoundedLanguage, depth_cap: usize) -> Result<CountingFunction> {
    let b = index_set(bl, depth_cap)?;
    let blocks = diophantine_systems(&b, &bl.morphism, bl.alphabet())?;
    CountingFunction::from_blocks(bl.alphabet().len(), blocks)
}

/// Whether every polynomial selected on a region is constant on the span of
/// the region's points in `[0, radius]^t`.
fn regions_constant(spline: &BoxSpline, radius: u64) -> Result<bool> {
    let t = spline.dim();
    let mut samples: HashMap<SignVector, Vec<Vec<i64>>> = HashMap::new();
    for x in crate::chambers::box_points(t, radius) {
        samples.entry(sign_vector(spline.arrangement(), &x)?).or_default().push(x);
    }
    for points in samples.values() {
        let piece = spline.piece_at(&points[0])?;
        // a basis of the span, from the sampled points themselves
        let mut basis: Vec<Vec<i64>> = Vec::new();
        for x in points {
            let mut trial = basis.clone();
            trial.push(x.clone());
            if linalg::independent(&trial) {
                basis = trial;
            }
        }
        let d = basis.len();
        let subs: Vec<MultiPoly> = (0..t)
            .map(|i| {
                let coeffs: Vec<Rational> = basis.iter().map(|b| Rational::from_integer(b[i].into())).collect();
                MultiPoly::linear(&coeffs, Rational::zero())
            })
            .collect();
        let classes: BTreeSet<Vec<u64>> = points.iter().map(|x| residue_of(x, piece.period())).collect();
        for r in classes {
            let p = piece.class_poly(&r);
            let restricted = if d == 0 { (*p).clone() } else { p.substitute(&subs)? };
            if restricted.total_degree() > 0 && !restricted.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `(true, Some(r))` when the counting function is bounded, `r` its
/// supremum; `(false, None)` otherwise.
pub fn decide_parikh_slender(f: &CountingFunction, radius: u64) -> Result<(bool, Option<u64>)> {
    for s in &f.summands {
        let independent = {
            let rows: Vec<Vec<i64>> = s.block.columns.iter().map(|c| c.iter().map(|&v| v as i64).collect()).collect();
            linalg::independent(&rows)
        };
        if !independent || !regions_constant(&s.spline, radius)? {
            return Ok((false, None));
        }
    }
    // every summand is the indicator of a simple set
    let sets: Vec<LinearSet> = f
        .summands
        .iter()
        .map(|s| LinearSet::new(s.block.offset.clone(), s.block.columns.clone()))
        .collect::<Result<_>>()?;
    Ok((true, Some(max_overlap(&sets) as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lang(text: &str) -> BoundedLanguage {
        BoundedLanguage::parse(text, 16).unwrap()
    }

    #[test]
    fn containment_witness() {
        let err = BoundedLanguage::parse("S -> a S b | b a\nbounds: a, b\n", 8).unwrap_err();
        assert_eq!(err, Error::Containment { word: "ba".into() });
    }

    #[test]
    fn words_of_small_grammars() {
        let g = Grammar::parse("S -> a S b | eps\n").unwrap().grammar;
        let w: Vec<String> = words_up_to(&g, 4).unwrap().into_iter().collect();
        assert_eq!(w, vec!["", "aabb", "ab"]);
    }

    #[test]
    fn inverse_image_of_repeated_block() {
        let g = Grammar::parse("S -> a b S | eps\n").unwrap().grammar;
        let inv = inverse_morphism_intersect(&g, &Morphism::new(&["ab"]).unwrap()).unwrap();
        let w = words_up_to(&inv, 5).unwrap();
        assert_eq!(w.len(), 6);
        assert!(w.iter().all(|x| x.chars().all(|c| c == 'a')));
    }

    #[test]
    fn balanced_index_set() {
        let bl = lang("S -> a S b | eps\nbounds: a, b\n");
        let b = index_set(&bl, 12).unwrap();
        assert_eq!(b.components(), &[LinearSet::new(vec![0, 0], vec![vec![1, 1]]).unwrap()]);
        let f = parikh_counting_function(&bl, 12).unwrap();
        assert_eq!(f.eval(&[3, 3]).unwrap(), BigUint::from(1u32));
        assert_eq!(f.eval(&[3, 2]).unwrap(), BigUint::zero());
        assert_eq!(decide_parikh_slender(&f, 6).unwrap(), (true, Some(1)));
    }

    #[test]
    fn three_blocks_over_two_letters() {
        let bl = lang("S -> A B A\nA -> a A | eps\nB -> b B | eps\nbounds: a, b, a\n");
        let f = parikh_counting_function(&bl, 12).unwrap();
        for n in 0..6u64 {
            assert_eq!(f.eval(&[n, 0]).unwrap(), BigUint::from(1u32));
            for m in 1..4u64 {
                assert_eq!(f.eval(&[n, m]).unwrap(), BigUint::from(n + 1));
            }
        }
        assert_eq!(decide_parikh_slender(&f, 6).unwrap(), (false, None));
    }

    #[test]
    fn single_word_and_empty() {
        let f = parikh_counting_function(&lang("S -> a b\nbounds: a, b\n"), 12).unwrap();
        assert_eq!(f.eval(&[1, 1]).unwrap(), BigUint::from(1u32));
        assert_eq!(f.eval(&[2, 1]).unwrap(), BigUint::zero());
        let f = parikh_counting_function(&lang("S -> S a\nbounds: a\n"), 12).unwrap();
        assert_eq!(f.summands().len(), 0);
        assert_eq!(decide_parikh_slender(&f, 6).unwrap(), (true, Some(0)));
    }
}
