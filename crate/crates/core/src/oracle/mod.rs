//! Naive ground truth: exhaustive enumeration with integer arithmetic only.

mod earley;

pub use earley::Recognizer;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;

use crate::langfront::BoundedLanguage;
use crate::partition::DiophantineSystem;
use crate::semilinear::LinearSet;

/// Number of `x ∈ ℕ^k` with `Ax + c = n`.
pub fn count_system_brute(sys: &DiophantineSystem, n: &[u64]) -> BigUint {
    if n.len() != sys.rows() {
        return BigUint::default();
    }
    let mut rest: Vec<i64> = n.iter().zip(sys.offset()).map(|(&v, &c)| v as i64 - c as i64).collect();
    if rest.iter().any(|&r| r < 0) {
        return BigUint::default();
    }
    let cols: Vec<Vec<i64>> = sys
        .columns()
        .into_iter()
        .map(|c| c.into_iter().map(|v| v as i64).collect())
        .collect();
    BigUint::from(count_rec(&cols, 0, &mut rest))
}

fn count_rec(cols: &[Vec<i64>], j: usize, rest: &mut [i64]) -> u64 {
    if j == cols.len() {
        return rest.iter().all(|&r| r == 0) as u64;
    }
    let col = &cols[j];
    let max = col
        .iter()
        .zip(rest.iter())
        .filter(|(&a, _)| a > 0)
        .map(|(&a, &r)| r / a)
        .min()
        .unwrap_or(0);
    if max < 0 {
        return 0;
    }
    let mut total = 0;
    for x in 0..=max {
        total += count_rec(cols, j + 1, rest);
        if x < max {
            for (r, &a) in rest.iter_mut().zip(col) {
                *r -= a;
            }
        }
    }
    for (r, &a) in rest.iter_mut().zip(col) {
        *r += a * max;
    }
    total
}

/// Exponent tuples `l` with `Σ l_i·|u_i| ≤ maxlen`, with their words.
fn candidates(words: &[String], maxlen: usize) -> BTreeSet<String> {
    fn go(words: &[String], i: usize, prefix: String, maxlen: usize, out: &mut BTreeSet<String>) {
        if i == words.len() {
            out.insert(prefix);
            return;
        }
        let mut w = prefix;
        loop {
            go(words, i + 1, w.clone(), maxlen, out);
            if w.len() + words[i].len() > maxlen {
                return;
            }
            w.push_str(&words[i]);
        }
    }
    let mut out = BTreeSet::new();
    go(words, 0, String::new(), maxlen, &mut out);
    out
}

/// Words of the language of length at most `maxlen`, by testing every
/// `u_1^{l_1} … u_k^{l_k}` within the budget.
pub fn enumerate_language(bl: &BoundedLanguage, maxlen: usize) -> BTreeSet<String> {
    let g = bl.grammar();
    if g.is_empty_language() {
        return BTreeSet::new();
    }
    let parser = Recognizer::new(g);
    candidates(&bl.morphism().images(), maxlen)
        .into_iter()
        .filter(|w| parser.accepts(w))
        .collect()
}

/// Number of words of the language with each Parikh vector `v ≤ bound`;
/// vectors with count zero are omitted.
pub fn census_parikh(bl: &BoundedLanguage, bound: &[u64]) -> BTreeMap<Vec<u64>, u64> {
    let alphabet = bl.grammar().terminals();
    let maxlen = bound.iter().sum::<u64>() as usize;
    let mut census = BTreeMap::new();
    for w in enumerate_language(bl, maxlen) {
        let v: Vec<u64> = alphabet
            .iter()
            .map(|&a| w.chars().filter(|&c| c == a).count() as u64)
            .collect();
        if v.iter().zip(bound).all(|(x, b)| x <= b) {
            *census.entry(v).or_insert(0) += 1;
        }
    }
    census
}

/// Number of `m ∈ ℕ^r` with `base + Σ m_i·p_i = v`.
pub fn count_representations_brute(l: &LinearSet, v: &[u64]) -> u64 {
    if v.len() != l.base.len() || v.iter().zip(&l.base).any(|(x, b)| x < b) {
        return 0;
    }
    let rest: Vec<i64> = v.iter().zip(&l.base).map(|(x, b)| (x - b) as i64).collect();
    let cols: Vec<Vec<i64>> = l
        .periods
        .iter()
        .map(|p| p.iter().map(|&x| x as i64).collect())
        .collect();
    let mut rest = rest;
    count_rec(&cols, 0, &mut rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(rows: &[&[u64]]) -> DiophantineSystem {
        DiophantineSystem::new(rows.iter().map(|r| r.to_vec()).collect(), None).unwrap()
    }

    #[test]
    fn system_counts() {
        assert_eq!(count_system_brute(&sys(&[&[1, 1]]), &[4]), BigUint::from(5u32));
        assert_eq!(count_system_brute(&sys(&[&[2, 3]]), &[6]), BigUint::from(2u32));
        assert_eq!(count_system_brute(&sys(&[&[2], &[3]]), &[4, 6]), BigUint::from(1u32));
    }

    #[test]
    fn representation_counts() {
        let l = |b: &[u64], ps: &[&[u64]]| LinearSet::new(b.to_vec(), ps.iter().map(|p| p.to_vec()).collect()).unwrap();
        assert_eq!(count_representations_brute(&l(&[0, 0], &[&[1, 0], &[0, 1]]), &[2, 3]), 1);
        assert_eq!(count_representations_brute(&l(&[0, 0], &[&[1, 0], &[0, 1], &[1, 1]]), &[1, 1]), 2);
        assert_eq!(count_representations_brute(&l(&[1, 0], &[&[2, 0]]), &[4, 0]), 0);
    }

    #[test]
    fn language_enumeration() {
        let bl = BoundedLanguage::parse("S -> a S b | eps\nbounds: a, b\n", 8).unwrap();
        let words: Vec<String> = enumerate_language(&bl, 4).into_iter().collect();
        assert_eq!(words, vec!["", "aabb", "ab"]);
        let empty = BoundedLanguage::parse("S -> S a\nbounds: a\n", 8).unwrap();
        assert!(enumerate_language(&empty, 6).is_empty());
        let text = "S -> A | B\nA -> a A d | C\nC -> b C c | eps\nB -> E F\nE -> a E b | eps\nF -> c F d | eps\nbounds: a, b, c, d\n";
        let two = BoundedLanguage::parse(text, 8).unwrap();
        let words: Vec<String> = enumerate_language(&two, 4).into_iter().collect();
        assert_eq!(words, vec!["", "aabb", "aadd", "ab", "abcd", "ad", "bbcc", "bc", "ccdd", "cd"]);
    }

    #[test]
    fn censuses() {
        let bl = BoundedLanguage::parse("S -> A b A\nA -> a A | eps\nbounds: a, b, a\n", 8).unwrap();
        let c = census_parikh(&bl, &[5, 5]);
        assert_eq!(c.get(&vec![3, 1]), Some(&4));
        assert_eq!(c.get(&vec![3, 2]), None);
    }
}
