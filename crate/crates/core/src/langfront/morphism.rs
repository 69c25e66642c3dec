//! The block morphism `a_i ↦ u_i`, letter transducers, and the product of
//! a grammar with a transducer.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::grammar::{Grammar, Rule, Symbol};
use crate::error::{Error, Result};

/// Name of the `i`-th block letter `a_{i+1}` inside derived grammars.
pub fn block_letter(i: usize) -> char {
    (b'a' + i as u8) as char
}

/// `ψ(w)` over the ordered alphabet.
pub fn parikh_vector(w: &str, alphabet: &[char]) -> Result<Vec<u64>> {
    let mut v = vec![0u64; alphabet.len()];
    for c in w.chars() {
        let i = alphabet
            .binary_search(&c)
            .map_err(|_| Error::UnknownLetter(c.to_string()))?;
        v[i] += 1;
    }
    Ok(v)
}

/// `ζ : a_i ↦ u_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<Vec<char>>,
}

impl Morphism {
    pub fn new(images: &[&str]) -> Result<Self> {
        Self::from_words(images.iter().map(|s| s.to_string()).collect())
    }

    pub fn from_words(images: Vec<String>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::Argument("at least one bounding word is needed".into()));
        }
        if images.len() > 26 {
            return Err(Error::Argument("at most 26 bounding words are supported".into()));
        }
        if images.iter().any(|w| w.is_empty()) {
            return Err(Error::Argument("bounding words must be nonempty".into()));
        }
        Ok(Morphism {
            images: images.into_iter().map(|w| w.chars().collect()).collect(),
        })
    }

    /// Number of blocks `k`.
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, i: usize) -> String {
        self.images[i].iter().collect()
    }

    pub fn images(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.image(i)).collect()
    }

    /// `u_1^{l_1} … u_k^{l_k}`
    pub fn apply_exponents(&self, l: &[u64]) -> String {
        let mut w = String::new();
        for (u, &n) in self.images.iter().zip(l) {
            for _ in 0..n {
                w.extend(u.iter());
            }
        }
        w
    }

    /// `ψ(ζ(a^l))` as a linear map: the Parikh vector of `u_i` over `alphabet`.
    pub fn image_parikh(&self, i: usize, alphabet: &[char]) -> Result<Vec<u64>> {
        parikh_vector(&self.image(i), alphabet)
    }

    /// Whether `w ∈ u_1* … u_k*`.
    pub fn spans(&self, w: &str) -> bool {
        let w: Vec<char> = w.chars().collect();
        let n = w.len();
        // reach[p]: positions reachable using blocks ≥ current
        let mut reach = vec![false; n + 1];
        reach[0] = true;
        for u in &self.images {
            for p in 0..=n {
                if reach[p] && p + u.len() <= n && w[p..p + u.len()] == u[..] {
                    reach[p + u.len()] = true;
                }
            }
        }
        reach[n]
    }

    /// Reads a word over the source alphabet and outputs `a_j` at the start
    /// of every block `u_j`; blocks are used in non-decreasing order.
    pub(crate) fn block_transducer(&self) -> Transducer {
        let k = self.len();
        // states: boundary i (last block ≤ i) is i; inside block j at offset o
        let mut inner: Vec<usize> = Vec::with_capacity(k);
        let mut next = k;
        for u in &self.images {
            inner.push(next);
            next += u.len() - 1;
        }
        let state = |j: usize, o: usize| -> usize {
            if o == self.images[j].len() {
                j
            } else {
                inner[j] + o - 1
            }
        };
        let mut t = Transducer::new(next, 0);
        for i in 0..k {
            t.finals[i] = true;
            for j in i..k {
                let u = &self.images[j];
                t.add(i, u[0], state(j, 1), Some(block_letter(j)));
            }
        }
        for (j, u) in self.images.iter().enumerate() {
            for o in 1..u.len() {
                t.add(state(j, o), u[o], state(j, o + 1), None);
            }
        }
        t
    }
}

/// Nondeterministic letter-to-letter-or-empty transducer.
#[derive(Clone, Debug)]
pub(crate) struct Transducer {
    pub start: usize,
    pub finals: Vec<bool>,
    /// `(from, input) → [(to, output)]`
    pub moves: HashMap<(usize, char), Vec<(usize, Option<char>)>>,
}

impl Transducer {
    pub fn new(states: usize, start: usize) -> Self {
        Transducer {
            start,
            finals: vec![false; states],
            moves: HashMap::new(),
        }
    }

    pub fn states(&self) -> usize {
        self.finals.len()
    }

    pub fn add(&mut self, from: usize, input: char, to: usize, output: Option<char>) {
        self.moves.entry((from, input)).or_default().push((to, output));
    }
}

#[derive(Default)]
struct Triples {
    set: BTreeSet<(usize, Symbol, usize)>,
    by_left: HashMap<(Symbol, usize), BTreeSet<usize>>,
    by_right: HashMap<(Symbol, usize), BTreeSet<usize>>,
    queue: VecDeque<(usize, Symbol, usize)>,
}

impl Triples {
    fn insert(&mut self, tr: (usize, Symbol, usize)) {
        if self.set.insert(tr) {
            self.by_left.entry((tr.1, tr.0)).or_default().insert(tr.2);
            self.by_right.entry((tr.1, tr.2)).or_default().insert(tr.0);
            self.queue.push_back(tr);
        }
    }
}

/// Grammar for the outputs of `t` on the words of `g`, over the alphabet
/// `letters`. Built from the productive triples `(p, X, q)` only; `t` has
/// at most one output per `(from, input, to)`.
pub(crate) fn transduce(g: &Grammar, t: &Transducer, letters: &[char]) -> Result<Grammar> {
    // binarize: every rule gets at most two right-hand symbols
    let mut names: Vec<String> = (0..g.nonterminal_count()).map(|n| g.name(n).to_string()).collect();
    let mut rules: Vec<(usize, Vec<Symbol>)> = Vec::new();
    for r in g.rules() {
        let mut lhs = r.lhs;
        let mut rhs: &[Symbol] = &r.rhs;
        while rhs.len() > 2 {
            let fresh = names.len();
            names.push(format!("{}'{}", g.name(r.lhs), fresh));
            rules.push((lhs, vec![rhs[0], Symbol::N(fresh)]));
            lhs = fresh;
            rhs = &rhs[1..];
        }
        rules.push((lhs, rhs.to_vec()));
    }
    let n_states = t.states();
    let mut tri = Triples::default();
    for (&(p, c), outs) in &t.moves {
        for &(q, _) in outs {
            tri.insert((p, Symbol::T(c), q));
        }
    }
    for (lhs, rhs) in &rules {
        if rhs.is_empty() {
            for p in 0..n_states {
                tri.insert((p, Symbol::N(*lhs), p));
            }
        }
    }
    // rules by the symbols they mention
    let mut unit: HashMap<Symbol, Vec<usize>> = HashMap::new();
    let mut first: HashMap<Symbol, Vec<(usize, Symbol)>> = HashMap::new();
    let mut second: HashMap<Symbol, Vec<(usize, Symbol)>> = HashMap::new();
    for (lhs, rhs) in &rules {
        match rhs.as_slice() {
            [x] => unit.entry(*x).or_default().push(*lhs),
            [x, y] => {
                first.entry(*x).or_default().push((*lhs, *y));
                second.entry(*y).or_default().push((*lhs, *x));
            }
            _ => {}
        }
    }
    while let Some((p, x, q)) = tri.queue.pop_front() {
        let mut fresh: Vec<(usize, Symbol, usize)> = Vec::new();
        for &a in unit.get(&x).into_iter().flatten() {
            fresh.push((p, Symbol::N(a), q));
        }
        for &(a, y) in first.get(&x).into_iter().flatten() {
            for &s in tri.by_left.get(&(y, q)).into_iter().flatten() {
                fresh.push((p, Symbol::N(a), s));
            }
        }
        for &(a, w) in second.get(&x).into_iter().flatten() {
            for &o in tri.by_right.get(&(w, p)).into_iter().flatten() {
                fresh.push((o, Symbol::N(a), q));
            }
        }
        for tr in fresh {
            tri.insert(tr);
        }
    }
    let Triples { set: triples, by_left, .. } = tri;
    // emit the grammar of productive triples
    let mut index: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    let mut out_names = vec!["S".to_string()];
    let mut id = |p: usize, a: usize, q: usize, out_names: &mut Vec<String>| -> usize {
        *index.entry((p, a, q)).or_insert_with(|| {
            out_names.push(format!("{}_{}_{}", names[a], p, q));
            out_names.len() - 1
        })
    };
    let mut out_rules: Vec<Rule> = Vec::new();
    let sym = |p: usize, x: Symbol, q: usize, id: &mut dyn FnMut(usize, usize, usize) -> usize| -> Vec<Symbol> {
        match x {
            Symbol::N(a) => vec![Symbol::N(id(p, a, q))],
            Symbol::T(c) => {
                let out = t.moves[&(p, c)].iter().find(|(to, _)| *to == q).and_then(|(_, o)| *o);
                out.into_iter().map(Symbol::T).collect()
            }
        }
    };
    for q in 0..n_states {
        if t.finals[q] && triples.contains(&(t.start, Symbol::N(g.start()), q)) {
            let s = id(t.start, g.start(), q, &mut out_names);
            out_rules.push(Rule { lhs: 0, rhs: vec![Symbol::N(s)] });
        }
    }
    for (lhs, rhs) in &rules {
        let a = Symbol::N(*lhs);
        match rhs.as_slice() {
            [] => {
                for p in 0..n_states {
                    let l = id(p, *lhs, p, &mut out_names);
                    out_rules.push(Rule { lhs: l, rhs: vec![] });
                }
            }
            [x] => {
                for &(p, _, q) in triples.iter().filter(|tr| tr.1 == *x) {
                    debug_assert!(triples.contains(&(p, a, q)));
                    let l = id(p, *lhs, q, &mut out_names);
                    let r = sym(p, *x, q, &mut |p, a, q| id(p, a, q, &mut out_names));
                    out_rules.push(Rule { lhs: l, rhs: r });
                }
            }
            [x, y] => {
                let lefts: Vec<(usize, usize)> = triples
                    .iter()
                    .filter(|tr| tr.1 == *x)
                    .map(|tr| (tr.0, tr.2))
                    .collect();
                for (p, r) in lefts {
                    for &s in by_left.get(&(*y, r)).into_iter().flatten() {
                        let l = id(p, *lhs, s, &mut out_names);
                        let mut body = sym(p, *x, r, &mut |p, a, q| id(p, a, q, &mut out_names));
                        body.extend(sym(r, *y, s, &mut |p, a, q| id(p, a, q, &mut out_names)));
                        out_rules.push(Rule { lhs: l, rhs: body });
                    }
                }
            }
            _ => unreachable!("binarized"),
        }
    }
    Grammar::new(out_names, out_rules, letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parikh_vectors() {
        assert_eq!(parikh_vector("abba", &['a', 'b']).unwrap(), vec![2, 2]);
        assert_eq!(parikh_vector("", &['a', 'b']).unwrap(), vec![0, 0]);
        assert!(matches!(parikh_vector("abc", &['a', 'b']), Err(Error::UnknownLetter(_))));
    }

    #[test]
    fn spans_bounding_words() {
        let m = Morphism::new(&["ab", "b"]).unwrap();
        assert!(m.spans("ababbb"));
        assert!(m.spans(""));
        assert!(!m.spans("ba"));
        assert!(!m.spans("bab"));
        assert_eq!(m.apply_exponents(&[2, 1]), "ababb");
        assert!(Morphism::new(&["a", ""]).is_err());
    }
}
