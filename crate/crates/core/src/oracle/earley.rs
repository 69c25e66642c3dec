//! Earley membership test, used only as an oracle.

use std::collections::HashSet;

use crate::langfront::{Grammar, Symbol};

pub struct Recognizer<'g> {
    grammar: &'g Grammar,
    nullable: Vec<bool>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Item {
    rule: usize,
    dot: usize,
    origin: usize,
}

impl<'g> Recognizer<'g> {
    pub fn new(grammar: &'g Grammar) -> Self {
        let n = grammar.nonterminal_count();
        let mut nullable = vec![false; n];
        loop {
            let mut changed = false;
            for r in grammar.rules() {
                if !nullable[r.lhs] && r.rhs.iter().all(|s| matches!(s, Symbol::N(m) if nullable[*m])) {
                    nullable[r.lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Recognizer { grammar, nullable }
    }

    pub fn accepts(&self, word: &str) -> bool {
        let letters: Vec<char> = word.chars().collect();
        let rules = self.grammar.rules();
        let mut sets: Vec<Vec<Item>> = vec![Vec::new(); letters.len() + 1];
        let mut seen: Vec<HashSet<Item>> = vec![HashSet::new(); letters.len() + 1];
        let add = |sets: &mut Vec<Vec<Item>>, seen: &mut Vec<HashSet<Item>>, k: usize, it: Item| {
            if seen[k].insert(it) {
                sets[k].push(it);
            }
        };
        for (i, r) in rules.iter().enumerate() {
            if r.lhs == self.grammar.start() {
                add(&mut sets, &mut seen, 0, Item { rule: i, dot: 0, origin: 0 });
            }
        }
        for k in 0..=letters.len() {
            let mut idx = 0;
            while idx < sets[k].len() {
                let it = sets[k][idx];
                idx += 1;
                let rule = &rules[it.rule];
                match rule.rhs.get(it.dot) {
                    None => {
                        // completion
                        let waiting: Vec<Item> = sets[it.origin]
                            .iter()
                            .filter(|w| rules[w.rule].rhs.get(w.dot) == Some(&Symbol::N(rule.lhs)))
                            .copied()
                            .collect();
                        for w in waiting {
                            add(&mut sets, &mut seen, k, Item { dot: w.dot + 1, ..w });
                        }
                    }
                    Some(Symbol::N(m)) => {
                        for (i, r) in rules.iter().enumerate() {
                            if r.lhs == *m {
                                add(&mut sets, &mut seen, k, Item { rule: i, dot: 0, origin: k });
                            }
                        }
                        if self.nullable[*m] {
                            add(&mut sets, &mut seen, k, Item { dot: it.dot + 1, ..it });
                        }
                    }
                    Some(Symbol::T(c)) => {
                        if k < letters.len() && letters[k] == *c {
                            add(&mut sets, &mut seen, k + 1, Item { dot: it.dot + 1, ..it });
                        }
                    }
                }
            }
        }
        sets[letters.len()].iter().any(|it| {
            it.origin == 0 && rules[it.rule].lhs == self.grammar.start() && it.dot == rules[it.rule].rhs.len()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_and_nullable() {
        let g = Grammar::parse("S -> a S b | eps\n").unwrap().grammar;
        let r = Recognizer::new(&g);
        for (w, ok) in [("", true), ("ab", true), ("aabb", true), ("aab", false), ("ba", false)] {
            assert_eq!(r.accepts(w), ok, "{w:?}");
        }
        let g = Grammar::parse("S -> A A a\nA -> eps | b\n").unwrap().grammar;
        let r = Recognizer::new(&g);
        for (w, ok) in [("a", true), ("ba", true), ("bba", true), ("bbba", false)] {
            assert_eq!(r.accepts(w), ok, "{w:?}");
        }
    }
}
