use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    T(char),
    N(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: usize,
    pub rhs: Vec<Symbol>,
}

/// A context-free grammar. Nonterminal 0 is the start symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    terminals: Vec<char>,
    names: Vec<String>,
    rules: Vec<Rule>,
}

/// Grammar file contents: the grammar and the optional bounding words.
#[derive(Clone, Debug)]
pub struct GrammarFile {
    pub grammar: Grammar,
    pub bounds: Option<Vec<String>>,
}

fn is_nonterminal(tok: &str) -> bool {
    tok.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

impl Grammar {
    /// Builds and reduces a grammar. Terminals outside `extra_letters` are
    /// added to the alphabet, which is kept sorted.
    pub fn new(names: Vec<String>, rules: Vec<Rule>, extra_letters: &[char]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Argument("grammar needs a start symbol".into()));
        }
        let mut letters: BTreeSet<char> = extra_letters.iter().copied().collect();
        for r in &rules {
            if r.lhs >= names.len() {
                return Err(Error::Argument(format!("rule for unknown nonterminal {}", r.lhs)));
            }
            for s in &r.rhs {
                match *s {
                    Symbol::T(c) => {
                        letters.insert(c);
                    }
                    Symbol::N(n) if n >= names.len() => {
                        return Err(Error::Argument(format!("unknown nonterminal {n}")));
                    }
                    Symbol::N(_) => {}
                }
            }
        }
        let g = Grammar {
            terminals: letters.into_iter().collect(),
            names,
            rules,
        };
        Ok(g.reduced())
    }

    pub fn parse(text: &str) -> Result<GrammarFile> {
        let mut names: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut raw: Vec<(usize, usize, Vec<Vec<String>>)> = Vec::new();
        let mut bounds = None;
        for (i, line) in text.lines().enumerate() {
            let ln = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("bounds:") {
                let words: Vec<String> = rest.split(',').map(|w| w.split_whitespace().collect()).collect();
                if words.iter().any(|w: &String| w.is_empty() || !w.chars().all(|c| c.is_ascii_lowercase())) {
                    return Err(Error::Parse {
                        line: ln,
                        message: "bounding words must be nonempty lowercase words".into(),
                    });
                }
                bounds = Some(words);
                continue;
            }
            let (lhs, rhs) = line.split_once("->").ok_or(Error::Parse {
                line: ln,
                message: "expected \"A -> …\"".into(),
            })?;
            let lhs = lhs.trim();
            if !is_nonterminal(lhs) || lhs.contains(char::is_whitespace) {
                return Err(Error::Parse {
                    line: ln,
                    message: format!("left-hand side {lhs:?} is not a nonterminal"),
                });
            }
            let id = *index.entry(lhs.to_string()).or_insert_with(|| {
                names.push(lhs.to_string());
                names.len() - 1
            });
            let alts = rhs
                .split('|')
                .map(|alt| alt.split_whitespace().map(str::to_string).collect())
                .collect();
            raw.push((ln, id, alts));
        }
        if names.is_empty() {
            return Err(Error::Parse { line: 1, message: "no rules".into() });
        }
        let mut rules = Vec::new();
        for (ln, lhs, alts) in raw {
            for alt in alts {
                let mut rhs = Vec::new();
                for tok in alt {
                    if tok == "eps" {
                        continue;
                    }
                    if is_nonterminal(&tok) {
                        let id = *index.entry(tok.clone()).or_insert_with(|| {
                            names.push(tok.clone());
                            names.len() - 1
                        });
                        rhs.push(Symbol::N(id));
                    } else if tok.chars().all(|c| c.is_ascii_lowercase()) {
                        rhs.extend(tok.chars().map(Symbol::T));
                    } else {
                        return Err(Error::Parse {
                            line: ln,
                            message: format!("bad symbol {tok:?}"),
                        });
                    }
                }
                rules.push(Rule { lhs, rhs });
            }
        }
        let letters: Vec<char> = bounds.iter().flatten().flat_map(|w: &String| w.chars()).collect();
        let grammar = Grammar::new(names, rules, &letters).map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?;
        Ok(GrammarFile { grammar, bounds })
    }

    /// Drops unproductive, then unreachable, nonterminals. The start symbol
    /// survives with no rules when the language is empty.
    fn reduced(self) -> Grammar {
        let n = self.names.len();
        let mut productive = vec![false; n];
        loop {
            let mut changed = false;
            for r in &self.rules {
                if !productive[r.lhs]
                    && r.rhs.iter().all(|s| match s {
                        Symbol::T(_) => true,
                        Symbol::N(m) => productive[*m],
                    })
                {
                    productive[r.lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let useful: Vec<&Rule> = self
            .rules
            .iter()
            .filter(|r| {
                productive[r.lhs] && r.rhs.iter().all(|s| matches!(s, Symbol::T(_)) || matches!(s, Symbol::N(m) if productive[*m]))
            })
            .collect();
        let mut reachable = vec![false; n];
        reachable[0] = true;
        let mut stack = vec![0usize];
        while let Some(a) = stack.pop() {
            for r in useful.iter().filter(|r| r.lhs == a) {
                for s in &r.rhs {
                    if let Symbol::N(m) = *s {
                        if !reachable[m] {
                            reachable[m] = true;
                            stack.push(m);
                        }
                    }
                }
            }
        }
        let mut renumber = vec![usize::MAX; n];
        let mut names = Vec::new();
        for i in 0..n {
            if reachable[i] && (productive[i] || i == 0) {
                renumber[i] = names.len();
                names.push(self.names[i].clone());
            }
        }
        let rules = useful
            .into_iter()
            .filter(|r| reachable[r.lhs])
            .map(|r| Rule {
                lhs: renumber[r.lhs],
                rhs: r
                    .rhs
                    .iter()
                    .map(|s| match *s {
                        Symbol::N(m) => Symbol::N(renumber[m]),
                        t => t,
                    })
                    .collect(),
            })
            .collect();
        Grammar {
            terminals: self.terminals,
            names,
            rules,
        }
    }

    pub fn terminals(&self) -> &[char] {
        &self.terminals
    }

    pub fn nonterminal_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, n: usize) -> &str {
        &self.names[n]
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn is_empty_language(&self) -> bool {
        self.rules.is_empty()
    }

    /// Position of a letter in the sorted alphabet.
    pub fn letter_index(&self, c: char) -> Option<usize> {
        self.terminals.binary_search(&c).ok()
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in 0..self.names.len() {
            let alts: Vec<String> = self
                .rules
                .iter()
                .filter(|r| r.lhs == a)
                .map(|r| {
                    if r.rhs.is_empty() {
                        return "eps".to_string();
                    }
                    r.rhs
                        .iter()
                        .map(|s| match *s {
                            Symbol::T(c) => c.to_string(),
                            Symbol::N(m) => self.names[m].clone(),
                        })
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            if !alts.is_empty() {
                writeln!(f, "{} -> {}", self.names[a], alts.join(" | "))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reduce() {
        let gf = Grammar::parse("S -> a S b | eps\nT -> c\nU -> U\nbounds: a, b\n").unwrap();
        let g = gf.grammar;
        assert_eq!(g.nonterminal_count(), 1);
        assert_eq!(g.rules().len(), 2);
        assert_eq!(g.terminals(), &['a', 'b', 'c']);
        assert_eq!(gf.bounds.unwrap(), vec!["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn empty_language() {
        let g = Grammar::parse("S -> S a\n").unwrap().grammar;
        assert!(g.is_empty_language());
        assert_eq!(g.nonterminal_count(), 1);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = Grammar::parse("S -> a\nS = b\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = Grammar::parse("S -> a B1 $\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }
}
