//! A regular cross-section of the block morphism: among all exponent
//! vectors with the same image, keep the lexicographically least block word.

use std::collections::{BTreeSet, HashMap};

use super::morphism::{block_letter, Morphism, Transducer};

/// Deterministic automaton over the block letters `a_1 … a_k`.
#[derive(Clone, Debug)]
pub struct CrossSection {
    k: usize,
    /// `delta[s][j]`: target on `a_{j+1}`, `None` for the dead state
    delta: Vec<Vec<Option<usize>>>,
    accepting: Vec<bool>,
}

/// Competitor states whose block word is already lexicographically smaller,
/// and the transducer state of the word being read.
type Config = (BTreeSet<usize>, usize);

fn step_all(t: &Transducer, states: &BTreeSet<usize>, c: char) -> BTreeSet<usize> {
    states
        .iter()
        .flat_map(|&q| t.moves.get(&(q, c)).into_iter().flatten().map(|&(to, _)| to))
        .collect()
}

/// Reads `u_j` from the configuration, the own path starting block `j`.
fn read_block(t: &Transducer, m: &Morphism, (better, mine): &Config, j: usize) -> Option<Config> {
    let u: Vec<char> = m.image(j).chars().collect();
    let outs = t.moves.get(&(*mine, u[0]))?;
    let own = outs.iter().find(|(_, o)| *o == Some(block_letter(j)))?.0;
    let mut better = step_all(t, better, u[0]);
    // siblings starting an earlier block win from here on
    for &(to, o) in outs {
        if let Some(c) = o {
            if c < block_letter(j) {
                better.insert(to);
            }
        }
    }
    let mut mine = own;
    if better.contains(&mine) {
        return None;
    }
    for &c in &u[1..] {
        better = step_all(t, &better, c);
        mine = t.moves[&(mine, c)][0].0;
        if better.contains(&mine) {
            return None;
        }
    }
    Some((better, mine))
}

impl CrossSection {
    pub fn new(m: &Morphism) -> Self {
        let t = m.block_transducer();
        let k = m.len();
        let mut index: HashMap<Config, usize> = HashMap::new();
        let mut configs: Vec<Config> = Vec::new();
        let start: Config = (BTreeSet::new(), t.start);
        index.insert(start.clone(), 0);
        configs.push(start);
        let mut delta = Vec::new();
        let mut s = 0;
        while s < configs.len() {
            let cfg = configs[s].clone();
            let mut row = vec![None; k];
            // own state is a boundary: the last block used
            for (j, slot) in row.iter_mut().enumerate().skip(cfg.1) {
                if let Some(next) = read_block(&t, m, &cfg, j) {
                    let id = *index.entry(next.clone()).or_insert_with(|| {
                        configs.push(next);
                        configs.len() - 1
                    });
                    *slot = Some(id);
                }
            }
            delta.push(row);
            s += 1;
        }
        let accepting = configs
            .iter()
            .map(|(better, mine)| t.finals[*mine] && !better.iter().any(|&q| t.finals[q]))
            .collect();
        CrossSection { k, delta, accepting }
    }

    pub fn states(&self) -> usize {
        self.delta.len()
    }

    /// Whether the block word with exponents `l` lies in the cross-section.
    pub fn accepts_exponents(&self, l: &[u64]) -> bool {
        let mut s = 0;
        for (j, &n) in l.iter().enumerate() {
            for _ in 0..n {
                match self.delta[s][j] {
                    Some(next) => s = next,
                    None => return false,
                }
            }
        }
        self.accepting[s]
    }

    pub(crate) fn as_transducer(&self) -> Transducer {
        let mut t = Transducer::new(self.states(), 0);
        t.finals.clone_from(&self.accepting);
        for (s, row) in self.delta.iter().enumerate() {
            for (j, next) in row.iter().enumerate() {
                if let Some(n) = next {
                    t.add(s, block_letter(j), *n, Some(block_letter(j)));
                }
            }
        }
        t
    }

    pub fn blocks(&self) -> usize {
        self.k
    }
}

pub fn cross_section(m: &Morphism) -> CrossSection {
    CrossSection::new(m)
}
