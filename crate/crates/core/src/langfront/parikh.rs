//! Parikh images of context-free grammars.
//!
//! Each strongly connected group of nonterminals is solved as a system of
//! equations over semilinear sets (union and Minkowski sum) by Newton
//! iteration: `ν ← J(ν)* · F(ν)`, which reaches the least solution after as
//! many rounds as the group has nonterminals.

use super::grammar::{Grammar, Symbol};
use crate::semilinear::{LinearSet, SemilinearSet};

/// A semilinear set as a list of linear sets, used as a semiring element.
type Set = Vec<LinearSet>;

fn unit(dim: usize, i: usize) -> Set {
    let mut base = vec![0; dim];
    base[i] = 1;
    vec![LinearSet::singleton(base)]
}

fn one(dim: usize) -> Set {
    vec![LinearSet::singleton(vec![0; dim])]
}

/// Sorts periods and drops those generated by the others.
fn tidy(mut l: LinearSet) -> LinearSet {
    l.periods.sort();
    l.periods.dedup();
    let mut i = 0;
    while i < l.periods.len() {
        let others: Vec<Vec<u64>> = l
            .periods
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let monoid = LinearSet::singleton(vec![0; l.dim()]);
        let monoid = LinearSet { periods: others, ..monoid };
        if monoid.contains(&l.periods[i]) {
            l.periods.remove(i);
        } else {
            i += 1;
        }
    }
    l
}

/// Sufficient test for `a ⊆ b`.
fn covered(a: &LinearSet, b: &LinearSet) -> bool {
    if !b.contains(&a.base) {
        return false;
    }
    let monoid = LinearSet {
        base: vec![0; b.dim()],
        periods: b.periods.clone(),
    };
    a.periods.iter().all(|p| monoid.contains(p))
}

/// `c + Q⊕` and `c + p + (Q ∪ {p})⊕` together make `c + (Q ∪ {p})⊕`.
fn merge_pair(a: &LinearSet, b: &LinearSet) -> Option<LinearSet> {
    if b.periods.len() != a.periods.len() + 1 || !a.periods.iter().all(|q| b.periods.contains(q)) {
        return None;
    }
    let p = b.periods.iter().find(|q| !a.periods.contains(q))?;
    let shifted: Vec<u64> = a.base.iter().zip(p).map(|(x, y)| x + y).collect();
    (shifted == b.base).then(|| LinearSet {
        base: a.base.clone(),
        periods: b.periods.clone(),
    })
}

fn prune(set: Set) -> Set {
    let mut set = absorb(set);
    'merge: loop {
        for i in 0..set.len() {
            for j in 0..set.len() {
                if let Some(m) = merge_pair(&set[i], &set[j]) {
                    let (a, b) = (set[i].clone(), set[j].clone());
                    set.retain(|l| *l != a && *l != b);
                    set.push(m);
                    set = absorb(set);
                    continue 'merge;
                }
            }
        }
        return set;
    }
}

fn absorb(set: Set) -> Set {
    let mut set: Set = set.into_iter().map(tidy).collect();
    set.sort();
    set.dedup();
    // larger period lists first, so they absorb the smaller ones
    set.sort_by(|a, b| b.periods.len().cmp(&a.periods.len()).then_with(|| a.cmp(b)));
    let mut out: Set = Vec::new();
    for l in set {
        if !out.iter().any(|o| covered(&l, o)) {
            out.retain(|o| !covered(o, &l));
            out.push(l);
        }
    }
    out.sort();
    out
}

fn union(a: &Set, b: &Set) -> Set {
    prune(a.iter().chain(b).cloned().collect())
}

fn product(a: &Set, b: &Set) -> Set {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            let base = x.base.iter().zip(&y.base).map(|(p, q)| p + q).collect();
            let mut periods = x.periods.clone();
            periods.extend(y.periods.iter().cloned());
            out.push(LinearSet { base, periods });
        }
    }
    prune(out)
}

fn star(a: &Set, dim: usize) -> Set {
    let mut acc = one(dim);
    for l in a {
        let s = if l.base.iter().all(|&v| v == 0) {
            vec![l.clone()]
        } else {
            let mut periods = l.periods.clone();
            periods.push(l.base.clone());
            vec![
                LinearSet::singleton(vec![0; dim]),
                LinearSet {
                    base: l.base.clone(),
                    periods,
                },
            ]
        };
        acc = product(&acc, &prune(s));
    }
    acc
}

/// Strongly connected components, dependencies first.
fn components(g: &Grammar) -> Vec<Vec<usize>> {
    let n = g.nonterminal_count();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for r in g.rules() {
        for s in &r.rhs {
            if let Symbol::N(m) = *s {
                succ[r.lhs].push(m);
            }
        }
    }
    // iterative Tarjan
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, i)) = work.last() {
            if i < succ[v].len() {
                let w = succ[v][i];
                work.last_mut().expect("nonempty").1 += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("on stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort();
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// `ψ(L(g))` over the ordered terminal alphabet of `g`.
pub fn parikh_image(g: &Grammar) -> SemilinearSet {
    let dim = g.terminals().len();
    if g.is_empty_language() {
        return SemilinearSet::empty(dim);
    }
    let n = g.nonterminal_count();
    let mut value: Vec<Option<Set>> = vec![None; n];
    for comp in components(g) {
        let pos = |a: usize| comp.iter().position(|&c| c == a);
        let m = comp.len();
        let sym = |s: &Symbol, nu: &[Set], value: &[Option<Set>]| -> Set {
            match *s {
                Symbol::T(c) => unit(dim, g.letter_index(c).expect("terminal")),
                Symbol::N(b) => match pos(b) {
                    Some(i) => nu[i].clone(),
                    None => value[b].clone().expect("dependency solved"),
                },
            }
        };
        let apply = |nu: &[Set], value: &[Option<Set>]| -> Vec<Set> {
            comp.iter()
                .map(|&a| {
                    let mut acc: Set = Vec::new();
                    for r in g.rules().iter().filter(|r| r.lhs == a) {
                        let mut term = one(dim);
                        for s in &r.rhs {
                            term = product(&term, &sym(s, nu, value));
                        }
                        acc.extend(term);
                    }
                    prune(acc)
                })
                .collect()
        };
        let recursive = g.rules().iter().any(|r| {
            pos(r.lhs).is_some() && r.rhs.iter().any(|s| matches!(s, Symbol::N(b) if pos(*b).is_some()))
        });
        let empty: Vec<Set> = vec![Vec::new(); m];
        let mut nu = apply(&empty, &value);
        if recursive {
            for _ in 0..m {
                // Jacobian at ν
                let mut jac: Vec<Vec<Set>> = vec![vec![Vec::new(); m]; m];
                for r in g.rules() {
                    let Some(i) = pos(r.lhs) else { continue };
                    for (k, s) in r.rhs.iter().enumerate() {
                        let Symbol::N(b) = *s else { continue };
                        let Some(j) = pos(b) else { continue };
                        let mut term = one(dim);
                        for (l, o) in r.rhs.iter().enumerate() {
                            if l != k {
                                term = product(&term, &sym(o, &nu, &value));
                            }
                        }
                        jac[i][j] = union(&jac[i][j], &term);
                    }
                }
                let closure = matrix_star(jac, dim);
                let f = apply(&nu, &value);
                nu = (0..m)
                    .map(|i| {
                        let mut acc = Vec::new();
                        for (j, fj) in f.iter().enumerate() {
                            acc.extend(product(&closure[i][j], fj));
                        }
                        prune(acc)
                    })
                    .collect();
            }
        }
        for (i, &a) in comp.iter().enumerate() {
            value[a] = Some(nu[i].clone());
        }
    }
    let start = value[g.start()].clone().unwrap_or_default();
    SemilinearSet::new(dim, start).expect("uniform dimension")
}

/// `A*` by Kleene's elimination.
fn matrix_star(mut a: Vec<Vec<Set>>, dim: usize) -> Vec<Vec<Set>> {
    let m = a.len();
    for k in 0..m {
        let s = star(&a[k][k], dim);
        let prev = a.clone();
        for i in 0..m {
            if prev[i][k].is_empty() {
                continue;
            }
            let left = product(&prev[i][k], &s);
            for j in 0..m {
                if prev[k][j].is_empty() {
                    continue;
                }
                a[i][j] = union(&a[i][j], &product(&left, &prev[k][j]));
            }
        }
    }
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = union(&row[i], &one(dim));
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semilinear::sl_member;

    fn image(text: &str) -> SemilinearSet {
        parikh_image(&Grammar::parse(text).unwrap().grammar)
    }

    #[test]
    fn balanced_words() {
        let s = image("S -> a S b | eps\n");
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(sl_member(&s, &[i, j]).unwrap(), i == j);
            }
        }
    }

    #[test]
    fn single_letter_and_plus() {
        let s = image("S -> a\n");
        assert_eq!(s.components, vec![LinearSet::singleton(vec![1])]);
        let s = image("S -> S S | a\n");
        for n in 0..12 {
            assert_eq!(sl_member(&s, &[n]).unwrap(), n >= 1);
        }
    }

    #[test]
    fn mutual_recursion() {
        // A: a^n b^n c^m with m ≤ 2n, B pumps c's alongside
        let s = image("S -> A\nA -> a A B | eps\nB -> b | b c | b c c\n");
        for a in 0..6u64 {
            for b in 0..6u64 {
                for c in 0..12u64 {
                    let want = a == b && c <= 2 * a;
                    assert_eq!(sl_member(&s, &[a, b, c]).unwrap(), want, "{a} {b} {c}");
                }
            }
        }
    }
}
