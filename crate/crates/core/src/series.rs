//! Generating functions of counting functions as sums of terms
//! `x^c / Π (1 − x^{a_j})`, and their truncated Taylor expansion.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{check_dim, Error, Result};
use crate::langfront::CountingFunction;
use crate::partition::DiophantineSystem;

/// `x^numerator · Π_j 1/(1 − x^{denominators[j]})`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesTerm {
    pub numerator: Vec<u64>,
    pub denominators: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSeriesExpr {
    vars: usize,
    terms: Vec<SeriesTerm>,
}

impl RationalSeriesExpr {
    pub fn new(vars: usize, terms: Vec<SeriesTerm>) -> Result<Self> {
        for t in &terms {
            check_dim(vars, t.numerator.len())?;
            for d in &t.denominators {
                check_dim(vars, d.len())?;
                if d.iter().all(|&e| e == 0) {
                    return Err(Error::Invariant("denominator monomial 1".into()));
                }
            }
        }
        Ok(RationalSeriesExpr { vars, terms })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &[SeriesTerm] {
        &self.terms
    }

    /// The series of a counting function, one term per summand.
    pub fn of_counting_function(f: &CountingFunction) -> Self {
        let terms = f
            .summands()
            .iter()
            .map(|s| SeriesTerm {
                numerator: s.block.offset.clone(),
                denominators: s.block.columns.clone(),
            })
            .collect();
        RationalSeriesExpr { vars: f.dim(), terms }
    }
}

/// `Σ_i x^{c_i} Π_j 1/(1 − x^{A_i e_j})` over the systems `A_i x + c_i = n`.
pub fn generating_function(systems: &[DiophantineSystem]) -> Result<RationalSeriesExpr> {
    let vars = systems.first().map(|s| s.rows()).unwrap_or(0);
    let terms = systems
        .iter()
        .map(|s| SeriesTerm {
            numerator: s.offset().to_vec(),
            denominators: s.columns(),
        })
        .collect();
    RationalSeriesExpr::new(vars, terms)
}

/// Coefficients of every monomial of total degree at most `degree`;
/// monomials absent from the map have coefficient zero.
pub fn taylor_coefficients(e: &RationalSeriesExpr, degree: u64) -> BTreeMap<Vec<u64>, BigUint> {
    let total = |v: &[u64]| v.iter().sum::<u64>();
    let mut out: BTreeMap<Vec<u64>, BigUint> = BTreeMap::new();
    for term in &e.terms {
        if total(&term.numerator) > degree {
            continue;
        }
        let mut acc: BTreeMap<Vec<u64>, BigUint> = BTreeMap::new();
        acc.insert(term.numerator.clone(), BigUint::one());
        for m in &term.denominators {
            let step = total(m);
            let mut next: BTreeMap<Vec<u64>, BigUint> = BTreeMap::new();
            for (x, c) in &acc {
                let mut y = x.clone();
                while total(&y) <= degree {
                    *next.entry(y.clone()).or_default() += c;
                    for (yi, mi) in y.iter_mut().zip(m) {
                        *yi += mi;
                    }
                    if step == 0 {
                        break;
                    }
                }
            }
            acc = next;
        }
        for (x, c) in acc {
            *out.entry(x).or_default() += c;
        }
    }
    out
}

fn monomial(v: &[u64]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

impl fmt::Display for SeriesTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = monomial(&self.numerator);
        let dens: Vec<String> = self.denominators.iter().map(|d| format!("(1 - {})", monomial(d))).collect();
        match dens.len() {
            0 => write!(f, "{num}"),
            1 => write!(f, "{num}/{}", dens[0]),
            _ => write!(f, "{num}/({})", dens.concat()),
        }
    }
}

impl fmt::Display for RationalSeriesExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(rows: &[&[u64]], offset: Option<&[u64]>) -> DiophantineSystem {
        DiophantineSystem::new(rows.iter().map(|r| r.to_vec()).collect(), offset.map(|o| o.to_vec())).unwrap()
    }

    #[test]
    fn geometric_products() {
        let e = generating_function(&[sys(&[&[1, 0], &[0, 1]], None)]).unwrap();
        assert_eq!(e.to_string(), "1/((1 - x1)(1 - x2))");
        let c = taylor_coefficients(&e, 4);
        assert_eq!(c.len(), 15);
        assert!(c.values().all(|v| v.is_one()));

        let e = generating_function(&[sys(&[&[1, 1]], None)]).unwrap();
        let c = taylor_coefficients(&e, 4);
        for n in 0..=4u64 {
            assert_eq!(c[&vec![n]], BigUint::from(n + 1));
        }
    }

    #[test]
    fn shifted_numerator() {
        let e = generating_function(&[sys(&[&[0], &[1]], Some(&[1, 1]))]).unwrap();
        assert_eq!(e.to_string(), "x1 x2/(1 - x2)");
        let c = taylor_coefficients(&e, 4);
        assert_eq!(c.keys().cloned().collect::<Vec<_>>(), vec![vec![1, 1], vec![1, 2], vec![1, 3]]);
    }

    #[test]
    fn single_geometric_series() {
        let e = RationalSeriesExpr::new(
            1,
            vec![SeriesTerm {
                numerator: vec![0],
                denominators: vec![vec![1]],
            }],
        )
        .unwrap();
        let c = taylor_coefficients(&e, 5);
        assert_eq!(c.len(), 6);
        assert!(RationalSeriesExpr::new(1, vec![SeriesTerm { numerator: vec![0], denominators: vec![vec![0]] }]).is_err());
    }
}
