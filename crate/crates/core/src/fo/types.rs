use super::formula::{Node, QFFormula, Term};
use super::FinStructure;
use itertools::Itertools;
use std::collections::{BTreeSet, HashSet};

/// Relations of a structure as dense truth tables, for the inner loops.
#[derive(Debug, Clone)]
pub(crate) struct Dense {
    pub n: usize,
    pub rels: Vec<(String, usize, Vec<bool>)>,
}

impl Dense {
    pub fn new(s: &FinStructure) -> Self {
        let rels = s
            .relations
            .iter()
            .map(|(name, r)| {
                let mut table = vec![false; s.n.pow(r.arity as u32)];
                for t in &r.tuples {
                    table[Self::code(s.n, t)] = true;
                }
                (name.clone(), r.arity, table)
            })
            .collect();
        Dense { n: s.n, rels }
    }

    fn code(n: usize, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &x| acc * n + x)
    }

    pub fn holds(&self, rel: usize, t: &[usize]) -> bool {
        self.rels[rel].2[Self::code(self.n, t)]
    }
}

/// Position of a tuple entry relative to a parameter set: a named parameter
/// or the `j`-th distinct element outside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Param(usize),
    Fresh(usize),
}

/// The quantifier-free type of a tuple over a parameter set: the equality
/// pattern of the tuple against the parameters, plus every true atom that
/// mentions a fresh element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QFType {
    pub slots: Vec<Slot>,
    pub facts: BTreeSet<(String, Vec<Slot>)>,
}

impl QFType {
    /// A formula in the tuple's variables, with parameters as constants,
    /// that is satisfied exactly by the tuples of this type over `params`.
    pub fn characteristic_formula(&self, params: &[usize], n: &FinStructure, vars: &[String]) -> QFFormula {
        let k = self.slots.len();
        let mut lits = Vec::new();
        let fresh_rep: Vec<(usize, usize)> = self
            .slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s {
                Slot::Fresh(j) => Some((*j, i)),
                Slot::Param(_) => None,
            })
            .unique_by(|(j, _)| *j)
            .collect();
        for (i, s) in self.slots.iter().enumerate() {
            match s {
                Slot::Param(b) => lits.push(Node::Eq(Term::Var(i), Term::Const(*b))),
                Slot::Fresh(j) => {
                    let rep = fresh_rep.iter().find(|(jj, _)| jj == j).expect("listed").1;
                    if rep != i {
                        lits.push(Node::Eq(Term::Var(i), Term::Var(rep)));
                    }
                }
            }
        }
        for (a, &(_, ia)) in fresh_rep.iter().enumerate() {
            for &(_, ib) in &fresh_rep[a + 1..] {
                lits.push(Node::Eq(Term::Var(ia), Term::Var(ib)).not());
            }
            for &b in params {
                lits.push(Node::Eq(Term::Var(ia), Term::Const(b)).not());
            }
        }
        let terms: Vec<(Term, Slot)> = fresh_rep
            .iter()
            .map(|&(j, i)| (Term::Var(i), Slot::Fresh(j)))
            .chain(params.iter().map(|&b| (Term::Const(b), Slot::Param(b))))
            .collect();
        for (rel, r) in &n.relations {
            for combo in (0..r.arity).map(|_| 0..terms.len()).multi_cartesian_product() {
                let slots: Vec<Slot> = combo.iter().map(|&c| terms[c].1).collect();
                if !slots.iter().any(|s| matches!(s, Slot::Fresh(_))) {
                    continue;
                }
                let atom = Node::Atom {
                    rel: rel.clone(),
                    args: combo.iter().map(|&c| terms[c].0).collect(),
                };
                lits.push(if self.facts.contains(&(rel.clone(), slots)) { atom } else { atom.not() });
            }
        }
        debug_assert!(vars.len() == k);
        QFFormula {
            vars: vars.to_vec(),
            body: Node::all(lits),
        }
    }
}

/// The quantifier-free type of `tuple` over `params` in `n`.
pub fn qf_type(tuple: &[usize], params: &[usize], n: &FinStructure) -> QFType {
    let pset: BTreeSet<usize> = params.iter().copied().collect();
    let mut fresh: Vec<usize> = Vec::new();
    let slots: Vec<Slot> = tuple
        .iter()
        .map(|&x| {
            if pset.contains(&x) {
                Slot::Param(x)
            } else {
                let j = fresh.iter().position(|&y| y == x).unwrap_or_else(|| {
                    fresh.push(x);
                    fresh.len() - 1
                });
                Slot::Fresh(j)
            }
        })
        .collect();
    let domain: Vec<(usize, Slot)> = fresh
        .iter()
        .enumerate()
        .map(|(j, &x)| (x, Slot::Fresh(j)))
        .chain(pset.iter().map(|&b| (b, Slot::Param(b))))
        .collect();
    let mut facts = BTreeSet::new();
    if !fresh.is_empty() {
        for (name, r) in &n.relations {
            for combo in (0..r.arity).map(|_| 0..domain.len()).multi_cartesian_product() {
                if combo.iter().all(|&c| c >= fresh.len()) {
                    continue;
                }
                let t: Vec<usize> = combo.iter().map(|&c| domain[c].0).collect();
                if r.tuples.contains(&t) {
                    facts.insert((name.clone(), combo.iter().map(|&c| domain[c].1).collect()));
                }
            }
        }
    }
    QFType { slots, facts }
}

/// The number of distinct types of `k`-tuples of `n` over `params`.
pub fn count_types(params: &[usize], n: &FinStructure, k: usize) -> usize {
    (0..k)
        .map(|_| 0..n.n)
        .multi_cartesian_product()
        .map(|t| qf_type(&t, params, n))
        .collect::<HashSet<_>>()
        .len()
}

/// The linear order on `n` points, extended by one new point in each of its
/// `n + 1` cuts, and the number of 1-types over the original points that
/// the extension realizes.
pub fn cut_types_demo(n: usize) -> usize {
    let ext = FinStructure::linear_order(2 * n + 1);
    let original: Vec<usize> = (0..n).map(|i| 2 * i + 1).collect();
    count_types(&original, &ext, 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_types() {
        let n = FinStructure::pure_equality(6);
        assert_eq!(qf_type(&[4], &[0, 1, 2], &n), qf_type(&[5], &[0, 1, 2], &n));
        assert_ne!(qf_type(&[1], &[0, 1, 2], &n), qf_type(&[2], &[0, 1, 2], &n));
        assert_eq!(count_types(&[0, 1, 2], &n, 1), 4);
        assert_eq!(count_types(&[], &n, 1), 1);
        assert_eq!(count_types(&[], &n, 2), 2);
    }

    #[test]
    fn order_types_separate_gaps() {
        let n = FinStructure::linear_order(5);
        assert_ne!(qf_type(&[0], &[2], &n), qf_type(&[4], &[2], &n));
        assert_eq!(qf_type(&[3], &[2], &n), qf_type(&[4], &[2], &n));
        assert_eq!(count_types(&[0, 1, 2, 3, 4], &n, 1), 5);
    }

    #[test]
    fn cut_counts() {
        assert_eq!(cut_types_demo(1), 3);
        assert_eq!(cut_types_demo(3), 7);
        for k in 1..8 {
            assert_eq!(cut_types_demo(k + 1), cut_types_demo(k) + 2);
        }
    }

    #[test]
    fn characteristic_formula_defines_the_type() {
        let n = FinStructure::linear_order(5);
        let params = [1, 3];
        let vars = vec!["x".to_string(), "y".to_string()];
        for (a, b) in (0..5).cartesian_product(0..5) {
            let tp = qf_type(&[a, b], &params, &n);
            let phi = tp.characteristic_formula(&params, &n, &vars);
            for (c, d) in (0..5).cartesian_product(0..5) {
                let same = qf_type(&[c, d], &params, &n) == tp;
                assert_eq!(phi.eval(&[c, d], &n).unwrap(), same, "{a},{b} vs {c},{d}");
            }
        }
    }
}
