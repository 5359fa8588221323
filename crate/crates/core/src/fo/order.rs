use super::formula::{Node, QFFormula};
use super::types::{qf_type, QFType};
use super::FinStructure;
use crate::error::FoError;
use itertools::Itertools;
use serde_json::{json, Value};
use std::collections::HashMap;

/// Upper bound on the number of candidate tuples a search will consider.
pub const TUPLE_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    /// `phi(a_i, a_j)` holds exactly when `i < j`.
    Order,
    /// Every formula takes one truth value on all increasing subtuples.
    Indiscernible,
}

/// A sequence of tuples together with the formulas whose pattern it
/// certifies. `indices` point into the sequence the search ran over.
#[derive(Debug, Clone)]
pub struct SequenceWitness {
    pub pattern: Pattern,
    pub indices: Vec<usize>,
    pub tuples: Vec<Vec<usize>>,
    pub formulas: Vec<QFFormula>,
}

impl SequenceWitness {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// Re-evaluates the certified pattern from scratch.
    pub fn replay(&self, n: &FinStructure) -> Result<bool, FoError> {
        match self.pattern {
            Pattern::Order => {
                for phi in &self.formulas {
                    for (i, a) in self.tuples.iter().enumerate() {
                        for (j, b) in self.tuples.iter().enumerate() {
                            if phi.eval(&[a.clone(), b.clone()].concat(), n)? != (i < j) {
                                return Ok(false);
                            }
                        }
                    }
                }
                Ok(true)
            }
            Pattern::Indiscernible => {
                let m = self.tuples.first().map_or(1, Vec::len).max(1);
                for phi in &self.formulas {
                    let r = phi.arity() / m;
                    let mut seen = None;
                    for idx in (0..self.tuples.len()).combinations(r) {
                        let t: Vec<usize> = idx.iter().flat_map(|&i| self.tuples[i].iter().copied()).collect();
                        let v = phi.eval(&t, n)?;
                        if *seen.get_or_insert(v) != v {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "pattern": match self.pattern { Pattern::Order => "order", Pattern::Indiscernible => "indiscernible" },
            "indices": self.indices,
            "tuples": self.tuples,
            "formulas": self.formulas.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn all_tuples(n: usize, m: usize) -> Result<Vec<Vec<usize>>, FoError> {
    let count = n.checked_pow(m as u32).unwrap_or(usize::MAX);
    if count > TUPLE_CAP {
        return Err(FoError::BoundExceeded(format!("{count} tuples of length {m} exceed the cap {TUPLE_CAP}")));
    }
    Ok((0..m).map(|_| 0..n).multi_cartesian_product().collect())
}

/// Depth-first search for a sequence `s` of length `len` over `0..k` with
/// `ok(prefix, next)` at every extension.
fn sequence_search(k: usize, len: usize, ok: &mut dyn FnMut(&[usize], usize) -> bool) -> Option<Vec<usize>> {
    fn go(k: usize, len: usize, seq: &mut Vec<usize>, ok: &mut dyn FnMut(&[usize], usize) -> bool) -> bool {
        if seq.len() == len {
            return true;
        }
        for u in 0..k {
            if ok(seq, u) {
                seq.push(u);
                if go(k, len, seq, ok) {
                    return true;
                }
                seq.pop();
            }
        }
        false
    }
    let mut seq = Vec::new();
    go(k, len, &mut seq, ok).then_some(seq)
}

/// A sequence of `len` tuples ordered by `phi`, whose variables split into
/// two blocks of equal length, or `None` when exhaustive search over all
/// tuples of that length finds none.
pub fn order_property_witness(phi: &QFFormula, n: &FinStructure, len: usize) -> Result<Option<SequenceWitness>, FoError> {
    if !phi.arity().is_multiple_of(2) || phi.arity() == 0 {
        return Err(FoError::ArityMismatch {
            expected: phi.arity() + phi.arity() % 2,
            got: phi.arity(),
        });
    }
    let m = phi.arity() / 2;
    let tuples = all_tuples(n.n, m)?;
    let k = tuples.len();
    let mut table = vec![false; k * k];
    for (i, a) in tuples.iter().enumerate() {
        for (j, b) in tuples.iter().enumerate() {
            table[i * k + j] = phi.eval(&[a.clone(), b.clone()].concat(), n)?;
        }
    }
    let found = sequence_search(k, len, &mut |seq, u| {
        !table[u * k + u] && seq.iter().all(|&t| table[t * k + u] && !table[u * k + t])
    });
    Ok(found.map(|idx| SequenceWitness {
        pattern: Pattern::Order,
        tuples: idx.iter().map(|&i| tuples[i].clone()).collect(),
        indices: idx,
        formulas: vec![phi.clone()],
    }))
}

/// Searches for a sequence of `len` tuples of length `m` ordered by some
/// quantifier-free formula. Such a formula exists exactly when no type of a
/// pair `(a_i, a_j)` with `i < j` is also the type of a pair with `i ≥ j`;
/// the witness carries the disjunction of the former types.
pub fn order_property_any(n: &FinStructure, m: usize, len: usize) -> Result<Option<SequenceWitness>, FoError> {
    let tuples = all_tuples(n.n, m)?;
    let k = tuples.len();
    let mut ids: HashMap<QFType, usize> = HashMap::new();
    let mut reps: Vec<QFType> = Vec::new();
    let mut tp = vec![0usize; k * k];
    for (i, a) in tuples.iter().enumerate() {
        for (j, b) in tuples.iter().enumerate() {
            let t = qf_type(&[a.clone(), b.clone()].concat(), &[], n);
            let next = ids.len();
            tp[i * k + j] = *ids.entry(t.clone()).or_insert_with(|| {
                reps.push(t);
                next
            });
        }
    }
    let found = sequence_search(k, len, &mut |seq, u| {
        let mut below: Vec<usize> = Vec::new();
        let mut above: Vec<usize> = vec![tp[u * k + u]];
        for (pos, &t) in seq.iter().enumerate() {
            above.push(tp[t * k + t]);
            for &w in &seq[..pos] {
                below.push(tp[w * k + t]);
                above.push(tp[t * k + w]);
            }
            below.push(tp[t * k + u]);
            above.push(tp[u * k + t]);
        }
        below.iter().all(|b| !above.contains(b))
    });
    let Some(idx) = found else { return Ok(None) };
    let mut positive: Vec<usize> = Vec::new();
    for (p, &a) in idx.iter().enumerate() {
        for &b in &idx[p + 1..] {
            positive.push(tp[a * k + b]);
        }
    }
    positive.sort_unstable();
    positive.dedup();
    let vars: Vec<String> = (0..2 * m)
        .map(|i| if i < m { format!("x{}", i + 1) } else { format!("y{}", i - m + 1) })
        .collect();
    let body = Node::any(positive.iter().map(|&t| reps[t].characteristic_formula(&[], n, &vars).body));
    Ok(Some(SequenceWitness {
        pattern: Pattern::Order,
        tuples: idx.iter().map(|&i| tuples[i].clone()).collect(),
        indices: idx,
        formulas: vec![QFFormula { vars, body }],
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_order_is_ordered_by_lt() {
        let n = FinStructure::linear_order(5);
        let phi = QFFormula::parse("lt(x,y)").unwrap();
        let w = order_property_witness(&phi, &n, 5).unwrap().unwrap();
        assert_eq!(w.tuples, (0..5).map(|i| vec![i]).collect::<Vec<_>>());
        assert!(w.replay(&n).unwrap());
        assert!(order_property_witness(&phi, &n, 6).unwrap().is_none());
    }

    #[test]
    fn equality_and_equivalence_have_no_order() {
        let eq = FinStructure::pure_equality(6);
        for text in ["x=y", "!x=y"] {
            let phi = QFFormula::parse(text).unwrap();
            assert!(order_property_witness(&phi, &eq, 3).unwrap().is_none());
        }
        assert!(order_property_any(&eq, 1, 2).unwrap().is_none());
        let ev = FinStructure::equivalence(&[0, 0, 0, 1, 1, 1]);
        let phi = QFFormula::parse("E(x,y)").unwrap();
        assert!(order_property_witness(&phi, &ev, 3).unwrap().is_none());
        assert!(order_property_any(&ev, 1, 2).unwrap().is_none());
    }

    #[test]
    fn synthesized_formula_replays() {
        let n = FinStructure::linear_order(4);
        let w = order_property_any(&n, 1, 4).unwrap().unwrap();
        assert!(w.replay(&n).unwrap());
    }

    #[test]
    fn odd_arity_is_rejected() {
        let phi = QFFormula::parse("lt(x,y) & x=z").unwrap();
        assert!(order_property_witness(&phi, &FinStructure::linear_order(2), 2).is_err());
    }
}
