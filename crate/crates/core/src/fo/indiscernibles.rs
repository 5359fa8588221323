use super::formula::QFFormula;
use super::order::{Pattern, SequenceWitness};
use super::FinStructure;
use crate::error::FoError;
use itertools::Itertools;
use std::collections::BTreeMap;

/// Longest sequence handled by the pair-coloring path.
pub const RAMSEY_CAP: usize = 64;
/// Longest sequence handled by exhaustive subsequence search.
pub const EXHAUSTIVE_CAP: usize = 20;

fn blocks(phi: &QFFormula, m: usize) -> Result<usize, FoError> {
    let r = phi.arity();
    if m == 0 || !r.is_multiple_of(m) {
        return Err(FoError::ArityMismatch {
            expected: m * r.div_ceil(m.max(1)),
            got: r,
        });
    }
    Ok(r / m)
}

fn pattern(seq: &[Vec<usize>], idx: &[usize], delta: &[&QFFormula], n: &FinStructure) -> Result<Vec<bool>, FoError> {
    let t: Vec<usize> = idx.iter().flat_map(|&i| seq[i].iter().copied()).collect();
    delta.iter().map(|phi| phi.eval(&t, n)).collect()
}

/// Largest clique in the graph on `0..len` given by adjacency masks.
fn max_clique(adj: &[u64]) -> u64 {
    fn go(adj: &[u64], r: u64, mut p: u64, mut x: u64, best: &mut u64) {
        if p == 0 && x == 0 {
            if r.count_ones() > best.count_ones() {
                *best = r;
            }
            return;
        }
        if r.count_ones() + p.count_ones() <= best.count_ones() {
            return;
        }
        let pivot = (p | x).trailing_zeros() as usize;
        let mut cand = p & !adj[pivot];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            go(adj, r | 1 << v, p & adj[v], x & adj[v], best);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let mut best = 0;
    let all = if adj.len() == 64 { u64::MAX } else { (1u64 << adj.len()) - 1 };
    go(adj, 0, all, 0, &mut best);
    best
}

/// A subsequence of `seq` of length at least `k` on which every formula of
/// `delta` has one truth value over all increasing subtuples, or `None` when
/// none exists. Formulas mentioning at most two sequence entries go through
/// one-type classes and an exact monochromatic clique search; longer
/// patterns fall back to exhaustive search.
pub fn extract_indiscernibles(
    seq: &[Vec<usize>],
    delta: &[QFFormula],
    n: &FinStructure,
    k: usize,
) -> Result<Option<SequenceWitness>, FoError> {
    let m = seq.first().map_or(1, Vec::len);
    if let Some(t) = seq.iter().find(|t| t.len() != m) {
        return Err(FoError::ArityMismatch { expected: m, got: t.len() });
    }
    let witness = |indices: Vec<usize>| SequenceWitness {
        pattern: Pattern::Indiscernible,
        tuples: indices.iter().map(|&i| seq[i].clone()).collect(),
        indices,
        formulas: delta.to_vec(),
    };
    if seq.len() < 2 || delta.is_empty() {
        return Ok((seq.len() >= k).then(|| witness((0..seq.len()).collect())));
    }
    let mut by_blocks: BTreeMap<usize, Vec<&QFFormula>> = BTreeMap::new();
    for phi in delta {
        by_blocks.entry(blocks(phi, m)?).or_default().push(phi);
    }
    let max_blocks = *by_blocks.keys().last().expect("delta nonempty");
    if max_blocks <= 2 {
        if seq.len() > RAMSEY_CAP {
            return Err(FoError::BoundExceeded(format!("sequence of length {} exceeds {RAMSEY_CAP}", seq.len())));
        }
        let ones = by_blocks.get(&1).cloned().unwrap_or_default();
        let twos = by_blocks.get(&2).cloned().unwrap_or_default();
        let mut classes: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
        for i in 0..seq.len() {
            classes.entry(pattern(seq, &[i], &ones, n)?).or_default().push(i);
        }
        let mut best: Vec<usize> = Vec::new();
        for members in classes.values() {
            let mut colors: BTreeMap<Vec<bool>, Vec<u64>> = BTreeMap::new();
            for (a, b) in (0..members.len()).tuple_combinations() {
                let c = pattern(seq, &[members[a], members[b]], &twos, n)?;
                let adj = colors.entry(c).or_insert_with(|| vec![0; members.len()]);
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
            if colors.is_empty() && members.len() > best.len() {
                best = members.clone();
            }
            for adj in colors.values() {
                let clique = max_clique(adj);
                if clique.count_ones() as usize > best.len() {
                    best = (0..members.len()).filter(|&i| clique >> i & 1 == 1).map(|i| members[i]).collect();
                }
            }
        }
        return Ok((best.len() >= k).then(|| witness(best)));
    }
    if seq.len() > EXHAUSTIVE_CAP {
        return Err(FoError::BoundExceeded(format!("sequence of length {} exceeds {EXHAUSTIVE_CAP}", seq.len())));
    }
    for idx in (0..seq.len()).combinations(k.min(seq.len())) {
        let w = witness(idx);
        if w.len() >= k && w.replay(n)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concrete::FinGraph;

    fn singles(xs: impl IntoIterator<Item = usize>) -> Vec<Vec<usize>> {
        xs.into_iter().map(|x| vec![x]).collect()
    }

    #[test]
    fn constant_and_distinct_sequences_are_kept_whole() {
        let n = FinStructure::linear_order(4);
        let delta = [QFFormula::parse("lt(x,y)").unwrap(), QFFormula::parse("x=y").unwrap()];
        let w = extract_indiscernibles(&singles([2; 5]), &delta, &n, 5).unwrap().unwrap();
        assert_eq!(w.indices, vec![0, 1, 2, 3, 4]);
        let eq = FinStructure::pure_equality(5);
        let w = extract_indiscernibles(&singles(0..5), &delta[1..], &eq, 5).unwrap().unwrap();
        assert_eq!(w.len(), 5);
        assert!(w.replay(&eq).unwrap());
    }

    #[test]
    fn finds_the_longest_monotone_run() {
        let n = FinStructure::linear_order(6);
        let delta = [QFFormula::parse("lt(x,y)").unwrap()];
        let w = extract_indiscernibles(&singles([3, 0, 4, 1, 5, 2]), &delta, &n, 3).unwrap().unwrap();
        assert!(w.len() >= 3 && w.replay(&n).unwrap());
        assert!(extract_indiscernibles(&singles([3, 0, 4, 1, 5, 2]), &delta, &n, 4).unwrap().is_none());
    }

    #[test]
    fn triangle_free_cycle_has_no_homogeneous_triple_among_five() {
        let g = FinGraph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let n = FinStructure::from_graph(&g);
        let delta = [QFFormula::parse("E(x,y)").unwrap()];
        assert!(extract_indiscernibles(&singles(0..5), &delta, &n, 3).unwrap().is_none());
        assert!(extract_indiscernibles(&singles(0..5), &delta, &n, 2).unwrap().is_some());
    }

    #[test]
    fn three_entry_patterns_use_exhaustive_search() {
        let n = FinStructure::linear_order(5);
        let delta = [QFFormula::parse("lt(x,y) & lt(y,z)").unwrap()];
        let w = extract_indiscernibles(&singles([0, 4, 1, 2, 3]), &delta, &n, 4).unwrap().unwrap();
        assert_eq!(w.indices, vec![0, 2, 3, 4]);
        assert!(w.replay(&n).unwrap());
    }
}
