//! Finite simple graphs stored as adjacency bitmasks.
//!
//! Loops are never stored: every vertex is treated as adjacent to itself,
//! so a homomorphism may collapse an edge onto a single vertex.

use crate::error::CatError;
use itertools::Itertools;
use serde_json::{json, Value};
use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

pub const MAX_VERTICES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinGraph {
    n: usize,
    adj: Vec<u32>,
}

impl FinGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, CatError> {
        if n > MAX_VERTICES {
            return Err(CatError::Invalid(format!("graphs are limited to {MAX_VERTICES} vertices")));
        }
        let mut g = FinGraph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(CatError::Invalid(format!("edge ({u},{v}) leaves the vertex range 0..{n}")));
            }
            if u == v {
                return Err(CatError::Invalid(format!("loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Self {
        FinGraph { n, adj: vec![0; n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = FinGraph::empty(n);
        for (u, v) in (0..n).tuple_combinations() {
            g.add_edge(u, v);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = FinGraph::empty(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    /// Graph on `n` vertices whose edges are the set bits of `code`, in the
    /// order of [`FinGraph::pairs`].
    pub fn from_code(n: usize, code: u64) -> Self {
        let mut g = FinGraph::empty(n);
        for (k, (u, v)) in FinGraph::pairs(n).into_iter().enumerate() {
            if code >> k & 1 == 1 {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Unordered vertex pairs `(u, v)`, `u < v`, in lexicographic order.
    pub fn pairs(n: usize) -> Vec<(usize, usize)> {
        (0..n).tuple_combinations().collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    /// Adjacency, counting every vertex as adjacent to itself.
    pub fn adjacent_or_equal(&self, u: usize, v: usize) -> bool {
        u == v || self.has_edge(u, v)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        FinGraph::pairs(self.n)
            .into_iter()
            .filter(|&(u, v)| self.has_edge(u, v))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn code(&self) -> u64 {
        FinGraph::pairs(self.n)
            .into_iter()
            .enumerate()
            .filter(|&(_, (u, v))| self.has_edge(u, v))
            .fold(0, |acc, (k, _)| acc | 1 << k)
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> FinGraph {
        let mut g = FinGraph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Induced subgraph on `vs`, with `vs[i]` renamed to `i`.
    pub fn induced(&self, vs: &[usize]) -> FinGraph {
        let mut g = FinGraph::empty(vs.len());
        for (i, j) in (0..vs.len()).tuple_combinations() {
            if self.has_edge(vs[i], vs[j]) {
                g.add_edge(i, j);
            }
        }
        g
    }

    /// Canonical form under vertex relabelling (the relabelling with the
    /// smallest edge code), with the permutation taking `self` to it.
    pub fn canonical_labeling(&self) -> (FinGraph, Vec<usize>) {
        let mut best: Option<(u64, Vec<usize>)> = None;
        for perm in (0..self.n).permutations(self.n) {
            let code = self.permuted(&perm).code();
            if best.as_ref().is_none_or(|(c, _)| code < *c) {
                best = Some((code, perm));
            }
        }
        let (code, perm) = best.expect("at least the empty permutation");
        (FinGraph::from_code(self.n, code), perm)
    }

    pub fn canonical_form(&self) -> FinGraph {
        self.canonical_labeling().0
    }

    /// Vertex permutations preserving the edge set.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .permutations(self.n)
            .filter(|perm| self.permuted(perm) == *self)
            .collect()
    }

    /// Canonical representatives of all graphs on `n` vertices, sorted.
    pub fn all_up_to_iso(n: usize) -> Vec<FinGraph> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Vec<FinGraph>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(v) = cache.lock().expect("cache lock").get(&n) {
            return v.clone();
        }
        let out: Vec<FinGraph> = if n == 0 {
            vec![FinGraph::empty(0)]
        } else {
            let mut seen = BTreeSet::new();
            for smaller in FinGraph::all_up_to_iso(n - 1) {
                for nbhd in 0u32..(1 << (n - 1)) {
                    let mut g = FinGraph::empty(n);
                    for (u, v) in smaller.edges() {
                        g.add_edge(u, v);
                    }
                    for u in 0..n - 1 {
                        if nbhd >> u & 1 == 1 {
                            g.add_edge(u, n - 1);
                        }
                    }
                    seen.insert(g.canonical_form());
                }
            }
            seen.into_iter().collect()
        };
        cache.lock().expect("cache lock").insert(n, out.clone());
        out
    }

    /// Parses `{"vertices": n, "edges": [[u,v],...]}`.
    pub fn from_json(v: &Value) -> Result<Self, CatError> {
        let n = v["vertices"]
            .as_u64()
            .ok_or_else(|| CatError::Invalid("graph needs a numeric `vertices` field".into()))?
            as usize;
        let mut edges = Vec::new();
        if let Some(list) = v["edges"].as_array() {
            for e in list {
                let pair = e
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .and_then(|p| Some((p[0].as_u64()? as usize, p[1].as_u64()? as usize)))
                    .ok_or_else(|| CatError::Invalid(format!("bad edge {e}")))?;
                edges.push(pair);
            }
        }
        FinGraph::new(n, &edges)
    }

    pub fn to_json(&self) -> Value {
        json!({ "vertices": self.n, "edges": self.edges() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graph_counts_up_to_iso() {
        let counts: Vec<usize> = (0..=5).map(|n| FinGraph::all_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34]);
    }

    #[test]
    fn canonical_form_identifies_relabelled_paths() {
        let a = FinGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let b = FinGraph::new(3, &[(0, 2), (2, 1)]).unwrap();
        assert_eq!(a.canonical_form(), b.canonical_form());
        let (c, perm) = a.canonical_labeling();
        assert_eq!(a.permuted(&perm), c);
        assert_eq!(a.automorphisms().len(), 2);
    }

    #[test]
    fn loops_are_rejected() {
        assert!(FinGraph::new(2, &[(1, 1)]).is_err());
        let g = FinGraph::from_json(&json!({"vertices": 3, "edges": [[0, 2]]})).unwrap();
        assert_eq!(g.edges(), vec![(0, 2)]);
        assert_eq!(FinGraph::from_code(3, g.code()), g);
    }
}
