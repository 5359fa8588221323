//! Amalgams of spans, joint connectedness, Galois types as components of
//! point categories, and universality checks.

mod types;
mod universal;

pub use types::{enumerate_types, Point, TypeClass, TypeSpace};
pub use universal::{
    is_amalgamation_base, is_universal_over, saturated_implies_universal_check, subobjects,
    universal_extension_build, BaseReport, ExtensionChain, SaturationReport, SaturationStatus,
    SubobjectOutcome, UniversalReport,
};

use crate::cat::{compose, CommutingSquare, Cospan, FinMorphism, Obj, Span};
use crate::concrete::{glue, CatKind};
use crate::error::CatError;
use serde_json::{json, Value};
use std::collections::{HashMap, HashSet};

/// A completion of a span to a commuting square.
pub type Amalgam = CommutingSquare;

/// A hom-set with a reverse index.
pub(crate) struct HomIndex {
    pub list: Vec<FinMorphism>,
    index: HashMap<FinMorphism, usize>,
}

impl HomIndex {
    pub fn new(list: Vec<FinMorphism>) -> Self {
        let index = list.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        HomIndex { list, index }
    }

    pub fn get(&self, f: &FinMorphism) -> usize {
        self.index[f]
    }

    /// `table[s][i]` is the index of `auts[s] ∘ list[i]`.
    pub fn post_action(&self, auts: &[FinMorphism]) -> Vec<Vec<usize>> {
        auts.iter()
            .map(|s| self.list.iter().map(|f| self.get(&compose(s, f).expect("endpoints match"))).collect())
            .collect()
    }

    /// `table[s][i]` is the index of `list[i] ∘ auts[s]`.
    pub fn pre_action(&self, auts: &[FinMorphism]) -> Vec<Vec<usize>> {
        auts.iter()
            .map(|s| self.list.iter().map(|f| self.get(&compose(f, s).expect("endpoints match"))).collect())
            .collect()
    }

    /// Smallest index in each orbit of a post-composition action.
    pub fn orbit_minima(&self, action: &[Vec<usize>]) -> Vec<usize> {
        let mut canon = vec![usize::MAX; self.list.len()];
        for i in 0..self.list.len() {
            if canon[i] == usize::MAX {
                for row in action {
                    canon[row[i]] = i;
                }
                canon[i] = i;
            }
        }
        canon
    }
}

/// Spans `B ← A → C` with base `a`, up to isomorphism of spans, with ears of
/// size at most `bound`.
pub fn enumerate_spans_over(kind: CatKind, a: &Obj, bound: usize) -> Result<Vec<Span>, CatError> {
    let objects = kind.objects(bound);
    let aut_a = kind.automorphisms(a);
    let mut out = Vec::new();
    let mut prepared = Vec::new();
    for b in &objects {
        let homs = HomIndex::new(kind.hom(a, b, bound)?);
        if homs.list.is_empty() {
            continue;
        }
        let canon = homs.orbit_minima(&homs.post_action(&kind.automorphisms(b)));
        let pre = homs.pre_action(&aut_a);
        prepared.push((homs, canon, pre));
    }
    for (fb, cb, pb) in &prepared {
        for (gc, cc, pc) in &prepared {
            let mut seen = HashSet::new();
            for i in 0..fb.list.len() {
                for j in 0..gc.list.len() {
                    let key = (0..aut_a.len())
                        .map(|s| (cb[pb[s][i]], cc[pc[s][j]]))
                        .min()
                        .expect("automorphism groups are nonempty");
                    if seen.insert(key) {
                        out.push(Span::new(fb.list[i].clone(), gc.list[j].clone())?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// All spans with every object of size at most `bound`, up to isomorphism.
pub fn enumerate_spans(kind: CatKind, bound: usize) -> Result<Vec<Span>, CatError> {
    let mut out = Vec::new();
    for a in kind.objects(bound) {
        out.extend(enumerate_spans_over(kind, &a, bound)?);
    }
    Ok(out)
}

fn edge_count(o: &Obj) -> usize {
    match o {
        Obj::Graph(g) => g.edge_count(),
        _ => 0,
    }
}

/// Amalgams of `span` whose apex is generated by the images of the ears,
/// with apex of size at most `bound`, up to isomorphism of cocones.
pub fn amalgamate(span: &Span, kind: CatKind, bound: usize) -> Result<Vec<Amalgam>, CatError> {
    Ok(cocones(span, kind, bound)?
        .into_iter()
        .filter(|sq| is_generated_by_ears(sq, kind))
        .collect())
}

/// Whether the apex is generated by the images of the two ears.
pub fn is_generated_by_ears(sq: &Amalgam, kind: CatKind) -> bool {
    let mut elems = Vec::new();
    for x in sq.span.left.cod.generators() {
        elems.push(sq.cospan.left.apply(x));
    }
    for x in sq.span.right.cod.generators() {
        elems.push(sq.cospan.right.apply(x));
    }
    kind.subobject(sq.apex(), &elems).dom.size() == sq.apex().size()
}

/// All commuting cocones over `span` with apex of size at most `bound`, up
/// to isomorphism of cocones. Smaller apexes come first; among graphs of
/// equal size, denser apexes come first.
pub fn cocones(span: &Span, kind: CatKind, bound: usize) -> Result<Vec<Amalgam>, CatError> {
    let (b, c) = (&span.left.cod, &span.right.cod);
    let mut out = Vec::new();
    for d in kind.objects(bound) {
        if d.size() < b.size().max(c.size()) && kind.is_mono_class() {
            continue;
        }
        let us = HomIndex::new(kind.hom(b, &d, bound)?);
        let vs = HomIndex::new(kind.hom(c, &d, bound)?);
        if us.list.is_empty() || vs.list.is_empty() {
            continue;
        }
        let auts = kind.automorphisms(&d);
        let (su, sv) = (us.post_action(&auts), vs.post_action(&auts));
        let mut by_diagonal: HashMap<FinMorphism, Vec<usize>> = HashMap::new();
        for (j, v) in vs.list.iter().enumerate() {
            by_diagonal.entry(compose(v, &span.right)?).or_default().push(j);
        }
        let mut seen = HashSet::new();
        for (i, u) in us.list.iter().enumerate() {
            let Some(js) = by_diagonal.get(&compose(u, &span.left)?) else {
                continue;
            };
            for &j in js {
                if seen.contains(&(i, j)) {
                    continue;
                }
                for s in 0..auts.len() {
                    seen.insert((su[s][i], sv[s][j]));
                }
                out.push(CommutingSquare::new(
                    span.clone(),
                    Cospan {
                        left: us.list[i].clone(),
                        right: vs.list[j].clone(),
                    },
                )?);
            }
        }
    }
    out.sort_by_key(|sq| (sq.apex().size(), std::cmp::Reverse(edge_count(sq.apex()))));
    Ok(out)
}

/// A common amalgam receiving both amalgams over the span.
#[derive(Debug, Clone, PartialEq)]
pub struct JointWitness {
    pub apex: Obj,
    pub left: FinMorphism,
    pub right: FinMorphism,
}

impl JointWitness {
    pub fn to_json(&self) -> Value {
        json!({ "apex": self.apex.to_json(), "from_first": self.left.key(), "from_second": self.right.key() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Connection {
    Witness(JointWitness),
    /// No witness with apex within the bound. `exhaustive` is true when no
    /// witness exists at any size.
    Absent { exhaustive: bool },
}

impl Connection {
    pub fn is_connected(&self) -> bool {
        matches!(self, Connection::Witness(_))
    }
}

/// Searches for morphisms from both amalgams into a common amalgam.
///
/// Every witness factors through the gluing of the two apexes along the
/// images of the ears, so in a class of monomorphisms a gluing whose legs
/// leave the class proves that no witness exists.
pub fn jointly_connected(a1: &Amalgam, a2: &Amalgam, kind: CatKind, bound: usize) -> Connection {
    if a1 == a2 {
        let id = kind.identity(a1.apex());
        return Connection::Witness(JointWitness {
            apex: a1.apex().clone(),
            left: id.clone(),
            right: id,
        });
    }
    let mut pairs = Vec::new();
    for x in a1.span.left.cod.generators() {
        pairs.push((a1.cospan.left.apply(x), a2.cospan.left.apply(x)));
    }
    for x in a1.span.right.cod.generators() {
        pairs.push((a1.cospan.right.apply(x), a2.cospan.right.apply(x)));
    }
    let glued = glue(kind, a1.apex(), a2.apex(), &pairs).expect("apexes live in the same category");
    let legs_ok = kind.contains(&glued.left) && kind.contains(&glued.right);
    if legs_ok && glued.apex.size() <= bound {
        return Connection::Witness(JointWitness {
            apex: glued.apex,
            left: glued.left,
            right: glued.right,
        });
    }
    if !legs_ok && kind.is_mono_class() {
        return Connection::Absent { exhaustive: true };
    }
    let (d1, d2) = (a1.apex(), a2.apex());
    for e in kind.objects(bound) {
        let (Ok(h1s), Ok(h2s)) = (kind.hom(d1, &e, bound), kind.hom(d2, &e, bound)) else {
            continue;
        };
        for h1 in &h1s {
            let l = compose(h1, &a1.cospan.left).expect("endpoints match");
            let r = compose(h1, &a1.cospan.right).expect("endpoints match");
            for h2 in &h2s {
                if compose(h2, &a2.cospan.left).ok().as_ref() == Some(&l)
                    && compose(h2, &a2.cospan.right).ok().as_ref() == Some(&r)
                {
                    return Connection::Witness(JointWitness {
                        apex: e.clone(),
                        left: h1.clone(),
                        right: h2.clone(),
                    });
                }
            }
        }
    }
    Connection::Absent { exhaustive: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concrete::FinGraph;

    fn point_span() -> Span {
        let f = FinMorphism::from_map(Obj::Set(1), Obj::Set(2), vec![0], CatKind::SetMono);
        Span::new(f.clone(), f).unwrap()
    }

    fn empty_base_graph_span(kind: CatKind) -> Span {
        let e = FinMorphism::from_map(Obj::Graph(FinGraph::empty(0)), Obj::Graph(FinGraph::empty(1)), vec![], kind);
        Span::new(e.clone(), e).unwrap()
    }

    #[test]
    fn point_span_has_separating_and_identifying_amalgams() {
        let ams = amalgamate(&point_span(), CatKind::SetMono, 3).unwrap();
        let sizes: Vec<usize> = ams.iter().map(|a| a.apex().size()).collect();
        assert_eq!(sizes, vec![2, 3]);
        let sep_vs_id = jointly_connected(&ams[0], &ams[1], CatKind::SetMono, 10);
        assert_eq!(sep_vs_id, Connection::Absent { exhaustive: true });
        assert!(jointly_connected(&ams[0], &ams[0], CatKind::SetMono, 3).is_connected());
    }

    #[test]
    fn full_embeddings_over_empty_base() {
        let ams = amalgamate(&empty_base_graph_span(CatKind::GraphFull), CatKind::GraphFull, 2).unwrap();
        let edges: Vec<usize> = ams.iter().map(|a| edge_count(a.apex())).collect();
        assert_eq!(edges, vec![0, 1, 0]);
    }

    #[test]
    fn subgraph_embeddings_connect_edge_and_edgeless() {
        let kind = CatKind::GraphSub;
        let ams = amalgamate(&empty_base_graph_span(kind), kind, 2).unwrap();
        let two: Vec<&Amalgam> = ams.iter().filter(|a| a.apex().size() == 2).collect();
        assert_eq!(two.len(), 2);
        match jointly_connected(two[0], two[1], kind, 2) {
            Connection::Witness(w) => assert_eq!(edge_count(&w.apex), 1),
            other => panic!("expected a witness, got {other:?}"),
        }
        let full = CatKind::GraphFull;
        let ams = amalgamate(&empty_base_graph_span(full), full, 2).unwrap();
        let two: Vec<&Amalgam> = ams.iter().filter(|a| a.apex().size() == 2).collect();
        assert!(!jointly_connected(two[0], two[1], full, 8).is_connected());
    }

    #[test]
    fn span_counts_for_small_sets() {
        // Injective spans over the empty set with ears of size <= 1: 2 x 2.
        let spans = enumerate_spans_over(CatKind::SetMono, &Obj::Set(0), 1).unwrap();
        assert_eq!(spans.len(), 4);
        // Over a point with ears of size <= 2: ears 1 or 2, one map each up to iso.
        let spans = enumerate_spans_over(CatKind::SetMono, &Obj::Set(1), 2).unwrap();
        assert_eq!(spans.len(), 4);
    }
}
