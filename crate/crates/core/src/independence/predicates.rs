use crate::cat::{Action, CommutingSquare, Obj};
use crate::concrete::{pushout, CatKind, Mat};
use crate::error::CatError;
use std::collections::BTreeSet;

/// A decidable class of squares in one category.
#[derive(Clone, Copy)]
pub struct IndependencePredicate {
    pub name: &'static str,
    pub doc: &'static str,
    pub applies_to: fn(CatKind) -> bool,
    pub decide: fn(&CommutingSquare) -> bool,
}

impl std::fmt::Debug for IndependencePredicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IndependencePredicate").field("name", &self.name).finish()
    }
}

impl IndependencePredicate {
    pub fn decide(&self, sq: &CommutingSquare) -> bool {
        (self.decide)(sq)
    }
}

/// Whether the mediator from the pushout of the span to the apex lies in
/// `m_class`.
pub fn effective_square(sq: &CommutingSquare, m_class: CatKind) -> Result<bool, CatError> {
    let po = pushout(&sq.span, m_class)?;
    let m = po.mediator(&sq.cospan)?;
    Ok(m_class.contains(&m))
}

struct Images {
    a: BTreeSet<usize>,
    b: BTreeSet<usize>,
    c: BTreeSet<usize>,
}

fn images(sq: &CommutingSquare) -> Images {
    let d = sq.diagonal();
    Images {
        a: (0..sq.base().size()).map(|x| d.apply(x)).collect(),
        b: sq.cospan.left.carrier_map().into_iter().collect(),
        c: sq.cospan.right.carrier_map().into_iter().collect(),
    }
}

fn disjoint_sets(sq: &CommutingSquare) -> bool {
    let im = images(sq);
    im.b.intersection(&im.c).copied().collect::<BTreeSet<_>>() == im.a
}

fn matrix(f: &crate::cat::FinMorphism) -> Option<&Mat> {
    match &f.action {
        Action::Matrix(m) => Some(m),
        Action::Map(_) => None,
    }
}

fn disjoint_subspaces(sq: &CommutingSquare) -> bool {
    let (Some(u), Some(v)) = (matrix(&sq.cospan.left), matrix(&sq.cospan.right)) else {
        return false;
    };
    let d = sq.diagonal();
    let Some(a) = matrix(&d) else { return false };
    u.rank() + v.rank() - u.hcat(v).rank() == a.rank()
}

/// Pairs (x, y) of apex vertices with x new in the left ear and y new in the
/// right ear, together with whether they are adjacent.
fn cross_pairs(sq: &CommutingSquare) -> Option<Vec<bool>> {
    let Obj::Graph(g) = sq.apex() else { return None };
    let im = images(sq);
    let left: Vec<usize> = im.b.difference(&im.a).copied().collect();
    let right: Vec<usize> = im.c.difference(&im.a).copied().collect();
    Some(
        left.iter()
            .flat_map(|&x| right.iter().map(move |&y| (x, y)))
            .filter(|(x, y)| x != y)
            .map(|(x, y)| g.has_edge(x, y))
            .collect(),
    )
}

fn cross_edge_free(sq: &CommutingSquare) -> bool {
    disjoint_sets(sq) && cross_pairs(sq).is_some_and(|p| p.iter().all(|e| !e))
}

fn cross_edges_present(sq: &CommutingSquare) -> bool {
    disjoint_sets(sq) && cross_pairs(sq).is_some_and(|p| p.iter().all(|e| *e))
}

fn effective(sq: &CommutingSquare) -> bool {
    effective_square(sq, sq.cospan.left.class).unwrap_or(false)
}

fn is_set(k: CatKind) -> bool {
    matches!(k, CatKind::Set | CatKind::SetMono)
}

fn is_graph(k: CatKind) -> bool {
    matches!(k, CatKind::GraphSub | CatKind::GraphFull)
}

fn is_vect(k: CatKind) -> bool {
    matches!(k, CatKind::Vect(_) | CatKind::VectMono(_))
}

fn any(_: CatKind) -> bool {
    true
}

/// The built-in predicates, in a fixed order.
pub fn builtin_predicates() -> Vec<IndependencePredicate> {
    vec![
        IndependencePredicate {
            name: "disjoint-sets",
            doc: "images of the ears meet exactly in the image of the base",
            applies_to: is_set,
            decide: disjoint_sets,
        },
        IndependencePredicate {
            name: "disjoint-subspaces",
            doc: "image subspaces of the ears meet exactly in the image of the base",
            applies_to: is_vect,
            decide: disjoint_subspaces,
        },
        IndependencePredicate {
            name: "cross-edge-free",
            doc: "vertex images meet in the base and no edge joins the two new parts",
            applies_to: is_graph,
            decide: cross_edge_free,
        },
        IndependencePredicate {
            name: "cross-edges-present",
            doc: "vertex images meet in the base and every edge between the two new parts is present",
            applies_to: |k| k == CatKind::GraphFull,
            decide: cross_edges_present,
        },
        IndependencePredicate {
            name: "effective",
            doc: "the mediator from the pushout lies in the morphism class",
            applies_to: any,
            decide: effective,
        },
    ]
}

fn count_new(sq: &CommutingSquare) -> usize {
    let im = images(sq);
    im.b.union(&im.c).filter(|x| !im.a.contains(x)).count()
}

/// Predicates that each break one axiom, used as negative controls.
pub fn negative_controls() -> Vec<IndependencePredicate> {
    vec![
        IndependencePredicate {
            name: "never",
            doc: "no square is independent; breaks existence",
            applies_to: any,
            decide: |_| false,
        },
        IndependencePredicate {
            name: "left-larger",
            doc: "the left ear is strictly larger than the right ear; breaks symmetry",
            applies_to: any,
            decide: |sq| sq.span.left.cod.size() > sq.span.right.cod.size(),
        },
        IndependencePredicate {
            name: "apex-growth-le-1",
            doc: "the apex has at most one element more than the base; breaks transitivity",
            applies_to: any,
            decide: |sq| sq.apex().size() <= sq.base().size() + 1,
        },
        IndependencePredicate {
            name: "always",
            doc: "every square is independent; breaks uniqueness for injections",
            applies_to: any,
            decide: |_| true,
        },
        IndependencePredicate {
            name: "parity",
            doc: "dependent when the number of new apex elements is odd and at least 3; breaks the witness property",
            applies_to: is_set,
            decide: |sq| {
                let k = count_new(sq);
                k.is_multiple_of(2) || k < 3
            },
        },
    ]
}

/// Looks up a built-in predicate or negative control applicable to `kind`.
pub fn predicate_by_name(name: &str, kind: CatKind) -> Result<IndependencePredicate, CatError> {
    let p = builtin_predicates()
        .into_iter()
        .chain(negative_controls())
        .find(|p| p.name == name)
        .ok_or_else(|| CatError::UnknownName(name.to_string()))?;
    if !(p.applies_to)(kind) {
        return Err(CatError::Unsupported(format!("predicate {name} does not apply to {kind}")));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{Cospan, FinMorphism, Span};
    use crate::concrete::FinGraph;

    fn sm(dom: usize, cod: usize, map: Vec<usize>) -> FinMorphism {
        FinMorphism::from_map(Obj::Set(dom), Obj::Set(cod), map, CatKind::SetMono)
    }

    fn point_square(right_leg: Vec<usize>) -> CommutingSquare {
        let span = Span::new(sm(1, 2, vec![0]), sm(1, 2, vec![0])).unwrap();
        let cospan = Cospan {
            left: sm(2, 3, vec![0, 1]),
            right: sm(2, 3, right_leg),
        };
        CommutingSquare::new(span, cospan).unwrap()
    }

    fn edge_square(kind: CatKind) -> CommutingSquare {
        let empty = Obj::Graph(FinGraph::empty(0));
        let k1 = Obj::Graph(FinGraph::empty(1));
        let k2 = Obj::Graph(FinGraph::complete(2));
        let e = FinMorphism::from_map(empty, k1.clone(), vec![], kind);
        let span = Span::new(e.clone(), e).unwrap();
        let cospan = Cospan {
            left: FinMorphism::from_map(k1.clone(), k2.clone(), vec![0], kind),
            right: FinMorphism::from_map(k1, k2, vec![1], kind),
        };
        CommutingSquare::new(span, cospan).unwrap()
    }

    #[test]
    fn effective_matches_disjointness_on_examples() {
        let sep = point_square(vec![0, 2]);
        let ident = point_square(vec![0, 1]);
        assert!(effective_square(&sep, CatKind::SetMono).unwrap());
        assert!(disjoint_sets(&sep));
        assert!(!effective_square(&ident, CatKind::SetMono).unwrap());
        assert!(!disjoint_sets(&ident));
    }

    #[test]
    fn edge_square_under_both_graph_classes() {
        assert!(effective_square(&edge_square(CatKind::GraphSub), CatKind::GraphSub).unwrap());
        let sq = edge_square(CatKind::GraphFull);
        assert!(!cross_edge_free(&sq));
        assert!(cross_edges_present(&sq));
    }

    #[test]
    fn lookup_checks_applicability() {
        assert!(predicate_by_name("effective", CatKind::VectMono(2)).is_ok());
        assert!(predicate_by_name("disjoint-sets", CatKind::GraphFull).is_err());
        assert!(matches!(predicate_by_name("nope", CatKind::Set), Err(CatError::UnknownName(_))));
    }
}
