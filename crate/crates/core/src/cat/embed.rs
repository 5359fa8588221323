use super::FinCategory;
use crate::fo::FinStructure;
use serde_json::{json, Value};
use std::collections::HashMap;

/// The structure attached to an object `M`: its universe is the set of
/// morphisms from the small objects into `M`.
#[derive(Debug, Clone)]
pub struct HomStructure<C: FinCategory> {
    pub target: C::Ob,
    pub universe: Vec<C::Mor>,
    /// For each small object `M0`, the positions of morphisms with domain `M0`.
    pub sorts: Vec<(C::Ob, Vec<usize>)>,
    /// For each morphism `f: M0 → M1` between small objects, the unary
    /// function `g ↦ g ∘ f` (identity off its domain), as a position table.
    pub functions: Vec<(C::Mor, Vec<usize>)>,
}

impl<C: FinCategory> HomStructure<C> {
    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    fn position(&self, g: &C::Mor) -> Option<usize> {
        self.universe.iter().position(|h| h == g)
    }

    /// Relational encoding: `S<i>` unary per sort, `F<j>` binary per function graph.
    pub fn to_fin_structure(&self) -> FinStructure {
        let mut s = FinStructure::new(self.universe.len());
        for (i, (_, members)) in self.sorts.iter().enumerate() {
            let tuples = members.iter().map(|&m| vec![m]).collect();
            s.add_relation(&format!("S{i}"), 1, tuples)
                .expect("positions are inside the universe");
        }
        for (j, (_, table)) in self.functions.iter().enumerate() {
            let tuples = table.iter().enumerate().map(|(x, &y)| vec![x, y]).collect();
            s.add_relation(&format!("F{j}"), 2, tuples)
                .expect("positions are inside the universe");
        }
        s
    }
}

/// Builds the hom-structure of `m` with respect to the objects in `small`.
pub fn hom_embed<C: FinCategory>(c: &C, small: &[C::Ob], m: &C::Ob) -> HomStructure<C> {
    let mut universe = Vec::new();
    let mut sorts = Vec::new();
    for s in small {
        let mut members = Vec::new();
        for g in c.hom(s, m) {
            members.push(universe.len());
            universe.push(g);
        }
        sorts.push((s.clone(), members));
    }
    let index: HashMap<C::Mor, usize> = universe
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), i))
        .collect();
    let mut functions = Vec::new();
    for m0 in small {
        for m1 in small {
            for f in c.hom(m0, m1) {
                let table = universe
                    .iter()
                    .enumerate()
                    .map(|(i, g)| {
                        if c.dom(g) == *m1 {
                            c.compose(g, &f)
                                .ok()
                                .and_then(|gf| index.get(&gf).copied())
                                .unwrap_or(i)
                        } else {
                            i
                        }
                    })
                    .collect();
                functions.push((f, table));
            }
        }
    }
    HomStructure {
        target: m.clone(),
        universe,
        sorts,
        functions,
    }
}

/// Outcome of the full-and-faithful check.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingReport {
    pub pass: bool,
    pub pairs_checked: usize,
    pub failures: Vec<Value>,
}

/// Image of `u: M → N` under the embedding: `g ↦ u ∘ g`.
fn induced_map<C: FinCategory>(
    c: &C,
    u: &C::Mor,
    em: &HomStructure<C>,
    en: &HomStructure<C>,
) -> Option<Vec<usize>> {
    em.universe
        .iter()
        .map(|g| c.compose(u, g).ok().and_then(|ug| en.position(&ug)))
        .collect()
}

fn preserves_structure<C: FinCategory>(
    h: &[usize],
    em: &HomStructure<C>,
    en: &HomStructure<C>,
) -> bool {
    let sort_of = |s: &HomStructure<C>, x: usize| s.sorts.iter().position(|(_, m)| m.contains(&x));
    (0..h.len()).all(|x| sort_of(em, x) == sort_of(en, h[x]))
        && em
            .functions
            .iter()
            .zip(&en.functions)
            .all(|((_, fm), (_, fn_))| (0..h.len()).all(|x| h[fm[x]] == fn_[h[x]]))
}

/// All structure homomorphisms `em → en`, by backtracking.
fn structure_homs<C: FinCategory>(em: &HomStructure<C>, en: &HomStructure<C>) -> Vec<Vec<usize>> {
    let sort_of = |s: &HomStructure<C>, x: usize| s.sorts.iter().position(|(_, m)| m.contains(&x));
    let candidates: Vec<Vec<usize>> = (0..em.len())
        .map(|x| {
            (0..en.len())
                .filter(|&y| sort_of(em, x) == sort_of(en, y))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut partial: Vec<usize> = Vec::with_capacity(em.len());
    fn consistent<C: FinCategory>(
        partial: &[usize],
        em: &HomStructure<C>,
        en: &HomStructure<C>,
    ) -> bool {
        let k = partial.len();
        em.functions
            .iter()
            .zip(&en.functions)
            .all(|((_, fm), (_, fn_))| {
                (0..k).all(|x| fm[x] >= k || partial[fm[x]] == fn_[partial[x]])
            })
    }
    fn go<C: FinCategory>(
        partial: &mut Vec<usize>,
        candidates: &[Vec<usize>],
        em: &HomStructure<C>,
        en: &HomStructure<C>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if partial.len() == candidates.len() {
            out.push(partial.clone());
            return;
        }
        for &y in &candidates[partial.len()] {
            partial.push(y);
            if consistent(partial, em, en) {
                go(partial, candidates, em, en, out);
            }
            partial.pop();
        }
    }
    go(&mut partial, &candidates, em, en, &mut out);
    out
}

/// Checks that the hom-structure construction is a full and faithful functor
/// on every pair of objects of `c`.
pub fn check_embedding_full_faithful<C: FinCategory>(c: &C, small: &[C::Ob]) -> EmbeddingReport {
    let objects = c.objects();
    let structures: Vec<HomStructure<C>> = objects.iter().map(|m| hom_embed(c, small, m)).collect();
    let mut failures = Vec::new();
    let mut pairs = 0;
    for (i, m) in objects.iter().enumerate() {
        let em = &structures[i];
        let id = c.identity(m);
        let identity_image = induced_map(c, &id, em, em);
        if identity_image != Some((0..em.len()).collect()) {
            failures.push(json!({
                "kind": "identity-not-preserved",
                "object": format!("{m:?}"),
                "image": format!("{identity_image:?}"),
            }));
        }
        for (j, n) in objects.iter().enumerate() {
            pairs += 1;
            let en = &structures[j];
            let mut images: Vec<(C::Mor, Vec<usize>)> = Vec::new();
            for u in c.hom(m, n) {
                match induced_map(c, &u, em, en) {
                    Some(h) if preserves_structure(&h, em, en) => images.push((u, h)),
                    other => failures.push(json!({
                        "kind": "not-a-homomorphism",
                        "morphism": format!("{u:?}"),
                        "image": format!("{other:?}"),
                    })),
                }
            }
            for a in 0..images.len() {
                for b in (a + 1)..images.len() {
                    if images[a].1 == images[b].1 {
                        failures.push(json!({
                            "kind": "not-faithful",
                            "morphisms": [format!("{:?}", images[a].0), format!("{:?}", images[b].0)],
                        }));
                    }
                }
            }
            for h in structure_homs(em, en) {
                if !images.iter().any(|(_, img)| *img == h) {
                    failures.push(json!({
                        "kind": "not-full",
                        "from": format!("{m:?}"),
                        "to": format!("{n:?}"),
                        "homomorphism": h,
                    }));
                }
            }
        }
    }
    EmbeddingReport {
        pass: failures.is_empty(),
        pairs_checked: pairs,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{Poset, TableCategory};

    #[test]
    fn two_chain_top_has_two_elements() {
        let c = TableCategory::from_poset(&Poset::from_pairs(2, &[(0, 1)]));
        let e = hom_embed(&c, &[0, 1], &1);
        assert_eq!(e.len(), 2);
        assert_eq!(e.sorts[0].1.len(), 1);
        assert_eq!(e.sorts[1].1.len(), 1);
    }

    #[test]
    fn one_object_category() {
        let c = TableCategory::from_poset(&Poset::from_pairs(1, &[]));
        let e = hom_embed(&c, &[0], &0);
        assert_eq!(e.universe, vec![c.identity(&0)]);
        assert!(check_embedding_full_faithful(&c, &[0]).pass);
    }

    #[test]
    fn corrupted_identity_is_detected() {
        let c = TableCategory::from_json(
            r#"{"objects":["a","b"],"homs":[{"dom":"a","cod":"b","name":"f"},{"dom":"a","cod":"b","name":"g"}]}"#,
        )
        .unwrap();
        assert!(check_embedding_full_faithful(&c, &[0, 1]).pass);
        let f = c.morphism_index("f").unwrap();
        let g = c.morphism_index("g").unwrap();
        let idb = c.morphism_index("id_b").unwrap();
        let broken = c.with_composite(idb, f, g);
        let report = check_embedding_full_faithful(&broken, &[0, 1]);
        assert!(!report.pass);
        assert!(!report.failures.is_empty());
    }
}
