//! Finite category kernel.
//!
//! A [`FinCategory`] exposes its objects, enumerable hom-sets and a partial
//! composition. Everything else in this module is computed by brute force on
//! top of that interface: monomorphisms, section/retraction pairs, the
//! category laws, and the embedding of a category into structures whose
//! universe is a set of morphisms.

mod embed;
mod morphism;
mod table;

pub use embed::{check_embedding_full_faithful, hom_embed, EmbeddingReport, HomStructure};
pub use morphism::{compose, Action, CommutingSquare, Cospan, FinMorphism, Obj, Span};
pub use table::{Poset, TableCategory};

use crate::error::CatError;
use std::fmt::Debug;
use std::hash::Hash;

/// A category with finitely many objects and finite, enumerable hom-sets.
pub trait FinCategory {
    type Ob: Clone + Eq + Hash + Debug;
    type Mor: Clone + Eq + Hash + Debug;

    fn objects(&self) -> Vec<Self::Ob>;
    fn hom(&self, a: &Self::Ob, b: &Self::Ob) -> Vec<Self::Mor>;
    fn dom(&self, f: &Self::Mor) -> Self::Ob;
    fn cod(&self, f: &Self::Mor) -> Self::Ob;
    fn identity(&self, a: &Self::Ob) -> Self::Mor;

    /// Returns `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor, CatError>;

    fn morphisms(&self) -> Vec<Self::Mor> {
        let obs = self.objects();
        let mut out = Vec::new();
        for a in &obs {
            for b in &obs {
                out.extend(self.hom(a, b));
            }
        }
        out
    }
}

/// Brute-force monomorphism test: `f ∘ g1 = f ∘ g2` forces `g1 = g2` for all
/// parallel pairs into the domain of `f`.
pub fn is_mono<C: FinCategory>(c: &C, f: &C::Mor) -> bool {
    let a = c.dom(f);
    for x in c.objects() {
        let gs = c.hom(&x, &a);
        let images: Vec<Option<C::Mor>> = gs.iter().map(|g| c.compose(f, g).ok()).collect();
        for i in 0..gs.len() {
            for j in (i + 1)..gs.len() {
                if images[i].is_some() && images[i] == images[j] {
                    return false;
                }
            }
        }
    }
    true
}

/// Brute-force isomorphism test.
pub fn is_iso<C: FinCategory>(c: &C, f: &C::Mor) -> bool {
    let (a, b) = (c.dom(f), c.cod(f));
    let (ida, idb) = (c.identity(&a), c.identity(&b));
    c.hom(&b, &a).iter().any(|g| {
        c.compose(g, f).ok().as_ref() == Some(&ida) && c.compose(f, g).ok().as_ref() == Some(&idb)
    })
}

/// All pairs `(i: A → B, r: B → A)` with `r ∘ i = id_A`.
pub fn section_retraction_pairs<C: FinCategory>(
    c: &C,
    a: &C::Ob,
    b: &C::Ob,
) -> Vec<(C::Mor, C::Mor)> {
    let id = c.identity(a);
    let mut out = Vec::new();
    for i in c.hom(a, b) {
        for r in c.hom(b, a) {
            if c.compose(&r, &i).ok().as_ref() == Some(&id) {
                out.push((i.clone(), r));
            }
        }
    }
    out
}

/// A violated category law, rendered for reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawViolation {
    pub law: &'static str,
    pub detail: String,
}

/// Checks identity laws on every morphism and associativity on every
/// composable triple.
pub fn check_laws<C: FinCategory>(c: &C) -> Vec<LawViolation> {
    let mut out = Vec::new();
    let morphisms = c.morphisms();
    for f in &morphisms {
        let (a, b) = (c.dom(f), c.cod(f));
        if c.compose(&c.identity(&b), f).ok().as_ref() != Some(f) {
            out.push(LawViolation {
                law: "left identity",
                detail: format!("{f:?}"),
            });
        }
        if c.compose(f, &c.identity(&a)).ok().as_ref() != Some(f) {
            out.push(LawViolation {
                law: "right identity",
                detail: format!("{f:?}"),
            });
        }
    }
    let obs = c.objects();
    for f in &morphisms {
        let b = c.cod(f);
        for x in &obs {
            for g in c.hom(&b, x) {
                for y in &obs {
                    for h in c.hom(x, y) {
                        let left = c.compose(&h, &g).and_then(|hg| c.compose(&hg, f));
                        let right = c.compose(&g, f).and_then(|gf| c.compose(&h, &gf));
                        match (left, right) {
                            (Ok(l), Ok(r)) if l == r => {}
                            (l, r) => out.push(LawViolation {
                                law: "associativity",
                                detail: format!("h={h:?} g={g:?} f={f:?}: {l:?} vs {r:?}"),
                            }),
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> TableCategory {
        let elements: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let leq: Vec<(String, String)> = (1..n)
            .map(|i| ((i - 1).to_string(), i.to_string()))
            .collect();
        TableCategory::from_poset(&Poset::new(elements, leq).unwrap())
    }

    #[test]
    fn chain_composite_is_the_unique_hom() {
        let c = chain(3);
        let ab = c.hom(&0, &1)[0];
        let bc = c.hom(&1, &2)[0];
        let ac = c.hom(&0, &2)[0];
        assert_eq!(c.compose(&bc, &ab).unwrap(), ac);
        assert!(matches!(
            c.compose(&ab, &bc),
            Err(CatError::EndpointMismatch { .. })
        ));
    }

    #[test]
    fn identity_laws_on_chain() {
        let c = chain(3);
        let ab = c.hom(&0, &1)[0];
        assert_eq!(c.compose(&c.identity(&1), &ab).unwrap(), ab);
        assert_eq!(c.compose(&ab, &c.identity(&0)).unwrap(), ab);
        assert!(check_laws(&c).is_empty());
    }

    #[test]
    fn poset_morphisms_are_mono_and_strict_pairs_have_no_retraction() {
        let c = chain(3);
        for f in c.morphisms() {
            assert!(is_mono(&c, &f));
        }
        assert!(section_retraction_pairs(&c, &0, &2).is_empty());
        assert_eq!(section_retraction_pairs(&c, &1, &1).len(), 1);
    }
}
