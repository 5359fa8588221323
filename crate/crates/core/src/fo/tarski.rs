use super::FinStructure;
use crate::error::FoError;
use itertools::Itertools;
use serde_json::{json, Value};
use std::collections::BTreeSet;

/// Largest universe the axiomatizer enumerates.
pub const SIZE_CAP: usize = 5;

/// A space of structures with a single binary relation `E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureSpace {
    /// Symmetric irreflexive relations.
    Graphs,
    /// Symmetric reflexive relations.
    ReflexiveSymmetric,
    /// Arbitrary binary relations.
    BinaryRelations,
}

impl StructureSpace {
    pub const ALL: [StructureSpace; 3] = [Self::Graphs, Self::ReflexiveSymmetric, Self::BinaryRelations];

    pub fn name(self) -> &'static str {
        match self {
            Self::Graphs => "graphs",
            Self::ReflexiveSymmetric => "reflexive-symmetric",
            Self::BinaryRelations => "binary-relations",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    fn free_pairs(self, n: usize) -> Vec<(usize, usize)> {
        match self {
            Self::Graphs | Self::ReflexiveSymmetric => (0..n).tuple_combinations().collect(),
            Self::BinaryRelations => (0..n).cartesian_product(0..n).collect(),
        }
    }

    /// Every labelled structure of the space on `0..n`.
    pub fn structures(self, n: usize) -> Result<Vec<FinStructure>, FoError> {
        if n > SIZE_CAP {
            return Err(FoError::BoundExceeded(format!("universe {n} exceeds {SIZE_CAP}")));
        }
        let pairs = self.free_pairs(n);
        Ok((0..1u64 << pairs.len())
            .map(|code| {
                let mut tuples: Vec<Vec<usize>> = Vec::new();
                if self == Self::ReflexiveSymmetric {
                    tuples.extend((0..n).map(|i| vec![i, i]));
                }
                for (b, &(i, j)) in pairs.iter().enumerate() {
                    if code >> b & 1 == 1 {
                        tuples.push(vec![i, j]);
                        if self != Self::BinaryRelations {
                            tuples.push(vec![j, i]);
                        }
                    }
                }
                FinStructure::new(n).with_relation("E", 2, tuples).expect("tuples in range")
            })
            .collect())
    }
}

/// Built-in families of structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    All,
    /// No `k` pairwise related distinct elements.
    CliqueFree(usize),
    /// Reflexive, symmetric and transitive.
    EquivalenceLike,
}

impl Family {
    pub fn name(self) -> String {
        match self {
            Family::All => "all".into(),
            Family::CliqueFree(3) => "triangle-free".into(),
            Family::CliqueFree(k) => format!("k{k}-free"),
            Family::EquivalenceLike => "equivalence".into(),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "all" => Some(Family::All),
            "triangle-free" => Some(Family::CliqueFree(3)),
            "equivalence" => Some(Family::EquivalenceLike),
            _ => {
                let k: usize = name.strip_prefix('k')?.strip_suffix("-free")?.parse().ok()?;
                (k >= 2).then_some(Family::CliqueFree(k))
            }
        }
    }

    pub fn contains(self, s: &FinStructure) -> bool {
        let e = |i: usize, j: usize| s.holds("E", &[i, j]).unwrap_or(false);
        match self {
            Family::All => true,
            Family::CliqueFree(k) => !(0..s.n).combinations(k).any(|c| c.iter().tuple_combinations().all(|(&a, &b)| e(a, b))),
            Family::EquivalenceLike => (0..s.n).all(|i| {
                e(i, i) && (0..s.n).all(|j| e(i, j) == e(j, i) && (0..s.n).all(|k| !(e(i, j) && e(j, k)) || e(i, k)))
            }),
        }
    }
}

/// Canonical form of a structure up to isomorphism: the least relabelling.
pub fn canonical_form(s: &FinStructure) -> FinStructure {
    (0..s.n)
        .permutations(s.n)
        .map(|p| s.permuted(&p))
        .min_by(|a, b| {
            let key = |x: &FinStructure| x.relations.values().map(|r| r.tuples.clone()).collect::<Vec<_>>();
            key(a).cmp(&key(b))
        })
        .unwrap_or_else(|| s.clone())
}

/// Whether no induced substructure of `s` is isomorphic to a forbidden one.
pub fn satisfies(s: &FinStructure, forbidden: &[FinStructure]) -> bool {
    let canon: BTreeSet<Vec<Vec<Vec<usize>>>> = forbidden.iter().map(|f| key(&canonical_form(f))).collect();
    let sizes: BTreeSet<usize> = forbidden.iter().map(|f| f.n).collect();
    !sizes.into_iter().filter(|&k| k <= s.n).any(|k| {
        (0..s.n)
            .combinations(k)
            .any(|c| canon.contains(&key(&canonical_form(&s.induced(&c)))))
    })
}

fn key(s: &FinStructure) -> Vec<Vec<Vec<usize>>> {
    let mut k: Vec<Vec<Vec<usize>>> = s.relations.values().map(|r| r.tuples.iter().cloned().collect()).collect();
    k.push(vec![vec![s.n]]);
    k
}

#[derive(Debug, Clone)]
pub struct Axiomatization {
    pub space: StructureSpace,
    pub k: usize,
    pub cap: usize,
    /// Isomorphism types with at most `k` elements outside the family.
    pub forbidden: Vec<FinStructure>,
    /// Structures on which the forbidden list was compared with the oracle.
    pub checked: usize,
    pub disagreements: usize,
    pub witness: Option<FinStructure>,
}

impl Axiomatization {
    pub fn agrees(&self) -> bool {
        self.disagreements == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "space": self.space.name(),
            "k": self.k,
            "cap": self.cap,
            "forbidden": self.forbidden.iter().map(FinStructure::to_json).collect::<Vec<_>>(),
            "checked": self.checked,
            "disagreements": self.disagreements,
            "witness": self.witness.as_ref().map(FinStructure::to_json),
        })
    }
}

/// Lists the isomorphism types of at most `k` elements outside the family
/// and compares "no forbidden induced substructure" with the oracle on every
/// structure of the space up to `cap` elements. Fails when the family is not
/// closed under induced substructures up to `cap`.
pub fn universal_class_axiomatize(
    space: StructureSpace,
    family: &dyn Fn(&FinStructure) -> bool,
    k: usize,
    cap: usize,
) -> Result<Axiomatization, FoError> {
    let mut forbidden: Vec<FinStructure> = Vec::new();
    let mut seen: BTreeSet<Vec<Vec<Vec<usize>>>> = BTreeSet::new();
    let mut everything: Vec<FinStructure> = Vec::new();
    for n in 0..=cap.max(k) {
        for s in space.structures(n)? {
            let inside = family(&s);
            if inside && n > 0 {
                for drop in 0..n {
                    let rest: Vec<usize> = (0..n).filter(|&i| i != drop).collect();
                    if !family(&s.induced(&rest)) {
                        return Err(FoError::ClosureViolation(format!(
                            "{} is in the family but its substructure without {drop} is not",
                            s.to_json()
                        )));
                    }
                }
            }
            if !inside && n <= k {
                let c = canonical_form(&s);
                if seen.insert(key(&c)) {
                    forbidden.push(c);
                }
            }
            if n <= cap {
                everything.push(s);
            }
        }
    }
    let mut disagreements = 0;
    let mut witness = None;
    for s in &everything {
        if satisfies(s, &forbidden) != family(s) {
            disagreements += 1;
            witness.get_or_insert_with(|| s.clone());
        }
    }
    Ok(Axiomatization {
        space,
        k,
        cap,
        forbidden,
        checked: everything.len(),
        disagreements,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_free_forbids_the_triangle() {
        let fam = Family::CliqueFree(3);
        let ax = universal_class_axiomatize(StructureSpace::Graphs, &|s| fam.contains(s), 3, 5).unwrap();
        assert_eq!(ax.forbidden.len(), 1);
        assert_eq!(ax.forbidden[0].n, 3);
        assert_eq!(ax.forbidden[0].relations["E"].tuples.len(), 6);
        assert!(ax.agrees());
        assert_eq!(ax.checked, 1 + 1 + 2 + 8 + 64 + 1024);
    }

    #[test]
    fn all_graphs_forbid_nothing() {
        let ax = universal_class_axiomatize(StructureSpace::Graphs, &|_| true, 4, 4).unwrap();
        assert!(ax.forbidden.is_empty() && ax.agrees());
    }

    #[test]
    fn equivalence_forbids_the_open_path() {
        let fam = Family::EquivalenceLike;
        let ax = universal_class_axiomatize(StructureSpace::ReflexiveSymmetric, &|s| fam.contains(s), 3, 4).unwrap();
        assert_eq!(ax.forbidden.len(), 1);
        assert_eq!(ax.forbidden[0].relations["E"].tuples.len(), 3 + 4);
        assert!(ax.agrees());
    }

    #[test]
    fn small_k_misses_larger_obstructions() {
        let fam = Family::CliqueFree(3);
        let ax = universal_class_axiomatize(StructureSpace::Graphs, &|s| fam.contains(s), 2, 4).unwrap();
        assert!(ax.forbidden.is_empty());
        assert!(!ax.agrees());
        assert_eq!(ax.witness.unwrap().n, 3);
    }

    #[test]
    fn non_hereditary_family_is_rejected() {
        let err = universal_class_axiomatize(StructureSpace::Graphs, &|s| s.n != 2, 3, 3).unwrap_err();
        assert!(matches!(err, FoError::ClosureViolation(_)));
    }

    #[test]
    fn family_names_round_trip() {
        for f in [Family::All, Family::CliqueFree(3), Family::CliqueFree(4), Family::EquivalenceLike] {
            assert_eq!(Family::from_name(&f.name()), Some(f));
        }
    }
}
