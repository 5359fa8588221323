use crate::error::CatError;
use rand::Rng;
use serde::Deserialize;
use serde_json::{json, Value};
use std::collections::BTreeSet;

/// Two increasing chains `A_0 ⊆ A_1 ⊆ ...` and `B_0 ⊆ B_1 ⊆ ...` of equal
/// length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    pub a: Vec<BTreeSet<usize>>,
    pub b: Vec<BTreeSet<usize>>,
}

#[derive(Deserialize)]
struct FiltrationJson {
    #[serde(rename = "A")]
    a: Vec<Vec<usize>>,
    #[serde(rename = "B")]
    b: Vec<Vec<usize>>,
}

impl Filtration {
    pub fn new(a: Vec<BTreeSet<usize>>, b: Vec<BTreeSet<usize>>) -> Result<Self, CatError> {
        if a.len() != b.len() {
            return Err(CatError::Invalid("chains A and B differ in length".into()));
        }
        for chain in [&a, &b] {
            if chain.windows(2).any(|w| !w[0].is_subset(&w[1])) {
                return Err(CatError::Invalid("chain is not increasing".into()));
            }
        }
        Ok(Filtration { a, b })
    }

    /// Parses `{"A": [[...], ...], "B": [[...], ...]}`.
    pub fn from_json(text: &str) -> Result<Self, CatError> {
        let raw: FiltrationJson = serde_json::from_str(text).map_err(|e| CatError::Invalid(e.to_string()))?;
        let sets = |v: Vec<Vec<usize>>| v.into_iter().map(|s| s.into_iter().collect()).collect();
        Filtration::new(sets(raw.a), sets(raw.b))
    }

    /// `A_i = {0..i}` and `B_i = {0..min(i+1, top)}` for `i ≤ top`.
    pub fn staggered(top: usize) -> Self {
        let upto = |k: usize| (0..=k).collect::<BTreeSet<_>>();
        Filtration {
            a: (0..=top).map(upto).collect(),
            b: (0..=top).map(|i| upto((i + 1).min(top))).collect(),
        }
    }

    /// A random pair over `{0..width-1}`: every element enters `B` at a
    /// random stage, and about half of them also enter `A` at a random
    /// stage, so the union of `A` lies inside the union of `B`.
    pub fn random(rng: &mut impl Rng, len: usize, width: usize) -> Self {
        let mut a = vec![BTreeSet::new(); len];
        let mut b = vec![BTreeSet::new(); len];
        for x in 0..width {
            let eb = rng.gen_range(0..len);
            for s in &mut b[eb..] {
                s.insert(x);
            }
            if rng.gen_bool(0.5) {
                let ea = rng.gen_range(0..len);
                for s in &mut a[ea..] {
                    s.insert(x);
                }
            }
        }
        Filtration { a, b }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn universe(&self, i: usize) -> BTreeSet<usize> {
        self.a[i].union(&self.b[i]).copied().collect()
    }

    pub fn constructed(&self, i: usize) -> BTreeSet<usize> {
        self.a[i].intersection(&self.b[i]).copied().collect()
    }

    /// The stages `(U_i, U0_i)`.
    pub fn stages(&self) -> Vec<(BTreeSet<usize>, BTreeSet<usize>)> {
        (0..self.len()).map(|i| (self.universe(i), self.constructed(i))).collect()
    }
}

/// `{i | A ∩ B_i = A_i}` where `A` is the union of the `A_i`.
pub fn filtration_oracle(f: &Filtration) -> BTreeSet<usize> {
    let all_a: BTreeSet<usize> = f.a.iter().flatten().copied().collect();
    (0..f.len())
        .filter(|&i| all_a.intersection(&f.b[i]).copied().collect::<BTreeSet<_>>() == f.a[i])
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClubReport {
    pub indices: BTreeSet<usize>,
    /// Stages equal to the union of the earlier stages.
    pub union_stages: Vec<usize>,
    /// Union stages `j` with `j - 1` in the set but `j` outside it.
    pub closure_violations: Vec<usize>,
}

impl ClubReport {
    pub fn to_json(&self) -> Value {
        json!({
            "indices": self.indices,
            "union_stages": self.union_stages,
            "closure_violations": self.closure_violations,
        })
    }
}

/// The stages `j` of a chain whose morphisms are inclusions that are full
/// for `U_j`: every element of `U_j` constructed at some later stage is
/// already constructed at `j`.
pub fn full_indices(chain: &[(BTreeSet<usize>, BTreeSet<usize>)]) -> ClubReport {
    let n = chain.len();
    let mut later: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n + 1];
    for j in (0..n).rev() {
        later[j] = later[j + 1].union(&chain[j].1).copied().collect();
    }
    let indices: BTreeSet<usize> = (0..n)
        .filter(|&j| {
            chain[j]
                .0
                .iter()
                .all(|x| !later[j].contains(x) || chain[j].1.contains(x))
        })
        .collect();
    let union_stages: Vec<usize> = (1..n)
        .filter(|&j| {
            let (u, u0) = (0..j).fold((BTreeSet::new(), BTreeSet::new()), |(mut u, mut u0), i| {
                u.extend(chain[i].0.iter().copied());
                u0.extend(chain[i].1.iter().copied());
                (u, u0)
            });
            u == chain[j].0 && u0 == chain[j].1
        })
        .collect();
    let closure_violations = union_stages
        .iter()
        .copied()
        .filter(|&j| indices.contains(&(j - 1)) && !indices.contains(&j))
        .collect();
    ClubReport {
        indices,
        union_stages,
        closure_violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_chains_give_every_index() {
        let f = Filtration::staggered(5);
        let same = Filtration::new(f.a.clone(), f.a.clone()).unwrap();
        let r = full_indices(&same.stages());
        assert_eq!(r.indices, (0..6).collect());
    }

    #[test]
    fn staggered_matches_oracle() {
        let f = Filtration::staggered(5);
        let r = full_indices(&f.stages());
        assert_eq!(r.indices, filtration_oracle(&f));
        assert_eq!(r.indices, [5].into_iter().collect());
        assert!(r.closure_violations.is_empty());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let f = Filtration::from_json(r#"{"A":[[0],[0,1]],"B":[[0,1],[0,1]]}"#).unwrap();
        assert_eq!(full_indices(&f.stages()).indices, filtration_oracle(&f));
        assert!(Filtration::from_json(r#"{"A":[[0,1],[0]],"B":[[0],[0]]}"#).is_err());
    }
}
