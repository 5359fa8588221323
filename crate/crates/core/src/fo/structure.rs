use crate::concrete::FinGraph;
use crate::error::FoError;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A finite relational structure on the universe `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinStructure {
    pub n: usize,
    pub relations: BTreeMap<String, Relation>,
}

#[derive(Deserialize)]
struct StructureJson {
    universe: usize,
    #[serde(default)]
    relations: BTreeMap<String, RelationJson>,
}

#[derive(Deserialize)]
struct RelationJson {
    arity: usize,
    #[serde(default)]
    tuples: Vec<Vec<usize>>,
}

impl FinStructure {
    pub fn new(n: usize) -> Self {
        FinStructure {
            n,
            relations: BTreeMap::new(),
        }
    }

    pub fn add_relation(&mut self, name: &str, arity: usize, tuples: Vec<Vec<usize>>) -> Result<(), FoError> {
        if self.relations.contains_key(name) {
            return Err(FoError::InvalidStructure(format!("duplicate relation `{name}`")));
        }
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(FoError::ArityMismatch {
                    expected: arity,
                    got: t.len(),
                });
            }
            if let Some(&x) = t.iter().find(|&&x| x >= self.n) {
                return Err(FoError::InvalidStructure(format!(
                    "element {x} of `{name}` is outside the universe 0..{}",
                    self.n
                )));
            }
            set.insert(t);
        }
        self.relations.insert(name.to_string(), Relation { arity, tuples: set });
        Ok(())
    }

    pub fn with_relation(mut self, name: &str, arity: usize, tuples: Vec<Vec<usize>>) -> Result<Self, FoError> {
        self.add_relation(name, arity, tuples)?;
        Ok(self)
    }

    pub fn holds(&self, name: &str, tuple: &[usize]) -> Result<bool, FoError> {
        let r = self
            .relations
            .get(name)
            .ok_or_else(|| FoError::UnknownRelation(name.to_string()))?;
        if r.arity != tuple.len() {
            return Err(FoError::ArityMismatch {
                expected: r.arity,
                got: tuple.len(),
            });
        }
        Ok(r.tuples.contains(tuple))
    }

    /// Structure with no relations: only equality is visible.
    pub fn pure_equality(n: usize) -> Self {
        FinStructure::new(n)
    }

    /// Strict linear order `lt` on `0..n`.
    pub fn linear_order(n: usize) -> Self {
        let tuples = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| vec![i, j]))
            .collect();
        FinStructure::new(n)
            .with_relation("lt", 2, tuples)
            .expect("tuples are in range")
    }

    /// Equivalence relation `E` whose class of element `i` is `classes[i]`.
    pub fn equivalence(classes: &[usize]) -> Self {
        let n = classes.len();
        let tuples = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| classes[i] == classes[j])
            .map(|(i, j)| vec![i, j])
            .collect();
        FinStructure::new(n)
            .with_relation("E", 2, tuples)
            .expect("tuples are in range")
    }

    /// Symmetric irreflexive relation `E` from a graph.
    pub fn from_graph(g: &FinGraph) -> Self {
        let tuples = g
            .edges()
            .into_iter()
            .flat_map(|(u, v)| [vec![u, v], vec![v, u]])
            .collect();
        FinStructure::new(g.n())
            .with_relation("E", 2, tuples)
            .expect("tuples are in range")
    }

    /// Induced substructure on `elems`, with `elems[i]` renamed to `i`.
    pub fn induced(&self, elems: &[usize]) -> FinStructure {
        let pos: BTreeMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut s = FinStructure::new(elems.len());
        for (name, r) in &self.relations {
            let tuples = r
                .tuples
                .iter()
                .filter_map(|t| t.iter().map(|x| pos.get(x).copied()).collect::<Option<Vec<_>>>())
                .collect();
            s.add_relation(name, r.arity, tuples).expect("renamed tuples stay in range");
        }
        s
    }

    /// The structure with element `x` renamed to `perm[x]`.
    pub fn permuted(&self, perm: &[usize]) -> FinStructure {
        let mut s = FinStructure::new(self.n);
        for (name, r) in &self.relations {
            let tuples = r.tuples.iter().map(|t| t.iter().map(|&x| perm[x]).collect()).collect();
            s.add_relation(name, r.arity, tuples).expect("permutation stays in range");
        }
        s
    }

    pub fn signature(&self) -> Vec<(String, usize)> {
        self.relations.iter().map(|(k, r)| (k.clone(), r.arity)).collect()
    }

    /// Parses `{"universe": n, "relations": {"lt": {"arity": 2, "tuples": [[0,1],...]}}}`.
    pub fn from_json(text: &str) -> Result<Self, FoError> {
        let raw: StructureJson = serde_json::from_str(text).map_err(|e| FoError::Parse {
            column: e.column(),
            message: format!("line {}: {e}", e.line()),
        })?;
        let mut s = FinStructure::new(raw.universe);
        for (name, r) in raw.relations {
            s.add_relation(&name, r.arity, r.tuples)?;
        }
        Ok(s)
    }

    pub fn to_json(&self) -> Value {
        let rels: serde_json::Map<String, Value> = self
            .relations
            .iter()
            .map(|(k, r)| (k.clone(), json!({ "arity": r.arity, "tuples": r.tuples })))
            .collect();
        json!({ "universe": self.n, "relations": rels })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip() {
        let s = FinStructure::linear_order(3);
        let back = FinStructure::from_json(&s.to_json().to_string()).unwrap();
        assert_eq!(s, back);
        assert!(s.holds("lt", &[0, 2]).unwrap());
        assert!(!s.holds("lt", &[2, 0]).unwrap());
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            FinStructure::new(2).with_relation("R", 2, vec![vec![0]]),
            Err(FoError::ArityMismatch { expected: 2, got: 1 })
        ));
        assert!(FinStructure::new(2).with_relation("R", 1, vec![vec![5]]).is_err());
        assert!(matches!(
            FinStructure::linear_order(2).holds("E", &[0, 1]),
            Err(FoError::UnknownRelation(_))
        ));
        assert!(matches!(FinStructure::from_json("{\"universe\": }"), Err(FoError::Parse { .. })));
    }

    #[test]
    fn induced_substructure_renames() {
        let s = FinStructure::linear_order(4).induced(&[1, 3]);
        assert_eq!(s.n, 2);
        assert!(s.holds("lt", &[0, 1]).unwrap());
    }
}
