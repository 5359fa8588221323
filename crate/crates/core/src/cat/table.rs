use super::FinCategory;
use crate::error::CatError;
use serde::Deserialize;
use serde_json::Value;
use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, Eq)]
struct HomEntry {
    dom: usize,
    cod: usize,
    name: String,
}

/// A finite category given by explicit tables. Objects and morphisms are
/// indices into the tables.
#[derive(Debug, Clone)]
pub struct TableCategory {
    objects: Vec<String>,
    homs: Vec<HomEntry>,
    compose: HashMap<(usize, usize), usize>,
    identities: Vec<usize>,
}

#[derive(Deserialize)]
struct HomJson {
    dom: Value,
    cod: Value,
    name: Value,
}

#[derive(Deserialize)]
struct CategoryJson {
    objects: Vec<Value>,
    homs: Vec<HomJson>,
    #[serde(default)]
    compose: Vec<[Value; 3]>,
    #[serde(default)]
    identities: HashMap<String, Value>,
}

fn label(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl TableCategory {
    /// Builds a category from tables. Objects without a listed identity get
    /// a fresh `id_<object>` morphism, and composites with identities are
    /// filled in when absent.
    pub fn from_tables(
        objects: Vec<String>,
        homs: Vec<(String, String, String)>,
        compose: Vec<(String, String, String)>,
        identities: HashMap<String, String>,
    ) -> Result<Self, CatError> {
        let mut obj_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if obj_index.insert(o.clone(), i).is_some() {
                return Err(CatError::Invalid(format!("duplicate object `{o}`")));
            }
        }
        let find_obj = |name: &str| {
            obj_index
                .get(name)
                .copied()
                .ok_or_else(|| CatError::UnknownName(name.to_string()))
        };
        let mut entries = Vec::new();
        let mut hom_index = HashMap::new();
        for (d, c, n) in homs {
            let e = HomEntry {
                dom: find_obj(&d)?,
                cod: find_obj(&c)?,
                name: n.clone(),
            };
            if hom_index.insert(n.clone(), entries.len()).is_some() {
                return Err(CatError::Invalid(format!("duplicate morphism `{n}`")));
            }
            entries.push(e);
        }
        let mut ids = Vec::with_capacity(objects.len());
        for (i, o) in objects.iter().enumerate() {
            let id = match identities.get(o) {
                Some(n) => *hom_index
                    .get(n)
                    .ok_or_else(|| CatError::UnknownName(n.clone()))?,
                None => {
                    let n = format!("id_{o}");
                    match hom_index.get(&n) {
                        Some(&k) => k,
                        None => {
                            hom_index.insert(n.clone(), entries.len());
                            entries.push(HomEntry {
                                dom: i,
                                cod: i,
                                name: n,
                            });
                            entries.len() - 1
                        }
                    }
                }
            };
            if entries[id].dom != i || entries[id].cod != i {
                return Err(CatError::Invalid(format!(
                    "identity of `{o}` is not an endomorphism"
                )));
            }
            ids.push(id);
        }
        let find_hom = |name: &str| {
            hom_index
                .get(name)
                .copied()
                .ok_or_else(|| CatError::UnknownName(name.to_string()))
        };
        let mut table = HashMap::new();
        for (g, f, gf) in compose {
            let (g, f, gf) = (find_hom(&g)?, find_hom(&f)?, find_hom(&gf)?);
            table.insert((g, f), gf);
        }
        for (k, e) in entries.iter().enumerate() {
            table.entry((ids[e.cod], k)).or_insert(k);
            table.entry((k, ids[e.dom])).or_insert(k);
        }
        Ok(TableCategory {
            objects,
            homs: entries,
            compose: table,
            identities: ids,
        })
    }

    /// Parses `{"objects": [...], "homs": [{"dom","cod","name"}], "compose": [[g,f,gf],...]}`.
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let raw: CategoryJson = serde_json::from_str(text)?;
        let objects = raw.objects.iter().map(label).collect();
        let homs = raw
            .homs
            .iter()
            .map(|h| (label(&h.dom), label(&h.cod), label(&h.name)))
            .collect();
        let compose = raw
            .compose
            .iter()
            .map(|[g, f, gf]| (label(g), label(f), label(gf)))
            .collect();
        let identities = raw
            .identities
            .iter()
            .map(|(k, v)| (k.clone(), label(v)))
            .collect();
        Self::from_tables(objects, homs, compose, identities)
            .map_err(|e| <serde_json::Error as serde::de::Error>::custom(e.to_string()))
    }

    /// The category of a preorder: one morphism `a -> b` whenever `a ≤ b`.
    pub fn from_poset(p: &Poset) -> Self {
        let n = p.elements.len();
        let mut homs = Vec::new();
        let mut index = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                if p.leq(a, b) {
                    index.insert((a, b), homs.len());
                    homs.push(HomEntry {
                        dom: a,
                        cod: b,
                        name: format!("{}->{}", p.elements[a], p.elements[b]),
                    });
                }
            }
        }
        let mut compose = HashMap::new();
        for (&(a, b), &f) in &index {
            for c in 0..n {
                if let Some(&g) = index.get(&(b, c)) {
                    compose.insert((g, f), index[&(a, c)]);
                }
            }
        }
        let identities = (0..n).map(|a| index[&(a, a)]).collect();
        TableCategory {
            objects: p.elements.clone(),
            homs,
            compose,
            identities,
        }
    }

    /// Overwrites one entry of the composition table. Used to build
    /// deliberately broken categories for negative controls.
    pub fn with_composite(mut self, g: usize, f: usize, gf: usize) -> Self {
        self.compose.insert((g, f), gf);
        self
    }

    pub fn object_name(&self, a: usize) -> &str {
        &self.objects[a]
    }

    pub fn morphism_name(&self, f: usize) -> &str {
        &self.homs[f].name
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.homs.iter().position(|h| h.name == name)
    }

    pub fn morphism_count(&self) -> usize {
        self.homs.len()
    }
}

impl FinCategory for TableCategory {
    type Ob = usize;
    type Mor = usize;

    fn objects(&self) -> Vec<usize> {
        (0..self.objects.len()).collect()
    }

    fn hom(&self, a: &usize, b: &usize) -> Vec<usize> {
        self.homs
            .iter()
            .enumerate()
            .filter(|(_, h)| h.dom == *a && h.cod == *b)
            .map(|(k, _)| k)
            .collect()
    }

    fn dom(&self, f: &usize) -> usize {
        self.homs[*f].dom
    }

    fn cod(&self, f: &usize) -> usize {
        self.homs[*f].cod
    }

    fn identity(&self, a: &usize) -> usize {
        self.identities[*a]
    }

    fn compose(&self, g: &usize, f: &usize) -> Result<usize, CatError> {
        let (hf, hg) = (&self.homs[*f], &self.homs[*g]);
        if hf.cod != hg.dom {
            return Err(CatError::EndpointMismatch {
                cod: self.objects[hf.cod].clone(),
                dom: self.objects[hg.dom].clone(),
            });
        }
        self.compose
            .get(&(*g, *f))
            .copied()
            .ok_or_else(|| CatError::UndefinedComposite {
                g: hg.name.clone(),
                f: hf.name.clone(),
            })
    }
}

/// A finite preorder, closed reflexively and transitively on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    pub elements: Vec<String>,
    order: Vec<Vec<bool>>,
}

#[derive(Deserialize)]
struct PosetJson {
    elements: Vec<Value>,
    #[serde(default)]
    leq: Vec<[Value; 2]>,
}

impl Poset {
    pub fn new(elements: Vec<String>, leq: Vec<(String, String)>) -> Result<Self, CatError> {
        let n = elements.len();
        let set: BTreeSet<&String> = elements.iter().collect();
        if set.len() != n {
            return Err(CatError::Invalid("duplicate poset element".into()));
        }
        let pos = |s: &str| {
            elements
                .iter()
                .position(|e| e == s)
                .ok_or_else(|| CatError::UnknownName(s.to_string()))
        };
        let mut order = vec![vec![false; n]; n];
        for (i, row) in order.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in &leq {
            order[pos(a)?][pos(b)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if order[i][k] {
                    for j in 0..n {
                        if order[k][j] {
                            order[i][j] = true;
                        }
                    }
                }
            }
        }
        Ok(Poset { elements, order })
    }

    /// Builds a poset on `0..n` from index pairs.
    pub fn from_pairs(n: usize, leq: &[(usize, usize)]) -> Self {
        let elements: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let pairs = leq
            .iter()
            .map(|&(a, b)| (a.to_string(), b.to_string()))
            .collect();
        Poset::new(elements, pairs).expect("indices are in range")
    }

    /// Parses `{"elements": [...], "leq": [[a,b],...]}`.
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let raw: PosetJson = serde_json::from_str(text)?;
        let elements = raw.elements.iter().map(label).collect();
        let leq = raw.leq.iter().map(|[a, b]| (label(a), label(b))).collect();
        Poset::new(elements, leq)
            .map_err(|e| <serde_json::Error as serde::de::Error>::custom(e.to_string()))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order[a][b]
    }

    /// Elements with nothing strictly above them.
    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&p| (0..self.len()).all(|q| !self.leq(p, q) || self.leq(q, p)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_category_gets_implicit_identities() {
        let c = TableCategory::from_json(
            r#"{"objects":["a","b"],"homs":[{"dom":"a","cod":"b","name":"f"}],"compose":[]}"#,
        )
        .unwrap();
        assert_eq!(c.morphism_count(), 3);
        let f = c.morphism_index("f").unwrap();
        assert_eq!(c.compose(&c.identity(&1), &f).unwrap(), f);
        assert!(crate::cat::check_laws(&c).is_empty());
    }

    #[test]
    fn poset_json_is_closed_transitively() {
        let p = Poset::from_json(r#"{"elements":[0,1,2],"leq":[[0,1],[1,2]]}"#).unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(p.maximal_elements(), vec![2]);
    }
}
