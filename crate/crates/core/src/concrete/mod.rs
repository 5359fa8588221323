//! Built-in finite concrete categories: sets, graphs and vector spaces over
//! a prime field, each with a choice of morphism class, explicit hom
//! enumeration, and pushouts computed in the ambient category.

mod graph;
mod kind;
mod linalg;
mod pushout;

pub use graph::FinGraph;
pub use kind::CatKind;
pub use linalg::{inv_mod, is_prime, Mat, VecObj};
pub use pushout::{glue, pushout, Glue, PushoutResult};

use crate::cat::{FinCategory, FinMorphism, Obj};
use crate::error::CatError;

/// A built-in category truncated to objects of carrier size at most `bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounded {
    pub kind: CatKind,
    pub bound: usize,
}

impl Bounded {
    pub fn new(kind: CatKind, bound: usize) -> Self {
        Bounded { kind, bound }
    }
}

impl FinCategory for Bounded {
    type Ob = Obj;
    type Mor = FinMorphism;

    fn objects(&self) -> Vec<Obj> {
        self.kind.objects(self.bound)
    }

    fn hom(&self, a: &Obj, b: &Obj) -> Vec<FinMorphism> {
        self.kind.hom(a, b, self.bound).unwrap_or_default()
    }

    fn dom(&self, f: &FinMorphism) -> Obj {
        f.dom.clone()
    }

    fn cod(&self, f: &FinMorphism) -> Obj {
        f.cod.clone()
    }

    fn identity(&self, a: &Obj) -> FinMorphism {
        self.kind.identity(a)
    }

    fn compose(&self, g: &FinMorphism, f: &FinMorphism) -> Result<FinMorphism, CatError> {
        crate::cat::compose(g, f)
    }
}

/// Parses the set-morphism JSON `{"dom":[...], "cod":[...], "map":{"0":1,...}}`.
/// Labels are replaced by their positions.
pub fn set_morphism_from_json(v: &serde_json::Value, kind: CatKind) -> Result<FinMorphism, CatError> {
    let labels = |key: &str| -> Result<Vec<String>, CatError> {
        v[key]
            .as_array()
            .ok_or_else(|| CatError::Invalid(format!("missing `{key}` list")))
            .map(|a| a.iter().map(|x| x.to_string().trim_matches('"').to_string()).collect())
    };
    let (dom, cod) = (labels("dom")?, labels("cod")?);
    let map = v["map"]
        .as_object()
        .ok_or_else(|| CatError::Invalid("missing `map` object".into()))?;
    let mut out = Vec::with_capacity(dom.len());
    for d in &dom {
        let target = map
            .get(d)
            .ok_or_else(|| CatError::Invalid(format!("`map` has no entry for {d}")))?
            .to_string();
        let target = target.trim_matches('"');
        out.push(
            cod.iter()
                .position(|c| c == target)
                .ok_or_else(|| CatError::UnknownName(target.to_string()))?,
        );
    }
    let f = FinMorphism::from_map(Obj::Set(dom.len()), Obj::Set(cod.len()), out, kind);
    if !kind.contains(&f) {
        return Err(CatError::Invalid(format!("map is not a morphism of {kind}")));
    }
    Ok(f)
}

/// Parses the linear-map JSON `{"p":2, "dom":d1, "cod":d2, "matrix":[[...],...]}`.
pub fn linear_map_from_json(v: &serde_json::Value, kind: CatKind) -> Result<FinMorphism, CatError> {
    let num = |key: &str| {
        v[key]
            .as_u64()
            .ok_or_else(|| CatError::Invalid(format!("missing numeric `{key}`")))
    };
    let (p, d1, d2) = (num("p")? as u32, num("dom")? as usize, num("cod")? as usize);
    let rows: Vec<Vec<u32>> = serde_json::from_value(v["matrix"].clone())
        .map_err(|e| CatError::Invalid(format!("bad matrix: {e}")))?;
    if rows.len() != d2 {
        return Err(CatError::Invalid(format!("matrix has {} rows, expected {d2}", rows.len())));
    }
    let m = Mat::from_rows(&rows, d1, p)?;
    let f = FinMorphism::from_matrix(Obj::Vect(VecObj::new(d1, p)), Obj::Vect(VecObj::new(d2, p)), m, kind);
    if !kind.contains(&f) {
        return Err(CatError::Invalid(format!("matrix is not a morphism of {kind}")));
    }
    Ok(f)
}
