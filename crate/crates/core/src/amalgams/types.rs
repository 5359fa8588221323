use crate::cat::{compose, FinMorphism, Obj};
use crate::concrete::CatKind;
use crate::error::CatError;
use serde_json::{json, Value};
use std::collections::HashMap;

/// A point over `M`: a morphism `f: M → B` together with an element of `B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub map: FinMorphism,
    pub element: usize,
}

impl Point {
    pub fn base(&self) -> &Obj {
        &self.map.dom
    }

    pub fn to_json(&self) -> Value {
        json!({ "carrier": self.map.cod.to_json(), "map": self.map.key(), "element": self.element })
    }
}

type PointKey = (Obj, Vec<u32>, usize);

/// One connected component of the category of points.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeClass {
    pub id: usize,
    pub representative: Point,
    /// Number of point isomorphism classes in the component.
    pub points: usize,
}

/// The connected components of the category of points over a base, with
/// carriers bounded by `bound`.
#[derive(Debug, Clone)]
pub struct TypeSpace {
    pub kind: CatKind,
    pub base: Obj,
    pub bound: usize,
    pub points: Vec<Point>,
    pub component: Vec<usize>,
    pub classes: Vec<TypeClass>,
    index: HashMap<PointKey, usize>,
    automorphisms: HashMap<Obj, Vec<FinMorphism>>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

impl TypeSpace {
    fn canonical(&self, f: &FinMorphism, b: usize) -> Option<(PointKey, Point)> {
        let iso = self.kind.canonical_iso(&f.cod);
        let rep = iso.cod.clone();
        let auts = self.automorphisms.get(&rep)?;
        let f0 = compose(&iso, f).ok()?;
        let b0 = iso.apply(b);
        let (key, s) = auts
            .iter()
            .map(|s| ((compose(s, &f0).expect("endpoints match").key(), s.apply(b0)), s))
            .min_by(|x, y| x.0.cmp(&y.0))?;
        let point = Point {
            map: compose(s, &f0).expect("endpoints match"),
            element: key.1,
        };
        Some(((rep, key.0, key.1), point))
    }

    /// Component of the point `(f, b)` if it is among the enumerated points.
    pub fn component_of_point(&self, f: &FinMorphism, b: usize) -> Option<usize> {
        let (key, _) = self.canonical(f, b)?;
        self.index.get(&key).map(|&i| self.component[i])
    }

    /// Type of `b` over the base, computed through the subobject of `f.cod`
    /// generated by the image of `f` and `b`, which receives a point
    /// morphism into `(f, b)`.
    pub fn type_of(&self, f: &FinMorphism, b: usize) -> Option<usize> {
        let mut elems: Vec<usize> = self.base.generators().into_iter().map(|x| f.apply(x)).collect();
        elems.push(b);
        let incl = self.kind.subobject(&f.cod, &elems);
        if incl.dom.size() > self.bound {
            return None;
        }
        let g = self.kind.factor_through(&incl, f)?;
        let b0 = (0..incl.dom.size()).find(|&x| incl.apply(x) == b)?;
        self.component_of_point(&g, b0)
    }

    /// For each class, whether some element of `f.cod` realizes it over `f`.
    pub fn realized(&self, f: &FinMorphism) -> Vec<bool> {
        let mut out = vec![false; self.classes.len()];
        for b in 0..f.cod.size() {
            if let Some(t) = self.type_of(f, b) {
                out[t] = true;
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base.to_json(),
            "bound": self.bound,
            "classes": self.classes.iter().map(|c| json!({
                "id": c.id,
                "points": c.points,
                "representative": c.representative.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Partitions the points `(f: m → B, b)` with `|B| ≤ bound` into connected
/// components of the category of points.
pub fn enumerate_types(m: &Obj, kind: CatKind, bound: usize) -> Result<TypeSpace, CatError> {
    if m.size() > bound {
        return Err(CatError::BoundExceeded { size: m.size(), bound });
    }
    let objects = kind.objects(bound);
    let automorphisms = objects.iter().map(|o| (o.clone(), kind.automorphisms(o))).collect();
    let mut space = TypeSpace {
        kind,
        base: m.clone(),
        bound,
        points: Vec::new(),
        component: Vec::new(),
        classes: Vec::new(),
        index: HashMap::new(),
        automorphisms,
    };
    for b in &objects {
        for f in kind.hom(m, b, bound)? {
            for x in 0..b.size() {
                let (key, point) = space.canonical(&f, x).expect("representatives have automorphisms");
                if !space.index.contains_key(&key) {
                    space.index.insert(key, space.points.len());
                    space.points.push(point);
                }
            }
        }
    }
    let mut parent: Vec<usize> = (0..space.points.len()).collect();
    let mut homs: HashMap<(Obj, Obj), Vec<FinMorphism>> = HashMap::new();
    for (i, p) in space.points.iter().enumerate() {
        for b2 in &objects {
            let hs = homs
                .entry((p.map.cod.clone(), b2.clone()))
                .or_insert_with(|| kind.hom(&p.map.cod, b2, bound).unwrap_or_default());
            for h in hs.iter() {
                let f2 = compose(h, &p.map).expect("endpoints match");
                let (key, _) = space.canonical(&f2, h.apply(p.element)).expect("representative codomain");
                let j = space.index[&key];
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut comp_of_root = HashMap::new();
    for i in 0..space.points.len() {
        let r = find(&mut parent, i);
        let next = comp_of_root.len();
        let c = *comp_of_root.entry(r).or_insert(next);
        if c == space.classes.len() {
            space.classes.push(TypeClass {
                id: c,
                representative: space.points[i].clone(),
                points: 0,
            });
        }
        space.classes[c].points += 1;
        space.component.push(c);
    }
    Ok(space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concrete::FinGraph;

    #[test]
    fn point_over_a_point_has_two_types() {
        let t = enumerate_types(&Obj::Set(1), CatKind::SetMono, 2).unwrap();
        assert_eq!(t.classes.len(), 2);
    }

    #[test]
    fn vertex_has_three_full_embedding_types() {
        let k1 = Obj::Graph(FinGraph::empty(1));
        let t = enumerate_types(&k1, CatKind::GraphFull, 2).unwrap();
        assert_eq!(t.classes.len(), 3);
    }

    #[test]
    fn old_elements_keep_their_own_type() {
        let m = Obj::Set(2);
        let t = enumerate_types(&m, CatKind::SetMono, 3).unwrap();
        let id = CatKind::SetMono.identity(&m);
        let old: Vec<usize> = (0..2).map(|x| t.type_of(&id, x).unwrap()).collect();
        let big = FinMorphism::from_map(m.clone(), Obj::Set(3), vec![0, 1], CatKind::SetMono);
        let fresh = t.type_of(&big, 2).unwrap();
        assert_ne!(old[0], old[1]);
        assert!(!old.contains(&fresh));
        assert_eq!(t.type_of(&big, 1), Some(old[1]));
    }

    #[test]
    fn types_of_a_line_over_f2() {
        let line = Obj::Vect(crate::concrete::VecObj::new(1, 2));
        let t = enumerate_types(&line, CatKind::VectMono(2), 4).unwrap();
        assert_eq!(t.classes.len(), 3);
    }
}
