use super::graph::FinGraph;
use super::kind::CatKind;
use super::linalg::{Mat, VecObj};
use crate::cat::{compose, CommutingSquare, Cospan, FinMorphism, Obj, Span};
use crate::error::CatError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left(usize),
    Right(usize),
}

/// The quotient of `X1 ⊔ X2` by a list of identified element pairs, computed
/// in the ambient category.
#[derive(Debug, Clone)]
pub struct Glue {
    pub apex: Obj,
    pub left: FinMorphism,
    pub right: FinMorphism,
    /// A preimage of each apex generator.
    section: Vec<Side>,
}

impl Glue {
    /// The map out of the apex induced by `u: X1 → D` and `v: X2 → D`. The
    /// caller guarantees that `u` and `v` agree on the identified pairs.
    pub fn mediate(&self, u: &FinMorphism, v: &FinMorphism) -> FinMorphism {
        let image = |s: &Side| match *s {
            Side::Left(x) => u.apply(x),
            Side::Right(y) => v.apply(y),
        };
        match &u.cod {
            Obj::Vect(d) => {
                let cols: Vec<Vec<u32>> = self.section.iter().map(|s| d.decode(image(s))).collect();
                FinMorphism::from_matrix(
                    self.apex.clone(),
                    u.cod.clone(),
                    Mat::from_columns(&cols, d.dim, d.p),
                    u.class,
                )
            }
            _ => FinMorphism::from_map(
                self.apex.clone(),
                u.cod.clone(),
                self.section.iter().map(image).collect(),
                u.class,
            ),
        }
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Glues `x1` and `x2` along `pairs` of carrier elements. Legs are tagged
/// with `kind`, which may or may not contain them.
pub fn glue(kind: CatKind, x1: &Obj, x2: &Obj, pairs: &[(usize, usize)]) -> Result<Glue, CatError> {
    match (x1, x2) {
        (Obj::Vect(a), Obj::Vect(b)) if a.p == b.p => Ok(glue_linear(kind, *a, *b, pairs)),
        (Obj::Set(_), Obj::Set(_)) | (Obj::Graph(_), Obj::Graph(_)) => Ok(glue_discrete(kind, x1, x2, pairs)),
        _ => Err(CatError::Unsupported(format!("cannot glue {x1} and {x2}"))),
    }
}

fn glue_discrete(kind: CatKind, x1: &Obj, x2: &Obj, pairs: &[(usize, usize)]) -> Glue {
    let (n1, n2) = (x1.size(), x2.size());
    let mut parent: Vec<usize> = (0..n1 + n2).collect();
    for &(a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, n1 + b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut class_of = vec![usize::MAX; n1 + n2];
    let mut section = Vec::new();
    let mut cls = vec![0; n1 + n2];
    for x in 0..n1 + n2 {
        let r = find(&mut parent, x);
        if class_of[r] == usize::MAX {
            class_of[r] = section.len();
            section.push(if x < n1 { Side::Left(x) } else { Side::Right(x - n1) });
        }
        cls[x] = class_of[r];
    }
    let k = section.len();
    let apex = match (x1, x2) {
        (Obj::Graph(g1), Obj::Graph(g2)) => {
            let mut g = FinGraph::empty(k);
            for (u, v) in g1.edges() {
                if cls[u] != cls[v] {
                    g.add_edge(cls[u], cls[v]);
                }
            }
            for (u, v) in g2.edges() {
                if cls[n1 + u] != cls[n1 + v] {
                    g.add_edge(cls[n1 + u], cls[n1 + v]);
                }
            }
            Obj::Graph(g)
        }
        _ => Obj::Set(k),
    };
    Glue {
        left: FinMorphism::from_map(x1.clone(), apex.clone(), cls[..n1].to_vec(), kind),
        right: FinMorphism::from_map(x2.clone(), apex.clone(), cls[n1..].to_vec(), kind),
        apex,
        section,
    }
}

fn glue_linear(kind: CatKind, a: VecObj, b: VecObj, pairs: &[(usize, usize)]) -> Glue {
    let p = a.p;
    let n = a.dim + b.dim;
    let rows: Vec<Vec<u32>> = pairs
        .iter()
        .map(|&(x, y)| {
            let mut row = a.decode(x);
            row.extend(b.decode(y).into_iter().map(|c| (p - c) % p));
            row
        })
        .collect();
    let (rel, pivots) = Mat::from_rows(&rows, n, p).expect("rows have length n").rref();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut proj = Mat::zero(free.len(), n, p);
    for (k, &j) in free.iter().enumerate() {
        proj.set(k, j, 1);
    }
    for (r, &j) in pivots.iter().enumerate() {
        for (k, &f) in free.iter().enumerate() {
            proj.set(k, j, (p - rel.get(r, f)) % p);
        }
    }
    let apex = Obj::Vect(VecObj::new(free.len(), p));
    let section = free
        .iter()
        .map(|&j| {
            if j < a.dim {
                Side::Left(a.basis_element(j))
            } else {
                Side::Right(b.basis_element(j - a.dim))
            }
        })
        .collect();
    Glue {
        left: FinMorphism::from_matrix(Obj::Vect(a), apex.clone(), proj.columns(0..a.dim), kind),
        right: FinMorphism::from_matrix(Obj::Vect(b), apex.clone(), proj.columns(a.dim..n), kind),
        apex,
        section,
    }
}

/// A pushout of a span, with its two injections.
#[derive(Debug, Clone)]
pub struct PushoutResult {
    pub span: Span,
    pub apex: Obj,
    pub left_inj: FinMorphism,
    pub right_inj: FinMorphism,
    glue: Glue,
}

impl PushoutResult {
    /// The unique map from the pushout to a commuting cocone.
    pub fn mediator(&self, cocone: &Cospan) -> Result<FinMorphism, CatError> {
        let a = compose(&cocone.left, &self.span.left)?;
        let b = compose(&cocone.right, &self.span.right)?;
        if a != b {
            return Err(CatError::NonCommutingCocone);
        }
        Ok(self.glue.mediate(&cocone.left, &cocone.right))
    }

    pub fn cospan(&self) -> Cospan {
        Cospan {
            left: self.left_inj.clone(),
            right: self.right_inj.clone(),
        }
    }

    pub fn square(&self) -> CommutingSquare {
        CommutingSquare::new(self.span.clone(), self.cospan()).expect("pushout squares commute")
    }

    /// Whether both injections belong to `kind`.
    pub fn legs_in(&self, kind: CatKind) -> bool {
        kind.contains(&self.left_inj) && kind.contains(&self.right_inj)
    }
}

/// Pushout computed in the ambient category of `kind` and tagged with `kind`.
pub fn pushout(span: &Span, kind: CatKind) -> Result<PushoutResult, CatError> {
    let pairs: Vec<(usize, usize)> = span
        .base()
        .generators()
        .into_iter()
        .map(|x| (span.left.apply(x), span.right.apply(x)))
        .collect();
    let glue = glue(kind, &span.left.cod, &span.right.cod, &pairs)?;
    Ok(PushoutResult {
        span: span.clone(),
        apex: glue.apex.clone(),
        left_inj: glue.left.clone(),
        right_inj: glue.right.clone(),
        glue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn incl(dom: usize, cod: usize, map: Vec<usize>) -> FinMorphism {
        FinMorphism::from_map(Obj::Set(dom), Obj::Set(cod), map, CatKind::SetMono)
    }

    #[test]
    fn set_gluing_along_a_point() {
        let span = Span::new(incl(1, 2, vec![0]), incl(1, 2, vec![0])).unwrap();
        let po = pushout(&span, CatKind::SetMono).unwrap();
        assert_eq!(po.apex, Obj::Set(3));
        assert!(po.legs_in(CatKind::SetMono));
        let id = po.mediator(&po.cospan()).unwrap();
        assert_eq!(id, CatKind::SetMono.identity(&po.apex));
    }

    #[test]
    fn identifying_cocone_gives_non_injective_mediator() {
        let span = Span::new(incl(1, 2, vec![0]), incl(1, 2, vec![0])).unwrap();
        let po = pushout(&span, CatKind::SetMono).unwrap();
        let cocone = Cospan {
            left: incl(2, 3, vec![0, 1]),
            right: incl(2, 3, vec![0, 1]),
        };
        let m = po.mediator(&cocone).unwrap();
        assert_eq!(m.carrier_map(), vec![0, 1, 1]);
        assert!(!m.is_injective());
        let bad = Cospan {
            left: incl(2, 3, vec![0, 1]),
            right: incl(2, 3, vec![2, 1]),
        };
        assert_eq!(po.mediator(&bad), Err(CatError::NonCommutingCocone));
    }

    #[test]
    fn graphs_over_empty_base() {
        let k1 = Obj::Graph(FinGraph::empty(1));
        let e = |cod: Obj| FinMorphism::from_map(Obj::Graph(FinGraph::empty(0)), cod, vec![], CatKind::GraphSub);
        let span = Span::new(e(k1.clone()), e(k1.clone())).unwrap();
        let po = pushout(&span, CatKind::GraphSub).unwrap();
        assert_eq!(po.apex, Obj::Graph(FinGraph::empty(2)));
        let k2 = Obj::Graph(FinGraph::complete(2));
        let cocone = Cospan {
            left: FinMorphism::from_map(k1.clone(), k2.clone(), vec![0], CatKind::GraphSub),
            right: FinMorphism::from_map(k1, k2, vec![1], CatKind::GraphSub),
        };
        let m = po.mediator(&cocone).unwrap();
        assert!(CatKind::GraphSub.contains(&m));
    }

    #[test]
    fn linear_pushout_rank_formula() {
        let k = CatKind::VectMono(2);
        let (v1, v2) = (VecObj::new(1, 2), VecObj::new(2, 2));
        let f = FinMorphism::from_matrix(Obj::Vect(v1), Obj::Vect(v2), Mat::from_columns(&[vec![1, 0]], 2, 2), k);
        let g = FinMorphism::from_matrix(Obj::Vect(v1), Obj::Vect(v2), Mat::from_columns(&[vec![1, 1]], 2, 2), k);
        let po = pushout(&Span::new(f, g).unwrap(), k).unwrap();
        assert_eq!(po.apex, Obj::Vect(VecObj::new(3, 2)));
        assert!(po.legs_in(k));
        po.square();
        assert_eq!(po.mediator(&po.cospan()).unwrap(), k.identity(&po.apex));
    }
}
