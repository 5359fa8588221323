use super::graph::FinGraph;
use super::linalg::{is_prime, Mat, VecObj};
use crate::cat::{Action, FinMorphism, Obj};
use crate::error::CatError;
use itertools::Itertools;

/// The built-in concrete categories, each a choice of objects and a class
/// of morphisms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatKind {
    /// Finite sets and all functions.
    Set,
    /// Finite sets and injections.
    SetMono,
    /// Graphs and homomorphisms.
    GraphHom,
    /// Graphs and subgraph embeddings (injective homomorphisms).
    GraphSub,
    /// Graphs and full (induced) embeddings.
    GraphFull,
    /// Spaces `F_p^d` and all linear maps.
    Vect(u32),
    /// Spaces `F_p^d` and injective linear maps.
    VectMono(u32),
}

impl CatKind {
    pub const NAMES: [&'static str; 7] = [
        "set",
        "set-mono",
        "graph-hom",
        "graph-sub",
        "graph-full",
        "vec",
        "vec-mono",
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatKind::Set => "set",
            CatKind::SetMono => "set-mono",
            CatKind::GraphHom => "graph-hom",
            CatKind::GraphSub => "graph-sub",
            CatKind::GraphFull => "graph-full",
            CatKind::Vect(_) => "vec",
            CatKind::VectMono(_) => "vec-mono",
        }
    }

    /// Resolves a category name; `p` is used by the linear categories.
    pub fn parse(name: &str, p: u32) -> Result<Self, CatError> {
        let kind = match name {
            "set" => CatKind::Set,
            "set-mono" => CatKind::SetMono,
            "graph-hom" => CatKind::GraphHom,
            "graph-sub" => CatKind::GraphSub,
            "graph-full" => CatKind::GraphFull,
            "vec" => CatKind::Vect(p),
            "vec-mono" => CatKind::VectMono(p),
            other => return Err(CatError::UnknownName(other.to_string())),
        };
        if matches!(kind, CatKind::Vect(_) | CatKind::VectMono(_)) && !is_prime(p) {
            return Err(CatError::Invalid(format!("{p} is not prime")));
        }
        Ok(kind)
    }

    /// The category with the same objects and all structure-preserving maps.
    pub fn ambient(self) -> CatKind {
        match self {
            CatKind::Set | CatKind::SetMono => CatKind::Set,
            CatKind::GraphHom | CatKind::GraphSub | CatKind::GraphFull => CatKind::GraphHom,
            CatKind::Vect(p) | CatKind::VectMono(p) => CatKind::Vect(p),
        }
    }

    pub fn is_mono_class(self) -> bool {
        matches!(
            self,
            CatKind::SetMono | CatKind::GraphSub | CatKind::GraphFull | CatKind::VectMono(_)
        )
    }

    fn prime(self) -> Option<u32> {
        match self {
            CatKind::Vect(p) | CatKind::VectMono(p) => Some(p),
            _ => None,
        }
    }

    pub fn admits(self, obj: &Obj) -> bool {
        match (self.ambient(), obj) {
            (CatKind::Set, Obj::Set(_)) => true,
            (CatKind::GraphHom, Obj::Graph(_)) => true,
            (CatKind::Vect(p), Obj::Vect(v)) => v.p == p,
            _ => false,
        }
    }

    /// Isomorphism representatives with carrier size at most `bound`,
    /// ordered by size.
    pub fn objects(self, bound: usize) -> Vec<Obj> {
        match self.ambient() {
            CatKind::Set => (0..=bound).map(Obj::Set).collect(),
            CatKind::GraphHom => (0..=bound.min(8))
                .flat_map(FinGraph::all_up_to_iso)
                .map(Obj::Graph)
                .collect(),
            CatKind::Vect(p) => (0..)
                .map(|d| VecObj::new(d, p))
                .take_while(|v| v.cardinality() <= bound)
                .map(Obj::Vect)
                .collect(),
            _ => unreachable!("ambient kinds are covered"),
        }
    }

    /// Whether `f` is a well-formed morphism of this category.
    pub fn contains(self, f: &FinMorphism) -> bool {
        if !self.admits(&f.dom) || !self.admits(&f.cod) {
            return false;
        }
        match (&f.action, &f.dom, &f.cod) {
            (Action::Map(m), dom, cod) if !matches!(dom, Obj::Vect(_)) => {
                if m.len() != dom.size() || m.iter().any(|&y| y >= cod.size()) {
                    return false;
                }
                if self.is_mono_class() && !f.is_injective() {
                    return false;
                }
                match (dom, cod) {
                    (Obj::Graph(a), Obj::Graph(b)) => a.edges().into_iter().all(|(u, v)| match self {
                        CatKind::GraphHom => b.adjacent_or_equal(m[u], m[v]),
                        _ => b.has_edge(m[u], m[v]),
                    }) && (self != CatKind::GraphFull
                        || FinGraph::pairs(a.n())
                            .into_iter()
                            .all(|(u, v)| a.has_edge(u, v) == b.has_edge(m[u], m[v]))),
                    _ => true,
                }
            }
            (Action::Matrix(m), Obj::Vect(a), Obj::Vect(b)) => {
                m.p == a.p
                    && m.rows == b.dim
                    && m.cols == a.dim
                    && m.data.iter().all(|&x| x < m.p)
                    && (!self.is_mono_class() || m.rank() == m.cols)
            }
            _ => false,
        }
    }

    fn check_bound(a: &Obj, bound: usize) -> Result<(), CatError> {
        if a.size() > bound {
            return Err(CatError::BoundExceeded {
                size: a.size(),
                bound,
            });
        }
        Ok(())
    }

    /// The complete, duplicate-free hom-set `a → b`.
    pub fn hom(self, a: &Obj, b: &Obj, bound: usize) -> Result<Vec<FinMorphism>, CatError> {
        Self::check_bound(a, bound)?;
        Self::check_bound(b, bound)?;
        if !self.admits(a) || !self.admits(b) {
            return Err(CatError::Invalid(format!(
                "objects {a} and {b} do not belong to {}",
                self.name()
            )));
        }
        let wrap = |m: Vec<usize>| FinMorphism::from_map(a.clone(), b.clone(), m, self);
        Ok(match (a, b) {
            (Obj::Set(na), Obj::Set(nb)) => {
                if self.is_mono_class() {
                    (0..*nb).permutations(*na).map(wrap).collect()
                } else {
                    all_maps(*na, *nb).into_iter().map(wrap).collect()
                }
            }
            (Obj::Graph(ga), Obj::Graph(gb)) => graph_maps(self, ga, gb).into_iter().map(wrap).collect(),
            (Obj::Vect(va), Obj::Vect(vb)) => Mat::all(vb.dim, va.dim, va.p)
                .filter(|m| !self.is_mono_class() || m.rank() == va.dim)
                .map(|m| FinMorphism::from_matrix(a.clone(), b.clone(), m, self))
                .collect(),
            _ => unreachable!("admits() checked the object kinds"),
        })
    }

    pub fn identity(self, a: &Obj) -> FinMorphism {
        FinMorphism::identity(a, self)
    }

    /// Automorphisms of `a`; the same in every class over a given ambient.
    pub fn automorphisms(self, a: &Obj) -> Vec<FinMorphism> {
        let wrap = |m: Vec<usize>| FinMorphism::from_map(a.clone(), a.clone(), m, self);
        match a {
            Obj::Set(n) => (0..*n).permutations(*n).map(wrap).collect(),
            Obj::Graph(g) => g.automorphisms().into_iter().map(wrap).collect(),
            Obj::Vect(v) => Mat::all(v.dim, v.dim, v.p)
                .filter(|m| m.rank() == v.dim)
                .map(|m| FinMorphism::from_matrix(a.clone(), a.clone(), m, self))
                .collect(),
        }
    }

    /// An isomorphism from `a` to its representative in [`CatKind::objects`].
    pub fn canonical_iso(self, a: &Obj) -> FinMorphism {
        match a {
            Obj::Graph(g) => {
                let (c, perm) = g.canonical_labeling();
                FinMorphism::from_map(a.clone(), Obj::Graph(c), perm, self)
            }
            _ => self.identity(a),
        }
    }

    /// Inclusion of the subobject of `n` generated by `elems`.
    pub fn subobject(self, n: &Obj, elems: &[usize]) -> FinMorphism {
        match n {
            Obj::Set(_) => {
                let vs: Vec<usize> = elems.iter().copied().sorted().dedup().collect();
                FinMorphism::from_map(Obj::Set(vs.len()), n.clone(), vs, self)
            }
            Obj::Graph(g) => {
                let vs: Vec<usize> = elems.iter().copied().sorted().dedup().collect();
                FinMorphism::from_map(Obj::Graph(g.induced(&vs)), n.clone(), vs, self)
            }
            Obj::Vect(v) => {
                let rows: Vec<Vec<u32>> = elems.iter().map(|&x| v.decode(x)).collect();
                let basis = Mat::from_rows(&rows, v.dim, v.p)
                    .expect("decoded vectors have the ambient dimension")
                    .rref()
                    .0;
                let sub = Obj::Vect(VecObj::new(basis.rows, v.p));
                FinMorphism::from_matrix(sub, n.clone(), basis.transpose(), self)
            }
        }
    }

    /// Given a subobject inclusion `incl: S → N` and `f: X → N` whose image
    /// lies in `S`, returns the unique `g: X → S` with `incl ∘ g = f`.
    pub fn factor_through(self, incl: &FinMorphism, f: &FinMorphism) -> Option<FinMorphism> {
        let g = match (&incl.action, &f.action) {
            (Action::Map(i), Action::Map(m)) => {
                let map = m
                    .iter()
                    .map(|y| i.iter().position(|x| x == y))
                    .collect::<Option<Vec<usize>>>()?;
                FinMorphism::from_map(f.dom.clone(), incl.dom.clone(), map, self)
            }
            (Action::Matrix(i), Action::Matrix(m)) => {
                let pivots: Vec<usize> = (0..i.cols)
                    .map(|c| (0..i.rows).find(|&r| i.get(r, c) != 0).expect("basis vectors are nonzero"))
                    .collect();
                let mut g = Mat::zero(i.cols, m.cols, m.p);
                for c in 0..m.cols {
                    for (k, &r) in pivots.iter().enumerate() {
                        g.set(k, c, m.get(r, c));
                    }
                }
                FinMorphism::from_matrix(f.dom.clone(), incl.dom.clone(), g, self)
            }
            _ => return None,
        };
        (incl.after(&g).ok()? == *f).then_some(g)
    }

    /// Carrier size of an object generated by `m` and one more element.
    pub fn one_point_bound(self, m: &Obj) -> usize {
        match self.prime() {
            Some(p) => m.size() * p as usize,
            None => m.size() + 1,
        }
    }
}

impl std::fmt::Display for CatKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.prime() {
            Some(p) if p != 2 => write!(f, "{}[p={p}]", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

/// All functions `0..na → 0..nb`, in counting order.
fn all_maps(na: usize, nb: usize) -> Vec<Vec<usize>> {
    if nb == 0 {
        return if na == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let mut cur = vec![0; na];
    loop {
        out.push(cur.clone());
        let mut k = 0;
        while k < na {
            cur[k] += 1;
            if cur[k] < nb {
                break;
            }
            cur[k] = 0;
            k += 1;
        }
        if k == na {
            return out;
        }
    }
}

fn graph_maps(kind: CatKind, a: &FinGraph, b: &FinGraph) -> Vec<Vec<usize>> {
    fn go(
        kind: CatKind,
        a: &FinGraph,
        b: &FinGraph,
        img: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let v = img.len();
        if v == a.n() {
            out.push(img.clone());
            return;
        }
        let mono = kind.is_mono_class();
        for y in 0..b.n() {
            if mono && used[y] {
                continue;
            }
            let ok = (0..v).all(|w| {
                if a.has_edge(w, v) {
                    if mono {
                        b.has_edge(img[w], y)
                    } else {
                        b.adjacent_or_equal(img[w], y)
                    }
                } else {
                    kind != CatKind::GraphFull || !b.has_edge(img[w], y)
                }
            });
            if ok {
                img.push(y);
                used[y] = true;
                go(kind, a, b, img, used, out);
                used[y] = false;
                img.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(kind, a, b, &mut Vec::new(), &mut vec![false; b.n()], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize) -> Obj {
        Obj::Set(n)
    }

    fn graph(n: usize, edges: &[(usize, usize)]) -> Obj {
        Obj::Graph(FinGraph::new(n, edges).unwrap())
    }

    #[test]
    fn hom_counts_match_closed_forms() {
        assert_eq!(CatKind::SetMono.hom(&set(2), &set(3), 6).unwrap().len(), 6);
        assert_eq!(CatKind::Set.hom(&set(2), &set(3), 6).unwrap().len(), 9);
        assert_eq!(CatKind::Set.hom(&set(0), &set(0), 6).unwrap().len(), 1);
        assert_eq!(CatKind::Set.hom(&set(1), &set(0), 6).unwrap().len(), 0);
        let k2 = Obj::Graph(FinGraph::complete(2));
        let k3 = Obj::Graph(FinGraph::complete(3));
        assert_eq!(CatKind::GraphFull.hom(&k2, &k3, 6).unwrap().len(), 6);
        let f1 = Obj::Vect(VecObj::new(1, 2));
        let f2 = Obj::Vect(VecObj::new(2, 2));
        assert_eq!(CatKind::VectMono(2).hom(&f1, &f2, 6).unwrap().len(), 3);
    }

    #[test]
    fn hom_respects_the_bound() {
        assert!(matches!(
            CatKind::Set.hom(&set(2), &set(7), 6),
            Err(CatError::BoundExceeded { size: 7, bound: 6 })
        ));
    }

    #[test]
    fn graph_morphism_classes() {
        let k2 = graph(2, &[(0, 1)]);
        let collapse = FinMorphism::from_map(k2.clone(), graph(1, &[]), vec![0, 0], CatKind::GraphHom);
        assert!(CatKind::GraphHom.contains(&collapse));
        assert!(!CatKind::GraphSub.contains(&collapse.clone().with_class(CatKind::GraphSub)));
        let incl = FinMorphism::from_map(graph(2, &[]), k2, vec![0, 1], CatKind::GraphSub);
        assert!(CatKind::GraphSub.contains(&incl));
        assert!(!CatKind::GraphFull.contains(&incl));
    }

    #[test]
    fn object_representatives() {
        assert_eq!(CatKind::SetMono.objects(3).len(), 4);
        assert_eq!(CatKind::GraphFull.objects(3).len(), 1 + 1 + 2 + 4);
        assert_eq!(CatKind::VectMono(2).objects(8).len(), 4);
        assert_eq!(CatKind::VectMono(2).objects(4).len(), 3);
    }

    #[test]
    fn subspace_factorisation() {
        let v3 = Obj::Vect(VecObj::new(3, 2));
        let k = CatKind::VectMono(2);
        let vo = VecObj::new(3, 2);
        let (a, b) = (vo.encode(&[1, 1, 0]), vo.encode(&[0, 1, 1]));
        let incl = k.subobject(&v3, &[a, b]);
        assert_eq!(incl.dom.size(), 4);
        let line = Obj::Vect(VecObj::new(1, 2));
        let f = FinMorphism::from_matrix(line, v3, Mat::from_columns(&[vec![1, 0, 1]], 3, 2), k);
        let g = k.factor_through(&incl, &f).unwrap();
        assert_eq!(incl.after(&g).unwrap(), f);
        let outside = FinMorphism::from_matrix(
            Obj::Vect(VecObj::new(1, 2)),
            Obj::Vect(vo),
            Mat::from_columns(&[vec![1, 0, 0]], 3, 2),
            k,
        );
        assert!(k.factor_through(&incl, &outside).is_none());
    }

    #[test]
    fn parse_rejects_composite_primes() {
        assert_eq!(CatKind::parse("vec", 3).unwrap(), CatKind::Vect(3));
        assert!(CatKind::parse("vec", 4).is_err());
        assert!(matches!(CatKind::parse("sets", 2), Err(CatError::UnknownName(_))));
    }
}
