use crate::concrete::{CatKind, FinGraph, Mat, VecObj};
use crate::error::CatError;
use serde_json::{json, Value};
use std::hash::{Hash, Hasher};

/// An object of one of the built-in concrete categories.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Obj {
    /// The set `{0, ..., n-1}`.
    Set(usize),
    Graph(FinGraph),
    Vect(VecObj),
}

impl Obj {
    /// Number of elements of the underlying carrier.
    pub fn size(&self) -> usize {
        match self {
            Obj::Set(n) => *n,
            Obj::Graph(g) => g.n(),
            Obj::Vect(v) => v.cardinality(),
        }
    }

    /// Elements needed to generate the object: all of them for sets and
    /// graphs, the standard basis (encoded as carrier elements) for spaces.
    pub fn generators(&self) -> Vec<usize> {
        match self {
            Obj::Set(_) | Obj::Graph(_) => (0..self.size()).collect(),
            Obj::Vect(v) => (0..v.dim).map(|i| v.basis_element(i)).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Obj::Set(n) => json!({ "set": n }),
            Obj::Graph(g) => g.to_json(),
            Obj::Vect(v) => json!({ "p": v.p, "dim": v.dim }),
        }
    }
}

impl std::fmt::Display for Obj {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Obj::Set(n) => write!(f, "Set({n})"),
            Obj::Graph(g) => write!(f, "Graph({}, {:?})", g.n(), g.edges()),
            Obj::Vect(v) => write!(f, "F{}^{}", v.p, v.dim),
        }
    }
}

/// Underlying action of a concrete morphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    /// Image of each carrier element.
    Map(Vec<usize>),
    /// Matrix with `cod` rows and `dom` columns.
    Matrix(Mat),
}

/// A morphism of a concrete category. Equality and hashing ignore the
/// class tag: two morphisms are equal when their endpoints and actions are.
#[derive(Debug, Clone)]
pub struct FinMorphism {
    pub dom: Obj,
    pub cod: Obj,
    pub action: Action,
    pub class: CatKind,
}

impl PartialEq for FinMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.action == other.action
    }
}

impl Eq for FinMorphism {}

impl Hash for FinMorphism {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dom.hash(state);
        self.cod.hash(state);
        self.action.hash(state);
    }
}

impl FinMorphism {
    pub fn from_map(dom: Obj, cod: Obj, map: Vec<usize>, class: CatKind) -> Self {
        FinMorphism {
            dom,
            cod,
            action: Action::Map(map),
            class,
        }
    }

    pub fn from_matrix(dom: Obj, cod: Obj, m: Mat, class: CatKind) -> Self {
        FinMorphism {
            dom,
            cod,
            action: Action::Matrix(m),
            class,
        }
    }

    pub fn identity(obj: &Obj, class: CatKind) -> Self {
        match obj {
            Obj::Vect(v) => Self::from_matrix(obj.clone(), obj.clone(), Mat::identity(v.dim, v.p), class),
            _ => Self::from_map(obj.clone(), obj.clone(), (0..obj.size()).collect(), class),
        }
    }

    pub fn with_class(mut self, class: CatKind) -> Self {
        self.class = class;
        self
    }

    /// Image of a carrier element.
    pub fn apply(&self, x: usize) -> usize {
        match (&self.action, &self.dom) {
            (Action::Map(m), _) => m[x],
            (Action::Matrix(m), Obj::Vect(v)) => {
                let image = m.apply(&v.decode(x));
                VecObj::new(m.rows, v.p).encode(&image)
            }
            (Action::Matrix(_), _) => unreachable!("matrix morphism on a non-linear object"),
        }
    }

    /// The map on carriers, element by element.
    pub fn carrier_map(&self) -> Vec<usize> {
        match &self.action {
            Action::Map(m) => m.clone(),
            Action::Matrix(_) => (0..self.dom.size()).map(|x| self.apply(x)).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        match &self.action {
            Action::Map(m) => {
                let mut seen = vec![false; self.cod.size()];
                m.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
            }
            Action::Matrix(m) => m.rank() == m.cols,
        }
    }

    /// Returns `self ∘ f`.
    pub fn after(&self, f: &FinMorphism) -> Result<FinMorphism, CatError> {
        compose(self, f)
    }

    /// Flat encoding of the action, used for canonical forms.
    pub fn key(&self) -> Vec<u32> {
        match &self.action {
            Action::Map(m) => m.iter().map(|&x| x as u32).collect(),
            Action::Matrix(m) => m.data.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        let action = match &self.action {
            Action::Map(m) => json!({ "map": m }),
            Action::Matrix(m) => json!({ "matrix": m.row_vectors() }),
        };
        json!({
            "dom": self.dom.to_json(),
            "cod": self.cod.to_json(),
            "class": self.class.name(),
            "action": action,
        })
    }
}

/// Returns `g ∘ f`, failing when the endpoints do not match.
pub fn compose(g: &FinMorphism, f: &FinMorphism) -> Result<FinMorphism, CatError> {
    if f.cod != g.dom {
        return Err(CatError::EndpointMismatch {
            cod: f.cod.to_string(),
            dom: g.dom.to_string(),
        });
    }
    let action = match (&g.action, &f.action) {
        (Action::Map(gm), Action::Map(fm)) => Action::Map(fm.iter().map(|&x| gm[x]).collect()),
        (Action::Matrix(gm), Action::Matrix(fm)) => Action::Matrix(gm.mul(fm)),
        _ => return Err(CatError::Unsupported("mixed map and matrix actions".into())),
    };
    Ok(FinMorphism {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        action,
        class: g.class,
    })
}

/// A span `B ← A → C`, stored as the legs `f: A → B` and `g: A → C`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Span {
    pub left: FinMorphism,
    pub right: FinMorphism,
}

impl Span {
    pub fn new(left: FinMorphism, right: FinMorphism) -> Result<Self, CatError> {
        if left.dom != right.dom {
            return Err(CatError::Invalid("span legs have different domains".into()));
        }
        Ok(Span { left, right })
    }

    pub fn base(&self) -> &Obj {
        &self.left.dom
    }

    pub fn swapped(&self) -> Span {
        Span {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "base": self.base().to_json(), "left": self.left.to_json(), "right": self.right.to_json() })
    }
}

/// A cospan `B → D ← C`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cospan {
    pub left: FinMorphism,
    pub right: FinMorphism,
}

impl Cospan {
    pub fn apex(&self) -> &Obj {
        &self.left.cod
    }
}

/// A span together with a cospan whose two composites agree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CommutingSquare {
    pub span: Span,
    pub cospan: Cospan,
}

impl CommutingSquare {
    pub fn new(span: Span, cospan: Cospan) -> Result<Self, CatError> {
        if span.left.cod != cospan.left.dom
            || span.right.cod != cospan.right.dom
            || cospan.left.cod != cospan.right.cod
        {
            return Err(CatError::Invalid("square endpoints do not match".into()));
        }
        let a = compose(&cospan.left, &span.left)?;
        let b = compose(&cospan.right, &span.right)?;
        if a != b {
            return Err(CatError::NonCommutingCocone);
        }
        Ok(CommutingSquare { span, cospan })
    }

    pub fn base(&self) -> &Obj {
        self.span.base()
    }

    pub fn apex(&self) -> &Obj {
        self.cospan.apex()
    }

    /// Exchanges the roles of the two ears.
    pub fn swapped(&self) -> CommutingSquare {
        CommutingSquare {
            span: self.span.swapped(),
            cospan: Cospan {
                left: self.cospan.right.clone(),
                right: self.cospan.left.clone(),
            },
        }
    }

    /// The diagonal `A → D`.
    pub fn diagonal(&self) -> FinMorphism {
        compose(&self.cospan.left, &self.span.left).expect("square endpoints checked")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base": self.base().to_json(),
            "ears": [self.span.left.cod.to_json(), self.span.right.cod.to_json()],
            "apex": self.apex().to_json(),
            "a_to_b": self.span.left.key(),
            "a_to_c": self.span.right.key(),
            "b_to_d": self.cospan.left.key(),
            "c_to_d": self.cospan.right.key(),
        })
    }
}
