use super::predicates::IndependencePredicate;
use crate::amalgams::{cocones, enumerate_spans, jointly_connected, Connection, HomIndex};
use crate::cat::{compose, CommutingSquare, Cospan, Span};
use crate::concrete::{pushout, CatKind};
use crate::error::CatError;
use crate::report::{Check, Verdict};
use itertools::Itertools;
use serde_json::{json, Value};

/// One span together with all its cocones at the bound.
#[derive(Debug, Clone)]
pub struct SpanEntry {
    pub span: Span,
    pub squares: Vec<CommutingSquare>,
    /// Whether the pushout apex is within the bound.
    pub pushout_fits: bool,
}

/// Every commuting square with all corners of size at most `bound`, up to
/// isomorphism, grouped by span.
#[derive(Debug, Clone)]
pub struct SquareCatalog {
    pub kind: CatKind,
    pub bound: usize,
    pub spans: Vec<SpanEntry>,
}

impl SquareCatalog {
    pub fn build(kind: CatKind, bound: usize) -> Result<Self, CatError> {
        let mut spans = Vec::new();
        for span in enumerate_spans(kind, bound)? {
            let squares = cocones(&span, kind, bound)?;
            let po = pushout(&span, kind)?;
            spans.push(SpanEntry {
                pushout_fits: po.apex.size() <= bound && po.legs_in(kind),
                span,
                squares,
            });
        }
        Ok(SquareCatalog { kind, bound, spans })
    }

    pub fn squares(&self) -> impl Iterator<Item = &CommutingSquare> {
        self.spans.iter().flat_map(|e| e.squares.iter())
    }

    pub fn len(&self) -> usize {
        self.spans.iter().map(|e| e.squares.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    Existence,
    Uniqueness,
    Symmetry,
    Transitivity,
    Invariance,
    WitnessProperty,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [
        Axiom::Existence,
        Axiom::Uniqueness,
        Axiom::Symmetry,
        Axiom::Transitivity,
        Axiom::Invariance,
        Axiom::WitnessProperty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Existence => "existence",
            Axiom::Uniqueness => "uniqueness",
            Axiom::Symmetry => "symmetry",
            Axiom::Transitivity => "transitivity",
            Axiom::Invariance => "invariance",
            Axiom::WitnessProperty => "witness-property",
        }
    }
}

/// The verdict of one axiom check. A failure carries the squares that
/// replay it through the predicate.
#[derive(Debug, Clone)]
pub struct Fragment {
    pub axiom: Axiom,
    pub verdict: Verdict,
    pub exhaustive: bool,
    pub cases: usize,
    pub counterexample: Vec<CommutingSquare>,
    pub note: Value,
}

impl Fragment {
    fn pass(axiom: Axiom, cases: usize) -> Self {
        Fragment {
            axiom,
            verdict: Verdict::Pass,
            exhaustive: true,
            cases,
            counterexample: Vec::new(),
            note: Value::Null,
        }
    }

    fn fail(axiom: Axiom, cases: usize, squares: Vec<CommutingSquare>, note: Value) -> Self {
        Fragment {
            axiom,
            verdict: Verdict::Fail,
            exhaustive: true,
            cases,
            counterexample: squares,
            note,
        }
    }

    pub fn witness_json(&self) -> Value {
        if self.counterexample.is_empty() && self.note.is_null() {
            return json!({ "cases": self.cases });
        }
        json!({
            "cases": self.cases,
            "squares": self.counterexample.iter().map(CommutingSquare::to_json).collect::<Vec<_>>(),
            "note": self.note,
        })
    }

    pub fn to_check(&self, prefix: &str) -> Check {
        Check::new(format!("{prefix}{}", self.axiom.name()), self.verdict, self.witness_json(), self.exhaustive)
    }
}

/// Every span whose pushout fits the bound has an independent amalgam.
pub fn check_existence(pred: &IndependencePredicate, cat: &SquareCatalog) -> Fragment {
    let mut cases = 0;
    for entry in cat.spans.iter().filter(|e| e.pushout_fits) {
        cases += 1;
        if !entry.squares.iter().any(|sq| pred.decide(sq)) {
            return Fragment::fail(
                Axiom::Existence,
                cases,
                Vec::new(),
                json!({ "span": entry.span.to_json() }),
            );
        }
    }
    Fragment::pass(Axiom::Existence, cases)
}

/// Any two independent amalgams of a span are jointly connected.
pub fn check_uniqueness(pred: &IndependencePredicate, cat: &SquareCatalog) -> Fragment {
    let mut cases = 0;
    let mut exhaustive = true;
    for entry in &cat.spans {
        let indep: Vec<&CommutingSquare> = entry.squares.iter().filter(|sq| pred.decide(sq)).collect();
        for (a, b) in indep.iter().tuple_combinations() {
            cases += 1;
            let reach = a.apex().size() + b.apex().size();
            match jointly_connected(a, b, cat.kind, reach) {
                Connection::Witness(_) => {}
                Connection::Absent { exhaustive: true } => {
                    return Fragment::fail(
                        Axiom::Uniqueness,
                        cases,
                        vec![(*a).clone(), (*b).clone()],
                        json!("independent amalgams with no common amalgam"),
                    );
                }
                Connection::Absent { exhaustive: false } => exhaustive = false,
            }
        }
    }
    let mut f = Fragment::pass(Axiom::Uniqueness, cases);
    if !exhaustive {
        f.verdict = Verdict::Inconclusive;
        f.exhaustive = false;
    }
    f
}

/// Swapping the ears preserves independence.
pub fn check_symmetry(pred: &IndependencePredicate, cat: &SquareCatalog) -> Fragment {
    let mut cases = 0;
    for sq in cat.squares() {
        cases += 1;
        if pred.decide(sq) != pred.decide(&sq.swapped()) {
            return Fragment::fail(Axiom::Symmetry, cases, vec![sq.clone(), sq.swapped()], Value::Null);
        }
    }
    Fragment::pass(Axiom::Symmetry, cases)
}

/// Horizontal composites of independent squares are independent. Returns
/// `(left, right, outer)` on failure.
pub fn check_transitivity(pred: &IndependencePredicate, cat: &SquareCatalog) -> Result<Fragment, CatError> {
    let kind = cat.kind;
    let objects = kind.objects(cat.bound);
    let mut cases = 0;
    for left in cat.squares().filter(|sq| pred.decide(sq)) {
        let c = &left.span.right.cod;
        let v = &left.cospan.right;
        for e in &objects {
            let hs = HomIndex::new(kind.hom(c, e, cat.bound)?);
            if hs.list.is_empty() {
                continue;
            }
            let canon = hs.orbit_minima(&hs.post_action(&kind.automorphisms(e)));
            for (i, h) in hs.list.iter().enumerate() {
                if canon[i] != i {
                    continue;
                }
                let right_span = Span::new(v.clone(), h.clone())?;
                for right in cocones(&right_span, kind, cat.bound)? {
                    if !pred.decide(&right) {
                        continue;
                    }
                    cases += 1;
                    let outer = CommutingSquare::new(
                        Span::new(left.span.left.clone(), compose(h, &left.span.right)?)?,
                        Cospan {
                            left: compose(&right.cospan.left, &left.cospan.left)?,
                            right: right.cospan.right.clone(),
                        },
                    )?;
                    if !pred.decide(&outer) {
                        return Ok(Fragment::fail(
                            Axiom::Transitivity,
                            cases,
                            vec![left.clone(), right, outer],
                            json!(["left", "right", "outer"]),
                        ));
                    }
                }
            }
        }
    }
    Ok(Fragment::pass(Axiom::Transitivity, cases))
}

/// Independence is constant on connected components of the amalgams of
/// each span.
pub fn check_invariance(pred: &IndependencePredicate, cat: &SquareCatalog) -> Fragment {
    let mut cases = 0;
    for entry in &cat.spans {
        let verdicts: Vec<bool> = entry.squares.iter().map(|sq| pred.decide(sq)).collect();
        if verdicts.iter().all(|&v| v) || verdicts.iter().all(|&v| !v) {
            cases += entry.squares.len();
            continue;
        }
        for (i, j) in (0..entry.squares.len()).tuple_combinations() {
            cases += 1;
            if verdicts[i] == verdicts[j] {
                continue;
            }
            let (a, b) = (&entry.squares[i], &entry.squares[j]);
            let reach = a.apex().size() + b.apex().size();
            if let Connection::Witness(w) = jointly_connected(a, b, cat.kind, reach) {
                let (indep, dep) = if verdicts[i] { (a, b) } else { (b, a) };
                return Fragment::fail(
                    Axiom::Invariance,
                    cases,
                    vec![indep.clone(), dep.clone()],
                    json!({ "common_amalgam": w.to_json() }),
                );
            }
        }
    }
    Fragment::pass(Axiom::Invariance, cases)
}

/// The sub-squares of `sq` whose ears are generated over the base by at
/// most two extra elements in total.
fn small_subsquares(sq: &CommutingSquare, kind: CatKind) -> Result<Vec<CommutingSquare>, CatError> {
    let (b, c) = (&sq.span.left.cod, &sq.span.right.cod);
    let base_gens = sq.base().generators();
    let im_f: Vec<usize> = base_gens.iter().map(|&x| sq.span.left.apply(x)).collect();
    let im_g: Vec<usize> = base_gens.iter().map(|&x| sq.span.right.apply(x)).collect();
    let mut out = Vec::new();
    for kx in 0..=2 {
        for ky in 0..=(2 - kx) {
            for xs in (0..b.size()).combinations(kx) {
                for ys in (0..c.size()).combinations(ky) {
                    let ib = kind.subobject(b, &[im_f.clone(), xs.clone()].concat());
                    let ic = kind.subobject(c, &[im_g.clone(), ys.clone()].concat());
                    let (Some(f2), Some(g2)) = (
                        kind.factor_through(&ib, &sq.span.left),
                        kind.factor_through(&ic, &sq.span.right),
                    ) else {
                        continue;
                    };
                    out.push(CommutingSquare::new(
                        Span::new(f2, g2)?,
                        Cospan {
                            left: compose(&sq.cospan.left, &ib)?,
                            right: compose(&sq.cospan.right, &ic)?,
                        },
                    )?);
                }
            }
        }
    }
    Ok(out)
}

/// Every dependent square has a dependent sub-square whose ears are
/// generated over the base by at most two elements in total.
pub fn check_witness_property(pred: &IndependencePredicate, cat: &SquareCatalog) -> Result<Fragment, CatError> {
    let mut cases = 0;
    for sq in cat.squares().filter(|sq| !pred.decide(sq)) {
        cases += 1;
        let witnessed = small_subsquares(sq, cat.kind)?.iter().any(|s| !pred.decide(s));
        if !witnessed {
            return Ok(Fragment::fail(
                Axiom::WitnessProperty,
                cases,
                vec![sq.clone()],
                json!("every small sub-square is independent"),
            ));
        }
    }
    Ok(Fragment::pass(Axiom::WitnessProperty, cases))
}

/// All six fragments for one predicate.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub predicate: String,
    pub kind: CatKind,
    pub bound: usize,
    pub squares: usize,
    pub fragments: Vec<Fragment>,
}

impl AxiomReport {
    pub fn fragment(&self, axiom: Axiom) -> &Fragment {
        self.fragments
            .iter()
            .find(|f| f.axiom == axiom)
            .expect("suite runs every axiom")
    }

    pub fn all_pass(&self) -> bool {
        self.fragments.iter().all(|f| f.verdict.is_pass())
    }

    pub fn checks(&self) -> Vec<Check> {
        let prefix = format!("{}/{}/", self.kind, self.predicate);
        self.fragments.iter().map(|f| f.to_check(&prefix)).collect()
    }
}

pub fn run_axiom_suite(pred: &IndependencePredicate, cat: &SquareCatalog) -> Result<AxiomReport, CatError> {
    let fragments = vec![
        check_existence(pred, cat),
        check_uniqueness(pred, cat),
        check_symmetry(pred, cat),
        check_transitivity(pred, cat)?,
        check_invariance(pred, cat),
        check_witness_property(pred, cat)?,
    ];
    Ok(AxiomReport {
        predicate: pred.name.to_string(),
        kind: cat.kind,
        bound: cat.bound,
        squares: cat.len(),
        fragments,
    })
}

/// The first square in catalog order on which the two predicates disagree,
/// or `None` when they agree on every square at the bound.
pub fn canonicity_compare<'a>(
    p1: &IndependencePredicate,
    p2: &IndependencePredicate,
    cat: &'a SquareCatalog,
) -> Option<&'a CommutingSquare> {
    cat.squares().find(|sq| p1.decide(sq) != p2.decide(sq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::independence::{negative_controls, predicate_by_name};

    #[test]
    fn disjoint_sets_pass_at_bound_three() {
        let cat = SquareCatalog::build(CatKind::SetMono, 3).unwrap();
        let p = predicate_by_name("disjoint-sets", CatKind::SetMono).unwrap();
        let r = run_axiom_suite(&p, &cat).unwrap();
        assert!(r.all_pass(), "{:?}", r.fragments);
    }

    #[test]
    fn controls_fail_their_axioms() {
        let cat = SquareCatalog::build(CatKind::SetMono, 4).unwrap();
        let controls = negative_controls();
        let by = |n: &str| controls.iter().find(|p| p.name == n).unwrap();
        assert_eq!(check_existence(by("never"), &cat).verdict, Verdict::Fail);
        assert_eq!(check_symmetry(by("left-larger"), &cat).verdict, Verdict::Fail);
        assert_eq!(check_transitivity(by("apex-growth-le-1"), &cat).unwrap().verdict, Verdict::Fail);
        assert_eq!(check_uniqueness(by("always"), &cat).verdict, Verdict::Fail);
        assert_eq!(check_witness_property(by("parity"), &cat).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn apex_size_cap_is_transitive() {
        let cat = SquareCatalog::build(CatKind::SetMono, 4).unwrap();
        let cap = IndependencePredicate {
            name: "apex-size-le-3",
            doc: "",
            applies_to: |_| true,
            decide: |sq| sq.apex().size() <= 3,
        };
        assert_eq!(check_transitivity(&cap, &cat).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn cross_edge_free_breaks_invariance_under_subgraph_embeddings() {
        let cat = SquareCatalog::build(CatKind::GraphSub, 3).unwrap();
        let p = predicate_by_name("cross-edge-free", CatKind::GraphSub).unwrap();
        let f = check_invariance(&p, &cat);
        assert_eq!(f.verdict, Verdict::Fail);
        assert_eq!(f.counterexample.len(), 2);
    }

    #[test]
    fn identical_predicates_agree() {
        let cat = SquareCatalog::build(CatKind::SetMono, 3).unwrap();
        let p = predicate_by_name("effective", CatKind::SetMono).unwrap();
        assert!(canonicity_compare(&p, &p, &cat).is_none());
    }
}
