//! Construction categories and full diagrams.
//!
//! A construction category tracks, for every object, the elements that could
//! conceivably be built (`U`) and those already built (`U0`). The engine
//! grows a chain by round-robin bookkeeping until a full pass constructs
//! nothing new, then re-checks the full-diagram condition verbatim.

mod club;
mod demos;

pub use club::{filtration_oracle, full_indices, ClubReport, Filtration};
pub use demos::{
    demo_universal_extension, prefix_inclusion, FiltrationDemo, GenericDemo, UeMorphism, UeObject, UniversalExtensionDemo,
    UniversalExtensionOutcome, ZornDemo,
};

use crate::error::ExhaustError;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::fmt::Debug;

/// Elements of `U` are encoded as `usize` throughout.
pub trait ConstructionCategory {
    type Obj: Clone + Debug;
    type Mor: Clone + Debug;

    fn name(&self) -> &'static str;
    /// A cocone of the empty diagram: the object the chain starts from.
    fn start(&self) -> Result<Self::Obj, ExhaustError>;
    fn universe(&self, a: &Self::Obj) -> Vec<usize>;
    fn constructed(&self, a: &Self::Obj) -> BTreeSet<usize>;
    fn identity(&self, a: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
    fn apply(&self, f: &Self::Mor, x: usize) -> usize;
    /// Extender oracle: a morphism `a → b` under which `x` becomes
    /// constructed, searching at most `search_bound` candidates.
    fn extend(&self, a: &Self::Obj, x: usize, search_bound: usize) -> Option<(Self::Mor, Self::Obj)>;
    fn rank(&self, _a: &Self::Obj) -> Option<usize> {
        None
    }
    /// A cofinal subset of `U a` under the construction preorder. The
    /// default is all of `U a`.
    fn cofinal(&self, a: &Self::Obj) -> Vec<usize> {
        self.universe(a)
    }
    fn describe(&self, a: &Self::Obj) -> Value;
}

pub fn constructed_by_stage<K: ConstructionCategory>(k: &K, a: &K::Obj, x: usize) -> Result<bool, ExhaustError> {
    if !k.universe(a).contains(&x) {
        return Err(ExhaustError::NotInU(x.to_string()));
    }
    Ok(k.constructed(a).contains(&x))
}

/// A morphism out of `a` under which `x` is constructed, if one is found.
pub fn constructible_from<K: ConstructionCategory>(
    k: &K,
    a: &K::Obj,
    x: usize,
    search_bound: usize,
) -> Option<K::Mor> {
    if k.constructed(a).contains(&x) {
        return Some(k.identity(a));
    }
    k.extend(a, x, search_bound).map(|(f, _)| f)
}

/// A schedule `F: {0..n-1} → pairs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bookkeeper {
    pub n: usize,
    pub schedule: Vec<(usize, usize)>,
}

impl Bookkeeper {
    /// The largest distance between consecutive occurrences of any pair,
    /// counting the distance from the start to the first occurrence.
    pub fn max_gap(&self) -> usize {
        let mut last: std::collections::HashMap<(usize, usize), usize> = Default::default();
        let mut gap = 0;
        for (i, p) in self.schedule.iter().enumerate() {
            let prev = last.insert(*p, i + 1).unwrap_or(0);
            gap = gap.max(i + 1 - prev);
        }
        gap
    }

    pub fn count(&self, pair: (usize, usize)) -> usize {
        self.schedule.iter().filter(|&&p| p == pair).count()
    }
}

/// Round-robin over `pairs`, so each pair recurs with gap `|pairs|`.
pub fn make_bookkeeper(n: usize, pairs: &[(usize, usize)]) -> Bookkeeper {
    let schedule = if pairs.is_empty() {
        Vec::new()
    } else {
        (0..n).map(|i| pairs[i % pairs.len()]).collect()
    };
    Bookkeeper { n, schedule }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    AlreadyConstructed,
    Extended,
    NotConstructible,
}

impl StepOutcome {
    fn label(self) -> &'static str {
        match self {
            StepOutcome::AlreadyConstructed => "already-constructed",
            StepOutcome::Extended => "extended",
            StepOutcome::NotConstructible => "not-constructible",
        }
    }
}

/// One bookkeeping step: the pair `(alpha, beta)` names `x_{alpha,beta}`,
/// whose image in the current stage is `image`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub alpha: usize,
    pub beta: usize,
    pub element: usize,
    pub image: usize,
    pub outcome: StepOutcome,
}

/// A chain `D_0 → ... → D_t` with its bookkeeping trace.
#[derive(Debug, Clone)]
pub struct FullDiagram<K: ConstructionCategory> {
    pub objects: Vec<K::Obj>,
    /// `maps[i] = d_{i,i+1}`.
    pub maps: Vec<K::Mor>,
    /// `enumerations[i]` lists `x_{i,·}`.
    pub enumerations: Vec<Vec<usize>>,
    pub trace: Vec<TraceStep>,
    /// Whether a further pass over the terminal stage would construct
    /// nothing new.
    pub complete: bool,
}

impl<K: ConstructionCategory> FullDiagram<K> {
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn terminal(&self) -> &K::Obj {
        self.objects.last().expect("diagrams start with an object")
    }

    /// `d_{ij}` for `i ≤ j`.
    pub fn link(&self, k: &K, i: usize, j: usize) -> K::Mor {
        self.maps[i..j]
            .iter()
            .fold(k.identity(&self.objects[i]), |acc, f| k.compose(f, &acc))
    }

    /// All links `d_{ij}`, indexed `[i][j - i]`.
    fn all_links(&self, k: &K) -> Vec<Vec<K::Mor>> {
        (0..self.len())
            .map(|i| {
                let mut row = vec![k.identity(&self.objects[i])];
                for j in i..self.maps.len() {
                    let next = k.compose(&self.maps[j], row.last().expect("row starts nonempty"));
                    row.push(next);
                }
                row
            })
            .collect()
    }

    /// The cocone with apex `D_s` and legs `d_{is}` for `i ≤ s`.
    pub fn prefix_cocone(&self, k: &K, s: usize) -> Cocone<K> {
        Cocone {
            apex: self.objects[s].clone(),
            legs: (0..=s).map(|i| self.link(k, i, s)).collect(),
        }
    }

    /// The colimit of a finite chain: its terminal stage.
    pub fn colimit_cocone(&self, k: &K) -> Cocone<K> {
        self.prefix_cocone(k, self.len() - 1)
    }

    pub fn to_json(&self, k: &K) -> Value {
        json!({
            "category": k.name(),
            "stages": self.len(),
            "complete": self.complete,
            "terminal": k.describe(self.terminal()),
            "extensions": self.trace.iter().filter(|t| t.outcome == StepOutcome::Extended).count(),
            "trace": self.trace.iter().map(|t| json!({
                "step": t.step,
                "pair": [t.alpha, t.beta],
                "element": t.element,
                "image": t.image,
                "outcome": t.outcome.label(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Whether a pass over `a` would construct anything: some enumerated
/// element is constructible from `a` but not yet constructed.
fn would_extend<K: ConstructionCategory>(k: &K, a: &K::Obj) -> bool {
    let built = k.constructed(a);
    k.cofinal(a)
        .into_iter()
        .any(|y| !built.contains(&y) && k.extend(a, y, usize::MAX).is_some())
}

/// Grows a chain of at most `n` steps. Step `i` handles the scheduled pair
/// `(alpha, beta)`: if `d_{alpha,i}(x_{alpha,beta})` is constructible from
/// `D_i`, then `D_{i+1}` constructs it; otherwise `d_{i,i+1}` is the
/// identity. The schedule runs in passes, each pass enumerating the stage
/// where it begins; the run stops once a further pass would extend nothing.
pub fn build_full_diagram<K: ConstructionCategory>(k: &K, n: usize) -> Result<FullDiagram<K>, ExhaustError> {
    let start = k.start()?;
    let mut d = FullDiagram {
        enumerations: vec![k.cofinal(&start)],
        objects: vec![start],
        maps: Vec::new(),
        trace: Vec::new(),
        complete: false,
    };
    let mut step = 0;
    while step < n && would_extend(k, d.terminal()) {
        let alpha = d.len() - 1;
        let pairs: Vec<(usize, usize)> = (0..d.enumerations[alpha].len()).map(|b| (alpha, b)).collect();
        let pass = make_bookkeeper(pairs.len(), &pairs);
        let mut to_alpha = k.identity(&d.objects[alpha]);
        for &(alpha, beta) in &pass.schedule {
            if step >= n {
                break;
            }
            let i = d.len() - 1;
            let x = d.enumerations[alpha][beta];
            let y = k.apply(&to_alpha, x);
            let cur = &d.objects[i];
            let (outcome, f, next) = if k.constructed(cur).contains(&y) {
                (StepOutcome::AlreadyConstructed, k.identity(cur), cur.clone())
            } else if let Some((f, b)) = k.extend(cur, y, usize::MAX) {
                if !k.constructed(&b).contains(&k.apply(&f, y)) {
                    return Err(ExhaustError::OracleFailure {
                        step,
                        reason: format!("extender did not construct element {y}"),
                    });
                }
                (StepOutcome::Extended, f, b)
            } else {
                (StepOutcome::NotConstructible, k.identity(cur), cur.clone())
            };
            if let (Some(r), Some(prev)) = (k.rank(&next), k.rank(cur)) {
                if r > prev + 1 {
                    return Err(ExhaustError::OracleFailure {
                        step,
                        reason: format!("extender raised the rank from {prev} to {r}"),
                    });
                }
            }
            d.trace.push(TraceStep {
                step,
                alpha,
                beta,
                element: x,
                image: y,
                outcome,
            });
            to_alpha = k.compose(&f, &to_alpha);
            d.enumerations.push(k.cofinal(&next));
            d.objects.push(next);
            d.maps.push(f);
            step += 1;
        }
    }
    d.complete = !would_extend(k, d.terminal());
    Ok(d)
}

/// Outcome of the post-hoc check of a built chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramCheck {
    /// `(i, x)` with every `d_{ij}(x)` constructible but none constructed.
    pub violations: Vec<(usize, usize)>,
    pub elements_checked: usize,
    /// `(i, j, k, x)` where `d_{jk} ∘ d_{ij}` and `d_{ik}` disagree.
    pub functoriality_failures: Vec<(usize, usize, usize, usize)>,
    /// Stages whose rank exceeds their index.
    pub rank_failures: Vec<usize>,
}

impl DiagramCheck {
    pub fn pass(&self) -> bool {
        self.violations.is_empty() && self.functoriality_failures.is_empty() && self.rank_failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "violations": self.violations,
            "elements_checked": self.elements_checked,
            "functoriality_failures": self.functoriality_failures,
            "rank_failures": self.rank_failures,
        })
    }
}

/// Re-checks the full-diagram condition on every stage and enumerated
/// element, along with functoriality of the chain and the rank bound.
pub fn verify_full_diagram<K: ConstructionCategory>(k: &K, d: &FullDiagram<K>) -> DiagramCheck {
    let links = d.all_links(k);
    let mut check = DiagramCheck {
        violations: Vec::new(),
        elements_checked: 0,
        functoriality_failures: Vec::new(),
        rank_failures: Vec::new(),
    };
    for i in 0..d.len() {
        for &x in &d.enumerations[i] {
            check.elements_checked += 1;
            let images: Vec<usize> = (i..d.len()).map(|j| k.apply(&links[i][j - i], x)).collect();
            let built = (i..d.len()).any(|j| k.constructed(&d.objects[j]).contains(&images[j - i]));
            if built {
                continue;
            }
            let always = (i..d.len()).all(|j| constructible_from(k, &d.objects[j], images[j - i], usize::MAX).is_some());
            if always {
                check.violations.push((i, x));
            }
        }
    }
    for i in 0..d.len() {
        for j in i..d.len() {
            for l in j..d.len() {
                let via = k.compose(&links[j][l - j], &links[i][j - i]);
                for x in k.universe(&d.objects[i]) {
                    if k.apply(&via, x) != k.apply(&links[i][l - i], x) {
                        check.functoriality_failures.push((i, j, l, x));
                    }
                }
            }
        }
    }
    for (i, obj) in d.objects.iter().enumerate() {
        if k.rank(obj).is_some_and(|r| r > i) {
            check.rank_failures.push(i);
        }
    }
    check
}

/// Whether `a` is full for `xs` under the constructibility `probe`, with
/// the first constructible-but-unconstructed element otherwise.
pub fn is_full_for<K: ConstructionCategory>(
    k: &K,
    a: &K::Obj,
    xs: &[usize],
    probe: impl Fn(&K::Obj, usize) -> bool,
) -> (bool, Option<usize>) {
    let built = k.constructed(a);
    match xs.iter().find(|&&x| !built.contains(&x) && probe(a, x)) {
        Some(&x) => (false, Some(x)),
        None => (true, None),
    }
}

/// Legs `D_i → apex` for `i < legs.len()`; a cocone over a prefix of the
/// chain when fewer legs than stages are given.
#[derive(Debug, Clone)]
pub struct Cocone<K: ConstructionCategory> {
    pub apex: K::Obj,
    pub legs: Vec<K::Mor>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColimitReport {
    pub commutes: bool,
    pub full: bool,
    pub stages_covered: usize,
    pub elements_checked: usize,
    pub witness: Value,
}

impl ColimitReport {
    pub fn pass(&self) -> bool {
        self.commutes && self.full
    }
}

/// Checks that the cocone commutes with the chain and that its apex is full
/// for the union of the leg images.
pub fn colimit_full_check<K: ConstructionCategory>(k: &K, d: &FullDiagram<K>, cocone: &Cocone<K>) -> ColimitReport {
    let stages = cocone.legs.len().min(d.len());
    for i in 0..stages {
        for j in i..stages {
            let dij = d.link(k, i, j);
            for x in k.universe(&d.objects[i]) {
                let (via, direct) = (k.apply(&cocone.legs[j], k.apply(&dij, x)), k.apply(&cocone.legs[i], x));
                if via != direct {
                    return ColimitReport {
                        commutes: false,
                        full: false,
                        stages_covered: stages,
                        elements_checked: 0,
                        witness: json!({ "stages": [i, j], "element": x, "images": [via, direct] }),
                    };
                }
            }
        }
    }
    let union: BTreeSet<usize> = (0..stages)
        .flat_map(|i| k.universe(&d.objects[i]).into_iter().map(move |x| (i, x)))
        .map(|(i, x)| k.apply(&cocone.legs[i], x))
        .collect();
    let xs: Vec<usize> = union.into_iter().collect();
    let (full, counter) = is_full_for(k, &cocone.apex, &xs, |a, x| constructible_from(k, a, x, usize::MAX).is_some());
    ColimitReport {
        commutes: true,
        full,
        stages_covered: stages,
        elements_checked: xs.len(),
        witness: match counter {
            Some(x) => json!({ "constructible_not_constructed": x, "apex": k.describe(&cocone.apex) }),
            None => json!({ "apex": k.describe(&cocone.apex) }),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::Poset;

    #[test]
    fn round_robin_schedule() {
        let b = make_bookkeeper(4, &[(0, 0), (0, 1)]);
        assert_eq!(b.schedule, vec![(0, 0), (0, 1), (0, 0), (0, 1)]);
        let pairs: Vec<(usize, usize)> = (0..10).map(|i| (i / 3, i % 3)).collect();
        let b = make_bookkeeper(100, &pairs);
        assert_eq!(b.max_gap(), 10);
        assert!(pairs.iter().all(|&p| b.count(p) >= 100 / pairs.len()));
    }

    #[test]
    fn zorn_on_a_chain_ends_at_the_top() {
        let p = Poset::from_pairs(3, &[(0, 1), (1, 2)]);
        let k = ZornDemo::new(&p);
        let d = build_full_diagram(&k, 4).unwrap();
        assert_eq!(*d.terminal(), 2);
        assert!(d.complete);
        assert!(verify_full_diagram(&k, &d).pass());
    }

    #[test]
    fn zorn_stage_membership() {
        let p = Poset::from_pairs(3, &[(0, 1), (0, 2)]);
        let k = ZornDemo::new(&p);
        assert!(constructed_by_stage(&k, &1, 0).unwrap());
        assert!(!constructed_by_stage(&k, &1, 2).unwrap());
        assert!(matches!(constructed_by_stage(&k, &1, 7), Err(ExhaustError::NotInU(_))));
        assert!(constructible_from(&k, &0, 2, usize::MAX).is_some());
        assert!(constructible_from(&k, &1, 2, usize::MAX).is_none());
        assert!(constructible_from(&k, &1, 1, usize::MAX).is_some());
    }

    #[test]
    fn generic_functions_become_total() {
        let k = GenericDemo::new(3);
        let d = build_full_diagram(&k, 12).unwrap();
        assert!(d.terminal().iter().all(Option::is_some));
        assert!(verify_full_diagram(&k, &d).pass());
        let mut s = vec![None; 3];
        s[1] = Some(true);
        assert!(constructed_by_stage(&k, &s, 1).unwrap());
        assert!(!constructed_by_stage(&k, &s, 0).unwrap());
    }

    #[test]
    fn full_for_checks() {
        let k = GenericDemo::new(3);
        let s = vec![Some(false), None, None];
        let probe = |a: &Vec<Option<bool>>, x| constructible_from(&k, a, x, usize::MAX).is_some();
        assert_eq!(is_full_for(&k, &s, &[], probe), (true, None));
        assert_eq!(is_full_for(&k, &s, &[0, 2], probe), (false, Some(2)));
        let total = vec![Some(false); 3];
        assert!(is_full_for(&k, &total, &[0, 1, 2], probe).0);
    }

    #[test]
    fn colimit_and_prefix_cocones() {
        let k = GenericDemo::new(4);
        let d = build_full_diagram(&k, 24).unwrap();
        assert!(colimit_full_check(&k, &d, &d.colimit_cocone(&k)).pass());
        let r = colimit_full_check(&k, &d, &d.prefix_cocone(&k, 2));
        assert!(r.commutes && !r.full);
        assert!(r.witness.get("constructible_not_constructed").is_some());
        let single = FullDiagram::<GenericDemo> {
            objects: vec![vec![Some(true); 2]],
            maps: vec![],
            enumerations: vec![vec![0, 1]],
            trace: vec![],
            complete: true,
        };
        let k2 = GenericDemo::new(2);
        assert!(colimit_full_check(&k2, &single, &single.colimit_cocone(&k2)).pass());
    }
}
