use super::{amalgamate, enumerate_spans_over, enumerate_types, HomIndex};
use crate::cat::{compose, FinMorphism, Obj, Span};
use crate::concrete::{glue, pushout, CatKind};
use crate::error::CatError;
use itertools::Itertools;
use serde_json::{json, Value};
use std::collections::HashSet;

#[derive(Debug, Clone, PartialEq)]
pub struct BaseReport {
    pub holds: bool,
    pub spans_checked: usize,
    pub failing_span: Option<Span>,
}

/// Whether every span over `a` with ears of size at most `bound` has an
/// amalgam. The pushout is tried first; otherwise amalgams with apex up to
/// `2 * bound` are searched.
pub fn is_amalgamation_base(a: &Obj, kind: CatKind, bound: usize) -> Result<BaseReport, CatError> {
    let spans = enumerate_spans_over(kind, a, bound)?;
    for span in &spans {
        let po = pushout(span, kind)?;
        if po.legs_in(kind) {
            continue;
        }
        if amalgamate(span, kind, 2 * bound)?.is_empty() {
            return Ok(BaseReport {
                holds: false,
                spans_checked: spans.len(),
                failing_span: Some(span.clone()),
            });
        }
    }
    Ok(BaseReport {
        holds: true,
        spans_checked: spans.len(),
        failing_span: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniversalReport {
    pub universal: bool,
    pub extensions_checked: usize,
    /// An extension of the base that does not embed over it.
    pub witness: Option<FinMorphism>,
}

/// Whether every extension `e: m → M'` with `|M'| ≤ ext_bound` factors
/// through `iota: m → n` over `m`. Extensions are taken up to isomorphism
/// over `m`.
pub fn is_universal_over(
    n: &Obj,
    m: &Obj,
    iota: &FinMorphism,
    kind: CatKind,
    ext_bound: usize,
) -> Result<UniversalReport, CatError> {
    if iota.dom != *m || iota.cod != *n {
        return Err(CatError::Invalid("embedding endpoints differ from the given objects".into()));
    }
    let hom_bound = ext_bound.max(n.size()).max(m.size());
    let mut checked = 0;
    for target in kind.objects(ext_bound) {
        let exts = HomIndex::new(kind.hom(m, &target, hom_bound)?);
        if exts.list.is_empty() {
            continue;
        }
        let canon = exts.orbit_minima(&exts.post_action(&kind.automorphisms(&target)));
        let into_n = kind.hom(&target, n, hom_bound)?;
        for (i, e) in exts.list.iter().enumerate() {
            if canon[i] != i {
                continue;
            }
            checked += 1;
            let embeds = into_n
                .iter()
                .any(|h| compose(h, e).ok().as_ref() == Some(iota));
            if !embeds {
                return Ok(UniversalReport {
                    universal: false,
                    extensions_checked: checked,
                    witness: Some(e.clone()),
                });
            }
        }
    }
    Ok(UniversalReport {
        universal: true,
        extensions_checked: checked,
        witness: None,
    })
}

/// A chain `M_0 → M_1 → ... → M_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionChain {
    pub kind: CatKind,
    pub objects: Vec<Obj>,
    /// `maps[i]: M_i → M_{i+1}`.
    pub maps: Vec<FinMorphism>,
}

impl ExtensionChain {
    pub fn terminal(&self) -> &Obj {
        self.objects.last().expect("chains are nonempty")
    }

    /// The composite `M_i → M_j` for `i ≤ j`.
    pub fn link(&self, i: usize, j: usize) -> FinMorphism {
        self.maps[i..j]
            .iter()
            .fold(self.kind.identity(&self.objects[i]), |acc, f| {
                compose(f, &acc).expect("chain maps compose")
            })
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.objects.iter().map(Obj::size).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "objects": self.objects.iter().map(Obj::to_json).collect::<Vec<_>>(),
            "maps": self.maps.iter().map(|f| f.key()).collect::<Vec<_>>(),
        })
    }
}

/// Builds `M = M_0 → ... → M_steps` where each successor realizes every
/// one-point type over its predecessor, by gluing in a representative of
/// each type not yet realized.
pub fn universal_extension_build(m: &Obj, kind: CatKind, steps: usize) -> Result<ExtensionChain, CatError> {
    let mut chain = ExtensionChain {
        kind,
        objects: vec![m.clone()],
        maps: Vec::new(),
    };
    for _ in 0..steps {
        let cur = chain.terminal().clone();
        let types = enumerate_types(&cur, kind, kind.one_point_bound(&cur))?;
        let mut iota = kind.identity(&cur);
        for class in &types.classes {
            if types.realized(&iota)[class.id] {
                continue;
            }
            let f = &class.representative.map;
            let pairs: Vec<(usize, usize)> = cur
                .generators()
                .into_iter()
                .map(|x| (iota.apply(x), f.apply(x)))
                .collect();
            let g = glue(kind, &iota.cod, &f.cod, &pairs)?;
            if !kind.contains(&g.left) || !kind.contains(&g.right) {
                return Err(CatError::Unsupported(format!("{kind} lacks the amalgam needed to realize a type")));
            }
            iota = compose(&g.left, &iota)?;
        }
        chain.objects.push(iota.cod.clone());
        chain.maps.push(iota);
    }
    Ok(chain)
}

/// Inclusions of the subobjects of `n` with carrier size at most `max_size`,
/// one per image.
pub fn subobjects(n: &Obj, kind: CatKind, max_size: usize) -> Vec<FinMorphism> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let candidates: Vec<Vec<usize>> = match n {
        Obj::Vect(v) => (0..=v.dim)
            .take_while(|&k| (v.p as usize).pow(k as u32) <= max_size)
            .flat_map(|k| (1..n.size()).combinations(k))
            .collect(),
        _ => (0..=max_size.min(n.size()))
            .flat_map(|k| (0..n.size()).combinations(k))
            .collect(),
    };
    for elems in candidates {
        let incl = kind.subobject(n, &elems);
        if incl.dom.size() > max_size {
            continue;
        }
        let image: Vec<usize> = incl.carrier_map().into_iter().sorted().collect();
        if seen.insert(image) {
            out.push(incl);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaturationStatus {
    /// Hypothesis and conclusion both hold.
    Pass,
    /// Some subobject has an unrealized type, so the check is vacuous.
    HypothesisNotMet,
    /// Hypothesis holds but some subobject lacks universality.
    Violation,
}

impl SaturationStatus {
    pub fn label(self) -> &'static str {
        match self {
            SaturationStatus::Pass => "pass",
            SaturationStatus::HypothesisNotMet => "hypothesis-not-met",
            SaturationStatus::Violation => "violation",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubobjectOutcome {
    pub inclusion: FinMorphism,
    pub types: usize,
    pub unrealized: usize,
    pub universal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaturationReport {
    pub status: SaturationStatus,
    pub ext_bound: usize,
    pub outcomes: Vec<SubobjectOutcome>,
}

impl SaturationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status.label(),
            "ext_bound": self.ext_bound,
            "subobjects": self.outcomes.iter().map(|o| json!({
                "image": o.inclusion.carrier_map(),
                "types": o.types,
                "unrealized": o.unrealized,
                "universal": o.universal,
            })).collect::<Vec<_>>(),
        })
    }
}

/// If `n` realizes every one-point type over each subobject of size at most
/// `sub_bound`, then `n` is universal over each of them for extensions one
/// element (one dimension) larger than `sub_bound`.
pub fn saturated_implies_universal_check(n: &Obj, kind: CatKind, sub_bound: usize) -> Result<SaturationReport, CatError> {
    let ext_bound = match n {
        Obj::Vect(v) => sub_bound * v.p as usize,
        _ => sub_bound + 1,
    };
    let mut outcomes = Vec::new();
    for incl in subobjects(n, kind, sub_bound) {
        let m = incl.dom.clone();
        let types = enumerate_types(&m, kind, kind.one_point_bound(&m))?;
        let unrealized = types.realized(&incl).iter().filter(|r| !**r).count();
        let universal = is_universal_over(n, &m, &incl, kind, ext_bound)?.universal;
        outcomes.push(SubobjectOutcome {
            inclusion: incl,
            types: types.classes.len(),
            unrealized,
            universal,
        });
    }
    let status = if outcomes.iter().any(|o| o.unrealized > 0) {
        SaturationStatus::HypothesisNotMet
    } else if outcomes.iter().all(|o| o.universal) {
        SaturationStatus::Pass
    } else {
        SaturationStatus::Violation
    };
    Ok(SaturationReport {
        status,
        ext_bound,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concrete::{FinGraph, VecObj};

    fn incl(m: usize, n: usize) -> FinMorphism {
        FinMorphism::from_map(Obj::Set(m), Obj::Set(n), (0..m).collect(), CatKind::SetMono)
    }

    #[test]
    fn universality_over_a_point() {
        let k = CatKind::SetMono;
        assert!(is_universal_over(&Obj::Set(3), &Obj::Set(1), &incl(1, 3), k, 3).unwrap().universal);
        let r = is_universal_over(&Obj::Set(2), &Obj::Set(1), &incl(1, 2), k, 3).unwrap();
        assert!(!r.universal);
        assert_eq!(r.witness.unwrap().cod, Obj::Set(3));
        assert!(is_universal_over(&Obj::Set(1), &Obj::Set(1), &incl(1, 1), k, 1).unwrap().universal);
    }

    #[test]
    fn amalgamation_bases() {
        assert!(is_amalgamation_base(&Obj::Set(1), CatKind::SetMono, 3).unwrap().holds);
        let k1 = Obj::Graph(FinGraph::empty(1));
        assert!(is_amalgamation_base(&k1, CatKind::GraphFull, 3).unwrap().holds);
        let line = Obj::Vect(VecObj::new(1, 2));
        assert!(is_amalgamation_base(&line, CatKind::VectMono(2), 4).unwrap().holds);
    }

    #[test]
    fn chain_over_a_point() {
        let chain = universal_extension_build(&Obj::Set(1), CatKind::SetMono, 2).unwrap();
        assert_eq!(chain.sizes(), vec![1, 2, 3]);
        let iota = chain.link(0, 2);
        assert!(is_universal_over(chain.terminal(), &Obj::Set(1), &iota, CatKind::SetMono, 3).unwrap().universal);
        let trivial = universal_extension_build(&Obj::Set(1), CatKind::SetMono, 0).unwrap();
        assert_eq!(trivial.objects, vec![Obj::Set(1)]);
    }

    #[test]
    fn vertex_extension_realizes_three_types() {
        let k1 = Obj::Graph(FinGraph::empty(1));
        let kind = CatKind::GraphFull;
        let chain = universal_extension_build(&k1, kind, 1).unwrap();
        assert_eq!(chain.terminal().size(), 3);
        let types = enumerate_types(&k1, kind, 2).unwrap();
        assert!(types.realized(&chain.link(0, 1)).iter().all(|&r| r));
    }

    #[test]
    fn saturation_on_sets_and_paths() {
        let r = saturated_implies_universal_check(&Obj::Set(6), CatKind::SetMono, 2).unwrap();
        assert_eq!(r.status, SaturationStatus::Pass);
        let r = saturated_implies_universal_check(&Obj::Set(2), CatKind::SetMono, 2).unwrap();
        assert_eq!(r.status, SaturationStatus::HypothesisNotMet);
        let p3 = Obj::Graph(FinGraph::path(3));
        let r = saturated_implies_universal_check(&p3, CatKind::GraphFull, 1).unwrap();
        assert_eq!(r.status, SaturationStatus::HypothesisNotMet);
        assert_eq!(r.outcomes.len(), 4);
        let middle = r.outcomes.iter().find(|o| o.inclusion.carrier_map() == vec![1]).unwrap();
        assert_eq!(middle.unrealized, 1);
    }
}
