use super::{build_full_diagram, verify_full_diagram, ConstructionCategory, DiagramCheck};
use crate::amalgams::{enumerate_types, ExtensionChain};
use crate::cat::{compose, FinMorphism, Obj, Poset};
use crate::concrete::CatKind;
use crate::error::{CatError, ExhaustError};
use serde_json::{json, Value};
use std::collections::BTreeSet;

/// A poset as a construction category: `U p` is the whole poset and
/// `U0 p` the down-set of `p`. A full object is a maximal element.
#[derive(Debug, Clone)]
pub struct ZornDemo<'a> {
    pub poset: &'a Poset,
    pub start: usize,
}

impl<'a> ZornDemo<'a> {
    pub fn new(poset: &'a Poset) -> Self {
        ZornDemo { poset, start: 0 }
    }
}

impl ConstructionCategory for ZornDemo<'_> {
    type Obj = usize;
    /// `(p, q)` with `p ≤ q`.
    type Mor = (usize, usize);

    fn name(&self) -> &'static str {
        "zorn"
    }

    fn start(&self) -> Result<usize, ExhaustError> {
        if self.start < self.poset.len() {
            Ok(self.start)
        } else {
            Err(ExhaustError::OracleFailure {
                step: 0,
                reason: "the poset has no element to start from".into(),
            })
        }
    }

    fn universe(&self, _: &usize) -> Vec<usize> {
        (0..self.poset.len()).collect()
    }

    fn constructed(&self, p: &usize) -> BTreeSet<usize> {
        (0..self.poset.len()).filter(|&q| self.poset.leq(q, *p)).collect()
    }

    fn identity(&self, p: &usize) -> (usize, usize) {
        (*p, *p)
    }

    fn compose(&self, g: &(usize, usize), f: &(usize, usize)) -> (usize, usize) {
        (f.0, g.1)
    }

    fn apply(&self, _: &(usize, usize), x: usize) -> usize {
        x
    }

    fn extend(&self, p: &usize, x: usize, search_bound: usize) -> Option<((usize, usize), usize)> {
        (0..self.poset.len())
            .take(search_bound)
            .find(|&r| self.poset.leq(*p, r) && self.poset.leq(x, r))
            .map(|r| ((*p, r), r))
    }

    fn describe(&self, p: &usize) -> Value {
        json!(self.poset.elements[*p])
    }
}

/// Finite partial functions `{0..m-1} → {0,1}` ordered by extension, with
/// `U s = {0..m-1}` and `U0 s = dom(s)`.
#[derive(Debug, Clone, Copy)]
pub struct GenericDemo {
    pub m: usize,
}

impl GenericDemo {
    pub fn new(m: usize) -> Self {
        GenericDemo { m }
    }
}

impl ConstructionCategory for GenericDemo {
    type Obj = Vec<Option<bool>>;
    /// Extension maps act as the identity on `U`.
    type Mor = ();

    fn name(&self) -> &'static str {
        "generic"
    }

    fn start(&self) -> Result<Self::Obj, ExhaustError> {
        Ok(vec![None; self.m])
    }

    fn universe(&self, _: &Self::Obj) -> Vec<usize> {
        (0..self.m).collect()
    }

    fn constructed(&self, s: &Self::Obj) -> BTreeSet<usize> {
        (0..self.m).filter(|&x| s[x].is_some()).collect()
    }

    fn identity(&self, _: &Self::Obj) {}

    fn compose(&self, _: &(), _: &()) {}

    fn apply(&self, _: &(), x: usize) -> usize {
        x
    }

    fn extend(&self, s: &Self::Obj, x: usize, _: usize) -> Option<((), Self::Obj)> {
        if x >= self.m {
            return None;
        }
        let mut t = s.clone();
        t[x].get_or_insert(x.count_ones() % 2 == 1);
        Some(((), t))
    }

    fn describe(&self, s: &Self::Obj) -> Value {
        json!(s.iter().map(|v| v.map(u8::from)).collect::<Vec<_>>())
    }
}

/// The chain of stages `0..len` of a filtration pair, with
/// `U i = A_i ∪ B_i` and `U0 i = A_i ∩ B_i`.
#[derive(Debug, Clone)]
pub struct FiltrationDemo<'a> {
    pub filtration: &'a super::Filtration,
}

impl ConstructionCategory for FiltrationDemo<'_> {
    type Obj = usize;
    type Mor = (usize, usize);

    fn name(&self) -> &'static str {
        "filtration"
    }

    fn start(&self) -> Result<usize, ExhaustError> {
        if self.filtration.is_empty() {
            return Err(ExhaustError::OracleFailure {
                step: 0,
                reason: "empty filtration".into(),
            });
        }
        Ok(0)
    }

    fn universe(&self, i: &usize) -> Vec<usize> {
        self.filtration.universe(*i).into_iter().collect()
    }

    fn constructed(&self, i: &usize) -> BTreeSet<usize> {
        self.filtration.constructed(*i)
    }

    fn identity(&self, i: &usize) -> (usize, usize) {
        (*i, *i)
    }

    fn compose(&self, g: &(usize, usize), f: &(usize, usize)) -> (usize, usize) {
        (f.0, g.1)
    }

    fn apply(&self, _: &(usize, usize), x: usize) -> usize {
        x
    }

    fn extend(&self, i: &usize, x: usize, _: usize) -> Option<((usize, usize), usize)> {
        (*i..self.filtration.len())
            .find(|&j| self.filtration.constructed(j).contains(&x))
            .map(|j| ((*i, j), j))
    }

    fn describe(&self, i: &usize) -> Value {
        json!(i)
    }
}

/// An object `f: M_i → M` fixing `M_0`, together with the image of the
/// target `N_0` in `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UeObject {
    pub stage: usize,
    pub size: usize,
    pub map: Vec<usize>,
    pub target: Vec<usize>,
}

/// A map `h: M → M'` between the apexes of two objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UeMorphism(pub Vec<usize>);

/// Objects are maps `M_i → M` over `M_0` above a fixed `M_0 → N_0`; `U` is
/// the carrier of `M` and `U0` the image of `M_i`.
#[derive(Debug, Clone)]
pub struct UniversalExtensionDemo<'a> {
    pub chain: &'a ExtensionChain,
    pub target: &'a FinMorphism,
}

impl ConstructionCategory for UniversalExtensionDemo<'_> {
    type Obj = UeObject;
    type Mor = UeMorphism;

    fn name(&self) -> &'static str {
        "universal-extension"
    }

    fn start(&self) -> Result<UeObject, ExhaustError> {
        let n0 = self.target.cod.size();
        Ok(UeObject {
            stage: 0,
            size: n0,
            map: self.target.carrier_map(),
            target: (0..n0).collect(),
        })
    }

    fn universe(&self, a: &UeObject) -> Vec<usize> {
        (0..a.size).collect()
    }

    fn constructed(&self, a: &UeObject) -> BTreeSet<usize> {
        a.map.iter().copied().collect()
    }

    fn identity(&self, a: &UeObject) -> UeMorphism {
        UeMorphism((0..a.size).collect())
    }

    fn compose(&self, g: &UeMorphism, f: &UeMorphism) -> UeMorphism {
        UeMorphism(f.0.iter().map(|&x| g.0[x]).collect())
    }

    fn apply(&self, f: &UeMorphism, x: usize) -> usize {
        f.0[x]
    }

    fn extend(&self, a: &UeObject, x: usize, _: usize) -> Option<(UeMorphism, UeObject)> {
        if a.stage + 1 >= self.chain.objects.len() || x >= a.size {
            return None;
        }
        let link = &self.chain.maps[a.stage];
        let next = link.cod.size();
        let old: Vec<Option<usize>> = {
            let mut v = vec![None; next];
            for (m, &y) in link.carrier_map().iter().enumerate() {
                v[y] = Some(m);
            }
            v
        };
        let mut fresh = (0..next).filter(|&y| old[y].is_none());
        let first = fresh.next()?;
        let mut size = a.size;
        let mut map = vec![0; next];
        for y in 0..next {
            map[y] = match old[y] {
                Some(m) => a.map[m],
                None if y == first => x,
                None => {
                    size += 1;
                    size - 1
                }
            };
        }
        let obj = UeObject {
            stage: a.stage + 1,
            size,
            map,
            target: a.target.clone(),
        };
        Some((UeMorphism((0..a.size).collect()), obj))
    }

    fn rank(&self, a: &UeObject) -> Option<usize> {
        Some(a.stage)
    }

    fn describe(&self, a: &UeObject) -> Value {
        json!({ "stage": a.stage, "size": a.size, "map": a.map, "target": a.target })
    }
}

#[derive(Debug, Clone)]
pub struct UniversalExtensionOutcome {
    /// `N_0 → M_n`, agreeing with the chain on `M_0`.
    pub embedding: FinMorphism,
    pub stages: usize,
    pub check: DiagramCheck,
    pub diagram: Value,
}

/// Embeds the target `f0: M_0 → N_0` into the last object of `chain` over
/// `M_0`, by building a full diagram in the category of maps out of chain
/// stages and reading the embedding off its surjective terminal map.
pub fn demo_universal_extension(
    chain: &ExtensionChain,
    target: &FinMorphism,
) -> Result<UniversalExtensionOutcome, ExhaustError> {
    if chain.kind != CatKind::SetMono {
        return Err(CatError::Unsupported(format!("{} chains", chain.kind)).into());
    }
    if target.dom != chain.objects[0] || !target.is_injective() {
        return Err(CatError::Invalid("target must be an injection out of the first chain object".into()).into());
    }
    for (i, link) in chain.maps.iter().enumerate() {
        let base = &chain.objects[i];
        let types = enumerate_types(base, chain.kind, CatKind::SetMono.one_point_bound(base))?;
        let missing = types.realized(link).iter().filter(|r| !**r).count();
        if missing > 0 {
            return Err(ExhaustError::InsufficientChain { index: i + 1, missing });
        }
    }
    let k = UniversalExtensionDemo { chain, target };
    let width = target.cod.size() + chain.terminal().size() + 1;
    let d = build_full_diagram(&k, width * (chain.objects.len() + 1))?;
    let check = verify_full_diagram(&k, &d);
    let last = d.terminal();
    if !d.complete || last.map.len() != last.size {
        return Err(ExhaustError::OracleFailure {
            step: d.trace.len(),
            reason: format!("terminal map from stage {} is not surjective", last.stage),
        });
    }
    let mut inverse = vec![0; last.size];
    for (m, &y) in last.map.iter().enumerate() {
        inverse[y] = m;
    }
    let h = d.link(&k, 0, d.len() - 1);
    let into_stage: Vec<usize> = last.target.iter().map(|&y| inverse[h.0[y]]).collect();
    let up = chain.link(last.stage, chain.objects.len() - 1);
    let map: Vec<usize> = into_stage.iter().map(|&m| up.apply(m)).collect();
    let embedding = FinMorphism::from_map(target.cod.clone(), chain.terminal().clone(), map, CatKind::SetMono);
    let over = compose(&embedding, target)?;
    if over != chain.link(0, chain.objects.len() - 1) || !embedding.is_injective() {
        return Err(ExhaustError::OracleFailure {
            step: d.trace.len(),
            reason: "embedding does not fix the base".into(),
        });
    }
    Ok(UniversalExtensionOutcome {
        embedding,
        stages: d.len(),
        check,
        diagram: d.to_json(&k),
    })
}

/// The prefix inclusion `{0..m-1} → {0..n-1}`.
pub fn prefix_inclusion(m: usize, n: usize) -> FinMorphism {
    FinMorphism::from_map(Obj::Set(m), Obj::Set(n), (0..m).collect(), CatKind::SetMono)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amalgams::universal_extension_build;

    #[test]
    fn embeds_three_points_over_one() {
        let chain = universal_extension_build(&Obj::Set(1), CatKind::SetMono, 2).unwrap();
        assert_eq!(chain.sizes(), vec![1, 2, 3]);
        let out = demo_universal_extension(&chain, &prefix_inclusion(1, 3)).unwrap();
        assert!(out.embedding.is_injective());
        assert_eq!(out.embedding.apply(0), 0);
        assert!(out.check.pass());
    }

    #[test]
    fn identity_target() {
        let chain = universal_extension_build(&Obj::Set(2), CatKind::SetMono, 1).unwrap();
        let out = demo_universal_extension(&chain, &prefix_inclusion(2, 2)).unwrap();
        assert_eq!(out.embedding.carrier_map(), vec![0, 1]);
    }

    #[test]
    fn stalled_chain_is_rejected() {
        let id = CatKind::SetMono.identity(&Obj::Set(1));
        let chain = ExtensionChain {
            kind: CatKind::SetMono,
            objects: vec![Obj::Set(1), Obj::Set(1)],
            maps: vec![id],
        };
        let r = demo_universal_extension(&chain, &prefix_inclusion(1, 2));
        assert_eq!(r.unwrap_err(), ExhaustError::InsufficientChain { index: 1, missing: 1 });
    }
}
