use super::types::{qf_type, Dense};
use super::FinStructure;
use itertools::Itertools;
use serde_json::{json, Value};
use std::collections::{HashMap, HashSet};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn full(len: usize) -> Self {
        let mut b = Bits(vec![u64::MAX; len.div_ceil(64)]);
        if !len.is_multiple_of(64) {
            *b.0.last_mut().expect("nonempty") = (1u64 << (len % 64)) - 1;
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
}

#[derive(Clone, Copy)]
enum T {
    Var(usize),
    Const(usize),
}

fn at(t: T, tuple: &[usize]) -> usize {
    match t {
        T::Var(i) => tuple[i],
        T::Const(c) => c,
    }
}

/// Whether `a` is `s`-independent from `b` over `m`: every conjunction of at
/// most `s` literals with parameters from `m ∪ b` that `a` satisfies is
/// satisfied by some tuple from `m`.
pub fn is_independent(a: &[usize], m: &[usize], b: &[usize], n: &FinStructure, s: usize) -> bool {
    independent(&Dense::new(n), a, m, b, s)
}

pub(crate) fn independent(d: &Dense, a: &[usize], m: &[usize], b: &[usize], s: usize) -> bool {
    let k = a.len();
    if k == 0 || s == 0 || a.iter().all(|x| m.contains(x)) {
        return true;
    }
    if m.is_empty() {
        return false;
    }
    let candidates: Vec<Vec<usize>> = (0..k).map(|_| m.iter().copied()).multi_cartesian_product().collect();
    let params: Vec<usize> = m.iter().chain(b).copied().unique().collect();
    let terms: Vec<T> = (0..k).map(T::Var).chain(params.iter().map(|&p| T::Const(p))).collect();
    let full = Bits::full(candidates.len());
    let mut sets: Vec<Bits> = Vec::new();
    let mut add = |truth: &dyn Fn(&[usize]) -> bool| -> bool {
        let want = truth(a);
        let mut bits = Bits::empty(candidates.len());
        for (ci, c) in candidates.iter().enumerate() {
            if truth(c) == want {
                bits.set(ci);
            }
        }
        if bits.is_zero() {
            return false;
        }
        if bits != full && !sets.contains(&bits) {
            sets.push(bits);
        }
        true
    };
    for i in 0..k {
        for &t in &terms[i + 1..] {
            if !add(&|tu: &[usize]| tu[i] == at(t, tu)) {
                return false;
            }
        }
    }
    for (rel, (_, arity, _)) in d.rels.iter().enumerate() {
        for combo in (0..*arity).map(|_| 0..terms.len()).multi_cartesian_product() {
            if combo.iter().all(|&c| c >= k) {
                continue;
            }
            let ts: Vec<T> = combo.iter().map(|&c| terms[c]).collect();
            let ok = add(&|tu: &[usize]| {
                let vals: Vec<usize> = ts.iter().map(|&t| at(t, tu)).collect();
                d.holds(rel, &vals)
            });
            if !ok {
                return false;
            }
        }
    }
    fn refutable(sets: &[Bits], start: usize, cur: &Bits, depth: usize) -> bool {
        if depth == 0 {
            return false;
        }
        for (i, s) in sets.iter().enumerate().skip(start) {
            let next = cur.and(s);
            if next.is_zero() {
                return true;
            }
            if next != *cur && refutable(sets, i + 1, &next, depth - 1) {
                return true;
            }
        }
        false
    }
    !refutable(&sets, 0, &full, s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForkingConfig {
    /// Literal bound.
    pub s: usize,
    /// Largest size of the sets and tuples on either side.
    pub max_set: usize,
    /// Smallest base considered.
    pub min_base: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub cases: usize,
    pub violations: usize,
    pub witness: Option<Value>,
}

impl PropertyResult {
    fn new(name: &'static str) -> Self {
        PropertyResult {
            name,
            cases: 0,
            violations: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForkingReport {
    pub config: ForkingConfig,
    /// Number of bases examined.
    pub bases: usize,
    pub properties: Vec<PropertyResult>,
    /// Whether every base has at least `2s` elements.
    pub rich: bool,
    pub exhaustive: bool,
}

impl ForkingReport {
    pub fn all_pass(&self) -> bool {
        self.properties.iter().all(PropertyResult::pass)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "s": self.config.s,
            "max_set": self.config.max_set,
            "min_base": self.config.min_base,
            "bases": self.bases,
            "rich": self.rich,
            "exhaustive": self.exhaustive,
            "properties": self.properties.iter().map(|p| json!({
                "name": p.name,
                "pass": p.pass(),
                "cases": p.cases,
                "violations": p.violations,
                "witness": p.witness,
            })).collect::<Vec<_>>(),
        })
    }
}

fn elems(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

fn mask_of(xs: impl IntoIterator<Item = usize>) -> u32 {
    xs.into_iter().fold(0, |acc, x| acc | 1 << x)
}

/// Generators of the automorphism group of `n`.
pub(crate) fn automorphism_generators(n: &FinStructure) -> Vec<Vec<usize>> {
    let d = Dense::new(n);
    let autos: Vec<Vec<usize>> = (0..n.n)
        .permutations(n.n)
        .filter(|p| {
            d.rels.iter().enumerate().all(|(ri, (_, arity, _))| {
                (0..*arity)
                    .map(|_| 0..n.n)
                    .multi_cartesian_product()
                    .all(|t| d.holds(ri, &t) == d.holds(ri, &t.iter().map(|&x| p[x]).collect::<Vec<_>>()))
            })
        })
        .collect();
    let mut gens: Vec<Vec<usize>> = Vec::new();
    let mut group: HashSet<Vec<usize>> = [(0..n.n).collect()].into_iter().collect();
    for g in autos {
        if group.contains(&g) {
            continue;
        }
        gens.push(g);
        let mut frontier: Vec<Vec<usize>> = group.iter().cloned().collect();
        while let Some(h) = frontier.pop() {
            for g in &gens {
                let gh: Vec<usize> = h.iter().map(|&x| g[x]).collect();
                if group.insert(gh.clone()) {
                    frontier.push(gh);
                }
            }
        }
    }
    gens
}

/// Exhaustively checks invariance, monotonicity, normality, symmetry,
/// transitivity, uniqueness, and the split consequence of uniqueness for
/// `s`-independence in `n`. Bases are the sets `M` with at least `min_base`
/// elements over which every tuple of length at most `max_set` is
/// independent from the empty set, the bounded analog of an elementary
/// substructure. Normality is checked one base element at a time.
pub fn check_forking_properties(n: &FinStructure, cfg: ForkingConfig) -> ForkingReport {
    let d = Dense::new(n);
    let size = n.n;
    let all: Vec<u32> = (0..1u32 << size).collect();
    let tuples: Vec<Vec<usize>> = (1..=cfg.max_set)
        .flat_map(|k| (0..k).map(|_| 0..size).multi_cartesian_product())
        .collect();
    let bases: Vec<u32> = all
        .iter()
        .copied()
        .filter(|&m| m.count_ones() as usize >= cfg.min_base)
        .filter(|&m| {
            let mv = elems(m);
            tuples.iter().all(|t| independent(&d, t, &mv, &[], cfg.s))
        })
        .collect();
    let small: Vec<u32> = all.iter().copied().filter(|m| m.count_ones() as usize <= cfg.max_set).collect();
    let mut memo: HashMap<(u32, u32, u32), bool> = HashMap::new();
    let mut ind = |a: u32, m: u32, b: u32| -> bool {
        *memo
            .entry((a, m, b))
            .or_insert_with(|| independent(&d, &elems(a), &elems(m), &elems(b), cfg.s))
    };
    let sets = |a: u32, m: u32, b: u32| json!({ "A": elems(a), "M": elems(m), "B": elems(b) });

    let gens = automorphism_generators(n);
    let mut invariance = PropertyResult::new("invariance");
    let mut monotonicity = PropertyResult::new("monotonicity");
    let mut normality = PropertyResult::new("normality");
    let mut symmetry = PropertyResult::new("symmetry");
    for &m in &bases {
        for &a in &small {
            for &b in &small {
                let holds = ind(a, m, b);
                let back = ind(b, m, a);
                symmetry.record(holds == back, || sets(a, m, b));
                if !holds {
                    continue;
                }
                for g in &gens {
                    let img = |x: u32| mask_of(elems(x).into_iter().map(|e| g[e]));
                    let ok = ind(img(a), img(m), img(b));
                    invariance.record(ok, || json!({ "sets": sets(a, m, b), "automorphism": g }));
                }
                for x in elems(a) {
                    let ok = ind(a & !(1 << x), m, b);
                    monotonicity.record(ok, || json!({ "sets": sets(a, m, b), "dropped_left": x }));
                }
                for y in elems(b) {
                    let ok = ind(a, m, b & !(1 << y));
                    monotonicity.record(ok, || json!({ "sets": sets(a, m, b), "dropped_right": y }));
                }
                for e in elems(m) {
                    let ok = ind(a | 1 << e, m, b | 1 << e);
                    normality.record(ok, || json!({ "sets": sets(a, m, b), "added": e }));
                }
            }
        }
    }

    let mut transitivity = PropertyResult::new("transitivity");
    for &m0 in &bases {
        for &m1 in bases.iter().filter(|&&m1| m1 & m0 == m0) {
            for &m2 in bases.iter().filter(|&&m2| m2 & m1 == m1) {
                for &a in &small {
                    if ind(a, m0, m1) && ind(a, m1, m2) {
                        let ok = ind(a, m0, m2);
                        transitivity.record(ok, || {
                            json!({ "A": elems(a), "M0": elems(m0), "M1": elems(m1), "M2": elems(m2) })
                        });
                    }
                }
            }
        }
    }

    let mut uniqueness = PropertyResult::new("uniqueness");
    let mut split = PropertyResult::new("split");
    for &m in &bases {
        let mv = elems(m);
        for &b in &small {
            let bv = elems(b);
            let over: Vec<usize> = mv.iter().chain(&bv).copied().unique().collect();
            let free: Vec<&Vec<usize>> = tuples.iter().filter(|t| independent(&d, t, &mv, &bv, cfg.s)).collect();
            let mut by_base: HashMap<_, &Vec<usize>> = HashMap::new();
            for t in &free {
                let key = qf_type(t, &mv, n);
                match by_base.get(&key) {
                    None => {
                        by_base.insert(key, t);
                    }
                    Some(&first) => {
                        let ok = qf_type(first, &over, n) == qf_type(t, &over, n);
                        uniqueness.record(ok, || json!({ "M": mv, "B": bv, "tuples": [first, t] }));
                    }
                }
            }
            let from_b: Vec<Vec<usize>> = (1..=bv.len().min(cfg.max_set))
                .flat_map(|k| (0..k).map(|_| bv.iter().copied()).multi_cartesian_product())
                .collect();
            for a in &free {
                for (b1, b2) in from_b.iter().tuple_combinations() {
                    if b1.len() != b2.len() || qf_type(b1, &mv, n) != qf_type(b2, &mv, n) {
                        continue;
                    }
                    let l = qf_type(&[b1.as_slice(), a.as_slice()].concat(), &mv, n);
                    let r = qf_type(&[b2.as_slice(), a.as_slice()].concat(), &mv, n);
                    split.record(l == r, || json!({ "M": mv, "B": bv, "a": a, "b1": b1, "b2": b2 }));
                }
            }
        }
    }

    ForkingReport {
        config: cfg,
        bases: bases.len(),
        properties: vec![invariance, monotonicity, normality, symmetry, transitivity, uniqueness, split],
        rich: cfg.min_base >= 2 * cfg.s,
        exhaustive: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_bound_examples() {
        let n = FinStructure::pure_equality(6);
        let m = [0, 1, 2, 3];
        assert!(is_independent(&[5], &m, &[4], &n, 2));
        assert!(!is_independent(&[5], &m, &[4], &n, 5));
        assert!(is_independent(&[2], &m, &[4, 5], &n, 9));
        assert!(!is_independent(&[4], &m, &[4], &n, 1));
    }

    #[test]
    fn monotone_in_the_literal_bound() {
        let n = FinStructure::linear_order(6);
        for a in 0..6 {
            for s in 1..4 {
                if is_independent(&[a], &[0, 2, 5], &[3], &n, s + 1) {
                    assert!(is_independent(&[a], &[0, 2, 5], &[3], &n, s));
                }
            }
        }
    }

    #[test]
    fn whole_structure_as_base() {
        let n = FinStructure::equivalence(&[0, 0, 1]);
        let r = check_forking_properties(
            &n,
            ForkingConfig {
                s: 2,
                max_set: 1,
                min_base: 3,
            },
        );
        assert!(r.all_pass());
    }

    #[test]
    fn equality_automorphisms_are_generated() {
        let gens = automorphism_generators(&FinStructure::pure_equality(4));
        assert!(!gens.is_empty() && gens.len() <= 4);
        assert!(automorphism_generators(&FinStructure::linear_order(4)).is_empty());
    }

    #[test]
    fn linear_order_breaks_uniqueness() {
        let r = check_forking_properties(
            &FinStructure::linear_order(5),
            ForkingConfig {
                s: 1,
                max_set: 1,
                min_base: 2,
            },
        );
        let u = r.property("uniqueness").unwrap();
        assert!(!u.pass() && u.witness.is_some());
    }
}
