//! HNN extensions of finite groups given by multiplication tables.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{HnnError, Result};
use crate::presentation::{HnnPresentation, PresentationFlags};

/// Largest accepted group order.
pub const MAX_ORDER: usize = 256;

/// On-disk instance description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    #[serde(rename = "H")]
    pub h: Vec<usize>,
    /// Keys are element indices written as strings (JSON object keys).
    pub theta: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// The first violated axiom found while validating a [`FiniteSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteError {
    #[error("order {0} is outside 1..={MAX_ORDER}")]
    Order(usize),
    #[error("table must be {order}x{order}; row {row} has {len} entries")]
    Shape { order: usize, row: usize, len: usize },
    #[error("index {0} is out of range")]
    OutOfRange(usize),
    #[error("element {0} is not a two-sided identity")]
    Identity(usize),
    #[error("associativity fails for ({0}, {1}, {2})")]
    Associativity(usize, usize, usize),
    #[error("element {0} has no inverse")]
    Inverse(usize),
    #[error("H does not contain the identity")]
    SubgroupIdentity,
    #[error("H is not closed: {0}·{1} is missing")]
    SubgroupClosure(usize, usize),
    #[error("H is not closed under inverses: inverse of {0} is missing")]
    SubgroupInverse(usize),
    #[error("theta has a bad key `{0}`")]
    ThetaKey(String),
    #[error("theta domain must equal H; {0} is unmatched")]
    ThetaDomain(usize),
    #[error("theta is not a homomorphism at ({0}, {1})")]
    ThetaHomomorphism(usize, usize),
    #[error("theta is not injective: {0} and {1} share an image")]
    ThetaInjective(usize, usize),
    #[error("labels must be {0} distinct tokens without whitespace")]
    Labels(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteHnnInstance {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    in_h: Vec<bool>,
    in_theta_h: Vec<bool>,
    theta: Vec<Option<usize>>,
    theta_inv: Vec<Option<usize>>,
    rep_h: Vec<usize>,
    rep_theta_h: Vec<usize>,
    labels: Vec<String>,
}

pub fn finite_validate(spec: &FiniteSpec) -> Result<FiniteHnnInstance, FiniteError> {
    let n = spec.order;
    if n == 0 || n > MAX_ORDER {
        return Err(FiniteError::Order(n));
    }
    if spec.table.len() != n {
        return Err(FiniteError::Shape { order: n, row: spec.table.len(), len: 0 });
    }
    for (row, r) in spec.table.iter().enumerate() {
        if r.len() != n {
            return Err(FiniteError::Shape { order: n, row, len: r.len() });
        }
        if let Some(&bad) = r.iter().find(|&&x| x >= n) {
            return Err(FiniteError::OutOfRange(bad));
        }
    }
    let table: Vec<usize> = spec.table.iter().flatten().copied().collect();
    let mul = |a: usize, b: usize| table[a * n + b];

    let e = spec.identity;
    if e >= n {
        return Err(FiniteError::OutOfRange(e));
    }
    if (0..n).any(|a| mul(e, a) != a || mul(a, e) != a) {
        return Err(FiniteError::Identity(e));
    }
    for a in 0..n {
        for b in 0..n {
            let ab = mul(a, b);
            for c in 0..n {
                if mul(ab, c) != mul(a, mul(b, c)) {
                    return Err(FiniteError::Associativity(a, b, c));
                }
            }
        }
    }
    let mut inverse = vec![0; n];
    for (a, inv) in inverse.iter_mut().enumerate() {
        *inv = (0..n)
            .find(|&b| mul(a, b) == e && mul(b, a) == e)
            .ok_or(FiniteError::Inverse(a))?;
    }

    let mut in_h = vec![false; n];
    for &h in &spec.h {
        if h >= n {
            return Err(FiniteError::OutOfRange(h));
        }
        in_h[h] = true;
    }
    if !in_h[e] {
        return Err(FiniteError::SubgroupIdentity);
    }
    let hs: Vec<usize> = (0..n).filter(|&a| in_h[a]).collect();
    for &a in &hs {
        if !in_h[inverse[a]] {
            return Err(FiniteError::SubgroupInverse(a));
        }
        for &b in &hs {
            if !in_h[mul(a, b)] {
                return Err(FiniteError::SubgroupClosure(a, b));
            }
        }
    }

    let mut theta = vec![None; n];
    for (k, &v) in &spec.theta {
        let key: usize = k.trim().parse().map_err(|_| FiniteError::ThetaKey(k.clone()))?;
        if key >= n {
            return Err(FiniteError::OutOfRange(key));
        }
        if v >= n {
            return Err(FiniteError::OutOfRange(v));
        }
        if !in_h[key] {
            return Err(FiniteError::ThetaDomain(key));
        }
        theta[key] = Some(v);
    }
    if let Some(&missing) = hs.iter().find(|&&h| theta[h].is_none()) {
        return Err(FiniteError::ThetaDomain(missing));
    }
    let th = |a: usize| theta[a].expect("theta defined on H");
    for &a in &hs {
        for &b in &hs {
            if th(mul(a, b)) != mul(th(a), th(b)) {
                return Err(FiniteError::ThetaHomomorphism(a, b));
            }
        }
    }
    let mut theta_inv = vec![None; n];
    for &a in &hs {
        let img = th(a);
        if let Some(prev) = theta_inv[img] {
            return Err(FiniteError::ThetaInjective(prev, a));
        }
        theta_inv[img] = Some(a);
    }
    let in_theta_h: Vec<bool> = theta_inv.iter().map(Option::is_some).collect();

    let labels = match &spec.labels {
        Some(l) => {
            let distinct: BTreeSet<&String> = l.iter().collect();
            if l.len() != n
                || distinct.len() != n
                || l.iter().any(|s| s.is_empty() || s.chars().any(char::is_whitespace) || s == "t" || s == "T")
            {
                return Err(FiniteError::Labels(n));
            }
            l.clone()
        }
        None => (0..n).map(|i| if i == e { "e".to_string() } else { format!("x{i}") }).collect(),
    };

    let rep_h = coset_reps(n, e, &mul, &in_h);
    let rep_theta_h = coset_reps(n, e, &mul, &in_theta_h);

    Ok(FiniteHnnInstance {
        name: spec.name.clone().unwrap_or_else(|| format!("order{n}")),
        order: n,
        table,
        identity: e,
        inverse,
        in_h,
        in_theta_h,
        theta,
        theta_inv,
        rep_h,
        rep_theta_h,
        labels,
    })
}

/// Left coset representatives: the identity for the subgroup itself, the
/// smallest index for every other coset.
fn coset_reps(n: usize, e: usize, mul: &impl Fn(usize, usize) -> usize, sub: &[bool]) -> Vec<usize> {
    let members: Vec<usize> = (0..n).filter(|&a| sub[a]).collect();
    (0..n)
        .map(|g| {
            let coset = members.iter().map(|&h| mul(g, h));
            if sub[g] {
                e
            } else {
                coset.min().expect("subgroup is non-empty")
            }
        })
        .collect()
}

impl FiniteHnnInstance {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: FiniteSpec = serde_json::from_str(text)
            .map_err(|e| HnnError::InvalidInstance(format!("finite instance JSON: {e}")))?;
        finite_validate(&spec).map_err(|e| HnnError::InvalidInstance(e.to_string()))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order
    }

    pub fn h_set(&self) -> BTreeSet<usize> {
        self.elements().filter(|&a| self.in_h[a]).collect()
    }

    pub fn theta_h_set(&self) -> BTreeSet<usize> {
        self.elements().filter(|&a| self.in_theta_h[a]).collect()
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    /// Neither `H` nor `θ(H)` is all of `G`.
    pub fn is_non_ascending(&self) -> bool {
        self.in_h.iter().any(|&b| !b) && self.in_theta_h.iter().any(|&b| !b)
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    /// `⋂_{g∈G} g S g⁻¹`.
    pub fn core(&self, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        set.iter()
            .copied()
            .filter(|&s| {
                self.elements()
                    .all(|g| set.contains(&self.mul(self.mul(self.inverse[g], s), g)))
            })
            .collect()
    }

    /// The symmetric group on three points with `H = ⟨(12)⟩`, `θ(12) = (13)`.
    pub fn s3_example() -> Self {
        finite_validate(&s3_spec()).expect("built-in S3 instance is valid")
    }

    /// `ℤ/4` with `H = {0, 2}` and `θ` the identity on `H`.
    pub fn z4_example() -> Self {
        finite_validate(&z4_spec()).expect("built-in Z4 instance is valid")
    }
}

/// Permutations of `{1,2,3}` composed right-to-left.
pub fn s3_spec() -> FiniteSpec {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
    let labels = ["e", "(12)", "(13)", "(23)", "(123)", "(132)"];
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("closed");
    let table = perms
        .iter()
        .map(|a| perms.iter().map(|b| index([a[b[0]], a[b[1]], a[b[2]]])).collect())
        .collect();
    FiniteSpec {
        name: Some("s3".into()),
        order: 6,
        table,
        identity: 0,
        h: vec![0, 1],
        theta: BTreeMap::from([("0".into(), 0), ("1".into(), 2)]),
        labels: Some(labels.iter().map(|s| s.to_string()).collect()),
    }
}

pub fn z4_spec() -> FiniteSpec {
    FiniteSpec {
        name: Some("z4".into()),
        order: 4,
        table: (0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect(),
        identity: 0,
        h: vec![0, 2],
        theta: BTreeMap::from([("0".into(), 0), ("2".into(), 2)]),
        labels: Some(vec!["e".into(), "a".into(), "a^2".into(), "a^3".into()]),
    }
}

impl HnnPresentation for FiniteHnnInstance {
    type Elt = usize;

    fn identity(&self) -> usize {
        self.identity
    }

    fn multiply(&self, a: &usize, b: &usize) -> usize {
        self.mul(*a, *b)
    }

    fn invert(&self, a: &usize) -> usize {
        self.inverse[*a]
    }

    fn in_h(&self, a: &usize) -> bool {
        self.in_h[*a]
    }

    fn in_theta_h(&self, a: &usize) -> bool {
        self.in_theta_h[*a]
    }

    fn theta(&self, a: &usize) -> Result<usize> {
        self.theta[*a].ok_or_else(|| {
            HnnError::OracleContract(format!("theta applied to {} outside H", self.labels[*a]))
        })
    }

    fn theta_inv(&self, a: &usize) -> Result<usize> {
        self.theta_inv[*a].ok_or_else(|| {
            HnnError::OracleContract(format!("theta_inv applied to {} outside theta(H)", self.labels[*a]))
        })
    }

    fn coset_rep_h(&self, a: &usize) -> usize {
        self.rep_h[*a]
    }

    fn coset_rep_theta_h(&self, a: &usize) -> usize {
        self.rep_theta_h[*a]
    }

    fn reps_h(&self) -> Option<Vec<usize>> {
        Some(self.rep_h.iter().copied().collect::<BTreeSet<_>>().into_iter().collect())
    }

    fn reps_theta_h(&self) -> Option<Vec<usize>> {
        Some(self.rep_theta_h.iter().copied().collect::<BTreeSet<_>>().into_iter().collect())
    }

    fn base_ball(&self) -> Option<Vec<usize>> {
        Some(self.elements().collect())
    }

    fn flags(&self) -> PresentationFlags {
        let h = self.h_set();
        PresentationFlags {
            h_normal_in_g: self.core(&h) == h,
            h_amenable_certified: true,
            non_ascending: self.is_non_ascending(),
        }
    }

    fn format_elt(&self, a: &usize) -> String {
        self.labels[*a].clone()
    }

    fn parse_elt(&self, token: &str) -> Result<usize> {
        if let Some(i) = self.labels.iter().position(|l| l == token) {
            return Ok(i);
        }
        if token == "1" {
            return Ok(self.identity);
        }
        token
            .strip_prefix('x')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&i| i < self.order)
            .ok_or_else(|| HnnError::parse(token, "unknown element label"))
    }

    fn descriptor(&self) -> String {
        format!("finite:{}", self.name)
    }
}

/// The descending chain `H_0 ⊇ H_1 ⊇ …` realized inside `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HkChain {
    pub chain: Vec<BTreeSet<usize>>,
    pub stabilized: bool,
}

impl HkChain {
    pub fn limit(&self) -> &BTreeSet<usize> {
        self.chain.last().expect("chain starts with H")
    }

    /// First index `k` with `H_k = H_{k+1}`, if stabilization was seen.
    pub fn stabilization_step(&self) -> Option<usize> {
        self.chain.windows(2).position(|w| w[0] == w[1])
    }
}

/// `H'_k = H_k ∩ θ(H_k)`, `N = core_G(H'_k)`, `H_{k+1} = N ∩ θ⁻¹(N ∩ θ(H))`.
pub fn finite_hk_chain(inst: &FiniteHnnInstance, max_k: usize) -> HkChain {
    let mut chain = vec![inst.h_set()];
    let mut stabilized = false;
    for _ in 0..max_k {
        let current = chain.last().expect("non-empty");
        let image: BTreeSet<usize> = current
            .iter()
            .map(|a| inst.theta[*a].expect("H_k ⊆ H"))
            .collect();
        let primed: BTreeSet<usize> = current.intersection(&image).copied().collect();
        let core = inst.core(&primed);
        let next: BTreeSet<usize> = core
            .iter()
            .copied()
            .filter(|&a| inst.theta[a].is_some_and(|b| core.contains(&b)))
            .collect();
        let done = next == *current;
        chain.push(next);
        if done {
            stabilized = true;
            break;
        }
    }
    HkChain { chain, stabilized }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiniteVerdict {
    /// The chain reached `{1}`, so the kernel is trivial.
    CSimpleCertified { chain: HkChain },
    /// The chain stabilized at a non-trivial finite normal subgroup.
    NotCSimpleCertified { kernel: BTreeSet<usize>, chain: HkChain },
}

pub fn finite_verdict(inst: &FiniteHnnInstance) -> Result<FiniteVerdict> {
    if !inst.is_non_ascending() {
        return Err(HnnError::Unsupported(
            "ascending HNN extension (H = G or theta(H) = G)".into(),
        ));
    }
    let chain = finite_hk_chain(inst, inst.order() + 1);
    debug_assert!(chain.stabilized);
    let limit = chain.limit().clone();
    if limit.len() == 1 && limit.contains(&inst.identity) {
        Ok(FiniteVerdict::CSimpleCertified { chain })
    } else {
        Ok(FiniteVerdict::NotCSimpleCertified { kernel: limit, chain })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_is_valid_and_certified() {
        let s3 = FiniteHnnInstance::s3_example();
        let chain = finite_hk_chain(&s3, 8);
        assert!(chain.stabilized);
        assert_eq!(chain.chain[1], BTreeSet::from([0]));
        assert!(matches!(finite_verdict(&s3).unwrap(), FiniteVerdict::CSimpleCertified { .. }));
    }

    #[test]
    fn s3_labels_compose() {
        let s3 = FiniteHnnInstance::s3_example();
        let a = s3.parse_elt("(12)").unwrap();
        let b = s3.parse_elt("(13)").unwrap();
        assert_eq!(s3.multiply(&a, &a), 0);
        let ab = s3.multiply(&a, &b);
        assert!(["(123)", "(132)"].contains(&s3.label(ab)));
    }

    #[test]
    fn z4_kernel_is_nontrivial() {
        let z4 = FiniteHnnInstance::z4_example();
        let chain = finite_hk_chain(&z4, 8);
        assert!(chain.chain.iter().all(|s| *s == BTreeSet::from([0, 2])));
        match finite_verdict(&z4).unwrap() {
            FiniteVerdict::NotCSimpleCertified { kernel, .. } => {
                assert_eq!(kernel, BTreeSet::from([0, 2]))
            }
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn whole_group_with_identity_theta_is_constant() {
        let mut spec = z4_spec();
        spec.h = vec![0, 1, 2, 3];
        spec.theta = (0..4).map(|i| (i.to_string(), i)).collect();
        let inst = finite_validate(&spec).unwrap();
        let chain = finite_hk_chain(&inst, 4);
        assert!(chain.chain.iter().all(|s| s.len() == 4));
        assert!(matches!(finite_verdict(&inst), Err(HnnError::Unsupported(_))));
    }

    #[test]
    fn broken_associativity_is_reported() {
        let mut spec = s3_spec();
        // swap two entries in a row outside the identity row/column
        spec.table[1].swap(2, 3);
        let err = finite_validate(&spec).unwrap_err();
        assert!(
            matches!(err, FiniteError::Associativity(..) | FiniteError::Inverse(_)),
            "{err:?}"
        );
    }

    #[test]
    fn associativity_witness_triple() {
        // a Latin square with identity 0 that is not a group (order 5)
        let table = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let spec = FiniteSpec {
            name: None,
            order: 5,
            table,
            identity: 0,
            h: vec![0],
            theta: BTreeMap::from([("0".into(), 0)]),
            labels: None,
        };
        match finite_validate(&spec).unwrap_err() {
            FiniteError::Associativity(a, b, c) => {
                let t = &spec.table;
                assert_ne!(t[t[a][b]][c], t[a][t[b][c]]);
            }
            other => panic!("expected associativity failure, got {other:?}"),
        }
    }

    #[test]
    fn non_injective_theta() {
        let mut spec = s3_spec();
        spec.theta.insert("1".into(), 0);
        assert_eq!(finite_validate(&spec).unwrap_err(), FiniteError::ThetaInjective(0, 1));
    }

    #[test]
    fn subgroup_errors() {
        let mut spec = s3_spec();
        spec.h = vec![1];
        spec.theta = BTreeMap::from([("1".into(), 2)]);
        assert_eq!(finite_validate(&spec).unwrap_err(), FiniteError::SubgroupIdentity);
        let mut spec = s3_spec();
        spec.h = vec![0, 1, 2];
        assert!(matches!(finite_validate(&spec).unwrap_err(), FiniteError::SubgroupClosure(..)));
    }

    #[test]
    fn json_round_trip() {
        let text = serde_json::to_string(&s3_spec()).unwrap();
        let inst = FiniteHnnInstance::from_json(&text).unwrap();
        assert_eq!(inst, FiniteHnnInstance::s3_example());
    }
}
