//! The locally finite base group `G = ⟨H̄, g₀, g₁⟩` built on the index set
//! `X`, with `H = ⟨H̄, g₀⟩`, `θ(H) = ⟨H̄, g₁⟩` and the monomorphism `θ = θ₀`.
//! Its HNN extension has trivial kernel but nontrivial amenable
//! quasi-kernels.

mod hbar;
mod xseq;

use std::collections::BTreeSet;
use std::fmt;

pub use hbar::{conjugate_longer, HBarElt, RuleVariant};
pub use xseq::{window_allowed, XSeq, XSeqViolation, MAX_PAIRS, PAIRS};

use crate::error::{HnnError, Result};
use crate::presentation::{HnnPresentation, PresentationFlags};
use crate::word::{Letter, Sign, Word};

/// `g₀^{e0} · g₁^{e1} · hbar`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExampleGElt {
    e0: u8,
    e1: u8,
    hbar: HBarElt,
}

impl ExampleGElt {
    pub fn new(e0: u8, e1: u8, hbar: HBarElt) -> Self {
        ExampleGElt { e0: e0 & 1, e1: e1 & 1, hbar }
    }

    pub fn identity() -> Self {
        Self::new(0, 0, HBarElt::identity())
    }

    /// `g_j`.
    pub fn g(j: u8) -> Self {
        if j == 0 {
            Self::new(1, 0, HBarElt::identity())
        } else {
            Self::new(0, 1, HBarElt::identity())
        }
    }

    /// `h(x)`.
    pub fn h(x: XSeq) -> Self {
        Self::new(0, 0, HBarElt::generator(x))
    }

    pub fn e0(&self) -> u8 {
        self.e0
    }

    pub fn e1(&self) -> u8 {
        self.e1
    }

    pub fn hbar(&self) -> &HBarElt {
        &self.hbar
    }

    pub fn is_identity(&self) -> bool {
        self.e0 == 0 && self.e1 == 0 && self.hbar.is_identity()
    }
}

impl fmt::Debug for ExampleGElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_elt(self))
    }
}

fn format_elt(a: &ExampleGElt) -> String {
    let mut parts = Vec::new();
    if a.e0 == 1 {
        parts.push("g0".to_string());
    }
    if a.e1 == 1 {
        parts.push("g1".to_string());
    }
    parts.extend(a.hbar.generators().map(|x| format!("h{x}")));
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// The example base group together with its HNN data.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Example5 {
    variant: RuleVariant,
}

impl Example5 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_variant(variant: RuleVariant) -> Self {
        Example5 { variant }
    }

    pub fn variant(&self) -> RuleVariant {
        self.variant
    }

    /// `a · h(z)`.
    pub fn mul_h(&self, a: &ExampleGElt, z: &XSeq) -> ExampleGElt {
        let mut out = a.clone();
        out.hbar.mul_generator(z, self.variant);
        out
    }

    fn conj_g(&self, h: &HBarElt, e0: u8, e1: u8) -> HBarElt {
        let mut out = h.clone();
        if e0 == 1 {
            out = out.conjugate_by_g(0);
        }
        if e1 == 1 {
            out = out.conjugate_by_g(1);
        }
        out
    }

    /// `θ₀` (`Sign::Pos`) or its inverse `θ₁` (`Sign::Neg`), applied
    /// generator-wise. `θ₀` needs `e1 = 0`, `θ₁` needs `e0 = 0`.
    pub fn theta_dir(&self, a: &ExampleGElt, direction: Sign) -> Result<ExampleGElt> {
        let i = match direction {
            Sign::Pos => 0u8,
            Sign::Neg => 1u8,
        };
        let (own, other) = if i == 0 { (a.e0, a.e1) } else { (a.e1, a.e0) };
        if other != 0 {
            return Err(HnnError::OracleContract(format!(
                "theta_{i} needs exponent e{} = 0 in {}",
                1 - i,
                format_elt(a)
            )));
        }
        let mut out = if own == 1 {
            ExampleGElt::h(XSeq::validate(&[(0, i)]).expect("length-1 sequences are in X"))
        } else {
            ExampleGElt::identity()
        };
        for x in a.hbar.generators() {
            out = self.multiply(&out, &self.theta_generator(i, x));
        }
        Ok(out)
    }

    /// `θ_i(h(x))`.
    pub fn theta_generator(&self, i: u8, x: &XSeq) -> ExampleGElt {
        if x.pair(0) == (0, 1 - i) {
            match x.tail() {
                None => ExampleGElt::g(1 - i),
                Some(rest) => ExampleGElt::h(rest),
            }
        } else {
            ExampleGElt::h(x.prepend((0, i)))
        }
    }

    /// The conjugator `r(x) = r₁(x)⋯r_n(x)` with `r(x)⁻¹ h(x) r(x) = g_{i(x)}`,
    /// together with `i(x)`.
    pub fn reducer(&self, x: &XSeq) -> (Word<ExampleGElt>, u8) {
        let mut letters = Vec::with_capacity(2 * x.len());
        for (i, j) in x.pairs() {
            if i == 1 {
                letters.push(Letter::Base(ExampleGElt::g(j)));
            }
            letters.push(Letter::Stable(if j == 0 { Sign::Neg } else { Sign::Pos }));
        }
        (Word::new(letters), x.pair(x.len() - 1).1)
    }

    /// Generators `g₀, g₁` and `h(x)` for `ℓ(x) ≤ n`.
    pub fn gn_generators(&self, n: usize) -> Vec<ExampleGElt> {
        let mut gens = vec![ExampleGElt::g(0), ExampleGElt::g(1)];
        gens.extend((1..=n).flat_map(XSeq::all_of_length).map(ExampleGElt::h));
        gens
    }

    /// Closure of `gens` under right multiplication, breadth first. Fails
    /// with a partial count once `limit` elements are reached.
    pub fn closure(&self, gens: &[ExampleGElt], limit: usize) -> Result<BTreeSet<ExampleGElt>> {
        let mut seen = BTreeSet::from([ExampleGElt::identity()]);
        let mut frontier = vec![ExampleGElt::identity()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for g in gens {
                    let p = self.multiply(a, g);
                    if !seen.contains(&p) {
                        if seen.len() >= limit {
                            return Err(HnnError::ResourceLimit {
                                what: "enumerating a subgroup closure".into(),
                                partial: seen.len(),
                                limit,
                            });
                        }
                        seen.insert(p.clone());
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        Ok(seen)
    }

    /// The finite subgroup `G_n = ⟨g₀, g₁, h(x) : ℓ(x) ≤ n⟩`.
    pub fn enumerate_gn(&self, n: usize, limit: usize) -> Result<BTreeSet<ExampleGElt>> {
        self.closure(&self.gn_generators(n), limit)
    }

    /// Every element `g₀^{e0} g₁^{e1} Π h(x)` over subsets of the generators
    /// with `ℓ(x) ≤ n`, as canonical forms. Feasible for `n ≤ 2`.
    pub fn gn_canonical_elements(&self, n: usize) -> Vec<ExampleGElt> {
        let gens: Vec<XSeq> = (1..=n).flat_map(XSeq::all_of_length).collect();
        assert!(gens.len() < 24, "too many generators to enumerate subsets");
        let mut out = Vec::with_capacity(4usize << gens.len());
        for mask in 0u32..(1 << gens.len()) {
            let mut sectors: [Vec<XSeq>; 4] = Default::default();
            for (b, x) in gens.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    sectors[x.sector()].push(*x);
                }
            }
            for list in &mut sectors {
                list.sort_unstable();
            }
            let hbar = HBarElt::from_sectors(sectors).expect("sorted distinct sector lists");
            for e in 0..4u8 {
                out.push(ExampleGElt::new(e & 1, e >> 1, hbar.clone()));
            }
        }
        out
    }
}

impl HnnPresentation for Example5 {
    type Elt = ExampleGElt;

    fn identity(&self) -> ExampleGElt {
        ExampleGElt::identity()
    }

    fn multiply(&self, a: &ExampleGElt, b: &ExampleGElt) -> ExampleGElt {
        // h · g₀^c g₁^d = g₀^c g₁^d · (conjugate of h)
        let mut hbar = self.conj_g(&a.hbar, b.e0, b.e1);
        for z in b.hbar.generators() {
            hbar.mul_generator(z, self.variant);
        }
        ExampleGElt::new(a.e0 ^ b.e0, a.e1 ^ b.e1, hbar)
    }

    fn invert(&self, a: &ExampleGElt) -> ExampleGElt {
        let inv = a.hbar.inverse(self.variant);
        ExampleGElt::new(a.e0, a.e1, self.conj_g(&inv, a.e0, a.e1))
    }

    fn is_identity(&self, a: &ExampleGElt) -> bool {
        a.is_identity()
    }

    fn in_h(&self, a: &ExampleGElt) -> bool {
        a.e1 == 0
    }

    fn in_theta_h(&self, a: &ExampleGElt) -> bool {
        a.e0 == 0
    }

    fn theta(&self, a: &ExampleGElt) -> Result<ExampleGElt> {
        self.theta_dir(a, Sign::Pos)
    }

    fn theta_inv(&self, a: &ExampleGElt) -> Result<ExampleGElt> {
        self.theta_dir(a, Sign::Neg)
    }

    fn coset_rep_h(&self, a: &ExampleGElt) -> ExampleGElt {
        if a.e1 == 1 {
            ExampleGElt::g(1)
        } else {
            ExampleGElt::identity()
        }
    }

    fn coset_rep_theta_h(&self, a: &ExampleGElt) -> ExampleGElt {
        if a.e0 == 1 {
            ExampleGElt::g(0)
        } else {
            ExampleGElt::identity()
        }
    }

    fn reps_h(&self) -> Option<Vec<ExampleGElt>> {
        Some(vec![ExampleGElt::g(1), ExampleGElt::identity()])
    }

    fn reps_theta_h(&self) -> Option<Vec<ExampleGElt>> {
        Some(vec![ExampleGElt::g(0), ExampleGElt::identity()])
    }

    fn flags(&self) -> PresentationFlags {
        PresentationFlags {
            h_normal_in_g: true,
            h_amenable_certified: true,
            non_ascending: true,
        }
    }

    fn format_elt(&self, a: &ExampleGElt) -> String {
        format_elt(a)
    }

    /// Accepts `1`, `g0`, `g1`, `h(i1,j1,…)` and `*`-joined products of these.
    fn parse_elt(&self, token: &str) -> Result<ExampleGElt> {
        let mut out = ExampleGElt::identity();
        for factor in token.split('*') {
            let f = match factor.trim() {
                "1" | "e" => ExampleGElt::identity(),
                "g0" => ExampleGElt::g(0),
                "g1" => ExampleGElt::g(1),
                s if s.starts_with("h(") && s.ends_with(')') => {
                    let inner = &s[2..s.len() - 1];
                    let bits = inner
                        .split(',')
                        .map(|b| match b.trim() {
                            "0" => Ok(0u8),
                            "1" => Ok(1u8),
                            _ => Err(HnnError::parse(token, format!("bad bit `{b}`"))),
                        })
                        .collect::<Result<Vec<u8>>>()?;
                    let pairs: Vec<(u8, u8)> = if bits.len() % 2 == 0 {
                        bits.chunks(2).map(|c| (c[0], c[1])).collect()
                    } else {
                        return Err(HnnError::parse(token, "odd number of bits"));
                    };
                    let x = XSeq::validate(&pairs)
                        .map_err(|v| HnnError::parse(token, format!("sequence not in X: {v:?}")))?;
                    ExampleGElt::h(x)
                }
                _ => return Err(HnnError::parse(token, "expected 1, g0, g1 or h(...)")),
            };
            out = self.multiply(&out, &f);
        }
        Ok(out)
    }

    fn descriptor(&self) -> String {
        match self.variant {
            RuleVariant::Standard => "example5".into(),
            RuleVariant::DropR3Flip => "example5:drop-r3-flip".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_form::normal_form;

    fn x(bits: &[u8]) -> XSeq {
        XSeq::from_bits(bits).unwrap()
    }

    fn h(bits: &[u8]) -> ExampleGElt {
        ExampleGElt::h(x(bits))
    }

    #[test]
    fn multiplication_examples() {
        let e = Example5::new();
        let p = e.multiply(&e.multiply(&h(&[0, 0]), &h(&[0, 0, 1, 0])), &h(&[0, 0]));
        assert_eq!(p, h(&[0, 0, 0, 0]));
        let g0 = ExampleGElt::g(0);
        assert_eq!(e.multiply(&e.multiply(&g0, &h(&[0, 0])), &g0), h(&[1, 0]));
        assert!(e.multiply(&h(&[1, 1]), &h(&[1, 1])).is_identity());
    }

    #[test]
    fn theta_rules() {
        let e = Example5::new();
        assert_eq!(e.theta(&ExampleGElt::g(0)).unwrap(), h(&[0, 0]));
        assert_eq!(e.theta(&h(&[0, 1])).unwrap(), ExampleGElt::g(1));
        assert_eq!(e.theta(&h(&[1, 1])).unwrap(), h(&[0, 0, 1, 1]));
        assert_eq!(e.theta(&h(&[0, 1, 1, 1])).unwrap(), h(&[1, 1]));
        assert!(matches!(e.theta(&ExampleGElt::g(1)), Err(HnnError::OracleContract(_))));
        assert!(e.theta_inv(&ExampleGElt::g(0)).is_err());
        assert_eq!(e.theta_inv(&ExampleGElt::g(1)).unwrap(), h(&[0, 1]));
        assert_eq!(e.theta_inv(&h(&[0, 0])).unwrap(), ExampleGElt::g(0));
    }

    #[test]
    fn reducer_examples() {
        let e = Example5::new();
        let (r, i) = e.reducer(&x(&[0, 1]));
        assert_eq!(crate::word::format_word(&e, &r), "t");
        assert_eq!(i, 1);
        let (r, i) = e.reducer(&x(&[1, 0]));
        assert_eq!(crate::word::format_word(&e, &r), "g0 T");
        assert_eq!(i, 0);
        let (r, i) = e.reducer(&x(&[0, 0, 1, 0]));
        assert_eq!(crate::word::format_word(&e, &r), "T g0 T");
        assert_eq!(i, 0);
        for n in 1..=3 {
            for y in XSeq::all_of_length(n) {
                let (r, i) = e.reducer(&y);
                let w = r.inverse(&e).concat(&Word::base(ExampleGElt::h(y))).concat(&r);
                let nf = normal_form(&e, &w).unwrap();
                assert_eq!(nf.length(), 0, "{y}");
                assert_eq!(nf.end_letter, ExampleGElt::g(i), "{y}");
            }
        }
    }

    #[test]
    fn normal_form_of_g0_h_g0() {
        let e = Example5::new();
        let w = crate::word::parse_word(&e, "g0 h(0,0) g0").unwrap();
        let nf = normal_form(&e, &w).unwrap();
        assert_eq!(nf.length(), 0);
        assert_eq!(nf.end_letter, h(&[1, 0]));
    }

    #[test]
    fn small_closures() {
        let e = Example5::new();
        let sector: Vec<ExampleGElt> =
            XSeq::sector_upto((0, 0), 2).into_iter().map(ExampleGElt::h).collect();
        assert_eq!(e.closure(&sector, 1000).unwrap().len(), 16);
        assert_eq!(e.enumerate_gn(1, 1000).unwrap().len(), 64);
        assert_eq!(e.closure(&[], 10).unwrap().len(), 1);
        assert!(matches!(e.enumerate_gn(1, 10), Err(HnnError::ResourceLimit { .. })));
        let mut direct = e.gn_canonical_elements(1);
        direct.sort();
        let closed: Vec<_> = e.enumerate_gn(1, 1000).unwrap().into_iter().collect();
        assert_eq!(direct, closed);
    }

    #[test]
    fn parse_format_round_trip() {
        let e = Example5::new();
        for tok in ["1", "g0", "g1", "h(0,0,1,0)", "g0*g1*h(0,0)*h(0,0,1,0)*h(1,1)"] {
            let a = e.parse_elt(tok).unwrap();
            assert_eq!(e.format_elt(&a), tok);
        }
        assert!(e.parse_elt("h(0,0,0,1)").is_err());
        assert!(e.parse_elt("h(0,0,1)").is_err());
        assert!(e.parse_elt("g2").is_err());
    }
}
