//! Baumslag–Solitar groups `BS(m,n) = ⟨g, t | t⁻¹ g^m t = g^n⟩` as the HNN
//! extension of `ℤ` along `mℤ → nℤ`. Elements of `G` are exponents of `g`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{HnnError, Result};
use crate::normal_form::normal_form;
use crate::presentation::{HnnPresentation, PresentationFlags};
use crate::word::{Letter, Sign, Word};

/// Chains longer than this are refused.
pub const MAX_CHAIN_STEPS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BsInstance {
    m: i64,
    n: i64,
}

impl BsInstance {
    pub fn new(m: i64, n: i64) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(HnnError::InvalidInstance(format!(
                "BS({m},{n}): m and n must be nonzero"
            )));
        }
        Ok(BsInstance { m, n })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// `g^k` as a word letter.
    pub fn g(&self, k: i64) -> Letter<BigInt> {
        Letter::Base(BigInt::from(k))
    }
}

impl HnnPresentation for BsInstance {
    type Elt = BigInt;

    fn identity(&self) -> BigInt {
        BigInt::zero()
    }

    fn multiply(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }

    fn invert(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn is_identity(&self, a: &BigInt) -> bool {
        a.is_zero()
    }

    fn in_h(&self, a: &BigInt) -> bool {
        a.is_multiple_of(&BigInt::from(self.m))
    }

    fn in_theta_h(&self, a: &BigInt) -> bool {
        a.is_multiple_of(&BigInt::from(self.n))
    }

    fn theta(&self, a: &BigInt) -> Result<BigInt> {
        if !self.in_h(a) {
            return Err(HnnError::OracleContract(format!(
                "theta applied to g^{a}, which is not in {}Z",
                self.m
            )));
        }
        Ok(a / self.m * self.n)
    }

    fn theta_inv(&self, a: &BigInt) -> Result<BigInt> {
        if !self.in_theta_h(a) {
            return Err(HnnError::OracleContract(format!(
                "theta_inv applied to g^{a}, which is not in {}Z",
                self.n
            )));
        }
        Ok(a / self.n * self.m)
    }

    fn coset_rep_h(&self, a: &BigInt) -> BigInt {
        a.mod_floor(&BigInt::from(self.m.abs()))
    }

    fn coset_rep_theta_h(&self, a: &BigInt) -> BigInt {
        a.mod_floor(&BigInt::from(self.n.abs()))
    }

    fn reps_h(&self) -> Option<Vec<BigInt>> {
        Some((0..self.m.abs()).map(BigInt::from).collect())
    }

    fn reps_theta_h(&self) -> Option<Vec<BigInt>> {
        Some((0..self.n.abs()).map(BigInt::from).collect())
    }

    fn flags(&self) -> PresentationFlags {
        PresentationFlags {
            h_normal_in_g: true,
            h_amenable_certified: true,
            non_ascending: self.m.abs() >= 2 && self.n.abs() >= 2,
        }
    }

    fn format_elt(&self, a: &BigInt) -> String {
        if a.is_zero() {
            "1".into()
        } else {
            format!("g^{a}")
        }
    }

    fn parse_elt(&self, token: &str) -> Result<BigInt> {
        match token {
            "1" | "e" => Ok(BigInt::zero()),
            "g" => Ok(BigInt::one()),
            _ => token
                .strip_prefix("g^")
                .ok_or_else(|| HnnError::parse(token, "expected g^k"))?
                .parse::<BigInt>()
                .map_err(|e| HnnError::parse(token, e.to_string())),
        }
    }

    fn descriptor(&self) -> String {
        format!("bs:{},{}", self.m, self.n)
    }
}

/// Exponent lattices `c_0, c_1, …` of iterated stable-letter conjugates of
/// `H` intersected with `G`, with `G`-membership required at every stage.
///
/// Direction `+1` tracks `t^{-i} H t^{i} ∩ G`; direction `-1` tracks
/// `t^{i} H t^{-i} ∩ G`. Both start at `c_0 = |m|`.
pub fn bs_chain(inst: &BsInstance, direction: Sign, steps: usize) -> Result<Vec<BigInt>> {
    if steps == 0 {
        return Err(HnnError::Precondition("bs_chain needs at least one step".into()));
    }
    if steps > MAX_CHAIN_STEPS {
        return Err(HnnError::ResourceLimit {
            what: "computing the BS chain".into(),
            partial: 0,
            limit: MAX_CHAIN_STEPS,
        });
    }
    let m = BigInt::from(inst.m.abs());
    let n = BigInt::from(inst.n.abs());
    let (through, out) = match direction {
        Sign::Pos => (&m, &n),
        Sign::Neg => (&n, &m),
    };
    let mut chain = Vec::with_capacity(steps + 1);
    chain.push(m.clone());
    for _ in 0..steps {
        let c = chain.last().expect("chain is non-empty");
        chain.push(c.lcm(through) / through * out);
    }
    Ok(chain)
}

/// Independent membership oracle for the chain: is `g^a` in the `i`-th
/// conjugate lattice? Decided by normalizing `t^{i} g^a t^{-i}` (direction
/// `+1`) or `t^{-i} g^a t^{i}` (direction `-1`) and testing the result for
/// membership in `H`.
pub fn bs_lattice_member(inst: &BsInstance, direction: Sign, i: usize, a: &BigInt) -> Result<bool> {
    let mut letters = vec![Letter::Stable(direction); i];
    letters.push(Letter::Base(a.clone()));
    letters.extend(std::iter::repeat_n(Letter::Stable(-direction), i));
    let nf = normal_form(inst, &Word::new(letters))?;
    Ok(nf.length() == 0 && inst.in_h(&nf.end_letter))
}

/// Cross-check every chain entry against [`bs_lattice_member`] for
/// `a ∈ 1..=sample_to`. Returns the first mismatch as `(step, a)`.
pub fn bs_chain_cross_check(
    inst: &BsInstance,
    direction: Sign,
    chain: &[BigInt],
    sample_to: i64,
) -> Result<Option<(usize, i64)>> {
    for (i, c) in chain.iter().enumerate() {
        for a in 1..=sample_to {
            let a_big = BigInt::from(a);
            let expected = a_big.is_multiple_of(c);
            if bs_lattice_member(inst, direction, i, &a_big)? != expected {
                return Ok(Some((i, a)));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NotCSimpleReason {
    /// `min(|m|,|n|) = 1`.
    Solvable,
    /// `|m| = |n|`, so `H` is a normal abelian subgroup.
    NormalAbelianH,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BsVerdict {
    NotCSimple(NotCSimpleReason),
    /// A chain direction strictly increased over every computed step.
    CSimpleEvidence { direction: Sign, chain: Vec<BigInt> },
    /// No chain direction diverged within the computed steps.
    Undetermined,
}

pub fn bs_verdict(inst: &BsInstance, steps: usize) -> Result<BsVerdict> {
    if steps < 2 {
        return Err(HnnError::Precondition("bs_verdict needs at least two steps".into()));
    }
    let (m, n) = (inst.m.abs(), inst.n.abs());
    if m.min(n) == 1 {
        return Ok(BsVerdict::NotCSimple(NotCSimpleReason::Solvable));
    }
    if m == n {
        return Ok(BsVerdict::NotCSimple(NotCSimpleReason::NormalAbelianH));
    }
    for direction in [Sign::Pos, Sign::Neg] {
        let chain = bs_chain(inst, direction, steps)?;
        if chain.windows(2).all(|w| w[0] < w[1]) {
            return Ok(BsVerdict::CSimpleEvidence { direction, chain });
        }
    }
    Ok(BsVerdict::Undetermined)
}

/// `min(|m|,|n|) ≥ 2` and `|m| ≠ |n|`.
pub fn bs_closed_form_c_simple(m: i64, n: i64) -> bool {
    m.abs().min(n.abs()) >= 2 && m.abs() != n.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::britton_reduce;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rejects_zero_parameters() {
        assert!(BsInstance::new(2, 0).is_err());
        assert!(BsInstance::new(0, 3).is_err());
    }

    #[test]
    fn chain_values() {
        let bs23 = BsInstance::new(2, 3).unwrap();
        assert_eq!(bs_chain(&bs23, Sign::Pos, 3).unwrap(), big(&[2, 3, 9, 27]));
        let bs22 = BsInstance::new(2, 2).unwrap();
        assert_eq!(bs_chain(&bs22, Sign::Pos, 3).unwrap(), big(&[2, 2, 2, 2]));
        let bs42 = BsInstance::new(4, 2).unwrap();
        assert_eq!(bs_chain(&bs42, Sign::Neg, 3).unwrap(), big(&[4, 8, 16, 32]));
    }

    #[test]
    fn chain_matches_britton_oracle() {
        for (m, n, d) in [(2, 3, Sign::Pos), (2, 2, Sign::Pos), (4, 2, Sign::Neg), (3, -5, Sign::Pos)] {
            let inst = BsInstance::new(m, n).unwrap();
            let chain = bs_chain(&inst, d, 3).unwrap();
            assert_eq!(bs_chain_cross_check(&inst, d, &chain, 54).unwrap(), None, "BS({m},{n})");
        }
    }

    #[test]
    fn chain_rejects_zero_steps() {
        let inst = BsInstance::new(2, 3).unwrap();
        assert!(bs_chain(&inst, Sign::Pos, 0).is_err());
    }

    #[test]
    fn verdict_examples() {
        let v = bs_verdict(&BsInstance::new(2, 3).unwrap(), 5).unwrap();
        assert!(matches!(v, BsVerdict::CSimpleEvidence { direction: Sign::Pos, .. }));
        let v = bs_verdict(&BsInstance::new(1, 5).unwrap(), 5).unwrap();
        assert_eq!(v, BsVerdict::NotCSimple(NotCSimpleReason::Solvable));
        let v = bs_verdict(&BsInstance::new(3, -3).unwrap(), 5).unwrap();
        assert_eq!(v, BsVerdict::NotCSimple(NotCSimpleReason::NormalAbelianH));
    }

    #[test]
    fn theta_application() {
        let inst = BsInstance::new(2, 3).unwrap();
        let w = Word::new(vec![Letter::Stable(Sign::Neg), inst.g(4), Letter::Stable(Sign::Pos)]);
        assert_eq!(britton_reduce(&inst, &w).unwrap(), Word::new(vec![inst.g(6)]));
        assert!(inst.theta(&BigInt::from(3)).is_err());
    }

    #[test]
    fn parses_tokens() {
        let inst = BsInstance::new(2, 3).unwrap();
        assert_eq!(inst.parse_elt("g^-7").unwrap(), BigInt::from(-7));
        assert_eq!(inst.parse_elt("g").unwrap(), BigInt::from(1));
        assert!(inst.parse_elt("h^2").is_err());
    }
}
