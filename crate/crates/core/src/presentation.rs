//! The oracle bundle every algorithm in the crate runs against.

use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;

use crate::error::{HnnError, Result};
use crate::word::Sign;

/// Metadata carried by an instance. Flags are claims made by the instance
/// author; the analysis engine cites them but does not recompute them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PresentationFlags {
    pub h_normal_in_g: bool,
    pub h_amenable_certified: bool,
    pub non_ascending: bool,
}

/// An HNN extension `⟨G, t | t⁻¹ h t = θ(h), h ∈ H⟩` given by oracles for the
/// base group `G`, the subgroup `H`, the monomorphism `θ : H → G`, and left
/// coset representative systems `S_{-1}` (for `H`) and `S_1` (for `θ(H)`).
///
/// Contract:
/// * `coset_rep_h(identity) = identity` and `coset_rep_h` is constant on left
///   `H`-cosets (same for `coset_rep_theta_h` and `θ(H)`);
/// * `theta_inv(theta(h)) = h` for every `h ∈ H`.
pub trait HnnPresentation: Send + Sync {
    type Elt: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn identity(&self) -> Self::Elt;
    fn multiply(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn invert(&self, a: &Self::Elt) -> Self::Elt;

    fn is_identity(&self, a: &Self::Elt) -> bool {
        *a == self.identity()
    }

    fn in_h(&self, a: &Self::Elt) -> bool;
    fn in_theta_h(&self, a: &Self::Elt) -> bool;

    /// `θ(a)`; errors when `a ∉ H`.
    fn theta(&self, a: &Self::Elt) -> Result<Self::Elt>;
    /// `θ⁻¹(a)`; errors when `a ∉ θ(H)`.
    fn theta_inv(&self, a: &Self::Elt) -> Result<Self::Elt>;

    /// Representative of `aH` in `S_{-1}`.
    fn coset_rep_h(&self, a: &Self::Elt) -> Self::Elt;
    /// Representative of `aθ(H)` in `S_1`.
    fn coset_rep_theta_h(&self, a: &Self::Elt) -> Self::Elt;

    /// Finite enumeration of `S_{-1}`, in the instance's letter order.
    fn reps_h(&self) -> Option<Vec<Self::Elt>>;
    /// Finite enumeration of `S_1`, in the instance's letter order.
    fn reps_theta_h(&self) -> Option<Vec<Self::Elt>>;

    /// A finite ball of `G` used as end-letter set when `H` is not normal.
    fn base_ball(&self) -> Option<Vec<Self::Elt>> {
        None
    }

    fn flags(&self) -> PresentationFlags;

    fn format_elt(&self, a: &Self::Elt) -> String;
    fn parse_elt(&self, token: &str) -> Result<Self::Elt>;

    /// Short descriptor such as `bs:2,3`.
    fn descriptor(&self) -> String;

    // Sign-indexed helpers. `H_{-1} = H`, `H_1 = θ(H)`, and `S_ε` is the
    // representative system for `H_ε`.

    fn in_subgroup(&self, sign: Sign, a: &Self::Elt) -> bool {
        match sign {
            Sign::Neg => self.in_h(a),
            Sign::Pos => self.in_theta_h(a),
        }
    }

    fn coset_rep(&self, sign: Sign, a: &Self::Elt) -> Self::Elt {
        match sign {
            Sign::Neg => self.coset_rep_h(a),
            Sign::Pos => self.coset_rep_theta_h(a),
        }
    }

    fn reps(&self, sign: Sign) -> Option<Vec<Self::Elt>> {
        match sign {
            Sign::Neg => self.reps_h(),
            Sign::Pos => self.reps_theta_h(),
        }
    }

    /// Transport `h ∈ H_{-ε}` across `t^ε`: `t^{-ε} h t^ε`, which lies in `H_ε`.
    fn push_through(&self, sign: Sign, h: &Self::Elt) -> Result<Self::Elt> {
        match sign {
            Sign::Pos => self.theta(h),
            Sign::Neg => self.theta_inv(h),
        }
    }

    /// Check the sampled parts of the oracle contract on a list of elements.
    fn check_contract(&self, sample: &[Self::Elt]) -> Result<()> {
        let id = self.identity();
        if self.coset_rep_h(&id) != id || self.coset_rep_theta_h(&id) != id {
            return Err(HnnError::OracleContract(
                "identity must represent its own coset".into(),
            ));
        }
        let hs: Vec<&Self::Elt> = sample.iter().filter(|a| self.in_h(a)).collect();
        let ks: Vec<&Self::Elt> = sample.iter().filter(|a| self.in_theta_h(a)).collect();
        for g in sample {
            for h in &hs {
                if self.coset_rep_h(&self.multiply(g, h)) != self.coset_rep_h(g) {
                    return Err(HnnError::OracleContract(format!(
                        "coset_rep_h not constant on the coset of {}",
                        self.format_elt(g)
                    )));
                }
            }
            for k in &ks {
                if self.coset_rep_theta_h(&self.multiply(g, k)) != self.coset_rep_theta_h(g) {
                    return Err(HnnError::OracleContract(format!(
                        "coset_rep_theta_h not constant on the coset of {}",
                        self.format_elt(g)
                    )));
                }
            }
        }
        for h in hs {
            let image = self.theta(h)?;
            if !self.in_theta_h(&image) || self.theta_inv(&image)? != *h {
                return Err(HnnError::OracleContract(format!(
                    "theta_inv(theta({})) differs from the input",
                    self.format_elt(h)
                )));
            }
        }
        if self.flags().non_ascending {
            for sign in Sign::BOTH {
                if let Some(reps) = self.reps(sign) {
                    if !reps.iter().any(|r| !self.is_identity(r)) {
                        return Err(HnnError::OracleContract(
                            "non-ascending instance needs a non-trivial coset representative"
                                .into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}
