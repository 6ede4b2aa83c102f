use rayon::prelude::*;
use serde::Serialize;

use super::enumerate::ConjugatorEnumerator;
use crate::error::{HnnError, Result};
use crate::normal_form::{normal_form, normal_form_of_product, word_stats, NormalForm};
use crate::presentation::HnnPresentation;
use crate::word::{Letter, Sign, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MembershipStatus<E> {
    /// No enumerated conjugator moved the element out of `H`.
    InsideUpToBound,
    /// `w⁻¹ g w ∉ H` for this conjugator `w`.
    EjectedBy(Word<E>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipOutcome<E> {
    pub status: MembershipStatus<E>,
    /// The τ-length bound of the enumerator.
    pub bound_used: usize,
    /// Conjugators examined, including the ejecting one.
    pub tested: usize,
}

impl<E> MembershipOutcome<E> {
    pub fn is_inside(&self) -> bool {
        matches!(self.status, MembershipStatus::InsideUpToBound)
    }

    pub fn witness(&self) -> Option<&Word<E>> {
        match &self.status {
            MembershipStatus::EjectedBy(w) => Some(w),
            MembershipStatus::InsideUpToBound => None,
        }
    }
}

/// Whether `r⁻¹ g r ∈ H`.
pub fn conjugate_in_h<P>(pres: &P, g: &Word<P::Elt>, r: &Word<P::Elt>) -> Result<bool>
where
    P: HnnPresentation + ?Sized,
{
    let ri = r.inverse(pres);
    let nf = normal_form_of_product(pres, &[&ri, g, r])?;
    Ok(nf.length() == 0 && pres.in_h(&nf.end_letter))
}

/// Re-check an ejection: `r⁻¹ g r ∉ H`.
pub fn verify_ejection<P>(pres: &P, g: &Word<P::Elt>, r: &Word<P::Elt>) -> Result<bool>
where
    P: HnnPresentation + ?Sized,
{
    Ok(!conjugate_in_h(pres, g, r)?)
}

/// Scan conjugators in enumeration order for the first one ejecting `g`
/// from `H`. Each length is tested in parallel; the earliest hit wins.
fn first_ejector<P>(pres: &P, g: &Word<P::Elt>, en: &ConjugatorEnumerator<P::Elt>) -> Result<MembershipOutcome<P::Elt>>
where
    P: HnnPresentation + ?Sized,
{
    let mut tested = 0;
    for n in 0..=en.max_tau_length {
        let batch: Vec<NormalForm<P::Elt>> = en.of_length(pres, n);
        let words: Vec<Word<P::Elt>> = batch.iter().map(NormalForm::to_word).collect();
        let hit = words.par_iter().position_first(|r| !matches!(conjugate_in_h(pres, g, r), Ok(true)));
        match hit {
            Some(i) => {
                conjugate_in_h(pres, g, &words[i])?;
                return Ok(MembershipOutcome {
                    status: MembershipStatus::EjectedBy(words[i].clone()),
                    bound_used: en.max_tau_length,
                    tested: tested + i + 1,
                });
            }
            None => tested += words.len(),
        }
    }
    Ok(MembershipOutcome { status: MembershipStatus::InsideUpToBound, bound_used: en.max_tau_length, tested })
}

/// Bounded test of `g ∈ K_ε = ⋂_{r ∉ T_ε†} rHr⁻¹`.
pub fn quasi_kernel_test<P>(
    pres: &P,
    g: &P::Elt,
    epsilon: Sign,
    en: &ConjugatorEnumerator<P::Elt>,
) -> Result<MembershipOutcome<P::Elt>>
where
    P: HnnPresentation + ?Sized,
{
    if en.epsilon_excluded != Some(epsilon) {
        return Err(HnnError::Precondition(format!(
            "quasi-kernel test for epsilon {epsilon} needs an enumerator excluding that type"
        )));
    }
    first_ejector(pres, &Word::base(g.clone()), en)
}

/// Bounded test of `g ∈ ker Γ = ⋂_r rHr⁻¹`.
pub fn kernel_test<P>(pres: &P, g: &P::Elt, en: &ConjugatorEnumerator<P::Elt>) -> Result<MembershipOutcome<P::Elt>>
where
    P: HnnPresentation + ?Sized,
{
    if en.epsilon_excluded.is_some() {
        return Err(HnnError::Precondition("kernel test needs an enumerator over all of the group".into()));
    }
    first_ejector(pres, &Word::base(g.clone()), en)
}

/// Target subgroup for the Powers-type search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PowersMode {
    /// Find `g` with `gFg⁻¹ ∩ G = ∅`.
    G,
    /// Find `g` with `gFg⁻¹ ∩ H = ∅`.
    H,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PowersOutcome<E> {
    Witness(Word<E>),
    Exhausted { bound: usize, tested: usize },
}

fn powers_ok<P>(pres: &P, fs: &[Word<P::Elt>], g: &Word<P::Elt>, gi: &Word<P::Elt>, mode: PowersMode) -> Result<bool>
where
    P: HnnPresentation + ?Sized,
{
    for f in fs {
        let nf = normal_form_of_product(pres, &[g, f, gi])?;
        let avoided = nf.length() >= 1 || (mode == PowersMode::H && !pres.in_h(&nf.end_letter));
        if !avoided {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Search for `g` with every `gfg⁻¹` outside `G` (or `H`), shortest first.
pub fn powers_search<P>(
    pres: &P,
    fs: &[Word<P::Elt>],
    mode: PowersMode,
    en: &ConjugatorEnumerator<P::Elt>,
) -> Result<PowersOutcome<P::Elt>>
where
    P: HnnPresentation + ?Sized,
{
    for f in fs {
        let nf = normal_form(pres, f)?;
        if nf.length() == 0 && pres.is_identity(&nf.end_letter) {
            return Err(HnnError::Precondition("F must not contain the identity".into()));
        }
    }
    let mut tested = 0;
    for n in 0..=en.max_tau_length {
        let words: Vec<Word<P::Elt>> = en.of_length(pres, n).iter().map(NormalForm::to_word).collect();
        let hit = words.par_iter().position_first(|g| {
            let gi = g.inverse(pres);
            !matches!(powers_ok(pres, fs, g, &gi, mode), Ok(false))
        });
        if let Some(i) = hit {
            let g = &words[i];
            powers_ok(pres, fs, g, &g.inverse(pres), mode)?;
            return Ok(PowersOutcome::Witness(g.clone()));
        }
        tested += words.len();
    }
    Ok(PowersOutcome::Exhausted { bound: en.max_tau_length, tested })
}

/// Move an ejection witness for `K_ε` to the other quasi-kernel: with
/// `s ∈ S_ε ∖ {1}` and `u = s t^{-ε}`, the conjugator `u r` lies outside
/// `T_{-ε}†` and ejects `u g u⁻¹` exactly when `r` ejects `g`.
pub fn transport_witness<P>(
    pres: &P,
    g: &Word<P::Elt>,
    epsilon: Sign,
    r: &Word<P::Elt>,
    s: &P::Elt,
) -> Result<(Word<P::Elt>, Word<P::Elt>)>
where
    P: HnnPresentation + ?Sized,
{
    if pres.is_identity(s) || pres.coset_rep(epsilon, s) != *s {
        return Err(HnnError::Precondition(
            "transport needs a nontrivial coset representative of the matching subgroup".into(),
        ));
    }
    let u = Word::new(vec![Letter::Base(s.clone()), Letter::Stable(-epsilon)]);
    let moved = u.concat(g).concat(&u.inverse(pres));
    Ok((moved, u.concat(r)))
}

/// Check a transported witness: outside `T_{-ε}†` and still ejecting.
pub fn check_transported<P>(pres: &P, g: &Word<P::Elt>, epsilon: Sign, r: &Word<P::Elt>) -> Result<bool>
where
    P: HnnPresentation + ?Sized,
{
    let stats = word_stats(pres, &normal_form(pres, r)?);
    Ok(!stats.in_t_dagger(-epsilon) && verify_ejection(pres, g, r)?)
}
