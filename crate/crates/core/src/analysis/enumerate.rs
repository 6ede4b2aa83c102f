use crate::error::{HnnError, Result};
use crate::normal_form::NormalForm;
use crate::presentation::HnnPresentation;
use crate::word::Sign;

/// Enumerates normal forms `s₁t^{ε₁}⋯s_nt^{ε_n}·e` with `n ≤ max_tau_length`
/// and end letter `e` from a fixed finite list, shortest first and then
/// lexicographically in `letter_order` (prefix first, end letter last).
/// With `epsilon_excluded = Some(ε)` the set `T_ε†` (type `ε`, trivial
/// initial letter) is skipped.
#[derive(Debug, Clone)]
pub struct ConjugatorEnumerator<E> {
    pub epsilon_excluded: Option<Sign>,
    pub max_tau_length: usize,
    pub end_letter_set: Vec<E>,
    /// Prefix letters `(s, ε)` with `s ∈ S_{-ε}`, in enumeration order.
    pub letter_order: Vec<(E, Sign)>,
}

impl<E: Clone + PartialEq> ConjugatorEnumerator<E> {
    /// The default enumerator: letters with exponent `+1` before `-1`, each
    /// group in the instance's representative order; end letters are `S_{-1}`
    /// when `H` is normal in `G` and the instance's base ball otherwise,
    /// identity first.
    pub fn for_presentation<P>(pres: &P, epsilon_excluded: Option<Sign>, max_tau_length: usize) -> Result<Self>
    where
        P: HnnPresentation<Elt = E> + ?Sized,
    {
        let missing = || HnnError::Unsupported("conjugator enumeration needs finite coset representative lists".into());
        let mut letter_order = Vec::new();
        for sign in [Sign::Pos, Sign::Neg] {
            for s in pres.reps(-sign).ok_or_else(missing)? {
                letter_order.push((s, sign));
            }
        }
        let ends = if pres.flags().h_normal_in_g {
            pres.reps_h().ok_or_else(missing)?
        } else {
            pres.base_ball().ok_or_else(|| {
                HnnError::Unsupported("H is not normal and the instance has no finite base ball".into())
            })?
        };
        let id = pres.identity();
        let mut end_letter_set = vec![id.clone()];
        end_letter_set.extend(ends.into_iter().filter(|e| *e != id));
        Ok(ConjugatorEnumerator { epsilon_excluded, max_tau_length, end_letter_set, letter_order })
    }

    pub fn with_end_letters(mut self, end_letter_set: Vec<E>) -> Self {
        self.end_letter_set = end_letter_set;
        self
    }

    /// All admissible prefixes of exactly `n` stable letters, in order.
    pub fn prefixes_of_length<P>(&self, pres: &P, n: usize) -> Vec<Vec<(E, Sign)>>
    where
        P: HnnPresentation<Elt = E> + ?Sized,
    {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(n);
        self.extend(pres, n, &mut current, &mut out);
        out
    }

    fn extend<P>(&self, pres: &P, n: usize, current: &mut Vec<(E, Sign)>, out: &mut Vec<Vec<(E, Sign)>>)
    where
        P: HnnPresentation<Elt = E> + ?Sized,
    {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for (s, e) in &self.letter_order {
            let trivial = pres.is_identity(s);
            match current.last() {
                None if trivial && self.epsilon_excluded == Some(*e) => continue,
                Some((_, prev)) if trivial && prev != e => continue,
                _ => {}
            }
            current.push((s.clone(), *e));
            self.extend(pres, n, current, out);
            current.pop();
        }
    }

    /// All conjugators of exactly `n` stable letters, in order.
    pub fn of_length<P>(&self, pres: &P, n: usize) -> Vec<NormalForm<E>>
    where
        P: HnnPresentation<Elt = E> + ?Sized,
    {
        let mut out = Vec::new();
        for prefix in self.prefixes_of_length(pres, n) {
            for end in &self.end_letter_set {
                out.push(NormalForm { prefix: prefix.clone(), end_letter: end.clone() });
            }
        }
        out
    }

    /// Every conjugator up to the bound, in enumeration order.
    pub fn all<P>(&self, pres: &P) -> Vec<NormalForm<E>>
    where
        P: HnnPresentation<Elt = E> + ?Sized,
    {
        (0..=self.max_tau_length).flat_map(|n| self.of_length(pres, n)).collect()
    }
}
