//! Britton reduction by pinch removal, reducedness, and the quick
//! parity/majority type check that works on raw words.

use crate::error::Result;
use crate::presentation::HnnPresentation;
use crate::word::{Letter, Sign, Word};

/// Which pinch to remove first when several are available.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PinchStrategy {
    Leftmost,
    Rightmost,
}

/// `g₁ t^{ε₁} g₂ ⋯ t^{ε_n} g_{n+1}` with merged base letters; missing base
/// letters are the identity.
struct Alternating<E> {
    bases: Vec<E>,
    signs: Vec<Sign>,
}

impl<E: Clone> Alternating<E> {
    fn from_word<P: HnnPresentation<Elt = E> + ?Sized>(pres: &P, w: &Word<E>) -> Self {
        let mut bases = vec![pres.identity()];
        let mut signs = Vec::new();
        for l in w.letters() {
            match l {
                Letter::Base(g) => {
                    let last = bases.last_mut().expect("bases is never empty");
                    *last = pres.multiply(last, g);
                }
                Letter::Stable(s) => {
                    signs.push(*s);
                    bases.push(pres.identity());
                }
            }
        }
        Alternating { bases, signs }
    }

    /// A pinch sits between stable letters `i` and `i+1`:
    /// `t^{ε_i} g_{i+1} t^{-ε_i}` with `g_{i+1} ∈ H_{ε_i}`.
    fn is_pinch<P: HnnPresentation<Elt = E> + ?Sized>(&self, pres: &P, i: usize) -> bool {
        self.signs[i + 1] == -self.signs[i] && pres.in_subgroup(self.signs[i], &self.bases[i + 1])
    }

    fn find_pinch<P: HnnPresentation<Elt = E> + ?Sized>(
        &self,
        pres: &P,
        strategy: PinchStrategy,
    ) -> Option<usize> {
        let n = self.signs.len();
        if n < 2 {
            return None;
        }
        match strategy {
            PinchStrategy::Leftmost => (0..n - 1).find(|&i| self.is_pinch(pres, i)),
            PinchStrategy::Rightmost => (0..n - 1).rev().find(|&i| self.is_pinch(pres, i)),
        }
    }

    fn collapse<P: HnnPresentation<Elt = E> + ?Sized>(&mut self, pres: &P, i: usize) -> Result<()> {
        let moved = pres.push_through(-self.signs[i], &self.bases[i + 1])?;
        let right = self.bases.remove(i + 2);
        self.bases.remove(i + 1);
        let merged = pres.multiply(&pres.multiply(&self.bases[i], &moved), &right);
        self.bases[i] = merged;
        self.signs.drain(i..i + 2);
        Ok(())
    }

    fn into_word<P: HnnPresentation<Elt = E> + ?Sized>(self, pres: &P) -> Word<E> {
        let mut w = Word::empty();
        for (i, g) in self.bases.into_iter().enumerate() {
            if !pres.is_identity(&g) {
                w.push(Letter::Base(g));
            }
            if let Some(s) = self.signs.get(i) {
                w.push(Letter::Stable(*s));
            }
        }
        w
    }
}

/// Remove pinches until none remain, using the given strategy.
pub fn britton_reduce_with<P>(
    pres: &P,
    w: &Word<P::Elt>,
    strategy: PinchStrategy,
) -> Result<Word<P::Elt>>
where
    P: HnnPresentation + ?Sized,
{
    let mut alt = Alternating::from_word(pres, w);
    while let Some(i) = alt.find_pinch(pres, strategy) {
        alt.collapse(pres, i)?;
    }
    Ok(alt.into_word(pres))
}

/// Leftmost-pinch Britton reduction.
pub fn britton_reduce<P>(pres: &P, w: &Word<P::Elt>) -> Result<Word<P::Elt>>
where
    P: HnnPresentation + ?Sized,
{
    britton_reduce_with(pres, w, PinchStrategy::Leftmost)
}

/// True iff the word (after merging adjacent base letters) has no pinch.
/// A word without stable letters is reduced iff it is not the identity.
pub fn is_reduced<P>(pres: &P, w: &Word<P::Elt>) -> bool
where
    P: HnnPresentation + ?Sized,
{
    let alt = Alternating::from_word(pres, w);
    if alt.signs.is_empty() {
        return !pres.is_identity(&alt.bases[0]);
    }
    (0..alt.signs.len() - 1).all(|i| !alt.is_pinch(pres, i))
}

/// What can be said about a raw word without reducing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuickType {
    /// `Some(true)` when the stable-letter count is odd; otherwise unknown.
    pub not_in_g: Option<bool>,
    /// The type, when a leading run of equal exponents is a strict majority.
    pub ty: Option<Sign>,
}

pub fn quick_type_check<E: Clone>(w: &Word<E>) -> QuickType {
    let exps = w.exponents();
    let n = exps.len();
    let not_in_g = (n % 2 == 1).then_some(true);
    let ty = exps.first().and_then(|&first| {
        let run = exps.iter().take_while(|&&e| e == first).count();
        (2 * run > n).then_some(first)
    });
    QuickType { not_in_g, ty }
}
