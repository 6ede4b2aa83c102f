//! Unique normal forms `s₁t^{ε₁}⋯s_nt^{ε_n}g` and the letter statistics
//! (length, type, direction, initial and end letters) read off them.

use serde::Serialize;

use crate::error::{HnnError, Result};
use crate::presentation::HnnPresentation;
use crate::word::{Letter, Sign, Word};

/// Canonical representative of a group element. Each `s_i` lies in
/// `S_{-ε_i}`, and `s_i = 1` forces `ε_{i-1} = ε_i`; all subgroup
/// remainders have been pushed into `end_letter`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm<E> {
    pub prefix: Vec<(E, Sign)>,
    pub end_letter: E,
}

impl<E: Clone> NormalForm<E> {
    pub fn identity<P: HnnPresentation<Elt = E> + ?Sized>(pres: &P) -> Self {
        NormalForm {
            prefix: Vec::new(),
            end_letter: pres.identity(),
        }
    }

    /// Number of stable letters.
    pub fn length(&self) -> usize {
        self.prefix.len()
    }

    pub fn to_word(&self) -> Word<E> {
        let mut w = self.prefix_word();
        w.push(Letter::Base(self.end_letter.clone()));
        w
    }

    /// The prefix alone, i.e. the element with its end letter dropped.
    pub fn prefix_word(&self) -> Word<E> {
        let mut w = Word::empty();
        for (s, e) in &self.prefix {
            w.push(Letter::Base(s.clone()));
            w.push(Letter::Stable(*e));
        }
        w
    }

    /// Check conditions (ii) and (iii) through the coset-representative maps.
    pub fn validate<P: HnnPresentation<Elt = E> + ?Sized>(&self, pres: &P) -> Result<()>
    where
        E: PartialEq,
    {
        for (i, (s, e)) in self.prefix.iter().enumerate() {
            if pres.coset_rep(-*e, s) != *s {
                return Err(HnnError::OracleContract(format!(
                    "prefix letter {} is not a coset representative",
                    i + 1
                )));
            }
            if i > 0 && pres.is_identity(s) && self.prefix[i - 1].1 != *e {
                return Err(HnnError::OracleContract(format!(
                    "trivial letter {} between opposite exponents",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

/// Incremental left-to-right normalizer. Appending a stable letter either
/// cancels against the last prefix pair (a pinch) or splits the current end
/// letter as `s·h` and pushes `h` across the new stable letter.
pub struct Normalizer<'a, P: HnnPresentation + ?Sized> {
    pres: &'a P,
    prefix: Vec<(P::Elt, Sign)>,
    current: P::Elt,
}

impl<'a, P: HnnPresentation + ?Sized> Normalizer<'a, P> {
    pub fn new(pres: &'a P) -> Self {
        Normalizer {
            pres,
            prefix: Vec::new(),
            current: pres.identity(),
        }
    }

    pub fn from_normal_form(pres: &'a P, nf: NormalForm<P::Elt>) -> Self {
        Normalizer {
            pres,
            prefix: nf.prefix,
            current: nf.end_letter,
        }
    }

    pub fn push_base(&mut self, g: &P::Elt) {
        self.current = self.pres.multiply(&self.current, g);
    }

    pub fn push_stable(&mut self, sign: Sign) -> Result<()> {
        let pres = self.pres;
        if let Some((_, last)) = self.prefix.last() {
            let last = *last;
            if sign == -last && pres.in_subgroup(last, &self.current) {
                // t^{last} c t^{-last} with c ∈ H_{last}
                let moved = pres.push_through(-last, &self.current)?;
                let (s, _) = self.prefix.pop().expect("prefix is non-empty");
                self.current = pres.multiply(&s, &moved);
                return Ok(());
            }
        }
        let rep = pres.coset_rep(-sign, &self.current);
        let rest = pres.multiply(&pres.invert(&rep), &self.current);
        if !pres.in_subgroup(-sign, &rest) {
            return Err(HnnError::OracleContract(format!(
                "{} is not in the coset of its representative {}",
                pres.format_elt(&self.current),
                pres.format_elt(&rep)
            )));
        }
        self.current = pres.push_through(sign, &rest)?;
        self.prefix.push((rep, sign));
        Ok(())
    }

    pub fn push_letter(&mut self, letter: &Letter<P::Elt>) -> Result<()> {
        match letter {
            Letter::Base(g) => {
                self.push_base(g);
                Ok(())
            }
            Letter::Stable(s) => self.push_stable(*s),
        }
    }

    pub fn push_word(&mut self, w: &Word<P::Elt>) -> Result<()> {
        w.letters().iter().try_for_each(|l| self.push_letter(l))
    }

    pub fn finish(self) -> NormalForm<P::Elt> {
        NormalForm {
            prefix: self.prefix,
            end_letter: self.current,
        }
    }
}

/// The unique normal form of the element represented by `w`.
pub fn normal_form<P>(pres: &P, w: &Word<P::Elt>) -> Result<NormalForm<P::Elt>>
where
    P: HnnPresentation + ?Sized,
{
    let mut n = Normalizer::new(pres);
    n.push_word(w)?;
    Ok(n.finish())
}

/// Normal form of the product of several words.
pub fn normal_form_of_product<P>(pres: &P, parts: &[&Word<P::Elt>]) -> Result<NormalForm<P::Elt>>
where
    P: HnnPresentation + ?Sized,
{
    let mut n = Normalizer::new(pres);
    for w in parts {
        n.push_word(w)?;
    }
    Ok(n.finish())
}

/// Length, type, direction and initial/end-letter data of an element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LetterStats<E> {
    pub length: usize,
    #[serde(rename = "type")]
    pub ty: Option<Sign>,
    pub direction: Option<Sign>,
    pub initial_is_trivial: bool,
    pub end_letter: E,
    in_t_dagger: [bool; 2],
}

impl<E> LetterStats<E> {
    /// Membership in `T_ε†`: type `ε` with trivial initial letter.
    pub fn in_t_dagger(&self, sign: Sign) -> bool {
        self.in_t_dagger[sign.index()]
    }
}

pub fn word_stats<P>(pres: &P, nf: &NormalForm<P::Elt>) -> LetterStats<P::Elt>
where
    P: HnnPresentation + ?Sized,
{
    let ty = nf.prefix.first().map(|(_, e)| *e);
    let direction = nf.prefix.last().map(|(_, e)| *e);
    let initial_is_trivial = nf.prefix.first().is_none_or(|(s, _)| pres.is_identity(s));
    let mut in_t_dagger = [false; 2];
    if let Some(t) = ty {
        in_t_dagger[t.index()] = initial_is_trivial;
    }
    LetterStats {
        length: nf.prefix.len(),
        ty,
        direction,
        initial_is_trivial,
        end_letter: nf.end_letter.clone(),
        in_t_dagger,
    }
}
