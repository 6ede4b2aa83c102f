//! Letters and words over a base group plus the stable letter `t`.

use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::presentation::HnnPresentation;

/// Exponent of a stable letter, and the `±1` labels used for types,
/// directions and the two subgroups `H_{-1} = H`, `H_1 = θ(H)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-1")]
    Neg,
    #[serde(rename = "1")]
    Pos,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Neg, Sign::Pos];

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Pos => 1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Pos),
            -1 => Some(Sign::Neg),
            _ => None,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Sign::Neg => 0,
            Sign::Pos => 1,
        }
    }

    /// Token used in the word syntax: `t` for τ, `T` for τ⁻¹.
    pub fn token(self) -> &'static str {
        match self {
            Sign::Pos => "t",
            Sign::Neg => "T",
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Pos => Sign::Neg,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.as_i8())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter<E> {
    Base(E),
    Stable(Sign),
}

/// A finite, possibly unreduced, product of letters. Words are values:
/// every rewriting operation returns a new word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word<E> {
    letters: Vec<Letter<E>>,
}

impl<E> Default for Word<E> {
    fn default() -> Self {
        Word { letters: Vec::new() }
    }
}

impl<E: Clone> Word<E> {
    pub fn new(letters: Vec<Letter<E>>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn base(g: E) -> Self {
        Word::new(vec![Letter::Base(g)])
    }

    pub fn stable(sign: Sign) -> Self {
        Word::new(vec![Letter::Stable(sign)])
    }

    pub fn letters(&self) -> &[Letter<E>] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter<E>> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: Letter<E>) {
        self.letters.push(letter);
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word<E>) -> Word<E> {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }
    }

    /// Stable exponents in order of appearance.
    pub fn exponents(&self) -> Vec<Sign> {
        self.letters
            .iter()
            .filter_map(|l| match l {
                Letter::Stable(s) => Some(*s),
                Letter::Base(_) => None,
            })
            .collect()
    }

    pub fn stable_count(&self) -> usize {
        self.letters
            .iter()
            .filter(|l| matches!(l, Letter::Stable(_)))
            .count()
    }

    /// The formal inverse: reversed order, every letter inverted.
    pub fn inverse<P>(&self, pres: &P) -> Word<E>
    where
        P: HnnPresentation<Elt = E> + ?Sized,
    {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| match l {
                Letter::Base(g) => Letter::Base(pres.invert(g)),
                Letter::Stable(s) => Letter::Stable(-*s),
            })
            .collect();
        Word { letters }
    }
}

impl<E: Clone> FromIterator<Letter<E>> for Word<E> {
    fn from_iter<I: IntoIterator<Item = Letter<E>>>(iter: I) -> Self {
        Word::new(iter.into_iter().collect())
    }
}

/// Parse a whitespace-separated token list. `t`/`T` are the stable letter
/// and its inverse; every other token goes to the instance's element parser.
pub fn parse_word<P>(pres: &P, text: &str) -> Result<Word<P::Elt>>
where
    P: HnnPresentation + ?Sized,
{
    text.split_whitespace()
        .map(|tok| match tok {
            "t" => Ok(Letter::Stable(Sign::Pos)),
            "T" => Ok(Letter::Stable(Sign::Neg)),
            other => pres.parse_elt(other).map(Letter::Base),
        })
        .collect::<Result<Vec<_>>>()
        .map(Word::new)
}

/// Render a word in the token syntax accepted by [`parse_word`]. Identity
/// base letters are skipped; the empty product renders as `1`.
pub fn format_word<P>(pres: &P, word: &Word<P::Elt>) -> String
where
    P: HnnPresentation + ?Sized,
{
    let tokens: Vec<String> = word
        .letters()
        .iter()
        .filter_map(|l| match l {
            Letter::Stable(s) => Some(s.token().to_string()),
            Letter::Base(g) if pres.is_identity(g) => None,
            Letter::Base(g) => Some(pres.format_elt(g)),
        })
        .collect();
    if tokens.is_empty() {
        pres.format_elt(&pres.identity())
    } else {
        tokens.join(" ")
    }
}
