use std::cmp::Ordering;
use std::fmt;

use crate::error::{HnnError, Result};

/// Maximum number of `(i, j)` pairs a packed sequence can hold.
pub const MAX_PAIRS: usize = 64;

/// A non-empty sequence `(i₁,j₁,…,i_n,j_n)` of bit pairs in which no
/// adjacent window `(j_k, i_{k+1}, j_{k+1})` equals `(0,0,1)` or `(1,0,0)`.
///
/// Pair `k` (0-based) is packed at bits `2k` (the `i` bit) and `2k+1`
/// (the `j` bit). Ordering is by length, then lexicographic on the bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct XSeq {
    len: u8,
    bits: u128,
}

/// Why a pair list is not in `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XSeqViolation {
    Empty,
    TooLong,
    /// The forbidden window starts at pair `k` (1-based, as in `j_k`).
    ForbiddenWindow { k: usize },
}

impl XSeq {
    pub fn validate(pairs: &[(u8, u8)]) -> std::result::Result<XSeq, XSeqViolation> {
        if pairs.is_empty() {
            return Err(XSeqViolation::Empty);
        }
        if pairs.len() > MAX_PAIRS {
            return Err(XSeqViolation::TooLong);
        }
        let mut bits = 0u128;
        for (k, &(i, j)) in pairs.iter().enumerate() {
            bits |= u128::from(i & 1) << (2 * k);
            bits |= u128::from(j & 1) << (2 * k + 1);
        }
        let x = XSeq { len: pairs.len() as u8, bits };
        for k in 1..x.len() {
            if !window_allowed(x.pair(k - 1).1, x.pair(k)) {
                return Err(XSeqViolation::ForbiddenWindow { k });
            }
        }
        Ok(x)
    }

    /// Build from a flat bit list `i₁,j₁,…`.
    pub fn from_bits(flat: &[u8]) -> Result<XSeq> {
        let text = format!("{flat:?}");
        if !flat.len().is_multiple_of(2) || flat.iter().any(|&b| b > 1) {
            return Err(HnnError::parse(&text, "expected an even number of 0/1 entries"));
        }
        let pairs: Vec<(u8, u8)> = flat.chunks(2).map(|c| (c[0], c[1])).collect();
        XSeq::validate(&pairs).map_err(|v| HnnError::parse(&text, format!("not in X: {v:?}")))
    }

    pub fn len(&self) -> usize {
        usize::from(self.len)
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Pair `k`, 0-based.
    pub fn pair(&self, k: usize) -> (u8, u8) {
        debug_assert!(k < self.len());
        let b = (self.bits >> (2 * k)) & 0b11;
        ((b & 1) as u8, (b >> 1) as u8)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u8, u8)> + '_ {
        (0..self.len()).map(|k| self.pair(k))
    }

    /// Index of the first pair in the sector order `(0,0),(1,0),(0,1),(1,1)`.
    pub fn sector(&self) -> usize {
        (self.bits & 0b11) as usize
    }

    /// `self` is a prefix of `other` (pairwise, possibly equal).
    pub fn is_prefix_of(&self, other: &XSeq) -> bool {
        self.len <= other.len && (other.bits & mask(self.len())) == self.bits
    }

    /// Length of the longest common pair-prefix.
    pub fn common_prefix(&self, other: &XSeq) -> usize {
        let n = self.len.min(other.len) as usize;
        (0..n).take_while(|&k| self.pair(k) == other.pair(k)).count()
    }

    /// Flip the `i` bit of pair `k` (0-based).
    pub(crate) fn flip_i(&self, k: usize) -> XSeq {
        XSeq { len: self.len, bits: self.bits ^ (1u128 << (2 * k)) }
    }

    /// `(i, j, self…)`. Panics when the result would not fit; callers only
    /// prepend pairs the window rule allows.
    pub(crate) fn prepend(&self, pair: (u8, u8)) -> XSeq {
        assert!(self.len() < MAX_PAIRS, "X-sequence exceeds {MAX_PAIRS} pairs");
        debug_assert!(window_allowed(pair.1, self.pair(0)));
        XSeq {
            len: self.len + 1,
            bits: (self.bits << 2) | u128::from(pair.0) | (u128::from(pair.1) << 1),
        }
    }

    /// Drop the first pair; `None` for length-1 sequences.
    pub(crate) fn tail(&self) -> Option<XSeq> {
        (self.len > 1).then(|| XSeq { len: self.len - 1, bits: self.bits >> 2 })
    }

    /// Prefix consisting of the first `k` pairs.
    pub fn truncate(&self, k: usize) -> XSeq {
        assert!(k >= 1 && k <= self.len());
        XSeq { len: k as u8, bits: self.bits & mask(k) }
    }

    /// Every element of `X` of length exactly `n`, in canonical order.
    pub fn all_of_length(n: usize) -> Vec<XSeq> {
        assert!((1..=MAX_PAIRS).contains(&n));
        let mut out: Vec<XSeq> = PAIRS.iter().map(|&p| XSeq::validate(&[p]).unwrap()).collect();
        for _ in 1..n {
            out = out
                .iter()
                .flat_map(|x| {
                    let j = x.pair(x.len() - 1).1;
                    PAIRS.iter().filter(move |p| window_allowed(j, **p)).map(move |&p| x.append(p))
                })
                .collect();
        }
        out.sort();
        out
    }

    /// All elements of `X` with the given first pair and length `≤ max_len`.
    pub fn sector_upto(sector: (u8, u8), max_len: usize) -> Vec<XSeq> {
        (1..=max_len)
            .flat_map(XSeq::all_of_length)
            .filter(|x| x.pair(0) == sector)
            .collect()
    }

    fn append(&self, pair: (u8, u8)) -> XSeq {
        let k = self.len();
        XSeq {
            len: self.len + 1,
            bits: self.bits | (u128::from(pair.0) << (2 * k)) | (u128::from(pair.1) << (2 * k + 1)),
        }
    }
}

/// The four pairs in sector order.
pub const PAIRS: [(u8, u8); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

/// Whether `(j_k, i_{k+1}, j_{k+1})` avoids the two forbidden windows.
pub fn window_allowed(j_prev: u8, next: (u8, u8)) -> bool {
    !matches!((j_prev, next.0, next.1), (0, 0, 1) | (1, 0, 0))
}

fn mask(pairs: usize) -> u128 {
    if pairs >= MAX_PAIRS {
        u128::MAX
    } else {
        (1u128 << (2 * pairs)) - 1
    }
}

impl Ord for XSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for k in 0..self.len() {
                let (a, b) = (self.pair(k), other.pair(k));
                let ord = a.cmp(&b);
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for XSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for XSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs().map(|(i, j)| format!("{i},{j}")).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for XSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{self}")
    }
}
