use std::fmt;

use super::xseq::XSeq;

/// Which relation set the rewriting uses. `DropR3Flip` replaces the
/// prefix-conjugation bit flip by plain commutation; it exists as a
/// negative control for the lemma suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RuleVariant {
    #[default]
    Standard,
    DropR3Flip,
}

/// `h(z) h(x) h(z)` for `ℓ(z) < ℓ(x)`: flips `i_{k+1}` of `x` when `z` is
/// the length-`k` prefix of `x` and `j_k = j_{k+1}`, otherwise returns `x`.
pub fn conjugate_longer(z: &XSeq, x: &XSeq, variant: RuleVariant) -> XSeq {
    let k = z.len();
    debug_assert!(k < x.len());
    if variant == RuleVariant::Standard && z.is_prefix_of(x) && x.pair(k - 1).1 == x.pair(k).1 {
        x.flip_i(k)
    } else {
        *x
    }
}

/// Canonical element of the subgroup generated by the `h(x)`: per sector
/// (first pair, ordered `(0,0),(1,0),(0,1),(1,1)`), a strictly ascending
/// list of generators. The element is the product of the lists in order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HBarElt {
    sectors: [Vec<XSeq>; 4],
}

impl HBarElt {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(x: XSeq) -> Self {
        let mut out = Self::default();
        out.sectors[x.sector()].push(x);
        out
    }

    /// Build from per-sector lists, checking the canonical-form contract.
    pub fn from_sectors(sectors: [Vec<XSeq>; 4]) -> Option<Self> {
        for (s, list) in sectors.iter().enumerate() {
            if list.iter().any(|x| x.sector() != s) || list.windows(2).any(|w| w[0] >= w[1]) {
                return None;
            }
        }
        Some(HBarElt { sectors })
    }

    pub fn is_identity(&self) -> bool {
        self.sectors.iter().all(Vec::is_empty)
    }

    pub fn sector(&self, s: usize) -> &[XSeq] {
        &self.sectors[s]
    }

    /// Number of generators in the canonical word.
    pub fn len(&self) -> usize {
        self.sectors.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    /// Generators in canonical product order.
    pub fn generators(&self) -> impl DoubleEndedIterator<Item = &XSeq> + '_ {
        self.sectors.iter().flatten()
    }

    /// Right multiplication by `h(z)`.
    pub fn mul_generator(&mut self, z: &XSeq, variant: RuleVariant) {
        let list = &mut self.sectors[z.sector()];
        // h(x) h(z) = h(z) h(σ_z(x)) for every longer x, so moving h(z) to
        // its sorted slot rewrites all longer generators of the sector.
        let start = list.partition_point(|x| x.len() <= z.len());
        let mut touched = false;
        for x in &mut list[start..] {
            let y = conjugate_longer(z, x, variant);
            touched |= y != *x;
            *x = y;
        }
        if touched {
            list[start..].sort_unstable();
        }
        match list[..start].binary_search(z) {
            Ok(pos) => {
                list.remove(pos);
            }
            Err(pos) => list.insert(pos, *z),
        }
    }

    pub fn multiply(&self, other: &Self, variant: RuleVariant) -> Self {
        let mut out = self.clone();
        for z in other.generators() {
            out.mul_generator(z, variant);
        }
        out
    }

    pub fn inverse(&self, variant: RuleVariant) -> Self {
        let mut out = Self::default();
        for z in self.generators().rev() {
            out.mul_generator(z, variant);
        }
        out
    }

    /// Conjugation by `g_j`: flips `i₁` of every generator whose `j₁ = j`.
    pub fn conjugate_by_g(&self, j: u8) -> Self {
        let mut out = self.clone();
        let (a, b) = (2 * usize::from(j), 2 * usize::from(j) + 1);
        out.sectors.swap(a, b);
        for s in [a, b] {
            for x in &mut out.sectors[s] {
                *x = x.flip_i(0);
            }
        }
        out
    }

    /// Keep only the generators of sector `s`.
    pub fn project(&self, s: usize) -> Self {
        let mut out = Self::default();
        out.sectors[s] = self.sectors[s].clone();
        out
    }

    /// Whether every generator lies in sector `s`.
    pub fn within_sector(&self, s: usize) -> bool {
        self.sectors.iter().enumerate().all(|(t, list)| t == s || list.is_empty())
    }
}

impl fmt::Debug for HBarElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.generators()).finish()
    }
}
