use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::enumerate::ConjugatorEnumerator;
use super::membership::{quasi_kernel_test, verify_ejection};
use crate::error::Result;
use crate::instances::example5::{Example5, ExampleGElt, RuleVariant, XSeq, PAIRS};
use crate::normal_form::{normal_form, normal_form_of_product, word_stats};
use crate::presentation::HnnPresentation;
use crate::reduce::is_reduced;
use crate::word::{format_word, Letter, Sign, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Longest generator index checked by the reducer identity.
    pub x_len: usize,
    /// Longest generator index checked for quasi-kernel survival.
    pub survival_x_len: usize,
    /// τ-length bound of the quasi-kernel enumerators.
    pub tau_length: usize,
    /// Depth `n` of the finite subgroup `G_n` whose elements must be ejected.
    pub ejection_depth: usize,
    /// Random pairs for the conjugation length formula.
    pub length_formula_pairs: usize,
    pub seed: u64,
    pub variant: RuleVariant,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            x_len: 4,
            survival_x_len: 3,
            tau_length: 4,
            ejection_depth: 2,
            length_formula_pairs: 1000,
            seed: 0x5eed,
            variant: RuleVariant::Standard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LedgerLine {
    pub lemma: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

impl fmt::Display for LedgerLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {:<22} {:>7} cases  {}", self.lemma, self.cases, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteLedger {
    pub lines: Vec<LedgerLine>,
}

impl SuiteLedger {
    pub fn passed(&self) -> bool {
        !self.lines.is_empty() && self.lines.iter().all(|l| l.passed)
    }

    pub fn line(&self, lemma: &str) -> Option<&LedgerLine> {
        self.lines.iter().find(|l| l.lemma == lemma)
    }
}

impl fmt::Display for SuiteLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

type Check = std::result::Result<(usize, String), String>;

/// Run the lemma checks in order, stopping at the first failure with its
/// counterexample in the ledger.
pub fn verify_example5_suite(config: &SuiteConfig) -> Result<SuiteLedger> {
    let e = Example5::with_variant(config.variant);
    let steps: [(&'static str, &dyn Fn() -> Result<Check>); 6] = [
        ("reducer-identity", &|| reducer_identity(&e, config.x_len)),
        ("quasi-kernel-survival", &|| survival(&e, config.survival_x_len, config.tau_length)),
        ("quasi-kernel-ejection", &|| ejection(&e, config.ejection_depth, config.tau_length)),
        ("conjugation-length", &|| length_formula(&e, config.length_formula_pairs, config.seed)),
        ("transition-table", &|| transition_table(&e)),
        ("local-finiteness", &|| local_finiteness(&e)),
    ];
    let mut ledger = SuiteLedger::default();
    for (lemma, run) in steps {
        let line = match run()? {
            Ok((cases, detail)) => LedgerLine { lemma, passed: true, cases, detail },
            Err(counterexample) => LedgerLine { lemma, passed: false, cases: 0, detail: counterexample },
        };
        let failed = !line.passed;
        ledger.lines.push(line);
        if failed {
            break;
        }
    }
    Ok(ledger)
}

fn xs_upto(n: usize) -> Vec<XSeq> {
    (1..=n).flat_map(XSeq::all_of_length).collect()
}

/// `θ` respects the prefix-conjugation relations among generators, then
/// `r(x)⁻¹h(x)r(x) = g_{i(x)}` with `r(x)` reduced and `r` injective.
fn reducer_identity(e: &Example5, x_len: usize) -> Result<Check> {
    let xs = xs_upto(x_len);
    let bad = xs.par_iter().find_map_first(|x| {
        for y in xs.iter().filter(|y| y.len() < x.len()) {
            let (hx, hy) = (ExampleGElt::h(*x), ExampleGElt::h(*y));
            let lhs = e.theta(&e.multiply(&e.multiply(&hy, &hx), &hy));
            let (ty, tx) = (e.theta(&hy), e.theta(&hx));
            let ok = match (lhs, ty, tx) {
                (Ok(l), Ok(ty), Ok(tx)) => l == e.multiply(&e.multiply(&ty, &tx), &ty),
                _ => false,
            };
            if !ok {
                return Some(format!(
                    "theta does not respect h(y) h(x) h(y) for y = {y}, x = {x}: reducer conjugation is not well defined"
                ));
            }
        }
        None
    });
    if let Some(msg) = bad {
        return Ok(Err(msg));
    }
    let mut seen = HashSet::new();
    for x in &xs {
        let (r, i) = e.reducer(x);
        if !is_reduced(e, &r) {
            return Ok(Err(format!("r{x} = {} is not reduced", format_word(e, &r))));
        }
        let nf = normal_form_of_product(e, &[&r.inverse(e), &Word::base(ExampleGElt::h(*x)), &r])?;
        if nf.length() != 0 || nf.end_letter != ExampleGElt::g(i) {
            return Ok(Err(format!(
                "r{x}^-1 h{x} r{x} = {} instead of g{i}",
                format_word(e, &nf.to_word())
            )));
        }
        if !seen.insert(normal_form(e, &r)?) {
            return Ok(Err(format!("r is not injective at {x}")));
        }
    }
    Ok(Ok((xs.len(), format!("all x with length <= {x_len}; r injective"))))
}

/// Generators of `H(0,0)` survive the `K_{-1}` test and those of `H(0,1)`
/// the `K_1` test.
fn survival(e: &Example5, x_len: usize, tau: usize) -> Result<Check> {
    let mut cases = 0;
    for (sector, sign) in [((0, 0), Sign::Neg), ((0, 1), Sign::Pos)] {
        let en = ConjugatorEnumerator::for_presentation(e, Some(sign), tau)?;
        let xs = XSeq::sector_upto(sector, x_len);
        let outcomes: Vec<_> = xs
            .par_iter()
            .map(|x| quasi_kernel_test(e, &ExampleGElt::h(*x), sign, &en).map(|o| (*x, o)))
            .collect::<Result<_>>()?;
        for (x, o) in outcomes {
            if let Some(w) = o.witness() {
                return Ok(Err(format!("h{x} ejected from K_{sign} by {}", format_word(e, w))));
            }
            cases += 1;
        }
    }
    Ok(Ok((cases, format!("sectors (0,0) and (0,1), length <= {x_len}, tau-length <= {tau}"))))
}

/// The conjugator built from the reducer of the shortest generator outside
/// sector `(0,0)`.
pub fn constructive_ejector(e: &Example5, g: &ExampleGElt) -> Option<Word<ExampleGElt>> {
    if g.e1() == 1 {
        return Some(Word::empty());
    }
    if g.e0() == 1 {
        return Some(Word::new(vec![Letter::Base(ExampleGElt::g(0)), Letter::Stable(Sign::Neg)]));
    }
    let x = g.hbar().generators().filter(|x| x.sector() != 0).min()?;
    let (r, m) = e.reducer(x);
    let tail = if m == 0 {
        vec![Letter::Base(ExampleGElt::g(0)), Letter::Stable(Sign::Neg)]
    } else {
        vec![Letter::Base(ExampleGElt::g(1)), Letter::Stable(Sign::Pos)]
    };
    Some(r.concat(&Word::new(tail)))
}

fn ejects_outside_t_dagger(e: &Example5, g: &ExampleGElt, r: &Word<ExampleGElt>) -> Result<bool> {
    let stats = word_stats(e, &normal_form(e, r)?);
    Ok(!stats.in_t_dagger(Sign::Neg) && verify_ejection(e, &Word::base(g.clone()), r)?)
}

/// Every element of `G_n` outside `⟨H(0,0)⟩` is ejected from the `K_{-1}`
/// test, preferably by the constructive conjugator.
fn ejection(e: &Example5, depth: usize, tau: usize) -> Result<Check> {
    let en = ConjugatorEnumerator::for_presentation(e, Some(Sign::Neg), tau)?;
    let elements: Vec<ExampleGElt> = e
        .gn_canonical_elements(depth)
        .into_iter()
        .filter(|g| !(g.e0() == 0 && g.e1() == 0 && g.hbar().within_sector(0)))
        .collect();
    let results: Vec<Result<Option<bool>>> = elements
        .par_iter()
        .map(|g| {
            if let Some(r) = constructive_ejector(e, g) {
                if normal_form(e, &r)?.length() <= tau && ejects_outside_t_dagger(e, g, &r)? {
                    return Ok(Some(true));
                }
            }
            let o = quasi_kernel_test(e, g, Sign::Neg, &en)?;
            Ok(o.witness().map(|_| false))
        })
        .collect();
    let mut fallback = 0;
    for (g, res) in elements.iter().zip(results) {
        match res? {
            Some(true) => {}
            Some(false) => fallback += 1,
            None => return Ok(Err(format!("{} survives the K_-1 test up to tau-length {tau}", e.format_elt(g)))),
        }
    }
    Ok(Ok((
        elements.len(),
        format!("G_{depth} outside <H(0,0)>; constructive witness used {} times", elements.len() - fallback),
    )))
}

fn random_x(rng: &mut ChaCha8Rng, max_len: usize) -> XSeq {
    let len = rng.gen_range(1..=max_len);
    let mut pairs = vec![PAIRS[rng.gen_range(0..4)]];
    while pairs.len() < len {
        let j = pairs.last().expect("non-empty").1;
        let allowed: Vec<(u8, u8)> =
            PAIRS.iter().copied().filter(|&p| crate::instances::example5::window_allowed(j, p)).collect();
        pairs.push(allowed[rng.gen_range(0..allowed.len())]);
    }
    XSeq::validate(&pairs).expect("constructed inside X")
}

/// `r(c)⁻¹h(t)r(c) = h(t')` with `ℓ(t') = ℓ(t) + ℓ(c) - 2·lcp(t, c)` whenever
/// `t` is not a prefix of `c`.
fn length_formula(e: &Example5, pairs: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut cross_sector = 0;
    while done < pairs {
        let c = random_x(&mut rng, 5);
        let t = if rng.gen_bool(0.5) {
            let keep = rng.gen_range(1..=c.len());
            let tail = random_x(&mut rng, 4);
            let mut p: Vec<(u8, u8)> = c.truncate(keep).pairs().collect();
            p.extend(tail.pairs());
            match XSeq::validate(&p) {
                Ok(t) => t,
                Err(_) => continue,
            }
        } else {
            random_x(&mut rng, 5)
        };
        if t.is_prefix_of(&c) {
            continue;
        }
        let (r, _) = e.reducer(&c);
        let nf = normal_form_of_product(e, &[&r.inverse(e), &Word::base(ExampleGElt::h(t)), &r])?;
        let lcp = t.common_prefix(&c);
        let expected = t.len() + c.len() - 2 * lcp;
        let end = &nf.end_letter;
        let got = match end.hbar().generators().collect::<Vec<_>>().as_slice() {
            [x] if nf.length() == 0 && end.e0() == 0 && end.e1() == 0 => Some(x.len()),
            _ => None,
        };
        if got != Some(expected) {
            return Ok(Err(format!(
                "r{c}^-1 h{t} r{c} = {} but expected a generator of length {expected}",
                format_word(e, &nf.to_word())
            )));
        }
        if t.pair(0) != c.pair(0) {
            cross_sector += 1;
        }
        done += 1;
    }
    Ok(Ok((done, format!("seed {seed:#x}; {cross_sector} pairs with distinct first tuples"))))
}

/// One reducer letter for first tuple `a` applied to `h(b, …)` with `b ≠ a`
/// gives a generator one tuple longer with first tuple `f`.
pub const TRANSITIONS: [((u8, u8), (u8, u8), (u8, u8)); 12] = [
    ((1, 0), (0, 0), (0, 1)),
    ((0, 1), (0, 0), (0, 0)),
    ((1, 1), (0, 0), (0, 0)),
    ((0, 0), (0, 1), (0, 1)),
    ((1, 0), (0, 1), (0, 1)),
    ((1, 1), (0, 1), (0, 0)),
    ((0, 0), (1, 0), (0, 1)),
    ((0, 1), (1, 0), (0, 0)),
    ((1, 1), (1, 0), (0, 0)),
    ((0, 0), (1, 1), (0, 1)),
    ((0, 1), (1, 1), (0, 0)),
    ((1, 0), (1, 1), (0, 1)),
];

fn transition_table(e: &Example5) -> Result<Check> {
    let mut cases = 0;
    for (a, b, f) in TRANSITIONS {
        let (r, _) = e.reducer(&XSeq::validate(&[a]).expect("length 1"));
        for t in xs_upto(3).into_iter().filter(|t| t.pair(0) == b) {
            let nf = normal_form_of_product(e, &[&r.inverse(e), &Word::base(ExampleGElt::h(t)), &r])?;
            let end = &nf.end_letter;
            let gens: Vec<&XSeq> = end.hbar().generators().collect();
            let ok = nf.length() == 0
                && end.e0() == 0
                && end.e1() == 0
                && gens.len() == 1
                && gens[0].pair(0) == f
                && gens[0].len() == t.len() + 1;
            if !ok {
                return Ok(Err(format!(
                    "cell ({a:?}, {b:?}): h{t} goes to {} instead of a generator starting with {f:?}",
                    format_word(e, &nf.to_word())
                )));
            }
            cases += 1;
        }
    }
    Ok(Ok((cases, "12 cells, conjugated generators of length <= 3".into())))
}

fn local_finiteness(e: &Example5) -> Result<Check> {
    let sector: Vec<ExampleGElt> = XSeq::sector_upto((0, 0), 2).into_iter().map(ExampleGElt::h).collect();
    let sector_size = e.closure(&sector, 1 << 12)?.len();
    if sector_size != 16 {
        return Ok(Err(format!("sector (0,0) depth-2 closure has {sector_size} elements, expected 16")));
    }
    let g1 = e.enumerate_gn(1, 1 << 12)?;
    if g1.len() != 64 {
        return Ok(Err(format!("|G_1| = {}, expected 64", g1.len())));
    }
    let (collisions, formal) = canonical_collisions(e, 1);
    if collisions != 0 {
        return Ok(Err(format!("{collisions} collisions among {formal} generator subsets")));
    }
    let direct: HashSet<ExampleGElt> = e.gn_canonical_elements(1).into_iter().collect();
    if direct != g1.into_iter().collect::<HashSet<_>>() {
        return Ok(Err("closure of G_1 differs from the canonical-form enumeration".into()));
    }
    Ok(Ok((3, "sector closure 16, |G_1| = 64, zero canonical-form collisions".into())))
}

/// Multiply out every subset product `g₀^a g₁^b Π h(x)` (`ℓ(x) ≤ n`) in a
/// shuffled order and count coinciding canonical forms. Returns
/// `(collisions, subsets)`.
pub fn canonical_collisions(e: &Example5, n: usize) -> (usize, usize) {
    let gens: Vec<XSeq> = (1..=n).flat_map(XSeq::all_of_length).collect();
    let total = 4usize << gens.len();
    let mut seen = HashSet::with_capacity(total);
    for mask in 0u64..(1u64 << gens.len()) {
        for ab in 0..4u8 {
            let mut g = ExampleGElt::identity();
            // descending order exercises the prefix-conjugation rewriting
            for (b, x) in gens.iter().enumerate().rev() {
                if mask >> b & 1 == 1 {
                    g = e.mul_h(&g, x);
                }
            }
            if ab & 1 == 1 {
                g = e.multiply(&ExampleGElt::g(0), &g);
            }
            if ab & 2 == 2 {
                g = e.multiply(&g, &ExampleGElt::g(1));
            }
            seen.insert(g);
        }
    }
    (total - seen.len(), total)
}
