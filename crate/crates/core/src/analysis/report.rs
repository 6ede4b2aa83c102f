use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::enumerate::ConjugatorEnumerator;
use super::membership::{kernel_test, quasi_kernel_test, verify_ejection, MembershipOutcome};
use crate::error::{HnnError, Result};
use crate::instances::bs::{bs_chain_cross_check, bs_verdict, BsVerdict, NotCSimpleReason};
use crate::instances::example5::{Example5, ExampleGElt, RuleVariant, XSeq};
use crate::instances::finite::{finite_verdict, FiniteVerdict};
use crate::instances::{BsInstance, FiniteHnnInstance, Instance};
use crate::presentation::HnnPresentation;
use crate::word::{format_word, Sign, Word};

pub const SCHEMA_VERSION: &str = "hnn-forge.report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    CSimpleCertified,
    CSimpleEvidence,
    NotCSimpleCertified,
    NotCSimpleEvidence,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UniqueTrace {
    UniqueTraceCertified,
    UniqueTraceEvidence,
    NoUniqueTraceCertified,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    pub claim: String,
    pub witness: String,
    pub citation: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub tau_length: usize,
    pub kernel_tau_length: usize,
    pub chain_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvidenceReport {
    pub schema_version: String,
    pub instance: String,
    pub verdict: Verdict,
    pub unique_trace: UniqueTrace,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
    pub bounds: Bounds,
    pub elapsed_ms: Option<u64>,
}

impl EvidenceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Parse and check a report against the pinned schema.
    pub fn from_json(text: &str) -> Result<Self> {
        let report: EvidenceReport = serde_json::from_str(text)
            .map_err(|e| HnnError::parse("report", e.to_string()))?;
        if report.schema_version != SCHEMA_VERSION {
            return Err(HnnError::parse(&report.schema_version, "unsupported report schema version"));
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeConfig {
    /// τ-length bound for quasi-kernel survival checks.
    pub tau_length: usize,
    /// τ-length bound for kernel ejection searches.
    pub kernel_tau_length: usize,
    /// Steps of the Baumslag–Solitar chain.
    pub chain_steps: usize,
    /// Record wall-clock time in the report.
    pub timing: bool,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        AnalyzeConfig { tau_length: 4, kernel_tau_length: 3, chain_steps: 10, timing: false }
    }
}

impl AnalyzeConfig {
    fn bounds(&self) -> Bounds {
        Bounds {
            tau_length: self.tau_length,
            kernel_tau_length: self.kernel_tau_length,
            chain_steps: self.chain_steps,
        }
    }
}

fn witness(claim: impl Into<String>, witness: impl Into<String>, citation: &str) -> Witness {
    Witness { claim: claim.into(), witness: witness.into(), citation: citation.into() }
}

/// Run the dispatch for the selected instance.
pub fn analyze(instance: &Instance, config: &AnalyzeConfig) -> Result<EvidenceReport> {
    let start = Instant::now();
    let mut report = match instance {
        Instance::Bs(b) => analyze_bs(b, config)?,
        Instance::Finite(f) => analyze_finite(f, config)?,
        Instance::Example5(e) if e.variant() == RuleVariant::Standard => analyze_example5(e, config)?,
        Instance::Example5(e) => analyze_unknown(e, config)?,
    };
    if config.timing {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn blank(instance: String, config: &AnalyzeConfig) -> EvidenceReport {
    EvidenceReport {
        schema_version: SCHEMA_VERSION.into(),
        instance,
        verdict: Verdict::Unknown,
        unique_trace: UniqueTrace::Unknown,
        witnesses: Vec::new(),
        notes: Vec::new(),
        bounds: config.bounds(),
        elapsed_ms: None,
    }
}

pub fn analyze_bs(inst: &BsInstance, config: &AnalyzeConfig) -> Result<EvidenceReport> {
    let mut r = blank(inst.descriptor(), config);
    match bs_verdict(inst, config.chain_steps.max(2))? {
        BsVerdict::NotCSimple(NotCSimpleReason::Solvable) => {
            r.verdict = Verdict::NotCSimpleCertified;
            r.unique_trace = UniqueTrace::NoUniqueTraceCertified;
            r.witnesses.push(witness(
                format!("BS({},{}) is solvable, hence amenable and not C*-simple", inst.m(), inst.n()),
                "min(|m|,|n|) = 1",
                "bs-closed-form",
            ));
        }
        BsVerdict::NotCSimple(NotCSimpleReason::NormalAbelianH) => {
            r.verdict = Verdict::NotCSimpleCertified;
            r.unique_trace = UniqueTrace::NoUniqueTraceCertified;
            r.witnesses.push(witness(
                "H = <g^m> is a normal abelian subgroup, contained in the kernel",
                format!("|m| = |n| = {}", inst.m().abs()),
                "bs-closed-form",
            ));
        }
        BsVerdict::CSimpleEvidence { direction, chain } => {
            let mismatch = bs_chain_cross_check(inst, direction, &chain[..chain.len().min(4)], 64)?;
            if let Some((step, a)) = mismatch {
                return Err(HnnError::OracleContract(format!(
                    "chain step {step} disagrees with normal forms at exponent {a}"
                )));
            }
            r.verdict = Verdict::CSimpleEvidence;
            r.unique_trace = UniqueTrace::UniqueTraceEvidence;
            let shown: Vec<String> = chain.iter().map(ToString::to_string).collect();
            r.witnesses.push(witness(
                format!(
                    "iterated conjugates of H meet G in strictly shrinking lattices (direction {direction}), so the quasi-kernel K_{direction} is trivial"
                ),
                format!("c = [{}]", shown.join(", ")),
                "bs-closed-form",
            ));
            r.witnesses.push(witness(
                "min(|m|,|n|) >= 2 and |m| != |n|",
                format!("m = {}, n = {}", inst.m(), inst.n()),
                "bs-closed-form",
            ));
            r.notes.push(
                "chain entries are exact lattice indices validated against normal forms; the closed-form containment exponent d*(n')^(i+1) is reached one step later than c_i".into(),
            );
        }
        BsVerdict::Undetermined => {
            r.notes.push("no chain direction diverged within the configured steps".into());
        }
    }
    Ok(r)
}

pub fn analyze_finite(inst: &FiniteHnnInstance, config: &AnalyzeConfig) -> Result<EvidenceReport> {
    let mut r = blank(inst.descriptor(), config);
    let fmt_set = |s: &std::collections::BTreeSet<usize>| {
        let labels: Vec<&str> = s.iter().map(|&a| inst.label(a)).collect();
        format!("{{{}}}", labels.join(", "))
    };
    match finite_verdict(inst)? {
        FiniteVerdict::CSimpleCertified { chain } => {
            r.verdict = Verdict::CSimpleCertified;
            r.unique_trace = UniqueTrace::UniqueTraceCertified;
            let k = chain.chain.iter().position(|h| h.len() == 1).unwrap_or(chain.chain.len() - 1);
            r.witnesses.push(witness(
                format!("the descending subgroup chain reaches the trivial group at k = {k}, so the kernel is trivial"),
                chain.chain.iter().map(fmt_set).collect::<Vec<_>>().join(" > "),
                "finite-intersection-equivalence",
            ));
        }
        FiniteVerdict::NotCSimpleCertified { kernel, chain } => {
            r.verdict = Verdict::NotCSimpleCertified;
            r.unique_trace = UniqueTrace::NoUniqueTraceCertified;
            r.witnesses.push(witness(
                "the descending subgroup chain stabilizes at a nontrivial finite normal subgroup of the kernel",
                format!(
                    "kernel = {} after {}",
                    fmt_set(&kernel),
                    chain.chain.iter().map(fmt_set).collect::<Vec<_>>().join(" > ")
                ),
                "finite-intersection-equivalence",
            ));
            let en = ConjugatorEnumerator::for_presentation(inst, None, config.kernel_tau_length)?;
            for &a in kernel.iter().filter(|&&a| !inst.is_identity(&a)) {
                if kernel_test(inst, &a, &en)?.is_inside() {
                    r.witnesses.push(witness(
                        format!("{} survives every conjugator of tau-length <= {}", inst.label(a), config.kernel_tau_length),
                        inst.label(a),
                        "kernel-definition",
                    ));
                }
            }
        }
    }
    Ok(r)
}

fn h(bits: &[u8]) -> ExampleGElt {
    ExampleGElt::h(XSeq::from_bits(bits).expect("valid literal"))
}

fn format_outcome(e: &Example5, o: &MembershipOutcome<ExampleGElt>) -> String {
    match o.witness() {
        Some(w) => format_word(e, w),
        None => format!("none within tau-length {} ({} conjugators)", o.bound_used, o.tested),
    }
}

pub fn analyze_example5(e: &Example5, config: &AnalyzeConfig) -> Result<EvidenceReport> {
    let mut r = blank(e.descriptor(), config);
    let mut quasi_ok = true;
    for (g, sign) in [(h(&[0, 0]), Sign::Neg), (h(&[0, 1]), Sign::Pos)] {
        let en = ConjugatorEnumerator::for_presentation(e, Some(sign), config.tau_length)?;
        let o = quasi_kernel_test(e, &g, sign, &en)?;
        quasi_ok &= o.is_inside();
        r.witnesses.push(witness(
            format!(
                "{} lies in K_{sign}: no conjugator outside T_{sign}-dagger moves it out of H",
                e.format_elt(&g)
            ),
            format_outcome(e, &o),
            "quasi-kernel-nontrivial",
        ));
    }
    let flags = e.flags();
    r.witnesses.push(witness(
        "G is locally finite, so the quasi-kernels are amenable",
        format!("h_amenable_certified = {}", flags.h_amenable_certified),
        "local-finiteness",
    ));

    let en = ConjugatorEnumerator::for_presentation(e, None, config.kernel_tau_length)?;
    let g1 = e.gn_canonical_elements(1);
    let outcomes: Vec<(ExampleGElt, MembershipOutcome<ExampleGElt>)> = g1
        .into_par_iter()
        .filter(|g| !g.is_identity())
        .map(|g| kernel_test(e, &g, &en).map(|o| (g, o)))
        .collect::<Result<_>>()?;
    let mut max_len = 0;
    let mut survivors = Vec::new();
    for (g, o) in &outcomes {
        match o.witness() {
            Some(w) => {
                if !verify_ejection(e, &Word::base(g.clone()), w)? {
                    return Err(HnnError::OracleContract(format!("ejection of {g:?} does not re-verify")));
                }
                max_len = max_len.max(w.stable_count());
            }
            None => survivors.push(e.format_elt(g)),
        }
    }
    for target in [h(&[0, 0]), h(&[0, 1])] {
        if let Some((_, o)) = outcomes.iter().find(|(g, _)| *g == target) {
            r.witnesses.push(witness(
                format!("{} is not in the kernel", e.format_elt(&target)),
                format_outcome(e, o),
                "kernel-definition",
            ));
        }
    }
    r.witnesses.push(witness(
        format!(
            "{} of {} non-identity elements of G_1 are ejected from H by some conjugator",
            outcomes.len() - survivors.len(),
            outcomes.len()
        ),
        if survivors.is_empty() {
            format!("longest witness has tau-length {max_len}")
        } else {
            format!("survivors: {}", survivors.join(", "))
        },
        "kernel-unique-trace",
    ));

    if quasi_ok && flags.h_amenable_certified {
        r.verdict = Verdict::NotCSimpleCertified;
        r.witnesses.push(witness(
            "nontrivial amenable quasi-kernels rule out C*-simplicity",
            "K_-1 and K_1 nontrivial and amenable",
            "amenable-quasi-kernels",
        ));
    }
    if survivors.is_empty() {
        r.unique_trace = UniqueTrace::UniqueTraceEvidence;
    }
    r.notes.push(
        "K_-1 = <H(0,0)> and K_1 = <H(0,1)> intersect trivially; the kernel triviality claim is bounded evidence".into(),
    );
    Ok(r)
}

/// Instances with no applicable closed-form result: record bounded kernel
/// tests for the length-1 generators and leave the verdict open.
pub fn analyze_unknown(e: &Example5, config: &AnalyzeConfig) -> Result<EvidenceReport> {
    let mut r = blank(e.descriptor(), config);
    let en = ConjugatorEnumerator::for_presentation(e, None, config.kernel_tau_length)?;
    for x in XSeq::all_of_length(1) {
        let g = ExampleGElt::h(x);
        let o = kernel_test(e, &g, &en)?;
        r.witnesses.push(witness(
            format!("kernel test for {}", e.format_elt(&g)),
            format_outcome(e, &o),
            "kernel-definition",
        ));
    }
    r.notes.push("mutated relation set; no structural result applies".into());
    Ok(r)
}
