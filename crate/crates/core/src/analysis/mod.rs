//! The evidence engine: bounded quasi-kernel and kernel membership tests,
//! the Powers-type conjugator search, report assembly, and the lemma suite
//! for the example group.

pub mod enumerate;
pub mod membership;
pub mod report;
pub mod suite;

pub use enumerate::ConjugatorEnumerator;
pub use membership::{
    check_transported, conjugate_in_h, kernel_test, powers_search, quasi_kernel_test, transport_witness,
    verify_ejection, MembershipOutcome, MembershipStatus, PowersMode, PowersOutcome,
};
pub use report::{analyze, AnalyzeConfig, Bounds, EvidenceReport, UniqueTrace, Verdict, Witness, SCHEMA_VERSION};
pub use suite::{verify_example5_suite, LedgerLine, SuiteConfig, SuiteLedger};
