//! Exact computation in HNN extensions `HNN(G, H, θ)`: Britton normal forms,
//! the Bass–Serre tree, and bounded searches for the quasi-kernel and Powers
//! criteria that decide C*-simplicity and the unique trace property.

#![allow(clippy::type_complexity, clippy::large_enum_variant)]

pub mod analysis;
pub mod error;
pub mod instances;
pub mod normal_form;
pub mod presentation;
pub mod reduce;
pub mod tree;
pub mod word;

pub use error::{HnnError, Result};
pub use normal_form::{normal_form, word_stats, LetterStats, NormalForm, Normalizer};
pub use presentation::{HnnPresentation, PresentationFlags};
pub use reduce::{britton_reduce, britton_reduce_with, is_reduced, quick_type_check, PinchStrategy, QuickType};
pub use word::{format_word, parse_word, Letter, Sign, Word};
