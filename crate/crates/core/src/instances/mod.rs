//! Concrete presentations: Baumslag–Solitar groups, finite base groups
//! given by multiplication tables, and the example group on `X`.

pub mod bs;
pub mod example5;
pub mod finite;

use std::path::Path;

use crate::error::{HnnError, Result};

pub use bs::BsInstance;
pub use example5::{Example5, ExampleGElt, HBarElt, RuleVariant, XSeq};
pub use finite::FiniteHnnInstance;

/// A selected instance. The element types differ, so callers dispatch on
/// the variant.
#[derive(Debug, Clone)]
pub enum Instance {
    Bs(BsInstance),
    Finite(FiniteHnnInstance),
    Example5(Example5),
}

impl Instance {
    /// Parse a selector: `bs:m,n`, `finite:<path>` (`finite:s3` and
    /// `finite:z4` name the built-in tables), `example5`, or
    /// `example5:drop-r3-flip`.
    pub fn from_selector(selector: &str) -> Result<Instance> {
        let (kind, arg) = match selector.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (selector, None),
        };
        match (kind, arg) {
            ("bs", Some(arg)) => {
                let (m, n) = arg
                    .split_once(',')
                    .ok_or_else(|| HnnError::parse(selector, "expected bs:m,n"))?;
                let m: i64 = m.trim().parse().map_err(|_| HnnError::parse(selector, "m is not an integer"))?;
                let n: i64 = n.trim().parse().map_err(|_| HnnError::parse(selector, "n is not an integer"))?;
                Ok(Instance::Bs(BsInstance::new(m, n)?))
            }
            ("finite", Some("s3")) if !Path::new("s3").exists() => {
                Ok(Instance::Finite(FiniteHnnInstance::s3_example()))
            }
            ("finite", Some("z4")) if !Path::new("z4").exists() => {
                Ok(Instance::Finite(FiniteHnnInstance::z4_example()))
            }
            ("finite", Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| HnnError::InvalidInstance(format!("cannot read {path}: {e}")))?;
                Ok(Instance::Finite(FiniteHnnInstance::from_json(&text)?))
            }
            ("example5", None) => Ok(Instance::Example5(Example5::new())),
            ("example5", Some("drop-r3-flip")) => {
                Ok(Instance::Example5(Example5::with_variant(RuleVariant::DropR3Flip)))
            }
            _ => Err(HnnError::parse(
                selector,
                "expected bs:m,n, finite:<path>, or example5",
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors() {
        assert!(matches!(Instance::from_selector("bs:2,3"), Ok(Instance::Bs(_))));
        assert!(matches!(Instance::from_selector("bs:2,0"), Err(HnnError::InvalidInstance(_))));
        assert!(matches!(Instance::from_selector("bs:2"), Err(HnnError::Parse { .. })));
        assert!(matches!(Instance::from_selector("finite:s3"), Ok(Instance::Finite(_))));
        assert!(matches!(Instance::from_selector("example5"), Ok(Instance::Example5(_))));
        assert!(matches!(
            Instance::from_selector("finite:/nonexistent.json"),
            Err(HnnError::InvalidInstance(_))
        ));
        assert!(Instance::from_selector("free").is_err());
    }
}
