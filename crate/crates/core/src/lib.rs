//! Finite models of descent: sets, posets, categories, `Fam(V)`, enriched
//! categories and multicategories, with brute-force oracles for each.

use std::fmt;

pub mod cauchy;
pub mod corpus;
pub mod descent;
pub mod enriched;
pub mod famv;
pub mod finbase;
pub mod fincat;
pub mod multicat;
pub mod poset;

/// Outcome of a yes/no check together with a human-readable reason: a
/// summary when the property holds, a counterexample when it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certified {
    pub holds: bool,
    pub certificate: String,
}

impl Certified {
    pub fn holds(why: impl Into<String>) -> Self {
        Certified {
            holds: true,
            certificate: why.into(),
        }
    }

    pub fn fails(why: impl Into<String>) -> Self {
        Certified {
            holds: false,
            certificate: why.into(),
        }
    }
}

impl fmt::Display for Certified {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}",
            if self.holds { "holds" } else { "fails" },
            self.certificate
        )
    }
}
