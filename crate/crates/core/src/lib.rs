//! Exact arithmetic for Artin-Schreier-Witt extensions of `k((t))` and the
//! symbol calculus of cyclic p-algebras over them.

pub mod brauer;
pub mod coeff;
pub mod error;
pub mod extension;
pub mod linalg;
pub mod oracle;
pub mod random;
pub mod ring;
pub mod text;
pub mod theorems;
pub mod valued;
pub mod witt;

pub use brauer::{BrauerSymbol, Derivation, DivisionCertificate, HypothesisCheck, Rule, Step};
pub use coeff::{
    build_disjoint_classes, AsMembership, FieldSpec, FpPoly, ResidueElem, ResidueKind,
};
pub use error::{Error, Result};
pub use extension::{Classification, CyclicExtDesc, ExtensionElem, RamReport};
pub use ring::CharPRing;
pub use text::{parse_laurent, parse_residue, parse_symbol, parse_witt, Printer};
pub use theorems::{EvidenceBundle, SubfieldWitness};
pub use valued::{ext_val, LaurentElem, RationalValue, DEFAULT_PRECISION, EXACT};
pub use witt::WittVector;
