//! Combinatorial multivector fields on finite cell complexes.
//!
//! A [`Complex`] is a finite cell complex viewed as a finite T0 space through
//! its face poset. A [`MultivectorField`] partitions its cells into locally
//! closed multivectors and induces the dynamics `Π_V(x) = cl x ∪ [x]_V`
//! ([`Dynamics`]). On top of that the [`morse`] module computes minimal Morse
//! decompositions, checks and enumerates Morse predecompositions, and
//! consolidates a predecomposition into a Morse decomposition.
//!
//! ```
//! use mvf_core::{fixtures, morse, Dynamics};
//!
//! let doc = fixtures::example1();
//! let dynamics = Dynamics::new(doc.field());
//! let (family, order) = morse::minimal_morse_decomposition(&dynamics).unwrap();
//! assert_eq!(family.len(), 3);
//! assert_eq!(order.strict_pairs().count(), 2);
//! ```

pub mod cellset;
pub mod checks;
pub mod complex;
pub mod cycles;
pub mod document;
pub mod dot;
pub mod dynamics;
pub mod fixtures;
mod gf2;
pub mod morse;
pub mod mvf;
pub mod oracle;

pub use cellset::CellSet;
pub use complex::{Cell, Complex, ComplexError};
pub use document::{AnalysisDocument, DocumentError};
pub use dynamics::{Digraph, Direction, Dynamics, DynamicsError, Lasso, LimitSets, SolutionPath};
pub use morse::{LabelRelation, MorseError, MorseFamily, VerificationReport, Violation};
pub use mvf::{FieldError, MultivectorField};
