//! Zermelo's well-ordering construction, executed on finite ground sets.
//!
//! Given an explicit choice function `φ`, the operator `α(X) = φ(A ∖ X)`
//! generates the canonical chain `∅ ⊂ {α(∅)} ⊂ … ⊂ A`, and the order in which
//! atoms enter the chain well-orders `A`. Every step of the argument is
//! checked on the concrete data:
//!
//! - [`regular`]: builds the chain and verifies the four regularity conditions.
//! - [`compare`]: the agreement core of two regular families and the
//!   initial-segment dichotomy.
//! - [`oracle`]: brute-force enumeration of all regular families for
//!   `|A| ≤ 4`, and `Q` as their literal union.
//! - [`wellorder`]: bijectivity of `α` on the chain and the induced order.

pub mod choice;
pub mod compare;
pub mod error;
pub mod oracle;
pub mod regular;
pub mod rng;
pub mod sets;
pub mod wellorder;

pub use choice::{ChoiceFunction, ChoiceKind, ChoiceSpec};
pub use error::{Error, Result};
pub use regular::{build_chain, verify_regular, Chain, RegularityReport};
pub use sets::{family_intersection, family_union, strict_lower_union, GroundSet, Subset, SubsetFamily};
pub use wellorder::{induced_order, VerifyMode, WellOrder};
