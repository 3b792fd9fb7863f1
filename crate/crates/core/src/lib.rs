//! Church-style intensional type theory at finite scale.
//!
//! * [`types`]: the type grammar, degrees and the type-reduction rewrite.
//! * [`lang`]: typed terms and formulas with presentation, intensional
//!   application and representation atoms.
//! * [`schema`]: predicativity classification of comprehension and choice
//!   instances.
//! * [`models`]: standard, possible-worlds and custom frames; evaluation and
//!   axiom checking.
//! * [`paradox`]: diagonal refuters, parameter smuggling, the Russell-Myhill
//!   pipeline and extension operators.
//! * [`definability`]: hereditarily finite sets, `Defn`, the `L`/`V`
//!   hierarchies and the `Σ_n` classifier.
//! * [`walkthrough`]: a narrated Markdown report chaining the above.

pub mod definability;
pub mod lang;
pub mod models;
pub mod paradox;
pub mod schema;
pub mod types;
pub mod walkthrough;

pub use lang::{Formula, Term, Var};
pub use types::{parse_type, print_type, reduce_type, Type};
