//! Gradual security typing with evidence-based runtime semantics.
//!
//! The crate covers a security lattice, a surface syntax, the static
//! security-typed language with its checker and evaluators, the gradual
//! language with its elaboration to intrinsically typed terms, the runtime
//! for those terms, and a harness that checks the metatheory exhaustively
//! over bounded corpora.

pub mod gradual;
pub mod gradual_statics;
pub mod harness;
pub mod intrinsic;
pub mod lattice;
pub mod runtime;
pub mod static_eval;
pub mod statics;
pub mod syntax;

pub use gradual::{Evidence, GLabel, GType};
pub use gradual_statics::{elaborate, typecheck_gradual};
pub use intrinsic::{check_intrinsic, EvTerm, IKind, ITerm};
pub use lattice::{InLattice, Label, LatticeError, SecurityLattice};
pub use runtime::{evaluate, evaluate_traced, Halt, RuntimeValue};
pub use static_eval::{eval_big, eval_small};
pub use statics::{typecheck_static, SType, TypeEnv, TypeError};
pub use syntax::{parse, ParseError, Term};
