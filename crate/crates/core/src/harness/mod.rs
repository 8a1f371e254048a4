//! Exhaustive and random property checks.

mod algebra;
mod corpus;
mod report;
mod suites;
mod terms;

pub use algebra::{
    brute_interior_label, brute_interior_type, brute_transitivity_label,
    check_consistent_predicates, check_galois, check_interior_oracle,
    check_transitivity_properties, check_type_algebra_lemmas,
};
pub use corpus::{surface_label, surface_type, Corpus, CorpusParams};
pub use report::{Counterexample, PropertyReport, KEPT_COUNTEREXAMPLES};
pub use suites::{
    run_suites, SuiteConfig, UnknownSuite, DEFAULT_GRADUAL_TYPE_DEPTH, DEFAULT_RANDOM_TERM_DEPTH,
    DEFAULT_SAMPLES, DEFAULT_TERM_DEPTH, DEFAULT_TYPE_DEPTH, SUITES,
};
pub use terms::{
    check_noninterference, check_noninterference_sampled, hidden_from, noninterference_instance,
    relaxations, sweep, sweep_sampled, sweep_typed, term_precision, values_of_type,
    BigStepSmallStep, ConservativeExtension, Instance, PreservationProgress, StaticEmbedding,
    StaticGuarantee, StaticSafety, TermProperty,
};
