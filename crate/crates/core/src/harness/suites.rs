//! Named property suites with their default bounds.

use thiserror::Error;

use super::*;
use crate::gradual::{GLabel, GType};
use crate::lattice::SecurityLattice;

/// Every suite, in the order they run by default.
pub const SUITES: [&str; 12] = [
    "galois",
    "consistent",
    "interior",
    "transitivity",
    "lemmas",
    "conservative-extension",
    "static-guarantee",
    "bigstep-smallstep",
    "static-safety",
    "static-embedding",
    "preservation",
    "noninterference",
];

const STATIC_SUITES: [&str; 5] = [
    "conservative-extension",
    "static-guarantee",
    "bigstep-smallstep",
    "static-safety",
    "static-embedding",
];

pub const DEFAULT_TERM_DEPTH: usize = 3;
pub const DEFAULT_TYPE_DEPTH: usize = 2;
/// Annotation depth of the exhaustive gradual corpus.
pub const DEFAULT_GRADUAL_TYPE_DEPTH: usize = 1;
pub const DEFAULT_RANDOM_TERM_DEPTH: usize = 5;
pub const DEFAULT_SAMPLES: usize = 20_000;

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub lattice: SecurityLattice,
    /// Term depth bound; suite default when absent.
    pub term_depth: Option<usize>,
    /// Type depth bound; suite default when absent.
    pub type_depth: Option<usize>,
    /// Draw random terms with this seed instead of enumerating.
    pub seed: Option<u64>,
    pub samples: usize,
}

impl SuiteConfig {
    pub fn new(lattice: SecurityLattice) -> Self {
        SuiteConfig {
            lattice,
            term_depth: None,
            type_depth: None,
            seed: None,
            samples: DEFAULT_SAMPLES,
        }
    }

    fn term_depth(&self) -> usize {
        self.term_depth.unwrap_or(match self.seed {
            Some(_) => DEFAULT_RANDOM_TERM_DEPTH,
            None => DEFAULT_TERM_DEPTH,
        })
    }

    fn type_depth(&self, default: usize) -> usize {
        self.type_depth.unwrap_or(default)
    }

    /// Closed terms over the configured lattice.
    pub fn corpus(&self, gradual: bool, type_depth: usize) -> Corpus {
        let params = CorpusParams::closed(self.term_depth(), type_depth, gradual);
        Corpus::new(&self.lattice, params)
    }

    /// Bodies with one free variable at the lattice's top label.
    pub fn secret_corpus(&self) -> Corpus {
        let secret = GType::Bool(GLabel::Known(self.lattice.top()));
        let params =
            CorpusParams::closed(self.term_depth(), self.type_depth(DEFAULT_TYPE_DEPTH), true)
                .with_free("x", secret);
        Corpus::new(&self.lattice, params)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown suite `{0}`; expected one of: {list}", list = SUITES.join(", "))]
pub struct UnknownSuite(pub String);

fn static_property(name: &str) -> Box<dyn TermProperty> {
    match name {
        "conservative-extension" => Box::new(ConservativeExtension::default()),
        "static-guarantee" => Box::new(StaticGuarantee::default()),
        "bigstep-smallstep" => Box::new(BigStepSmallStep::default()),
        "static-safety" => Box::new(StaticSafety::default()),
        "static-embedding" => Box::new(StaticEmbedding::default()),
        _ => unreachable!("not a static suite: {name}"),
    }
}

/// Run the named suites (all of them when `names` is empty), calling
/// `done` on each report as it completes.
pub fn run_suites(
    names: &[String],
    cfg: &SuiteConfig,
    mut done: impl FnMut(&PropertyReport),
) -> Result<Vec<PropertyReport>, UnknownSuite> {
    if let Some(bad) = names.iter().find(|n| !SUITES.contains(&n.as_str())) {
        return Err(UnknownSuite(bad.clone()));
    }
    let selected: Vec<&str> = SUITES
        .iter()
        .copied()
        .filter(|s| names.is_empty() || names.iter().any(|n| n == s))
        .collect();
    let lat = &cfg.lattice;
    let type_depth = cfg.type_depth(DEFAULT_TYPE_DEPTH);
    let mut out = Vec::new();
    let mut push = |r: PropertyReport, out: &mut Vec<PropertyReport>| {
        done(&r);
        out.push(r);
    };
    let mut static_done = false;
    for name in selected.iter().copied() {
        let report = match name {
            "galois" => check_galois(lat, type_depth),
            "consistent" => check_consistent_predicates(lat, type_depth),
            "interior" => check_interior_oracle(lat, type_depth),
            "transitivity" => check_transitivity_properties(lat),
            "lemmas" => check_type_algebra_lemmas(lat, type_depth),
            "preservation" => {
                let gradual_depth = match cfg.seed {
                    Some(_) => type_depth,
                    None => cfg.type_depth(DEFAULT_GRADUAL_TYPE_DEPTH),
                };
                let corpus = cfg.corpus(true, gradual_depth);
                let props: Vec<Box<dyn TermProperty>> =
                    vec![Box::new(PreservationProgress::default())];
                let mut reports = match cfg.seed {
                    Some(seed) => sweep_sampled(&corpus, seed, cfg.samples, props),
                    None => sweep_typed(&corpus, props),
                };
                reports.remove(0)
            }
            "noninterference" => {
                let corpus = cfg.secret_corpus();
                match cfg.seed {
                    Some(seed) => check_noninterference_sampled(&corpus, seed, cfg.samples),
                    None => check_noninterference(&corpus),
                }
            }
            _ => {
                if static_done {
                    continue;
                }
                static_done = true;
                let props: Vec<Box<dyn TermProperty>> = selected
                    .iter()
                    .filter(|s| STATIC_SUITES.contains(s))
                    .map(|s| static_property(s))
                    .collect();
                let corpus = cfg.corpus(false, type_depth);
                let reports = match cfg.seed {
                    Some(seed) => sweep_sampled(&corpus, seed, cfg.samples, props),
                    None => sweep(&corpus, props),
                };
                for r in reports {
                    push(r, &mut out);
                }
                continue;
            }
        };
        push(report, &mut out);
    }
    Ok(out)
}
