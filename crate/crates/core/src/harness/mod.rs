//! Brute-force checking of the algebraic laws and correctness theorems over
//! small generated corpora.

mod gen;
mod laws;

pub use gen::{
    enumerate_patterns, enumerate_terms, enumerate_terms_capped, generate_pces, generate_strategies,
    generate_strategies_with, sample_terms, GenBounds, Generator, DEFAULT_TERM_CAP,
};
pub use laws::{catalog, check_all, check_law, render_report, Law, LawReport};

use crate::canon::to_canonical;
use crate::pce::Pce;
use crate::strategy::Strategy;
use crate::term::{Signature, Term};

pub const DEFAULT_SEED: u64 = 20_150_921;

/// Bounds for corpus generation.
#[derive(Clone, Debug)]
pub struct CorpusConfig {
    pub max_depth: usize,
    pub terms_per_signature: usize,
    pub strategies_per_signature: usize,
    pub pces_per_signature: usize,
    /// Random strategy pairs per signature for the binary laws.
    pub pair_samples: usize,
    /// Random triples per signature for associativity.
    pub triple_samples: usize,
    pub bounds: GenBounds,
    /// Step budget per unification; instances over budget are skipped and
    /// reported.
    pub unify_budget: u64,
    pub seed: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            max_depth: 3,
            terms_per_signature: 40,
            strategies_per_signature: 160,
            pces_per_signature: 120,
            pair_samples: 240,
            triple_samples: 60,
            bounds: GenBounds::default(),
            unify_budget: 10_000,
            seed: DEFAULT_SEED,
        }
    }
}

/// Everything generated for one signature.
#[derive(Clone, Debug)]
pub struct Section {
    pub signature: Signature,
    pub terms: Vec<Term>,
    pub strategies: Vec<Strategy>,
    /// Canonical forms of `strategies`, index-aligned.
    pub canonical: Vec<Strategy>,
    pub pces: Vec<Pce>,
    /// Patterns over `X`, `Y` for the matching laws.
    pub patterns: Vec<Term>,
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub config: CorpusConfig,
    pub sections: Vec<Section>,
}

const PATTERN_CAP: usize = 700;

impl Corpus {
    pub fn new(signatures: &[Signature], config: CorpusConfig) -> Self {
        let sections = signatures
            .iter()
            .enumerate()
            .map(|(k, sig)| {
                let seed = config.seed.wrapping_add(k as u64 * 0x9e37_79b9);
                let terms = sample_terms(sig, config.max_depth, seed, config.terms_per_signature);
                let strategies =
                    generate_strategies_with(sig, config.bounds, seed, config.strategies_per_signature);
                let canonical = strategies
                    .iter()
                    .map(|s| to_canonical(s).unwrap_or(Strategy::Fail))
                    .collect();
                let pces = generate_pces(sig, seed, config.pces_per_signature);
                let patterns = (0..=2)
                    .rev()
                    .find_map(|d| enumerate_patterns(sig, &["X", "Y"], d, PATTERN_CAP).ok())
                    .unwrap_or_default();
                Section {
                    signature: sig.clone(),
                    terms,
                    strategies,
                    canonical,
                    pces,
                    patterns,
                }
            })
            .collect();
        Corpus { config, sections }
    }

    /// The differential-operator signature together with `f/2, g/1, a, b`.
    pub fn standard(config: CorpusConfig) -> Self {
        Corpus::new(&[Signature::figure(), Signature::abstract_small()], config)
    }

    pub fn term_count(&self) -> usize {
        self.sections.iter().map(|s| s.terms.len()).sum()
    }

    pub fn strategy_count(&self) -> usize {
        self.sections.iter().map(|s| s.strategies.len()).sum()
    }

    pub fn pce_count(&self) -> usize {
        self.sections.iter().map(|s| s.pces.len()).sum()
    }
}

impl Default for Corpus {
    fn default() -> Self {
        Corpus::standard(CorpusConfig::default())
    }
}
