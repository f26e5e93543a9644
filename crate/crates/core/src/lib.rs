//! Context-embedding strategies.
//!
//! A strategy describes where contexts are inserted into a term. This crate
//! applies strategies, computes canonical forms, unifies and combines them,
//! and checks the algebraic laws they obey.

pub mod canon;
pub mod error;
pub mod formula;
pub mod harness;
pub mod pce;
pub mod psi;
pub mod semantics;
pub mod strategy;
pub mod syntax;
pub mod term;
pub mod unify;

#[cfg(test)]
mod testgen;

pub use canon::{is_canonical, to_canonical};
pub use error::{CeError, HarnessError, ParseError, TermError};
pub use formula::{eval_formula, BoolFormula, Valuation};
pub use pce::{
    apply_pce, combine_pce, eq_pce, eval_tuple, is_well_founded_pce, normalize_pce, unify_pce,
    ContextTuple, Pce,
};
pub use psi::{psi, psi_apply, Psi};
pub use semantics::apply_ce;
pub use syntax::{
    parse_context, parse_formula, parse_pce, parse_position, parse_signature, parse_strategy,
    parse_term,
};
pub use strategy::{
    check_well_founded, delta_measure, formulas_of, is_well_founded_ce, iterate, one_left,
    positions_of_ce, subst_fixvar, top_down, Delta, Entry, NameGen, Strategy,
};
pub use term::{match_term, meet, mgu, Context, PosRelation, Position, Signature, Substitution, Term};
pub use unify::{combine_ce, combine_general, unify_ce, unify_general, ClauseStats, Unifier};
