//! Core engine for first-order logic extended with self-reference.
//!
//! The language adds two constructs to relational first-order logic: label
//! operators `Lk: φ` that name a subformula occurrence, and claim atoms
//! `@Lk` whose game move jumps back to the nearest enclosing occurrence of
//! the label `Lk`. Formulas are interpreted over finite relational
//! structures through evaluation games, under two semantics:
//!
//! * **unbounded**: plays may run forever; infinite plays are draws;
//! * **bounded**: a clock limits the number of claim jumps; running out of
//!   clock is a draw.
//!
//! The crate provides parsing and printing, classical Tarski evaluation of
//! the first-order fragment, arena construction and reachability solving
//! for both game variants, n-unfoldings and n-approximants, duality
//! rewriting and negation normal forms, a natural-deduction proof checker
//! with constructive derivation builders, and a first-order safety
//! translation with TPTP export.

pub mod approximants;
pub mod corpus;
pub mod game;
pub mod proof;
pub mod structures;
pub mod syntax;
pub mod transform;
pub mod translate;

pub use game::{Arena, GameSession, Outcome, Position, Sign, Strategy, Verdict};
pub use structures::{Assignment, Structure};
pub use syntax::{Formula, LabelId, OccPath, Vocabulary};

/// Default cap on AST node growth for unfolding and normal-form passes.
///
/// Overridable through the `LOOPFO_NODE_BUDGET` environment variable in the
/// command-line tool; library callers pass an explicit budget.
pub const DEFAULT_NODE_BUDGET: usize = 200_000;
