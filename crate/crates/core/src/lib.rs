//! Benchmark engine for specification-guided reinforcement learning.
//!
//! - [`ltl`]: formulas, parsing, normal forms, and lasso-trace semantics.
//! - [`progression`]: online formula progression and verdicts.
//! - [`automaton`]: tableau compilation to Büchi automata, emptiness,
//!   monitoring, and reach-avoid subgoal extraction.
//! - [`envs`]: LetterWorld, ZoneEnv and ArmReach with proposition labeling.
//! - [`spec_gen`]: fixed specification corpora and samplers.
//! - [`harness`]: episode execution, metrics, optimal-step oracle, reference agents.

pub mod automaton;
pub mod envs;
pub mod harness;
pub mod ltl;
pub mod progression;
pub mod spec_gen;
