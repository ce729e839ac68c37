//! Probabilistic acceptance over propositional belief bases.
//!
//! A finite possible-worlds model with exact rational weights assigns a
//! probability to every formula. Acceptance policies pick the candidates
//! that clear a level `1 - ε`, and the remaining modules diagnose and bound
//! the (weak) inconsistency that high-probability acceptance produces.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod acceptance;
pub mod closure;
pub mod error;
pub mod logic;
pub mod paraconsistency;
pub mod rational;
pub mod world;

pub use error::Error;
pub use logic::{parse, Formula, FormulaSet};
pub use rational::Rational;
pub use world::{BeliefBase, WorldModel};
