//! Algorithmic correspondence for subordination algebras with a modal operator.
//!
//! The crate parses statements of the modal subordination language, classifies
//! them as inductive, runs the ALBA reduction (including the Π₂ variant for
//! existential consequents), translates the pure output into first-order
//! frame conditions and checks everything against a finite-frame oracle.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod syntax;
pub mod fol;
pub mod semantics;
pub mod trees;
pub mod classify;
pub mod alba;
pub mod alba_pi2;
