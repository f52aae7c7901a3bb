//! Exact decision procedures for eventual non-negativity and positivity of
//! weighted sums of powers of rational matrices, together with the
//! constructions that translate between matrix sums and linear recurrences.

pub mod algebraic;
pub mod decision;
pub mod exact;
pub mod expsum;
pub mod lrs;
pub mod perturbation;
pub mod reductions;
pub mod spectral;
