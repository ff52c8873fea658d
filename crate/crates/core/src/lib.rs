//! Adiabatic ("protective") measurement of a spin-1/2 by a one-dimensional
//! pointer, the impulsive limit it is compared against, a Stern–Gerlach
//! feasibility estimate, and gravitational spin-coupling phenomenology.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod dynamics;
pub mod gravity;
pub mod protocols;
pub mod quantum;
pub mod sterngerlach;
pub mod tolerance;

pub use tolerance::Tolerances;
