//! Interatomic potential of two ground-state two-level atoms coupled to a
//! massless scalar field in vacuum, split into vacuum-fluctuation (vf) and
//! radiation-reaction (rr) contributions at fourth order in the coupling.
//!
//! The crate has four layers:
//!
//! * [`algebra`] — an exact symbolic algebra for Heisenberg-picture operator
//!   expressions: products of free two-level atom operators and free scalar
//!   field symbols, with central (c-number) field commutators, accumulated
//!   free-evolution phases and nested time-ordered integration domains.
//! * [`expand`] / [`rates`] / [`extract`] — the derivation chain: perturbative
//!   source expansions of the atom and field operators, the vf/rr split of the
//!   variation rate of the atomic Hamiltonians at an arbitrary ordering
//!   parameter λ, vacuum (Wick) reduction, and the extraction of effective
//!   Hamiltonians and of the ground-state-averaged potential terms.
//! * [`kernels`] — concrete statistical functions: field correlation C^F and
//!   susceptibility χ^F for static trajectories (discrete box modes and the
//!   continuum closed form), and the atomic functions C^ξ, χ^ξ.
//! * [`evaluator`] / [`oracle`] — numerical evaluation of the derived nested
//!   kernel integrals under adiabatic switching with an ε → 0 extrapolation
//!   ladder, cross-checked against fourth-order Rayleigh–Schrödinger
//!   perturbation theory and exact diagonalization on the same discrete modes.
//!
//! Everything the evaluator consumes is produced by the symbolic layer; the
//! closed-form expressions that appear in tests are golden transcriptions,
//! never the computation path.

pub mod algebra;
pub mod error;
pub mod evaluator;
pub mod expand;
pub mod extract;
pub mod kernels;
pub mod oracle;
pub mod par;
pub mod rates;
pub mod structure;
pub mod structurize;

pub use error::CoreError;
