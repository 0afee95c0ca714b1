//! Exact symbolic algebra for Heisenberg-picture operator expressions.
//!
//! An [`OperatorExpr`] is a finite sum of [`Monomial`]s. Each monomial is an
//! exact complex-rational coefficient times
//!
//! * powers of the coupling μ and of the transition frequencies ω_A, ω_B,
//! * a free-evolution phase `exp(i Σ n_{ξ,t} ω_ξ t)` over symbolic times,
//! * a product of central (c-number) kernel symbols — field commutators and,
//!   after averaging, field/atom statistical functions,
//! * an ordered product of free scalar-field symbols `φ^f(x_w(t))`,
//! * one su(2) basis operator per atom, anchored at the switch-on time τ₀,
//! * a nested time-ordered integration domain (a forest of variables, each
//!   bounded below by τ₀ and above by τ or by another variable).
//!
//! Two-level atom operators at a general time reduce to τ₀-anchored basis
//! operators times phases, so products of same-atom operators close on the
//! basis {1, R₊, R₋, R₃} with rational coefficients. Free-field symbols
//! commute with all atom symbols; the commutator of two field symbols is a
//! central kernel symbol, never an operator.
//!
//! Canonical forms come in two strengths: [`OperatorExpr::canonicalize`]
//! keeps integration forests intact (used for presentation), while
//! [`OperatorExpr::chain_form`] splits every forest into totally ordered
//! chains and normal-orders the field factors, which makes syntactic equality
//! coincide with operator equality for the expressions produced here.

mod dense;
mod expr;
mod monomial;
mod scalar;
mod symbols;

pub use dense::{anticomm_m, comm_m, kron, mat_id, mat_r2, mat_r3, mat_rm, mat_rp, to_matrix, CMat};
pub use expr::OperatorExpr;
pub use monomial::{Monomial, VarGen};
pub use scalar::{crat, crat_i, i_pow, rat, to_c64, CRat, Rat};
pub use symbols::{
    mul_basis, Atom, AtomBasis, Domain, KernelSym, Phase, Point, Time,
};
