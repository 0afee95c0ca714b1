//! vf/rr split of the variation rate of one atom's Hamiltonian.
//!
//! The Heisenberg equation gives dH_ξ/dτ = iμω_ξ [R₂^ξ, R₃^ξ] φ(x_ξ(τ)).
//! Splitting the field into its free and source parts and ordering the field
//! factor with an ordering parameter λ yields the vacuum-fluctuation and
//! radiation-reaction contributions
//!
//! ```text
//! (dH_ξ/dτ)_vf = iμω_ξ ( λ φ^f [R₂, R₃] + (1−λ) [R₂, R₃] φ^f )
//! (dH_ξ/dτ)_rr = iμω_ξ ( λ φ^s [R₂, R₃] + (1−λ) [R₂, R₃] φ^s )
//! ```
//!
//! λ = 1/2 is the symmetric operator ordering that makes both parts
//! individually Hermitian; other values are supported to make that choice
//! falsifiable in tests. Expanding every operator perturbatively gives the
//! order-n rates returned here.

use num::One;

use crate::algebra::{rat, Atom, CRat, Monomial, OperatorExpr, Rat, Time, VarGen};
use crate::error::CoreError;
use crate::expand::{phi_free, phi_order, r2_order, r3_order, MAX_ORDER};

/// Which part of the field drives the rate: the free field (vacuum
/// fluctuations) or the source field (radiation reaction).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Vf,
    Rr,
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Channel::Vf => write!(f, "vf"),
            Channel::Rr => write!(f, "rr"),
        }
    }
}

/// iμ ω_ξ as a monomial factor.
fn i_mu_omega(atom: Atom) -> OperatorExpr {
    let mut m = Monomial::scalar(crate::algebra::crat_i(1, 1));
    m.mu_pow = 1;
    m.omega_pow[atom.index()] = 1;
    OperatorExpr::from_monomial(m)
}

/// Order-n contribution of the chosen channel to dH_atom/dτ with ordering
/// parameter λ. Hermitian at λ = 1/2; λ-dependence cancels in vf + rr.
pub fn variation_rate(
    atom: Atom,
    channel: Channel,
    order: u32,
    lambda: Rat,
) -> Result<OperatorExpr, CoreError> {
    let pieces = variation_rate_pieces(atom, channel, order, lambda)?;
    Ok(pieces
        .into_iter()
        .fold(OperatorExpr::zero(), |acc, (_, p)| acc.add(&p)))
}

/// The rate split by expansion slot (i, j, k): the field part at order k
/// against the bracket [R₂^(i), R₃^(j)]. Keeping the slices separate lets
/// the structured presentation follow the derivation instead of an
/// after-the-fact sparsification.
pub fn variation_rate_pieces(
    atom: Atom,
    channel: Channel,
    order: u32,
    lambda: Rat,
) -> Result<Vec<((u32, u32, u32), OperatorExpr)>, CoreError> {
    if order == 0 || order > MAX_ORDER + 1 {
        return Err(CoreError::UnsupportedOrder(order));
    }
    let mut vg = VarGen::new();
    let lam = CRat::new(lambda.clone(), rat(0, 1));
    let one_minus = CRat::new(Rat::one() - lambda, rat(0, 1));
    let mut out = Vec::new();
    for i in 0..order {
        for j in 0..order - i {
            let k = order - 1 - i - j;
            let field = match channel {
                Channel::Vf => {
                    if k != 0 {
                        continue;
                    }
                    phi_free(atom, Time::Outer)
                }
                Channel::Rr => {
                    if k == 0 {
                        continue;
                    }
                    phi_order(atom, k, Time::Outer, &mut vg)
                }
            };
            let bracket = OperatorExpr::commutator(
                &r2_order(atom, i, Time::Outer, &mut vg),
                &r3_order(atom, j, Time::Outer, &mut vg),
            );
            let ordered = field
                .mul(&bracket)
                .scale(&lam)
                .add(&bracket.mul(&field).scale(&one_minus));
            out.push(((i, j, k), i_mu_omega(atom).mul(&ordered)));
        }
    }
    Ok(out)
}

/// vf + rr at the same λ: the total is λ-independent order by order.
pub fn total_rate(atom: Atom, order: u32, lambda: Rat) -> Result<OperatorExpr, CoreError> {
    let vf = variation_rate(atom, Channel::Vf, order, lambda.clone())?;
    let rr = variation_rate(atom, Channel::Rr, order, lambda)?;
    Ok(vf.add(&rr))
}

/// The two operator orderings of the full order-n rate, vf and rr combined:
/// `total(λ) = λ·left + (1−λ)·right`. The difference `left − right` is the
/// λ-ordering obstruction; it vanishes identically because the full field
/// commutes with the equal-time atom operators order by order.
pub fn ordering_halves(
    atom: Atom,
    order: u32,
) -> Result<(OperatorExpr, OperatorExpr), CoreError> {
    if order == 0 || order > MAX_ORDER + 1 {
        return Err(CoreError::UnsupportedOrder(order));
    }
    let mut vg = VarGen::new();
    let mut left = OperatorExpr::zero();
    let mut right = OperatorExpr::zero();
    for i in 0..order {
        for j in 0..order - i {
            let k = order - 1 - i - j;
            let field = if k == 0 {
                phi_free(atom, Time::Outer)
            } else {
                phi_order(atom, k, Time::Outer, &mut vg)
            };
            let bracket = OperatorExpr::commutator(
                &r2_order(atom, i, Time::Outer, &mut vg),
                &r3_order(atom, j, Time::Outer, &mut vg),
            );
            left = left.add(&field.mul(&bracket));
            right = right.add(&bracket.mul(&field));
        }
    }
    let factor = i_mu_omega(atom);
    Ok((factor.mul(&left), factor.mul(&right)))
}
