//! Perturbative source expansions of the atom and field operators.
//!
//! Solving the Heisenberg equations and splitting each operator into its free
//! and source parts gives integral equations that this module iterates order
//! by order in the coupling μ:
//!
//! ```text
//! R±^(n)(τ) = iμ ∫_{τ₀}^{τ} dτ₁  Σ_{i+j+k=n−1}
//!              φ^(k)(x_ξ(τ₁)) [R₂^(i)(τ₁), R±^(j)(τ₁)] e^{±iω_ξ(τ−τ₁)}
//! R₃^(n)(τ) = iμ ∫_{τ₀}^{τ} dτ₁  Σ_{i+j+k=n−1}
//!              [R₂^(i)(τ₁), R₃^(j)(τ₁)] φ^(k)(x_ξ(τ₁))
//! ```
//!
//! The source part of the field is iterated through the freely propagated
//! mode legs. Writing `L^(m)(s; x,τ)` for the m-th order part of the mode
//! operators at time s propagated to the observation point `x(τ)`, the phases
//! of the intermediate time compose away and one is left with
//!
//! ```text
//! L^(0)(s; x,τ)  = φ^f(x(τ))
//! L^(m)(s; x,τ)  = iμ Σ_ξ ∫_{τ₀}^{s} dv  Σ_{i+j+k=m−1}
//!                   R₂^(i)(x_ξ(v)) [φ^(j)(x_ξ(v)), L^(k)(v; x,τ)]
//! φ^(n)(x(τ))    = L^(n)(τ; x,τ)
//! ```
//!
//! All commutators on the right are evaluated in the operator algebra, where
//! free-field commutators are central kernel symbols; no closed form is
//! transcribed from anywhere. Expansions stop at third order, which is all
//! the fourth-order potential needs.

use crate::algebra::{
    crat_i, Atom, Monomial, OperatorExpr, Time, VarGen,
};
use crate::error::CoreError;

/// Maximum implemented expansion order.
pub const MAX_ORDER: u32 = 3;

/// Free monopole operator R₂^{ξ,f}(t) = i(R₋ − R₊)/2, with the monopole
/// insertion tag that classifies interatomic content downstream.
pub fn r2_free(atom: Atom, t: Time) -> OperatorExpr {
    let mut minus = Monomial::free_pm(atom, false, t);
    minus.coeff = crat_i(1, 2);
    minus.insertions[atom.index()] = 1;
    let mut plus = Monomial::free_pm(atom, true, t);
    plus.coeff = crat_i(-1, 2);
    plus.insertions[atom.index()] = 1;
    OperatorExpr {
        terms: vec![minus, plus],
    }
}

/// Free inversion operator R₃^{ξ,f} (time independent).
pub fn r3_free(atom: Atom) -> OperatorExpr {
    OperatorExpr::from_monomial(Monomial::free_r3(atom))
}

/// Free field symbol φ^f(x_wl(t)).
pub fn phi_free(wl: Atom, t: Time) -> OperatorExpr {
    OperatorExpr::from_monomial(Monomial::free_field(crate::algebra::Point::new(wl, t)))
}

/// Free raising/lowering operator R_±^{ξ,f}(t).
pub fn r_pm_free(atom: Atom, plus: bool, t: Time) -> OperatorExpr {
    OperatorExpr::from_monomial(Monomial::free_pm(atom, plus, t))
}

/// iμ as a monomial factor.
fn i_mu() -> OperatorExpr {
    let mut m = Monomial::scalar(crat_i(1, 1));
    m.mu_pow = 1;
    OperatorExpr::from_monomial(m)
}

/// Attach the integration ∫_{τ₀}^{upper} dv to every term.
pub fn time_integral(expr: OperatorExpr, v: u32, upper: Time) -> OperatorExpr {
    OperatorExpr {
        terms: expr
            .terms
            .into_iter()
            .map(|mut m| {
                let prev = m.domain.0.insert(v, upper);
                debug_assert!(prev.is_none(), "integration variable reused");
                m
            })
            .collect(),
    }
}

/// Free-evolution phase e^{±iω_ξ(t_hi − t_lo)}.
fn evolution_phase(atom: Atom, plus: bool, t_hi: Time, t_lo: Time) -> OperatorExpr {
    let mut m = Monomial::one();
    let s = if plus { 1 } else { -1 };
    m.phase.insert(atom, t_hi, s);
    m.phase.insert(atom, t_lo, -s);
    OperatorExpr::from_monomial(m)
}

/// n-th order part of R_±^ξ at time `t`.
pub fn r_pm_order(atom: Atom, plus: bool, order: u32, t: Time, vg: &mut VarGen) -> OperatorExpr {
    if order == 0 {
        return r_pm_free(atom, plus, t);
    }
    let mut sum = OperatorExpr::zero();
    let v = vg.fresh();
    let tv = Time::Var(v);
    for i in 0..order {
        for j in 0..order - i {
            let k = order - 1 - i - j;
            let field = phi_order(atom, k, tv, vg);
            let bracket = OperatorExpr::commutator(
                &r2_order(atom, i, tv, vg),
                &r_pm_order(atom, plus, j, tv, vg),
            );
            let piece = field
                .mul(&bracket)
                .mul(&evolution_phase(atom, plus, t, tv));
            sum = sum.add(&piece);
        }
    }
    time_integral(i_mu().mul(&sum), v, t)
}

/// n-th order part of the monopole R₂^ξ = i(R₋ − R₊)/2 at time `t`.
pub fn r2_order(atom: Atom, order: u32, t: Time, vg: &mut VarGen) -> OperatorExpr {
    if order == 0 {
        return r2_free(atom, t);
    }
    let minus = r_pm_order(atom, false, order, t, vg);
    let plus = r_pm_order(atom, true, order, t, vg);
    let expr = minus.sub(&plus).scale(&crat_i(1, 2));
    // One monopole insertion happened at the outermost vertex of this order.
    OperatorExpr {
        terms: expr
            .terms
            .into_iter()
            .map(|mut m| {
                m.insertions[atom.index()] += 1;
                m
            })
            .collect(),
    }
}

/// n-th order part of the inversion R₃^ξ at time `t`.
pub fn r3_order(atom: Atom, order: u32, t: Time, vg: &mut VarGen) -> OperatorExpr {
    if order == 0 {
        return r3_free(atom);
    }
    let mut sum = OperatorExpr::zero();
    let v = vg.fresh();
    let tv = Time::Var(v);
    for i in 0..order {
        for j in 0..order - i {
            let k = order - 1 - i - j;
            let bracket = OperatorExpr::commutator(
                &r2_order(atom, i, tv, vg),
                &r3_order(atom, j, tv, vg),
            );
            let field = phi_order(atom, k, tv, vg);
            sum = sum.add(&bracket.mul(&field));
        }
    }
    time_integral(i_mu().mul(&sum), v, t)
}

/// n-th order part of the field at the observation point `x_wl(t)`.
pub fn phi_order(wl: Atom, order: u32, t: Time, vg: &mut VarGen) -> OperatorExpr {
    source_leg(order, t, wl, t, vg)
}

/// m-th order mode legs at vertex time `s`, freely propagated to `x_wl(t)`.
fn source_leg(order: u32, s: Time, wl: Atom, t: Time, vg: &mut VarGen) -> OperatorExpr {
    if order == 0 {
        return phi_free(wl, t);
    }
    let mut sum = OperatorExpr::zero();
    let v = vg.fresh();
    let tv = Time::Var(v);
    for xi in Atom::BOTH {
        for i in 0..order {
            for j in 0..order - i {
                let k = order - 1 - i - j;
                let vertex = r2_order(xi, i, tv, vg);
                let bracket = OperatorExpr::commutator(
                    &phi_order(xi, j, tv, vg),
                    &source_leg(k, tv, wl, t, vg),
                );
                sum = sum.add(&vertex.mul(&bracket));
            }
        }
    }
    time_integral(i_mu().mul(&sum), v, s)
}

/// Which operator a source expansion is requested for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceSymbol {
    /// Monopole R₂ of the given atom, at its own worldline.
    R2(Atom),
    /// Inversion R₃ of the given atom.
    R3(Atom),
    /// Field φ observed on the given worldline.
    Phi(Atom),
}

impl SourceSymbol {
    /// The spectator whose monopole power classifies interatomic content:
    /// the other atom.
    pub fn spectator(self) -> Atom {
        match self {
            SourceSymbol::R2(a) | SourceSymbol::R3(a) | SourceSymbol::Phi(a) => a.other(),
        }
    }
}

/// An order-n expansion term, split into the part carrying the maximal
/// spectator monopole power (the only part that can survive the two-atom
/// ground-state average at fourth order) and a classification of the rest.
#[derive(Debug, Clone)]
pub struct SourceExpansion {
    /// Complete order-n operator, observation time τ.
    pub full: OperatorExpr,
    /// Spectator-power-2 part at order 3; equals `full` below order 3.
    pub retained: OperatorExpr,
    /// Term counts of what `retained` leaves out, keyed by spectator power.
    pub remainder_counts: std::collections::BTreeMap<u8, usize>,
}

/// Order-n term of the perturbative expansion of `sym`, at the observation
/// time τ.
pub fn source_expansion(sym: SourceSymbol, order: u32) -> Result<SourceExpansion, CoreError> {
    if order > MAX_ORDER {
        return Err(CoreError::UnsupportedOrder(order));
    }
    let mut vg = VarGen::new();
    let full = match sym {
        SourceSymbol::R2(a) => r2_order(a, order, Time::Outer, &mut vg),
        SourceSymbol::R3(a) => r3_order(a, order, Time::Outer, &mut vg),
        SourceSymbol::Phi(a) => phi_order(a, order, Time::Outer, &mut vg),
    }
    .canonicalize();
    let spect = sym.spectator().index();
    let mut remainder_counts = std::collections::BTreeMap::new();
    let retained = if order < MAX_ORDER {
        full.clone()
    } else {
        let mut kept = Vec::new();
        for m in &full.terms {
            if m.insertions[spect] == 2 {
                kept.push(m.clone());
            } else {
                *remainder_counts.entry(m.insertions[spect]).or_insert(0) += 1;
            }
        }
        OperatorExpr { terms: kept }
    };
    Ok(SourceExpansion {
        full,
        retained,
        remainder_counts,
    })
}
