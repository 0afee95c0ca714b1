//! Development probe: semantic comparison of the engine rr-4 set against the
//! printed six-term transcription, and inspection of the difference.

use ddc_core::algebra::{crat_i, Atom, Domain, KernelSym, OperatorExpr, Point, Time};
use ddc_core::extract::effective_hamiltonian;
use ddc_core::rates::Channel;
use ddc_core::structure::{AtomFactor, BracketKind, EffectiveTerm};

const TAU: Time = Time::Outer;
const V1: Time = Time::Var(1);
const V2: Time = Time::Var(2);
const V3: Time = Time::Var(3);

fn pa(t: Time) -> Point {
    Point::new(Atom::A, t)
}
fn pb(t: Time) -> Point {
    Point::new(Atom::B, t)
}
fn chi_f(p: Point, q: Point) -> KernelSym {
    KernelSym::FieldSusc(p, q)
}
fn c_f(p: Point, q: Point) -> KernelSym {
    KernelSym::FieldCorr(p, q)
}
fn domain(entries: &[(u32, Time)]) -> Domain {
    Domain(entries.iter().copied().collect())
}

fn main() {
    let half_i = crat_i(1, 2);
    let mk = |dom: &[(u32, Time)], kernels: Vec<KernelSym>, b: AtomFactor, a: AtomFactor| {
        EffectiveTerm {
            coeff: half_i.clone(),
            mu_pow: 4,
            domain: domain(dom),
            field_kernels: kernels,
            parts: [a, b],
        }
    };
    let t1 = mk(
        &[(1, TAU), (2, TAU), (3, V2)],
        vec![chi_f(pb(V1), pa(TAU)), chi_f(pb(V3), pa(V2))],
        AtomFactor::Pair(BracketKind::Anti, V1, V3),
        AtomFactor::Pair(BracketKind::Comm, TAU, V2),
    );
    let t2 = mk(
        &[(1, TAU), (2, V1), (3, TAU)],
        vec![c_f(pb(V2), pa(V3)), chi_f(pb(V1), pa(TAU))],
        AtomFactor::Pair(BracketKind::Comm, V2, V1),
        AtomFactor::Pair(BracketKind::Comm, TAU, V3),
    );
    let t3 = mk(
        &[(1, TAU), (2, V1), (3, V1)],
        vec![chi_f(pb(V2), pa(V1)), chi_f(pb(V3), pa(TAU))],
        AtomFactor::Pair(BracketKind::Comm, V3, V2),
        AtomFactor::Pair(BracketKind::Anti, V1, TAU),
    );
    let t4 = mk(
        &[(1, TAU), (2, V1), (3, V2)],
        vec![chi_f(pb(V2), pa(V1)), chi_f(pb(V3), pa(TAU))],
        AtomFactor::Pair(BracketKind::Comm, V2, V3),
        AtomFactor::Pair(BracketKind::Anti, V1, TAU),
    );
    let t5 = mk(
        &[(1, TAU), (2, V1), (3, V2)],
        vec![chi_f(pa(V1), pb(V3)), chi_f(pb(V2), pa(TAU))],
        AtomFactor::Pair(BracketKind::Comm, V2, V3),
        AtomFactor::Pair(BracketKind::Anti, V1, TAU),
    );
    let t6 = mk(
        &[(1, TAU), (2, V1), (3, V2)],
        vec![chi_f(pa(V3), pb(V2)), chi_f(pb(V1), pa(TAU))],
        AtomFactor::Pair(BracketKind::Comm, V1, V2),
        AtomFactor::Pair(BracketKind::Anti, V3, TAU),
    );

    let golden_a: Vec<EffectiveTerm> = vec![t1, t2, t3.clone(), t4.clone(), t5.clone(), t6];
    let golden_sum = golden_a
        .iter()
        .fold(OperatorExpr::zero(), |acc, t| acc.add(&t.expand()));
    let with_mirror = golden_a
        .iter()
        .map(|t| t.swap_atoms())
        .fold(golden_sum.clone(), |acc, x| acc.add(&x.expand()));

    let eff = effective_hamiltonian(Channel::Rr, 4).unwrap();
    let engine_sum = eff
        .terms
        .iter()
        .fold(OperatorExpr::zero(), |acc, t| acc.add(&t.expand()));

    println!("engine terms: {}", eff.terms.len());
    println!(
        "semantic match engine vs golden(+mirrors): {}",
        engine_sum.equals(&with_mirror)
    );

    let t345 = [t3, t4, t5]
        .iter()
        .fold(OperatorExpr::zero(), |acc, t| acc.add(&t.expand()));
    println!("T3+T4+T5 zero? {}", t345.is_zero_chain());
    for m in t345.chain_form().terms.iter().take(20) {
        println!("  t345: {m}");
    }
}
