//! Development probe: transfer-step ratio extrapolated through the exact
//! spectral evaluation.

use ddc_core::algebra::{crat, Atom, Domain, KernelSym, Monomial, OperatorExpr, Point, Time};
use ddc_core::evaluator::{eval_scalar_expr, richardson, EvalConfig, KernelResolver, QuadratureConfig};
use ddc_core::expand::r2_free;
use ddc_core::extract::free_hamiltonian;
use ddc_core::kernels::ModeSet;
use num::complex::Complex64 as C;

fn main() {
    let config = EvalConfig {
        omega_a: 1.23,
        omega_b: 0.83,
        mu: 1.0,
        separation: 2.0,
        box_length: 11.0,
        cutoff: 1.75,
        dim: 1,
        quad: QuadratureConfig::default(),
    };
    let modes = ModeSet::new(11.0, 1.75, 1).unwrap();
    let resolver = KernelResolver::from_modes(&modes, &config).unwrap();
    let omegas = [config.omega_a, config.omega_b];

    let (tau, t1, t2, t3) = (Time::Outer, Time::Var(1), Time::Var(2), Time::Var(3));
    let mut base = Monomial::one();
    base.kernels = vec![
        KernelSym::FieldCorr(Point::new(Atom::A, tau), Point::new(Atom::B, t3)),
        KernelSym::FieldSusc(Point::new(Atom::B, t2), Point::new(Atom::A, t1)),
    ];
    base.domain = Domain(vec![(1, tau), (2, t1), (3, t2)].into_iter().collect());
    let base = OperatorExpr::from_monomial(base);

    let a = |t| r2_free(Atom::A, t);
    let b = |t| r2_free(Atom::B, t);
    let h_a = free_hamiltonian(Atom::A);
    let h_b = free_hamiltonian(Atom::B);

    let lhs = base
        .mul(&OperatorExpr::commutator(&b(t3), &b(t2)))
        .mul(&OperatorExpr::commutator(
            &a(t1),
            &OperatorExpr::commutator(&a(tau), &h_a),
        ))
        .atom_ground_average();
    let rhs = base
        .mul(&OperatorExpr::commutator(
            &b(t3),
            &OperatorExpr::commutator(&b(t2), &h_b),
        ))
        .mul(&OperatorExpr::commutator(&a(t1), &a(tau)))
        .atom_ground_average();

    let ladder: Vec<f64> = (0..12).map(|j| 0.4 / f64::powi(2.0, j)).collect();
    let evals = |e: &OperatorExpr| -> Vec<C> {
        ladder
            .iter()
            .map(|&eps| eval_scalar_expr(e, &resolver, omegas, 1.0, eps).unwrap())
            .collect()
    };
    let lv = evals(&lhs);
    let rv = evals(&rhs);
    for (j, &eps) in ladder.iter().enumerate() {
        println!(
            "eps {eps:.5}: lhs {:.6e}  rhs {:.6e}  diff {:.2e}",
            lv[j].re,
            rv[j].re,
            (lv[j] - rv[j]).norm()
        );
    }
    let (l, _, _) = richardson(&ladder, &lv);
    let (r, _, _) = richardson(&ladder, &rv);
    println!("extrapolated: lhs {l:.8e} rhs {r:.8e} ratio {:.6}", (l / r).re);
    let _ = crat(1, 1);
}
