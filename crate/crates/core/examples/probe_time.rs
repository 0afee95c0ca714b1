//! Development probe: timing breakdown of the λ-obstruction check.
use std::time::Instant;
use ddc_core::algebra::Atom;
use ddc_core::rates::ordering_halves;

fn main() {
    for order in 1..=4 {
        let t0 = Instant::now();
        let (left, right) = ordering_halves(Atom::A, order).unwrap();
        let t_build = t0.elapsed();
        let t0 = Instant::now();
        let d = left.sub(&right);
        let n_raw = d.terms.len();
        let z = d.chain_form();
        println!(
            "order {order}: build {t_build:?}, raw {n_raw}, chain {:?}, zero: {}",
            t0.elapsed(),
            z.terms.is_empty()
        );
    }
}
