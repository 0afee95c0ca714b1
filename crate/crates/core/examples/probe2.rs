//! Development probe: inspect the interatomic fourth-order rate groups.

use ddc_core::algebra::Atom;
use ddc_core::extract::interatomic_rate;
use ddc_core::rates::Channel;

fn main() {
    let rate = interatomic_rate(Atom::A, Channel::Vf, 4).unwrap();
    let canon = rate.kept.canonicalize();
    println!("vf-4 interatomic monomials: {}", canon.terms.len());
    for m in canon.terms.iter().take(40) {
        println!("  {m}");
    }
}
