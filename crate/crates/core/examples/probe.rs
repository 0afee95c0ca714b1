//! Development probe: print derived effective Hamiltonians.

use ddc_core::extract::{effective_hamiltonian, ground_state_average};
use ddc_core::rates::Channel;

fn main() {
    for (ch, order) in [
        (Channel::Rr, 2),
        (Channel::Vf, 2),
        (Channel::Vf, 4),
        (Channel::Rr, 4),
    ] {
        println!("==== channel {ch} order {order}");
        match effective_hamiltonian(ch, order) {
            Err(e) => println!("error: {e}"),
            Ok(eff) => {
                println!("discarded: {:?}  odd-dropped: {}", eff.discarded_by_power, eff.dropped_odd);
                for t in &eff.terms {
                    println!("  X: {}", t.dump_line());
                }
                for p in ground_state_average(&eff.terms) {
                    println!("  avg: {}", p.dump_line());
                }
            }
        }
    }
}
