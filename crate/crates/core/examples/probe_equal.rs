//! Development probe: equal-frequency limit and timing measurements.

use std::time::Instant;

use ddc_core::evaluator::{delta_e_channel, derived_terms, EvalConfig, KernelResolver, QuadratureConfig};
use ddc_core::extract::effective_hamiltonian;
use ddc_core::kernels::ModeSet;
use ddc_core::oracle::{interatomic_part, rs4_shift};
use ddc_core::rates::Channel;

fn main() {
    let t0 = Instant::now();
    let _ = effective_hamiltonian(Channel::Rr, 2).unwrap();
    println!("rr-2 derivation: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let _ = effective_hamiltonian(Channel::Vf, 4).unwrap();
    println!("vf-4 derivation: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let _ = effective_hamiltonian(Channel::Rr, 4).unwrap();
    println!("rr-4 derivation: {:?}", t0.elapsed());
    let t0 = Instant::now();
    let _ = derived_terms(Channel::Vf).unwrap();
    let _ = derived_terms(Channel::Rr).unwrap();
    println!("derived terms (cached path): {:?}", t0.elapsed());

    // equal-frequency limit
    let modes = ModeSet::new(11.0, 1.75, 1).unwrap();
    let w = 1.23;
    let config = EvalConfig {
        omega_a: w,
        omega_b: w,
        mu: 1.0,
        separation: 2.0,
        box_length: 11.0,
        cutoff: 1.75,
        dim: 1,
        quad: QuadratureConfig {
            eps_ladder: (0..12).map(|j| 0.4 / f64::powi(2.0, j)).collect(),
            ..QuadratureConfig::default()
        },
    };
    let rs4 = interatomic_part(rs4_shift, &modes, config.positions(), w, w, 1.0, 2).unwrap();
    let resolver = KernelResolver::from_modes(&modes, &config).unwrap();
    let t0 = Instant::now();
    let vf = delta_e_channel(&derived_terms(Channel::Vf).unwrap(), &resolver, 1.0, &config.quad).unwrap();
    let rr = delta_e_channel(&derived_terms(Channel::Rr).unwrap(), &resolver, 1.0, &config.quad).unwrap();
    println!("equal-frequency evaluation: {:?}", t0.elapsed());
    let total = vf.value + rr.value;
    println!("rs4 {rs4:.10e}  ddc {:.10e}+{:.2e}i", total.re, total.im);
    println!("rel diff: {:.3e}", (total.re - rs4).abs() / rs4.abs());
    println!("vf err {:.2e}, rr err {:.2e}", vf.error, rr.error);
}
