//! Development probe: derived-potential evaluation against the
//! perturbation-theory oracle on a shared discrete mode set.

use ddc_core::evaluator::{delta_e_channel, derived_terms, EvalConfig, KernelResolver, QuadratureConfig};
use ddc_core::kernels::ModeSet;
use ddc_core::oracle::{interatomic_part, rs4_shift};
use ddc_core::rates::Channel;

fn main() {
    let modes = ModeSet::new(11.0, 1.75, 1).unwrap();
    println!("modes: {}", modes.modes.len());
    let config = EvalConfig {
        omega_a: 1.23,
        omega_b: 0.83,
        mu: 1.0,
        separation: 2.0,
        box_length: 11.0,
        cutoff: 1.75,
        dim: 1,
        quad: QuadratureConfig {
            eps_ladder: (0..10).map(|j| 0.4 / f64::powi(2.0, j)).collect(),
            ..QuadratureConfig::default()
        },
    };
    let positions = config.positions();
    let rs4 = interatomic_part(
        rs4_shift,
        &modes,
        positions,
        config.omega_a,
        config.omega_b,
        config.mu,
        2,
    )
    .unwrap();
    println!("rs4 interatomic: {rs4:.12e}");

    let resolver = KernelResolver::from_modes(&modes, &config).unwrap();
    let vf_terms = derived_terms(Channel::Vf).unwrap();
    let rr_terms = derived_terms(Channel::Rr).unwrap();
    let vf = delta_e_channel(&vf_terms, &resolver, config.mu, &config.quad).unwrap();
    let rr = delta_e_channel(&rr_terms, &resolver, config.mu, &config.quad).unwrap();
    println!("ddc vf: {} err {:.2e}", vf.value, vf.error);
    println!("ddc rr: {} err {:.2e}", rr.value, rr.error);
    let total = vf.value + rr.value;
    println!("ddc total: {total}");
    println!(
        "rel diff vs rs4: {:.3e}",
        (total.re - rs4).abs() / rs4.abs()
    );
    for (eps, v, r) in vf
        .ladder
        .iter()
        .zip(&rr.ladder)
        .enumerate()
        .map(|(j, (v, r))| (config.quad.eps_ladder[j], v, r))
    {
        println!("  eps {eps:.5}: vf {v:.9}, rr {r:.9}");
    }
}
