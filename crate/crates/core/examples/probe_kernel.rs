use ddc_core::kernels::*;
fn main() {
    let l = 1.0;
    for (box_l, cutoff, dt_shift) in [(40.0, 12.0, 0.7), (48.0, 12.0, 0.7), (40.0, 14.0, 0.6)] {
        let modes = ModeSet::new(box_l, cutoff, 3).unwrap();
        let cont = ContinuumKernels::new(l).unwrap();
        for &dt in &[0.4, 0.9, 1.4] {
            let z = num::complex::Complex64::new(dt, -dt_shift * l);
            let disc = discrete_wightman(&modes, [0.0;3], [l,0.0,0.0], z);
            let exact = cont.wightman(z);
            println!("box {box_l} cut {cutoff} shift {dt_shift} dt={dt}: rel {:.3e}", (disc-exact).norm()/exact.norm());
        }
    }
    // Cesàro
    for window in [0.4f64, 0.8, 1.2] {
        println!("window {window}");
        let cont = ContinuumKernels::new(l).unwrap();
        let n = 4000;
        let mut target = 0.0;
        for i in 0..n { let t = window*(i as f64+0.5)/n as f64; target += cont.c_f(t, 0.0).re; }
        target /= n as f64;
        for cutoff in [4.0, 6.0, 8.0, 10.0, 12.0, 14.0] {
            let modes = ModeSet::new(16.0, cutoff, 3).unwrap();
            let (c, _) = field_kernels_discrete(&modes, [0.0;3], [l,0.0,0.0]).unwrap();
            let mut smeared = 0.0;
            for &(amp, f) in &c.components {
                let s = if f.abs() < 1e-12 { 1.0 } else { (f*window).sin()/(f*window) };
                smeared += amp.re * s;
            }
            println!("  cutoff {cutoff}: smeared {smeared:.6e} target {target:.6e}");
        }
    }
}
