//! Development probe: first-principles check of the split-transfer step.
//!
//! LHS integrand: C^F(τ−τ₃) χ^F(τ₂−τ₁) ⟨[B₃,B₂]⟩ ⟨[A₁,[A,H_A]]⟩
//! RHS integrand: C^F(τ−τ₃) χ^F(τ₂−τ₁) ⟨[B₃,[B₂,H_B]]⟩ ⟨[A₁,A]⟩
//! over τ₃<τ₂<τ₁<τ=0 with damping e^{ε(τ_i−τ)}.

use ddc_core::evaluator::gauss_legendre;
use ddc_core::kernels::{field_kernels_discrete, ModeSet};
use num::complex::Complex64 as C;

fn main() {
    let modes = ModeSet::new(11.0, 1.75, 1).unwrap();
    let (cf, chif) = field_kernels_discrete(&modes, [0.0; 3], [2.0, 0.0, 0.0]).unwrap();
    let (wa, wb) = (1.23, 0.83);

    for eps in [1.0, 0.6, 0.35, 0.2] {
        let window = 45.0 / eps;
        let lhs_int = |t1: f64, t2: f64, t3: f64| -> C {
            let k = cf.eval(0.0 - t3) * chif.eval(t2 - t1);
            let atoms = C::new(0.0, wa / 4.0)
                * (wb * (t3 - t2)).sin()
                * (wa * (0.0 - t1)).cos();
            k * atoms
        };
        let rhs_int = |t1: f64, t2: f64, t3: f64| -> C {
            let k = cf.eval(0.0 - t3) * chif.eval(t2 - t1);
            let atoms = C::new(0.0, wb / 4.0)
                * (wb * (t3 - t2)).cos()
                * (wa * (t1 - 0.0)).sin();
            k * atoms
        };
        // triple composite quadrature over the chain
        let (gx, gw) = gauss_legendre(8);
        let mut quad = |f: &dyn Fn(f64, f64, f64) -> C| -> C {
            let mut acc = C::new(0.0, 0.0);
            let panels = |lo: f64, hi: f64| ((hi - lo) / 1.2).ceil().max(1.0) as usize;
            let lo = -window;
            let p1 = panels(lo, 0.0);
            let s1 = (0.0 - lo) / p1 as f64;
            for i1 in 0..p1 {
                let a1 = lo + i1 as f64 * s1;
                for (x1, w1) in gx.iter().zip(&gw) {
                    let t1 = a1 + 0.5 * s1 * (x1 + 1.0);
                    let p2 = panels(lo, t1);
                    let s2 = (t1 - lo) / p2 as f64;
                    for i2 in 0..p2 {
                        let a2 = lo + i2 as f64 * s2;
                        for (x2, w2) in gx.iter().zip(&gw) {
                            let t2 = a2 + 0.5 * s2 * (x2 + 1.0);
                            let p3 = panels(lo, t2);
                            let s3 = (t2 - lo) / p3 as f64;
                            for i3 in 0..p3 {
                                let a3 = lo + i3 as f64 * s3;
                                for (x3, w3) in gx.iter().zip(&gw) {
                                    let t3 = a3 + 0.5 * s3 * (x3 + 1.0);
                                    let damp = (eps * (t1 + t2 + t3)).exp();
                                    acc += w1 * w2 * w3 * damp * f(t1, t2, t3)
                                        * (0.125 * s1 * s2 * s3);
                                }
                            }
                        }
                    }
                }
            }
            acc
        };
        let l = quad(&lhs_int);
        let r = quad(&rhs_int);
        println!("eps {eps}: lhs {l:.6e}  rhs {r:.6e}  ratio {:.4}", (l / r).re);
    }
}
