//! Concrete statistical functions of the field and of the atoms for static
//! synchronous trajectories.
//!
//! The field functions are half the vacuum expectation of the anticommutator
//! (C^F, symmetric) and of the commutator (χ^F, antisymmetric) of the free
//! field at two worldline points. On a periodic box with modes k = 2πn/L_box
//! and couplings g_k = [2 ω_k L_box^d]^{−1/2}, the Wightman function of two
//! static points at separation r is
//!
//! ```text
//! W(Δτ) = Σ_k g_k² cos(k·r) e^{−i ω_k Δτ}
//! ```
//!
//! so C^F(Δτ) = Σ g² cos(k·r) cos(ω Δτ) and χ^F(Δτ) = −i Σ g² cos(k·r)
//! sin(ω Δτ). The continuum closed form (the oracle for mode-sum
//! convergence) comes from W = −1/(4π²)·[(Δτ−iε)² − L²]^{−1}.
//!
//! Atomic functions of a ground-state atom of frequency ω:
//! C^ξ(Δτ) = cos(ω Δτ)/4 and χ^ξ(Δτ) = −i sin(ω Δτ)/4.
//!
//! Kernels carry no regulator; adiabatic damping belongs to the evaluator.

use num::complex::Complex64;

use crate::error::CoreError;

/// Symmetry tag of a stationary kernel in the time difference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Even,
    Odd,
}

/// A static worldline at a fixed position (proper time = coordinate time).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub position: [f64; 3],
}

impl Trajectory {
    pub fn static_at(position: [f64; 3]) -> Self {
        Trajectory { position }
    }

    /// dt/dτ for a static worldline.
    pub fn time_dilation(&self) -> f64 {
        1.0
    }
}

/// Stationary two-point kernel as a finite sum of complex amplitudes times
/// complex exponentials: K(Δτ) = Σ a_j e^{−i f_j Δτ}.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralKernel {
    pub components: Vec<(Complex64, f64)>,
    pub symmetry: Symmetry,
}

impl SpectralKernel {
    pub fn eval(&self, dt: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(a, f) in &self.components {
            acc += a * Complex64::new(0.0, -f * dt).exp();
        }
        acc
    }

    /// Number of exponential components.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Atomic statistical functions (C^ξ, χ^ξ) of a ground-state two-level atom.
pub fn atomic_kernels(omega: f64) -> Result<(SpectralKernel, SpectralKernel), CoreError> {
    if !(omega > 0.0) {
        return Err(CoreError::InvalidFrequency(omega));
    }
    let c = SpectralKernel {
        components: vec![
            (Complex64::new(0.125, 0.0), omega),
            (Complex64::new(0.125, 0.0), -omega),
        ],
        symmetry: Symmetry::Even,
    };
    let chi = SpectralKernel {
        components: vec![
            (Complex64::new(0.125, 0.0), omega),
            (Complex64::new(-0.125, 0.0), -omega),
        ],
        symmetry: Symmetry::Odd,
    };
    Ok((c, chi))
}

/// Discrete field modes in a periodic box with an isotropic frequency cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    /// (wavevector, frequency ω = |k|, coupling g).
    pub modes: Vec<([f64; 3], f64, f64)>,
    pub box_length: f64,
    pub cutoff: f64,
    pub dim: u32,
}

impl ModeSet {
    /// Enumerate modes k = 2πn/L over the d-dimensional integer lattice
    /// (zero mode excluded), ω = |k| ≤ cutoff, g = [2ω L^d]^{−1/2}.
    pub fn new(box_length: f64, cutoff: f64, dim: u32) -> Result<Self, CoreError> {
        if !(box_length > 0.0) || !(cutoff > 0.0) {
            return Err(CoreError::InvalidModes(format!(
                "box_length {box_length}, cutoff {cutoff}"
            )));
        }
        if !(1..=3).contains(&dim) {
            return Err(CoreError::InvalidModes(format!("dimension {dim}")));
        }
        let dk = 2.0 * std::f64::consts::PI / box_length;
        let nmax = (cutoff / dk).floor() as i64;
        let measure = box_length.powi(dim as i32);
        let mut modes = Vec::new();
        let range = |on: bool| -> Vec<i64> {
            if on {
                (-nmax..=nmax).collect()
            } else {
                vec![0]
            }
        };
        for nx in range(true) {
            for ny in range(dim >= 2).clone() {
                for nz in range(dim >= 3).clone() {
                    if nx == 0 && ny == 0 && nz == 0 {
                        continue;
                    }
                    let k = [nx as f64 * dk, ny as f64 * dk, nz as f64 * dk];
                    let omega = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
                    if omega > cutoff {
                        continue;
                    }
                    let g = 1.0 / (2.0 * omega * measure).sqrt();
                    modes.push((k, omega, g));
                }
            }
        }
        if modes.is_empty() {
            return Err(CoreError::InvalidModes(
                "cutoff below the lowest box mode".into(),
            ));
        }
        modes.sort_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .unwrap()
                .then(a.0[0].partial_cmp(&b.0[0]).unwrap())
                .then(a.0[1].partial_cmp(&b.0[1]).unwrap())
                .then(a.0[2].partial_cmp(&b.0[2]).unwrap())
        });
        Ok(ModeSet {
            modes,
            box_length,
            cutoff,
            dim,
        })
    }

    /// Plain-text table `kx ky kz omega g`, one mode per row.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        s.push_str("# kx ky kz omega g\n");
        for (k, w, g) in &self.modes {
            s.push_str(&format!("{:e} {:e} {:e} {:e} {:e}\n", k[0], k[1], k[2], w, g));
        }
        s
    }

    pub fn from_table(text: &str) -> Result<Self, CoreError> {
        let mut modes = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<f64> = line
                .split_whitespace()
                .map(|c| c.parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CoreError::InvalidModes(format!("bad mode row: {e}")))?;
            if cols.len() != 5 {
                return Err(CoreError::InvalidModes(format!(
                    "expected 5 columns, got {}",
                    cols.len()
                )));
            }
            modes.push(([cols[0], cols[1], cols[2]], cols[3], cols[4]));
        }
        if modes.is_empty() {
            return Err(CoreError::InvalidModes("empty table".into()));
        }
        Ok(ModeSet {
            modes,
            box_length: 0.0,
            cutoff: 0.0,
            dim: 0,
        })
    }
}

/// Field statistical functions (C^F, χ^F) between two static positions, from
/// a discrete mode set. Components are aggregated per distinct frequency.
pub fn field_kernels_discrete(
    modes: &ModeSet,
    xa: [f64; 3],
    xb: [f64; 3],
) -> Result<(SpectralKernel, SpectralKernel), CoreError> {
    if modes.modes.is_empty() {
        return Err(CoreError::InvalidModes("empty mode set".into()));
    }
    let r = [xa[0] - xb[0], xa[1] - xb[1], xa[2] - xb[2]];
    // weight per distinct frequency: Σ g² cos(k·r); keyed by the exact bit
    // pattern of ω (equal frequencies are computed identically)
    let mut acc: std::collections::BTreeMap<u64, f64> = std::collections::BTreeMap::new();
    for (k, w, g) in &modes.modes {
        let kr = k[0] * r[0] + k[1] * r[1] + k[2] * r[2];
        *acc.entry(w.to_bits()).or_insert(0.0) += g * g * kr.cos();
    }
    let weights: Vec<(f64, f64)> = acc
        .into_iter()
        .map(|(bits, wgt)| (f64::from_bits(bits), wgt))
        .collect();
    let mut c_comps = Vec::with_capacity(2 * weights.len());
    let mut chi_comps = Vec::with_capacity(2 * weights.len());
    for &(w, wgt) in &weights {
        // cos(ωΔτ)·wgt → (wgt/2) e^{−iωΔτ} + (wgt/2) e^{+iωΔτ}
        c_comps.push((Complex64::new(0.5 * wgt, 0.0), w));
        c_comps.push((Complex64::new(0.5 * wgt, 0.0), -w));
        // −i sin(ωΔτ)·wgt → (wgt/2) e^{−iωΔτ} − (wgt/2) e^{+iωΔτ}
        chi_comps.push((Complex64::new(0.5 * wgt, 0.0), w));
        chi_comps.push((Complex64::new(-0.5 * wgt, 0.0), -w));
    }
    Ok((
        SpectralKernel {
            components: c_comps,
            symmetry: Symmetry::Even,
        },
        SpectralKernel {
            components: chi_comps,
            symmetry: Symmetry::Odd,
        },
    ))
}

/// Continuum field kernels at separation L with an explicit iε prescription.
#[derive(Debug, Clone, Copy)]
pub struct ContinuumKernels {
    pub separation: f64,
}

impl ContinuumKernels {
    pub fn new(separation: f64) -> Result<Self, CoreError> {
        if !(separation > 0.0) {
            return Err(CoreError::InvalidSeparation(separation));
        }
        Ok(ContinuumKernels { separation })
    }

    /// Wightman function W(Δτ − iε) = −1/(4π²)·[(Δτ−iε)² − L²]^{−1}.
    pub fn wightman(&self, dt: Complex64) -> Complex64 {
        let l = self.separation;
        let z = dt * dt - Complex64::new(l * l, 0.0);
        -1.0 / (4.0 * std::f64::consts::PI * std::f64::consts::PI) / z
    }

    /// C^F(Δτ) with regulator ε ≥ 0: half the sum W(Δτ−iε) + W(−Δτ−iε).
    pub fn c_f(&self, dt: f64, eps: f64) -> Complex64 {
        0.5 * (self.wightman(Complex64::new(dt, -eps))
            + self.wightman(Complex64::new(-dt, -eps)))
    }

    /// χ^F(Δτ) with regulator ε ≥ 0: half the difference.
    pub fn chi_f(&self, dt: f64, eps: f64) -> Complex64 {
        0.5 * (self.wightman(Complex64::new(dt, -eps))
            - self.wightman(Complex64::new(-dt, -eps)))
    }
}

/// Discrete Wightman function evaluated at a complex time difference
/// (the imaginary shift plays the role of a smooth UV damping when comparing
/// against the continuum closed form).
pub fn discrete_wightman(modes: &ModeSet, xa: [f64; 3], xb: [f64; 3], dt: Complex64) -> Complex64 {
    let r = [xa[0] - xb[0], xa[1] - xb[1], xa[2] - xb[2]];
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, w, g) in &modes.modes {
        let kr = k[0] * r[0] + k[1] * r[1] + k[2] * r[2];
        acc += g * g * kr.cos() * (Complex64::new(0.0, -1.0) * w * dt).exp();
    }
    acc
}
