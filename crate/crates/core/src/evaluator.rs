//! Numerical evaluation of the derived kernel integrals.
//!
//! Every kernel is a finite sum of exponentials, so with adiabatic damping
//! e^{ε(τ_i−τ)} on each vertex the nested integrals over (−∞, upper] are
//! elementary: integrating a variable v whose subtree carries the frequency
//! sum S_v and D_v damped vertices gives a factor 1/(−i S_v + D_v ε) and
//! pushes the exponent onto the parent. The result is exact for given ε > 0;
//! the physical value is the ε → 0 limit, taken by Richardson extrapolation
//! over a decreasing ladder. A brute-force nested quadrature over the finite
//! window [τ−T, τ] cross-validates the closed form.
//!
//! The term sets evaluated here are produced by the symbolic layer
//! ([`crate::extract::potential_terms`]); nothing numerical is transcribed
//! from closed-form expressions.

use num::complex::Complex64;
use num::Zero;

use crate::algebra::{to_c64, KernelSym, Time};
use crate::error::CoreError;
use crate::extract::potential_terms;
use crate::kernels::{atomic_kernels, field_kernels_discrete, ModeSet, SpectralKernel};
use crate::par;
use crate::rates::Channel;
use crate::structure::PotentialTerm;

/// Regulator ladder and quadrature controls.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    /// Strictly decreasing ε values; the limit is extrapolated to ε → 0.
    pub eps_ladder: Vec<f64>,
    /// Finite window T = τ − τ₀ for the direct-quadrature cross-check.
    pub window: f64,
    /// Gauss–Legendre nodes per dimension for the cross-check.
    pub nodes: usize,
    /// Target relative tolerance of the extrapolation.
    pub tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            eps_ladder: (0..8).map(|j| 0.2 / f64::powi(2.0, j)).collect(),
            window: 200.0,
            nodes: 48,
            tol: 1e-7,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), CoreError> {
        if self.eps_ladder.is_empty() || self.eps_ladder.iter().any(|&e| !(e > 0.0)) {
            return Err(CoreError::InvalidConfig("ε ladder must be positive".into()));
        }
        if self.eps_ladder.windows(2).any(|w| w[1] >= w[0]) {
            return Err(CoreError::InvalidConfig(
                "ε ladder must be strictly decreasing".into(),
            ));
        }
        if !(self.window > 0.0) {
            return Err(CoreError::InvalidConfig("window must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(CoreError::InvalidConfig("tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Physical configuration of one evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub omega_a: f64,
    pub omega_b: f64,
    pub mu: f64,
    pub separation: f64,
    pub box_length: f64,
    pub cutoff: f64,
    pub dim: u32,
    pub quad: QuadratureConfig,
}

impl EvalConfig {
    pub fn validate(&self) -> Result<(), CoreError> {
        for (name, v) in [
            ("omega_a", self.omega_a),
            ("omega_b", self.omega_b),
            ("mu", self.mu),
            ("separation", self.separation),
            ("box_length", self.box_length),
            ("cutoff", self.cutoff),
        ] {
            if !(v > 0.0) {
                return Err(CoreError::InvalidConfig(format!("{name} must be > 0, got {v}")));
            }
        }
        self.quad.validate()
    }

    pub fn positions(&self) -> ([f64; 3], [f64; 3]) {
        ([0.0; 3], [self.separation, 0.0, 0.0])
    }
}

/// Resolved spectral kernels for one configuration.
#[derive(Debug, Clone)]
pub struct KernelResolver {
    /// (C^F, χ^F) between the two worldlines.
    pub field_cross: (SpectralKernel, SpectralKernel),
    /// (C^F, χ^F) of each worldline with itself.
    pub field_self: [(SpectralKernel, SpectralKernel); 2],
    /// (C^ξ, χ^ξ) per atom.
    pub atom: [(SpectralKernel, SpectralKernel); 2],
}

impl KernelResolver {
    pub fn from_modes(modes: &ModeSet, config: &EvalConfig) -> Result<Self, CoreError> {
        let (xa, xb) = config.positions();
        let cross = field_kernels_discrete(modes, xa, xb)?;
        let self_a = field_kernels_discrete(modes, xa, xa)?;
        let self_b = field_kernels_discrete(modes, xb, xb)?;
        Ok(KernelResolver {
            field_cross: cross,
            field_self: [self_a, self_b],
            atom: [
                atomic_kernels(config.omega_a)?,
                atomic_kernels(config.omega_b)?,
            ],
        })
    }

    /// The spectral kernel and time-argument pair behind a kernel symbol.
    fn lookup(&self, k: &KernelSym) -> (&SpectralKernel, Time, Time) {
        match *k {
            KernelSym::FieldCorr(p, q) => {
                let sk = if p.wl == q.wl {
                    &self.field_self[p.wl.index()].0
                } else {
                    &self.field_cross.0
                };
                (sk, p.t, q.t)
            }
            KernelSym::FieldSusc(p, q) => {
                let sk = if p.wl == q.wl {
                    &self.field_self[p.wl.index()].1
                } else {
                    &self.field_cross.1
                };
                (sk, p.t, q.t)
            }
            KernelSym::AtomCorr(a, s, t) => (&self.atom[a.index()].0, s, t),
            KernelSym::AtomSusc(a, s, t) => (&self.atom[a.index()].1, s, t),
        }
    }
}

/// Slot index of a symbolic time in the frequency accumulator.
fn time_slot(t: Time) -> usize {
    match t {
        Time::Outer => 0,
        Time::Var(k) => k as usize,
        Time::Origin => panic!("switch-on time must not survive into evaluated terms"),
    }
}

const MAX_SLOTS: usize = 5;

/// Precomputed structure of one term for the spectral fold.
struct TermPlan<'a> {
    coeff: Complex64,
    kernels: Vec<(&'a SpectralKernel, usize, usize)>,
    /// children[v] lists the variables directly bounded by v; index 0 is τ.
    children: Vec<Vec<u32>>,
    vars: Vec<u32>,
}

fn plan<'a>(
    term: &'a PotentialTerm,
    resolver: &'a KernelResolver,
    mu: f64,
) -> Result<TermPlan<'a>, CoreError> {
    let vars = term.domain.vars();
    if vars.iter().any(|&v| v as usize >= MAX_SLOTS) {
        return Err(CoreError::InvalidConfig(
            "term has more nesting than the evaluator supports".into(),
        ));
    }
    let mut children = vec![Vec::new(); MAX_SLOTS];
    for (&v, &up) in &term.domain.0 {
        match up {
            Time::Outer => children[0].push(v),
            Time::Var(p) => children[p as usize].push(v),
            Time::Origin => {
                return Err(CoreError::InvalidConfig("variable bounded by τ₀".into()))
            }
        }
    }
    let kernels = term
        .kernels
        .iter()
        .map(|k| {
            let (sk, t1, t2) = resolver.lookup(k);
            (sk, time_slot(t1), time_slot(t2))
        })
        .collect();
    Ok(TermPlan {
        coeff: to_c64(&term.coeff) * mu.powi(term.mu_pow as i32),
        kernels,
        children,
        vars,
    })
}

/// Subtree frequency sum and damped-vertex count of variable v.
fn subtree(plan: &TermPlan, freqs: &[f64; MAX_SLOTS], v: u32) -> (f64, u32) {
    let mut s = freqs[v as usize];
    let mut d = 1u32;
    for &c in &plan.children[v as usize] {
        let (cs, cd) = subtree(plan, freqs, c);
        s += cs;
        d += cd;
    }
    (s, d)
}

/// Closed-form value of one combo: ∏_v 1/(−i S_v + D_v ε).
fn fold_combo(plan: &TermPlan, freqs: &[f64; MAX_SLOTS], eps: f64) -> Result<Complex64, CoreError> {
    let mut acc = Complex64::new(1.0, 0.0);
    for &v in &plan.vars {
        let (s, d) = subtree(plan, freqs, v);
        let denom = Complex64::new(d as f64 * eps, -s);
        if denom.norm_sqr() == 0.0 {
            return Err(CoreError::RequiresRegulator);
        }
        acc /= denom;
    }
    Ok(acc)
}

fn combos_from(
    plan: &TermPlan,
    k: usize,
    amp: Complex64,
    freqs: &mut [f64; MAX_SLOTS],
    eps: f64,
    acc: &mut Complex64,
) -> Result<(), CoreError> {
    if k == plan.kernels.len() {
        *acc += amp * fold_combo(plan, freqs, eps)?;
        return Ok(());
    }
    let (sk, s1, s2) = plan.kernels[k];
    for &(a, f) in &sk.components {
        freqs[s1] += f;
        freqs[s2] -= f;
        combos_from(plan, k + 1, amp * a, freqs, eps, acc)?;
        freqs[s1] -= f;
        freqs[s2] += f;
    }
    Ok(())
}

/// Exact (for given ε > 0) closed-form value of one nested kernel integral.
pub fn nested_integral_spectral(
    term: &PotentialTerm,
    resolver: &KernelResolver,
    mu: f64,
    eps: f64,
) -> Result<Complex64, CoreError> {
    if !(eps > 0.0) {
        return Err(CoreError::RequiresRegulator);
    }
    let plan = plan(term, resolver, mu)?;
    if plan.kernels.is_empty() && plan.vars.is_empty() {
        return Ok(plan.coeff);
    }
    // Parallel over the outermost kernel's components, ordered partial sums.
    let value = if let Some(&(sk0, s1, s2)) = plan.kernels.first() {
        let partials: Vec<Result<Complex64, CoreError>> =
            par::map_range(sk0.components.len(), |i| {
                let (a, f) = sk0.components[i];
                let mut freqs = [0.0; MAX_SLOTS];
                freqs[s1] += f;
                freqs[s2] -= f;
                let mut acc = Complex64::zero();
                combos_from(&plan, 1, a, &mut freqs, eps, &mut acc)?;
                Ok(acc)
            });
        let mut acc = Complex64::zero();
        for p in partials {
            acc += p?;
        }
        acc
    } else {
        let mut freqs = [0.0; MAX_SLOTS];
        let mut acc = Complex64::zero();
        combos_from(&plan, 0, Complex64::new(1.0, 0.0), &mut freqs, eps, &mut acc)?;
        acc
    };
    Ok(plan.coeff * value)
}

/// Brute-force nested Gauss–Legendre quadrature of the same integral over
/// the finite window [−T, 0] with the same damping; converges to the
/// spectral value as T grows.
pub fn direct_time_quadrature(
    term: &PotentialTerm,
    resolver: &KernelResolver,
    mu: f64,
    window: f64,
    eps: f64,
    nodes: usize,
) -> Result<Complex64, CoreError> {
    if nodes < 2 {
        return Err(CoreError::InvalidConfig("need at least 2 nodes".into()));
    }
    let plan = plan(term, resolver, mu)?;
    let (gx, gw) = gauss_legendre(nodes);
    // integrate variables parents-first so that bounds are known
    let mut order: Vec<u32> = Vec::new();
    let mut pending: Vec<u32> = plan.vars.clone();
    while !pending.is_empty() {
        let before = order.len();
        pending.retain(|&v| {
            let parent_known = match term.domain.0[&v] {
                Time::Outer => true,
                Time::Var(p) => order.contains(&p),
                Time::Origin => false,
            };
            if parent_known {
                order.push(v);
                false
            } else {
                true
            }
        });
        if order.len() == before {
            return Err(CoreError::InvalidConfig("cyclic domain".into()));
        }
    }

    fn rec(
        plan: &TermPlan,
        term: &PotentialTerm,
        order: &[u32],
        depth: usize,
        times: &mut [f64; MAX_SLOTS],
        window: f64,
        eps: f64,
        gx: &[f64],
        gw: &[f64],
    ) -> Complex64 {
        if depth == order.len() {
            let mut val = Complex64::new(1.0, 0.0);
            for &(sk, s1, s2) in &plan.kernels {
                val *= sk.eval(times[s1] - times[s2]);
            }
            for &v in &plan.vars {
                val *= (eps * times[v as usize]).exp();
            }
            return val;
        }
        let v = order[depth];
        let hi = match term.domain.0[&v] {
            Time::Outer => 0.0,
            Time::Var(p) => times[p as usize],
            Time::Origin => unreachable!(),
        };
        let lo = -window;
        if hi <= lo {
            times[v as usize] = 0.0;
            return Complex64::zero();
        }
        // composite panels keep enough nodes per oscillation period
        let panel_len = 1.5;
        let panels = (((hi - lo) / panel_len).ceil() as usize).max(1);
        let step = (hi - lo) / panels as f64;
        let mut acc = Complex64::zero();
        for p in 0..panels {
            let a = lo + p as f64 * step;
            let b = a + step;
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, w) in gx.iter().zip(gw) {
                times[v as usize] = mid + half * x;
                acc += *w * half * rec(plan, term, order, depth + 1, times, window, eps, gx, gw);
            }
        }
        times[v as usize] = 0.0;
        acc
    }

    let mut times = [0.0; MAX_SLOTS];
    let val = rec(
        &plan, term, &order, 0, &mut times, window, eps, &gx, &gw,
    );
    Ok(plan.coeff * val)
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            // Legendre P_n(z) and derivative by recurrence
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j as f64 + 1.0) * z * p1 - j as f64 * p2) / (j as f64 + 1.0);
            }
            let dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p0 / dp;
            if (z - z1).abs() < 1e-15 {
                let dp = {
                    let (mut p0, mut p1) = (1.0, 0.0);
                    for j in 0..n {
                        let p2 = p1;
                        p1 = p0;
                        p0 = ((2.0 * j as f64 + 1.0) * z * p1 - j as f64 * p2) / (j as f64 + 1.0);
                    }
                    n as f64 * (z * p0 - p1) / (z * z - 1.0)
                };
                x[i] = -z;
                x[n - 1 - i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
                w[n - 1 - i] = w[i];
                break;
            }
        }
    }
    (x, w)
}

/// Richardson (Neville) extrapolation of f(ε) to ε → 0.
///
/// Returns the extrapolated value, a conservative error estimate that
/// dominates both the last tableau correction and the difference of the two
/// smallest rungs, and the tableau correction itself (the convergence
/// measure).
pub fn richardson(eps: &[f64], values: &[Complex64]) -> (Complex64, f64, f64) {
    let n = eps.len();
    assert_eq!(n, values.len());
    if n == 1 {
        return (values[0], values[0].norm(), values[0].norm());
    }
    let mut t: Vec<Complex64> = values.to_vec();
    let mut prev_diag = t[0];
    let mut last_diag = t[0];
    for k in 1..n {
        for j in 0..(n - k) {
            let num = t[j + 1] * eps[j] - t[j] * eps[j + k];
            t[j] = num / (eps[j] - eps[j + k]);
        }
        prev_diag = last_diag;
        last_diag = t[0];
    }
    let rung_diff = (values[n - 1] - values[n - 2]).norm();
    let tableau = (last_diag - prev_diag).norm();
    (last_diag, tableau.max(rung_diff), tableau)
}

/// Channel potential: the ladder of exact spectral values of the derived
/// term set, extrapolated to ε → 0.
pub struct ChannelValue {
    pub value: Complex64,
    /// Conservative error bar (dominates the two smallest rungs).
    pub error: f64,
    /// Last extrapolation-tableau correction: the convergence measure.
    pub tableau_error: f64,
    pub ladder: Vec<Complex64>,
}

pub fn delta_e_channel(
    terms: &[PotentialTerm],
    resolver: &KernelResolver,
    mu: f64,
    quad: &QuadratureConfig,
) -> Result<ChannelValue, CoreError> {
    quad.validate()?;
    let ladder: Vec<Complex64> = quad
        .eps_ladder
        .iter()
        .map(|&eps| {
            let vals = par::map_collect(terms, |t| nested_integral_spectral(t, resolver, mu, eps));
            let mut acc = Complex64::zero();
            for v in vals {
                acc += v?;
            }
            Ok(acc)
        })
        .collect::<Result<_, CoreError>>()?;
    let (value, error, tableau_error) = richardson(&quad.eps_ladder, &ladder);
    Ok(ChannelValue {
        value,
        error,
        tableau_error,
        ladder,
    })
}

/// Result of one full evaluation.
#[derive(Debug, Clone)]
pub struct PotentialResult {
    pub separation: f64,
    pub delta_e_vf: f64,
    pub delta_e_rr: f64,
    pub delta_e_total: f64,
    pub imaginary_residual: f64,
    /// Convergence measure of the total: extrapolation-tableau correction of
    /// the summed ladder.
    pub error_estimate: f64,
    /// Conservative per-channel error bars (each dominates its two smallest
    /// ladder rungs).
    pub channel_errors: [f64; 2],
    pub epsilon_final: f64,
    pub config: EvalConfig,
}

/// δE_vf, δE_rr and their sum for one configuration, with the reality check.
///
/// The vf and rr term sets come from the symbolic derivation; they are
/// computed once per process and reused.
pub fn delta_e_total(config: &EvalConfig) -> Result<PotentialResult, CoreError> {
    config.validate()?;
    let modes = ModeSet::new(config.box_length, config.cutoff, config.dim)?;
    delta_e_total_with_modes(config, &modes)
}

pub fn delta_e_total_with_modes(
    config: &EvalConfig,
    modes: &ModeSet,
) -> Result<PotentialResult, CoreError> {
    config.validate()?;
    let resolver = KernelResolver::from_modes(modes, config)?;
    let vf_terms = derived_terms(Channel::Vf)?;
    let rr_terms = derived_terms(Channel::Rr)?;
    let vf = delta_e_channel(&vf_terms, &resolver, config.mu, &config.quad)?;
    let rr = delta_e_channel(&rr_terms, &resolver, config.mu, &config.quad)?;
    let total = vf.value + rr.value;
    let scale = total.norm().max(f64::MIN_POSITIVE);
    let residual = total.im.abs();
    // Extrapolation is linear, so the summed ladder measures the convergence
    // of the total directly (vf and rr drifts largely cancel there).
    let summed: Vec<Complex64> = vf
        .ladder
        .iter()
        .zip(&rr.ladder)
        .map(|(a, b)| a + b)
        .collect();
    let (_, _, total_tableau) = richardson(&config.quad.eps_ladder, &summed);
    let error = total_tableau.max(vf.tableau_error.min(rr.tableau_error) * 1e-3);
    // A real total is a consequence of the Hermitian effective Hamiltonians;
    // a residual above the declared tolerance signals a derivation or kernel
    // inconsistency rather than a numerical accident.
    if residual > config.quad.tol * scale {
        return Err(CoreError::ImaginaryResidual {
            residual,
            tol: config.quad.tol * scale,
        });
    }
    Ok(PotentialResult {
        separation: config.separation,
        delta_e_vf: vf.value.re,
        delta_e_rr: rr.value.re,
        delta_e_total: vf.value.re + rr.value.re,
        imaginary_residual: residual,
        error_estimate: error,
        channel_errors: [vf.error, rr.error],
        epsilon_final: *config.quad.eps_ladder.last().unwrap(),
        config: config.clone(),
    })
}

/// Process-wide cache of the derived fourth-order term sets.
pub fn derived_terms(channel: Channel) -> Result<Vec<PotentialTerm>, CoreError> {
    use std::sync::OnceLock;
    static VF: OnceLock<Result<Vec<PotentialTerm>, CoreError>> = OnceLock::new();
    static RR: OnceLock<Result<Vec<PotentialTerm>, CoreError>> = OnceLock::new();
    let slot = match channel {
        Channel::Vf => &VF,
        Channel::Rr => &RR,
    };
    slot.get_or_init(|| potential_terms(channel)).clone()
}

/// One result row per separation, kernels rebuilt for each L.
pub fn sweep_separation(
    base: &EvalConfig,
    separations: &[f64],
) -> Result<Vec<PotentialResult>, CoreError> {
    if separations.is_empty() {
        return Err(CoreError::InvalidConfig("empty separation list".into()));
    }
    // warm the derivation cache before going parallel
    derived_terms(Channel::Vf)?;
    derived_terms(Channel::Rr)?;
    let modes = ModeSet::new(base.box_length, base.cutoff, base.dim)?;
    let rows = par::map_collect(separations, |&l| {
        let mut c = base.clone();
        c.separation = l;
        delta_e_total_with_modes(&c, &modes)
    });
    rows.into_iter().collect()
}

/// CSV encoding of sweep rows: 15 significant digits, stable layout.
pub fn sweep_to_csv(rows: &[PotentialResult]) -> String {
    let mut s = String::from("L,deltaE_vf,deltaE_rr,deltaE_total,imag_residual,err_est,epsilon_final\n");
    for r in rows {
        s.push_str(&format!(
            "{:.14e},{:.14e},{:.14e},{:.14e},{:.14e},{:.14e},{:.14e}\n",
            r.separation,
            r.delta_e_vf,
            r.delta_e_rr,
            r.delta_e_total,
            r.imaginary_residual,
            r.error_estimate,
            r.epsilon_final
        ));
    }
    s
}

/// Evaluate an atom-operator-free scalar expression (phases plus kernel
/// symbols) with the same spectral machinery. Used by derivation-level
/// cross-checks.
pub fn eval_scalar_expr(
    expr: &crate::algebra::OperatorExpr,
    resolver: &KernelResolver,
    omega: [f64; 2],
    mu: f64,
    eps: f64,
) -> Result<Complex64, CoreError> {
    let mut acc = Complex64::zero();
    for m in &expr.terms {
        if !m.fields.is_empty() || m.atoms != [crate::algebra::AtomBasis::One; 2] {
            return Err(CoreError::UnsupportedPattern(
                "scalar evaluation of an operator-valued expression".into(),
            ));
        }
        // phases → frequency offsets
        let mut base_freqs = [0.0; MAX_SLOTS];
        for (&(a, t), &n) in &m.phase.0 {
            if t == Time::Origin {
                return Err(CoreError::UnsupportedPattern(
                    "switch-on phase in scalar evaluation".into(),
                ));
            }
            // e^{+i n ω t} = e^{−i (−n ω) t}
            base_freqs[time_slot(t)] -= n as f64 * omega[a.index()];
        }
        let term = PotentialTerm {
            coeff: m.coeff.clone(),
            mu_pow: m.mu_pow,
            domain: m.domain.clone(),
            kernels: m.kernels.clone(),
        };
        let plan = plan(&term, resolver, mu)?;
        let mut coeff = plan.coeff;
        for (i, &w) in omega.iter().enumerate() {
            coeff *= w.powi(m.omega_pow[i] as i32);
        }
        let mut sub = Complex64::zero();
        let mut freqs = base_freqs;
        combos_from(&plan, 0, Complex64::new(1.0, 0.0), &mut freqs, eps, &mut sub)?;
        acc += coeff * sub;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{crat, Atom, Domain, KernelSym, Time};
    use crate::kernels::Symmetry;

    fn synthetic_resolver(freqs: [f64; 2]) -> KernelResolver {
        // atom kernels carry single synthetic components; field kernels unused
        let one = |f: f64| SpectralKernel {
            components: vec![(Complex64::new(1.0, 0.0), f)],
            symmetry: Symmetry::Even,
        };
        KernelResolver {
            field_cross: (one(0.0), one(0.0)),
            field_self: [(one(0.0), one(0.0)), (one(0.0), one(0.0))],
            atom: [(one(freqs[0]), one(freqs[0])), (one(freqs[1]), one(freqs[1]))],
        }
    }

    fn term(domain: &[(u32, Time)], kernels: Vec<KernelSym>) -> PotentialTerm {
        PotentialTerm {
            coeff: crat(1, 1),
            mu_pow: 0,
            domain: Domain(domain.iter().copied().collect()),
            kernels,
        }
    }

    #[test]
    fn single_variable_antiderivative() {
        // ∫_{−∞}^{τ} dτ₁ e^{(iΩ+ε)(τ₁−τ)} = 1/(iΩ + ε)
        let omega = 0.9;
        let r = synthetic_resolver([-omega, 0.0]);
        let t = term(
            &[(1, Time::Outer)],
            vec![KernelSym::AtomCorr(Atom::A, Time::Var(1), Time::Outer)],
        );
        let got = nested_integral_spectral(&t, &r, 1.0, 0.05).unwrap();
        let expect = 1.0 / Complex64::new(0.05, omega);
        assert!((got - expect).norm() < 1e-14);
    }

    #[test]
    fn two_nested_variables_iterated_antiderivative() {
        // inner-then-outer chain → 1/((i(Ω₁+Ω₂)+2ε)(iΩ₂+ε))
        let (o1, o2) = (0.7, 1.3);
        let r = synthetic_resolver([-o1, -o2]);
        let t = term(
            &[(1, Time::Outer), (2, Time::Var(1))],
            vec![
                KernelSym::AtomCorr(Atom::A, Time::Var(1), Time::Outer),
                KernelSym::AtomCorr(Atom::B, Time::Var(2), Time::Outer),
            ],
        );
        let eps = 0.03;
        let got = nested_integral_spectral(&t, &r, 1.0, eps).unwrap();
        let expect = 1.0 / (Complex64::new(2.0 * eps, o1 + o2) * Complex64::new(eps, o2));
        assert!((got - expect).norm() / expect.norm() < 1e-14);
    }

    #[test]
    fn quadrature_converges_to_spectral_value() {
        let (o1, o2) = (0.7, 1.3);
        let r = synthetic_resolver([-o1, -o2]);
        let t = term(
            &[(1, Time::Outer), (2, Time::Var(1))],
            vec![
                KernelSym::AtomCorr(Atom::A, Time::Var(1), Time::Outer),
                KernelSym::AtomCorr(Atom::B, Time::Var(2), Time::Outer),
            ],
        );
        let eps = 0.2;
        let exact = nested_integral_spectral(&t, &r, 1.0, eps).unwrap();
        let quad = direct_time_quadrature(&t, &r, 1.0, 40.0 / eps, eps, 12).unwrap();
        assert!(
            (exact - quad).norm() / exact.norm() < 1e-3,
            "spectral {exact} vs quadrature {quad}"
        );
    }

    #[test]
    fn zero_kernel_term_quadrature_is_zero() {
        let r = synthetic_resolver([0.0, 0.0]);
        let mut t = term(
            &[(1, Time::Outer)],
            vec![KernelSym::AtomCorr(Atom::A, Time::Var(1), Time::Outer)],
        );
        t.coeff = crat(0, 1);
        let quad = direct_time_quadrature(&t, &r, 1.0, 50.0, 0.1, 16).unwrap();
        assert_eq!(quad, Complex64::zero());
    }

    #[test]
    fn resonant_denominator_requires_regulator() {
        let r = synthetic_resolver([0.0, 0.0]);
        let t = term(
            &[(1, Time::Outer)],
            vec![KernelSym::AtomCorr(Atom::A, Time::Var(1), Time::Outer)],
        );
        assert!(matches!(
            nested_integral_spectral(&t, &r, 1.0, 0.0),
            Err(CoreError::RequiresRegulator)
        ));
    }

    #[test]
    fn richardson_recovers_polynomial_limit() {
        let eps: Vec<f64> = (0..6).map(|j| 0.4 / f64::powi(2.0, j)).collect();
        let f = |e: f64| Complex64::new(2.5 - 1.3 * e + 0.7 * e * e, 0.4 * e);
        let vals: Vec<Complex64> = eps.iter().map(|&e| f(e)).collect();
        let (lim, err, tab) = richardson(&eps, &vals);
        assert!((lim - Complex64::new(2.5, 0.0)).norm() < 1e-12);
        assert!(err >= (vals[5] - vals[4]).norm());
        assert!(tab < 1e-12);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        // ∫_{-1}^{1} x^k dx
        for k in 0..16 {
            let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k)).sum();
            let expect = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((got - expect).abs() < 1e-13, "k={k}: {got} vs {expect}");
        }
    }

    #[test]
    fn config_validation() {
        let mut q = QuadratureConfig::default();
        q.eps_ladder = vec![0.1, 0.2];
        assert!(q.validate().is_err());
        let q2 = QuadratureConfig {
            eps_ladder: vec![],
            ..QuadratureConfig::default()
        };
        assert!(q2.validate().is_err());
        assert!(QuadratureConfig::default().validate().is_ok());
    }
}
