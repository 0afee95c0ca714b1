//! Recover the bracket presentation of a vacuum-reduced variation rate.
//!
//! After Wick reduction the interatomic rate is a canonical sum of monomials.
//! For extraction and for human-readable dumps we need it back in structured
//! form: kernel prefactors times a spectator monopole bracket times
//! `[R₂(t), [R₂(τ), R₃(τ)]]`-type structures around the rate atom's
//! Hamiltonian. The structured form is not transcribed: candidates are
//! enumerated and their exact coefficients are solved for over the monomial
//! basis, with a zero residual required. Candidate order fixes the
//! presentation when algebraically equivalent writings exist (cross-atom
//! anticommutators are preferred to spectator products).

use std::collections::BTreeMap;

use num::Zero;

use crate::algebra::{
    crat, Atom, CRat, Domain, KernelSym, Monomial, OperatorExpr, Time,
};
use crate::error::CoreError;
use crate::expand::{r2_free, r3_free};
use crate::structure::{AtomFactor, BracketKind};

/// One structured term of a variation rate, prior to generator extraction:
///
/// ```text
/// coeff · μ^mu_pow · ω_{rate_atom} · ∫(domain) · Π field kernels
///       · spectator · Bracket(R₂^{partner}(t), [R₂^{rate}(τ), R₃^{rate}(τ)])
/// ```
///
/// With `partner = None` the trailing factor is the bare inner commutator.
#[derive(Debug, Clone)]
pub struct RateTerm {
    pub coeff: CRat,
    pub mu_pow: u8,
    pub rate_atom: Atom,
    pub domain: Domain,
    pub field_kernels: Vec<KernelSym>,
    pub partner: Option<(Atom, Time, BracketKind)>,
    pub spectator: AtomFactor,
}

impl RateTerm {
    /// Inner commutator [R₂^{ξ,f}(τ), R₃^{ξ,f}(τ)] of the rate atom.
    pub fn inner_bracket(rate_atom: Atom) -> OperatorExpr {
        OperatorExpr::commutator(&r2_free(rate_atom, Time::Outer), &r3_free(rate_atom))
    }

    /// Expand to the operator algebra (including the implicit ω factor).
    pub fn expand(&self) -> OperatorExpr {
        let mut m = Monomial::scalar(self.coeff.clone());
        m.mu_pow = self.mu_pow;
        m.omega_pow[self.rate_atom.index()] = 1;
        m.kernels = self.field_kernels.clone();
        m.domain = self.domain.clone();
        let mut expr = OperatorExpr::from_monomial(m);
        let spect_atom = self.rate_atom.other();
        match self.spectator {
            AtomFactor::None => {}
            AtomFactor::Single(t) => expr = expr.mul(&r2_free(spect_atom, t)),
            AtomFactor::Pair(kind, t1, t2) => {
                let pair = match kind {
                    BracketKind::Comm => {
                        OperatorExpr::commutator(&r2_free(spect_atom, t1), &r2_free(spect_atom, t2))
                    }
                    BracketKind::Anti => OperatorExpr::anticommutator(
                        &r2_free(spect_atom, t1),
                        &r2_free(spect_atom, t2),
                    ),
                };
                expr = expr.mul(&pair);
            }
        }
        let inner = Self::inner_bracket(self.rate_atom);
        let tail = match self.partner {
            None => inner,
            Some((atom, t, kind)) => {
                let p = r2_free(atom, t);
                match kind {
                    BracketKind::Comm => OperatorExpr::commutator(&p, &inner),
                    BracketKind::Anti => OperatorExpr::anticommutator(&p, &inner),
                }
            }
        };
        expr.mul(&tail)
    }
}

/// Structure key of a monomial group: everything the brackets cannot change.
type GroupKey = (u8, [i8; 2], Vec<(u32, Time)>, Vec<KernelSym>);

/// Recover the structured form of a vacuum-reduced rate of `rate_atom`.
///
/// Fails with `UnsupportedPattern` if some group cannot be written over the
/// candidate structures, which would mean the derivation produced an
/// operator pattern outside the contract of this stage.
pub fn structurize(expr: &OperatorExpr, rate_atom: Atom) -> Result<Vec<RateTerm>, CoreError> {
    let canon = expr.canonicalize();
    if canon.terms.is_empty() {
        return Ok(Vec::new());
    }
    // Group representatives fix the candidate shapes; the solve itself is
    // global because α-equivalent monomials may canonicalize into different
    // labelings across groups.
    let mut groups: BTreeMap<GroupKey, Vec<Monomial>> = BTreeMap::new();
    for m in &canon.terms {
        let key: GroupKey = (
            m.mu_pow,
            m.omega_pow,
            m.domain.0.iter().map(|(&k, &v)| (k, v)).collect(),
            m.kernels.clone(),
        );
        groups.entry(key).or_default().push(m.clone());
    }
    let mut candidates = Vec::new();
    for (mu_pow, omega_pow, domain_vec, kernels) in groups.keys() {
        let mut expected_omega = [0i8; 2];
        expected_omega[rate_atom.index()] = 1;
        if *omega_pow != expected_omega {
            return Err(CoreError::UnsupportedPattern(format!(
                "rate group with frequency powers {omega_pow:?}"
            )));
        }
        let domain = Domain(domain_vec.iter().copied().collect());
        let template = RateTerm {
            coeff: crat(1, 1),
            mu_pow: *mu_pow,
            rate_atom,
            domain,
            field_kernels: kernels.clone(),
            partner: None,
            spectator: AtomFactor::None,
        };
        candidates.extend(enumerate_candidates(&template));
    }
    solve_group(&canon.terms, &candidates)
}

/// Candidate structured terms for one group, in preference order.
fn enumerate_candidates(template: &RateTerm) -> Vec<RateTerm> {
    let mut times: Vec<Time> = template.domain.vars().into_iter().map(Time::Var).collect();
    times.sort();
    let other = template.rate_atom.other();

    let mut partners: Vec<Option<(Atom, Time, BracketKind)>> = Vec::new();
    // cross-atom anticommutator first: preferred presentation at second order
    for &t in &times {
        partners.push(Some((other, t, BracketKind::Anti)));
    }
    for &t in &times {
        partners.push(Some((template.rate_atom, t, BracketKind::Comm)));
        partners.push(Some((template.rate_atom, t, BracketKind::Anti)));
    }
    partners.push(None);

    let mut spectators: Vec<AtomFactor> = vec![AtomFactor::None];
    for i in 0..times.len() {
        for j in (i + 1)..times.len() {
            spectators.push(AtomFactor::Pair(BracketKind::Anti, times[i], times[j]));
            spectators.push(AtomFactor::Pair(BracketKind::Comm, times[i], times[j]));
        }
    }
    for &t in &times {
        spectators.push(AtomFactor::Single(t));
    }

    let mut out = Vec::new();
    for p in &partners {
        for s in &spectators {
            // a cross-atom partner already carries the spectator monopole
            if matches!(p, Some((a, _, _)) if *a == other) && *s != AtomFactor::None {
                continue;
            }
            let mut c = template.clone();
            c.partner = *p;
            c.spectator = *s;
            out.push(c);
        }
    }
    out
}

/// Solve for exact candidate coefficients reproducing the group.
///
/// The solve runs in forest-preserving coordinates: a rate term on a square
/// domain is only ever matched by bracket structures on that same domain, so
/// the recovered presentation follows the derivation even when domain
/// splittings would allow a sparser equivalent.
fn solve_group(monos: &[Monomial], candidates: &[RateTerm]) -> Result<Vec<RateTerm>, CoreError> {
    let target = OperatorExpr {
        terms: monos.to_vec(),
    }
    .presentation_form();
    let cand_forms: Vec<OperatorExpr> = candidates
        .iter()
        .map(|c| c.expand().presentation_form())
        .collect();

    // Row space: union of monomial keys.
    let mut row_index: BTreeMap<_, usize> = BTreeMap::new();
    let add_rows = |e: &OperatorExpr, idx: &mut BTreeMap<_, usize>| {
        for m in &e.terms {
            let k = m.key();
            let n = idx.len();
            idx.entry(k).or_insert(n);
        }
    };
    add_rows(&target, &mut row_index);
    for cf in &cand_forms {
        add_rows(cf, &mut row_index);
    }
    let nrows = row_index.len();
    let ncols = cand_forms.len();
    let zero = crat(0, 1);

    let mut a: Vec<Vec<CRat>> = vec![vec![zero.clone(); ncols]; nrows];
    let mut b: Vec<CRat> = vec![zero.clone(); nrows];
    for m in &target.terms {
        b[row_index[&m.key()]] = m.coeff.clone();
    }
    for (j, cf) in cand_forms.iter().enumerate() {
        for m in &cf.terms {
            a[row_index[&m.key()]][j] = m.coeff.clone();
        }
    }

    let x = solve_least_structured(&mut a, &mut b, nrows, ncols).ok_or_else(|| {
        CoreError::UnsupportedPattern("rate group not expressible over bracket candidates".into())
    })?;

    let mut out = Vec::new();
    for (j, c) in x.into_iter().enumerate() {
        if !c.is_zero() {
            let mut t = candidates[j].clone();
            t.coeff = c;
            out.push(t);
        }
    }
    Ok(out)
}

/// Exact Gaussian elimination, columns in preference order, free variables
/// pinned to zero. Returns `None` when the system is inconsistent.
fn solve_least_structured(
    a: &mut [Vec<CRat>],
    b: &mut [CRat],
    nrows: usize,
    ncols: usize,
) -> Option<Vec<CRat>> {
    let zero = crat(0, 1);
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut used_rows = vec![false; nrows];
    for col in 0..ncols {
        let Some(pr) = (0..nrows).find(|&r| !used_rows[r] && !a[r][col].is_zero()) else {
            continue;
        };
        used_rows[pr] = true;
        pivot_of_col[col] = Some(pr);
        let inv_p = a[pr][col].clone();
        for r in 0..nrows {
            if r == pr || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone() / inv_p.clone();
            for c in 0..ncols {
                let upd = a[r][c].clone() - factor.clone() * a[pr][c].clone();
                a[r][c] = upd;
            }
            let upd = b[r].clone() - factor * b[pr].clone();
            b[r] = upd;
        }
    }
    // back substitution with free variables = 0 (columns visited in reverse)
    let mut x = vec![zero.clone(); ncols];
    for col in (0..ncols).rev() {
        if let Some(pr) = pivot_of_col[col] {
            let mut rhs = b[pr].clone();
            for c in (col + 1)..ncols {
                rhs = rhs - a[pr][c].clone() * x[c].clone();
            }
            x[col] = rhs / a[pr][col].clone();
        }
    }
    // consistency: rows without pivots must have zero residual
    for r in 0..nrows {
        if used_rows[r] {
            continue;
        }
        let mut resid = b[r].clone();
        for c in 0..ncols {
            resid = resid - a[r][c].clone() * x[c].clone();
        }
        if !resid.is_zero() {
            return None;
        }
    }
    Some(x)
}
