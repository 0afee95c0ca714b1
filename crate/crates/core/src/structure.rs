//! Structured presentation of derived terms.
//!
//! The monomial algebra is the arbiter of equality, but the derived objects
//! are presented (and dumped) in the bracket form they take on paper: a
//! prefactor, a nested integration domain, field statistical kernels, and
//! per-atom monopole brackets. [`EffectiveTerm`] is one term of an effective
//! Hamiltonian; [`PotentialTerm`] is one term of the ground-state-averaged
//! potential, where the brackets have become atomic statistical kernels.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::Zero;

use crate::algebra::{
    crat, Atom, CRat, Domain, KernelSym, Monomial, OperatorExpr, Time,
};
use crate::expand::r2_free;

/// Commutator or anticommutator of a monopole pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum BracketKind {
    Comm,
    Anti,
}

/// Monopole content of one atom inside an effective-Hamiltonian term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AtomFactor {
    /// No monopole of this atom.
    None,
    /// A single free monopole R₂(t); averages to zero on the ground state.
    Single(Time),
    /// [R₂(t1), R₂(t2)] or {R₂(t1), R₂(t2)}.
    Pair(BracketKind, Time, Time),
}

impl AtomFactor {
    fn relabel(self, map: &BTreeMap<u32, u32>) -> AtomFactor {
        match self {
            AtomFactor::None => AtomFactor::None,
            AtomFactor::Single(t) => AtomFactor::Single(t.relabel(map)),
            AtomFactor::Pair(k, a, b) => AtomFactor::Pair(k, a.relabel(map), b.relabel(map)),
        }
    }

    /// Canonical argument order; commutator swaps flip the sign.
    fn normalize(self) -> (i8, AtomFactor) {
        match self {
            AtomFactor::Pair(k, a, b) if a > b => {
                let sign = if k == BracketKind::Comm { -1 } else { 1 };
                (sign, AtomFactor::Pair(k, b, a))
            }
            other => (1, other),
        }
    }
}

/// One term of an effective Hamiltonian: prefactor × nested integrals ×
/// field kernels × per-atom monopole structure.
///
/// When both atom factors are `Single`, the two commuting monopoles are
/// presented as one cross-atom anticommutator {R₂^B, R₂^A} and the stored
/// coefficient multiplies that anticommutator (expansion accounts for the
/// factor 2 of {P,Q} = 2PQ).
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveTerm {
    pub coeff: CRat,
    pub mu_pow: u8,
    pub domain: Domain,
    pub field_kernels: Vec<KernelSym>,
    pub parts: [AtomFactor; 2],
}

impl EffectiveTerm {
    /// Expand to the operator algebra.
    pub fn expand(&self) -> OperatorExpr {
        let mut m = Monomial::scalar(self.coeff.clone());
        m.mu_pow = self.mu_pow;
        m.kernels = self.field_kernels.clone();
        m.domain = self.domain.clone();
        let mut expr = OperatorExpr::from_monomial(m);
        if self.is_cross_anti() {
            let (tb, ta) = match (self.parts[1], self.parts[0]) {
                (AtomFactor::Single(tb), AtomFactor::Single(ta)) => (tb, ta),
                _ => unreachable!(),
            };
            let anti = OperatorExpr::anticommutator(&r2_free(Atom::B, tb), &r2_free(Atom::A, ta));
            return expr.mul(&anti);
        }
        for (i, atom) in Atom::BOTH.iter().enumerate() {
            let factor = match self.parts[i] {
                AtomFactor::None => continue,
                AtomFactor::Single(t) => r2_free(*atom, t),
                AtomFactor::Pair(BracketKind::Comm, a, b) => {
                    OperatorExpr::commutator(&r2_free(*atom, a), &r2_free(*atom, b))
                }
                AtomFactor::Pair(BracketKind::Anti, a, b) => {
                    OperatorExpr::anticommutator(&r2_free(*atom, a), &r2_free(*atom, b))
                }
            };
            expr = expr.mul(&factor);
        }
        expr
    }

    fn is_cross_anti(&self) -> bool {
        matches!(
            (self.parts[0], self.parts[1]),
            (AtomFactor::Single(_), AtomFactor::Single(_))
        )
    }

    pub fn swap_atoms(&self) -> Self {
        let swap_factor = |f: AtomFactor| f;
        EffectiveTerm {
            coeff: self.coeff.clone(),
            mu_pow: self.mu_pow,
            domain: self.domain.clone(),
            field_kernels: self.field_kernels.iter().map(|k| k.swap_atoms()).collect(),
            parts: [swap_factor(self.parts[1]), swap_factor(self.parts[0])],
        }
    }

    /// Canonical form: normalized brackets and kernels, canonical variable
    /// labels (minimum over consistent relabelings).
    pub fn normalize(&self) -> Option<EffectiveTerm> {
        let mut t = self.clone();
        // bracket order
        let mut sign = 1i8;
        for p in &mut t.parts {
            let (s, q) = p.normalize();
            sign *= s;
            *p = q;
        }
        // kernels
        let mut ks = Vec::with_capacity(t.field_kernels.len());
        for k in &t.field_kernels {
            match k.normalize() {
                None => return None,
                Some((s, kk)) => {
                    sign *= s;
                    ks.push(kk);
                }
            }
        }
        t.field_kernels = ks;
        if sign < 0 {
            t.coeff = -t.coeff;
        }
        if t.coeff.is_zero() {
            return None;
        }
        // canonical labels
        Some(min_relabel(&t, |t, map| {
            let mut r = t.clone();
            r.domain = t.domain.relabel(map);
            r.field_kernels = t.field_kernels.iter().map(|k| k.relabel(map)).collect();
            r.parts = [t.parts[0].relabel(map), t.parts[1].relabel(map)];
            let mut s = 1i8;
            for p in &mut r.parts {
                let (ss, q) = p.normalize();
                s *= ss;
                *p = q;
            }
            let mut ks = Vec::new();
            for k in &r.field_kernels {
                let (ss, kk) = k.normalize().expect("zero kernel after relabel");
                s *= ss;
                ks.push(kk);
            }
            ks.sort();
            r.field_kernels = ks;
            if s < 0 {
                r.coeff = -r.coeff;
            }
            r
        }))
    }

    /// Stable one-line dump: prefactor | domain | kernels | atom brackets.
    pub fn dump_line(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "coeff=({}{:+}i) mu^{} |",
            self.coeff.re, self.coeff.im, self.mu_pow
        );
        let _ = write!(s, " {}|", self.domain);
        for k in &self.field_kernels {
            let _ = write!(s, " {k}");
        }
        let _ = write!(s, " |");
        if self.is_cross_anti() {
            if let (AtomFactor::Single(tb), AtomFactor::Single(ta)) = (self.parts[1], self.parts[0])
            {
                let _ = write!(s, " anti[R2B({tb}),R2A({ta})]");
            }
        } else {
            for (i, a) in Atom::BOTH.iter().enumerate() {
                match self.parts[i] {
                    AtomFactor::None => {}
                    AtomFactor::Single(t) => {
                        let _ = write!(s, " R2{a}({t})");
                    }
                    AtomFactor::Pair(k, t1, t2) => {
                        let op = if k == BracketKind::Comm { "comm" } else { "anti" };
                        let _ = write!(s, " {op}[R2{a}({t1}),R2{a}({t2})]");
                    }
                }
            }
        }
        s
    }
}

/// One term of the ground-state-averaged potential: prefactor × nested
/// integrals × product of field and atom statistical kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialTerm {
    pub coeff: CRat,
    pub mu_pow: u8,
    pub domain: Domain,
    pub kernels: Vec<KernelSym>,
}

impl PotentialTerm {
    pub fn normalize(&self) -> Option<PotentialTerm> {
        let mut t = self.clone();
        let mut sign = 1i8;
        let mut ks = Vec::with_capacity(t.kernels.len());
        for k in &t.kernels {
            match k.normalize() {
                None => return None,
                Some((s, kk)) => {
                    sign *= s;
                    ks.push(kk);
                }
            }
        }
        ks.sort();
        t.kernels = ks;
        if sign < 0 {
            t.coeff = -t.coeff;
        }
        if t.coeff.is_zero() {
            return None;
        }
        Some(min_relabel(&t, |t, map| {
            let mut r = t.clone();
            r.domain = t.domain.relabel(map);
            let mut s = 1i8;
            let mut ks = Vec::new();
            for k in &t.kernels {
                let (ss, kk) = k.relabel(map).normalize().expect("zero kernel after relabel");
                s *= ss;
                ks.push(kk);
            }
            ks.sort();
            r.kernels = ks;
            if s < 0 {
                r.coeff = -r.coeff;
            }
            r
        }))
    }

    pub fn swap_atoms(&self) -> Self {
        PotentialTerm {
            coeff: self.coeff.clone(),
            mu_pow: self.mu_pow,
            domain: self.domain.clone(),
            kernels: self.kernels.iter().map(|k| k.swap_atoms()).collect(),
        }
    }

    /// Expand to a scalar operator expression (atomic kernels as symbols).
    pub fn expand(&self) -> OperatorExpr {
        let mut m = Monomial::scalar(self.coeff.clone());
        m.mu_pow = self.mu_pow;
        m.kernels = self.kernels.clone();
        m.domain = self.domain.clone();
        OperatorExpr::from_monomial(m)
    }

    /// Expand atomic kernel symbols into explicit phases:
    /// C^ξ(s,t) = cos(ω_ξ(s−t))/4, χ^ξ(s,t) = −i sin(ω_ξ(s−t))/4.
    pub fn expand_atom_kernels(&self) -> OperatorExpr {
        let mut expr = self.expand();
        loop {
            let mut next = Vec::new();
            let mut changed = false;
            for m in &expr.terms {
                match m.kernels.iter().position(|k| {
                    matches!(k, KernelSym::AtomCorr(..) | KernelSym::AtomSusc(..))
                }) {
                    None => next.push(m.clone()),
                    Some(idx) => {
                        changed = true;
                        let k = m.kernels[idx];
                        let mut base = m.clone();
                        base.kernels.remove(idx);
                        let (atom, s, t, signs): (Atom, Time, Time, [(CRat, i64); 2]) = match k {
                            // cos/4 = (e^{+} + e^{−})/8 ; −i sin/4 = (e^{−} − e^{+})/8 · … times i bookkeeping below
                            KernelSym::AtomCorr(a, s, t) => {
                                (a, s, t, [(crat(1, 8), 1), (crat(1, 8), -1)])
                            }
                            KernelSym::AtomSusc(a, s, t) => {
                                (a, s, t, [(crat(-1, 8), 1), (crat(1, 8), -1)])
                            }
                            _ => unreachable!(),
                        };
                        for (c, sgn) in signs {
                            let mut mm = base.clone();
                            mm.coeff = mm.coeff.clone() * c;
                            mm.phase.insert(atom, s, sgn);
                            mm.phase.insert(atom, t, -sgn);
                            next.push(mm);
                        }
                    }
                }
            }
            expr = OperatorExpr { terms: next };
            if !changed {
                break;
            }
        }
        expr
    }

    pub fn dump_line(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "coeff=({}{:+}i) mu^{} |",
            self.coeff.re, self.coeff.im, self.mu_pow
        );
        let _ = write!(s, " {}|", self.domain);
        for k in &self.kernels {
            let _ = write!(s, " {k}");
        }
        s
    }
}

/// Minimum over all relabelings of the integration variables, by the Display
/// form of the relabeled term. `apply` must perform the relabeling plus any
/// renormalization it entails.
fn min_relabel<T: Clone + std::fmt::Debug>(
    t: &T,
    apply: impl Fn(&T, &BTreeMap<u32, u32>) -> T,
) -> T
where
    T: DomainCarrier,
{
    let vars = t.domain_ref().vars();
    let n = vars.len() as u32;
    if n <= 1 {
        if n == 1 && vars[0] != 1 {
            let map: BTreeMap<u32, u32> = vec![(vars[0], 1)].into_iter().collect();
            return apply(t, &map);
        }
        return t.clone();
    }
    let mut best: Option<(String, T)> = None;
    let mut perm: Vec<u32> = (1..=n).collect();
    permute_slice(&mut perm, 0, &mut |p| {
        let map: BTreeMap<u32, u32> = vars.iter().copied().zip(p.iter().copied()).collect();
        let cand = apply(t, &map);
        let sig = format!("{cand:?}");
        match &best {
            Some((s, _)) if *s <= sig => {}
            _ => best = Some((sig, cand)),
        }
    });
    best.unwrap().1
}

/// Access to the integration domain for canonical relabeling.
pub trait DomainCarrier {
    fn domain_ref(&self) -> &Domain;
}

impl DomainCarrier for EffectiveTerm {
    fn domain_ref(&self) -> &Domain {
        &self.domain
    }
}

impl DomainCarrier for PotentialTerm {
    fn domain_ref(&self) -> &Domain {
        &self.domain
    }
}

fn permute_slice<F: FnMut(&[u32])>(xs: &mut Vec<u32>, k: usize, f: &mut F) {
    if k == xs.len() {
        f(xs);
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permute_slice(xs, k + 1, f);
        xs.swap(k, i);
    }
}

/// Normalize, merge identical terms (summing coefficients) and sort a term
/// set into a stable order.
pub fn normalize_effective_set(terms: &[EffectiveTerm]) -> Vec<EffectiveTerm> {
    let mut map: BTreeMap<String, EffectiveTerm> = BTreeMap::new();
    for t in terms {
        let t = match t.normalize() {
            None => continue,
            Some(t) => t,
        };
        let key = format!(
            "{} {:?} {:?} {}",
            t.mu_pow, t.field_kernels, t.parts, t.domain
        );
        match map.get_mut(&key) {
            Some(acc) => acc.coeff = acc.coeff.clone() + t.coeff,
            None => {
                map.insert(key, t);
            }
        }
    }
    map.into_values().filter(|t| !t.coeff.is_zero()).collect()
}

/// Same for potential terms.
pub fn normalize_potential_set(terms: &[PotentialTerm]) -> Vec<PotentialTerm> {
    let mut map: BTreeMap<String, PotentialTerm> = BTreeMap::new();
    for t in terms {
        let t = match t.normalize() {
            None => continue,
            Some(t) => t,
        };
        let key = format!("{} {:?} {}", t.mu_pow, t.kernels, t.domain);
        match map.get_mut(&key) {
            Some(acc) => acc.coeff = acc.coeff.clone() + t.coeff,
            None => {
                map.insert(key, t);
            }
        }
    }
    map.into_values().filter(|t| !t.coeff.is_zero()).collect()
}
