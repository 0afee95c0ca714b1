//! A single term of an operator expression.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use super::scalar::{rat, CRat, Rat};
use super::symbols::{mul_basis, Atom, AtomBasis, Domain, KernelSym, Phase, Point, Time};

/// Fresh integration-variable ids for expression builders.
#[derive(Debug, Default)]
pub struct VarGen(u32);

impl VarGen {
    pub fn new() -> Self {
        VarGen(0)
    }

    /// Start numbering above every variable already used in `exprs`.
    pub fn above(start: u32) -> Self {
        VarGen(start)
    }

    pub fn fresh(&mut self) -> u32 {
        self.0 += 1;
        self.0
    }
}

/// coefficient · μ^mu_pow · ω_A^{ω₀} ω_B^{ω₁} · phase · kernels · fields ·
/// atom operators · nested integrals.
///
/// `insertions` counts, per atom, how many free monopole factors R₂^{ξ,f}
/// entered the construction of the term. The count survives the su(2)
/// reduction and classifies interatomic versus single-atom content.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: CRat,
    pub mu_pow: u8,
    pub omega_pow: [i8; 2],
    pub phase: Phase,
    pub kernels: Vec<KernelSym>,
    pub fields: Vec<Point>,
    pub atoms: [AtomBasis; 2],
    pub domain: Domain,
    pub insertions: [u8; 2],
}

/// Everything but the coefficient, used as the merge key of a canonical sum.
pub type MonKey = (
    u8,
    [i8; 2],
    [u8; 2],
    [AtomBasis; 2],
    Vec<((Atom, Time), i64)>,
    Vec<KernelSym>,
    Vec<Point>,
    Vec<(u32, Time)>,
);

impl Monomial {
    /// The scalar 1.
    pub fn one() -> Self {
        Monomial {
            coeff: CRat::one(),
            mu_pow: 0,
            omega_pow: [0, 0],
            phase: Phase::default(),
            kernels: Vec::new(),
            fields: Vec::new(),
            atoms: [AtomBasis::One, AtomBasis::One],
            domain: Domain::default(),
            insertions: [0, 0],
        }
    }

    pub fn scalar(c: CRat) -> Self {
        let mut m = Monomial::one();
        m.coeff = c;
        m
    }

    /// Free raising/lowering operator R_±^{ξ,f}(t): τ₀-anchored basis
    /// operator with the free phase e^{±iω_ξ(t−τ₀)}.
    pub fn free_pm(atom: Atom, plus: bool, t: Time) -> Self {
        let mut m = Monomial::one();
        m.atoms[atom.index()] = if plus { AtomBasis::Plus } else { AtomBasis::Minus };
        let sign = if plus { 1 } else { -1 };
        m.phase.insert(atom, t, sign);
        m.phase.insert(atom, Time::Origin, -sign);
        m
    }

    /// Free inversion operator R₃^{ξ,f} (constant under free evolution).
    pub fn free_r3(atom: Atom) -> Self {
        let mut m = Monomial::one();
        m.atoms[atom.index()] = AtomBasis::Three;
        m
    }

    /// Free field symbol φ^f(x_wl(t)).
    pub fn free_field(p: Point) -> Self {
        let mut m = Monomial::one();
        m.fields.push(p);
        m
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn key(&self) -> MonKey {
        (
            self.mu_pow,
            self.omega_pow,
            self.insertions,
            self.atoms,
            self.phase.0.iter().map(|(&k, &v)| (k, v)).collect(),
            self.kernels.clone(),
            self.fields.clone(),
            self.domain.0.iter().map(|(&k, &v)| (k, v)).collect(),
        )
    }

    /// Product, expanding the per-atom su(2) products. Integration variables
    /// of the two factors must be disjoint; shared free times are allowed.
    pub fn mul(&self, rhs: &Monomial) -> Vec<Monomial> {
        debug_assert!(
            self.domain.0.keys().all(|v| !rhs.domain.0.contains_key(v)),
            "monomial product with overlapping integration variables"
        );
        let a_terms = mul_basis(self.atoms[0], rhs.atoms[0]);
        if a_terms.is_empty() {
            return Vec::new();
        }
        let b_terms = mul_basis(self.atoms[1], rhs.atoms[1]);
        if b_terms.is_empty() {
            return Vec::new();
        }
        let mut base = Monomial {
            coeff: self.coeff.clone() * rhs.coeff.clone(),
            mu_pow: self.mu_pow + rhs.mu_pow,
            omega_pow: [
                self.omega_pow[0] + rhs.omega_pow[0],
                self.omega_pow[1] + rhs.omega_pow[1],
            ],
            phase: self.phase.clone(),
            kernels: self.kernels.iter().chain(rhs.kernels.iter()).copied().collect(),
            fields: self.fields.iter().chain(rhs.fields.iter()).copied().collect(),
            atoms: [AtomBasis::One, AtomBasis::One],
            domain: Domain(
                self.domain
                    .0
                    .iter()
                    .chain(rhs.domain.0.iter())
                    .map(|(&k, &v)| (k, v))
                    .collect(),
            ),
            insertions: [
                self.insertions[0] + rhs.insertions[0],
                self.insertions[1] + rhs.insertions[1],
            ],
        };
        base.phase.merge(&rhs.phase);
        let mut out = Vec::with_capacity(a_terms.len() * b_terms.len());
        for (ca, ba) in &a_terms {
            for (cb, bb) in &b_terms {
                let mut m = base.clone();
                m.coeff = m.coeff * CRat::new(ca.clone() * cb.clone(), Rat::zero());
                m.atoms = [*ba, *bb];
                out.push(m);
            }
        }
        out
    }

    /// Hermitian adjoint: reverse field order, conjugate scalars, negate
    /// phases, Plus ↔ Minus.
    pub fn adjoint(&self) -> Monomial {
        let mut m = self.clone();
        m.coeff = self.coeff.conj();
        m.phase = self.phase.negate();
        m.fields.reverse();
        m.atoms = [self.atoms[0].adjoint(), self.atoms[1].adjoint()];
        let flips = m.kernels.iter().filter(|k| k.conj_sign() < 0).count();
        if flips % 2 == 1 {
            m.coeff = -m.coeff;
        }
        m
    }

    /// Normalize kernel symbol argument orders (may flip the sign or kill the
    /// monomial), and drop the coefficient if it is exactly zero.
    pub fn normalize_kernels(mut self) -> Option<Monomial> {
        let mut sign = 1i64;
        let mut ks = Vec::with_capacity(self.kernels.len());
        for k in self.kernels.iter() {
            match k.normalize() {
                None => return None,
                Some((s, kk)) => {
                    sign *= s as i64;
                    ks.push(kk);
                }
            }
        }
        ks.sort();
        self.kernels = ks;
        if sign < 0 {
            self.coeff = -self.coeff;
        }
        if self.coeff.is_zero() {
            None
        } else {
            Some(self)
        }
    }

    pub fn relabel(&self, map: &BTreeMap<u32, u32>) -> Monomial {
        Monomial {
            coeff: self.coeff.clone(),
            mu_pow: self.mu_pow,
            omega_pow: self.omega_pow,
            phase: self.phase.relabel(map),
            kernels: self.kernels.iter().map(|k| k.relabel(map)).collect(),
            fields: self
                .fields
                .iter()
                .map(|p| Point::new(p.wl, p.t.relabel(map)))
                .collect(),
            atoms: self.atoms,
            domain: self.domain.relabel(map),
            insertions: self.insertions,
        }
    }

    /// Swap the two atom labels everywhere (A ⇄ B mirror).
    pub fn swap_atoms(&self) -> Monomial {
        Monomial {
            coeff: self.coeff.clone(),
            mu_pow: self.mu_pow,
            omega_pow: [self.omega_pow[1], self.omega_pow[0]],
            phase: self.phase.swap_atoms(),
            kernels: self.kernels.iter().map(|k| k.swap_atoms()).collect(),
            fields: self
                .fields
                .iter()
                .map(|p| Point::new(p.wl.other(), p.t))
                .collect(),
            atoms: [self.atoms[1], self.atoms[0]],
            domain: self.domain.clone(),
            insertions: [self.insertions[1], self.insertions[0]],
        }
    }

    pub fn max_var(&self) -> u32 {
        self.domain.vars().into_iter().max().unwrap_or(0)
    }

    /// Shift all integration variable ids by `by`.
    pub fn shift_vars(&self, by: u32) -> Monomial {
        if by == 0 || self.domain.is_empty() {
            return self.clone();
        }
        let map: BTreeMap<u32, u32> = self.domain.vars().iter().map(|&v| (v, v + by)).collect();
        self.relabel(&map)
    }

    /// Ground-state atom expectation: replaces both atom operators by their
    /// ⟨g|·|g⟩ values. Returns `None` when the expectation vanishes.
    pub fn atom_ground_average(&self) -> Option<Monomial> {
        let ga = self.atoms[0].ground_average();
        let gb = self.atoms[1].ground_average();
        let w = ga * gb;
        if w.is_zero() {
            return None;
        }
        let mut m = self.clone();
        m.atoms = [AtomBasis::One, AtomBasis::One];
        m.coeff = m.coeff * CRat::new(w, rat(0, 1));
        if m.coeff.is_zero() {
            None
        } else {
            Some(m)
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}+{}i)", self.coeff.re, self.coeff.im)?;
        if self.mu_pow > 0 {
            write!(f, " mu^{}", self.mu_pow)?;
        }
        for (i, a) in Atom::BOTH.iter().enumerate() {
            if self.omega_pow[i] != 0 {
                write!(f, " w{}^{}", a, self.omega_pow[i])?;
            }
        }
        if !self.phase.is_empty() {
            write!(f, " exp(i[")?;
            for (&(a, t), &n) in &self.phase.0 {
                write!(f, "{n:+}w{a}.{t}")?;
            }
            write!(f, "])")?;
        }
        if !self.domain.is_empty() {
            write!(f, " {}", self.domain)?;
        }
        for k in &self.kernels {
            write!(f, " {k}")?;
        }
        for p in &self.fields {
            write!(f, " phi[{p}]")?;
        }
        for (i, a) in Atom::BOTH.iter().enumerate() {
            match self.atoms[i] {
                AtomBasis::One => {}
                AtomBasis::Plus => write!(f, " R+{a}")?,
                AtomBasis::Minus => write!(f, " R-{a}")?,
                AtomBasis::Three => write!(f, " R3{a}")?,
            }
        }
        Ok(())
    }
}

impl Monomial {
    /// Total order on monomial content (everything except the coefficient).
    pub fn cmp_content(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        macro_rules! chain {
            ($x:expr) => {
                match $x {
                    Ordering::Equal => {}
                    o => return o,
                }
            };
        }
        chain!(a.mu_pow.cmp(&b.mu_pow));
        chain!(a.omega_pow.cmp(&b.omega_pow));
        chain!(a.insertions.cmp(&b.insertions));
        chain!(a.atoms.cmp(&b.atoms));
        chain!(a.kernels.cmp(&b.kernels));
        chain!(a.fields.cmp(&b.fields));
        chain!(a.phase.0.len().cmp(&b.phase.0.len()));
        chain!(a.phase.0.iter().cmp(b.phase.0.iter()));
        chain!(a.domain.0.len().cmp(&b.domain.0.len()));
        a.domain.0.iter().cmp(b.domain.0.iter())
    }

    /// Content order with the coefficient as the final tie-breaker; used to
    /// pick a canonical representative among relabelings.
    pub fn cmp_full(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        match Monomial::cmp_content(a, b) {
            std::cmp::Ordering::Equal => (&a.coeff.re, &a.coeff.im).cmp(&(&b.coeff.re, &b.coeff.im)),
            o => o,
        }
    }
}
