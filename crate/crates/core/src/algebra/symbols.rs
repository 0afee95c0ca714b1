//! Symbol alphabet: atoms, symbolic times, worldline points, su(2) basis
//! operators, central kernel symbols, phases and integration domains.

use std::collections::BTreeMap;
use std::fmt;

use super::scalar::{rat, Rat};

/// Atom label. Doubles as the worldline label (`x_A`, `x_B`) for static
/// synchronous trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    A,
    B,
}

impl Atom {
    pub fn other(self) -> Atom {
        match self {
            Atom::A => Atom::B,
            Atom::B => Atom::A,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Atom::A => 0,
            Atom::B => 1,
        }
    }

    pub const BOTH: [Atom; 2] = [Atom::A, Atom::B];
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::A => write!(f, "A"),
            Atom::B => write!(f, "B"),
        }
    }
}

/// Symbolic time. `Origin` is the switch-on time τ₀, `Outer` is the
/// observation time τ, and `Var(k)` is a bound integration variable τ_k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Time {
    Origin,
    Var(u32),
    Outer,
}

impl Time {
    pub fn relabel(self, map: &BTreeMap<u32, u32>) -> Time {
        match self {
            Time::Var(v) => Time::Var(*map.get(&v).expect("relabel: unmapped variable")),
            other => other,
        }
    }
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Time::Origin => write!(f, "tau0"),
            Time::Var(k) => write!(f, "tau{k}"),
            Time::Outer => write!(f, "tau"),
        }
    }
}

/// A spacetime point `x_wl(t)` on one of the two static worldlines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub wl: Atom,
    pub t: Time,
}

impl Point {
    pub fn new(wl: Atom, t: Time) -> Self {
        Point { wl, t }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}({})", self.wl, self.t)
    }
}

/// su(2) basis operator of one atom, anchored at τ₀.
///
/// `One` is the identity (atom untouched), `Plus`/`Minus` are the raising and
/// lowering operators, `Three` is the inversion R₃. Free evolution keeps the
/// basis and moves the time dependence into the monomial phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomBasis {
    One,
    Plus,
    Minus,
    Three,
}

/// Product of two τ₀-anchored basis operators of the same atom.
///
/// Returns the expansion on the basis; the empty list means the product is
/// zero (e.g. R₊R₊).
pub fn mul_basis(a: AtomBasis, b: AtomBasis) -> Vec<(Rat, AtomBasis)> {
    use AtomBasis::*;
    match (a, b) {
        (One, x) | (x, One) => vec![(rat(1, 1), x)],
        (Plus, Plus) | (Minus, Minus) => vec![],
        // R₊R₋ = 1/2 + R₃,  R₋R₊ = 1/2 − R₃
        (Plus, Minus) => vec![(rat(1, 2), One), (rat(1, 1), Three)],
        (Minus, Plus) => vec![(rat(1, 2), One), (rat(-1, 1), Three)],
        (Plus, Three) => vec![(rat(-1, 2), Plus)],
        (Three, Plus) => vec![(rat(1, 2), Plus)],
        (Minus, Three) => vec![(rat(1, 2), Minus)],
        (Three, Minus) => vec![(rat(-1, 2), Minus)],
        (Three, Three) => vec![(rat(1, 4), One)],
    }
}

impl AtomBasis {
    /// Hermitian adjoint.
    pub fn adjoint(self) -> AtomBasis {
        match self {
            AtomBasis::Plus => AtomBasis::Minus,
            AtomBasis::Minus => AtomBasis::Plus,
            other => other,
        }
    }

    /// Ground-state expectation ⟨g|·|g⟩ (rational, zero for R±).
    pub fn ground_average(self) -> Rat {
        match self {
            AtomBasis::One => rat(1, 1),
            AtomBasis::Three => rat(-1, 2),
            _ => rat(0, 1),
        }
    }
}

/// Central (c-number) kernel symbol.
///
/// Field symbols: `FieldSusc` is the susceptibility χ^F (half the field
/// commutator; antisymmetric, imaginary) and `FieldCorr` is the symmetric
/// correlation C^F (half the anticommutator; symmetric, real). Atom symbols
/// `AtomSusc`/`AtomCorr` are the analogous ground-state statistical functions
/// χ^ξ, C^ξ of the free monopole operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum KernelSym {
    FieldSusc(Point, Point),
    FieldCorr(Point, Point),
    AtomSusc(Atom, Time, Time),
    AtomCorr(Atom, Time, Time),
}

impl KernelSym {
    /// Canonical argument order. Returns `None` if the symbol is identically
    /// zero (antisymmetric kernel at equal arguments), otherwise the sign
    /// picked up by the normalization and the normalized symbol.
    pub fn normalize(self) -> Option<(i8, KernelSym)> {
        use KernelSym::*;
        match self {
            FieldSusc(p, q) => {
                if p == q {
                    None
                } else if p <= q {
                    Some((1, FieldSusc(p, q)))
                } else {
                    Some((-1, FieldSusc(q, p)))
                }
            }
            FieldCorr(p, q) => {
                if p <= q {
                    Some((1, FieldCorr(p, q)))
                } else {
                    Some((1, FieldCorr(q, p)))
                }
            }
            AtomSusc(x, s, t) => {
                if s == t {
                    None
                } else if s <= t {
                    Some((1, AtomSusc(x, s, t)))
                } else {
                    Some((-1, AtomSusc(x, t, s)))
                }
            }
            AtomCorr(x, s, t) => {
                if s <= t {
                    Some((1, AtomCorr(x, s, t)))
                } else {
                    Some((1, AtomCorr(x, t, s)))
                }
            }
        }
    }

    /// Complex conjugation: C kernels are real, χ kernels imaginary.
    pub fn conj_sign(self) -> i8 {
        match self {
            KernelSym::FieldSusc(..) | KernelSym::AtomSusc(..) => -1,
            _ => 1,
        }
    }

    pub fn relabel(self, map: &BTreeMap<u32, u32>) -> KernelSym {
        use KernelSym::*;
        match self {
            FieldSusc(p, q) => FieldSusc(
                Point::new(p.wl, p.t.relabel(map)),
                Point::new(q.wl, q.t.relabel(map)),
            ),
            FieldCorr(p, q) => FieldCorr(
                Point::new(p.wl, p.t.relabel(map)),
                Point::new(q.wl, q.t.relabel(map)),
            ),
            AtomSusc(x, s, t) => AtomSusc(x, s.relabel(map), t.relabel(map)),
            AtomCorr(x, s, t) => AtomCorr(x, s.relabel(map), t.relabel(map)),
        }
    }

    pub fn swap_atoms(self) -> KernelSym {
        use KernelSym::*;
        let sp = |p: Point| Point::new(p.wl.other(), p.t);
        match self {
            FieldSusc(p, q) => FieldSusc(sp(p), sp(q)),
            FieldCorr(p, q) => FieldCorr(sp(p), sp(q)),
            AtomSusc(x, s, t) => AtomSusc(x.other(), s, t),
            AtomCorr(x, s, t) => AtomCorr(x.other(), s, t),
        }
    }
}

impl fmt::Display for KernelSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSym::FieldSusc(p, q) => write!(f, "chi_F[{p},{q}]"),
            KernelSym::FieldCorr(p, q) => write!(f, "C_F[{p},{q}]"),
            KernelSym::AtomSusc(x, s, t) => write!(f, "chi_{x}[{s},{t}]"),
            KernelSym::AtomCorr(x, s, t) => write!(f, "C_{x}[{s},{t}]"),
        }
    }
}

/// Free-evolution phase exponent: `exp(i Σ n_{ξ,t} ω_ξ t)` stored as the
/// integer coefficients n.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phase(pub BTreeMap<(Atom, Time), i64>);

impl Phase {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn insert(&mut self, atom: Atom, t: Time, n: i64) {
        let e = self.0.entry((atom, t)).or_insert(0);
        *e += n;
        if *e == 0 {
            self.0.remove(&(atom, t));
        }
    }

    pub fn merge(&mut self, other: &Phase) {
        for (&k, &n) in &other.0 {
            self.insert(k.0, k.1, n);
        }
    }

    pub fn negate(&self) -> Phase {
        Phase(self.0.iter().map(|(&k, &n)| (k, -n)).collect())
    }

    pub fn relabel(&self, map: &BTreeMap<u32, u32>) -> Phase {
        let mut out = Phase::default();
        for (&(a, t), &n) in &self.0 {
            out.insert(a, t.relabel(map), n);
        }
        out
    }

    pub fn swap_atoms(&self) -> Phase {
        let mut out = Phase::default();
        for (&(a, t), &n) in &self.0 {
            out.insert(a.other(), t, n);
        }
        out
    }
}

/// Nested time-ordered integration domain: a forest. Every variable ranges
/// over (τ₀, upper) with `upper` either τ or another variable.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Domain(pub BTreeMap<u32, Time>);

impl Domain {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> Vec<u32> {
        self.0.keys().copied().collect()
    }

    /// Checks the nesting is well-founded: every upper bound is τ or a
    /// variable of the domain, with no cycles.
    pub fn validate(&self) -> bool {
        for (&v, &up) in &self.0 {
            let mut cur = up;
            let mut steps = 0;
            loop {
                match cur {
                    Time::Outer => break,
                    Time::Origin => return false,
                    Time::Var(p) => {
                        if p == v || !self.0.contains_key(&p) {
                            return false;
                        }
                        cur = self.0[&p];
                    }
                }
                steps += 1;
                if steps > self.0.len() {
                    return false;
                }
            }
        }
        true
    }

    pub fn relabel(&self, map: &BTreeMap<u32, u32>) -> Domain {
        Domain(
            self.0
                .iter()
                .map(|(&v, &up)| (*map.get(&v).expect("relabel: unmapped variable"), up.relabel(map)))
                .collect(),
        )
    }

    /// All total orders of the variables compatible with the forest, listed
    /// from the latest time (just below τ) to the earliest.
    pub fn linear_extensions(&self) -> Vec<Vec<u32>> {
        let vars = self.vars();
        let mut placed: Vec<u32> = Vec::new();
        let mut out = Vec::new();
        self.extend_rec(&vars, &mut placed, &mut out);
        out
    }

    fn extend_rec(&self, vars: &[u32], placed: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if placed.len() == vars.len() {
            out.push(placed.clone());
            return;
        }
        for &v in vars {
            if placed.contains(&v) {
                continue;
            }
            // v may be placed once its upper bound (parent) is already placed.
            let ready = match self.0[&v] {
                Time::Outer => true,
                Time::Var(p) => placed.contains(&p),
                Time::Origin => false,
            };
            if ready {
                placed.push(v);
                self.extend_rec(vars, placed, out);
                placed.pop();
            }
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Print outermost-first for readability.
        let mut vars = self.vars();
        vars.sort();
        for v in vars {
            write!(f, "int[{}<{}] ", Time::Var(v), self.0[&v])?;
        }
        Ok(())
    }
}
