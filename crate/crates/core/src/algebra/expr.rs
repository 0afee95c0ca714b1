//! Sums of monomials with canonical forms, products, brackets and vacuum
//! reduction.

use std::collections::BTreeMap;

use num::Zero;

use super::monomial::Monomial;
use super::scalar::{crat, CRat};
use super::symbols::{Domain, KernelSym, Point, Time};

/// A finite sum of [`Monomial`]s. No canonical-form invariant is maintained
/// eagerly; call [`canonicalize`](Self::canonicalize) or
/// [`chain_form`](Self::chain_form) when a normal form is needed.
#[derive(Debug, Clone, Default)]
pub struct OperatorExpr {
    pub terms: Vec<Monomial>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        OperatorExpr { terms: Vec::new() }
    }

    pub fn from_monomial(m: Monomial) -> Self {
        OperatorExpr { terms: vec![m] }
    }

    pub fn scalar(c: CRat) -> Self {
        Self::from_monomial(Monomial::scalar(c))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        OperatorExpr { terms }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&crat(-1, 1)))
    }

    pub fn scale(&self, c: &CRat) -> Self {
        OperatorExpr {
            terms: self
                .terms
                .iter()
                .map(|m| {
                    let mut m = m.clone();
                    m.coeff = m.coeff * c.clone();
                    m
                })
                .collect(),
        }
    }

    /// Operator product. Integration variables of the factors must already be
    /// disjoint (expression builders guarantee this through [`super::VarGen`]).
    pub fn mul(&self, rhs: &Self) -> Self {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &rhs.terms {
                terms.extend(a.mul(b));
            }
        }
        OperatorExpr { terms }
    }

    /// [a, b] = ab − ba.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.mul(b).sub(&b.mul(a))
    }

    /// {a, b} = ab + ba.
    pub fn anticommutator(a: &Self, b: &Self) -> Self {
        a.mul(b).add(&b.mul(a))
    }

    pub fn adjoint(&self) -> Self {
        OperatorExpr {
            terms: self.terms.iter().map(|m| m.adjoint()).collect(),
        }
    }

    pub fn swap_atoms(&self) -> Self {
        OperatorExpr {
            terms: self.terms.iter().map(|m| m.swap_atoms()).collect(),
        }
    }

    pub fn max_var(&self) -> u32 {
        self.terms.iter().map(|m| m.max_var()).max().unwrap_or(0)
    }

    /// Merge equal-content monomials, dropping exact zeros. Does not touch
    /// variable labels or field order.
    fn merge(terms: Vec<Monomial>) -> Vec<Monomial> {
        let mut work: Vec<Monomial> = Vec::with_capacity(terms.len());
        for m in terms {
            if m.is_zero() {
                continue;
            }
            if let Some(m) = m.normalize_kernels() {
                work.push(m);
            }
        }
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            work.par_sort_unstable_by(Monomial::cmp_content);
        }
        #[cfg(not(feature = "parallel"))]
        work.sort_unstable_by(Monomial::cmp_content);
        let mut out: Vec<Monomial> = Vec::with_capacity(work.len());
        for m in work {
            match out.last_mut() {
                Some(last) if Monomial::cmp_content(last, &m) == std::cmp::Ordering::Equal => {
                    last.coeff = last.coeff.clone() + m.coeff;
                }
                _ => out.push(m),
            }
        }
        out.retain(|m| !m.coeff.is_zero());
        out
    }

    /// Forest-preserving canonical form: kernel normalization, a canonical
    /// relabeling of integration variables (minimum over all consistent
    /// bijections), and merging of identical terms. Idempotent. Field factor
    /// order is left as constructed, so use [`chain_form`](Self::chain_form)
    /// for semantic equality tests.
    pub fn canonicalize(&self) -> Self {
        let mut out = Vec::new();
        for m in &self.terms {
            if m.is_zero() {
                continue;
            }
            out.push(Self::canonical_labels(m));
        }
        OperatorExpr {
            terms: Self::merge(out),
        }
    }

    fn canonical_labels(m: &Monomial) -> Monomial {
        let vars = m.domain.vars();
        let n = vars.len() as u32;
        if n == 0 {
            return m.clone();
        }
        if n == 1 && vars[0] == 1 {
            return m.clone();
        }
        // Brute-force minimum over all bijections onto 1..=n. Domains carry
        // at most four variables in this artifact, so this stays cheap.
        let mut best: Option<Monomial> = None;
        let mut perm: Vec<u32> = (1..=n).collect();
        permute(&mut perm, 0, &mut |p| {
            let map: BTreeMap<u32, u32> = vars.iter().copied().zip(p.iter().copied()).collect();
            let cand = m
                .relabel(&map)
                .normalize_kernels()
                .expect("relabel cannot zero a nonzero monomial");
            match &best {
                Some(b) if Monomial::cmp_full(b, &cand) != std::cmp::Ordering::Greater => {}
                _ => best = Some(cand),
            }
        });
        best.unwrap()
    }

    /// Semantic normal form: every integration forest is split into the sum
    /// of its totally ordered chains (variables relabeled by nesting depth,
    /// τ₁ outermost), field factors are normal-ordered with the central
    /// commutator extracted on each swap, kernels normalized, terms merged.
    /// Construction tags (monopole insertion counts) are erased: this form
    /// compares operator content only.
    ///
    /// Two expressions built from the same operator content by different
    /// routes agree term-by-term in this form.
    pub fn chain_form(&self) -> Self {
        // cheap raw-level merge first: summed construction pieces share
        // variable labels, so much of a cancellation happens before the
        // splitting multiplies the term count
        let pre = Self::merge(
            self.terms
                .iter()
                .filter(|m| !m.is_zero())
                .map(|m| {
                    let mut m = m.clone();
                    m.insertions = [0, 0];
                    m
                })
                .collect(),
        );
        let chunks = crate::par::map_collect(&pre, |m| {
            let mut out = Vec::new();
            for chained in chain_split(m) {
                sort_fields(chained, &mut out);
            }
            out
        });
        OperatorExpr {
            terms: Self::merge(chunks.into_iter().flatten().collect()),
        }
    }

    pub fn is_zero_chain(&self) -> bool {
        self.chain_form().terms.is_empty()
    }

    /// Forest-preserving canonical form with construction tags erased:
    /// monomials are comparable across derivation paths but integration
    /// forests are kept distinct (a square domain never merges against its
    /// chain splittings). This is the coordinate system in which structured
    /// presentations are solved for.
    pub fn presentation_form(&self) -> Self {
        let untagged = OperatorExpr {
            terms: self
                .terms
                .iter()
                .map(|m| {
                    let mut m = m.clone();
                    m.insertions = [0, 0];
                    m
                })
                .collect(),
        };
        untagged.canonicalize()
    }

    /// Operator equality via the chain normal form.
    pub fn equals(&self, other: &Self) -> bool {
        self.sub(other).is_zero_chain()
    }

    pub fn is_hermitian(&self) -> bool {
        self.sub(&self.adjoint()).is_zero_chain()
    }

    /// Vacuum expectation over the field state: Wick reduction of the free
    /// field factors into two-point symbols `C^F + χ^F`. Monomials with an
    /// odd number of field factors average to zero; their count is returned
    /// alongside the reduced expression. Atom operators are left symbolic.
    pub fn vacuum_average(&self) -> (Self, usize) {
        let mut dropped_odd = 0usize;
        let mut out: Vec<Monomial> = Vec::new();
        for m in &self.terms {
            if m.fields.len() % 2 == 1 {
                dropped_odd += 1;
                continue;
            }
            if m.fields.is_empty() {
                out.push(m.clone());
                continue;
            }
            let fields = m.fields.clone();
            let mut bare = m.clone();
            bare.fields.clear();
            for pairing in pairings(fields.len()) {
                // ⟨φ_a φ_b⟩ = C^F(a,b) + χ^F(a,b): expand the product over
                // pairs into 2^k kernel choices.
                let k = pairing.len();
                for mask in 0..(1u32 << k) {
                    let mut term = bare.clone();
                    for (bit, &(i, j)) in pairing.iter().enumerate() {
                        let (a, b) = (fields[i], fields[j]);
                        term.kernels.push(if mask >> bit & 1 == 0 {
                            KernelSym::FieldCorr(a, b)
                        } else {
                            KernelSym::FieldSusc(a, b)
                        });
                    }
                    out.push(term);
                }
            }
        }
        (
            OperatorExpr {
                terms: Self::merge(out),
            },
            dropped_odd,
        )
    }

    /// Expectation over the two-atom ground state |g_A g_B⟩ of the atom
    /// operators only (fields, kernels and phases are untouched).
    pub fn atom_ground_average(&self) -> Self {
        OperatorExpr {
            terms: self
                .terms
                .iter()
                .filter_map(|m| m.atom_ground_average())
                .collect(),
        }
    }
}

fn permute<F: FnMut(&[u32])>(xs: &mut Vec<u32>, k: usize, f: &mut F) {
    if k == xs.len() {
        f(xs);
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permute(xs, k + 1, f);
        xs.swap(k, i);
    }
}

/// Split a forest-domain monomial into its chain pieces: one monomial per
/// linear extension, variables relabeled by depth (τ₁ bounded by τ).
fn chain_split(m: &Monomial) -> Vec<Monomial> {
    if m.domain.is_empty() {
        return vec![m.clone()];
    }
    let exts = m.domain.linear_extensions();
    let mut out = Vec::with_capacity(exts.len());
    for order in exts {
        let map: BTreeMap<u32, u32> = order
            .iter()
            .enumerate()
            .map(|(depth, &v)| (v, depth as u32 + 1))
            .collect();
        let mut c = m.relabel(&map);
        let n = order.len() as u32;
        let mut dom = BTreeMap::new();
        for k in 1..=n {
            dom.insert(k, if k == 1 { Time::Outer } else { Time::Var(k - 1) });
        }
        c.domain = Domain(dom);
        out.push(c);
    }
    out
}

/// Rank used to normal-order field factors on a chain domain. Earlier times
/// first: τ₀, then the innermost (deepest) variables, then τ.
fn field_rank(p: &Point, nvars: u32) -> (u8, u32, u8) {
    let t_rank = match p.t {
        Time::Origin => (0u8, 0u32),
        Time::Var(k) => (1, nvars - k),
        Time::Outer => (2, 0),
    };
    (t_rank.0, t_rank.1, p.wl.index() as u8)
}

/// Bubble the field factors into canonical order; each adjacent transposition
/// of φ_a φ_b emits the central commutator 2χ^F(a,b) as an extra term.
fn sort_fields(m: Monomial, out: &mut Vec<Monomial>) {
    let n = m.max_var();
    let mut i = 0;
    let fields = &m.fields;
    while i + 1 < fields.len() {
        let a = fields[i];
        let b = fields[i + 1];
        if field_rank(&a, n) > field_rank(&b, n) {
            // m = (swapped) + [a, b] · (pair removed)
            let mut swapped = m.clone();
            swapped.fields.swap(i, i + 1);
            let mut central = m.clone();
            central.fields.remove(i + 1);
            central.fields.remove(i);
            central.coeff = central.coeff * crat(2, 1);
            central.kernels.push(KernelSym::FieldSusc(a, b));
            sort_fields(swapped, out);
            sort_fields(central, out);
            return;
        }
        i += 1;
    }
    out.push(m);
}

/// All perfect matchings of {0, …, n−1}, pairs kept in position order.
fn pairings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(rest: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        let first = rest[0];
        for k in 1..rest.len() {
            let partner = rest[k];
            let remaining: Vec<usize> = rest[1..]
                .iter()
                .copied()
                .filter(|&x| x != partner)
                .collect();
            acc.push((first, partner));
            rec(&remaining, acc, out);
            acc.pop();
        }
    }
    let idx: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    rec(&idx, &mut Vec::new(), &mut out);
    out
}
