//! Small dense complex matrices used as an independent oracle for the su(2)
//! algebra and for the operator identities behind the effective-Hamiltonian
//! extraction.

use nalgebra::DMatrix;
use num::complex::Complex64;

pub type CMat = DMatrix<Complex64>;

/// 2×2 identity.
pub fn mat_id() -> CMat {
    CMat::identity(2, 2)
}

/// Raising operator |e⟩⟨g| in the (e, g) basis.
pub fn mat_rp() -> CMat {
    CMat::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    )
}

/// Lowering operator |g⟩⟨e|.
pub fn mat_rm() -> CMat {
    mat_rp().transpose()
}

/// Inversion R₃ = (|e⟩⟨e| − |g⟩⟨g|)/2.
pub fn mat_r3() -> CMat {
    CMat::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-0.5, 0.0),
        ],
    )
}

/// Monopole operator R₂ = i(R₋ − R₊)/2.
pub fn mat_r2() -> CMat {
    (mat_rm() - mat_rp()).scale(0.5) * Complex64::new(0.0, 1.0)
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn comm_m(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn anticomm_m(a: &CMat, b: &CMat) -> CMat {
    a * b + b * a
}

/// Evaluate an atom-operator expression as a 4×4 matrix (atom A ⊗ atom B)
/// at concrete times and frequencies. An independent oracle for the symbolic
/// algebra: phases are substituted numerically and the basis operators are
/// replaced by their 2×2 matrices. The expression must be free of field
/// symbols, kernels and integrals.
pub fn to_matrix(
    expr: &super::OperatorExpr,
    omega: [f64; 2],
    times: &dyn Fn(super::Time) -> f64,
) -> CMat {
    use super::symbols::AtomBasis;
    let basis = |b: AtomBasis| -> CMat {
        match b {
            AtomBasis::One => mat_id(),
            AtomBasis::Plus => mat_rp(),
            AtomBasis::Minus => mat_rm(),
            AtomBasis::Three => mat_r3(),
        }
    };
    let mut acc = CMat::zeros(4, 4);
    for m in &expr.terms {
        assert!(
            m.fields.is_empty() && m.kernels.is_empty() && m.domain.is_empty(),
            "matrix oracle expects a pure atom-operator expression"
        );
        let mut phase = 0.0;
        for (&(a, t), &n) in &m.phase.0 {
            phase += n as f64 * omega[a.index()] * times(t);
        }
        let mut weight = super::scalar::to_c64(&m.coeff) * Complex64::new(0.0, phase).exp();
        for (i, &w) in omega.iter().enumerate() {
            weight *= Complex64::new(w.powi(m.omega_pow[i] as i32), 0.0);
        }
        acc += kron(&basis(m.atoms[0]), &basis(m.atoms[1])) * weight;
    }
    acc
}
