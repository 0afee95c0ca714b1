//! Exact complex-rational scalars.

use num::complex::{Complex, Complex64};
use num::rational::BigRational;
use num::{BigInt, One, ToPrimitive, Zero};

/// Exact rational number.
pub type Rat = BigRational;
/// Exact complex rational: the coefficient field of the symbolic layer.
pub type CRat = Complex<Rat>;

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `n/d` as a real complex rational.
pub fn crat(n: i64, d: i64) -> CRat {
    CRat::new(rat(n, d), Rat::zero())
}

/// `(n/d)·i` as a purely imaginary complex rational.
pub fn crat_i(n: i64, d: i64) -> CRat {
    CRat::new(Rat::zero(), rat(n, d))
}

/// Convert to machine precision for the numerical stages.
pub fn to_c64(z: &CRat) -> Complex64 {
    fn f(r: &Rat) -> f64 {
        r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
    }
    Complex64::new(f(&z.re), f(&z.im))
}

/// i^k for integer k.
pub fn i_pow(k: u32) -> CRat {
    match k % 4 {
        0 => CRat::one(),
        1 => crat_i(1, 1),
        2 => crat(-1, 1),
        _ => crat_i(-1, 1),
    }
}
