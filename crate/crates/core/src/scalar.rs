//! Scalar abstraction shared by the linear-algebra and capacity code.

use std::fmt::{Debug, Display};

use nalgebra::{Complex, DMatrix, DVector, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating-point type the numerics are generic over (`f32` or `f64`).
///
/// Tolerances are per type: the `f64` values are the ones the library is
/// specified against, the `f32` values are scaled to single precision.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Allowed asymmetry `|m[i][j] - conj(m[j][i])|`, relative to `max(1, max |m|)`.
    const HERMITIAN_TOL: f64;
    /// Singular values below `RANK_TOL * sigma_max` count as zero.
    const RANK_TOL: f64;
    /// `B` is definite when `lambda_min(B) > DEFINITE_TOL * lambda_max(B)`.
    const DEFINITE_TOL: f64;
    /// Slack on the `lambda_max <= 1` clamp of the capacity formula.
    const CLAMP_TOL: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn infinity() -> Self {
        Self::lit(f64::INFINITY)
    }

    #[inline]
    fn is_finite_value(self) -> bool {
        self.to_f64_lossy().is_finite()
    }
}

impl Real for f64 {
    const HERMITIAN_TOL: f64 = 1e-12;
    const RANK_TOL: f64 = 1e-10;
    const DEFINITE_TOL: f64 = 1e-12;
    const CLAMP_TOL: f64 = 1e-12;
}

impl Real for f32 {
    const HERMITIAN_TOL: f64 = 1e-5;
    const RANK_TOL: f64 = 1e-5;
    const DEFINITE_TOL: f64 = 1e-6;
    const CLAMP_TOL: f64 = 1e-5;
}

pub type C<T> = Complex<T>;
pub type CVector<T> = DVector<Complex<T>>;
pub type CMatrix<T> = DMatrix<Complex<T>>;

#[inline]
pub fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// Squared Euclidean norm of a complex vector.
pub fn norm_sqr<T: Real>(v: &CVector<T>) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
}

/// `a† b`.
pub fn inner<T: Real>(a: &CVector<T>, b: &CVector<T>) -> Complex<T> {
    a.dotc(b)
}

pub fn all_finite_vec<T: Real>(v: &CVector<T>) -> bool {
    v.iter().all(|z| z.re.is_finite_value() && z.im.is_finite_value())
}

pub fn all_finite_mat<T: Real>(m: &CMatrix<T>) -> bool {
    m.iter().all(|z| z.re.is_finite_value() && z.im.is_finite_value())
}

pub fn log2<T: Real>(x: T) -> T {
    x.ln() / T::ln_2()
}

/// `|z|`.
#[inline]
pub fn modulus<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}
