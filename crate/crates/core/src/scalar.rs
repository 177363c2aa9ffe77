//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use nalgebra::Vector3;
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, Signed};

/// Real floating point type the toolkit is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Signed
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + rustfft::FftNum
    + 'static
{
    /// Tolerance used for "exact" structural invariants such as unit norms.
    fn structural_tol() -> Self;
}

impl Real for f32 {
    fn structural_tol() -> Self {
        1e-5
    }
}

impl Real for f64 {
    fn structural_tol() -> Self {
        1e-12
    }
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts an integer count into `T`.
#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

pub type Cplx<T> = Complex<T>;
/// Real 3-vector (positions, wave vectors).
pub type RVec3<T> = Vector3<T>;
/// Complex 3-vector (field values, transform amplitudes).
pub type CVec3<T> = Vector3<Complex<T>>;

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cvec_zero<T: Real>() -> CVec3<T> {
    Vector3::new(czero(), czero(), czero())
}

/// e^{iθ}
#[inline]
pub fn expi<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Lifts a real vector into the complex vector space.
#[inline]
pub fn complexify<T: Real>(v: &RVec3<T>) -> CVec3<T> {
    Vector3::new(
        Complex::new(v.x, T::zero()),
        Complex::new(v.y, T::zero()),
        Complex::new(v.z, T::zero()),
    )
}

#[inline]
pub fn scale<T: Real>(v: &CVec3<T>, s: Complex<T>) -> CVec3<T> {
    Vector3::new(v.x * s, v.y * s, v.z * s)
}

#[inline]
pub fn scale_re<T: Real>(v: &CVec3<T>, s: T) -> CVec3<T> {
    Vector3::new(v.x * s, v.y * s, v.z * s)
}

/// Bilinear dot product (no conjugation) of a real and a complex vector.
#[inline]
pub fn rdot<T: Real>(a: &RVec3<T>, b: &CVec3<T>) -> Complex<T> {
    b.x * a.x + b.y * a.y + b.z * a.z
}

/// Cross product of a real vector with a complex vector.
#[inline]
pub fn rcross<T: Real>(a: &RVec3<T>, b: &CVec3<T>) -> CVec3<T> {
    Vector3::new(
        b.z * a.y - b.y * a.z,
        b.x * a.z - b.z * a.x,
        b.y * a.x - b.x * a.y,
    )
}

/// Hermitian inner product `<a, b> = conj(a) · b`.
#[inline]
pub fn hdot<T: Real>(a: &CVec3<T>, b: &CVec3<T>) -> Complex<T> {
    a.x.conj() * b.x + a.y.conj() * b.y + a.z.conj() * b.z
}

#[inline]
pub fn cnorm<T: Real>(v: &CVec3<T>) -> T {
    (v.x.norm_sqr() + v.y.norm_sqr() + v.z.norm_sqr()).sqrt()
}

/// Max-norm of a complex vector (largest component modulus).
#[inline]
pub fn cmax<T: Real>(v: &CVec3<T>) -> T {
    v.x.norm().max(v.y.norm()).max(v.z.norm())
}

#[inline]
pub fn re_part<T: Real>(v: &CVec3<T>) -> RVec3<T> {
    Vector3::new(v.x.re, v.y.re, v.z.re)
}

/// Relative deviation `|a - b| / max(|b|, floor)`.
pub fn rel_err<T: Real>(a: &CVec3<T>, b: &CVec3<T>, floor: T) -> T {
    cnorm(&(a - b)) / cnorm(b).max(floor)
}

/// Values that can be accumulated in quadratures and difference stencils.
pub trait Linear<T: Real>:
    Copy + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn scaled(self, s: T) -> Self;
}

impl<T: Real> Linear<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn scaled(self, s: T) -> Self {
        self * s
    }
}

impl<T: Real> Linear<T> for Complex<T> {
    fn zero() -> Self {
        czero()
    }
    fn scaled(self, s: T) -> Self {
        self * s
    }
}

impl<T: Real> Linear<T> for CVec3<T> {
    fn zero() -> Self {
        cvec_zero()
    }
    fn scaled(self, s: T) -> Self {
        scale_re(&self, s)
    }
}

impl<T: Real> Linear<T> for RVec3<T> {
    fn zero() -> Self {
        Vector3::zeros()
    }
    fn scaled(self, s: T) -> Self {
        self * s
    }
}

/// Euclidean norm of a real vector.
#[inline]
pub fn rnorm<T: Real>(v: &RVec3<T>) -> T {
    (v.x * v.x + v.y * v.y + v.z * v.z).sqrt()
}
