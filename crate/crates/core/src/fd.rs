//! Fourth-order central-difference oracles for ∇×, ∇·, ∇ and ∇².
//!
//! These are deliberately independent of every analytic derivative in the
//! crate and serve as the reference the analytic code is checked against.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::scalar::{czero, lit, CVec3, Cplx, Linear, RVec3, Real};

/// Complex 3-vector valued function of position.
pub trait VectorField<T: Real>: Send + Sync {
    fn eval(&self, x: &RVec3<T>) -> CVec3<T>;
}

impl<T: Real, F: ?Sized> VectorField<T> for F
where
    F: Fn(&RVec3<T>) -> CVec3<T> + Send + Sync,
{
    fn eval(&self, x: &RVec3<T>) -> CVec3<T> {
        self(x)
    }
}

/// Complex scalar valued function of position.
pub trait ScalarField<T: Real>: Send + Sync {
    fn eval(&self, x: &RVec3<T>) -> Cplx<T>;
}

impl<T: Real, F: ?Sized> ScalarField<T> for F
where
    F: Fn(&RVec3<T>) -> Cplx<T> + Send + Sync,
{
    fn eval(&self, x: &RVec3<T>) -> Cplx<T> {
        self(x)
    }
}

pub const DEFAULT_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FdKind {
    Curl,
    Divergence,
    Gradient,
    Laplacian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FdValue<T: Real> {
    Vector(CVec3<T>),
    Scalar(Cplx<T>),
}

fn shifted<T: Real>(x: &RVec3<T>, axis: usize, d: T) -> RVec3<T> {
    let mut y = *x;
    y[axis] += d;
    y
}

/// `∂f/∂x_axis` with the five-point stencil.
pub fn partial<T: Real, V: Linear<T>>(
    f: impl Fn(&RVec3<T>) -> V,
    x: &RVec3<T>,
    axis: usize,
    h: T,
) -> V {
    let two = lit::<T>(2.0);
    let fm2 = f(&shifted(x, axis, -two * h));
    let fm1 = f(&shifted(x, axis, -h));
    let fp1 = f(&shifted(x, axis, h));
    let fp2 = f(&shifted(x, axis, two * h));
    (fm2 - fp2 + (fp1 - fm1).scaled(lit(8.0))).scaled(T::one() / (lit::<T>(12.0) * h))
}

/// `∂²f/∂x_axis²` with the five-point stencil.
pub fn second_partial<T: Real, V: Linear<T>>(
    f: impl Fn(&RVec3<T>) -> V,
    x: &RVec3<T>,
    axis: usize,
    h: T,
) -> V {
    let two = lit::<T>(2.0);
    let fm2 = f(&shifted(x, axis, -two * h));
    let fm1 = f(&shifted(x, axis, -h));
    let f0 = f(x);
    let fp1 = f(&shifted(x, axis, h));
    let fp2 = f(&shifted(x, axis, two * h));
    ((fp1 + fm1).scaled(lit(16.0)) - (fm2 + fp2) - f0.scaled(lit(30.0)))
        .scaled(T::one() / (lit::<T>(12.0) * h * h))
}

pub fn fd_curl<T: Real>(f: &(impl VectorField<T> + ?Sized), x: &RVec3<T>, h: T) -> CVec3<T> {
    let d: [CVec3<T>; 3] = [0, 1, 2].map(|a| partial(|y| f.eval(y), x, a, h));
    Vector3::new(d[1].z - d[2].y, d[2].x - d[0].z, d[0].y - d[1].x)
}

pub fn fd_divergence<T: Real>(f: &(impl VectorField<T> + ?Sized), x: &RVec3<T>, h: T) -> Cplx<T> {
    (0..3).fold(czero(), |acc, a| acc + partial(|y| f.eval(y)[a], x, a, h))
}

pub fn fd_gradient<T: Real>(f: &(impl ScalarField<T> + ?Sized), x: &RVec3<T>, h: T) -> CVec3<T> {
    Vector3::new(
        partial(|y| f.eval(y), x, 0, h),
        partial(|y| f.eval(y), x, 1, h),
        partial(|y| f.eval(y), x, 2, h),
    )
}

pub fn fd_laplacian<T: Real>(f: &(impl ScalarField<T> + ?Sized), x: &RVec3<T>, h: T) -> Cplx<T> {
    (0..3).fold(czero(), |acc, a| acc + second_partial(|y| f.eval(y), x, a, h))
}

pub fn fd_vector_laplacian<T: Real>(
    f: &(impl VectorField<T> + ?Sized),
    x: &RVec3<T>,
    h: T,
) -> CVec3<T> {
    let mut acc = crate::scalar::cvec_zero();
    for a in 0..3 {
        acc += second_partial(|y| f.eval(y), x, a, h);
    }
    acc
}

/// Hessian of a scalar field; mixed partials are nested first-derivative stencils.
pub fn fd_hessian<T: Real>(
    f: &(impl ScalarField<T> + ?Sized),
    x: &RVec3<T>,
    h: T,
) -> [[Cplx<T>; 3]; 3] {
    let mut out = [[czero(); 3]; 3];
    for i in 0..3 {
        out[i][i] = second_partial(|y| f.eval(y), x, i, h);
        for j in (i + 1)..3 {
            let v = partial(|y| partial(|z| f.eval(z), y, j, h), x, i, h);
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    out
}

/// Dispatches to the individual oracles. Scalar fields are passed as vector
/// fields whose x-component carries the value: `Gradient` differentiates
/// that component, `Laplacian` acts componentwise.
pub fn fd_derivative_oracle<T: Real>(
    field: &(impl VectorField<T> + ?Sized),
    x: &RVec3<T>,
    kind: FdKind,
    h: T,
) -> FdValue<T> {
    match kind {
        FdKind::Curl => FdValue::Vector(fd_curl(field, x, h)),
        FdKind::Divergence => FdValue::Scalar(fd_divergence(field, x, h)),
        FdKind::Gradient => FdValue::Vector(fd_gradient(&|y: &RVec3<T>| field.eval(y).x, x, h)),
        FdKind::Laplacian => FdValue::Vector(fd_vector_laplacian(field, x, h)),
    }
}
