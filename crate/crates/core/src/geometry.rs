//! Unit directions on the sphere and the plane frames attached to them.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TrkError};
use crate::scalar::{lit, rnorm, RVec3, Real};

/// A point on the unit sphere in transform space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Direction<T: Real> {
    components: [T; 3],
}

impl<T: Real> Direction<T> {
    /// Normalizes `v`; fails only for the zero vector.
    pub fn new(x: T, y: T, z: T) -> Result<Self> {
        Self::from_vector(&Vector3::new(x, y, z))
    }

    pub fn from_vector(v: &RVec3<T>) -> Result<Self> {
        let n = rnorm(v);
        if !(n > T::zero()) || !n.is_finite() {
            return Err(TrkError::ZeroVector);
        }
        Ok(Self {
            components: [v.x / n, v.y / n, v.z / n],
        })
    }

    /// Accepts `v` only if it already has unit norm within the structural tolerance.
    pub fn try_unit(v: &RVec3<T>) -> Result<Self> {
        let n = rnorm(v);
        if (n - T::one()).abs() > T::structural_tol() {
            return Err(TrkError::NotUnit(n.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self {
            components: [v.x, v.y, v.z],
        })
    }

    /// Builds a direction from components the caller guarantees are unit norm.
    pub(crate) fn from_unit_unchecked(x: T, y: T, z: T) -> Self {
        Self {
            components: [x, y, z],
        }
    }

    /// Spherical angles: polar angle from +z and azimuth from +x.
    pub fn from_angles(polar: T, azimuth: T) -> Self {
        let s = polar.sin();
        Self::from_unit_unchecked(s * azimuth.cos(), s * azimuth.sin(), polar.cos())
    }

    pub fn ex() -> Self {
        Self::from_unit_unchecked(T::one(), T::zero(), T::zero())
    }

    pub fn ey() -> Self {
        Self::from_unit_unchecked(T::zero(), T::one(), T::zero())
    }

    pub fn ez() -> Self {
        Self::from_unit_unchecked(T::zero(), T::zero(), T::one())
    }

    pub fn x(&self) -> T {
        self.components[0]
    }

    pub fn y(&self) -> T {
        self.components[1]
    }

    pub fn z(&self) -> T {
        self.components[2]
    }

    pub fn components(&self) -> [T; 3] {
        self.components
    }

    pub fn as_vector(&self) -> RVec3<T> {
        Vector3::new(self.components[0], self.components[1], self.components[2])
    }

    /// The antipodal point `-κ` (exact negation).
    pub fn antipode(&self) -> Self {
        Self::from_unit_unchecked(-self.x(), -self.y(), -self.z())
    }

    pub fn dot(&self, v: &RVec3<T>) -> T {
        self.x() * v.x + self.y() * v.y + self.z() * v.z
    }

    /// Azimuth `ψ = atan2(κ_y, κ_x)`.
    pub fn azimuth(&self) -> T {
        self.y().atan2(self.x())
    }

    /// Whether two directions coincide within `tol` (max component deviation).
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        (self.x() - other.x()).abs() <= tol
            && (self.y() - other.y()).abs() <= tol
            && (self.z() - other.z()).abs() <= tol
    }

    /// Applies an orthogonal map; the result is renormalized against rounding.
    pub fn transformed(&self, m: &nalgebra::Matrix3<T>) -> Self {
        let v = m * self.as_vector();
        Self::from_vector(&v).unwrap_or(*self)
    }
}

/// Right-handed orthonormal frame `{e1, e2, κ}` spanning the plane normal to `κ`.
///
/// The seed axis is the coordinate axis along which `κ` has the smallest
/// absolute component (lowest index on ties), orthogonalized against `κ`;
/// `e2 = κ × e1`.
pub fn plane_basis<T: Real>(kappa: &Direction<T>) -> (Direction<T>, Direction<T>) {
    let c = kappa.components();
    let mut seed = 0;
    for i in 1..3 {
        if c[i].abs() < c[seed].abs() {
            seed = i;
        }
    }
    let k = kappa.as_vector();
    let mut axis = Vector3::zeros();
    axis[seed] = T::one();
    let e1 = axis - k * k[seed];
    let e1 = e1 / rnorm(&e1);
    let e2 = k.cross(&e1);
    // e2 is unit up to rounding since k ⟂ e1 and both are unit.
    let e2 = e2 / rnorm(&e2);
    (
        Direction::from_unit_unchecked(e1.x, e1.y, e1.z),
        Direction::from_unit_unchecked(e2.x, e2.y, e2.z),
    )
}

/// Rotation by π about the x axis: `(x, y, z) -> (x, -y, -z)`.
pub fn rotate_pi_about_x<T: Real>(v: &RVec3<T>) -> RVec3<T> {
    Vector3::new(v.x, -v.y, -v.z)
}

/// Cylindrical unit vectors `(e_r, e_θ)` at azimuth `θ`.
pub fn cylindrical_frame<T: Real>(theta: T) -> (RVec3<T>, RVec3<T>) {
    let (s, c) = theta.sin_cos();
    (Vector3::new(c, s, T::zero()), Vector3::new(-s, c, T::zero()))
}

/// Deterministic pseudo-random directions for reproducible sweeps.
pub fn sample_directions<T: Real>(n: usize, seed: u64) -> Vec<Direction<T>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let z: f64 = rng.random_range(-1.0..1.0);
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let s = (1.0 - z * z).sqrt();
            Direction::from_vector(&Vector3::new(
                lit::<T>(s * phi.cos()),
                lit::<T>(s * phi.sin()),
                lit::<T>(z),
            ))
            .expect("nonzero sample")
        })
        .collect()
}

/// Deterministic pseudo-random points in the cube `[-half, half]^3`.
pub fn sample_points<T: Real>(n: usize, half: f64, seed: u64) -> Vec<RVec3<T>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            Vector3::new(
                lit::<T>(rng.random_range(-half..half)),
                lit::<T>(rng.random_range(-half..half)),
                lit::<T>(rng.random_range(-half..half)),
            )
        })
        .collect()
}
