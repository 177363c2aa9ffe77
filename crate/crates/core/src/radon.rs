//! Radon transforms of vector fields on the `S² × ℝ` model, the Γ-calculus
//! (`Γ = κ ∂/∂p`), and the analytic transforms of Trkalian fields.
//!
//! Trkalian transforms are supported on finitely many directions, so they
//! are kept as atoms `a e^{ifp} δ_{S²}(κ − d)`; Schwartz-class probes use
//! [`GridProfile`] samples on a periodic `p` grid.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Result, TrkError};
use crate::fd::{fd_curl, fd_divergence, fd_gradient, VectorField};
use crate::fields::{ModeField, PlaneWave, PlaneWaveSum};
use crate::geometry::{plane_basis, Direction};
use crate::moses::q_lambda;
use crate::quadrature::{pairwise_sum, PlaneQuadrature, SphereQuadrature};
use crate::scalar::{
    cmax, cnorm, complexify, cplx, cvec_zero, czero, expi, hdot, lit, rcross, rdot, scale, scale_re,
    CVec3, Cplx, Linear, RVec3, Real,
};

/// Directions closer than this (max component) are treated as the same point of S².
pub const DIRECTION_TOL: f64 = 1e-12;

/// `amplitude · e^{i frequency p} · δ_{S²}(κ − direction)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadonAtom<T: Real> {
    pub direction: Direction<T>,
    pub frequency: T,
    pub amplitude: CVec3<T>,
}

impl<T: Real> RadonAtom<T> {
    pub fn value(&self, p: T) -> CVec3<T> {
        scale(&self.amplitude, expi(self.frequency * p))
    }

    /// `|κ · a| / |a|`; zero for transverse atoms.
    pub fn longitudinal_fraction(&self) -> T {
        let n = cnorm(&self.amplitude);
        if n == T::zero() {
            return T::zero();
        }
        rdot(&self.direction.as_vector(), &self.amplitude).norm() / n
    }
}

/// Scalar atom `c e^{ifp} δ_{S²}(κ − d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarAtom<T: Real> {
    pub direction: Direction<T>,
    pub frequency: T,
    pub amplitude: Cplx<T>,
}

/// Finite sum of vector atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticProfile<T: Real> {
    pub atoms: Vec<RadonAtom<T>>,
    /// Eigenvalue magnitude label; `μν` is the Γ× eigenvalue for Trkalian profiles.
    pub nu: T,
    pub mu: i8,
    pub g: T,
}

/// Finite sum of scalar atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarAnalyticProfile<T: Real> {
    pub atoms: Vec<ScalarAtom<T>>,
}

fn same_point<T: Real>(a: &Direction<T>, b: &Direction<T>) -> bool {
    a.approx_eq(b, lit(DIRECTION_TOL))
}

fn same_freq<T: Real>(a: T, b: T) -> bool {
    (a - b).abs() <= lit::<T>(DIRECTION_TOL) * (T::one() + a.abs())
}

impl<T: Real> AnalyticProfile<T> {
    pub fn new(atoms: Vec<RadonAtom<T>>, nu: T, mu: i8) -> Self {
        Self {
            atoms,
            nu,
            mu,
            g: T::one(),
        }
    }

    pub fn eigenvalue(&self) -> T {
        lit::<T>(self.mu as f64) * self.nu
    }

    fn with_atoms(&self, atoms: Vec<RadonAtom<T>>) -> Self {
        Self {
            atoms,
            nu: self.nu,
            mu: self.mu,
            g: self.g,
        }
    }

    fn map_atoms(&self, f: impl Fn(&RadonAtom<T>) -> RadonAtom<T>) -> Self {
        self.with_atoms(self.atoms.iter().map(f).collect())
    }

    /// Coefficient of `δ_{S²}(κ − ·)` at `κ`, evaluated at `p`.
    pub fn value_at(&self, p: T, kappa: &Direction<T>) -> CVec3<T> {
        let mut acc = cvec_zero();
        for a in &self.atoms {
            if same_point(&a.direction, kappa) {
                acc += a.value(p);
            }
        }
        acc
    }

    /// Distinct atom directions in first-seen order.
    pub fn support(&self) -> Vec<Direction<T>> {
        let mut out: Vec<Direction<T>> = Vec::new();
        for a in &self.atoms {
            if !out.iter().any(|d| same_point(d, &a.direction)) {
                out.push(a.direction);
            }
        }
        out
    }

    /// Atoms with equal direction and frequency combined.
    pub fn merged(&self) -> Self {
        let mut out: Vec<RadonAtom<T>> = Vec::new();
        for a in &self.atoms {
            match out
                .iter_mut()
                .find(|b| same_point(&b.direction, &a.direction) && same_freq(b.frequency, a.frequency))
            {
                Some(b) => b.amplitude += a.amplitude,
                None => out.push(*a),
            }
        }
        self.with_atoms(out)
    }

    /// Largest amplitude mismatch between two profiles after merging.
    pub fn max_difference(&self, other: &Self) -> T {
        let a = self.merged();
        let mut b = other.merged().atoms;
        let mut worst = T::zero();
        for x in &a.atoms {
            match b
                .iter()
                .position(|y| same_point(&y.direction, &x.direction) && same_freq(y.frequency, x.frequency))
            {
                Some(i) => {
                    let y = b.swap_remove(i);
                    worst = worst.max(cnorm(&(x.amplitude - y.amplitude)));
                }
                None => worst = worst.max(cnorm(&x.amplitude)),
            }
        }
        for y in &b {
            worst = worst.max(cnorm(&y.amplitude));
        }
        worst
    }

    pub fn scaled(&self, s: Cplx<T>) -> Self {
        self.map_atoms(|a| RadonAtom {
            amplitude: scale(&a.amplitude, s),
            ..*a
        })
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        self.with_atoms(atoms)
    }

    /// `Γ×`: `a ↦ i f d × a`.
    pub fn gamma_cross(&self) -> Self {
        self.map_atoms(|a| RadonAtom {
            amplitude: scale(
                &rcross(&a.direction.as_vector(), &a.amplitude),
                cplx(T::zero(), a.frequency),
            ),
            ..*a
        })
    }

    /// `Γ·`: `a ↦ i f d · a`.
    pub fn gamma_dot(&self) -> ScalarAnalyticProfile<T> {
        ScalarAnalyticProfile {
            atoms: self
                .atoms
                .iter()
                .map(|a| ScalarAtom {
                    direction: a.direction,
                    frequency: a.frequency,
                    amplitude: rdot(&a.direction.as_vector(), &a.amplitude) * cplx(T::zero(), a.frequency),
                })
                .collect(),
        }
    }

    /// `∂/∂p`: `a ↦ i f a`.
    pub fn d_dp(&self) -> Self {
        self.map_atoms(|a| RadonAtom {
            amplitude: scale(&a.amplitude, cplx(T::zero(), a.frequency)),
            ..*a
        })
    }

    /// `F(−p, −κ)` as a profile in `(p, κ)`.
    pub fn parity_image(&self) -> Self {
        self.map_atoms(|a| RadonAtom {
            direction: a.direction.antipode(),
            frequency: -a.frequency,
            ..*a
        })
    }

    /// `F(−p, κ)` as a profile in `(p, κ)`.
    pub fn p_reflected(&self) -> Self {
        self.map_atoms(|a| RadonAtom {
            frequency: -a.frequency,
            ..*a
        })
    }

    /// `F(p, −κ)` as a profile in `(p, κ)`.
    pub fn kappa_reflected(&self) -> Self {
        self.map_atoms(|a| RadonAtom {
            direction: a.direction.antipode(),
            ..*a
        })
    }

    /// Largest `|κ · a| / |a|` over the atoms.
    pub fn transversality_residual(&self) -> T {
        self.atoms
            .iter()
            .map(|a| a.longitudinal_fraction())
            .fold(T::zero(), T::max)
    }

    /// Largest `|Γ×F − μν F|` relative to the largest amplitude.
    pub fn eigen_residual(&self) -> T {
        let lhs = self.gamma_cross();
        let rhs = self.scaled(cplx(self.eigenvalue(), T::zero()));
        let norm = self.atoms.iter().map(|a| cnorm(&a.amplitude)).fold(T::zero(), T::max);
        lhs.max_difference(&rhs) / norm.max(lit(1e-300))
    }

    /// `R†[F](x) = Σ a e^{i f d·x}` (exact for atoms).
    pub fn adjoint(&self, x: &RVec3<T>) -> CVec3<T> {
        let terms: Vec<CVec3<T>> = self
            .atoms
            .iter()
            .map(|a| scale(&a.amplitude, expi(a.frequency * a.direction.dot(x))))
            .collect();
        pairwise_sum(&terms, cvec_zero())
    }

    /// Physical-space image `−(1/8π²) ∫ ∂²_p F(κ·x, κ) dΩ` as plane waves.
    pub fn inverse_plane_waves(&self) -> PlaneWaveSum<T> {
        let c = lit::<T>(1.0 / (8.0 * PI * PI));
        PlaneWaveSum {
            terms: self
                .atoms
                .iter()
                .map(|a| PlaneWave {
                    k: a.direction.as_vector() * a.frequency,
                    c: scale_re(&a.amplitude, a.frequency * a.frequency * c),
                })
                .collect(),
        }
    }

    /// Refined inversion over a hemisphere: `−(1/4π²) ∫_H ∂²_p F(κ·x, κ) dΩ`.
    pub fn hemisphere_plane_waves(&self, h: &Hemisphere<T>) -> PlaneWaveSum<T> {
        let c = lit::<T>(1.0 / (4.0 * PI * PI));
        PlaneWaveSum {
            terms: self
                .atoms
                .iter()
                .filter(|a| h.contains(&a.direction))
                .map(|a| PlaneWave {
                    k: a.direction.as_vector() * a.frequency,
                    c: scale_re(&a.amplitude, a.frequency * a.frequency * c),
                })
                .collect(),
        }
    }

    /// Samples the atoms onto a grid whose direction set is the atom support.
    pub fn to_grid(&self, grid: PGrid<T>) -> GridProfile<T> {
        let dirs = self.support();
        let mut samples = vec![cvec_zero(); dirs.len() * grid.n];
        for (k, d) in dirs.iter().enumerate() {
            for i in 0..grid.n {
                samples[k * grid.n + i] = self.value_at(grid.p(i), d);
            }
        }
        GridProfile {
            grid,
            directions: dirs,
            weights: None,
            samples,
        }
    }
}

impl<T: Real> ScalarAnalyticProfile<T> {
    /// `Γ`: `c ↦ i f c d`.
    pub fn gamma_grad(&self, nu: T, mu: i8) -> AnalyticProfile<T> {
        AnalyticProfile::new(
            self.atoms
                .iter()
                .map(|a| RadonAtom {
                    direction: a.direction,
                    frequency: a.frequency,
                    amplitude: scale(&complexify(&a.direction.as_vector()), a.amplitude * cplx(T::zero(), a.frequency)),
                })
                .collect(),
            nu,
            mu,
        )
    }

    pub fn max_amplitude(&self) -> T {
        self.atoms.iter().map(|a| a.amplitude.norm()).fold(T::zero(), T::max)
    }
}

/// Radon transform of `c e^{ik·x}`: `(2π)²/|k|² [e^{i|k|p} δ_{k̂} + e^{−i|k|p} δ_{−k̂}] c`.
pub fn radon_of_plane_waves<T: Real>(waves: &PlaneWaveSum<T>, nu: T, mu: i8) -> Result<AnalyticProfile<T>> {
    let four_pi2 = lit::<T>(4.0 * PI * PI);
    let mut atoms = Vec::with_capacity(2 * waves.terms.len());
    for w in &waves.terms {
        let kn = crate::scalar::rnorm(&w.k);
        let d = Direction::from_vector(&w.k).map_err(|_| TrkError::ZeroWaveVector)?;
        let amp = scale_re(&w.c, four_pi2 / (kn * kn));
        atoms.push(RadonAtom { direction: d, frequency: kn, amplitude: amp });
        atoms.push(RadonAtom { direction: d.antipode(), frequency: -kn, amplitude: amp });
    }
    Ok(AnalyticProfile::new(atoms, nu, mu))
}

/// Analytic transform of a mode field: per mode, atoms at `μκ₀` with
/// frequency `λν` and at `−μκ₀` with frequency `−λν`, both with amplitude
/// `(2π)^{1/2} (1/g)(1/ν²) s Q_λ(κ₀)`.
pub fn radon_mode_analytic<T: Real>(f: &ModeField<T>) -> AnalyticProfile<T> {
    let nu = f.nu();
    let c = lit::<T>(std::f64::consts::TAU.sqrt()) / (f.g() * nu * nu);
    let mut atoms = Vec::with_capacity(2 * f.modes().len());
    for m in f.modes() {
        let amp = scale(&q_lambda(&m.kappa, m.lambda), m.amplitude * c);
        let lnu = lit::<T>(m.lambda as f64) * nu;
        let d = if f.mu() == 1 { m.kappa } else { m.kappa.antipode() };
        atoms.push(RadonAtom { direction: d, frequency: lnu, amplitude: amp });
        atoms.push(RadonAtom { direction: d.antipode(), frequency: -lnu, amplitude: amp });
    }
    AnalyticProfile {
        atoms,
        nu,
        mu: f.mu(),
        g: f.g(),
    }
}

/// `R†[G](x) = ∫_{S²} G(κ·x, κ) dΩ` by sphere quadrature.
pub fn adjoint_radon<T: Real, V: Linear<T>>(
    g: impl Fn(T, &Direction<T>) -> V,
    x: &RVec3<T>,
    quad: &SphereQuadrature<T>,
) -> V {
    quad.integrate(|k| g(k.dot(x), k))
}

/// `F(x) = −(1/8π²) ∫ ∂²_p F^R(κ·x, κ) dΩ` for atoms (exact).
pub fn inverse_radon_analytic<T: Real>(profile: &AnalyticProfile<T>, x: &RVec3<T>) -> CVec3<T> {
    profile.inverse_plane_waves().eval(x)
}

/// Refined inversion restricted to the hemisphere `h` (exact for atoms).
pub fn hemisphere_inverse<T: Real>(profile: &AnalyticProfile<T>, h: &Hemisphere<T>, x: &RVec3<T>) -> CVec3<T> {
    profile.hemisphere_plane_waves(h).eval(x)
}

/// `R ∘ R_H^{-1}` applied to a profile. Genuine transforms are reproduced;
/// for other data the output on `H′` is the parity image of the data on `H`.
pub fn hemisphere_roundtrip<T: Real>(profile: &AnalyticProfile<T>, h: &Hemisphere<T>) -> Result<AnalyticProfile<T>> {
    let mut out = radon_of_plane_waves(&profile.hemisphere_plane_waves(h), profile.nu, profile.mu)?;
    out.g = profile.g;
    Ok(out)
}

/// Largest deviation of `MᵀM` from the identity.
pub fn orthogonality_defect<T: Real>(m: &Matrix3<T>) -> T {
    let p = m.transpose() * m;
    let mut worst = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { T::one() } else { T::zero() };
            worst = worst.max((p[(i, j)] - want).abs());
        }
    }
    worst
}

/// Transform of `x ↦ F(T⁻¹x)` for orthogonal `T`:
/// `R[F∘T⁻¹](p, κ) = F^R(p, Tᵀκ)`, i.e. atoms move from `d` to `T d`.
pub fn transform_radon_linear<T: Real>(profile: &AnalyticProfile<T>, t: &Matrix3<T>) -> Result<AnalyticProfile<T>> {
    let defect = orthogonality_defect(t);
    if defect > lit(1e-12) {
        return Err(TrkError::NotOrthogonal(defect.to_f64().unwrap_or(f64::NAN)));
    }
    let det = t[(0, 0)] * (t[(1, 1)] * t[(2, 2)] - t[(1, 2)] * t[(2, 1)])
        - t[(0, 1)] * (t[(1, 0)] * t[(2, 2)] - t[(1, 2)] * t[(2, 0)])
        + t[(0, 2)] * (t[(1, 0)] * t[(2, 1)] - t[(1, 1)] * t[(2, 0)]);
    let eig = if det < T::zero() { -profile.mu } else { profile.mu };
    let mut out = profile.map_atoms(|a| {
        let v = t * a.direction.as_vector();
        let d = if *t == -Matrix3::identity() {
            a.direction.antipode()
        } else {
            Direction::from_vector(&v).unwrap_or(a.direction)
        };
        RadonAtom { direction: d, ..*a }
    });
    out.mu = eig;
    Ok(out)
}

/// Transform of the Lundquist field: atoms on the equatorial ring
/// `κ_j = (cos ψ_j, sin ψ_j, 0)`, `ψ_j = 2πj/n`, with ring weight `2π/n`:
/// `(κ_j, ν, w·2πiF₀/ν²·L_j)` and `(κ_j, −ν, w·2πiF₀/ν²·L′_j)`, where
/// `L = (κ_y, −κ_x, −i)` and `L′ = (−κ_y, κ_x, −i)`.
///
/// `n` must be even so the ring is closed under `κ → −κ`.
pub fn lundquist_radon_profile<T: Real>(f0: T, nu: T, n: usize) -> Result<AnalyticProfile<T>> {
    if nu == T::zero() {
        return Err(TrkError::ZeroEigenvalue);
    }
    if n < 4 || n % 2 != 0 {
        return Err(TrkError::QuadratureOrder(format!("ring size must be even and >= 4, got {n}")));
    }
    let ring = equatorial_ring::<T>(n);
    let w = lit::<T>(std::f64::consts::TAU / n as f64);
    let c = cplx(T::zero(), lit::<T>(std::f64::consts::TAU) * f0 / (nu * nu)) * w;
    let mut atoms = Vec::with_capacity(2 * n);
    for d in ring {
        let (kx, ky) = (d.x(), d.y());
        let l = Vector3::new(cplx(ky, T::zero()), cplx(-kx, T::zero()), cplx(T::zero(), -T::one()));
        let lp = Vector3::new(cplx(-ky, T::zero()), cplx(kx, T::zero()), cplx(T::zero(), -T::one()));
        atoms.push(RadonAtom { direction: d, frequency: nu, amplitude: scale(&l, c) });
        atoms.push(RadonAtom { direction: d, frequency: -nu, amplitude: scale(&lp, c) });
    }
    Ok(AnalyticProfile::new(atoms, nu, 1))
}

/// `n` equally spaced equatorial directions, exactly closed under negation.
pub fn equatorial_ring<T: Real>(n: usize) -> Vec<Direction<T>> {
    let half = n / 2;
    let mut out: Vec<Direction<T>> = (0..half)
        .map(|j| {
            let psi = std::f64::consts::TAU * j as f64 / n as f64;
            Direction::from_unit_unchecked(lit(psi.cos()), lit(psi.sin()), T::zero())
        })
        .collect();
    for j in 0..half {
        out.push(out[j].antipode());
    }
    out
}

/// Spherical curl transform values at `κ` for both helicities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCurl<T: Real> {
    pub plus: Cplx<T>,
    pub minus: Cplx<T>,
}

impl<T: Real> SphericalCurl<T> {
    pub fn get(&self, lambda: i8) -> Cplx<T> {
        if lambda >= 0 {
            self.plus
        } else {
            self.minus
        }
    }
}

/// `s_λ = (2π)^{-1/2} g ν² e^{−iμλνp} ⟨Q_λ(κ), F^R(p, κ)⟩`, the probe transform
/// with probe `Q_λ`, evaluated on the delta coefficient at `κ`.
pub fn spherical_curl_transform<T: Real>(profile: &AnalyticProfile<T>, kappa: &Direction<T>, p: T) -> SphericalCurl<T> {
    let value = profile.value_at(p, kappa);
    let pre = profile.g * profile.nu * profile.nu / lit::<T>(std::f64::consts::TAU.sqrt());
    let s = |lambda: i8| {
        let phase = expi(-lit::<T>((profile.mu * lambda) as f64) * profile.nu * p);
        hdot(&q_lambda(kappa, lambda), &value) * phase * pre
    };
    SphericalCurl { plus: s(1), minus: s(-1) }
}

type Indicator<T> = Arc<dyn Fn(&Direction<T>) -> bool + Send + Sync>;

/// Half of S² holding exactly one point of every antipodal pair.
#[derive(Clone)]
pub struct Hemisphere<T: Real> {
    indicator: Indicator<T>,
}

impl<T: Real> fmt::Debug for Hemisphere<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Hemisphere")
    }
}

impl<T: Real> Hemisphere<T> {
    /// Arbitrary indicator; callers are responsible for the pairing property
    /// (see [`Hemisphere::pairing_violations`]).
    pub fn from_indicator(f: impl Fn(&Direction<T>) -> bool + Send + Sync + 'static) -> Self {
        Self { indicator: Arc::new(f) }
    }

    /// `κ_z > 0`, completed on the equator by `κ_y > 0`, then `κ_x > 0`.
    pub fn upper() -> Self {
        Self::from_indicator(|k| {
            let z = T::zero();
            if k.z() != z {
                k.z() > z
            } else if k.y() != z {
                k.y() > z
            } else {
                k.x() > z
            }
        })
    }

    /// The complementary hemisphere `H′ = −H`.
    pub fn complement(&self) -> Self {
        let inner = self.indicator.clone();
        Self::from_indicator(move |k| inner(&k.antipode()))
    }

    pub fn contains(&self, k: &Direction<T>) -> bool {
        (self.indicator)(k)
    }

    /// Number of directions for which neither or both of `{κ, −κ}` belong.
    pub fn pairing_violations(&self, dirs: &[Direction<T>]) -> usize {
        dirs.iter()
            .filter(|k| self.contains(k) == self.contains(&k.antipode()))
            .count()
    }
}

/// Uniform periodic grid `p_i = p0 + i·dp`, `i < n`, `n` a power of two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PGrid<T: Real> {
    pub p0: T,
    pub dp: T,
    pub n: usize,
}

impl<T: Real> PGrid<T> {
    pub fn new(p0: T, dp: T, n: usize) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(TrkError::GridSize(n));
        }
        if !(dp > T::zero()) {
            return Err(TrkError::InvalidParameter("p spacing must be positive".into()));
        }
        Ok(Self { p0, dp, n })
    }

    /// Symmetric grid on `[−L/2, L/2)` with period `L`.
    pub fn centered(period: T, n: usize) -> Result<Self> {
        Self::new(-period / lit(2.0), period / lit(n as f64), n)
    }

    /// Grid whose period is `cycles · 2π/|ν|`, so tones `e^{±iνp}` sit on bins.
    pub fn commensurate(nu: T, cycles: usize, n: usize) -> Result<Self> {
        Self::centered(lit::<T>(std::f64::consts::TAU * cycles as f64) / nu.abs(), n)
    }

    /// Validates explicitly listed sample positions.
    pub fn from_values(p: &[T]) -> Result<Self> {
        if p.len() < 2 {
            return Err(TrkError::GridSize(p.len()));
        }
        let dp = p[1] - p[0];
        let tol = lit::<T>(1e-9) * dp.abs().max(T::one());
        for w in p.windows(2) {
            if ((w[1] - w[0]) - dp).abs() > tol {
                return Err(TrkError::NonUniformGrid);
            }
        }
        Self::new(p[0], dp, p.len())
    }

    pub fn p(&self, i: usize) -> T {
        self.p0 + self.dp * lit(i as f64)
    }

    pub fn period(&self) -> T {
        self.dp * lit(self.n as f64)
    }

    pub fn nyquist(&self) -> T {
        T::PI() / self.dp
    }

    /// Signed angular frequency of FFT bin `j`; the Nyquist bin reports `+π/dp`.
    pub fn frequency(&self, j: usize) -> T {
        let n = self.n as i64;
        let jj = j as i64;
        let signed = if jj <= n / 2 { jj } else { jj - n };
        lit::<T>(std::f64::consts::TAU * signed as f64) / self.period()
    }

    /// Index of `−p_i` on a centered grid (periodic wrap).
    pub fn mirror(&self, i: usize) -> usize {
        (self.n - i) % self.n
    }
}

/// Spectral derivative of a periodic series. For odd orders the Nyquist
/// bin is dropped, since its derivative is not representable.
pub fn spectral_derivative<T: Real>(series: &[Cplx<T>], grid: &PGrid<T>, order: u32) -> Vec<Cplx<T>> {
    let n = series.len();
    let mut planner = FftPlanner::<T>::new();
    let mut buf = series.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    for (j, c) in buf.iter_mut().enumerate() {
        if order % 2 == 1 && j == n / 2 {
            *c = czero();
            continue;
        }
        let ik = cplx(T::zero(), grid.frequency(j));
        *c *= ik.powu(order);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let inv = T::one() / lit(n as f64);
    buf.iter().map(|c| c * inv).collect()
}

/// Applies a diagonal Fourier multiplier to a periodic series.
pub fn fourier_multiply<T: Real>(series: &[Cplx<T>], grid: &PGrid<T>, m: impl Fn(usize, T) -> Cplx<T>) -> Vec<Cplx<T>> {
    let n = series.len();
    let mut planner = FftPlanner::<T>::new();
    let mut buf = series.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    for (j, c) in buf.iter_mut().enumerate() {
        *c *= m(j, grid.frequency(j));
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let inv = T::one() / lit(n as f64);
    buf.iter().map(|c| c * inv).collect()
}

/// Forward DFT coefficients `X_j = Σ_i f_i e^{−2πi ij/n}`.
pub fn dft<T: Real>(series: &[Cplx<T>]) -> Vec<Cplx<T>> {
    let mut planner = FftPlanner::<T>::new();
    let mut buf = series.to_vec();
    planner.plan_fft_forward(series.len()).process(&mut buf);
    buf
}

/// Trigonometric interpolation of a periodic series at an arbitrary `p`.
pub fn trig_interpolate<T: Real>(coeffs: &[Cplx<T>], grid: &PGrid<T>, p: T) -> Cplx<T> {
    let n = coeffs.len();
    let t = p - grid.p0;
    let terms: Vec<Cplx<T>> = coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| {
            if j == n / 2 {
                *c * (grid.frequency(j) * t).cos()
            } else {
                *c * expi(grid.frequency(j) * t)
            }
        })
        .collect();
    pairwise_sum(&terms, czero()) / lit::<T>(n as f64)
}

/// Vector samples `F^R(p_i, κ_k)`, stored direction-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridProfile<T: Real> {
    pub grid: PGrid<T>,
    pub directions: Vec<Direction<T>>,
    /// Sphere quadrature weights of the directions, when they form a rule.
    pub weights: Option<Vec<T>>,
    pub samples: Vec<CVec3<T>>,
}

/// Scalar samples `f^R(p_i, κ_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGridProfile<T: Real> {
    pub grid: PGrid<T>,
    pub directions: Vec<Direction<T>>,
    pub weights: Option<Vec<T>>,
    pub samples: Vec<Cplx<T>>,
}

impl<T: Real> GridProfile<T> {
    pub fn new(grid: PGrid<T>, directions: Vec<Direction<T>>, weights: Option<Vec<T>>, samples: Vec<CVec3<T>>) -> Result<Self> {
        if samples.len() != grid.n * directions.len() {
            return Err(TrkError::Shape(format!(
                "expected {} samples, got {}",
                grid.n * directions.len(),
                samples.len()
            )));
        }
        if let Some(w) = &weights {
            if w.len() != directions.len() {
                return Err(TrkError::Shape("one weight per direction required".into()));
            }
        }
        Ok(Self { grid, directions, weights, samples })
    }

    pub fn from_fn(grid: PGrid<T>, directions: Vec<Direction<T>>, weights: Option<Vec<T>>, f: impl Fn(T, &Direction<T>) -> CVec3<T>) -> Self {
        let mut samples = Vec::with_capacity(grid.n * directions.len());
        for d in &directions {
            for i in 0..grid.n {
                samples.push(f(grid.p(i), d));
            }
        }
        Self { grid, directions, weights, samples }
    }

    pub fn from_quadrature(grid: PGrid<T>, quad: &SphereQuadrature<T>, f: impl Fn(T, &Direction<T>) -> CVec3<T>) -> Self {
        Self::from_fn(grid, quad.nodes.clone(), Some(quad.weights.clone()), f)
    }

    pub fn series(&self, k: usize) -> &[CVec3<T>] {
        &self.samples[k * self.grid.n..(k + 1) * self.grid.n]
    }

    pub fn get(&self, i: usize, k: usize) -> CVec3<T> {
        self.samples[k * self.grid.n + i]
    }

    fn with_samples(&self, samples: Vec<CVec3<T>>) -> Self {
        Self { grid: self.grid, directions: self.directions.clone(), weights: self.weights.clone(), samples }
    }

    /// Applies a per-component operation to every direction series.
    pub fn map_series(&self, op: impl Fn(&[Cplx<T>]) -> Vec<Cplx<T>> + Sync) -> Self {
        let n = self.grid.n;
        let per_dir: Vec<Vec<CVec3<T>>> = (0..self.directions.len())
            .into_par_iter()
            .map(|k| {
                let s = self.series(k);
                let comps: Vec<Vec<Cplx<T>>> = (0..3).map(|c| op(&s.iter().map(|v| v[c]).collect::<Vec<_>>())).collect();
                (0..n).map(|i| Vector3::new(comps[0][i], comps[1][i], comps[2][i])).collect()
            })
            .collect();
        self.with_samples(per_dir.into_iter().flatten().collect())
    }

    pub fn d_dp(&self, order: u32) -> Self {
        let g = self.grid;
        self.map_series(|s| spectral_derivative(s, &g, order))
    }

    /// `Γ× F = κ × ∂_p F` (spectral).
    pub fn gamma_cross(&self) -> Self {
        let d = self.d_dp(1);
        let n = self.grid.n;
        let samples = d
            .samples
            .iter()
            .enumerate()
            .map(|(idx, v)| rcross(&self.directions[idx / n].as_vector(), v))
            .collect();
        self.with_samples(samples)
    }

    /// `Γ· F = κ · ∂_p F` (spectral).
    pub fn gamma_dot(&self) -> ScalarGridProfile<T> {
        let d = self.d_dp(1);
        let n = self.grid.n;
        ScalarGridProfile {
            grid: self.grid,
            directions: self.directions.clone(),
            weights: self.weights.clone(),
            samples: d
                .samples
                .iter()
                .enumerate()
                .map(|(idx, v)| rdot(&self.directions[idx / n].as_vector(), v))
                .collect(),
        }
    }

    pub fn scaled(&self, s: Cplx<T>) -> Self {
        self.with_samples(self.samples.iter().map(|v| scale(v, s)).collect())
    }

    /// Largest sample-wise difference.
    pub fn max_difference(&self, other: &Self) -> T {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| cmax(&(a - b)))
            .fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.samples.iter().map(cmax).fold(T::zero(), T::max)
    }

    /// Largest `|κ · F|` over all samples.
    pub fn longitudinal_max(&self) -> T {
        let n = self.grid.n;
        self.samples
            .iter()
            .enumerate()
            .map(|(idx, v)| rdot(&self.directions[idx / n].as_vector(), v).norm())
            .fold(T::zero(), T::max)
    }

    /// Index of the direction at `−κ_k`, if present.
    pub fn antipode_index(&self, k: usize) -> Option<usize> {
        let a = self.directions[k].antipode();
        self.directions.iter().position(|d| same_point(d, &a))
    }

    /// Largest `|F(p, κ) − F(−p, −κ)|` over the grid (centered grids).
    pub fn parity_residual(&self) -> Option<T> {
        let mut worst = T::zero();
        for k in 0..self.directions.len() {
            let a = self.antipode_index(k)?;
            for i in 0..self.grid.n {
                worst = worst.max(cmax(&(self.get(i, k) - self.get(self.grid.mirror(i), a))));
            }
        }
        Some(worst)
    }

    /// Trigonometric interpolant of direction `k` at `p`.
    pub fn interpolate(&self, k: usize, p: T) -> CVec3<T> {
        let s = self.series(k);
        let c: Vec<Vec<Cplx<T>>> = (0..3).map(|c| dft(&s.iter().map(|v| v[c]).collect::<Vec<_>>())).collect();
        Vector3::new(
            trig_interpolate(&c[0], &self.grid, p),
            trig_interpolate(&c[1], &self.grid, p),
            trig_interpolate(&c[2], &self.grid, p),
        )
    }

    /// `−(1/8π²) Σ_k w_k ∂²_p F(κ_k·x, κ_k)`, requires quadrature weights.
    pub fn inverse(&self, x: &RVec3<T>) -> Result<CVec3<T>> {
        let w = self
            .weights
            .as_ref()
            .ok_or_else(|| TrkError::Precondition("grid directions carry no quadrature weights".into()))?;
        let d2 = self.d_dp(2);
        let terms: Vec<CVec3<T>> = (0..self.directions.len())
            .map(|k| scale_re(&d2.interpolate(k, self.directions[k].dot(x)), w[k]))
            .collect();
        Ok(scale_re(&pairwise_sum(&terms, cvec_zero()), -lit::<T>(1.0 / (8.0 * PI * PI))))
    }
}

impl<T: Real> ScalarGridProfile<T> {
    pub fn from_fn(grid: PGrid<T>, directions: Vec<Direction<T>>, weights: Option<Vec<T>>, f: impl Fn(T, &Direction<T>) -> Cplx<T>) -> Self {
        let mut samples = Vec::with_capacity(grid.n * directions.len());
        for d in &directions {
            for i in 0..grid.n {
                samples.push(f(grid.p(i), d));
            }
        }
        Self { grid, directions, weights, samples }
    }

    /// `Γ f = κ ∂_p f` (spectral).
    pub fn gamma_grad(&self) -> GridProfile<T> {
        let n = self.grid.n;
        let mut samples = Vec::with_capacity(self.samples.len());
        for (k, d) in self.directions.iter().enumerate() {
            let ds = spectral_derivative(&self.samples[k * n..(k + 1) * n], &self.grid, 1);
            samples.extend(ds.into_iter().map(|c| scale(&complexify(&d.as_vector()), c)));
        }
        GridProfile { grid: self.grid, directions: self.directions.clone(), weights: self.weights.clone(), samples }
    }

    pub fn max_abs(&self) -> T {
        self.samples.iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }
}

/// Outcome of one numeric plane integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadonSample<T: Real> {
    pub value: CVec3<T>,
    /// Largest boundary magnitude over the largest magnitude on the plane.
    pub boundary_ratio: T,
}

/// Boundary ratio above which a truncation warning is raised.
pub const TRUNCATION_THRESHOLD: f64 = 1e-10;

impl<T: Real> RadonSample<T> {
    pub fn truncated(&self) -> bool {
        self.boundary_ratio > lit(TRUNCATION_THRESHOLD)
    }

    pub fn warning(&self, p: T, kappa: &Direction<T>) -> Option<String> {
        self.truncated().then(|| {
            format!(
                "plane truncation: boundary/max = {:e} at p = {}, κ = ({}, {}, {})",
                self.boundary_ratio.to_f64().unwrap_or(f64::NAN),
                p,
                kappa.x(),
                kappa.y(),
                kappa.z()
            )
        })
    }
}

/// `∫ F(pκ + u e₁ + v e₂) du dv` over the truncated plane.
pub fn radon_forward_numeric<T: Real>(
    field: &(impl VectorField<T> + ?Sized),
    p: T,
    kappa: &Direction<T>,
    quad: &PlaneQuadrature<T>,
) -> RadonSample<T> {
    let (e1, e2) = plane_basis(kappa);
    let (e1, e2, k) = (e1.as_vector(), e2.as_vector(), kappa.as_vector());
    let (u, w) = quad.axis_rule();
    let origin = k * p;
    let mut rows = Vec::with_capacity(u.len());
    let mut interior_max = T::zero();
    for (i, &ui) in u.iter().enumerate() {
        let mut row = Vec::with_capacity(u.len());
        for (j, &vj) in u.iter().enumerate() {
            let val = field.eval(&(origin + e1 * ui + e2 * vj));
            interior_max = interior_max.max(cmax(&val));
            row.push(scale_re(&val, w[i] * w[j]));
        }
        rows.push(pairwise_sum(&row, cvec_zero()));
    }
    let value = pairwise_sum(&rows, cvec_zero());
    let h = quad.half_width();
    let m = quad.nodes_per_axis().max(8);
    let mut boundary = T::zero();
    for s in 0..m {
        let t = -h + (h + h) * lit::<T>(s as f64) / lit::<T>((m - 1) as f64);
        for (a, b) in [(t, h), (t, -h), (h, t), (-h, t)] {
            boundary = boundary.max(cmax(&field.eval(&(origin + e1 * a + e2 * b))));
        }
    }
    let boundary_ratio = if interior_max > T::zero() { boundary / interior_max } else { T::zero() };
    RadonSample { value, boundary_ratio }
}

/// Numeric transform sampled on a grid, parallel over directions.
/// Returns the profile and any truncation warnings.
pub fn radon_grid<T: Real>(
    field: &(impl VectorField<T> + ?Sized),
    grid: PGrid<T>,
    quad: &SphereQuadrature<T>,
    plane: &PlaneQuadrature<T>,
) -> (GridProfile<T>, Vec<String>) {
    let per_dir: Vec<(Vec<CVec3<T>>, Vec<String>)> = quad
        .nodes
        .par_iter()
        .map(|d| {
            let mut vals = Vec::with_capacity(grid.n);
            let mut warns = Vec::new();
            for i in 0..grid.n {
                let s = radon_forward_numeric(field, grid.p(i), d, plane);
                if let Some(w) = s.warning(grid.p(i), d) {
                    warns.push(w);
                }
                vals.push(s.value);
            }
            (vals, warns)
        })
        .collect();
    let mut samples = Vec::with_capacity(grid.n * quad.len());
    let mut warnings = Vec::new();
    for (v, w) in per_dir {
        samples.extend(v);
        warnings.extend(w);
    }
    (
        GridProfile { grid, directions: quad.nodes.clone(), weights: Some(quad.weights.clone()), samples },
        warnings,
    )
}

/// `R†R[F](x) = ∫ R[F](κ·x, κ) dκ` with both transforms numeric, parallel
/// over the sphere nodes.
pub fn adjoint_of_numeric_radon<T: Real>(
    field: &(impl VectorField<T> + ?Sized),
    x: &RVec3<T>,
    quad: &SphereQuadrature<T>,
    plane: &PlaneQuadrature<T>,
) -> CVec3<T> {
    let terms: Vec<CVec3<T>> = quad
        .nodes
        .par_iter()
        .zip(&quad.weights)
        .map(|(d, &w)| scale_re(&radon_forward_numeric(field, d.dot(x), d, plane).value, w))
        .collect();
    pairwise_sum(&terms, cvec_zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntertwiningKind {
    Curl,
    Div,
    Grad,
}

/// Both sides of an intertwining relation at one `(p, κ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntertwiningResult<T: Real> {
    pub residual: T,
    pub lhs_norm: T,
    pub rhs_norm: T,
    pub warnings: Vec<String>,
}

/// `‖R[∇∘F] − Γ∘R[F]‖` at `(p, κ)`. The left side integrates the fd oracle
/// derivative (step `h`); the right side differentiates the numeric
/// transform in `p` with the five-point stencil (step `hp`). For `Grad` the
/// scalar is the x-component of `field`.
pub fn intertwining_check<T: Real>(
    field: &(impl VectorField<T> + ?Sized),
    kappa: &Direction<T>,
    p: T,
    kind: IntertwiningKind,
    plane: &PlaneQuadrature<T>,
    h: T,
    hp: T,
) -> IntertwiningResult<T> {
    let warnings = std::cell::RefCell::new(Vec::new());
    let radon = |g: &(dyn Fn(&RVec3<T>) -> CVec3<T> + Send + Sync), q: T| {
        let s = radon_forward_numeric(g, q, kappa, plane);
        if let Some(w) = s.warning(q, kappa) {
            warnings.borrow_mut().push(w);
        }
        s.value
    };
    let base = |y: &RVec3<T>| field.eval(y);
    let d = crate::fd::partial(|y: &RVec3<T>| radon(&base, y.x), &Vector3::new(p, T::zero(), T::zero()), 0, hp);
    let k = kappa.as_vector();
    let (lhs, rhs): (CVec3<T>, CVec3<T>) = match kind {
        IntertwiningKind::Curl => {
            let curl = |y: &RVec3<T>| fd_curl(field, y, h);
            (radon(&curl, p), rcross(&k, &d))
        }
        IntertwiningKind::Div => {
            let div = |y: &RVec3<T>| Vector3::new(fd_divergence(field, y, h), czero(), czero());
            (radon(&div, p), Vector3::new(rdot(&k, &d), czero(), czero()))
        }
        IntertwiningKind::Grad => {
            let grad = |y: &RVec3<T>| fd_gradient(&|z: &RVec3<T>| field.eval(z).x, y, h);
            (radon(&grad, p), scale(&complexify(&k), d.x))
        }
    };
    IntertwiningResult {
        residual: cnorm(&(lhs - rhs)),
        lhs_norm: cnorm(&lhs),
        rhs_norm: cnorm(&rhs),
        warnings: warnings.into_inner(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{gaussian_test_field, HelicityMode};
    use crate::geometry::{sample_directions, sample_points};

    fn c(re: f64, im: f64) -> Cplx<f64> {
        cplx(re, im)
    }

    fn single_mode(mu: i8, nu: f64) -> ModeField<f64> {
        ModeField::single(1, nu, mu, Direction::ez(), c(std::f64::consts::TAU.powf(1.5), 0.0)).unwrap()
    }

    #[test]
    fn single_mode_atoms() {
        let prof = radon_mode_analytic(&single_mode(1, 1.0));
        assert_eq!(prof.atoms.len(), 2);
        let q = q_lambda(&Direction::ez(), 1);
        let want = scale_re(&q, 4.0 * PI * PI);
        assert_eq!(prof.atoms[0].direction, Direction::ez());
        assert_eq!(prof.atoms[0].frequency, 1.0);
        assert!(cnorm(&(prof.atoms[0].amplitude - want)) < 1e-12);
        assert_eq!(prof.atoms[1].direction, Direction::ez().antipode());
        assert_eq!(prof.atoms[1].frequency, -1.0);
    }

    #[test]
    fn anti_self_dual_atoms_swap_hemispheres() {
        let prof = radon_mode_analytic(&single_mode(-1, -1.0));
        // the tone e^{iλνp} now sits at −κ₀
        assert_eq!(prof.atoms[0].direction, Direction::ez().antipode());
        assert_eq!(prof.atoms[0].frequency, -1.0);
        assert!(prof.eigen_residual() < 1e-15);
    }

    #[test]
    fn matches_independent_plane_wave_transform() {
        let modes: Vec<HelicityMode<f64>> = sample_directions::<f64>(5, 7)
            .into_iter()
            .enumerate()
            .map(|(i, k)| HelicityMode { lambda: -1, kappa: k, amplitude: c(1.0, i as f64) })
            .collect();
        for mu in [1i8, -1] {
            let f = ModeField::new(-1.7 * mu as f64, mu, 1.3, modes.clone()).unwrap();
            let a = radon_mode_analytic(&f);
            let b = radon_of_plane_waves(&f.plane_waves(), f.nu(), f.mu()).unwrap();
            assert!(a.max_difference(&b) < 1e-12);
        }
    }

    #[test]
    fn parity_identities_hold_atomwise() {
        let f = ModeField::new(
            0.9,
            1,
            1.0,
            sample_directions::<f64>(4, 1)
                .into_iter()
                .map(|k| HelicityMode { lambda: 1, kappa: k, amplitude: c(0.2, 1.0) })
                .collect(),
        )
        .unwrap();
        let prof = radon_mode_analytic(&f);
        assert!(prof.parity_image().max_difference(&prof) < 1e-15);
        assert!(prof.p_reflected().max_difference(&prof.kappa_reflected()) < 1e-15);
        let l = lundquist_radon_profile(1.0, 1.0, 16).unwrap();
        assert!(l.parity_image().max_difference(&l) < 1e-15);
    }

    #[test]
    fn gamma_identities_on_atoms() {
        let s = ScalarAnalyticProfile {
            atoms: sample_directions::<f64>(3, 2)
                .into_iter()
                .map(|d| ScalarAtom { direction: d, frequency: 1.3, amplitude: c(0.5, -0.2) })
                .collect(),
        };
        let grad = s.gamma_grad(1.0, 1);
        assert!(grad.gamma_cross().atoms.iter().all(|a| cnorm(&a.amplitude) < 1e-15));
        let prof = radon_mode_analytic(&single_mode(1, 1.0));
        assert!(prof.gamma_cross().gamma_dot().max_amplitude() < 1e-12);
        assert!(prof.gamma_dot().max_amplitude() < 1e-12);
    }

    #[test]
    fn round_trip_inverse() {
        let modes = sample_directions::<f64>(16, 3)
            .into_iter()
            .enumerate()
            .map(|(i, k)| HelicityMode { lambda: 1, kappa: k, amplitude: c(1.0, 0.1 * i as f64) })
            .collect();
        let f = ModeField::new(1.4, 1, 1.0, modes).unwrap();
        let prof = radon_mode_analytic(&f);
        for x in sample_points::<f64>(20, 2.0, 4) {
            let want = f.eval(&x);
            let got = inverse_radon_analytic(&prof, &x);
            assert!(cnorm(&(got - want)) / cnorm(&want) < 1e-9);
            let up = hemisphere_inverse(&prof, &Hemisphere::upper(), &x);
            let down = hemisphere_inverse(&prof, &Hemisphere::upper().complement(), &x);
            assert!(cnorm(&(up - want)) / cnorm(&want) < 1e-9);
            assert!(cnorm(&(down - want)) / cnorm(&want) < 1e-9);
        }
    }

    #[test]
    fn adjoint_of_radon_scales_field() {
        let f = single_mode(1, 1.3);
        let prof = radon_mode_analytic(&f);
        for x in sample_points::<f64>(5, 1.0, 6) {
            let want = scale_re(&f.eval(&x), 8.0 * PI * PI / (1.3 * 1.3));
            assert!(cnorm(&(prof.adjoint(&x) - want)) / cnorm(&want) < 1e-12);
        }
        let quad = SphereQuadrature::<f64>::new(4, 8, true).unwrap();
        let v: f64 = adjoint_radon(|_, _| 2.5, &Vector3::zeros(), &quad);
        assert!((v - 10.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn hemisphere_left_inverse_witness() {
        let h = Hemisphere::upper();
        let d = Direction::new(0.3, -0.2, 0.9).unwrap();
        let lone = AnalyticProfile::new(
            vec![RadonAtom { direction: d, frequency: 1.1, amplitude: Vector3::new(c(1.0, 0.0), c(0.0, 1.0), c(0.5, 0.5)) }],
            1.0,
            1,
        );
        let back = hemisphere_roundtrip(&lone, &h).unwrap();
        // on H the data is reproduced, on H′ the parity image appears
        let on_h = AnalyticProfile::new(back.atoms.iter().filter(|a| h.contains(&a.direction)).copied().collect(), 1.0, 1);
        let on_hp = AnalyticProfile::new(back.atoms.iter().filter(|a| !h.contains(&a.direction)).copied().collect(), 1.0, 1);
        assert!(on_h.max_difference(&lone) < 1e-12);
        assert!(on_hp.max_difference(&lone.parity_image()) < 1e-12);
        // an atom on H′ is annihilated
        assert!(hemisphere_roundtrip(&lone.kappa_reflected(), &h).unwrap().atoms.is_empty());
    }

    #[test]
    fn hemisphere_pairing() {
        let quad = SphereQuadrature::<f64>::new(7, 12, true).unwrap();
        let h = Hemisphere::upper();
        assert_eq!(h.pairing_violations(&quad.nodes), 0);
        assert_eq!(h.complement().pairing_violations(&quad.nodes), 0);
        let mut ring = equatorial_ring::<f64>(8);
        ring.push(Direction::ex());
        assert_eq!(h.pairing_violations(&ring), 0);
        let bad = Hemisphere::<f64>::from_indicator(|_| true);
        assert_eq!(bad.pairing_violations(&ring), ring.len());
    }

    #[test]
    fn linear_transform_of_profiles() {
        let f = single_mode(1, 1.0);
        let prof = radon_mode_analytic(&f);
        assert!(transform_radon_linear(&prof, &Matrix3::identity()).unwrap().max_difference(&prof) < 1e-15);
        let inv = transform_radon_linear(&prof, &(-Matrix3::identity())).unwrap();
        assert!(inv.gamma_cross().max_difference(&inv.scaled(c(-1.0, 0.0))) < 1e-12);
        assert!(inv.max_difference(&radon_mode_analytic(&f.inverted())) < 1e-12);
        let shear = Matrix3::new(1.0, 0.1, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(matches!(transform_radon_linear(&prof, &shear), Err(TrkError::NotOrthogonal(_))));
    }

    #[test]
    fn lundquist_ring_profile() {
        let prof = lundquist_radon_profile(1.3, 0.8, 32).unwrap();
        assert!(prof.eigen_residual() < 1e-15);
        assert!(prof.transversality_residual() < 1e-15);
        let lf = crate::fields::lundquist(1.3, 0.8).unwrap();
        for x in sample_points::<f64>(10, 3.0, 5) {
            let want = lf.eval(&x);
            let got = inverse_radon_analytic(&prof, &x);
            assert!(cnorm(&(got - want)) / cnorm(&want) < 1e-8);
        }
        assert!(lundquist_radon_profile(1.0, 1.0, 7).is_err());
    }

    #[test]
    fn spherical_curl_of_profiles() {
        let amp = c(0.7, -0.4);
        let f = ModeField::single(1, 1.2, 1, Direction::new(0.3, 0.4, 0.5).unwrap(), amp).unwrap();
        let prof = radon_mode_analytic(&f);
        let k0 = f.modes()[0].kappa;
        for p in [0.0, 0.7] {
            let s = spherical_curl_transform(&prof, &k0, p);
            assert!((s.plus - amp).norm() < 1e-12);
            assert!(s.minus.norm() < 1e-12);
            assert!(spherical_curl_transform(&prof, &k0.antipode(), p).plus.norm() < 1e-12);
            assert!(spherical_curl_transform(&prof, &Direction::ex(), p).plus.norm() == 0.0);
        }
        let (f0, n) = (1.5, 16usize);
        let l = lundquist_radon_profile(f0, 1.0, n).unwrap();
        let w = std::f64::consts::TAU / n as f64;
        for d in equatorial_ring::<f64>(n) {
            let s = spherical_curl_transform(&l, &d, 0.3);
            let want = expi(-d.azimuth()) * (-(2.0f64.sqrt()) * std::f64::consts::TAU.sqrt() * f0 * w);
            assert!((s.plus - want).norm() < 1e-12);
        }
    }

    #[test]
    fn grid_spectral_gamma() {
        let nu = 1.3;
        let prof = radon_mode_analytic(&single_mode(1, nu));
        let grid = PGrid::commensurate(nu, 3, 64).unwrap();
        let g = prof.to_grid(grid);
        let lhs = g.gamma_cross();
        assert!(lhs.max_difference(&g.scaled(c(nu, 0.0))) < 1e-10);
        assert!(g.gamma_dot().max_abs() < 1e-10);
        let s = ScalarGridProfile::from_fn(grid, sample_directions(4, 2), None, |p, _| expi(2.0 * PI * 2.0 * p / grid.period()) + c((2.0 * PI * p / grid.period()).cos(), 0.0));
        assert!(s.gamma_grad().gamma_cross().max_abs() < 1e-10);
    }

    #[test]
    fn pgrid_validation() {
        assert_eq!(PGrid::<f64>::new(0.0, 0.1, 12).unwrap_err(), TrkError::GridSize(12));
        assert_eq!(PGrid::<f64>::from_values(&[0.0, 0.1, 0.25, 0.3]).unwrap_err(), TrkError::NonUniformGrid);
        let g = PGrid::<f64>::from_values(&[0.0, 0.5, 1.0, 1.5]).unwrap();
        assert_eq!(g.n, 4);
        let g = PGrid::<f64>::centered(8.0, 16).unwrap();
        for i in 0..16 {
            let m = g.mirror(i);
            let diff = (g.p(i) + g.p(m)).rem_euclid(8.0);
            assert!(diff.min(8.0 - diff) < 1e-14);
        }
    }

    #[test]
    fn trig_interpolation_is_exact_for_tones() {
        let grid = PGrid::<f64>::centered(2.0 * PI, 16).unwrap();
        let s: Vec<Cplx<f64>> = (0..16).map(|i| expi(3.0 * grid.p(i))).collect();
        let coeffs = dft(&s);
        assert!((trig_interpolate(&coeffs, &grid, 0.123) - expi(0.369)).norm() < 1e-13);
    }

    #[test]
    fn gaussian_forward_transform() {
        let f = gaussian_test_field(Vector3::zeros(), 1.0, Vector3::new(c(1.0, 0.0), czero(), czero())).unwrap();
        let quad = PlaneQuadrature::default();
        for p in [0.0, 0.5, -1.3] {
            for k in sample_directions::<f64>(3, 9) {
                let s = radon_forward_numeric(&f, p, &k, &quad);
                assert!(!s.truncated());
                assert!((s.value.x.re - PI * (-p * p).exp()).abs() < 1e-8 * PI);
            }
        }
        let narrow = PlaneQuadrature::new(2.0, 32, crate::quadrature::PlaneRule::GaussLegendre).unwrap();
        assert!(radon_forward_numeric(&f, 0.0, &Direction::ez(), &narrow).truncated());
    }
}
