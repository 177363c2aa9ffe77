//! Fourier slice relation, the Radon image of the Riesz potential, and the
//! Radon-Biot-Savart operator `RBS = Γ× ∘ R I² R⁻¹` on profiles.

use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use rayon::prelude::*;

use crate::error::{Result, TrkError};
use crate::fd::VectorField;
use crate::fields::{PlaneWave, PlaneWaveSum};
use crate::geometry::Direction;
use crate::quadrature::{gauss_legendre_interval, pairwise_sum, PlaneQuadrature};
use crate::radon::{
    dft, fourier_multiply, radon_forward_numeric, radon_of_plane_waves, AnalyticProfile, GridProfile, PGrid, RadonAtom,
};
use crate::scalar::{cmax, cnorm, cplx, cvec_zero, czero, expi, lit, rcross, scale, scale_re, CVec3, Cplx, RVec3, Real};

/// Per-direction DC level (relative to the profile maximum, floored at 1)
/// above which the Riesz multiplier is refused.
pub const DC_TOLERANCE: f64 = 1e-12;

/// `(2π)^{-3/2} ∫ F(x) e^{−ik·x} d³x` over the cube `[−half, half]³` by
/// tensor Gauss-Legendre; a direct oracle for the Fourier slice relation.
pub fn fourier_transform_3d<T: Real>(field: &(impl VectorField<T> + ?Sized), k: &RVec3<T>, half: T, n: usize) -> Result<CVec3<T>> {
    let (nodes, w) = gauss_legendre_interval(n, -half, half)?;
    let planes: Vec<CVec3<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = Vec::with_capacity(n * n);
            for j in 0..n {
                for l in 0..n {
                    let x = Vector3::new(nodes[i], nodes[j], nodes[l]);
                    acc.push(scale(&field.eval(&x), expi(-k.dot(&x)) * (w[i] * w[j] * w[l])));
                }
            }
            pairwise_sum(&acc, cvec_zero())
        })
        .collect();
    Ok(scale_re(&pairwise_sum(&planes, cvec_zero()), lit::<T>(TAU).powf(lit(-1.5))))
}

/// Outcome of [`fourier_slice_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSlice<T: Real> {
    /// `(2π)^{-1/2} ∫ F^R(p, κ) e^{−ikp} dp`.
    pub slice: CVec3<T>,
    /// `2π F̂(kκ)` from the 3-D oracle.
    pub volume: CVec3<T>,
    pub residual: T,
    pub warnings: Vec<String>,
}

/// Compares the 1-D transform in `p` of the numeric Radon transform with
/// `2π` times the 3-D transform at `kκ` (unitary conventions on both sides).
pub fn fourier_slice_check<T: Real>(
    field: &(impl VectorField<T> + ?Sized),
    kappa: &Direction<T>,
    k: T,
    grid: &PGrid<T>,
    plane: &PlaneQuadrature<T>,
    volume_nodes: usize,
) -> Result<FourierSlice<T>> {
    if k.abs() >= grid.nyquist() {
        return Err(TrkError::AboveNyquist(
            k.to_f64().unwrap_or(f64::NAN),
            grid.nyquist().to_f64().unwrap_or(f64::NAN),
        ));
    }
    let samples: Vec<(CVec3<T>, Option<String>)> = (0..grid.n)
        .into_par_iter()
        .map(|i| {
            let p = grid.p(i);
            let s = radon_forward_numeric(field, p, kappa, plane);
            (scale(&s.value, expi(-k * p) * grid.dp), s.warning(p, kappa))
        })
        .collect();
    let warnings: Vec<String> = samples.iter().filter_map(|s| s.1.clone()).collect();
    let terms: Vec<CVec3<T>> = samples.into_iter().map(|s| s.0).collect();
    let slice = scale_re(&pairwise_sum(&terms, cvec_zero()), T::one() / lit::<T>(TAU).sqrt());
    let kv = kappa.as_vector() * k;
    let volume = scale_re(
        &fourier_transform_3d(field, &kv, grid.period() / lit(2.0), volume_nodes)?,
        lit(TAU),
    );
    let residual = cnorm(&(slice - volume)) / cnorm(&volume).max(lit(1e-300));
    Ok(FourierSlice { slice, volume, residual, warnings })
}

fn check_zero_mean<T: Real>(profile: &GridProfile<T>) -> Result<()> {
    let floor = profile.max_abs().max(T::one());
    let n = lit::<T>(profile.grid.n as f64);
    for k in 0..profile.directions.len() {
        let s = profile.series(k);
        let mean = s.iter().fold(cvec_zero(), |a, v| a + v);
        let dc = cmax(&mean) / n;
        if dc > floor * lit(DC_TOLERANCE) {
            return Err(TrkError::DcContent(dc.to_f64().unwrap_or(f64::NAN), k));
        }
    }
    Ok(())
}

/// `R{I²[F]} = F⁻¹{(1/k²) F[F^R]}` per direction, DC bin set to zero.
pub fn radon_riesz<T: Real>(profile: &GridProfile<T>) -> Result<GridProfile<T>> {
    check_zero_mean(profile)?;
    let g = profile.grid;
    Ok(profile.map_series(|s| {
        fourier_multiply(s, &g, |j, k| if j == 0 { czero() } else { cplx(T::one() / (k * k), T::zero()) })
    }))
}

/// `RBS[F^R] = Γ× radon_riesz(F^R)`, i.e. the multiplier `(i/k) κ×` per tone.
pub fn rbs_apply<T: Real>(profile: &GridProfile<T>) -> Result<GridProfile<T>> {
    Ok(radon_riesz(profile)?.gamma_cross())
}

/// Riesz multiplier on atoms: `a ↦ a/f²`.
pub fn radon_riesz_atoms<T: Real>(profile: &AnalyticProfile<T>) -> Result<AnalyticProfile<T>> {
    let mut out = profile.clone();
    for (k, a) in out.atoms.iter_mut().enumerate() {
        if a.frequency == T::zero() {
            return Err(TrkError::DcContent(cmax(&a.amplitude).to_f64().unwrap_or(f64::NAN), k));
        }
        a.amplitude = scale_re(&a.amplitude, T::one() / (a.frequency * a.frequency));
    }
    Ok(out)
}

/// RBS on atoms: `a ↦ (i/f) d × a` (exact).
pub fn rbs_atoms<T: Real>(profile: &AnalyticProfile<T>) -> Result<AnalyticProfile<T>> {
    Ok(radon_riesz_atoms(profile)?.gamma_cross())
}

/// `‖RBS[Γ×F^R] − F^R‖_max` for a transverse grid profile.
pub fn rbs_left_inverse_check<T: Real>(profile: &GridProfile<T>) -> Result<T> {
    let long = profile.gamma_dot().max_abs();
    if long > profile.max_abs().max(T::one()) * lit(1e-9) {
        return Err(TrkError::Precondition(format!(
            "profile is not transverse: max |Γ·F| = {:e}",
            long.to_f64().unwrap_or(f64::NAN)
        )));
    }
    Ok(rbs_apply(&profile.gamma_cross())?.max_difference(profile))
}

/// Atom version of [`rbs_left_inverse_check`].
pub fn rbs_left_inverse_check_atoms<T: Real>(profile: &AnalyticProfile<T>) -> Result<T> {
    if profile.transversality_residual() > lit(1e-12) {
        return Err(TrkError::Precondition("profile is not transverse".into()));
    }
    Ok(rbs_atoms(&profile.gamma_cross())?.max_difference(profile))
}

/// `R R† F^R` on atoms: the adjoint gives `Σ a e^{if d·x}`, whose transform
/// is taken in closed form.
pub fn radon_of_adjoint<T: Real>(profile: &AnalyticProfile<T>) -> Result<AnalyticProfile<T>> {
    let waves = PlaneWaveSum {
        terms: profile
            .atoms
            .iter()
            .map(|a| PlaneWave { k: a.direction.as_vector() * a.frequency, c: a.amplitude })
            .collect(),
    };
    let mut out = radon_of_plane_waves(&waves, profile.nu, profile.mu)?;
    out.g = profile.g;
    Ok(out)
}

/// `‖R R† F^R − 8π² radon_riesz(F^R)‖` on atoms; zero for parity-symmetric profiles.
pub fn rr_dagger_check<T: Real>(profile: &AnalyticProfile<T>) -> Result<T> {
    let lhs = radon_of_adjoint(profile)?;
    let rhs = radon_riesz_atoms(profile)?.scaled(cplx(lit(8.0 * PI * PI), T::zero()));
    Ok(lhs.max_difference(&rhs))
}

/// `F̂^R(k_j, κ)`: DFT coefficients per direction on the discrete frequencies
/// of the `p` grid, normalized by `dp/√(2π)` to approximate the unitary transform.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile<T: Real> {
    pub frequencies: Vec<T>,
    pub directions: Vec<Direction<T>>,
    /// Direction-major coefficients.
    pub coefficients: Vec<CVec3<T>>,
}

impl<T: Real> SpectralProfile<T> {
    pub fn from_grid(profile: &GridProfile<T>) -> Self {
        let n = profile.grid.n;
        let norm = profile.grid.dp / lit::<T>(TAU).sqrt();
        let mut coefficients = Vec::with_capacity(profile.samples.len());
        for k in 0..profile.directions.len() {
            let s = profile.series(k);
            let comps: Vec<Vec<Cplx<T>>> = (0..3).map(|c| dft(&s.iter().map(|v| v[c]).collect::<Vec<_>>())).collect();
            // shift the phase reference from p0 to p = 0
            for j in 0..n {
                let shift = expi(-profile.grid.frequency(j) * profile.grid.p0) * norm;
                coefficients.push(Vector3::new(comps[0][j] * shift, comps[1][j] * shift, comps[2][j] * shift));
            }
        }
        Self {
            frequencies: (0..n).map(|j| profile.grid.frequency(j)).collect(),
            directions: profile.directions.clone(),
            coefficients,
        }
    }

    pub fn get(&self, j: usize, k: usize) -> CVec3<T> {
        self.coefficients[k * self.frequencies.len() + j]
    }

    /// Largest `|F̂(−k) − conj F̂(k)|` over non-Nyquist bins; zero for real profiles.
    pub fn conjugate_symmetry_residual(&self) -> T {
        let n = self.frequencies.len();
        let mut worst = T::zero();
        for k in 0..self.directions.len() {
            for j in 1..n {
                if j == n / 2 {
                    continue;
                }
                let a = self.get(j, k);
                let b = self.get(n - j, k).map(|c| c.conj());
                worst = worst.max(cmax(&(a - b)));
            }
        }
        worst
    }
}

/// Tone profile `Σ c_t e^{iω_t p} a_t` on a grid; used by tests and the verifier.
pub fn tone_profile<T: Real>(grid: PGrid<T>, directions: Vec<Direction<T>>, tones: &[(T, CVec3<T>)]) -> GridProfile<T> {
    GridProfile::from_fn(grid, directions, None, |p, _| {
        tones.iter().fold(cvec_zero(), |acc, (w, a)| acc + scale(a, expi(*w * p)))
    })
}

/// Transverse two-tone profile: amplitudes are projected off each direction.
pub fn transverse_tone_profile<T: Real>(grid: PGrid<T>, directions: Vec<Direction<T>>, tones: &[(T, CVec3<T>)]) -> GridProfile<T> {
    GridProfile::from_fn(grid, directions, None, |p, d| {
        let k = d.as_vector();
        tones.iter().fold(cvec_zero(), |acc, (w, a)| {
            let t = -rcross(&k, &rcross(&k, a));
            acc + scale(&t, expi(*w * p))
        })
    })
}

/// Gauge-type atoms `c e^{ifp} κ`; the RBS kernel.
pub fn gauge_atoms<T: Real>(profile: &AnalyticProfile<T>) -> AnalyticProfile<T> {
    let mut out = profile.clone();
    out.atoms = profile
        .atoms
        .iter()
        .map(|a| RadonAtom {
            amplitude: scale(&crate::scalar::complexify(&a.direction.as_vector()), cplx(cnorm(&a.amplitude), T::zero())),
            ..*a
        })
        .collect();
    out
}
