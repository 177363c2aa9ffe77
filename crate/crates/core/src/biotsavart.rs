//! Riesz potential and Biot-Savart integrals over a ball, Ampere-law fluxes
//! through a disk, and the semi-analytic Biot-Savart integral of the
//! Lundquist field.

use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use rayon::prelude::*;

use crate::error::{Result, TrkError};
use crate::fd::{fd_curl, VectorField};
use crate::geometry::{cylindrical_frame, Direction};
use crate::quadrature::{gauss_legendre_interval, pairwise_sum, SphereQuadrature};
use crate::scalar::{cmax, complexify, cplx, cvec_zero, czero, lit, rcross, rnorm, scale_re, CVec3, Cplx, RVec3, Real};
use crate::special::bessel_j_signed;

/// Ball-shaped integration domain, integrated in spherical coordinates
/// centred on the evaluation point. Rays are split into a short inner shell
/// `[0, exclusion_radius]` and panels of at most `panel_length` out to the
/// boundary; both kernels are regular in these coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeQuadrature<T: Real> {
    pub center: RVec3<T>,
    pub radius: T,
    /// Gauss-Legendre nodes per radial panel.
    pub n_radial: usize,
    pub panel_length: T,
    pub exclusion_radius: T,
    pub sphere: SphereQuadrature<T>,
}

impl<T: Real> VolumeQuadrature<T> {
    pub fn new(radius: T, n_radial: usize, panel_length: T, exclusion_radius: T, n_polar: usize, n_azimuth: usize) -> Result<Self> {
        if !(radius > T::zero()) || !(panel_length > T::zero()) {
            return Err(TrkError::InvalidParameter("domain radius and panel length must be positive".into()));
        }
        if !(exclusion_radius > T::zero()) || exclusion_radius > radius * lit(0.1) {
            return Err(TrkError::InvalidParameter(
                "exclusion radius must be positive and at most a tenth of the domain radius".into(),
            ));
        }
        if n_radial < 2 {
            return Err(TrkError::QuadratureOrder(format!("need at least 2 radial nodes, got {n_radial}")));
        }
        Ok(Self {
            center: Vector3::zeros(),
            radius,
            n_radial,
            panel_length,
            exclusion_radius,
            sphere: SphereQuadrature::new(n_polar, n_azimuth, false)?,
        })
    }

    pub fn centered_at(mut self, c: RVec3<T>) -> Self {
        self.center = c;
        self
    }

    /// Distance from `x` to the boundary along `u`.
    fn ray_length(&self, x: &RVec3<T>, u: &Direction<T>) -> T {
        let d = x - self.center;
        let b = u.dot(&d);
        let c = d.dot(&d) - self.radius * self.radius;
        -b + (b * b - c).max(T::zero()).sqrt()
    }

    /// Radial nodes and weights along one ray of length `len`.
    fn radial_rule(&self, len: T) -> Vec<(T, T)> {
        let mut out = Vec::new();
        let inner = self.exclusion_radius.min(len);
        let mut push = |a: T, b: T| {
            if b > a {
                let (n, w) = gauss_legendre_interval(self.n_radial, a, b).expect("order checked at construction");
                out.extend(n.into_iter().zip(w));
            }
        };
        push(T::zero(), inner);
        let rest = len - inner;
        if rest > T::zero() {
            let panels = (rest / self.panel_length).ceil().to_usize().unwrap_or(1).max(1);
            let step = rest / lit(panels as f64);
            for i in 0..panels {
                let a = inner + step * lit(i as f64);
                push(a, a + step);
            }
        }
        out
    }
}

impl Default for VolumeQuadrature<f64> {
    fn default() -> Self {
        Self::new(6.0, 8, 0.5, 0.05, 16, 32).expect("valid defaults")
    }
}

/// A volume integral with its boundary diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeResult<T: Real> {
    pub value: CVec3<T>,
    /// Rough size of what the region beyond the ball would contribute.
    pub boundary_estimate: T,
    pub warning: Option<String>,
}

/// Boundary estimate (relative to the result) that raises a warning.
pub const BOUNDARY_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Copy)]
enum Kernel {
    Riesz,
    BiotSavart,
}

fn volume_integral<T: Real>(
    field: &(impl VectorField<T> + ?Sized),
    x: &RVec3<T>,
    quad: &VolumeQuadrature<T>,
    kernel: Kernel,
) -> Result<VolumeResult<T>> {
    if rnorm(&(x - quad.center)) >= quad.radius {
        return Err(TrkError::OutsideDomain);
    }
    let rays: Vec<(CVec3<T>, T)> = quad
        .sphere
        .nodes
        .par_iter()
        .zip(quad.sphere.weights.par_iter())
        .map(|(u, &w)| {
            let len = quad.ray_length(x, u);
            let uv = u.as_vector();
            let terms: Vec<CVec3<T>> = quad
                .radial_rule(len)
                .into_iter()
                .map(|(rho, wr)| {
                    let f = field.eval(&(x + uv * rho));
                    match kernel {
                        // (1/4π)∫ F/|x−y| d³y = (1/4π)∫ dΩ ∫ ρ F dρ
                        Kernel::Riesz => scale_re(&f, rho * wr),
                        // F × (x−y)/|x−y|³ · ρ² = u × F
                        Kernel::BiotSavart => scale_re(&rcross(&uv, &f), wr),
                    }
                })
                .collect();
            let edge = cmax(&field.eval(&(x + uv * len)));
            let reach = match kernel {
                Kernel::Riesz => len * len,
                Kernel::BiotSavart => len,
            };
            (scale_re(&pairwise_sum(&terms, cvec_zero()), w), edge * reach * w)
        })
        .collect();
    let inv4pi = lit::<T>(1.0 / (4.0 * PI));
    let value = scale_re(&pairwise_sum(&rays.iter().map(|r| r.0).collect::<Vec<_>>(), cvec_zero()), inv4pi);
    let boundary = pairwise_sum(&rays.iter().map(|r| r.1).collect::<Vec<_>>(), T::zero()) * inv4pi;
    let scale = cmax(&value).max(lit(1e-300));
    let warning = (boundary > scale * lit(BOUNDARY_THRESHOLD)).then(|| {
        format!(
            "domain truncation: boundary estimate {:e} vs result {:e}",
            boundary.to_f64().unwrap_or(f64::NAN),
            scale.to_f64().unwrap_or(f64::NAN)
        )
    });
    Ok(VolumeResult { value, boundary_estimate: boundary, warning })
}

/// `I²[F](x) = (1/4π) ∫_D F(y)/|x − y| d³y`.
pub fn riesz_potential<T: Real>(
    field: &(impl VectorField<T> + ?Sized),
    x: &RVec3<T>,
    quad: &VolumeQuadrature<T>,
) -> Result<VolumeResult<T>> {
    volume_integral(field, x, quad, Kernel::Riesz)
}

/// `BS[F](x) = (1/4π) ∫_D F(y) × (x − y)/|x − y|³ d³y`.
pub fn bs_integral<T: Real>(
    field: &(impl VectorField<T> + ?Sized),
    x: &RVec3<T>,
    quad: &VolumeQuadrature<T>,
) -> Result<VolumeResult<T>> {
    volume_integral(field, x, quad, Kernel::BiotSavart)
}

/// Angular integrals `∫ dφ / a²` and `∫ cos φ dφ / a²`, with
/// `a² = R² + r² − 2Rr cos φ`, for a source radius `r < R`.
pub fn poisson_kernels_inside<T: Real>(big_r: T, r: T) -> (T, T) {
    let k0 = lit::<T>(TAU) / (big_r * big_r - r * r);
    (k0, k0 * r / big_r)
}

/// As [`poisson_kernels_inside`] with `R` and `r` interchanged, for `r > R`.
pub fn poisson_kernels_outside<T: Real>(big_r: T, r: T) -> (T, T) {
    let k0 = lit::<T>(TAU) / (r * r - big_r * big_r);
    (k0, k0 * big_r / r)
}

/// Largest mismatch of the region-split kernels at `r = R(1 ± eps)` after
/// removing the common `1/|R² − r²|` factor; `O(eps)` when the interchange
/// rule is consistent.
pub fn poisson_matching_defect<T: Real>(big_r: T, eps: T) -> T {
    let lo = big_r * (T::one() - eps);
    let hi = big_r * (T::one() + eps);
    let (a0, ac) = poisson_kernels_inside(big_r, lo);
    let (b0, bc) = poisson_kernels_outside(big_r, hi);
    let na = big_r * big_r - lo * lo;
    let nb = hi * hi - big_r * big_r;
    ((a0 * na - b0 * nb).abs()).max((ac * na - bc * nb).abs()) / lit::<T>(TAU)
}

/// The semi-analytic Biot-Savart integral of the Lundquist field at
/// cylindrical radius `R`, azimuth `θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LundquistBs<T: Real> {
    pub value: CVec3<T>,
    /// Term odd in `z`; vanishes after the `z` integration.
    pub i1: T,
    /// `I₂ + I₃`, the `e_θ` coefficient.
    pub theta_part: T,
    /// `I₄ + I₅`, the `e_z` coefficient.
    pub z_part: T,
    /// Outer radii used for the two tail evaluations.
    pub tail_radii: (T, T),
    pub tail_discrepancy: T,
    pub tail_flagged: bool,
}

/// Threshold on the disagreement between the two tail cut-offs.
pub const TAIL_THRESHOLD: f64 = 1e-7;

fn panel_sum<T: Real>(a: T, b: T, width: T, f: &impl Fn(T) -> T) -> T {
    if !(b > a) {
        return T::zero();
    }
    let panels = ((b - a) / width).ceil().to_usize().unwrap_or(1).max(1);
    let step = (b - a) / lit(panels as f64);
    let sums: Vec<T> = (0..panels)
        .map(|i| {
            let lo = a + step * lit(i as f64);
            let (n, w) = gauss_legendre_interval::<T>(24, lo, lo + step).expect("fixed order");
            let t: Vec<T> = n.iter().zip(&w).map(|(&x, &wx)| f(x) * wx).collect();
            pairwise_sum(&t, T::zero())
        })
        .collect();
    pairwise_sum(&sums, T::zero())
}

/// `BS[F_L]` at `x = R e_r(θ)` with the `z` and `φ` integrations done in
/// closed form. The radial integrals run over `[0, R]` and `[R, R_T]`; the
/// remaining tail is `∫_{R_T}^∞ F₀ J₁(νr) dr = F₀ J₀(νR_T)/ν`. Two cut-offs
/// are evaluated and compared as a truncation diagnostic.
pub fn bs_lundquist_semianalytic<T: Real>(f0: T, nu: T, big_r: T, theta: T) -> Result<LundquistBs<T>> {
    if !(big_r > T::zero()) {
        return Err(TrkError::InvalidParameter("R must be positive".into()));
    }
    if nu == T::zero() {
        return Err(TrkError::ZeroEigenvalue);
    }
    let anu = nu.abs();
    let width = (T::one() / anu).min(big_r);
    let fz = |r: T| f0 * bessel_j_signed(0, nu * r);
    let fphi = |r: T| f0 * bessel_j_signed(1, nu * r);
    let inv2pi = lit::<T>(1.0 / TAU);
    // after ∫dz: e_θ gets F_z (R − r cos φ)·2/a², e_z gets F_φ (r − R cos φ)·2/a²
    let theta_in = |r: T| {
        let (k0, kc) = poisson_kernels_inside(big_r, r);
        inv2pi * fz(r) * (big_r * r * k0 - r * r * kc)
    };
    let theta_out = |r: T| {
        let (k0, kc) = poisson_kernels_outside(big_r, r);
        inv2pi * fz(r) * (big_r * r * k0 - r * r * kc)
    };
    let z_in = |r: T| {
        let (k0, kc) = poisson_kernels_inside(big_r, r);
        inv2pi * fphi(r) * (r * r * k0 - big_r * r * kc)
    };
    let z_out = |r: T| {
        let (k0, kc) = poisson_kernels_outside(big_r, r);
        inv2pi * fphi(r) * (r * r * k0 - big_r * r * kc)
    };
    let eval = |rt: T| {
        let th = panel_sum(T::zero(), big_r, width, &theta_in) + panel_sum(big_r, rt, width, &theta_out);
        let z = panel_sum(T::zero(), big_r, width, &z_in)
            + panel_sum(big_r, rt, width, &z_out)
            + f0 * bessel_j_signed(0, nu * rt) / nu;
        (th, z)
    };
    let span = lit::<T>(40.0 * PI) / anu;
    let (r1, r2) = (big_r + span, big_r + span * lit(1.0375));
    let (th1, z1) = eval(r1);
    let (th2, z2) = eval(r2);
    let discrepancy = (th1 - th2).abs().max((z1 - z2).abs());
    let (_, e_theta) = cylindrical_frame(theta);
    let e_z = Vector3::new(T::zero(), T::zero(), T::one());
    Ok(LundquistBs {
        value: complexify(&(e_theta * th1 + e_z * z1)),
        i1: T::zero(),
        theta_part: th1,
        z_part: z1,
        tail_radii: (r1, r2),
        tail_discrepancy: discrepancy,
        tail_flagged: discrepancy > lit(TAIL_THRESHOLD),
    })
}

/// Fluxes through the disk of radius `R` in the `xy`-plane centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmpereFluxes<T: Real> {
    /// `Q = ∫ F · dS`.
    pub charge: Cplx<T>,
    /// `Φ = ∫ (∇×F) · dS` with the curl from the fd oracle.
    pub surface_flux: Cplx<T>,
    /// `Φ = ∮ F · dl`.
    pub line_flux: Cplx<T>,
    pub nu: T,
}

impl<T: Real> AmpereFluxes<T> {
    /// Largest pairwise relative disagreement among `νQ`, `Φ_surface`, `Φ_line`.
    pub fn residual(&self) -> T {
        let q = self.charge * self.nu;
        let vals = [q, self.surface_flux, self.line_flux];
        let scale = vals.iter().map(|v| v.norm()).fold(T::zero(), T::max).max(lit(1e-300));
        let mut worst = T::zero();
        for i in 0..3 {
            for j in i + 1..3 {
                worst = worst.max((vals[i] - vals[j]).norm());
            }
        }
        worst / scale
    }

    pub fn max_abs(&self) -> T {
        self.charge.norm().max(self.surface_flux.norm()).max(self.line_flux.norm())
    }
}

/// Surface fluxes by Gauss-Legendre panels in `r` × trapezoid in `θ`; the
/// circulation by the trapezoid rule on the circle.
pub fn ampere_fluxes<T: Real>(field: &(impl VectorField<T> + ?Sized), big_r: T, nu: T) -> Result<AmpereFluxes<T>> {
    if !(big_r > T::zero()) {
        return Err(TrkError::InvalidParameter("R must be positive".into()));
    }
    let scale = nu.abs().max(T::one());
    let panels = (big_r * scale).ceil().to_usize().unwrap_or(1).max(1);
    let n_theta = 64usize;
    let h = lit::<T>(crate::fd::DEFAULT_STEP) / scale;
    let step = big_r / lit(panels as f64);
    let mut radial = Vec::new();
    for i in 0..panels {
        let a = step * lit(i as f64);
        let (n, w) = gauss_legendre_interval::<T>(16, a, a + step)?;
        radial.extend(n.into_iter().zip(w));
    }
    let dtheta = lit::<T>(TAU / n_theta as f64);
    let ez = Vector3::new(czero(), czero(), cplx(T::one(), T::zero()));
    let rows: Vec<(Cplx<T>, Cplx<T>)> = radial
        .par_iter()
        .map(|&(r, wr)| {
            let mut q = Vec::with_capacity(n_theta);
            let mut c = Vec::with_capacity(n_theta);
            for j in 0..n_theta {
                let th = dtheta * lit(j as f64);
                let x = Vector3::new(r * th.cos(), r * th.sin(), T::zero());
                q.push(field.eval(&x).dot(&ez));
                c.push(fd_curl(field, &x, h).z);
            }
            let wt = wr * r * dtheta;
            (pairwise_sum(&q, czero()) * wt, pairwise_sum(&c, czero()) * wt)
        })
        .collect();
    let charge = pairwise_sum(&rows.iter().map(|r| r.0).collect::<Vec<_>>(), czero());
    let surface_flux = pairwise_sum(&rows.iter().map(|r| r.1).collect::<Vec<_>>(), czero());
    let n_line = 256usize;
    let dl = lit::<T>(TAU / n_line as f64);
    let line: Vec<Cplx<T>> = (0..n_line)
        .map(|j| {
            let th = dl * lit(j as f64);
            let (_, e_theta) = cylindrical_frame(th);
            let x = Vector3::new(big_r * th.cos(), big_r * th.sin(), T::zero());
            let f = field.eval(&x);
            f.x * e_theta.x + f.y * e_theta.y
        })
        .collect();
    let line_flux = pairwise_sum(&line, czero()) * (dl * big_r);
    Ok(AmpereFluxes { charge, surface_flux, line_flux, nu })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::{fd_divergence, fd_laplacian};
    use crate::fields::{curl_gaussian_field, double_curl_gaussian_field, gaussian_test_field, lundquist, lundquist_value};
    use crate::quadrature::gauss_legendre_interval;
    use crate::scalar::cnorm;
    use crate::special::bessel_j;

    fn scalar_gaussian() -> crate::fields::SampledField<f64> {
        gaussian_test_field(Vector3::zeros(), 1.0, Vector3::new(cplx(1.0, 0.0), czero(), czero())).unwrap()
    }

    /// Shell-theorem reduction of `I²[e^{−|y|²}]` at radius `r`.
    fn radial_oracle(r: f64) -> f64 {
        let gl = |a: f64, b: f64, f: &dyn Fn(f64) -> f64| {
            let (n, w) = gauss_legendre_interval::<f64>(64, a, b).unwrap();
            n.iter().zip(&w).map(|(x, w)| f(*x) * w).sum::<f64>()
        };
        let inner = if r > 0.0 { gl(0.0, r, &|s| s * s * (-s * s).exp()) / r } else { 0.0 };
        inner + gl(r, 10.0, &|s| s * (-s * s).exp())
    }

    #[test]
    fn riesz_of_gaussian_matches_radial_oracle() {
        let q = VolumeQuadrature::default();
        let f = scalar_gaussian();
        for x in [Vector3::zeros(), Vector3::new(0.3, -0.2, 0.5)] {
            let got = riesz_potential(&f, &x, &q).unwrap();
            let want = radial_oracle(rnorm(&x));
            assert!(got.warning.is_none());
            assert!((got.value.x.re - want).abs() / want < 1e-4, "{} vs {want}", got.value.x.re);
        }
        assert!((radial_oracle(0.0) - 0.5).abs() < 1e-12);
        assert!((radial_oracle(rnorm(&Vector3::new(0.3, -0.2, 0.5))) - 0.44327884785536636).abs() < 1e-12);
    }

    #[test]
    fn zero_field_and_linearity() {
        let q = VolumeQuadrature::default();
        let zero = |_: &RVec3<f64>| cvec_zero::<f64>();
        assert_eq!(riesz_potential(&zero, &Vector3::zeros(), &q).unwrap().value, cvec_zero());
        let f = curl_gaussian_field(Vector3::zeros(), 1.0, Vector3::new(0.0, 0.0, 1.0)).unwrap();
        let neg = |x: &RVec3<f64>| -f.eval(x);
        let x = Vector3::new(0.2, 0.1, -0.3);
        let a = bs_integral(&f, &x, &q).unwrap().value;
        let b = bs_integral(&neg, &x, &q).unwrap().value;
        assert_eq!(a, -b);
    }

    #[test]
    fn negative_laplacian_inverts_riesz() {
        let q = VolumeQuadrature::default();
        let f = scalar_gaussian();
        let x = Vector3::new(0.3, -0.2, 0.4);
        let pot = |y: &RVec3<f64>| riesz_potential(&f, y, &q).unwrap().value.x;
        let lap = fd_laplacian(&pot, &x, 0.05);
        let want = f.eval(&x).x;
        assert!((-lap - want).norm() / want.norm() < 1e-3);
    }

    #[test]
    fn curl_inverts_bs_for_divergence_free_fields() {
        let q = VolumeQuadrature::default();
        let f = curl_gaussian_field(Vector3::zeros(), 1.0, Vector3::new(0.2, -0.5, 1.0)).unwrap();
        let bs = |y: &RVec3<f64>| bs_integral(&f, y, &q).unwrap().value;
        let x = Vector3::new(0.3, 0.2, -0.1);
        let curl = fd_curl(&bs, &x, 0.02);
        let want = f.eval(&x);
        assert!(cnorm(&(curl - want)) / cnorm(&want) < 1e-3);
        assert!(fd_divergence(&bs, &x, 0.02).norm() < 1e-5);
    }

    #[test]
    fn bs_inverts_double_curl() {
        // BS[∇×∇×(Gc)] = ∇×(Gc)
        let q = VolumeQuadrature::default();
        let c = Vector3::new(1.0, 0.0, 0.5);
        let src = double_curl_gaussian_field(Vector3::zeros(), 1.0, c).unwrap();
        let want_f = curl_gaussian_field(Vector3::zeros(), 1.0, c).unwrap();
        let x = Vector3::new(-0.2, 0.4, 0.1);
        let got = bs_integral(&src, &x, &q).unwrap().value;
        let want = want_f.eval(&x);
        assert!(cnorm(&(got - want)) / cnorm(&want) < 1e-4);
    }

    #[test]
    fn non_tangent_field_on_ball_shows_boundary_defect() {
        // uniform e_z on a ball: ∇×BS = (2/3) e_z inside
        let q = VolumeQuadrature::new(1.0, 8, 0.25, 0.05, 16, 32).unwrap();
        let f = |_: &RVec3<f64>| Vector3::new(czero(), czero(), cplx(1.0, 0.0));
        let bs = |y: &RVec3<f64>| bs_integral(&f, y, &q).unwrap().value;
        let curl = fd_curl(&bs, &Vector3::new(0.1, 0.0, 0.1), 0.02);
        assert!((curl.z.re - 2.0 / 3.0).abs() < 1e-4);
        assert!((curl.z.re - 1.0).abs() > 1e-3);
    }

    #[test]
    fn outside_points_rejected() {
        let q = VolumeQuadrature::default();
        let f = scalar_gaussian();
        assert_eq!(riesz_potential(&f, &Vector3::new(7.0, 0.0, 0.0), &q).unwrap_err(), TrkError::OutsideDomain);
        assert!(VolumeQuadrature::<f64>::new(1.0, 8, 0.5, 0.5, 8, 8).is_err());
    }

    #[test]
    fn truncation_warning() {
        let q = VolumeQuadrature::new(2.0, 8, 0.5, 0.05, 8, 16).unwrap();
        let f = gaussian_test_field(Vector3::zeros(), 2.0, Vector3::new(cplx(1.0, 0.0), czero(), czero())).unwrap();
        assert!(riesz_potential(&f, &Vector3::zeros(), &q).unwrap().warning.is_some());
    }

    #[test]
    fn poisson_kernels_match_direct_angular_integral() {
        let big_r = 1.7;
        for r in [0.4, big_r * 0.99, big_r * 1.01, 3.0] {
            let n = 8192;
            let (mut s0, mut sc) = (0.0, 0.0);
            for j in 0..n {
                let phi = TAU * j as f64 / n as f64;
                let a2 = big_r * big_r + r * r - 2.0 * big_r * r * phi.cos();
                s0 += 1.0 / a2;
                sc += phi.cos() / a2;
            }
            s0 *= TAU / n as f64;
            sc *= TAU / n as f64;
            let (k0, kc) = if r < big_r { poisson_kernels_inside(big_r, r) } else { poisson_kernels_outside(big_r, r) };
            assert!((k0 - s0).abs() / k0 < 1e-10);
            assert!((kc - sc).abs() / kc < 1e-10);
        }
        assert!(poisson_matching_defect(big_r, 1e-6) < 3e-6);
    }

    #[test]
    fn lundquist_bs_eigenrelation() {
        let (f0, nu) = (1.3, 0.9);
        for x_nu in [0.5, 2.0, 5.0] {
            let big_r = x_nu / nu;
            let mut mags = Vec::new();
            for theta in [0.0, PI / 3.0, PI / 2.0] {
                let out = bs_lundquist_semianalytic(f0, nu, big_r, theta).unwrap();
                assert_eq!(out.i1, 0.0);
                assert!(!out.tail_flagged);
                let x = Vector3::new(big_r * theta.cos(), big_r * theta.sin(), 0.0);
                let want = scale_re(&lundquist_value(f0, nu, &x), 1.0 / nu);
                assert!(cnorm(&(out.value - want)) / cnorm(&want) < 1e-6);
                mags.push(cnorm(&out.value));
            }
            assert!((mags[0] - mags[1]).abs() < 1e-10 && (mags[0] - mags[2]).abs() < 1e-10);
        }
        let neg = bs_lundquist_semianalytic(1.0, -1.2, 1.0, 0.3).unwrap();
        let x = Vector3::new(0.3f64.cos(), 0.3f64.sin(), 0.0);
        let want = scale_re(&lundquist_value(1.0, -1.2, &x), -1.0 / 1.2);
        assert!(cnorm(&(neg.value - want)) / cnorm(&want) < 1e-6);
    }

    #[test]
    fn ampere_law_for_lundquist() {
        let (f0, nu) = (1.0, 1.0);
        let f = lundquist(f0, nu).unwrap();
        for big_r in [0.7, 2.0, 5.5] {
            let a = ampere_fluxes(&f, big_r, nu).unwrap();
            let want = TAU * f0 * big_r * bessel_j(1, nu * big_r).unwrap();
            assert!(a.residual() < 1e-6);
            assert!((a.line_flux.re - want).abs() / want.abs() < 1e-6);
        }
        let zero = ampere_fluxes(&f, 3.8317059702075125, nu).unwrap();
        assert!(zero.max_abs() < 1e-9);
        let small = ampere_fluxes(&f, 0.01, nu).unwrap();
        assert!((small.surface_flux.re - PI * 0.01 * 0.01).abs() / (PI * 1e-4) < 1e-3);
    }
}
