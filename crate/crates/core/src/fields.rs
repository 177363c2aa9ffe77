//! Analytic Trkalian fields and probe fields in physical space.

use std::fmt;
use std::sync::Arc;

use nalgebra::Vector3;
use serde::Serialize;

use crate::error::{Result, TrkError};
use crate::fd::{fd_curl, fd_gradient, fd_hessian, fd_laplacian, ScalarField, VectorField};
use crate::geometry::{cylindrical_frame, sample_points, Direction};
use crate::moses::q_lambda;
use crate::scalar::{
    cnorm, complexify, cplx, cvec_zero, czero, expi, hdot, lit, rcross, re_part, scale, scale_re,
    CVec3, Cplx, RVec3, Real,
};
use crate::special::bessel_j_signed;

/// Descriptive data attached to a sampled field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldMeta {
    pub name: String,
    pub params: serde_json::Value,
    /// Duality sign: +1 self-dual, −1 anti-self-dual.
    pub mu: Option<i8>,
    pub helicity: Option<i8>,
    /// Curl eigenvalue `μν`, when the field is Trkalian.
    pub eigenvalue: Option<f64>,
}

type Evaluator<T> = Arc<dyn Fn(&RVec3<T>) -> CVec3<T> + Send + Sync>;

/// A vector field evaluated on demand.
#[derive(Clone)]
pub struct SampledField<T: Real> {
    evaluator: Evaluator<T>,
    pub meta: FieldMeta,
}

impl<T: Real> fmt::Debug for SampledField<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledField").field("meta", &self.meta).finish()
    }
}

impl<T: Real> SampledField<T> {
    pub fn new(
        name: impl Into<String>,
        params: serde_json::Value,
        f: impl Fn(&RVec3<T>) -> CVec3<T> + Send + Sync + 'static,
    ) -> Self {
        Self {
            evaluator: Arc::new(f),
            meta: FieldMeta {
                name: name.into(),
                params,
                mu: None,
                helicity: None,
                eigenvalue: None,
            },
        }
    }

    pub fn with_eigenvalue(mut self, eigenvalue: f64, mu: i8) -> Self {
        self.meta.eigenvalue = Some(eigenvalue);
        self.meta.mu = Some(mu);
        self
    }

    pub fn with_helicity(mut self, lambda: i8) -> Self {
        self.meta.helicity = Some(lambda);
        self
    }

    pub fn eval(&self, x: &RVec3<T>) -> CVec3<T> {
        (self.evaluator)(x)
    }

    /// Largest relative deviation of `∇×F` from `eigenvalue · F` over
    /// `n` deterministic points in `[-half, half]³` (fd oracle, step `h`).
    pub fn curl_residual(&self, eigenvalue: T, n: usize, half: f64, h: T, seed: u64) -> T {
        sample_points::<T>(n, half, seed)
            .iter()
            .map(|x| curl_eigen_residual(self, x, eigenvalue, h))
            .fold(T::zero(), T::max)
    }

    /// Checks the recorded eigenvalue at 10 points to `1e-6`.
    pub fn certify(&self) -> Result<T> {
        let Some(ev) = self.meta.eigenvalue else {
            return Err(TrkError::Precondition(format!("field `{}` carries no eigenvalue", self.meta.name)));
        };
        let res = self.curl_residual(lit(ev), 10, 1.0, lit(crate::fd::DEFAULT_STEP), 0x5eed);
        if res > lit(1e-6) {
            return Err(TrkError::Precondition(format!(
                "field `{}` fails curl certification: residual {:e}",
                self.meta.name,
                res.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(res)
    }
}

impl<T: Real> VectorField<T> for SampledField<T> {
    fn eval(&self, x: &RVec3<T>) -> CVec3<T> {
        (self.evaluator)(x)
    }
}

/// `|∇×F − e F| / max(|e F|, tiny)` at `x` by the fd oracle.
pub fn curl_eigen_residual<T: Real>(
    f: &(impl VectorField<T> + ?Sized),
    x: &RVec3<T>,
    eigenvalue: T,
    h: T,
) -> T {
    let curl = fd_curl(f, x, h);
    let rhs = scale_re(&f.eval(x), eigenvalue);
    cnorm(&(curl - rhs)) / cnorm(&rhs).max(lit(1e-300))
}

/// One atom `amplitude · δ(κ − κ₀)` of a spherical curl transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelicityMode<T: Real> {
    pub lambda: i8,
    pub kappa: Direction<T>,
    pub amplitude: Cplx<T>,
}

/// Finite superposition `(2π)^{-3/2}(1/g) Σ s e^{iμλν κ₀·x} Q_λ(κ₀)` sharing `(ν, μ, g)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeField<T: Real> {
    nu: T,
    mu: i8,
    g: T,
    modes: Vec<HelicityMode<T>>,
}

impl<T: Real> ModeField<T> {
    /// Validates `ν ≠ 0`, `g > 0`, `μ = ±1`, `λ = ±1` and the support
    /// condition `μλν > 0` for every mode.
    pub fn new(nu: T, mu: i8, g: T, modes: Vec<HelicityMode<T>>) -> Result<Self> {
        if nu == T::zero() || !nu.is_finite() {
            return Err(TrkError::ZeroEigenvalue);
        }
        if !(g > T::zero()) {
            return Err(TrkError::InvalidParameter("coupling g must be positive".into()));
        }
        if mu != 1 && mu != -1 {
            return Err(TrkError::InvalidParameter(format!("duality sign must be ±1, got {mu}")));
        }
        for (i, m) in modes.iter().enumerate() {
            if m.lambda != 1 && m.lambda != -1 {
                return Err(TrkError::InvalidParameter(format!(
                    "mode {i}: transverse helicity must be ±1, got {}",
                    m.lambda
                )));
            }
            if lit::<T>((mu * m.lambda) as f64) * nu <= T::zero() {
                return Err(TrkError::SupportCondition(format!(
                    "mode {i}: μλν = {}·{}·{} is not positive",
                    mu,
                    m.lambda,
                    nu.to_f64().unwrap_or(f64::NAN)
                )));
            }
        }
        Ok(Self { nu, mu, g, modes })
    }

    /// Single self-dual or anti-self-dual mode with coupling 1.
    pub fn single(lambda: i8, nu: T, mu: i8, kappa: Direction<T>, amplitude: Cplx<T>) -> Result<Self> {
        Self::new(nu, mu, T::one(), vec![HelicityMode { lambda, kappa, amplitude }])
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    pub fn mu(&self) -> i8 {
        self.mu
    }

    pub fn g(&self) -> T {
        self.g
    }

    pub fn modes(&self) -> &[HelicityMode<T>] {
        &self.modes
    }

    /// Curl eigenvalue `μν`.
    pub fn eigenvalue(&self) -> T {
        lit::<T>(self.mu as f64) * self.nu
    }

    /// Wave vector `μλν κ₀` of a mode.
    pub fn wave_vector(&self, m: &HelicityMode<T>) -> RVec3<T> {
        m.kappa.as_vector() * (lit::<T>((self.mu * m.lambda) as f64) * self.nu)
    }

    /// The field as an explicit sum of plane waves.
    pub fn plane_waves(&self) -> PlaneWaveSum<T> {
        let norm = lit::<T>(std::f64::consts::TAU).powf(lit(-1.5)) / self.g;
        PlaneWaveSum {
            terms: self
                .modes
                .iter()
                .map(|m| PlaneWave {
                    k: self.wave_vector(m),
                    c: scale(&q_lambda(&m.kappa, m.lambda), m.amplitude * norm),
                })
                .collect(),
        }
    }

    pub fn eval(&self, x: &RVec3<T>) -> CVec3<T> {
        let norm = lit::<T>(std::f64::consts::TAU).powf(lit(-1.5)) / self.g;
        let mut acc = cvec_zero();
        for m in &self.modes {
            let phase = expi(self.wave_vector(m).dot(x)) * m.amplitude * norm;
            acc += scale(&q_lambda(&m.kappa, m.lambda), phase);
        }
        acc
    }

    /// Real projection of the field value.
    pub fn real_part(&self, x: &RVec3<T>) -> RVec3<T> {
        re_part(&self.eval(x))
    }

    /// The coordinate-inverted field `x ↦ F(−x)`, recoded as modes of the
    /// opposite duality sign: `λ → −λ`, `κ₀ → −κ₀`, `ν` unchanged, with the
    /// amplitude multiplied by the unimodular overlap `⟨Q_{−λ}(−κ₀), Q_λ(κ₀)⟩`.
    pub fn inverted(&self) -> Self {
        let modes = self
            .modes
            .iter()
            .map(|m| {
                let k = m.kappa.antipode();
                let overlap = hdot(&q_lambda(&k, -m.lambda), &q_lambda(&m.kappa, m.lambda));
                HelicityMode {
                    lambda: -m.lambda,
                    kappa: k,
                    amplitude: m.amplitude * overlap,
                }
            })
            .collect();
        Self {
            nu: self.nu,
            mu: -self.mu,
            g: self.g,
            modes,
        }
    }

    pub fn to_sampled(&self) -> SampledField<T> {
        let me = self.clone();
        let params = serde_json::json!({
            "nu": self.nu.to_f64(),
            "mu": self.mu,
            "g": self.g.to_f64(),
            "modes": self.modes.len(),
        });
        let lambda = self.modes.first().map(|m| m.lambda);
        let mut f = SampledField::new("mode", params, move |x| me.eval(x))
            .with_eigenvalue(self.eigenvalue().to_f64().unwrap_or(f64::NAN), self.mu);
        if let Some(l) = lambda {
            if self.modes.iter().all(|m| m.lambda == l) {
                f = f.with_helicity(l);
            }
        }
        f
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWave<T: Real> {
    pub k: RVec3<T>,
    pub c: CVec3<T>,
}

/// `Σ c_j e^{i k_j·x}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PlaneWaveSum<T: Real> {
    pub terms: Vec<PlaneWave<T>>,
}

impl<T: Real> PlaneWaveSum<T> {
    pub fn eval(&self, x: &RVec3<T>) -> CVec3<T> {
        let mut acc = cvec_zero();
        for t in &self.terms {
            acc += scale(&t.c, expi(t.k.dot(x)));
        }
        acc
    }

    /// `∇×` applied term by term: `c ↦ i k × c`.
    pub fn curl(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| PlaneWave {
                    k: t.k,
                    c: scale(&rcross(&t.k, &t.c), cplx(T::zero(), T::one())),
                })
                .collect(),
        }
    }
}

/// `F₀[J₁(νr) e_θ + J₀(νr) e_z]`, helicity +1, eigenvalue `ν`.
pub fn lundquist<T: Real>(f0: T, nu: T) -> Result<SampledField<T>> {
    if nu == T::zero() {
        return Err(TrkError::ZeroEigenvalue);
    }
    let params = serde_json::json!({ "F0": f0.to_f64(), "nu": nu.to_f64() });
    Ok(SampledField::new("lundquist", params, move |x| lundquist_value(f0, nu, x))
        .with_eigenvalue(nu.to_f64().unwrap_or(f64::NAN), 1)
        .with_helicity(1))
}

pub(crate) fn lundquist_value<T: Real>(f0: T, nu: T, x: &RVec3<T>) -> CVec3<T> {
    let r = x.x.hypot(x.y);
    let (_, e_theta) = cylindrical_frame(x.y.atan2(x.x));
    let j1 = bessel_j_signed(1, nu * r);
    let j0 = bessel_j_signed(0, nu * r);
    complexify(&((e_theta * j1 + Vector3::new(T::zero(), T::zero(), j0)) * f0))
}

/// `(a sin νz + c cos νy, b sin νx + a cos νz, c sin νy + b cos νx)`, eigenvalue `ν`.
pub fn abc_field<T: Real>(a: T, b: T, c: T, nu: T) -> Result<SampledField<T>> {
    if nu == T::zero() {
        return Err(TrkError::ZeroEigenvalue);
    }
    let params = serde_json::json!({ "a": a.to_f64(), "b": b.to_f64(), "c": c.to_f64(), "nu": nu.to_f64() });
    Ok(SampledField::new("abc", params, move |x| complexify(&abc_value(a, b, c, nu, x)))
        .with_eigenvalue(nu.to_f64().unwrap_or(f64::NAN), 1))
}

pub fn abc_value<T: Real>(a: T, b: T, c: T, nu: T, x: &RVec3<T>) -> RVec3<T> {
    Vector3::new(
        a * (nu * x.z).sin() + c * (nu * x.y).cos(),
        b * (nu * x.x).sin() + a * (nu * x.z).cos(),
        c * (nu * x.y).sin() + b * (nu * x.x).cos(),
    )
}

/// Gradient and Hessian of a scalar potential at a point.
pub type PotentialDerivatives<T> = (CVec3<T>, [[Cplx<T>; 3]; 3]);

type ScalarEval<T> = Arc<dyn Fn(&RVec3<T>) -> Cplx<T> + Send + Sync>;
type DerivEval<T> = Arc<dyn Fn(&RVec3<T>) -> PotentialDerivatives<T> + Send + Sync>;

/// A scalar potential with optional analytic first and second derivatives.
#[derive(Clone)]
pub struct ScalarPotential<T: Real> {
    value: ScalarEval<T>,
    derivatives: Option<DerivEval<T>>,
    step: T,
}

impl<T: Real> ScalarPotential<T> {
    pub fn new(f: impl Fn(&RVec3<T>) -> Cplx<T> + Send + Sync + 'static) -> Self {
        Self {
            value: Arc::new(f),
            derivatives: None,
            step: lit(crate::fd::DEFAULT_STEP),
        }
    }

    pub fn with_derivatives(
        mut self,
        d: impl Fn(&RVec3<T>) -> PotentialDerivatives<T> + Send + Sync + 'static,
    ) -> Self {
        self.derivatives = Some(Arc::new(d));
        self
    }

    pub fn value(&self, x: &RVec3<T>) -> Cplx<T> {
        (self.value)(x)
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.derivatives.is_some()
    }

    pub fn derivatives(&self, x: &RVec3<T>) -> PotentialDerivatives<T> {
        match &self.derivatives {
            Some(d) => d(x),
            None => {
                let f = |y: &RVec3<T>| (self.value)(y);
                (fd_gradient(&f, x, self.step), fd_hessian(&f, x, self.step))
            }
        }
    }

    /// Plane wave `e^{i k·x}` with exact derivatives.
    pub fn plane_wave(k: RVec3<T>) -> Self {
        Self::new(move |x| expi(k.dot(x))).with_derivatives(move |x| {
            let e = expi(k.dot(x));
            let grad = scale(&complexify(&k), e * cplx(T::zero(), T::one()));
            let mut h = [[czero(); 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    h[i][j] = -e * (k[i] * k[j]);
                }
            }
            (grad, h)
        })
    }
}

impl<T: Real> ScalarField<T> for ScalarPotential<T> {
    fn eval(&self, x: &RVec3<T>) -> Cplx<T> {
        (self.value)(x)
    }
}

/// Largest relative Helmholtz residual `|∇²Ψ + ν²Ψ| / max(1, |ν²Ψ|)` over
/// 10 deterministic points, with the fd Laplacian.
pub fn helmholtz_residual<T: Real>(psi: &ScalarPotential<T>, nu: T) -> T {
    let nu2 = nu * nu;
    sample_points::<T>(10, 1.0, 0xde6e)
        .iter()
        .map(|x| {
            let v = psi.value(x);
            let lap = fd_laplacian(psi, x, lit(crate::fd::DEFAULT_STEP));
            (lap + v * nu2).norm() / (v * nu2).norm().max(T::one())
        })
        .fold(T::zero(), T::max)
}

fn hess_times<T: Real>(h: &[[Cplx<T>; 3]; 3], w: &RVec3<T>) -> CVec3<T> {
    Vector3::new(
        h[0][0] * w.x + h[0][1] * w.y + h[0][2] * w.z,
        h[1][0] * w.x + h[1][1] * w.y + h[1][2] * w.z,
        h[2][0] * w.x + h[2][1] * w.y + h[2][2] * w.z,
    )
}

/// Which parts of the Debye construction to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CkTerms {
    /// `∇×(Ψω) + (1/ν)∇×∇×(Ψω)`.
    Full,
    /// `∇×(Ψω)` only.
    Toroidal,
    /// `(1/ν)∇×∇×(Ψω)` only.
    Poloidal,
}

/// Chandrasekhar-Kendall field `∇×(Ψω) + (1/ν)∇×∇×(Ψω)` from a Debye potential.
///
/// Uses `∇×(Ψω) = ∇Ψ×ω` and `∇×∇×(Ψω) = Hess(Ψ)ω + ν²Ψω` for Helmholtz `Ψ`.
pub fn ck_field<T: Real>(psi: ScalarPotential<T>, omega: RVec3<T>, nu: T) -> Result<SampledField<T>> {
    ck_field_terms(psi, omega, nu, CkTerms::Full)
}

pub fn ck_field_terms<T: Real>(
    psi: ScalarPotential<T>,
    omega: RVec3<T>,
    nu: T,
    terms: CkTerms,
) -> Result<SampledField<T>> {
    if nu == T::zero() {
        return Err(TrkError::ZeroEigenvalue);
    }
    let res = helmholtz_residual(&psi, nu);
    let tol = lit(1e-6);
    if !(res <= tol) {
        return Err(TrkError::NotHelmholtz {
            residual: res.to_f64().unwrap_or(f64::NAN),
            tol: 1e-6,
        });
    }
    let params = serde_json::json!({
        "omega": [omega.x.to_f64(), omega.y.to_f64(), omega.z.to_f64()],
        "nu": nu.to_f64(),
        "terms": terms,
    });
    let field = SampledField::new("ck", params, move |x| {
        let (grad, hess) = psi.derivatives(x);
        let toroidal = -rcross(&omega, &grad);
        let poloidal = scale_re(&(hess_times(&hess, &omega) + scale(&complexify(&omega), psi.value(x) * (nu * nu))), T::one() / nu);
        match terms {
            CkTerms::Full => toroidal + poloidal,
            CkTerms::Toroidal => toroidal,
            CkTerms::Poloidal => poloidal,
        }
    });
    Ok(match terms {
        CkTerms::Full => field.with_eigenvalue(nu.to_f64().unwrap_or(f64::NAN), 1),
        _ => field,
    })
}

/// Circular-cylindrical CK parameters: `Ψ = A J_m(νr) e^{imθ − ikz}`, `σ² = ν² + k²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CkCircularParams<T: Real> {
    pub m: u32,
    pub k: T,
    pub nu: T,
    pub amplitude: T,
}

impl<T: Real> CkCircularParams<T> {
    /// Eigenvalue `σ = sgn(ν) √(ν² + k²)`; the sign makes `k = 0` reduce to `σ = ν`.
    pub fn sigma(&self) -> T {
        (self.nu * self.nu + self.k * self.k).sqrt() * self.nu.signum()
    }
}

/// `F = −[σ∇×(Ψe_z) + ∇×∇×(Ψe_z)]` with analytic Bessel derivatives; `∇×F = σF`.
pub fn ck_circular<T: Real>(p: CkCircularParams<T>) -> Result<SampledField<T>> {
    if p.nu == T::zero() {
        return Err(TrkError::InvalidParameter(
            "radial wavenumber ν must be nonzero (σ² − k² > 0)".into(),
        ));
    }
    let sigma = p.sigma();
    if sigma == T::zero() {
        return Err(TrkError::ZeroEigenvalue);
    }
    let params = serde_json::json!({
        "m": p.m,
        "k": p.k.to_f64(),
        "nu": p.nu.to_f64(),
        "amplitude": p.amplitude.to_f64(),
        "sigma": sigma.to_f64(),
    });
    Ok(SampledField::new("ck_circular", params, move |x| ck_circular_value(&p, x))
        .with_eigenvalue(sigma.to_f64().unwrap_or(f64::NAN), 1))
}

fn ck_circular_value<T: Real>(p: &CkCircularParams<T>, x: &RVec3<T>) -> CVec3<T> {
    let m = p.m as i64;
    let nu = p.nu;
    let r = x.x.hypot(x.y);
    let theta = x.y.atan2(x.x);
    let zphase = expi(-p.k * x.z) * p.amplitude;
    let jm = bessel_j_signed(p.m, nu * r);
    let jp = bessel_j_signed(p.m + 1, nu * r);
    let jl = if m == 0 {
        -bessel_j_signed(1, nu * r)
    } else {
        bessel_j_signed(p.m - 1, nu * r)
    };
    let psi = expi(lit::<T>(m as f64) * theta) * jm * zphase;
    // (∂x ± i∂y)[J_m e^{imθ}] = ∓ν J_{m±1} e^{i(m±1)θ}
    let dplus = expi(lit::<T>((m + 1) as f64) * theta) * (-nu * jp) * zphase;
    let dminus = expi(lit::<T>((m - 1) as f64) * theta) * (nu * jl) * zphase;
    let two = lit::<T>(2.0);
    let dx = (dplus + dminus) / two;
    let dy = (dplus - dminus) / cplx(T::zero(), two);
    let dz = psi * cplx(T::zero(), -p.k);
    let sigma = p.sigma();
    let grad = Vector3::new(dx, dy, dz);
    let curl_psi_ez = Vector3::new(dy, -dx, czero());
    let ik = cplx(T::zero(), p.k);
    let double = scale(&grad, -ik) + Vector3::new(czero(), czero(), psi * (sigma * sigma));
    -(scale_re(&curl_psi_ez, sigma) + double)
}

/// `∇U`, analytic when the potential supplies derivatives.
pub fn gauge_gradient_field<T: Real>(u: ScalarPotential<T>) -> SampledField<T> {
    SampledField::new("gauge_gradient", serde_json::json!({}), move |x| u.derivatives(x).0)
        .with_eigenvalue(0.0, 1)
}

/// Lundquist vector potential `A = F_L/ν − (F₀/ν) e_z`, which satisfies
/// `∇×A − νA = F₀ e_z`; returns `A` and the constant residual `F₀ e_z`.
pub fn lundquist_potential<T: Real>(f0: T, nu: T) -> Result<(SampledField<T>, CVec3<T>)> {
    if nu == T::zero() {
        return Err(TrkError::ZeroEigenvalue);
    }
    let params = serde_json::json!({ "F0": f0.to_f64(), "nu": nu.to_f64() });
    let a = SampledField::new("lundquist_potential", params, move |x| {
        let mut v = lundquist_value(f0, nu, x);
        v.z -= cplx(f0, T::zero());
        scale_re(&v, T::one() / nu)
    });
    Ok((a, complexify(&Vector3::new(T::zero(), T::zero(), f0))))
}

/// Gauge term `−(i/g) ∇ln U = −(i/g) ∇U / U` at `x`.
pub fn gauge_shift<T: Real>(u: &ScalarPotential<T>, g: T, x: &RVec3<T>) -> CVec3<T> {
    let grad = u.derivatives(x).0;
    let val = u.value(x);
    scale(&grad, cplx(T::zero(), -T::one() / g) / val)
}

/// Abelian gauge function `U = e^{iνz}`.
pub fn axial_gauge_function<T: Real>(nu: T) -> ScalarPotential<T> {
    ScalarPotential::plane_wave(Vector3::new(T::zero(), T::zero(), nu))
}

/// Period `l = 2π/g²` of the axial gauge function.
pub fn gauge_period<T: Real>(g: T) -> T {
    T::TAU() / (g * g)
}

/// Quantized topological mass `ν = n g²`.
pub fn quantized_mass<T: Real>(n: i64, g: T) -> T {
    lit::<T>(n as f64) * g * g
}

fn gaussian_profile<T: Real>(center: &RVec3<T>, width: T, x: &RVec3<T>) -> T {
    let d = x - center;
    (-(d.dot(&d)) / (width * width)).exp()
}

fn check_width<T: Real>(width: T) -> Result<()> {
    if !(width > T::zero()) {
        return Err(TrkError::InvalidParameter("width must be positive".into()));
    }
    Ok(())
}

fn vec_json<T: Real>(v: &RVec3<T>) -> serde_json::Value {
    serde_json::json!([v.x.to_f64(), v.y.to_f64(), v.z.to_f64()])
}

/// `polarization · exp(−|x − center|²/width²)`.
pub fn gaussian_test_field<T: Real>(center: RVec3<T>, width: T, polarization: CVec3<T>) -> Result<SampledField<T>> {
    check_width(width)?;
    let params = serde_json::json!({ "center": vec_json(&center), "width": width.to_f64() });
    Ok(SampledField::new("gaussian", params, move |x| {
        scale_re(&polarization, gaussian_profile(&center, width, x))
    }))
}

/// Divergence-free probe `∇×(G c) = ∇G × c` with a Gaussian `G`.
pub fn curl_gaussian_field<T: Real>(center: RVec3<T>, width: T, c: RVec3<T>) -> Result<SampledField<T>> {
    check_width(width)?;
    let params = serde_json::json!({ "center": vec_json(&center), "width": width.to_f64(), "c": vec_json(&c) });
    Ok(SampledField::new("curl_gaussian", params, move |x| {
        let g = gaussian_profile(&center, width, x);
        let grad = (x - center) * (lit::<T>(-2.0) * g / (width * width));
        complexify(&grad.cross(&c))
    }))
}

/// `∇×∇×(G c) = Hess(G) c − (∇²G) c` with a Gaussian `G`; its Biot-Savart
/// image is exactly [`curl_gaussian_field`] with the same parameters.
pub fn double_curl_gaussian_field<T: Real>(center: RVec3<T>, width: T, c: RVec3<T>) -> Result<SampledField<T>> {
    check_width(width)?;
    let params = serde_json::json!({ "center": vec_json(&center), "width": width.to_f64(), "c": vec_json(&c) });
    Ok(SampledField::new("double_curl_gaussian", params, move |x| {
        let g = gaussian_profile(&center, width, x);
        let d = x - center;
        let w2 = width * width;
        let four = lit::<T>(4.0);
        let hc = d * (four * d.dot(&c) / (w2 * w2)) - c * (lit::<T>(2.0) / w2);
        let lap = four * d.dot(&d) / (w2 * w2) - lit::<T>(6.0) / w2;
        complexify(&((hc - c * lap) * g))
    }))
}
