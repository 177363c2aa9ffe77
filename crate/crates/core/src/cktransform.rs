//! Chandrasekhar-Kendall construction in transform space: Debye potentials
//! `Ψ(p, κ)` with `(Γ² + ν²)Ψ = 0` and a fixed vector `ω(κ)` generate
//! `G = Γ×(Ψω) + (1/ν) Γ×Γ×(Ψω)` with `Γ×G = νG`.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use nalgebra::Vector3;

use crate::error::{Result, TrkError};
use crate::fields::CkTerms;
use crate::geometry::Direction;
use crate::quadrature::{pairwise_sum, SphereQuadrature};
use crate::radon::{inverse_radon_analytic, AnalyticProfile, PGrid, RadonAtom, ScalarAnalyticProfile, ScalarAtom};
use crate::rbs::{rbs_apply, rbs_atoms};
use crate::scalar::{cmax, cplx, czero, expi, lit, rcross, scale, scale_re, CVec3, Cplx, RVec3, Real};

type OmegaFn<T> = Arc<dyn Fn(T, &Direction<T>) -> CVec3<T> + Send + Sync>;

/// Debye potential as tone atoms plus the vector `ω`.
///
/// `ω` takes `p` as an argument only so that a `p`-dependent choice can be
/// detected and refused.
#[derive(Clone)]
pub struct DebyeChoice<T: Real> {
    pub psi: ScalarAnalyticProfile<T>,
    pub omega: OmegaFn<T>,
    pub nu: T,
}

impl<T: Real> std::fmt::Debug for DebyeChoice<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DebyeChoice").field("psi", &self.psi).field("nu", &self.nu).finish()
    }
}

/// `p` values at which `ω` is probed for `p`-dependence.
const P_PROBES: [f64; 4] = [0.0, 0.37, 1.9, -2.3];

impl<T: Real> DebyeChoice<T> {
    pub fn new(psi: ScalarAnalyticProfile<T>, omega: impl Fn(T, &Direction<T>) -> CVec3<T> + Send + Sync + 'static, nu: T) -> Self {
        Self { psi, omega: Arc::new(omega), nu }
    }

    /// Fixed `ω` (independent of both `p` and `κ`).
    pub fn constant(psi: ScalarAnalyticProfile<T>, omega: CVec3<T>, nu: T) -> Self {
        Self::new(psi, move |_, _| omega, nu)
    }

    /// Largest `|(f² − ν²) c|` over the tones of `Ψ`.
    pub fn helmholtz_residual(&self) -> T {
        self.psi
            .atoms
            .iter()
            .map(|a| ((a.frequency * a.frequency - self.nu * self.nu) * a.amplitude.norm()).abs())
            .fold(T::zero(), T::max)
    }

    /// Largest change of `ω(p, κ)` across the probe values of `p`.
    pub fn omega_p_variation(&self) -> T {
        let mut worst = T::zero();
        for a in &self.psi.atoms {
            let base = (self.omega)(T::zero(), &a.direction);
            for p in P_PROBES {
                worst = worst.max(cmax(&((self.omega)(lit(p), &a.direction) - base)));
            }
        }
        worst
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu == T::zero() {
            return Err(TrkError::ZeroEigenvalue);
        }
        let h = self.helmholtz_residual();
        if h > lit(1e-10) {
            return Err(TrkError::NotHelmholtz { residual: h.to_f64().unwrap_or(f64::NAN), tol: 1e-10 });
        }
        let v = self.omega_p_variation();
        if v > lit(1e-12) {
            return Err(TrkError::Precondition(format!(
                "ω must not depend on p (variation {:e})",
                v.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(())
    }

    /// `Ψω` as vector atoms.
    pub fn potential_atoms(&self) -> AnalyticProfile<T> {
        AnalyticProfile::new(
            self.psi
                .atoms
                .iter()
                .map(|a| RadonAtom {
                    direction: a.direction,
                    frequency: a.frequency,
                    amplitude: scale(&(self.omega)(T::zero(), &a.direction), a.amplitude),
                })
                .collect(),
            self.nu,
            1,
        )
    }
}

/// `G = Γ×(Ψω) + (1/ν)Γ×Γ×(Ψω)`, restricted to the requested terms.
///
/// For `ω` transverse with the helicity matching the tone, the two terms
/// coincide, so `Toroidal` alone reproduces the profiles built from the
/// Moses frame and `Full` doubles them.
pub fn ck_transform_solution<T: Real>(choice: &DebyeChoice<T>, terms: CkTerms) -> Result<AnalyticProfile<T>> {
    choice.validate()?;
    let h = choice.potential_atoms();
    let tor = h.gamma_cross();
    let pol = tor.gamma_cross().scaled(cplx(T::one() / choice.nu, T::zero()));
    let mut out = match terms {
        CkTerms::Full => tor.plus(&pol).merged(),
        CkTerms::Toroidal => tor,
        CkTerms::Poloidal => pol,
    };
    out.nu = choice.nu;
    out.mu = 1;
    Ok(out)
}

/// Sum of solutions for several choices.
pub fn ck_transform_solution_sum<T: Real>(choices: &[DebyeChoice<T>], terms: CkTerms) -> Result<AnalyticProfile<T>> {
    let first = choices
        .first()
        .ok_or_else(|| TrkError::InvalidParameter("at least one Debye choice is required".into()))?;
    let mut acc = AnalyticProfile::new(Vec::new(), first.nu, 1);
    for c in choices {
        acc = acc.plus(&ck_transform_solution(c, terms)?);
    }
    Ok(acc)
}

/// Residuals of the potential and RBS statements for the full solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialCheck<T: Real> {
    /// `‖Γ×H − G‖` with `H = Ψω + (1/ν)Γ×(Ψω)`.
    pub potential: T,
    /// `‖RBS[G] − G/ν‖`.
    pub rbs: T,
}

pub fn ck_transform_potential_check<T: Real>(choice: &DebyeChoice<T>) -> Result<PotentialCheck<T>> {
    let g = ck_transform_solution(choice, CkTerms::Full)?;
    let psi_omega = choice.potential_atoms();
    let h = psi_omega.plus(&psi_omega.gamma_cross().scaled(cplx(T::one() / choice.nu, T::zero())));
    let potential = h.gamma_cross().max_difference(&g);
    let rbs = rbs_atoms(&g)?.max_difference(&g.scaled(cplx(T::one() / choice.nu, T::zero())));
    Ok(PotentialCheck { potential, rbs })
}

/// Grid version of [`ck_transform_potential_check`]; the tones of `Ψ` must
/// be commensurate with `grid`.
pub fn ck_grid_potential_check<T: Real>(choice: &DebyeChoice<T>, grid: PGrid<T>) -> Result<PotentialCheck<T>> {
    choice.validate()?;
    let inv = cplx(T::one() / choice.nu, T::zero());
    let psi_omega = choice.potential_atoms().to_grid(grid);
    let tor = psi_omega.gamma_cross();
    let g_samples: Vec<CVec3<T>> = tor
        .samples
        .iter()
        .zip(&tor.gamma_cross().samples)
        .map(|(a, b)| a + scale(b, inv))
        .collect();
    let mut g = tor.clone();
    g.samples = g_samples;
    let mut h = psi_omega.clone();
    h.samples = psi_omega.samples.iter().zip(&tor.samples).map(|(a, b)| a + scale(b, inv)).collect();
    let potential = h.gamma_cross().max_difference(&g);
    let rbs = rbs_apply(&g)?.max_difference(&g.scaled(inv));
    Ok(PotentialCheck { potential, rbs })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContourBranch {
    /// Pole at `+iλν`.
    Plus,
    /// Pole at `−iλν`.
    Minus,
}

impl ContourBranch {
    fn sign<T: Real>(self) -> T {
        match self {
            Self::Plus => T::one(),
            Self::Minus => -T::one(),
        }
    }
}

/// `(1/4πiν) ∮ e^{pζ}/(ζ ∓ iλν) dζ = e^{±iλνp}/(2ν)` by the residue theorem.
pub fn oscillator_residue<T: Real>(p: T, lambda: i8, nu: T, branch: ContourBranch) -> Result<Cplx<T>> {
    if nu == T::zero() {
        return Err(TrkError::ZeroEigenvalue);
    }
    let s = branch.sign::<T>() * lit(lambda as f64);
    Ok(expi(s * nu * p) / (nu + nu))
}

/// `∮ e^{pζ}/(ζ − ζ₀) dζ` around a circle of radius `radius` centred at `ζ₀`,
/// by the trapezoid rule with `nodes` points.
pub fn cauchy_loop<T: Real>(p: T, pole: Cplx<T>, radius: T, nodes: usize) -> Cplx<T> {
    let dt = lit::<T>(TAU / nodes as f64);
    let terms: Vec<Cplx<T>> = (0..nodes)
        .map(|j| {
            let e = expi(dt * lit(j as f64));
            let zeta = pole + e * radius;
            // dζ = i r e^{iθ} dθ and 1/(ζ − ζ₀) = 1/(r e^{iθ})
            (zeta * p).exp() * cplx(T::zero(), dt)
        })
        .collect();
    pairwise_sum(&terms, czero())
}

/// Numerical-contour counterpart of [`oscillator_residue`]: a circle of
/// radius `|ν|/2` around the pole with 64 nodes.
pub fn oscillator_contour<T: Real>(p: T, lambda: i8, nu: T, branch: ContourBranch) -> Result<Cplx<T>> {
    if nu == T::zero() {
        return Err(TrkError::ZeroEigenvalue);
    }
    let s = branch.sign::<T>() * lit(lambda as f64);
    let pole = cplx(T::zero(), s * nu);
    let loop_val = cauchy_loop(p, pole, nu.abs() / lit(2.0), 64);
    Ok(loop_val / (cplx(T::zero(), lit::<T>(4.0 * PI)) * nu))
}

/// A vector-valued measure on S² given by point masses.
pub type DirectionMeasure<T> = Vec<(Direction<T>, CVec3<T>)>;

/// Discretizes a bounded `ω(κ) dΩ` with a sphere rule.
pub fn measure_from_fn<T: Real>(quad: &SphereQuadrature<T>, f: impl Fn(&Direction<T>) -> CVec3<T>) -> DirectionMeasure<T> {
    quad.nodes.iter().zip(&quad.weights).map(|(d, w)| (*d, scale_re(&f(d), *w))).collect()
}

/// `(d, r)` for every unit `d` in the `z = 0` plane ring of `n` points, with ring weight; `δ(κ_z) v(κ)`.
pub fn ring_measure<T: Real>(n: usize, v: impl Fn(&Direction<T>) -> CVec3<T>) -> DirectionMeasure<T> {
    let w = lit::<T>(TAU / n as f64);
    crate::radon::equatorial_ring::<T>(n).into_iter().map(|d| (d, scale_re(&v(&d), w))).collect()
}

fn check_bounded<T: Real>(m: &DirectionMeasure<T>) -> Result<()> {
    for (_, v) in m {
        if !v.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(TrkError::Precondition("ω must be bounded on the direction set".into()));
        }
    }
    Ok(())
}

/// `G = ½(iλκ×ω₁ − κ×κ×ω₁) e^{iλνp} + ½(−iλκ×ω₂ − κ×κ×ω₂) e^{−iλνp}`, the
/// `½` being the contour factor `(1/4πi)·2πi`.
pub fn ck_integral_profile<T: Real>(
    omega1: &DirectionMeasure<T>,
    omega2: &DirectionMeasure<T>,
    lambda: i8,
    nu: T,
) -> Result<AnalyticProfile<T>> {
    if nu == T::zero() {
        return Err(TrkError::ZeroEigenvalue);
    }
    if lambda != 1 && lambda != -1 {
        return Err(TrkError::InvalidParameter(format!("helicity must be ±1, got {lambda}")));
    }
    check_bounded(omega1)?;
    check_bounded(omega2)?;
    let l = lit::<T>(lambda as f64);
    let half = lit::<T>(0.5);
    let build = |d: &Direction<T>, w: &CVec3<T>, sign: T| {
        let k = d.as_vector();
        let kw = rcross(&k, w);
        let kkw = rcross(&k, &kw);
        RadonAtom {
            direction: *d,
            frequency: sign * l * nu,
            amplitude: scale_re(&(scale(&kw, cplx(T::zero(), sign * l)) - kkw), half),
        }
    };
    let mut atoms: Vec<RadonAtom<T>> = omega1.iter().map(|(d, w)| build(d, w, T::one())).collect();
    atoms.extend(omega2.iter().map(|(d, w)| build(d, w, -T::one())));
    Ok(AnalyticProfile::new(atoms, nu, 1))
}

/// Physical-space field of [`ck_integral_profile`] through the exact inverse.
pub fn reconstruct_physical<T: Real>(
    omega1: &DirectionMeasure<T>,
    omega2: &DirectionMeasure<T>,
    lambda: i8,
    nu: T,
    x: &RVec3<T>,
) -> Result<CVec3<T>> {
    Ok(inverse_radon_analytic(&ck_integral_profile(omega1, omega2, lambda, nu)?, x))
}

/// `ω₁, ω₂ = −i(2π)²/ν² Σ a_i δ(κ ∓ κ_i) E_i` for the axis triple
/// `κ = (e_z, e_x, e_y)`, `E = (e_x + iλe_y, e_y + iλe_z, e_z + iλe_x)`.
pub fn abc_measures<T: Real>(a: T, b: T, c: T, lambda: i8, nu: T) -> (DirectionMeasure<T>, DirectionMeasure<T>) {
    let pre = cplx(T::zero(), -lit::<T>(4.0 * PI * PI) / (nu * nu));
    let (e1, e2, e3) = abc_polarizations::<T>(lambda);
    let dirs = [Direction::ez(), Direction::ex(), Direction::ey()];
    let coef = [a, b, c];
    let pols = [e1, e2, e3];
    let m1 = (0..3).map(|i| (dirs[i], scale(&pols[i], pre * coef[i]))).collect();
    let m2 = (0..3).map(|i| (dirs[i].antipode(), scale(&pols[i], pre * coef[i]))).collect();
    (m1, m2)
}

/// `(E₁, E₂, E₃)` with `iλκ_i×E_i = E_i` for `κ = (e_z, e_x, e_y)`.
pub fn abc_polarizations<T: Real>(lambda: i8) -> (CVec3<T>, CVec3<T>, CVec3<T>) {
    let one = cplx(T::one(), T::zero());
    let il = cplx(T::zero(), lit(lambda as f64));
    let z = czero();
    (Vector3::new(one, il, z), Vector3::new(z, one, il), Vector3::new(il, z, one))
}

/// `−i(a e^{iλνz}E₁ + b e^{iλνx}E₂ + c e^{iλνy}E₃)`.
pub fn abc_complex_value<T: Real>(a: T, b: T, c: T, lambda: i8, nu: T, x: &RVec3<T>) -> CVec3<T> {
    let (e1, e2, e3) = abc_polarizations::<T>(lambda);
    let ln = lit::<T>(lambda as f64) * nu;
    let mi = cplx(T::zero(), -T::one());
    let sum = scale(&e1, expi(ln * x.z) * a) + scale(&e2, expi(ln * x.x) * b) + scale(&e3, expi(ln * x.y) * c);
    scale(&sum, mi)
}

/// Moses-frame measures `ω₁ = c Q_λ(κ) s(λνκ)`, `ω₂ = c Q_λ(−κ) s(−λνκ)`
/// with `c = (2π)^{1/2}/(gν²)`. For a mode at `κ₀`, `ω₁` sits at `κ₀` and
/// `ω₂` at `−κ₀`, both carrying `c s Q_λ(κ₀)`. Only `μ = 1` fields apply,
/// since the integral produces the eigenvalue `+ν`.
pub fn moses_measures<T: Real>(field: &crate::fields::ModeField<T>) -> Result<(DirectionMeasure<T>, DirectionMeasure<T>)> {
    if field.mu() != 1 {
        return Err(TrkError::InvalidParameter("Moses measures need a self-dual (μ = 1) field".into()));
    }
    let nu = field.nu();
    let c = lit::<T>(TAU.sqrt()) / (field.g() * nu * nu);
    let mut m1 = Vec::new();
    let mut m2 = Vec::new();
    for m in field.modes() {
        let w = scale(&crate::moses::q_lambda(&m.kappa, m.lambda), m.amplitude * c);
        m1.push((m.kappa, w));
        m2.push((m.kappa.antipode(), w));
    }
    Ok((m1, m2))
}

/// `δ(κ − κ₀)` Debye choice `Ψ = A[e^{iλνp}δ_{κ₀} + e^{−iλνp}δ_{−κ₀}]`, `ω = Q_λ(κ₀)`.
pub fn single_mode_choice<T: Real>(kappa0: Direction<T>, lambda: i8, nu: T, a: Cplx<T>) -> DebyeChoice<T> {
    let ln = lit::<T>(lambda as f64) * nu;
    let psi = ScalarAnalyticProfile {
        atoms: vec![
            ScalarAtom { direction: kappa0, frequency: ln, amplitude: a },
            ScalarAtom { direction: kappa0.antipode(), frequency: -ln, amplitude: a },
        ],
    };
    let q = crate::moses::q_lambda(&kappa0, lambda);
    DebyeChoice::constant(psi, q, nu)
}

/// The pair of Lundquist Debye choices `Ψ₁ = (2πiF₀/ν³)δ(κ_z)e^{iνp}`, `ω₁ = L`
/// and `Ψ₂ = (2πiF₀/ν³)δ(κ_z)e^{−iνp}`, `ω₂ = L′`, on an `n`-point ring.
pub fn lundquist_choices<T: Real>(f0: T, nu: T, n: usize) -> [DebyeChoice<T>; 2] {
    let w = lit::<T>(TAU / n as f64);
    let c = cplx(T::zero(), lit::<T>(TAU) * f0 / (nu * nu * nu)) * w;
    let ring = crate::radon::equatorial_ring::<T>(n);
    let tones = |f: T| ScalarAnalyticProfile {
        atoms: ring.iter().map(|d| ScalarAtom { direction: *d, frequency: f, amplitude: c }).collect(),
    };
    let mi = cplx(T::zero(), -T::one());
    [
        DebyeChoice::new(tones(nu), move |_, d| Vector3::new(cplx(d.y(), T::zero()), cplx(-d.x(), T::zero()), mi), nu),
        DebyeChoice::new(tones(-nu), move |_, d| Vector3::new(cplx(-d.y(), T::zero()), cplx(d.x(), T::zero()), mi), nu),
    ]
}

/// `Ψ = (2πF₀/ν³)δ(κ_z)(e^{iνp} + e^{−iνp})`, `ω = e_z`.
pub fn lundquist_axial_choice<T: Real>(f0: T, nu: T, n: usize) -> DebyeChoice<T> {
    let w = lit::<T>(TAU / n as f64);
    let c = cplx(lit::<T>(TAU) * f0 / (nu * nu * nu) * w, T::zero());
    let ring = crate::radon::equatorial_ring::<T>(n);
    let mut atoms = Vec::with_capacity(2 * n);
    for d in &ring {
        atoms.push(ScalarAtom { direction: *d, frequency: nu, amplitude: c });
        atoms.push(ScalarAtom { direction: *d, frequency: -nu, amplitude: c });
    }
    let one = cplx(T::one(), T::zero());
    DebyeChoice::constant(ScalarAnalyticProfile { atoms }, Vector3::new(czero(), czero(), one), nu)
}

/// Largest `|iλκ_i×E_i − E_i|` and `|κ_i·E_i|` over the abc triple.
pub fn abc_polarization_defect<T: Real>(lambda: i8) -> T {
    let (e1, e2, e3) = abc_polarizations::<T>(lambda);
    let dirs = [Direction::<T>::ez(), Direction::ex(), Direction::ey()];
    let il = cplx(T::zero(), lit(lambda as f64));
    let mut worst = T::zero();
    for (d, e) in dirs.iter().zip([e1, e2, e3]) {
        let k = d.as_vector();
        worst = worst.max(cmax(&(scale(&rcross(&k, &e), il) - e)));
        worst = worst.max(crate::scalar::rdot(&k, &e).norm());
    }
    worst
}

/// Zero vector measure helper.
pub fn empty_measure<T: Real>() -> DirectionMeasure<T> {
    Vec::new()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fd::fd_curl;
    use crate::fields::{abc_value, lundquist_value, ModeField};
    use crate::geometry::{sample_directions, sample_points};
    use crate::radon::{lundquist_radon_profile, radon_mode_analytic};
    use crate::scalar::{cnorm, re_part};

    fn c(re: f64, im: f64) -> Cplx<f64> {
        cplx(re, im)
    }

    #[test]
    fn single_mode_from_debye_potential() {
        let (nu, lambda) = (-1.4, -1i8);
        let k0 = Direction::new(0.2, -0.3, 0.6).unwrap();
        let a = 4.0 * PI * PI / (nu * nu * nu);
        let choice = single_mode_choice(k0, lambda, nu, c(a, 0.0));
        let g = ck_transform_solution(&choice, CkTerms::Toroidal).unwrap();
        // amplitude s = (2π)^{3/2} g gives the atom coefficient (2π)²/ν²
        let f = ModeField::single(lambda, nu, 1, k0, c(TAU.powf(1.5), 0.0)).unwrap();
        let want = radon_mode_analytic(&f);
        assert!(g.max_difference(&want) < 1e-12);
        let full = ck_transform_solution(&choice, CkTerms::Full).unwrap();
        assert!(full.max_difference(&want.scaled(c(2.0, 0.0))) < 1e-12);
        let chk = ck_transform_potential_check(&choice).unwrap();
        assert!(chk.potential < 1e-12 && chk.rbs < 1e-12);
    }

    #[test]
    fn lundquist_from_debye_potentials() {
        let (f0, nu, n) = (1.2, 0.7, 24);
        let want = lundquist_radon_profile(f0, nu, n).unwrap();
        let g = ck_transform_solution_sum(&lundquist_choices(f0, nu, n), CkTerms::Toroidal).unwrap();
        assert!(g.max_difference(&want) < 1e-12);
        let axial = lundquist_axial_choice(f0, nu, n);
        assert!(ck_transform_solution(&axial, CkTerms::Full).unwrap().max_difference(&want) < 1e-12);
        // the poloidal part alone carries the J₀ e_z component
        let pol = ck_transform_solution(&axial, CkTerms::Poloidal).unwrap();
        for x in sample_points::<f64>(5, 3.0, 2) {
            let got = inverse_radon_analytic(&pol, &x);
            let full = lundquist_value(f0, nu, &x);
            assert!((got.z - full.z).norm() < 1e-9);
            assert!(got.x.norm() + got.y.norm() < 1e-12);
        }
    }

    #[test]
    fn potential_checks() {
        let choice = lundquist_axial_choice(1.0, 1.0, 8);
        let chk = ck_transform_potential_check(&choice).unwrap();
        assert!(chk.potential < 1e-12 && chk.rbs < 1e-12);
        let grid = PGrid::commensurate(1.0, 2, 32).unwrap();
        let chk = ck_grid_potential_check(&choice, grid).unwrap();
        assert!(chk.potential < 1e-9 && chk.rbs < 1e-9);
        let bad = DebyeChoice::new(choice.psi.clone(), |p: f64, _| Vector3::new(c(p, 0.0), czero(), czero()), 1.0);
        assert!(matches!(ck_transform_solution(&bad, CkTerms::Full), Err(TrkError::Precondition(_))));
        let off = DebyeChoice::constant(
            ScalarAnalyticProfile { atoms: vec![ScalarAtom { direction: Direction::ez(), frequency: 2.0, amplitude: c(1.0, 0.0) }] },
            Vector3::new(c(1.0, 0.0), czero(), czero()),
            1.0,
        );
        assert!(matches!(off.validate(), Err(TrkError::NotHelmholtz { .. })));
    }

    #[test]
    fn residue_and_contour_agree() {
        assert!((cauchy_loop(0.0, c(0.0, 1.0), 0.5, 64) - c(0.0, TAU)).norm() < 1e-14);
        let v = cauchy_loop(0.3, c(0.0, 1.0), 0.5, 64);
        assert!((v - c(0.0, TAU) * expi(0.3)).norm() < 1e-13);
        for nu in [0.5, 1.0, 3.0, -1.0] {
            for p in [-5.0, -1.2, 0.0, 0.3, 5.0] {
                for lam in [1i8, -1] {
                    for br in [ContourBranch::Plus, ContourBranch::Minus] {
                        let r = oscillator_residue(p, lam, nu, br).unwrap();
                        let q = oscillator_contour(p, lam, nu, br).unwrap();
                        assert!((r - q).norm() / r.norm() < 1e-12, "{nu} {p}");
                    }
                }
            }
        }
        assert!(oscillator_residue(0.0, 1, 0.0, ContourBranch::Plus).is_err());
    }

    #[test]
    fn ck_integral_profiles() {
        let f = ModeField::new(
            1.1,
            1,
            1.0,
            sample_directions::<f64>(5, 8)
                .into_iter()
                .map(|k| crate::fields::HelicityMode { lambda: 1, kappa: k, amplitude: c(0.3, 0.9) })
                .collect(),
        )
        .unwrap();
        let (m1, m2) = moses_measures(&f).unwrap();
        let lambda = 1;
        let g = ck_integral_profile(&m1, &m2, lambda, 1.1).unwrap();
        assert!(g.max_difference(&radon_mode_analytic(&f)) < 1e-12);
        assert!(g.eigen_residual() < 1e-14);
        // Lundquist from ω₁ = ω₂ = (4πF₀/ν²)δ(κ_z) e_z
        let (f0, nu, n) = (0.9, 1.3, 16);
        let ez = Vector3::new(czero(), czero(), c(2.0 * TAU * f0 / (nu * nu), 0.0));
        let m = ring_measure::<f64>(n, |_| ez);
        let l = ck_integral_profile(&m, &m, 1, nu).unwrap();
        assert!(l.max_difference(&lundquist_radon_profile(f0, nu, n).unwrap()) < 1e-12);
        // arbitrary admissible measures stay eigen
        let quad = SphereQuadrature::<f64>::new(4, 8, false).unwrap();
        let any = measure_from_fn(&quad, |d| Vector3::new(c(d.x(), 1.0), c(0.2, d.z()), c(-1.0, 0.0)));
        let g3 = ck_integral_profile(&any, &any, -1, 0.8).unwrap();
        assert!(g3.eigen_residual() < 1e-13);
        assert!(g3.transversality_residual() < 1e-13);
        let nan = vec![(Direction::ez(), Vector3::new(c(f64::NAN, 0.0), czero(), czero()))];
        assert!(ck_integral_profile(&nan, &empty_measure(), 1, 1.0).is_err());
    }

    #[test]
    fn abc_reconstruction() {
        assert_eq!(abc_polarization_defect::<f64>(1), 0.0);
        assert_eq!(abc_polarization_defect::<f64>(-1), 0.0);
        let (a, b, cc, nu) = (1.0, 1.0, 1.0, 1.3);
        for lambda in [1i8, -1] {
            let (m1, m2) = abc_measures(a, b, cc, lambda, nu);
            let field = |x: &RVec3<f64>| reconstruct_physical(&m1, &m2, lambda, nu, x).unwrap();
            for x in sample_points::<f64>(10, 2.0, 3) {
                let f = field(&x);
                assert!(cnorm(&(f - abc_complex_value(a, b, cc, lambda, nu, &x))) < 1e-12);
                if lambda == 1 {
                    assert!((re_part(&f) - abc_value(a, b, cc, nu, &x)).norm() < 1e-12);
                }
                let curl = fd_curl(&field, &x, 1e-3);
                // iλκ_i×E_i = E_i makes the eigenvalue ν for either helicity
                let want = scale_re(&f, nu);
                assert!(cnorm(&(curl - want)) / cnorm(&want) < 1e-7);
            }
        }
    }

    #[test]
    fn single_delta_round_trip() {
        let f = ModeField::single(1, 0.9, 1, Direction::new(-0.5, 0.1, 0.3).unwrap(), c(0.4, -1.0)).unwrap();
        let prof = radon_mode_analytic(&f);
        let m1: DirectionMeasure<f64> = prof.atoms.iter().filter(|a| a.frequency > 0.0).map(|a| (a.direction, a.amplitude)).collect();
        let m2: DirectionMeasure<f64> = prof.atoms.iter().filter(|a| a.frequency < 0.0).map(|a| (a.direction, a.amplitude)).collect();
        for x in sample_points::<f64>(5, 2.0, 9) {
            let got = reconstruct_physical(&m1, &m2, 1, 0.9, &x).unwrap();
            let want = f.eval(&x);
            assert!(cnorm(&(got - want)) / cnorm(&want) < 1e-9);
        }
    }
}
