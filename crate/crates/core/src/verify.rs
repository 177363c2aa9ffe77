//! Invariant suite: each record measures one identity and compares the
//! residual against a tolerance.
//!
//! All checks use fixed seeds and ordered summation, so a report is
//! byte-identical across runs on the same machine.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use serde_json::{json, Value};

use crate::biotsavart::{ampere_fluxes, bs_integral, bs_lundquist_semianalytic, VolumeQuadrature};
use crate::catalog;
use crate::cktransform::{
    abc_measures, ck_transform_potential_check, ck_transform_solution, ck_transform_solution_sum, lundquist_axial_choice,
    lundquist_choices, oscillator_contour, oscillator_residue, reconstruct_physical, single_mode_choice, ContourBranch,
};
use crate::error::{Result, TrkError};
use crate::fd::{fd_curl, DEFAULT_STEP};
use crate::fields::{
    abc_field, axial_gauge_function, ck_circular, curl_eigen_residual, curl_gaussian_field, gauge_period, gauge_shift,
    gaussian_test_field, lundquist, lundquist_potential, quantized_mass, CkCircularParams, CkTerms, HelicityMode, ModeField,
};
use crate::geometry::{sample_directions, sample_points, Direction};
use crate::io::{json_text, num17};
use crate::moses::{eigenfunction, frame_defect, HelicityLabel};
use crate::quadrature::PlaneQuadrature;
use crate::radon::{
    hemisphere_inverse, intertwining_check, inverse_radon_analytic, lundquist_radon_profile, radon_mode_analytic,
    AnalyticProfile, Hemisphere, IntertwiningKind, PGrid,
};
use crate::rbs::{gauge_atoms, rbs_apply, rbs_atoms, rbs_left_inverse_check, transverse_tone_profile};
use crate::scalar::{cnorm, complexify, cplx, re_part, scale_re, CVec3, RVec3};
use crate::special::bessel_j;

/// First positive zero of `J₁`.
pub const J1_FIRST_ZERO: f64 = 3.831_705_970_207_512_3;

/// One measured invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRecord {
    pub name: String,
    /// The identity being checked.
    pub anchor: String,
    /// `NaN` when the check itself failed to run.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// A registered check.
pub struct Check {
    pub name: &'static str,
    pub anchor: &'static str,
    pub tolerance: f64,
    pub run: fn() -> Result<f64>,
}

/// Tolerance overrides by exact record name (`*` applies to all) and a
/// substring filter on names.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyOptions {
    pub tolerances: BTreeMap<String, f64>,
    pub only: Option<String>,
}

fn rel(a: &CVec3<f64>, b: &CVec3<f64>) -> f64 {
    cnorm(&(a - b)) / cnorm(b).max(1e-300)
}

fn modes(n: usize, seed: u64) -> Vec<HelicityMode<f64>> {
    sample_directions::<f64>(n, seed)
        .into_iter()
        .enumerate()
        .map(|(i, k)| HelicityMode { lambda: 1, kappa: k, amplitude: cplx(1.0, 0.1 * i as f64) })
        .collect()
}

fn mode_field(n: usize) -> Result<ModeField<f64>> {
    ModeField::new(1.4, 1, 1.0, modes(n, 3))
}

fn trkalian_profiles() -> Result<Vec<AnalyticProfile<f64>>> {
    catalog::catalog()
        .into_iter()
        .filter(|c| c.trkalian)
        .map(|c| Ok(catalog::build(c.name, &c.example)?.analytic.expect("trkalian entries carry profiles")))
        .chain(std::iter::once(Ok(radon_mode_analytic(&mode_field(16)?))))
        .collect()
}

fn ck_parameter_sets() -> [CkCircularParams<f64>; 3] {
    [
        CkCircularParams { m: 0, k: 0.0, nu: 1.0, amplitude: 1.0 },
        CkCircularParams { m: 1, k: 0.5, nu: 1.2, amplitude: 1.0 },
        CkCircularParams { m: 2, k: -0.7, nu: 0.8, amplitude: 0.5 },
    ]
}

fn frame() -> Result<f64> {
    Ok(sample_directions::<f64>(1000, 1).iter().map(frame_defect).fold(0.0, f64::max))
}

fn eigenfunction_curl() -> Result<f64> {
    let dirs = sample_directions::<f64>(20, 2);
    let xs = sample_points::<f64>(20, 2.0, 2);
    let mut worst = 0.0f64;
    for (i, (d, x)) in dirs.iter().zip(&xs).enumerate() {
        let k = d.as_vector() * (0.5 + 0.1 * i as f64);
        for label in [HelicityLabel::Plus, HelicityLabel::Minus] {
            let chi = move |y: &RVec3<f64>| eigenfunction(y, &k, label).expect("nonzero wave vector");
            let ev = label.lambda() as f64 * k.norm();
            worst = worst.max(curl_eigen_residual(&chi, x, ev, DEFAULT_STEP));
        }
    }
    Ok(worst)
}

fn lundquist_curl() -> Result<f64> {
    Ok(lundquist(1.0, 1.0)?.curl_residual(1.0, 10, 1.5, DEFAULT_STEP, 4))
}

fn ck_circular_curl() -> Result<f64> {
    let mut worst = 0.0f64;
    for p in ck_parameter_sets() {
        worst = worst.max(ck_circular(p)?.curl_residual(p.sigma(), 10, 1.5, DEFAULT_STEP, 5));
    }
    Ok(worst)
}

fn abc_curl() -> Result<f64> {
    Ok(abc_field(1.0, 0.7, -0.4, 1.3)?.curl_residual(1.3, 10, 1.5, DEFAULT_STEP, 6))
}

fn mode_curl() -> Result<f64> {
    let f = mode_field(16)?;
    Ok(f.to_sampled().curl_residual(f.eigenvalue(), 10, 1.5, DEFAULT_STEP, 7))
}

fn ampere_agreement() -> Result<f64> {
    let (f0, nu) = (1.0, 1.0);
    let field = lundquist(f0, nu)?;
    let mut worst = 0.0f64;
    for big_r in [1.0, 2.5, 4.5] {
        let fl = ampere_fluxes(&field, big_r, nu)?;
        let exact = cplx(TAU * f0 * big_r * bessel_j(1, nu * big_r)?, 0.0);
        worst = worst.max(fl.residual());
        for v in [fl.charge * nu, fl.surface_flux, fl.line_flux] {
            worst = worst.max((v - exact).norm() / exact.norm());
        }
    }
    Ok(worst)
}

fn ampere_first_zero() -> Result<f64> {
    let nu = 1.0;
    Ok(ampere_fluxes(&lundquist(1.0, nu)?, J1_FIRST_ZERO / nu, nu)?.max_abs())
}

fn round_trip() -> Result<f64> {
    let mut worst = 0.0f64;
    for n in [1, 3, 16] {
        let f = mode_field(n)?;
        let prof = radon_mode_analytic(&f);
        for x in sample_points::<f64>(20, 2.0, 8) {
            worst = worst.max(rel(&inverse_radon_analytic(&prof, &x), &f.eval(&x)));
        }
    }
    Ok(worst)
}

fn hemisphere() -> Result<f64> {
    let f = mode_field(16)?;
    let prof = radon_mode_analytic(&f);
    let (up, down) = (Hemisphere::upper(), Hemisphere::upper().complement());
    let mut worst = 0.0f64;
    for x in sample_points::<f64>(20, 2.0, 9) {
        let want = f.eval(&x);
        worst = worst.max(rel(&hemisphere_inverse(&prof, &up, &x), &want));
        worst = worst.max(rel(&hemisphere_inverse(&prof, &down, &x), &want));
    }
    Ok(worst)
}

fn eigen_atoms() -> Result<f64> {
    Ok(trkalian_profiles()?.iter().map(|p| p.eigen_residual()).fold(0.0, f64::max))
}

fn eigen_grid() -> Result<f64> {
    let nu = 1.1;
    let grid = PGrid::commensurate(nu, 2, 64)?;
    let g = lundquist_radon_profile(1.0, nu, 16)?.to_grid(grid);
    Ok(g.gamma_cross().max_difference(&g.scaled(cplx(nu, 0.0))) / g.max_abs())
}

fn intertwining() -> Result<f64> {
    let pol = Vector3::new(cplx(1.0, 0.0), cplx(-0.5, 0.3), cplx(0.2, 0.0));
    let f = gaussian_test_field(Vector3::new(0.1, -0.2, 0.05), 1.0, pol)?;
    let plane = PlaneQuadrature::default();
    let mut worst = 0.0f64;
    for (i, k) in sample_directions::<f64>(2, 10).iter().enumerate() {
        let p = -0.4 + 0.7 * i as f64;
        for kind in [IntertwiningKind::Curl, IntertwiningKind::Div, IntertwiningKind::Grad] {
            worst = worst.max(intertwining_check(&f, k, p, kind, &plane, DEFAULT_STEP, DEFAULT_STEP).residual);
        }
    }
    Ok(worst)
}

fn adjoint_composition() -> Result<f64> {
    let f = mode_field(3)?;
    let prof = radon_mode_analytic(&f);
    let c = 8.0 * PI * PI / (f.nu() * f.nu());
    let mut worst = 0.0f64;
    for x in sample_points::<f64>(10, 2.0, 11) {
        worst = worst.max(rel(&prof.adjoint(&x), &scale_re(&f.eval(&x), c)));
    }
    Ok(worst)
}

fn bs_lundquist() -> Result<f64> {
    let (f0, nu) = (1.0, 1.0);
    let field = lundquist(f0, nu)?;
    let mut worst = 0.0f64;
    for x_nu in [0.5, 2.0, 5.0] {
        let big_r = x_nu / nu;
        let theta: f64 = 0.4;
        let out = bs_lundquist_semianalytic(f0, nu, big_r, theta)?;
        let x = Vector3::new(big_r * theta.cos(), big_r * theta.sin(), 0.0);
        worst = worst.max(rel(&out.value, &scale_re(&field.eval(&x), 1.0 / nu)));
    }
    Ok(worst)
}

fn bs_i1() -> Result<f64> {
    let mut worst = 0.0f64;
    for x_nu in [0.5, 2.0, 5.0] {
        worst = worst.max(bs_lundquist_semianalytic::<f64>(1.0, 1.0, x_nu, 0.4)?.i1.abs());
    }
    Ok(worst)
}

fn bs_curl() -> Result<f64> {
    let q = VolumeQuadrature::default();
    let f = curl_gaussian_field(Vector3::zeros(), 1.0, Vector3::new(0.2, -0.5, 1.0))?;
    let bs = |y: &RVec3<f64>| bs_integral(&f, y, &q).map(|r| r.value).unwrap_or_else(|_| CVec3::from_element(cplx(f64::NAN, 0.0)));
    let x = Vector3::new(0.3, 0.2, -0.1);
    Ok(rel(&fd_curl(&bs, &x, 0.02), &f.eval(&x)))
}

fn rbs_eigen_atoms() -> Result<f64> {
    let mut worst = 0.0f64;
    for p in trkalian_profiles()? {
        let want = p.scaled(cplx(1.0 / p.eigenvalue(), 0.0));
        let scale = want.atoms.iter().map(|a| cnorm(&a.amplitude)).fold(0.0, f64::max);
        worst = worst.max(rbs_atoms(&p)?.max_difference(&want) / scale);
    }
    Ok(worst)
}

fn rbs_eigen_grid() -> Result<f64> {
    let nu = 1.1;
    let grid = PGrid::commensurate(nu, 2, 64)?;
    let g = lundquist_radon_profile(1.0, nu, 16)?.to_grid(grid);
    Ok(rbs_apply(&g)?.max_difference(&g.scaled(cplx(1.0 / nu, 0.0))) / g.max_abs())
}

fn rbs_gauge() -> Result<f64> {
    let mut worst = 0.0f64;
    for p in trkalian_profiles()? {
        let out = rbs_atoms(&gauge_atoms(&p))?;
        worst = worst.max(out.atoms.iter().map(|a| cnorm(&a.amplitude)).fold(0.0, f64::max));
    }
    Ok(worst)
}

fn rbs_left_inverse() -> Result<f64> {
    let grid = PGrid::commensurate(1.0, 3, 64)?;
    let v = |a: f64, b: f64, c: f64| Vector3::new(cplx(a, 0.0), cplx(b, 0.0), cplx(c, 0.0));
    let p = transverse_tone_profile(grid, sample_directions(4, 5), &[(1.0, v(1.0, 0.2, 0.0)), (-2.0, v(0.0, 0.5, 1.0))]);
    rbs_left_inverse_check(&p)
}

fn ck_single_mode() -> Result<f64> {
    let (nu, lambda) = (1.2, 1i8);
    let k0 = Direction::new(0.2, -0.3, 0.6)?;
    let choice = single_mode_choice(k0, lambda, nu, cplx(4.0 * PI * PI / (nu * nu * nu), 0.0));
    let g = ck_transform_solution(&choice, CkTerms::Toroidal)?;
    let want = radon_mode_analytic(&ModeField::single(lambda, nu, 1, k0, cplx(TAU.powf(1.5), 0.0))?);
    let chk = ck_transform_potential_check(&choice)?;
    Ok(g.max_difference(&want).max(chk.potential).max(chk.rbs))
}

fn ck_lundquist() -> Result<f64> {
    let (f0, nu, n) = (1.0f64, 1.0f64, 32);
    let want = lundquist_radon_profile(f0, nu, n)?;
    let pair = ck_transform_solution_sum(&lundquist_choices(f0, nu, n), CkTerms::Toroidal)?;
    let axial = ck_transform_solution(&lundquist_axial_choice(f0, nu, n), CkTerms::Full)?;
    Ok(pair.max_difference(&want).max(axial.max_difference(&want)))
}

fn ck_abc() -> Result<f64> {
    let (a, b, c, nu) = (1.0, 1.0, 1.0, 1.3);
    let (m1, m2) = abc_measures(a, b, c, 1, nu);
    let field = |x: &RVec3<f64>| reconstruct_physical(&m1, &m2, 1, nu, x).unwrap_or_else(|_| CVec3::from_element(cplx(f64::NAN, 0.0)));
    let abc = abc_field(a, b, c, nu)?;
    let mut worst = 0.0f64;
    for x in sample_points::<f64>(10, 2.0, 12) {
        let f = field(&x);
        worst = worst.max(rel(&complexify(&re_part(&f)), &abc.eval(&x)));
        worst = worst.max(curl_eigen_residual(&field, &x, nu, DEFAULT_STEP));
    }
    Ok(worst)
}

fn ck_residue() -> Result<f64> {
    let mut worst = 0.0f64;
    for nu in [0.5, 1.0, 3.0] {
        for i in 0..11 {
            let p = -5.0 + i as f64;
            for lambda in [1i8, -1] {
                for br in [ContourBranch::Plus, ContourBranch::Minus] {
                    let r = oscillator_residue(p, lambda, nu, br)?;
                    worst = worst.max((r - oscillator_contour(p, lambda, nu, br)?).norm() / r.norm());
                }
            }
        }
    }
    Ok(worst)
}

fn duality_antipodal() -> Result<f64> {
    let f = mode_field(3)?;
    let direct = radon_mode_analytic(&f.inverted());
    let reflected = radon_mode_analytic(&f).kappa_reflected();
    let mut worst = direct.max_difference(&reflected);
    // F′ = F(−x) carries μ′ = −μ: the Γ× eigenvalue flips sign
    worst = worst.max((direct.eigenvalue() + f.eigenvalue()).abs());
    worst = worst.max(direct.eigen_residual());
    Ok(worst)
}

fn duality_gauge_fix() -> Result<f64> {
    let (g, nu) = (0.8, 1.3);
    let f0 = nu * nu / g;
    let (a, _) = lundquist_potential(f0, nu)?;
    let field = lundquist(f0, nu)?;
    let u = axial_gauge_function(nu);
    let mut worst = 0.0f64;
    for x in sample_points::<f64>(10, 2.0, 13) {
        let a_prime = a.eval(&x) + gauge_shift(&u, g, &x);
        worst = worst.max(rel(&scale_re(&a_prime, nu), &field.eval(&x)));
    }
    Ok(worst)
}

fn duality_periodicity() -> Result<f64> {
    let g = 0.9;
    let l = gauge_period(g);
    let mut worst = 0.0f64;
    for n in 1..=3 {
        let u = axial_gauge_function(quantized_mass(n, g));
        for x in sample_points::<f64>(5, 2.0, 14) {
            worst = worst.max((u.value(&(x + Vector3::new(0.0, 0.0, l))) - u.value(&x)).norm());
        }
    }
    Ok(worst)
}

pub fn checks() -> Vec<Check> {
    macro_rules! check {
        ($name:expr, $anchor:expr, $tol:expr, $run:expr) => {
            Check { name: $name, anchor: $anchor, tolerance: $tol, run: $run }
        };
    }
    vec![
        check!("moses.frame_orthonormality", "<Q_a, Q_b> = delta_ab and sum_a Q_a Q_a^H = I", 1e-12, frame),
        check!("moses.eigenfunction_curl", "curl chi_lambda = lambda |k| chi_lambda", 1e-7, eigenfunction_curl),
        check!("fields.lundquist_curl", "curl F_L = nu F_L", 1e-6, lundquist_curl),
        check!("fields.ck_circular_curl", "curl F = sigma F, sigma^2 = nu^2 + k^2", 1e-6, ck_circular_curl),
        check!("fields.abc_curl", "curl F_abc = nu F_abc", 1e-6, abc_curl),
        check!("fields.mode16_curl", "curl F = mu nu F for 16 modes", 1e-6, mode_curl),
        check!("ampere.flux_agreement", "nu Q = surface flux = circulation = 2 pi F0 R J1(nu R)", 1e-6, ampere_agreement),
        check!("ampere.first_zero", "fluxes vanish at nu R = j_{1,1}", 1e-9, ampere_first_zero),
        check!("radon.round_trip", "R^{-1} R F = F for 1, 3, 16 modes", 1e-9, round_trip),
        check!("radon.hemisphere", "hemisphere inverse equal on H and its complement", 1e-9, hemisphere),
        check!("radon.eigenrelation_atoms", "Gamma x F^R = mu nu F^R on atoms", 1e-14, eigen_atoms),
        check!("radon.eigenrelation_grid", "Gamma x F^R = mu nu F^R on a commensurate grid", 1e-9, eigen_grid),
        check!("radon.intertwining", "R[curl F] = Gamma x R[F], R[div F] = Gamma . R[F], R[grad f] = Gamma R[f]", 1e-4, intertwining),
        check!("radon.adjoint_composition", "R^dagger R F_lambda = (8 pi^2 / nu^2) F_lambda", 1e-10, adjoint_composition),
        check!("biotsavart.lundquist", "BS[F_L] = F_L / nu", 1e-6, bs_lundquist),
        check!("biotsavart.odd_term", "I_1 = 0", 0.0, bs_i1),
        check!("biotsavart.curl_inverse", "curl BS[F] = F for div F = 0", 1e-3, bs_curl),
        check!("rbs.eigenrelation_atoms", "RBS[F^R] = F^R / (mu nu) on atoms", 1e-14, rbs_eigen_atoms),
        check!("rbs.eigenrelation_grid", "RBS[F^R] = F^R / nu on a grid", 1e-9, rbs_eigen_grid),
        check!("rbs.gauge_kernel", "RBS[Gamma s] = 0", 1e-14, rbs_gauge),
        check!("rbs.left_inverse", "RBS[Gamma x G] = G for transverse G", 1e-9, rbs_left_inverse),
        check!("ck.single_mode", "Debye potential reproduces the single-mode profile", 1e-12, ck_single_mode),
        check!("ck.lundquist", "Debye potentials reproduce the Lundquist ring profile", 1e-12, ck_lundquist),
        check!("ck.abc", "three-delta measures give the abc field with curl F = nu F", 1e-7, ck_abc),
        check!("ck.oscillator_residue", "contour quadrature equals residue e^{+-i lambda nu p}/(2 nu)", 1e-12, ck_residue),
        check!("duality.antipodal", "F'^R(p, kappa) = F^R(p, -kappa) with flipped eigenvalue", 1e-14, duality_antipodal),
        check!("duality.gauge_fix", "F_L = nu A' with A' = A - (i/g) grad ln U", 1e-9, duality_gauge_fix),
        check!("duality.periodicity", "U(z + 2 pi / g^2) = U(z) for nu = n g^2", 1e-12, duality_periodicity),
    ]
}

/// Runs the selected checks in registry order.
pub fn run_suite(opts: &VerifyOptions) -> Result<Vec<VerifyRecord>> {
    let all = checks();
    for (name, tol) in &opts.tolerances {
        if name != "*" && !all.iter().any(|c| c.name == name) {
            return Err(TrkError::InvalidParameter(format!("tolerance override for unknown record `{name}`")));
        }
        if !(*tol >= 0.0) {
            return Err(TrkError::InvalidParameter(format!("tolerance for `{name}` must be non-negative")));
        }
    }
    let selected: Vec<&Check> = all
        .iter()
        .filter(|c| opts.only.as_deref().is_none_or(|f| c.name.contains(f)))
        .collect();
    Ok(selected
        .into_iter()
        .map(|c| {
            let tolerance = opts
                .tolerances
                .get(c.name)
                .or_else(|| opts.tolerances.get("*"))
                .copied()
                .unwrap_or(c.tolerance);
            let residual = (c.run)().unwrap_or(f64::NAN);
            VerifyRecord {
                name: c.name.to_string(),
                anchor: c.anchor.to_string(),
                residual,
                tolerance,
                pass: residual <= tolerance,
            }
        })
        .collect())
}

pub fn report_json(records: &[VerifyRecord]) -> Value {
    let passed = records.iter().filter(|r| r.pass).count();
    json!({
        "records": records
            .iter()
            .map(|r| json!({
                "name": r.name,
                "anchor": r.anchor,
                "residual": num17(r.residual),
                "tolerance": num17(r.tolerance),
                "pass": r.pass,
            }))
            .collect::<Vec<_>>(),
        "passed": passed,
        "failed": records.len() - passed,
    })
}

pub fn report_text(records: &[VerifyRecord]) -> String {
    json_text(&report_json(records))
}
