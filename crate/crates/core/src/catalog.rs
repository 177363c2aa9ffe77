//! Named fields with JSON parameters, as used by the command-line tool.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Result, TrkError};
use crate::fields::{
    abc_field, ck_circular, curl_gaussian_field, gaussian_test_field, lundquist, CkCircularParams, HelicityMode,
    ModeField, PlaneWave, PlaneWaveSum, SampledField,
};
use crate::geometry::Direction;
use crate::radon::{lundquist_radon_profile, radon_mode_analytic, radon_of_plane_waves, AnalyticProfile};
use crate::scalar::{cplx, CVec3, RVec3};

/// A catalog entry.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogInfo {
    pub name: &'static str,
    pub description: &'static str,
    pub example: Value,
    /// Whether the field is a curl eigenfield with an exact atom transform.
    pub trkalian: bool,
}

pub fn catalog() -> Vec<CatalogInfo> {
    vec![
        CatalogInfo {
            name: "lundquist",
            description: "F0 [J1(nu r) e_theta + J0(nu r) e_z]; ring transform with `ring` atoms",
            example: json!({"F0": 1.0, "nu": 1.0, "ring": 64}),
            trkalian: true,
        },
        CatalogInfo {
            name: "mode",
            description: "finite superposition of helicity modes sharing (nu, mu, g)",
            example: json!({"nu": 1.0, "mu": 1, "g": 1.0,
                "modes": [{"lambda": 1, "kappa": [0.0, 0.0, 1.0], "amplitude": [1.0, 0.0]}]}),
            trkalian: true,
        },
        CatalogInfo {
            name: "abc",
            description: "(a sin nu z + c cos nu y, b sin nu x + a cos nu z, c sin nu y + b cos nu x)",
            example: json!({"a": 1.0, "b": 1.0, "c": 1.0, "nu": 1.0}),
            trkalian: true,
        },
        CatalogInfo {
            name: "ck_circular",
            description: "circular-cylindrical Chandrasekhar-Kendall field with Psi = A J_m(nu r) e^{i m theta - i k z}",
            example: json!({"m": 1, "k": 0.5, "nu": 1.0, "amplitude": 1.0}),
            trkalian: false,
        },
        CatalogInfo {
            name: "gaussian",
            description: "polarization exp(-|x - center|^2 / width^2); polarization as [x,y,z] or [[re,im],..]",
            example: json!({"center": [0.0, 0.0, 0.0], "width": 1.0, "polarization": [1.0, 0.0, 0.0]}),
            trkalian: false,
        },
        CatalogInfo {
            name: "curl_gaussian",
            description: "divergence-free probe grad(G) x c with a Gaussian G",
            example: json!({"center": [0.0, 0.0, 0.0], "width": 1.0, "c": [0.0, 0.0, 1.0]}),
            trkalian: false,
        },
    ]
}

/// A built field, with its exact transform when one exists.
#[derive(Debug, Clone)]
pub struct CatalogField {
    pub field: SampledField<f64>,
    pub analytic: Option<AnalyticProfile<f64>>,
}

fn default_one() -> f64 {
    1.0
}

fn default_ring() -> usize {
    64
}

fn default_mu() -> i8 {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LundquistParams {
    #[serde(rename = "F0", default = "default_one")]
    f0: f64,
    #[serde(default = "default_one")]
    nu: f64,
    #[serde(default = "default_ring")]
    ring: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeSpec {
    lambda: i8,
    kappa: [f64; 3],
    amplitude: [f64; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModeParams {
    nu: f64,
    #[serde(default = "default_mu")]
    mu: i8,
    #[serde(default = "default_one")]
    g: f64,
    modes: Vec<ModeSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AbcParams {
    #[serde(default = "default_one")]
    a: f64,
    #[serde(default = "default_one")]
    b: f64,
    #[serde(default = "default_one")]
    c: f64,
    #[serde(default = "default_one")]
    nu: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CkParams {
    #[serde(default)]
    m: u32,
    #[serde(default)]
    k: f64,
    #[serde(default = "default_one")]
    nu: f64,
    #[serde(default = "default_one")]
    amplitude: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Polarization {
    Real([f64; 3]),
    Complex([[f64; 2]; 3]),
}

impl Polarization {
    fn vector(&self) -> CVec3<f64> {
        match self {
            Self::Real(v) => CVec3::new(cplx(v[0], 0.0), cplx(v[1], 0.0), cplx(v[2], 0.0)),
            Self::Complex(v) => CVec3::new(cplx(v[0][0], v[0][1]), cplx(v[1][0], v[1][1]), cplx(v[2][0], v[2][1])),
        }
    }
}

fn default_polarization() -> Polarization {
    Polarization::Real([1.0, 0.0, 0.0])
}

fn default_axis() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GaussianParams {
    #[serde(default)]
    center: [f64; 3],
    #[serde(default = "default_one")]
    width: f64,
    #[serde(default = "default_polarization")]
    polarization: Polarization,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurlGaussianParams {
    #[serde(default)]
    center: [f64; 3],
    #[serde(default = "default_one")]
    width: f64,
    #[serde(default = "default_axis")]
    c: [f64; 3],
}

fn parse<P: for<'de> Deserialize<'de>>(name: &str, params: &Value) -> Result<P> {
    let v = if params.is_null() { json!({}) } else { params.clone() };
    serde_json::from_value(v).map_err(|e| TrkError::InvalidParameter(format!("{name}: {e}")))
}

fn rvec(v: [f64; 3]) -> RVec3<f64> {
    RVec3::new(v[0], v[1], v[2])
}

/// The abc field written as six plane waves; each trigonometric pair
/// `s sin(νt) e + s cos(νt) e′` splits into `e^{±iνt}` terms.
pub fn abc_plane_waves(a: f64, b: f64, c: f64, nu: f64) -> PlaneWaveSum<f64> {
    let e = [RVec3::x(), RVec3::y(), RVec3::z()];
    // (amplitude, wave axis, sine component, cosine component)
    let pairs = [(a, 2, 0, 1), (b, 0, 1, 2), (c, 1, 2, 0)];
    let mut terms = Vec::with_capacity(6);
    for (s, axis, sin_c, cos_c) in pairs {
        for sign in [1.0, -1.0] {
            let mut v = CVec3::zeros();
            v[sin_c] = cplx(0.0, -sign * s / 2.0);
            v[cos_c] = cplx(s / 2.0, 0.0);
            terms.push(PlaneWave { k: e[axis] * (sign * nu), c: v });
        }
    }
    PlaneWaveSum { terms }
}

fn mode_field(p: &ModeParams) -> Result<ModeField<f64>> {
    let modes = p
        .modes
        .iter()
        .map(|m| {
            Ok(HelicityMode {
                lambda: m.lambda,
                kappa: Direction::from_vector(&rvec(m.kappa))?,
                amplitude: cplx(m.amplitude[0], m.amplitude[1]),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ModeField::new(p.nu, p.mu, p.g, modes)
}

/// Builds the named field from JSON parameters (missing keys take the
/// example defaults); unknown names give [`TrkError::UnknownField`].
pub fn build(name: &str, params: &Value) -> Result<CatalogField> {
    match name {
        "lundquist" => {
            let p: LundquistParams = parse(name, params)?;
            Ok(CatalogField {
                field: lundquist(p.f0, p.nu)?,
                analytic: Some(lundquist_radon_profile(p.f0, p.nu, p.ring)?),
            })
        }
        "mode" => {
            let p: ModeParams = parse(name, params)?;
            let f = mode_field(&p)?;
            Ok(CatalogField { field: f.to_sampled(), analytic: Some(radon_mode_analytic(&f)) })
        }
        "abc" => {
            let p: AbcParams = parse(name, params)?;
            let waves = abc_plane_waves(p.a, p.b, p.c, p.nu);
            Ok(CatalogField {
                field: abc_field(p.a, p.b, p.c, p.nu)?,
                analytic: Some(radon_of_plane_waves(&waves, p.nu, 1)?),
            })
        }
        "ck_circular" => {
            let p: CkParams = parse(name, params)?;
            let params = CkCircularParams { m: p.m, k: p.k, nu: p.nu, amplitude: p.amplitude };
            Ok(CatalogField { field: ck_circular(params)?, analytic: None })
        }
        "gaussian" => {
            let p: GaussianParams = parse(name, params)?;
            Ok(CatalogField {
                field: gaussian_test_field(rvec(p.center), p.width, p.polarization.vector())?,
                analytic: None,
            })
        }
        "curl_gaussian" => {
            let p: CurlGaussianParams = parse(name, params)?;
            Ok(CatalogField { field: curl_gaussian_field(rvec(p.center), p.width, rvec(p.c))?, analytic: None })
        }
        _ => Err(TrkError::UnknownField(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radon::inverse_radon_analytic;
    use crate::scalar::cnorm;

    #[test]
    fn every_entry_builds_from_its_example() {
        for info in catalog() {
            let f = build(info.name, &info.example).unwrap();
            assert_eq!(f.analytic.is_some(), info.trkalian, "{}", info.name);
            if let Some(ev) = f.field.meta.eigenvalue {
                let res = f.field.curl_residual(ev, 5, 1.5, 1e-3, 3);
                assert!(res < 1e-6, "{}: {res:e}", info.name);
            }
        }
    }

    #[test]
    fn abc_plane_waves_match_closed_form() {
        let (a, b, c, nu) = (0.7, -1.1, 0.4, 1.9);
        let waves = abc_plane_waves(a, b, c, nu);
        let f = abc_field(a, b, c, nu).unwrap();
        for x in crate::geometry::sample_points::<f64>(8, 3.0, 11) {
            assert!(cnorm(&(waves.eval(&x) - f.eval(&x))) < 1e-14);
        }
        let prof = build("abc", &json!({"a": a, "b": b, "c": c, "nu": nu})).unwrap().analytic.unwrap();
        assert_eq!(prof.eigen_residual(), 0.0);
        let x = RVec3::new(0.3, -0.4, 1.2);
        assert!(cnorm(&(inverse_radon_analytic(&prof, &x) - f.eval(&x))) < 1e-12);
    }

    #[test]
    fn bad_input_is_reported() {
        assert_eq!(build("nope", &json!({})).unwrap_err(), TrkError::UnknownField("nope".into()));
        assert!(matches!(build("lundquist", &json!({"F0": "x"})), Err(TrkError::InvalidParameter(_))));
        assert!(matches!(build("lundquist", &json!({"typo": 1})), Err(TrkError::InvalidParameter(_))));
        assert!(build("gaussian", &json!({"polarization": [[1, 0], [0, 1], [0, 0]]})).is_ok());
        assert!(matches!(build("mode", &json!({"nu": -1.0, "modes": [{"lambda": 1, "kappa": [0, 0, 1], "amplitude": [1, 0]}]})),
            Err(TrkError::SupportCondition(_))));
    }
}
