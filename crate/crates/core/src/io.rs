//! Text serialization of profiles, samples and reports.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), which
//! round-trips `f64` exactly and keeps the output byte-stable.

use std::str::FromStr;

use serde_json::{json, Number, Value};

use crate::error::{Result, TrkError};
use crate::geometry::Direction;
use crate::radon::{AnalyticProfile, GridProfile, PGrid, RadonAtom};
use crate::scalar::{cplx, CVec3, Cplx};

pub const GRID_PROFILE_HEADER: [&str; 10] =
    ["p", "kappa_x", "kappa_y", "kappa_z", "re_x", "im_x", "re_y", "im_y", "re_z", "im_z"];

pub const FIELD_SAMPLES_HEADER: [&str; 9] = ["x", "y", "z", "re_x", "im_x", "re_y", "im_y", "re_z", "im_z"];

pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// JSON number carrying the 17-digit text verbatim; `null` when not finite.
pub fn num17(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&fmt17(x)).expect("formatted float is valid JSON"))
}

pub fn complex_json(c: Cplx<f64>) -> Value {
    json!([num17(c.re), num17(c.im)])
}

pub fn vector_json(v: &[f64; 3]) -> Value {
    json!([num17(v[0]), num17(v[1]), num17(v[2])])
}

/// Pretty JSON with a trailing newline.
pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn push_complex(row: &mut Vec<String>, v: &CVec3<f64>) {
    for c in v.iter() {
        row.push(fmt17(c.re));
        row.push(fmt17(c.im));
    }
}

fn csv_text(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV output is UTF-8")
}

/// One row per `(direction, p)`, direction-major.
pub fn grid_profile_csv(profile: &GridProfile<f64>) -> String {
    let rows = profile.directions.iter().enumerate().flat_map(move |(k, d)| {
        (0..profile.grid.n).map(move |i| {
            let mut row = vec![fmt17(profile.grid.p(i))];
            row.extend(d.components().iter().map(|c| fmt17(*c)));
            push_complex(&mut row, &profile.get(i, k));
            row
        })
    });
    csv_text(&GRID_PROFILE_HEADER, rows)
}

fn parse_row(rec: &csv::StringRecord, width: usize) -> Result<Vec<f64>> {
    if rec.len() != width {
        return Err(TrkError::Shape(format!("expected {width} columns, got {}", rec.len())));
    }
    rec.iter()
        .map(|s| s.trim().parse::<f64>().map_err(|e| TrkError::InvalidParameter(format!("bad number `{s}`: {e}"))))
        .collect()
}

fn complex3(v: &[f64]) -> CVec3<f64> {
    CVec3::new(cplx(v[0], v[1]), cplx(v[2], v[3]), cplx(v[4], v[5]))
}

/// Inverse of [`grid_profile_csv`]. Weights are not stored and come back as `None`.
pub fn parse_grid_profile_csv(text: &str) -> Result<GridProfile<f64>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| TrkError::InvalidParameter(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != GRID_PROFILE_HEADER {
        return Err(TrkError::Shape("unexpected grid profile header".into()));
    }
    let mut directions: Vec<Direction<f64>> = Vec::new();
    let mut ps: Vec<f64> = Vec::new();
    let mut samples = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| TrkError::InvalidParameter(e.to_string()))?;
        let v = parse_row(&rec, GRID_PROFILE_HEADER.len())?;
        let d = Direction::try_unit(&crate::scalar::RVec3::new(v[1], v[2], v[3]))?;
        if directions.last().is_none_or(|last| !last.approx_eq(&d, 1e-15)) {
            directions.push(d);
        }
        if directions.len() == 1 {
            ps.push(v[0]);
        }
        samples.push(complex3(&v[4..]));
    }
    let grid = PGrid::from_values(&ps)?;
    GridProfile::new(grid, directions, None, samples)
}

pub fn analytic_profile_json(profile: &AnalyticProfile<f64>) -> Value {
    let atoms: Vec<Value> = profile
        .atoms
        .iter()
        .map(|a| {
            json!({
                "direction": vector_json(&a.direction.components()),
                "frequency": num17(a.frequency),
                "amplitude": a.amplitude.iter().map(|c| complex_json(*c)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "nu": num17(profile.nu),
        "mu": profile.mu,
        "g": num17(profile.g),
        "atoms": atoms,
    })
}

fn as_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| TrkError::InvalidParameter(format!("`{what}` must be a number")))
}

fn as_array<'a>(v: &'a Value, len: usize, what: &str) -> Result<&'a Vec<Value>> {
    match v.as_array() {
        Some(a) if a.len() == len => Ok(a),
        _ => Err(TrkError::InvalidParameter(format!("`{what}` must be an array of {len}"))),
    }
}

/// Inverse of [`analytic_profile_json`].
pub fn parse_analytic_profile_json(v: &Value) -> Result<AnalyticProfile<f64>> {
    let nu = as_f64(&v["nu"], "nu")?;
    let mu = v["mu"].as_i64().filter(|m| m.abs() == 1).ok_or_else(|| TrkError::InvalidParameter("`mu` must be ±1".into()))?;
    let g = as_f64(&v["g"], "g")?;
    let atoms = v["atoms"]
        .as_array()
        .ok_or_else(|| TrkError::InvalidParameter("`atoms` must be an array".into()))?
        .iter()
        .map(|a| {
            let d = as_array(&a["direction"], 3, "direction")?;
            let direction = Direction::try_unit(&crate::scalar::RVec3::new(
                as_f64(&d[0], "direction")?,
                as_f64(&d[1], "direction")?,
                as_f64(&d[2], "direction")?,
            ))?;
            let amp = as_array(&a["amplitude"], 3, "amplitude")?;
            let mut c = [cplx(0.0, 0.0); 3];
            for (slot, pair) in c.iter_mut().zip(amp) {
                let p = as_array(pair, 2, "amplitude component")?;
                *slot = cplx(as_f64(&p[0], "re")?, as_f64(&p[1], "im")?);
            }
            Ok(RadonAtom {
                direction,
                frequency: as_f64(&a["frequency"], "frequency")?,
                amplitude: CVec3::new(c[0], c[1], c[2]),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AnalyticProfile { atoms, nu, mu: mu as i8, g })
}

/// Rows `x, y, z, Re/Im` of each component.
pub fn field_samples_csv(points: &[[f64; 3]], values: &[CVec3<f64>]) -> String {
    let rows = points.iter().zip(values).map(|(x, v)| {
        let mut row: Vec<String> = x.iter().map(|c| fmt17(*c)).collect();
        push_complex(&mut row, v);
        row
    });
    csv_text(&FIELD_SAMPLES_HEADER, rows)
}

/// Header and numeric rows of a CSV file with a fixed column count.
pub fn read_numeric_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r
        .headers()
        .map_err(|e| TrkError::InvalidParameter(e.to_string()))?
        .iter()
        .map(String::from)
        .collect();
    let rows = r
        .records()
        .map(|rec| parse_row(&rec.map_err(|e| TrkError::InvalidParameter(e.to_string()))?, header.len()))
        .collect::<Result<Vec<_>>>()?;
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::ModeField;
    use crate::radon::radon_mode_analytic;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 0.0, f64::MAX] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
            let j = serde_json::to_string(&num17(x)).unwrap();
            assert_eq!(j.parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(fmt17(1.0), "1.0000000000000000e0");
        assert_eq!(num17(f64::NAN), Value::Null);
    }

    #[test]
    fn analytic_profile_round_trip() {
        let f = ModeField::single(1, 1.3, 1, Direction::new(0.0, 0.6, 0.8).unwrap(), cplx(0.7, -0.2)).unwrap();
        let prof = radon_mode_analytic(&f);
        let text = json_text(&analytic_profile_json(&prof));
        let back = parse_analytic_profile_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, prof);
        assert_eq!(json_text(&analytic_profile_json(&back)), text);
    }

    #[test]
    fn grid_profile_round_trip() {
        let grid = PGrid::centered(4.0, 8).unwrap();
        let dirs = vec![Direction::ez(), Direction::new(0.6, 0.0, -0.8).unwrap()];
        let prof = GridProfile::from_fn(grid, dirs, None, |p: f64, d: &Direction<f64>| {
            CVec3::new(cplx(p, d.x()), cplx(-p * p, 0.25), cplx(d.z(), p.sin()))
        });
        let text = grid_profile_csv(&prof);
        assert_eq!(text.lines().count(), 17);
        assert!(text.starts_with("p,kappa_x,kappa_y,kappa_z,re_x,im_x"));
        assert_eq!(parse_grid_profile_csv(&text).unwrap(), prof);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(parse_grid_profile_csv("a,b\n1,2\n").is_err());
        assert!(parse_analytic_profile_json(&json!({"nu": 1.0, "mu": 2, "g": 1.0, "atoms": []})).is_err());
        assert!(parse_analytic_profile_json(&json!({"nu": 1.0, "mu": 1, "g": 1.0, "atoms": [{"direction": [0, 0]}]})).is_err());
    }
}
