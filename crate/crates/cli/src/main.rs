//! `trk`: catalog listing, field sampling, transforms, verification and plot scripts.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use trk_core::catalog::{self, CatalogField};
use trk_core::io::{
    analytic_profile_json, field_samples_csv, fmt17, grid_profile_csv, json_text, num17, parse_grid_profile_csv,
    read_numeric_csv,
};
use trk_core::quadrature::{PlaneQuadrature, SphereQuadrature};
use trk_core::radon::{radon_grid, PGrid};
use trk_core::verify::{report_text, run_suite, VerifyOptions};
use trk_core::TrkError;

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_COMPUTE: u8 = 3;
const STDERR_WARNINGS: usize = 5;

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<TrkError> for CliError {
    fn from(e: TrkError) -> Self {
        let code = match e {
            TrkError::UnknownField(_) | TrkError::InvalidParameter(_) | TrkError::SupportCondition(_) => EXIT_USAGE,
            TrkError::GridSize(_) | TrkError::QuadratureOrder(_) | TrkError::NonUniformGrid | TrkError::Shape(_) => EXIT_USAGE,
            _ => EXIT_COMPUTE,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self { code: EXIT_COMPUTE, message: format!("i/o error: {e}") }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "trk", version, about = "Trkalian fields and their Radon transforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the named fields and their example parameters.
    Catalog,
    /// Sample a field on a Cartesian grid.
    FieldEval(FieldEvalArgs),
    /// Radon transform of a field: exact atoms when available, numeric grid otherwise.
    Radon(RadonArgs),
    /// Run the invariant suite and write a JSON report.
    Verify(VerifyArgs),
    /// Write plotting scripts and data files from earlier outputs.
    Plot(PlotArgs),
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    field: String,
    /// Field parameters as a JSON object.
    #[arg(long, default_value = "{}")]
    params: String,
}

#[derive(Args)]
struct FieldEvalArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// `x0:x1:n` per axis, comma separated; a single range applies to all three axes.
    #[arg(long, default_value = "-2:2:21", allow_hyphen_values = true)]
    grid: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RadonMode {
    Auto,
    Analytic,
    Numeric,
}

#[derive(Args)]
struct RadonArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_enum, default_value = "auto")]
    mode: RadonMode,
    /// Periodic p-grid `p0:p1:n`, samples `p0 + i (p1 - p0)/n`, `n` a power of two.
    #[arg(long, default_value = "-4:4:32", allow_hyphen_values = true)]
    grid: String,
    /// Sphere rule `npolar,nazimuth` for the numeric transform.
    #[arg(long, default_value = "8,16")]
    quad: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Override a record tolerance, `NAME=VALUE`; `*` names every record.
    #[arg(long = "tol")]
    tol: Vec<String>,
    /// Run only records whose name contains this text.
    #[arg(long)]
    only: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlotKind {
    /// Radial J0/J1 profile from a Lundquist `field-eval` CSV.
    LundquistRadial,
    /// Heatmap of |F^R| over (p, psi) from a numeric `radon` CSV.
    RadonHeatmap,
    /// Bar chart of residuals and tolerances from a `verify` report.
    VerifyBars,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long, value_enum)]
    kind: PlotKind,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::from(e.error))?;
    Ok(())
}

fn prepare_out(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::usage(format!("cannot create output directory {}: {e}", dir.display())))
}

fn parse_params(text: &str) -> CliResult<Value> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::usage(format!("malformed --params JSON: {e}")))?;
    if !v.is_object() {
        return Err(CliError::usage("--params must be a JSON object"));
    }
    Ok(v)
}

fn build_field(args: &FieldArgs) -> CliResult<(CatalogField, Value)> {
    let params = parse_params(&args.params)?;
    Ok((catalog::build(&args.field, &params)?, params))
}

fn parse_range(text: &str) -> CliResult<(f64, f64, usize)> {
    let bad = || CliError::usage(format!("bad range `{text}`, expected x0:x1:n"));
    let parts: Vec<&str> = text.trim().split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].parse().map_err(|_| bad())?;
    let b: f64 = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    Ok((a, b, n))
}

/// Inclusive axis samples.
fn axis(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn parse_box(text: &str) -> CliResult<[Vec<f64>; 3]> {
    let ranges = text.split(',').map(parse_range).collect::<CliResult<Vec<_>>>()?;
    let r = match ranges.len() {
        1 => [ranges[0]; 3],
        3 => [ranges[0], ranges[1], ranges[2]],
        n => return Err(CliError::usage(format!("--grid needs 1 or 3 ranges, got {n}"))),
    };
    Ok(r.map(|(a, b, n)| axis(a, b, n)))
}

fn parse_pgrid(text: &str) -> CliResult<PGrid<f64>> {
    let (a, b, n) = parse_range(text)?;
    if b <= a {
        return Err(CliError::usage("p-grid needs p1 > p0"));
    }
    Ok(PGrid::new(a, (b - a) / n as f64, n)?)
}

fn parse_quad(text: &str) -> CliResult<SphereQuadrature<f64>> {
    let bad = || CliError::usage(format!("bad --quad `{text}`, expected npolar,nazimuth"));
    let parts: Vec<usize> = text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<CliResult<_>>()?;
    if parts.len() != 2 {
        return Err(bad());
    }
    Ok(SphereQuadrature::new(parts[0], parts[1], true)?)
}

fn opt_num(x: Option<f64>) -> Value {
    x.map(num17).unwrap_or(Value::Null)
}

fn cmd_catalog() -> CliResult<u8> {
    let entries: Vec<Value> = catalog::catalog()
        .into_iter()
        .map(|c| json!({"name": c.name, "description": c.description, "example": c.example, "trkalian": c.trkalian}))
        .collect();
    print!("{}", json_text(&Value::Array(entries)));
    Ok(0)
}

fn cmd_field_eval(args: &FieldEvalArgs) -> CliResult<u8> {
    let (built, params) = build_field(&args.field)?;
    let [xs, ys, zs] = parse_box(&args.grid)?;
    prepare_out(&args.out)?;
    let mut points = Vec::with_capacity(xs.len() * ys.len() * zs.len());
    for &x in &xs {
        for &y in &ys {
            for &z in &zs {
                points.push([x, y, z]);
            }
        }
    }
    use rayon::prelude::*;
    let values: Vec<_> = points.par_iter().map(|p| built.field.eval(&trk_core::Vec3::new(p[0], p[1], p[2]))).collect();
    let meta = &built.field.meta;
    let sidecar = json!({
        "field": args.field.field,
        "params": params,
        "eigenvalue": opt_num(meta.eigenvalue),
        "nu": opt_num(meta.eigenvalue.zip(meta.mu).map(|(e, m)| e * m as f64)),
        "lambda": meta.helicity,
        "mu": meta.mu,
        "grid": args.grid,
        "rows": points.len(),
    });
    write_atomic(&args.out.join("field.csv"), &field_samples_csv(&points, &values))?;
    write_atomic(&args.out.join("field.json"), &json_text(&sidecar))?;
    eprintln!("wrote {} rows to {}", points.len(), args.out.join("field.csv").display());
    Ok(0)
}

fn cmd_radon(args: &RadonArgs) -> CliResult<u8> {
    let (built, params) = build_field(&args.field)?;
    let analytic = match (args.mode, &built.analytic) {
        (RadonMode::Numeric, _) => None,
        (_, Some(p)) => Some(p.clone()),
        (RadonMode::Analytic, None) => {
            return Err(CliError::usage(format!("field `{}` has no exact transform", args.field.field)));
        }
        (RadonMode::Auto, None) => None,
    };
    prepare_out(&args.out)?;
    let sidecar = if let Some(profile) = analytic {
        write_atomic(&args.out.join("radon.json"), &json_text(&analytic_profile_json(&profile)))?;
        json!({
            "field": args.field.field,
            "params": params,
            "mode": "analytic",
            "output": "radon.json",
            "atoms": profile.atoms.len(),
            "eigenvalue": num17(profile.eigenvalue()),
            "warnings": [],
        })
    } else {
        let grid = parse_pgrid(&args.grid)?;
        let quad = parse_quad(&args.quad)?;
        let (profile, warnings) = radon_grid(&built.field, grid, &quad, &PlaneQuadrature::default());
        for w in warnings.iter().take(STDERR_WARNINGS) {
            eprintln!("warning: {w}");
        }
        if warnings.len() > STDERR_WARNINGS {
            eprintln!("warning: {} more in radon.meta.json", warnings.len() - STDERR_WARNINGS);
        }
        let parity = profile.parity_residual();
        let scale = profile.max_abs().max(1e-300);
        write_atomic(&args.out.join("radon.csv"), &grid_profile_csv(&profile))?;
        json!({
            "field": args.field.field,
            "params": params,
            "mode": "numeric",
            "output": "radon.csv",
            "grid": args.grid,
            "quad": args.quad,
            "parity_residual": opt_num(parity.map(|r| r / scale)),
            "parity_pass": parity.map(|r| r / scale <= 1e-8),
            "warnings": warnings,
        })
    };
    write_atomic(&args.out.join("radon.meta.json"), &json_text(&sidecar))?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> CliResult<u8> {
    let mut tolerances = BTreeMap::new();
    for t in &args.tol {
        let (name, value) = t.split_once('=').ok_or_else(|| CliError::usage(format!("bad --tol `{t}`, expected NAME=VALUE")))?;
        let v: f64 = value.trim().parse().map_err(|_| CliError::usage(format!("bad tolerance value in `{t}`")))?;
        tolerances.insert(name.trim().to_string(), v);
    }
    let records = run_suite(&VerifyOptions { tolerances, only: args.only.clone() })?;
    prepare_out(&args.out)?;
    write_atomic(&args.out.join("verify.json"), &report_text(&records))?;
    let failed: Vec<_> = records.iter().filter(|r| !r.pass).collect();
    for r in &failed {
        eprintln!("FAIL {}: residual {} > tolerance {}", r.name, fmt17(r.residual), fmt17(r.tolerance));
    }
    eprintln!("{} of {} records passed", records.len() - failed.len(), records.len());
    Ok(if failed.is_empty() { 0 } else { EXIT_FAILURE })
}

fn read_input(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read input {}: {e}", path.display())))
}

fn column(header: &[String], name: &str) -> CliResult<usize> {
    header.iter().position(|h| h == name).ok_or_else(|| CliError::usage(format!("input has no `{name}` column")))
}

fn table(rows: &[Vec<f64>]) -> String {
    let mut s = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().map(|v| fmt17(*v)).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

fn cmd_plot(args: &PlotArgs) -> CliResult<u8> {
    let text = read_input(&args.input)?;
    let (data, script, stem) = match args.kind {
        PlotKind::LundquistRadial => {
            let (header, rows) = read_numeric_csv(&text)?;
            let sidecar = args.input.with_extension("json");
            let meta: Value = serde_json::from_str(&read_input(&sidecar)?)
                .map_err(|e| CliError::usage(format!("malformed sidecar {}: {e}", sidecar.display())))?;
            let f0 = meta["params"]["F0"].as_f64().unwrap_or(1.0);
            let ix = [column(&header, "x")?, column(&header, "y")?, column(&header, "re_x")?, column(&header, "re_y")?, column(&header, "re_z")?];
            let mut radial: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| {
                    let (x, y) = (r[ix[0]], r[ix[1]]);
                    let rho = x.hypot(y);
                    let f_theta = if rho > 0.0 { (-y * r[ix[2]] + x * r[ix[3]]) / rho } else { 0.0 };
                    vec![rho, r[ix[4]] / f0, f_theta / f0]
                })
                .collect();
            radial.sort_by(|a, b| a[0].total_cmp(&b[0]));
            radial.dedup_by(|a, b| a[0] == b[0]);
            let script = "set xlabel 'r'\nset ylabel 'F / F0'\nset key top right\n\
plot 'lundquist_radial.dat' using 1:2 with lines title 'J0 (F_z / F0)', \\\n     'lundquist_radial.dat' using 1:3 with lines title 'J1 (F_theta / F0)'\n";
            (format!("# r J0 J1\n{}", table(&radial)), script.to_string(), "lundquist_radial")
        }
        PlotKind::RadonHeatmap => {
            let profile = parse_grid_profile_csv(&text)?;
            let mut rows = Vec::with_capacity(profile.samples.len());
            for (k, d) in profile.directions.iter().enumerate() {
                let psi = d.y().atan2(d.x());
                for i in 0..profile.grid.n {
                    rows.push(vec![profile.grid.p(i), psi, d.z(), trk_core::scalar::cnorm(&profile.get(i, k))]);
                }
            }
            let script = "set xlabel 'p'\nset ylabel 'psi'\nset cblabel '|F^R|'\n\
plot 'radon_heatmap.dat' using 1:2:4 with points pointtype 5 palette notitle\n";
            (format!("# p psi kappa_z abs\n{}", table(&rows)), script.to_string(), "radon_heatmap")
        }
        PlotKind::VerifyBars => {
            let report: Value =
                serde_json::from_str(&text).map_err(|e| CliError::usage(format!("malformed report: {e}")))?;
            let records = report["records"].as_array().ok_or_else(|| CliError::usage("report has no `records` array"))?;
            let mut data = String::from("# index name residual tolerance\n");
            for (i, r) in records.iter().enumerate() {
                let name = r["name"].as_str().unwrap_or("?");
                let residual = r["residual"].as_f64().unwrap_or(f64::NAN);
                let tol = r["tolerance"].as_f64().unwrap_or(f64::NAN);
                data.push_str(&format!("{i} {name} {} {}\n", fmt17(residual.max(1e-18)), fmt17(tol.max(1e-18))));
            }
            let script = "set logscale y\nset style data histograms\nset style fill solid 0.6\nset xtics rotate by -60\n\
set ylabel 'residual'\nplot 'verify_bars.dat' using 3:xtic(2) title 'residual', '' using 4 title 'tolerance'\n";
            (data, script.to_string(), "verify_bars")
        }
    };
    prepare_out(&args.out)?;
    write_atomic(&args.out.join(format!("{stem}.dat")), &data)?;
    write_atomic(&args.out.join(format!("{stem}.gp")), &script)?;
    Ok(0)
}

fn configure_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("TRK_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| CliError::usage(format!("TRK_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError { code: EXIT_COMPUTE, message: e.to_string() })
}

fn run(cli: Cli) -> CliResult<u8> {
    configure_threads()?;
    match &cli.command {
        Command::Catalog => cmd_catalog(),
        Command::FieldEval(a) => cmd_field_eval(a),
        Command::Radon(a) => cmd_radon(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Plot(a) => cmd_plot(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-1:1:3").unwrap(), (-1.0, 1.0, 3));
        assert!(parse_range("1:2").is_err());
        assert!(parse_range("a:2:3").is_err());
        assert_eq!(axis(-1.0, 1.0, 3), vec![-1.0, 0.0, 1.0]);
        let b = parse_box("-1:1:21").unwrap();
        assert_eq!(b[2].len(), 21);
        assert!(parse_box("0:1:2,0:1:2").is_err());
    }

    #[test]
    fn p_grids_and_quadratures() {
        let g = parse_pgrid("-4:4:32").unwrap();
        assert_eq!((g.p0, g.dp, g.n), (-4.0, 0.25, 32));
        assert_eq!(parse_pgrid("-4:4:30").unwrap_err().code, EXIT_USAGE);
        assert_eq!(parse_quad("8,16").unwrap().len(), 128);
        assert!(parse_quad("8").is_err());
    }

    #[test]
    fn params_must_be_objects() {
        assert_eq!(parse_params("{").unwrap_err().code, EXIT_USAGE);
        assert_eq!(parse_params("[1]").unwrap_err().code, EXIT_USAGE);
        assert!(parse_params("{\"F0\": 2}").is_ok());
    }

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.txt");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
