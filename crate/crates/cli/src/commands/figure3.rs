use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use ipower_core::correlations::{ip_closed_form, qfi};
use ipower_core::ensembles::derive_seed;
use ipower_core::estimation::{run_experiment, EstimationRun};
use ipower_core::probes::{black_box_setting, flip_angle_grid, make_probe, ProbeKind};
use ipower_core::tolerances;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::format::{num, opt, rounded};
use crate::options::{Format, RunOptions};

pub const SWEEP_HEADER: &str = "s,k,p,f_exp_over_4,ip,var,nu_var_product,phi_hat,failed";

#[derive(Args, Debug)]
pub struct Figure3Args {
    /// Probe families to sweep.
    #[arg(long, value_delimiter = ',', default_values = ["Q", "C"])]
    pub probe: Vec<String>,
    /// Black-box settings to sweep.
    #[arg(long, value_delimiter = ',', default_values_t = [1u8, 2, 3], value_parser = clap::value_parser!(u8).range(1..=3))]
    pub setting: Vec<u8>,
    /// First flip angle in degrees; p = cos θ.
    #[arg(long, default_value_t = 0.0)]
    pub theta_start: f64,
    /// Last flip angle in degrees.
    #[arg(long, default_value_t = 90.0)]
    pub theta_stop: f64,
    /// Number of flip angles in the grid.
    #[arg(long, default_value_t = 37)]
    pub p_steps: usize,
    #[command(flatten)]
    pub run: RunOptions,
    /// Output directory.
    #[arg(long, default_value = "figure3")]
    pub out: PathBuf,
    /// Format of the three figure datasets; the sweep table is always CSV.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

struct Point {
    kind: ProbeKind,
    k: u8,
    p: f64,
    qfi_over_4: f64,
    ip: f64,
    run: EstimationRun<f64>,
}

impl Point {
    fn var_theory(&self) -> Option<f64> {
        (self.qfi_over_4 * 4.0 > tolerances::FLAT).then(|| 1.0 / (self.run.nu as f64 * 4.0 * self.qfi_over_4))
    }
}

fn validate(args: &Figure3Args) -> CliResult<Vec<(ProbeKind, u8, f64)>> {
    if args.p_steps == 0 {
        return Err(CliError::config("--p-steps", "the flip-angle grid needs at least one point"));
    }
    for (field, theta) in [("--theta-start", args.theta_start), ("--theta-stop", args.theta_stop)] {
        if !(0.0..=90.0).contains(&theta) {
            return Err(CliError::config(field, format!("{theta} is outside [0, 90] degrees")));
        }
    }
    let mut kinds = Vec::new();
    for label in &args.probe {
        let kind = match label.as_str() {
            "Q" | "q" => ProbeKind::Q,
            "C" | "c" => ProbeKind::C,
            other => return Err(CliError::config("--probe", format!("'{other}' is not an iso-purity family (Q or C)"))),
        };
        if !kinds.contains(&kind) {
            kinds.push(kind);
        }
    }
    let mut settings = args.setting.clone();
    settings.sort_unstable();
    settings.dedup();
    let ps = flip_angle_grid(args.theta_start, args.theta_stop, args.p_steps);
    let mut cases = Vec::new();
    for &kind in &kinds {
        for &k in &settings {
            for &p in &ps {
                cases.push((kind, k, p));
            }
        }
    }
    cases.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.total_cmp(&b.2)));
    cases.dedup_by(|a, b| a == b);
    Ok(cases)
}

pub fn run(args: &Figure3Args) -> CliResult {
    let cases = validate(args)?;
    let points = cases
        .par_iter()
        .enumerate()
        .map(|(i, &(kind, k, p))| -> CliResult<Point> {
            let family = kind.family(p);
            let rho = make_probe::<f64>(&family)?;
            let noise = args.run.noise(derive_seed(args.run.seed, i as u64));
            Ok(Point {
                kind,
                k,
                p,
                qfi_over_4: qfi(&rho, &black_box_setting(k)?)? / 4.0,
                ip: ip_closed_form(&rho)?,
                run: run_experiment(&family, k, args.run.phi_true, args.run.nu, noise)?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;

    fs::create_dir_all(&args.out).map_err(|e| CliError::config("--out", e))?;
    write(&args.out.join("sweep.csv"), &sweep_csv(&points))?;
    let runs: Vec<&EstimationRun<f64>> = points.iter().map(|pt| &pt.run).collect();
    write(&args.out.join("runs.json"), &serde_json::to_string_pretty(&runs).expect("runs serialise"))?;
    for (name, table) in [("a", dataset_a(&points)), ("b", dataset_b(&points)), ("c", dataset_c(&points))] {
        match args.format {
            Format::Csv => write(&args.out.join(format!("{name}.csv")), &table.csv())?,
            Format::Json => write(&args.out.join(format!("{name}.json")), &table.json())?,
        }
    }
    println!("{} sweep points written to {}", points.len(), args.out.display());
    Ok(())
}

fn write(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| CliError::config("--out", format!("{}: {e}", path.display())))
}

enum Cell {
    Text(String),
    Num(Option<f64>),
    Bool(bool),
}

struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Text(s) => s.clone(),
                    Cell::Num(x) => opt(*x),
                    Cell::Bool(b) => b.to_string(),
                })
                .collect();
            writeln!(out, "{}", cells.join(",")).expect("write to string");
        }
        out
    }

    fn json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj = self.columns.iter().zip(row).map(|(name, c)| {
                    let v = match c {
                        Cell::Text(s) => json!(s),
                        Cell::Num(x) => json!(x.map(rounded)),
                        Cell::Bool(b) => json!(b),
                    };
                    (name.to_string(), v)
                });
                Value::Object(obj.collect())
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("rows serialise") + "\n"
    }
}

fn key(pt: &Point) -> [Cell; 3] {
    [Cell::Text(pt.kind.to_string()), Cell::Text(pt.k.to_string()), Cell::Num(Some(pt.p))]
}

/// QFI/4 of each probe and setting, with the interferometric power.
fn dataset_a(points: &[Point]) -> Table {
    Table {
        columns: &["s", "k", "p", "qfi_over_4", "ip"],
        rows: points
            .iter()
            .map(|pt| key(pt).into_iter().chain([Cell::Num(Some(pt.qfi_over_4)), Cell::Num(Some(pt.ip))]).collect())
            .collect(),
    }
}

/// Reconstructed variances against `1/(ν F)`.
fn dataset_b(points: &[Point]) -> Table {
    Table {
        columns: &["s", "k", "p", "var", "nu_var_product", "var_theory"],
        rows: points
            .iter()
            .map(|pt| {
                key(pt)
                    .into_iter()
                    .chain([
                        Cell::Num(pt.run.phi_hat_var),
                        Cell::Num(pt.run.nu_var_product()),
                        Cell::Num(pt.var_theory()),
                    ])
                    .collect()
            })
            .collect(),
    }
}

/// Least-squares means against the true phase.
fn dataset_c(points: &[Point]) -> Table {
    Table {
        columns: &["s", "k", "p", "phi_true", "phi_hat", "failed"],
        rows: points
            .iter()
            .map(|pt| {
                key(pt)
                    .into_iter()
                    .chain([
                        Cell::Num(Some(pt.run.phi0)),
                        Cell::Num(Some(pt.run.phi_hat_mean)),
                        Cell::Bool(pt.run.failed),
                    ])
                    .collect()
            })
            .collect(),
    }
}

fn sweep_csv(points: &[Point]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for pt in points {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            pt.kind,
            pt.k,
            num(pt.p),
            num(pt.run.f_exp / 4.0),
            num(pt.ip),
            opt(pt.run.phi_hat_var),
            opt(pt.run.nu_var_product()),
            num(pt.run.phi_hat_mean),
            pt.run.failed
        )
        .expect("write to string");
    }
    out
}
