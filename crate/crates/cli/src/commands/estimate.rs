use std::f64::consts::FRAC_PI_4;
use std::fs;
use std::path::PathBuf;

use clap::Args;
use ipower_core::estimation::{adaptive_localize, run_experiment, EstimationRun};
use ipower_core::probes::{black_box_setting, make_probe};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::format::{num, opt, rounded};
use crate::options::{ProbeOptions, ReportFormat, RunOptions};

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub probe: ProbeOptions,
    #[command(flatten)]
    pub run: RunOptions,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    /// Write the report to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AdaptiveArgs {
    #[command(flatten)]
    pub probe: ProbeOptions,
    /// True phase in radians.
    #[arg(long, default_value_t = FRAC_PI_4, allow_hyphen_values = true)]
    pub phi_true: f64,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_iters: u64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

fn text_report(run: &EstimationRun<f64>) -> String {
    let list = |v: &[f64]| v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(",");
    let lines = [
        format!("probe = {}", run.probe_label),
        format!("p = {}", opt(run.p)),
        format!("setting = {}", run.setting_k),
        format!("phi_true = {}", num(run.phi0)),
        format!("nu = {}", run.nu),
        format!("noise_sigma = {}", num(run.noise_sigma)),
        format!("seed = {}", run.seed),
        format!("d_meas = {}", list(&run.d_meas)),
        format!("l_values = {}", list(&run.l_values)),
        format!("f_exp = {}", num(run.f_exp)),
        format!("phi_hat = {}", num(run.phi_hat_mean)),
        format!("var = {}", opt(run.phi_hat_var)),
        format!("nu_var_product = {}", opt(run.nu_var_product())),
        format!("cramer_rao_product = {}", opt(run.cramer_rao_product())),
        format!("failed = {}", run.failed),
    ];
    lines.join("\n") + "\n"
}

pub fn run(args: &EstimateArgs) -> CliResult {
    let family = args.probe.family()?;
    let run = run_experiment::<f64>(&family, args.probe.setting, args.run.phi_true, args.run.nu, args.run.noise(args.run.seed))?;
    let report = match args.format {
        ReportFormat::Json => run.to_json() + "\n",
        ReportFormat::Text => text_report(&run),
    };
    match &args.out {
        Some(path) => fs::write(path, report).map_err(|e| CliError::config("--out", format!("{}: {e}", path.display()))),
        None => {
            print!("{report}");
            Ok(())
        }
    }
}

pub fn run_adaptive(args: &AdaptiveArgs) -> CliResult {
    let family = args.probe.family()?;
    let rho = make_probe::<f64>(&family)?;
    let h = black_box_setting::<f64>(args.probe.setting)?;
    let trace = adaptive_localize(&rho, &h, args.phi_true, args.max_iters as usize)?;
    match args.format {
        ReportFormat::Text => {
            for (n, phi) in trace.trials.iter().enumerate() {
                println!("{} {}", n + 1, num(*phi));
            }
            println!("converged = {}", trace.converged);
            if let Some(n) = trace.converged_at {
                println!("converged_at = {n}");
            }
        }
        ReportFormat::Json => {
            let report = json!({
                "trials": trace.trials.iter().map(|x| rounded(*x)).collect::<Vec<_>>(),
                "converged": trace.converged,
                "converged_at": trace.converged_at,
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("trace serialises"));
        }
    }
    Ok(())
}
