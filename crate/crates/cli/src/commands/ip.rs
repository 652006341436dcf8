use std::fs;
use std::path::PathBuf;

use clap::Args;
use ipower_core::correlations::{ip_closed_form, ip_oracle, lqu, worst_case_direction, SphereGrid};
use ipower_core::qmat::StateFile;
use ipower_core::DensityMatrix64;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::format::{num, rounded};
use crate::options::ReportFormat;

#[derive(Args, Debug)]
pub struct IpArgs {
    /// State file: {"dims":[dA,dB],"re":[[...]],"im":[[...]]}.
    pub state: PathBuf,
    /// Polar steps of the oracle grid.
    #[arg(long, default_value_t = 256)]
    pub theta_steps: usize,
    /// Azimuthal steps of the oracle grid.
    #[arg(long, default_value_t = 512)]
    pub phi_steps: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

fn load(args: &IpArgs) -> CliResult<DensityMatrix64> {
    let text = fs::read_to_string(&args.state).map_err(|e| CliError::config("state", format!("{}: {e}", args.state.display())))?;
    let file: StateFile = serde_json::from_str(&text).map_err(|e| CliError::config("state", e))?;
    let rho = file.into_state::<f64>().map_err(|e| CliError::config("state", e))?;
    match rho.dims().0 {
        2 => Ok(rho),
        d => Err(CliError::NotQubit(d)),
    }
}

pub fn run(args: &IpArgs) -> CliResult {
    let grid = SphereGrid::new(args.theta_steps, args.phi_steps).map_err(|e| {
        let field = if args.theta_steps < SphereGrid::MIN_STEPS { "--theta-steps" } else { "--phi-steps" };
        CliError::config(field, e)
    })?;
    let rho = load(args)?;
    let ip = ip_closed_form(&rho)?;
    let u = lqu(&rho)?;
    let direction = worst_case_direction(&rho)?;
    let oracle = ip_oracle(&rho, grid)?;
    let hierarchy = ip >= u - 1e-10;
    match args.format {
        ReportFormat::Text => {
            let vec3 = |v: [f64; 3]| v.map(num).join(",");
            println!("ip = {}", num(ip));
            println!("lqu = {}", num(u));
            println!("worst_direction = {}", vec3(direction));
            println!("oracle_value = {}", num(oracle.value));
            println!("oracle_theta = {}", num(oracle.theta));
            println!("oracle_phi = {}", num(oracle.phi));
            println!("oracle_direction = {}", vec3(oracle.direction));
            println!("oracle_error_bound = {}", num(oracle.error_bound));
            println!("ip_ge_lqu = {hierarchy}");
        }
        ReportFormat::Json => {
            let report = json!({
                "ip": rounded(ip),
                "lqu": rounded(u),
                "worst_direction": direction.map(rounded),
                "oracle_value": rounded(oracle.value),
                "oracle_theta": rounded(oracle.theta),
                "oracle_phi": rounded(oracle.phi),
                "oracle_direction": oracle.direction.map(rounded),
                "oracle_error_bound": rounded(oracle.error_bound),
                "ip_ge_lqu": hierarchy,
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
        }
    }
    Ok(())
}
