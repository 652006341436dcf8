use clap::Args;
use ipower_core::verify::SUITES;

use crate::error::{CliError, CliResult};
use crate::format::num;

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Root seed of the random ensembles.
    #[arg(long, env = "IPOWER_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Trials per randomised property (defaults to each suite's own count).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: Option<u64>,
    /// Restrict to one group: qmat, correlations, ip_axioms, probes, estimation.
    #[arg(long)]
    pub group: Option<String>,
}

pub fn run(args: &VerifyArgs) -> CliResult {
    if let Some(g) = &args.group {
        if !SUITES.iter().any(|s| &s.group == g) {
            return Err(CliError::config("--group", format!("unknown group '{g}'")));
        }
    }
    let mut failed = 0;
    let mut total = 0;
    for suite in SUITES.iter().filter(|s| args.group.as_deref().is_none_or(|g| g == s.group)) {
        let r = suite.run(args.seed, args.trials.map(|n| n as usize));
        total += 1;
        failed += usize::from(!r.passed());
        println!(
            "{} {:<13} {:<30} trials={} failures={} allowed={} worst={} tolerance={}",
            if r.passed() { "PASS" } else { "FAIL" },
            suite.group,
            r.name,
            r.trials,
            r.failures,
            r.allowed_failures,
            num(r.worst),
            num(r.tolerance)
        );
    }
    println!("{} of {total} properties passed (seed {})", total - failed, args.seed);
    if failed > 0 {
        return Err(CliError::Verification(failed));
    }
    Ok(())
}
