//! `ptsat energy`: evaluate the accelerator overhead model.

use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;

use ptsat::energy::{adc_resolution_bits, overhead, preset, EnergyModelParams};

#[derive(Args, Debug)]
pub struct EnergyArgs {
    /// Parameter preset: pubo-paper or camsat-paper.
    #[arg(long, conflicts_with = "params")]
    pub preset: Option<String>,
    /// JSON file with an EnergyModelParams document.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Also report the ADC resolution for this clause count.
    #[arg(long)]
    pub num_clauses: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &EnergyArgs) -> Result<i32> {
    let params: EnergyModelParams = match (&args.preset, &args.params) {
        (Some(name), None) => {
            preset(name).ok_or_else(|| anyhow!("unknown energy preset `{name}`"))?
        }
        (None, Some(path)) => {
            let body =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&body).with_context(|| format!("parsing {}", path.display()))?
        }
        _ => bail!("give exactly one of --preset or --params"),
    };
    let report = overhead(&params).map_err(|e| anyhow!("overhead model: {e}"))?;
    let mut document = serde_json::to_value(&report)?;
    if let Some(m) = args.num_clauses {
        document["adc_resolution_bits"] = serde_json::json!(adc_resolution_bits(m));
    }
    let mut body = serde_json::to_string_pretty(&document)?;
    body.push('\n');
    match &args.out {
        Some(path) => {
            fs::write(path, &body).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{body}"),
    }
    if let Some(fraction) = report.headline_fraction_percent {
        println!("headline overhead: {fraction:.2}% of total energy per iteration");
    }
    println!(
        "component-sum overhead: {:.4}% of total energy per iteration",
        report.overhead_fraction_percent
    );
    Ok(0)
}
