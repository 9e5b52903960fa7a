use friable_core::sieve::{sieve_bound_with, BoundOptions, SieveInstance, SieveReport};
use serde_json::Value;

use super::{read_input, Output};
use crate::config::RunConfig;
use crate::error::CliError;

/// The instance file holds one instance object or an array of them.
pub fn parse_instances(src: &str) -> Result<Vec<SieveInstance>, CliError> {
    let doc: Value =
        serde_json::from_str(src).map_err(|e| CliError::Invalid(format!("instance JSON: {e}")))?;
    let items = match doc {
        Value::Array(items) => items,
        one => vec![one],
    };
    items
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let inst = SieveInstance::from_json(&v.to_string())
                .map_err(|e| CliError::Invalid(format!("instance {i}: {e}")))?;
            Ok(if inst.id.is_some() {
                inst
            } else {
                inst.with_id(i.to_string())
            })
        })
        .collect()
}

pub fn run(cfg: &RunConfig) -> Result<Output, CliError> {
    let instances = parse_instances(&read_input(cfg, "--instance")?)?;
    let opts = BoundOptions {
        budget: cfg.budget,
        brute: cfg.brute,
    };
    let mut out = Output {
        csv: format!("{}\n", SieveReport::CSV_HEADER),
        ..Output::default()
    };
    for inst in &instances {
        let mut r = sieve_bound_with(inst, opts)?;
        if !cfg.brute {
            r.brute_count = None;
        }
        out.csv.push_str(&r.csv_row());
        out.csv.push('\n');
        if let Some(c) = r.brute_count {
            if c as f64 > r.bound {
                out.failures.push(format!(
                    "instance {}: count {c} exceeds the bound {}",
                    r.id, r.bound
                ));
            }
        }
    }
    out.summary.push(format!("{} instance(s)", instances.len()));
    Ok(out)
}
