//! Flat `key = value` configuration files.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use stigma_core::{Convention, DistributionSpec, ModelParams};

use crate::error::CliError;

const REQUIRED: [&str; 10] = ["theta_L", "theta_H", "v", "c", "c_h", "z", "u", "tau_hat", "dist_beta", "dist_y"];
const OPTIONAL: [&str; 3] = ["M", "tau_true", "convention"];

pub const DEFAULT_M: f64 = 1.0;

/// Model parameters as read from a config file, before command-line
/// overrides are applied.
#[derive(Debug, Clone, PartialEq)]
pub struct FileConfig {
    pub params: ModelParams,
    pub convention: Convention,
    /// `M` was absent and the default applied.
    pub m_defaulted: bool,
}

pub fn load_config(path: &Path) -> Result<FileConfig, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_config(&text, &base)
}

/// Parses config text; `piecewise:<path>` specs resolve relative to `base_dir`.
pub fn parse_config(text: &str, base_dir: &Path) -> Result<FileConfig, CliError> {
    let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {lineno}: expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if !REQUIRED.contains(&key) && !OPTIONAL.contains(&key) {
            return Err(CliError::Config(format!("line {lineno}: unknown key `{key}`")));
        }
        if entries.insert(key, (lineno, value)).is_some() {
            return Err(CliError::Config(format!("line {lineno}: duplicate key `{key}`")));
        }
    }
    if let Some(missing) = REQUIRED.iter().find(|k| !entries.contains_key(*k)) {
        return Err(CliError::Config(format!("missing required key `{missing}`")));
    }

    let number = |key: &str| -> Result<Option<f64>, CliError> {
        entries
            .get(key)
            .map(|&(lineno, v)| {
                v.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| {
                    CliError::Config(format!("line {lineno}: `{key}` must be a finite number, got `{v}`"))
                })
            })
            .transpose()
    };
    let distribution = |key: &str| -> Result<DistributionSpec, CliError> {
        let (lineno, v) = entries[key];
        parse_distribution(v, base_dir).map_err(|e| CliError::Config(format!("line {lineno}: `{key}`: {e}")))
    };
    let required = |key: &str| number(key).map(|x| x.expect("required keys checked above"));

    let m = number("M")?;
    let convention = match entries.get("convention") {
        Some(&(lineno, v)) => v.parse().map_err(|e| CliError::Config(format!("line {lineno}: {e}")))?,
        None => Convention::default(),
    };
    let params = ModelParams {
        theta_low: required("theta_L")?,
        theta_high: required("theta_H")?,
        treatment_benefit: required("v")?,
        test_cost: required("c")?,
        infection_cost: required("c_h")?,
        partner_health_cost: required("z")?,
        safe_sex_cost: required("u")?,
        coordination_payoff: m.unwrap_or(DEFAULT_M),
        perceived_risk: required("tau_hat")?,
        true_risk: number("tau_true")?.unwrap_or(0.0),
        present_bias: distribution("dist_beta")?,
        valuation: distribution("dist_y")?,
    };
    params.validate().map_err(CliError::from_invalid_params)?;
    Ok(FileConfig { params, convention, m_defaulted: m.is_none() })
}

fn parse_distribution(value: &str, base_dir: &Path) -> Result<DistributionSpec, String> {
    if let Some(rel) = value.strip_prefix("piecewise:") {
        let path: PathBuf = base_dir.join(rel.trim());
        let text = fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        DistributionSpec::piecewise_from_csv(&text).map_err(|e| e.to_string())
    } else {
        value.parse().map_err(|e: stigma_core::DistributionError| e.to_string())
    }
}
