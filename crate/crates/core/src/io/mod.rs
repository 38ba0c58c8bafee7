//! Configuration parsing, manifests and the artifact formats: CSV, JSON, SVG
//! sparklines and binary checkpoints.

mod checkpoint;
mod config;
mod identities;
mod svg;
mod table;
mod verify;

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::{apriori_monitor, energy_budget, MonitorRow, RunConfig, TrajectoryRecord};

pub use checkpoint::{load_checkpoint, read_checkpoint, save_checkpoint, write_checkpoint, MAGIC, VERSION};
pub use config::{config_to_toml, parse_config, parse_config_str};
pub use identities::{identity_suite, verify_identities, Check, CheckReport};
pub use svg::sparkline;
pub use verify::{semigroup_defect, verify_linear};
pub use table::{csv_string, format_float, norm_rows_csv, read_csv, read_norm_rows, write_csv};

/// Everything needed to repeat a command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub package: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config: RunConfig,
}

impl Manifest {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Self {
            package: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed: config.seed,
            config: config.clone(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let m: Manifest = serde_json::from_str(&text)?;
        m.config.validate()?;
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" | "svg-sparkline" => Ok(Format::Svg),
            other => Err(Error::Config(format!("unknown format `{other}` (csv, json, svg)"))),
        }
    }
}

/// Comma-separated formats, e.g. `csv,svg`.
pub fn parse_formats(list: &str) -> Result<Vec<Format>> {
    let mut out = list.split(',').map(Format::from_str).collect::<Result<Vec<_>>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

pub fn write_manifest(dir: &Path, command: &str, config: &RunConfig) -> Result<PathBuf> {
    let path = dir.join("manifest.json");
    write_json(&path, &Manifest::new(command, config))?;
    write_text(&dir.join("config.toml"), &config_to_toml(config)?)?;
    Ok(path)
}

/// Quantities drawn as sparklines.
pub const SPARKLINE_SERIES: [&str; 5] = ["l2_sq", "vh_l2_sq", "v3_l2_sq", "grad_h_l2_sq", "d3v_l2_sq"];

#[derive(Serialize)]
struct RecordJson<'a> {
    config: &'a RunConfig,
    initial: &'a Option<crate::norms::InitialDataReport>,
    cfl: &'a crate::solver::CflAdvisory,
    rows: &'a [crate::norms::NormReport],
    ledger: &'a crate::solver::EnergyLedger,
    energy_budget: crate::solver::EnergyBudget,
    monitor: Vec<MonitorRow>,
}

/// Writes the run's series in each format under `dir` and returns the paths.
///
/// CSV: `rows.csv`, `ledger.csv`, `energy_budget.csv`, `monitor.csv`.
/// JSON: `record.json`. SVG: `<series>.svg` for [`SPARKLINE_SERIES`].
pub fn emit_record(dir: &Path, record: &TrajectoryRecord, formats: &[Format]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let budget = energy_budget(record);
    let monitor = apriori_monitor(record);
    for f in formats {
        match f {
            Format::Csv => {
                let l = &record.ledger;
                let b = &budget;
                let files = [
                    ("rows.csv", norm_rows_csv(&record.rows)?),
                    (
                        "ledger.csv",
                        csv_string(
                            &["t", "energy", "dissipation"],
                            (0..l.len()).map(|i| [l.t[i], l.energy[i], l.dissipation[i]]),
                        )?,
                    ),
                    (
                        "energy_budget.csv",
                        csv_string(
                            &["t", "residual", "quadrature"],
                            (0..b.t.len()).map(|i| [b.t[i], b.residual[i], b.quadrature[i]]),
                        )?,
                    ),
                    ("monitor.csv", csv_string(&MonitorRow::COLUMNS, monitor.iter().map(|m| m.values()))?),
                ];
                for (name, text) in files {
                    let p = dir.join(name);
                    write_text(&p, &text)?;
                    written.push(p);
                }
            }
            Format::Json => {
                let p = dir.join("record.json");
                write_json(
                    &p,
                    &RecordJson {
                        config: &record.config,
                        initial: &record.initial,
                        cfl: &record.cfl,
                        rows: &record.rows,
                        ledger: &record.ledger,
                        energy_budget: budget.clone(),
                        monitor: monitor.clone(),
                    },
                )?;
                written.push(p);
            }
            Format::Svg => {
                let t = record.times();
                for name in SPARKLINE_SERIES {
                    let p = dir.join(format!("{name}.svg"));
                    write_text(&p, &sparkline(name, &t, &record.series(name)?))?;
                    written.push(p);
                }
            }
        }
    }
    Ok(written)
}
