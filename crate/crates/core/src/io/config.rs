use std::path::Path;

use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::solver::RunConfig;

/// Parses one `key=value` override. The value is read as a TOML value, and as a bare
/// string when that fails, so `mode=isotropic` and `mode="isotropic"` agree.
fn parse_override(item: &str) -> Result<(String, Value)> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override `{item}` is not of the form key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    if key.is_empty() {
        return Err(Error::Config(format!("override `{item}` has an empty key")));
    }
    let value = match format!("v = {raw}").parse::<Table>() {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => Value::String(raw.to_string()),
    };
    Ok((key.to_string(), value))
}

/// Flat config text plus `key=value` overrides, validated.
pub fn parse_config_str(text: &str, overrides: &[String]) -> Result<RunConfig> {
    let mut table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::Config(e.message().trim().to_string()))?;
    for (key, value) in table.iter() {
        if value.is_table() {
            return Err(Error::Config(format!("key `{key}`: nested tables are not supported")));
        }
    }
    for item in overrides {
        let (key, value) = parse_override(item)?;
        table.insert(key, value);
    }
    let config: RunConfig = Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| Error::Config(e.message().trim().to_string()))?;
    config.validate()?;
    Ok(config)
}

/// Reads `path` (defaults only when `None`) and applies the overrides.
pub fn parse_config(path: Option<&Path>, overrides: &[String]) -> Result<RunConfig> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?,
        None => String::new(),
    };
    parse_config_str(&text, overrides)
}

/// The resolved configuration as flat TOML, every key present.
pub fn config_to_toml(config: &RunConfig) -> Result<String> {
    toml::to_string(config).map_err(|e| Error::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::ViscosityMode;

    #[test]
    fn empty_file_gives_defaults() {
        assert_eq!(parse_config_str("", &[]).unwrap(), RunConfig::default());
    }

    #[test]
    fn overrides_and_types() {
        let c = parse_config_str(
            "n_h = 16\nn_v = 16\n",
            &["dt=1e-3".into(), "mode=isotropic".into(), "duhamel_cadences=[0.1, 0.05]".into()],
        )
        .unwrap();
        assert_eq!(c.dt, 1e-3);
        assert_eq!(c.n_h, 16);
        assert_eq!(c.mode, ViscosityMode::Isotropic);
        assert_eq!(c.duhamel_cadences, vec![0.1, 0.05]);
        let c = parse_config_str("mode = \"linear-only\"", &[]).unwrap();
        assert_eq!(c.mode, ViscosityMode::LinearOnly);
    }

    #[test]
    fn precise_errors() {
        let unknown = parse_config_str("nh = 16", &[]).unwrap_err().to_string();
        assert!(unknown.contains("nh"), "{unknown}");
        let typed = parse_config_str("n_h = \"big\"", &[]).unwrap_err().to_string();
        assert!(typed.contains("n_h") || typed.contains("invalid type"), "{typed}");
        let nested = parse_config_str("[grid]\nn = 1", &[]).unwrap_err().to_string();
        assert!(nested.contains("nested"), "{nested}");
        assert!(matches!(parse_config_str("", &["dt".into()]), Err(Error::Config(_))));
        let gate = parse_config_str("s = 0.4\ns1 = 4", &[]);
        assert!(matches!(gate, Err(Error::ParameterGate { .. })), "{gate:?}");
    }

    #[test]
    fn resolved_toml_round_trips() {
        let c = parse_config_str("", &["seed=7".into(), "l_h=10.5".into(), "fit_t1=6".into()]).unwrap();
        let text = config_to_toml(&c).unwrap();
        assert_eq!(parse_config_str(&text, &[]).unwrap(), c);
    }
}
