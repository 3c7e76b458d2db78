//! Run configuration: UTF-8 JSON with rationals carried as strings so no
//! floating point can leak into the arithmetic.
//!
//! ```json
//! {
//!   "h3": "4",
//!   "N": 4,
//!   "r": 1,
//!   "multD": [1, 1, 1, 1],
//!   "overrides": { "d": null, "bScale": null },
//!   "premises": {
//!     "lefschetzPrimitive": true,
//!     "h20Zero": true,
//!     "sigmaInjective": true
//!   }
//! }
//! ```
//!
//! `multD`, `overrides`, and `premises` may be omitted; premises default to
//! granted and `multD` to all ones.

use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{ConfigError, Error};
use crate::matrix::{Int, Rat};
use crate::scenario::QFanoScenario;

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RunConfigFile {
    h3: String,
    #[serde(rename = "N")]
    n: usize,
    r: i64,
    #[serde(default)]
    mult_d: Option<Vec<i64>>,
    #[serde(default)]
    overrides: OverridesFile,
    #[serde(default)]
    premises: PremisesFile,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct OverridesFile {
    #[serde(default)]
    d: Option<i64>,
    #[serde(default)]
    b_scale: Option<i64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct PremisesFile {
    #[serde(default = "granted")]
    lefschetz_primitive: bool,
    #[serde(default = "granted")]
    h20_zero: bool,
    #[serde(default = "granted")]
    sigma_injective: bool,
}

fn granted() -> bool {
    true
}

impl Default for PremisesFile {
    fn default() -> Self {
        Self {
            lefschetz_primitive: true,
            h20_zero: true,
            sigma_injective: true,
        }
    }
}

/// Perturbations applied to the distinguished degree-4 class before
/// certification.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    /// Replaces the computed pairing degree d in the degree-4 class.
    pub d: Option<Int>,
    /// Scales the whole degree-4 class.
    pub b_scale: Option<Int>,
}

/// The three assumed facts of the verification chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PremiseFlags {
    pub lefschetz_primitive: bool,
    pub h20_zero: bool,
    pub sigma_injective: bool,
}

impl Default for PremiseFlags {
    fn default() -> Self {
        Self {
            lefschetz_primitive: true,
            h20_zero: true,
            sigma_injective: true,
        }
    }
}

/// A parsed and validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario: QFanoScenario,
    pub overrides: Overrides,
    pub premises: PremiseFlags,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let file: RunConfigFile = serde_json::from_str(text).map_err(ConfigError::Json)?;
        let h3 = Rat::from_str(file.h3.trim()).map_err(|_| ConfigError::BadRational {
            field: "h3".into(),
            value: file.h3.clone(),
        })?;
        let mult_d = file
            .mult_d
            .map(|v| v.into_iter().map(Int::from).collect())
            .unwrap_or_else(|| vec![Int::from(1); file.n]);
        let scenario = QFanoScenario::with_mult_d(h3, file.n, Int::from(file.r), mult_d)?;
        Ok(Self {
            scenario,
            overrides: Overrides {
                d: file.overrides.d.map(Int::from),
                b_scale: file.overrides.b_scale.map(Int::from),
            },
            premises: PremiseFlags {
                lefschetz_primitive: file.premises.lefschetz_primitive,
                h20_zero: file.premises.h20_zero,
                sigma_injective: file.premises.sigma_injective,
            },
        })
    }

    pub fn from_path(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(ConfigError::Io)?;
        Self::from_json(&text)
    }

    /// Plain config for a scenario with no overrides and all premises granted.
    pub fn plain(scenario: QFanoScenario) -> Self {
        Self {
            scenario,
            overrides: Overrides::default(),
            premises: PremiseFlags::default(),
        }
    }
}

/// Parses the plain-text matrix format: one row per line, whitespace-separated
/// integers; blank lines are ignored.
pub fn parse_integer_matrix(text: &str) -> Result<crate::matrix::ExactMatrix, ConfigError> {
    let mut rows: Vec<Vec<Int>> = Vec::new();
    let mut expected = None;
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for token in line.split_whitespace() {
            let value = Int::from_str(token).map_err(|_| ConfigError::BadMatrixEntry {
                line: idx + 1,
                token: token.to_string(),
            })?;
            row.push(value);
        }
        match expected {
            None => expected = Some(row.len()),
            Some(e) if e != row.len() => {
                return Err(ConfigError::RaggedMatrix {
                    line: idx + 1,
                    expected: e,
                    got: row.len(),
                })
            }
            Some(_) => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ConfigError::EmptyMatrix);
    }
    Ok(crate::matrix::ExactMatrix::from_int_rows(rows).expect("rows are rectangular"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ModelError;
    use crate::matrix::rat;

    #[test]
    fn parses_matrix_files() {
        let m = parse_integer_matrix("1 2 3\n4 5 6\n").unwrap();
        assert_eq!(m, crate::matrix::ExactMatrix::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6]]));
        assert!(matches!(
            parse_integer_matrix("1 x\n"),
            Err(ConfigError::BadMatrixEntry { line: 1, .. })
        ));
        assert!(matches!(
            parse_integer_matrix("1 2\n3\n"),
            Err(ConfigError::RaggedMatrix { line: 2, .. })
        ));
        assert!(matches!(parse_integer_matrix("  \n"), Err(ConfigError::EmptyMatrix)));
    }

    #[test]
    fn parses_minimal_config() {
        let cfg = RunConfig::from_json(r#"{"h3": "4", "N": 4, "r": 1}"#).unwrap();
        assert_eq!(*cfg.scenario.h3(), rat(4, 1));
        assert_eq!(cfg.scenario.points(), 4);
        assert_eq!(cfg.scenario.mult_d().len(), 4);
        assert!(cfg.premises.h20_zero);
        assert_eq!(cfg.overrides, Overrides::default());
    }

    #[test]
    fn parses_rational_string_and_overrides() {
        let cfg = RunConfig::from_json(
            r#"{"h3": "7/2", "N": 2, "r": 3, "multD": [1, 3],
                "overrides": {"bScale": 2},
                "premises": {"h20Zero": false}}"#,
        )
        .unwrap();
        assert_eq!(*cfg.scenario.h3(), rat(7, 2));
        assert_eq!(cfg.overrides.b_scale, Some(Int::from(2)));
        assert!(!cfg.premises.h20_zero);
        assert!(cfg.premises.lefschetz_primitive);
    }

    #[test]
    fn rejects_float_h3() {
        // Rationals ride as strings; a JSON number is a schema error.
        let err = RunConfig::from_json(r#"{"h3": 4.0, "N": 4, "r": 1}"#);
        assert!(matches!(err, Err(Error::Config(ConfigError::Json(_)))));
        let err = RunConfig::from_json(r#"{"h3": "4.0", "N": 4, "r": 1}"#);
        assert!(matches!(err, Err(Error::Config(ConfigError::BadRational { .. }))));
    }

    #[test]
    fn model_rejections_are_not_parse_errors() {
        let err = RunConfig::from_json(r#"{"h3": "4", "N": 4, "r": 2}"#);
        assert!(matches!(
            err,
            Err(Error::Model(ModelError::EvenAnticanonicalMultiple { .. }))
        ));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = RunConfig::from_json(r#"{"h3": "4", "N": 4, "r": 1, "extra": 1}"#);
        assert!(matches!(err, Err(Error::Config(ConfigError::Json(_)))));
    }
}
