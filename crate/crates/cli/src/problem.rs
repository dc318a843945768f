//! Problem files: a JSON document holding the matrices and optional run settings.
//!
//! ```json
//! {
//!   "matrices": [[[1, 1], [0, 1]], [[1, 0], [1, 1]]],
//!   "nodes": 3000,
//!   "tolerance": 0.001,
//!   "max_iterations": 1000,
//!   "averaging": "arithmetic",
//!   "interpolation": "angular",
//!   "allow_reducible": false
//! }
//! ```
//!
//! Only `matrices` is required; the rest default to [`RunConfig::default`].

use std::fs;
use std::path::Path;

use jsr_core::{AveragingRule, Interpolation, Mat2, MatrixSet, RunConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// On-disk layout of a problem file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    /// Row-major 2×2 matrices.
    pub matrices: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub averaging: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpolation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allow_reducible: Option<bool>,
}

/// A validated matrix set with its run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub set: MatrixSet,
    pub config: RunConfig,
}

impl ProblemFile {
    /// Canonical file for a set and configuration, with every field spelled out.
    pub fn canonical(set: &MatrixSet, config: &RunConfig) -> Self {
        Self {
            matrices: set
                .iter()
                .map(|m| m.rows().iter().map(|row| row.to_vec()).collect())
                .collect(),
            nodes: Some(config.node_count),
            tolerance: Some(config.tol_abs),
            max_iterations: Some(config.max_iterations),
            averaging: Some(config.averaging.to_string()),
            interpolation: Some(config.interpolation.to_string()),
            allow_reducible: Some(config.allow_reducible),
        }
    }

    pub fn into_problem(self) -> Result<Problem, CliError> {
        let mut matrices = Vec::with_capacity(self.matrices.len());
        for (index, rows) in self.matrices.iter().enumerate() {
            let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
            if rows.len() != 2 || rows.iter().any(|row| row.len() != 2) {
                return Err(CliError::Shape {
                    index,
                    rows: rows.len(),
                    cols,
                });
            }
            matrices.push(Mat2::from_rows([
                [rows[0][0], rows[0][1]],
                [rows[1][0], rows[1][1]],
            ]));
        }
        let set = MatrixSet::new(matrices)?;

        let defaults = RunConfig::default();
        let averaging = match self.averaging {
            Some(name) => name.parse::<AveragingRule>()?,
            None => defaults.averaging,
        };
        let interpolation = match self.interpolation {
            Some(name) => name
                .parse::<Interpolation>()
                .map_err(CliError::UnknownInterpolation)?,
            None => defaults.interpolation,
        };
        let config = RunConfig {
            node_count: self.nodes.unwrap_or(defaults.node_count),
            tol_abs: self.tolerance.unwrap_or(defaults.tol_abs),
            max_iterations: self.max_iterations.unwrap_or(defaults.max_iterations),
            averaging,
            interpolation,
            allow_reducible: self.allow_reducible.unwrap_or(defaults.allow_reducible),
            ..defaults
        };
        config.validate()?;
        Ok(Problem { set, config })
    }
}

/// Parses problem text; `origin` names the source in diagnostics.
pub fn parse_problem_str(text: &str, origin: &str) -> Result<Problem, CliError> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|source| CliError::Syntax {
        path: origin.to_owned(),
        line: source.line(),
        column: source.column(),
        message: source.to_string(),
    })?;
    file.into_problem()
}

/// Reads and validates a problem file.
pub fn parse_problem(path: &Path) -> Result<Problem, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_problem_str(&text, &path.display().to_string())
}

/// Writes the canonical problem file for `problem`.
pub fn write_problem(problem: &Problem, path: &Path) -> Result<(), CliError> {
    let file = ProblemFile::canonical(&problem.set, &problem.config);
    let text = serde_json::to_string_pretty(&file).expect("problem files always serialize");
    fs::write(path, text + "\n").map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX1: &str = r#"{"matrices": [[[1, 1], [0, 1]], [[1, 0], [1, 1]]]}"#;

    #[test]
    fn defaults_are_filled() {
        let p = parse_problem_str(EX1, "ex1.json").unwrap();
        assert_eq!(p.set.len(), 2);
        assert_eq!(
            p.set.matrices()[0],
            Mat2::from_rows([[1.0, 1.0], [0.0, 1.0]])
        );
        assert_eq!(p.config, RunConfig::default());
        assert_eq!(p.config.node_count, 3000);
        assert_eq!(p.config.tol_abs, 1e-3);
        assert_eq!(p.config.max_iterations, 1000);
        assert_eq!(p.config.averaging, AveragingRule::Arithmetic);
        assert!(!p.config.allow_reducible);
    }

    #[test]
    fn shape_error_names_the_matrix() {
        let text = r#"{"matrices": [[[1, 0], [0, 1]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]]]}"#;
        match parse_problem_str(text, "bad.json") {
            Err(CliError::Shape {
                index: 1,
                rows: 3,
                cols: 3,
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let ragged = r#"{"matrices": [[[1, 0], [0]]]}"#;
        assert!(matches!(
            parse_problem_str(ragged, "r"),
            Err(CliError::Shape { index: 0, .. })
        ));
    }

    #[test]
    fn averaging_selection() {
        let text = r#"{"matrices": [[[1, 1], [0, 1]]], "averaging": "geometric"}"#;
        assert_eq!(
            parse_problem_str(text, "g").unwrap().config.averaging,
            AveragingRule::Geometric
        );
        let text = r#"{"matrices": [[[1, 1], [0, 1]]], "averaging": "median"}"#;
        assert!(matches!(
            parse_problem_str(text, "m"),
            Err(CliError::UnknownAveraging(_))
        ));
        let text = r#"{"matrices": [[[1, 1], [0, 1]]], "interpolation": "cubic"}"#;
        assert!(matches!(
            parse_problem_str(text, "i"),
            Err(CliError::UnknownInterpolation(_))
        ));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let text = "{\n  \"matrices\": [[[1, 1], [0, 1]],\n  oops\n}";
        match parse_problem_str(text, "broken.json") {
            Err(CliError::Syntax { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let unknown = r#"{"matrices": [[[1, 0], [0, 1]]], "nodez": 10}"#;
        let err = parse_problem_str(unknown, "u").unwrap_err();
        assert!(err.to_string().contains("nodez"), "{err}");
    }

    #[test]
    fn invalid_settings_are_rejected() {
        assert!(parse_problem_str(r#"{"matrices": []}"#, "e").is_err());
        assert!(parse_problem_str(r#"{"matrices": [[[1, 0], [0, 1]]], "nodes": 7}"#, "n").is_err());
        assert!(
            parse_problem_str(r#"{"matrices": [[[1, 0], [0, 1]]], "tolerance": -1}"#, "t").is_err()
        );
    }

    #[test]
    fn canonical_round_trip() {
        let text = r#"{"matrices": [[[0.8, 0.6], [-0.6, 0.8]], [[1, 0], [-0.4, 1.3]]],
                       "nodes": 500, "tolerance": 1e-4, "max_iterations": 17,
                       "averaging": "harmonic", "interpolation": "chord", "allow_reducible": true}"#;
        let p = parse_problem_str(text, "x").unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("canonical.json");
        write_problem(&p, &path).unwrap();
        assert_eq!(parse_problem(&path).unwrap(), p);
    }
}
