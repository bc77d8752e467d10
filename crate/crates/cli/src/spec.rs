//! Input documents.
//!
//! ```json
//! {"atoms": ["a", "b", "c"],
//!  "choice": {"kind": "seeded", "seed": 7},
//!  "options": {"oracle": true, "verify": "exhaustive", "format": "json"}}
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;
use wellorder_core::choice::MAX_VALIDATED_TABLE_ATOMS;
use wellorder_core::oracle::MAX_ORACLE_ATOMS;
use wellorder_core::wellorder::MAX_EXHAUSTIVE_ATOMS;
use wellorder_core::{ChoiceFunction, ChoiceSpec, Error as CoreError, GroundSet, VerifyMode};

/// Subsets drawn by sampled verification when the input does not say.
pub const DEFAULT_SAMPLE_COUNT: usize = 1000;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("{path}: {message} at line {line} column {column}")]
    Json {
        path: String,
        message: String,
        line: usize,
        column: usize,
    },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

impl InputError {
    fn invalid(field: &str, message: impl Into<String>) -> Self {
        InputError::Invalid { field: field.to_string(), message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemInput {
    pub atoms: Vec<String>,
    pub choice: ChoiceSpec,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub oracle: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySpec>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifySpec {
    Exhaustive,
    Sample(usize),
}

impl std::str::FromStr for VerifySpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "exhaustive" {
            return Ok(VerifySpec::Exhaustive);
        }
        s.strip_prefix("sample:")
            .and_then(|n| n.parse().ok())
            .map(VerifySpec::Sample)
            .ok_or_else(|| format!("expected `exhaustive` or `sample:<n>`, got `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// A validated problem, ready to run.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    /// The input with defaults filled in, echoed into reports.
    pub input: ProblemInput,
    pub ground: GroundSet,
    pub phi: ChoiceFunction,
    pub verify: VerifyMode,
    pub sample_seed: u64,
}

/// Parses and validates a JSON input document.
pub fn parse_spec(text: &[u8]) -> Result<ProblemSpec, InputError> {
    ProblemSpec::from_input(parse_input(text)?, 0)
}

/// Parses a JSON input document without semantic validation.
pub fn parse_input(text: &[u8]) -> Result<ProblemInput, InputError> {
    let de = &mut serde_json::Deserializer::from_slice(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = inner.to_string();
        // serde_json appends its own position; keep only the message.
        let message = message
            .rsplit_once(" at line ")
            .map_or(message.clone(), |(head, _)| head.to_string());
        InputError::Json { path, message, line: inner.line(), column: inner.column() }
    })
}

impl ProblemSpec {
    pub fn from_input(mut input: ProblemInput, sample_seed: u64) -> Result<Self, InputError> {
        let ground = GroundSet::new(input.atoms.iter().cloned()).map_err(|e| match e {
            CoreError::DuplicateLabel(label) => {
                let second = input.atoms.iter().rposition(|a| *a == label).unwrap_or(0);
                InputError::invalid(&format!("atoms[{second}]"), format!("duplicate atom label `{label}`"))
            }
            CoreError::EmptyLabel(i) => InputError::invalid(&format!("atoms[{i}]"), "atom labels must be nonempty"),
            other => InputError::invalid("atoms", other.to_string()),
        })?;
        let n = ground.len();

        let phi = input
            .choice
            .resolve(&ground)
            .map_err(|e| InputError::invalid("choice.entries", e.to_string()))?;
        if matches!(input.choice, ChoiceSpec::Table { .. }) && n <= MAX_VALIDATED_TABLE_ATOMS {
            let report = phi
                .validate_table()
                .map_err(|e| InputError::invalid("choice.entries", e.to_string()))?;
            if !report.is_valid() {
                let mut problems: Vec<String> = report
                    .missing
                    .iter()
                    .map(|s| format!("no entry for {s}"))
                    .collect();
                problems.extend(
                    report
                        .violations
                        .iter()
                        .map(|v| format!("pick `{}` is not a member of {}", v.pick, v.subset)),
                );
                let shown = problems.len().min(5);
                let mut message = problems[..shown].join("; ");
                if problems.len() > shown {
                    message.push_str(&format!("; and {} more", problems.len() - shown));
                }
                return Err(InputError::invalid("choice.entries", message));
            }
        }

        if input.options.oracle && n > MAX_ORACLE_ATOMS {
            return Err(InputError::invalid(
                "options.oracle",
                format!("the oracle enumerates at most {MAX_ORACLE_ATOMS} atoms, got {n}"),
            ));
        }
        let verify_spec = input.options.verify.unwrap_or(if n <= MAX_EXHAUSTIVE_ATOMS {
            VerifySpec::Exhaustive
        } else {
            VerifySpec::Sample(DEFAULT_SAMPLE_COUNT)
        });
        if verify_spec == VerifySpec::Exhaustive && n > MAX_EXHAUSTIVE_ATOMS {
            return Err(InputError::invalid(
                "options.verify",
                format!("exhaustive verification supports at most {MAX_EXHAUSTIVE_ATOMS} atoms, got {n}"),
            ));
        }
        input.options.verify = Some(verify_spec);
        let verify = match verify_spec {
            VerifySpec::Exhaustive => VerifyMode::Exhaustive,
            VerifySpec::Sample(count) => VerifyMode::Sampled { count, seed: sample_seed },
        };

        Ok(ProblemSpec { input, ground, phi, verify, sample_seed })
    }
}
