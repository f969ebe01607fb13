//! TOML run configuration.
//!
//! The model is written flat, one array entry per station, so a config file
//! reads like the parameter table it came from:
//!
//! ```toml
//! prior = 0.0002
//! cost_false_accept = 100000.0
//! cost_false_reject = 500.0
//! structure = "parallel"          # or "series", or e.g. "any(1, all(2, 3))"
//! sigma0 = [0.16, 0.2, 0.22]
//! sigma1 = [0.3, 0.2, 0.26]
//! c = [1.0, 1.0, 1.0]             # per-station inspection cost
//! a = [20.0, 20.0, 20.0]          # dwell time a * exp(b * T)
//! b = [-3.0, -3.0, -3.0]
//!
//! method = "grid"                 # grid | local | ga | all
//! seed = 0
//! out = "frontier.csv"
//!
//! [weights]                       # w1 sweep; defaults to 0:0.004:1
//! start = 0.0
//! step = 0.004
//! end = 1.0
//!
//! [grid]
//! step = 0.05
//!
//! [local]
//! starts = [[0.2, 0.2, 0.2]]
//!
//! [ga]
//! population = 80
//! generations = 100
//! ```
//!
//! Station numbers inside `structure` are 1-based. Unknown keys are
//! rejected.

use std::path::PathBuf;
use std::str::FromStr;

use serde::Deserialize;
use thiserror::Error;

use crate::model::{BooleanStructure, ModelError, Station, SystemModel, WeightPair};
use crate::solvers::{GaParams, GridParams, LocalSearchParams};

#[derive(Debug, Error)]
pub enum ConfigError {
    /// Malformed document; the message carries line and column.
    #[error("config syntax error: {message}")]
    Syntax { message: String },

    #[error("invalid {field}: {message}")]
    Field { field: String, message: String },

    #[error(transparent)]
    Model(#[from] ModelError),
}

impl ConfigError {
    fn field(field: &str, message: impl Into<String>) -> Self {
        ConfigError::Field {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

/// Which optimizer(s) a run executes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Grid,
    Local,
    Ga,
    /// All three, plus a frontier comparison summary.
    All,
}

impl MethodChoice {
    pub const NAMES: [&'static str; 4] = ["grid", "local", "ga", "all"];
}

impl FromStr for MethodChoice {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "grid" => Ok(MethodChoice::Grid),
            "local" => Ok(MethodChoice::Local),
            "ga" => Ok(MethodChoice::Ga),
            "all" => Ok(MethodChoice::All),
            other => Err(ConfigError::field(
                "method",
                format!("expected one of grid, local, ga, all; got {other:?}"),
            )),
        }
    }
}

impl std::fmt::Display for MethodChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            MethodChoice::Grid => "grid",
            MethodChoice::Local => "local",
            MethodChoice::Ga => "ga",
            MethodChoice::All => "all",
        };
        f.write_str(name)
    }
}

/// Fully validated run description: the model plus everything the runner
/// needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: SystemModel,
    pub method: MethodChoice,
    pub grid: GridParams,
    pub local: LocalSearchParams,
    pub ga: GaParams,
    pub weights: Vec<WeightPair>,
    pub out: PathBuf,
    pub seed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    prior: f64,
    cost_false_accept: f64,
    cost_false_reject: f64,
    structure: String,
    sigma0: Vec<f64>,
    sigma1: Vec<f64>,
    c: Vec<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
    threshold_lo: Option<f64>,
    threshold_hi: Option<f64>,
    method: Option<String>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    weights: Option<RawWeights>,
    grid: Option<RawGrid>,
    local: Option<RawLocal>,
    ga: Option<RawGa>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeights {
    start: f64,
    step: f64,
    end: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    step: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLocal {
    starts: Option<Vec<Vec<f64>>>,
    max_iterations: Option<usize>,
    tol: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGa {
    population: Option<usize>,
    generations: Option<usize>,
    crossover_rate: Option<f64>,
    mutation_rate: Option<f64>,
    elite_count: Option<usize>,
    tournament_size: Option<usize>,
    mutation_scale: Option<f64>,
    swap_rate: Option<f64>,
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Syntax {
        message: e.to_string(),
    })?;

    let n = raw.sigma0.len();
    for (name, array) in [
        ("sigma1", &raw.sigma1),
        ("c", &raw.c),
        ("a", &raw.a),
        ("b", &raw.b),
    ] {
        if array.len() != n {
            return Err(ConfigError::field(
                name,
                format!("expected {n} entries to match sigma0, got {}", array.len()),
            ));
        }
    }
    let stations: Vec<Station> = (0..n)
        .map(|i| Station::new(raw.sigma0[i], raw.sigma1[i], raw.c[i], raw.a[i], raw.b[i]))
        .collect();

    let structure = parse_structure(&raw.structure, n)?;
    let model = SystemModel::new(
        stations,
        raw.prior,
        raw.cost_false_accept,
        raw.cost_false_reject,
        structure,
    )
    .with_threshold_box(
        raw.threshold_lo.unwrap_or(0.0),
        raw.threshold_hi.unwrap_or(1.0),
    );
    model.validate()?;

    let method = match &raw.method {
        Some(s) => s.parse()?,
        None => MethodChoice::Grid,
    };
    let seed = raw.seed.unwrap_or(0);

    let weights = match &raw.weights {
        Some(w) => crate::solvers::weight_range(w.start, w.step, w.end)?,
        None => crate::solvers::default_weights(),
    };

    let grid = GridParams {
        step: raw.grid.as_ref().and_then(|g| g.step).unwrap_or(0.05),
    };
    grid.validate(&model)?;

    let default_local = LocalSearchParams::default();
    let local = match &raw.local {
        Some(l) => LocalSearchParams {
            initial_thresholds: l.starts.clone().unwrap_or_default(),
            max_iterations: l.max_iterations.unwrap_or(default_local.max_iterations),
            convergence_tol: l.tol.unwrap_or(default_local.convergence_tol),
        },
        None => default_local,
    };
    local.validate(n, model.threshold_box())?;

    let default_ga = GaParams::default();
    let ga = match &raw.ga {
        Some(g) => GaParams {
            population_size: g.population.unwrap_or(default_ga.population_size),
            generations: g.generations.unwrap_or(default_ga.generations),
            crossover_rate: g.crossover_rate.unwrap_or(default_ga.crossover_rate),
            mutation_rate: g.mutation_rate.unwrap_or(default_ga.mutation_rate),
            elite_count: g.elite_count.unwrap_or(default_ga.elite_count),
            tournament_size: g.tournament_size.unwrap_or(default_ga.tournament_size),
            mutation_scale: g.mutation_scale.unwrap_or(default_ga.mutation_scale),
            swap_rate: g.swap_rate.unwrap_or(default_ga.swap_rate),
            seed,
        },
        None => GaParams {
            seed,
            ..default_ga
        },
    };
    ga.validate()?;

    Ok(RunConfig {
        model,
        method,
        grid,
        local,
        ga,
        weights,
        out: raw.out.unwrap_or_else(|| PathBuf::from("frontier.csv")),
        seed,
    })
}

/// Parses the structure mini-language.
///
/// `series` and `parallel` are whole-system shorthands; otherwise the
/// grammar is `node := station-number | any(node, ...) | all(node, ...)`
/// with 1-based station numbers.
pub fn parse_structure(text: &str, n: usize) -> Result<BooleanStructure, ConfigError> {
    let trimmed = text.trim();
    if n == 0 {
        return Err(ConfigError::field("structure", "no stations defined"));
    }
    match trimmed {
        "series" => return Ok(BooleanStructure::series(n)),
        "parallel" => return Ok(BooleanStructure::parallel(n)),
        _ => {}
    }
    let mut parser = StructureParser {
        bytes: trimmed.as_bytes(),
        pos: 0,
        n,
    };
    let node = parser.node()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(node)
}

struct StructureParser<'a> {
    bytes: &'a [u8],
    pos: usize,
    n: usize,
}

impl StructureParser<'_> {
    fn error(&self, message: &str) -> ConfigError {
        ConfigError::field(
            "structure",
            format!("{message} at position {}", self.pos + 1),
        )
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, expected: u8) -> Result<(), ConfigError> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&expected) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", expected as char)))
        }
    }

    fn node(&mut self) -> Result<BooleanStructure, ConfigError> {
        self.skip_ws();
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_digit() => {
                let start = self.pos;
                while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                    self.pos += 1;
                }
                let number: usize = std::str::from_utf8(&self.bytes[start..self.pos])
                    .expect("digits are utf-8")
                    .parse()
                    .map_err(|_| self.error("station number out of range"))?;
                if number == 0 || number > self.n {
                    return Err(ConfigError::field(
                        "structure",
                        format!(
                            "station numbers are 1-based and at most {}; got {number}",
                            self.n
                        ),
                    ));
                }
                Ok(BooleanStructure::Leaf(number - 1))
            }
            Some(b) if b.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphabetic())
                {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
                let make: fn(Vec<BooleanStructure>) -> BooleanStructure = match word {
                    "any" => BooleanStructure::Any,
                    "all" => BooleanStructure::All,
                    "series" | "parallel" => {
                        return Err(ConfigError::field(
                            "structure",
                            format!("{word:?} stands for the whole system and cannot be nested"),
                        ))
                    }
                    other => {
                        return Err(ConfigError::field(
                            "structure",
                            format!("unknown operator {other:?}; expected any(...) or all(...)"),
                        ))
                    }
                };
                self.eat(b'(')?;
                let mut children = vec![self.node()?];
                loop {
                    self.skip_ws();
                    match self.bytes.get(self.pos) {
                        Some(b',') => {
                            self.pos += 1;
                            children.push(self.node()?);
                        }
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.error("expected ',' or ')'")),
                    }
                }
                Ok(make(children))
            }
            _ => Err(self.error("expected a station number, any(...), or all(...)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BooleanStructure as Bs;

    const MINIMAL: &str = r#"
        prior = 0.0002
        cost_false_accept = 100000.0
        cost_false_reject = 500.0
        structure = "parallel"
        sigma0 = [0.16, 0.2, 0.22]
        sigma1 = [0.3, 0.2, 0.26]
        c = [1.0, 1.0, 1.0]
        a = [20.0, 20.0, 20.0]
        b = [-3.0, -3.0, -3.0]
    "#;

    #[test]
    fn minimal_config_gets_defaults() {
        let config = parse_config(MINIMAL).unwrap();
        assert_eq!(config.model.station_count(), 3);
        assert_eq!(config.model.structure, Bs::parallel(3));
        assert_eq!(config.method, MethodChoice::Grid);
        assert_eq!(config.weights.len(), 251);
        assert_eq!(config.grid.step, 0.05);
        assert_eq!(config.seed, 0);
        assert_eq!(config.ga.seed, 0);
        assert_eq!(config.out, PathBuf::from("frontier.csv"));
        assert_eq!(config.model.threshold_box(), (0.0, 1.0));
    }

    #[test]
    fn full_config_overrides_everything() {
        let text = format!(
            "{MINIMAL}
            threshold_lo = -0.5
            threshold_hi = 1.5
            method = \"ga\"
            seed = 11
            out = \"results/f.csv\"
            [weights]
            start = 0.0
            step = 0.5
            end = 1.0
            [grid]
            step = 0.1
            [local]
            starts = [[0.2, 0.2, 0.2], [0.2, 0.6, 0.2]]
            max_iterations = 500
            tol = 1e-7
            [ga]
            population = 40
            generations = 50
            crossover_rate = 0.9
            mutation_rate = 0.2
            elite_count = 4
            tournament_size = 3
            mutation_scale = 0.05
        "
        );
        let config = parse_config(&text).unwrap();
        assert_eq!(config.model.threshold_box(), (-0.5, 1.5));
        assert_eq!(config.method, MethodChoice::Ga);
        assert_eq!(config.seed, 11);
        assert_eq!(config.ga.seed, 11);
        assert_eq!(config.weights.len(), 3);
        assert_eq!(config.grid.step, 0.1);
        assert_eq!(config.local.initial_thresholds.len(), 2);
        assert_eq!(config.local.max_iterations, 500);
        assert_eq!(config.ga.population_size, 40);
        assert_eq!(config.ga.tournament_size, 3);
        assert_eq!(config.out, PathBuf::from("results/f.csv"));
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let err = parse_config("prior = [[[").unwrap_err();
        let message = err.to_string();
        assert!(message.contains("line 1"), "{message}");
        assert!(matches!(err, ConfigError::Syntax { .. }));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config(&format!("{MINIMAL}\nbogus_key = 1\n")).unwrap_err();
        assert!(err.to_string().contains("bogus_key"), "{err}");
    }

    #[test]
    fn missing_fields_are_named() {
        let err = parse_config("").unwrap_err();
        assert!(err.to_string().contains("missing field"), "{err}");
    }

    #[test]
    fn semantic_errors_name_the_field() {
        let bad_prior = MINIMAL.replace("prior = 0.0002", "prior = 1.5");
        let err = parse_config(&bad_prior).unwrap_err();
        assert!(err.to_string().contains("prior outside [0, 1]"), "{err}");

        let bad_len = MINIMAL.replace("c = [1.0, 1.0, 1.0]", "c = [1.0, 1.0]");
        let err = parse_config(&bad_len).unwrap_err();
        assert!(err.to_string().contains("invalid c"), "{err}");

        let bad_method = format!("{MINIMAL}\nmethod = \"annealing\"\n");
        let err = parse_config(&bad_method).unwrap_err();
        assert!(err.to_string().contains("invalid method"), "{err}");
    }

    #[test]
    fn structure_dsl_round_trips() {
        assert_eq!(parse_structure("series", 3).unwrap(), Bs::series(3));
        assert_eq!(parse_structure("parallel", 2).unwrap(), Bs::parallel(2));
        assert_eq!(
            parse_structure("all(1, 2, 3)", 3).unwrap(),
            Bs::parallel(3)
        );
        assert_eq!(
            parse_structure(" any( 1 , all(2,3) ) ", 3).unwrap(),
            Bs::Any(vec![Bs::Leaf(0), Bs::All(vec![Bs::Leaf(1), Bs::Leaf(2)])])
        );
        assert_eq!(parse_structure("1", 1).unwrap(), Bs::Leaf(0));
    }

    #[test]
    fn structure_dsl_errors() {
        for (text, needle) in [
            ("any(0, 1)", "1-based"),
            ("any(1, 4)", "at most 3"),
            ("any(1, 2", "expected ',' or ')'"),
            ("or(1, 2)", "unknown operator"),
            ("any(1, series)", "cannot be nested"),
            ("any(1, 2) x", "trailing"),
            ("", "expected a station number"),
        ] {
            let err = parse_structure(text, 3).unwrap_err();
            assert!(
                err.to_string().contains(needle),
                "{text:?}: {err} (wanted {needle:?})"
            );
        }
        // Structure whose leaves do not cover all stations fails model
        // validation, not parsing.
        let text = MINIMAL.replace("\"parallel\"", "\"all(1, 2)\"");
        let err = parse_config(&text).unwrap_err();
        assert!(err.to_string().contains("not covered"), "{err}");
    }
}
