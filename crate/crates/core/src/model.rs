//! Domain types: stations, Boolean decision structures, the system model,
//! inspection policies, and scalarization weights.
//!
//! Station indices are 0-based everywhere in this crate. User-facing
//! surfaces (config files, CSV output, error messages) number stations
//! from 1.

use thiserror::Error;

/// Validation failure naming the offending field.
#[derive(Debug, Error)]
#[error("invalid {field}: {message}")]
pub struct ModelError {
    pub field: &'static str,
    pub message: String,
}

impl ModelError {
    pub(crate) fn new(field: &'static str, message: impl Into<String>) -> Self {
        ModelError {
            field,
            message: message.into(),
        }
    }
}

/// One inspection station.
///
/// Sensor readings are normalized so the clean-state mean is 0 and the
/// suspect-state mean is 1; only the standard deviations vary per station.
/// A container is flagged when its reading exceeds the station threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Station {
    /// Reading standard deviation when the container is clean (x = 0).
    pub sigma0: f64,
    /// Reading standard deviation when the container is suspect (x = 1).
    pub sigma1: f64,
    /// Unit cost of running this station once.
    pub cost: f64,
    /// Dwell-time coefficient `a` in `t = a * exp(b * T)`.
    pub time_a: f64,
    /// Dwell-time exponent `b` in `t = a * exp(b * T)`.
    pub time_b: f64,
}

impl Station {
    pub fn new(sigma0: f64, sigma1: f64, cost: f64, time_a: f64, time_b: f64) -> Self {
        Station {
            sigma0,
            sigma1,
            cost,
            time_a,
            time_b,
        }
    }

    fn validate(&self, index: usize) -> Result<(), ModelError> {
        let station = index + 1;
        if !(self.sigma0.is_finite() && self.sigma0 > 0.0) {
            return Err(ModelError::new(
                "sigma0",
                format!("sigma0 must be positive and finite (station {station})"),
            ));
        }
        if !(self.sigma1.is_finite() && self.sigma1 > 0.0) {
            return Err(ModelError::new(
                "sigma1",
                format!("sigma1 must be positive and finite (station {station})"),
            ));
        }
        if !(self.cost.is_finite() && self.cost >= 0.0) {
            return Err(ModelError::new(
                "cost",
                format!("cost must be nonnegative and finite (station {station})"),
            ));
        }
        if !(self.time_a.is_finite() && self.time_a > 0.0) {
            return Err(ModelError::new(
                "time_a",
                format!("time_a must be positive and finite (station {station})"),
            ));
        }
        if !self.time_b.is_finite() {
            return Err(ModelError::new(
                "time_b",
                format!("time_b must be finite (station {station})"),
            ));
        }
        Ok(())
    }
}

/// Shape of a structure whose root directly combines all stations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PureStructure {
    /// Reject when any station flags (Boolean OR).
    Series,
    /// Reject only when every station flags (Boolean AND).
    Parallel,
}

/// System decision rule over the per-station binary decisions.
///
/// `Any` rejects the container when at least one child rejects (series
/// rule); `All` rejects only when every child rejects (parallel rule).
/// Leaves hold 0-based station indices, and a valid structure references
/// each station exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BooleanStructure {
    Leaf(usize),
    Any(Vec<BooleanStructure>),
    All(Vec<BooleanStructure>),
}

impl BooleanStructure {
    /// OR over all `n` stations.
    pub fn series(n: usize) -> Self {
        if n == 1 {
            BooleanStructure::Leaf(0)
        } else {
            BooleanStructure::Any((0..n).map(BooleanStructure::Leaf).collect())
        }
    }

    /// AND over all `n` stations.
    pub fn parallel(n: usize) -> Self {
        if n == 1 {
            BooleanStructure::Leaf(0)
        } else {
            BooleanStructure::All((0..n).map(BooleanStructure::Leaf).collect())
        }
    }

    /// Station indices in left-to-right order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            BooleanStructure::Leaf(i) => out.push(*i),
            BooleanStructure::Any(children) | BooleanStructure::All(children) => {
                for child in children {
                    child.collect_leaves(out);
                }
            }
        }
    }

    /// `Some(kind)` when the root directly combines all `n` stations as
    /// plain leaves. A single leaf counts as both shapes; series is
    /// reported.
    pub fn pure_structure(&self, n: usize) -> Option<PureStructure> {
        let all_leaves = |children: &[BooleanStructure]| {
            children.len() == n
                && children
                    .iter()
                    .all(|c| matches!(c, BooleanStructure::Leaf(_)))
        };
        match self {
            BooleanStructure::Leaf(_) if n == 1 => Some(PureStructure::Series),
            BooleanStructure::Any(children) if all_leaves(children) => Some(PureStructure::Series),
            BooleanStructure::All(children) if all_leaves(children) => {
                Some(PureStructure::Parallel)
            }
            _ => None,
        }
    }

    /// Evaluates the rule on a complete decision vector indexed by station.
    pub fn evaluate(&self, decisions: &[bool]) -> bool {
        match self {
            BooleanStructure::Leaf(i) => decisions[*i],
            BooleanStructure::Any(children) => children.iter().any(|c| c.evaluate(decisions)),
            BooleanStructure::All(children) => children.iter().all(|c| c.evaluate(decisions)),
        }
    }

    /// Three-valued evaluation on a partial decision vector: `Some(d)` when
    /// every completion of the undecided stations yields `d`, else `None`.
    pub fn evaluate_partial(&self, decisions: &[Option<bool>]) -> Option<bool> {
        match self {
            BooleanStructure::Leaf(i) => decisions[*i],
            BooleanStructure::Any(children) => {
                let mut undecided = false;
                for child in children {
                    match child.evaluate_partial(decisions) {
                        Some(true) => return Some(true),
                        Some(false) => {}
                        None => undecided = true,
                    }
                }
                if undecided {
                    None
                } else {
                    Some(false)
                }
            }
            BooleanStructure::All(children) => {
                let mut undecided = false;
                for child in children {
                    match child.evaluate_partial(decisions) {
                        Some(false) => return Some(false),
                        Some(true) => {}
                        None => undecided = true,
                    }
                }
                if undecided {
                    None
                } else {
                    Some(true)
                }
            }
        }
    }

    /// P(rule = 1) when leaf `i` fires independently with probability
    /// `flag[i]`.
    pub fn reject_probability(&self, flag: &[f64]) -> f64 {
        match self {
            BooleanStructure::Leaf(i) => flag[*i],
            BooleanStructure::Any(children) => {
                let none = children
                    .iter()
                    .map(|c| 1.0 - c.reject_probability(flag))
                    .product::<f64>();
                1.0 - none
            }
            BooleanStructure::All(children) => children
                .iter()
                .map(|c| c.reject_probability(flag))
                .product(),
        }
    }

    fn validate(&self, n: usize) -> Result<(), ModelError> {
        self.validate_arity()?;
        let leaves = self.leaves();
        let mut seen = vec![false; n];
        for &i in &leaves {
            if i >= n {
                return Err(ModelError::new(
                    "structure",
                    format!("leaf references station {} but only {n} exist", i + 1),
                ));
            }
            if seen[i] {
                return Err(ModelError::new(
                    "structure",
                    format!("duplicate leaf for station {}", i + 1),
                ));
            }
            seen[i] = true;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(ModelError::new(
                "structure",
                format!("station {} is not covered by the structure", missing + 1),
            ));
        }
        Ok(())
    }

    fn validate_arity(&self) -> Result<(), ModelError> {
        match self {
            BooleanStructure::Leaf(_) => Ok(()),
            BooleanStructure::Any(children) | BooleanStructure::All(children) => {
                if children.len() < 2 {
                    return Err(ModelError::new(
                        "structure",
                        "ANY/ALL nodes need at least 2 children",
                    ));
                }
                children.iter().try_for_each(|c| c.validate_arity())
            }
        }
    }
}

/// Inspection problem instance: the stations, the prior probability that a
/// container is suspect, the two misclassification penalties, the decision
/// structure, and the threshold search box.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemModel {
    pub stations: Vec<Station>,
    /// Prior probability that an arriving container is suspect.
    pub prior: f64,
    /// Penalty for accepting a suspect container.
    pub cost_false_accept: f64,
    /// Penalty for rejecting a clean container.
    pub cost_false_reject: f64,
    pub structure: BooleanStructure,
    threshold_lo: f64,
    threshold_hi: f64,
}

impl SystemModel {
    /// Builds a model with the default threshold box [0, 1].
    pub fn new(
        stations: Vec<Station>,
        prior: f64,
        cost_false_accept: f64,
        cost_false_reject: f64,
        structure: BooleanStructure,
    ) -> Self {
        SystemModel {
            stations,
            prior,
            cost_false_accept,
            cost_false_reject,
            structure,
            threshold_lo: 0.0,
            threshold_hi: 1.0,
        }
    }

    pub fn with_threshold_box(mut self, lo: f64, hi: f64) -> Self {
        self.threshold_lo = lo;
        self.threshold_hi = hi;
        self
    }

    pub fn station_count(&self) -> usize {
        self.stations.len()
    }

    /// Inclusive bounds every threshold must lie in.
    pub fn threshold_box(&self) -> (f64, f64) {
        (self.threshold_lo, self.threshold_hi)
    }

    /// Checks every invariant, reporting the first violation.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.stations.is_empty() {
            return Err(ModelError::new("stations", "at least one station required"));
        }
        for (i, station) in self.stations.iter().enumerate() {
            station.validate(i)?;
        }
        if !(self.prior.is_finite() && (0.0..=1.0).contains(&self.prior)) {
            return Err(ModelError::new(
                "prior",
                format!("prior outside [0, 1]: {}", self.prior),
            ));
        }
        if !(self.cost_false_accept.is_finite() && self.cost_false_accept >= 0.0) {
            return Err(ModelError::new(
                "cost_false_accept",
                "must be nonnegative and finite",
            ));
        }
        if !(self.cost_false_reject.is_finite() && self.cost_false_reject >= 0.0) {
            return Err(ModelError::new(
                "cost_false_reject",
                "must be nonnegative and finite",
            ));
        }
        if !(self.threshold_lo.is_finite()
            && self.threshold_hi.is_finite()
            && self.threshold_lo < self.threshold_hi)
        {
            return Err(ModelError::new(
                "threshold_lo",
                "threshold box needs finite lo < hi",
            ));
        }
        self.structure.validate(self.stations.len())
    }
}

/// A complete inspection policy: the order stations are visited in and one
/// threshold per station.
///
/// `thresholds[i]` belongs to station `i` regardless of where the station
/// appears in `sequence`.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    /// Permutation of the 0-based station indices, in visit order.
    pub sequence: Vec<usize>,
    /// Per-station thresholds, indexed by station.
    pub thresholds: Vec<f64>,
}

impl Policy {
    pub fn new(sequence: Vec<usize>, thresholds: Vec<f64>) -> Self {
        Policy {
            sequence,
            thresholds,
        }
    }

    /// Checks the policy against a model: sequence is a permutation of all
    /// stations and every threshold sits inside the model's box.
    pub fn validate(&self, model: &SystemModel) -> Result<(), ModelError> {
        let n = model.station_count();
        if self.sequence.len() != n {
            return Err(ModelError::new(
                "sequence",
                format!("expected {n} entries, got {}", self.sequence.len()),
            ));
        }
        let mut seen = vec![false; n];
        for &i in &self.sequence {
            if i >= n {
                return Err(ModelError::new(
                    "sequence",
                    format!("station {} out of range", i + 1),
                ));
            }
            if seen[i] {
                return Err(ModelError::new(
                    "sequence",
                    format!("station {} listed twice", i + 1),
                ));
            }
            seen[i] = true;
        }
        if self.thresholds.len() != n {
            return Err(ModelError::new(
                "thresholds",
                format!("expected {n} entries, got {}", self.thresholds.len()),
            ));
        }
        let (lo, hi) = model.threshold_box();
        for (i, &t) in self.thresholds.iter().enumerate() {
            if !(t.is_finite() && (lo..=hi).contains(&t)) {
                return Err(ModelError::new(
                    "thresholds",
                    format!("T{} = {t} outside [{lo}, {hi}]", i + 1),
                ));
            }
        }
        Ok(())
    }
}

/// Scalarization weights `(w1, w2)` applied to total cost and total time.
///
/// Both weights are nonnegative and sum to 1 within `SUM_TOLERANCE`;
/// the constructors enforce this.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightPair {
    w1: f64,
    w2: f64,
}

impl WeightPair {
    pub const SUM_TOLERANCE: f64 = 1e-12;

    pub fn new(w1: f64, w2: f64) -> Result<Self, ModelError> {
        if !(w1.is_finite() && w2.is_finite() && w1 >= 0.0 && w2 >= 0.0) {
            return Err(ModelError::new(
                "weights",
                format!("weights must be nonnegative and finite, got ({w1}, {w2})"),
            ));
        }
        if ((w1 + w2) - 1.0).abs() > Self::SUM_TOLERANCE {
            return Err(ModelError::new(
                "weights",
                format!("w1 + w2 must equal 1, got {}", w1 + w2),
            ));
        }
        Ok(WeightPair { w1, w2 })
    }

    /// Weight on cost; time gets `1 - w1`.
    pub fn from_cost_weight(w1: f64) -> Result<Self, ModelError> {
        if !(w1.is_finite() && (0.0..=1.0).contains(&w1)) {
            return Err(ModelError::new(
                "weights",
                format!("cost weight outside [0, 1]: {w1}"),
            ));
        }
        Ok(WeightPair { w1, w2: 1.0 - w1 })
    }

    pub fn w1(&self) -> f64 {
        self.w1
    }

    pub fn w2(&self) -> f64 {
        self.w2
    }
}
