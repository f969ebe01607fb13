//! Shared oracle and instance generators for the integration tests.
//!
//! Everything here recomputes model quantities through routes the library
//! does not use: the normal CDF via a Maclaurin series and a Gauss
//! continued fraction instead of rational minimax approximations, and
//! policy metrics via sums over complete decision vectors instead of a
//! short-circuit tree walk. Agreement between the two routes is the point.

#![allow(dead_code)]
// Frozen reference values keep their full oracle digits.
#![allow(clippy::excessive_precision)]

use rand::Rng;

use poe_inspect::model::{BooleanStructure, Policy, Station, SystemModel};

const SQRT_PI: f64 = 1.7724538509055160273;

/// Reference standard normal CDF, accurate to ~1e-15 absolute.
pub fn oracle_phi(z: f64) -> f64 {
    let y = z / std::f64::consts::SQRT_2;
    if y >= 0.0 {
        1.0 - 0.5 * oracle_erfc(y)
    } else {
        0.5 * oracle_erfc(-y)
    }
}

/// erfc on y >= 0 via Maclaurin erf below 2 and a continued fraction above.
fn oracle_erfc(y: f64) -> f64 {
    assert!(y >= 0.0);
    if y < 2.0 {
        1.0 - erf_series(y)
    } else {
        erfc_continued_fraction(y)
    }
}

/// erf(y) = (2/sqrt(pi)) * sum_k (-1)^k y^(2k+1) / (k! (2k+1)), |y| < 2.
fn erf_series(y: f64) -> f64 {
    let y2 = y * y;
    let mut term = y;
    let mut sum = y;
    for k in 1..200 {
        term *= -y2 / k as f64;
        let add = term / (2 * k + 1) as f64;
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    2.0 / SQRT_PI * sum
}

/// Gauss continued fraction for the upper incomplete gamma at a = 1/2:
/// erfc(y) = exp(-y^2) y / (sqrt(pi) D), with D evaluated by modified
/// Lentz. Converges fast for y >= 2.
fn erfc_continued_fraction(y: f64) -> f64 {
    let x = y * y;
    const FLOOR: f64 = 1e-300;
    let mut f = x + 0.5;
    let mut c = f;
    let mut d = 0.0f64;
    for k in 1..500 {
        let kf = k as f64;
        let a = -kf * (kf - 0.5);
        let b = x + 2.0 * kf + 0.5;
        d = b + a * d;
        if d.abs() < FLOOR {
            d = FLOOR;
        }
        c = b + a / c;
        if c.abs() < FLOOR {
            c = FLOOR;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    (-x).exp() * y / (SQRT_PI * f)
}

/// System output for a complete decision vector, by direct recursion.
pub fn oracle_output(structure: &BooleanStructure, decisions: &[bool]) -> bool {
    match structure {
        BooleanStructure::Leaf(i) => decisions[*i],
        BooleanStructure::Any(children) => {
            children.iter().any(|c| oracle_output(c, decisions))
        }
        BooleanStructure::All(children) => {
            children.iter().all(|c| oracle_output(c, decisions))
        }
    }
}

/// Whether the first `len` decisions along `sequence` already fix the
/// output, checked by enumerating every completion of the remaining
/// stations and comparing outputs.
fn prefix_determined(
    structure: &BooleanStructure,
    sequence: &[usize],
    prefix: &[bool],
    n: usize,
) -> bool {
    let len = prefix.len();
    let rest = n - len;
    let mut decisions = vec![false; n];
    let mut first: Option<bool> = None;
    for completion in 0..(1u32 << rest) {
        for (pos, &station) in sequence.iter().enumerate() {
            decisions[station] = if pos < len {
                prefix[pos]
            } else {
                completion >> (pos - len) & 1 == 1
            };
        }
        let out = oracle_output(structure, &decisions);
        match first {
            None => first = Some(out),
            Some(f) if f != out => return false,
            Some(_) => {}
        }
    }
    true
}

#[derive(Debug, Clone, Copy)]
pub struct OracleEvaluation {
    pub false_accept: f64,
    pub false_reject: f64,
    pub misclassification_cost: f64,
    pub inspection_cost: f64,
    pub total_cost: f64,
    pub total_time: f64,
}

/// Brute-force policy metrics.
///
/// Error rates sum the state-conditional probability of every complete
/// decision vector on the accepting (resp. rejecting) side. Cost and time
/// weight each visit position by the total marginal probability of the
/// undetermined prefixes that reach it.
pub fn oracle_evaluate(model: &SystemModel, policy: &Policy) -> OracleEvaluation {
    let n = model.station_count();
    assert!(n <= 16, "oracle is exponential in the station count");
    let thresholds = &policy.thresholds;

    let mut flag_clean = vec![0.0; n];
    let mut flag_suspect = vec![0.0; n];
    let mut flag_marginal = vec![0.0; n];
    let mut dwell = vec![0.0; n];
    for i in 0..n {
        let s = &model.stations[i];
        let t = thresholds[i];
        flag_clean[i] = 1.0 - oracle_phi(t / s.sigma0);
        flag_suspect[i] = 1.0 - oracle_phi((t - 1.0) / s.sigma1);
        flag_marginal[i] =
            (1.0 - model.prior) * flag_clean[i] + model.prior * flag_suspect[i];
        dwell[i] = s.time_a * (s.time_b * t).exp();
    }

    let mut false_accept = 0.0;
    let mut false_reject = 0.0;
    let mut decisions = vec![false; n];
    for vector in 0..(1u32 << n) {
        for (i, d) in decisions.iter_mut().enumerate() {
            *d = vector >> i & 1 == 1;
        }
        let rejected = oracle_output(&model.structure, &decisions);
        let mut p_clean = 1.0;
        let mut p_suspect = 1.0;
        for i in 0..n {
            if decisions[i] {
                p_clean *= flag_clean[i];
                p_suspect *= flag_suspect[i];
            } else {
                p_clean *= 1.0 - flag_clean[i];
                p_suspect *= 1.0 - flag_suspect[i];
            }
        }
        if rejected {
            false_reject += p_clean;
        } else {
            false_accept += p_suspect;
        }
    }

    let mut inspection_cost = 0.0;
    let mut total_time = 0.0;
    for len in 0..n {
        let station = policy.sequence[len];
        let mut reach = 0.0;
        for bits in 0..(1u32 << len) {
            let prefix: Vec<bool> = (0..len).map(|p| bits >> p & 1 == 1).collect();
            if prefix_determined(&model.structure, &policy.sequence, &prefix, n) {
                continue;
            }
            let mut w = 1.0;
            for (pos, &d) in prefix.iter().enumerate() {
                let s = policy.sequence[pos];
                w *= if d {
                    flag_marginal[s]
                } else {
                    1.0 - flag_marginal[s]
                };
            }
            reach += w;
        }
        inspection_cost += reach * model.stations[station].cost;
        total_time += reach * dwell[station];
    }

    let misclassification_cost = model.prior * false_accept * model.cost_false_accept
        + (1.0 - model.prior) * false_reject * model.cost_false_reject;
    OracleEvaluation {
        false_accept,
        false_reject,
        misclassification_cost,
        inspection_cost,
        total_cost: misclassification_cost + inspection_cost,
        total_time,
    }
}

/// The three-station ALL model the bundled config describes, with its
/// published optimum rows. Sequences are 0-based station indices.
pub fn reference_model() -> SystemModel {
    SystemModel::new(
        vec![
            Station::new(0.16, 0.30, 1.0, 20.0, -3.0),
            Station::new(0.20, 0.20, 1.0, 20.0, -3.0),
            Station::new(0.22, 0.26, 1.0, 20.0, -3.0),
        ],
        2e-4,
        100_000.0,
        500.0,
        BooleanStructure::parallel(3),
    )
}

pub struct ReferenceRow {
    pub thresholds: [f64; 3],
    pub sequence: [usize; 3],
    pub total_cost: f64,
    pub total_time: f64,
}

pub const REFERENCE_ROWS: [ReferenceRow; 3] = [
    ReferenceRow {
        thresholds: [0.0, 0.95, 0.05],
        sequence: [1, 2, 0],
        total_cost: 9.03,
        total_time: 1.16,
    },
    ReferenceRow {
        thresholds: [0.0, 0.85, 0.0],
        sequence: [1, 0, 2],
        total_cost: 5.54,
        total_time: 1.57,
    },
    ReferenceRow {
        thresholds: [0.0, 0.75, 0.05],
        sequence: [1, 2, 0],
        total_cost: 3.13,
        total_time: 2.11,
    },
];

/// Uniformly random station with moderate, well-conditioned parameters.
pub fn random_station<R: Rng>(rng: &mut R) -> Station {
    Station::new(
        rng.gen_range(0.12..0.45),
        rng.gen_range(0.12..0.45),
        rng.gen_range(0.5..5.0),
        rng.gen_range(1.0..30.0),
        rng.gen_range(-4.0..-0.5),
    )
}

/// Random model over a pure series or parallel rule.
pub fn random_pure_model<R: Rng>(rng: &mut R, n: usize, series: bool) -> SystemModel {
    let stations = (0..n).map(|_| random_station(rng)).collect();
    let structure = if series {
        BooleanStructure::series(n)
    } else {
        BooleanStructure::parallel(n)
    };
    SystemModel::new(
        stations,
        rng.gen_range(1e-4..0.05),
        rng.gen_range(1e3..1e5),
        rng.gen_range(10.0..1e3),
        structure,
    )
}

/// Random model whose rule may be pure or a two-level nest such as
/// any(all(a, b), c).
pub fn random_model<R: Rng>(rng: &mut R, n: usize) -> SystemModel {
    let series = rng.gen_bool(0.5);
    let mut model = random_pure_model(rng, n, series);
    if n >= 3 && rng.gen_bool(0.5) {
        model.structure = random_nested_structure(rng, n);
    }
    model
}

/// Two-level structure: shuffled stations split into >= 2 groups, inner
/// groups of >= 2 leaves use the combinator opposite to the root.
pub fn random_nested_structure<R: Rng>(rng: &mut R, n: usize) -> BooleanStructure {
    assert!(n >= 3);
    let mut stations: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        stations.swap(i, rng.gen_range(0..=i));
    }
    let root_any = rng.gen_bool(0.5);
    let groups = rng.gen_range(2..=(n - 1));
    let mut children = Vec::new();
    let mut next = 0;
    for g in 0..groups {
        let remaining = n - next;
        let left = groups - g - 1;
        let size = if left == 0 {
            remaining
        } else {
            rng.gen_range(1..=remaining - left)
        };
        let members: Vec<BooleanStructure> = stations[next..next + size]
            .iter()
            .map(|&i| BooleanStructure::Leaf(i))
            .collect();
        next += size;
        children.push(if size == 1 {
            members.into_iter().next().unwrap()
        } else if root_any {
            BooleanStructure::All(members)
        } else {
            BooleanStructure::Any(members)
        });
    }
    if root_any {
        BooleanStructure::Any(children)
    } else {
        BooleanStructure::All(children)
    }
}

/// Random visit order and in-box thresholds for `model`.
pub fn random_policy<R: Rng>(rng: &mut R, model: &SystemModel) -> Policy {
    let n = model.station_count();
    let (lo, hi) = model.threshold_box();
    let mut sequence: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        sequence.swap(i, rng.gen_range(0..=i));
    }
    let thresholds = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    Policy::new(sequence, thresholds)
}

pub fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol,
        "{what}: got {got}, want {want} (tol {tol})"
    );
}
