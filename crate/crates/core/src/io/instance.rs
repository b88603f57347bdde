//! Instance files: one task per TOML document.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::centers::{Aggregator, PointSet};
use crate::equalizer::DEFAULT_MARGIN_TOL;
use crate::error::{Error, Result};
use crate::experiments::Truncation;
use crate::feasibility::{Ball, DEFAULT_FEAS_TOL};
use crate::space::{NormKind, NormSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub center: f64,
    pub feasibility: f64,
    pub margin: f64,
    pub nnet: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            center: 1e-9,
            feasibility: DEFAULT_FEAS_TOL,
            margin: DEFAULT_MARGIN_TOL,
            nnet: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetMethod {
    Exact,
    Heuristic,
}

impl NetMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            NetMethod::Exact => "exact",
            NetMethod::Heuristic => "heuristic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Center {
        set: PointSet,
    },
    WeightedCenter {
        set: PointSet,
    },
    FCenter {
        set: PointSet,
        aggregator: Aggregator,
    },
    NNet {
        set: PointSet,
        n: usize,
        method: NetMethod,
    },
    Intersect {
        space: NormSpec,
        balls: Vec<Ball>,
    },
    Equalize {
        space: NormSpec,
        balls: Vec<Ball>,
        r: f64,
    },
    Sweep {
        variant: Truncation,
        seed: Vec<Vec<f64>>,
        dims: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub task: Task,
    pub tolerances: Tolerances,
}

const TASKS: [&str; 7] = [
    "center",
    "weighted-center",
    "f-center",
    "nnet",
    "intersect",
    "equalize",
    "sweep",
];

impl Instance {
    pub fn task_name(&self) -> &'static str {
        match self.task {
            Task::Center { .. } => TASKS[0],
            Task::WeightedCenter { .. } => TASKS[1],
            Task::FCenter { .. } => TASKS[2],
            Task::NNet { .. } => TASKS[3],
            Task::Intersect { .. } => TASKS[4],
            Task::Equalize { .. } => TASKS[5],
            Task::Sweep { .. } => TASKS[6],
        }
    }

    /// The ambient space, absent for sweeps (which build their own).
    pub fn space(&self) -> Option<&NormSpec> {
        match &self.task {
            Task::Center { set } | Task::WeightedCenter { set } | Task::FCenter { set, .. } => {
                Some(set.space())
            }
            Task::NNet { set, .. } => Some(set.space()),
            Task::Intersect { space, .. } | Task::Equalize { space, .. } => Some(space),
            Task::Sweep { .. } => None,
        }
    }

    /// Overrides the solver tolerances (not the separation margin).
    pub fn with_tolerance(mut self, tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tolerance {tol} must be positive"
            )));
        }
        self.tolerances.center = tol;
        self.tolerances.feasibility = tol;
        self.tolerances.nnet = tol;
        Ok(self)
    }

    pub fn to_toml(&self) -> String {
        let file = InstanceFile::from_instance(self);
        toml::to_string(&file).expect("instance files always serialize")
    }
}

pub fn parse_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<Instance> {
    let file: InstanceFile =
        toml::from_str(text).map_err(|e| Error::Schema(e.to_string().trim_end().to_string()))?;
    file.validate()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum NormName {
    L1,
    L2,
    Linf,
    WeightedSup,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintsFile {
    matrix: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    dim: usize,
    norm: NormName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scales: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    constraints: Option<ConstraintsFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BallFile {
    center: Vec<f64>,
    radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum AggregatorFile {
    Max,
    PowerSum(f64),
    Oracle(String),
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TolerancesFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    feasibility: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nnet: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    task: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    aggregator: Option<AggregatorFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    balls: Option<Vec<BallFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    space: Option<SpaceFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tolerances: Option<TolerancesFile>,
}

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn required<T>(value: Option<T>, field: &str, task: &str) -> Result<T> {
    value.ok_or_else(|| schema(format!("task `{task}` requires field `{field}`")))
}

impl InstanceFile {
    fn present_fields(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut note = |present: bool, name: &'static str| {
            if present {
                out.push(name);
            }
        };
        note(self.points.is_some(), "points");
        note(self.weights.is_some(), "weights");
        note(self.aggregator.is_some(), "aggregator");
        note(self.n.is_some(), "n");
        note(self.method.is_some(), "method");
        note(self.r.is_some(), "r");
        note(self.variant.is_some(), "variant");
        note(self.seed.is_some(), "seed");
        note(self.dims.is_some(), "dims");
        note(self.balls.is_some(), "balls");
        note(self.space.is_some(), "space");
        out
    }

    fn validate(self) -> Result<Instance> {
        let task = self.task.as_str();
        let allowed: &[&str] = match task {
            "center" => &["points", "space"],
            "weighted-center" => &["points", "weights", "space"],
            "f-center" => &["points", "weights", "aggregator", "space"],
            "nnet" => &["points", "n", "method", "space"],
            "intersect" => &["balls", "space"],
            "equalize" => &["balls", "r", "space"],
            "sweep" => &["variant", "seed", "dims"],
            other => {
                return Err(schema(format!(
                    "unknown task `{other}` (expected one of {})",
                    TASKS.join(", ")
                )))
            }
        };
        if let Some(field) = self
            .present_fields()
            .into_iter()
            .find(|f| !allowed.contains(f))
        {
            return Err(schema(format!(
                "field `{field}` is not used by task `{task}`"
            )));
        }
        let tolerances = tolerances(self.tolerances.unwrap_or_default())?;

        let task = match task {
            "sweep" => {
                let variant = required(self.variant, "variant", task)?;
                let variant = Truncation::parse(&variant).ok_or_else(|| {
                    schema(format!(
                        "variant: unknown truncation `{variant}` (expected x-space or y-space)"
                    ))
                })?;
                let seed = required(self.seed, "seed", task)?;
                let dims = required(self.dims, "dims", task)?;
                check_sweep(variant, &seed, &dims)?;
                Task::Sweep {
                    variant,
                    seed,
                    dims,
                }
            }
            _ => {
                let space = build_space(required(self.space, "space", task)?)?;
                match task {
                    "center" | "weighted-center" | "f-center" | "nnet" => {
                        let points = required(self.points, "points", task)?;
                        check_points(&space, &points, "points")?;
                        let weights = match (task, self.weights) {
                            ("weighted-center", w) => Some(required(w, "weights", task)?),
                            (_, w) => w,
                        };
                        let set = match weights {
                            Some(w) => {
                                if w.len() != points.len() {
                                    return Err(schema(format!(
                                        "weights: expected {} entries (one per point), found {}",
                                        points.len(),
                                        w.len()
                                    )));
                                }
                                PointSet::weighted(space, points, w)
                            }
                            None => PointSet::new(space, points),
                        }
                        .map_err(|e| schema(format!("points: {e}")))?;
                        match task {
                            "center" => Task::Center { set },
                            "weighted-center" => Task::WeightedCenter { set },
                            "f-center" => {
                                let aggregator = build_aggregator(required(
                                    self.aggregator,
                                    "aggregator",
                                    task,
                                )?)?;
                                Task::FCenter { set, aggregator }
                            }
                            _ => {
                                let n = required(self.n, "n", task)?;
                                if n == 0 {
                                    return Err(schema("n: must be at least 1"));
                                }
                                let method = match self.method.as_deref() {
                                    None | Some("exact") => NetMethod::Exact,
                                    Some("heuristic") => NetMethod::Heuristic,
                                    Some(other) => {
                                        return Err(schema(format!(
                                            "method: unknown n-net method `{other}` (expected exact or heuristic)"
                                        )))
                                    }
                                };
                                Task::NNet { set, n, method }
                            }
                        }
                    }
                    _ => {
                        let balls = build_balls(&space, required(self.balls, "balls", task)?)?;
                        if task == "intersect" {
                            Task::Intersect { space, balls }
                        } else {
                            let r = required(self.r, "r", task)?;
                            if !r.is_finite() {
                                return Err(schema("r: must be finite"));
                            }
                            Task::Equalize { space, balls, r }
                        }
                    }
                }
            }
        };
        Ok(Instance { task, tolerances })
    }

    fn from_instance(inst: &Instance) -> Self {
        let mut file = InstanceFile {
            task: inst.task_name().to_string(),
            ..Default::default()
        };
        if let Some(space) = inst.space() {
            file.space = Some(space_file(space));
        }
        let set_fields = |file: &mut InstanceFile, set: &PointSet, weights: bool| {
            file.points = Some(set.points().to_vec());
            if weights {
                file.weights = Some(set.weights().to_vec());
            }
        };
        match &inst.task {
            Task::Center { set } => set_fields(&mut file, set, false),
            Task::WeightedCenter { set } => set_fields(&mut file, set, true),
            Task::FCenter { set, aggregator } => {
                set_fields(&mut file, set, !set.has_unit_weights());
                file.aggregator = Some(match aggregator {
                    Aggregator::MaxWeighted => AggregatorFile::Max,
                    Aggregator::PowerSum(q) => AggregatorFile::PowerSum(*q),
                    Aggregator::Oracle { name, .. } => AggregatorFile::Oracle(name.clone()),
                });
            }
            Task::NNet { set, n, method } => {
                set_fields(&mut file, set, false);
                file.n = Some(*n);
                file.method = Some(method.as_str().to_string());
            }
            Task::Intersect { balls, .. } => file.balls = Some(ball_files(balls)),
            Task::Equalize { balls, r, .. } => {
                file.balls = Some(ball_files(balls));
                file.r = Some(*r);
            }
            Task::Sweep {
                variant,
                seed,
                dims,
            } => {
                file.variant = Some(variant.as_str().to_string());
                file.seed = Some(seed.clone());
                file.dims = Some(dims.clone());
            }
        }
        let t = inst.tolerances;
        file.tolerances = Some(TolerancesFile {
            center: Some(t.center),
            feasibility: Some(t.feasibility),
            margin: Some(t.margin),
            nnet: Some(t.nnet),
        });
        file
    }
}

fn tolerances(file: TolerancesFile) -> Result<Tolerances> {
    let defaults = Tolerances::default();
    let pick = |value: Option<f64>, default: f64, name: &str| -> Result<f64> {
        match value {
            None => Ok(default),
            Some(v) if v.is_finite() && v > 0.0 => Ok(v),
            Some(v) => Err(schema(format!("tolerances.{name}: {v} must be positive"))),
        }
    };
    Ok(Tolerances {
        center: pick(file.center, defaults.center, "center")?,
        feasibility: pick(file.feasibility, defaults.feasibility, "feasibility")?,
        margin: pick(file.margin, defaults.margin, "margin")?,
        nnet: pick(file.nnet, defaults.nnet, "nnet")?,
    })
}

fn build_space(file: SpaceFile) -> Result<NormSpec> {
    let kind = match (file.norm, file.scales) {
        (NormName::WeightedSup, Some(s)) => NormKind::WeightedSup(s),
        (NormName::WeightedSup, None) => {
            return Err(schema("space.scales: required for norm weighted-sup"))
        }
        (_, Some(_)) => return Err(schema("space.scales: only used by norm weighted-sup")),
        (NormName::L1, None) => NormKind::L1,
        (NormName::L2, None) => NormKind::L2,
        (NormName::Linf, None) => NormKind::LInf,
    };
    let space = NormSpec::new(file.dim, kind).map_err(|e| schema(format!("space: {e}")))?;
    match file.constraints {
        None => Ok(space),
        Some(c) => space
            .with_constraints(c.matrix, c.rhs)
            .map_err(|e| schema(format!("space.constraints: {e}"))),
    }
}

fn space_file(space: &NormSpec) -> SpaceFile {
    let (norm, scales) = match space.kind() {
        NormKind::L1 => (NormName::L1, None),
        NormKind::L2 => (NormName::L2, None),
        NormKind::LInf => (NormName::Linf, None),
        NormKind::WeightedSup(s) => (NormName::WeightedSup, Some(s.clone())),
    };
    SpaceFile {
        dim: space.dim(),
        norm,
        scales,
        constraints: space.constraints().map(|c| ConstraintsFile {
            matrix: c.matrix().to_vec(),
            rhs: c.rhs().to_vec(),
        }),
    }
}

fn check_points(space: &NormSpec, points: &[Vec<f64>], field: &str) -> Result<()> {
    if points.is_empty() {
        return Err(schema(format!("{field}: at least one point is required")));
    }
    for (i, p) in points.iter().enumerate() {
        if p.len() != space.dim() {
            return Err(schema(format!(
                "{field}[{i}]: expected {} coordinates, found {}",
                space.dim(),
                p.len()
            )));
        }
    }
    Ok(())
}

fn build_balls(space: &NormSpec, files: Vec<BallFile>) -> Result<Vec<Ball>> {
    if files.is_empty() {
        return Err(schema("balls: at least one ball is required"));
    }
    files
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            if b.center.len() != space.dim() {
                return Err(schema(format!(
                    "balls[{i}].center: expected {} coordinates, found {}",
                    space.dim(),
                    b.center.len()
                )));
            }
            Ball::new(b.center, b.radius).map_err(|e| schema(format!("balls[{i}]: {e}")))
        })
        .collect()
}

fn ball_files(balls: &[Ball]) -> Vec<BallFile> {
    balls
        .iter()
        .map(|b| BallFile {
            center: b.center().to_vec(),
            radius: b.radius(),
        })
        .collect()
}

fn build_aggregator(file: AggregatorFile) -> Result<Aggregator> {
    match file {
        AggregatorFile::Max => Ok(Aggregator::MaxWeighted),
        AggregatorFile::PowerSum(q) => {
            Aggregator::power_sum(q).map_err(|e| schema(format!("aggregator: {e}")))
        }
        AggregatorFile::Oracle(name) => Aggregator::named_oracle(&name).ok_or_else(|| {
            schema(format!(
                "aggregator.oracle: unknown oracle `{name}` (expected one of {})",
                Aggregator::ORACLE_NAMES.join(", ")
            ))
        }),
    }
}

fn check_sweep(variant: Truncation, seed: &[Vec<f64>], dims: &[usize]) -> Result<()> {
    if seed.is_empty() {
        return Err(schema("seed: at least one point is required"));
    }
    let base = seed[0].len();
    if let Some(i) = seed.iter().position(|p| p.len() != base) {
        return Err(schema(format!(
            "seed[{i}]: all seed points must have {base} coordinates"
        )));
    }
    if dims.is_empty() {
        return Err(schema("dims: at least one dimension is required"));
    }
    for (i, d) in dims.iter().enumerate() {
        if d % 2 != 0 || *d < variant.min_dim() {
            return Err(schema(format!(
                "dims[{i}]: {d} must be even and at least {} for {}",
                variant.min_dim(),
                variant.as_str()
            )));
        }
        if *d < base {
            return Err(schema(format!(
                "dims[{i}]: {d} is below the seed dimension {base}"
            )));
        }
    }
    if dims.windows(2).any(|w| w[1] <= w[0]) {
        return Err(schema("dims: must be strictly increasing"));
    }
    Ok(())
}
