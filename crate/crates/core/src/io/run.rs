//! Task dispatch: solve an instance and render its result record, CSV table
//! and optional SVG figure.

use std::path::Path;

use crate::centers::{chebyshev_center, Aggregator, CenterMethod, CenterResult, PointSet};
use crate::equalizer::{equalize, step_upper_value, EqualizeResult};
use crate::error::{Error, Result};
use crate::experiments::{radius_sweep, SweepResult};
use crate::feasibility::{intersect, Ball, FeasibilityCertificate, FeasibilityStatus};
use crate::nnets::{best_nnet_exact, best_nnet_heuristic, NNetResult};
use crate::space::{euclid, sub, NormKind, NormSpec};

use super::instance::{Instance, NetMethod, Task};
use super::record::Record;
use super::svg::{line_plot, Scene};

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNCERTIFIED: i32 = 2;

pub const RECORD_FILE: &str = "result.toml";
pub const TABLE_FILE: &str = "table.csv";
pub const FIGURE_FILE: &str = "figure.svg";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub svg: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub exit_code: i32,
    pub record: String,
    pub table: Option<String>,
    pub svg: Option<String>,
    pub error: Option<Error>,
}

enum Solved {
    Center(CenterResult),
    NNet(NNetResult),
    Intersect(FeasibilityCertificate),
    Equalize(FeasibilityCertificate, EqualizeResult),
    Sweep(SweepResult),
}

fn solve(inst: &Instance) -> Result<Solved> {
    let tol = inst.tolerances;
    Ok(match &inst.task {
        Task::Center { set } | Task::WeightedCenter { set } => {
            Solved::Center(chebyshev_center(set, &Aggregator::MaxWeighted, tol.center)?)
        }
        Task::FCenter { set, aggregator } => {
            Solved::Center(chebyshev_center(set, aggregator, tol.center)?)
        }
        Task::NNet { set, n, method } => Solved::NNet(match method {
            NetMethod::Exact => best_nnet_exact(set, *n)?,
            NetMethod::Heuristic => best_nnet_heuristic(set, *n, tol.nnet)?,
        }),
        Task::Intersect { space, balls } => {
            Solved::Intersect(intersect(space, balls, tol.feasibility)?)
        }
        Task::Equalize { space, balls, r } => {
            let result = equalize(space, balls, *r, tol.margin)?;
            let initial = intersect(space, balls, tol.feasibility)?;
            Solved::Equalize(initial, result)
        }
        Task::Sweep {
            variant,
            seed,
            dims,
        } => Solved::Sweep(radius_sweep(*variant, seed, dims)?),
    })
}

fn exit_code(solved: &Solved) -> i32 {
    let certified = match solved {
        Solved::Center(c) => c.certified && c.method != CenterMethod::MultiStart,
        Solved::NNet(n) => n.optimal,
        Solved::Intersect(c) => c.status != FeasibilityStatus::Undetermined,
        Solved::Equalize(..) => true,
        Solved::Sweep(s) => s.monotone && s.records.iter().all(|r| r.certified),
    };
    if certified {
        EXIT_CERTIFIED
    } else {
        EXIT_UNCERTIFIED
    }
}

/// Solves `inst` without touching the filesystem. Solver failures are
/// reported in the record with exit code 1.
pub fn execute(inst: &Instance, opts: RunOptions) -> RunOutput {
    let mut rec = Record::new();
    rec.text("task", inst.task_name());
    match solve(inst) {
        Ok(solved) => {
            let code = exit_code(&solved);
            rec.text(
                "status",
                if code == EXIT_CERTIFIED {
                    "certified"
                } else {
                    "uncertified"
                },
            );
            rec.int("exit-code", code as usize);
            header(&mut rec, inst);
            rec.table("result");
            let table = body(&mut rec, inst, &solved);
            let svg = if opts.svg {
                figure(inst, &solved)
            } else {
                None
            };
            RunOutput {
                exit_code: code,
                record: rec.finish(),
                table: Some(table),
                svg,
                error: None,
            }
        }
        Err(e) => {
            rec.text("status", "error");
            rec.int("exit-code", EXIT_ERROR as usize);
            rec.text("error", &e.to_string());
            header(&mut rec, inst);
            RunOutput {
                exit_code: EXIT_ERROR,
                record: rec.finish(),
                table: None,
                svg: None,
                error: Some(e),
            }
        }
    }
}

/// Solves `inst` and writes the record, table and figure into `output_dir`.
pub fn run(inst: &Instance, output_dir: &Path, opts: RunOptions) -> Result<RunOutput> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", output_dir.display()));
    std::fs::create_dir_all(output_dir).map_err(io)?;
    let out = execute(inst, opts);
    std::fs::write(output_dir.join(RECORD_FILE), &out.record).map_err(io)?;
    if let Some(t) = &out.table {
        std::fs::write(output_dir.join(TABLE_FILE), t).map_err(io)?;
    }
    if let Some(s) = &out.svg {
        std::fs::write(output_dir.join(FIGURE_FILE), s).map_err(io)?;
    }
    Ok(out)
}

fn header(rec: &mut Record, inst: &Instance) {
    let t = inst.tolerances;
    rec.table("tolerances");
    rec.num("center", t.center);
    rec.num("feasibility", t.feasibility);
    rec.num("margin", t.margin);
    rec.num("nnet", t.nnet);
    if let Some(space) = inst.space() {
        rec.table("space");
        rec.int("dim", space.dim());
        rec.text("norm", norm_name(space.kind()));
        if let NormKind::WeightedSup(s) = space.kind() {
            rec.nums("scales", s);
        }
        if let Some(c) = space.constraints() {
            rec.matrix("constraint-matrix", c.matrix());
            rec.nums("constraint-rhs", c.rhs());
        }
    }
}

fn norm_name(kind: &NormKind) -> &'static str {
    match kind {
        NormKind::L1 => "l1",
        NormKind::L2 => "l2",
        NormKind::LInf => "linf",
        NormKind::WeightedSup(_) => "weighted-sup",
    }
}

fn aggregator_name(agg: &Aggregator) -> String {
    match agg {
        Aggregator::MaxWeighted => "max".into(),
        Aggregator::PowerSum(q) => format!("power-sum({})", super::record::format_number(*q)),
        Aggregator::Oracle { name, .. } => format!("oracle({name})"),
    }
}

fn csv_table(header: Vec<String>, rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("writing to memory");
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is UTF-8")
}

fn coord_headers(prefix: &str, dim: usize) -> Vec<String> {
    (1..=dim).map(|k| format!("{prefix}{k}")).collect()
}

fn nums(xs: &[f64]) -> Vec<String> {
    xs.iter()
        .map(|v| super::record::format_number(*v))
        .collect()
}

fn body(rec: &mut Record, inst: &Instance, solved: &Solved) -> String {
    use super::record::format_number as fmt;
    match (&inst.task, solved) {
        (
            Task::Center { set } | Task::WeightedCenter { set } | Task::FCenter { set, .. },
            Solved::Center(c),
        ) => {
            let agg = match &inst.task {
                Task::FCenter { aggregator, .. } => aggregator.clone(),
                _ => Aggregator::MaxWeighted,
            };
            rec.text("aggregator", &aggregator_name(&agg));
            rec.nums("center", &c.center);
            rec.num("radius", c.radius);
            rec.num("lower-bound", c.lower_bound);
            rec.num("gap", c.gap);
            rec.int("iterations", c.iterations);
            rec.text("method", c.method.as_str());
            rec.flag("certified", c.certified);
            point_table(set, &c.center)
        }
        (Task::NNet { set, method, .. }, Solved::NNet(n)) => {
            rec.text("method", method.as_str());
            rec.flag("optimal", n.optimal);
            rec.num("covering-radius", n.covering_radius);
            rec.matrix("nets", &n.nets);
            rec.ints("assignment", &n.assignment);
            let space = set.space();
            let mut header = vec!["index".to_string()];
            header.extend(coord_headers("x", space.dim()));
            header.extend(["net".to_string(), "distance".to_string()]);
            let rows = set
                .points()
                .iter()
                .zip(&n.assignment)
                .enumerate()
                .map(|(i, (p, k))| {
                    let mut row = vec![i.to_string()];
                    row.extend(nums(p));
                    row.push(k.to_string());
                    row.push(fmt(space.distance(p, &n.nets[*k])));
                    row
                })
                .collect();
            csv_table(header, rows)
        }
        (Task::Intersect { space, balls }, Solved::Intersect(c)) => {
            certificate(rec, c);
            ball_table(space, balls, c.witness.as_deref())
        }
        (Task::Equalize { space, balls, r }, Solved::Equalize(initial, res)) => {
            rec.num("r", *r);
            rec.text("initial-status", initial.status.as_str());
            rec.num("initial-depth", initial.depth);
            rec.text("verification-status", res.verification.status.as_str());
            rec.num("verification-depth", res.verification.depth);
            rec.num(
                "verification-depth-lower-bound",
                res.verification.depth_lower_bound,
            );
            rec.matrix(
                "new-centers",
                &res.new_balls
                    .iter()
                    .map(|b| b.center().to_vec())
                    .collect::<Vec<_>>(),
            );
            for (step, original) in res.steps.iter().zip(balls) {
                rec.array_table("steps");
                rec.int("index", step.index);
                rec.text("case", step.case.as_str());
                rec.nums("new-center", &step.new_center);
                rec.num(
                    "displacement",
                    space.distance(&step.new_center, original.center()),
                );
                if let (Some(f), Some(eps), Some(z)) =
                    (&step.separator, step.epsilon, &step.direction)
                {
                    rec.nums("separator", f.coefficients());
                    rec.num("separator-dual-norm", f.dual_norm());
                    rec.num("epsilon", eps);
                    rec.nums("direction", z);
                    if let Some(top) = step_upper_value(step, original, *r) {
                        rec.num("relocated-sup", top);
                    }
                }
            }
            let mut header = vec!["index".to_string()];
            header.extend(coord_headers("x", space.dim()));
            header.push("radius".into());
            header.extend(coord_headers("w", space.dim()));
            header.extend(["r".to_string(), "case".to_string()]);
            let rows = res
                .steps
                .iter()
                .zip(balls)
                .map(|(step, b)| {
                    let mut row = vec![step.index.to_string()];
                    row.extend(nums(b.center()));
                    row.push(fmt(b.radius()));
                    row.extend(nums(&step.new_center));
                    row.push(fmt(*r));
                    row.push(step.case.as_str().to_string());
                    row
                })
                .collect();
            csv_table(header, rows)
        }
        (Task::Sweep { .. }, Solved::Sweep(s)) => {
            rec.text("variant", s.variant.as_str());
            rec.flag("monotone", s.monotone);
            rec.text("note", "exploratory: finite truncations only");
            for r in &s.records {
                rec.array_table("records");
                rec.int("d", r.dim);
                rec.num("radius", r.radius);
                rec.flag("certified", r.certified);
                rec.nums("center", &r.center);
            }
            let rows = s
                .records
                .iter()
                .map(|r| vec![r.dim.to_string(), fmt(r.radius), r.certified.to_string()])
                .collect();
            csv_table(vec!["d".into(), "radius".into(), "certified".into()], rows)
        }
        _ => unreachable!("solution kind follows the task kind"),
    }
}

fn certificate(rec: &mut Record, c: &FeasibilityCertificate) {
    rec.text("status", c.status.as_str());
    rec.num("depth", c.depth);
    rec.num("depth-lower-bound", c.depth_lower_bound);
    if let Some(w) = &c.witness {
        rec.nums("witness", w);
    }
    if let Some(f) = &c.separator {
        rec.nums("separator", f.coefficients());
    }
}

fn point_table(set: &PointSet, center: &[f64]) -> String {
    let space = set.space();
    let mut header = vec!["index".to_string()];
    header.extend(coord_headers("x", space.dim()));
    header.extend(["weight".to_string(), "distance".to_string()]);
    let rows = set
        .points()
        .iter()
        .zip(set.weights())
        .enumerate()
        .map(|(i, (p, w))| {
            let mut row = vec![i.to_string()];
            row.extend(nums(p));
            row.push(super::record::format_number(*w));
            row.push(super::record::format_number(space.distance(p, center)));
            row
        })
        .collect();
    csv_table(header, rows)
}

fn ball_table(space: &NormSpec, balls: &[Ball], probe: Option<&[f64]>) -> String {
    let mut header = vec!["index".to_string()];
    header.extend(coord_headers("x", space.dim()));
    header.push("radius".into());
    if probe.is_some() {
        header.push("witness-distance".into());
    }
    let rows = balls
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let mut row = vec![i.to_string()];
            row.extend(nums(b.center()));
            row.push(super::record::format_number(b.radius()));
            if let Some(p) = probe {
                row.push(super::record::format_number(space.distance(p, b.center())));
            }
            row
        })
        .collect();
    csv_table(header, rows)
}

const BLUE: &str = "#1f3a93";
const RED: &str = "#c0392b";
const GREEN: &str = "#1e8449";

fn figure(inst: &Instance, solved: &Solved) -> Option<String> {
    if let Solved::Sweep(s) = solved {
        let samples: Vec<(f64, f64)> = s.records.iter().map(|r| (r.dim as f64, r.radius)).collect();
        return Some(line_plot(&samples));
    }
    let space = inst.space()?;
    if space.dim() != 2 {
        return None;
    }
    let mut scene = Scene::default();
    match (&inst.task, solved) {
        (
            Task::Center { set } | Task::WeightedCenter { set } | Task::FCenter { set, .. },
            Solved::Center(c),
        ) => {
            for (p, w) in set.points().iter().zip(set.weights()) {
                scene.point(p);
                if matches!(inst.task, Task::Center { .. } | Task::WeightedCenter { .. }) {
                    scene.ball(p, c.radius / w, BLUE);
                }
            }
            scene.marker(&c.center);
        }
        (Task::NNet { set, .. }, Solved::NNet(n)) => {
            for (p, k) in set.points().iter().zip(&n.assignment) {
                scene.point(p);
                scene.link(p, &n.nets[*k]);
            }
            for y in &n.nets {
                scene.marker(y);
                scene.ball(y, n.covering_radius, BLUE);
            }
        }
        (Task::Intersect { balls, .. }, Solved::Intersect(c)) => {
            for b in balls {
                scene.point(b.center());
                scene.ball(b.center(), b.radius(), BLUE);
            }
            if let Some(w) = &c.witness {
                scene.marker(w);
            }
        }
        (Task::Equalize { balls, r, .. }, Solved::Equalize(_, res)) => {
            for (b, w) in balls.iter().zip(&res.new_balls) {
                scene.point(b.center());
                scene.ball(b.center(), b.radius(), BLUE);
                scene.ball(
                    w.center(),
                    *r,
                    if w.center() == b.center() { GREEN } else { RED },
                );
                if euclid(&sub(w.center(), b.center())) > 0.0 {
                    scene.link(b.center(), w.center());
                    scene.marker(w.center());
                }
            }
        }
        _ => return None,
    }
    Some(scene.render(space.kind()))
}
