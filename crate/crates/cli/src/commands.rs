//! Command execution. Every command yields a [`Report`] holding the human
//! text, the structured record, and the exit status; errors returned from
//! here are input errors.

use anyhow::{anyhow, Result};
use serde_json::{json, Value};
use torick_core::divisor::{polytope_points, positivity_check};
use torick_core::euler::{brion_check, chi_t_bundle, chi_t_divisor, polytope_sum};
use torick_core::multiplicity::{em_a, em_k, todd_at_fixed_point};
use torick_core::pexp::check_pexp;
use torick_core::{ConeKind, Error, Fan, LaurentPolynomial, PiecewiseExponential, Wall};

use crate::records::WorkspaceFiles;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    CheckFailed,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::CheckFailed => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub lines: Vec<String>,
    pub json: Value,
    pub status: Status,
}

impl Report {
    fn ok(lines: Vec<String>, json: Value) -> Self {
        Report {
            lines,
            json,
            status: Status::Success,
        }
    }

    fn failed(lines: Vec<String>, json: Value) -> Self {
        Report {
            lines,
            json,
            status: Status::CheckFailed,
        }
    }

    pub fn text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

/// What to run, independent of the argument parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    FanCheck,
    ChiDivisor {
        classical: bool,
        oracle: bool,
    },
    ChiBundle {
        classical: bool,
    },
    Mult {
        cone: usize,
        chow: bool,
        todd: Option<usize>,
    },
    PexpCheck,
    PexpPush,
    Points,
}

pub fn run_command(cmd: &Command, ws: &WorkspaceFiles) -> Result<Report> {
    match cmd {
        Command::FanCheck => Ok(fan_check(&ws.fan)),
        Command::ChiDivisor { classical, oracle } => chi_divisor(ws, *classical, *oracle),
        Command::ChiBundle { classical } => chi_bundle(ws, *classical),
        Command::Mult { cone, chow, todd } => mult(&ws.fan, *cone, *chow, *todd),
        Command::PexpCheck => pexp_check(ws),
        Command::PexpPush => pexp_push(ws),
        Command::Points => points(ws),
    }
}

fn wall_json(w: &Wall) -> Value {
    json!({ "cones": [w.cones.0, w.cones.1], "rays": w.rays, "perp": w.perp })
}

fn fan_check(fan: &Fan) -> Report {
    let mut lines = vec![format!(
        "rank {}, {} rays, {} maximal cones",
        fan.rank(),
        fan.rays().len(),
        fan.cones().len()
    )];
    let mut cones = Vec::new();
    for (i, c) in fan.cones().iter().enumerate() {
        let kind = match c.kind() {
            ConeKind::Smooth => "smooth".to_string(),
            ConeKind::Simplicial { multiplicity } => {
                format!("simplicial, multiplicity {multiplicity}")
            }
            ConeKind::NonSimplicial => "non-simplicial".to_string(),
        };
        lines.push(format!("cone {i} {:?}: dim {}, {kind}", c.rays(), c.dim()));
        cones.push(json!({
            "index": i,
            "rays": c.rays(),
            "dim": c.dim(),
            "simplicial": c.kind().is_simplicial(),
            "smooth": c.kind() == ConeKind::Smooth,
            "multiplicity": c.kind().multiplicity(),
        }));
    }
    let complete = fan.complete();
    lines.push(format!("complete: {}", if complete { "yes" } else { "no" }));
    let walls = fan.walls().unwrap_or_else(|_| fan.interior_walls());
    for w in &walls {
        lines.push(format!(
            "wall {}|{} rays {:?}: perp {}",
            w.cones.0, w.cones.1, w.rays, w.perp
        ));
    }
    let json = json!({
        "rank": fan.rank(),
        "rays": fan.rays(),
        "cones": cones,
        "complete": complete,
        "walls": walls.iter().map(wall_json).collect::<Vec<_>>(),
    });
    if complete {
        Report::ok(lines, json)
    } else {
        Report::failed(lines, json)
    }
}

fn need<'a, T>(x: &'a Option<T>, flag: &str) -> Result<&'a T> {
    x.as_ref()
        .ok_or_else(|| anyhow!("this command requires {flag}"))
}

fn chi_divisor(ws: &WorkspaceFiles, classical: bool, oracle: bool) -> Result<Report> {
    let d = need(&ws.divisor, "--divisor")?;
    let chi = chi_t_divisor(&ws.fan, d)?;
    let mut lines = vec![if classical {
        chi.augment().to_string()
    } else {
        chi.to_string()
    }];
    let mut json = json!({ "chi": chi, "classical": chi.augment() });
    let mut status = Status::Success;
    if oracle {
        if positivity_check(&ws.fan, d)?.is_basepoint_free() {
            let r = brion_check(&ws.fan, d)?;
            if r.agree {
                lines.push(format!("oracle: agree ({} lattice points)", r.points));
            } else {
                lines.push("oracle: MISMATCH".into());
                lines.push(format!("polytope sum: {}", r.oracle));
                status = Status::CheckFailed;
            }
            json["oracle"] = json!({
                "status": if r.agree { "agree" } else { "mismatch" },
                "polytope_sum": r.oracle,
                "points": r.points,
            });
        } else {
            let (sum, points) = polytope_sum(&ws.fan, d)?;
            lines.push("oracle: unverified (divisor is not basepoint-free)".into());
            json["oracle"] = json!({
                "status": "unverified",
                "polytope_sum": sum,
                "points": points,
            });
        }
    }
    Ok(Report {
        lines,
        json,
        status,
    })
}

fn chi_bundle(ws: &WorkspaceFiles, classical: bool) -> Result<Report> {
    let data = need(&ws.bundle, "--bundle")?;
    match chi_t_bundle(&ws.fan, data) {
        Ok(chi) => {
            let line = if classical {
                chi.augment().to_string()
            } else {
                chi.to_string()
            };
            Ok(Report::ok(
                vec![line],
                json!({ "chi": chi, "classical": chi.augment() }),
            ))
        }
        Err(e @ Error::NotIntegral { .. }) => Ok(Report::failed(
            vec![format!("inconsistent fixed-point data: {e}")],
            json!({ "error": e.to_string() }),
        )),
        Err(e) => Err(e.into()),
    }
}

fn mult(fan: &Fan, cone: usize, chow: bool, todd: Option<usize>) -> Result<Report> {
    fan.cone(cone)?;
    let k = em_k(fan, cone)?;
    let mut lines = vec![format!("em_k = {k}")];
    let mut json = json!({ "cone": cone, "em_k": k });
    if chow {
        let a = em_a(fan, cone)?;
        lines.push(format!("em_a = {a}"));
        json["em_a"] = json!(a);
    }
    if let Some(order) = todd {
        let t = todd_at_fixed_point(fan, cone, order)?;
        lines.push(format!("todd = {t}"));
        json["todd"] = json!(t);
    }
    Ok(Report::ok(lines, json))
}

fn pexp_check(ws: &WorkspaceFiles) -> Result<Report> {
    let values = need(&ws.pexp, "--pexp")?;
    let report = check_pexp(&ws.fan, values)?;
    let mut lines = Vec::new();
    let mut walls = Vec::new();
    for w in &report.walls {
        let (a, b) = w.wall.cones;
        if w.passed() {
            lines.push(format!("wall {a}|{b} perp {}: ok", w.wall.perp));
        } else {
            lines.push(format!(
                "wall {a}|{b} perp {}: FAIL, f{a} - f{b} = {} is not divisible by 1 - e^{}",
                w.wall.perp, w.difference, w.wall.perp
            ));
        }
        let mut j = wall_json(&w.wall);
        j["passed"] = json!(w.passed());
        j["difference"] = json!(w.difference);
        walls.push(j);
    }
    let failed = report.failures().count();
    let json = json!({ "valid": failed == 0, "walls": walls });
    if failed == 0 {
        lines.push("valid".into());
        Ok(Report::ok(lines, json))
    } else {
        lines.push(format!(
            "invalid: {failed} of {} walls failed",
            report.walls.len()
        ));
        Ok(Report::failed(lines, json))
    }
}

fn pexp_push(ws: &WorkspaceFiles) -> Result<Report> {
    let values = need(&ws.pexp, "--pexp")?;
    match PiecewiseExponential::new(&ws.fan, values.clone()) {
        Ok(f) => {
            let chi: LaurentPolynomial = f.pushforward_to_point()?;
            Ok(Report::ok(
                vec![chi.to_string()],
                json!({ "pushforward": chi }),
            ))
        }
        Err(Error::IncompatibleWalls { failed }) => {
            let mut r = pexp_check(ws)?;
            r.lines
                .push(format!("not a piecewise exponential function ({failed} wall(s) failed); nothing pushed forward"));
            Ok(r)
        }
        Err(e) => Err(e.into()),
    }
}

fn points(ws: &WorkspaceFiles) -> Result<Report> {
    let d = need(&ws.divisor, "--divisor")?;
    let pts = polytope_points(&ws.fan, d)?;
    let lines = if pts.is_empty() {
        vec!["(no lattice points)".to_string()]
    } else {
        pts.iter().map(ToString::to_string).collect()
    };
    Ok(Report::ok(
        lines,
        json!({ "count": pts.len(), "points": pts }),
    ))
}
