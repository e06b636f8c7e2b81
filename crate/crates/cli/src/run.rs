//! Scenario validation and check execution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vkwave_core::balance::{self, Region};
use vkwave_core::conservation::{self, Law, DEFAULT_DIVERGENCE_STEP};
use vkwave_core::fields::{PlateParams, Point};
use vkwave_core::jumps::{self, CLOSED_FORM_LAWS};
use vkwave_core::solutions::{self, AccelerationWave, InvariantSolution, PiecewiseField, Side, SmoothAcross};
use vkwave_core::wavefront::{project_to_front, CircleFront, LineFront};
use vkwave_core::Error;

use crate::report::{CheckReport, Record, Report};
use crate::scenario::{
    CheckKind, CheckSpec, Expect, FrontSpec, LawRef, Reference, Sample, Scenario, ScenarioError, SolutionSpec,
};

/// Redraws allowed per sampled point that lands too close to the front.
const MAX_REDRAWS: usize = 1000;

enum Points {
    Explicit(Vec<Point>),
    Sampled(Sample),
}

struct Plan {
    name: String,
    kind: CheckKind,
    expect: Expect,
    tolerance: f64,
    laws: Vec<Law>,
    points: Points,
    times: Vec<f64>,
    step: Option<f64>,
    reference: Reference,
}

struct Model {
    field: Box<dyn PiecewiseField>,
    wave: Option<AccelerationWave>,
    region: Option<Region>,
}

fn core_error(section: &str) -> impl Fn(Error) -> ScenarioError + '_ {
    move |e| match e {
        Error::InvalidParameter { field, .. } => ScenarioError::invalid(format!("{section}.{field}"), e),
        _ => ScenarioError::invalid(section, e),
    }
}

fn build_model(s: &Scenario) -> Result<Model, ScenarioError> {
    let p = &s.plate;
    let params = PlateParams::new(p.youngs_modulus, p.poisson_ratio, p.thickness, p.areal_density)
        .map_err(core_error("plate"))?;
    let smooth = |inv: InvariantSolution| -> Result<Box<dyn PiecewiseField>, ScenarioError> {
        Ok(match &s.front {
            None => Box::new(inv),
            Some(FrontSpec::Line { a1, a2, a3, a0 }) => Box::new(SmoothAcross {
                field: inv,
                front: LineFront::new(*a1, *a2, *a3, *a0).map_err(core_error("front"))?,
            }),
            Some(FrontSpec::Circle {
                center,
                radius,
                radial_speed,
            }) => Box::new(SmoothAcross {
                field: inv,
                front: CircleFront::new(*center, *radius, *radial_speed).map_err(core_error("front"))?,
            }),
        })
    };
    let (field, wave) = match &s.solution {
        SolutionSpec::Zero { speed } => {
            let inv = InvariantSolution::zero(*speed, params).map_err(core_error("solution"))?;
            (smooth(inv)?, None)
        }
        SolutionSpec::Invariant { u, phi, speed } => {
            let inv = InvariantSolution::new(*u, *phi, *speed, params).map_err(core_error("solution"))?;
            (smooth(inv)?, None)
        }
        SolutionSpec::AccelerationWave { u, phi, speed, c1, c2 } => {
            if s.front.is_some() {
                return Err(ScenarioError::invalid(
                    "front",
                    "an acceleration wave carries its own front x1 = speed*t; remove this section",
                ));
            }
            let ahead = InvariantSolution::new(*u, *phi, *speed, params).map_err(core_error("solution"))?;
            let wave = AccelerationWave::new(ahead, *c1, *c2).map_err(core_error("solution"))?;
            (Box::new(wave.clone()) as Box<dyn PiecewiseField>, Some(wave))
        }
    };
    let region = match &s.region {
        None => None,
        Some(r) => Some(
            Region::with_grid(r.x1[0], r.x1[1], r.x2[0], r.x2[1], r.order, r.cells).map_err(core_error("region"))?,
        ),
    };
    Ok(Model { field, wave, region })
}

fn positive(path: String, v: f64) -> Result<f64, ScenarioError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(ScenarioError::invalid(path, format!("must be finite and > 0, got {v}")))
    }
}

fn resolve_law(path: String, r: &LawRef) -> Result<Law, ScenarioError> {
    match r {
        LawRef::Index(j) => Law::from_index(*j)
            .ok_or_else(|| ScenarioError::invalid(path, format!("law numbers run from 1 to 14, got {j}"))),
        LawRef::Name(n) => Law::from_name(n).map_err(|e| ScenarioError::invalid(path, e)),
    }
}

fn plan_check(i: usize, c: &CheckSpec, s: &Scenario, m: &Model) -> Result<Plan, ScenarioError> {
    let at = |key: &str| format!("checks[{i}].{key}");
    let kind = c.kind;
    let refuse = |key: &str, present: bool| {
        if present {
            Err(ScenarioError::invalid(at(key), format!("not used by `{}` checks", kind.as_str())))
        } else {
            Ok(())
        }
    };
    refuse("laws", c.laws.is_some() && !kind.takes_laws())?;
    refuse("points", c.points.is_some() && !kind.takes_points())?;
    refuse("sample", c.sample.is_some() && !kind.takes_points())?;
    refuse("times", c.times.is_some() && kind != CheckKind::Balance)?;
    refuse("reference", c.reference.is_some() && kind != CheckKind::Balance)?;
    refuse("step", c.step.is_some() && !matches!(kind, CheckKind::Conservation | CheckKind::Balance))?;
    if c.points.is_some() && c.sample.is_some() {
        return Err(ScenarioError::invalid(at("sample"), "give either `points` or `sample`, not both"));
    }

    let t = &s.tolerances;
    let default_tol = match kind {
        CheckKind::Conservation => t.finite_difference,
        CheckKind::Balance => t.quadrature,
        _ => t.analytic,
    };
    let tolerance = positive(at("tolerance"), c.tolerance.unwrap_or(default_tol))?;
    let step = c.step.map(|h| positive(at("step"), h)).transpose()?;

    let laws = match &c.laws {
        Some(list) => {
            let mut out = Vec::with_capacity(list.len());
            for (k, r) in list.iter().enumerate() {
                let law = resolve_law(at(&format!("laws[{k}]")), r)?;
                if kind == CheckKind::Table2 && !CLOSED_FORM_LAWS.contains(&law) {
                    return Err(ScenarioError::invalid(
                        at(&format!("laws[{k}]")),
                        format!("law `{law}` has no closed-form jump condition; use a balance_jump check"),
                    ));
                }
                out.push(law);
            }
            out
        }
        None if kind == CheckKind::Table2 => CLOSED_FORM_LAWS.to_vec(),
        None if kind.takes_laws() => Law::ALL.to_vec(),
        None => Vec::new(),
    };

    let points = match (&c.points, &c.sample) {
        (Some(pts), _) => {
            for (k, p) in pts.iter().enumerate() {
                if p.iter().any(|v| !v.is_finite()) {
                    return Err(ScenarioError::invalid(at(&format!("points[{k}]")), "coordinates must be finite"));
                }
            }
            Points::Explicit(pts.iter().map(|p| Point(*p)).collect())
        }
        (None, Some(sample)) => {
            for (key, r) in [("x1", sample.x1), ("x2", sample.x2), ("t", sample.t)] {
                if !(r[0].is_finite() && r[1].is_finite() && r[0] <= r[1]) {
                    return Err(ScenarioError::invalid(
                        at(&format!("sample.{key}")),
                        "range must be finite with low <= high",
                    ));
                }
            }
            Points::Sampled(sample.clone())
        }
        (None, None) => Points::Sampled(Sample::default()),
    };

    let times = c.times.clone().unwrap_or_else(|| vec![0.0]);
    if let Some(k) = times.iter().position(|t| !t.is_finite()) {
        return Err(ScenarioError::invalid(at(&format!("times[{k}]")), "must be finite"));
    }
    let reference = c.reference.unwrap_or_default();

    if (kind.on_front() || reference == Reference::FrontLine) && m.field.front().is_none() {
        return Err(ScenarioError::invalid(
            at("kind"),
            format!(
                "`{}` needs a front; add a [front] section or use the acceleration_wave family",
                kind.as_str()
            ),
        ));
    }
    if kind == CheckKind::EjOj && m.wave.is_none() {
        return Err(ScenarioError::invalid(at("kind"), "`ej_oj` needs the acceleration_wave family"));
    }
    if kind == CheckKind::Balance && m.region.is_none() {
        return Err(ScenarioError::invalid(at("kind"), "`balance` needs a [region] section"));
    }

    Ok(Plan {
        name: c.name.clone().unwrap_or_else(|| kind.as_str().to_string()),
        kind,
        expect: c.expect,
        tolerance,
        laws,
        points,
        times,
        step,
        reference,
    })
}

/// Checks that every reference in the scenario resolves, without running anything.
pub fn validate(s: &Scenario) -> Result<(), ScenarioError> {
    let m = build_model(s)?;
    for (i, c) in s.checks.iter().enumerate() {
        plan_check(i, c, s, &m)?;
    }
    Ok(())
}

/// Runs every check in order. Validation problems abort before any check
/// runs; a check that fails at run time is reported with status `error` and
/// the remaining checks still run.
pub fn run_scenario(s: &Scenario) -> Result<Report, ScenarioError> {
    let m = build_model(s)?;
    let plans = s
        .checks
        .iter()
        .enumerate()
        .map(|(i, c)| plan_check(i, c, s, &m))
        .collect::<Result<Vec<_>, _>>()?;
    let checks = plans
        .iter()
        .enumerate()
        .map(|(i, plan)| {
            let mut records = Vec::new();
            let error = execute(plan, &m, check_seed(s.seed, i), &mut records)
                .err()
                .map(|e| e.to_string());
            CheckReport::graded(i, plan.name.clone(), plan.kind.as_str(), plan.expect, plan.tolerance, records, error)
        })
        .collect();
    Ok(Report::new(s.clone(), checks))
}

/// Independent stream per check, so adding a check leaves the others' points alone.
fn check_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn draw(rng: &mut ChaCha8Rng, s: &Sample) -> Point {
    let mut u = |r: [f64; 2]| if r[0] == r[1] { r[0] } else { rng.gen_range(r[0]..r[1]) };
    let x1 = u(s.x1);
    let x2 = u(s.x2);
    let t = u(s.t);
    Point::new(x1, x2, t)
}

/// Evaluates `f` at each requested point. Sampled points that land on or next
/// to the front are redrawn; explicit ones are reported as errors.
fn for_points(
    plan: &Plan,
    seed: u64,
    mut f: impl FnMut(Point) -> Result<Vec<Record>, Error>,
    out: &mut Vec<Record>,
) -> Result<(), Error> {
    match &plan.points {
        Points::Explicit(pts) => {
            for p in pts {
                out.extend(f(*p)?);
            }
        }
        Points::Sampled(sample) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..sample.count {
                let mut tries = 0;
                loop {
                    match f(draw(&mut rng, sample)) {
                        Ok(rs) => {
                            out.extend(rs);
                            break;
                        }
                        Err(Error::AmbiguousSide { .. } | Error::TooCloseToFront { .. }) if tries < MAX_REDRAWS => {
                            tries += 1;
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }
    Ok(())
}

fn execute(plan: &Plan, m: &Model, seed: u64, out: &mut Vec<Record>) -> Result<(), Error> {
    let field = m.field.as_ref();
    let params = *field.params();
    match plan.kind {
        CheckKind::PdeResidual => for_points(
            plan,
            seed,
            |p| {
                let r = solutions::pde_residual(&solutions::eval_jet(field, p, Side::Auto)?, &params);
                Ok(vec![
                    Record::new("plate_equation", r.r1, r.scale1).at(p.0),
                    Record::new("compatibility_equation", r.r2, r.scale2).at(p.0),
                ])
            },
            out,
        ),
        CheckKind::Conservation => {
            let h = plan.step.unwrap_or(DEFAULT_DIVERGENCE_STEP);
            for_points(
                plan,
                seed,
                |p| {
                    plan.laws
                        .iter()
                        .map(|&law| {
                            let r = conservation::conservation_residual(field, law, p, h)?;
                            Ok(Record::new(law.name(), r.residual, r.scale).at(p.0))
                        })
                        .collect()
                },
                out,
            )
        }
        CheckKind::DynamicJumps | CheckKind::BalanceJump | CheckKind::Table2 => {
            let front = field.front().ok_or(Error::NoFront)?;
            for_points(
                plan,
                seed,
                |p| {
                    let q = project_to_front(front, p)?;
                    let rec = jumps::extract_jumps(field, q)?;
                    match plan.kind {
                        CheckKind::DynamicJumps => {
                            let d = jumps::dynamic_jump_residuals(&rec, &params);
                            Ok(vec![
                                Record::new("momentum", d.momentum.value, d.momentum.scale).at(q.0),
                                Record::new("compatibility", d.compatibility.value, d.compatibility.scale).at(q.0),
                            ])
                        }
                        CheckKind::BalanceJump => Ok(plan
                            .laws
                            .iter()
                            .map(|&law| {
                                let r = jumps::balance_jump_residual(law, &rec, &params);
                                Record::new(law.name(), r.value, r.scale).at(q.0)
                            })
                            .collect()),
                        _ => plan
                            .laws
                            .iter()
                            .map(|&law| {
                                let r = jumps::table2_residual(law, &rec, &params)?;
                                Ok(Record::new(law.name(), r.value, r.scale).at(q.0))
                            })
                            .collect(),
                    }
                },
                out,
            )
        }
        CheckKind::EjOj => {
            let wave = m.wave.as_ref().ok_or(Error::NoFront)?;
            let r = jumps::ej_oj_residuals(wave);
            out.push(Record::new("energy", r.energy.value, r.energy.scale));
            out.push(Record::new("scaling", r.scaling.value, r.scaling.scale));
            Ok(())
        }
        CheckKind::Balance => {
            let region = m.region.as_ref().ok_or(Error::InvalidParameter {
                field: "region",
                value: f64::NAN,
                reason: "balance checks need a region",
            })?;
            for &t in &plan.times {
                let dt = plan.step.unwrap_or_else(|| balance::default_time_step(t));
                for &law in &plan.laws {
                    let b = balance::balance_residual(field, law, region, t, dt)?;
                    let rec = match plan.reference {
                        Reference::Zero => Record::new(law.name(), b.residual, b.scale),
                        Reference::FrontLine => {
                            let j = balance::front_jump_integral(field, law, region, t)?;
                            Record::new(law.name(), b.residual - j.value, b.scale.max(j.scale))
                        }
                    };
                    out.push(rec.at_time(t));
                }
            }
            Ok(())
        }
    }
}
