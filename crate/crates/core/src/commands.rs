//! The subcommands behind the `equipoly` binary.
//!
//! Every command returns its standard output as text together with a pass
//! flag, so the binary only prints and picks an exit code.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use serde::Serialize;

use crate::class::{ClassTag, ConfigSpaceClass};
use crate::error::{Error, Result};
use crate::geometry::{pi_fraction, residual, BondAngle, Polygon};
use crate::hexagon::{self, named_configurations, Regime, Sign};
use crate::io::{export, records_from_json, to_json, ConfigRecord, Format};
use crate::oracle::{
    solve_with, HexagonSystem, OracleOptions, PentagonSystem, QuadSystem, ResidualSystem,
    SolutionCloud,
};
use crate::pi3::pi3_families;
use crate::small_n::{classify_small, construct_small, fold_angle};
use crate::topology::{
    components, directed_hausdorff, hausdorff, summarize, trace_loop, ComponentKind,
    ComponentReport,
};
use crate::torus::wrap_angle;

/// Residual bound for closed-form constructions.
pub const BUILD_TOL: f64 = 1e-9;
/// Closure bound between the first and last frame of a deformation loop.
pub const LOOP_CLOSURE_TOL: f64 = 1e-6;
/// Default `eps` in units of the grid spacing.
pub const EPS_FACTOR: f64 = 1.5;
/// Hausdorff bound in units of the grid spacing.
pub const HAUSDORFF_FACTOR: f64 = 2.0;
/// Closed-form samples per loop or circle in the reference set.
pub const REFERENCE_DENSITY: usize = 1024;
pub const DEFAULT_RESOLUTION: usize = 48;
pub const DEFAULT_STEPS: usize = 256;
pub const MIN_SAMPLE_RESOLUTION: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Classify,
    Build,
    Sample,
    Verify,
    Deform,
    Export,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub theta: Option<BondAngle>,
    pub resolution: usize,
    pub eps: Option<f64>,
    pub steps: usize,
    pub loop_id: usize,
    /// `None`: human-readable text where a command has it.
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub input: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            n: 6,
            theta: None,
            resolution: DEFAULT_RESOLUTION,
            eps: None,
            steps: DEFAULT_STEPS,
            loop_id: 0,
            format: None,
            out: None,
            input: None,
        }
    }

    fn theta(&self) -> Result<BondAngle> {
        self.theta
            .ok_or_else(|| Error::InvalidArgument("missing bond angle (--theta)".into()))
    }
}

/// What a command prints and whether its checks passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        Command::Classify => cmd_classify(cfg.n, cfg.theta()?, cfg.format),
        Command::Build => {
            let records = build_records(cfg.n, cfg.theta()?)?;
            write_records(&records, cfg.format.unwrap_or(Format::Json), cfg)
        }
        Command::Sample => {
            let records = cmd_sample(cfg.n, cfg.theta()?, cfg.resolution)?;
            write_records(&records, cfg.format.unwrap_or(Format::Json), cfg)
        }
        Command::Verify => {
            let report = cmd_verify(cfg.n, cfg.theta()?, cfg.resolution, cfg.eps)?;
            let text = match cfg.format {
                None => report.to_text(),
                Some(Format::Json) => to_json(&report)?,
                Some(f) => {
                    return Err(Error::InvalidArgument(format!("verify cannot write {f:?}")))
                }
            };
            Ok(Outcome {
                text,
                pass: report.pass,
            })
        }
        Command::Deform => {
            let records = cmd_deform(cfg.theta()?, cfg.loop_id, cfg.steps)?;
            write_records(&records, cfg.format.unwrap_or(Format::Json), cfg)
        }
        Command::Export => {
            let records = match &cfg.input {
                Some(path) => records_from_json(&fs::read_to_string(path)?)?,
                None => build_records(cfg.n, cfg.theta()?)?,
            };
            let format = cfg
                .format
                .ok_or_else(|| Error::InvalidArgument("export needs --format".into()))?;
            write_records(&records, format, cfg)
        }
    }
}

/// Writes to `--out` (or standard output) and checks every record closes.
fn write_records(records: &[ConfigRecord], format: Format, cfg: &RunConfig) -> Result<Outcome> {
    let pass = records.iter().all(|r| r.residual < BUILD_TOL);
    let text = match export(records, format, cfg.out.as_deref())? {
        Some(text) => text,
        None => {
            let out = cfg
                .out
                .as_deref()
                .map(|p| p.display().to_string())
                .unwrap_or_default();
            let worst = records.iter().map(|r| r.residual).fold(0.0, f64::max);
            format!(
                "wrote {} configurations to {out} (max residual {worst:.3e})\n",
                records.len()
            )
        }
    };
    Ok(Outcome { text, pass })
}

fn require_n(n: usize, allowed: &[usize]) -> Result<()> {
    if allowed.contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "n must be one of {allowed:?}, got {n}"
        )))
    }
}

pub fn classify_n(n: usize, theta: BondAngle) -> Result<ConfigSpaceClass> {
    require_n(n, &[3, 4, 5, 6])?;
    if n == 6 {
        Ok(hexagon::classify(theta))
    } else {
        classify_small(n, theta)
    }
}

/// Closed-form configurations: the named hexagon families, or the small
/// polygons (both mirror images of a folded quadrilateral).
pub fn build_records(n: usize, theta: BondAngle) -> Result<Vec<ConfigRecord>> {
    let class = classify_n(n, theta)?;
    if n == 6 {
        return Ok(named_configurations(theta)
            .iter()
            .map(|c| {
                ConfigRecord::new(
                    &c.polygon,
                    theta,
                    c.family.to_string(),
                    Some(c.torus.to_array().to_vec()),
                )
            })
            .collect());
    }
    let signs: &[Sign] = match class.tag {
        ClassTag::Empty => &[],
        ClassTag::TwoPoints => &[Sign::Plus, Sign::Minus],
        _ => &[Sign::Plus],
    };
    signs
        .iter()
        .map(|&sign| {
            let p = construct_small(n, theta, sign)?;
            let family = match (n, class.tag) {
                (3, _) => "RegularTriangle".to_string(),
                (4, ClassTag::TwoPoints) => format!(
                    "FoldedRhombus{}",
                    if sign == Sign::Plus { "+" } else { "-" }
                ),
                (4, _) if theta.theta() == 0.0 => "MultiEdge".to_string(),
                (4, _) => "Square".to_string(),
                _ if theta.is_near(pi_fraction(1, 5)) => "RegularStarPentagon".to_string(),
                _ => "RegularPentagon".to_string(),
            };
            Ok(ConfigRecord::new(&p, theta, family, None))
        })
        .collect()
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    n: usize,
    theta: f64,
    class: &'a ConfigSpaceClass,
    component_count: usize,
    families: &'a [ConfigRecord],
}

pub fn cmd_classify(n: usize, theta: BondAngle, format: Option<Format>) -> Result<Outcome> {
    let class = classify_n(n, theta)?;
    let families = build_records(n, theta)?;
    let pass = families.iter().all(|r| r.residual < BUILD_TOL);
    let text = match format {
        Some(Format::Json) => to_json(&ClassifyReport {
            n,
            theta: theta.theta(),
            class: &class,
            component_count: class.tag.component_count(),
            families: &families,
        })?,
        Some(f) => {
            return Err(Error::InvalidArgument(format!(
                "classify cannot write {f:?}"
            )))
        }
        None => {
            let mut s = String::new();
            let _ = writeln!(s, "n = {n}, theta = {}", theta.theta());
            let _ = writeln!(
                s,
                "class: {} ({} components)",
                class.tag,
                class.tag.component_count()
            );
            let _ = writeln!(s, "detail: {}", class.detail);
            if !families.is_empty() {
                let _ = writeln!(s, "families:");
            }
            for r in &families {
                let at = match &r.torus_point {
                    Some(t) => format!(
                        "  at ({})",
                        t.iter()
                            .map(|v| format!("{v:.5}"))
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                    None => String::new(),
                };
                let _ = writeln!(s, "  {:<16}{at}  residual {:.1e}", r.family, r.residual);
            }
            s
        }
    };
    Ok(Outcome { text, pass })
}

/// Residual system of the brute-force solver for `n`.
pub fn oracle_system(n: usize, theta: BondAngle) -> Result<Box<dyn ResidualSystem>> {
    require_n(n, &[4, 5, 6])?;
    Ok(match n {
        4 => Box::new(QuadSystem { theta }),
        5 => Box::new(PentagonSystem { theta }),
        _ => Box::new(HexagonSystem { theta }),
    })
}

pub fn oracle_cloud(n: usize, theta: BondAngle, res: usize) -> Result<SolutionCloud> {
    let sys = oracle_system(n, theta)?;
    Ok(solve_with(sys.as_ref(), OracleOptions::new(res)))
}

pub fn cmd_sample(n: usize, theta: BondAngle, res: usize) -> Result<Vec<ConfigRecord>> {
    if res < MIN_SAMPLE_RESOLUTION {
        return Err(Error::InvalidArgument(format!(
            "resolution must be >= {MIN_SAMPLE_RESOLUTION}, got {res}"
        )));
    }
    let sys = oracle_system(n, theta)?;
    let cloud = solve_with(sys.as_ref(), OracleOptions::new(res));
    Ok(cloud
        .points
        .iter()
        .map(|x| {
            let (poly, t) = sys.configuration(x);
            ConfigRecord::new(&poly, t, "oracle", Some(x.clone()))
        })
        .collect())
}

/// Closed-form points in the solver's coordinates: dense loop samples and
/// the named configurations for hexagons, the six circles and two chairs at
/// `pi/3`, the fold angles `+-delta` for quadrilaterals and the planar
/// pentagon at `(0, 0)`.
pub fn reference_points(n: usize, theta: BondAngle, density: usize) -> Result<Vec<Vec<f64>>> {
    require_n(n, &[4, 5, 6])?;
    let tag = classify_n(n, theta)?.tag;
    if tag == ClassTag::Empty {
        return Ok(Vec::new());
    }
    Ok(match n {
        4 => {
            let delta = fold_angle(theta).map(|f| f.delta).unwrap_or_default();
            vec![vec![wrap_angle(delta)], vec![wrap_angle(-delta)]]
        }
        5 => vec![vec![0.0, 0.0]],
        _ => {
            let loops = match hexagon::regime(theta) {
                Regime::OneLoop => 1,
                Regime::TwoLoops => 2,
                Regime::Pi3 => {
                    return Ok(pi3_families(density)
                        .into_iter()
                        .map(|(_, t)| t.to_array().to_vec())
                        .collect())
                }
                _ => 0,
            };
            let mut pts = Vec::new();
            for id in 0..loops {
                pts.extend(
                    hexagon::deformation_loop(theta, id, density)?
                        .iter()
                        .map(|t| t.to_array().to_vec()),
                );
            }
            let named = if loops == 0 {
                named_configurations(theta)
            } else {
                hexagon::isolated_configurations(theta)
            };
            pts.extend(named.iter().map(|c| c.torus.to_array().to_vec()));
            pts
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub theta: f64,
    pub resolution: usize,
    pub eps: f64,
    pub class: ConfigSpaceClass,
    pub cloud_points: usize,
    pub candidates: usize,
    pub max_residual: f64,
    pub reference_points: usize,
    pub hausdorff: f64,
    pub hausdorff_bound: f64,
    pub expected: String,
    pub found: String,
    pub components: ComponentReport,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "verify n={} theta={} res={} eps={:.6}",
            self.n, self.theta, self.resolution, self.eps
        );
        let _ = writeln!(s, "class: {} ({})", self.class.tag, self.class.detail);
        let _ = writeln!(
            s,
            "oracle: {} points from {} candidates, max residual {:.3e}",
            self.cloud_points, self.candidates, self.max_residual
        );
        for c in &self.components.components {
            let sample: Vec<String> = c.sample.iter().map(|v| format!("{v:.5}")).collect();
            let _ = writeln!(
                s,
                "  {:<14} size {:>5}  diameter {:.5}  branches {}..{}  at ({})",
                c.kind.to_string(),
                c.size,
                c.diameter,
                c.branches.0,
                c.branches.1,
                sample.join(", ")
            );
        }
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{} {}: {}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        let _ = writeln!(s, "{}", if self.pass { "PASS" } else { "FAIL" });
        s
    }
}

/// Oracle cloud against the closed forms: Hausdorff distance, component
/// kinds against the classification, and closure of every loop.
pub fn cmd_verify(
    n: usize,
    theta: BondAngle,
    res: usize,
    eps: Option<f64>,
) -> Result<VerifyReport> {
    require_n(n, &[4, 5, 6])?;
    let class = classify_n(n, theta)?;
    let sys = oracle_system(n, theta)?;
    let cloud = solve_with(sys.as_ref(), OracleOptions::new(res));
    let h = cloud.grid_spacing;
    let min_eps = EPS_FACTOR * h;
    let eps = eps.unwrap_or(min_eps);
    if eps < min_eps * (1.0 - 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "eps must be at least {EPS_FACTOR} grid spacings ({min_eps:.6}), got {eps}"
        )));
    }
    let max_residual = cloud
        .points
        .iter()
        .map(|x| {
            let (poly, t) = sys.configuration(x);
            residual(&poly, t)
                .map(|r| r.max_residual)
                .unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max);

    // Points merged as congruent still count as reached.
    let reference = reference_points(n, theta, REFERENCE_DENSITY)?;
    let mut reachable = cloud.points.clone();
    reachable.extend(cloud.identified.iter().map(|(_, dropped)| dropped.clone()));
    let d = if reference.is_empty() || cloud.points.is_empty() {
        hausdorff(&cloud.points, &reference)
    } else {
        directed_hausdorff(&cloud.points, &reference)
            .max(directed_hausdorff(&reference, &reachable))
    };
    let bound = HAUSDORFF_FACTOR * h;

    let report = components(&cloud, eps);
    let (loops, graphs, points) = class.tag.expected_kinds();
    let expected = summarize(loops, graphs, points);
    let found = report.summary();
    let unclosed: Vec<String> = report
        .components
        .iter()
        .filter(|c| c.kind == ComponentKind::Loop)
        .map(|c| trace_loop(&cloud.points, &c.members))
        .filter(|t| !t.is_closed(eps))
        .map(|t| format!("{:.5}", t.closing_gap))
        .collect();

    let checks = vec![
        Check {
            name: "residuals".into(),
            pass: max_residual < cloud.tol_refined,
            detail: format!("max {max_residual:.3e} < {:.0e}", cloud.tol_refined),
        },
        Check {
            name: "hausdorff".into(),
            pass: d < bound,
            detail: format!(
                "{d:.6} < {bound:.6} against {} closed-form points",
                reference.len()
            ),
        },
        Check {
            name: "components".into(),
            pass: found == expected,
            detail: format!("{found} (expected {expected})"),
        },
        Check {
            name: "loops".into(),
            pass: unclosed.is_empty(),
            detail: if unclosed.is_empty() {
                "every loop closes within eps".into()
            } else {
                format!("gaps {}", unclosed.join(", "))
            },
        },
    ];
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport {
        n,
        theta: theta.theta(),
        resolution: cloud.resolution,
        eps,
        class,
        cloud_points: cloud.len(),
        candidates: cloud.candidates,
        max_residual,
        reference_points: reference.len(),
        hausdorff: d,
        hausdorff_bound: bound,
        expected,
        found,
        components: report,
        checks,
        pass,
    })
}

/// Frames of a deformation loop; the last frame repeats the first.
pub fn cmd_deform(theta: BondAngle, loop_id: usize, steps: usize) -> Result<Vec<ConfigRecord>> {
    let torus = hexagon::deformation_loop(theta, loop_id, steps)?;
    let family = format!("loop{loop_id}");
    Ok(torus
        .iter()
        .map(|t| {
            let p: Polygon = hexagon::build_hexagon(theta, *t);
            ConfigRecord::new(&p, theta, family.clone(), Some(t.to_array().to_vec()))
        })
        .collect())
}

/// Largest vertex displacement between the first and last frame.
pub fn loop_closure(records: &[ConfigRecord]) -> f64 {
    match (records.first(), records.last()) {
        (Some(a), Some(b)) => a
            .vertices
            .iter()
            .zip(&b.vertices)
            .flat_map(|(u, v)| u.iter().zip(v).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max),
        _ => 0.0,
    }
}
