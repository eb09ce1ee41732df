//! Residual and trace with respect to the hyperplane `H: x_n = 0`, the
//! Castelnuovo inequality
//!
//! ```text
//! dim (I_X)_d <= dim (I_{Res_H X})_{d-1} + dim (I_{Tr_H X, H})_d
//! ```
//!
//! and replays of the two interpolation induction steps: the hyperplane
//! step for `n >= 4` and the quadric step for a double point in `P^3`.
//!
//! Residual and trace are computed component by component:
//!
//! | component                          | residual        | trace                |
//! |------------------------------------|-----------------|----------------------|
//! | line not in `H`                    | the line        | the point `L ∩ H`    |
//! | line in `H`                        | nothing         | the line             |
//! | `m`-fold point on `H`              | `(m-1)`-fold    | `m`-fold point in `H`|
//! | `m`-fold point off `H`             | unchanged       | nothing              |
//! | simple point on / off `H`          | nothing / kept  | kept / nothing       |
//! | sundial, lines in `H`, tail off it | its vertex      | its two lines        |
//! | sundial with vertex off `H`        | unchanged       | two points           |

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::combinatorics::{
    binomial, er_params, fat_point_conditions, forms_dim, param_inequalities, ErParams,
    ParamInequalities,
};
use crate::error::{Error, Result};
use crate::linear_system::{
    bidegree_dim, config_rank, instance_dim, trial_seed, BidegreeConditions,
};
use crate::scheme::{
    build_config, Component, Constraint, FieldSpec, Placement, Recipe, SchemeConfig,
};

#[derive(Clone, Debug, Serialize)]
pub struct SplitResult {
    /// Lives in `P^n`, read in degree `d - 1`.
    pub residual: SchemeConfig,
    /// Lives in `H = P^(n-1)`, read in degree `d`.
    pub trace: SchemeConfig,
    pub residual_degree: u32,
    pub trace_degree: u32,
}

fn incidence(index: usize, c: &Component, reason: &str) -> Error {
    Error::Incidence {
        index,
        kind: c.kind_name(),
        reason: reason.to_string(),
    }
}

/// Splits `config` along `H: x_n = 0`.
pub fn split(config: &SchemeConfig, d: u32) -> Result<SplitResult> {
    if config.n < 3 {
        return Err(Error::InvalidInstance(format!(
            "hyperplane splits need n >= 3 (got {})",
            config.n
        )));
    }
    if d == 0 {
        return Err(Error::InvalidInstance("cannot split in degree 0".into()));
    }
    let f = config.prime();
    let mut residual = Vec::new();
    let mut trace = Vec::new();
    for (i, c) in config.components.iter().enumerate() {
        match c {
            Component::Line { line, constraint } => {
                if line.in_hyperplane() {
                    if *constraint == Constraint::Generic {
                        return Err(incidence(i, c, "generic line lies inside the hyperplane"));
                    }
                    trace.push(Component::Line {
                        line: line.restrict_to_hyperplane(),
                        constraint: Constraint::Generic,
                    });
                } else {
                    trace.push(Component::SimplePoint {
                        point: line.meet_hyperplane(f)?.restrict_to_hyperplane(),
                        constraint: Constraint::Generic,
                    });
                    residual.push(c.clone());
                }
            }
            Component::FatPoint {
                point,
                multiplicity,
                constraint,
            } => {
                if point.in_hyperplane() {
                    if *multiplicity > 1 {
                        residual.push(Component::FatPoint {
                            point: point.clone(),
                            multiplicity: multiplicity - 1,
                            constraint: constraint.clone(),
                        });
                    }
                    trace.push(Component::FatPoint {
                        point: point.restrict_to_hyperplane(),
                        multiplicity: *multiplicity,
                        constraint: Constraint::Generic,
                    });
                } else {
                    residual.push(c.clone());
                }
            }
            Component::SimplePoint { point, constraint } => {
                if point.in_hyperplane() {
                    let constraint = match constraint {
                        Constraint::OnLine { line } if line.in_hyperplane() => Constraint::OnLine {
                            line: line.restrict_to_hyperplane(),
                        },
                        _ => Constraint::Generic,
                    };
                    trace.push(Component::SimplePoint {
                        point: point.restrict_to_hyperplane(),
                        constraint,
                    });
                } else {
                    residual.push(c.clone());
                }
            }
            Component::Sundial { sundial, .. } => {
                let lines_in = sundial.first.in_hyperplane() && sundial.second.in_hyperplane();
                if lines_in && !sundial.direction.in_hyperplane() {
                    residual.push(Component::SimplePoint {
                        point: sundial.vertex.clone(),
                        constraint: Constraint::InHyperplane,
                    });
                    for line in [&sundial.first, &sundial.second] {
                        trace.push(Component::Line {
                            line: line.restrict_to_hyperplane(),
                            constraint: Constraint::Generic,
                        });
                    }
                } else if !sundial.vertex.in_hyperplane() {
                    for line in [&sundial.first, &sundial.second] {
                        trace.push(Component::SimplePoint {
                            point: line.meet_hyperplane(f)?.restrict_to_hyperplane(),
                            constraint: Constraint::Generic,
                        });
                    }
                    residual.push(c.clone());
                } else {
                    return Err(incidence(
                        i,
                        c,
                        "vertex on the hyperplane without the conic inside it",
                    ));
                }
            }
        }
    }
    Ok(SplitResult {
        residual: SchemeConfig::new(config.n, config.field, residual)?,
        trace: SchemeConfig::new(config.n - 1, config.field, trace)?,
        residual_degree: d - 1,
        trace_degree: d,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub lhs: u64,
    pub rhs_res: u64,
    pub rhs_tr: u64,
    pub holds: bool,
}

/// Evaluates both sides of the Castelnuovo inequality for `H: x_n = 0`.
pub fn check_inequality(config: &SchemeConfig, d: u32) -> Result<InequalityCheck> {
    let parts = split(config, d)?;
    let (lhs, (res, tr)) = rayon::join(
        || config_rank(config, d),
        || {
            rayon::join(
                || config_rank(&parts.residual, parts.residual_degree),
                || config_rank(&parts.trace, parts.trace_degree),
            )
        },
    );
    let (lhs, rhs_res, rhs_tr) = (lhs?.1, res?.1, tr?.1);
    Ok(InequalityCheck {
        lhs,
        rhs_res,
        rhs_tr,
        holds: lhs <= rhs_res + rhs_tr,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayStep {
    pub step: String,
    pub scheme: String,
    pub ambient: u32,
    pub degree: u32,
    pub expected: u64,
    /// Minimum over trials.
    pub got: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReplayReport {
    pub kind: &'static str,
    pub n: u32,
    pub d: u32,
    pub m: u32,
    pub params: ErParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inequalities: Option<ParamInequalities>,
    pub steps: Vec<ReplayStep>,
    pub castelnuovo_holds: bool,
    pub prime: u64,
    pub seeds: Vec<u64>,
    pub pass: bool,
}

impl ReplayReport {
    pub fn step(&self, name: &str) -> Option<&ReplayStep> {
        self.steps.iter().find(|s| s.step == name)
    }
}

fn to_u32(x: &BigInt, what: &str) -> Result<u32> {
    x.to_u32()
        .ok_or_else(|| Error::Unsupported(format!("{what} = {x} does not fit the oracle")))
}

/// `max{C(deg+n,n) - conditions, 0}` for a component census in degree `deg`.
#[derive(Default)]
struct Census {
    lines: u64,
    conics: u64,
    fat: Option<u32>,
    points: u64,
}

impl Census {
    fn expected(&self, n: u32, deg: u32) -> u64 {
        let deg64 = deg as u64;
        let total = forms_dim(n, deg);
        let fat = self
            .fat
            .map(|m| fat_point_conditions(n, m))
            .unwrap_or_default();
        let used =
            BigInt::from(self.lines * (deg64 + 1) + self.conics * (2 * deg64 + 1) + self.points)
                + fat;
        let left = total - used;
        left.to_u64().unwrap_or(0)
    }
}

/// Collects per-step minima over trials.
struct StepTable {
    steps: Vec<ReplayStep>,
}

impl StepTable {
    fn new() -> Self {
        StepTable { steps: Vec::new() }
    }

    fn record(
        &mut self,
        step: &str,
        scheme: String,
        ambient: u32,
        degree: u32,
        expected: u64,
        got: u64,
    ) {
        match self.steps.iter_mut().find(|s| s.step == step) {
            Some(s) => {
                s.got = s.got.min(got);
                s.pass = s.got == s.expected;
            }
            None => self.steps.push(ReplayStep {
                step: step.to_string(),
                scheme,
                ambient,
                degree,
                expected,
                got,
                pass: got == expected,
            }),
        }
    }
}

fn dim_of(config: &SchemeConfig, d: u32) -> Result<u64> {
    Ok(config_rank(config, d)?.1)
}

/// Replays the hyperplane induction step for lines, `r` points on a line and
/// one `m`-fold point in `P^n`, `n >= 4`.
///
/// For `m < d` the specialized scheme has `r'` sundials whose conics lie in
/// `H`, `e - e' - 2r'` lines in `H`, `e'` generic lines, the fat point and
/// `r` points on a line `L`. Checked: the trace is zero in degree `d`; the
/// residual without the points has dimension `r` in degree `d - 1` and zero
/// after adding `L`; the full residual and the specialized scheme are zero.
///
/// For `m = d` the cone reduction is replayed: the identity
/// `C(d+n,n) - C(d+n-1,n) = C(d+n-1,n-1)` and the projected scheme in
/// `P^(n-1)`.
pub fn replay_hyperplane_step(
    n: u32,
    d: u32,
    m: u32,
    field: FieldSpec,
    trials: usize,
) -> Result<ReplayReport> {
    if n < 4 || m > d || d == 0 {
        return Err(Error::InvalidInstance(format!(
            "hyperplane replay needs n >= 4 and m <= d (got n={n}, d={d}, m={m})"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidInstance("trials must be at least 1".into()));
    }
    let params = er_params(n, d, m)?;
    let e = to_u32(&params.e, "e")?;
    let r = to_u32(&params.r, "r")?;
    let seeds: Vec<u64> = (0..trials).map(|k| trial_seed(field.seed, k)).collect();
    let mut table = StepTable::new();
    let mut castelnuovo_holds = true;

    let inequalities = if m < d {
        let check = param_inequalities(n, d, m)?;
        if !check.all_hold() {
            return Err(Error::Unsupported(format!(
                "parameter inequalities fail for n={n}, d={d}, m={m}"
            )));
        }
        let ep = to_u32(params.e_prime.as_ref().expect("m < d"), "e'")?;
        let rp = to_u32(params.r_prime.as_ref().expect("m < d"), "r'")?;
        let slack = to_u32(&params.slack().expect("m < d"), "e - e' - 2r'")?;
        let recipe = Recipe::new(n)
            .sundials(rp, Placement::InHyperplane)
            .lines(slack, Placement::InHyperplane)
            .lines(ep, Placement::Generic)
            .fat_point(m, Placement::Generic)
            .points(r, Placement::OnCommonLine);
        let trace_expected = Census {
            lines: slack as u64,
            conics: rp as u64,
            points: ep as u64,
            ..Default::default()
        }
        .expected(n - 1, d);
        let y1_expected = Census {
            lines: ep as u64,
            fat: Some(m),
            points: rp as u64,
            ..Default::default()
        }
        .expected(n, d - 1);

        for &seed in &seeds {
            let y = build_config(&recipe, field.with_seed(seed))?;
            let parts = split(&y, d)?;
            let (y1, carrier): (Vec<Component>, Option<Component>) = {
                let mut carrier = None;
                let y1 = parts
                    .residual
                    .components
                    .iter()
                    .filter(|c| match c.constraint() {
                        Constraint::OnLine { line } => {
                            carrier = Some(Component::Line {
                                line: line.clone(),
                                constraint: Constraint::Generic,
                            });
                            false
                        }
                        _ => true,
                    })
                    .cloned()
                    .collect();
                (y1, carrier)
            };
            let y1 = SchemeConfig::new(n, y.field, y1)?;

            let tr = dim_of(&parts.trace, d)?;
            table.record("trace", parts.trace.summary(), n - 1, d, trace_expected, tr);
            let y1_dim = dim_of(&y1, d - 1)?;
            table.record(
                "residual_without_points",
                y1.summary(),
                n,
                d - 1,
                y1_expected,
                y1_dim,
            );
            let y1_line = match carrier {
                Some(line) => y1.with_component(line)?,
                None => y1.clone(),
            };
            let y1_line_dim = dim_of(&y1_line, d - 1)?;
            table.record(
                "residual_with_line",
                format!("{} + carrier line", y1.summary()),
                n,
                d - 1,
                0,
                y1_line_dim,
            );
            let res = dim_of(&parts.residual, d - 1)?;
            table.record("residual", parts.residual.summary(), n, d - 1, 0, res);
            let whole = dim_of(&y, d)?;
            table.record("specialized", y.summary(), n, d, 0, whole);
            castelnuovo_holds &= whole <= res + tr;
        }
        Some(check)
    } else {
        // Cone reduction: forms of degree d through a d-fold point are cones.
        let lhs = forms_dim(n, d) - fat_point_conditions(n, m);
        let rhs = binomial(d as i64 + n as i64 - 1, n as i64 - 1);
        table.record(
            "cone_identity",
            format!(
                "C({},{}) - C({},{}) vs C({},{})",
                d + n,
                n,
                m + n - 1,
                n,
                d + n - 1,
                n - 1
            ),
            n,
            d,
            rhs.to_u64().unwrap_or(u64::MAX),
            lhs.to_u64().unwrap_or(0),
        );
        let projected = Recipe::new(n - 1)
            .lines(e, Placement::Generic)
            .points(r, Placement::OnCommonLine);
        let full = Recipe::new(n)
            .lines(e, Placement::Generic)
            .fat_point(m, Placement::Generic)
            .points(r, Placement::OnCommonLine);
        for &seed in &seeds {
            let w = build_config(&projected, field.with_seed(seed))?;
            table.record("projected", w.summary(), n - 1, d, 0, dim_of(&w, d)?);
            let x = build_config(&full, field.with_seed(seed))?;
            table.record("direct", x.summary(), n, d, 0, dim_of(&x, d)?);
        }
        None
    };

    let pass = castelnuovo_holds && table.steps.iter().all(|s| s.pass);
    Ok(ReplayReport {
        kind: "hyperplane",
        n,
        d,
        m,
        params,
        inequalities,
        steps: table.steps,
        castelnuovo_holds,
        prime: field.prime.modulus(),
        seeds,
        pass,
    })
}

/// How the lines and points are placed on the quadric `Q` for one degree.
struct QuadricLayout {
    /// Same-ruling lines on `Q`.
    ruling: u32,
    /// Generic lines left off `Q`.
    free_lines: u32,
    /// Whether the double point is moved onto `Q`.
    double_on_q: bool,
    /// Simple points moved onto `Q`.
    points_on_q: u32,
    /// Simple points left generic.
    free_points: u32,
    /// Two lines degenerated into a sundial with vertex on `Q`.
    sundial: bool,
}

fn quadric_layout(d: u32, e: u32, r: u32) -> Option<QuadricLayout> {
    let h = d / 3;
    // (ruling, lines used up, double on Q, points on Q, sundial)
    let (ruling, used, double_on_q, points_on_q, sundial) = match d % 3 {
        0 if h >= 2 => (2 * h + 1, 2 * h + 1, false, 2, false),
        1 if h >= 2 => (2 * h + 1, 2 * h + 1, true, 2 * h - 1, false),
        2 if (1..=2).contains(&h) => (2 * h + 2, 2 * h + 2, true, h, false),
        2 if h >= 3 => (2 * h + 2, 2 * h + 4, true, h - 3, true),
        _ => return None,
    };
    Some(QuadricLayout {
        ruling,
        free_lines: e.checked_sub(used)?,
        double_on_q,
        points_on_q,
        free_points: r.checked_sub(points_on_q)?,
        sundial,
    })
}

/// Replays the quadric induction step for `e` lines, `r` generic points and
/// a double point in `P^3`.
///
/// Always checks the generic scheme directly. For `d >= 5` it also builds
/// the specialization onto the quadric `Q` and checks that it, its residual
/// in degree `d - 2`, and its trace (as bidegree `(d, d)` curves on
/// `P^1 x P^1`) all have dimension zero.
pub fn replay_quadric_step(d: u32, field: FieldSpec, trials: usize) -> Result<ReplayReport> {
    if d < 3 {
        return Err(Error::InvalidInstance(format!(
            "quadric replay needs d >= 3 (got {d})"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidInstance("trials must be at least 1".into()));
    }
    let (n, m) = (3, 2);
    let params = er_params(n, d, m)?;
    let e = to_u32(&params.e, "e")?;
    let r = to_u32(&params.r, "r")?;
    let seeds: Vec<u64> = (0..trials).map(|k| trial_seed(field.seed, k)).collect();
    let mut table = StepTable::new();
    let mut castelnuovo_holds = true;

    let generic = Recipe::new(n)
        .lines(e, Placement::Generic)
        .fat_point(m, Placement::Generic)
        .points(r, Placement::Generic);
    let layout = if d >= 5 {
        Some(quadric_layout(d, e, r).ok_or_else(|| {
            Error::Unsupported(format!("no quadric specialization for d={d}, e={e}, r={r}"))
        })?)
    } else {
        None
    };

    for &seed in &seeds {
        let spec = field.with_seed(seed);
        let x = build_config(&generic, spec)?;
        let direct = instance_dim(&x, d)?;
        table.record("direct", x.summary(), n, d, 0, direct.dim);

        let Some(q) = &layout else { continue };
        let fat_place = if q.double_on_q {
            Placement::OnQuadric
        } else {
            Placement::Generic
        };
        let mut special = Recipe::new(n);
        if q.sundial {
            special = special.sundials(1, Placement::OnQuadric);
        }
        special = special
            .lines(q.ruling, Placement::InRuling(0))
            .lines(q.free_lines, Placement::Generic)
            .fat_point(m, fat_place)
            .points(q.points_on_q, Placement::OnQuadric)
            .points(q.free_points, Placement::Generic);
        let xs = build_config(&special, spec)?;
        let whole = dim_of(&xs, d)?;
        table.record("specialized", xs.summary(), n, d, 0, whole);

        // Residual with respect to Q: ruling lines and points on Q drop out,
        // a double point on Q becomes simple, the sundial loses its tail.
        let mut residual = Recipe::new(n);
        if q.sundial {
            residual = residual.conics(1, Placement::Generic);
        }
        residual = residual.lines(q.free_lines, Placement::Generic);
        residual = if q.double_on_q {
            residual.points(1, Placement::Generic)
        } else {
            residual.fat_point(m, Placement::Generic)
        };
        residual = residual.points(q.free_points, Placement::Generic);
        let res_cfg = build_config(&residual, spec)?;
        let res = dim_of(&res_cfg, d - 2)?;
        table.record("residual_on_quadric", res_cfg.summary(), n, d - 2, 0, res);

        let conditions = BidegreeConditions {
            ruling_lines: (q.ruling, 0),
            simple_points: 2 * q.free_lines + q.points_on_q + if q.sundial { 2 } else { 0 },
            double_points: q.double_on_q as u32 + q.sundial as u32,
        };
        let tr = bidegree_dim(d, d, conditions, spec)?;
        table.record(
            "trace_on_quadric",
            format!(
                "bidegree ({d},{d}): {} ruling lines + {} double + {} simple",
                conditions.ruling_lines.0, conditions.double_points, conditions.simple_points
            ),
            2,
            d,
            0,
            tr,
        );
        castelnuovo_holds &= whole <= res + tr;
    }

    let pass = castelnuovo_holds && table.steps.iter().all(|s| s.pass);
    Ok(ReplayReport {
        kind: "quadric",
        n,
        d,
        m,
        params,
        inequalities: None,
        steps: table.steps,
        castelnuovo_holds,
        prime: field.prime.modulus(),
        seeds,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn spec(seed: u64) -> FieldSpec {
        FieldSpec::new(PrimeField::default(), seed)
    }

    #[test]
    fn fat_point_on_hyperplane() {
        let cfg = build_config(
            &Recipe::new(4).fat_point(3, Placement::InHyperplane),
            spec(1),
        )
        .unwrap();
        let parts = split(&cfg, 4).unwrap();
        assert!(matches!(
            parts.residual.components.as_slice(),
            [Component::FatPoint {
                multiplicity: 2,
                ..
            }]
        ));
        assert!(matches!(
            parts.trace.components.as_slice(),
            [Component::FatPoint {
                multiplicity: 3,
                ..
            }]
        ));
        assert_eq!(parts.trace.n, 3);
        assert_eq!((parts.residual_degree, parts.trace_degree), (3, 4));
    }

    #[test]
    fn generic_line_splits_into_line_and_point() {
        let cfg = build_config(&Recipe::new(3).lines(1, Placement::Generic), spec(2)).unwrap();
        let parts = split(&cfg, 2).unwrap();
        assert!(matches!(
            parts.residual.components.as_slice(),
            [Component::Line { .. }]
        ));
        let [Component::SimplePoint { point, .. }] = parts.trace.components.as_slice() else {
            panic!("trace should be one point")
        };
        assert_eq!(point.ambient(), 2);
    }

    #[test]
    fn sundial_with_conic_in_hyperplane() {
        let cfg = build_config(
            &Recipe::new(4).sundials(1, Placement::InHyperplane),
            spec(3),
        )
        .unwrap();
        let parts = split(&cfg, 3).unwrap();
        assert!(matches!(
            parts.residual.components.as_slice(),
            [Component::SimplePoint { .. }]
        ));
        assert!(matches!(
            parts.trace.components.as_slice(),
            [Component::Line { .. }, Component::Line { .. }]
        ));
    }

    #[test]
    fn generic_line_inside_hyperplane_is_rejected() {
        let cfg = build_config(&Recipe::new(3).lines(1, Placement::InHyperplane), spec(4)).unwrap();
        let mut components = cfg.components.clone();
        if let Component::Line { constraint, .. } = &mut components[0] {
            *constraint = Constraint::Generic;
        }
        let bad = SchemeConfig::new(3, cfg.field, components).unwrap();
        let err = split(&bad, 2).unwrap_err();
        assert!(matches!(
            err,
            Error::Incidence {
                index: 0,
                kind: "line",
                ..
            }
        ));
    }

    #[test]
    fn everything_in_hyperplane() {
        // Three lines in H: the residual is empty, so its degree-(d-1) piece
        // is everything, and the trace is three general lines in P^2.
        let cfg = build_config(&Recipe::new(3).lines(3, Placement::InHyperplane), spec(5)).unwrap();
        let check = check_inequality(&cfg, 3).unwrap();
        // x3 times any quadric (10 of them) plus the plane cubic of the lines.
        assert_eq!(check.rhs_res, 10);
        assert_eq!(check.rhs_tr, 1);
        assert_eq!(check.lhs, 11);
        assert!(check.holds);
    }

    #[test]
    fn replay_small_cases() {
        let report = replay_hyperplane_step(4, 3, 2, spec(1), 2).unwrap();
        assert!(report.pass, "{report:#?}");
        assert_eq!(report.params.e, 7.into());
        assert_eq!(report.params.r, 2.into());
        assert_eq!(report.step("residual_without_points").unwrap().expected, 2);

        let report = replay_hyperplane_step(4, 2, 1, spec(1), 2).unwrap();
        assert!(report.pass, "{report:#?}");

        let report = replay_hyperplane_step(5, 3, 2, spec(1), 2).unwrap();
        assert!(report.pass, "{report:#?}");
    }

    #[test]
    fn replay_base_case() {
        let report = replay_hyperplane_step(4, 3, 3, spec(1), 2).unwrap();
        assert!(report.pass, "{report:#?}");
        assert!(report.step("cone_identity").unwrap().pass);
    }

    #[test]
    fn replay_rejects_out_of_range() {
        assert!(replay_hyperplane_step(3, 3, 2, spec(1), 1).is_err());
        assert!(replay_hyperplane_step(4, 3, 4, spec(1), 1).is_err());
        assert!(replay_hyperplane_step(4, 3, 2, spec(1), 0).is_err());
        assert!(replay_quadric_step(2, spec(1), 1).is_err());
    }

    #[test]
    fn quadric_layout_counts() {
        // d = 6: e = 20, r = 3; five ruling lines, two points on Q.
        let q = quadric_layout(6, 20, 3).unwrap();
        assert_eq!(
            (q.ruling, q.free_lines, q.points_on_q, q.free_points),
            (5, 15, 2, 1)
        );
        // d = 11 (h = 3): sundial branch, no leftover points.
        let params = er_params(3, 11, 2).unwrap();
        let (e, r) = (params.e.to_u32().unwrap(), params.r.to_u32().unwrap());
        assert_eq!((e, r), (30, 0));
        let q = quadric_layout(11, e, r).unwrap();
        assert!(q.sundial);
        assert_eq!((q.ruling, q.free_lines, q.points_on_q), (8, 20, 0));
        assert!(quadric_layout(4, 6, 1).is_none());
    }

    #[test]
    fn quadric_replay_d5() {
        let report = replay_quadric_step(5, spec(2), 1).unwrap();
        assert!(report.pass, "{report:#?}");
        assert_eq!(report.steps.len(), 4);
    }
}
