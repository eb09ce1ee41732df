//! The `hilbert-lines` command line.
//!
//! Exit codes: 0 on success, 2 when the oracle disagrees with the
//! prediction being checked, 1 on usage or I/O errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::castelnuovo::{replay_hyperplane_step, replay_quadric_step, ReplayReport};
use crate::combinatorics::{
    expected_dim, hh_params, param_table, predicted_dim, CaseTag, Instance, ParamTableRow,
    Prediction,
};
use crate::error::{Error, Result};
use crate::field::{PrimeField, DEFAULT_PRIME};
use crate::linear_system::{bidegree_dim, ideal_dim, BidegreeConditions};
use crate::scheme::{FieldSpec, Recipe, SchemeConfig};

/// Default cap on `rows * columns` of the largest condition matrix in a scan.
pub const DEFAULT_CELL_BUDGET: u64 = 4_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "hilbert-lines",
    version,
    about = "Dimensions of ideals of generic lines, a fat point and points in P^n"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Prime modulus for the exact rank computations.
    #[arg(long, global = true, default_value_t = DEFAULT_PRIME)]
    pub prime: u64,
    /// Base seed; trial k uses seed + k.
    #[arg(long, global = true, env = "HL_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Independent random realizations per instance.
    #[arg(long, global = true, default_value_t = 3)]
    pub trials: usize,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct InstanceArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub d: u32,
    /// Multiplicity of the fat point (0 for none).
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    /// Number of generic lines.
    #[arg(long)]
    pub s: u32,
    /// Extra simple points.
    #[arg(long, default_value_t = 0)]
    pub points: u32,
    /// Put the extra points on one common line.
    #[arg(long)]
    pub on_line: bool,
}

impl InstanceArgs {
    fn instance(&self) -> Instance {
        Instance::new(self.n, self.d, self.s, self.m).with_points(self.points, self.on_line)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimension stated by the known theorems.
    Predict(InstanceArgs),
    /// Compare the oracle with the prediction.
    Verify(InstanceArgs),
    /// Search all small instances for dimensions other than the expected one.
    Scan {
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 8)]
        dmax: u32,
        /// Largest allowed condition matrix, in entries.
        #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
        budget: u64,
    },
    /// Parameter table (d, m, e, e', r', e - e' - 2r').
    Appendix {
        #[arg(long, default_value_t = 4)]
        n: u32,
        #[arg(long, default_value_t = 9)]
        dmax: u32,
    },
    /// Replay an induction step: hyperplane (n >= 4) or quadric (n = 3, m = 2).
    Replay {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u32,
    },
    /// Bidegree (a, b) forms on P^1 x P^1 through ruling lines and points.
    Quadric {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value_t = 0)]
        ruling0: u32,
        #[arg(long, default_value_t = 0)]
        ruling1: u32,
        #[arg(long, default_value_t = 0)]
        points: u32,
        #[arg(long, default_value_t = 0)]
        double: u32,
    },
}

/// A rendered report and whether it records a mismatch.
pub struct Outcome {
    pub text: String,
    pub mismatch: bool,
}

#[derive(Debug, Serialize)]
pub struct DimReport {
    pub n: u32,
    pub d: u32,
    pub s: u32,
    pub m: u32,
    pub points: u32,
    pub on_line: bool,
    pub components: String,
    pub prime: u64,
    pub seeds: Vec<u64>,
    pub trial_dims: Vec<u64>,
    pub rank: u64,
    pub dim: u64,
    #[serde(with = "crate::combinatorics::decimal")]
    pub expected: BigInt,
    #[serde(with = "crate::combinatorics::decimal")]
    pub predicted: BigInt,
    /// Observed `dim - expected`.
    #[serde(with = "crate::combinatorics::decimal")]
    pub defect: BigInt,
    #[serde(with = "crate::combinatorics::decimal")]
    pub predicted_defect: BigInt,
    pub case_tag: Option<CaseTag>,
    pub conjectural: bool,
    pub certified: bool,
    pub matches: bool,
    pub replay: SchemeConfig,
}

impl DimReport {
    const CSV_HEADER: &'static str =
        "n,d,s,m,points,on_line,dim,expected,predicted,defect,case_tag,certified";

    fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.d,
            self.s,
            self.m,
            self.points,
            self.on_line,
            self.dim,
            self.expected,
            self.predicted,
            self.defect,
            self.case_tag.map(|t| t.as_str()).unwrap_or(""),
            self.certified
        )
    }
}

/// Predicted value, falling back to the expected dimension where no
/// theorem covers the instance.
fn prediction_or_expected(inst: &Instance) -> Result<(BigInt, BigInt, Option<CaseTag>, bool)> {
    match predicted_dim(inst) {
        Ok(Prediction {
            dim,
            defect,
            case_tag,
            conjectural,
            ..
        }) => Ok((dim, defect, Some(case_tag), conjectural)),
        Err(Error::Unsupported(_)) => Ok((expected_dim(inst), BigInt::from(0), None, false)),
        Err(e) => Err(e),
    }
}

/// Runs the oracle on one instance and compares it with the prediction.
pub fn verify(inst: &Instance, field: FieldSpec, trials: usize) -> Result<DimReport> {
    inst.validate()?;
    let (predicted, predicted_defect, case_tag, conjectural) = prediction_or_expected(inst)?;
    let recipe = Recipe::from_instance(inst);
    let res = ideal_dim(&recipe, inst.d, field, trials)?;
    let expected = expected_dim(inst);
    let dim = BigInt::from(res.dim);
    Ok(DimReport {
        n: inst.n,
        d: inst.d,
        s: inst.s,
        m: inst.m,
        points: inst.extra_points,
        on_line: inst.points_on_line,
        components: res.replay.summary(),
        prime: res.prime,
        seeds: res.seeds,
        trial_dims: res.trial_dims,
        rank: res.rank,
        dim: res.dim,
        defect: &dim - &expected,
        expected,
        matches: dim == predicted,
        predicted,
        predicted_defect,
        case_tag,
        conjectural,
        certified: res.certified,
        replay: res.replay,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub d: u32,
    pub m: u32,
    pub s: u32,
    pub dim: u64,
    #[serde(with = "crate::combinatorics::decimal")]
    pub expected: BigInt,
    #[serde(with = "crate::combinatorics::decimal")]
    pub predicted: BigInt,
    pub case_tag: Option<CaseTag>,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<SchemeConfig>,
}

#[derive(Debug, Serialize)]
pub struct ScanReport {
    pub note: &'static str,
    pub n: u32,
    pub dmax: u32,
    pub prime: u64,
    pub seed: u64,
    pub trials: usize,
    pub instances: usize,
    /// Instances whose oracle dimension differs from the expected one.
    pub findings: Vec<ScanRow>,
    /// Instances whose oracle dimension differs from the prediction.
    pub anomalies: Vec<ScanRow>,
}

const SCAN_NOTE: &str =
    "numerical evidence from random realizations over a prime field; not a proof";

/// Instances `(d, m, s)` with `1 <= d <= dmax`, `0 <= m <= d` and
/// `0 <= s <= t + 1`, where `C(d+n,n) = t(d+1) + r`.
pub fn scan_instances(n: u32, dmax: u32) -> Vec<Instance> {
    let mut out = Vec::new();
    for d in 1..=dmax {
        let t = hh_params(n, d).t.to_u32().unwrap_or(u32::MAX - 1);
        for m in 0..=d {
            for s in 0..=t + 1 {
                out.push(Instance::new(n, d, s, m));
            }
        }
    }
    out
}

/// Rows times columns of the largest condition matrix in a scan.
pub fn scan_cells(instances: &[Instance]) -> u64 {
    instances
        .iter()
        .map(|inst| {
            let recipe = Recipe::from_instance(inst);
            let cols = crate::combinatorics::forms_dim(inst.n, inst.d)
                .to_u64()
                .unwrap_or(u64::MAX);
            recipe.nominal_conditions(inst.d).saturating_mul(cols)
        })
        .max()
        .unwrap_or(0)
}

pub fn scan(n: u32, dmax: u32, budget: u64, field: FieldSpec, trials: usize) -> Result<ScanReport> {
    if n < 3 {
        return Err(Error::InvalidInstance(format!(
            "scan needs n >= 3 (got {n})"
        )));
    }
    let instances = scan_instances(n, dmax);
    let cells = scan_cells(&instances);
    if cells > budget {
        return Err(Error::InvalidInstance(format!(
            "largest condition matrix has {cells} entries, over the budget of {budget}"
        )));
    }
    // Results come back in input order, so the report is sorted by (d, m, s).
    let rows: Vec<(ScanRow, bool, bool)> = instances
        .par_iter()
        .map(|inst| {
            let report = verify(inst, field, trials)?;
            let finding = report.dim != report.expected.to_u64().unwrap_or(u64::MAX);
            let anomaly = !report.matches;
            let row = ScanRow {
                d: inst.d,
                m: inst.m,
                s: inst.s,
                dim: report.dim,
                expected: report.expected,
                predicted: report.predicted,
                case_tag: report.case_tag,
                certified: report.certified,
                replay: anomaly.then_some(report.replay),
            };
            Ok((row, finding, anomaly))
        })
        .collect::<Result<_>>()?;
    let mut findings = Vec::new();
    let mut anomalies = Vec::new();
    for (row, finding, anomaly) in rows {
        if finding {
            findings.push(ScanRow {
                replay: None,
                ..row.clone()
            });
        }
        if anomaly {
            anomalies.push(row);
        }
    }
    Ok(ScanReport {
        note: SCAN_NOTE,
        n,
        dmax,
        prime: field.prime.modulus(),
        seed: field.seed,
        trials,
        instances: instances.len(),
        findings,
        anomalies,
    })
}

#[derive(Debug, Serialize)]
pub struct QuadricReport {
    pub a: u32,
    pub b: u32,
    pub conditions: BidegreeConditions,
    pub prime: u64,
    pub seeds: Vec<u64>,
    pub dim: u64,
    /// `max{(a+1)(b+1) - conditions, 0}`.
    pub expected: u64,
}

pub fn quadric(
    a: u32,
    b: u32,
    cond: BidegreeConditions,
    field: FieldSpec,
    trials: usize,
) -> Result<QuadricReport> {
    if trials == 0 {
        return Err(Error::InvalidInstance("trials must be at least 1".into()));
    }
    let seeds: Vec<u64> = (0..trials)
        .map(|k| crate::linear_system::trial_seed(field.seed, k))
        .collect();
    let dims = seeds
        .iter()
        .map(|&s| bidegree_dim(a, b, cond, field.with_seed(s)))
        .collect::<Result<Vec<_>>>()?;
    let (a64, b64) = (a as u64, b as u64);
    let used = cond.ruling_lines.0 as u64 * (b64 + 1)
        + cond.ruling_lines.1 as u64 * (a64 + 1)
        + cond.simple_points as u64
        + 3 * cond.double_points as u64;
    Ok(QuadricReport {
        a,
        b,
        conditions: cond,
        prime: field.prime.modulus(),
        seeds,
        dim: dims.into_iter().min().expect("trials >= 1"),
        expected: ((a64 + 1) * (b64 + 1)).saturating_sub(used),
    })
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn replay_csv(r: &ReplayReport) -> String {
    let mut out = String::from("step,ambient,degree,expected,got,pass\n");
    for s in &r.steps {
        out += &format!(
            "{},{},{},{},{},{}\n",
            s.step, s.ambient, s.degree, s.expected, s.got, s.pass
        );
    }
    out
}

/// Executes a parsed command and renders its report.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    let field = FieldSpec::new(PrimeField::new(g.prime)?, g.seed);
    let format = g.format;
    let csv = format == Some(Format::Csv);
    let ok = |text: String| Outcome {
        text,
        mismatch: false,
    };
    match &cli.command {
        Command::Predict(args) => {
            let inst = args.instance();
            inst.validate()?;
            let p = predicted_dim(&inst)?;
            if csv {
                Ok(ok(format!(
                    "n,d,s,m,points,dim,expected,defect,case_tag,conjectural\n{},{},{},{},{},{},{},{},{},{}\n",
                    inst.n,
                    inst.d,
                    inst.s,
                    inst.m,
                    inst.extra_points,
                    p.dim,
                    p.expected,
                    p.defect,
                    p.case_tag.as_str(),
                    p.conjectural
                )))
            } else {
                Ok(ok(json(&p)?))
            }
        }
        Command::Verify(args) => {
            let report = verify(&args.instance(), field, g.trials)?;
            let text = if csv {
                format!("{}\n{}\n", DimReport::CSV_HEADER, report.to_csv())
            } else {
                json(&report)?
            };
            Ok(Outcome {
                text,
                mismatch: !report.matches,
            })
        }
        Command::Scan { n, dmax, budget } => {
            let report = scan(*n, *dmax, *budget, field, g.trials)?;
            let text = if csv {
                let mut out = format!("# {SCAN_NOTE}\nd,m,s,dim,expected,predicted,certified\n");
                for r in &report.findings {
                    out += &format!(
                        "{},{},{},{},{},{},{}\n",
                        r.d, r.m, r.s, r.dim, r.expected, r.predicted, r.certified
                    );
                }
                out
            } else {
                json(&report)?
            };
            Ok(Outcome {
                text,
                mismatch: !report.anomalies.is_empty(),
            })
        }
        Command::Appendix { n, dmax } => {
            let rows = param_table(*n, *dmax)?;
            if format == Some(Format::Json) {
                Ok(ok(json(&rows)?))
            } else {
                let mut out = format!("{}\n", ParamTableRow::CSV_HEADER);
                for r in &rows {
                    out += &r.to_csv();
                    out.push('\n');
                }
                Ok(ok(out))
            }
        }
        Command::Replay { n, d, m } => {
            let report = match (*n, *m) {
                (n, m) if n >= 4 => replay_hyperplane_step(n, *d, m, field, g.trials)?,
                (3, 2) => replay_quadric_step(*d, field, g.trials)?,
                _ => {
                    return Err(Error::InvalidInstance(
                        "replay covers n >= 4, or n = 3 with m = 2".into(),
                    ))
                }
            };
            let text = if csv {
                replay_csv(&report)
            } else {
                json(&report)?
            };
            Ok(Outcome {
                text,
                mismatch: !report.pass,
            })
        }
        Command::Quadric {
            a,
            b,
            ruling0,
            ruling1,
            points,
            double,
        } => {
            let cond = BidegreeConditions {
                ruling_lines: (*ruling0, *ruling1),
                simple_points: *points,
                double_points: *double,
            };
            let report = quadric(*a, *b, cond, field, g.trials)?;
            if csv {
                Ok(ok(format!(
                    "a,b,ruling0,ruling1,points,double,dim,expected\n{},{},{},{},{},{},{},{}\n",
                    a, b, ruling0, ruling1, points, double, report.dim, report.expected
                )))
            } else {
                Ok(ok(json(&report)?))
            }
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let written = match &cli.global.out {
        Some(path) => std::fs::write(path, &outcome.text),
        None => std::io::stdout().write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 1;
    }
    if outcome.mismatch {
        eprintln!("mismatch: the oracle disagrees with the prediction; see the report");
        2
    } else {
        0
    }
}
