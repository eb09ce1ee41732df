//! Closed-form integer formulas: binomials, expected dimensions, the
//! line/point bookkeeping parameters and the theorem-driven predictor.
//!
//! Everything here is exact and arbitrary precision; nothing touches a
//! finite field.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A scheme made of `s` generic lines, one generic `m`-fold point and
/// optionally some extra simple points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instance {
    /// Ambient projective dimension.
    pub n: u32,
    /// Degree of the forms.
    pub d: u32,
    /// Number of generic lines.
    pub s: u32,
    /// Multiplicity of the fat point; zero means no fat point.
    pub m: u32,
    /// Number of extra simple points.
    #[serde(default)]
    pub extra_points: u32,
    /// Whether the extra points lie on one common generic line.
    #[serde(default)]
    pub points_on_line: bool,
}

impl Instance {
    pub fn new(n: u32, d: u32, s: u32, m: u32) -> Self {
        Instance {
            n,
            d,
            s,
            m,
            extra_points: 0,
            points_on_line: false,
        }
    }

    pub fn with_points(mut self, count: u32, on_line: bool) -> Self {
        self.extra_points = count;
        self.points_on_line = on_line;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidInstance(format!(
                "ambient dimension {} < 2",
                self.n
            )));
        }
        Ok(())
    }
}

/// `C(a, b)`, zero outside `0 <= b <= a`.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || a < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// Dimension of the space of degree-`d` forms in `n + 1` variables.
pub fn forms_dim(n: u32, d: u32) -> BigInt {
    binomial(d as i64 + n as i64, n as i64)
}

/// Number of conditions an `m`-fold point imposes in large degree.
pub fn fat_point_conditions(n: u32, m: u32) -> BigInt {
    binomial(m as i64 + n as i64 - 1, n as i64)
}

/// `max{C(d+n,n) - C(m+n-1,n) - s(d+1) - extra, 0}`.
pub fn expected_dim(inst: &Instance) -> BigInt {
    let raw = forms_dim(inst.n, inst.d)
        - fat_point_conditions(inst.n, inst.m)
        - BigInt::from(inst.s) * (inst.d + 1)
        - BigInt::from(inst.extra_points);
    raw.max(BigInt::zero())
}

/// Dimension of degree-`d` plane curves containing `s` generic lines.
pub fn cone_dim(d: u32, s: u32) -> BigInt {
    if s > d {
        BigInt::zero()
    } else {
        binomial(d as i64 - s as i64 + 2, 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErParams {
    #[serde(with = "decimal")]
    pub e: BigInt,
    #[serde(with = "decimal")]
    pub r: BigInt,
    /// Absent when `m == d`.
    #[serde(with = "decimal_opt")]
    pub e_prime: Option<BigInt>,
    #[serde(with = "decimal_opt")]
    pub r_prime: Option<BigInt>,
}

impl ErParams {
    /// `e - e' - 2r'`, when the primed parameters exist.
    pub fn slack(&self) -> Option<BigInt> {
        match (&self.e_prime, &self.r_prime) {
            (Some(ep), Some(rp)) => Some(&self.e - ep - rp * 2),
            _ => None,
        }
    }
}

/// Line and point counts for one `m`-fold point in `P^n`, degree `d`.
///
/// `e` lines plus `r` points exactly fill the forms left after the fat point;
/// `e'`, `r'` do the same one degree lower after removing the `r` points.
pub fn er_params(n: u32, d: u32, m: u32) -> Result<ErParams> {
    if n < 3 {
        return Err(Error::InvalidInstance(format!("n = {n} < 3")));
    }
    if m > d {
        return Err(Error::InvalidInstance(format!("m = {m} > d = {d}")));
    }
    let fat = fat_point_conditions(n, m);
    let (e, r) = (forms_dim(n, d) - &fat).div_mod_floor(&BigInt::from(d + 1));
    let (e_prime, r_prime) = if m < d {
        let rest = forms_dim(n, d - 1) - &fat - &r;
        let (ep, rp) = rest.div_mod_floor(&BigInt::from(d));
        (Some(ep), Some(rp))
    } else {
        (None, None)
    };
    Ok(ErParams {
        e,
        r,
        e_prime,
        r_prime,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamInequalities {
    pub params: ErParams,
    /// `e' >= 0`
    pub e_prime_nonneg: bool,
    /// `e - e' - 2r' >= 0`
    pub slack_nonneg: bool,
    /// `e' >= r'`
    pub e_prime_ge_r_prime: bool,
}

impl ParamInequalities {
    pub fn all_hold(&self) -> bool {
        self.e_prime_nonneg && self.slack_nonneg && self.e_prime_ge_r_prime
    }
}

/// The three inequalities that license the induction step for `n >= 4`.
pub fn param_inequalities(n: u32, d: u32, m: u32) -> Result<ParamInequalities> {
    if n < 4 || m >= d {
        return Err(Error::InvalidInstance(format!(
            "parameter inequalities need n >= 4 and m < d (got n={n}, d={d}, m={m})"
        )));
    }
    let params = er_params(n, d, m)?;
    let ep = params.e_prime.clone().expect("m < d");
    let rp = params.r_prime.clone().expect("m < d");
    let slack = params.slack().expect("m < d");
    Ok(ParamInequalities {
        e_prime_nonneg: !ep.is_negative(),
        slack_nonneg: !slack.is_negative(),
        e_prime_ge_r_prime: ep >= rp,
        params,
    })
}

/// One row of the parameter table, columns `d,m,e,e_prime,r_prime,slack`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamTableRow {
    pub d: u32,
    pub m: u32,
    #[serde(with = "decimal")]
    pub e: BigInt,
    #[serde(with = "decimal")]
    pub e_prime: BigInt,
    #[serde(with = "decimal")]
    pub r_prime: BigInt,
    #[serde(with = "decimal")]
    pub slack: BigInt,
}

impl ParamTableRow {
    pub const CSV_HEADER: &'static str = "d,m,e,e_prime,r_prime,slack";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.d, self.m, self.e, self.e_prime, self.r_prime, self.slack
        )
    }
}

/// Rows for `2 <= d <= dmax`, `1 <= m < d`, ordered by `(d, m)`.
pub fn param_table(n: u32, dmax: u32) -> Result<Vec<ParamTableRow>> {
    let mut rows = Vec::new();
    for d in 2..=dmax {
        for m in 1..d {
            let p = er_params(n, d, m)?;
            let slack = p.slack().expect("m < d");
            rows.push(ParamTableRow {
                d,
                m,
                e: p.e,
                e_prime: p.e_prime.expect("m < d"),
                r_prime: p.r_prime.expect("m < d"),
                slack,
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HhParams {
    #[serde(with = "decimal")]
    pub t: BigInt,
    #[serde(with = "decimal")]
    pub r: BigInt,
}

/// `C(d+n,n) = t(d+1) + r` with `0 <= r <= d`.
pub fn hh_params(n: u32, d: u32) -> HhParams {
    let (t, r) = forms_dim(n, d).div_mod_floor(&BigInt::from(d + 1));
    HhParams { t, r }
}

/// Which statement the predicted value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    #[serde(rename = "n4-generic")]
    N4Generic,
    #[serde(rename = "n4-points-on-line")]
    N4LinesPointsOnLine,
    #[serde(rename = "lines-only")]
    LinesOnly,
    #[serde(rename = "lines-points-on-line")]
    LinesPointsOnLine,
    #[serde(rename = "fat-point-only")]
    FatPointOnly,
    #[serde(rename = "n3-(i)(a)")]
    N3MultAboveDegree,
    #[serde(rename = "n3-(i)(b)")]
    N3MultEqualsDegree,
    #[serde(rename = "n3-(i)(c)")]
    N3MultDegreeMinusOne,
    #[serde(rename = "n3-(i)(d)")]
    N3FewLines,
    #[serde(rename = "n3-(i)(e)")]
    N3DoublePoint,
    #[serde(rename = "n3-(i)(f)")]
    N3SimplePoint,
    #[serde(rename = "n3-double-point-points")]
    N3DoublePointWithPoints,
    #[serde(rename = "n3-defective")]
    N3Defective,
    #[serde(rename = "n3-conjectural")]
    N3Conjectural,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::N4Generic => "n4-generic",
            CaseTag::N4LinesPointsOnLine => "n4-points-on-line",
            CaseTag::LinesOnly => "lines-only",
            CaseTag::LinesPointsOnLine => "lines-points-on-line",
            CaseTag::FatPointOnly => "fat-point-only",
            CaseTag::N3MultAboveDegree => "n3-(i)(a)",
            CaseTag::N3MultEqualsDegree => "n3-(i)(b)",
            CaseTag::N3MultDegreeMinusOne => "n3-(i)(c)",
            CaseTag::N3FewLines => "n3-(i)(d)",
            CaseTag::N3DoublePoint => "n3-(i)(e)",
            CaseTag::N3SimplePoint => "n3-(i)(f)",
            CaseTag::N3DoublePointWithPoints => "n3-double-point-points",
            CaseTag::N3Defective => "n3-defective",
            CaseTag::N3Conjectural => "n3-conjectural",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    #[serde(with = "decimal")]
    pub dim: BigInt,
    #[serde(with = "decimal")]
    pub expected: BigInt,
    #[serde(with = "decimal")]
    pub defect: BigInt,
    pub case_tag: CaseTag,
    /// True when the value rests on the open `n = 3` conjecture.
    pub conjectural: bool,
}

impl Prediction {
    fn expected(inst: &Instance, case_tag: CaseTag) -> Self {
        let expected = expected_dim(inst);
        Prediction {
            dim: expected.clone(),
            expected,
            defect: BigInt::zero(),
            case_tag,
            conjectural: case_tag == CaseTag::N3Conjectural,
        }
    }
}

/// Dimension of `(I_X)_d` as stated by the known theorems.
///
/// Extra points are accepted only in the three configurations where a
/// theorem covers them: `e` lines plus `r` points on a line with one fat
/// point in `P^n` (`n >= 4`), `e` lines plus `r` generic points with a double
/// point in `P^3`, and `t` lines plus `r` points on a line without fat point.
pub fn predicted_dim(inst: &Instance) -> Result<Prediction> {
    let Instance { n, d, s, m, .. } = *inst;
    if n <= 2 {
        return Err(Error::InvalidInstance(format!(
            "predictor needs n >= 3 (got {n})"
        )));
    }
    if inst.extra_points > 0 {
        return predict_with_points(inst);
    }
    if n >= 4 {
        return Ok(Prediction::expected(inst, CaseTag::N4Generic));
    }

    // n == 3
    let tag = if m == 0 {
        CaseTag::LinesOnly
    } else if s == 0 {
        CaseTag::FatPointOnly
    } else if m > d {
        CaseTag::N3MultAboveDegree
    } else if m == d {
        if d >= 2 && (2..=d).contains(&s) {
            let dim = cone_dim(d, s);
            let expected = expected_dim(inst);
            let defect = &dim - &expected;
            return Ok(Prediction {
                dim,
                expected,
                defect,
                case_tag: CaseTag::N3Defective,
                conjectural: false,
            });
        }
        CaseTag::N3MultEqualsDegree
    } else if m + 1 == d {
        CaseTag::N3MultDegreeMinusOne
    } else if s <= m + 2 {
        CaseTag::N3FewLines
    } else if m == 2 {
        CaseTag::N3DoublePoint
    } else if m == 1 {
        CaseTag::N3SimplePoint
    } else {
        CaseTag::N3Conjectural
    };
    Ok(Prediction::expected(inst, tag))
}

fn predict_with_points(inst: &Instance) -> Result<Prediction> {
    let Instance { n, d, s, m, .. } = *inst;
    let extra = BigInt::from(inst.extra_points);
    let lines = BigInt::from(s);

    if m == 0 && inst.points_on_line {
        let hh = hh_params(n, d);
        if hh.t == lines && hh.r == extra {
            return Ok(Prediction::expected(inst, CaseTag::LinesPointsOnLine));
        }
    }
    if m >= 1 && m <= d {
        let er = er_params(n, d, m)?;
        if er.e == lines && er.r == extra {
            if n >= 4 && inst.points_on_line {
                return Ok(Prediction::expected(inst, CaseTag::N4LinesPointsOnLine));
            }
            if n == 3 && m == 2 && d >= 3 && !inst.points_on_line {
                return Ok(Prediction::expected(inst, CaseTag::N3DoublePointWithPoints));
            }
        }
    }
    Err(Error::Unsupported(format!(
        "no theorem covers {} extra points{} for n={n}, d={d}, s={s}, m={m}",
        inst.extra_points,
        if inst.points_on_line {
            " on a line"
        } else {
            ""
        }
    )))
}

/// Serializes a `BigInt` as a JSON integer when it fits in `i64`, and as a
/// decimal string otherwise.
pub(crate) mod decimal {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&v.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(BigInt::from)
                .ok_or_else(|| serde::de::Error::custom("non-integer number")),
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            _ => Err(serde::de::Error::custom("expected an integer")),
        }
    }
}

pub(crate) mod decimal_opt {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        v: &Option<BigInt>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(x) => decimal::serialize(x, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<BigInt>, D::Error> {
        let v = Option::<serde_json::Value>::deserialize(d)?;
        match v {
            None => Ok(None),
            Some(v) => decimal::deserialize(v)
                .map(Some)
                .map_err(serde::de::Error::custom),
        }
    }
}
