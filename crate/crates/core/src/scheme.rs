//! Concrete coordinate realizations of schemes over a prime field.
//!
//! A [`Recipe`] describes a scheme abstractly (how many lines, which
//! specializations); [`build_config`] draws coordinates for it from a seeded
//! generator and yields an immutable [`SchemeConfig`]. Random coordinates in
//! a large prime field stand in for generic points.
//!
//! The fixed smooth quadric is `x0*x3 - x1*x2 = 0`, the image of
//! `P^1 x P^1` under `((s0:s1),(t0:t1)) -> (s0t0 : s1t0 : s0t1 : s1t1)`.
//! Lines of ruling 0 fix `s`, lines of ruling 1 fix `t`. The distinguished
//! hyperplane is `H: x_n = 0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::Instance;
use crate::error::{Error, Result};
use crate::field::PrimeField;

/// Attempts allowed for a degenerate random draw before giving up.
pub const MAX_REDRAWS: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub prime: PrimeField,
    pub seed: u64,
}

impl FieldSpec {
    pub fn new(prime: PrimeField, seed: u64) -> Self {
        FieldSpec { prime, seed }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        FieldSpec { seed, ..*self }
    }
}

/// A point of projective space, normalized so its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct ProjPoint {
    coords: Vec<u64>,
}

impl TryFrom<Vec<String>> for ProjPoint {
    type Error = String;

    fn try_from(v: Vec<String>) -> std::result::Result<Self, String> {
        let coords = v
            .iter()
            .map(|s| {
                s.parse::<u64>()
                    .map_err(|e| format!("coordinate {s:?}: {e}"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if coords.iter().all(|&c| c == 0) {
            return Err("zero vector is not a projective point".into());
        }
        Ok(ProjPoint { coords })
    }
}

impl From<ProjPoint> for Vec<String> {
    fn from(p: ProjPoint) -> Self {
        p.coords.iter().map(|c| c.to_string()).collect()
    }
}

impl ProjPoint {
    /// Normalizes `coords`; fails on the zero vector.
    pub fn new(coords: Vec<u64>, field: &PrimeField) -> Result<Self> {
        let mut coords: Vec<u64> = coords.into_iter().map(|c| field.reduce(c)).collect();
        let lead = coords
            .iter()
            .copied()
            .find(|&c| c != 0)
            .ok_or_else(|| Error::Geometry("zero vector is not a projective point".into()))?;
        let inv = field.inv(lead);
        for c in coords.iter_mut() {
            *c = field.mul(*c, inv);
        }
        Ok(ProjPoint { coords })
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// Projective dimension of the ambient space.
    pub fn ambient(&self) -> u32 {
        self.coords.len() as u32 - 1
    }

    pub fn in_hyperplane(&self) -> bool {
        self.coords.last() == Some(&0)
    }

    /// Coordinates in `H = {x_n = 0}`; the point must lie in `H`.
    pub fn restrict_to_hyperplane(&self) -> ProjPoint {
        debug_assert!(self.in_hyperplane());
        ProjPoint {
            coords: self.coords[..self.coords.len() - 1].to_vec(),
        }
    }

    pub fn on_quadric(&self, field: &PrimeField) -> bool {
        let c = &self.coords;
        c.len() == 4 && field.mul(c[0], c[3]) == field.mul(c[1], c[2])
    }
}

/// The line spanned by two distinct points, parametrized as `u*a + v*b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineRep {
    pub a: ProjPoint,
    pub b: ProjPoint,
}

impl LineRep {
    pub fn new(a: ProjPoint, b: ProjPoint) -> Result<Self> {
        if a.coords.len() != b.coords.len() {
            return Err(Error::Geometry("points in different ambient spaces".into()));
        }
        if a == b {
            return Err(Error::Geometry("a line needs two distinct points".into()));
        }
        Ok(LineRep { a, b })
    }

    pub fn ambient(&self) -> u32 {
        self.a.ambient()
    }

    /// The vector `u*a + v*b` (not normalized).
    pub fn point_at(&self, u: u64, v: u64, field: &PrimeField) -> Vec<u64> {
        self.a
            .coords
            .iter()
            .zip(&self.b.coords)
            .map(|(&x, &y)| field.add(field.mul(u, x), field.mul(v, y)))
            .collect()
    }

    pub fn contains(&self, p: &ProjPoint, field: &PrimeField) -> bool {
        field.rank(&[
            self.a.coords.clone(),
            self.b.coords.clone(),
            p.coords.clone(),
        ]) == 2
    }

    pub fn in_hyperplane(&self) -> bool {
        self.a.in_hyperplane() && self.b.in_hyperplane()
    }

    /// The point where a line not contained in `H` crosses it.
    pub fn meet_hyperplane(&self, field: &PrimeField) -> Result<ProjPoint> {
        if self.in_hyperplane() {
            return Err(Error::Geometry("line lies in the hyperplane".into()));
        }
        let an = *self.a.coords.last().unwrap();
        let bn = *self.b.coords.last().unwrap();
        // bn * a - an * b has vanishing last coordinate.
        let v = self.point_at(bn, field.neg(an), field);
        ProjPoint::new(v, field)
    }

    pub fn restrict_to_hyperplane(&self) -> LineRep {
        LineRep {
            a: self.a.restrict_to_hyperplane(),
            b: self.b.restrict_to_hyperplane(),
        }
    }
}

/// Two lines through a common vertex together with an embedded double
/// point restricted to the 3-space spanned by the lines and `direction`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sundial {
    pub vertex: ProjPoint,
    /// Passes through the vertex: `first.a == vertex`.
    pub first: LineRep,
    /// Passes through the vertex: `second.a == vertex`.
    pub second: LineRep,
    pub direction: ProjPoint,
}

impl Sundial {
    /// Builds the sundial with lines `vertex + first_other`, `vertex + second_other`.
    pub fn new(
        vertex: ProjPoint,
        first_other: ProjPoint,
        second_other: ProjPoint,
        direction: ProjPoint,
        field: &PrimeField,
    ) -> Result<Self> {
        let span = field.rank(&[
            vertex.coords.clone(),
            first_other.coords.clone(),
            second_other.coords.clone(),
            direction.coords.clone(),
        ]);
        if span != 4 {
            return Err(Error::Geometry(format!(
                "sundial data spans a projective space of dimension {} instead of 3",
                span as i64 - 1
            )));
        }
        Ok(Sundial {
            first: LineRep::new(vertex.clone(), first_other)?,
            second: LineRep::new(vertex.clone(), second_other)?,
            vertex,
            direction,
        })
    }

    pub fn ambient(&self) -> u32 {
        self.vertex.ambient()
    }

    /// Dimension of the linear span of the four defining points, minus one.
    pub fn span_dim(&self, field: &PrimeField) -> usize {
        field.rank(&[
            self.vertex.coords.clone(),
            self.first.b.coords.clone(),
            self.second.b.coords.clone(),
            self.direction.coords.clone(),
        ]) - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Constraint {
    Generic,
    /// Contained in `x_n = 0`. For a sundial: the two lines lie in the
    /// hyperplane and the embedded direction does not.
    InHyperplane,
    /// On the quadric `x0*x3 = x1*x2`. For a sundial: the vertex is.
    OnQuadric,
    InRuling {
        ruling: u8,
    },
    OnLine {
        line: LineRep,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Component {
    Line {
        line: LineRep,
        constraint: Constraint,
    },
    FatPoint {
        point: ProjPoint,
        multiplicity: u32,
        constraint: Constraint,
    },
    SimplePoint {
        point: ProjPoint,
        constraint: Constraint,
    },
    Sundial {
        sundial: Sundial,
        constraint: Constraint,
    },
}

impl Component {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Component::Line { .. } => "line",
            Component::FatPoint { .. } => "fat_point",
            Component::SimplePoint { .. } => "simple_point",
            Component::Sundial { .. } => "sundial",
        }
    }

    pub fn constraint(&self) -> &Constraint {
        match self {
            Component::Line { constraint, .. }
            | Component::FatPoint { constraint, .. }
            | Component::SimplePoint { constraint, .. }
            | Component::Sundial { constraint, .. } => constraint,
        }
    }

    pub fn ambient(&self) -> u32 {
        match self {
            Component::Line { line, .. } => line.ambient(),
            Component::FatPoint { point, .. } | Component::SimplePoint { point, .. } => {
                point.ambient()
            }
            Component::Sundial { sundial, .. } => sundial.ambient(),
        }
    }

    /// Conditions the component imposes on degree-`d` forms when it behaves
    /// as expected (its Hilbert polynomial, or the fat point count).
    pub fn nominal_conditions(&self, n: u32, d: u32) -> u64 {
        let d = d as u64;
        match self {
            Component::Line { .. } => d + 1,
            Component::FatPoint { multiplicity, .. } => {
                let c = crate::combinatorics::fat_point_conditions(n, *multiplicity);
                u64::try_from(c).unwrap_or(u64::MAX)
            }
            Component::SimplePoint { .. } => 1,
            Component::Sundial { .. } => 2 * (d + 1),
        }
    }

    /// Whether the stored geometry satisfies the stored constraint exactly.
    pub fn satisfies_constraint(&self, field: &PrimeField) -> bool {
        match (self, self.constraint()) {
            (_, Constraint::Generic) => true,
            (Component::Line { line, .. }, Constraint::InHyperplane) => line.in_hyperplane(),
            (Component::Line { line, .. }, Constraint::InRuling { ruling }) => {
                ruling_parameter(line, *ruling, field).is_some()
            }
            (Component::Line { line, .. }, Constraint::OnQuadric) => {
                line.a.on_quadric(field)
                    && line.b.on_quadric(field)
                    && ProjPoint::new(line.point_at(1, 1, field), field)
                        .is_ok_and(|p| p.on_quadric(field))
            }
            (
                Component::FatPoint { point, .. } | Component::SimplePoint { point, .. },
                Constraint::InHyperplane,
            ) => point.in_hyperplane(),
            (
                Component::FatPoint { point, .. } | Component::SimplePoint { point, .. },
                Constraint::OnQuadric,
            ) => point.on_quadric(field),
            (
                Component::FatPoint { point, .. } | Component::SimplePoint { point, .. },
                Constraint::OnLine { line },
            ) => line.contains(point, field),
            (Component::Sundial { sundial, .. }, Constraint::InHyperplane) => {
                sundial.first.in_hyperplane()
                    && sundial.second.in_hyperplane()
                    && !sundial.direction.in_hyperplane()
            }
            (Component::Sundial { sundial, .. }, Constraint::OnQuadric) => {
                sundial.vertex.on_quadric(field)
            }
            _ => false,
        }
    }
}

/// A concrete scheme: ambient dimension, field, and component geometry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub n: u32,
    #[serde(flatten)]
    pub field: FieldSpec,
    pub components: Vec<Component>,
}

impl SchemeConfig {
    pub fn new(n: u32, field: FieldSpec, components: Vec<Component>) -> Result<Self> {
        for (i, c) in components.iter().enumerate() {
            if c.ambient() != n {
                return Err(Error::Incidence {
                    index: i,
                    kind: c.kind_name(),
                    reason: format!("lives in P^{} but the ambient space is P^{n}", c.ambient()),
                });
            }
        }
        Ok(SchemeConfig {
            n,
            field,
            components,
        })
    }

    pub fn prime(&self) -> &PrimeField {
        &self.field.prime
    }

    pub fn nominal_conditions(&self, d: u32) -> u64 {
        self.components
            .iter()
            .map(|c| c.nominal_conditions(self.n, d))
            .fold(0u64, u64::saturating_add)
    }

    /// A copy with one more component.
    pub fn with_component(&self, c: Component) -> Result<Self> {
        let mut components = self.components.clone();
        components.push(c);
        SchemeConfig::new(self.n, self.field, components)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: SchemeConfig = serde_json::from_str(s)?;
        SchemeConfig::new(cfg.n, cfg.field, cfg.components)
    }

    /// Counts per component kind, e.g. `4 line + 1 fat_point(2)`.
    pub fn summary(&self) -> String {
        let mut parts: Vec<(String, usize)> = Vec::new();
        for c in &self.components {
            let label = match c {
                Component::FatPoint { multiplicity, .. } => format!("fat_point({multiplicity})"),
                other => other.kind_name().to_string(),
            };
            match parts.iter_mut().find(|(l, _)| *l == label) {
                Some((_, k)) => *k += 1,
                None => parts.push((label, 1)),
            }
        }
        if parts.is_empty() {
            return "empty".into();
        }
        parts
            .iter()
            .map(|(l, k)| format!("{k} {l}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Where the components of a [`ComponentSpec`] are placed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Generic,
    InHyperplane,
    OnQuadric,
    InRuling(u8),
    /// All points of the group on one fresh generic line.
    OnCommonLine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentSpec {
    Lines {
        count: u32,
        placement: Placement,
    },
    FatPoint {
        multiplicity: u32,
        placement: Placement,
    },
    Points {
        count: u32,
        placement: Placement,
    },
    Sundials {
        count: u32,
        placement: Placement,
    },
    /// Pairs of lines through a common point, emitted as two line components.
    Conics {
        count: u32,
        placement: Placement,
    },
}

/// An abstract scheme description that can be realized for any seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recipe {
    pub n: u32,
    pub items: Vec<ComponentSpec>,
}

impl Recipe {
    pub fn new(n: u32) -> Self {
        Recipe {
            n,
            items: Vec::new(),
        }
    }

    pub fn push(mut self, item: ComponentSpec) -> Self {
        self.items.push(item);
        self
    }

    pub fn lines(self, count: u32, placement: Placement) -> Self {
        self.push(ComponentSpec::Lines { count, placement })
    }

    pub fn fat_point(self, multiplicity: u32, placement: Placement) -> Self {
        if multiplicity == 0 {
            return self;
        }
        self.push(ComponentSpec::FatPoint {
            multiplicity,
            placement,
        })
    }

    pub fn points(self, count: u32, placement: Placement) -> Self {
        self.push(ComponentSpec::Points { count, placement })
    }

    pub fn sundials(self, count: u32, placement: Placement) -> Self {
        self.push(ComponentSpec::Sundials { count, placement })
    }

    pub fn conics(self, count: u32, placement: Placement) -> Self {
        self.push(ComponentSpec::Conics { count, placement })
    }

    /// Generic lines, then the fat point, then the extra points.
    pub fn from_instance(inst: &Instance) -> Self {
        let placement = if inst.points_on_line {
            Placement::OnCommonLine
        } else {
            Placement::Generic
        };
        let mut r = Recipe::new(inst.n)
            .lines(inst.s, Placement::Generic)
            .fat_point(inst.m, Placement::Generic);
        if inst.extra_points > 0 {
            r = r.points(inst.extra_points, placement);
        }
        r
    }

    pub fn nominal_conditions(&self, d: u32) -> u64 {
        let d64 = d as u64;
        self.items
            .iter()
            .map(|item| match *item {
                ComponentSpec::Lines { count, .. } => count as u64 * (d64 + 1),
                ComponentSpec::FatPoint { multiplicity, .. } => u64::try_from(
                    crate::combinatorics::fat_point_conditions(self.n, multiplicity),
                )
                .unwrap_or(u64::MAX),
                ComponentSpec::Points { count, .. } => count as u64,
                ComponentSpec::Sundials { count, .. } | ComponentSpec::Conics { count, .. } => {
                    count as u64 * 2 * (d64 + 1)
                }
            })
            .fold(0u64, u64::saturating_add)
    }
}

/// Realizes an instance: `s` generic lines, the fat point, the extra points.
pub fn build_instance(inst: &Instance, field: FieldSpec) -> Result<SchemeConfig> {
    inst.validate()?;
    if field.prime.modulus() <= inst.d as u64 {
        return Err(Error::PrimeTooSmall {
            p: field.prime.modulus(),
            d: inst.d,
        });
    }
    build_config(&Recipe::from_instance(inst), field)
}

/// Draws coordinates for every component of `recipe`; deterministic in
/// `(field.seed, field.prime)`.
pub fn build_config(recipe: &Recipe, field: FieldSpec) -> Result<SchemeConfig> {
    if recipe.n < 2 {
        return Err(Error::InvalidInstance(format!(
            "ambient dimension {} < 2",
            recipe.n
        )));
    }
    let mut drawer = Drawer {
        n: recipe.n,
        field: field.prime,
        seed: field.seed,
        rng: ChaCha8Rng::seed_from_u64(field.seed),
    };
    let mut components = Vec::new();
    for item in &recipe.items {
        drawer.draw_item(item, &mut components)?;
    }
    SchemeConfig::new(recipe.n, field, components)
}

struct Drawer {
    n: u32,
    field: PrimeField,
    seed: u64,
    rng: ChaCha8Rng,
}

impl Drawer {
    fn element(&mut self) -> u64 {
        self.rng.gen_range(0..self.field.modulus())
    }

    fn nonzero(&mut self) -> u64 {
        self.rng.gen_range(1..self.field.modulus())
    }

    fn vector(&mut self, len: usize) -> Vec<u64> {
        (0..len).map(|_| self.element()).collect()
    }

    fn retry<T>(
        &mut self,
        what: &'static str,
        mut f: impl FnMut(&mut Self) -> Result<T>,
    ) -> Result<T> {
        for _ in 0..MAX_REDRAWS {
            if let Ok(v) = f(self) {
                return Ok(v);
            }
        }
        Err(Error::DegenerateDraw {
            what,
            attempts: MAX_REDRAWS,
            seed: self.seed,
        })
    }

    fn need_quadric(&self) -> Result<()> {
        if self.n != 3 {
            return Err(Error::Unsupported(format!(
                "quadric placements need n = 3 (got {})",
                self.n
            )));
        }
        Ok(())
    }

    fn generic_point(&mut self) -> Result<ProjPoint> {
        let len = self.n as usize + 1;
        self.retry("point", |s| {
            let v = s.vector(len);
            ProjPoint::new(v, &s.field)
        })
    }

    fn hyperplane_point(&mut self) -> Result<ProjPoint> {
        let len = self.n as usize;
        self.retry("hyperplane point", |s| {
            let mut v = s.vector(len);
            v.push(0);
            ProjPoint::new(v, &s.field)
        })
    }

    fn off_hyperplane_point(&mut self) -> Result<ProjPoint> {
        let len = self.n as usize;
        self.retry("point off the hyperplane", |s| {
            let mut v = s.vector(len);
            v.push(s.nonzero());
            ProjPoint::new(v, &s.field)
        })
    }

    fn p1_point(&mut self) -> [u64; 2] {
        loop {
            let v = [self.element(), self.element()];
            if v != [0, 0] {
                return v;
            }
        }
    }

    fn quadric_point(&mut self) -> Result<ProjPoint> {
        self.need_quadric()?;
        let (s, t) = (self.p1_point(), self.p1_point());
        quadric_point(&self.field, s, t)
    }

    fn point(&mut self, placement: Placement) -> Result<ProjPoint> {
        match placement {
            Placement::Generic => self.generic_point(),
            Placement::InHyperplane => self.hyperplane_point(),
            Placement::OnQuadric => self.quadric_point(),
            other => Err(Error::Unsupported(format!("point placement {other:?}"))),
        }
    }

    fn line(&mut self, placement: Placement) -> Result<LineRep> {
        match placement {
            Placement::Generic => self.retry("line", |s| {
                let a = s.generic_point()?;
                let b = s.generic_point()?;
                LineRep::new(a, b)
            }),
            Placement::InHyperplane => self.retry("hyperplane line", |s| {
                let a = s.hyperplane_point()?;
                let b = s.hyperplane_point()?;
                LineRep::new(a, b)
            }),
            Placement::InRuling(ruling) => {
                self.need_quadric()?;
                let param = self.p1_point();
                ruling_line(&self.field, ruling, param)
            }
            other => Err(Error::Unsupported(format!("line placement {other:?}"))),
        }
    }

    fn sundial(&mut self, placement: Placement) -> Result<Sundial> {
        if self.n < 3 {
            return Err(Error::Unsupported("sundials need n >= 3".into()));
        }
        self.retry("sundial", |s| {
            let (vertex, a, b, w) = match placement {
                Placement::Generic => (
                    s.generic_point()?,
                    s.generic_point()?,
                    s.generic_point()?,
                    s.generic_point()?,
                ),
                Placement::InHyperplane => (
                    s.hyperplane_point()?,
                    s.hyperplane_point()?,
                    s.hyperplane_point()?,
                    s.off_hyperplane_point()?,
                ),
                Placement::OnQuadric => (
                    s.quadric_point()?,
                    s.generic_point()?,
                    s.generic_point()?,
                    s.generic_point()?,
                ),
                other => return Err(Error::Unsupported(format!("sundial placement {other:?}"))),
            };
            Sundial::new(vertex, a, b, w, &s.field)
        })
    }

    fn conic(&mut self, placement: Placement) -> Result<(LineRep, LineRep)> {
        self.retry("conic", |s| {
            let (vertex, a, b) = match placement {
                Placement::Generic => (s.generic_point()?, s.generic_point()?, s.generic_point()?),
                Placement::InHyperplane => (
                    s.hyperplane_point()?,
                    s.hyperplane_point()?,
                    s.hyperplane_point()?,
                ),
                other => return Err(Error::Unsupported(format!("conic placement {other:?}"))),
            };
            let rank = s
                .field
                .rank(&[vertex.coords.clone(), a.coords.clone(), b.coords.clone()]);
            if rank != 3 {
                return Err(Error::Geometry("collinear conic data".into()));
            }
            Ok((LineRep::new(vertex.clone(), a)?, LineRep::new(vertex, b)?))
        })
    }

    fn constraint(placement: Placement) -> Constraint {
        match placement {
            Placement::Generic | Placement::OnCommonLine => Constraint::Generic,
            Placement::InHyperplane => Constraint::InHyperplane,
            Placement::OnQuadric => Constraint::OnQuadric,
            Placement::InRuling(ruling) => Constraint::InRuling { ruling },
        }
    }

    fn draw_item(&mut self, item: &ComponentSpec, out: &mut Vec<Component>) -> Result<()> {
        match *item {
            ComponentSpec::Lines { count, placement } => {
                for _ in 0..count {
                    let line = self.line(placement)?;
                    out.push(Component::Line {
                        line,
                        constraint: Self::constraint(placement),
                    });
                }
            }
            ComponentSpec::FatPoint {
                multiplicity,
                placement,
            } => {
                let point = self.point(placement)?;
                out.push(Component::FatPoint {
                    point,
                    multiplicity,
                    constraint: Self::constraint(placement),
                });
            }
            ComponentSpec::Points { count, placement } => {
                if placement == Placement::OnCommonLine {
                    if count == 0 {
                        return Ok(());
                    }
                    let carrier = self.line(Placement::Generic)?;
                    for _ in 0..count {
                        let point = self.retry("point on line", |s| {
                            let (u, v) = (s.element(), s.element());
                            ProjPoint::new(carrier.point_at(u, v, &s.field), &s.field)
                        })?;
                        out.push(Component::SimplePoint {
                            point,
                            constraint: Constraint::OnLine {
                                line: carrier.clone(),
                            },
                        });
                    }
                } else {
                    for _ in 0..count {
                        let point = self.point(placement)?;
                        out.push(Component::SimplePoint {
                            point,
                            constraint: Self::constraint(placement),
                        });
                    }
                }
            }
            ComponentSpec::Sundials { count, placement } => {
                for _ in 0..count {
                    let sundial = self.sundial(placement)?;
                    out.push(Component::Sundial {
                        sundial,
                        constraint: Self::constraint(placement),
                    });
                }
            }
            ComponentSpec::Conics { count, placement } => {
                for _ in 0..count {
                    let (l, m) = self.conic(placement)?;
                    for line in [l, m] {
                        out.push(Component::Line {
                            line,
                            constraint: Self::constraint(placement),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// The Segre image of `(s, t)` on the quadric `x0*x3 = x1*x2`.
pub fn quadric_point(field: &PrimeField, s: [u64; 2], t: [u64; 2]) -> Result<ProjPoint> {
    let coords = vec![
        field.mul(s[0], t[0]),
        field.mul(s[1], t[0]),
        field.mul(s[0], t[1]),
        field.mul(s[1], t[1]),
    ];
    ProjPoint::new(coords, field)
}

/// The ruling line fixing the `ruling`-th factor at `param`.
pub fn ruling_line(field: &PrimeField, ruling: u8, param: [u64; 2]) -> Result<LineRep> {
    let (a, b) = match ruling {
        0 => (
            quadric_point(field, param, [1, 0])?,
            quadric_point(field, param, [0, 1])?,
        ),
        1 => (
            quadric_point(field, [1, 0], param)?,
            quadric_point(field, [0, 1], param)?,
        ),
        other => {
            return Err(Error::Geometry(format!(
                "ruling index {other} not in {{0, 1}}"
            )))
        }
    };
    LineRep::new(a, b)
}

/// The parameter of `line` in the given ruling, if it belongs to it.
pub fn ruling_parameter(line: &LineRep, ruling: u8, field: &PrimeField) -> Option<[u64; 2]> {
    if line.ambient() != 3 {
        return None;
    }
    // Ruling 0 lines have x_{i+2j} = s_i t_j with s fixed: (x0:x1) = (x2:x3) = s.
    // Ruling 1 lines fix t: (x0:x2) = (x1:x3) = t.
    let pick = |c: &[u64]| -> [[u64; 2]; 2] {
        match ruling {
            0 => [[c[0], c[1]], [c[2], c[3]]],
            _ => [[c[0], c[2]], [c[1], c[3]]],
        }
    };
    if ruling > 1 {
        return None;
    }
    let mut param: Option<[u64; 2]> = None;
    for p in [&line.a, &line.b] {
        for pair in pick(p.coords()) {
            if pair == [0, 0] {
                continue;
            }
            match param {
                None => param = Some(pair),
                Some(q) => {
                    if field.mul(q[0], pair[1]) != field.mul(q[1], pair[0]) {
                        return None;
                    }
                }
            }
        }
    }
    if !(line.a.on_quadric(field) && line.b.on_quadric(field)) {
        return None;
    }
    param
}

/// Degenerates two lines into a sundial inside their span.
///
/// Skew lines: the second line `M` is kept, the first is replaced by the line
/// from a point `P` of `M` to a point of the first line, and the remaining
/// point of the first line supplies the embedded direction, so the sundial's
/// 3-space is the span of the input. Intersecting lines: the sundial is built
/// at the intersection with a random embedded direction.
pub fn degenerate_pair_to_sundial(
    first: &LineRep,
    second: &LineRep,
    field: FieldSpec,
) -> Result<Component> {
    let f = &field.prime;
    if first.ambient() != second.ambient() || first.ambient() < 3 {
        return Err(Error::Geometry(
            "sundials need two lines in the same P^n, n >= 3".into(),
        ));
    }
    let span = f.rank(&[
        first.a.coords.clone(),
        first.b.coords.clone(),
        second.a.coords.clone(),
        second.b.coords.clone(),
    ]);
    let sundial = match span {
        4 => Sundial::new(
            second.a.clone(),
            first.a.clone(),
            second.b.clone(),
            first.b.clone(),
            f,
        )?,
        3 => {
            let vertex = intersection(first, second, f)?;
            let other = |l: &LineRep| {
                if l.a == vertex {
                    l.b.clone()
                } else {
                    l.a.clone()
                }
            };
            let (a, b) = (other(first), other(second));
            let mut drawer = Drawer {
                n: first.ambient(),
                field: *f,
                seed: field.seed,
                rng: ChaCha8Rng::seed_from_u64(field.seed),
            };
            drawer.retry("sundial direction", |s| {
                let w = s.generic_point()?;
                Sundial::new(vertex.clone(), a.clone(), b.clone(), w, f)
            })?
        }
        _ => return Err(Error::Geometry("the two lines coincide".into())),
    };
    Ok(Component::Sundial {
        sundial,
        constraint: Constraint::Generic,
    })
}

/// Intersection point of two distinct coplanar lines.
fn intersection(l1: &LineRep, l2: &LineRep, f: &PrimeField) -> Result<ProjPoint> {
    let len = l1.a.coords.len();
    let rows: Vec<Vec<u64>> = (0..len)
        .map(|i| {
            vec![
                l1.a.coords[i],
                l1.b.coords[i],
                l2.a.coords[i],
                l2.b.coords[i],
            ]
        })
        .collect();
    let ker = f.kernel(&rows, 4);
    let [x] = ker.as_slice() else {
        return Err(Error::Geometry(
            "lines do not meet in a single point".into(),
        ));
    };
    ProjPoint::new(l1.point_at(x[0], x[1], f), f)
}
