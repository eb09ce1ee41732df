//! The dimension oracle.
//!
//! Each component contributes linear functionals on the space of degree-`d`
//! forms (columns indexed by monomials); the dimension of `(I_X)_d` is the
//! number of monomials minus the rank of the stacked functionals over F_p.
//!
//! Functionals per component:
//! * line `u*a + v*b`: evaluation at `a + t*b` for `t = 0..d-1` and at `b`;
//!   a binary form of degree `d` with `d + 1` zeros is zero.
//! * `m`-fold point: all partial derivatives of order `min(m - 1, d)` at the
//!   point. By Euler's relation this also kills every lower order, so the
//!   count is `C(m+n-1, n)` when `m <= d + 1`.
//! * simple point: evaluation.
//! * sundial: both line blocks, plus the first derivatives at the vertex
//!   along the two line directions and the embedded direction.
//!
//! A random configuration can only have a larger dimension than the generic
//! one, and never less than `C(d+n,n) - nominal`. When the minimum over
//! trials hits that floor the generic value is pinned and the result is
//! marked certified.

use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::forms_dim;
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::scheme::{Component, FieldSpec, ProjPoint, Recipe, SchemeConfig};

/// Degree-`d` monomials in `n + 1` variables, graded-lexicographic
/// (`x0^d` first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    pub n: u32,
    pub d: u32,
    exponents: Vec<Vec<u32>>,
}

impl MonomialBasis {
    pub fn new(n: u32, d: u32) -> Self {
        let mut exponents = Vec::new();
        let mut current = vec![0u32; n as usize + 1];
        fill_exponents(0, d, &mut current, &mut exponents);
        MonomialBasis { n, d, exponents }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[Vec<u32>] {
        &self.exponents
    }

    fn powers(&self, point: &[u64], field: &PrimeField) -> Vec<Vec<u64>> {
        point
            .iter()
            .map(|&x| {
                let mut pw = Vec::with_capacity(self.d as usize + 1);
                let mut acc = 1;
                for _ in 0..=self.d {
                    pw.push(acc);
                    acc = field.mul(acc, x);
                }
                pw
            })
            .collect()
    }

    /// Values of all monomials at `point`.
    pub fn evaluation_row(&self, point: &[u64], field: &PrimeField) -> Vec<u64> {
        let pw = self.powers(point, field);
        self.exponents
            .iter()
            .map(|e| {
                e.iter()
                    .enumerate()
                    .fold(1, |acc, (i, &k)| field.mul(acc, pw[i][k as usize]))
            })
            .collect()
    }

    /// The functional `f -> (d^alpha f)(point)`.
    pub fn derivative_row(&self, alpha: &[u32], point: &[u64], field: &PrimeField) -> Vec<u64> {
        let pw = self.powers(point, field);
        self.exponents
            .iter()
            .map(|beta| {
                let mut acc = 1;
                for (i, (&b, &a)) in beta.iter().zip(alpha).enumerate() {
                    if b < a {
                        return 0;
                    }
                    for k in 0..a {
                        acc = field.mul(acc, (b - k) as u64);
                    }
                    acc = field.mul(acc, pw[i][(b - a) as usize]);
                }
                acc
            })
            .collect()
    }

    /// The functional `f -> sum_i dir_i * (d_i f)(point)`.
    pub fn directional_row(&self, dir: &[u64], point: &[u64], field: &PrimeField) -> Vec<u64> {
        let pw = self.powers(point, field);
        self.exponents
            .iter()
            .map(|beta| {
                let mut total = 0;
                for (i, &w) in dir.iter().enumerate() {
                    if w == 0 || beta[i] == 0 {
                        continue;
                    }
                    let mut term = field.mul(w, beta[i] as u64);
                    for (j, &b) in beta.iter().enumerate() {
                        let e = if i == j { b - 1 } else { b };
                        term = field.mul(term, pw[j][e as usize]);
                    }
                    total = field.add(total, term);
                }
                total
            })
            .collect()
    }
}

fn fill_exponents(var: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if var + 1 == current.len() {
        current[var] = left;
        out.push(current.clone());
        return;
    }
    for k in (0..=left).rev() {
        current[var] = k;
        fill_exponents(var + 1, left - k, current, out);
    }
    current[var] = 0;
}

/// All exponent vectors of total degree `k` in `len` variables.
fn multi_indices(len: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; len];
    fill_exponents(0, k, &mut current, &mut out);
    out
}

fn check_prime(field: &PrimeField, d: u32) -> Result<()> {
    if field.modulus() <= d as u64 {
        return Err(Error::PrimeTooSmall {
            p: field.modulus(),
            d,
        });
    }
    Ok(())
}

fn line_rows(
    a: &ProjPoint,
    b: &ProjPoint,
    basis: &MonomialBasis,
    field: &PrimeField,
    out: &mut Vec<Vec<u64>>,
) {
    for t in 0..basis.d as u64 {
        let pt: Vec<u64> = a
            .coords()
            .iter()
            .zip(b.coords())
            .map(|(&x, &y)| field.add(x, field.mul(t, y)))
            .collect();
        out.push(basis.evaluation_row(&pt, field));
    }
    out.push(basis.evaluation_row(b.coords(), field));
}

/// The functionals a component imposes on degree-`basis.d` forms.
pub fn condition_rows(
    c: &Component,
    basis: &MonomialBasis,
    field: &PrimeField,
) -> Result<Vec<Vec<u64>>> {
    check_prime(field, basis.d)?;
    let mut rows = Vec::new();
    match c {
        Component::Line { line, .. } => line_rows(&line.a, &line.b, basis, field, &mut rows),
        Component::FatPoint {
            point,
            multiplicity,
            ..
        } => {
            if *multiplicity > 0 {
                let order = (*multiplicity - 1).min(basis.d);
                for alpha in multi_indices(basis.n as usize + 1, order) {
                    rows.push(basis.derivative_row(&alpha, point.coords(), field));
                }
            }
        }
        Component::SimplePoint { point, .. } => {
            rows.push(basis.evaluation_row(point.coords(), field))
        }
        Component::Sundial { sundial, .. } => {
            line_rows(&sundial.first.a, &sundial.first.b, basis, field, &mut rows);
            line_rows(
                &sundial.second.a,
                &sundial.second.b,
                basis,
                field,
                &mut rows,
            );
            let v = sundial.vertex.coords();
            for dir in [&sundial.first.b, &sundial.second.b, &sundial.direction] {
                rows.push(basis.directional_row(dir.coords(), v, field));
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct ConditionMatrix {
    pub rows: Vec<Vec<u64>>,
    /// Index of the component each row came from.
    pub provenance: Vec<usize>,
    pub ncols: usize,
}

impl ConditionMatrix {
    pub fn assemble(config: &SchemeConfig, basis: &MonomialBasis) -> Result<Self> {
        let mut rows = Vec::new();
        let mut provenance = Vec::new();
        for (i, c) in config.components.iter().enumerate() {
            let block = condition_rows(c, basis, config.prime())?;
            provenance.extend(std::iter::repeat_n(i, block.len()));
            rows.extend(block);
        }
        Ok(ConditionMatrix {
            rows,
            provenance,
            ncols: basis.len(),
        })
    }

    pub fn rank(&self, field: &PrimeField) -> usize {
        let mut work = self.rows.clone();
        field.echelonize(&mut work)
    }
}

/// Dimension of `(I_X)_d` for a family of random realizations.
#[derive(Clone, Debug, Serialize)]
pub struct DimResult {
    pub n: u32,
    pub d: u32,
    pub prime: u64,
    pub seeds: Vec<u64>,
    pub trial_dims: Vec<u64>,
    pub trials: usize,
    /// Rank of the condition matrix of the minimizing trial.
    pub rank: u64,
    /// Minimum dimension over trials: an upper bound on the generic value.
    pub dim: u64,
    /// `max{C(d+n,n) - nominal conditions, 0}`: a lower bound for every instance.
    pub expected: u64,
    pub certified: bool,
    /// The minimizing configuration, for exact replay.
    pub replay: SchemeConfig,
}

impl DimResult {
    pub fn basis_size(&self) -> u64 {
        self.rank + self.dim
    }
}

fn floor_dim(n: u32, d: u32, nominal: u64) -> u64 {
    let total = u64::try_from(forms_dim(n, d)).unwrap_or(u64::MAX);
    total.saturating_sub(nominal)
}

/// Rank and dimension for a single configuration.
pub fn config_rank(config: &SchemeConfig, d: u32) -> Result<(u64, u64)> {
    check_prime(config.prime(), d)?;
    let basis = MonomialBasis::new(config.n, d);
    let matrix = ConditionMatrix::assemble(config, &basis)?;
    let rank = matrix.rank(config.prime()) as u64;
    Ok((rank, basis.len() as u64 - rank))
}

/// Dimension of `(I_X)_d` for one concrete configuration.
pub fn instance_dim(config: &SchemeConfig, d: u32) -> Result<DimResult> {
    let (rank, dim) = config_rank(config, d)?;
    let expected = floor_dim(config.n, d, config.nominal_conditions(d));
    Ok(DimResult {
        n: config.n,
        d,
        prime: config.prime().modulus(),
        seeds: vec![config.field.seed],
        trial_dims: vec![dim],
        trials: 1,
        rank,
        dim,
        expected,
        certified: dim == expected,
        replay: config.clone(),
    })
}

/// Seed used for trial `k` of a run with base seed `seed`.
pub fn trial_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add(k as u64)
}

/// Minimum of `(I_X)_d` over `trials` independent realizations of `recipe`.
pub fn ideal_dim(recipe: &Recipe, d: u32, field: FieldSpec, trials: usize) -> Result<DimResult> {
    if trials == 0 {
        return Err(Error::InvalidInstance("trials must be at least 1".into()));
    }
    check_prime(&field.prime, d)?;
    let runs: Vec<(SchemeConfig, u64, u64)> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let cfg =
                crate::scheme::build_config(recipe, field.with_seed(trial_seed(field.seed, k)))?;
            let (rank, dim) = config_rank(&cfg, d)?;
            Ok((cfg, rank, dim))
        })
        .collect::<Result<_>>()?;
    let best = runs
        .iter()
        .enumerate()
        .min_by_key(|(i, (_, _, dim))| (*dim, *i))
        .map(|(i, _)| i)
        .expect("trials >= 1");
    let expected = floor_dim(recipe.n, d, recipe.nominal_conditions(d));
    let (cfg, rank, dim) = runs[best].clone();
    Ok(DimResult {
        n: recipe.n,
        d,
        prime: field.prime.modulus(),
        seeds: runs.iter().map(|(c, _, _)| c.field.seed).collect(),
        trial_dims: runs.iter().map(|r| r.2).collect(),
        trials,
        rank,
        dim,
        expected,
        certified: dim == expected,
        replay: cfg,
    })
}

/// Constraints for [`bidegree_dim`] on `P^1 x P^1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BidegreeConditions {
    /// Lines `{s} x P^1` (ruling 0) and `P^1 x {t}` (ruling 1).
    pub ruling_lines: (u32, u32),
    pub simple_points: u32,
    pub double_points: u32,
}

/// Dimension of bidegree-`(a, b)` forms on `P^1 x P^1` vanishing on random
/// ruling lines, simple points and double points.
///
/// `a` is the degree in the first factor. A ruling-0 line imposes `b + 1`
/// evaluations along the second factor; a double point imposes its value and
/// both affine partial derivatives.
pub fn bidegree_dim(a: u32, b: u32, cond: BidegreeConditions, field: FieldSpec) -> Result<u64> {
    let f = &field.prime;
    check_prime(f, a.max(b))?;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(field.seed);
    let p = f.modulus();
    let mut p1 = move || loop {
        let v = [rng.gen_range(0..p), rng.gen_range(0..p)];
        if v != [0, 0] {
            return v;
        }
    };
    let pows = |x: [u64; 2], deg: u32| -> Vec<u64> {
        // x0^(deg-i) * x1^i for i = 0..=deg
        (0..=deg)
            .map(|i| f.mul(f.pow(x[0], (deg - i) as u64), f.pow(x[1], i as u64)))
            .collect()
    };
    let eval = |s: [u64; 2], t: [u64; 2]| -> Vec<u64> {
        let (ps, pt) = (pows(s, a), pows(t, b));
        ps.iter()
            .flat_map(|&x| pt.iter().map(move |&y| f.mul(x, y)))
            .collect()
    };
    let samples =
        |deg: u32| -> Vec<[u64; 2]> { (0..deg as u64).map(|k| [1, k]).chain([[0, 1]]).collect() };

    let mut rows = Vec::new();
    for _ in 0..cond.ruling_lines.0 {
        let s = p1();
        for t in samples(b) {
            rows.push(eval(s, t));
        }
    }
    for _ in 0..cond.ruling_lines.1 {
        let t = p1();
        for s in samples(a) {
            rows.push(eval(s, t));
        }
    }
    for _ in 0..cond.simple_points {
        let (s, t) = (p1(), p1());
        rows.push(eval(s, t));
    }
    for _ in 0..cond.double_points {
        let (x, y) = (p1()[1], p1()[1]);
        let xs: Vec<u64> = (0..=a).map(|i| f.pow(x, i as u64)).collect();
        let ys: Vec<u64> = (0..=b).map(|j| f.pow(y, j as u64)).collect();
        let mut value = Vec::new();
        let mut dx = Vec::new();
        let mut dy = Vec::new();
        for i in 0..=a as usize {
            for j in 0..=b as usize {
                value.push(f.mul(xs[i], ys[j]));
                dx.push(if i == 0 {
                    0
                } else {
                    f.mul(f.mul(i as u64, xs[i - 1]), ys[j])
                });
                dy.push(if j == 0 {
                    0
                } else {
                    f.mul(f.mul(j as u64, xs[i]), ys[j - 1])
                });
            }
        }
        rows.extend([value, dx, dy]);
    }
    let total = (a as u64 + 1) * (b as u64 + 1);
    let rank = f.echelonize(&mut rows) as u64;
    Ok(total - rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{binomial, Instance};
    use crate::scheme::{build_instance, Placement};

    fn spec(seed: u64) -> FieldSpec {
        FieldSpec::new(PrimeField::default(), seed)
    }

    #[test]
    fn basis_order_and_size() {
        let b = MonomialBasis::new(2, 2);
        assert_eq!(
            b.exponents(),
            &[
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![1, 0, 1],
                vec![0, 2, 0],
                vec![0, 1, 1],
                vec![0, 0, 2]
            ]
        );
        for (n, d) in [(3, 4), (4, 5), (5, 3)] {
            let size = MonomialBasis::new(n, d).len();
            assert_eq!(binomial(d as i64 + n as i64, n as i64), size.into());
        }
    }

    fn single_rank(recipe: Recipe, d: u32) -> (usize, usize) {
        let cfg = crate::scheme::build_config(&recipe, spec(11)).unwrap();
        let basis = MonomialBasis::new(cfg.n, d);
        let rows = condition_rows(&cfg.components[0], &basis, cfg.prime()).unwrap();
        (rows.len(), cfg.prime().rank(&rows))
    }

    #[test]
    fn line_rows_have_full_rank() {
        assert_eq!(
            single_rank(Recipe::new(3).lines(1, Placement::Generic), 2),
            (3, 3)
        );
    }

    #[test]
    fn double_point_rows() {
        for d in 1..5 {
            assert_eq!(
                single_rank(Recipe::new(3).fat_point(2, Placement::Generic), d),
                (4, 4)
            );
        }
    }

    #[test]
    fn sundial_rows() {
        let (rows, rank) = single_rank(Recipe::new(3).sundials(1, Placement::Generic), 2);
        assert_eq!(rows, 2 * 3 + 3);
        assert_eq!(rank, 6);
    }

    #[test]
    fn fat_point_rank_caps_at_basis() {
        // m = d + 1 imposes every condition.
        let (_, rank) = single_rank(Recipe::new(3).fat_point(4, Placement::Generic), 3);
        assert_eq!(rank, 20);
        // m > d + 1 as well.
        let (_, rank) = single_rank(Recipe::new(3).fat_point(7, Placement::Generic), 3);
        assert_eq!(rank, 20);
    }

    #[test]
    fn prime_must_exceed_degree() {
        let small = FieldSpec::new(PrimeField::new(3).unwrap(), 1);
        let cfg = crate::scheme::build_config(&Recipe::new(3).lines(1, Placement::Generic), small)
            .unwrap();
        let basis = MonomialBasis::new(3, 3);
        assert!(matches!(
            condition_rows(&cfg.components[0], &basis, cfg.prime()),
            Err(Error::PrimeTooSmall { .. })
        ));
        assert!(ideal_dim(&Recipe::new(3), 3, small, 1).is_err());
    }

    #[test]
    fn ideal_dim_examples() {
        let r = ideal_dim(
            &Recipe::from_instance(&Instance::new(3, 3, 4, 2)),
            3,
            spec(1),
            3,
        )
        .unwrap();
        assert_eq!(r.dim, 0);
        assert!(r.certified);

        let r = ideal_dim(
            &Recipe::from_instance(&Instance::new(3, 3, 2, 3)),
            3,
            spec(1),
            3,
        )
        .unwrap();
        assert_eq!(r.dim, 3);
        assert!(!r.certified);
        assert_eq!(r.trial_dims, vec![3, 3, 3]);

        // Frozen from an independent rational-arithmetic rank computation.
        let r = ideal_dim(
            &Recipe::from_instance(&Instance::new(4, 2, 2, 2)),
            2,
            spec(1),
            3,
        )
        .unwrap();
        assert_eq!(r.dim, 4);
        assert!(r.certified);
        assert_eq!(r.seeds, vec![1, 2, 3]);
    }

    #[test]
    fn instance_dim_matches_single_trial() {
        let inst = Instance::new(3, 4, 3, 2);
        let cfg = build_instance(&inst, spec(7)).unwrap();
        let a = instance_dim(&cfg, 4).unwrap();
        let b = ideal_dim(&Recipe::from_instance(&inst), 4, spec(7), 1).unwrap();
        assert_eq!(a.dim, b.dim);
        assert_eq!(a.replay, b.replay);
    }

    #[test]
    fn degree_zero_is_supported() {
        let cfg =
            build_instance(&Instance::new(3, 1, 0, 0).with_points(1, false), spec(1)).unwrap();
        assert_eq!(instance_dim(&cfg, 0).unwrap().dim, 0);
        let empty = build_instance(&Instance::new(3, 1, 0, 0), spec(1)).unwrap();
        assert_eq!(instance_dim(&empty, 0).unwrap().dim, 1);
    }

    #[test]
    fn bidegree_examples() {
        let none = BidegreeConditions::default();
        assert_eq!(bidegree_dim(4, 4, none, spec(1)).unwrap(), 25);
        let c = BidegreeConditions {
            simple_points: 14,
            ..none
        };
        assert_eq!(bidegree_dim(1, 6, c, spec(1)).unwrap(), 0);
        let c = BidegreeConditions {
            simple_points: 21,
            double_points: 1,
            ..none
        };
        assert_eq!(bidegree_dim(2, 7, c, spec(1)).unwrap(), 0);
        // A ruling-0 line lowers the first degree by one.
        let c = BidegreeConditions {
            ruling_lines: (2, 0),
            ..none
        };
        assert_eq!(bidegree_dim(3, 3, c, spec(1)).unwrap(), 2 * 4);
        let c = BidegreeConditions {
            ruling_lines: (0, 1),
            ..none
        };
        assert_eq!(bidegree_dim(3, 2, c, spec(1)).unwrap(), 4 * 2);
        let small = FieldSpec::new(PrimeField::new(5).unwrap(), 1);
        assert!(bidegree_dim(5, 2, none, small).is_err());
    }

    #[test]
    fn double_point_on_quadric_gives_three_conditions() {
        let c = BidegreeConditions {
            double_points: 1,
            ..Default::default()
        };
        for (a, b) in [(1, 1), (1, 5), (2, 7), (3, 3)] {
            let total = (a + 1) * (b + 1);
            assert_eq!(bidegree_dim(a, b, c, spec(3)).unwrap(), total as u64 - 3);
        }
    }
}
