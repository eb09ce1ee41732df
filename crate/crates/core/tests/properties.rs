use hilbert_lines::castelnuovo::split;
use hilbert_lines::combinatorics::{
    binomial, cone_dim, er_params, expected_dim, fat_point_conditions, forms_dim,
    param_inequalities, predicted_dim,
};
use hilbert_lines::linear_system::config_rank;
use hilbert_lines::scheme::{
    build_config, ruling_line, Component, Placement, Recipe, SchemeConfig,
};
use hilbert_lines::{FieldSpec, Instance, PrimeField};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn field(seed: u64) -> FieldSpec {
    FieldSpec::new(PrimeField::default(), seed)
}

fn dim(cfg: &SchemeConfig, d: u32) -> u64 {
    config_rank(cfg, d).unwrap().1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn division_identity(n in 3u32..7, d in 1u32..14, m_frac in 0.0f64..=1.0) {
        let m = (m_frac * d as f64).floor() as u32;
        let p = er_params(n, d, m).unwrap();
        let lhs = forms_dim(n, d) - fat_point_conditions(n, m);
        prop_assert_eq!(lhs, &p.e * BigInt::from(d + 1) + &p.r);
        prop_assert!(p.r >= BigInt::from(0) && p.r <= BigInt::from(d));
    }

    #[test]
    fn parameter_inequalities_hold(n in 4u32..7, d in 2u32..=12, m_frac in 0.0f64..1.0) {
        let m = 1 + (m_frac * (d - 1) as f64).floor() as u32;
        prop_assume!(m < d);
        prop_assert!(param_inequalities(n, d, m).unwrap().all_hold());
    }

    #[test]
    fn prediction_is_expected_plus_defect(n in 3u32..6, d in 1u32..9, m in 0u32..10, s in 0u32..30) {
        let inst = Instance::new(n, d, s, m);
        let p = predicted_dim(&inst).unwrap();
        prop_assert_eq!(p.dim, expected_dim(&inst) + p.defect);
    }

    #[test]
    fn no_fat_point_means_lines_only(n in 3u32..6, d in 0u32..9, s in 0u32..30) {
        let p = predicted_dim(&Instance::new(n, d, s, 0)).unwrap();
        let raw = forms_dim(n, d) - BigInt::from(s) * (d + 1);
        prop_assert_eq!(p.dim, raw.max(BigInt::from(0)));
    }

    #[test]
    fn reproducible_coordinates(seed in any::<u64>(), lines in 0u32..4, m in 0u32..4) {
        let recipe = Recipe::new(4)
            .lines(lines, Placement::Generic)
            .lines(1, Placement::InHyperplane)
            .fat_point(m, Placement::InHyperplane)
            .points(2, Placement::OnCommonLine)
            .sundials(1, Placement::InHyperplane);
        let a = build_config(&recipe, field(seed)).unwrap();
        let b = build_config(&recipe, field(seed)).unwrap();
        prop_assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    }

    #[test]
    fn constraints_hold_exactly(seed in any::<u64>()) {
        let recipe = Recipe::new(3)
            .lines(2, Placement::InRuling(0))
            .lines(2, Placement::InRuling(1))
            .lines(1, Placement::InHyperplane)
            .fat_point(2, Placement::OnQuadric)
            .points(3, Placement::OnQuadric)
            .points(2, Placement::OnCommonLine)
            .sundials(1, Placement::OnQuadric);
        let cfg = build_config(&recipe, field(seed)).unwrap();
        for c in &cfg.components {
            prop_assert!(c.satisfies_constraint(cfg.prime()), "{:?}", c);
        }
    }

    #[test]
    fn sundial_spans_a_three_space(seed in any::<u64>(), n in 3u32..6) {
        let cfg = build_config(&Recipe::new(n).sundials(1, Placement::Generic), field(seed)).unwrap();
        let Component::Sundial { sundial, .. } = &cfg.components[0] else { unreachable!() };
        let f = cfg.prime();
        prop_assert_eq!(sundial.span_dim(f), 3);
        // The two lines meet only at the vertex: together they span a plane.
        let rows = vec![
            sundial.first.a.coords().to_vec(),
            sundial.first.b.coords().to_vec(),
            sundial.second.a.coords().to_vec(),
            sundial.second.b.coords().to_vec(),
        ];
        prop_assert_eq!(f.rank(&rows), 3);
    }

    #[test]
    fn ruling_incidences(s0 in 1u64..1000, s1 in 1u64..1000, t0 in 1u64..1000, t1 in 1u64..1000) {
        prop_assume!(s0 != s1);
        let f = PrimeField::default();
        let span = |x: &hilbert_lines::scheme::LineRep, y: &hilbert_lines::scheme::LineRep| {
            f.rank(&[
                x.a.coords().to_vec(), x.b.coords().to_vec(),
                y.a.coords().to_vec(), y.b.coords().to_vec(),
            ])
        };
        let a = ruling_line(&f, 0, [1, s0]).unwrap();
        let b = ruling_line(&f, 0, [1, s1]).unwrap();
        let c = ruling_line(&f, 1, [t0, t1]).unwrap();
        prop_assert_eq!(span(&a, &b), 4);
        prop_assert_eq!(span(&a, &c), 3);
    }

    #[test]
    fn dim_at_least_nominal_floor(seed in any::<u64>(), n in 2u32..5, d in 0u32..5,
                                  lines in 0u32..4, m in 0u32..5, pts in 0u32..6) {
        let recipe = Recipe::new(n)
            .lines(lines, Placement::Generic)
            .fat_point(m, Placement::Generic)
            .points(pts, Placement::Generic);
        let cfg = build_config(&recipe, field(seed)).unwrap();
        let total = forms_dim(n, d).to_u64().unwrap();
        prop_assert!(dim(&cfg, d) >= total.saturating_sub(cfg.nominal_conditions(d)));
    }

    #[test]
    fn sundial_specializes_two_lines(seed in any::<u64>(), n in 3u32..5, d in 1u32..5,
                                     lines in 0u32..4, m in 0u32..4) {
        let base = Recipe::new(n).lines(lines, Placement::Generic).fat_point(m, Placement::Generic);
        let pair = build_config(&base.clone().lines(2, Placement::Generic), field(seed)).unwrap();
        let dial = build_config(&base.sundials(1, Placement::Generic), field(seed)).unwrap();
        prop_assert!(dim(&dial, d) >= dim(&pair, d));
    }

    #[test]
    fn fat_point_rank(seed in any::<u64>(), n in 2u32..5, d in 0u32..6, extra in 0u32..=2) {
        let m = (d + extra).min(d + 1);
        prop_assume!(m > 0);
        let cfg = build_config(&Recipe::new(n).fat_point(m, Placement::Generic), field(seed)).unwrap();
        let (rank, _) = config_rank(&cfg, d).unwrap();
        let want = fat_point_conditions(n, m).min(forms_dim(n, d));
        prop_assert_eq!(BigInt::from(rank), want);
    }

    #[test]
    fn fat_point_split_pascal(n in 3u32..7, m in 1u32..12) {
        let whole = fat_point_conditions(n, m);
        let parts = binomial((m - 1 + n - 1) as i64, n as i64)
            + binomial((m + n - 2) as i64, (n - 1) as i64);
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn transversal_line_conserves_conditions(seed in any::<u64>(), n in 3u32..6, d in 1u32..8) {
        let cfg = build_config(&Recipe::new(n).lines(1, Placement::Generic), field(seed)).unwrap();
        let s = split(&cfg, d).unwrap();
        let total = s.residual.nominal_conditions(d - 1) + s.trace.nominal_conditions(d);
        prop_assert_eq!(total, cfg.nominal_conditions(d));
    }

    #[test]
    fn cone_dim_matches_single_line(d in 1u32..20) {
        let p = predicted_dim(&Instance::new(3, d, 1, d)).unwrap();
        prop_assert_eq!(cone_dim(d, 1), binomial(d as i64 + 1, 2));
        prop_assert_eq!(p.dim, binomial(d as i64 + 1, 2));
    }

    #[test]
    fn defect_branches_agree_at_midpoint(h in 1u32..20) {
        let d = 2 * h;
        let s = (d + 2) / 2;
        prop_assert_eq!(binomial(s as i64, 2), binomial((d - s + 2) as i64, 2));
    }
}
