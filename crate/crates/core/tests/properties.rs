use num_traits::Zero;
use proptest::prelude::*;

use padic_hodge::filtration::{
    degree_and_slope, direct_sum, dual, filtration_from_1ps, filtration_pairing, flag_distance, is_fixed_by, ps_limit,
    Direction, FilteredSpace,
};
use padic_hodge::fourier::mahler_expand;
use padic_hodge::isocrystal::{newton_polygon, simple_isocrystal, Isocrystal};
use padic_hodge::orbit::{
    jacobson_morozov, monodromy_weight_filtration, orbit_limit, weight_axioms_hold, NilpotentOperator, OrbitDirection,
};
use padic_hodge::padic::{padic_exp, padic_log, Context, PadicPoly};
use padic_hodge::rational::{rat, val_rat};
use padic_hodge::verify::Sampler;
use padic_hodge::Rational;

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5])
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=30).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |q| !q.is_zero())
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn rationals_survive_the_padic_round_trip(p in prime(), q in small_rational()) {
        let ctx = Context::new(p, 40).unwrap();
        prop_assert_eq!(ctx.rational(&q).reconstruct(), Some(q));
    }

    #[test]
    fn valuation_is_multiplicative_and_ultrametric(p in prime(), a in nonzero_rational(), b in nonzero_rational()) {
        let ctx = Context::new(p, 40).unwrap();
        let (x, y) = (ctx.rational(&a), ctx.rational(&b));
        prop_assert_eq!((&x * &y).valuation(), Some(x.valuation().unwrap() + y.valuation().unwrap()));
        prop_assert_eq!(x.valuation(), val_rat(&a, p));
        let s = &x + &y;
        let (va, vb) = (x.valuation().unwrap(), y.valuation().unwrap());
        if let Some(v) = s.valuation() {
            prop_assert!(v >= va.min(vb));
            if va != vb {
                prop_assert_eq!(v, va.min(vb));
            }
        }
    }

    #[test]
    fn field_operations_agree_with_rationals(p in prime(), a in small_rational(), b in nonzero_rational()) {
        let ctx = Context::new(p, 40).unwrap();
        let (x, y) = (ctx.rational(&a), ctx.rational(&b));
        prop_assert!((&x + &y).approx_eq(&ctx.rational(&(&a + &b))));
        prop_assert!((&x * &y).approx_eq(&ctx.rational(&(&a * &b))));
        prop_assert!(x.checked_div(&y).unwrap().approx_eq(&ctx.rational(&(&a / &b))));
    }

    #[test]
    fn exp_and_log_are_inverse_on_the_disc(p in prime(), u in -50i64..=50, k in 0i64..=4) {
        let ctx = Context::new(p, 40).unwrap();
        let min = if p == 2 { 2 } else { 1 };
        let y = &ctx.int(u) * &ctx.p_power(min + k);
        let back = padic_log(&padic_exp(&y).unwrap()).unwrap();
        prop_assert!(back.approx_eq(&y));
    }

    #[test]
    fn diagonal_newton_polygon_lists_valuations(p in prime(), entries in prop::collection::vec(nonzero_rational(), 1..=4)) {
        let ctx = Context::new(p, 40).unwrap();
        let e = Isocrystal::diagonal(ctx, &entries).unwrap();
        let mut want: Vec<Rational> = entries.iter().map(|q| Rational::from_integer(val_rat(q, p).unwrap().into())).collect();
        want.sort_by(|a, b| b.cmp(a));
        prop_assert_eq!(newton_polygon(&e).unwrap().slopes(), want);
    }

    #[test]
    fn simple_isocrystals_are_isoclinic(p in prime(), r in -5i64..=5, s in 1i64..=4) {
        prop_assume!(num_integer::gcd(r, s) == 1);
        let ctx = Context::new(p, 40).unwrap();
        let nu = newton_polygon(&simple_isocrystal(&ctx, r, s).unwrap()).unwrap();
        prop_assert_eq!(nu.slopes(), vec![rat(r, s); s as usize]);
    }

    #[test]
    fn newton_slopes_add_up_under_direct_sums(seed in any::<u64>(), p in prime()) {
        let ctx = Context::new(p, 40).unwrap();
        let mut s = Sampler::new(seed);
        let a = s.diagonalizable(&ctx, 2, -2, 3, false).e;
        let b = s.diagonalizable(&ctx, 2, -2, 3, false).e;
        let sum = newton_polygon(&a.direct_sum(&b).unwrap()).unwrap();
        let mut want = newton_polygon(&a).unwrap().slopes();
        want.extend(newton_polygon(&b).unwrap().slopes());
        want.sort_by(|x, y| y.cmp(x));
        prop_assert_eq!(sum.slopes(), want);
        prop_assert_eq!(sum.total(), Rational::from_integer(a.frobenius().det().valuation().unwrap().into())
            + Rational::from_integer(b.frobenius().det().valuation().unwrap().into()));
    }

    #[test]
    fn degree_is_additive_and_dual_negates_it(seed in any::<u64>(), p in prime(), n in 1usize..=3, m in 1usize..=3) {
        let ctx = Context::new(p, 40).unwrap();
        let mut s = Sampler::new(seed);
        let (f, g) = (s.filtration(&ctx, n), s.filtration(&ctx, m));
        let (df, _) = degree_and_slope(&f);
        let (dg, _) = degree_and_slope(&g);
        prop_assert_eq!(degree_and_slope(&direct_sum(&f, &g).unwrap()).0, &df + &dg);
        let fd = dual(&f).unwrap();
        prop_assert_eq!(degree_and_slope(&fd).0, -df);
        prop_assert!(dual(&fd).unwrap().same_as(&f));
    }

    #[test]
    fn flag_distance_is_an_ultrametric(seed in any::<u64>(), p in prime(), n in 2usize..=4) {
        let ctx = Context::new(p, 40).unwrap();
        let mut s = Sampler::new(seed);
        let f = s.filtration(&ctx, n);
        let g = s.filtration_like(&ctx, &f);
        let h = s.filtration_like(&ctx, &f);
        let d = |a: &FilteredSpace, b: &FilteredSpace| flag_distance(a, b).unwrap();
        prop_assert_eq!(d(&f, &f), padic_hodge::filtration::FlagDistance::Zero);
        prop_assert_eq!(d(&f, &g), d(&g, &f));
        prop_assert!(d(&f, &h) <= d(&f, &g).max(d(&g, &h)));
    }

    #[test]
    fn ps_limits_are_fixed_and_keep_the_pairing(seed in any::<u64>(), p in prime(), n in 2usize..=4, to_zero in any::<bool>()) {
        let ctx = Context::new(p, 40).unwrap();
        let mut s = Sampler::new(seed);
        let lambda = s.one_param(&ctx, n);
        let f = s.filtration(&ctx, n);
        let (dir, reference) = if to_zero {
            (Direction::ToZero, filtration_from_1ps(&lambda))
        } else {
            (Direction::ToInfinity, filtration_from_1ps(&lambda.inverse()))
        };
        let lim = ps_limit(&lambda, &f, dir).unwrap();
        prop_assert!(is_fixed_by(&lambda, &lim));
        prop_assert!(ps_limit(&lambda, &lim, dir).unwrap().same_as(&lim));
        prop_assert_eq!(lim.gr_dims(), f.gr_dims());
        prop_assert_eq!(filtration_pairing(&lim, &reference).unwrap(), filtration_pairing(&f, &reference).unwrap());
    }

    #[test]
    fn orbit_limits_are_idempotent(seed in any::<u64>(), p in prime(), n in 2usize..=4, minus in any::<bool>()) {
        let ctx = Context::new(p, 40).unwrap();
        let mut s = Sampler::new(seed);
        let op = NilpotentOperator::new(ctx, s.nilpotent(&ctx, n)).unwrap();
        let f0 = s.filtration(&ctx, n);
        let dir = if minus { OrbitDirection::ValToMinusInfinity } else { OrbitDirection::ValToPlusInfinity };
        let lim = orbit_limit(&op, &f0, dir).unwrap();
        prop_assert_eq!(lim.gr_dims(), f0.gr_dims());
        prop_assert!(orbit_limit(&op, &lim, dir).unwrap().same_as(&lim));
    }

    #[test]
    fn jordan_types_give_sl2_triples(p in prime(), blocks in prop::collection::vec(1usize..=3, 1..=3), seed in any::<u64>()) {
        let ctx = Context::new(p, 40).unwrap();
        // N = 0 has no sl2-triple
        prop_assume!(blocks.iter().any(|&b| b > 1));
        let mut blocks = blocks;
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        let m = Sampler::new(seed).jordan_type(&ctx, &blocks);
        let op = NilpotentOperator::new(ctx, m).unwrap();
        let t = jacobson_morozov(&op).unwrap();
        prop_assert!(t.brackets_hold());
        prop_assert_eq!(t.weights.iter().sum::<i64>(), 0);
        let w = monodromy_weight_filtration(&op).unwrap();
        prop_assert!(weight_axioms_hold(&op, &w));
        for i in 1..=3i64 {
            prop_assert_eq!(w.gr_dim(i), w.gr_dim(-i));
        }
    }

    #[test]
    fn mahler_coefficients_reproduce_values(p in prime(), coeffs in prop::collection::vec(small_rational(), 1..=8)) {
        let ctx = Context::new(p, 60).unwrap();
        let f = PadicPoly::from_rationals(&ctx, &coeffs);
        let series = mahler_expand(&ctx, &f);
        for x in 0u64..12 {
            let direct = f.eval(&ctx.int(x as i64));
            prop_assert!(series.eval_at(&ctx, x).unwrap().approx_eq(&direct), "x = {}", x);
        }
        // binomials of degree d vanish past d
        prop_assert!(series.len() <= coeffs.len());
    }
}
