use super::oracle::{exhaustive_hn, frame_subobjects, pool_subspaces};
use super::{CheckOutcome, FilteredIsocrystal, Sampler, Tally};
use crate::error::Result;
use crate::filtration::{
    degree_and_slope, direct_sum, dual, enumerate_subisocrystals, filtration_from_1ps, filtration_pairing,
    flag_distance, hm_semistable, hn_filtration, is_fixed_by, is_semistable, ps_limit, tensor, Direction,
    FilteredSpace,
};
use crate::isocrystal::Isocrystal;
use crate::linalg::{Matrix, Subspace};
use crate::padic::Context;
use crate::rational::{format_rational, int, Rational};

pub fn run(seed: u64, fixtures: &[FilteredIsocrystal]) -> Vec<CheckOutcome> {
    vec![
        pairing_invariance(seed, 200),
        ps_limit_fixed(seed, 200),
        hn_suite(seed, fixtures, 100),
        hm_agreement(),
        flag_ultrametric(seed, 500),
        mu_identities(seed, 200),
    ]
}

pub fn describe(f: &FilteredSpace) -> String {
    let steps: Vec<String> = f
        .steps()
        .iter()
        .map(|(j, s)| {
            let cols: Vec<String> = s
                .canonical_basis()
                .columns()
                .iter()
                .map(|v| {
                    let xs: Vec<String> =
                        v.iter().map(|x| x.reconstruct().map_or(format!("{x:?}"), |q| format_rational(&q))).collect();
                    format!("({})", xs.join(","))
                })
                .collect();
            format!("{}:<{}>", format_rational(j), cols.join(" "))
        })
        .collect();
    steps.join(" ⊂ ")
}

fn random_direction(s: &mut Sampler) -> Direction {
    if s.range(0, 1) == 0 {
        Direction::ToZero
    } else {
        Direction::ToInfinity
    }
}

/// <lim_{t→0} λ(t)F, F_λ> = <F, F_λ> on random (λ, F), dims ≤ 4; a limit
/// t → ∞ is the t → 0 limit of λ⁻¹ and is paired with F_{λ⁻¹}.
pub fn pairing_invariance(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x31);
    let mut t = Tally::new("Eq82-pairing-invariance");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let n = s.range(1, 4) as usize;
        let lambda = s.one_param(&ctx, n);
        let f = s.filtration(&ctx, n);
        let dir = random_direction(&mut s);
        let r = (|| {
            let fl = match dir {
                Direction::ToZero => filtration_from_1ps(&lambda),
                Direction::ToInfinity => filtration_from_1ps(&lambda.inverse()),
            };
            Ok(filtration_pairing(&ps_limit(&lambda, &f, dir)?, &fl)? == filtration_pairing(&f, &fl)?)
        })();
        t.try_case(r, || format!("p={} weights={:?} F={} {dir:?}", ctx.p, lambda.weights(), describe(&f)));
    }
    t.done()
}

/// The limit is λ-fixed and taking it again changes nothing.
pub fn ps_limit_fixed(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x32);
    let mut t = Tally::new("ps-limit-fixed");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let n = s.range(1, 4) as usize;
        let lambda = s.one_param(&ctx, n);
        let f = s.filtration(&ctx, n);
        let dir = random_direction(&mut s);
        let r = (|| {
            let lim = ps_limit(&lambda, &f, dir)?;
            Ok(is_fixed_by(&lambda, &lim) && ps_limit(&lambda, &lim, dir)?.same_as(&lim))
        })();
        t.try_case(r, || format!("p={} weights={:?} F={} {dir:?}", ctx.p, lambda.weights(), describe(&f)));
    }
    t.done()
}

fn same_hn(a: &[(Subspace, Rational)], b: &[(Subspace, Rational)]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|((x, s), (y, t))| s == t && x.same_as(y))
}

fn hn_case(e: &Isocrystal, f: &FilteredSpace, subs: &[Subspace]) -> Result<bool> {
    let hn = hn_filtration(e, f)?;
    let decreasing = hn.windows(2).all(|w| w[0].1 > w[1].1);
    let chains = exhaustive_hn(f, subs);
    Ok(decreasing && chains.len() == 1 && same_hn(&hn, &chains[0]))
}

/// HN filtrations have strictly decreasing slopes and semistable graded
/// pieces, and are the unique such chain found by exhaustive search. Random
/// instances have distinct eigenvalue valuations; their subobjects come from
/// the eigenframe used to build them.
pub fn hn_suite(seed: u64, fixtures: &[FilteredIsocrystal], random: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x33);
    let mut t = Tally::new("hn-unique-semistable-pieces");
    for fx in fixtures {
        let r = enumerate_subisocrystals(&fx.e, &[]).and_then(|subs| hn_case(&fx.e, &fx.f, &subs.subspaces));
        t.try_case(r, || format!("fixture {}", fx.name));
    }
    for _ in 0..random {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let n = s.range(1, 4) as usize;
        let d = s.diagonalizable(&ctx, n, -1, 3, true);
        let f = s.filtration(&ctx, n);
        let r = hn_case(&d.e, &f, &frame_subobjects(&d.frame));
        t.try_case(r, || format!("p={} eigenvalues={:?} F={}", ctx.p, d.eigenvalues, describe(&f)));
    }
    t.done()
}

fn pool_flags(ctx: &Context, n: usize) -> Vec<FilteredSpace> {
    let subs = pool_subspaces(ctx, n, &[0, 1, ctx.p as i64]);
    let full = Subspace::full(ctx, n);
    let mk = |steps: Vec<(i64, Subspace)>| {
        FilteredSpace::new(ctx.p, n, steps.into_iter().map(|(j, s)| (int(j), s)).collect()).expect("nested")
    };
    let mut out = vec![FilteredSpace::trivial(ctx, n, int(0))];
    for a in &subs {
        for top in [1, 2] {
            out.push(mk(vec![(top, a.clone()), (0, full.clone())]));
        }
        if n == 3 && a.dim() == 1 {
            for b in subs.iter().filter(|b| b.dim() == 2 && b.contains(a)) {
                for (j1, j2, j3) in [(2, 1, 0), (1, 0, -1), (3, 1, 0)] {
                    out.push(mk(vec![(j1, a.clone()), (j2, b.clone()), (j3, full.clone())]));
                }
            }
        }
    }
    out
}

/// Exhaustive agreement between semistability and the Hilbert–Mumford test
/// with weights in [−2, 2] on the eigenframe, over flags with coordinates
/// in {0, 1, p} on isocrystals of dimension 2 and 3 with distinct
/// eigenvalue valuations.
pub fn hm_agreement() -> CheckOutcome {
    let mut t = Tally::new("hm-agrees-with-semistability").scope("dims 2–3, weights in [−2,2], p=2,3");
    for p in [2u32, 3] {
        // only intersection dimensions matter; small integer flags need few digits
        let ctx = Context::new(p, 20).unwrap();
        let q = |k: u32| int((p as i64).pow(k));
        let shear = Matrix::from_ints(&ctx, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let isocrystals: Vec<Isocrystal> = vec![
            Isocrystal::diagonal(ctx, &[int(1), q(1)]).unwrap(),
            Isocrystal::diagonal(ctx, &[q(2), -int(1)]).unwrap(),
            Isocrystal::diagonal(ctx, &[int(1), q(1), q(2)]).unwrap(),
            Isocrystal::diagonal(ctx, &[q(2), int(1), q(1)]).unwrap(),
            Isocrystal::new(
                ctx,
                shear.mul(&Matrix::diagonal(p, &[ctx.int(1), ctx.p_power(1), ctx.p_power(3)])).mul(&shear.inverse().unwrap()),
            )
            .unwrap(),
        ];
        for e in &isocrystals {
            for f in pool_flags(&ctx, e.dim()) {
                let r = (|| Ok(is_semistable(e, &f)?.semistable == hm_semistable(e, &f, 2)?.0))();
                t.try_case(r, || format!("p={p} Φ={:?} F={}", e.frobenius(), describe(&f)));
            }
        }
    }
    t.done()
}

/// d(F1, F3) ≤ max(d(F1, F2), d(F2, F3)) on random triples of flags of a
/// common shape.
pub fn flag_ultrametric(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x34);
    let mut t = Tally::new("flag-ultrametric");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let n = s.range(2, 4) as usize;
        let a = s.filtration(&ctx, n);
        let b = s.filtration_like(&ctx, &a);
        let c = s.filtration_like(&ctx, &a);
        let r = (|| {
            let (ab, bc, ac) = (flag_distance(&a, &b)?, flag_distance(&b, &c)?, flag_distance(&a, &c)?);
            Ok(ac <= ab.max(bc) && flag_distance(&a, &a)? == crate::filtration::FlagDistance::Zero)
        })();
        t.try_case(r, || format!("p={} F1={} F2={} F3={}", ctx.p, describe(&a), describe(&b), describe(&c)));
    }
    t.done()
}

/// deg(V ⊕ W) = deg V + deg W, μ(V*) = −μ(V), μ(V ⊗ W) = μ(V) + μ(W).
pub fn mu_identities(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x35);
    let mut t = Tally::new("mu-identities");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let (nv, nw) = (s.range(1, 3) as usize, s.range(1, 3) as usize);
        let v = s.filtration(&ctx, nv);
        let w = s.filtration(&ctx, nw);
        let r = (|| {
            let (dv, mv) = degree_and_slope(&v);
            let (dw, mw) = degree_and_slope(&w);
            let sum_ok = direct_sum(&v, &w)?.degree() == &dv + &dw;
            let dual_ok = degree_and_slope(&dual(&v)?).1 == -mv.clone();
            let tensor_ok = degree_and_slope(&tensor(&v, &w)?).1 == &mv + &mw;
            Ok(sum_ok && dual_ok && tensor_ok)
        })();
        t.try_case(r, || format!("p={} V={} W={}", ctx.p, describe(&v), describe(&w)));
    }
    t.done()
}
