use super::{CheckOutcome, Sampler, Tally};
use crate::fourier::{
    amice_pairing, compose_monoid, decay_envelope, estimate_report, eval_character, mahler_expand, monoid_action,
    CharacterPoint, MahlerSeries,
};
use crate::padic::{binomial_poly, Context, Padic, PadicPoly, TruncatedSeries, INF};
use crate::rational::{format_rational, int, rat};

/// Minimal precision of every certified pairing value.
pub const CERTIFIED_PRECISION: i64 = 20;
pub const DECAY_WINDOWS: [usize; 4] = [16, 32, 64, 128];

pub fn run(seed: u64) -> Vec<CheckOutcome> {
    vec![
        pairing_unit(seed, 100),
        pairing_character(seed, 100),
        pairing_twist(seed, 100),
        pairing_dilation(seed, 100),
        pairing_orthogonality(),
        character_homomorphism(seed, 200),
        monoid_compatibility(seed, 200),
        mahler_roundtrip(seed, 200),
        sup_bound_inequality(),
        decay_envelope_check(),
    ]
}

fn int_poly(s: &mut Sampler, ctx: &Context, max_deg: usize) -> PadicPoly {
    let d = s.index(max_deg + 1);
    PadicPoly::new(ctx.p, (0..=d).map(|_| ctx.int(s.range(-30, 30))).collect())
}

fn rat_padic_poly(s: &mut Sampler, ctx: &Context, max_deg: usize) -> PadicPoly {
    s.rat_poly(max_deg).to_padic(ctx)
}

fn disc_point(s: &mut Sampler, ctx: &Context) -> Padic {
    s.padic_with_val(ctx, 1)
}

fn coeffs(f: &PadicPoly) -> String {
    let cs: Vec<String> =
        f.coeffs().iter().map(|c| c.reconstruct().map_or(format!("{c:?}"), |q| format_rational(&q))).collect();
    format!("[{}]", cs.join(", "))
}

/// {1, f} = f(0).
pub fn pairing_unit(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x51);
    let mut t = Tally::new("pairing-unit");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let f = rat_padic_poly(&mut s, &ctx, 8);
        let m = mahler_expand(&ctx, &f);
        let one = TruncatedSeries::from_poly(&PadicPoly::from_ints(&ctx, &[1]));
        let r = amice_pairing(&one, &m).map(|v| v.approx_eq(&f.eval(&ctx.zero())));
        t.try_case(r, || format!("p={} f={}", ctx.p, coeffs(&f)));
    }
    t.done()
}

/// {F, κ_z} = F(z) for F a power series known to 30 terms with integral
/// tail, certified to at least p^−20.
pub fn pairing_character(seed: u64, cases: usize) -> CheckOutcome {
    const TERMS: usize = 30;
    let mut s = Sampler::new(seed ^ 0x52);
    let mut t = Tally::new("pairing-character");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let coeffs: Vec<Padic> = (0..TERMS).map(|_| ctx.int(s.range(-100, 100))).collect();
        let big_f = TruncatedSeries { coeffs: coeffs.clone(), tail_bound: 0 };
        let z = disc_point(&mut s, &ctx);
        let v = z.valuation().unwrap();
        let order = ((CERTIFIED_PRECISION + v - 1) / v) as usize;
        let r = (|| {
            let kz = MahlerSeries::character(&ctx, &z, order)?;
            let got = amice_pairing(&big_f, &kz)?;
            let direct = PadicPoly::new(ctx.p, coeffs.clone()).eval(&z);
            Ok(got.precision() >= CERTIFIED_PRECISION && got.approx_eq(&direct))
        })();
        t.try_case(r, || format!("p={} z={z:?}", ctx.p));
    }
    t.done()
}

/// {F, κ_z·f} = {F(z + (1+z)T), f} for polynomial F and f.
pub fn pairing_twist(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x53);
    let mut t = Tally::new("pairing-twist");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let big_f = int_poly(&mut s, &ctx, 6);
        let f = rat_padic_poly(&mut s, &ctx, 4);
        let z = disc_point(&mut s, &ctx);
        let r = (|| {
            let m = mahler_expand(&ctx, &f);
            let lhs = amice_pairing(&TruncatedSeries::from_poly(&big_f), &m.twisted(&ctx, &z, big_f.coeffs().len())?)?;
            let shift = PadicPoly::new(ctx.p, vec![z.clone(), &ctx.one() + &z]);
            let rhs = amice_pairing(&TruncatedSeries::from_poly(&big_f.compose(&shift, None)), &m)?;
            Ok(lhs.precision() >= CERTIFIED_PRECISION && lhs.approx_eq(&rhs))
        })();
        t.try_case(r, || format!("p={} F={} f={} z={z:?}", ctx.p, coeffs(&big_f), coeffs(&f)));
    }
    t.done()
}

/// {F, f(a·)} = {F∘[a], f}.
pub fn pairing_dilation(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x54);
    let mut t = Tally::new("pairing-dilation");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let big_f = int_poly(&mut s, &ctx, 5);
        let f = rat_padic_poly(&mut s, &ctx, 5);
        let a = loop {
            let a = s.range(-3, 4);
            if a != 0 {
                break ctx.int(a);
            }
        };
        let r = (|| {
            let m = mahler_expand(&ctx, &f);
            let lhs = amice_pairing(&TruncatedSeries::from_poly(&big_f), &m.dilated(&ctx, &a)?)?;
            let composed = compose_monoid(&ctx, &big_f, &a, m.len().max(1))?;
            let rhs = amice_pairing(&composed, &m)?;
            Ok(lhs.precision() >= CERTIFIED_PRECISION && lhs.approx_eq(&rhs))
        })();
        t.try_case(r, || format!("p={} F={} f={} a={a:?}", ctx.p, coeffs(&big_f), coeffs(&f)));
    }
    t.done()
}

/// {T^m, P_k} = δ_{mk} for m, k ≤ 12.
pub fn pairing_orthogonality() -> CheckOutcome {
    let mut t = Tally::new("pairing-orthogonality").scope("m,k ≤ 12, p=2,3,5");
    for p in [2u32, 3, 5] {
        let ctx = Context::new(p, 64).unwrap();
        for k in 0..=12usize {
            let pk = mahler_expand(&ctx, &binomial_poly(k).to_padic(&ctx));
            for m in 0..=12usize {
                let mut c = vec![ctx.zero(); m + 1];
                c[m] = ctx.one();
                let tm = TruncatedSeries { coeffs: c, tail_bound: INF };
                let expect = if m == k { ctx.one() } else { ctx.zero() };
                t.try_case(amice_pairing(&tm, &pk).map(|v| v.approx_eq(&expect)), || format!("p={p} m={m} k={k}"));
            }
        }
    }
    t.done()
}

/// κ_z(x + y) = κ_z(x)·κ_z(y).
pub fn character_homomorphism(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x55);
    let mut t = Tally::new("character-homomorphism");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let z = disc_point(&mut s, &ctx);
        let (x, y) = (s.padic_with_val(&ctx, 0), s.padic_with_val(&ctx, 0));
        let r = (|| {
            let pt = CharacterPoint::new(ctx, z.clone())?;
            let lhs = eval_character(&pt, &(&x + &y))?;
            let rhs = &eval_character(&pt, &x)? * &eval_character(&pt, &y)?;
            Ok(lhs.precision() >= CERTIFIED_PRECISION && lhs.approx_eq(&rhs))
        })();
        t.try_case(r, || format!("p={} z={z:?} x={x:?} y={y:?}", ctx.p));
    }
    t.done()
}

/// κ_{[a](z)}(x) = κ_z(a·x).
pub fn monoid_compatibility(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x56);
    let mut t = Tally::new("monoid-compatibility");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let z = disc_point(&mut s, &ctx);
        let a = s.padic_with_val(&ctx, 0);
        let x = s.padic_with_val(&ctx, 0);
        let r = (|| {
            let pt = CharacterPoint::new(ctx, z.clone())?;
            let az = CharacterPoint::new(ctx, monoid_action(&a, &pt)?)?;
            let lhs = eval_character(&az, &x)?;
            let rhs = eval_character(&pt, &(&a * &x))?;
            Ok(lhs.precision() >= CERTIFIED_PRECISION && lhs.approx_eq(&rhs))
        })();
        t.try_case(r, || format!("p={} z={z:?} a={a:?} x={x:?}", ctx.p));
    }
    t.done()
}

/// Σ c_n·P_n = f for the Mahler coefficients of polynomials of degree ≤ 10,
/// and the series reproduces f at 0, ..., 15.
pub fn mahler_roundtrip(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x57);
    let mut t = Tally::new("mahler-roundtrip");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let f = rat_padic_poly(&mut s, &ctx, 10);
        let r = (|| {
            let m = mahler_expand(&ctx, &f);
            let back = m
                .coeffs
                .iter()
                .enumerate()
                .fold(PadicPoly::zero(ctx.p), |acc, (n, c)| acc.add(&binomial_poly(n).to_padic(&ctx).scale(c)));
            let mut ok = back.sub(&f).coeffs().iter().all(Padic::is_zero);
            for x in 0..=15u64 {
                ok &= m.eval_at(&ctx, x)?.approx_eq(&f.eval(&ctx.int(x as i64)));
            }
            Ok(ok)
        })();
        t.try_case(r, || format!("p={} f={}", ctx.p, coeffs(&f)));
    }
    t.done()
}

/// ‖P_l(yΩ)‖_{0,n} ≤ max_{i ≤ l} ‖P_i(y)‖_{0,n} for all l ≤ n ≤ 20, with
/// val Ω ∈ {0, 1/(p−1), 1}.
pub fn sup_bound_inequality() -> CheckOutcome {
    let mut t = Tally::new("eq75-inequality").scope("p=2,3,5; l,n ≤ 20");
    for p in [2u32, 3, 5] {
        for omega in [int(0), rat(1, p as i64 - 1), int(1)] {
            match estimate_report(p, 20, 20, &omega) {
                Ok(rep) => {
                    for _ in 1..rep.sup_bound_checked {
                        t.case(true, String::new);
                    }
                    let first = rep.sup_bound_failures.first().cloned();
                    t.case(first.is_none(), || {
                        let (l, n) = first.unwrap();
                        format!("p={p} ω={} l={l} n={n}", format_rational(&omega))
                    });
                }
                Err(e) => t.case(false, || format!("p={p}: {e}")),
            }
        }
    }
    t.done()
}

/// The largest norm of P_l(yΩ) over l ∈ [L, 2L) does not grow as L runs
/// through 16, 32, 64, 128, for val Ω = 1/(p−1) and n = 1, ..., 4.
pub fn decay_envelope_check() -> CheckOutcome {
    let mut t = Tally::new("decay-envelope").scope("ω=1/(p-1), n=1..4, L=16..128, p=2,3,5");
    for p in [2u32, 3, 5] {
        let omega = rat(1, p as i64 - 1);
        for n in 1..=4 {
            match decay_envelope(p, n, &omega, &DECAY_WINDOWS) {
                Ok(env) => t.case(env.non_increasing(), || {
                    let vals: Vec<String> =
                        env.windows.iter().map(|(l, v)| format!("L={l}: val {}", format_rational(v))).collect();
                    format!("p={p} n={n}: {}", vals.join(", "))
                }),
                Err(e) => t.case(false, || format!("p={p} n={n}: {e}")),
            }
        }
    }
    t.done()
}
