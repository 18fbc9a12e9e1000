use super::{CheckOutcome, Sampler, Tally};
use crate::padic::{binomial_poly, gauss_norm_rat, padic_exp, padic_log, Context, RatPoly};
use crate::rational::{format_rational, int, rat, Rational};

pub fn run(seed: u64) -> Vec<CheckOutcome> {
    vec![
        ultrametric(seed, 500),
        exp_log_roundtrip(seed, 500),
        binomial_generating_series(seed),
        binomial_cocycle(seed, 60),
        gauss_lemma(seed, 200),
    ]
}

fn show(p: &RatPoly) -> String {
    let cs: Vec<String> = p.coeffs().iter().map(format_rational).collect();
    format!("[{}]", cs.join(", "))
}

/// val(a+b) ≥ min(val a, val b), with equality when the valuations differ.
pub fn ultrametric(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x11);
    let mut t = Tally::new("ultrametric");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let (va, vb) = (s.range(-2, 4), s.range(-2, 4));
        let a = s.padic_with_val(&ctx, va);
        let b = s.padic_with_val(&ctx, vb);
        let sum = &a + &b;
        let (va, vb) = (a.valuation().unwrap(), b.valuation().unwrap());
        let ok = match sum.valuation() {
            None => va == vb,
            Some(v) => v >= va.min(vb) && (va == vb || v == va.min(vb)),
        };
        t.case(ok, || format!("p={} a={a:?} b={b:?}", ctx.p));
    }
    t.done()
}

/// exp(log x) = x and log(exp y) = y at the full precision of the input,
/// `per_prime` samples of each kind for p = 2, 3, 5.
pub fn exp_log_roundtrip(seed: u64, per_prime: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x12);
    let mut t = Tally::new("exp-log-roundtrip");
    for p in [2u32, 3, 5] {
        let ctx = Context::new(p, 64).unwrap();
        let min_val = if p == 2 { 2 } else { 1 };
        for _ in 0..per_prime {
            let y = s.padic_with_val(&ctx, min_val);
            let r = padic_exp(&y).and_then(|e| padic_log(&e));
            t.try_case(r.map(|back| back.approx_eq(&y) && back.precision() >= y.precision().min(ctx.precision)), || {
                format!("p={p} log(exp({y:?}))")
            });
            let x = &ctx.one() + &s.padic_with_val(&ctx, min_val);
            let r = padic_log(&x).and_then(|l| padic_exp(&l));
            t.try_case(r.map(|back| back.approx_eq(&x) && back.precision() >= x.precision().min(ctx.precision)), || {
                format!("p={p} exp(log({x:?}))")
            });
        }
    }
    t.done()
}

fn pow_truncated(base: &RatPoly, e: u32, order: usize) -> RatPoly {
    (0..e).fold(RatPoly::constant(int(1)), |acc, _| acc.mul(base).truncated(order))
}

/// Σ_{n<N} P_n(y)·g^n ≡ (1+g)^y mod T^N for integers y ∈ [0, 10] and random
/// polynomials g without constant term.
pub fn binomial_generating_series(seed: u64) -> CheckOutcome {
    const ORDER: usize = 12;
    let mut s = Sampler::new(seed ^ 0x13);
    let mut t = Tally::new("binomial-generating-series");
    let polys: Vec<RatPoly> = (0..ORDER).map(binomial_poly).collect();
    for _ in 0..5 {
        let mut g = s.rat_poly(3).coeffs().to_vec();
        if g.is_empty() {
            g.push(int(0));
        }
        g[0] = int(0);
        g.push(int(1));
        let g = RatPoly::new(g);
        let one_plus_g = g.add(&RatPoly::constant(int(1)));
        for y in 0..=10u32 {
            let yq = int(y as i64);
            let lhs = (0..ORDER).fold(RatPoly::zero(), |acc, n| {
                acc.add(&pow_truncated(&g, n as u32, ORDER).scale(&polys[n].eval(&yq)))
            });
            let rhs = pow_truncated(&one_plus_g, y, ORDER);
            t.case(lhs.truncated(ORDER) == rhs, || format!("y={y} g={}", show(&g)));
        }
    }
    t.done()
}

/// P_n(y + y′) = Σ_{i+j=n} P_i(y)·P_j(y′) for n ≤ 12.
pub fn binomial_cocycle(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x14);
    let mut t = Tally::new("binomial-cocycle");
    let polys: Vec<RatPoly> = (0..=12).map(binomial_poly).collect();
    for _ in 0..cases {
        let (y, y2) = (s.rational(30, 7), s.rational(30, 7));
        for n in 0..=12 {
            let lhs = polys[n].eval(&(&y + &y2));
            let rhs: Rational = (0..=n).map(|i| polys[i].eval(&y) * polys[n - i].eval(&y2)).sum();
            t.case(lhs == rhs, || format!("n={n} y={} y'={}", format_rational(&y), format_rational(&y2)));
        }
    }
    t.done()
}

/// The Gauss norm is multiplicative: val‖fg‖ = val‖f‖ + val‖g‖.
pub fn gauss_lemma(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x15);
    let mut t = Tally::new("gauss-lemma");
    let mut done = 0;
    while done < cases {
        let p = s.prime();
        let (f, g) = (s.rat_poly(4), s.rat_poly(4));
        if f.is_zero() || g.is_zero() {
            continue;
        }
        done += 1;
        let n = s.range(0, 4);
        let omega = s.pick(&[int(0), rat(1, p as i64 - 1), rat(1, 2)]);
        let center = int(0);
        let nv = |h: &RatPoly| gauss_norm_rat(h, p, &center, n, &omega).unwrap();
        t.case(nv(&f.mul(&g)) == nv(&f) + nv(&g), || {
            format!("p={p} n={n} ω={} f={} g={}", format_rational(&omega), show(&f), show(&g))
        });
    }
    t.done()
}
