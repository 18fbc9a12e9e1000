use super::filtration::describe;
use super::{CheckOutcome, Sampler, Tally};
use crate::filtration::{ps_limit, Direction, OneParamSubgroup};
use crate::linalg::Matrix;
use crate::orbit::{
    conjugation_limit, jacobson_morozov, monodromy_weight_filtration, nilpotent_exp, orbit_eval, orbit_limit,
    weight_axioms_hold, ConjugationLimit, NilpotentOperator, OrbitDirection,
};
use crate::padic::{Context, Padic};

pub fn run(seed: u64) -> Vec<CheckOutcome> {
    vec![
        exp_unipotent(seed, 100),
        limit_invariance(seed, 100),
        one_param_bridge(seed, 100),
        sl2_brackets(seed),
        weight_filtration_axioms(seed),
        conjugation_commutes(seed, 100),
    ]
}

fn show(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let r: Vec<String> = m.row(i).iter().map(|x| x.reconstruct().map_or(format!("{x:?}"), |q| q.to_string())).collect();
            format!("[{}]", r.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

fn sample_t(s: &mut Sampler, ctx: &Context) -> Padic {
    let (q, _) = s.rational_with_val(ctx.p, -2, 2);
    ctx.rational(&q)
}

/// Partitions of n with at least one part ≥ 2, parts non-increasing.
pub fn jordan_types(max_dim: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for m in (1..=rest.min(cap)).rev() {
            cur.push(m);
            go(rest - m, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for n in 2..=max_dim {
        go(n, n, &mut Vec::new(), &mut out);
    }
    out.retain(|p| p[0] >= 2);
    out
}

/// det exp(tN) = 1 and exp(−tN)·exp(tN)·F_0 = F_0.
pub fn exp_unipotent(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x41);
    let mut t = Tally::new("exp-unipotent");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let n = s.range(1, 4) as usize;
        let m = s.nilpotent(&ctx, n);
        let f0 = s.filtration(&ctx, n);
        let tt = sample_t(&mut s, &ctx);
        let r = (|| {
            let op = NilpotentOperator::new(ctx, m.clone())?;
            let det_ok = nilpotent_exp(&ctx, &m.scale(&tt))?.det().approx_eq(&ctx.one());
            let there = orbit_eval(&[op.clone()], &[tt.clone()], &f0)?;
            let back = orbit_eval(&[op], &[-&tt], &there)?;
            Ok(det_ok && back.same_as(&f0))
        })();
        t.try_case(r, || format!("p={} N={} t={tt:?} F0={}", ctx.p, show(&m), describe(&f0)));
    }
    t.done()
}

/// F_∞ = lim_{|t|→∞} exp(tN)·F_0 satisfies exp(tN)·F_∞ = F_∞ for sampled
/// t, and in both directions taking the limit again changes nothing.
pub fn limit_invariance(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x42);
    let mut t = Tally::new("orbit-limit-invariance");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let n = s.range(1, 4) as usize;
        let m = s.nilpotent(&ctx, n);
        let f0 = s.filtration(&ctx, n);
        let ts: Vec<Padic> = (0..3).map(|_| sample_t(&mut s, &ctx)).collect();
        let r = (|| {
            let op = NilpotentOperator::new(ctx, m.clone())?;
            let mut ok = true;
            for dir in [OrbitDirection::ValToMinusInfinity, OrbitDirection::ValToPlusInfinity] {
                let lim = orbit_limit(&op, &f0, dir)?;
                if dir == OrbitDirection::ValToMinusInfinity {
                    for tt in &ts {
                        ok &= orbit_eval(&[op.clone()], &[tt.clone()], &lim)?.same_as(&lim);
                    }
                }
                ok &= orbit_limit(&op, &lim, dir)?.same_as(&lim);
            }
            Ok(ok)
        })();
        t.try_case(r, || format!("p={} N={} F0={}", ctx.p, show(&m), describe(&f0)));
    }
    t.done()
}

/// Rows `rows` of the coordinates of a step basis in the chain basis span a
/// full-rank minor.
fn minor_nonzero(coords: &Matrix, rows: std::ops::Range<usize>) -> bool {
    coords.transpose().select_columns(&rows.collect::<Vec<_>>()).transpose().det().valuation().is_some()
}

/// For a single Jordan block and F_0 in general position with respect to
/// its chain basis, lim_{|t|→∞} exp(tN)·F_0 equals the limit of F_0 under
/// the one-parameter subgroup t^H as t → 0.
pub fn one_param_bridge(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x43);
    let mut t = Tally::new("orbit-ps-limit-bridge");
    let mut done = 0;
    let mut attempts = 0;
    while done < cases && attempts < 20 * cases {
        attempts += 1;
        let ctx = Context::new(s.prime(), 64).unwrap();
        let m_size = s.range(2, 4) as usize;
        let m = s.jordan_type(&ctx, &[m_size]);
        let f0 = s.filtration(&ctx, m_size);
        let op = NilpotentOperator::new(ctx, m.clone()).expect("nilpotent");
        let sl2 = jacobson_morozov(&op).expect("nonzero");
        let inv = sl2.chain_basis.inverse().expect("basis");
        let generic = f0.steps().iter().filter(|(_, st)| st.dim() < m_size).all(|(_, st)| {
            let c = inv.mul(st.basis());
            minor_nonzero(&c, 0..st.dim()) && minor_nonzero(&c, m_size - st.dim()..m_size)
        });
        if !generic {
            continue;
        }
        done += 1;
        let r = (|| {
            let lambda = OneParamSubgroup::new(sl2.weights.clone(), sl2.chain_basis.clone())?;
            let a = orbit_limit(&op, &f0, OrbitDirection::ValToMinusInfinity)?;
            let b = ps_limit(&lambda, &f0, Direction::ToZero)?;
            Ok(a.same_as(&b))
        })();
        t.try_case(r, || format!("p={} N={} F0={}", ctx.p, show(&m), describe(&f0)));
    }
    t.done()
}

/// sl2-triples of all nilpotent Jordan types up to dimension 5: brackets
/// hold, H is diagonal with integer weights on the chain basis, tr H = 0.
pub fn sl2_brackets(seed: u64) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x44);
    let mut t = Tally::new("sl2-brackets").scope("all Jordan types up to dim 5");
    for p in [2u32, 3, 5] {
        let ctx = Context::new(p, 64).unwrap();
        for blocks in jordan_types(5) {
            let m = s.jordan_type(&ctx, &blocks);
            let r = (|| {
                let sl2 = jacobson_morozov(&NilpotentOperator::new(ctx, m.clone())?)?;
                let wdiag = Matrix::diagonal(p, &sl2.weights.iter().map(|&w| ctx.int(w)).collect::<Vec<_>>());
                let h_ok = sl2.h.mul(&sl2.chain_basis).approx_eq(&sl2.chain_basis.mul(&wdiag));
                let trace = (0..sl2.h.rows()).fold(ctx.zero(), |acc, i| &acc + sl2.h.get(i, i));
                Ok(sl2.brackets_hold() && h_ok && trace.is_zero() && sl2.blocks == blocks)
            })();
            t.try_case(r, || format!("p={p} type={blocks:?} N={}", show(&m)));
        }
    }
    t.done()
}

/// Weight filtration axioms on all Jordan types up to dimension 5; graded
/// dimensions match the block structure, and a single block of size m has
/// jumps −(m−1), −(m−3), ..., m−1.
pub fn weight_filtration_axioms(seed: u64) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x45);
    let mut t = Tally::new("weight-filtration-axioms").scope("all Jordan types up to dim 5");
    for p in [2u32, 3, 5] {
        let ctx = Context::new(p, 64).unwrap();
        for blocks in jordan_types(5) {
            let m = s.jordan_type(&ctx, &blocks);
            let r = (|| {
                let op = NilpotentOperator::new(ctx, m.clone())?;
                let w = monodromy_weight_filtration(&op)?;
                let mut ok = weight_axioms_hold(&op, &w);
                for i in -5..=5i64 {
                    let expect = blocks
                        .iter()
                        .map(|&b| (0..b as i64).filter(|j| b as i64 - 1 - 2 * j == i).count())
                        .sum::<usize>();
                    ok &= w.gr_dim(i) == expect;
                }
                if blocks.len() == 1 {
                    let b = blocks[0] as i64;
                    let mut jumps = w.jumps();
                    jumps.sort_unstable();
                    ok &= jumps == (0..b).map(|j| 2 * j - (b - 1)).collect::<Vec<_>>();
                }
                Ok(ok)
            })();
            t.try_case(r, || format!("p={p} type={blocks:?} N={}", show(&m)));
        }
    }
    t.done()
}

/// When lim exp(tN)·g·exp(−tN) exists it commutes with N.
pub fn conjugation_commutes(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x46);
    let mut t = Tally::new("conjugation-limit-commutes");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let n = s.range(2, 4) as usize;
        let m = s.nilpotent(&ctx, n);
        // commuting g are the interesting ones; mix in polynomials in N
        let g = if s.range(0, 1) == 0 {
            s.invertible(&ctx, n)
        } else {
            Matrix::identity(&ctx, n).add(&m.scale(&ctx.int(s.range(-3, 3)))).add(&m.mul(&m))
        };
        let r = (|| {
            let op = NilpotentOperator::new(ctx, m.clone())?;
            Ok(match conjugation_limit(&op, &g)? {
                ConjugationLimit::Converges(c) => c.bracket(&m).is_zero(),
                ConjugationLimit::Diverges { .. } => true,
            })
        })();
        t.try_case(r, || format!("p={} N={} g={}", ctx.p, show(&m), show(&g)));
    }
    t.done()
}
