use super::oracle::eigenvalue_newton;
use super::{CheckOutcome, Sampler, Tally};
use crate::filtration::enumerate_subisocrystals;
use crate::isocrystal::{
    is_admissible_newton, newton_leq, newton_polygon, simple_isocrystal, slope_decomposition, slope_factorization,
    Isocrystal, NewtonVector,
};
use crate::linalg::Matrix;
use crate::padic::{Context, PadicPoly};
use crate::rational::{gcd_i64, int, rat, Rational};

pub fn run(seed: u64) -> Vec<CheckOutcome> {
    vec![
        newton_oracle(seed, 500),
        simple_objects(),
        direct_sum_merge(seed, 200),
        slope_sum_is_det_valuation(seed, 300),
        decomposition_parts(seed, 150),
        dominance_order(),
        factorization_conservation(seed, 200),
    ]
}

fn dump_matrix(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let r: Vec<String> = m.row(i).iter().map(|x| x.reconstruct().map_or(format!("{x:?}"), |q| q.to_string())).collect();
            format!("[{}]", r.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Newton polygons of random diagonalizable Φ (dims 2–4, p ∈ {2, 3, 5})
/// against the valuations of the eigenvalues used to build them.
pub fn newton_oracle(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x21);
    let mut t = Tally::new("newton-vs-eigenvalue-oracle");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let n = s.range(2, 4) as usize;
        let d = s.diagonalizable(&ctx, n, -2, 3, false);
        let expect = eigenvalue_newton(&d.eigenvalues, ctx.p);
        t.try_case(newton_polygon(&d.e).map(|nv| nv == expect), || {
            format!("p={} Φ={} expected {expect}", ctx.p, dump_matrix(d.e.frobenius()))
        });
    }
    t.done()
}

/// For coprime (r, s) with 1 ≤ s ≤ 5, |r| ≤ 5: Newton vector (r/s)^s,
/// admissible, and the only subobjects are 0 and V.
pub fn simple_objects() -> CheckOutcome {
    let mut t = Tally::new("simple-isocrystals").scope("1 ≤ s ≤ 5, |r| ≤ 5, p=2,3,5");
    for p in [2u32, 3, 5] {
        let ctx = Context::new(p, 64).unwrap();
        for s in 1..=5i64 {
            for r in -5..=5i64 {
                if gcd_i64(r, s) != 1 {
                    continue;
                }
                let r_ = (|| {
                    let e = simple_isocrystal(&ctx, r, s)?;
                    let nv = newton_polygon(&e)?;
                    let subs = enumerate_subisocrystals(&e, &[])?;
                    Ok(nv == NewtonVector::from_parts(&[(rat(r, s), s as usize)])?
                        && is_admissible_newton(&nv)
                        && subs.complete
                        && subs.subspaces.len() == 2
                        && subs.subspaces[0].is_zero()
                        && subs.subspaces[1].dim() == s as usize)
                })();
                t.try_case(r_, || format!("p={p} r={r} s={s}"));
            }
        }
    }
    t.done()
}

pub fn direct_sum_merge(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x22);
    let mut t = Tally::new("newton-direct-sum");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let (n1, n2) = (s.range(1, 2) as usize, s.range(1, 2) as usize);
        let a = s.diagonalizable(&ctx, n1, -1, 3, false).e;
        let b = Isocrystal::new(ctx, s.invertible(&ctx, n2)).unwrap();
        let r = (|| {
            let (na, nb) = (newton_polygon(&a)?, newton_polygon(&b)?);
            let merged = NewtonVector::from_slopes(&[na.slopes(), nb.slopes()].concat());
            Ok(newton_polygon(&a.direct_sum(&b)?)? == merged)
        })();
        t.try_case(r, || format!("p={} A={} B={}", ctx.p, dump_matrix(a.frobenius()), dump_matrix(b.frobenius())));
    }
    t.done()
}

pub fn slope_sum_is_det_valuation(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x23);
    let mut t = Tally::new("slope-sum-equals-det-valuation");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let n = s.range(1, 4) as usize;
        let e = Isocrystal::new(ctx, s.invertible(&ctx, n)).unwrap();
        let r = newton_polygon(&e).map(|nv| Some(nv.total()) == e.frobenius().det().valuation().map(int));
        t.try_case(r, || format!("p={} Φ={}", ctx.p, dump_matrix(e.frobenius())));
    }
    t.done()
}

/// Φ restricted to a part, in the coordinates of the part's basis.
fn restrict(e: &Isocrystal, basis: &Matrix) -> Option<Matrix> {
    let image = e.frobenius().mul(basis);
    let sub = crate::linalg::Subspace::new(basis.clone()).ok()?;
    let cols: Vec<Vec<_>> = image.columns().iter().map(|v| sub.coordinates(v)).collect::<Option<_>>()?;
    Some(Matrix::from_columns(e.p(), basis.cols(), &cols))
}

/// Slope parts are Φ-stable and isoclinic of their own slope.
pub fn decomposition_parts(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x24);
    let mut t = Tally::new("slope-parts-stable-isoclinic");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let n = s.range(2, 4) as usize;
        let e = Isocrystal::new(ctx, s.invertible(&ctx, n)).unwrap();
        let r = (|| {
            let mut ok = true;
            for part in slope_decomposition(&e)? {
                ok &= part.space.is_stable_under(e.frobenius());
                let Some(m) = restrict(&e, part.space.basis()) else { return Ok(false) };
                let nv = newton_polygon(&Isocrystal::new(ctx, m)?)?;
                ok &= nv.parts() == [(part.slope.clone(), part.space.dim())];
            }
            Ok(ok)
        })();
        t.try_case(r, || format!("p={} Φ={}", ctx.p, dump_matrix(e.frobenius())));
    }
    t.done()
}

/// Reflexivity, antisymmetry and transitivity of dominance, exhaustively on
/// all Newton vectors of dimension 3 and total 3 with slopes in ½Z ∩ [0, 3].
pub fn dominance_order() -> CheckOutcome {
    let halves: Vec<Rational> = (0..=6).map(|k| rat(k, 2)).collect();
    let mut pool: Vec<NewtonVector> = Vec::new();
    for a in &halves {
        for b in &halves {
            for c in &halves {
                if a + b + c == int(3) && a >= b && b >= c {
                    let v = NewtonVector::from_slopes(&[a.clone(), b.clone(), c.clone()]);
                    if !pool.contains(&v) {
                        pool.push(v);
                    }
                }
            }
        }
    }
    let mut t = Tally::new("newton-dominance-partial-order").scope(format!("{} vectors, all triples", pool.len()));
    let leq = |a: &NewtonVector, b: &NewtonVector| newton_leq(a, b).unwrap();
    for a in &pool {
        t.case(leq(a, a), || format!("not reflexive at {a}"));
        for b in &pool {
            t.case(!(leq(a, b) && leq(b, a)) || a == b, || format!("not antisymmetric at {a}, {b}"));
            for c in &pool {
                t.case(!(leq(a, b) && leq(b, c)) || leq(a, c), || format!("not transitive at {a}, {b}, {c}"));
            }
        }
    }
    t.done()
}

/// Slope factors of random monic polynomials: degrees add up to deg f,
/// constant-term valuations add up to val f(0), each factor has
/// val g(0) = slope·deg g, and the product recovers f.
pub fn factorization_conservation(seed: u64, cases: usize) -> CheckOutcome {
    let mut s = Sampler::new(seed ^ 0x25);
    let mut t = Tally::new("slope-factorization-conservation");
    for _ in 0..cases {
        let ctx = Context::new(s.prime(), 64).unwrap();
        let d = s.range(1, 5) as usize;
        let mut cs: Vec<_> = (0..d).map(|_| ctx.rational(&s.rational_with_val(ctx.p, -1, 4).0)).collect();
        cs.push(ctx.one());
        let f = PadicPoly::new(ctx.p, cs);
        let r = (|| {
            let factors = slope_factorization(&ctx, &f)?;
            let deg_ok = factors.iter().map(|g| g.factor.degree().unwrap()).sum::<usize>() == d;
            let v0 = |g: &PadicPoly| int(g.coeff(0).valuation().unwrap());
            let val_ok = factors.iter().map(|g| v0(&g.factor)).sum::<Rational>() == v0(&f);
            let each_ok = factors.iter().all(|g| v0(&g.factor) == &g.slope * int(g.factor.degree().unwrap() as i64));
            let prod = factors.iter().fold(PadicPoly::from_ints(&ctx, &[1]), |acc, g| acc.mul(&g.factor));
            Ok(deg_ok && val_ok && each_ok && prod.approx_eq(&f))
        })();
        t.try_case(r, || format!("p={} f={:?}", ctx.p, f.coeffs().iter().map(|c| c.reconstruct()).collect::<Vec<_>>()));
    }
    t.done()
}
