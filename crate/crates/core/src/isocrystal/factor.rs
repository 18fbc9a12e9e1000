//! Splitting a polynomial along the segments of its Newton polygon, and
//! finding roots in Q_p.

use super::newton::{newton_segments, root_valuations};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::padic::{Context, Padic, PadicPoly, INF};
use crate::rational::{floor, Rational};

/// A factor whose roots all have valuation `slope`.
#[derive(Clone, Debug)]
pub struct SlopeFactor {
    pub slope: Rational,
    pub factor: PadicPoly,
}

/// f(p^c · y) / p^(c·deg f), exact up to the shift of valuations.
fn rescale(f: &PadicPoly, c: i64) -> PadicPoly {
    let n = f.degree().unwrap_or(0) as i64;
    PadicPoly::new(
        f.p(),
        f.coeffs().iter().enumerate().map(|(i, a)| a.scale_by_p_power(c * i as i64 - c * n)).collect(),
    )
}

fn lowest_precision(f: &PadicPoly) -> i64 {
    f.coeffs().iter().map(Padic::precision).min().unwrap_or(INF)
}

fn sylvester(g: &PadicPoly, h: &PadicPoly) -> Matrix {
    // columns: x^i·h for i < deg g, then x^j·g for j < deg h
    let k = g.degree().unwrap();
    let m = h.degree().unwrap();
    let n = k + m;
    let p = g.p();
    let mut cols = Vec::with_capacity(n);
    for i in 0..k {
        let mut v = vec![Padic::zero(p); n];
        for (d, c) in h.coeffs().iter().enumerate() {
            if i + d < n {
                v[i + d] = c.clone();
            }
        }
        cols.push(v);
    }
    for j in 0..m {
        let mut v = vec![Padic::zero(p); n];
        for (d, c) in g.coeffs().iter().enumerate() {
            if j + d < n {
                v[j + d] = c.clone();
            }
        }
        cols.push(v);
    }
    Matrix::from_columns(p, n, &cols)
}

/// Splits a monic f with integral roots at a Newton-polygon vertex k:
/// f = g·h with deg g = k carrying the roots of larger valuation.
fn split_at_vertex(_ctx: &Context, f: &PadicPoly, k: usize) -> Result<(PadicPoly, PadicPoly)> {
    let p = f.p();
    let n = f.degree().unwrap();
    let m = lowest_precision(f);
    let ak = f.coeff(k);
    let g0 = PadicPoly::new(p, (0..=k).map(|i| f.coeff(i).checked_div(&ak)).collect::<Result<_>>()?);
    let h0 = PadicPoly::new(p, (k..=n).map(|i| f.coeff(i)).collect());
    let res_val = sylvester(&g0, &h0)
        .det()
        .valuation()
        .ok_or_else(|| Error::PrecisionExhausted("factors are not coprime at working precision".into()))?;
    // lift the representatives of f to a higher precision, then account for
    // the unknown digits of f through the Hensel bound at the end
    let w = m.saturating_add(2 * res_val.max(0) + 8);
    let fw = PadicPoly::new(p, f.coeffs().iter().map(|c| c.with_precision(w)).collect());
    let mut g = PadicPoly::new(p, g0.coeffs().iter().map(|c| c.with_precision(w)).collect());
    let mut h = PadicPoly::new(p, h0.coeffs().iter().map(|c| c.with_precision(w)).collect());
    for _ in 0..200 {
        let e = fw.sub(&g.mul(&h));
        if e.is_zero() {
            break;
        }
        let rhs: Vec<Padic> = (0..n).map(|i| e.coeff(i)).collect();
        let sol = sylvester(&g, &h)
            .solve(&rhs)
            .ok_or_else(|| Error::PrecisionExhausted("Sylvester system became singular".into()))?;
        let dg = PadicPoly::new(p, sol[..k].to_vec());
        let dh = PadicPoly::new(p, sol[k..].to_vec());
        // g gets a correction of degree < k and h of degree < n - k, so both stay monic
        g = g.add(&dg);
        h = h.add(&dh);
    }
    // honest residual against the original coefficients
    let resid = f.sub(&g.mul(&h));
    let agree = (0..=n).map(|i| resid.coeff(i).valuation_lower_bound()).min().unwrap_or(INF).min(m);
    let res_val = sylvester(&g, &h).det().valuation().unwrap_or(INF);
    if agree <= 2 * res_val || agree - res_val < m / 2 {
        return Err(Error::PrecisionExhausted(format!(
            "lifting agrees only to p^{agree} with resultant valuation {res_val}"
        )));
    }
    let prec = agree - res_val;
    let cut = |q: &PadicPoly| {
        let d = q.degree().unwrap();
        // keep the leading 1 exact-looking: truncation keeps it a unit
        PadicPoly::new(p, q.coeffs().iter().enumerate().map(|(i, c)| if i == d { c.clone() } else { c.truncate(prec) }).collect())
    };
    Ok((cut(&g), cut(&h)))
}

/// Factors f along the segments of its Newton polygon, largest root
/// valuation first. Segments of equal slope are never split.
pub fn slope_factorization(ctx: &Context, f: &PadicPoly) -> Result<Vec<SlopeFactor>> {
    let lead = f.leading().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if lead.is_zero() {
        return Err(Error::PrecisionExhausted("leading coefficient vanishes".into()));
    }
    let f = f.monic()?;
    let vals = root_valuations(&f)?;
    let n = f.degree().unwrap();
    if n == 0 {
        return Ok(Vec::new());
    }
    let c = floor(&vals.iter().map(|(v, _)| v.clone()).min().unwrap());
    let mut rest = rescale(&f, c);
    let mut out = Vec::new();
    while rest.degree().unwrap() > 0 {
        let segs = newton_segments(&rest)?;
        let first = &segs[0];
        let slope = -first.slope.clone() + Rational::from_integer(c.into());
        if segs.len() == 1 {
            out.push(SlopeFactor { slope, factor: rescale(&rest, -c) });
            break;
        }
        let (g, h) = split_at_vertex(ctx, &rest, first.end)?;
        out.push(SlopeFactor { slope, factor: rescale(&g, -c) });
        rest = h;
    }
    Ok(out)
}

/// Roots of g in Z_p, assuming g has coefficients in Z_p not all divisible
/// by p after normalisation. `None` when some root cannot be separated at
/// the available precision (repeated roots included).
fn zp_roots(ctx: &Context, g: &PadicPoly, depth: usize) -> Option<Vec<Padic>> {
    if depth > 2 * ctx.precision as usize {
        return None;
    }
    let v = g.coeffs().iter().filter_map(Padic::valuation).min()?;
    let g = PadicPoly::new(g.p(), g.coeffs().iter().map(|c| c.scale_by_p_power(-v)).collect());
    if g.degree()? == 0 {
        return Some(Vec::new());
    }
    let dg = g.derivative(ctx);
    let mut roots = Vec::new();
    for a in 0..ctx.p as i64 {
        let x = ctx.int(a);
        if g.eval(&x).valuation_lower_bound() < 1 {
            continue;
        }
        if dg.eval(&x).valuation() == Some(0) {
            roots.push(newton_lift(&g, &dg, x)?);
        } else {
            let shift = PadicPoly::new(g.p(), vec![x.clone(), ctx.p_power(1)]);
            let h = g.compose(&shift, None);
            for w in zp_roots(ctx, &h, depth + 1)? {
                roots.push(&x + &(&ctx.p_power(1) * &w));
            }
        }
    }
    Some(roots)
}

fn newton_lift(g: &PadicPoly, dg: &PadicPoly, mut x: Padic) -> Option<Padic> {
    for _ in 0..128 {
        let gx = g.eval(&x);
        if gx.is_zero() {
            return Some(x);
        }
        let step = gx.checked_div(&dg.eval(&x)).ok()?;
        x = &x - &step;
    }
    None
}

/// Distinct roots of an isoclinic factor of integral slope λ, or `None`
/// if the factor does not split into distinct linear factors over Q_p at
/// working precision.
pub fn distinct_roots(ctx: &Context, factor: &SlopeFactor) -> Option<Vec<Padic>> {
    if !factor.slope.is_integer() {
        return None;
    }
    let lam = factor.slope.to_integer();
    let lam: i64 = lam.try_into().ok()?;
    let d = factor.factor.degree()?;
    // y = x / p^λ has unit roots
    let scaled = rescale(&factor.factor, lam);
    let roots = zp_roots(ctx, &scaled, 0)?;
    if roots.len() != d {
        return None;
    }
    for i in 0..d {
        for j in 0..i {
            if roots[i].approx_eq(&roots[j]) {
                return None;
            }
        }
    }
    Some(roots.into_iter().map(|r| r.scale_by_p_power(lam)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ctx() -> Context {
        Context::new(5, 40).unwrap()
    }

    #[test]
    fn single_segment_is_not_split() {
        let c = ctx();
        let f = PadicPoly::from_ints(&c, &[-5, 0, 1]);
        let fs = slope_factorization(&c, &f).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].slope, rat(1, 2));
        let g = PadicPoly::from_ints(&c, &[-1, 0, 1]);
        let gs = slope_factorization(&c, &g).unwrap();
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].slope, rat(0, 1));
    }

    #[test]
    fn two_linear_factors() {
        let c = ctx();
        // t^2 - (1 + p) t + p = (t - 1)(t - p)
        let f = PadicPoly::from_ints(&c, &[5, -6, 1]);
        let fs = slope_factorization(&c, &f).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].slope, rat(1, 1));
        assert!(fs[0].factor.approx_eq(&PadicPoly::from_ints(&c, &[-5, 1])));
        assert!(fs[1].factor.approx_eq(&PadicPoly::from_ints(&c, &[-1, 1])));
        assert!(fs[0].factor.precision() >= 20);
    }

    #[test]
    fn product_recovers_input() {
        let c = ctx();
        // (t^2 - 5)(t - 7)(t - 125 * 3)
        let f = PadicPoly::from_ints(&c, &[-5, 0, 1])
            .mul(&PadicPoly::from_ints(&c, &[-7, 1]))
            .mul(&PadicPoly::from_ints(&c, &[-375, 1]));
        let fs = slope_factorization(&c, &f).unwrap();
        let slopes: Vec<Rational> = fs.iter().map(|s| s.slope.clone()).collect();
        assert_eq!(slopes, vec![rat(3, 1), rat(1, 2), rat(0, 1)]);
        let prod = fs.iter().fold(PadicPoly::from_ints(&c, &[1]), |acc, s| acc.mul(&s.factor));
        assert!(prod.approx_eq(&f));
    }

    #[test]
    fn negative_slopes() {
        let c = ctx();
        // (t - 1/5)(t - 1)
        let f = PadicPoly::from_rationals(&c, &[rat(1, 5), rat(-6, 5), rat(1, 1)]);
        let fs = slope_factorization(&c, &f).unwrap();
        assert_eq!(fs[0].slope, rat(0, 1));
        assert_eq!(fs[1].slope, rat(-1, 1));
        assert!(fs[1].factor.approx_eq(&PadicPoly::from_rationals(&c, &[rat(-1, 5), rat(1, 1)])));
    }

    #[test]
    fn roots_of_split_factor() {
        let c = ctx();
        // (t - 5)(t - 10): both of valuation 1
        let f = PadicPoly::from_ints(&c, &[50, -15, 1]);
        let fs = slope_factorization(&c, &f).unwrap();
        assert_eq!(fs.len(), 1);
        let mut roots: Vec<Rational> =
            distinct_roots(&c, &fs[0]).unwrap().iter().map(|r| r.reconstruct().unwrap()).collect();
        roots.sort();
        assert_eq!(roots, vec![rat(5, 1), rat(10, 1)]);
        // repeated root: no separation
        let sq = PadicPoly::from_ints(&c, &[25, -10, 1]);
        let fsq = slope_factorization(&c, &sq).unwrap();
        assert!(distinct_roots(&c, &fsq[0]).is_none());
        // irreducible over Q_5: t^2 - 2·25
        let irr = PadicPoly::from_ints(&c, &[-50, 0, 1]);
        let fi = slope_factorization(&c, &irr).unwrap();
        assert!(distinct_roots(&c, &fi[0]).is_none());
    }
}
