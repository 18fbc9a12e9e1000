use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::{binomial_coefficient, binomial_poly, monoid_series, Context, Padic, PadicPoly, TruncatedSeries, INF};
use crate::rational::{ceil, int, Rational};

/// For n beyond the stored coefficients, val(c_n) ≥ constant + n·decay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailCertificate {
    pub constant: Rational,
    pub decay: Rational,
}

/// f = Σ c_n P_n(·Ω) with val(Ω) = ω. Without a tail certificate the stored
/// coefficients are all of them.
#[derive(Clone, Debug)]
pub struct MahlerSeries {
    pub coeffs: Vec<Padic>,
    pub omega: Rational,
    pub tail: Option<TailCertificate>,
}

impl MahlerSeries {
    pub fn finite(coeffs: Vec<Padic>) -> Self {
        Self { coeffs, omega: Rational::zero(), tail: None }
    }

    /// κ_w, whose Mahler coefficients are w^n; val(w^n) = n·val(w).
    pub fn character(ctx: &Context, w: &Padic, order: usize) -> Result<Self> {
        let v = if w.is_exact_zero() { ctx.precision } else { w.valuation_lower_bound() };
        if v < 1 {
            return Err(Error::OutOfDisc(format!("val(w) = {v} < 1")));
        }
        let mut coeffs = Vec::with_capacity(order);
        let mut power = ctx.one();
        for _ in 0..order {
            coeffs.push(power.clone());
            power = &power * w;
        }
        Ok(Self { coeffs, omega: Rational::zero(), tail: Some(TailCertificate { constant: int(0), decay: int(v) }) })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Whether |c_n| → 0 is certified.
    pub fn converges(&self) -> bool {
        self.tail.as_ref().map_or(true, |t| t.decay > Rational::zero())
    }

    /// f(x) = Σ_{n ≤ x} c_n binom(x, n) at a nonnegative integer x.
    pub fn eval_at(&self, ctx: &Context, x: u64) -> Result<Padic> {
        let xs = ctx.int(x as i64);
        let mut sum = ctx.zero();
        for (n, c) in self.coeffs.iter().enumerate().take(x as usize + 1) {
            sum = &sum + &(c * &binomial_coefficient(ctx, &xs, n as u64)?);
        }
        if let Some(t) = &self.tail {
            if x as usize >= self.coeffs.len() {
                let bound = &t.constant + &t.decay * int(self.coeffs.len() as i64);
                sum = sum.truncate(ceil(&bound));
            }
        }
        Ok(sum)
    }

    /// Mahler series of κ_z·f: the coefficient of P_n is
    /// Σ_j c_j (1+z)^j binom(n, j) z^{n−j}. `order` coefficients are kept and
    /// the rest certified by val ≥ min_j (val c_j − j·val z) + n·val z.
    pub fn twisted(&self, ctx: &Context, z: &Padic, order: usize) -> Result<Self> {
        if self.tail.is_some() {
            return Err(Error::InvalidInput("twisting needs a finite Mahler series".into()));
        }
        let v = if z.is_exact_zero() { ctx.precision } else { z.valuation_lower_bound() };
        if v < 1 {
            return Err(Error::OutOfDisc(format!("val(z) = {v} < 1")));
        }
        let one_z = &ctx.one() + z;
        let mut coeffs = Vec::with_capacity(order);
        for n in 0..order {
            let mut acc = ctx.zero();
            let mut twist = ctx.one();
            for (j, c) in self.coeffs.iter().enumerate().take(n + 1) {
                if !c.is_exact_zero() {
                    let b = binomial_coefficient(ctx, &ctx.int(n as i64), j as u64)?;
                    acc = &acc + &(&(c * &twist) * &(&b * &z.pow((n - j) as u64)));
                }
                twist = &twist * &one_z;
            }
            coeffs.push(acc);
        }
        let constant = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| int(c.valuation().unwrap() - j as i64 * v))
            .min();
        let tail = constant.map(|constant| TailCertificate { constant, decay: int(v) });
        Ok(Self { coeffs, omega: self.omega.clone(), tail })
    }

    /// Mahler series of x ↦ f(a·x) for a finite series.
    pub fn dilated(&self, ctx: &Context, a: &Padic) -> Result<Self> {
        if self.tail.is_some() {
            return Err(Error::InvalidInput("dilation needs a finite Mahler series".into()));
        }
        let ay = PadicPoly::new(ctx.p, vec![ctx.zero(), a.clone()]);
        let mut g = PadicPoly::zero(ctx.p);
        for (j, c) in self.coeffs.iter().enumerate() {
            g = g.add(&binomial_poly(j).to_padic(ctx).compose(&ay, None).scale(c));
        }
        let mut out = mahler_expand(ctx, &g);
        out.coeffs.resize(self.coeffs.len(), ctx.zero());
        Ok(out)
    }
}

/// Mahler coefficients of a polynomial: c_n = Δ^n f(0) = Σ_k (−1)^{n−k} binom(n,k) f(k).
pub fn mahler_expand(ctx: &Context, f: &PadicPoly) -> MahlerSeries {
    let Some(d) = f.degree() else { return MahlerSeries::finite(Vec::new()) };
    let mut diffs: Vec<Padic> = (0..=d as i64).map(|k| f.eval(&ctx.int(k))).collect();
    let mut coeffs = Vec::with_capacity(d + 1);
    for _ in 0..=d {
        coeffs.push(diffs[0].clone());
        diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    MahlerSeries::finite(coeffs)
}

/// {F, f} = Σ a_n c_n for F = Σ a_n T^n. The result carries the precision
/// guaranteed by the tail bounds of both sides.
pub fn amice_pairing(big_f: &TruncatedSeries, f: &MahlerSeries) -> Result<Padic> {
    let p = big_f
        .coeffs
        .first()
        .or_else(|| f.coeffs.first())
        .map(Padic::p)
        .ok_or_else(|| Error::InvalidInput("pairing of two empty series".into()))?;
    let (la, lc) = (big_f.coeffs.len(), f.coeffs.len());
    let mut sum = Padic::zero(p);
    for n in 0..la.min(lc) {
        sum = &sum + &(&big_f.coeffs[n] * &f.coeffs[n]);
    }
    let f_tail_open = big_f.tail_bound != INF;
    let mut err: Option<Rational> = None;
    let mut lower = |b: Rational| err = Some(err.take().map_or(b.clone(), |e: Rational| e.min(b)));
    if f_tail_open {
        for c in f.coeffs.iter().skip(la) {
            if !c.is_exact_zero() {
                lower(int(big_f.tail_bound) + int(c.valuation_lower_bound()));
            }
        }
    }
    if let Some(t) = &f.tail {
        for (n, a) in big_f.coeffs.iter().enumerate().skip(lc) {
            if !a.is_exact_zero() {
                lower(int(a.valuation_lower_bound()) + &t.constant + &t.decay * int(n as i64));
            }
        }
        if f_tail_open {
            if t.decay <= Rational::zero() {
                return Err(Error::Divergent("Mahler coefficients are not certified to tend to 0".into()));
            }
            lower(int(big_f.tail_bound) + &t.constant + &t.decay * int(la.max(lc) as i64));
        }
    }
    Ok(match err {
        Some(e) => sum.truncate(ceil(&e)),
        None => sum,
    })
}

/// F∘[a] = F((1+T)^a − 1) for a polynomial F, as a series with `order`
/// exact coefficients; later ones are integral combinations of those of F.
pub fn compose_monoid(ctx: &Context, big_f: &PadicPoly, a: &Padic, order: usize) -> Result<TruncatedSeries> {
    let s = monoid_series(ctx, a, order)?;
    let g = PadicPoly::new(ctx.p, s.coeffs);
    let composed = big_f.compose(&g, Some(order));
    let mut coeffs = composed.coeffs().to_vec();
    coeffs.resize(order, ctx.zero());
    let tail_bound = if big_f.degree().map_or(true, |d| d == 0) {
        INF
    } else {
        big_f.coeffs().iter().map(Padic::valuation_lower_bound).min().unwrap_or(INF)
    };
    Ok(TruncatedSeries { coeffs, tail_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{eval_character, monoid_action, CharacterPoint};
    use crate::padic::TruncatedSeries;

    fn ctx() -> Context {
        Context::new(3, 40).unwrap()
    }

    fn ints(c: &Context, xs: &[i64]) -> Vec<Padic> {
        xs.iter().map(|&x| c.int(x)).collect()
    }

    #[test]
    fn expansions() {
        let c = ctx();
        let x = PadicPoly::from_ints(&c, &[0, 1]);
        assert!(mahler_expand(&c, &x).coeffs.iter().zip(ints(&c, &[0, 1])).all(|(a, b)| a.approx_eq(&b)));
        let x2 = PadicPoly::from_ints(&c, &[0, 0, 1]);
        let m = mahler_expand(&c, &x2);
        assert!(m.coeffs.iter().zip(ints(&c, &[0, 1, 2])).all(|(a, b)| a.approx_eq(&b)));
        for k in 0..8 {
            assert!(m.eval_at(&c, k).unwrap().approx_eq(&c.int((k * k) as i64)));
        }
        // truncated character Σ_{n ≤ 4} w^n P_n
        let w = c.int(3);
        let mut g = PadicPoly::zero(c.p);
        for n in 0..5 {
            g = g.add(&binomial_poly(n).to_padic(&c).scale(&w.pow(n as u64)));
        }
        let e = mahler_expand(&c, &g);
        for (n, cn) in e.coeffs.iter().enumerate() {
            assert!(cn.approx_eq(&w.pow(n as u64)));
        }
    }

    #[test]
    fn pairing_identities() {
        let c = ctx();
        let f = MahlerSeries::finite(ints(&c, &[4, 7, 1]));
        let one = TruncatedSeries::from_poly(&PadicPoly::from_ints(&c, &[1]));
        assert!(amice_pairing(&one, &f).unwrap().approx_eq(&f.eval_at(&c, 0).unwrap()));

        let big_f = PadicPoly::from_ints(&c, &[2, -1, 5, 1]);
        let w = c.int(9);
        let kw = MahlerSeries::character(&c, &w, 10).unwrap();
        let lhs = amice_pairing(&TruncatedSeries::from_poly(&big_f), &kw).unwrap();
        assert!(lhs.approx_eq(&big_f.eval(&w)));

        let tm = TruncatedSeries::from_poly(&PadicPoly::from_ints(&c, &[0, 0, 1]));
        assert!(amice_pairing(&tm, &f).unwrap().approx_eq(&c.int(1)));
    }

    #[test]
    fn twist_identity() {
        let c = ctx();
        let z = c.int(3);
        let f = MahlerSeries::finite(ints(&c, &[1, -2, 5]));
        let big_f = PadicPoly::from_ints(&c, &[3, 1, 0, 2]);
        let lhs = amice_pairing(&TruncatedSeries::from_poly(&big_f), &f.twisted(&c, &z, 8).unwrap()).unwrap();
        // F((1+z)(1+T) − 1) = F(z + (1+z)T)
        let g = PadicPoly::new(c.p, vec![z.clone(), &c.one() + &z]);
        let rhs = amice_pairing(&TruncatedSeries::from_poly(&big_f.compose(&g, None)), &f).unwrap();
        assert!(lhs.approx_eq(&rhs));
        // on a truncated character κ_w (exact at x ≤ 3) twisting multiplies characters
        let w = c.int(6);
        let mut g = PadicPoly::zero(c.p);
        for n in 0..4 {
            g = g.add(&binomial_poly(n).to_padic(&c).scale(&w.pow(n as u64)));
        }
        let kw = mahler_expand(&c, &g);
        let t = kw.twisted(&c, &z, 8).unwrap();
        let chi = |u: &Padic, x: u64| eval_character(&CharacterPoint::new(c, u.clone()).unwrap(), &c.int(x as i64)).unwrap();
        for x in 0..4 {
            assert!(kw.eval_at(&c, x).unwrap().approx_eq(&chi(&w, x)));
            assert!(t.eval_at(&c, x).unwrap().approx_eq(&(&chi(&z, x) * &chi(&w, x))));
        }
    }

    #[test]
    fn dilation_identity() {
        let c = ctx();
        let a = c.int(2);
        let f = MahlerSeries::finite(ints(&c, &[1, 4, -3, 2]));
        let big_f = PadicPoly::from_ints(&c, &[1, 2, 0, 7]);
        let lhs = amice_pairing(&TruncatedSeries::from_poly(&big_f), &f.dilated(&c, &a).unwrap()).unwrap();
        let rhs = amice_pairing(&compose_monoid(&c, &big_f, &a, 6).unwrap(), &f).unwrap();
        assert!(lhs.approx_eq(&rhs));
        // with a character: F([a](w)) both ways
        let w = c.int(3);
        let pt = CharacterPoint::new(c, w.clone()).unwrap();
        let aw = monoid_action(&a, &pt).unwrap();
        let kw = MahlerSeries::character(&c, &w, 40).unwrap();
        let via = amice_pairing(&compose_monoid(&c, &big_f, &a, 40).unwrap(), &kw).unwrap();
        assert!(via.approx_eq(&big_f.eval(&aw)));
        assert!(via.precision() >= 20);
    }

    #[test]
    fn divergence() {
        let c = ctx();
        let open = TruncatedSeries { coeffs: ints(&c, &[1, 1]), tail_bound: 0 };
        let flat = MahlerSeries {
            coeffs: ints(&c, &[1]),
            omega: Rational::zero(),
            tail: Some(TailCertificate { constant: int(0), decay: int(0) }),
        };
        assert!(matches!(amice_pairing(&open, &flat), Err(Error::Divergent(_))));
    }
}
