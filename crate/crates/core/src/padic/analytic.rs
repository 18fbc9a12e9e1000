//! exp, log and binomial series on their convergence domains, with tail
//! bounds computed from exact term valuations.

use super::poly::PadicPoly;
use super::scalar::{Context, Padic, DEFAULT_PRECISION, INF};
use crate::error::{Error, Result};
use crate::rational::{rat, Rational};

/// Power series truncated at `coeffs.len()` terms; every omitted coefficient
/// has valuation >= `tail_bound` (`INF` when the omitted tail is exactly zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub coeffs: Vec<Padic>,
    pub tail_bound: i64,
}

impl TruncatedSeries {
    pub fn from_poly(f: &PadicPoly) -> Self {
        Self { coeffs: f.coeffs().to_vec(), tail_bound: INF }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Keeps `order` terms; the bound accounts for the dropped coefficients.
    pub fn truncate(&self, order: usize) -> Self {
        if order >= self.coeffs.len() {
            return self.clone();
        }
        let dropped = self.coeffs[order..].iter().map(Padic::valuation_lower_bound).min().unwrap_or(INF);
        Self { coeffs: self.coeffs[..order].to_vec(), tail_bound: self.tail_bound.min(dropped) }
    }
}

fn working_precision(x: &Padic) -> i64 {
    if x.precision() == INF {
        DEFAULT_PRECISION
    } else {
        x.precision()
    }
}

fn floor_log(n: u64, p: u32) -> i64 {
    let mut k = 0;
    let mut m = n / p as u64;
    while m > 0 {
        k += 1;
        m /= p as u64;
    }
    k
}

fn one_at(p: u32, prec: i64) -> Padic {
    Padic::from_rational(p, &rat(1, 1), prec.max(1))
}

/// Σ_{n>=1} (-1)^{n+1} (x-1)^n / n for val(x - 1) >= 1.
pub fn padic_log(x: &Padic) -> Result<Padic> {
    let p = x.p();
    let m = working_precision(x);
    let u = x - &one_at(p, m);
    if u.is_zero() {
        return Ok(Padic::approx_zero(p, u.precision()));
    }
    let v = u.valuation().unwrap();
    if v < 1 {
        return Err(Error::OutOfDomain(format!("log needs val(x - 1) >= 1, got {v}")));
    }
    // n·v - floor(log_p n) bounds val(u^n / n) from below and is nondecreasing in n
    let mut sum = Padic::zero(p);
    let mut power = u.clone();
    let mut n: u64 = 1;
    loop {
        let bound = n as i64 * v - floor_log(n, p);
        if bound >= m {
            break;
        }
        let term = power.checked_div(&Padic::from_rational(p, &rat(n as i64, 1), m + 64))?;
        sum = if n % 2 == 1 { &sum + &term } else { &sum - &term };
        power = &power * &u;
        n += 1;
    }
    Ok(sum.truncate(m))
}

/// Σ x^n / n! for val(x) > 1/(p-1).
pub fn padic_exp(x: &Padic) -> Result<Padic> {
    let p = x.p();
    let m = working_precision(x);
    if x.is_zero() {
        return Ok(one_at(p, x.precision().min(m)));
    }
    let v = x.valuation().unwrap();
    let threshold = rat(1, p as i64 - 1);
    if Rational::from_integer(v.into()) <= threshold {
        return Err(Error::OutOfDomain(format!("exp needs val(x) > 1/(p-1), got {v}")));
    }
    // val(x^n/n!) >= n·v - (n-1)/(p-1), strictly increasing in n
    let mut sum = one_at(p, m);
    let mut term = one_at(p, m);
    let mut n: i64 = 1;
    loop {
        let bound = rat(n * v, 1) - rat(n - 1, p as i64 - 1);
        if bound >= rat(m, 1) {
            break;
        }
        term = (&term * x).checked_div(&Padic::from_rational(p, &rat(n, 1), m + 64))?;
        sum = &sum + &term;
        n += 1;
    }
    Ok(sum.truncate(m))
}

/// binom(a, n) = a(a-1)...(a-n+1)/n! for a in Z_p.
pub fn binomial_coefficient(ctx: &Context, a: &Padic, n: u64) -> Result<Padic> {
    let mut num = ctx.one();
    for k in 0..n {
        num = &num * &(a - &ctx.int(k as i64));
    }
    let mut fact = ctx.one();
    for k in 1..=n {
        fact = &fact * &Padic::from_rational(ctx.p, &rat(k as i64, 1), ctx.precision + 64);
    }
    num.checked_div(&fact)
}

/// (1+T)^a - 1 as a truncated series in T with `order` terms. Coefficients
/// are binomials of a ∈ Z_p, so the omitted tail is integral.
pub fn monoid_series(ctx: &Context, a: &Padic, order: usize) -> Result<TruncatedSeries> {
    if a.valuation_lower_bound() < 0 {
        return Err(Error::OutOfDomain("exponent must lie in Z_p".into()));
    }
    let mut coeffs = Vec::with_capacity(order);
    for n in 0..order as u64 {
        if n == 0 {
            coeffs.push(ctx.zero());
        } else {
            coeffs.push(binomial_coefficient(ctx, a, n)?);
        }
    }
    Ok(TruncatedSeries { coeffs, tail_bound: 0 })
}

/// Whether the value is a (known) element of Z_p.
pub fn is_integral(x: &Padic) -> bool {
    x.valuation_lower_bound() >= 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::val_rat;
    use num_traits::Zero;

    fn ctx(p: u32) -> Context {
        Context::new(p, 40).unwrap()
    }

    /// Partial sums of the log series evaluated with exact rationals.
    fn log_partial_sum_valuation(p: u32, u: i64, terms: u64) -> i64 {
        let mut s = Rational::zero();
        let mut power = Rational::from_integer(1.into());
        for n in 1..=terms {
            power *= Rational::from_integer(u.into());
            let term = power.clone() / Rational::from_integer((n as i64).into());
            if n % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        val_rat(&s, p).unwrap()
    }

    #[test]
    fn log_valuations_match_partial_sum_oracle() {
        // The tail beyond 30 terms has valuation far above 5, so the partial
        // sums pin the leading valuation.
        assert_eq!(log_partial_sum_valuation(5, 5, 30), 1);
        assert_eq!(log_partial_sum_valuation(2, 2, 60), 2);
        let c5 = ctx(5);
        assert_eq!(padic_log(&c5.int(6)).unwrap().valuation(), Some(1));
        let c2 = ctx(2);
        assert_eq!(padic_log(&c2.int(3)).unwrap().valuation(), Some(2));
    }

    #[test]
    fn log_of_one_is_zero() {
        let l = padic_log(&ctx(7).one()).unwrap();
        assert!(l.is_zero());
    }

    #[test]
    fn log_outside_domain() {
        assert!(matches!(padic_log(&ctx(5).int(2)), Err(Error::OutOfDomain(_))));
        assert!(matches!(padic_log(&ctx(5).rational(&rat(1, 5))), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn exp_basics() {
        let c = ctx(5);
        let e = padic_exp(&c.int(5)).unwrap();
        assert_eq!((&e - &c.one()).valuation(), Some(1));
        let one = padic_exp(&c.zero()).unwrap();
        assert!(one.approx_eq(&c.one()));
        assert!(matches!(padic_exp(&c.int(1)), Err(Error::OutOfDomain(_))));
        assert!(matches!(padic_exp(&ctx(2).int(2)), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn exp_log_round_trip() {
        let c = ctx(5);
        let x = c.int(6);
        let back = padic_exp(&padic_log(&x).unwrap()).unwrap();
        assert!(back.approx_eq(&x));
        assert!(back.precision() >= 38);
    }

    #[test]
    fn binomials() {
        let c = ctx(3);
        assert_eq!(binomial_coefficient(&c, &c.int(5), 2).unwrap().reconstruct(), Some(rat(10, 1)));
        assert_eq!(binomial_coefficient(&c, &c.int(-1), 3).unwrap().reconstruct(), Some(rat(-1, 1)));
        assert!(is_integral(&binomial_coefficient(&c, &c.rational(&rat(1, 2)), 4).unwrap()));
    }
}
