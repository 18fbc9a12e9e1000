use std::fmt;

use num_traits::{One, Zero};

use super::scalar::{Context, Padic};
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// Dense polynomial over Q_p, lowest degree first; trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicPoly {
    p: u32,
    coeffs: Vec<Padic>,
}

impl PadicPoly {
    pub fn new(p: u32, mut coeffs: Vec<Padic>) -> Self {
        while coeffs.last().is_some_and(Padic::is_zero) {
            coeffs.pop();
        }
        Self { p, coeffs }
    }

    pub fn zero(p: u32) -> Self {
        Self { p, coeffs: Vec::new() }
    }

    pub fn from_rationals(ctx: &Context, coeffs: &[Rational]) -> Self {
        Self::new(ctx.p, coeffs.iter().map(|c| ctx.rational(c)).collect())
    }

    pub fn from_ints(ctx: &Context, coeffs: &[i64]) -> Self {
        Self::new(ctx.p, coeffs.iter().map(|&c| ctx.int(c)).collect())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[Padic] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Padic {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Padic::zero(self.p))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Padic> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(self.p, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(self.p, (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut out = vec![Padic::zero(self.p); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(self.p, out)
    }

    pub fn scale(&self, c: &Padic) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Padic) -> Padic {
        let mut acc = Padic::zero(self.p);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self, ctx: &Context) -> Self {
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &ctx.int(i as i64))
                .collect(),
        )
    }

    /// Division with remainder by a divisor whose leading coefficient is nonzero.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let d = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Self::zero(self.p), self.clone()));
        }
        let mut quot = vec![Padic::zero(self.p); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let q = rem[k + d].checked_div(lead)?;
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&q * c);
            }
            quot[k] = q;
        }
        rem.truncate(d);
        Ok((Self::new(self.p, quot), Self::new(self.p, rem)))
    }

    /// f(z + a).
    pub fn taylor_shift(&self, a: &Padic) -> Self {
        // Horner in the ring of polynomials: f(z + a) = (...(c_n (z + a) + c_{n-1})(z + a) ...)
        let lin = Self::new(self.p, vec![a.clone(), one_like(a)]);
        let mut acc = Self::zero(self.p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::new(self.p, vec![c.clone()]));
        }
        acc
    }

    /// f(g(z)) truncated to degree < `order` when given.
    pub fn compose(&self, g: &Self, order: Option<usize>) -> Self {
        let mut acc = Self::zero(self.p);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Self::new(self.p, vec![c.clone()]));
            if let Some(t) = order {
                acc = acc.truncated(t);
            }
        }
        acc
    }

    /// Keeps the terms of degree < `order`.
    pub fn truncated(&self, order: usize) -> Self {
        Self::new(self.p, self.coeffs.iter().take(order).cloned().collect())
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Result<Self> {
        let lead = self.leading().ok_or(Error::DivisionByZero)?.clone();
        Ok(Self::new(
            self.p,
            self.coeffs.iter().map(|c| c.checked_div(&lead)).collect::<Result<_>>()?,
        ))
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Smallest absolute precision among the coefficients.
    pub fn precision(&self) -> i64 {
        self.coeffs.iter().map(Padic::precision).min().unwrap_or(super::scalar::INF)
    }
}

fn one_like(x: &Padic) -> Padic {
    let prec = if x.precision() == super::scalar::INF {
        super::scalar::DEFAULT_PRECISION
    } else {
        x.precision().max(1)
    };
    Padic::from_rational(x.p(), &Rational::one(), prec.max(1))
}

impl fmt::Display for PadicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})*t"),
                _ => format!("({c})*t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Exact polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial y.
    pub fn variable() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// f(z + a).
    pub fn taylor_shift(&self, a: &Rational) -> Self {
        let lin = Self::new(vec![a.clone(), Rational::one()]);
        self.compose(&lin, None)
    }

    /// f(g(z)), optionally truncated to degree < `order`.
    pub fn compose(&self, g: &Self, order: Option<usize>) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Self::constant(c.clone()));
            if let Some(t) = order {
                acc = acc.truncated(t);
            }
        }
        acc
    }

    pub fn truncated(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().take(order).cloned().collect())
    }

    pub fn to_padic(&self, ctx: &Context) -> PadicPoly {
        PadicPoly::from_rationals(ctx, &self.coeffs)
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rational(c),
                1 => format!("({})*y", format_rational(c)),
                _ => format!("({})*y^{i}", format_rational(c)),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
