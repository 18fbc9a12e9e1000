//! Characters κ_z(x) = (1+z)^x of Z_p, the monoid action on the disc,
//! Mahler expansions, the pairing between power series and Mahler series,
//! and norm estimates for binomial polynomials.

mod estimates;
mod mahler;

pub use estimates::{decay_envelope, estimate_report, DecayEnvelope, EstimateReport, EstimateRow};
pub use mahler::{amice_pairing, compose_monoid, mahler_expand, MahlerSeries, TailCertificate};

use crate::error::{Error, Result};
use crate::padic::{binomial_coefficient, Context, Padic};

/// A point z of the open unit disc, val(z) ≥ 1.
#[derive(Clone, Debug)]
pub struct CharacterPoint {
    ctx: Context,
    z: Padic,
}

impl CharacterPoint {
    pub fn new(ctx: Context, z: Padic) -> Result<Self> {
        if z.p() != ctx.p {
            return Err(Error::PrimeMismatch(z.p(), ctx.p));
        }
        if !z.is_exact_zero() && z.valuation_lower_bound() < 1 {
            return Err(Error::OutOfDisc(format!("val(z) = {} < 1", z.valuation_lower_bound())));
        }
        Ok(Self { ctx, z })
    }

    pub fn z(&self) -> &Padic {
        &self.z
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }
}

/// κ_z(x) = Σ_n binom(x, n) z^n, summed until n·val(z) reaches the working
/// precision (the binomials are integral).
pub fn eval_character(pt: &CharacterPoint, x: &Padic) -> Result<Padic> {
    let ctx = &pt.ctx;
    if x.valuation_lower_bound() < 0 {
        return Err(Error::OutOfDomain(format!("x must lie in Z_p, val(x) = {}", x.valuation_lower_bound())));
    }
    let prec = ctx.precision.min(pt.z.precision());
    if pt.z.is_zero() {
        return Ok(Padic::one(ctx.p, prec));
    }
    let v = pt.z.valuation_lower_bound().max(1);
    let terms = (prec + v - 1) / v;
    let mut sum = ctx.one();
    let mut power = ctx.one();
    for n in 1..terms as u64 {
        power = &power * &pt.z;
        let b = binomial_coefficient(ctx, x, n)?;
        if b.is_exact_zero() {
            continue;
        }
        sum = &sum + &(&b * &power);
    }
    if sum.precision() <= 0 {
        return Err(Error::PrecisionExhausted("character value lost all precision".into()));
    }
    Ok(sum.truncate(prec))
}

/// [a](z) = (1+z)^a − 1.
pub fn monoid_action(a: &Padic, pt: &CharacterPoint) -> Result<Padic> {
    if a.is_zero() {
        return Err(Error::InvalidInput("the monoid acts by nonzero elements of Z_p".into()));
    }
    Ok(&eval_character(pt, a)? - &pt.ctx.one())
}
