//! Binomial polynomials P_n(y) = y(y-1)...(y-n+1)/n! and Gauss norms.

use num_traits::{One, Zero};

use super::poly::{PadicPoly, RatPoly};
use super::scalar::Padic;
use crate::rational::{int, val_rat, Rational};

/// P_n(y) with exact rational coefficients. P_n(0) = 0 for n >= 1, so that
/// Σ_n P_n(y) z^n = (1+z)^y.
pub fn binomial_poly(n: usize) -> RatPoly {
    let mut acc = RatPoly::constant(Rational::one());
    for k in 0..n {
        let factor = RatPoly::new(vec![-int(k as i64), Rational::one()]);
        acc = acc.mul(&factor).scale(&(Rational::one() / int(k as i64 + 1)));
    }
    acc
}

/// Valuation form of the Gauss norm ‖Σ c_i (z-a)^i‖_{a,n} with the Ω-shift:
/// min_i (val(c_i) + i·(n + ω)) over the coefficients recentered at `center`.
/// `None` stands for the zero polynomial. Coefficients that are zero to
/// their known precision are skipped.
pub fn gauss_norm(f: &PadicPoly, center: &Padic, n: i64, omega: &Rational) -> Option<Rational> {
    let shifted = if center.is_zero() { f.clone() } else { f.taylor_shift(center) };
    let radius = int(n) + omega;
    shifted
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.valuation().map(|v| int(v) + &radius * int(i as i64)))
        .min()
}

/// Same as [`gauss_norm`] for an exact rational polynomial.
pub fn gauss_norm_rat(f: &RatPoly, p: u32, center: &Rational, n: i64, omega: &Rational) -> Option<Rational> {
    let shifted = if center.is_zero() { f.clone() } else { f.taylor_shift(center) };
    let radius = int(n) + omega;
    shifted
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| val_rat(c, p).map(|v| int(v) + &radius * int(i as i64)))
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::scalar::Context;
    use crate::rational::rat;

    #[test]
    fn small_binomial_polys() {
        assert_eq!(binomial_poly(0), RatPoly::constant(int(1)));
        assert_eq!(binomial_poly(1), RatPoly::variable());
        assert_eq!(binomial_poly(2).eval(&int(3)), int(3));
        for n in 1..6 {
            assert!(binomial_poly(n).eval(&int(0)).is_zero());
            assert_eq!(binomial_poly(n).coeff(n), Rational::one() / int((1..=n as i64).product()));
        }
    }

    #[test]
    fn cocycle_at_two() {
        let lhs = binomial_poly(2).eval(&int(2));
        let rhs = binomial_poly(2).eval(&int(1))
            + binomial_poly(1).eval(&int(1)) * binomial_poly(1).eval(&int(1))
            + binomial_poly(2).eval(&int(1));
        assert_eq!(lhs, int(1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn gauss_norm_examples() {
        let ctx = Context::new(2, 30).unwrap();
        let z = PadicPoly::from_ints(&ctx, &[0, 1]);
        assert_eq!(gauss_norm(&z, &ctx.zero(), 1, &int(0)), Some(int(1)));
        // P_4 = (y^4 - 6y^3 + 11y^2 - 6y)/24: valuations -2, -3+2... min is -1 at i = 1, 2
        let p4 = RatPoly::new(vec![int(0), rat(-6, 24), rat(11, 24), rat(-6, 24), rat(1, 24)]);
        assert_eq!(binomial_poly(4), p4);
        assert_eq!(gauss_norm(&p4.to_padic(&ctx), &ctx.zero(), 1, &int(0)), Some(int(-1)));
        assert_eq!(gauss_norm_rat(&p4, 2, &int(0), 1, &int(0)), Some(int(-1)));
        // degenerate disc: plain minimum of coefficient valuations
        assert_eq!(gauss_norm_rat(&p4, 2, &int(0), 0, &int(0)), Some(int(-3)));
        assert_eq!(gauss_norm_rat(&RatPoly::zero(), 2, &int(0), 1, &int(0)), None);
    }
}
