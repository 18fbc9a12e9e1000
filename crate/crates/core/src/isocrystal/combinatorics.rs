use num_traits::Zero;

use super::newton::NewtonVector;
use crate::error::{Error, Result};
use crate::rational::{ceil, int, Rational};

/// Partial-sum dominance ν′ ≤ ν: every partial sum of ν′ is at most the
/// corresponding one of ν, with equal totals.
pub fn newton_leq(nu_prime: &NewtonVector, nu: &NewtonVector) -> Result<bool> {
    if nu_prime.dim() != nu.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Newton vectors of lengths {} and {}",
            nu_prime.dim(),
            nu.dim()
        )));
    }
    let (a, b) = (nu_prime.slopes(), nu.slopes());
    let mut sa = Rational::zero();
    let mut sb = Rational::zero();
    for (x, y) in a.iter().zip(&b) {
        sa += x;
        sb += y;
        if sa > sb {
            return Ok(false);
        }
    }
    Ok(sa == sb)
}

/// Each distinct slope times its multiplicity is an integer.
pub fn is_admissible_newton(nu: &NewtonVector) -> bool {
    nu.parts().iter().all(|(v, m)| (v * int(*m as i64)).is_integer())
}

/// #Δ(ν) for Δ(ν) = {(i, j) : 0 ≤ i ≤ g, Σ_{l ≤ i} ν_{2g−l+1} ≤ j < i}.
pub fn siegel_stratum_dimension(nu: &NewtonVector, g: usize) -> Result<usize> {
    let s = nu.slopes();
    if s.len() != 2 * g {
        return Err(Error::NotPolarized(format!("expected {} slopes, got {}", 2 * g, s.len())));
    }
    let one = int(1);
    for i in 0..2 * g {
        if s[i] < Rational::zero() || s[i] > one {
            return Err(Error::NotPolarized("slopes must lie in [0, 1]".into()));
        }
        if &s[i] + &s[2 * g - 1 - i] != one {
            return Err(Error::NotPolarized("ν_i + ν_{2g−i+1} must equal 1".into()));
        }
    }
    let mut count = 0usize;
    let mut partial = Rational::zero();
    for i in 0..=g {
        if i > 0 {
            partial += &s[2 * g - i];
        }
        let lo = ceil(&partial);
        if (i as i64) > lo {
            count += (i as i64 - lo) as usize;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn nv(s: &[(i64, i64)]) -> NewtonVector {
        NewtonVector::from_slopes(&s.iter().map(|&(a, b)| rat(a, b)).collect::<Vec<_>>())
    }

    #[test]
    fn dominance() {
        let ss = nv(&[(1, 2), (1, 2)]);
        let ord = nv(&[(1, 1), (0, 1)]);
        assert!(newton_leq(&ss, &ord).unwrap());
        assert!(!newton_leq(&ord, &ss).unwrap());
        assert!(newton_leq(&ord, &ord).unwrap());
        let a = nv(&[(1, 1), (1, 1)]);
        let b = nv(&[(2, 1), (0, 1)]);
        assert!(newton_leq(&a, &b).unwrap());
        assert!(!newton_leq(&b, &a).unwrap());
        assert!(newton_leq(&a, &nv(&[(1, 1)])).is_err());
    }

    #[test]
    fn admissibility() {
        assert!(is_admissible_newton(&nv(&[(1, 2), (1, 2)])));
        assert!(!is_admissible_newton(&nv(&[(1, 2)])));
        assert!(is_admissible_newton(&nv(&[(2, 3), (2, 3), (2, 3)])));
    }

    #[test]
    fn siegel_dimensions() {
        assert_eq!(siegel_stratum_dimension(&nv(&[(1, 1), (0, 1)]), 1).unwrap(), 1);
        assert_eq!(siegel_stratum_dimension(&nv(&[(1, 2), (1, 2)]), 1).unwrap(), 0);
        assert_eq!(siegel_stratum_dimension(&nv(&[(1, 1), (1, 1), (0, 1), (0, 1)]), 2).unwrap(), 3);
        assert!(matches!(
            siegel_stratum_dimension(&nv(&[(1, 1), (1, 1)]), 1),
            Err(Error::NotPolarized(_))
        ));
    }
}
