use super::{nilpotent_exp, orbit_limit, NilpotentOperator, OrbitDirection};
use crate::error::{Error, Result};
use crate::filtration::{flag_distance, FilteredSpace, FlagDistance};
use crate::linalg::Matrix;
use crate::padic::{padic_log, Context, Padic};
use crate::rational::{int, rat, Rational};

/// A flag F_0 moved by the Sen factor exp(𝔫(ℓ)·ℓ), where 𝔫 is a matrix
/// polynomial Σ ℓ^i S_i and ℓ = log(1+z) for val(z) ≥ `domain_val`.
#[derive(Clone, Debug)]
pub struct PeriodMapModel {
    pub f0: FilteredSpace,
    pub sen: Vec<Matrix>,
    pub domain_val: i64,
}

impl PeriodMapModel {
    pub fn new(f0: FilteredSpace, sen: Vec<Matrix>, domain_val: i64) -> Result<Self> {
        let n = f0.ambient_dim();
        if sen.iter().any(|s| s.rows() != n || s.cols() != n) {
            return Err(Error::ShapeMismatch(format!("Sen coefficients must be {n}x{n}")));
        }
        if domain_val < 1 {
            return Err(Error::InvalidInput("domain exponent must be positive".into()));
        }
        Ok(Self { f0, sen, domain_val })
    }

    /// The constant model Θ = F_0.
    pub fn constant(f0: FilteredSpace) -> Self {
        Self { f0, sen: Vec::new(), domain_val: 1 }
    }

    /// 𝔫(ℓ)·ℓ.
    fn sen_at(&self, ctx: &Context, ell: &Padic) -> Matrix {
        let n = self.f0.ambient_dim();
        let mut acc = Matrix::zeros(ctx.p, n, n);
        for s in self.sen.iter().rev() {
            acc = acc.scale(ell).add(s);
        }
        acc.scale(ell)
    }

    /// Θ(ℓ) = exp(𝔫(ℓ)ℓ)·F_0.
    pub fn theta(&self, ctx: &Context, ell: &Padic) -> Result<FilteredSpace> {
        Ok(self.f0.transport(&matrix_exp(ctx, &self.sen_at(ctx, ell))?))
    }
}

/// exp(A) for min val(A) > 1/(p−1), summed until the tail is below the
/// working precision: val(A^k/k!) ≥ k·(v − 1/(p−1)).
pub fn matrix_exp(ctx: &Context, a: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    let Some(v) = a.min_valuation() else { return Ok(Matrix::identity(ctx, n)) };
    let gap = int(v) - rat(1, ctx.p as i64 - 1);
    if gap <= int(0) {
        return Err(Error::OutOfDomain(format!("exp needs entries of valuation > 1/(p-1), got {v}")));
    }
    let prec = a.working_precision().min(ctx.precision);
    let terms = crate::rational::ceil(&(int(prec + 1) / &gap)).max(1) as usize + 1;
    let mut acc = Matrix::identity(ctx, n);
    let mut term = Matrix::identity(ctx, n);
    for k in 1..=terms {
        let inv_k = ctx.rational(&rat(1, k as i64));
        term = term.mul(a).scale(&inv_k);
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

fn ell_of(ctx: &Context, z: &Padic, domain_val: i64) -> Result<Padic> {
    match z.valuation() {
        None => Ok(ctx.zero()),
        Some(v) if v < domain_val.max(1) => {
            Err(Error::OutOfDomain(format!("val(z) = {v} is below the model's domain exponent {domain_val}")))
        }
        Some(_) => padic_log(&(&ctx.one() + z)),
    }
}

/// exp(N·ℓ)·exp(𝔫(ℓ)ℓ)·F_0 with ℓ = log(1+z).
pub fn twisted_orbit_eval(op: &NilpotentOperator, model: &PeriodMapModel, z: &Padic) -> Result<FilteredSpace> {
    let ctx = op.ctx();
    if op.dim() != model.f0.ambient_dim() {
        return Err(Error::DimensionMismatch("operator and model differ in dimension".into()));
    }
    let ell = ell_of(ctx, z, model.domain_val)?;
    let theta = model.theta(ctx, &ell)?;
    Ok(theta.transport(&nilpotent_exp(ctx, &op.matrix().scale(&ell))?))
}

/// Distances d(exp(Nℓ)·F_∞, Θ(ℓ)) at z = p^v for the sampled v.
#[derive(Clone, Debug)]
pub struct DecayReport {
    pub rows: Vec<(i64, FlagDistance)>,
    /// Change in −log_p(distance) per unit of val(z) between the first and
    /// last nonzero rows.
    pub fit: Option<Rational>,
}

impl DecayReport {
    pub fn non_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].1 <= w[0].1)
    }
}

pub fn distance_decay_report(op: &NilpotentOperator, model: &PeriodMapModel, sample_vals: &[i64]) -> Result<DecayReport> {
    let ctx = op.ctx();
    let limit = orbit_limit(op, &model.f0, OrbitDirection::ValToMinusInfinity)?;
    let mut rows = Vec::with_capacity(sample_vals.len());
    for &v in sample_vals {
        let ell = ell_of(ctx, &ctx.p_power(v), model.domain_val)?;
        let xi = limit.transport(&nilpotent_exp(ctx, &op.matrix().scale(&ell))?);
        let theta = model.theta(ctx, &ell)?;
        rows.push((v, flag_distance(&xi, &theta)?));
    }
    let nonzero: Vec<(i64, i64)> = rows
        .iter()
        .filter_map(|(v, d)| match d {
            FlagDistance::PowerOfP { k, .. } => Some((*v, *k)),
            FlagDistance::Zero => None,
        })
        .collect();
    let fit = match (nonzero.first(), nonzero.last()) {
        (Some(a), Some(b)) if b.0 != a.0 => Some(rat(b.1 - a.1, b.0 - a.0)),
        _ => None,
    };
    Ok(DecayReport { rows, fit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Subspace;
    use crate::orbit::orbit_eval;

    fn ctx() -> Context {
        Context::new(5, 30).unwrap()
    }

    fn line_flag(c: &Context, v: &[i64]) -> FilteredSpace {
        let rows: Vec<&[i64]> = v.iter().map(std::slice::from_ref).collect();
        let s = Subspace::span(&Matrix::from_ints(c, &rows));
        FilteredSpace::new(c.p, v.len(), vec![(rat(1, 1), s), (rat(0, 1), Subspace::full(c, v.len()))]).unwrap()
    }

    fn e12(c: &Context) -> NilpotentOperator {
        NilpotentOperator::new(*c, Matrix::from_ints(c, &[&[0, 1], &[0, 0]])).unwrap()
    }

    #[test]
    fn degenerate_models() {
        let c = ctx();
        let f0 = line_flag(&c, &[0, 1]);
        let n = e12(&c);
        let z = c.int(5);
        let ell = padic_log(&c.int(6)).unwrap();
        let plain = orbit_eval(&[n.clone()], &[ell], &f0).unwrap();
        assert!(twisted_orbit_eval(&n, &PeriodMapModel::constant(f0.clone()), &z).unwrap().same_as(&plain));
        let scalar = PeriodMapModel::new(f0.clone(), vec![Matrix::identity(&c, 2).scale(&c.int(3))], 1).unwrap();
        assert!(twisted_orbit_eval(&n, &scalar, &z).unwrap().same_as(&plain));
        assert!(twisted_orbit_eval(&n, &scalar, &c.zero()).unwrap().same_as(&f0));
        assert!(matches!(twisted_orbit_eval(&n, &scalar, &c.one()), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn decay() {
        let c = ctx();
        let f0 = line_flag(&c, &[0, 1]);
        let report =
            distance_decay_report(&NilpotentOperator::zero(c, 2), &PeriodMapModel::constant(f0.clone()), &[1, 2, 3]).unwrap();
        assert!(report.rows.iter().all(|(_, d)| *d == FlagDistance::Zero));
        // a Sen factor tilting F_0 towards e1 while N pushes it to e1
        let sen = vec![Matrix::from_ints(&c, &[&[0, 1], &[0, 0]])];
        let model = PeriodMapModel::new(line_flag(&c, &[1, 1]), sen, 1).unwrap();
        let report = distance_decay_report(&e12(&c), &model, &[1, 2, 3, 4]).unwrap();
        assert!(report.non_increasing());
    }

    #[test]
    fn exp_of_small_matrices() {
        let c = ctx();
        let a = Matrix::diagonal(c.p, &[c.int(5), c.int(10)]);
        let e = matrix_exp(&c, &a).unwrap();
        assert!(e.get(0, 0).approx_eq(&crate::padic::padic_exp(&c.int(5)).unwrap()));
        assert!(matrix_exp(&c, &Matrix::identity(&c, 2)).is_err());
    }
}
