//! Nilpotent orbits exp(tN)·F_0, their limits, sl2-triples and monodromy
//! weight filtrations, twisted period-map models and an exhaustive search
//! harness for semistable limits.

mod check;
mod model;
mod search;
mod sl2;

pub use check::{mixed_graded_check, nilpotent_orbit_check, nilpotent_orbit_check_towards, GradedPiece, MixedVerdict, OrbitVerdict};
pub use model::{distance_decay_report, twisted_orbit_eval, DecayReport, PeriodMapModel};
pub use search::{orbit_search, OrbitRecord, SearchConfig};
pub use sl2::{jacobson_morozov, monodromy_weight_filtration, weight_axioms_hold, Sl2Triple, WeightFiltration};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::filtration::FilteredSpace;
use crate::isocrystal::Isocrystal;
use crate::linalg::{limit_span, LaurentVector, Matrix};
use crate::padic::{Context, Padic};
use crate::rational::val_factorial;

/// A nilpotent matrix with its nilpotency index and, optionally, the twist r
/// of a Frobenius relation NΦ = p^r ΦN.
#[derive(Clone, Debug)]
pub struct NilpotentOperator {
    ctx: Context,
    matrix: Matrix,
    index: usize,
    twist: Option<i64>,
}

impl NilpotentOperator {
    pub fn new(ctx: Context, matrix: Matrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::ShapeMismatch("nilpotent operator must be square".into()));
        }
        let index = matrix
            .nilpotency_index(&ctx)
            .ok_or_else(|| Error::NotNilpotent)?;
        Ok(Self { ctx, matrix, index, twist: None })
    }

    pub fn zero(ctx: Context, n: usize) -> Self {
        Self { ctx, matrix: Matrix::zeros(ctx.p, n, n), index: if n == 0 { 0 } else { 1 }, twist: None }
    }

    /// Attaches the twist r after checking NΦ = p^r ΦN.
    pub fn with_twist(mut self, r: i64, e: &Isocrystal) -> Result<Self> {
        match phi_n_compat(&self, e)? {
            Compatibility::Any => {}
            Compatibility::Twist(s) if s == r => {}
            _ => return Err(Error::InvalidInput(format!("NΦ ≠ p^{r}ΦN"))),
        }
        self.twist = Some(r);
        Ok(self)
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn nilpotency_index(&self) -> usize {
        self.index
    }

    pub fn twist(&self) -> Option<i64> {
        self.twist
    }

    pub fn is_zero(&self) -> bool {
        self.index <= 1
    }
}

/// Outcome of comparing NΦ with ΦN.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Compatibility {
    /// N = 0: the relation holds for every r.
    Any,
    Twist(i64),
    Incompatible,
}

impl Compatibility {
    pub fn holds(&self) -> bool {
        !matches!(self, Self::Incompatible)
    }
}

/// The r > 0 with NΦ = p^r·ΦN, if any.
pub fn phi_n_compat(n: &NilpotentOperator, e: &Isocrystal) -> Result<Compatibility> {
    if n.dim() != e.dim() {
        return Err(Error::DimensionMismatch(format!("N is {0}x{0}, Φ is {1}x{1}", n.dim(), e.dim())));
    }
    if n.is_zero() {
        return Ok(Compatibility::Any);
    }
    let a = n.matrix.mul(e.frobenius());
    let b = e.frobenius().mul(&n.matrix);
    let pivot = b.entries().iter().zip(a.entries()).find(|(y, _)| !y.is_zero());
    let Some((y, x)) = pivot else { return Ok(Compatibility::Incompatible) };
    let (Some(vx), Some(vy)) = (x.valuation(), y.valuation()) else { return Ok(Compatibility::Incompatible) };
    let r = vx - vy;
    if r <= 0 {
        return Ok(Compatibility::Incompatible);
    }
    Ok(if a.approx_eq(&b.scale(&n.ctx.p_power(r))) { Compatibility::Twist(r) } else { Compatibility::Incompatible })
}

/// 1/k! as a scalar, refusing when the denominator eats the whole precision.
fn inv_factorial(ctx: &Context, k: usize) -> Result<Padic> {
    if val_factorial(k as u64, ctx.p) >= ctx.precision {
        return Err(Error::DenominatorPrecision(k));
    }
    let mut f = num_bigint::BigInt::from(1);
    for i in 2..=k {
        f *= i;
    }
    Ok(ctx.rational(&(crate::Rational::from_integer(1.into()) / crate::Rational::from_integer(f))))
}

/// exp(M) = Σ_{k<n} M^k/k! for nilpotent M.
pub fn nilpotent_exp(ctx: &Context, m: &Matrix) -> Result<Matrix> {
    let n = m.rows();
    let index = m.nilpotency_index(ctx).ok_or_else(|| Error::NotNilpotent)?;
    let mut acc = Matrix::identity(ctx, n);
    let mut power = Matrix::identity(ctx, n);
    for k in 1..index {
        power = power.mul(m);
        acc = acc.add(&power.scale(&inv_factorial(ctx, k)?));
    }
    Ok(acc)
}

/// exp(Σ t_i N_i)·F_0.
pub fn orbit_eval(ns: &[NilpotentOperator], ts: &[Padic], f0: &FilteredSpace) -> Result<FilteredSpace> {
    if ns.len() != ts.len() || ns.is_empty() {
        return Err(Error::InvalidInput(format!("{} operators and {} parameters", ns.len(), ts.len())));
    }
    let ctx = ns[0].ctx;
    let n = f0.ambient_dim();
    let mut sum = Matrix::zeros(ctx.p, n, n);
    for (op, t) in ns.iter().zip(ts) {
        if op.dim() != n {
            return Err(Error::DimensionMismatch(format!("{0}x{0} operator on Q_p^{n}", op.dim())));
        }
        sum = sum.add(&op.matrix.scale(t));
    }
    if sum.nilpotency_index(&ctx).is_none() {
        return Err(Error::NotNilpotentSum);
    }
    Ok(f0.transport(&nilpotent_exp(&ctx, &sum)?))
}

/// Which way val(t) goes in the orbit limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum OrbitDirection {
    /// |t| → ∞; the nilpotent factor degenerates.
    #[default]
    ValToMinusInfinity,
    /// t → 0; the orbit returns to F_0.
    ValToPlusInfinity,
}

/// exp(tN)·v as a polynomial vector in t.
fn orbit_vector(op: &NilpotentOperator, v: &[Padic]) -> Result<LaurentVector> {
    let mut terms = BTreeMap::new();
    let mut w = v.to_vec();
    for k in 0..op.index.max(1) {
        let c = inv_factorial(&op.ctx, k)?;
        terms.insert(k as i64, w.iter().map(|x| x * &c).collect());
        w = op.matrix.mul_vec(&w);
    }
    Ok(LaurentVector::new(terms))
}

/// lim exp(tN)·F_0, step by step.
pub fn orbit_limit(op: &NilpotentOperator, f0: &FilteredSpace, direction: OrbitDirection) -> Result<FilteredSpace> {
    if op.dim() != f0.ambient_dim() {
        return Err(Error::DimensionMismatch(format!("{0}x{0} operator on Q_p^{1}", op.dim(), f0.ambient_dim())));
    }
    let to_inf = direction == OrbitDirection::ValToMinusInfinity;
    let mut steps = Vec::with_capacity(f0.steps().len());
    for (j, s) in f0.steps() {
        let vs = s.vectors().iter().map(|v| orbit_vector(op, v)).collect::<Result<Vec<_>>>()?;
        let lim = limit_span(f0.p(), f0.ambient_dim(), vs, to_inf)?;
        if lim.dim() != s.dim() {
            return Err(Error::RankDeficient("orbit limit lost dimension".into()));
        }
        steps.push((j.clone(), lim));
    }
    FilteredSpace::new(f0.p(), f0.ambient_dim(), steps)
}

/// lim exp(tN)·g·exp(−tN) as |t| → ∞.
#[derive(Clone, Debug)]
pub enum ConjugationLimit {
    Converges(Matrix),
    /// The lowest positive power of t with a nonzero coefficient.
    Diverges { power: usize, coefficient: Matrix },
}

/// Expands exp(tN)·g·exp(−tN) = Σ t^k ad_N^k(g)/k!.
pub fn conjugation_limit(op: &NilpotentOperator, g: &Matrix) -> Result<ConjugationLimit> {
    if !g.is_square() || g.rows() != op.dim() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix for a {2}x{2} operator", g.rows(), g.cols(), op.dim())));
    }
    let mut ad = g.clone();
    for k in 1..=2 * op.dim() {
        ad = op.matrix.bracket(&ad);
        if ad.is_zero() {
            break;
        }
        let coefficient = ad.scale(&inv_factorial(&op.ctx, k)?);
        if !coefficient.is_zero() {
            return Ok(ConjugationLimit::Diverges { power: k, coefficient });
        }
    }
    Ok(ConjugationLimit::Converges(g.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Subspace;
    use crate::rational::rat;

    fn ctx() -> Context {
        Context::new(5, 30).unwrap()
    }

    fn e12(c: &Context) -> NilpotentOperator {
        NilpotentOperator::new(*c, Matrix::from_ints(c, &[&[0, 1], &[0, 0]])).unwrap()
    }

    fn line_flag(c: &Context, v: &[i64]) -> FilteredSpace {
        let rows: Vec<&[i64]> = v.iter().map(std::slice::from_ref).collect();
        let s = Subspace::span(&Matrix::from_ints(c, &rows));
        FilteredSpace::new(c.p, v.len(), vec![(rat(1, 1), s), (rat(0, 1), Subspace::full(c, v.len()))]).unwrap()
    }

    #[test]
    fn compatibility() {
        let c = ctx();
        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(5, 1)]).unwrap();
        assert_eq!(phi_n_compat(&e12(&c), &e).unwrap(), Compatibility::Twist(1));
        assert_eq!(phi_n_compat(&NilpotentOperator::zero(c, 2), &e).unwrap(), Compatibility::Any);
        let id = Isocrystal::diagonal(c, &[rat(1, 1), rat(1, 1)]).unwrap();
        assert_eq!(phi_n_compat(&e12(&c), &id).unwrap(), Compatibility::Incompatible);
        assert!(NilpotentOperator::new(c, Matrix::from_ints(&c, &[&[1, 0], &[0, 0]])).is_err());
    }

    #[test]
    fn evaluation() {
        let c = ctx();
        let f0 = line_flag(&c, &[0, 1]);
        let t = c.int(7);
        let f = orbit_eval(&[e12(&c)], &[t.clone()], &f0).unwrap();
        assert!(f.at(&rat(1, 1)).same_as(&line_flag(&c, &[7, 1]).at(&rat(1, 1))));
        assert!(orbit_eval(&[e12(&c)], &[c.zero()], &f0).unwrap().same_as(&f0));
        assert!(orbit_eval(&[NilpotentOperator::zero(c, 2)], &[t], &f0).unwrap().same_as(&f0));
        let back = orbit_eval(&[e12(&c)], &[c.int(-7)], &f).unwrap();
        assert!(back.same_as(&f0));
        let lower = NilpotentOperator::new(c, Matrix::from_ints(&c, &[&[0, 0], &[1, 0]])).unwrap();
        assert!(matches!(
            orbit_eval(&[e12(&c), lower], &[c.one(), c.one()], &f0),
            Err(Error::NotNilpotentSum)
        ));
    }

    #[test]
    fn limits() {
        let c = ctx();
        let f0 = line_flag(&c, &[0, 1]);
        let lim = orbit_limit(&e12(&c), &f0, OrbitDirection::ValToMinusInfinity).unwrap();
        assert!(lim.same_as(&line_flag(&c, &[1, 0])));
        let back = orbit_limit(&e12(&c), &f0, OrbitDirection::ValToPlusInfinity).unwrap();
        assert!(back.same_as(&f0));
        let z = orbit_limit(&NilpotentOperator::zero(c, 2), &f0, OrbitDirection::ValToMinusInfinity).unwrap();
        assert!(z.same_as(&f0));
        let n3 = NilpotentOperator::new(c, Matrix::from_ints(&c, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]])).unwrap();
        let l3 = orbit_limit(&n3, &line_flag(&c, &[0, 0, 1]), OrbitDirection::ValToMinusInfinity).unwrap();
        assert!(l3.same_as(&line_flag(&c, &[1, 0, 0])));
        // the limit is fixed by the orbit
        let again = orbit_eval(&[n3.clone()], &[c.int(3)], &l3).unwrap();
        assert!(again.same_as(&l3));
    }

    #[test]
    fn small_prime_denominators() {
        let c = Context::new(2, 30).unwrap();
        let n3 = NilpotentOperator::new(c, Matrix::from_ints(&c, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]])).unwrap();
        let e = nilpotent_exp(&c, &n3.matrix().scale(&c.int(1))).unwrap();
        assert_eq!(e.get(0, 2).reconstruct(), Some(rat(1, 2)));
        assert!(e.det().approx_eq(&c.one()));
    }

    #[test]
    fn conjugation() {
        let c = ctx();
        let n = e12(&c);
        let g = Matrix::identity(&c, 2).add(n.matrix());
        assert!(matches!(conjugation_limit(&n, &g).unwrap(), ConjugationLimit::Converges(m) if m.approx_eq(&g)));
        let d = Matrix::from_ints(&c, &[&[2, 0], &[0, 7]]);
        match conjugation_limit(&n, &d).unwrap() {
            ConjugationLimit::Diverges { power, coefficient } => {
                assert_eq!(power, 1);
                assert!(coefficient.approx_eq(&Matrix::from_ints(&c, &[&[0, 5], &[0, 0]])));
            }
            other => panic!("expected divergence, got {other:?}"),
        }
        let id = Matrix::identity(&c, 2);
        assert!(matches!(conjugation_limit(&n, &id).unwrap(), ConjugationLimit::Converges(_)));
    }
}
