use rayon::prelude::*;

use super::check::nilpotent_orbit_check;
use super::{orbit_eval, Compatibility, NilpotentOperator};
use crate::error::{Error, Result};
use crate::filtration::{is_semistable, FilteredSpace};
use crate::isocrystal::Isocrystal;
use crate::linalg::{Matrix, Subspace};
use crate::padic::Padic;
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Entries of N range over this set; flag frames use it together with
    /// 0 and 1, so coordinate flags are always included.
    pub pool: Vec<Rational>,
    /// Maximal number of (N, F_0) candidates examined.
    pub budget: usize,
}

/// A pair (N, F_0) whose orbit limit is semistable.
#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub n: Matrix,
    pub f0: FilteredSpace,
    pub compatibility: Compatibility,
    pub limit: FilteredSpace,
    pub semistable: bool,
    pub complete: bool,
}

fn all_matrices(e: &Isocrystal, pool: &[Padic]) -> Vec<Matrix> {
    let n = e.dim();
    let total = pool.len().pow((n * n) as u32);
    (0..total)
        .map(|mut code| {
            let mut m = Matrix::zeros(e.p(), n, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, pool[code % pool.len()].clone());
                    code /= pool.len();
                }
            }
            m
        })
        .collect()
}

/// Cumulative step dimensions for a jump multiset, highest jump first.
fn step_layout(jumps: &[Rational]) -> Vec<(Rational, usize)> {
    let mut js = jumps.to_vec();
    js.sort_by(|a, b| b.cmp(a));
    let mut out: Vec<(Rational, usize)> = Vec::new();
    for (k, j) in js.iter().enumerate() {
        match out.last_mut() {
            Some((x, d)) if x == j => *d = k + 1,
            _ => out.push((j.clone(), k + 1)),
        }
    }
    out
}

/// Exhausts nilpotent N with NΦ = p^r ΦN and flags F_0 with the given jumps,
/// both with coefficients in the pool, and keeps the pairs whose orbit limit
/// is semistable. Each kept pair is checked a second time from scratch.
pub fn orbit_search(e: &Isocrystal, jumps: &[Rational], cfg: &SearchConfig) -> Result<Vec<OrbitRecord>> {
    let n = e.dim();
    if jumps.len() != n {
        return Err(Error::DimensionMismatch(format!("{} jumps for dimension {n}", jumps.len())));
    }
    if cfg.pool.is_empty() {
        return Err(Error::InvalidInput("empty coefficient pool".into()));
    }
    let raw = (cfg.pool.len() + 2).checked_pow((n * n) as u32).unwrap_or(usize::MAX);
    if raw > cfg.budget {
        return Err(Error::BudgetExceeded(raw));
    }
    let ctx = *e.ctx();
    let pool: Vec<Padic> = cfg.pool.iter().map(|q| ctx.rational(q)).collect();
    let candidates = all_matrices(e, &pool);
    let mut frame_pool = pool.clone();
    for x in [ctx.zero(), ctx.one()] {
        if !frame_pool.iter().any(|y| y.approx_eq(&x)) {
            frame_pool.push(x);
        }
    }
    let frames = if frame_pool.len() == pool.len() { candidates.clone() } else { all_matrices(e, &frame_pool) };
    if frames.len().saturating_add(candidates.len()) > cfg.budget {
        return Err(Error::BudgetExceeded(frames.len() + candidates.len()));
    }

    let ops: Vec<NilpotentOperator> = candidates
        .iter()
        .filter_map(|m| NilpotentOperator::new(ctx, m.clone()).ok())
        .filter(|op| super::phi_n_compat(op, e).map_or(false, |c| c.holds()))
        .collect();

    let layout = step_layout(jumps);
    let mut flags: Vec<FilteredSpace> = Vec::new();
    for frame in &frames {
        if frame.det().is_zero() {
            continue;
        }
        let steps = layout
            .iter()
            .map(|(j, d)| (j.clone(), Subspace::span(&frame.select_columns(&(0..*d).collect::<Vec<_>>()))))
            .collect();
        let f = FilteredSpace::new(ctx.p, n, steps)?;
        if !flags.iter().any(|g| g.same_as(&f)) {
            flags.push(f);
        }
    }

    let pairs: Vec<(&NilpotentOperator, &FilteredSpace)> = ops.iter().flat_map(|o| flags.iter().map(move |f| (o, f))).collect();
    if pairs.len() > cfg.budget {
        return Err(Error::BudgetExceeded(pairs.len()));
    }
    let found: Vec<Option<OrbitRecord>> = pairs
        .par_iter()
        .map(|(op, f0)| -> Result<Option<OrbitRecord>> {
            let v = nilpotent_orbit_check(op, e, f0)?;
            if !v.holds {
                return Ok(None);
            }
            let fixed = orbit_eval(&[(*op).clone()], &[ctx.one()], &v.limit)?.same_as(&v.limit);
            let again = is_semistable(e, &v.limit)?.semistable;
            if !(fixed && again) {
                return Err(Error::PrecisionExhausted("search record failed re-verification".into()));
            }
            Ok(Some(OrbitRecord {
                n: op.matrix().clone(),
                f0: (*f0).clone(),
                compatibility: v.compatibility,
                limit: v.limit,
                semistable: true,
                complete: v.semistability.complete,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Context;
    use crate::rational::rat;

    #[test]
    fn zero_pool_keeps_constant_orbits() {
        let c = Context::new(5, 30).unwrap();
        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(5, 1)]).unwrap();
        let cfg = SearchConfig { pool: vec![rat(0, 1)], budget: 10_000 };
        let out = orbit_search(&e, &[rat(0, 1), rat(0, 1)], &cfg).unwrap();
        assert_eq!(out.len(), 1);
        assert!(out[0].n.is_zero());
    }

    #[test]
    fn small_pool() {
        let c = Context::new(5, 30).unwrap();
        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(5, 1)]).unwrap();
        let cfg = SearchConfig { pool: vec![rat(0, 1), rat(1, 1)], budget: 10_000 };
        let out = orbit_search(&e, &[rat(0, 1), rat(0, 1)], &cfg).unwrap();
        // only the trivial flag, with N = 0 and N = e12
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|r| r.semistable));
        let tight = SearchConfig { pool: vec![rat(0, 1), rat(1, 1)], budget: 5 };
        assert!(matches!(orbit_search(&e, &[rat(0, 1), rat(1, 1)], &tight), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn layout() {
        assert_eq!(step_layout(&[rat(0, 1), rat(1, 1), rat(0, 1)]), vec![(rat(1, 1), 1), (rat(0, 1), 3)]);
    }
}
