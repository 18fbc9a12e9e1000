use std::collections::BTreeMap;

use super::space::FilteredSpace;
use crate::error::{Error, Result};
use crate::linalg::{limit_span, LaurentVector, Matrix, Subspace};
use crate::padic::Padic;
use crate::rational::{int, Rational};

/// t ↦ P·diag(t^{ρ_1}, ..., t^{ρ_n})·P^{-1}, where the columns of the frame P
/// are the weight vectors.
#[derive(Clone, Debug)]
pub struct OneParamSubgroup {
    weights: Vec<i64>,
    frame: Matrix,
    frame_inv: Matrix,
}

impl OneParamSubgroup {
    pub fn new(weights: Vec<i64>, frame: Matrix) -> Result<Self> {
        if !frame.is_square() || frame.rows() != weights.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} weights for a {}x{} frame",
                weights.len(),
                frame.rows(),
                frame.cols()
            )));
        }
        let frame_inv = frame.inverse()?;
        Ok(Self { weights, frame, frame_inv })
    }

    /// Weights on the standard basis.
    pub fn standard(ctx: &crate::padic::Context, weights: Vec<i64>) -> Self {
        let n = weights.len();
        Self::new(weights, Matrix::identity(ctx, n)).expect("identity frame")
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn frame(&self) -> &Matrix {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// t ↦ λ(t)⁻¹: same frame, negated weights.
    pub fn inverse(&self) -> Self {
        Self { weights: self.weights.iter().map(|w| -w).collect(), frame: self.frame.clone(), frame_inv: self.frame_inv.clone() }
    }

    /// ρ̄ = Σρ_i / n, the scalar twist that makes the weights sum to zero.
    pub fn mean_weight(&self) -> Rational {
        int(self.weights.iter().sum()) / int(self.weights.len().max(1) as i64)
    }

    /// Sum of the frame columns of weight exactly w.
    fn weight_space(&self, pred: impl Fn(i64) -> bool) -> Subspace {
        let idx: Vec<usize> = (0..self.dim()).filter(|&i| pred(self.weights[i])).collect();
        Subspace::span(&self.frame.select_columns(&idx))
    }

    /// λ(t)·v as a Laurent vector in t.
    fn orbit_of(&self, v: &[Padic]) -> LaurentVector {
        let c = self.frame_inv.mul_vec(v);
        let n = self.dim();
        let p = self.frame.p();
        let mut terms: BTreeMap<i64, Vec<Padic>> = BTreeMap::new();
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let entry = terms.entry(self.weights[i]).or_insert_with(|| vec![Padic::zero(p); n]);
            for (r, e) in entry.iter_mut().enumerate() {
                *e = &*e + &(ci * self.frame.get(r, i));
            }
        }
        LaurentVector::new(terms)
    }
}

/// F_λ^x = ⊕_{y ≥ x} V_y, V_y the weight-y span of the frame.
pub fn filtration_from_1ps(lambda: &OneParamSubgroup) -> FilteredSpace {
    let mut ws = lambda.weights.clone();
    ws.sort_unstable_by(|a, b| b.cmp(a));
    ws.dedup();
    let steps = ws.into_iter().map(|x| (int(x), lambda.weight_space(|y| y >= x))).collect();
    FilteredSpace::from_nested(lambda.frame.p(), lambda.dim(), steps)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    ToZero,
    ToInfinity,
}

/// lim λ(t)·F, step by step, as t → 0 (or ∞).
pub fn ps_limit(lambda: &OneParamSubgroup, f: &FilteredSpace, direction: Direction) -> Result<FilteredSpace> {
    if f.ambient_dim() != lambda.dim() {
        return Err(Error::DimensionMismatch(format!(
            "1-PS on Q_p^{} acting on a filtration of Q_p^{}",
            lambda.dim(),
            f.ambient_dim()
        )));
    }
    let to_inf = direction == Direction::ToInfinity;
    let mut steps = Vec::with_capacity(f.steps().len());
    for (j, s) in f.steps() {
        let orbit: Vec<LaurentVector> = s.vectors().iter().map(|v| lambda.orbit_of(v)).collect();
        let lim = limit_span(f.p(), f.ambient_dim(), orbit, to_inf)?;
        if lim.dim() != s.dim() {
            return Err(Error::RankDeficient("limit has lower dimension than the step".into()));
        }
        steps.push((j.clone(), lim));
    }
    FilteredSpace::new(f.p(), f.ambient_dim(), steps)
}

/// Whether every step of F is a sum of weight spaces of λ.
pub fn is_fixed_by(lambda: &OneParamSubgroup, f: &FilteredSpace) -> bool {
    let mut ws = lambda.weights.clone();
    ws.sort_unstable();
    ws.dedup();
    f.steps().iter().all(|(_, s)| {
        let split = ws
            .iter()
            .map(|&w| s.intersection(&lambda.weight_space(|y| y == w)).dim())
            .sum::<usize>();
        split == s.dim()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::filtration_pairing;
    use crate::padic::Context;
    use crate::rational::rat;

    fn ctx() -> Context {
        Context::new(3, 30).unwrap()
    }

    #[test]
    fn filtrations_of_weights() {
        let c = ctx();
        let f = filtration_from_1ps(&OneParamSubgroup::standard(&c, vec![1, 0]));
        assert_eq!(f.jumps(), vec![rat(1, 1), rat(0, 1)]);
        assert!(f.at(&rat(1, 1)).same_as(&Subspace::coordinate(&c, 2, &[0])));
        let t = filtration_from_1ps(&OneParamSubgroup::standard(&c, vec![0, 0]));
        assert_eq!(t.jumps(), vec![rat(0, 1)]);
        let g = filtration_from_1ps(&OneParamSubgroup::standard(&c, vec![2, 2, -1]));
        assert_eq!(g.jumps(), vec![rat(2, 1), rat(-1, 1)]);
        assert!(g.at(&rat(2, 1)).same_as(&Subspace::coordinate(&c, 3, &[0, 1])));
    }

    #[test]
    fn limit_of_a_line() {
        let c = ctx();
        let lambda = OneParamSubgroup::standard(&c, vec![0, 1]);
        let w = Subspace::span(&Matrix::from_ints(&c, &[&[1], &[1]]));
        let f = FilteredSpace::new(c.p, 2, vec![(rat(1, 1), w), (rat(0, 1), Subspace::full(&c, 2))]).unwrap();
        let lim = ps_limit(&lambda, &f, Direction::ToZero).unwrap();
        assert!(lim.at(&rat(1, 1)).same_as(&Subspace::coordinate(&c, 2, &[0])));
        let up = ps_limit(&lambda, &f, Direction::ToInfinity).unwrap();
        assert!(up.at(&rat(1, 1)).same_as(&Subspace::coordinate(&c, 2, &[1])));
        assert!(is_fixed_by(&lambda, &lim));
        assert!(ps_limit(&lambda, &lim, Direction::ToZero).unwrap().same_as(&lim));
        let fl = filtration_from_1ps(&lambda);
        assert_eq!(filtration_pairing(&lim, &fl).unwrap(), filtration_pairing(&f, &fl).unwrap());
        assert_eq!(filtration_pairing(&f, &fl).unwrap(), rat(0, 1));
    }

    #[test]
    fn frame_change() {
        let c = ctx();
        let frame = Matrix::from_ints(&c, &[&[1, 1], &[0, 1]]);
        let lambda = OneParamSubgroup::new(vec![3, -1], frame).unwrap();
        let f = filtration_from_1ps(&lambda);
        assert!(is_fixed_by(&lambda, &f));
        assert!(ps_limit(&lambda, &f, Direction::ToZero).unwrap().same_as(&f));
        assert!(OneParamSubgroup::new(vec![1, 0], Matrix::from_ints(&c, &[&[1, 2], &[2, 4]])).is_err());
    }
}
