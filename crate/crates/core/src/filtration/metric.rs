use std::cmp::Ordering;
use std::fmt;

use super::space::FilteredSpace;
use crate::error::{Error, Result};
use crate::linalg::Subspace;
use crate::padic::Padic;

/// A value of the flag metric: 0 or p^{−k} with k ≥ 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlagDistance {
    Zero,
    PowerOfP { p: u32, k: i64 },
}

impl FlagDistance {
    pub fn as_f64(&self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::PowerOfP { p, k } => (*p as f64).powi(-(*k as i32)),
        }
    }
}

impl Ord for FlagDistance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Zero, Self::Zero) => Ordering::Equal,
            (Self::Zero, _) => Ordering::Less,
            (_, Self::Zero) => Ordering::Greater,
            (Self::PowerOfP { k: a, .. }, Self::PowerOfP { k: b, .. }) => b.cmp(a),
        }
    }
}

impl PartialOrd for FlagDistance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FlagDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "0"),
            Self::PowerOfP { k: 0, .. } => write!(f, "1"),
            Self::PowerOfP { k, .. } => write!(f, "p^-{k}"),
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Plücker coordinates scaled so that the largest has absolute value 1.
fn normalized_plucker(s: &Subspace) -> Vec<Padic> {
    let b = s.basis().transpose();
    let coords: Vec<Padic> = subsets(s.ambient_dim(), s.dim())
        .iter()
        .map(|idx| b.select_columns(idx).det())
        .collect();
    let pivot = coords
        .iter()
        .filter(|c| !c.is_zero())
        .min_by_key(|c| c.valuation().unwrap())
        .expect("independent basis has a nonzero minor")
        .clone();
    coords.iter().map(|c| c.checked_div(&pivot).expect("nonzero pivot")).collect()
}

/// Largest k with |p_I q_J − p_J q_I| ≤ p^{−k} for all I, J; `None` when
/// all cross terms vanish.
fn step_distance(a: &Subspace, b: &Subspace) -> Option<i64> {
    let pa = normalized_plucker(a);
    let pb = normalized_plucker(b);
    let mut best: Option<i64> = None;
    for i in 0..pa.len() {
        for j in i + 1..pa.len() {
            let x = &(&pa[i] * &pb[j]) - &(&pa[j] * &pb[i]);
            if let Some(v) = x.valuation() {
                best = Some(best.map_or(v, |b: i64| b.min(v)));
            }
        }
    }
    best
}

/// max over steps of the Plücker cross-ratio distance of the two subspaces.
pub fn flag_distance(f1: &FilteredSpace, f2: &FilteredSpace) -> Result<FlagDistance> {
    if f1.ambient_dim() != f2.ambient_dim() || f1.jumps() != f2.jumps() || f1.step_dims() != f2.step_dims() {
        return Err(Error::ShapeMismatch("flags differ in jumps or step dimensions".into()));
    }
    if f1.p() != f2.p() {
        return Err(Error::PrimeMismatch(f1.p(), f2.p()));
    }
    let mut d = FlagDistance::Zero;
    for ((_, a), (_, b)) in f1.steps().iter().zip(f2.steps()) {
        if let Some(k) = step_distance(a, b) {
            d = d.max(FlagDistance::PowerOfP { p: f1.p(), k: k.max(0) });
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::padic::Context;
    use crate::rational::rat;

    fn line(c: &Context, v: &[i64]) -> FilteredSpace {
        let rows: Vec<&[i64]> = v.iter().map(std::slice::from_ref).collect();
        let s = Subspace::span(&Matrix::from_ints(c, &rows));
        FilteredSpace::new(c.p, v.len(), vec![(rat(1, 1), s), (rat(0, 1), Subspace::full(c, v.len()))]).unwrap()
    }

    #[test]
    fn examples() {
        let c = Context::new(5, 30).unwrap();
        let a = line(&c, &[1, 0]);
        assert_eq!(flag_distance(&a, &a).unwrap(), FlagDistance::Zero);
        assert_eq!(flag_distance(&a, &a).unwrap().to_string(), "0");
        let d = flag_distance(&a, &line(&c, &[1, 5])).unwrap();
        assert_eq!(d, FlagDistance::PowerOfP { p: 5, k: 1 });
        assert!((d.as_f64() - 0.2).abs() < 1e-12);
        let d = flag_distance(&a, &line(&c, &[0, 1])).unwrap();
        assert_eq!(d.to_string(), "1");
        // scaling the basis does not matter
        assert_eq!(flag_distance(&line(&c, &[5, 25]), &line(&c, &[1, 5])).unwrap(), FlagDistance::Zero);
        let t = FilteredSpace::trivial(&c, 2, rat(0, 1));
        assert!(flag_distance(&a, &t).is_err());
    }
}
