use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::rational::{int, Rational};

/// A descending filtration F^x by subspaces of Q_p^n, stored as steps
/// (jump, subspace) with strictly decreasing jumps and strictly increasing
/// dimensions. F^x is the last step whose jump is ≥ x. The last step is the
/// filtered space itself; it may be a proper subspace of Q_p^n (induced
/// filtrations).
#[derive(Clone, Debug)]
pub struct FilteredSpace {
    p: u32,
    n: usize,
    steps: Vec<(Rational, Subspace)>,
}

impl FilteredSpace {
    pub fn new(p: u32, n: usize, steps: Vec<(Rational, Subspace)>) -> Result<Self> {
        for (k, (j, s)) in steps.iter().enumerate() {
            if s.ambient_dim() != n || s.p() != p {
                return Err(Error::ShapeMismatch(format!("step {k} lives in the wrong ambient space")));
            }
            if s.dim() == 0 {
                return Err(Error::InvalidInput(format!("step {k} is the zero subspace")));
            }
            if k > 0 {
                let (j0, s0) = &steps[k - 1];
                if j0 <= j {
                    return Err(Error::InvalidInput("jumps must strictly decrease".into()));
                }
                if s0.dim() >= s.dim() || !s.contains(s0) {
                    return Err(Error::InvalidInput("steps must strictly increase".into()));
                }
            }
        }
        Ok(Self { p, n, steps })
    }

    /// Builds a filtration from candidate steps given in any order. Steps are
    /// sorted by decreasing jump; a step equal to its predecessor is dropped
    /// (the higher jump is kept) and zero steps are discarded. Each candidate
    /// must contain the candidates of higher jump.
    pub fn from_nested(p: u32, n: usize, mut candidates: Vec<(Rational, Subspace)>) -> Self {
        candidates.sort_by(|a, b| b.0.cmp(&a.0));
        let mut steps: Vec<(Rational, Subspace)> = Vec::new();
        for (j, s) in candidates {
            let prev = steps.last().map_or(0, |(_, t)| t.dim());
            if s.dim() > prev {
                steps.push((j, s));
            }
        }
        Self { p, n, steps }
    }

    /// Everything in degree `jump`.
    pub fn trivial(ctx: &crate::padic::Context, n: usize, jump: Rational) -> Self {
        Self { p: ctx.p, n, steps: vec![(jump, Subspace::full(ctx, n))] }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[(Rational, Subspace)] {
        &self.steps
    }

    pub fn jumps(&self) -> Vec<Rational> {
        self.steps.iter().map(|(j, _)| j.clone()).collect()
    }

    pub fn step_dims(&self) -> Vec<usize> {
        self.steps.iter().map(|(_, s)| s.dim()).collect()
    }

    pub fn total(&self) -> Subspace {
        self.steps.last().map_or_else(|| Subspace::zero(self.p, self.n), |(_, s)| s.clone())
    }

    pub fn rank(&self) -> usize {
        self.steps.last().map_or(0, |(_, s)| s.dim())
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.n
    }

    /// F^x.
    pub fn at(&self, x: &Rational) -> Subspace {
        self.steps
            .iter()
            .rev()
            .find(|(j, _)| j >= x)
            .map_or_else(|| Subspace::zero(self.p, self.n), |(_, s)| s.clone())
    }

    /// (jump, dim gr^jump) for each jump.
    pub fn gr_dims(&self) -> Vec<(Rational, usize)> {
        let mut prev = 0;
        self.steps
            .iter()
            .map(|(j, s)| {
                let d = s.dim() - prev;
                prev = s.dim();
                (j.clone(), d)
            })
            .collect()
    }

    /// deg = Σ_x x · dim gr^x.
    pub fn degree(&self) -> Rational {
        self.gr_dims().iter().map(|(j, d)| j * int(*d as i64)).sum()
    }

    /// μ = deg / rank, `None` for the zero space.
    pub fn slope(&self) -> Option<Rational> {
        let r = self.rank();
        (r > 0).then(|| self.degree() / int(r as i64))
    }

    /// F^x ∩ W, with repeated subspaces collapsed onto the higher jump.
    pub fn induced(&self, w: &Subspace) -> Result<Self> {
        if w.ambient_dim() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "subspace of Q_p^{} in a filtration of Q_p^{}",
                w.ambient_dim(),
                self.n
            )));
        }
        if !self.total().contains(w) {
            return Err(Error::InvalidInput("subspace is not contained in the filtered space".into()));
        }
        let cands = self.steps.iter().map(|(j, s)| (j.clone(), s.intersection(w))).collect();
        Ok(Self::from_nested(self.p, self.n, cands))
    }

    /// Same jumps, subspaces transported by an invertible matrix.
    pub fn transport(&self, g: &Matrix) -> Self {
        Self {
            p: self.p,
            n: self.n,
            steps: self.steps.iter().map(|(j, s)| (j.clone(), s.image(g))).collect(),
        }
    }

    /// Equal jumps and equal subspaces.
    pub fn same_as(&self, other: &Self) -> bool {
        self.n == other.n
            && self.steps.len() == other.steps.len()
            && self.steps.iter().zip(&other.steps).all(|((a, s), (b, t))| a == b && s.same_as(t))
    }

    /// Shifts every jump by c.
    pub fn shifted(&self, c: &Rational) -> Self {
        Self { p: self.p, n: self.n, steps: self.steps.iter().map(|(j, s)| (j + c, s.clone())).collect() }
    }
}

/// (deg, μ) of a filtered space.
pub fn degree_and_slope(v: &FilteredSpace) -> (Rational, Rational) {
    (v.degree(), v.slope().unwrap_or_else(Rational::zero))
}

fn require_full(v: &FilteredSpace) -> Result<()> {
    if !v.is_full() {
        return Err(Error::InvalidInput("construction needs a filtration of the whole space".into()));
    }
    Ok(())
}

/// Dual filtration: (F^*)^{−j} is the annihilator of the step above j.
pub fn dual(v: &FilteredSpace) -> Result<FilteredSpace> {
    require_full(v)?;
    let mut steps = Vec::with_capacity(v.steps.len());
    for k in (0..v.steps.len()).rev() {
        let above = if k == 0 { Subspace::zero(v.p, v.n) } else { v.steps[k - 1].1.clone() };
        let ann = if above.is_zero() {
            v.steps.last().unwrap().1.clone()
        } else {
            above.annihilator()
        };
        steps.push((-v.steps[k].0.clone(), ann));
    }
    FilteredSpace::new(v.p, v.n, steps)
}

/// Tensor filtration F^x(V ⊗ W) = Σ_{a+b ≥ x} F^a V ⊗ F^b W on Q_p^{n·m}.
pub fn tensor(v: &FilteredSpace, w: &FilteredSpace) -> Result<FilteredSpace> {
    if v.p != w.p {
        return Err(Error::PrimeMismatch(v.p, w.p));
    }
    require_full(v)?;
    require_full(w)?;
    let n = v.n * w.n;
    let mut sums: Vec<Rational> =
        v.steps.iter().flat_map(|(a, _)| w.steps.iter().map(move |(b, _)| a + b)).collect();
    sums.sort();
    sums.dedup();
    let cands = sums
        .into_iter()
        .map(|x| {
            let mut acc = Subspace::zero(v.p, n);
            for (a, s) in &v.steps {
                for (b, t) in &w.steps {
                    if a + b >= x {
                        acc = acc.sum(&Subspace::span(&s.basis().kron(t.basis())));
                    }
                }
            }
            (x, acc)
        })
        .collect();
    Ok(FilteredSpace::from_nested(v.p, n, cands))
}

/// Block direct sum on Q_p^{n+m}.
pub fn direct_sum(v: &FilteredSpace, w: &FilteredSpace) -> Result<FilteredSpace> {
    if v.p != w.p {
        return Err(Error::PrimeMismatch(v.p, w.p));
    }
    let n = v.n + w.n;
    let embed = |s: &Subspace, offset: usize| {
        let cols: Vec<Vec<_>> = s
            .vectors()
            .into_iter()
            .map(|c| {
                let mut out = vec![crate::padic::Padic::zero(v.p); n];
                for (i, x) in c.into_iter().enumerate() {
                    out[offset + i] = x;
                }
                out
            })
            .collect();
        Subspace::span_of(v.p, n, &cols)
    };
    let mut jumps: Vec<Rational> = v.jumps().into_iter().chain(w.jumps()).collect();
    jumps.sort();
    jumps.dedup();
    let cands = jumps
        .into_iter()
        .map(|x| {
            let s = embed(&v.at(&x), 0).sum(&embed(&w.at(&x), v.n));
            (x, s)
        })
        .collect();
    Ok(FilteredSpace::from_nested(v.p, n, cands))
}

/// <F1, F2> = Σ_{x,y} x·y·dim gr^x_{F1} gr^y_{F2}, with the graded
/// dimensions obtained from intersection dimensions by inclusion–exclusion.
pub fn filtration_pairing(f1: &FilteredSpace, f2: &FilteredSpace) -> Result<Rational> {
    if f1.n != f2.n {
        return Err(Error::DimensionMismatch(format!("ambient dimensions {} and {}", f1.n, f2.n)));
    }
    let a = &f1.steps;
    let b = &f2.steps;
    // d[i][j] = dim(A_{i-1} ∩ B_{j-1}), index 0 meaning the zero space
    let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 0..a.len() {
        for j in 0..b.len() {
            let (s, t) = (&a[i].1, &b[j].1);
            d[i + 1][j + 1] = s.dim() + t.dim() - s.sum(t).dim();
        }
    }
    let mut total = Rational::zero();
    for i in 0..a.len() {
        for j in 0..b.len() {
            let g = d[i + 1][j + 1] as i64 - d[i][j + 1] as i64 - d[i + 1][j] as i64 + d[i][j] as i64;
            if g != 0 {
                total += &a[i].0 * &b[j].0 * int(g);
            }
        }
    }
    Ok(total)
}
