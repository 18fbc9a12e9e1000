use super::NilpotentOperator;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::padic::{Context, Padic};

/// (X−, H, X+) with [H, X±] = ±2X± and [X+, X−] = H.
#[derive(Clone, Debug)]
pub struct Sl2Triple {
    pub x_minus: Matrix,
    pub h: Matrix,
    pub x_plus: Matrix,
    /// Jordan block sizes, largest first.
    pub blocks: Vec<usize>,
    /// Columns u_0, ..., u_{m−1} of each chain with N u_j = u_{j+1}.
    pub chain_basis: Matrix,
    /// H-eigenvalue of each chain-basis column.
    pub weights: Vec<i64>,
}

impl Sl2Triple {
    pub fn brackets_hold(&self) -> bool {
        let two = |m: &Matrix| m.add(m);
        self.h.bracket(&self.x_plus).approx_eq(&two(&self.x_plus))
            && self.h.bracket(&self.x_minus).approx_eq(&two(&self.x_minus).neg())
            && self.x_plus.bracket(&self.x_minus).approx_eq(&self.h)
    }
}

/// Jordan chains v, Nv, ..., N^{m−1}v, longest first.
fn jordan_chains(op: &NilpotentOperator) -> Vec<Vec<Vec<Padic>>> {
    let ctx = op.ctx();
    let n = op.dim();
    let k = op.nilpotency_index();
    let mut kers = vec![Subspace::zero(ctx.p, n)];
    let mut power = Matrix::identity(ctx, n);
    for _ in 1..=k {
        power = power.mul(op.matrix());
        kers.push(Subspace::span(&power.kernel()));
    }
    let mut chains: Vec<Vec<Vec<Padic>>> = Vec::new();
    for m in (1..=k).rev() {
        let mut covered = kers[m - 1].clone();
        for c in &chains {
            // c has length > m; its element at height m
            covered = covered.sum(&Subspace::span_of(ctx.p, n, &[c[c.len() - m].clone()]));
        }
        for b in kers[m].canonical_basis().columns() {
            if covered.contains_vector(&b) {
                continue;
            }
            covered = covered.sum(&Subspace::span_of(ctx.p, n, &[b.clone()]));
            let mut chain = vec![b];
            for _ in 1..m {
                let next = op.matrix().mul_vec(chain.last().unwrap());
                chain.push(next);
            }
            chains.push(chain);
        }
    }
    chains
}

/// Completes N to an sl2-triple through its Jordan chains: on a chain of
/// length m, H u_j = (m−1−2j) u_j and X+ u_j = j(m−j) u_{j−1}.
pub fn jacobson_morozov(op: &NilpotentOperator) -> Result<Sl2Triple> {
    if op.is_zero() {
        return Err(Error::ZeroNilpotent);
    }
    let ctx = op.ctx();
    let n = op.dim();
    let chains = jordan_chains(op);
    let columns: Vec<Vec<Padic>> = chains.iter().flatten().cloned().collect();
    if columns.len() != n {
        return Err(Error::PrecisionExhausted("Jordan chains do not span the space".into()));
    }
    let basis = Matrix::from_columns(ctx.p, n, &columns);
    let mut hc = Matrix::zeros(ctx.p, n, n);
    let mut xc = Matrix::zeros(ctx.p, n, n);
    let mut weights = Vec::with_capacity(n);
    let mut offset = 0;
    for c in &chains {
        let m = c.len() as i64;
        for j in 0..m {
            let w = m - 1 - 2 * j;
            let col = offset + j as usize;
            hc.set(col, col, ctx.int(w));
            weights.push(w);
            if j > 0 {
                xc.set(col - 1, col, ctx.int(j * (m - j)));
            }
        }
        offset += c.len();
    }
    let inv = basis.inverse()?;
    let conj = |m: &Matrix| basis.mul(m).mul(&inv);
    Ok(Sl2Triple {
        x_minus: op.matrix().clone(),
        h: conj(&hc),
        x_plus: conj(&xc),
        blocks: chains.iter().map(Vec::len).collect(),
        chain_basis: basis,
        weights,
    })
}

/// An increasing filtration M_i, stored at the indices where it grows; the
/// last step is the whole space.
#[derive(Clone, Debug)]
pub struct WeightFiltration {
    p: u32,
    n: usize,
    steps: Vec<(i64, Subspace)>,
}

impl WeightFiltration {
    pub fn new(p: u32, n: usize, steps: Vec<(i64, Subspace)>) -> Result<Self> {
        for (k, (i, s)) in steps.iter().enumerate() {
            if s.ambient_dim() != n {
                return Err(Error::ShapeMismatch(format!("step {k} lives in the wrong ambient space")));
            }
            if k > 0 {
                let (i0, s0) = &steps[k - 1];
                if i0 >= i || s0.dim() >= s.dim() || !s.contains(s0) {
                    return Err(Error::InvalidInput("weight filtration must strictly increase".into()));
                }
            } else if s.is_zero() {
                return Err(Error::InvalidInput("zero first step".into()));
            }
        }
        if steps.last().map_or(0, |(_, s)| s.dim()) != n {
            return Err(Error::InvalidInput("last step must be the whole space".into()));
        }
        Ok(Self { p, n, steps })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[(i64, Subspace)] {
        &self.steps
    }

    pub fn jumps(&self) -> Vec<i64> {
        self.steps.iter().map(|(i, _)| *i).collect()
    }

    pub fn at(&self, i: i64) -> Subspace {
        self.steps
            .iter()
            .rev()
            .find(|(j, _)| *j <= i)
            .map_or_else(|| Subspace::zero(self.p, self.n), |(_, s)| s.clone())
    }

    pub fn gr_dim(&self, i: i64) -> usize {
        self.at(i).dim() - self.at(i - 1).dim()
    }
}

/// M_i = span of the H-eigenvectors of weight ≤ i (everything in M_0 when
/// N = 0).
pub fn monodromy_weight_filtration(op: &NilpotentOperator) -> Result<WeightFiltration> {
    let ctx: &Context = op.ctx();
    let n = op.dim();
    if op.is_zero() {
        return WeightFiltration::new(ctx.p, n, vec![(0, Subspace::full(ctx, n))]);
    }
    let t = jacobson_morozov(op)?;
    let mut ws = t.weights.clone();
    ws.sort_unstable();
    ws.dedup();
    let steps = ws
        .into_iter()
        .map(|i| {
            let idx: Vec<usize> = (0..n).filter(|&c| t.weights[c] <= i).collect();
            (i, Subspace::span(&t.chain_basis.select_columns(&idx)))
        })
        .collect();
    let w = WeightFiltration::new(ctx.p, n, steps)?;
    if !weight_axioms_hold(op, &w) {
        return Err(Error::PrecisionExhausted("weight filtration axioms fail within precision".into()));
    }
    Ok(w)
}

/// N·M_i ⊆ M_{i−2}, and N^k induces isomorphisms gr_k → gr_{−k}.
pub fn weight_axioms_hold(op: &NilpotentOperator, w: &WeightFiltration) -> bool {
    let n = op.matrix();
    let lo = w.steps.first().map_or(0, |(i, _)| *i);
    let hi = w.steps.last().map_or(0, |(i, _)| *i);
    for i in lo..=hi + 2 {
        if !w.at(i - 2).contains(&w.at(i).image(n)) {
            return false;
        }
    }
    let ctx = op.ctx();
    let mut power = Matrix::identity(ctx, op.dim());
    let top = lo.abs().max(hi.abs());
    for k in 1..=top {
        power = power.mul(n);
        let below = w.at(-k - 1);
        let full = w.at(k).image(&power).sum(&below).dim();
        let part = w.at(k - 1).image(&power).sum(&below).dim();
        let g = w.gr_dim(k);
        if full - part != g || g != w.gr_dim(-k) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::new(3, 30).unwrap()
    }

    fn op(c: &Context, rows: &[&[i64]]) -> NilpotentOperator {
        NilpotentOperator::new(*c, Matrix::from_ints(c, rows)).unwrap()
    }

    #[test]
    fn standard_triple() {
        let c = ctx();
        let t = jacobson_morozov(&op(&c, &[&[0, 1], &[0, 0]])).unwrap();
        assert!(t.brackets_hold());
        // e2 is the top of the chain
        assert!(t.h.approx_eq(&Matrix::from_ints(&c, &[&[-1, 0], &[0, 1]])));
        assert!(t.x_plus.approx_eq(&Matrix::from_ints(&c, &[&[0, 0], &[1, 0]])));
        assert_eq!(t.weights, vec![1, -1]);
    }

    #[test]
    fn block_of_three() {
        let c = ctx();
        let n = op(&c, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let t = jacobson_morozov(&n).unwrap();
        assert!(t.brackets_hold());
        assert_eq!(t.weights, vec![2, 0, -2]);
        assert!(t.h.approx_eq(&Matrix::from_ints(&c, &[&[-2, 0, 0], &[0, 0, 0], &[0, 0, 2]])));
        assert!(t.x_plus.approx_eq(&Matrix::from_ints(&c, &[&[0, 0, 0], &[2, 0, 0], &[0, 2, 0]])));
        let w = monodromy_weight_filtration(&n).unwrap();
        assert_eq!(w.jumps(), vec![-2, 0, 2]);
        assert!(w.at(-2).same_as(&Subspace::coordinate(&c, 3, &[0])));
    }

    #[test]
    fn conjugated_input() {
        let c = ctx();
        let g = Matrix::from_ints(&c, &[&[1, 2, 0], &[0, 1, 1], &[1, 0, 1]]);
        let base = Matrix::from_ints(&c, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let n = NilpotentOperator::new(c, g.mul(&base).mul(&g.inverse().unwrap())).unwrap();
        let t = jacobson_morozov(&n).unwrap();
        assert!(t.brackets_hold());
        assert_eq!(t.weights, vec![2, 0, -2]);
    }

    #[test]
    fn mixed_blocks() {
        let c = ctx();
        // blocks of sizes 2 and 1, hidden by a change of basis
        let n = op(&c, &[&[0, 1, 1], &[0, 0, 0], &[0, 0, 0]]);
        let t = jacobson_morozov(&n).unwrap();
        assert_eq!(t.blocks, vec![2, 1]);
        assert!(t.brackets_hold());
        let w = monodromy_weight_filtration(&n).unwrap();
        assert_eq!(w.jumps(), vec![-1, 0, 1]);
        assert!(weight_axioms_hold(&n, &w));
    }

    #[test]
    fn weight_filtrations() {
        let c = ctx();
        let w = monodromy_weight_filtration(&op(&c, &[&[0, 1], &[0, 0]])).unwrap();
        assert_eq!(w.jumps(), vec![-1, 1]);
        assert!(w.at(-1).same_as(&Subspace::coordinate(&c, 2, &[0])));
        let z = monodromy_weight_filtration(&NilpotentOperator::zero(c, 3)).unwrap();
        assert_eq!(z.jumps(), vec![0]);
        assert!(matches!(jacobson_morozov(&NilpotentOperator::zero(c, 2)), Err(Error::ZeroNilpotent)));
        // a wrong filtration fails the axioms
        let n = op(&c, &[&[0, 1], &[0, 0]]);
        let bad = WeightFiltration::new(c.p, 2, vec![(-1, Subspace::coordinate(&c, 2, &[1])), (1, Subspace::full(&c, 2))]).unwrap();
        assert!(!weight_axioms_hold(&n, &bad));
    }
}
