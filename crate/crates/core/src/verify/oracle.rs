//! Reference computations that avoid the code paths they are used to check.

use crate::filtration::FilteredSpace;
use crate::isocrystal::NewtonVector;
use crate::linalg::{Matrix, Subspace};
use crate::rational::{int, val_rat, Rational};

/// Newton vector of a diagonalizable Φ read directly off its eigenvalues.
pub fn eigenvalue_newton(eigenvalues: &[Rational], p: u32) -> NewtonVector {
    let vals: Vec<Rational> = eigenvalues.iter().map(|q| int(val_rat(q, p).expect("nonzero eigenvalue"))).collect();
    NewtonVector::from_slopes(&vals)
}

/// deg(F|_W) = Σ_k j_k·(dim(F_k ∩ W) − dim(F_{k−1} ∩ W)).
pub fn induced_degree(f: &FilteredSpace, w: &Subspace) -> Rational {
    let mut prev = 0usize;
    let mut deg = int(0);
    for (j, s) in f.steps() {
        let d = s.intersection(w).dim();
        deg += j * int((d - prev) as i64);
        prev = d;
    }
    deg
}

/// Spans of all subsets of the frame columns, including 0 and V.
pub fn frame_subobjects(frame: &Matrix) -> Vec<Subspace> {
    let n = frame.cols();
    (0u32..1 << n)
        .map(|mask| {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            Subspace::span(&frame.select_columns(&idx))
        })
        .collect()
}

/// Every chain 0 ⊊ V_1 ⊊ ... ⊊ V_k = V drawn from `subs` (which must
/// contain 0 and V) whose graded slopes strictly decrease and whose graded
/// pieces are semistable with respect to the members of `subs` between
/// consecutive steps. Each chain is listed with its graded slopes.
pub fn exhaustive_hn(f: &FilteredSpace, subs: &[Subspace]) -> Vec<Vec<(Subspace, Rational)>> {
    let n = f.ambient_dim();
    let degs: Vec<Rational> = subs.iter().map(|w| induced_degree(f, w)).collect();
    let zero = subs.iter().position(|s| s.is_zero()).expect("0 among the subobjects");
    let below = |a: usize, b: usize| a != b && subs[b].contains(&subs[a]) && subs[b].dim() > subs[a].dim();
    let slope = |lo: usize, hi: usize| (&degs[hi] - &degs[lo]) / int((subs[hi].dim() - subs[lo].dim()) as i64);
    let semistable_piece = |lo: usize, hi: usize| {
        let mu = slope(lo, hi);
        (0..subs.len()).filter(|&w| below(lo, w) && below(w, hi)).all(|w| slope(lo, w) <= mu)
    };

    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = vec![vec![zero]];
    while let Some(chain) = stack.pop() {
        let cur = *chain.last().unwrap();
        if subs[cur].dim() == n {
            let graded: Vec<(usize, Rational)> = chain.windows(2).map(|w| (w[1], slope(w[0], w[1]))).collect();
            let decreasing = graded.windows(2).all(|w| w[0].1 > w[1].1);
            if decreasing && chain.windows(2).all(|w| semistable_piece(w[0], w[1])) {
                out.push(graded.into_iter().map(|(i, s)| (subs[i].clone(), s)).collect());
            }
            continue;
        }
        for next in (0..subs.len()).filter(|&m| below(cur, m)) {
            let mut c = chain.clone();
            c.push(next);
            stack.push(c);
        }
    }
    out
}

/// Ordered list of subspaces in Q_p^n with entries from a finite pool, used for
/// exhaustive checks: lines spanned by pool vectors and, for n = 3, planes
/// spanned by pairs of them.
pub fn pool_subspaces(ctx: &crate::padic::Context, n: usize, pool: &[i64]) -> Vec<Subspace> {
    let mut vectors: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..n {
        vectors = vectors.into_iter().flat_map(|v| pool.iter().map(move |&x| [v.clone(), vec![x]].concat())).collect();
    }
    let to_col = |v: &Vec<i64>| v.iter().map(|&x| ctx.int(x)).collect::<Vec<_>>();
    let mut lines: Vec<Subspace> = Vec::new();
    for v in vectors.iter().filter(|v| v.iter().any(|&x| x != 0)) {
        let s = Subspace::span_of(ctx.p, n, &[to_col(v)]);
        if !lines.iter().any(|l| l.same_as(&s)) {
            lines.push(s);
        }
    }
    let mut out = lines.clone();
    if n == 3 {
        for (i, a) in lines.iter().enumerate() {
            for b in &lines[i + 1..] {
                let s = a.sum(b);
                if s.dim() == 2 && !out.iter().any(|l| l.same_as(&s)) {
                    out.push(s);
                }
            }
        }
    }
    out
}
