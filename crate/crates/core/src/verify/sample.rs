use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::filtration::{FilteredSpace, OneParamSubgroup};
use crate::isocrystal::Isocrystal;
use crate::linalg::{Matrix, Subspace};
use crate::padic::{Context, Padic, RatPoly};
use crate::rational::{int, rat, Rational};

/// Deterministic generator of random test objects.
pub struct Sampler {
    rng: ChaCha8Rng,
}

/// An isocrystal Φ = P·diag(d)·P⁻¹ together with its eigenframe P and the
/// eigenvalues d.
pub struct Diagonalizable {
    pub e: Isocrystal,
    pub frame: Matrix,
    pub eigenvalues: Vec<Rational>,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.rng.gen_range(0..len)
    }

    pub fn pick<T: Clone>(&mut self, items: &[T]) -> T {
        items.choose(&mut self.rng).expect("nonempty").clone()
    }

    pub fn prime(&mut self) -> u32 {
        self.pick(&[2, 3, 5])
    }

    /// A nonzero integer in [−m, m] prime to p.
    pub fn unit_int(&mut self, p: u32, m: i64) -> i64 {
        loop {
            let x = self.range(-m, m);
            if x != 0 && x.rem_euclid(p as i64) != 0 {
                return x;
            }
        }
    }

    /// u·p^k with u a small p-adic unit and k ∈ [lo, hi].
    pub fn rational_with_val(&mut self, p: u32, lo: i64, hi: i64) -> (Rational, i64) {
        let k = self.range(lo, hi);
        let u = rat(self.unit_int(p, 9), self.unit_int(p, 4).abs());
        let pk = if k >= 0 { int((p as i64).pow(k as u32)) } else { rat(1, (p as i64).pow((-k) as u32)) };
        (u * pk, k)
    }

    pub fn rational(&mut self, num: i64, den: i64) -> Rational {
        rat(self.range(-num, num), self.range(1, den))
    }

    /// An integer times a small power of p; zero about a fifth of the time.
    pub fn entry(&mut self, ctx: &Context) -> Padic {
        let k = self.range(0, 2);
        ctx.int(self.range(-4, 4) * (ctx.p as i64).pow(k as u32))
    }

    pub fn matrix(&mut self, ctx: &Context, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(ctx.p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.entry(ctx));
            }
        }
        m
    }

    /// An integer matrix whose determinant is a p-adic unit.
    pub fn unimodular(&mut self, ctx: &Context, n: usize) -> Matrix {
        loop {
            let mut m = Matrix::zeros(ctx.p, n, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, ctx.int(self.range(-3, 3)));
                }
            }
            if m.det().valuation() == Some(0) {
                return m;
            }
        }
    }

    /// An invertible matrix with entries of varying valuation.
    pub fn invertible(&mut self, ctx: &Context, n: usize) -> Matrix {
        loop {
            let m = self.matrix(ctx, n, n);
            if !m.det().is_zero() {
                return m;
            }
        }
    }

    /// A diagonalizable isocrystal with eigenvalue valuations in [lo, hi],
    /// distinct when `distinct` is set (which needs hi − lo + 1 ≥ n).
    pub fn diagonalizable(&mut self, ctx: &Context, n: usize, lo: i64, hi: i64, distinct: bool) -> Diagonalizable {
        let mut vals: Vec<i64> = (lo..=hi).collect();
        vals.shuffle(&mut self.rng);
        let eigenvalues: Vec<Rational> = (0..n)
            .map(|i| {
                let (u, _) = self.rational_with_val(ctx.p, 0, 0);
                let k = if distinct { vals[i] } else { self.range(lo, hi) };
                let pk = if k >= 0 { int((ctx.p as i64).pow(k as u32)) } else { rat(1, (ctx.p as i64).pow((-k) as u32)) };
                u * pk
            })
            .collect();
        let frame = self.unimodular(ctx, n);
        let d = Matrix::diagonal(ctx.p, &eigenvalues.iter().map(|q| ctx.rational(q)).collect::<Vec<_>>());
        let phi = frame.mul(&d).mul(&frame.inverse().expect("unimodular"));
        Diagonalizable { e: Isocrystal::new(*ctx, phi).expect("invertible"), frame, eigenvalues }
    }

    /// A full filtration of Q_p^n: random strictly increasing step
    /// dimensions ending at n, strictly decreasing jumps in [−3, 3], bases
    /// taken from the columns of a random invertible matrix.
    pub fn filtration(&mut self, ctx: &Context, n: usize) -> FilteredSpace {
        let frame = self.invertible(ctx, n);
        self.filtration_in_frame(ctx, &frame)
    }

    pub fn filtration_in_frame(&mut self, ctx: &Context, frame: &Matrix) -> FilteredSpace {
        let n = frame.cols();
        let mut dims: Vec<usize> = (1..n).filter(|_| self.rng.gen_bool(0.5)).collect();
        dims.push(n);
        let jumps = self.decreasing_jumps(dims.len());
        let steps = jumps
            .into_iter()
            .zip(&dims)
            .map(|(j, &d)| (int(j), Subspace::span(&frame.select_columns(&(0..d).collect::<Vec<_>>()))))
            .collect();
        FilteredSpace::new(ctx.p, n, steps).expect("nested steps")
    }

    /// A filtration with the same jumps and step dimensions as `shape`.
    pub fn filtration_like(&mut self, ctx: &Context, shape: &FilteredSpace) -> FilteredSpace {
        let frame = self.invertible(ctx, shape.ambient_dim());
        let steps = shape
            .steps()
            .iter()
            .map(|(j, s)| (j.clone(), Subspace::span(&frame.select_columns(&(0..s.dim()).collect::<Vec<_>>()))))
            .collect();
        FilteredSpace::new(ctx.p, shape.ambient_dim(), steps).expect("nested steps")
    }

    pub fn decreasing_jumps(&mut self, k: usize) -> Vec<i64> {
        let mut pool: Vec<i64> = (-3..=3).collect();
        pool.shuffle(&mut self.rng);
        let mut js = pool[..k].to_vec();
        js.sort_unstable_by(|a, b| b.cmp(a));
        js
    }

    pub fn one_param(&mut self, ctx: &Context, n: usize) -> OneParamSubgroup {
        let weights = (0..n).map(|_| self.range(-3, 3)).collect();
        OneParamSubgroup::new(weights, self.invertible(ctx, n)).expect("invertible frame")
    }

    /// A nilpotent matrix: random strictly upper triangular, conjugated by a
    /// unimodular matrix.
    pub fn nilpotent(&mut self, ctx: &Context, n: usize) -> Matrix {
        let mut u = Matrix::zeros(ctx.p, n, n);
        for i in 0..n {
            for j in i + 1..n {
                u.set(i, j, self.entry(ctx));
            }
        }
        let g = self.unimodular(ctx, n);
        g.mul(&u).mul(&g.inverse().expect("unimodular"))
    }

    /// Nilpotent matrix with the given Jordan type, conjugated by a
    /// unimodular matrix.
    pub fn jordan_type(&mut self, ctx: &Context, blocks: &[usize]) -> Matrix {
        let n: usize = blocks.iter().sum();
        let mut j = Matrix::zeros(ctx.p, n, n);
        let mut at = 0;
        for &m in blocks {
            for k in 0..m.saturating_sub(1) {
                j.set(at + k, at + k + 1, ctx.one());
            }
            at += m;
        }
        let g = self.unimodular(ctx, n);
        g.mul(&j).mul(&g.inverse().expect("unimodular"))
    }

    /// A p-adic integer with valuation ≥ `min_val`, given to full precision.
    pub fn padic_with_val(&mut self, ctx: &Context, min_val: i64) -> Padic {
        let k = self.range(min_val, min_val + 3);
        let u = self.unit_int(ctx.p, 50);
        let x = self.range(0, 1_000_000);
        // u·p^k + higher-order noise
        &ctx.int(u).scale_by_p_power(k) + &ctx.int(x).scale_by_p_power(k + 1)
    }

    pub fn rat_poly(&mut self, max_deg: usize) -> RatPoly {
        let d = self.index(max_deg + 1);
        RatPoly::new((0..=d).map(|_| self.rational(20, 6)).collect())
    }
}
