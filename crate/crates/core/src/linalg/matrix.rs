use std::fmt;

use crate::error::{Error, Result};
use crate::padic::{Context, Padic, PadicPoly, DEFAULT_PRECISION, INF};
use crate::rational::Rational;

/// Dense row-major matrix over Q_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<Padic>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Self { p, rows, cols, data: vec![Padic::zero(p); rows * cols] }
    }

    pub fn identity(ctx: &Context, n: usize) -> Self {
        let mut m = Self::zeros(ctx.p, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn from_rows(p: u32, rows: Vec<Vec<Padic>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
        if rows.iter().flatten().any(|x| x.p() != p) {
            return Err(Error::PrimeMismatch(p, rows.iter().flatten().find(|x| x.p() != p).unwrap().p()));
        }
        Ok(Self { p, rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds an `n × k` matrix from `k` column vectors of length `n`.
    pub fn from_columns(p: u32, n: usize, columns: &[Vec<Padic>]) -> Self {
        let mut m = Self::zeros(p, n, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n, "column length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_rationals(ctx: &Context, rows: &[Vec<Rational>]) -> Result<Self> {
        Self::from_rows(ctx.p, rows.iter().map(|r| r.iter().map(|q| ctx.rational(q)).collect()).collect())
    }

    pub fn from_ints(ctx: &Context, rows: &[&[i64]]) -> Self {
        Self::from_rows(ctx.p, rows.iter().map(|r| r.iter().map(|&x| ctx.int(x)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn diagonal(p: u32, entries: &[Padic]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(p, n, n);
        for (i, x) in entries.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Padic {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Padic) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> Vec<Padic> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Padic> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Padic>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> &[Padic] {
        &self.data
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let cols: Vec<Vec<Padic>> = idx.iter().map(|&j| self.column(j)).collect();
        Self::from_columns(self.p, self.rows, &cols)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_exact_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Padic]) -> Vec<Padic> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = Padic::zero(self.p);
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_exact_zero() && !x.is_exact_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    fn zip(&self, other: &Self, f: impl Fn(&Padic, &Padic) -> Padic) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shapes");
        Self {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Padic) -> Self {
        Self { p: self.p, rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { p: self.p, rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    /// Commutator `self·other − other·self`.
    pub fn bracket(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, ctx: &Context, e: u32) -> Self {
        let mut out = Self::identity(ctx, self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.p, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, self.get(i, j) * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(p: u32, blocks: &[Self]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(p, n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack rows");
        let mut cols = self.columns();
        cols.extend(other.columns());
        Self::from_columns(self.p, self.rows, &cols)
    }

    /// Every entry is zero to its known precision.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Padic::is_zero)
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.sub(other).is_zero()
    }

    /// Smallest valuation among nonzero entries.
    pub fn min_valuation(&self) -> Option<i64> {
        self.data.iter().filter_map(Padic::valuation).min()
    }

    /// Smallest absolute precision of any entry (`INF` if all are exact zeros).
    pub fn precision(&self) -> i64 {
        self.data.iter().map(Padic::precision).min().unwrap_or(INF)
    }

    /// Precision used for structural constants (pivots normalized to 1,
    /// free kernel coordinates).
    pub fn working_precision(&self) -> i64 {
        self.data.iter().map(Padic::precision).filter(|&m| m < INF).max().unwrap_or(DEFAULT_PRECISION)
    }

    /// Row reduction choosing, in each column, the pivot of least valuation.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let one = Padic::one(self.p, self.working_precision());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter_map(|i| m.get(i, c).valuation().map(|v| (v, i)))
                .min();
            let Some((_, piv)) = best else { continue };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inverse().expect("nonzero pivot");
            for j in 0..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            m.set(r, c, one.clone());
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_exact_zero() {
                    continue;
                }
                for j in 0..m.cols {
                    let x = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, x);
                }
                m.set(i, c, Padic::zero(self.p));
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space as the columns of a `cols × nullity` matrix.
    pub fn kernel(&self) -> Self {
        let Rref { matrix: r, pivots } = self.rref();
        let one = Padic::one(self.p, self.working_precision());
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let vecs: Vec<Vec<Padic>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Padic::zero(self.p); self.cols];
                v[f] = one.clone();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f);
                }
                v
            })
            .collect();
        Self::from_columns(self.p, self.cols, &vecs)
    }

    /// Columns at the pivot positions: a basis of the column space drawn
    /// from the original columns.
    pub fn column_basis(&self) -> Self {
        self.select_columns(&self.rref().pivots)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let one = Padic::one(self.p, self.working_precision());
        let mut id = Self::zeros(self.p, n, n);
        for i in 0..n {
            id.set(i, i, one.clone());
        }
        let aug = self.hstack(&id);
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::RankDeficient("matrix is singular within precision".into()));
        }
        Ok(Self::from_columns(self.p, n, &(n..2 * n).map(|j| matrix.column(j)).collect::<Vec<_>>()))
    }

    /// Solves `self · x = b`; `None` when `b` is outside the column space.
    pub fn solve(&self, b: &[Padic]) -> Option<Vec<Padic>> {
        let aug = self.hstack(&Self::from_columns(self.p, self.rows, &[b.to_vec()]));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Padic::zero(self.p); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = matrix.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// Characteristic polynomial det(t·I − A) by Berkowitz's division-free
    /// recursion, lowest degree first.
    pub fn charpoly(&self, ctx: &Context) -> PadicPoly {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let n = self.rows;
        // c holds det(tI - A_k) for the leading k×k block, highest degree first
        let mut c: Vec<Padic> = vec![ctx.one()];
        for k in 0..n {
            let a = self.get(k, k).clone();
            // R = row k, columns 0..k ; S = column k, rows 0..k ; A_k block
            let row: Vec<Padic> = (0..k).map(|j| self.get(k, j).clone()).collect();
            let mut col: Vec<Padic> = (0..k).map(|i| self.get(i, k).clone()).collect();
            // Toeplitz entries: 1, -a, -R S, -R A S, -R A^2 S, ...
            let mut t = vec![ctx.one(), -&a];
            for _ in 0..k {
                let rs = dot(&row, &col, self.p);
                t.push(-&rs);
                col = (0..k)
                    .map(|i| {
                        let mut acc = Padic::zero(self.p);
                        for (j, x) in col.iter().enumerate() {
                            acc = &acc + &(self.get(i, j) * x);
                        }
                        acc
                    })
                    .collect();
            }
            let mut next = vec![Padic::zero(self.p); k + 2];
            for (i, out) in next.iter_mut().enumerate() {
                let mut acc = Padic::zero(self.p);
                for j in 0..=i.min(k) {
                    if i - j < t.len() {
                        acc = &acc + &(&t[i - j] * &c[j]);
                    }
                }
                *out = acc;
            }
            c = next;
        }
        c.reverse();
        PadicPoly::new(self.p, c)
    }

    /// Determinant by elimination with least-valuation pivots. A singular
    /// matrix yields a zero whose precision bounds what is known.
    pub fn det(&self) -> Padic {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut acc = Padic::one(self.p, self.working_precision());
        for c in 0..n {
            let best = (c..n).filter_map(|i| m.get(i, c).valuation().map(|v| (v, i))).min();
            let Some((_, piv)) = best else {
                let bound = (c..n).map(|i| m.get(i, c).valuation_lower_bound()).min().unwrap();
                let known = acc.valuation().unwrap_or(0);
                return Padic::approx_zero(self.p, known.saturating_add(bound));
            };
            if piv != c {
                for j in 0..n {
                    m.data.swap(piv * n + j, c * n + j);
                }
                acc = -&acc;
            }
            let pv = m.get(c, c).clone();
            acc = &acc * &pv;
            let inv = pv.inverse().expect("nonzero pivot");
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if f.is_exact_zero() {
                    continue;
                }
                for j in c..n {
                    let x = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, x);
                }
            }
        }
        acc
    }

    /// Evaluates a polynomial at this (square) matrix by Horner's rule.
    pub fn eval_poly(&self, ctx: &Context, f: &PadicPoly) -> Self {
        let n = self.rows;
        let mut acc = Self::zeros(self.p, n, n);
        let id = Self::identity(ctx, n);
        for c in f.coeffs().iter().rev() {
            acc = acc.mul(self).add(&id.scale(c));
        }
        acc
    }

    /// Least k with A^k = 0 within precision, if A is nilpotent.
    pub fn nilpotency_index(&self, ctx: &Context) -> Option<usize> {
        let n = self.rows;
        let mut power = Self::identity(ctx, n);
        for k in 0..=n {
            if power.is_zero() {
                return Some(k);
            }
            power = power.mul(self);
        }
        None
    }
}

pub(crate) fn dot(a: &[Padic], b: &[Padic], p: u32) -> Padic {
    let mut acc = Padic::zero(p);
    for (x, y) in a.iter().zip(b) {
        if !x.is_exact_zero() && !y.is_exact_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for (i, row) in cells.iter().enumerate() {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            write!(f, "[{}]", line.join(" "))?;
            if i + 1 < cells.len() {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ctx() -> Context {
        Context::new(5, 30).unwrap()
    }

    #[test]
    fn kernel_and_rank() {
        let c = ctx();
        let a = Matrix::from_ints(&c, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn inverse_round_trip() {
        let c = ctx();
        let a = Matrix::from_ints(&c, &[&[5, 1], &[1, 0]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).approx_eq(&Matrix::identity(&c, 2)));
        let singular = Matrix::from_ints(&c, &[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_err());
    }

    #[test]
    fn berkowitz_matches_known_polys() {
        let c = ctx();
        let a = Matrix::from_ints(&c, &[&[0, 5], &[1, 0]]);
        // t^2 - 5
        assert!(a.charpoly(&c).approx_eq(&PadicPoly::from_ints(&c, &[-5, 0, 1])));
        let b = Matrix::from_ints(&c, &[&[2, 1, 0], &[0, 3, 1], &[1, 0, 4]]);
        // det(tI - B) = t^3 - 9t^2 + 26t - 25
        assert!(b.charpoly(&c).approx_eq(&PadicPoly::from_ints(&c, &[-25, 26, -9, 1])));
        assert_eq!(b.det().reconstruct(), Some(rat(25, 1)));
    }

    #[test]
    fn solve_inside_and_outside() {
        let c = ctx();
        let a = Matrix::from_ints(&c, &[&[1, 0], &[0, 1], &[1, 1]]);
        let x = a.solve(&[c.int(2), c.int(3), c.int(5)]).unwrap();
        assert_eq!(x[0].reconstruct(), Some(rat(2, 1)));
        assert!(a.solve(&[c.int(2), c.int(3), c.int(4)]).is_none());
    }
}
