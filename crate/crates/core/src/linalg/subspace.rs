use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::padic::Padic;

/// A linear subspace of Q_p^n, stored as a matrix of independent columns.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Wraps a basis; fails when the columns are dependent within precision.
    pub fn new(basis: Matrix) -> Result<Self> {
        if basis.rank() != basis.cols() {
            return Err(Error::RankDeficient(format!(
                "{} columns span a space of dimension {}",
                basis.cols(),
                basis.rank()
            )));
        }
        Ok(Self { basis })
    }

    /// Span of arbitrary columns.
    pub fn span(vectors: &Matrix) -> Self {
        Self { basis: vectors.column_basis() }
    }

    pub fn span_of(p: u32, n: usize, vectors: &[Vec<Padic>]) -> Self {
        Self::span(&Matrix::from_columns(p, n, vectors))
    }

    pub fn zero(p: u32, n: usize) -> Self {
        Self { basis: Matrix::zeros(p, n, 0) }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ctx: &crate::padic::Context, n: usize, idx: &[usize]) -> Self {
        let cols: Vec<Vec<Padic>> = idx
            .iter()
            .map(|&i| (0..n).map(|k| if k == i { ctx.one() } else { ctx.zero() }).collect())
            .collect();
        Self { basis: Matrix::from_columns(ctx.p, n, &cols) }
    }

    pub fn full(ctx: &crate::padic::Context, n: usize) -> Self {
        Self { basis: Matrix::identity(ctx, n) }
    }

    pub fn p(&self) -> u32 {
        self.basis.p()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<Padic>> {
        self.basis.columns()
    }

    pub fn contains_vector(&self, v: &[Padic]) -> bool {
        self.basis.solve(v).is_some() || v.iter().all(Padic::is_zero)
    }

    pub fn contains(&self, other: &Self) -> bool {
        other.dim() == 0 || self.basis.hstack(&other.basis).rank() == self.dim()
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.ambient_dim() == other.ambient_dim() && self.dim() == other.dim() && self.contains(other)
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::span(&self.basis.hstack(&other.basis))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(self.p(), self.ambient_dim());
        }
        let k = self.dim();
        let kernel = self.basis.hstack(&other.basis.neg()).kernel();
        let coords: Vec<Vec<Padic>> = kernel.columns().into_iter().map(|c| c[..k].to_vec()).collect();
        if coords.is_empty() {
            return Self::zero(self.p(), self.ambient_dim());
        }
        let m = Matrix::from_columns(self.p(), k, &coords);
        Self::span(&self.basis.mul(&m))
    }

    /// A·W for a linear map A.
    pub fn image(&self, a: &Matrix) -> Self {
        if self.dim() == 0 {
            return Self::zero(self.p(), a.rows());
        }
        Self::span(&a.mul(&self.basis))
    }

    /// Whether A·W ⊆ W.
    pub fn is_stable_under(&self, a: &Matrix) -> bool {
        self.dim() == 0 || self.contains(&Self::span(&a.mul(&self.basis)))
    }

    /// Linear forms vanishing on W, in dual coordinates.
    pub fn annihilator(&self) -> Self {
        let n = self.ambient_dim();
        if self.dim() == 0 {
            let ctx = crate::padic::Context { p: self.p(), precision: self.basis.working_precision() };
            return Self::full(&ctx, n);
        }
        Self::span(&self.basis.transpose().kernel())
    }

    /// Coordinates of v in this basis.
    pub fn coordinates(&self, v: &[Padic]) -> Option<Vec<Padic>> {
        self.basis.solve(v)
    }

    /// Reduced row echelon basis (rows of the RREF of the transposed basis),
    /// identical for equal subspaces.
    pub fn canonical_basis(&self) -> Matrix {
        if self.dim() == 0 {
            return self.basis.clone();
        }
        let r = self.basis.transpose().rref();
        let rows: Vec<Vec<Padic>> = (0..r.pivots.len()).map(|i| r.matrix.row(i)).collect();
        Matrix::from_columns(self.p(), self.ambient_dim(), &rows)
    }
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}
