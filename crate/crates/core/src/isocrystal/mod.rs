//! Isocrystals with σ = identity: Newton polygons, slope factorization,
//! the slope decomposition and Newton-vector combinatorics.

mod combinatorics;
mod factor;
mod newton;

use num_integer::Integer;

pub use combinatorics::{is_admissible_newton, newton_leq, siegel_stratum_dimension};
pub use factor::{distinct_roots, slope_factorization, SlopeFactor};
pub use newton::{newton_segments, root_valuations, NewtonVector, Segment};

use crate::error::{Error, Result};
use crate::filtration::FilteredSpace;
use crate::linalg::{Matrix, Subspace};
use crate::padic::{Context, Padic, PadicPoly};
use crate::rational::Rational;

/// A finite-dimensional Q_p-space with an invertible Frobenius matrix.
#[derive(Clone, Debug)]
pub struct Isocrystal {
    ctx: Context,
    frobenius: Matrix,
}

impl Isocrystal {
    pub fn new(ctx: Context, frobenius: Matrix) -> Result<Self> {
        if !frobenius.is_square() || frobenius.rows() == 0 {
            return Err(Error::ShapeMismatch("Frobenius must be a nonempty square matrix".into()));
        }
        if frobenius.p() != ctx.p {
            return Err(Error::PrimeMismatch(frobenius.p(), ctx.p));
        }
        if frobenius.det().is_zero() {
            return Err(Error::InvalidInput("Frobenius is not invertible within precision".into()));
        }
        Ok(Self { ctx, frobenius })
    }

    pub fn diagonal(ctx: Context, entries: &[Rational]) -> Result<Self> {
        let d: Vec<Padic> = entries.iter().map(|q| ctx.rational(q)).collect();
        Self::new(ctx, Matrix::diagonal(ctx.p, &d))
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn p(&self) -> u32 {
        self.ctx.p
    }

    pub fn dim(&self) -> usize {
        self.frobenius.rows()
    }

    pub fn frobenius(&self) -> &Matrix {
        &self.frobenius
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        Self::new(self.ctx, Matrix::block_diag(self.ctx.p, &[self.frobenius.clone(), other.frobenius.clone()]))
    }

    /// det(1 − Φt), lowest degree first.
    pub fn reverse_charpoly(&self) -> PadicPoly {
        let chi = self.frobenius.charpoly(&self.ctx);
        let mut c = chi.coeffs().to_vec();
        c.reverse();
        PadicPoly::new(self.ctx.p, c)
    }
}

/// The simple object of slope r/s: p^r in the top-right corner and ones on
/// the subdiagonal.
pub fn simple_isocrystal(ctx: &Context, r: i64, s: i64) -> Result<Isocrystal> {
    if s <= 0 || r.gcd(&s) != 1 {
        return Err(Error::NotCoprime { r, s });
    }
    let n = s as usize;
    let mut m = Matrix::zeros(ctx.p, n, n);
    m.set(0, n - 1, ctx.p_power(r));
    for i in 1..n {
        m.set(i, i - 1, ctx.one());
    }
    Isocrystal::new(*ctx, m)
}

/// Slopes of Φ: the segment slopes of the lower convex hull of the points
/// (i, val a_i) for det(1 − Φt) = Σ a_i t^i, i.e. the valuations of the
/// eigenvalues, largest first.
pub fn newton_polygon(e: &Isocrystal) -> Result<NewtonVector> {
    let segs = newton_segments(&e.reverse_charpoly())?;
    let parts: Vec<(Rational, usize)> = segs.iter().rev().map(|s| (s.slope.clone(), s.end - s.start)).collect();
    NewtonVector::from_parts(&parts)
}

/// An isoclinic summand E_λ, with the factor of the characteristic
/// polynomial it is the kernel of.
#[derive(Clone, Debug)]
pub struct SlopePart {
    pub slope: Rational,
    pub space: Subspace,
    pub factor: PadicPoly,
}

/// E = ⊕ E_λ with E_λ = ker f_λ(Φ), parts ordered by decreasing slope.
pub fn slope_decomposition(e: &Isocrystal) -> Result<Vec<SlopePart>> {
    let chi = e.frobenius.charpoly(&e.ctx);
    let factors = slope_factorization(&e.ctx, &chi)?;
    let mut parts = Vec::with_capacity(factors.len());
    for f in factors {
        let k = e.frobenius.eval_poly(&e.ctx, &f.factor).kernel();
        let d = f.factor.degree().unwrap();
        if k.cols() != d {
            return Err(Error::PrecisionExhausted(format!(
                "slope {} part has dimension {} but its factor has degree {d}",
                crate::rational::format_rational(&f.slope),
                k.cols()
            )));
        }
        parts.push(SlopePart { slope: f.slope, space: Subspace::new(k)?, factor: f.factor });
    }
    let total: usize = parts.iter().map(|p| p.space.dim()).sum();
    if total != e.dim() || parts.iter().skip(1).fold(parts[0].space.clone(), |acc, p| acc.sum(&p.space)).dim() != e.dim() {
        return Err(Error::PrecisionExhausted("slope parts do not span the space".into()));
    }
    Ok(parts)
}

/// Eigenvalues and eigenlines of Φ on a part, when its factor splits into
/// distinct linear factors over Q_p.
pub fn eigenlines(e: &Isocrystal, part: &SlopePart) -> Option<Vec<(Padic, Subspace)>> {
    let roots = distinct_roots(&e.ctx, &SlopeFactor { slope: part.slope.clone(), factor: part.factor.clone() })?;
    let id = Matrix::identity(&e.ctx, e.dim());
    let mut out = Vec::with_capacity(roots.len());
    for a in roots {
        let k = e.frobenius.sub(&id.scale(&a)).kernel();
        if k.cols() != 1 {
            return None;
        }
        out.push((a, Subspace::new(k).ok()?));
    }
    Some(out)
}

/// The slope (Newton) filtration F^β = ⊕_{λ ≤ −β} E_λ.
pub fn slope_filtration(e: &Isocrystal) -> Result<FilteredSpace> {
    let parts = slope_decomposition(e)?;
    // ascending slopes give descending jumps β = −λ with growing sums
    let mut acc = Subspace::zero(e.p(), e.dim());
    let mut steps = Vec::new();
    for part in parts.iter().rev() {
        acc = acc.sum(&part.space);
        steps.push((-part.slope.clone(), acc.clone()));
    }
    FilteredSpace::new(e.p(), e.dim(), steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ctx(p: u32) -> Context {
        Context::new(p, 40).unwrap()
    }

    #[test]
    fn simple_objects() {
        let c = ctx(5);
        let e = simple_isocrystal(&c, 1, 2).unwrap();
        assert!(e.frobenius().approx_eq(&Matrix::from_ints(&c, &[&[0, 5], &[1, 0]])));
        assert_eq!(newton_polygon(&e).unwrap().to_string(), "1/2,1/2");
        let unit = simple_isocrystal(&c, 0, 1).unwrap();
        assert!(unit.frobenius().approx_eq(&Matrix::from_ints(&c, &[&[1]])));
        let e32 = simple_isocrystal(&c, 3, 2).unwrap();
        assert!(e32.frobenius().approx_eq(&Matrix::from_ints(&c, &[&[0, 125], &[1, 0]])));
        assert!(matches!(simple_isocrystal(&c, 2, 4), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn diagonal_newton_vector() {
        let c = ctx(3);
        let e = Isocrystal::diagonal(c, &[rat(9, 1), rat(3, 1), rat(1, 1)]).unwrap();
        let nv = newton_polygon(&e).unwrap();
        assert_eq!(nv.to_string(), "2,1,0");
        assert_eq!(nv.total(), rat(3, 1));
        let id = Isocrystal::diagonal(c, &[rat(1, 1)]).unwrap();
        assert_eq!(newton_polygon(&id).unwrap().to_string(), "0");
    }

    #[test]
    fn decomposition_examples() {
        let c = ctx(5);
        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(5, 1)]).unwrap();
        let parts = slope_decomposition(&e).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].slope, rat(1, 1));
        assert!(parts[0].space.same_as(&Subspace::coordinate(&c, 2, &[1])));
        assert!(parts[1].space.same_as(&Subspace::coordinate(&c, 2, &[0])));

        let s = simple_isocrystal(&c, 1, 2).unwrap();
        let parts = slope_decomposition(&s).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].space.dim(), 2);

        let b = s.direct_sum(&Isocrystal::diagonal(c, &[rat(1, 1)]).unwrap()).unwrap();
        let parts = slope_decomposition(&b).unwrap();
        assert_eq!(parts.iter().map(|p| (p.slope.clone(), p.space.dim())).collect::<Vec<_>>(), vec![
            (rat(1, 2), 2),
            (rat(0, 1), 1)
        ]);
    }

    #[test]
    fn slope_filtration_of_diag() {
        let c = ctx(5);
        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(5, 1)]).unwrap();
        let f = slope_filtration(&e).unwrap();
        // F^0 = E_0 = span(e1), F^{-1} = everything
        assert_eq!(f.jumps(), vec![rat(0, 1), rat(-1, 1)]);
        assert!(f.at(&rat(0, 1)).same_as(&Subspace::coordinate(&c, 2, &[0])));
        assert_eq!(f.at(&rat(-1, 1)).dim(), 2);
        let s = slope_filtration(&simple_isocrystal(&c, 1, 2).unwrap()).unwrap();
        assert_eq!(s.jumps(), vec![rat(-1, 2)]);
    }

    #[test]
    fn eigenlines_of_distinct_eigenvalues() {
        let c = ctx(5);
        let m = Matrix::from_ints(&c, &[&[5, 1], &[0, 10]]);
        let e = Isocrystal::new(c, m).unwrap();
        let parts = slope_decomposition(&e).unwrap();
        assert_eq!(parts.len(), 1);
        let lines = eigenlines(&e, &parts[0]).unwrap();
        assert_eq!(lines.len(), 2);
        for (a, l) in &lines {
            let v = l.vectors().remove(0);
            let w = e.frobenius().mul_vec(&v);
            assert!(w.iter().zip(&v).all(|(x, y)| x.approx_eq(&(a * y))));
        }
    }
}
