use super::sl2::WeightFiltration;
use super::{orbit_limit, phi_n_compat, Compatibility, NilpotentOperator, OrbitDirection};
use crate::error::{Error, Result};
use crate::filtration::{is_semistable, FilteredSpace, SemistabilityVerdict};
use crate::isocrystal::Isocrystal;
use crate::linalg::{Matrix, Subspace};
use crate::padic::Padic;

/// Whether (N, F_0) defines a nilpotent orbit with a semistable limit on E.
#[derive(Clone, Debug)]
pub struct OrbitVerdict {
    pub holds: bool,
    pub compatibility: Compatibility,
    pub limit: FilteredSpace,
    pub semistability: SemistabilityVerdict,
}

pub fn nilpotent_orbit_check(op: &NilpotentOperator, e: &Isocrystal, f0: &FilteredSpace) -> Result<OrbitVerdict> {
    nilpotent_orbit_check_towards(op, e, f0, OrbitDirection::default())
}

pub fn nilpotent_orbit_check_towards(
    op: &NilpotentOperator,
    e: &Isocrystal,
    f0: &FilteredSpace,
    direction: OrbitDirection,
) -> Result<OrbitVerdict> {
    let compatibility = phi_n_compat(op, e)?;
    let limit = orbit_limit(op, f0, direction)?;
    let semistability = is_semistable(e, &limit)?;
    Ok(OrbitVerdict { holds: compatibility.holds() && semistability.semistable, compatibility, limit, semistability })
}

/// One graded piece Gr_j^P with the filtration induced by F.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub index: i64,
    pub dim: usize,
    pub filtration: Option<FilteredSpace>,
    pub semistable: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct MixedVerdict {
    pub holds: bool,
    pub pieces: Vec<GradedPiece>,
}

/// Coordinates on P_j/P_{j−1}: a complement basis C of P_{j−1} inside P_j
/// and the map v ↦ C-part of v in the basis [B_{j−1} | C].
fn quotient_coordinates(lower: &Subspace, upper: &Subspace) -> Result<(usize, Matrix)> {
    let mut basis = lower.clone();
    let mut extra: Vec<Vec<Padic>> = Vec::new();
    for v in upper.canonical_basis().columns() {
        if !basis.contains_vector(&v) {
            basis = basis.sum(&Subspace::span_of(upper.p(), upper.ambient_dim(), &[v.clone()]));
            extra.push(v);
        }
    }
    let k = lower.dim();
    let full = if k == 0 {
        Matrix::from_columns(upper.p(), upper.ambient_dim(), &extra)
    } else {
        lower.basis().hstack(&Matrix::from_columns(upper.p(), upper.ambient_dim(), &extra))
    };
    Ok((k, full))
}

/// Checks that every Gr_j^P carries a valid induced filtration and, when
/// isocrystals are supplied for the graded pieces (in increasing order of j),
/// that each is semistable.
pub fn mixed_graded_check(
    n: usize,
    p_filt: &WeightFiltration,
    f: &FilteredSpace,
    per_weight: Option<&[Isocrystal]>,
) -> Result<MixedVerdict> {
    if p_filt.ambient_dim() != n || f.ambient_dim() != n || !f.is_full() {
        return Err(Error::ShapeMismatch(format!(
            "P on Q_p^{}, F on Q_p^{} (rank {}), expected dimension {n}",
            p_filt.ambient_dim(),
            f.ambient_dim(),
            f.rank()
        )));
    }
    if let Some(es) = per_weight {
        if es.len() != p_filt.steps().len() {
            return Err(Error::ShapeMismatch(format!(
                "{} isocrystals for {} graded pieces",
                es.len(),
                p_filt.steps().len()
            )));
        }
    }
    let mut pieces = Vec::new();
    let mut holds = true;
    let mut lower = Subspace::zero(f.p(), n);
    for (k, (j, upper)) in p_filt.steps().iter().enumerate() {
        let (skip, frame) = quotient_coordinates(&lower, upper)?;
        let d = upper.dim() - lower.dim();
        let project = |s: &Subspace| -> Subspace {
            let cols: Vec<Vec<Padic>> = s
                .vectors()
                .iter()
                .map(|v| frame.solve(v).expect("vector of P_j")[skip..].to_vec())
                .collect();
            Subspace::span_of(f.p(), d, &cols)
        };
        let cands = f.steps().iter().map(|(x, s)| (x.clone(), project(&s.intersection(upper)))).collect();
        let nested = FilteredSpace::from_nested(f.p(), d, cands);
        let valid = FilteredSpace::new(f.p(), d, nested.steps().to_vec()).ok().filter(|g| g.is_full());
        let mut semistable = None;
        if let (Some(es), Some(g)) = (per_weight, valid.as_ref()) {
            let e = &es[k];
            if e.dim() != d {
                return Err(Error::ShapeMismatch(format!("isocrystal of dimension {} on a piece of dimension {d}", e.dim())));
            }
            let ok = is_semistable(e, g)?.semistable;
            holds &= ok;
            semistable = Some(ok);
        }
        holds &= valid.is_some();
        pieces.push(GradedPiece { index: *j, dim: d, filtration: valid, semistable });
        lower = upper.clone();
    }
    Ok(MixedVerdict { holds, pieces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isocrystal::simple_isocrystal;
    use crate::padic::Context;
    use crate::rational::rat;

    fn ctx() -> Context {
        Context::new(5, 30).unwrap()
    }

    fn line_flag(c: &Context, v: &[i64]) -> FilteredSpace {
        let rows: Vec<&[i64]> = v.iter().map(std::slice::from_ref).collect();
        let s = Subspace::span(&Matrix::from_ints(c, &rows));
        FilteredSpace::new(c.p, v.len(), vec![(rat(1, 1), s), (rat(0, 1), Subspace::full(c, v.len()))]).unwrap()
    }

    #[test]
    fn orbit_checks() {
        let c = ctx();
        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(25, 1)]).unwrap();
        let f = line_flag(&c, &[1, 5]);
        assert!(nilpotent_orbit_check(&NilpotentOperator::zero(c, 2), &e, &f).unwrap().holds);

        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(5, 1)]).unwrap();
        let n = NilpotentOperator::new(c, Matrix::from_ints(&c, &[&[0, 1], &[0, 0]])).unwrap();
        let v = nilpotent_orbit_check(&n, &e, &line_flag(&c, &[0, 1])).unwrap();
        assert!(!v.holds);
        assert_eq!(v.compatibility, Compatibility::Twist(1));
        assert!(v.limit.same_as(&line_flag(&c, &[1, 0])));
        let (w, _) = v.semistability.witness.unwrap();
        assert!(w.same_as(&Subspace::coordinate(&c, 2, &[0])));

        let s = simple_isocrystal(&c, 1, 2).unwrap();
        assert!(nilpotent_orbit_check(&NilpotentOperator::zero(c, 2), &s, &line_flag(&c, &[3, 1])).unwrap().holds);
    }

    #[test]
    fn graded_pieces() {
        let c = ctx();
        let f = line_flag(&c, &[1, 1]);
        let single = WeightFiltration::new(c.p, 2, vec![(0, Subspace::full(&c, 2))]).unwrap();
        let v = mixed_graded_check(2, &single, &f, None).unwrap();
        assert!(v.holds);
        assert!(v.pieces[0].filtration.as_ref().unwrap().same_as(&f));

        let two = WeightFiltration::new(c.p, 2, vec![(0, Subspace::coordinate(&c, 2, &[0])), (1, Subspace::full(&c, 2))])
            .unwrap();
        let v = mixed_graded_check(2, &two, &f, None).unwrap();
        assert!(v.holds);
        assert_eq!(v.pieces[0].filtration.as_ref().unwrap().jumps(), vec![rat(0, 1)]);
        assert_eq!(v.pieces[1].filtration.as_ref().unwrap().jumps(), vec![rat(1, 1)]);

        let unit = Isocrystal::diagonal(c, &[rat(1, 1)]).unwrap();
        let v = mixed_graded_check(2, &two, &f, Some(&[unit.clone(), unit])).unwrap();
        assert_eq!(v.pieces.iter().map(|p| p.semistable).collect::<Vec<_>>(), vec![Some(true), Some(true)]);

        assert!(matches!(mixed_graded_check(3, &two, &f, None), Err(Error::ShapeMismatch(_))));
    }
}
