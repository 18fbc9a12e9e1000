use rayon::prelude::*;

use super::one_param::{filtration_from_1ps, OneParamSubgroup};
use super::space::{filtration_pairing, FilteredSpace};
use crate::error::{Error, Result};
use crate::isocrystal::{eigenlines, slope_decomposition, Isocrystal};
use crate::linalg::Subspace;
use crate::rational::{int, Rational};

/// Φ-stable subspaces found by [`enumerate_subisocrystals`]. `complete` is
/// true when they are provably all of them.
#[derive(Clone, Debug)]
pub struct SubobjectList {
    pub subspaces: Vec<Subspace>,
    pub complete: bool,
}

fn push_unique(list: &mut Vec<Subspace>, s: Subspace) {
    if !list.iter().any(|t| t.same_as(&s)) {
        list.push(s);
    }
}

/// Φ-stable subspaces of E: within each isoclinic part, all sums of
/// eigenlines when Φ splits there with distinct eigenvalues, otherwise 0 and
/// the part itself, enlarged by the pieces of any user-supplied Φ-stable
/// generators; then all sums across parts.
pub fn enumerate_subisocrystals(e: &Isocrystal, generators: &[Subspace]) -> Result<SubobjectList> {
    let phi = e.frobenius();
    for g in generators {
        if g.ambient_dim() != e.dim() {
            return Err(Error::DimensionMismatch(format!(
                "generator in Q_p^{} for an isocrystal of dimension {}",
                g.ambient_dim(),
                e.dim()
            )));
        }
        if !g.is_stable_under(phi) {
            return Err(Error::NotStable("generator".into()));
        }
    }
    let parts = slope_decomposition(e)?;
    let zero = Subspace::zero(e.p(), e.dim());
    let mut complete = true;
    let mut per_part: Vec<Vec<Subspace>> = Vec::with_capacity(parts.len());
    for part in &parts {
        let mut opts = vec![zero.clone()];
        match eigenlines(e, part) {
            Some(lines) => {
                for mask in 1u32..(1 << lines.len()) {
                    let s = lines
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .fold(zero.clone(), |acc, (_, (_, l))| acc.sum(l));
                    push_unique(&mut opts, s);
                }
            }
            None => {
                // an isoclinic part of dimension equal to its slope
                // denominator is simple
                if *part.slope.denom() != num_bigint::BigInt::from(part.space.dim()) {
                    complete = false;
                }
                push_unique(&mut opts, part.space.clone());
            }
        }
        for g in generators {
            let piece = g.intersection(&part.space);
            if piece.is_zero() {
                continue;
            }
            let existing = opts.clone();
            for o in existing {
                push_unique(&mut opts, o.sum(&piece));
            }
        }
        per_part.push(opts);
    }
    let mut all = vec![zero];
    for opts in &per_part {
        let mut next = Vec::with_capacity(all.len() * opts.len());
        for a in &all {
            for o in opts {
                push_unique(&mut next, a.sum(o));
            }
        }
        all = next;
    }
    all.sort_by_key(Subspace::dim);
    Ok(SubobjectList { subspaces: all, complete })
}

/// Outcome of the subobject test; the witness is a subobject of maximal
/// induced slope exceeding the slope of E.
#[derive(Clone, Debug)]
pub struct SemistabilityVerdict {
    pub semistable: bool,
    pub witness: Option<(Subspace, Rational)>,
    pub complete: bool,
}

fn check_compatible(e: &Isocrystal, f: &FilteredSpace) -> Result<()> {
    if f.ambient_dim() != e.dim() || !f.is_full() {
        return Err(Error::DimensionMismatch(format!(
            "filtration of rank {} in Q_p^{} on an isocrystal of dimension {}",
            f.rank(),
            f.ambient_dim(),
            e.dim()
        )));
    }
    Ok(())
}

fn induced_slope(f: &FilteredSpace, w: &Subspace) -> Result<Rational> {
    Ok(f.induced(w)?.slope().expect("nonzero subspace"))
}

pub fn is_semistable(e: &Isocrystal, f: &FilteredSpace) -> Result<SemistabilityVerdict> {
    is_semistable_with(e, f, &[])
}

pub fn is_semistable_with(e: &Isocrystal, f: &FilteredSpace, generators: &[Subspace]) -> Result<SemistabilityVerdict> {
    check_compatible(e, f)?;
    let subs = enumerate_subisocrystals(e, generators)?;
    let mu = f.slope().expect("nonzero space");
    let proper: Vec<&Subspace> = subs.subspaces.iter().filter(|s| !s.is_zero() && s.dim() < e.dim()).collect();
    let slopes: Vec<Rational> =
        proper.par_iter().map(|s| induced_slope(f, s)).collect::<Result<Vec<_>>>()?;
    let mut witness: Option<(Subspace, Rational)> = None;
    for (s, m) in proper.into_iter().zip(slopes) {
        if m > mu && witness.as_ref().map_or(true, |(_, w)| m > *w) {
            witness = Some((s.clone(), m));
        }
    }
    Ok(SemistabilityVerdict { semistable: witness.is_none(), witness, complete: subs.complete })
}

/// 0 ⊊ E_1 ⊊ ... ⊊ E_k = E with the slope of each graded piece, strictly
/// decreasing. Each step maximizes the slope of E_i/E_{i−1} over the
/// enumerated subobjects containing E_{i−1}, preferring larger rank.
pub fn hn_filtration(e: &Isocrystal, f: &FilteredSpace) -> Result<Vec<(Subspace, Rational)>> {
    hn_filtration_with(e, f, &[])
}

pub fn hn_filtration_with(e: &Isocrystal, f: &FilteredSpace, generators: &[Subspace]) -> Result<Vec<(Subspace, Rational)>> {
    check_compatible(e, f)?;
    let subs = enumerate_subisocrystals(e, generators)?.subspaces;
    let degs: Vec<Rational> = subs
        .iter()
        .map(|s| if s.is_zero() { Ok(int(0)) } else { Ok(f.induced(s)?.degree()) })
        .collect::<Result<Vec<_>>>()?;
    let mut prev = 0usize; // index of the zero subspace
    debug_assert!(subs[0].is_zero());
    let mut out = Vec::new();
    while subs[prev].dim() < e.dim() {
        let mut best: Option<(usize, Rational)> = None;
        for (i, s) in subs.iter().enumerate() {
            if s.dim() <= subs[prev].dim() || !s.contains(&subs[prev]) {
                continue;
            }
            let q = (&degs[i] - &degs[prev]) / int((s.dim() - subs[prev].dim()) as i64);
            let better = match &best {
                None => true,
                Some((b, bq)) => q > *bq || (q == *bq && s.dim() > subs[*b].dim()),
            };
            if better {
                best = Some((i, q));
            }
        }
        let (i, q) = best.ok_or_else(|| Error::InvalidInput("no subobject contains the previous step".into()))?;
        out.push((subs[i].clone(), q));
        prev = i;
    }
    Ok(out)
}

/// μ(F, λ) = <F, F_λ>: nonpositive for every admissible λ exactly when F is
/// semistable. (With the opposite sign a semistable filtration would be
/// destabilized by any weight vector that is nonzero on a generic line.)
pub fn hm_invariant(f: &FilteredSpace, lambda: &OneParamSubgroup) -> Result<Rational> {
    filtration_pairing(f, &filtration_from_1ps(lambda))
}

/// Frame blocks of E: eigenlines of parts on which Φ splits with distinct
/// eigenvalues, whole parts otherwise.
fn frame_blocks(e: &Isocrystal) -> Result<Vec<Subspace>> {
    let mut blocks = Vec::new();
    for part in slope_decomposition(e)? {
        match eigenlines(e, &part) {
            Some(lines) => blocks.extend(lines.into_iter().map(|(_, l)| l)),
            None => blocks.push(part.space),
        }
    }
    Ok(blocks)
}

/// One-parameter subgroups acting by a single weight w_b ∈ [−bound, bound]
/// on each frame block, with Σ w_b·dim_b = 0.
pub fn hm_candidates(e: &Isocrystal, bound: i64) -> Result<Vec<OneParamSubgroup>> {
    let blocks = frame_blocks(e)?;
    let frame = blocks.iter().skip(1).fold(blocks[0].basis().clone(), |acc, b| acc.hstack(b.basis()));
    let dims: Vec<i64> = blocks.iter().map(|b| b.dim() as i64).collect();
    let mut out = Vec::new();
    let mut w = vec![-bound; blocks.len()];
    loop {
        if w.iter().zip(&dims).map(|(a, d)| a * d).sum::<i64>() == 0 {
            let weights: Vec<i64> =
                w.iter().zip(&dims).flat_map(|(a, d)| std::iter::repeat(*a).take(*d as usize)).collect();
            out.push(OneParamSubgroup::new(weights, frame.clone())?);
        }
        let mut k = 0;
        while k < w.len() && w[k] == bound {
            w[k] = -bound;
            k += 1;
        }
        if k == w.len() {
            break;
        }
        w[k] += 1;
    }
    Ok(out)
}

/// Semistability by the Hilbert–Mumford test over [`hm_candidates`]; returns
/// a candidate with positive invariant when there is one.
pub fn hm_semistable(e: &Isocrystal, f: &FilteredSpace, bound: i64) -> Result<(bool, Option<(OneParamSubgroup, Rational)>)> {
    check_compatible(e, f)?;
    let cands = hm_candidates(e, bound)?;
    let values: Vec<Rational> = cands.par_iter().map(|l| hm_invariant(f, l)).collect::<Result<Vec<_>>>()?;
    let worst = cands.into_iter().zip(values).filter(|(_, v)| *v > int(0)).next();
    Ok((worst.is_none(), worst))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::isocrystal::simple_isocrystal;
    use crate::linalg::Matrix;
    use crate::padic::Context;
    use crate::rational::rat;

    fn ctx() -> Context {
        Context::new(5, 30).unwrap()
    }

    fn two_step(c: &Context, n: usize, top: Subspace, hi: i64) -> FilteredSpace {
        FilteredSpace::new(c.p, n, vec![(rat(hi, 1), top), (rat(0, 1), Subspace::full(c, n))]).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        let c = ctx();
        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(5, 1)]).unwrap();
        let subs = enumerate_subisocrystals(&e, &[]).unwrap();
        assert_eq!(subs.subspaces.len(), 4);
        assert!(subs.complete);
        let s = simple_isocrystal(&c, 1, 2).unwrap();
        let subs = enumerate_subisocrystals(&s, &[]).unwrap();
        assert_eq!(subs.subspaces.iter().map(Subspace::dim).collect::<Vec<_>>(), vec![0, 2]);
        assert!(subs.complete);

        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(5, 1), rat(5, 1)]).unwrap();
        let line = Subspace::span(&Matrix::from_ints(&c, &[&[0], &[1], &[2]]));
        let subs = enumerate_subisocrystals(&e, &[line.clone()]).unwrap();
        assert!(!subs.complete);
        let e1 = Subspace::coordinate(&c, 3, &[0]);
        assert!(subs.subspaces.iter().any(|s| s.same_as(&e1)));
        assert!(subs.subspaces.iter().any(|s| s.same_as(&line)));
        assert!(subs.subspaces.iter().any(|s| s.same_as(&line.sum(&e1))));
        let bad = Subspace::span(&Matrix::from_ints(&c, &[&[1], &[1], &[0]]));
        assert!(matches!(enumerate_subisocrystals(&e, &[bad]), Err(Error::NotStable(_))));
    }

    #[test]
    fn semistability_examples() {
        let c = ctx();
        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(5, 1)]).unwrap();
        let f = two_step(&c, 2, Subspace::coordinate(&c, 2, &[0]), 1);
        let v = is_semistable(&e, &f).unwrap();
        assert!(!v.semistable);
        let (w, m) = v.witness.unwrap();
        assert!(w.same_as(&Subspace::coordinate(&c, 2, &[0])));
        assert_eq!(m, rat(1, 1));
        assert!(is_semistable(&e, &FilteredSpace::trivial(&c, 2, rat(0, 1))).unwrap().semistable);

        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(25, 1)]).unwrap();
        let line = Subspace::span(&Matrix::from_ints(&c, &[&[1], &[5]]));
        assert!(is_semistable(&e, &two_step(&c, 2, line, 1)).unwrap().semistable);
    }

    #[test]
    fn hn_examples() {
        let c = ctx();
        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(5, 1)]).unwrap();
        let f = two_step(&c, 2, Subspace::coordinate(&c, 2, &[0]), 1);
        let hn = hn_filtration(&e, &f).unwrap();
        assert_eq!(hn.iter().map(|(s, q)| (s.dim(), q.clone())).collect::<Vec<_>>(), vec![
            (1, rat(1, 1)),
            (2, rat(0, 1))
        ]);
        let t = hn_filtration(&e, &FilteredSpace::trivial(&c, 2, rat(0, 1))).unwrap();
        assert_eq!(t.len(), 1);

        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(5, 1), rat(25, 1)]).unwrap();
        let f = FilteredSpace::new(c.p, 3, vec![
            (rat(2, 1), Subspace::coordinate(&c, 3, &[0])),
            (rat(1, 1), Subspace::coordinate(&c, 3, &[0, 1])),
            (rat(0, 1), Subspace::full(&c, 3)),
        ])
        .unwrap();
        let hn = hn_filtration(&e, &f).unwrap();
        assert_eq!(hn.iter().map(|(_, q)| q.clone()).collect::<Vec<_>>(), vec![rat(2, 1), rat(1, 1), rat(0, 1)]);
        assert!(hn[0].0.same_as(&Subspace::coordinate(&c, 3, &[0])));
        assert!(hn[1].0.same_as(&Subspace::coordinate(&c, 3, &[0, 1])));
    }

    #[test]
    fn hm_examples() {
        let c = ctx();
        let f = two_step(&c, 2, Subspace::coordinate(&c, 2, &[1]), 1);
        assert_eq!(hm_invariant(&f, &OneParamSubgroup::standard(&c, vec![0, 1])).unwrap(), rat(1, 1));
        assert_eq!(hm_invariant(&f, &OneParamSubgroup::standard(&c, vec![0, 0])).unwrap(), rat(0, 1));

        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(5, 1)]).unwrap();
        let g = two_step(&c, 2, Subspace::coordinate(&c, 2, &[0]), 1);
        assert_eq!(hm_invariant(&g, &OneParamSubgroup::standard(&c, vec![-1, 1])).unwrap(), rat(-1, 1));
        assert_eq!(hm_invariant(&g, &OneParamSubgroup::standard(&c, vec![1, -1])).unwrap(), rat(1, 1));
        let (ok, w) = hm_semistable(&e, &g, 2).unwrap();
        assert!(!ok);
        assert!(w.unwrap().1 > rat(0, 1));

        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(25, 1)]).unwrap();
        let line = Subspace::span(&Matrix::from_ints(&c, &[&[1], &[5]]));
        assert!(hm_semistable(&e, &two_step(&c, 2, line, 1), 2).unwrap().0);
    }

    #[test]
    fn candidate_count() {
        let c = ctx();
        let e = Isocrystal::diagonal(c, &[rat(1, 1), rat(5, 1)]).unwrap();
        // (w, −w) for w in −2..=2
        assert_eq!(hm_candidates(&e, 2).unwrap().len(), 5);
    }
}
