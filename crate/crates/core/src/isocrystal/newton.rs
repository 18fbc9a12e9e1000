use std::fmt;

use crate::error::{Error, Result};
use crate::padic::PadicPoly;
use crate::rational::{format_rational, int, Rational};

/// Slopes λ_1 ≥ ... ≥ λ_n grouped as (value, multiplicity) with distinct,
/// strictly decreasing values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NewtonVector {
    parts: Vec<(Rational, usize)>,
}

impl NewtonVector {
    /// Sorts and groups an arbitrary list of slopes.
    pub fn from_slopes(slopes: &[Rational]) -> Self {
        let mut s = slopes.to_vec();
        s.sort_by(|a, b| b.cmp(a));
        let mut parts: Vec<(Rational, usize)> = Vec::new();
        for x in s {
            match parts.last_mut() {
                Some((v, m)) if *v == x => *m += 1,
                _ => parts.push((x, 1)),
            }
        }
        Self { parts }
    }

    pub fn from_parts(parts: &[(Rational, usize)]) -> Result<Self> {
        if parts.iter().any(|(_, m)| *m == 0) {
            return Err(Error::InvalidInput("zero multiplicity in Newton vector".into()));
        }
        if parts.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(Error::InvalidInput("Newton slopes must strictly decrease".into()));
        }
        Ok(Self { parts: parts.to_vec() })
    }

    pub fn parts(&self) -> &[(Rational, usize)] {
        &self.parts
    }

    /// Expanded slope sequence λ_1 ≥ ... ≥ λ_n.
    pub fn slopes(&self) -> Vec<Rational> {
        self.parts.iter().flat_map(|(v, m)| std::iter::repeat(v.clone()).take(*m)).collect()
    }

    pub fn dim(&self) -> usize {
        self.parts.iter().map(|(_, m)| m).sum()
    }

    pub fn total(&self) -> Rational {
        self.parts.iter().map(|(v, m)| v * int(*m as i64)).sum()
    }
}

impl fmt::Display for NewtonVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.slopes().iter().map(format_rational).collect();
        write!(f, "{}", s.join(","))
    }
}

/// Vertices of the lower convex hull of the given points (sorted by x).
pub(crate) fn lower_hull(points: &[(i64, Rational)]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::new();
    for (k, (x, y)) in points.iter().enumerate() {
        while hull.len() >= 2 {
            let (x1, y1) = &points[hull[hull.len() - 2]];
            let (x2, y2) = &points[hull[hull.len() - 1]];
            // drop the middle point if it lies on or above the chord
            let lhs = (y2 - y1) * int(x - x1);
            let rhs = (y - y1) * int(x2 - x1);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull
}

/// One segment of a Newton polygon: x-range and slope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub slope: Rational,
}

/// Segments of the lower hull of (i, val a_i). Coefficients that are zero
/// to their known precision are skipped when that precision already lies on
/// or above the hull; otherwise the polygon is indeterminate.
pub fn newton_segments(f: &PadicPoly) -> Result<Vec<Segment>> {
    f.degree().ok_or_else(|| Error::InvalidInput("Newton polygon of the zero polynomial".into()))?;
    let c0 = f.coeff(0);
    if c0.is_zero() {
        return Err(if c0.is_exact_zero() {
            Error::InvalidInput("constant coefficient vanishes".into())
        } else {
            Error::PrecisionExhausted("constant coefficient is zero to working precision".into())
        });
    }
    let points: Vec<(i64, Rational)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.valuation().map(|v| (i as i64, int(v))))
        .collect();
    let hull = lower_hull(&points);
    let verts: Vec<(i64, Rational)> = hull.iter().map(|&k| points[k].clone()).collect();
    for (i, c) in f.coeffs().iter().enumerate() {
        if c.is_zero() && !c.is_exact_zero() {
            let i = i as i64;
            let w = verts.windows(2).find(|w| w[0].0 <= i && i <= w[1].0).unwrap();
            let height = &w[0].1 + (&w[1].1 - &w[0].1) * int(i - w[0].0) / int(w[1].0 - w[0].0);
            if int(c.precision()) < height {
                return Err(Error::PrecisionExhausted(format!("coefficient of degree {i} is indeterminate")));
            }
        }
    }
    Ok(verts
        .windows(2)
        .map(|w| Segment {
            start: w[0].0 as usize,
            end: w[1].0 as usize,
            slope: (&w[1].1 - &w[0].1) / int(w[1].0 - w[0].0),
        })
        .collect())
}

/// Valuations of the roots of f with multiplicities, largest first:
/// a segment of slope s and length ℓ contributes ℓ roots of valuation −s.
pub fn root_valuations(f: &PadicPoly) -> Result<Vec<(Rational, usize)>> {
    let segs = newton_segments(f)?;
    Ok(segs.iter().map(|s| (-s.slope.clone(), s.end - s.start)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Context;
    use crate::rational::rat;

    #[test]
    fn hull_of_simple_polys() {
        let c = Context::new(5, 20).unwrap();
        // t^2 - 5: both roots of valuation 1/2
        let f = PadicPoly::from_ints(&c, &[-5, 0, 1]);
        assert_eq!(root_valuations(&f).unwrap(), vec![(rat(1, 2), 2)]);
        // (t - 1)(t - 5)
        let g = PadicPoly::from_ints(&c, &[5, -6, 1]);
        assert_eq!(root_valuations(&g).unwrap(), vec![(rat(1, 1), 1), (rat(0, 1), 1)]);
    }

    #[test]
    fn grouping_and_display() {
        let nv = NewtonVector::from_slopes(&[rat(0, 1), rat(2, 1), rat(1, 2), rat(1, 2)]);
        assert_eq!(nv.parts(), &[(rat(2, 1), 1), (rat(1, 2), 2), (rat(0, 1), 1)]);
        assert_eq!(nv.to_string(), "2,1/2,1/2,0");
        assert_eq!(nv.total(), rat(3, 1));
    }
}
