//! Limits of subspaces spanned by vectors whose entries are Laurent
//! polynomials in a parameter t, as t tends to 0 or to infinity.

use std::collections::BTreeMap;

use super::matrix::Matrix;
use super::subspace::Subspace;
use crate::error::{Error, Result};
use crate::padic::Padic;

/// A vector Σ_e t^e · v_e, keyed by exponent; zero components are dropped.
#[derive(Clone, Debug, Default)]
pub struct LaurentVector {
    pub terms: BTreeMap<i64, Vec<Padic>>,
}

impl LaurentVector {
    pub fn new(terms: BTreeMap<i64, Vec<Padic>>) -> Self {
        let mut v = Self { terms };
        v.prune();
        v
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.iter().all(Padic::is_zero));
    }
}

/// Laurent polynomial with scalar coefficients.
type Scalar = BTreeMap<i64, Padic>;

fn scalar_mul_add(acc: &mut Scalar, a: &Scalar, b: &Scalar, negate: bool) {
    for (ea, ca) in a {
        for (eb, cb) in b {
            let prod = ca * cb;
            let entry = acc.entry(ea + eb).or_insert_with(|| Padic::zero(ca.p()));
            *entry = if negate { &*entry - &prod } else { &*entry + &prod };
        }
    }
}

/// All k×k minors of the n×k matrix of Laurent vectors, keyed by the
/// bitmask of the selected rows; Laplace expansion along the last column.
fn laurent_minors(n: usize, vs: &[LaurentVector]) -> BTreeMap<u32, Scalar> {
    let entry = |r: usize, c: usize| -> Scalar {
        vs[c].terms.iter().filter(|(_, v)| !v[r].is_zero()).map(|(e, v)| (*e, v[r].clone())).collect()
    };
    let mut layer: BTreeMap<u32, Scalar> =
        (0..n).map(|r| (1u32 << r, entry(r, 0))).filter(|(_, m)| !m.is_empty()).collect();
    for c in 1..vs.len() {
        let col: Vec<Scalar> = (0..n).map(|r| entry(r, c)).collect();
        let mut next: BTreeMap<u32, Scalar> = BTreeMap::new();
        for (mask, minor) in &layer {
            for r in (0..n).filter(|r| mask >> r & 1 == 0) {
                if col[r].is_empty() {
                    continue;
                }
                let grown = mask | 1 << r;
                // row r sits at position #{rows of grown below r}; cofactor sign (−1)^(pos + c)
                let pos = (grown & ((1 << r) - 1)).count_ones() as usize;
                let acc = next.entry(grown).or_default();
                scalar_mul_add(acc, &col[r], minor, (pos + c) % 2 == 1);
            }
        }
        layer = next;
    }
    for m in layer.values_mut() {
        m.retain(|_, x| !x.is_zero());
    }
    layer.retain(|_, m| !m.is_empty());
    layer
}

/// Limit of span{v_1(t), ..., v_k(t)} (of dimension k for generic t).
///
/// The Plücker coordinates of the span are the k×k minors, Laurent
/// polynomials in t; their dominant coefficient vector is the Plücker vector
/// of the limit, from which a basis is read off by Cramer's rule against the
/// coordinate of least valuation.
pub fn limit_span(p: u32, n: usize, vectors: Vec<LaurentVector>, to_infinity: bool) -> Result<Subspace> {
    let k = vectors.len();
    if k == 0 {
        return Ok(Subspace::zero(p, n));
    }
    if k > n || vectors.iter().any(|v| v.terms.is_empty()) {
        return Err(Error::RankDeficient("generating vectors are dependent".into()));
    }
    let minors = laurent_minors(n, &vectors);
    let prec = vectors
        .iter()
        .flat_map(|v| v.terms.values().flatten())
        .map(Padic::precision)
        .filter(|&m| m < crate::padic::INF)
        .max()
        .unwrap_or(64);
    let exps = minors.values().flat_map(|m| m.keys().copied());
    let extreme = if to_infinity { exps.max() } else { exps.min() }
        .ok_or_else(|| Error::RankDeficient("generating vectors are dependent".into()))?;
    let plucker: BTreeMap<u32, Padic> =
        minors.iter().filter_map(|(mask, m)| m.get(&extreme).map(|c| (*mask, c.clone()))).collect();
    let (&pivot_mask, pivot) = plucker
        .iter()
        .min_by_key(|(_, c)| c.valuation().unwrap_or(i64::MAX))
        .expect("some coordinate is nonzero at the extreme exponent");
    let inv = pivot.inverse()?;
    let rows: Vec<usize> = (0..n).filter(|r| pivot_mask >> r & 1 == 1).collect();
    let mut basis = Matrix::zeros(p, n, k);
    for (a, &ra) in rows.iter().enumerate() {
        for r in 0..n {
            let value = if r == ra {
                Padic::one(p, prec)
            } else if pivot_mask >> r & 1 == 1 {
                Padic::zero(p)
            } else {
                let swapped = (pivot_mask & !(1 << ra)) | 1 << r;
                let (lo, hi) = (ra.min(r), ra.max(r));
                let between = rows.iter().filter(|&&x| x > lo && x < hi).count();
                let c = plucker.get(&swapped).cloned().unwrap_or_else(|| Padic::zero(p));
                let v = &c * &inv;
                if between % 2 == 1 {
                    -&v
                } else {
                    v
                }
            };
            basis.set(r, a, value);
        }
    }
    Ok(Subspace::span(&basis))
}
