use rayon::prelude::*;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use crate::rational::{int, is_small_prime, Rational};

const MAX_L: usize = 512;
const MAX_N: i64 = 64;

/// Valuation of ‖P_l(y·Ω)‖_{0,n} for val(Ω) = ω.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EstimateRow {
    pub p: u32,
    pub l: usize,
    pub n: i64,
    pub omega: Rational,
    pub norm_val: Rational,
}

#[derive(Clone, Debug)]
pub struct EstimateReport {
    pub rows: Vec<EstimateRow>,
    /// (l, n) pairs with l ≤ n where ‖P_l(yΩ)‖_{0,n} ≤ max_{i ≤ l} ‖P_i(y)‖_{0,n} fails.
    pub sup_bound_failures: Vec<(usize, i64)>,
    pub sup_bound_checked: usize,
    /// Per n: change of the norm valuation per unit of l between l = 1 and
    /// l = l_max.
    pub fits: Vec<(i64, Rational)>,
}

impl EstimateReport {
    pub fn sup_bound_holds(&self) -> bool {
        self.sup_bound_failures.is_empty()
    }
}

/// val_p of the coefficients of P_l(y) = Σ_k s(l, k)·y^k / l! for l ≤ upto,
/// s the signed Stirling numbers of the first kind; `None` for zero.
struct CoefficientValuations {
    vals: Vec<Vec<Option<i64>>>,
}

impl CoefficientValuations {
    fn new(p: u32, upto: usize) -> Self {
        let val = |x: &BigInt| -> Option<i64> {
            if x.is_zero() {
                return None;
            }
            let pb = BigInt::from(p);
            let (mut x, mut k) = (x.clone(), 0);
            loop {
                let (q, r) = x.div_rem(&pb);
                if !r.is_zero() {
                    return Some(k);
                }
                x = q;
                k += 1;
            }
        };
        let mut row = vec![BigInt::one()];
        let mut fact_val = 0i64;
        let mut vals = vec![vec![Some(0)]];
        for l in 0..upto {
            // s(l+1, k) = s(l, k−1) − l·s(l, k)
            let mut next = vec![BigInt::zero(); l + 2];
            for (k, c) in row.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * BigInt::from(l);
            }
            row = next;
            let mut m = l as u64 + 1;
            while m % p as u64 == 0 {
                fact_val += 1;
                m /= p as u64;
            }
            vals.push(row.iter().map(|c| val(c).map(|v| v - fact_val)).collect());
        }
        Self { vals }
    }

    /// val ‖P_l‖ on the disc of radius |p|^(n+ω) about 0.
    fn norm_val(&self, l: usize, n: i64, omega: &Rational) -> Rational {
        let radius = int(n) + omega;
        self.vals[l]
            .iter()
            .enumerate()
            .filter_map(|(k, v)| v.map(|v| int(v) + &radius * int(k as i64)))
            .min()
            .expect("binomial polynomials are nonzero")
    }
}

fn check_caps(p: u32, l_max: usize, n_max: i64) -> Result<()> {
    if !is_small_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not a supported prime")));
    }
    if l_max > MAX_L || !(0..=MAX_N).contains(&n_max) {
        return Err(Error::InvalidInput(format!("grid limited to l ≤ {MAX_L}, n ≤ {MAX_N}")));
    }
    Ok(())
}

/// Norm table for l ≤ l_max and 1 ≤ n ≤ n_max, the inequality
/// ‖P_l(yΩ)‖_{0,n} ≤ max_{i ≤ l} ‖P_i(y)‖_{0,n} for all l ≤ n ≤ n_max, and an
/// empirical decay rate in l for each n.
pub fn estimate_report(p: u32, l_max: usize, n_max: i64, omega: &Rational) -> Result<EstimateReport> {
    check_caps(p, l_max, n_max)?;
    let top = l_max.max(n_max as usize);
    let table = CoefficientValuations::new(p, top);
    let rows: Vec<EstimateRow> = (1..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            let table = &table;
            (0..=l_max).map(move |l| EstimateRow { p, l, n, omega: omega.clone(), norm_val: table.norm_val(l, n, omega) })
        })
        .collect();
    let zero = int(0);
    let checks: Vec<(usize, i64, bool)> = (1..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            let table = &table;
            let zero = &zero;
            // running min of valuations = running max of norms over i ≤ l
            let mut best: Option<Rational> = None;
            (0..=n as usize).map(move |l| {
                let v0 = table.norm_val(l, n, zero);
                best = Some(best.take().map_or(v0.clone(), |b: Rational| b.min(v0)));
                let lhs = table.norm_val(l, n, omega);
                (l, n, lhs >= *best.as_ref().unwrap())
            })
        })
        .collect();
    let sup_bound_checked = checks.len();
    let sup_bound_failures = checks.into_iter().filter(|(_, _, ok)| !ok).map(|(l, n, _)| (l, n)).collect();
    let fits = if l_max >= 2 {
        (1..=n_max)
            .map(|n| {
                let at = |l: usize| rows.iter().find(|r| r.n == n && r.l == l).unwrap().norm_val.clone();
                (n, (at(l_max) - at(1)) / int(l_max as i64 - 1))
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(EstimateReport { rows, sup_bound_failures, sup_bound_checked, fits })
}

/// min_{l ∈ [L, 2L)} val ‖P_l(yΩ)‖_{0,n} for each L, i.e. the largest norm
/// in each dyadic window.
#[derive(Clone, Debug)]
pub struct DecayEnvelope {
    pub p: u32,
    pub n: i64,
    pub omega: Rational,
    pub windows: Vec<(usize, Rational)>,
}

impl DecayEnvelope {
    /// Whether the envelope norm never grows from one window to the next.
    pub fn non_increasing(&self) -> bool {
        self.windows.windows(2).all(|w| w[1].1 >= w[0].1)
    }
}

pub fn decay_envelope(p: u32, n: i64, omega: &Rational, starts: &[usize]) -> Result<DecayEnvelope> {
    let top = starts.iter().map(|l| 2 * l).max().unwrap_or(0);
    check_caps(p, top.saturating_sub(1), n)?;
    let table = CoefficientValuations::new(p, top);
    let windows = starts
        .iter()
        .map(|&start| {
            let env = (start..2 * start).map(|l| table.norm_val(l, n, omega)).min().unwrap_or_else(|| int(0));
            (start, env)
        })
        .collect();
    Ok(DecayEnvelope { p, n, omega: omega.clone(), windows })
}
