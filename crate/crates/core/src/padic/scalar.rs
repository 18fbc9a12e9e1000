use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, is_small_prime, parse_rational, val_int, Rational};

/// Precision marker for exact zero.
pub const INF: i64 = i64::MAX;

/// Default absolute precision: values are known modulo p^64.
pub const DEFAULT_PRECISION: i64 = 64;

/// A prime together with the working absolute precision used when literals
/// and constants are embedded into Q_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Context {
    pub p: u32,
    pub precision: i64,
}

impl Context {
    pub fn new(p: u32, precision: i64) -> Result<Self> {
        if !is_small_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not a prime")));
        }
        if precision < 1 || precision > 100_000 {
            return Err(Error::InvalidInput(format!("unsupported precision {precision}")));
        }
        Ok(Self { p, precision })
    }

    pub fn with_default_precision(p: u32) -> Result<Self> {
        Self::new(p, DEFAULT_PRECISION)
    }

    pub fn zero(&self) -> Padic {
        Padic::zero(self.p)
    }

    pub fn one(&self) -> Padic {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> Padic {
        Padic::from_bigint(self.p, &BigInt::from(n), self.precision)
    }

    pub fn bigint(&self, n: &BigInt) -> Padic {
        Padic::from_bigint(self.p, n, self.precision)
    }

    pub fn rational(&self, q: &Rational) -> Padic {
        Padic::from_rational(self.p, q, self.precision)
    }

    /// p^k as a scalar (k may be negative).
    pub fn p_power(&self, k: i64) -> Padic {
        Padic {
            p: self.p,
            val: k,
            unit: BigUint::one(),
            prec: k.saturating_add(self.precision),
        }
    }

    pub fn parse(&self, s: &str) -> Result<Padic> {
        Ok(self.rational(&parse_rational(s)?))
    }
}

thread_local! {
    static POWERS: RefCell<HashMap<u32, Vec<BigUint>>> = RefCell::new(HashMap::new());
}

/// p^k for k >= 0, cached per thread.
pub(crate) fn ppow(p: u32, k: i64) -> BigUint {
    assert!(k >= 0, "negative exponent {k}");
    let k = k as usize;
    if k > 4096 {
        return BigUint::from(p).pow(k as u32);
    }
    POWERS.with(|cell| {
        let mut map = cell.borrow_mut();
        let table = map.entry(p).or_insert_with(|| vec![BigUint::one()]);
        while table.len() <= k {
            let next = table.last().unwrap() * p;
            table.push(next);
        }
        table[k].clone()
    })
}

fn inv_mod(u: &BigUint, m: &BigUint) -> BigUint {
    if m.is_one() {
        return BigUint::zero();
    }
    let a = BigInt::from_biguint(Sign::Plus, u.clone());
    let n = BigInt::from_biguint(Sign::Plus, m.clone());
    let eg = a.extended_gcd(&n);
    debug_assert!(eg.gcd.is_one(), "unit not invertible");
    eg.x.mod_floor(&n).to_biguint().unwrap()
}

fn strip_p(mut s: BigUint, p: u32) -> (i64, BigUint) {
    let pb = BigUint::from(p);
    let mut k = 0;
    loop {
        let (q, r) = s.div_rem(&pb);
        if !r.is_zero() {
            return (k, s);
        }
        s = q;
        k += 1;
    }
}

/// A p-adic number p^val · unit known modulo p^prec.
///
/// Zero is represented with `unit == 0`; it is exact when `prec == INF`
/// and otherwise means "zero to the known precision", i.e. O(p^prec).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Padic {
    p: u32,
    val: i64,
    unit: BigUint,
    prec: i64,
}

impl Padic {
    pub fn zero(p: u32) -> Self {
        Self { p, val: INF, unit: BigUint::zero(), prec: INF }
    }

    /// 1 known modulo p^prec.
    pub fn one(p: u32, prec: i64) -> Self {
        Self { p, val: 0, unit: BigUint::one(), prec: prec.max(1) }
    }

    /// O(p^m).
    pub fn approx_zero(p: u32, m: i64) -> Self {
        Self { p, val: m, unit: BigUint::zero(), prec: m }
    }

    pub fn from_bigint(p: u32, n: &BigInt, prec: i64) -> Self {
        if n.is_zero() {
            return Self::zero(p);
        }
        assert!(prec < INF, "finite precision required");
        let v = val_int(n, p).unwrap();
        if v >= prec {
            return Self::approx_zero(p, prec);
        }
        let r = prec - v;
        let m = BigInt::from_biguint(Sign::Plus, ppow(p, r));
        let reduced = n / BigInt::from_biguint(Sign::Plus, ppow(p, v));
        let unit = reduced.mod_floor(&m).to_biguint().unwrap();
        Self { p, val: v, unit, prec }
    }

    pub fn from_rational(p: u32, q: &Rational, prec: i64) -> Self {
        if q.numer().is_zero() {
            return Self::zero(p);
        }
        assert!(prec < INF, "finite precision required");
        let vn = val_int(q.numer(), p).unwrap();
        let vd = val_int(q.denom(), p).unwrap();
        let v = vn - vd;
        if v >= prec {
            return Self::approx_zero(p, prec);
        }
        let r = prec - v;
        let m = BigInt::from_biguint(Sign::Plus, ppow(p, r));
        let num = (q.numer() / BigInt::from_biguint(Sign::Plus, ppow(p, vn))).mod_floor(&m);
        let den = (q.denom() / BigInt::from_biguint(Sign::Plus, ppow(p, vd))).mod_floor(&m);
        let mu = m.to_biguint().unwrap();
        let unit = (num.to_biguint().unwrap() * inv_mod(&den.to_biguint().unwrap(), &mu)) % &mu;
        Self { p, val: v, unit, prec }
    }

    /// Builds p^val · (d0 + d1 p + ...) known modulo p^prec.
    pub fn from_digits(p: u32, val: i64, digits: &[u32], prec: i64) -> Result<Self> {
        if digits.iter().any(|&d| d >= p) {
            return Err(Error::InvalidInput("digit out of range".into()));
        }
        let mut unit = BigUint::zero();
        for &d in digits.iter().rev() {
            unit = unit * p + d;
        }
        if unit.is_zero() {
            return Ok(if prec == INF { Self::zero(p) } else { Self::approx_zero(p, prec) });
        }
        if digits[0] == 0 {
            return Err(Error::InvalidInput("leading unit digit must be nonzero".into()));
        }
        if prec <= val {
            return Err(Error::InvalidInput("precision must exceed valuation".into()));
        }
        let r = prec - val;
        let unit = unit % ppow(p, r);
        Ok(Self { p, val, unit, prec })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.unit.is_zero() && self.prec == INF
    }

    /// Valuation of a nonzero value; `None` for zero (exact or to precision).
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    pub fn checked_valuation(&self) -> Result<i64> {
        self.valuation().ok_or_else(|| {
            Error::PrecisionExhausted(format!("value is zero modulo {}^{}", self.p, self.prec))
        })
    }

    /// Lower bound for the valuation: the valuation itself, or the known
    /// precision for a zero.
    pub fn valuation_lower_bound(&self) -> i64 {
        if self.is_zero() {
            self.prec
        } else {
            self.val
        }
    }

    /// Absolute precision (`INF` for exact zero).
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn relative_precision(&self) -> Option<i64> {
        self.valuation().map(|v| self.prec - v)
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    /// Base-p digits of the unit part, length = relative precision.
    pub fn unit_digits(&self) -> Vec<u32> {
        let Some(r) = self.relative_precision() else {
            return Vec::new();
        };
        let mut out = Vec::with_capacity(r as usize);
        let mut u = self.unit.clone();
        let pb = BigUint::from(self.p);
        for _ in 0..r {
            let (q, d) = u.div_rem(&pb);
            out.push(d.to_u32().unwrap());
            u = q;
        }
        out
    }

    /// Forgets digits beyond p^m.
    pub fn truncate(&self, m: i64) -> Self {
        if m >= self.prec {
            return self.clone();
        }
        if self.is_zero() || self.val >= m {
            return Self::approx_zero(self.p, m);
        }
        let unit = &self.unit % ppow(self.p, m - self.val);
        Self { p: self.p, val: self.val, unit, prec: m }
    }

    /// Re-reads the stored representative at precision `m`; digits beyond
    /// the old precision are taken to be zero. Used only where the caller
    /// accounts for the extra digits separately.
    pub fn with_precision(&self, m: i64) -> Self {
        if m <= self.prec {
            return self.truncate(m);
        }
        if self.is_zero() {
            return Self::zero(self.p);
        }
        Self { p: self.p, val: self.val, unit: self.unit.clone(), prec: m }
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing p-adic numbers over different primes");
    }

    fn add_ref(&self, other: &Self) -> Self {
        self.check_prime(other);
        let m = self.prec.min(other.prec);
        if self.is_zero() {
            return other.truncate(m);
        }
        if other.is_zero() {
            return self.truncate(m);
        }
        let v = self.val.min(other.val);
        let r = m - v;
        let modulus = ppow(self.p, r);
        let mut s = BigUint::zero();
        for x in [self, other] {
            let shift = x.val - v;
            if shift < r {
                s += &x.unit * ppow(self.p, shift);
            }
        }
        s %= &modulus;
        if s.is_zero() {
            return Self::approx_zero(self.p, m);
        }
        let (k, unit) = strip_p(s, self.p);
        Self { p: self.p, val: v + k, unit, prec: m }
    }

    fn neg_ref(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let r = self.prec - self.val;
        let unit = ppow(self.p, r) - &self.unit;
        Self { p: self.p, val: self.val, unit, prec: self.prec }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.check_prime(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(self.p);
        }
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Self::approx_zero(self.p, self.prec.saturating_add(other.prec)),
            (true, false) => Self::approx_zero(self.p, self.prec + other.val),
            (false, true) => Self::approx_zero(self.p, other.prec + self.val),
            (false, false) => {
                let v = self.val + other.val;
                let r = (self.prec - self.val).min(other.prec - other.val);
                let unit = (&self.unit * &other.unit) % ppow(self.p, r);
                Self { p: self.p, val: v, unit, prec: v + r }
            }
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other);
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_exact_zero() {
            return Ok(Self::zero(self.p));
        }
        if self.is_zero() {
            return Ok(Self::approx_zero(self.p, self.prec - other.val));
        }
        let v = self.val - other.val;
        let r = (self.prec - self.val).min(other.prec - other.val);
        let modulus = ppow(self.p, r);
        let inv = inv_mod(&(&other.unit % &modulus), &modulus);
        let unit = (&self.unit * inv) % &modulus;
        Ok(Self { p: self.p, val: v, unit, prec: v + r })
    }

    pub fn inverse(&self) -> Result<Self> {
        let one = Self { p: self.p, val: 0, unit: BigUint::one(), prec: INF / 2 };
        one.checked_div(self)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut result = Self { p: self.p, val: 0, unit: BigUint::one(), prec: INF / 2 };
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        if result.prec == INF / 2 {
            // x^0: an exact one is not representable, so borrow x's relative precision
            let r = self.relative_precision().unwrap_or(DEFAULT_PRECISION).max(1);
            return Self { p: self.p, val: 0, unit: BigUint::one(), prec: r };
        }
        result
    }

    pub fn scale_by_p_power(&self, k: i64) -> Self {
        if self.is_exact_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return Self::approx_zero(self.p, self.prec + k);
        }
        Self { p: self.p, val: self.val + k, unit: self.unit.clone(), prec: self.prec + k }
    }

    /// Equality modulo the smaller of the two precisions.
    pub fn approx_eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    /// The unit part as an integer representative, i.e. value · p^(-val).
    pub fn unit_as_bigint(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.unit.clone())
    }

    /// Smallest-height rational a/b with |a|, |b| <= p^(r/4) congruent to
    /// the value, where r is the relative precision.
    pub fn reconstruct(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        let r = self.prec - self.val;
        let m = BigInt::from_biguint(Sign::Plus, ppow(self.p, r));
        let bound = BigInt::from_biguint(Sign::Plus, ppow(self.p, (r / 4).max(0)));
        let (mut r0, mut r1) = (m.clone(), self.unit_as_bigint());
        let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
        while r1 > bound {
            let q = &r0 / &r1;
            let r2 = &r0 - &q * &r1;
            let s2 = &s0 - &q * &s1;
            r0 = std::mem::replace(&mut r1, r2);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if s1.is_zero() || s1.abs() > bound || r1.is_zero() {
            return None;
        }
        if !s1.gcd(&BigInt::from(self.p)).is_one() {
            return None;
        }
        let mut q = Rational::new(r1, s1);
        let pk = Rational::from_integer(BigInt::from_biguint(Sign::Plus, ppow(self.p, self.val.abs())));
        if self.val >= 0 {
            q *= pk;
        } else {
            q /= pk;
        }
        Some(q)
    }
}

impl Add for &Padic {
    type Output = Padic;
    fn add(self, rhs: &Padic) -> Padic {
        self.add_ref(rhs)
    }
}

impl Sub for &Padic {
    type Output = Padic;
    fn sub(self, rhs: &Padic) -> Padic {
        self.add_ref(&rhs.neg_ref())
    }
}

impl Mul for &Padic {
    type Output = Padic;
    fn mul(self, rhs: &Padic) -> Padic {
        self.mul_ref(rhs)
    }
}

impl Neg for &Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        self.neg_ref()
    }
}

impl Add for Padic {
    type Output = Padic;
    fn add(self, rhs: Padic) -> Padic {
        self.add_ref(&rhs)
    }
}

impl Sub for Padic {
    type Output = Padic;
    fn sub(self, rhs: Padic) -> Padic {
        &self - &rhs
    }
}

impl Mul for Padic {
    type Output = Padic;
    fn mul(self, rhs: Padic) -> Padic {
        self.mul_ref(&rhs)
    }
}

impl Neg for Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        self.neg_ref()
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        if self.is_zero() {
            return write!(f, "O({}^{})", self.p, self.prec);
        }
        if let Some(q) = self.reconstruct() {
            return write!(f, "{}", format_rational(&q));
        }
        let digits = self.unit_digits();
        let shown: Vec<String> = digits.iter().take(8).map(|d| d.to_string()).collect();
        write!(
            f,
            "{}^{}*({}{}) + O({}^{})",
            self.p,
            self.val,
            shown.join(" "),
            if digits.len() > 8 { " ..." } else { "" },
            self.p,
            self.prec
        )
    }
}

/// Binary operation selector for [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked arithmetic: rejects mixed primes, division by zero, and sums of
/// nonzero operands whose cancellation leaves no known digit.
pub fn arith(a: &Padic, b: &Padic, op: ArithOp) -> Result<Padic> {
    if a.p != b.p {
        return Err(Error::PrimeMismatch(a.p, b.p));
    }
    let out = match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    };
    if matches!(op, ArithOp::Add | ArithOp::Sub) && !a.is_zero() && !b.is_zero() && out.is_zero() {
        return Err(Error::PrecisionExhausted(format!(
            "cancellation leaves no known digit below {}^{}",
            out.p, out.prec
        )));
    }
    Ok(out)
}
