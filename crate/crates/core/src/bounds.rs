//! Exact evaluation of the quantitative bounds behind the density theorem:
//! the binary multidimensional density bound, the tower closed form, the
//! smallest-t condition and the traced recursion on c.
//!
//! Everything is integer or rational arithmetic. Logarithm ceilings are
//! decided by comparing against powers of two.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Default limit on the decimal length of exact tower values.
pub const DEFAULT_DIGIT_CAP: u64 = 1_000_000;

/// Largest rank accepted by [`smallest_t`]; `q^r` is materialized.
pub const MAX_EXPONENT: u64 = 1 << 20;

/// Decimal-digit cap for exact values of the tower function.
#[derive(Clone, Debug)]
pub struct DigitCap {
    digits: u64,
    // least s such that 2^s has more than `digits` decimal digits
    threshold: BigUint,
}

impl DigitCap {
    pub fn new(digits: u64) -> Self {
        assert!(digits >= 1, "digit cap must be positive");
        let ten_pow = num_traits::pow(BigUint::from(10u32), digits as usize);
        // 10^D is never a power of two, so 2^s < 10^D  <=>  s < bits(10^D)
        DigitCap {
            digits,
            threshold: BigUint::from(ten_pow.bits()),
        }
    }

    pub fn default_cap() -> &'static DigitCap {
        static CAP: OnceLock<DigitCap> = OnceLock::new();
        CAP.get_or_init(|| DigitCap::new(DEFAULT_DIGIT_CAP))
    }

    pub fn digits(&self) -> u64 {
        self.digits
    }

    fn pow2_fits(&self, s: &BigUint) -> bool {
        s < &self.threshold
    }
}

/// Result of a bound function: an exact integer, or `T_height(arg)` when the
/// exact value would exceed the digit cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundValue {
    Exact(BigUint),
    Tower { height: u32, arg: BigUint },
}

impl BoundValue {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            BoundValue::Exact(v) => Some(v),
            BoundValue::Tower { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, BoundValue::Exact(_))
    }
}

impl From<u64> for BoundValue {
    fn from(v: u64) -> Self {
        BoundValue::Exact(BigUint::from(v))
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(v) => write!(f, "{v}"),
            BoundValue::Tower { height, arg } => write!(f, "T_{height}({arg})"),
        }
    }
}

/// Compares `x` with `T_height(arg)`.
fn cmp_exact_tower(x: &BigUint, height: u32, arg: &BigUint) -> Ordering {
    if height == 0 {
        return x.cmp(arg);
    }
    // T_height(arg) >= 2^arg
    let bits = BigUint::from(x.bits());
    if &bits <= arg {
        return Ordering::Less;
    }
    let a = arg
        .to_u64()
        .expect("x has more than arg bits, so arg fits in memory");
    if height == 1 {
        return x.cmp(&(BigUint::one() << a));
    }
    if a >= 64 {
        // T_{height-1}(2^a) >= 2^(2^a) has more than 2^64 bits
        return Ordering::Less;
    }
    cmp_exact_tower(x, height - 1, &(BigUint::one() << a))
}

fn cmp_tower_tower(h1: u32, a1: &BigUint, h2: u32, a2: &BigUint) -> Ordering {
    match h1.cmp(&h2) {
        Ordering::Equal => a1.cmp(a2),
        // T_h1(a1) = T_h2(T_{h1-h2}(a1))
        Ordering::Greater => cmp_exact_tower(a2, h1 - h2, a1).reverse(),
        Ordering::Less => cmp_exact_tower(a1, h2 - h1, a2),
    }
}

impl Ord for BoundValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use BoundValue::*;
        match (self, other) {
            (Exact(a), Exact(b)) => a.cmp(b),
            (Exact(a), Tower { height, arg }) => cmp_exact_tower(a, *height, arg),
            (Tower { height, arg }, Exact(b)) => cmp_exact_tower(b, *height, arg).reverse(),
            (
                Tower {
                    height: h1,
                    arg: a1,
                },
                Tower {
                    height: h2,
                    arg: a2,
                },
            ) => cmp_tower_tower(*h1, a1, *h2, a2),
        }
    }
}

impl PartialOrd for BoundValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Tower function `T_0(s) = s`, `T_i(s) = T_{i−1}(2^s)` under the default cap.
pub fn tower(c: u32, s: u64) -> BoundValue {
    tower_with(DigitCap::default_cap(), c, BigUint::from(s))
}

pub fn tower_with(cap: &DigitCap, c: u32, s: BigUint) -> BoundValue {
    let mut v = s;
    for done in 0..c {
        if !cap.pow2_fits(&v) {
            return BoundValue::Tower {
                height: c - done,
                arg: v,
            };
        }
        let shift = v.to_u64().expect("below the cap threshold");
        v = BigUint::one() << shift;
    }
    BoundValue::Exact(v)
}

/// `⌈log₂ x⌉` for a rational `x ≥ 1`.
pub fn ceil_log2(x: &Rational) -> u64 {
    assert!(x >= &Rational::one(), "ceil_log2 needs x >= 1");
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    // smallest k with den·2^k >= num
    let mut k = num.bits().saturating_sub(den.bits()).saturating_sub(1);
    while (den << k) < *num {
        k += 1;
    }
    k
}

fn check_eps_unit(eps: &Rational) -> Result<()> {
    if !eps.is_positive() || eps > &Rational::one() {
        return Err(Error::InvalidEpsilon(format!("{eps} is not in (0, 1]")));
    }
    Ok(())
}

/// `⌈log₂(1/ε)⌉` for `0 < ε ≤ 1`.
fn neg_log2_ceil(eps: &Rational) -> u64 {
    ceil_log2(&eps.recip())
}

/// Binary density bound `2^{m−2}·⌈1 − log₂ ε⌉`.
pub fn r_mdhj_binary(m: u64, eps: &Rational) -> Result<BigUint> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "binary density bound needs m >= 2, got {m}"
        )));
    }
    check_eps_unit(eps)?;
    let factor = 1 + neg_log2_ceil(eps);
    Ok((BigUint::one() << (m - 2)) * BigUint::from(factor))
}

/// Closed-form binary bound `T_c(m + d)` with its exponent `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub d: u64,
    pub top: u64,
    pub value: BoundValue,
}

/// `d = ⌈log₂⌈2 − log₂ ε⌉⌉`.
pub fn binary_d(eps: &Rational) -> Result<u64> {
    check_eps_unit(eps)?;
    let inner = 2 + neg_log2_ceil(eps);
    Ok(ceil_log2(&Rational::from_integer(BigInt::from(inner))))
}

pub fn r_main2_binary(m: u64, c: u64, eps: &Rational) -> Result<BoundValue> {
    Ok(r_main2_binary_traced(m, c, eps, DigitCap::default_cap())?.value)
}

pub fn r_main2_binary_traced(m: u64, c: u64, eps: &Rational, cap: &DigitCap) -> Result<ClosedForm> {
    if !(m > c && c >= 1) {
        return Err(Error::InvalidArgument(format!(
            "need m > c >= 1, got m={m}, c={c}"
        )));
    }
    let d = binary_d(eps)?;
    let top = m + d;
    let height = u32::try_from(c).map_err(|_| Error::Overflow(format!("tower height {c}")))?;
    Ok(ClosedForm {
        d,
        top,
        value: tower_with(cap, height, BigUint::from(top)),
    })
}

fn big_pow(q: u64, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(q), e as usize)
}

/// Whether `q^{1−c}(q^r − 1) ≤ (ε/2)(qⁿ − q^r)` holds.
pub fn averaging_condition(q: u64, c: u64, r: u64, eps: &Rational, n: u64) -> bool {
    if n <= r {
        return false;
    }
    // multiply through by 2·den·q^{c−1}
    let num = eps.numer().magnitude();
    let den = eps.denom().magnitude();
    let qr = big_pow(q, r);
    let lhs = BigUint::from(2u32) * den * (&qr - 1u32);
    let rhs = num * big_pow(q, c - 1) * (big_pow(q, n) - &qr);
    lhs <= rhs
}

/// Least `t ≥ r` such that the averaging condition holds for every `n > t`.
pub fn smallest_t(q: u64, c: u64, r: u64, eps: &Rational) -> Result<u64> {
    if q < 2 || c < 1 || r < 1 {
        return Err(Error::InvalidArgument(format!(
            "smallest_t needs q >= 2, c >= 1, r >= 1 (q={q}, c={c}, r={r})"
        )));
    }
    if !eps.is_positive() {
        return Err(Error::InvalidEpsilon(format!("{eps} is not positive")));
    }
    if r > MAX_EXPONENT || c > MAX_EXPONENT {
        return Err(Error::Overflow(format!(
            "q^r with r={r} is beyond the supported range"
        )));
    }
    // the left side is fixed and the right side grows with n
    let mut t = r;
    while !averaging_condition(q, c, r, eps, t + 1) {
        t += 1;
    }
    Ok(t)
}

/// One level of the recursion on c.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceLevel {
    pub c: u64,
    pub m: u64,
    #[serde(serialize_with = "ser_rational")]
    pub eps: Rational,
    /// `base(m − c + 1, q, ε/2)`; absent at the base level
    pub r: Option<u64>,
    /// smallest t for this level; absent at the base level
    pub t: Option<u64>,
    #[serde(serialize_with = "ser_decimal")]
    pub value: BigUint,
}

fn ser_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// `num/den` with the denominator always present.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("'{s}' is not a rational of the form num/den"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recursion {
    pub value: BoundValue,
    /// outermost level first
    pub trace: Vec<TraceLevel>,
}

/// The c = 1 bound `base(m, q, ε)`.
pub type BaseBound<'a> = dyn Fn(u64, u64, &Rational) -> Result<BigUint> + 'a;

/// Binary base case, usable as the injected `base` for q = 2.
pub fn binary_base(m: u64, q: u64, eps: &Rational) -> Result<BigUint> {
    if q != 2 {
        return Err(Error::Unsupported(format!(
            "no closed-form base bound for q = {q}"
        )));
    }
    r_mdhj_binary(m, eps)
}

fn to_u64(v: BigUint, what: &str) -> Result<u64> {
    v.to_u64()
        .ok_or_else(|| Error::Overflow(format!("{what} = {v} does not fit in 64 bits")))
}

/// Evaluates `R(m,q,c,ε) = max(t, R(r, q, c−1, q^{2−c} − q^{1−c}))` with
/// `r = base(m−c+1, q, ε/2)` and `R(m,q,1,ε) = base(m,q,ε)`.
pub fn r_main2_recursive(
    m: u64,
    q: u64,
    c: u64,
    eps: &Rational,
    base: &BaseBound<'_>,
) -> Result<Recursion> {
    let mut trace = Vec::new();
    let v = recurse(m, q, c, eps, base, &mut trace)?;
    Ok(Recursion {
        value: BoundValue::Exact(v),
        trace,
    })
}

fn recurse(
    m: u64,
    q: u64,
    c: u64,
    eps: &Rational,
    base: &BaseBound<'_>,
    trace: &mut Vec<TraceLevel>,
) -> Result<BigUint> {
    if !eps.is_positive() {
        return Err(Error::InvalidEpsilon(format!("{eps} at level c={c}")));
    }
    if !(m > c && c >= 1) {
        return Err(Error::InvalidArgument(format!(
            "need m > c >= 1, got m={m}, c={c}"
        )));
    }
    if q < 2 {
        return Err(Error::InvalidArgument(format!("q = {q}")));
    }
    if c == 1 {
        let value = base(m, q, eps)?;
        trace.push(TraceLevel {
            c,
            m,
            eps: eps.clone(),
            r: None,
            t: None,
            value: value.clone(),
        });
        return Ok(value);
    }
    let half = eps / Rational::from_integer(BigInt::from(2));
    let r = to_u64(base(m - c + 1, q, &half)?, "r")?;
    let t = smallest_t(q, c, r, eps)?;
    // q^{2−c} − q^{1−c} = (q − 1)/q^{c−1}
    let next_eps = Rational::new(BigInt::from(q - 1), BigInt::from(big_pow(q, c - 1)));
    let at = trace.len();
    trace.push(TraceLevel {
        c,
        m,
        eps: eps.clone(),
        r: Some(r),
        t: Some(t),
        value: BigUint::zero(),
    });
    let sub = recurse(r, q, c - 1, &next_eps, base, trace)?;
    let value = BigUint::from(t).max(sub);
    trace[at].value = value.clone();
    Ok(value)
}
