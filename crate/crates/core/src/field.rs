//! Arithmetic in GF(q) for prime powers q ≤ 16.
//!
//! An element is stored as its integer code in `[0, q)`. The base-p digits of
//! the code are the coefficients of a polynomial over GF(p), least significant
//! digit = constant term. For prime q the code is simply the residue mod p.
//!
//! Each extension field uses one frozen irreducible modulus so that point and
//! flat indices are reproducible:
//!
//! | q  | modulus        |
//! |----|----------------|
//! | 4  | x² + x + 1     |
//! | 8  | x³ + x + 1     |
//! | 9  | x² + 2x + 2    |
//! | 16 | x⁴ + x + 1     |

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A field element, encoded as described in the module docs.
pub type FieldElement = u8;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 16;

/// Frozen moduli, highest-degree coefficient first.
const MODULI: &[(u64, &[u8])] = &[
    (4, &[1, 1, 1]),
    (8, &[1, 0, 1, 1]),
    (9, &[1, 2, 2]),
    (16, &[1, 0, 0, 1, 1]),
];

const N: usize = MAX_ORDER as usize;

struct Tables {
    p: u8,
    k: u8,
    q: u8,
    modulus: Vec<u8>,
    add: [[u8; N]; N],
    mul: [[u8; N]; N],
    neg: [u8; N],
    inv: [u8; N],
    log: [u8; N],
    exp: [u8; 2 * N],
}

/// Immutable description of GF(q) together with its arithmetic tables.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    t: Arc<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.t.q == other.t.q
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.t.p)
            .field("k", &self.t.k)
            .field("q", &self.t.q)
            .field("modulus", &self.t.modulus)
            .finish()
    }
}

/// Splits `q` into `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn digits(code: u8, p: u8, k: u8) -> Vec<u8> {
    let mut out = Vec::with_capacity(k as usize);
    let mut c = code;
    for _ in 0..k {
        out.push(c % p);
        c /= p;
    }
    out
}

fn undigits(ds: &[u8], p: u8) -> u8 {
    ds.iter().rev().fold(0u8, |acc, &d| acc * p + d)
}

/// Multiplies two polynomials (coefficients low-to-high) modulo the monic
/// `modulus` (also low-to-high, including the leading 1).
fn poly_mulmod(a: &[u8], b: &[u8], modulus: &[u8], p: u8) -> Vec<u8> {
    let k = modulus.len() - 1;
    let p16 = p as u16;
    let mut prod = vec![0u16; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u16 * y as u16) % p16;
        }
    }
    for deg in (k..prod.len()).rev() {
        let lead = prod[deg];
        if lead == 0 {
            continue;
        }
        for (i, &m) in modulus.iter().enumerate() {
            let at = deg - k + i;
            prod[at] = (prod[at] + p16 * p16 - lead * m as u16) % p16;
        }
    }
    prod.truncate(k);
    prod.resize(k, 0);
    prod.into_iter().map(|c| c as u8).collect()
}

/// Remainder of `num` divided by `den` over GF(p); both low-to-high.
fn poly_rem(num: &[u8], den: &[u8], p: u8) -> Vec<u8> {
    let mut r: Vec<u8> = num.to_vec();
    let dd = den.iter().rposition(|&c| c != 0).expect("nonzero divisor");
    let lead_inv = (1..p)
        .find(|&x| (x as u16 * den[dd] as u16) % p as u16 == 1)
        .unwrap();
    while let Some(rd) = r.iter().rposition(|&c| c != 0) {
        if rd < dd {
            break;
        }
        let factor = (r[rd] as u16 * lead_inv as u16) % p as u16;
        for (i, &d) in den[..=dd].iter().enumerate() {
            let at = rd - dd + i;
            r[at] = ((r[at] as u16 + (p as u16 - factor) * d as u16) % p as u16) as u8;
        }
    }
    r
}

/// Irreducibility over GF(p) by trial division by every monic polynomial of
/// degree `1..deg`. `poly` is highest-degree first.
pub fn is_irreducible(p: u8, poly: &[u8]) -> bool {
    let low: Vec<u8> = poly.iter().rev().copied().collect();
    let deg = match low.iter().rposition(|&c| c != 0) {
        Some(d) => d,
        None => return false,
    };
    for d in 1..deg {
        let count = (p as u32).pow(d as u32);
        for tail in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut t = tail;
            for _ in 0..d {
                div.push((t % p as u32) as u8);
                t /= p as u32;
            }
            div.push(1);
            if poly_rem(&low, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds GF(q). Fails for non prime powers and for `q > 16`.
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(Error::Unsupported(format!(
                "GF({q}): field order above {MAX_ORDER}"
            )));
        }
        let (p, k, q) = (p as u8, k as u8, q as u8);
        let modulus: Vec<u8> = if k == 1 {
            Vec::new()
        } else {
            MODULI
                .iter()
                .find(|(order, _)| *order == q as u64)
                .map(|(_, m)| m.to_vec())
                .expect("modulus table covers every supported extension field")
        };
        debug_assert!(k == 1 || is_irreducible(p, &modulus));

        let mut add = [[0u8; N]; N];
        let mut neg = [0u8; N];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let s: Vec<u8> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize][b as usize] = undigits(&s, p);
            }
            let n: Vec<u8> = da.iter().map(|&x| (p - x) % p).collect();
            neg[a as usize] = undigits(&n, p);
        }

        // Multiplication goes through log/antilog tables built from a primitive element.
        let mod_low: Vec<u8> = if k == 1 {
            vec![0, 1]
        } else {
            modulus.iter().rev().copied().collect()
        };
        let poly_mul = |a: u8, b: u8| -> u8 {
            if k == 1 {
                ((a as u16 * b as u16) % p as u16) as u8
            } else {
                undigits(
                    &poly_mulmod(&digits(a, p, k), &digits(b, p, k), &mod_low, p),
                    p,
                )
            }
        };
        let order = q as usize - 1;
        let generator = (1..q)
            .find(|&g| {
                let mut x = 1u8;
                for i in 1..=order {
                    x = poly_mul(x, g);
                    if x == 1 {
                        return i == order;
                    }
                }
                false
            })
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = [0u8; 2 * N];
        let mut log = [0u8; N];
        let mut x = 1u8;
        for i in 0..order {
            exp[i] = x;
            exp[i + order] = x;
            log[x as usize] = i as u8;
            x = poly_mul(x, generator);
        }
        let mut mul = [[0u8; N]; N];
        let mut inv = [0u8; N];
        for a in 1..q as usize {
            for b in 1..q as usize {
                mul[a][b] = exp[log[a] as usize + log[b] as usize];
            }
            inv[a] = exp[(order - log[a] as usize) % order];
        }

        Ok(FieldSpec {
            t: Arc::new(Tables {
                p,
                k,
                q,
                modulus,
                add,
                mul,
                neg,
                inv,
                log,
                exp,
            }),
        })
    }

    pub fn p(&self) -> u64 {
        self.t.p as u64
    }

    pub fn k(&self) -> u32 {
        self.t.k as u32
    }

    pub fn q(&self) -> u64 {
        self.t.q as u64
    }

    /// The field order as a small integer, convenient for loops over elements.
    pub fn order(&self) -> u8 {
        self.t.q
    }

    /// Modulus coefficients, highest degree first; empty for prime fields.
    pub fn modulus(&self) -> &[u8] {
        &self.t.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        0..self.t.q
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElement> {
        1..self.t.q
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a < self.t.q
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.t.add[a as usize][b as usize]
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.t.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.t.mul[a as usize][b as usize]
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.t.inv[a as usize])
    }

    /// Inverse of a value already known to be nonzero.
    #[inline]
    pub(crate) fn inv_nz(&self, a: FieldElement) -> FieldElement {
        debug_assert!(a != 0);
        self.t.inv[a as usize]
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let order = self.t.q as u64 - 1;
        let l = (self.t.log[a as usize] as u64 * (e % order)) % order;
        self.t.exp[l as usize]
    }

    /// Frobenius map `a ↦ a^p`.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.p())
    }
}

/// Builds GF(q); see [`FieldSpec::new`].
pub fn field_make(q: u64) -> Result<FieldSpec> {
    FieldSpec::new(q)
}

pub fn fe_add(f: &FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement {
    f.add(a, b)
}

pub fn fe_mul(f: &FieldSpec, a: FieldElement, b: FieldElement) -> FieldElement {
    f.mul(a, b)
}

pub fn fe_inv(f: &FieldSpec, a: FieldElement) -> Result<FieldElement> {
    f.inv(a)
}
