//! Brute-force reference implementations used to check the library.
//!
//! Everything here works over prime fields with plain modular arithmetic and
//! shares no code with the crate beyond reading point coordinates.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use pgeom::Geometry;

pub type Vector = Vec<u8>;

fn inv_mod(a: u8, p: u8) -> u8 {
    (1..p)
        .find(|&b| (a as u32 * b as u32) % p as u32 == 1)
        .expect("nonzero element")
}

/// Scales `v` so its first nonzero entry is 1; false for the zero vector.
pub fn canon(v: &mut [u8], p: u8) -> bool {
    let Some(&lead) = v.iter().find(|&&x| x != 0) else {
        return false;
    };
    let s = inv_mod(lead, p);
    for x in v.iter_mut() {
        *x = ((*x as u32 * s as u32) % p as u32) as u8;
    }
    true
}

/// Every vector of GF(p)^n.
pub fn all_vectors(n: usize, p: u8) -> Vec<Vector> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| (0..p).map(move |a| [v.clone(), vec![a]].concat()))
            .collect();
    }
    out
}

/// Canonical representatives of the points of PG(n−1, p).
pub fn all_points(n: usize, p: u8) -> Vec<Vector> {
    all_vectors(n, p)
        .into_iter()
        .filter(|v| v.iter().any(|&x| x != 0) && v.iter().find(|&&x| x != 0) == Some(&1))
        .collect()
}

fn add_scaled(a: &[u8], b: &[u8], s: u8, p: u8) -> Vector {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| ((x as u32 + s as u32 * y as u32) % p as u32) as u8)
        .collect()
}

/// All vectors in the linear span of `vs`.
pub fn closure(vs: &[Vector], n: usize, p: u8) -> HashSet<Vector> {
    let mut set: HashSet<Vector> = HashSet::from([vec![0; n]]);
    for v in vs {
        let mut next = HashSet::new();
        for s in &set {
            for a in 0..p {
                next.insert(add_scaled(s, v, a, p));
            }
        }
        set = next;
    }
    set
}

pub fn rank_of(vs: &[Vector], n: usize, p: u8) -> usize {
    let size = closure(vs, n, p).len();
    let mut r = 0;
    while (p as usize).pow(r as u32) < size {
        r += 1;
    }
    r
}

fn prime_of(g: &Geometry) -> u8 {
    let q = g.field().q();
    assert!(
        g.field().k() == 1,
        "oracle handles prime fields only, got q = {q}"
    );
    q as u8
}

/// Every image of `guest` under a linear map into GF(p)^n that is injective
/// on the span of the guest, as a set of canonical vectors.
pub fn all_images(guest: &[Vector], a: usize, n: usize, p: u8) -> BTreeSet<BTreeSet<Vector>> {
    // basis drawn from the guest itself
    let mut basis: Vec<Vector> = Vec::new();
    for v in guest {
        if !closure(&basis, a, p).contains(v) {
            basis.push(v.clone());
        }
    }
    let r = basis.len();
    // coefficients of each guest vector in that basis
    let coeffs: Vec<Vector> = guest
        .iter()
        .map(|v| {
            all_vectors(r, p)
                .into_iter()
                .find(|c| {
                    let mut acc = vec![0; a];
                    for (ci, b) in c.iter().zip(&basis) {
                        acc = add_scaled(&acc, b, *ci, p);
                    }
                    &acc == v
                })
                .expect("guest vector lies in the span of its basis")
        })
        .collect();
    let targets = all_vectors(n, p);
    let mut images = BTreeSet::new();
    let mut choice = vec![0usize; r];
    loop {
        let ws: Vec<Vector> = choice.iter().map(|&i| targets[i].clone()).collect();
        if closure(&ws, n, p).len() == (p as usize).pow(r as u32) {
            let mut img = BTreeSet::new();
            for c in &coeffs {
                let mut acc = vec![0; n];
                for (ci, w) in c.iter().zip(&ws) {
                    acc = add_scaled(&acc, w, *ci, p);
                }
                assert!(canon(&mut acc, p));
                img.insert(acc);
            }
            images.insert(img);
        }
        // odometer over q^{n r} choices
        let mut i = 0;
        loop {
            if i == r {
                return images;
            }
            choice[i] += 1;
            if choice[i] < targets.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

pub fn brute_contains(host: &Geometry, guest: &Geometry) -> bool {
    let p = prime_of(host);
    assert_eq!(p, prime_of(guest));
    let host_set: HashSet<Vector> = host.vectors().into_iter().collect();
    if guest.is_empty() {
        return true;
    }
    all_images(&guest.vectors(), guest.ambient(), host.ambient(), p)
        .iter()
        .any(|img| img.iter().all(|v| host_set.contains(v)))
}

/// ex_q(H; n) by checking every subset of PG(n−1, p).
pub fn naive_ex(h: &Geometry, n: usize) -> usize {
    let p = prime_of(h);
    let pts = all_points(n, p);
    assert!(pts.len() <= 20, "naive oracle over {} points", pts.len());
    let pos = |v: &Vector| pts.iter().position(|w| w == v).unwrap() as u64;
    let masks: Vec<u64> = all_images(&h.vectors(), h.ambient(), n, p)
        .iter()
        .map(|img| img.iter().fold(0u64, |m, v| m | (1 << pos(v))))
        .collect();
    (0u64..1 << pts.len())
        .filter(|&s| masks.iter().all(|&m| m & s != m))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap()
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// ⌈log₂ x⌉ for positive rational x, by doubling.
pub fn ceil_log2(x: &BigRational) -> i64 {
    let mut k = 0i64;
    let mut pow = BigRational::one();
    if *x <= pow {
        while pow.clone() / BigRational::from_integer(BigInt::from(2)) >= *x {
            pow /= BigRational::from_integer(BigInt::from(2));
            k -= 1;
        }
        return k;
    }
    while pow < *x {
        pow *= BigRational::from_integer(BigInt::from(2));
        k += 1;
    }
    k
}

pub fn tower(c: u32, s: u64) -> BigUint {
    let mut v = BigUint::from(s);
    for _ in 0..c {
        let e = u64::try_from(&v).expect("tower argument fits in 64 bits");
        v = BigUint::one() << e;
    }
    v
}

/// 2^{m−2}⌈1 − log₂ ε⌉ for m ≥ 2.
pub fn mdhj_binary(m: u64, eps: &BigRational) -> BigUint {
    let inv = BigRational::one() / eps;
    let k = 1 + ceil_log2(&inv);
    assert!(k >= 1, "ε ≤ 1 expected");
    BigUint::from(k as u64) << (m - 2)
}

/// T_c(m + d) with d = ⌈log₂⌈2 − log₂ ε⌉⌉.
pub fn main2_binary(m: u64, c: u32, eps: &BigRational) -> BigUint {
    let inner = 2 + ceil_log2(&(BigRational::one() / eps));
    let d = ceil_log2(&BigRational::from_integer(BigInt::from(inner)));
    tower(c, m + d as u64)
}

/// Least t ≥ r with q^{1−c}(q^r − 1) ≤ (ε/2)(q^{t+1} − q^r).
pub fn smallest_t(q: u64, c: u64, r: u64, eps: &BigRational) -> u64 {
    let big = |x: u64| BigRational::from_integer(BigInt::from(x));
    let pow = |e: u64| BigRational::from_integer(BigInt::from(q).pow(e as u32));
    let lhs = (pow(r) - big(1)) / pow(c - 1);
    let mut n = r + 1;
    while lhs > eps / big(2) * (pow(n) - pow(r)) {
        n += 1;
    }
    n - 1
}
