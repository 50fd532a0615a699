//! Points and flats of PG(n−1, q).
//!
//! "Rank" is always subspace dimension: a rank-k flat is a k-dimensional
//! subspace of GF(q)^n and holds (q^k − 1)/(q − 1) points.
//!
//! A point is stored as its canonical vector (first nonzero coordinate 1).
//! Its index is its position in the lexicographic order of canonical vectors,
//! coordinate 0 most significant, so `(0,…,0,1)` has index 0.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::linalg::{self, Echelon, Row};

/// Number of points of PG(n−1, q): (qⁿ − 1)/(q − 1).
pub fn pg_size(n: usize, q: u64) -> u64 {
    (0..n as u32).map(|i| q.pow(i)).sum()
}

/// Gaussian binomial `[n choose k]_q`, the number of rank-k flats of PG(n−1, q).
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k as u32 {
        num *= q.pow(n as u32 - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// A canonical projective point together with its enumeration index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    index: u32,
    coords: Row,
}

impl Point {
    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn ambient(&self) -> usize {
        self.coords.len()
    }
}

/// A flat stored as the reduced row-echelon basis of its subspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flat {
    ambient: usize,
    q: u64,
    rows: Vec<Row>,
    pivots: Vec<usize>,
}

impl Flat {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Row] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn echelon(&self, f: &FieldSpec) -> Echelon {
        Echelon::from_rows(f, self.rows.iter().map(|r| r.as_slice()))
    }
}

/// The ambient projective geometry PG(n−1, q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    field: FieldSpec,
    n: usize,
    size: u32,
    // qpow[i] = q^i
    qpow: Vec<u64>,
}

impl Space {
    /// Panics if the space has more than `u32::MAX` points.
    pub fn new(n: usize, field: &FieldSpec) -> Self {
        let q = field.q();
        let size = pg_size(n, q);
        assert!(
            size <= u32::MAX as u64,
            "PG({}, {q}) is too large to index",
            n.saturating_sub(1)
        );
        let qpow = (0..=n as u32).map(|i| q.pow(i)).collect();
        Space {
            field: field.clone(),
            n,
            size: size as u32,
            qpow,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.field.q()
    }

    /// Number of points.
    pub fn size(&self) -> u32 {
        self.size
    }

    fn check_vec(&self, v: &[FieldElement]) {
        assert_eq!(v.len(), self.n, "vector length does not match ambient rank");
        debug_assert!(v.iter().all(|&x| self.field.contains(x)));
    }

    fn check_flat(&self, flat: &Flat) {
        assert!(
            flat.ambient == self.n && flat.q == self.q(),
            "flat belongs to a different ambient space"
        );
    }

    /// Index of a vector that is already canonical.
    pub fn index_of(&self, v: &[FieldElement]) -> u32 {
        let lead = v.iter().position(|&x| x != 0).expect("nonzero vector");
        debug_assert_eq!(v[lead], 1);
        let q = self.q();
        let offset = (self.qpow[self.n - 1 - lead] - 1) / (q - 1);
        let tail = v[lead + 1..]
            .iter()
            .fold(0u64, |acc, &x| acc * q + x as u64);
        (offset + tail) as u32
    }

    /// Canonicalizes `v` in place and returns its index; `None` for zero.
    pub fn canonical_index(&self, v: &mut [FieldElement]) -> Option<u32> {
        linalg::normalize(&self.field, v).then(|| self.index_of(v))
    }

    pub fn write_coords(&self, index: u32, out: &mut [FieldElement]) {
        assert!(index < self.size, "point index out of range");
        let q = self.q();
        let mut idx = index as u64;
        let mut lead = self.n - 1;
        loop {
            let block = self.qpow[self.n - 1 - lead];
            if idx < block {
                break;
            }
            idx -= block;
            lead -= 1;
        }
        out[..lead].iter_mut().for_each(|x| *x = 0);
        out[lead] = 1;
        for slot in out[lead + 1..].iter_mut().rev() {
            *slot = (idx % q) as u8;
            idx /= q;
        }
    }

    pub fn coords(&self, index: u32) -> Row {
        let mut v = vec![0; self.n];
        self.write_coords(index, &mut v);
        v
    }

    pub fn point(&self, index: u32) -> Point {
        Point {
            index,
            coords: self.coords(index),
        }
    }

    /// The canonical representative of `v`.
    pub fn canonical_point(&self, v: &[FieldElement]) -> Result<Point> {
        self.check_vec(v);
        let mut coords = v.to_vec();
        let index = self.canonical_index(&mut coords).ok_or(Error::ZeroVector)?;
        Ok(Point { index, coords })
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.size).map(|i| self.point(i))
    }

    pub fn enumerate_points(&self) -> Vec<Point> {
        self.points().collect()
    }

    fn flat_from_echelon(&self, e: Echelon) -> Flat {
        let pivots = e.pivots().to_vec();
        Flat {
            ambient: self.n,
            q: self.q(),
            rows: e.into_rows(),
            pivots,
        }
    }

    pub fn empty_flat(&self) -> Flat {
        self.flat_from_echelon(Echelon::new())
    }

    pub fn full_flat(&self) -> Flat {
        let rows: Vec<Row> = (0..self.n)
            .map(|i| (0..self.n).map(|j| (i == j) as u8).collect())
            .collect();
        Flat {
            ambient: self.n,
            q: self.q(),
            rows,
            pivots: (0..self.n).collect(),
        }
    }

    /// Flat spanned by arbitrary vectors (zero vectors are ignored).
    pub fn span_vectors<'a>(&self, vs: impl IntoIterator<Item = &'a [FieldElement]>) -> Flat {
        let mut e = Echelon::new();
        for v in vs {
            self.check_vec(v);
            e.insert(&self.field, v);
        }
        self.flat_from_echelon(e)
    }

    pub fn span<'a>(&self, points: impl IntoIterator<Item = &'a Point>) -> Flat {
        self.span_vectors(points.into_iter().map(|p| p.coords()))
    }

    pub fn span_indices(&self, indices: impl IntoIterator<Item = u32>) -> Flat {
        let mut e = Echelon::new();
        let mut buf = vec![0; self.n];
        for i in indices {
            self.write_coords(i, &mut buf);
            e.insert(&self.field, &buf);
        }
        self.flat_from_echelon(e)
    }

    pub fn flat_contains_vec(&self, flat: &Flat, v: &[FieldElement]) -> bool {
        self.check_flat(flat);
        self.check_vec(v);
        let mut w = v.to_vec();
        for (row, &pc) in flat.rows.iter().zip(&flat.pivots) {
            let c = w[pc];
            if c != 0 {
                linalg::axpy(&self.field, &mut w, self.field.neg(c), row);
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn flat_contains_point(&self, flat: &Flat, p: &Point) -> bool {
        self.flat_contains_vec(flat, p.coords())
    }

    /// Intersection via annihilators: `F1 ∩ F2 = ann(ann(F1) ∪ ann(F2))`.
    pub fn intersect(&self, a: &Flat, b: &Flat) -> Flat {
        self.check_flat(a);
        self.check_flat(b);
        let f = &self.field;
        let mut dual = linalg::nullspace(f, &a.rows, self.n);
        dual.extend(linalg::nullspace(f, &b.rows, self.n));
        let meet = linalg::nullspace(f, &dual, self.n);
        self.flat_from_echelon(linalg::rref(f, &meet))
    }

    /// `F + p`, the flat spanned by `F` and a point outside it.
    pub fn extend_flat(&self, flat: &Flat, p: &Point) -> Result<Flat> {
        self.check_flat(flat);
        let mut e = flat.echelon(&self.field);
        if !e.insert(&self.field, p.coords()) {
            return Err(Error::PointInFlat);
        }
        Ok(self.flat_from_echelon(e))
    }

    /// Indices of every point of the flat, in no particular order.
    pub fn flat_point_indices(&self, flat: &Flat) -> Vec<u32> {
        self.check_flat(flat);
        let r = flat.rank();
        let q = self.q();
        let mut out = Vec::with_capacity(pg_size(r, q) as usize);
        let mut coeffs = vec![0u8; r];
        let mut v = vec![0u8; self.n];
        // Coefficient vectors with leading entry 1; RREF makes the combination canonical.
        for lead in 0..r {
            let tail_len = r - lead - 1;
            for tail in 0..q.pow(tail_len as u32) {
                coeffs.iter_mut().for_each(|c| *c = 0);
                coeffs[lead] = 1;
                let mut t = tail;
                for slot in coeffs[lead + 1..].iter_mut().rev() {
                    *slot = (t % q) as u8;
                    t /= q;
                }
                linalg::combine(&self.field, &coeffs, &flat.rows, &mut v);
                out.push(self.index_of(&v));
            }
        }
        out
    }

    pub fn flat_points(&self, flat: &Flat) -> Vec<Point> {
        let mut idx = self.flat_point_indices(flat);
        idx.sort_unstable();
        idx.into_iter().map(|i| self.point(i)).collect()
    }

    /// Pivot-column patterns of rank-k echelon matrices, lexicographic.
    pub fn pivot_patterns(&self, k: usize) -> Vec<Vec<usize>> {
        assert!(k <= self.n);
        (0..self.n).combinations(k).collect()
    }

    /// Every flat whose echelon basis has exactly these pivot columns.
    pub fn flats_with_pivots(&self, pivots: Vec<usize>) -> impl Iterator<Item = Flat> + '_ {
        let mut free: Vec<(usize, usize)> = Vec::new();
        for (i, &pc) in pivots.iter().enumerate() {
            for col in pc + 1..self.n {
                if !pivots.contains(&col) {
                    free.push((i, col));
                }
            }
        }
        let q = self.q() as u128;
        let total = q.pow(free.len() as u32);
        (0..total).map(move |mut counter| {
            let mut rows: Vec<Row> = pivots
                .iter()
                .map(|&pc| {
                    let mut r = vec![0u8; self.n];
                    r[pc] = 1;
                    r
                })
                .collect();
            for &(i, col) in free.iter().rev() {
                rows[i][col] = (counter % q) as u8;
                counter /= q;
            }
            Flat {
                ambient: self.n,
                q: self.q(),
                rows,
                pivots: pivots.clone(),
            }
        })
    }

    /// All rank-k flats, each exactly once.
    pub fn flats(&self, k: usize) -> impl Iterator<Item = Flat> + '_ {
        self.pivot_patterns(k)
            .into_iter()
            .flat_map(move |pat| self.flats_with_pivots(pat))
    }

    pub fn enumerate_flats(&self, k: usize) -> Vec<Flat> {
        self.flats(k).collect()
    }

    /// Flat spanned by the first `k` standard basis vectors.
    pub fn coordinate_flat(&self, k: usize) -> Flat {
        assert!(k <= self.n);
        let rows: Vec<Row> = (0..k)
            .map(|i| (0..self.n).map(|j| (i == j) as u8).collect())
            .collect();
        Flat {
            ambient: self.n,
            q: self.q(),
            rows,
            pivots: (0..k).collect(),
        }
    }
}
