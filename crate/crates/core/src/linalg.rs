//! Dense row-vector linear algebra over GF(q).

use crate::field::{FieldElement, FieldSpec};

pub type Row = Vec<FieldElement>;

/// `acc += coef * row`
#[inline]
pub fn axpy(f: &FieldSpec, acc: &mut [FieldElement], coef: FieldElement, row: &[FieldElement]) {
    if coef == 0 {
        return;
    }
    for (a, &r) in acc.iter_mut().zip(row) {
        *a = f.add(*a, f.mul(coef, r));
    }
}

#[inline]
pub fn scale(f: &FieldSpec, v: &mut [FieldElement], s: FieldElement) {
    for x in v.iter_mut() {
        *x = f.mul(*x, s);
    }
}

/// Scales `v` in place so that its first nonzero entry is 1. Returns `false`
/// for the zero vector.
pub fn normalize(f: &FieldSpec, v: &mut [FieldElement]) -> bool {
    match v.iter().position(|&x| x != 0) {
        Some(i) => {
            if v[i] != 1 {
                let s = f.inv_nz(v[i]);
                scale(f, &mut v[i..], s);
            }
            true
        }
        None => false,
    }
}

/// Reduced row-echelon basis built one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<Row>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rows<'a>(
        f: &FieldSpec,
        rows: impl IntoIterator<Item = &'a [FieldElement]>,
    ) -> Self {
        let mut e = Self::new();
        for r in rows {
            e.insert(f, r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Row> {
        self.rows
    }

    /// Residual of `v` after eliminating every pivot column.
    pub fn reduce_in_place(&self, f: &FieldSpec, v: &mut [FieldElement]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                axpy(f, v, f.neg(c), row);
            }
        }
    }

    pub fn contains(&self, f: &FieldSpec, v: &[FieldElement]) -> bool {
        let mut w = v.to_vec();
        self.reduce_in_place(f, &mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span. Returns `true` if the rank went up.
    pub fn insert(&mut self, f: &FieldSpec, v: &[FieldElement]) -> bool {
        let mut w = v.to_vec();
        self.reduce_in_place(f, &mut w);
        let pc = match w.iter().position(|&x| x != 0) {
            Some(pc) => pc,
            None => return false,
        };
        let s = f.inv_nz(w[pc]);
        scale(f, &mut w, s);
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                axpy(f, row, f.neg(c), &w);
            }
        }
        let at = self.pivots.partition_point(|&p| p < pc);
        self.rows.insert(at, w);
        self.pivots.insert(at, pc);
        true
    }
}

/// Reduced row-echelon form of the row space of `rows`, zero rows dropped.
pub fn rref(f: &FieldSpec, rows: &[Row]) -> Echelon {
    Echelon::from_rows(f, rows.iter().map(|r| r.as_slice()))
}

/// Basis of `{x : r·x = 0 for every row r}` in ambient dimension `n`.
pub fn nullspace(f: &FieldSpec, rows: &[Row], n: usize) -> Vec<Row> {
    let e = rref(f, rows);
    let mut is_pivot = vec![false; n];
    for &p in e.pivots() {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&j| !is_pivot[j])
        .map(|j| {
            let mut x = vec![0; n];
            x[j] = 1;
            for (row, &pc) in e.rows().iter().zip(e.pivots()) {
                x[pc] = f.neg(row[j]);
            }
            x
        })
        .collect()
}

/// `coeffs · rows`, written into `out`.
pub fn combine(f: &FieldSpec, coeffs: &[FieldElement], rows: &[Row], out: &mut [FieldElement]) {
    out.iter_mut().for_each(|x| *x = 0);
    for (&c, row) in coeffs.iter().zip(rows) {
        axpy(f, out, c, row);
    }
}

pub fn mat_mul(f: &FieldSpec, a: &[Row], b: &[Row], cols: usize) -> Vec<Row> {
    a.iter()
        .map(|ra| {
            let mut out = vec![0; cols];
            combine(f, ra, b, &mut out);
            out
        })
        .collect()
}

/// Inverse of a square matrix, or `None` if singular.
pub fn invert(f: &FieldSpec, m: &[Row]) -> Option<Vec<Row>> {
    let n = m.len();
    let mut aug: Vec<Row> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| (i == j) as u8));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| aug[r][col] != 0)?;
        aug.swap(col, piv);
        let s = f.inv_nz(aug[col][col]);
        scale(f, &mut aug[col], s);
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != col && row[col] != 0 {
                let c = f.neg(row[col]);
                axpy(f, row, c, &pivot_row);
            }
        }
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Coordinates of vectors with respect to a fixed independent list, with the
/// combination tracked through elimination.
#[derive(Clone, Debug)]
pub struct Coordinates {
    echelon: Vec<(Row, Row)>,
    pivots: Vec<usize>,
    m: usize,
}

impl Coordinates {
    /// `basis` must be linearly independent.
    pub fn new(f: &FieldSpec, basis: &[Row]) -> Self {
        let m = basis.len();
        let mut echelon: Vec<(Row, Row)> = Vec::with_capacity(m);
        let mut pivots = Vec::with_capacity(m);
        for (i, b) in basis.iter().enumerate() {
            let mut v = b.clone();
            let mut comb = vec![0u8; m];
            comb[i] = 1;
            for ((row, rc), &pc) in echelon.iter().zip(&pivots) {
                let c = v[pc];
                if c != 0 {
                    let nc = f.neg(c);
                    axpy(f, &mut v, nc, row);
                    axpy(f, &mut comb, nc, rc);
                }
            }
            let pc = v
                .iter()
                .position(|&x| x != 0)
                .expect("basis must be independent");
            let s = f.inv_nz(v[pc]);
            scale(f, &mut v, s);
            scale(f, &mut comb, s);
            echelon.push((v, comb));
            pivots.push(pc);
        }
        Coordinates { echelon, pivots, m }
    }

    /// `Some(a)` with `a · basis = v`, or `None` when `v` is outside the span.
    pub fn solve(&self, f: &FieldSpec, v: &[FieldElement]) -> Option<Row> {
        let mut w = v.to_vec();
        let mut coords = vec![0u8; self.m];
        for ((row, rc), &pc) in self.echelon.iter().zip(&self.pivots) {
            let c = w[pc];
            if c != 0 {
                axpy(f, &mut w, f.neg(c), row);
                axpy(f, &mut coords, c, rc);
            }
        }
        w.iter().all(|&x| x == 0).then_some(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_drops_dependent_rows() {
        let f = FieldSpec::new(3).unwrap();
        let e = rref(&f, &[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 2]]);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.rows(), &[vec![1, 2, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn nullspace_annihilates() {
        let f = FieldSpec::new(5).unwrap();
        let rows = vec![vec![1, 2, 3, 4], vec![0, 1, 1, 0]];
        let ns = nullspace(&f, &rows, 4);
        assert_eq!(ns.len(), 2);
        for x in &ns {
            for r in &rows {
                let dot = r
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert_eq!(dot, 0);
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = FieldSpec::new(4).unwrap();
        let m = vec![vec![1, 2, 0], vec![3, 1, 1], vec![0, 2, 3]];
        let inv = invert(&f, &m).unwrap();
        let id = mat_mul(&f, &m, &inv, 3);
        assert_eq!(id, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(invert(&f, &[vec![1, 1], vec![1, 1]]).is_none());
    }

    #[test]
    fn coordinates_solve() {
        let f = FieldSpec::new(7).unwrap();
        let basis = vec![vec![0, 1, 3], vec![2, 0, 5]];
        let c = Coordinates::new(&f, &basis);
        let mut v = vec![0; 3];
        combine(&f, &[4, 6], &basis, &mut v);
        assert_eq!(c.solve(&f, &v), Some(vec![4, 6]));
        assert_eq!(c.solve(&f, &[1, 0, 0]), None);
    }
}
