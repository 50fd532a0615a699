//! Geometries (point sets of a projective space) and the families PG, AG and
//! G(m−1, q, c).

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::field::FieldSpec;
use crate::linalg::{self, Row};
use crate::projective::{pg_size, Space};

/// A simple set of points of PG(ambient − 1, q), kept as sorted point indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geometry {
    field: FieldSpec,
    ambient: usize,
    points: Vec<u32>,
}

impl Geometry {
    /// Builds a geometry from point indices. Duplicates and out-of-range
    /// indices are rejected.
    pub fn new(field: &FieldSpec, ambient: usize, mut points: Vec<u32>) -> Result<Self> {
        let size = pg_size(ambient, field.q());
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGeometry(format!(
                "duplicate point index {}",
                w[0]
            )));
        }
        if let Some(&last) = points.last() {
            if last as u64 >= size {
                return Err(Error::InvalidGeometry(format!(
                    "point index {last} outside PG({}, {})",
                    ambient as i64 - 1,
                    field.q()
                )));
            }
        }
        Ok(Geometry {
            field: field.clone(),
            ambient,
            points,
        })
    }

    /// Builds a geometry from coordinate vectors, canonicalizing each one.
    /// Zero vectors and repeated points are rejected.
    pub fn from_vectors(field: &FieldSpec, ambient: usize, vectors: &[Row]) -> Result<Self> {
        let space = Space::new(ambient, field);
        let mut points = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::InvalidGeometry(format!(
                    "point {v:?} has {} coordinates, expected {ambient}",
                    v.len()
                )));
            }
            if let Some(&bad) = v.iter().find(|&&x| !field.contains(x)) {
                return Err(Error::InvalidGeometry(format!(
                    "coordinate {bad} not in GF({})",
                    field.q()
                )));
            }
            let p = space
                .canonical_point(v)
                .map_err(|_| Error::InvalidGeometry("zero vector is not a point".into()))?;
            points.push(p.index());
        }
        Geometry::new(field, ambient, points)
    }

    pub(crate) fn from_sorted_unchecked(
        field: &FieldSpec,
        ambient: usize,
        points: Vec<u32>,
    ) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        Geometry {
            field: field.clone(),
            ambient,
            points,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn space(&self) -> Space {
        Space::new(self.ambient, &self.field)
    }

    pub fn contains_point(&self, index: u32) -> bool {
        self.points.binary_search(&index).is_ok()
    }

    /// Canonical coordinate vectors in index order.
    pub fn vectors(&self) -> Vec<Row> {
        let s = self.space();
        self.points.iter().map(|&i| s.coords(i)).collect()
    }

    /// Membership bitset over all points of the ambient space.
    pub fn bitset(&self) -> FixedBitSet {
        let mut b = FixedBitSet::with_capacity(pg_size(self.ambient, self.field.q()) as usize);
        for &i in &self.points {
            b.insert(i as usize);
        }
        b
    }

    /// Rank of the flat spanned by the points.
    pub fn rank(&self) -> usize {
        self.space()
            .span_indices(self.points.iter().copied())
            .rank()
    }

    pub fn is_subset_of(&self, other: &Geometry) -> bool {
        self.field == other.field
            && self.ambient == other.ambient
            && self.points.iter().all(|&p| other.contains_point(p))
    }
}

/// |G(n−1, q, c)| = (qⁿ − q^{n−c})/(q − 1).
pub fn g_size(n: usize, q: u64, c: usize) -> u64 {
    assert!(c <= n, "g_size needs c <= n");
    pg_size(n, q) - pg_size(n - c, q)
}

/// All points of PG(m−1, q).
pub fn make_pg(m: usize, field: &FieldSpec) -> Result<Geometry> {
    if m == 0 {
        return Err(Error::InvalidArgument("PG needs rank m >= 1".into()));
    }
    let size = pg_size(m, field.q()) as u32;
    Ok(Geometry::from_sorted_unchecked(
        field,
        m,
        (0..size).collect(),
    ))
}

/// G(m−1, q, c): PG(m−1, q) minus the flat spanned by the first `m − c`
/// standard basis vectors.
pub fn make_g(m: usize, field: &FieldSpec, c: usize) -> Result<Geometry> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "G(m-1,q,c) needs rank m >= 1".into(),
        ));
    }
    if c > m {
        return Err(Error::InvalidArgument(format!(
            "G(m-1,q,c) needs c <= m, got c={c}, m={m}"
        )));
    }
    let space = Space::new(m, field);
    let removed = space.coordinate_flat(m - c);
    let mut gone = space.flat_point_indices(&removed);
    gone.sort_unstable();
    let points = (0..space.size())
        .filter(|i| gone.binary_search(i).is_err())
        .collect();
    Ok(Geometry::from_sorted_unchecked(field, m, points))
}

/// AG(m−1, q) = G(m−1, q, 1).
pub fn make_ag(m: usize, field: &FieldSpec) -> Result<Geometry> {
    make_g(m, field, 1)
}

pub fn geometry_rank(h: &Geometry) -> usize {
    h.rank()
}

/// The points of the ambient space not in `h`.
pub fn complement_geometry(h: &Geometry) -> Geometry {
    let size = pg_size(h.ambient, h.field.q()) as u32;
    let points = (0..size).filter(|&i| !h.contains_point(i)).collect();
    Geometry::from_sorted_unchecked(&h.field, h.ambient, points)
}

/// Re-expresses `h` inside its own span: the returned space has rank
/// `rank(h)` and the bitset marks the images of `h`'s points there.
pub(crate) fn in_span_coordinates(h: &Geometry) -> (Space, FixedBitSet) {
    let f = &h.field;
    let vectors = h.vectors();
    let e = linalg::rref(f, &vectors);
    let span_space = Space::new(e.rank(), f);
    let mut bits = FixedBitSet::with_capacity(span_space.size() as usize);
    for v in &vectors {
        let mut c: Row = e.pivots().iter().map(|&pc| v[pc]).collect();
        let idx = span_space.canonical_index(&mut c).expect("nonzero point");
        bits.insert(idx as usize);
    }
    (span_space, bits)
}

/// Smallest `c ≥ 1` such that some rank-(m − c) flat of span(H) misses H,
/// where m = rank(H).
pub fn critical_exponent(h: &Geometry) -> Result<usize> {
    critical_exponent_with(h, Exec::default())
}

pub fn critical_exponent_with(h: &Geometry, exec: Exec) -> Result<usize> {
    if h.is_empty() {
        return Err(Error::EmptyGeometry);
    }
    let (space, bits) = in_span_coordinates(h);
    let m = space.rank();
    for c in 1..m {
        let patterns = space.pivot_patterns(m - c);
        let hit = exec::find_map_first(exec, &patterns, |pat| {
            space.flats_with_pivots(pat.clone()).find(|fl| {
                space
                    .flat_point_indices(fl)
                    .iter()
                    .all(|&i| !bits.contains(i as usize))
            })
        });
        if hit.is_some() {
            return Ok(c);
        }
    }
    // the rank-0 flat is always disjoint
    Ok(m)
}
