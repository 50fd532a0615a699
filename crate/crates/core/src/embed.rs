//! Restriction containment: does a host geometry G contain a copy of a guest H?
//!
//! H is a restriction of G iff some injective linear map from span(H) into
//! G's ambient space sends every point of H onto a point of G. The search
//! fixes an ordered basis of span(H) made of H's own points, then backtracks
//! over images of the basis (independent host points, each with a scalar;
//! the first scalar is fixed to 1). As soon as a guest point lies in the span
//! of the assigned prefix its image is forced, and it must land in G.

use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::field::FieldSpec;
use crate::geometry::Geometry;
use crate::linalg::{self, Coordinates, Echelon, Row};
use crate::projective::Space;

/// Certificate that a guest geometry is a restriction of a host.
///
/// `map` has one row per vector of the reduced row-echelon basis of the
/// guest's span (so a guest point's coordinates are its entries at the pivot
/// columns), each row a vector of the host ambient space. `point_map[i]` is
/// the host point index hit by the i-th guest point in index order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingWitness {
    pub map: Vec<Row>,
    pub point_map: Vec<u32>,
}

fn check_fields(host: &Geometry, guest: &Geometry) -> Result<()> {
    if host.field() != guest.field() {
        return Err(Error::FieldMismatch {
            left: host.field().q(),
            right: guest.field().q(),
        });
    }
    Ok(())
}

/// Basis choice and precomputed coordinates for one search order.
#[derive(Clone, Debug)]
struct Plan {
    /// guest positions used as basis, in assignment order
    basis: Vec<usize>,
    /// coordinates of every guest point w.r.t. `basis`
    coeffs: Vec<Row>,
    /// non-basis guest positions grouped by their last nonzero coordinate
    by_level: Vec<Vec<usize>>,
}

impl Plan {
    /// Greedy basis starting at `first`: each next basis point maximizes the
    /// number of guest points captured by the growing span, so forced images
    /// appear as early as possible.
    fn build(f: &FieldSpec, vectors: &[Row], m: usize, first: usize) -> Plan {
        let mut basis = vec![first];
        let mut ech = Echelon::new();
        ech.insert(f, &vectors[first]);
        while ech.rank() < m {
            let mut best: Option<(usize, usize, Echelon)> = None;
            for (pos, v) in vectors.iter().enumerate() {
                if ech.contains(f, v) {
                    continue;
                }
                let mut e = ech.clone();
                e.insert(f, v);
                let captured = vectors.iter().filter(|w| e.contains(f, w)).count();
                if best.as_ref().is_none_or(|(c, _, _)| captured > *c) {
                    best = Some((captured, pos, e));
                }
            }
            let (_, pos, e) = best.expect("guest spans rank m");
            basis.push(pos);
            ech = e;
        }
        let basis_rows: Vec<Row> = basis.iter().map(|&p| vectors[p].clone()).collect();
        let coords = Coordinates::new(f, &basis_rows);
        let coeffs: Vec<Row> = vectors
            .iter()
            .map(|v| coords.solve(f, v).expect("guest point inside its own span"))
            .collect();
        let mut by_level = vec![Vec::new(); m];
        for (pos, c) in coeffs.iter().enumerate() {
            if basis.contains(&pos) {
                continue;
            }
            let last = c.iter().rposition(|&x| x != 0).expect("nonzero point");
            by_level[last].push(pos);
        }
        Plan {
            basis,
            coeffs,
            by_level,
        }
    }
}

/// Host side of a search: the ambient space, membership bits and the list of
/// host points with their coordinates.
struct Host<'a> {
    space: &'a Space,
    bits: &'a FixedBitSet,
    points: &'a [u32],
    vectors: &'a [Row],
}

struct State {
    rows: Vec<Row>,
    map: Vec<u32>,
    scratch: Row,
}

fn extend(plan: &Plan, host: &Host<'_>, level: usize, ech: &Echelon, st: &mut State) -> bool {
    let m = plan.basis.len();
    if level == m {
        return true;
    }
    for (hi, gv) in host.vectors.iter().enumerate() {
        if try_candidate(plan, host, level, ech, st, host.points[hi], gv) {
            return true;
        }
    }
    false
}

fn try_candidate(
    plan: &Plan,
    host: &Host<'_>,
    level: usize,
    ech: &Echelon,
    st: &mut State,
    gi: u32,
    gv: &[u8],
) -> bool {
    let f = host.space.field();
    if ech.contains(f, gv) {
        return false;
    }
    let mut next = ech.clone();
    next.insert(f, gv);
    let scalars = if level == 0 { 1..2 } else { 1..f.order() };
    for lambda in scalars {
        st.rows[level].clear();
        st.rows[level].extend(gv.iter().map(|&x| f.mul(lambda, x)));
        st.map[plan.basis[level]] = gi;
        if forced_images_land(plan, host, level, st) && extend(plan, host, level + 1, &next, st) {
            return true;
        }
    }
    false
}

fn forced_images_land(plan: &Plan, host: &Host<'_>, level: usize, st: &mut State) -> bool {
    let f = host.space.field();
    for &pos in &plan.by_level[level] {
        let c = &plan.coeffs[pos];
        linalg::combine(f, &c[..=level], &st.rows[..=level], &mut st.scratch);
        let idx = host
            .space
            .canonical_index(&mut st.scratch)
            .expect("injective prefix");
        if !host.bits.contains(idx as usize) {
            return false;
        }
        st.map[pos] = idx;
    }
    true
}

/// Reusable search over a fixed guest geometry.
pub struct Embedder {
    guest: Geometry,
    vectors: Vec<Row>,
    rank: usize,
    plan: Option<Plan>,
    anchored: OnceLock<Vec<Plan>>,
}

impl Embedder {
    pub fn new(guest: &Geometry) -> Self {
        let f = guest.field();
        let vectors = guest.vectors();
        let rank = linalg::rref(f, &vectors).rank();
        let plan = (rank > 0).then(|| Plan::build(f, &vectors, rank, 0));
        Embedder {
            guest: guest.clone(),
            vectors,
            rank,
            plan,
            anchored: OnceLock::new(),
        }
    }

    pub fn guest(&self) -> &Geometry {
        &self.guest
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn fresh_state(&self, n: usize) -> State {
        State {
            rows: vec![Vec::with_capacity(n); self.rank],
            map: vec![0; self.vectors.len()],
            scratch: vec![0; n],
        }
    }

    fn trivially_absent(&self, space: &Space, host_len: usize) -> bool {
        self.guest.len() > host_len || self.rank > space.rank()
    }

    /// Finds an embedding into the host point set `bits` of `space`.
    /// Returns the images of the plan's basis vectors and the point map.
    fn search(
        &self,
        space: &Space,
        bits: &FixedBitSet,
        exec: Exec,
    ) -> Option<(Vec<Row>, Vec<u32>)> {
        let plan = self.plan.as_ref()?;
        let points: Vec<u32> = bits.ones().map(|i| i as u32).collect();
        if self.trivially_absent(space, points.len()) {
            return None;
        }
        let vectors: Vec<Row> = points.iter().map(|&i| space.coords(i)).collect();
        let host = Host {
            space,
            bits,
            points: &points,
            vectors: &vectors,
        };
        let firsts: Vec<usize> = (0..points.len()).collect();
        exec::find_map_first(exec, &firsts, |&hi| {
            let mut st = self.fresh_state(space.rank());
            try_candidate(
                plan,
                &host,
                0,
                &Echelon::new(),
                &mut st,
                points[hi],
                &vectors[hi],
            )
            .then_some((st.rows, st.map))
        })
    }

    fn anchored_plans(&self) -> &[Plan] {
        self.anchored.get_or_init(|| {
            let f = self.guest.field();
            (0..self.vectors.len())
                .map(|first| Plan::build(f, &self.vectors, self.rank, first))
                .collect()
        })
    }

    /// Whether some embedding into `bits` sends a guest point onto `anchor`.
    /// `anchor` must be a member of `bits`.
    pub fn exists_anchored(&self, space: &Space, bits: &FixedBitSet, anchor: u32) -> bool {
        debug_assert!(bits.contains(anchor as usize));
        if self.rank == 0 {
            return false;
        }
        let points: Vec<u32> = bits.ones().map(|i| i as u32).collect();
        if self.trivially_absent(space, points.len()) {
            return false;
        }
        let vectors: Vec<Row> = points.iter().map(|&i| space.coords(i)).collect();
        let host = Host {
            space,
            bits,
            points: &points,
            vectors: &vectors,
        };
        let anchor_vec = space.coords(anchor);
        let mut st = self.fresh_state(space.rank());
        self.anchored_plans().iter().any(|plan| {
            try_candidate(
                plan,
                &host,
                0,
                &Echelon::new(),
                &mut st,
                anchor,
                &anchor_vec,
            )
        })
    }

    /// Searches the host geometry and packages a witness.
    pub fn find(&self, host: &Geometry, exec: Exec) -> Result<Option<EmbeddingWitness>> {
        check_fields(host, &self.guest)?;
        if self.rank == 0 {
            return Ok(Some(EmbeddingWitness {
                map: Vec::new(),
                point_map: Vec::new(),
            }));
        }
        let space = host.space();
        let found = self.search(&space, &host.bitset(), exec);
        Ok(found.map(|(rows, map)| self.witness(rows, map, host.ambient())))
    }

    pub fn is_contained_in(&self, space: &Space, bits: &FixedBitSet, exec: Exec) -> bool {
        self.rank == 0 || self.search(space, bits, exec).is_some()
    }

    fn witness(&self, rows: Vec<Row>, point_map: Vec<u32>, n: usize) -> EmbeddingWitness {
        let f = self.guest.field();
        let plan = self.plan.as_ref().expect("nonempty guest");
        let e = linalg::rref(f, &self.vectors);
        // P[k][j]: the k-th basis vector at the j-th pivot column
        let p: Vec<Row> = plan
            .basis
            .iter()
            .map(|&pos| e.pivots().iter().map(|&pc| self.vectors[pos][pc]).collect())
            .collect();
        let p_inv = linalg::invert(f, &p).expect("basis restricted to pivots is invertible");
        EmbeddingWitness {
            map: linalg::mat_mul(f, &p_inv, &rows, n),
            point_map,
        }
    }
}

/// Decides whether `guest` is a restriction of `host`, returning a witness.
pub fn contains(host: &Geometry, guest: &Geometry) -> Result<Option<EmbeddingWitness>> {
    contains_with(host, guest, Exec::default())
}

pub fn contains_with(
    host: &Geometry,
    guest: &Geometry,
    exec: Exec,
) -> Result<Option<EmbeddingWitness>> {
    check_fields(host, guest)?;
    Embedder::new(guest).find(host, exec)
}

/// Checks a witness from scratch: map has full row rank, each guest point's
/// image canonicalizes to the claimed host index, and every claimed index is
/// a point of the host.
pub fn verify_witness(host: &Geometry, guest: &Geometry, w: &EmbeddingWitness) -> bool {
    if host.field() != guest.field() {
        return false;
    }
    let f = host.field();
    let n = host.ambient();
    let guest_vectors = guest.vectors();
    let e = linalg::rref(f, &guest_vectors);
    let m = e.rank();
    if w.map.len() != m || w.point_map.len() != guest.len() {
        return false;
    }
    if w.map
        .iter()
        .any(|r| r.len() != n || r.iter().any(|&x| !f.contains(x)))
    {
        return false;
    }
    if linalg::rref(f, &w.map).rank() != m {
        return false;
    }
    let space = host.space();
    let mut seen = std::collections::HashSet::new();
    for (v, &claimed) in guest_vectors.iter().zip(&w.point_map) {
        let coords: Row = e.pivots().iter().map(|&pc| v[pc]).collect();
        let mut image = vec![0; n];
        linalg::combine(f, &coords, &w.map, &mut image);
        match space.canonical_index(&mut image) {
            Some(idx) if idx == claimed && host.contains_point(idx) && seen.insert(idx) => {}
            _ => return false,
        }
    }
    true
}
