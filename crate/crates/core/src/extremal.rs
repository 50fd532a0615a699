//! Extremal numbers `ex_q(H; n)`, sparse flats, and density tables.
//!
//! `ex_exact` is an include/exclude branch-and-bound over the points of
//! PG(n−1, q) in index order. Adding point p to an H-free set only needs an
//! anchored containment check: any new copy of H must use p.

use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::embed::Embedder;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::geometry::{critical_exponent, g_size, make_g, Geometry};
use crate::linalg::Echelon;
use crate::projective::{pg_size, Flat, Space};

/// Search limits. Exceeding either one downgrades the result to a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub const DEFAULT_NODES: u64 = 100_000_000;
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: Self::DEFAULT_NODES,
            max_time: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Exact,
    LowerBound,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Exact => "exact",
            Status::LowerBound => "lower-bound",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalResult {
    pub value: usize,
    /// An H-free set of `value` points.
    pub witness: Geometry,
    pub status: Status,
    pub nodes: u64,
}

/// True iff `s` contains no copy of `h`.
pub fn is_free(s: &Geometry, h: &Geometry) -> Result<bool> {
    is_free_with(s, h, Exec::default())
}

pub fn is_free_with(s: &Geometry, h: &Geometry, exec: Exec) -> Result<bool> {
    Ok(crate::embed::contains_with(s, h, exec)?.is_none())
}

/// Bose–Burton: `ex_q(PG(m−1, q); n) = |G(n−1, q, m−1)|`.
pub fn bose_burton_value(m: usize, n: usize, q: u64) -> u64 {
    assert!(1 <= m && m <= n, "bose_burton_value needs 1 <= m <= n");
    g_size(n, q, m - 1)
}

/// Marks points that are the minimum of their orbit under coordinate
/// permutations. Larger ambients skip the symmetry filter.
fn orbit_minima(space: &Space) -> Vec<bool> {
    let n = space.rank();
    let size = space.size() as usize;
    let perms: u64 = (1..=n as u64).product();
    if n > 8 || perms.saturating_mul(size as u64) > 50_000_000 {
        return vec![true; size];
    }
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut w = vec![0u8; n];
    (0..space.size())
        .map(|i| {
            let v = space.coords(i);
            perms.iter().all(|p| {
                for (j, &src) in p.iter().enumerate() {
                    w[j] = v[src];
                }
                space.canonical_index(&mut w).expect("nonzero") >= i
            })
        })
        .collect()
}

struct Search<'a> {
    space: &'a Space,
    guest: &'a Embedder,
    orbit_min: Vec<bool>,
    best: AtomicUsize,
    best_set: Mutex<Vec<u32>>,
    nodes: AtomicU64,
    aborted: AtomicBool,
    max_nodes: u64,
    deadline: Option<Instant>,
    exec: Exec,
    split_depth: u32,
}

impl Search<'_> {
    fn offer(&self, size: usize, set: &FixedBitSet) {
        let mut guard = self.best_set.lock().expect("incumbent lock");
        if size > self.best.load(Ordering::SeqCst) {
            self.best.store(size, Ordering::SeqCst);
            *guard = set.ones().map(|i| i as u32).collect();
        }
    }

    fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.max_nodes {
            self.aborted.store(true, Ordering::Relaxed);
        }
        if n.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.aborted.store(true, Ordering::Relaxed);
                }
            }
        }
        !self.aborted.load(Ordering::Relaxed)
    }

    fn dfs(&self, i: u32, set: &mut FixedBitSet, size: usize) {
        if !self.tick() {
            return;
        }
        let remaining = (self.space.size() - i) as usize;
        if size + remaining <= self.best.load(Ordering::Relaxed) {
            return;
        }
        if remaining == 0 {
            self.offer(size, set);
            return;
        }
        let include = (size > 0 || self.orbit_min[i as usize]) && {
            set.insert(i as usize);
            let free = !self.guest.exists_anchored(self.space, set, i);
            set.set(i as usize, false);
            free
        };
        if self.exec.is_parallel() && i < self.split_depth {
            let mut with = set.clone();
            let mut without = set.clone();
            exec::join(
                self.exec,
                || {
                    if include {
                        with.insert(i as usize);
                        self.dfs(i + 1, &mut with, size + 1);
                    }
                },
                || self.dfs(i + 1, &mut without, size),
            );
            return;
        }
        if include {
            set.insert(i as usize);
            self.dfs(i + 1, set, size + 1);
            set.set(i as usize, false);
        }
        self.dfs(i + 1, set, size);
    }
}

/// Largest H-free subset of PG(n−1, q), by branch-and-bound.
pub fn ex_exact(h: &Geometry, n: usize, budget: Budget) -> Result<ExtremalResult> {
    ex_exact_with(h, n, budget, Exec::default())
}

pub fn ex_exact_with(h: &Geometry, n: usize, budget: Budget, exec: Exec) -> Result<ExtremalResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("ex_q(H; n) needs n >= 1".into()));
    }
    let guest = Embedder::new(h);
    if guest.rank() == 0 {
        return Err(Error::InvalidArgument(
            "forbidden geometry must have rank >= 1".into(),
        ));
    }
    let field = h.field();
    let space = Space::new(n, field);

    // G(n−1, q, c−1) is H-free whenever c is the critical exponent; verified
    // here before it seeds the incumbent.
    let c = critical_exponent(h)?;
    let (seed_size, seed_points) = if c - 1 <= n {
        let seed = make_g(n, field, c - 1)?;
        if is_free_with(&seed, h, Exec::Sequential)? {
            (seed.len(), seed.points().to_vec())
        } else {
            (0, Vec::new())
        }
    } else {
        (0, Vec::new())
    };

    let search = Search {
        space: &space,
        guest: &guest,
        orbit_min: orbit_minima(&space),
        best: AtomicUsize::new(seed_size),
        best_set: Mutex::new(seed_points),
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        max_nodes: budget.max_nodes,
        deadline: budget.max_time.map(|d| Instant::now() + d),
        exec,
        split_depth: 10,
    };
    let mut set = FixedBitSet::with_capacity(space.size() as usize);
    search.dfs(0, &mut set, 0);

    let points = search.best_set.into_inner().expect("incumbent lock");
    let witness = Geometry::new(field, n, points)?;
    assert!(
        is_free_with(&witness, h, Exec::Sequential)?,
        "branch-and-bound produced a set containing the forbidden geometry"
    );
    let status = if search.aborted.load(Ordering::SeqCst) {
        Status::LowerBound
    } else {
        Status::Exact
    };
    Ok(ExtremalResult {
        value: witness.len(),
        witness,
        status,
        nodes: search.nodes.load(Ordering::SeqCst),
    })
}

/// A rank-m flat F with `rank(F ∩ G) ≤ m − c`, or `None` if no such flat exists.
pub fn find_sparse_flat(g: &Geometry, m: usize, c: usize) -> Result<Option<Flat>> {
    find_sparse_flat_with(g, m, c, Exec::default())
}

pub fn find_sparse_flat_with(g: &Geometry, m: usize, c: usize, exec: Exec) -> Result<Option<Flat>> {
    if !(1 <= c && c < m && m <= g.ambient()) {
        return Err(Error::InvalidArgument(format!(
            "sparse flat needs 1 <= c < m <= ambient, got c={c}, m={m}, ambient={}",
            g.ambient()
        )));
    }
    let space = g.space();
    let bits = g.bitset();
    let f = space.field();
    let limit = m - c;
    let sparse = |flat: &Flat| {
        let mut e = Echelon::new();
        let mut buf = vec![0; space.rank()];
        for i in space.flat_point_indices(flat) {
            if bits.contains(i as usize) {
                space.write_coords(i, &mut buf);
                if e.insert(f, &buf) && e.rank() > limit {
                    return false;
                }
            }
        }
        true
    };
    let patterns = space.pivot_patterns(m);
    Ok(exec::find_map_first(exec, &patterns, |pat| {
        space.flats_with_pivots(pat.clone()).find(|fl| sparse(fl))
    }))
}

/// One row of a density table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityRow {
    pub n: usize,
    pub ex: u64,
    pub total: u64,
    pub density: Ratio<u64>,
    pub limit: Ratio<u64>,
    pub status: Status,
}

/// `1 − q^{1−c}`.
pub fn density_limit(q: u64, c: usize) -> Result<Ratio<u64>> {
    assert!(c >= 1);
    let den = q
        .checked_pow(c as u32 - 1)
        .ok_or_else(|| Error::Overflow(format!("{q}^{}", c - 1)))?;
    Ok(Ratio::new(den - 1, den))
}

/// Exact `ex_q(H; n)/|PG(n−1, q)|` for each n in the range, next to the
/// limiting density `1 − q^{1−c}`.
pub fn density_table(
    h: &Geometry,
    n_range: RangeInclusive<usize>,
    budget: Budget,
    exec: Exec,
) -> Result<Vec<DensityRow>> {
    if n_range.is_empty() {
        return Ok(Vec::new());
    }
    let q = h.field().q();
    let limit = density_limit(q, critical_exponent(h)?)?;
    n_range
        .map(|n| {
            let res = ex_exact_with(h, n, budget, exec)?;
            let total = pg_size(n, q);
            Ok(DensityRow {
                n,
                ex: res.value as u64,
                total,
                density: Ratio::new(res.value as u64, total),
                limit,
                status: res.status,
            })
        })
        .collect()
}

pub const DENSITY_CSV_HEADER: [&str; 8] = [
    "n",
    "ex",
    "total",
    "density_num",
    "density_den",
    "limit_num",
    "limit_den",
    "status",
];

pub fn write_density_csv<W: std::io::Write>(rows: &[DensityRow], out: W) -> Result<()> {
    let io_err = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DENSITY_CSV_HEADER).map_err(io_err)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.ex.to_string(),
            r.total.to_string(),
            r.density.numer().to_string(),
            r.density.denom().to_string(),
            r.limit.numer().to_string(),
            r.limit.denom().to_string(),
            r.status.as_str().to_string(),
        ])
        .map_err(io_err)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    Ok(())
}
