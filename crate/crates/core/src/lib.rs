//! Exact computations in finite projective geometries PG(n−1, q).
//!
//! The crate builds the geometries PG, AG and G(m−1, q, c), decides whether
//! one geometry is a restriction of another, computes critical exponents and
//! exact extremal numbers `ex_q(H; n)` on small ground sets, and evaluates
//! the quantitative bound functions attached to the density theorem for
//! geometries.

pub mod bounds;
pub mod cli;
pub mod embed;
pub mod error;
pub mod exec;
pub mod extremal;
pub mod field;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod projective;

pub use embed::{contains, contains_with, verify_witness, Embedder, EmbeddingWitness};
pub use error::{Error, Result};
pub use exec::Exec;
pub use field::{FieldElement, FieldSpec};
pub use geometry::{
    complement_geometry, critical_exponent, critical_exponent_with, g_size, geometry_rank, make_ag,
    make_g, make_pg, Geometry,
};
pub use projective::{gaussian_binomial, pg_size, Flat, Point, Space};
