//! JSON interchange formats for geometries, witnesses, flats and results.

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundValue, Recursion, TraceLevel};
use crate::error::{Error, Result};
use crate::extremal::{ExtremalResult, Status};
use crate::field::FieldSpec;
use crate::geometry::Geometry;
use crate::linalg::Row;
use crate::projective::Flat;

/// `{"q", "p", "k", "modulus", "ambient", "points"}`; points are canonical
/// coordinate lists (most significant coordinate first) in index order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryJson {
    pub q: u64,
    pub p: u64,
    pub k: u32,
    pub modulus: Vec<u8>,
    pub ambient: usize,
    pub points: Vec<Row>,
}

impl From<&Geometry> for GeometryJson {
    fn from(g: &Geometry) -> Self {
        let f = g.field();
        GeometryJson {
            q: f.q(),
            p: f.p(),
            k: f.k(),
            modulus: f.modulus().to_vec(),
            ambient: g.ambient(),
            points: g.vectors(),
        }
    }
}

impl GeometryJson {
    /// Validates the field header and re-canonicalizes every point.
    pub fn to_geometry(&self) -> Result<Geometry> {
        let field = FieldSpec::new(self.q)?;
        if field.p() != self.p || field.k() != self.k || field.modulus() != self.modulus.as_slice()
        {
            return Err(Error::InvalidGeometry(format!(
                "field header (p={}, k={}, modulus={:?}) does not match GF({}) = (p={}, k={}, modulus={:?})",
                self.p,
                self.k,
                self.modulus,
                self.q,
                field.p(),
                field.k(),
                field.modulus()
            )));
        }
        if self.ambient == 0 {
            return Err(Error::InvalidGeometry(
                "ambient rank must be at least 1".into(),
            ));
        }
        Geometry::from_vectors(&field, self.ambient, &self.points)
    }
}

pub fn geometry_to_string(g: &Geometry) -> String {
    serde_json::to_string(&GeometryJson::from(g)).expect("geometry serializes")
}

pub fn geometry_from_str(s: &str) -> Result<Geometry> {
    let json: GeometryJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    json.to_geometry()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatJson {
    pub ambient: usize,
    pub rank: usize,
    pub basis: Vec<Row>,
}

impl From<&Flat> for FlatJson {
    fn from(f: &Flat) -> Self {
        FlatJson {
            ambient: f.ambient(),
            rank: f.rank(),
            basis: f.basis().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalJson {
    pub value: usize,
    pub status: Status,
    pub nodes: u64,
    pub witness: GeometryJson,
}

impl From<&ExtremalResult> for ExtremalJson {
    fn from(r: &ExtremalResult) -> Self {
        ExtremalJson {
            value: r.value,
            status: r.status,
            nodes: r.nodes,
            witness: (&r.witness).into(),
        }
    }
}

/// Bound values as JSON; big integers travel as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundValueJson {
    Exact { value: String },
    TowerSymbolic { height: u32, arg: String },
}

impl From<&BoundValue> for BoundValueJson {
    fn from(v: &BoundValue) -> Self {
        match v {
            BoundValue::Exact(x) => BoundValueJson::Exact {
                value: x.to_string(),
            },
            BoundValue::Tower { height, arg } => BoundValueJson::TowerSymbolic {
                height: *height,
                arg: arg.to_string(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionJson<'a> {
    pub value: BoundValueJson,
    pub trace: &'a [TraceLevel],
}

impl<'a> From<&'a Recursion> for RecursionJson<'a> {
    fn from(r: &'a Recursion) -> Self {
        RecursionJson {
            value: (&r.value).into(),
            trace: &r.trace,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_ag, make_g, make_pg};
    use proptest::prelude::*;

    #[test]
    fn fano_json_is_stable() {
        let g = make_pg(3, &FieldSpec::new(2).unwrap()).unwrap();
        assert_eq!(
            geometry_to_string(&g),
            r#"{"q":2,"p":2,"k":1,"modulus":[],"ambient":3,"points":[[0,0,1],[0,1,0],[0,1,1],[1,0,0],[1,0,1],[1,1,0],[1,1,1]]}"#
        );
    }

    #[test]
    fn extension_field_header() {
        let g = make_ag(2, &FieldSpec::new(9).unwrap()).unwrap();
        let s = geometry_to_string(&g);
        assert!(s.starts_with(r#"{"q":9,"p":3,"k":2,"modulus":[1,2,2],"ambient":2,"#));
        assert_eq!(geometry_from_str(&s).unwrap(), g);
    }

    #[test]
    fn loader_recanonicalizes_and_validates() {
        let s = r#"{"q":3,"p":3,"k":1,"modulus":[],"ambient":3,"points":[[0,2,1],[2,0,0]]}"#;
        let g = geometry_from_str(s).unwrap();
        assert_eq!(g.vectors(), vec![vec![0, 1, 2], vec![1, 0, 0]]);

        let dup = r#"{"q":3,"p":3,"k":1,"modulus":[],"ambient":3,"points":[[0,2,1],[0,1,2]]}"#;
        assert!(matches!(
            geometry_from_str(dup),
            Err(Error::InvalidGeometry(_))
        ));
        let bad_mod = r#"{"q":4,"p":2,"k":2,"modulus":[1,0,1],"ambient":2,"points":[]}"#;
        assert!(matches!(
            geometry_from_str(bad_mod),
            Err(Error::InvalidGeometry(_))
        ));
        let bad_q = r#"{"q":6,"p":2,"k":1,"modulus":[],"ambient":2,"points":[]}"#;
        assert!(matches!(
            geometry_from_str(bad_q),
            Err(Error::NotPrimePower(6))
        ));
        assert!(matches!(geometry_from_str("{"), Err(Error::Parse(_))));
        let extra = r#"{"q":2,"p":2,"k":1,"modulus":[],"ambient":2,"points":[],"x":1}"#;
        assert!(matches!(geometry_from_str(extra), Err(Error::Parse(_))));
    }

    proptest! {
        #[test]
        fn json_roundtrip_is_byte_identical(
            q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 16]),
            m in 1usize..4,
            c_frac in 0usize..4,
        ) {
            let f = FieldSpec::new(q).unwrap();
            let c = c_frac.min(m);
            let g = make_g(m, &f, c).unwrap();
            let s = geometry_to_string(&g);
            let back = geometry_from_str(&s).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(geometry_to_string(&back), s);
        }
    }
}
