//! JSON system specifications: the on-disk format the CLI loads and writes.
//!
//! Numbers may be plain JSON numbers, decimal strings, or rational strings
//! like "3/4"; they are kept exact. Finite systems carry labels with either
//! 1-d coordinates or a full distance matrix plus an adjacency list;
//! interval systems carry the graph as segments and points.

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::interval::IntervalSvf;
use crate::num::{parse_rat, rat_to_f64, rat_to_string, Rat};
use crate::relation::FiniteRelation;
use crate::space::MetricPointSet;

/// An exact number that serializes canonically and deserializes from strings
/// or JSON numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Num(pub Rat);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&rat_to_string(&self.0))
    }
}

struct NumVisitor;

impl Visitor<'_> for NumVisitor {
    type Value = Num;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "a number, a decimal string, or a rational string like 1/2")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Num, E> {
        parse_rat(v).map(Num).map_err(|e| E::custom(e.to_string()))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Num, E> {
        Rat::from_float(v)
            .map(Num)
            .ok_or_else(|| E::custom("non-finite number"))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Num, E> {
        Ok(Num(Rat::from_integer(v.into())))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Num, E> {
        Ok(Num(Rat::from_integer(v.into())))
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Num, D::Error> {
        deserializer.deserialize_any(NumVisitor)
    }
}

fn default_grid() -> usize {
    129
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct FiniteSpec {
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
    pub labels: Vec<String>,
    /// 1-d coordinates; distances are absolute differences
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Num>>,
    /// explicit distance matrix (alternative to coords)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<Vec<Num>>>,
    /// rows: [label, [successor labels]]
    pub adjacency: Vec<(String, Vec<String>)>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct IntervalSpec {
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
    /// segments as [x1, y1, x2, y2]
    pub segments: Vec<[Num; 4]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<[Num; 2]>,
    /// default grid size for discretization
    #[serde(default = "default_grid")]
    pub grid: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SystemSpec {
    Finite(FiniteSpec),
    Interval(IntervalSpec),
}

/// A validated, loaded system.
pub enum BuiltSystem {
    Finite(FiniteRelation),
    Interval { svf: IntervalSvf, grid: usize },
}

impl SystemSpec {
    pub fn name(&self) -> &str {
        match self {
            SystemSpec::Finite(f) => &f.name,
            SystemSpec::Interval(i) => &i.name,
        }
    }

    /// Validate and build the system; the finite space is normalized to
    /// diameter 1 on load.
    pub fn build(&self) -> Result<BuiltSystem> {
        match self {
            SystemSpec::Finite(spec) => {
                let n = spec.labels.len();
                let space = match (&spec.coords, &spec.dist) {
                    (Some(coords), _) => {
                        let c: Vec<f64> = coords.iter().map(|v| rat_to_f64(&v.0)).collect();
                        MetricPointSet::from_coords(spec.labels.clone(), &c)?
                    }
                    (None, Some(matrix)) => {
                        let m: Vec<Vec<f64>> = matrix
                            .iter()
                            .map(|row| row.iter().map(|v| rat_to_f64(&v.0)).collect())
                            .collect();
                        MetricPointSet::new(spec.labels.clone(), m)?
                    }
                    (None, None) => {
                        return Err(Error::BadSpec(
                            "finite spec needs either coords or dist".into(),
                        ))
                    }
                };
                let space = Arc::new(space);
                let mut adj = vec![vec![false; n]; n];
                for (from, tos) in &spec.adjacency {
                    let i = space.index_of(from)?;
                    for to in tos {
                        let j = space.index_of(to)?;
                        adj[i][j] = true;
                    }
                }
                Ok(BuiltSystem::Finite(FiniteRelation::new(space, adj)?))
            }
            SystemSpec::Interval(spec) => {
                if spec.grid < 2 {
                    return Err(Error::GridTooSmall(spec.grid, 2));
                }
                let segments: Vec<((Rat, Rat), (Rat, Rat))> = spec
                    .segments
                    .iter()
                    .map(|[x1, y1, x2, y2]| {
                        ((x1.0.clone(), y1.0.clone()), (x2.0.clone(), y2.0.clone()))
                    })
                    .collect();
                let points: Vec<(Rat, Rat)> = spec
                    .points
                    .iter()
                    .map(|[x, y]| (x.0.clone(), y.0.clone()))
                    .collect();
                Ok(BuiltSystem::Interval {
                    svf: IntervalSvf::new(segments, points)?,
                    grid: spec.grid,
                })
            }
        }
    }
}

/// Parse a spec from JSON text; malformed files carry serde's line/column
/// diagnostics, semantic problems name the offending label or gap.
pub fn parse_spec_str(text: &str) -> Result<SystemSpec> {
    let spec: SystemSpec = serde_json::from_str(text)?;
    spec.build()?;
    Ok(spec)
}

pub fn parse_spec(path: impl AsRef<Path>) -> Result<SystemSpec> {
    let text = std::fs::read_to_string(path)?;
    parse_spec_str(&text)
}

/// Canonical JSON for a spec; `parse_spec_str(write_spec(s)) == s`.
pub fn write_spec(spec: &SystemSpec) -> String {
    let mut s = serde_json::to_string_pretty(spec).expect("spec serialization cannot fail");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    const FIB_JSON: &str = r#"{
        "kind": "finite",
        "name": "fibonacci",
        "labels": ["0", "1"],
        "coords": ["0", "1"],
        "adjacency": [["0", ["1"]], ["1", ["0", "1"]]]
    }"#;

    const DIAMOND_JSON: &str = r#"{
        "kind": "interval",
        "name": "diamond",
        "segments": [
            ["0", "1/2", "1/2", "1"],
            ["0", "1/2", "1/2", "0"],
            ["1/2", "0", "1", "1/2"],
            ["1/2", "1", "1", "1/2"]
        ],
        "grid": 257
    }"#;

    #[test]
    fn parses_fibonacci() {
        let spec = parse_spec_str(FIB_JSON).unwrap();
        match spec.build().unwrap() {
            BuiltSystem::Finite(rel) => {
                assert_eq!(rel.evaluate("1").unwrap(), vec!["0", "1"]);
                assert_eq!(
                    crate::orbit::count_orbits(&rel, 10, None).unwrap(),
                    BigUint::from(144u32)
                );
            }
            _ => panic!("expected finite"),
        }
    }

    #[test]
    fn parses_diamond() {
        let spec = parse_spec_str(DIAMOND_JSON).unwrap();
        match spec.build().unwrap() {
            BuiltSystem::Interval { svf, grid } => {
                assert_eq!(grid, 257);
                assert_eq!(svf.segments().len(), 4);
            }
            _ => panic!("expected interval"),
        }
    }

    #[test]
    fn empty_image_is_a_load_error() {
        let json = r#"{
            "kind": "finite",
            "labels": ["a", "b"],
            "coords": [0, 1],
            "adjacency": [["a", ["b"]], ["b", []]]
        }"#;
        let err = parse_spec_str(json).unwrap_err();
        assert!(matches!(err, Error::EmptyImage(l) if l == "b"));
    }

    #[test]
    fn slice_gap_is_a_load_error() {
        let json = r#"{
            "kind": "interval",
            "segments": [["0", "0", "1/2", "1/2"]]
        }"#;
        assert!(matches!(
            parse_spec_str(json),
            Err(Error::SliceGap { .. })
        ));
    }

    #[test]
    fn round_trip() {
        for json in [FIB_JSON, DIAMOND_JSON] {
            let spec = parse_spec_str(json).unwrap();
            let text = write_spec(&spec);
            let again = parse_spec_str(&text).unwrap();
            assert_eq!(spec, again);
            // and the write is stable
            assert_eq!(text, write_spec(&again));
        }
    }

    #[test]
    fn accepts_numbers_and_decimals() {
        let json = r#"{
            "kind": "finite",
            "labels": ["a", "b"],
            "coords": [0, 0.5],
            "adjacency": [["a", ["b"]], ["b", ["a"]]]
        }"#;
        let spec = parse_spec_str(json).unwrap();
        match spec {
            SystemSpec::Finite(f) => {
                let c = f.coords.unwrap();
                assert_eq!(rat_to_string(&c[1].0), "1/2");
            }
            _ => panic!(),
        }
    }
}
