//! Geometry cache: a sorted-key JSON document with a SHA-256 checksum.
//!
//! The checksum covers the compact serialization of every other key. Loading
//! checks, in order, that the document parses, that the version matches, that
//! the checksum matches, and finally every structural invariant.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::hermitian::{build_surface, UnitaryPolarity};
use crate::ovoids::{is_ovoid_of, OvoidSet, OvoidVertex, NUM_VERTICES, OVOIDS_PER_SUBQUADRANGLE};
use crate::projective::{mask_of, Space};
use crate::subquadrangles::{Subquadrangle, SubquadrangleSet, NUM_SUBQUADRANGLES};

/// Bumped whenever a canonical ordering or section layout changes.
pub const CACHE_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSection {
    pub points: Vec<usize>,
    pub generators: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OvoidRecord {
    pub id: usize,
    pub parent: usize,
    pub points: [usize; 5],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometryCache {
    pub version: u64,
    /// Coordinates as element codes 0..=3.
    pub points: Vec<[u8; 4]>,
    pub lines: Vec<[usize; 5]>,
    pub surface: SurfaceSection,
    pub subquadrangles: Vec<Vec<usize>>,
    pub ovoids: Vec<OvoidRecord>,
}

fn checksum_of(value: &Value) -> String {
    let bytes = serde_json::to_vec(value).expect("json value serializes");
    hex::encode(Sha256::digest(&bytes))
}

fn invariant(msg: impl Into<String>) -> Error {
    Error::CacheInvariant(msg.into())
}

impl GeometryCache {
    pub fn from_geometry(geo: &Geometry) -> GeometryCache {
        GeometryCache {
            version: CACHE_VERSION,
            points: geo.space.points().iter().map(|p| p.coords.map(|x| x.code())).collect(),
            lines: geo.space.lines().iter().map(|l| l.points).collect(),
            surface: SurfaceSection {
                points: geo.surface.points.clone(),
                generators: geo.surface.generators.clone(),
            },
            subquadrangles: geo.subquadrangles.items().iter().map(|w| w.points.clone()).collect(),
            ovoids: geo
                .ovoids
                .vertices()
                .iter()
                .map(|o| OvoidRecord {
                    id: o.id,
                    parent: o.parent,
                    points: o.points,
                })
                .collect(),
        }
    }

    /// Pretty-printed document with the checksum key, newline-terminated.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut value = serde_json::to_value(self).expect("cache serializes");
        let checksum = checksum_of(&value);
        value
            .as_object_mut()
            .expect("cache is an object")
            .insert("checksum".to_string(), Value::String(checksum));
        let mut out = serde_json::to_vec_pretty(&value).expect("json value serializes");
        out.push(b'\n');
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<GeometryCache> {
        let mut value: Value =
            serde_json::from_slice(bytes).map_err(|e| Error::CacheFormat(e.to_string()))?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| Error::CacheFormat("top level is not an object".to_string()))?;
        let version = obj
            .get("version")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::CacheFormat("missing integer version".to_string()))?;
        if version != CACHE_VERSION {
            return Err(Error::CacheVersion {
                expected: CACHE_VERSION,
                found: version,
            });
        }
        let stored = match obj.remove("checksum") {
            Some(Value::String(s)) => s,
            _ => return Err(Error::CacheFormat("missing checksum".to_string())),
        };
        let computed = checksum_of(&value);
        if stored != computed {
            return Err(Error::CacheChecksum { stored, computed });
        }
        serde_json::from_value(value).map_err(|e| Error::CacheFormat(e.to_string()))
    }

    /// Validates every section against a fresh enumeration of the space and
    /// surface, and the subquadrangle and ovoid invariants, then assembles the geometry.
    pub fn into_geometry(self) -> Result<Geometry> {
        let space = Space::new();
        let points: Vec<[u8; 4]> = space.points().iter().map(|p| p.coords.map(|x| x.code())).collect();
        if self.points != points {
            return Err(invariant("points differ from the canonical enumeration"));
        }
        let lines: Vec<[usize; 5]> = space.lines().iter().map(|l| l.points).collect();
        if self.lines != lines {
            return Err(invariant("lines differ from the canonical enumeration"));
        }
        let surface = build_surface(&space, &UnitaryPolarity::standard())?;
        if self.surface.points != surface.points || self.surface.generators != surface.generators {
            return Err(invariant("surface section differs from the isotropic points and generators"));
        }

        if self.subquadrangles.len() != NUM_SUBQUADRANGLES {
            return Err(invariant(format!(
                "{} subquadrangles, expected {NUM_SUBQUADRANGLES}",
                self.subquadrangles.len()
            )));
        }
        if !self.subquadrangles.windows(2).all(|w| w[0] < w[1]) {
            return Err(invariant("subquadrangles are not in canonical order"));
        }
        let mut subs = Vec::with_capacity(NUM_SUBQUADRANGLES);
        for (id, pts) in self.subquadrangles.iter().enumerate() {
            if !pts.windows(2).all(|w| w[0] < w[1]) {
                return Err(invariant(format!("subquadrangle {id} points are not sorted")));
            }
            let w = Subquadrangle::new(&space, &surface, id, mask_of(pts))
                .map_err(|e| invariant(format!("subquadrangle {id}: {e}")))?;
            subs.push(w);
        }
        let subquadrangles = SubquadrangleSet::new(subs);

        if self.ovoids.len() != NUM_VERTICES {
            return Err(invariant(format!("{} ovoids, expected {NUM_VERTICES}", self.ovoids.len())));
        }
        let mut vertices: Vec<OvoidVertex> = Vec::with_capacity(NUM_VERTICES);
        for (i, rec) in self.ovoids.iter().enumerate() {
            if rec.id != i || rec.parent != i / OVOIDS_PER_SUBQUADRANGLE {
                return Err(invariant(format!("ovoid record {i} has id {} and parent {}", rec.id, rec.parent)));
            }
            if !rec.points.windows(2).all(|w| w[0] < w[1]) {
                return Err(invariant(format!("ovoid {i} points are not sorted")));
            }
            let mask = mask_of(&rec.points);
            if !is_ovoid_of(subquadrangles.get(rec.parent), mask) {
                return Err(invariant(format!("ovoid {i} is not an ovoid of subquadrangle {}", rec.parent)));
            }
            if let Some(prev) = vertices.last() {
                if prev.parent == rec.parent && prev.points >= rec.points {
                    return Err(invariant(format!("ovoid {i} is out of canonical order")));
                }
            }
            vertices.push(OvoidVertex {
                id: rec.id,
                points: rec.points,
                mask,
                parent: rec.parent,
            });
        }

        Ok(Geometry {
            space,
            surface,
            subquadrangles,
            ovoids: OvoidSet::new(vertices),
        })
    }
}

pub fn save_cache(path: &Path, geo: &Geometry) -> Result<()> {
    fs::write(path, GeometryCache::from_geometry(geo).to_bytes())?;
    Ok(())
}

pub fn load_cache(path: &Path) -> Result<GeometryCache> {
    GeometryCache::from_bytes(&fs::read(path)?)
}

pub fn load_geometry(path: &Path) -> Result<Geometry> {
    load_cache(path)?.into_geometry()
}
