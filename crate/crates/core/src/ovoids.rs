//! Elliptic ovoids of the subquadrangles: the 216 vertices of the graph.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::projective::{mask_of, PointMask};
use crate::subquadrangles::{Subquadrangle, SubquadrangleSet};

pub const OVOIDS_PER_SUBQUADRANGLE: usize = 6;
pub const NUM_VERTICES: usize = 216;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OvoidVertex {
    pub id: usize,
    pub points: [usize; 5],
    pub mask: PointMask,
    pub parent: usize,
}

/// Whether `mask` is a 5-subset of `w` meeting every generator of `w` in exactly one point.
pub fn is_ovoid_of(w: &Subquadrangle, mask: PointMask) -> bool {
    mask & !w.mask == 0
        && mask.count_ones() == 5
        && w.generators
            .iter()
            .all(|(_, pts)| pts.iter().filter(|&&p| mask >> p & 1 == 1).count() == 1)
}

/// The 6 ovoids of `w`, ids `6·w.id + k` in lexicographic order of point sets.
pub fn enumerate_ovoids(w: &Subquadrangle) -> Result<Vec<OvoidVertex>> {
    let mut found = Vec::new();
    let mut chosen = Vec::with_capacity(5);
    extend(w, 0, &mut chosen, &mut found);
    // depth-first in increasing index order already yields lexicographic order
    if found.len() != OVOIDS_PER_SUBQUADRANGLE {
        return Err(Error::CountMismatch {
            what: "ovoids of a subquadrangle",
            expected: OVOIDS_PER_SUBQUADRANGLE,
            found: found.len(),
        });
    }
    Ok(found
        .into_iter()
        .enumerate()
        .map(|(k, points)| OvoidVertex {
            id: w.id * OVOIDS_PER_SUBQUADRANGLE + k,
            points,
            mask: mask_of(&points),
            parent: w.id,
        })
        .collect())
}

fn extend(w: &Subquadrangle, from: usize, chosen: &mut Vec<usize>, out: &mut Vec<[usize; 5]>) {
    if chosen.len() == 5 {
        if is_ovoid_of(w, mask_of(chosen)) {
            out.push([chosen[0], chosen[1], chosen[2], chosen[3], chosen[4]]);
        }
        return;
    }
    for i in from..w.points.len() {
        let p = w.points[i];
        // an ovoid meets each generator once, so no two of its points are collinear
        if chosen.iter().any(|&q| w.collinear(p, q)) {
            continue;
        }
        chosen.push(p);
        extend(w, i + 1, chosen, out);
        chosen.pop();
    }
}

/// The unique ovoid of `w` through two non-collinear points of `w`.
pub fn ovoid_through_pair<'a>(
    w: &Subquadrangle,
    ovoids: &'a [OvoidVertex],
    p: usize,
    q: usize,
) -> Result<&'a OvoidVertex> {
    if p == q {
        return Err(Error::SamePoint(p));
    }
    for x in [p, q] {
        if !w.contains(x) {
            return Err(Error::Structure(format!(
                "point {x} is not in subquadrangle {}",
                w.id
            )));
        }
    }
    if w.collinear(p, q) {
        return Err(Error::PairOnGenerator { sub: w.id, p, q });
    }
    let pair = (1u128 << p) | (1u128 << q);
    let matches: Vec<&OvoidVertex> = ovoids
        .iter()
        .filter(|o| o.parent == w.id && o.mask & pair == pair)
        .collect();
    match matches.as_slice() {
        [one] => Ok(one),
        other => Err(Error::CountMismatch {
            what: "ovoids through a non-collinear pair",
            expected: 1,
            found: other.len(),
        }),
    }
}

/// The 216 vertices with lookup by point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OvoidSet {
    vertices: Vec<OvoidVertex>,
    by_mask: HashMap<PointMask, usize>,
}

impl OvoidSet {
    pub fn new(vertices: Vec<OvoidVertex>) -> OvoidSet {
        let by_mask = vertices.iter().map(|v| (v.mask, v.id)).collect();
        OvoidSet { vertices, by_mask }
    }

    pub fn vertices(&self) -> &[OvoidVertex] {
        &self.vertices
    }

    pub fn get(&self, id: usize) -> &OvoidVertex {
        &self.vertices[id]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn of_parent(&self, w: usize) -> &[OvoidVertex] {
        &self.vertices[w * OVOIDS_PER_SUBQUADRANGLE..(w + 1) * OVOIDS_PER_SUBQUADRANGLE]
    }

    pub fn find(&self, mask: PointMask) -> Option<usize> {
        self.by_mask.get(&mask).copied()
    }
}

pub fn enumerate_all(subs: &SubquadrangleSet) -> Result<OvoidSet> {
    let per_sub: Vec<Vec<OvoidVertex>> = subs
        .items()
        .par_iter()
        .map(enumerate_ovoids)
        .collect::<Result<_>>()?;
    let vertices: Vec<OvoidVertex> = per_sub.into_iter().flatten().collect();
    let set = OvoidSet::new(vertices);
    if set.by_mask.len() != set.vertices.len() {
        return Err(Error::Structure(
            "two subquadrangles share an ovoid".to_string(),
        ));
    }
    Ok(set)
}

/// The subquadrangle having the given enumerated 5-set as an ovoid.
pub fn parent_of(subs: &SubquadrangleSet, ovoids: &OvoidSet, points: &[usize]) -> Result<usize> {
    let mask = mask_of(points);
    let unknown = || {
        let mut pts = points.to_vec();
        pts.sort_unstable();
        Error::UnknownOvoid(pts)
    };
    if points.len() != 5 || mask.count_ones() != 5 {
        return Err(unknown());
    }
    let id = ovoids.find(mask).ok_or_else(unknown)?;
    let owners: Vec<usize> = subs
        .items()
        .iter()
        .filter(|w| is_ovoid_of(w, mask))
        .map(|w| w.id)
        .collect();
    match owners.as_slice() {
        [w] if *w == ovoids.get(id).parent => Ok(*w),
        _ => Err(Error::Structure(format!(
            "ovoid {id} is an ovoid of subquadrangles {owners:?}"
        ))),
    }
}
