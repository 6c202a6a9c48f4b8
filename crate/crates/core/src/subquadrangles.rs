//! Symplectic subquadrangles W(3, 2) of H(3, 4), found as Baer subgeometries
//! lying entirely on the surface.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{self, Gf4, Vec4};
use crate::gq;
use crate::hermitian::{HermitianSurface, LineClass};
use crate::projective::{self, mask_points, PointMask, Space};

pub const NUM_SUBQUADRANGLES: usize = 36;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquadrangle {
    pub id: usize,
    pub points: Vec<usize>,
    pub mask: PointMask,
    /// Generators of H(3, 4) meeting the point set in 3 points, by line index.
    pub generators: Vec<(usize, [usize; 3])>,
}

impl Subquadrangle {
    /// Builds and validates a subquadrangle from a 15-point Baer subgeometry on the surface.
    pub fn new(
        space: &Space,
        surface: &HermitianSurface,
        id: usize,
        mask: PointMask,
    ) -> Result<Subquadrangle> {
        let points = mask_points(mask);
        if points.len() != 15 {
            return Err(Error::CountMismatch {
                what: "points of a subquadrangle",
                expected: 15,
                found: points.len(),
            });
        }
        if mask & !surface.mask != 0 {
            return Err(Error::Structure(format!(
                "subquadrangle {id} leaves the surface"
            )));
        }
        if !space.has_baer_line_property(mask) {
            return Err(Error::Structure(format!(
                "subquadrangle {id} is not a Baer subgeometry"
            )));
        }
        let mut generators = Vec::with_capacity(15);
        for &g in &surface.generators {
            let meet = mask_points(space.lines()[g].mask & mask);
            match meet.len() {
                0 => {}
                3 => generators.push((g, [meet[0], meet[1], meet[2]])),
                n => {
                    return Err(Error::Structure(format!(
                        "generator {g} meets subquadrangle {id} in {n} points"
                    )))
                }
            }
        }
        if generators.len() != 15 {
            return Err(Error::CountMismatch {
                what: "generators of a subquadrangle",
                expected: 15,
                found: generators.len(),
            });
        }
        let sub = Subquadrangle {
            id,
            points,
            mask,
            generators,
        };
        for &p in &sub.points {
            let through: Vec<usize> = sub
                .generators
                .iter()
                .filter(|(_, pts)| pts.contains(&p))
                .flat_map(|(_, pts)| pts.iter().copied())
                .collect();
            if through.len() != 9 {
                return Err(Error::Structure(format!(
                    "point {p} of subquadrangle {id} is on {} generators",
                    through.len() / 3
                )));
            }
            if space.span_rank(&through) != 3 {
                return Err(Error::Structure(format!(
                    "generators through point {p} of subquadrangle {id} are not coplanar"
                )));
            }
        }
        Ok(sub)
    }

    pub fn contains(&self, p: usize) -> bool {
        self.mask >> p & 1 == 1
    }

    /// Whether two points are joined by one of this subquadrangle's generators.
    pub fn collinear(&self, p: usize, q: usize) -> bool {
        self.generators
            .iter()
            .any(|(_, pts)| pts.contains(&p) && pts.contains(&q))
    }

    /// The GQ(2, 2) axioms on the 15 points and 15 generator restrictions.
    pub fn check_gq(&self) -> Result<()> {
        let lines: Vec<Vec<usize>> = self.generators.iter().map(|(_, p)| p.to_vec()).collect();
        gq::check_gq(&self.points, &lines, 2, 2)
    }
}

/// All subquadrangles in canonical order, with their pairwise intersection sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubquadrangleSet {
    items: Vec<Subquadrangle>,
    meet: Vec<u8>,
}

impl SubquadrangleSet {
    pub fn new(items: Vec<Subquadrangle>) -> SubquadrangleSet {
        let n = items.len();
        let mut meet = vec![0u8; n * n];
        for a in &items {
            for b in &items {
                meet[a.id * n + b.id] = (a.mask & b.mask).count_ones() as u8;
            }
        }
        SubquadrangleSet { items, meet }
    }

    pub fn items(&self) -> &[Subquadrangle] {
        &self.items
    }

    pub fn get(&self, id: usize) -> &Subquadrangle {
        &self.items[id]
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// `|W_a ∩ W_b|`.
    #[inline]
    pub fn meet_size(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.items.len() + b] as usize
    }
}

/// Enumerates the subquadrangles by exhaustive frame search over the surface points.
pub fn enumerate_subquadrangles(
    space: &Space,
    surface: &HermitianSurface,
) -> Result<Vec<Subquadrangle>> {
    enumerate_with_order(space, surface, &surface.points)
}

/// Frame search visiting 4-subsets of `order` (a permutation of the surface points).
///
/// For every independent 4-subset and each of the 27 relative scalings of its
/// representatives, the 15 GF(2) combinations are kept when all of them are on
/// the surface. Results are deduplicated by point set and sorted
/// lexicographically by sorted point indices.
pub fn enumerate_with_order(
    space: &Space,
    surface: &HermitianSurface,
    order: &[usize],
) -> Result<Vec<Subquadrangle>> {
    let n = order.len();
    let vecs: Vec<Vec4> = order.iter().map(|&p| *space.coords(p)).collect();
    let found: BTreeSet<PointMask> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut local = BTreeSet::new();
            for j in i + 1..n {
                for k in j + 1..n {
                    if fields::rank(&[vecs[i], vecs[j], vecs[k]]) < 3 {
                        continue;
                    }
                    for l in k + 1..n {
                        if fields::rank(&[vecs[i], vecs[j], vecs[k], vecs[l]]) < 4 {
                            continue;
                        }
                        scan_scalings(space, surface, [vecs[i], vecs[j], vecs[k], vecs[l]], &mut local);
                    }
                }
            }
            local
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });

    let mut sorted: Vec<(Vec<usize>, PointMask)> =
        found.into_iter().map(|m| (mask_points(m), m)).collect();
    sorted.sort();
    if sorted.len() != NUM_SUBQUADRANGLES {
        return Err(Error::CountMismatch {
            what: "symplectic subquadrangles",
            expected: NUM_SUBQUADRANGLES,
            found: sorted.len(),
        });
    }
    sorted
        .into_iter()
        .enumerate()
        .map(|(id, (_, mask))| Subquadrangle::new(space, surface, id, mask))
        .collect()
}

fn scan_scalings(
    space: &Space,
    surface: &HermitianSurface,
    base: [Vec4; 4],
    out: &mut BTreeSet<PointMask>,
) {
    for a in Gf4::NONZERO {
        for b in Gf4::NONZERO {
            for c in Gf4::NONZERO {
                let basis = [
                    base[0],
                    fields::scale(a, &base[1]),
                    fields::scale(b, &base[2]),
                    fields::scale(c, &base[3]),
                ];
                let mut mask: PointMask = 0;
                let inside = (1u8..16).all(|sel| {
                    let v = projective::combination(&basis, sel);
                    match space.point_index(&v) {
                        Some(p) if surface.contains(p) => {
                            mask |= 1u128 << p;
                            true
                        }
                        _ => false,
                    }
                });
                if inside {
                    out.insert(mask);
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// The meet is the 3 points of W on one generator of H(3, 4).
    ThreeOnGenerator { generator: usize },
    /// The meet is `(s ∪ s^⊥) ∩ H` for a secant `s`; `secant < polar` by index.
    SixOnSecantPair { secant: usize, polar: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClass {
    pub pair: (usize, usize),
    pub meet: Vec<usize>,
    pub kind: PairKind,
}

pub fn classify_pair(
    space: &Space,
    surface: &HermitianSurface,
    a: &Subquadrangle,
    b: &Subquadrangle,
) -> Result<PairClass> {
    if a.id == b.id {
        return Err(Error::Structure(format!(
            "cannot classify subquadrangle {} against itself",
            a.id
        )));
    }
    let meet_mask = a.mask & b.mask;
    let meet = mask_points(meet_mask);
    let kind = match meet.len() {
        3 => {
            let l = space.line_index(meet[0], meet[1])?;
            if surface.line_class(l) != LineClass::Generator || !space.lines()[l].points.contains(&meet[2]) {
                return Err(Error::Structure(format!(
                    "3-point meet of {} and {} is not on a generator",
                    a.id, b.id
                )));
            }
            PairKind::ThreeOnGenerator { generator: l }
        }
        6 => {
            let mut lines = BTreeSet::new();
            for (i, &p) in meet.iter().enumerate() {
                for &q in &meet[i + 1..] {
                    let l = space.line_index(p, q)?;
                    if (space.lines()[l].mask & meet_mask).count_ones() >= 3 {
                        lines.insert(l);
                    }
                }
            }
            let lines: Vec<usize> = lines.into_iter().collect();
            let ok = lines.len() == 2
                && lines.iter().all(|&l| (space.lines()[l].mask & meet_mask).count_ones() == 3)
                && space.lines()[lines[0]].mask & space.lines()[lines[1]].mask == 0
                && surface.line_class(lines[0]) == LineClass::Secant
                && surface.polar_line(space, lines[0])? == lines[1];
            if !ok {
                return Err(Error::Structure(format!(
                    "6-point meet of {} and {} is not a secant pair",
                    a.id, b.id
                )));
            }
            PairKind::SixOnSecantPair {
                secant: lines[0],
                polar: lines[1],
            }
        }
        n => {
            return Err(Error::Structure(format!(
                "subquadrangles {} and {} meet in {n} points",
                a.id, b.id
            )))
        }
    };
    Ok(PairClass {
        pair: (a.id, b.id),
        meet,
        kind,
    })
}

/// The six surface points of a secant and its polar line.
pub fn secant_pair_points(space: &Space, surface: &HermitianSurface, s: usize) -> Result<PointMask> {
    if surface.line_class(s) != LineClass::Secant {
        return Err(Error::Structure(format!("line {s} is not a secant")));
    }
    let sp = surface.polar_line(space, s)?;
    Ok((space.lines()[s].mask | space.lines()[sp].mask) & surface.mask)
}

/// The 3 subquadrangles containing `(s ∪ s^⊥) ∩ H`; they pairwise meet in exactly those points.
pub fn triple_through_secant(
    space: &Space,
    surface: &HermitianSurface,
    subs: &SubquadrangleSet,
    s: usize,
) -> Result<[usize; 3]> {
    let six = secant_pair_points(space, surface, s)?;
    let ids: Vec<usize> = subs
        .items()
        .iter()
        .filter(|w| w.mask & six == six)
        .map(|w| w.id)
        .collect();
    let triple: [usize; 3] = ids.try_into().map_err(|v: Vec<usize>| Error::CountMismatch {
        what: "subquadrangles through a secant pair",
        expected: 3,
        found: v.len(),
    })?;
    for i in 0..3 {
        for j in i + 1..3 {
            if subs.get(triple[i]).mask & subs.get(triple[j]).mask != six {
                return Err(Error::Structure(format!(
                    "subquadrangles {} and {} through secant {s} meet outside the secant pair",
                    triple[i], triple[j]
                )));
            }
        }
    }
    Ok(triple)
}

/// Number of further subquadrangles meeting both `a` and `b` in six points.
pub fn common_six_point_partners(subs: &SubquadrangleSet, a: usize, b: usize) -> usize {
    (0..subs.len())
        .filter(|&c| c != a && c != b)
        .filter(|&c| subs.meet_size(c, a) == 6 && subs.meet_size(c, b) == 6)
        .count()
}
