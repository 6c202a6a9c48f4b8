//! The projective space PG(3, 4) with canonical indexing of points, lines and planes.
//!
//! Points are listed in lexicographic order of their normalized coordinates
//! (first nonzero coordinate equal to 1), so `(0,0,0,1)` is point 0. Lines are
//! listed in lexicographic order of their sorted 5-point index sets. Planes are
//! indexed by their normalized coefficient vector, in the same order as points.
//! Higher layers only ever store indices and [`PointMask`]s.

use crate::error::{Error, Result};
use crate::fields::{self, Gf4, Vec4};

/// Bit `i` set iff point `i` belongs to the set.
pub type PointMask = u128;

pub const NUM_POINTS: usize = 85;
pub const NUM_LINES: usize = 357;
pub const NUM_PLANES: usize = 85;

const NO_LINE: u16 = u16::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjPoint {
    pub index: usize,
    pub coords: Vec4,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineRec {
    pub index: usize,
    pub points: [usize; 5],
    /// The two smallest point indices on the line.
    pub span_pair: (usize, usize),
    pub mask: PointMask,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneRec {
    pub index: usize,
    pub coeffs: Vec4,
    pub points: Vec<usize>,
    pub mask: PointMask,
}

/// A copy of PG(3, 2) inside PG(3, 4).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaerSubgeometry {
    pub points: Vec<usize>,
    pub frame: [usize; 5],
    pub mask: PointMask,
}

pub fn mask_of(points: &[usize]) -> PointMask {
    points.iter().fold(0, |m, &p| m | (1u128 << p))
}

pub fn mask_points(mask: PointMask) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let p = m.trailing_zeros() as usize;
        out.push(p);
        m &= m - 1;
    }
    out
}

fn code(v: &Vec4) -> usize {
    v.iter().fold(0, |acc, x| (acc << 2) | x.code() as usize)
}

fn normalize(v: &Vec4) -> Option<Vec4> {
    let lead = v.iter().copied().find(|x| !x.is_zero())?;
    let inv = lead.inv().ok()?;
    Some(fields::scale(inv, v))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    points: Vec<ProjPoint>,
    lines: Vec<LineRec>,
    planes: Vec<PlaneRec>,
    /// Any nonzero vector code to the index of the point it represents.
    point_of_code: Vec<u8>,
    line_of_pair: Vec<u16>,
    lines_through: Vec<Vec<usize>>,
}

impl Default for Space {
    fn default() -> Self {
        Space::new()
    }
}

impl Space {
    pub fn new() -> Space {
        let points = enumerate_points();

        let mut point_of_code = vec![u8::MAX; 256];
        for c in 1..256usize {
            let v = decode(c);
            let n = normalize(&v).expect("nonzero");
            let idx = points
                .binary_search_by_key(&code(&n), |p| code(&p.coords))
                .expect("normalized vector is enumerated");
            point_of_code[c] = idx as u8;
        }

        let mut raw_lines: Vec<[usize; 5]> = Vec::with_capacity(NUM_LINES);
        let mut seen = vec![false; NUM_POINTS * NUM_POINTS];
        for p in 0..NUM_POINTS {
            for q in p + 1..NUM_POINTS {
                if seen[p * NUM_POINTS + q] {
                    continue;
                }
                let pts = span_points(&point_of_code, &points[p].coords, &points[q].coords);
                for &a in &pts {
                    for &b in &pts {
                        seen[a * NUM_POINTS + b] = true;
                    }
                }
                raw_lines.push(pts);
            }
        }
        raw_lines.sort();

        let mut line_of_pair = vec![NO_LINE; NUM_POINTS * NUM_POINTS];
        let mut lines_through = vec![Vec::new(); NUM_POINTS];
        let lines: Vec<LineRec> = raw_lines
            .into_iter()
            .enumerate()
            .map(|(index, pts)| {
                for &a in &pts {
                    lines_through[a].push(index);
                    for &b in &pts {
                        if a != b {
                            line_of_pair[a * NUM_POINTS + b] = index as u16;
                        }
                    }
                }
                LineRec {
                    index,
                    points: pts,
                    span_pair: (pts[0], pts[1]),
                    mask: mask_of(&pts),
                }
            })
            .collect();

        let planes = points
            .iter()
            .map(|p| {
                let pts: Vec<usize> = points
                    .iter()
                    .filter(|x| fields::dot(&p.coords, &x.coords).is_zero())
                    .map(|x| x.index)
                    .collect();
                PlaneRec {
                    index: p.index,
                    coeffs: p.coords,
                    mask: mask_of(&pts),
                    points: pts,
                }
            })
            .collect();

        Space {
            points,
            lines,
            planes,
            point_of_code,
            line_of_pair,
            lines_through,
        }
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn lines(&self) -> &[LineRec] {
        &self.lines
    }

    pub fn planes(&self) -> &[PlaneRec] {
        &self.planes
    }

    pub fn coords(&self, p: usize) -> &Vec4 {
        &self.points[p].coords
    }

    /// Index of the point represented by a nonzero vector; `None` for the zero vector.
    #[inline]
    pub fn point_index(&self, v: &Vec4) -> Option<usize> {
        match self.point_of_code[code(v)] {
            u8::MAX => None,
            i => Some(i as usize),
        }
    }

    /// Index of the plane with the given (nonzero) coefficient vector.
    pub fn plane_index(&self, coeffs: &Vec4) -> Option<usize> {
        self.point_index(coeffs)
    }

    pub fn line_through(&self, p: usize, q: usize) -> Result<&LineRec> {
        self.line_index(p, q).map(|l| &self.lines[l])
    }

    pub fn line_index(&self, p: usize, q: usize) -> Result<usize> {
        for x in [p, q] {
            if x >= NUM_POINTS {
                return Err(Error::PointOutOfRange(x));
            }
        }
        if p == q {
            return Err(Error::SamePoint(p));
        }
        Ok(self.line_of_pair[p * NUM_POINTS + q] as usize)
    }

    pub fn lines_through(&self, p: usize) -> &[usize] {
        &self.lines_through[p]
    }

    /// Rank of the representative vectors of a point set.
    pub fn span_rank(&self, points: &[usize]) -> usize {
        let vs: Vec<Vec4> = points.iter().map(|&p| self.points[p].coords).collect();
        fields::rank(&vs)
    }

    /// Closes a frame to the Baer subgeometry PG(3, 2) it determines.
    ///
    /// Representatives of the first four points are rescaled so that their sum
    /// represents the fifth; the subgeometry is the set of all nonzero GF(2)
    /// combinations of the rescaled vectors.
    pub fn baer_closure(&self, frame: [usize; 5]) -> Result<BaerSubgeometry> {
        if let Some(&bad) = frame.iter().find(|&&p| p >= NUM_POINTS) {
            return Err(Error::PointOutOfRange(bad));
        }
        let basis = [
            self.points[frame[0]].coords,
            self.points[frame[1]].coords,
            self.points[frame[2]].coords,
            self.points[frame[3]].coords,
        ];
        let target = self.points[frame[4]].coords;
        let coeffs =
            fields::solve(&basis, &target).ok_or_else(|| Error::RankDeficient(frame[..4].to_vec()))?;
        if coeffs.iter().any(|c| c.is_zero()) {
            return Err(Error::NotAFrame(frame));
        }
        let scaled = [
            fields::scale(coeffs[0], &basis[0]),
            fields::scale(coeffs[1], &basis[1]),
            fields::scale(coeffs[2], &basis[2]),
            fields::scale(coeffs[3], &basis[3]),
        ];
        let mask = self.gf2_closure(&scaled);
        Ok(BaerSubgeometry {
            points: mask_points(mask),
            frame,
            mask,
        })
    }

    /// Mask of the points represented by the 15 nonzero GF(2) combinations of `basis`.
    pub fn gf2_closure(&self, basis: &[Vec4; 4]) -> PointMask {
        let mut mask = 0;
        for sel in 1u8..16 {
            let v = combination(basis, sel);
            if let Some(p) = self.point_index(&v) {
                mask |= 1u128 << p;
            }
        }
        mask
    }

    /// Whether every line joining two points of the set meets it in exactly 3 points.
    pub fn has_baer_line_property(&self, mask: PointMask) -> bool {
        let pts = mask_points(mask);
        pts.iter().enumerate().all(|(i, &p)| {
            pts[i + 1..].iter().all(|&q| {
                let l = self.line_of_pair[p * NUM_POINTS + q] as usize;
                (self.lines[l].mask & mask).count_ones() == 3
            })
        })
    }
}

/// GF(2) combination of `basis` selected by the low 4 bits of `sel`.
#[inline]
pub fn combination(basis: &[Vec4; 4], sel: u8) -> Vec4 {
    let mut v = [Gf4::ZERO; 4];
    for (i, b) in basis.iter().enumerate() {
        if sel & (1 << i) != 0 {
            v = fields::add_vec(&v, b);
        }
    }
    v
}

fn decode(c: usize) -> Vec4 {
    let digit = |shift: usize| Gf4::from_code(((c >> shift) & 3) as u8).expect("2-bit code");
    [digit(6), digit(4), digit(2), digit(0)]
}

fn span_points(point_of_code: &[u8], p: &Vec4, q: &Vec4) -> [usize; 5] {
    let mut pts = [0usize; 5];
    pts[0] = point_of_code[code(p)] as usize;
    for (i, &mu) in Gf4::ALL.iter().enumerate() {
        let v = fields::add_vec(&fields::scale(mu, p), q);
        pts[i + 1] = point_of_code[code(&v)] as usize;
    }
    pts.sort_unstable();
    pts
}

/// The 85 normalized points of PG(3, 4) in lexicographic order.
pub fn enumerate_points() -> Vec<ProjPoint> {
    (1..256usize)
        .map(decode)
        .filter(|v| normalize(v).as_ref() == Some(v))
        .enumerate()
        .map(|(index, coords)| ProjPoint { index, coords })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn unit(i: usize) -> Vec4 {
        let mut v = [Gf4::ZERO; 4];
        v[i] = Gf4::ONE;
        v
    }

    #[test]
    fn point_enumeration() {
        let pts = enumerate_points();
        assert_eq!(pts.len(), 85);
        assert_eq!(pts[0].coords, [Gf4::ZERO, Gf4::ZERO, Gf4::ZERO, Gf4::ONE]);
        for p in &pts {
            assert_eq!(p.coords.iter().find(|x| !x.is_zero()), Some(&Gf4::ONE));
        }
        // oracle: normalize all 255 nonzero vectors and dedup
        let mut classes = BTreeSet::new();
        for c in 1..256usize {
            classes.insert(normalize(&decode(c)).unwrap());
        }
        assert_eq!(classes.len(), 85);
        assert_eq!(classes.len(), (4usize.pow(4) - 1) / 3);
        let listed: Vec<Vec4> = pts.iter().map(|p| p.coords).collect();
        assert_eq!(listed, classes.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn lines_by_brute_force() {
        let space = Space::new();
        let mut distinct = BTreeSet::new();
        for p in 0..85 {
            for q in p + 1..85 {
                let line = space.line_through(p, q).unwrap();
                assert!(line.points.contains(&p) && line.points.contains(&q));
                assert_eq!(line.points.len(), 5);
                // oracle: collect all normalized λp + μq directly
                let mut pts = BTreeSet::new();
                for l in Gf4::ALL {
                    for m in Gf4::ALL {
                        let v = fields::add_vec(
                            &fields::scale(l, space.coords(p)),
                            &fields::scale(m, space.coords(q)),
                        );
                        if let Some(i) = space.point_index(&v) {
                            pts.insert(i);
                        }
                    }
                }
                assert_eq!(pts.into_iter().collect::<Vec<_>>(), line.points.to_vec());
                distinct.insert(line.points);
            }
        }
        assert_eq!(distinct.len(), 357);
        assert_eq!(distinct.len(), (16 + 1) * (16 + 4 + 1));
        assert_eq!(space.lines().len(), 357);
    }

    #[test]
    fn same_point_is_an_error() {
        let space = Space::new();
        assert!(matches!(space.line_through(3, 3), Err(Error::SamePoint(3))));
    }

    #[test]
    fn incidence_counts() {
        let space = Space::new();
        for p in 0..85 {
            assert_eq!(space.lines_through(p).len(), 21);
        }
        for l in space.lines() {
            assert_eq!(l.mask.count_ones(), 5);
            assert_eq!(space.span_rank(&l.points), 2);
            for &a in &l.points {
                for &b in &l.points {
                    if a != b {
                        assert_eq!(space.line_index(a, b).unwrap(), l.index);
                    }
                }
            }
        }
        for pl in space.planes() {
            assert_eq!(pl.points.len(), 21);
            assert_eq!(space.span_rank(&pl.points), 3);
        }
    }

    #[test]
    fn span_rank_examples() {
        let space = Space::new();
        assert_eq!(space.span_rank(&[7]), 1);
        assert_eq!(space.span_rank(&space.lines()[10].points), 2);
    }

    #[test]
    fn standard_frame_closure() {
        let space = Space::new();
        let e: Vec<usize> = (0..4).map(|i| space.point_index(&unit(i)).unwrap()).collect();
        let all_ones = space.point_index(&[Gf4::ONE; 4]).unwrap();
        let baer = space.baer_closure([e[0], e[1], e[2], e[3], all_ones]).unwrap();
        assert_eq!(baer.points.len(), 15);
        let binary: Vec<usize> = space
            .points()
            .iter()
            .filter(|p| p.coords.iter().all(|x| x.in_prime_field()))
            .map(|p| p.index)
            .collect();
        assert_eq!(baer.points, binary);
        assert!(space.has_baer_line_property(baer.mask));
        assert_eq!(space.span_rank(&baer.points), 4);
    }

    #[test]
    fn closure_errors() {
        let space = Space::new();
        let e: Vec<usize> = (0..4).map(|i| space.point_index(&unit(i)).unwrap()).collect();
        let dependent = space.point_index(&fields::add_vec(&unit(0), &unit(1))).unwrap();
        let all_ones = space.point_index(&[Gf4::ONE; 4]).unwrap();
        assert!(matches!(
            space.baer_closure([e[0], e[1], dependent, e[3], all_ones]),
            Err(Error::RankDeficient(_))
        ));
        // the fifth point lies on a coordinate face
        assert!(matches!(
            space.baer_closure([e[0], e[1], e[2], e[3], dependent]),
            Err(Error::NotAFrame(_))
        ));
    }

    #[test]
    fn closure_is_independent_of_frame_order() {
        let space = Space::new();
        let w = Gf4::W;
        let frame_vecs = [
            [Gf4::ONE, w, Gf4::ZERO, Gf4::ZERO],
            [Gf4::ZERO, Gf4::ONE, Gf4::ONE, Gf4::ZERO],
            [Gf4::ZERO, Gf4::ZERO, Gf4::ONE, Gf4::W2],
            [Gf4::ZERO, Gf4::ZERO, Gf4::ZERO, Gf4::ONE],
        ];
        let basis: Vec<usize> = frame_vecs.iter().map(|v| space.point_index(v).unwrap()).collect();
        // fifth point v1 + ω v2 + v3 + ω² v4
        let mut v5 = frame_vecs[0];
        for (c, v) in [(w, 1), (Gf4::ONE, 2), (Gf4::W2, 3)] {
            v5 = fields::add_vec(&v5, &fields::scale(c, &frame_vecs[v]));
        }
        let fifth = space.point_index(&v5).unwrap();
        let reference = space
            .baer_closure([basis[0], basis[1], basis[2], basis[3], fifth])
            .unwrap();
        assert!(space.has_baer_line_property(reference.mask));
        let perms = [[1, 0, 2, 3], [3, 2, 1, 0], [2, 3, 0, 1], [0, 2, 3, 1]];
        for perm in perms {
            let f = [basis[perm[0]], basis[perm[1]], basis[perm[2]], basis[perm[3]], fifth];
            assert_eq!(space.baer_closure(f).unwrap().points, reference.points);
        }
    }
}
