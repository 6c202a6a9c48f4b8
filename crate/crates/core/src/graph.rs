//! The graph on the 216 ovoids and its strongly-regular certification.
//!
//! Two ovoids are adjacent when they share exactly one point and their parent
//! subquadrangles share exactly six points. All certification is done in exact
//! integer arithmetic.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact;
use crate::geometry::Geometry;
use crate::ovoids::OvoidSet;
use crate::subquadrangles::{self, SubquadrangleSet};

pub const MAX_VERTICES: usize = 256;

/// A set of at most 256 vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexMask([u64; 4]);

impl VertexMask {
    pub const EMPTY: VertexMask = VertexMask([0; 4]);

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0[v >> 6] |= 1 << (v & 63);
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.0[v >> 6] >> (v & 63) & 1 == 1
    }

    #[inline]
    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0 == [0; 4]
    }

    #[inline]
    pub fn and(&self, other: &VertexMask) -> VertexMask {
        VertexMask([
            self.0[0] & other.0[0],
            self.0[1] & other.0[1],
            self.0[2] & other.0[2],
            self.0[3] & other.0[3],
        ])
    }

    /// Members strictly greater than `v`.
    pub fn above(&self, v: usize) -> VertexMask {
        let mut out = *self;
        let word = v >> 6;
        for w in out.0.iter_mut().take(word) {
            *w = 0;
        }
        let bit = v & 63;
        out.0[word] &= if bit == 63 { 0 } else { !0u64 << (bit + 1) };
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

impl fmt::Debug for VertexMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrgGraph {
    adjacency: Vec<VertexMask>,
}

impl SrgGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<SrgGraph> {
        if n > MAX_VERTICES {
            return Err(Error::Structure(format!("{n} vertices exceed the mask width")));
        }
        let mut adjacency = vec![VertexMask::EMPTY; n];
        for &(u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(Error::Structure(format!("invalid edge ({u}, {v})")));
            }
            adjacency[u].insert(v);
            adjacency[v].insert(u);
        }
        Ok(SrgGraph { adjacency })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn neighbours(&self, v: usize) -> &VertexMask {
        &self.adjacency[v]
    }

    #[inline]
    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    #[inline]
    pub fn common_neighbours(&self, u: usize, v: usize) -> usize {
        self.adjacency[u].and(&self.adjacency[v]).count()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|u| self.adjacency[u].above(u).iter().map(move |v| (u, v)).collect::<Vec<_>>())
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(VertexMask::count).sum::<usize>() / 2
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n()).all(|u| self.adjacency[u].iter().all(|v| self.adjacency[v].contains(u)))
    }

    pub fn is_loop_free(&self) -> bool {
        (0..self.n()).all(|u| !self.adjacency[u].contains(u))
    }

    /// Size of the component of vertex 0.
    pub fn reachable_from(&self, start: usize) -> usize {
        let mut seen = VertexMask::EMPTY;
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for v in self.adjacency[u].iter() {
                if !seen.contains(v) {
                    seen.insert(v);
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.reachable_from(0) == self.n()
    }

    pub fn triangle_count(&self) -> usize {
        (0..self.n())
            .map(|u| {
                let up = self.adjacency[u].above(u);
                up.iter()
                    .map(|v| up.and(&self.adjacency[v]).above(v).count())
                    .sum::<usize>()
            })
            .sum()
    }

    pub fn adjacency_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.n())
            .map(|u| (0..self.n()).map(|v| self.is_adjacent(u, v) as i64).collect())
            .collect()
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> SrgGraph {
        let mut adjacency = vec![VertexMask::EMPTY; self.n()];
        for u in 0..self.n() {
            for v in self.adjacency[u].iter() {
                adjacency[perm[u]].insert(perm[v]);
            }
        }
        SrgGraph { adjacency }
    }
}

/// Builds the graph: adjacent iff the ovoids share one point and their parents share six.
pub fn build_graph(ovoids: &OvoidSet, subs: &SubquadrangleSet) -> SrgGraph {
    let n = ovoids.len();
    let adjacency = (0..n)
        .into_par_iter()
        .map(|u| {
            let a = ovoids.get(u);
            let mut mask = VertexMask::EMPTY;
            for b in ovoids.vertices() {
                if b.id != u
                    && (a.mask & b.mask).count_ones() == 1
                    && subs.meet_size(a.parent, b.parent) == 6
                {
                    mask.insert(b.id);
                }
            }
            mask
        })
        .collect();
    SrgGraph { adjacency }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParams {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
}

impl SrgParams {
    /// `k(k − λ − 1) = (v − k − 1)μ`.
    pub fn is_feasible(&self) -> bool {
        self.v > self.k && self.k * (self.k - self.lambda - 1) == (self.v - self.k - 1) * self.mu
    }
}

impl fmt::Display for SrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.v, self.k, self.lambda, self.mu)
    }
}

/// Certifies that `g` is strongly regular and returns its parameters.
///
/// Reads `k`, `λ`, `μ` off the first vertex, first edge and first non-edge,
/// then checks `A² + (μ − λ)A − (k − μ)I = μJ` entry by entry, where
/// `(A²)ᵢⱼ` is the number of common neighbours of `i` and `j`.
pub fn certify_srg(g: &SrgGraph) -> Result<SrgParams> {
    let n = g.n();
    if !g.is_symmetric() || !g.is_loop_free() {
        return Err(Error::Certification {
            row: 0,
            col: 0,
            detail: "adjacency is not symmetric and loop-free".to_string(),
        });
    }
    if n < 3 {
        return Err(Error::Certification {
            row: 0,
            col: 0,
            detail: format!("{n} vertices is too few"),
        });
    }
    let k = g.degree(0);
    if let Some(v) = (0..n).find(|&v| g.degree(v) != k) {
        return Err(Error::Certification {
            row: v,
            col: v,
            detail: format!("degree {} differs from {k}", g.degree(v)),
        });
    }
    let pairs = || (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    let (eu, ev) = pairs()
        .find(|&(u, v)| g.is_adjacent(u, v))
        .ok_or_else(|| Error::Certification {
            row: 0,
            col: 0,
            detail: "graph has no edges".to_string(),
        })?;
    let (nu, nv) = pairs()
        .find(|&(u, v)| !g.is_adjacent(u, v))
        .ok_or_else(|| Error::Certification {
            row: 0,
            col: 0,
            detail: "graph is complete".to_string(),
        })?;
    let params = SrgParams {
        v: n,
        k,
        lambda: g.common_neighbours(eu, ev),
        mu: g.common_neighbours(nu, nv),
    };
    let (lambda, mu, k) = (params.lambda as i64, params.mu as i64, k as i64);

    let failure = (0..n).into_par_iter().find_map_first(|i| {
        (0..n).find_map(|j| {
            let a2 = if i == j { k } else { g.common_neighbours(i, j) as i64 };
            let a = g.is_adjacent(i, j) as i64;
            let delta = (i == j) as i64;
            let lhs = a2 + (mu - lambda) * a - (k - mu) * delta;
            (lhs != mu).then(|| Error::Certification {
                row: i,
                col: j,
                detail: format!("A² + {}A − {}I has entry {lhs}, expected {mu}", mu - lambda, k - mu),
            })
        })
    });
    if let Some(err) = failure {
        return Err(err);
    }
    if !params.is_feasible() {
        return Err(Error::Certification {
            row: 0,
            col: 0,
            detail: format!("parameters {params} violate k(k−λ−1) = (v−k−1)μ"),
        });
    }
    Ok(params)
}

/// Eigenvalues and multiplicities of a certified strongly regular graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumCertificate {
    /// `(k, r, s)` with `r > s` the restricted eigenvalues.
    pub eigenvalues: [i64; 3],
    pub multiplicities: [usize; 3],
    pub rank_a_minus_r: usize,
}

pub fn integer_sqrt(x: i64) -> Option<i64> {
    if x < 0 {
        return None;
    }
    let r = (x as f64).sqrt().round() as i64;
    (r.saturating_sub(1)..=r + 1).find(|c| c * c == x)
}

/// Multiplicities from the exact rank of `A − rI`.
///
/// Verifies `(A − rI)(A − sI) = μJ` by dense integer multiplication, computes
/// `rank(A − rI)` by Bareiss elimination, and checks the trace identity
/// `k + r·m_r + s·m_s = 0`.
pub fn spectrum_certificate(g: &SrgGraph, params: &SrgParams) -> Result<SpectrumCertificate> {
    let (k, lambda, mu) = (params.k as i64, params.lambda as i64, params.mu as i64);
    let disc = (lambda - mu) * (lambda - mu) + 4 * (k - mu);
    let root = integer_sqrt(disc)
        .ok_or_else(|| Error::Spectrum(format!("discriminant {disc} is not a perfect square")))?;
    if (lambda - mu + root) % 2 != 0 {
        return Err(Error::Spectrum("restricted eigenvalues are not integers".to_string()));
    }
    let r = (lambda - mu + root) / 2;
    let s = (lambda - mu - root) / 2;

    let n = g.n();
    let a = g.adjacency_matrix();
    let shifted = |c: i64| -> Vec<Vec<i64>> {
        let mut m = a.clone();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= c;
        }
        m
    };
    let a_r = shifted(r);
    let product = exact::mat_mul(&a_r, &shifted(s));
    for (i, row) in product.iter().enumerate() {
        if let Some(j) = row.iter().position(|&x| x != mu) {
            return Err(Error::Spectrum(format!(
                "(A − {r}I)(A − {s}I) has entry {} at ({i}, {j}), expected {mu}",
                row[j]
            )));
        }
    }

    let rank = exact::bareiss_rank(&a_r)?;
    if rank == 0 || rank > n {
        return Err(Error::Spectrum(format!("implausible rank {rank}")));
    }
    let m_r = n - rank;
    let m_s = rank - 1;
    let trace = k + r * m_r as i64 + s * m_s as i64;
    if trace != 0 {
        return Err(Error::Spectrum(format!("trace identity gives {trace}, expected 0")));
    }
    Ok(SpectrumCertificate {
        eigenvalues: [k, r, s],
        multiplicities: [1, m_r, m_s],
        rank_a_minus_r: rank,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    pub u: usize,
    pub v: usize,
    /// `|E ∩ E'|`.
    pub ovoid_meet: usize,
    /// `|W ∩ W'|`, 15 when the parents coincide.
    pub parent_meet: usize,
    pub adjacent: bool,
    pub common_neighbours: usize,
}

/// Case analysis over all unordered vertex pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub records: Vec<PairRecord>,
    /// `(parent_meet, ovoid_meet, adjacent)` → number of pairs.
    pub census: BTreeMap<(usize, usize, bool), usize>,
}

impl PairReport {
    pub fn count_where(&self, pred: impl Fn(&PairRecord) -> bool) -> usize {
        self.records.iter().filter(|r| pred(r)).count()
    }
}

/// Checks every pair against the allowed combinations:
/// parents meeting in 6 points give adjacent pairs sharing one point or
/// non-adjacent pairs sharing 0 or 2; parents meeting in 3 points give
/// non-adjacent pairs sharing 0 or 1; equal parents give non-adjacent pairs
/// sharing exactly one point.
pub fn pair_case_analysis(g: &SrgGraph, ovoids: &OvoidSet, subs: &SubquadrangleSet) -> Result<PairReport> {
    let n = g.n();
    let records: Vec<PairRecord> = (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            let a = ovoids.get(u);
            (u + 1..n).map(move |v| {
                let b = ovoids.get(v);
                PairRecord {
                    u,
                    v,
                    ovoid_meet: (a.mask & b.mask).count_ones() as usize,
                    parent_meet: subs.meet_size(a.parent, b.parent),
                    adjacent: g.is_adjacent(u, v),
                    common_neighbours: g.common_neighbours(u, v),
                }
            })
        })
        .collect();

    let mut census = BTreeMap::new();
    for r in &records {
        let allowed = match (r.parent_meet, r.adjacent) {
            (6, true) => r.ovoid_meet == 1,
            (6, false) => r.ovoid_meet == 0 || r.ovoid_meet == 2,
            (3, false) => r.ovoid_meet <= 1,
            (15, false) => r.ovoid_meet == 1,
            _ => false,
        };
        if !allowed {
            return Err(Error::CaseViolation {
                u: r.u,
                v: r.v,
                detail: format!(
                    "|W∩W'| = {}, |E∩E'| = {}, adjacent = {}",
                    r.parent_meet, r.ovoid_meet, r.adjacent
                ),
            });
        }
        *census.entry((r.parent_meet, r.ovoid_meet, r.adjacent)).or_insert(0) += 1;
    }
    Ok(PairReport { records, census })
}

/// Splits the neighbourhood of `v` by the line through two points of `v`
/// that carries the pair of parent subquadrangles.
///
/// For every neighbour the parents meet in `(t ∪ t^⊥) ∩ H`, and exactly one of
/// `t`, `t^⊥` joins two points of `v`; that line is the group key. Every key
/// must be one of the 10 joining lines of `v`, each with 4 neighbours whose
/// parents are the two other members of the line's secant triple.
pub fn neighbour_decomposition(geometry: &Geometry, g: &SrgGraph, v: usize) -> Result<BTreeMap<usize, Vec<usize>>> {
    let space = &geometry.space;
    let surface = &geometry.surface;
    let subs = &geometry.subquadrangles;
    let e = geometry.ovoids.get(v);
    let w = subs.get(e.parent);

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..5 {
        for j in i + 1..5 {
            groups.insert(space.line_index(e.points[i], e.points[j])?, Vec::new());
        }
    }
    for u in g.neighbours(v).iter() {
        let f = geometry.ovoids.get(u);
        let class = subquadrangles::classify_pair(space, surface, w, subs.get(f.parent))?;
        let subquadrangles::PairKind::SixOnSecantPair { secant, polar } = class.kind else {
            return Err(Error::Structure(format!("neighbours {v} and {u} have parents meeting in 3 points")));
        };
        let key = [secant, polar]
            .into_iter()
            .find(|&l| (space.lines()[l].mask & e.mask).count_ones() == 2)
            .ok_or_else(|| Error::Structure(format!("no secant pair line of ({v}, {u}) joins two points of {v}")))?;
        let triple = subquadrangles::triple_through_secant(space, surface, subs, key)?;
        if !triple.contains(&f.parent) || f.parent == e.parent {
            return Err(Error::Structure(format!("neighbour {u} of {v} lives outside the secant triple")));
        }
        groups
            .get_mut(&key)
            .ok_or_else(|| Error::Structure(format!("line {key} does not join two points of {v}")))?
            .push(u);
    }
    if let Some((line, members)) = groups.iter().find(|(_, m)| m.len() != 4) {
        return Err(Error::Structure(format!(
            "line {line} of vertex {v} carries {} neighbours",
            members.len()
        )));
    }
    Ok(groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{geometry, graph};

    fn petersen() -> SrgGraph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        SrgGraph::from_edges(10, &edges).unwrap()
    }

    #[test]
    fn vertex_mask_ops() {
        let mut m = VertexMask::EMPTY;
        for v in [0, 63, 64, 200, 255] {
            m.insert(v);
        }
        assert_eq!(m.count(), 5);
        assert_eq!(m.iter().collect::<Vec<_>>(), vec![0, 63, 64, 200, 255]);
        assert_eq!(m.above(63).iter().collect::<Vec<_>>(), vec![64, 200, 255]);
        assert_eq!(m.above(0).count(), 4);
        assert!(m.above(255).is_empty());
    }

    #[test]
    fn petersen_is_srg() {
        let p = petersen();
        let params = certify_srg(&p).unwrap();
        assert_eq!(params, SrgParams { v: 10, k: 3, lambda: 0, mu: 1 });
        let spec = spectrum_certificate(&p, &params).unwrap();
        assert_eq!(spec.eigenvalues, [3, 1, -2]);
        assert_eq!(spec.multiplicities, [1, 5, 4]);
        assert_eq!(p.triangle_count(), 0);
    }

    #[test]
    fn certification_names_failing_entry() {
        // 6-cycle: regular, but common neighbour counts vary among non-edges
        let edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let c6 = SrgGraph::from_edges(6, &edges).unwrap();
        assert!(matches!(certify_srg(&c6), Err(Error::Certification { .. })));
        let path = SrgGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            certify_srg(&path),
            Err(Error::Certification { row: 1, col: 1, .. })
        ));
    }

    #[test]
    fn graph_basics() {
        let g = graph();
        assert_eq!(g.n(), 216);
        assert!(g.is_symmetric() && g.is_loop_free());
        assert_eq!(g.edge_count(), 4320);
        assert_eq!(g.edge_count(), 216 * 40 / 2);
        assert_eq!(g.edges().len(), 4320);
        assert!(g.degrees().iter().all(|&d| d == 40));
        assert!(g.is_connected());
        assert_eq!(g.triangle_count(), 216 * 40 * 4 / 6);
    }

    #[test]
    fn same_parent_never_adjacent() {
        let geo = geometry();
        let g = graph();
        for w in 0..36 {
            let ovs = geo.ovoids.of_parent(w);
            for a in ovs {
                for b in ovs {
                    assert!(!g.is_adjacent(a.id, b.id));
                }
            }
        }
    }

    #[test]
    fn srg_parameters() {
        let params = certify_srg(graph()).unwrap();
        assert_eq!(params, SrgParams { v: 216, k: 40, lambda: 4, mu: 8 });
        assert!(params.is_feasible());
    }

    #[test]
    fn pair_cases() {
        let geo = geometry();
        let g = graph();
        let report = pair_case_analysis(g, &geo.ovoids, &geo.subquadrangles).unwrap();
        assert_eq!(report.records.len(), 216 * 215 / 2);
        assert_eq!(report.count_where(|r| r.parent_meet == 3 && r.adjacent), 0);
        assert_eq!(report.count_where(|r| r.parent_meet == 15 && r.ovoid_meet != 1), 0);
        assert_eq!(
            report.count_where(|r| r.parent_meet == 15 && r.common_neighbours != 8),
            0
        );
        assert!(report
            .records
            .iter()
            .all(|r| r.common_neighbours == if r.adjacent { 4 } else { 8 }));
        assert_eq!(report.count_where(|r| r.adjacent), 4320);
    }

    #[test]
    fn degree_decomposition() {
        let geo = geometry();
        let g = graph();
        for v in 0..216 {
            let groups = neighbour_decomposition(geo, g, v).unwrap();
            assert_eq!(groups.len(), 10);
            assert_eq!(groups.values().map(Vec::len).sum::<usize>(), 40);
        }
    }

    #[test]
    fn multiplicity_formula_oracle() {
        // f, g = ½[(v − 1) ∓ (2k + (v − 1)(λ − μ)) / √((λ − μ)² + 4(k − μ))]
        let (v, k, l, m) = (216i64, 40i64, 4i64, 8i64);
        let root = integer_sqrt((l - m) * (l - m) + 4 * (k - m)).unwrap();
        assert_eq!(root, 12);
        let num = 2 * k + (v - 1) * (l - m);
        assert_eq!(num % root, 0);
        let f = ((v - 1) - num / root) / 2;
        let g = ((v - 1) + num / root) / 2;
        assert_eq!((f, g), (140, 75));
        assert_eq!(k + 4 * f - 8 * g, 0);
    }

    #[test]
    fn spectrum() {
        let g = graph();
        let params = certify_srg(g).unwrap();
        let spec = spectrum_certificate(g, &params).unwrap();
        assert_eq!(spec.eigenvalues, [40, 4, -8]);
        assert_eq!(spec.multiplicities, [1, 140, 75]);
    }
}
