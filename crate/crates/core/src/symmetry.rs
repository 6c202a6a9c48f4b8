//! The unitary group acting on the geometry and on the graph.
//!
//! Linear unitary maps `x ↦ Mx` (with `Mᵀ·G·conj(M) = G` for the Gram matrix
//! `G`) together with the Frobenius map `x ↦ conj(x)` permute the surface
//! points, hence the subquadrangles and the ovoids. The induced permutations
//! are checked to be graph automorphisms and their group orders are computed
//! with stabilizer chains.

use std::collections::HashMap;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{self, Gf4, Vec4};
use crate::geometry::Geometry;
use crate::graph::SrgGraph;
use crate::hermitian::{conj_matrix, identity_matrix, mat_mul, mat_vec, transpose, Matrix4, UnitaryPolarity};
use crate::permgroup::{self, Permutation, StabilizerChain};
use crate::projective::{mask_points, PointMask, Space};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitaryCollineation {
    pub matrix: Matrix4,
    /// Apply entrywise conjugation after the matrix.
    pub semilinear: bool,
}

impl UnitaryCollineation {
    pub fn linear(matrix: Matrix4) -> UnitaryCollineation {
        UnitaryCollineation {
            matrix,
            semilinear: false,
        }
    }

    pub fn identity() -> UnitaryCollineation {
        UnitaryCollineation::linear(identity_matrix())
    }

    pub fn frobenius() -> UnitaryCollineation {
        UnitaryCollineation {
            matrix: identity_matrix(),
            semilinear: true,
        }
    }

    /// `Mᵀ·G·conj(M) = G`, i.e. `h(Mx, My) = h(x, y)`.
    pub fn is_unitary(&self, pol: &UnitaryPolarity) -> bool {
        is_unitary_matrix(&self.matrix, pol)
    }

    pub fn apply(&self, v: &Vec4) -> Vec4 {
        let w = mat_vec(&self.matrix, v);
        if self.semilinear {
            fields::conj_vec(&w)
        } else {
            w
        }
    }

    /// The induced permutation of the 85 points.
    pub fn point_map(&self, space: &Space) -> Result<Vec<usize>> {
        let images: Vec<usize> = space
            .points()
            .iter()
            .map(|p| {
                space
                    .point_index(&self.apply(&p.coords))
                    .ok_or_else(|| Error::Consistency("matrix is singular".to_string()))
            })
            .collect::<Result<_>>()?;
        Permutation::from_images(images.clone())
            .map(|_| images)
            .ok_or_else(|| Error::Consistency("point map is not a bijection".to_string()))
    }

    /// Row-major element names, as exported in reports.
    pub fn matrix_names(&self) -> Vec<Vec<String>> {
        self.matrix
            .iter()
            .map(|row| row.iter().map(|x| x.name().to_string()).collect())
            .collect()
    }
}

pub fn is_unitary_matrix(m: &Matrix4, pol: &UnitaryPolarity) -> bool {
    mat_mul(&mat_mul(&transpose(m), pol.gram()), &conj_matrix(m)) == *pol.gram()
}

fn map_mask(points: &[usize], mask: PointMask) -> PointMask {
    mask_points(mask).into_iter().fold(0, |m, p| m | (1u128 << points[p]))
}

/// Seeded uniform search over all 4×4 matrices for unitary ones.
pub struct UnitarySampler {
    rng: ChaCha8Rng,
    pol: UnitaryPolarity,
    pub trials: u64,
    budget: u64,
}

impl UnitarySampler {
    pub fn new(pol: &UnitaryPolarity, seed: u64, budget: u64) -> UnitarySampler {
        UnitarySampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            pol: pol.clone(),
            trials: 0,
            budget,
        }
    }

    /// Next unitary matrix that is not a scalar multiple of the identity.
    pub fn next_linear(&mut self) -> Result<UnitaryCollineation> {
        let id = identity_matrix();
        loop {
            if self.trials >= self.budget {
                return Err(Error::Timeout(self.trials));
            }
            self.trials += 1;
            let bits = self.rng.next_u32();
            let mut m = [[Gf4::ZERO; 4]; 4];
            for (k, x) in m.iter_mut().flatten().enumerate() {
                *x = Gf4::from_code(((bits >> (2 * k)) & 3) as u8).expect("2-bit code");
            }
            let scalar = Gf4::NONZERO.iter().any(|&c| m == id.map(|r| r.map(|x| c * x)));
            if !scalar && is_unitary_matrix(&m, &self.pol) {
                return Ok(UnitaryCollineation::linear(m));
            }
        }
    }
}

/// `count` random linear unitary collineations followed by the Frobenius map.
pub fn find_unitary_generators(
    pol: &UnitaryPolarity,
    seed: u64,
    count: usize,
    budget: u64,
) -> Result<Vec<UnitaryCollineation>> {
    let mut sampler = UnitarySampler::new(pol, seed, budget);
    let mut gens = (0..count)
        .map(|_| sampler.next_linear())
        .collect::<Result<Vec<_>>>()?;
    gens.push(UnitaryCollineation::frobenius());
    Ok(gens)
}

/// Hand-checkable generators for the standard form: two coordinate permutations,
/// a diagonal scaling and the transvection `x ↦ x + h(x, v)·v` for `v = (1,1,1,1)`.
pub fn fallback_generators() -> Vec<UnitaryCollineation> {
    let o = Gf4::ZERO;
    let i = Gf4::ONE;
    vec![
        UnitaryCollineation::linear([[o, i, o, o], [i, o, o, o], [o, o, i, o], [o, o, o, i]]),
        UnitaryCollineation::linear([[o, i, o, o], [o, o, i, o], [o, o, o, i], [i, o, o, o]]),
        UnitaryCollineation::linear([[Gf4::W, o, o, o], [o, i, o, o], [o, o, i, o], [o, o, o, i]]),
        UnitaryCollineation::linear([[o, i, i, i], [i, o, i, i], [i, i, o, i], [i, i, i, o]]),
        UnitaryCollineation::frobenius(),
    ]
}

/// Relabeling of the 216 vertices induced by `g`.
pub fn induce_vertex_permutation(g: &UnitaryCollineation, geometry: &Geometry) -> Result<Permutation> {
    let points = g.point_map(&geometry.space)?;
    let images: Vec<usize> = geometry
        .ovoids
        .vertices()
        .iter()
        .map(|o| {
            let image = map_mask(&points, o.mask);
            geometry.ovoids.find(image).ok_or_else(|| {
                Error::Consistency(format!("image of ovoid {} is not an ovoid", o.id))
            })
        })
        .collect::<Result<_>>()?;
    Permutation::from_images(images)
        .ok_or_else(|| Error::Consistency("vertex map is not a bijection".to_string()))
}

/// Relabeling of the 36 subquadrangles induced by `g`.
pub fn induce_subquadrangle_permutation(
    g: &UnitaryCollineation,
    geometry: &Geometry,
) -> Result<Permutation> {
    let points = g.point_map(&geometry.space)?;
    let index: HashMap<PointMask, usize> = geometry
        .subquadrangles
        .items()
        .iter()
        .map(|w| (w.mask, w.id))
        .collect();
    let images: Vec<usize> = geometry
        .subquadrangles
        .items()
        .iter()
        .map(|w| {
            index.get(&map_mask(&points, w.mask)).copied().ok_or_else(|| {
                Error::Consistency(format!("image of subquadrangle {} is not a subquadrangle", w.id))
            })
        })
        .collect::<Result<_>>()?;
    Permutation::from_images(images)
        .ok_or_else(|| Error::Consistency("subquadrangle map is not a bijection".to_string()))
}

/// Size of the orbit of vertex 0.
pub fn verify_transitivity(gens: &[Permutation]) -> usize {
    if gens.is_empty() {
        return 1;
    }
    permgroup::orbit(gens, 0).len()
}

pub fn is_automorphism(g: &SrgGraph, perm: &Permutation) -> bool {
    g.relabel(perm.images()) == *g
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupConfig {
    pub seed: u64,
    /// Random linear generators drawn up front.
    pub linear_count: usize,
    /// Matrix trials allowed across the whole search.
    pub trial_budget: u64,
    /// Consecutive random elements that must already lie in the group.
    pub stable_attempts: usize,
}

impl Default for GroupConfig {
    fn default() -> Self {
        GroupConfig {
            seed: 1,
            linear_count: 2,
            trial_budget: 20_000_000,
            stable_attempts: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCertificate {
    pub seed: u64,
    pub used_fallback: bool,
    /// Linear generators followed by the Frobenius map.
    pub generators: Vec<UnitaryCollineation>,
    pub linear_order: u128,
    pub full_order: u128,
    pub linear_orbit: usize,
    pub full_orbit: usize,
    pub vertex_stabilizer: u128,
    pub subquadrangle_orbit: usize,
    pub subquadrangle_group_order: u128,
    pub subquadrangle_stabilizer: u128,
    pub all_automorphisms: bool,
    pub preserves_intersections: bool,
}

/// Realizes the group action and certifies orders, transitivity and automorphy.
pub fn certify_group(geometry: &Geometry, graph: &SrgGraph, config: &GroupConfig) -> Result<GroupCertificate> {
    let pol = &geometry.surface.polarity;
    let n = geometry.ovoids.len();
    let mut sampler = UnitarySampler::new(pol, config.seed, config.trial_budget);

    let (mut linear, used_fallback) = match (0..config.linear_count.max(2))
        .map(|_| sampler.next_linear())
        .collect::<Result<Vec<_>>>()
    {
        Ok(gens) => (gens, false),
        Err(Error::Timeout(_)) => {
            let mut gens = fallback_generators();
            gens.retain(|g| !g.semilinear);
            (gens, true)
        }
        Err(e) => return Err(e),
    };
    for g in &linear {
        if !g.is_unitary(pol) {
            return Err(Error::Consistency("generator is not unitary".to_string()));
        }
    }

    let mut linear_perms = linear
        .iter()
        .map(|g| induce_vertex_permutation(g, geometry))
        .collect::<Result<Vec<_>>>()?;
    let mut chain = StabilizerChain::new(n, &linear_perms);

    // closure: stop once enough consecutive random elements are already members
    if !used_fallback {
        let mut stable = 0;
        while stable < config.stable_attempts {
            let g = match sampler.next_linear() {
                Ok(g) => g,
                Err(Error::Timeout(_)) => break,
                Err(e) => return Err(e),
            };
            let p = induce_vertex_permutation(&g, geometry)?;
            if chain.contains(&p) {
                stable += 1;
            } else {
                stable = 0;
                linear.push(g);
                linear_perms.push(p);
                chain = StabilizerChain::new(n, &linear_perms);
            }
        }
    }
    let linear_order = chain.order();
    let linear_orbit = verify_transitivity(&linear_perms);

    let mut generators = linear;
    generators.push(UnitaryCollineation::frobenius());
    let perms = generators
        .iter()
        .map(|g| induce_vertex_permutation(g, geometry))
        .collect::<Result<Vec<_>>>()?;
    let full_order = permgroup::group_order(n, &perms);
    let full_orbit = verify_transitivity(&perms);
    let vertex_stabilizer = permgroup::point_stabilizer_order(n, &perms, 0);

    let sub_perms = generators
        .iter()
        .map(|g| induce_subquadrangle_permutation(g, geometry))
        .collect::<Result<Vec<_>>>()?;
    let subs = &geometry.subquadrangles;
    let subquadrangle_orbit = permgroup::orbit(&sub_perms, 0).len();
    let subquadrangle_group_order = permgroup::group_order(subs.len(), &sub_perms);
    let subquadrangle_stabilizer = permgroup::point_stabilizer_order(subs.len(), &sub_perms, 0);

    let all_automorphisms = perms.iter().all(|p| is_automorphism(graph, p));
    let preserves_intersections = perms.iter().zip(&sub_perms).all(|(vp, sp)| {
        let parents_follow = geometry
            .ovoids
            .vertices()
            .iter()
            .all(|o| geometry.ovoids.get(vp.apply(o.id)).parent == sp.apply(o.parent));
        let meets_kept = (0..subs.len()).all(|a| {
            (0..subs.len()).all(|b| subs.meet_size(sp.apply(a), sp.apply(b)) == subs.meet_size(a, b))
        });
        parents_follow && meets_kept
    });

    Ok(GroupCertificate {
        seed: config.seed,
        used_fallback,
        generators,
        linear_order,
        full_order,
        linear_orbit,
        full_orbit,
        vertex_stabilizer,
        subquadrangle_orbit,
        subquadrangle_group_order,
        subquadrangle_stabilizer,
        all_automorphisms,
        preserves_intersections,
    })
}

/// Order of `GU(4, q)`: `q⁶ (q + 1)(q² − 1)(q³ + 1)(q⁴ − 1)`.
pub fn general_unitary_order(q: u128) -> u128 {
    q.pow(6) * (q + 1) * (q * q - 1) * (q.pow(3) + 1) * (q.pow(4) - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{geometry, graph};

    #[test]
    fn simple_unitary_matrices() {
        let pol = UnitaryPolarity::standard();
        assert!(UnitaryCollineation::identity().is_unitary(&pol));
        for g in fallback_generators() {
            assert!(g.is_unitary(&pol));
        }
        let mut not_unitary = identity_matrix();
        not_unitary[0][1] = Gf4::ONE;
        assert!(!is_unitary_matrix(&not_unitary, &pol));
    }

    #[test]
    fn unitary_maps_preserve_the_form() {
        let geo = geometry();
        let pol = &geo.surface.polarity;
        let gens = find_unitary_generators(pol, 3, 2, 10_000_000).unwrap();
        assert_eq!(gens.len(), 3);
        assert!(gens[2].semilinear);
        for g in &gens {
            assert!(g.is_unitary(pol));
            let map = g.point_map(&geo.space).unwrap();
            for &p in &geo.surface.points {
                assert!(geo.surface.contains(map[p]));
            }
            for x in geo.space.points().iter().step_by(3) {
                for y in geo.space.points().iter().step_by(4) {
                    let h = pol.eval(&x.coords, &y.coords);
                    let hg = pol.eval(&g.apply(&x.coords), &g.apply(&y.coords));
                    assert_eq!(hg, if g.semilinear { h.conj() } else { h });
                }
            }
        }
    }

    #[test]
    fn generator_search_is_deterministic() {
        let pol = UnitaryPolarity::standard();
        let a = find_unitary_generators(&pol, 11, 2, 10_000_000).unwrap();
        let b = find_unitary_generators(&pol, 11, 2, 10_000_000).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            find_unitary_generators(&pol, 11, 2, 10),
            Err(Error::Timeout(10))
        ));
    }

    #[test]
    fn identity_induces_identity() {
        let geo = geometry();
        let p = induce_vertex_permutation(&UnitaryCollineation::identity(), geo).unwrap();
        assert!(p.is_identity());
        assert_eq!(verify_transitivity(&[p]), 1);
    }

    #[test]
    fn fallback_generates_the_full_group() {
        let geo = geometry();
        let perms: Vec<Permutation> = fallback_generators()
            .iter()
            .map(|g| induce_vertex_permutation(g, geo).unwrap())
            .collect();
        let linear: Vec<Permutation> = perms[..4].to_vec();
        assert_eq!(permgroup::group_order(216, &linear), 25920);
        assert_eq!(permgroup::group_order(216, &perms), 51840);
        for p in &perms {
            assert!(is_automorphism(graph(), p));
        }
    }

    #[test]
    fn cliques_map_to_cliques_of_the_same_class() {
        use crate::cliques::{classify_cliques, enumerate_maximal_cliques};
        let geo = geometry();
        let cliques = enumerate_maximal_cliques(graph()).unwrap();
        let census = classify_cliques(&cliques, &geo.ovoids, &geo.subquadrangles).unwrap();
        let class: HashMap<[usize; 3], usize> = census.records.iter().map(|r| (r.vertices, r.triple_meet)).collect();
        for g in fallback_generators() {
            let p = induce_vertex_permutation(&g, geo).unwrap();
            for r in &census.records {
                let mut image = r.vertices.map(|v| p.apply(v));
                image.sort_unstable();
                assert_eq!(class.get(&image), Some(&r.triple_meet));
            }
        }
    }

    #[test]
    fn order_formula_oracle() {
        assert_eq!(general_unitary_order(2), 77760);
        // centre of GU(4, 2) is the 3 scalars
        assert_eq!(general_unitary_order(2) / 3, 25920);
    }

    #[test]
    fn certificate() {
        let cert = certify_group(geometry(), graph(), &GroupConfig::default()).unwrap();
        assert!(!cert.used_fallback);
        assert_eq!(cert.linear_order, 25920);
        assert_eq!(cert.full_order, 51840);
        assert_eq!(cert.linear_orbit, 216);
        assert_eq!(cert.full_orbit, 216);
        assert_eq!(cert.vertex_stabilizer, 240);
        assert_eq!(cert.full_order / cert.full_orbit as u128, 240);
        assert_eq!(cert.subquadrangle_orbit, 36);
        assert_eq!(cert.subquadrangle_group_order, 51840);
        assert_eq!(cert.subquadrangle_stabilizer, 1440);
        assert!(cert.all_automorphisms);
        assert!(cert.preserves_intersections);
        assert_eq!(cert.full_order % cert.full_orbit as u128, 0);
    }
}
