//! The certification report: one record per claim.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cliques::{classify_cliques, enumerate_maximal_cliques};
use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::gq;
use crate::graph::{build_graph, certify_srg, pair_case_analysis, spectrum_certificate, SrgGraph};
use crate::io::export::{export_graph, ExportFormat};
use crate::subquadrangles::{common_six_point_partners, secant_pair_points};
use crate::symmetry::{certify_group, GroupConfig};

pub const CLAIM_IDS: [&str; 11] = [
    "surface-census",
    "gq-axioms",
    "subquadrangle-census",
    "subquadrangle-pair-counts",
    "ovoid-census",
    "srg-certification",
    "pair-case-analysis",
    "spectrum",
    "clique-census",
    "symmetry",
    "determinism",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub id: String,
    pub statement: String,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
    pub runtime_ms: u64,
    /// Supporting data that is reported but not compared.
    pub details: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub seed: u64,
    pub claims: Vec<ClaimRecord>,
    pub pass: bool,
}

impl CertificationReport {
    pub fn claim(&self, id: &str) -> Option<&ClaimRecord> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn to_json_value(&self, timings: bool) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !timings {
            for c in v["claims"].as_array_mut().expect("claims array") {
                c.as_object_mut().expect("claim object").remove("runtime_ms");
            }
        }
        v
    }

    pub fn to_json(&self, timings: bool) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value(timings)).expect("report serializes");
        s.push('\n');
        s
    }

    /// Key/value text, one block per claim.
    pub fn to_text(&self, timings: bool) -> String {
        let mut out = format!("seed: {}\n", self.seed);
        for c in &self.claims {
            out.push_str(&format!("\n[{}] {}\n", c.id, if c.pass { "PASS" } else { "FAIL" }));
            out.push_str(&format!("  statement: {}\n", c.statement));
            out.push_str(&format!("  expected: {}\n", c.expected));
            out.push_str(&format!("  computed: {}\n", c.computed));
            if !c.details.is_null() {
                out.push_str(&format!("  details: {}\n", c.details));
            }
            if timings {
                out.push_str(&format!("  runtime_ms: {}\n", c.runtime_ms));
            }
        }
        out.push_str(&format!(
            "\noverall: {} ({}/{} claims pass)\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.claims.iter().filter(|c| c.pass).count(),
            self.claims.len()
        ));
        out
    }

    /// One `id: PASS|FAIL` line per claim.
    pub fn summary(&self) -> String {
        self.claims
            .iter()
            .map(|c| format!("{}: {}\n", c.id, if c.pass { "PASS" } else { "FAIL" }))
            .collect()
    }
}

pub struct Verifier<'a> {
    pub geometry: &'a Geometry,
    pub graph: &'a SrgGraph,
    pub group: GroupConfig,
}

struct Outcome {
    expected: Value,
    computed: Value,
    details: Value,
}

fn sorted_set<T: Ord + Serialize>(items: impl IntoIterator<Item = T>) -> Value {
    json!(items.into_iter().collect::<BTreeSet<T>>())
}

impl<'a> Verifier<'a> {
    pub fn new(geometry: &'a Geometry, graph: &'a SrgGraph, seed: u64) -> Verifier<'a> {
        Verifier {
            geometry,
            graph,
            group: GroupConfig {
                seed,
                ..GroupConfig::default()
            },
        }
    }

    /// Runs the named claims in the given order; unknown names are an error.
    pub fn run(&self, ids: &[&str]) -> Result<CertificationReport> {
        if let Some(bad) = ids.iter().find(|id| !CLAIM_IDS.contains(id)) {
            return Err(Error::Consistency(format!("unknown claim id {bad}")));
        }
        let claims: Vec<ClaimRecord> = ids.iter().map(|id| self.run_claim(id)).collect();
        let pass = !claims.is_empty() && claims.iter().all(|c| c.pass);
        Ok(CertificationReport {
            seed: self.group.seed,
            claims,
            pass,
        })
    }

    pub fn run_all(&self) -> CertificationReport {
        self.run(&CLAIM_IDS).expect("known claim ids")
    }

    fn run_claim(&self, id: &str) -> ClaimRecord {
        let start = Instant::now();
        let (statement, outcome) = match id {
            "surface-census" => (
                "H(3,4) has 45 points, 27 generators, 240 secants and 90 tangents; every line meets it in 1, 3 or 5 points",
                self.surface_census(),
            ),
            "gq-axioms" => (
                "H(3,4) is a GQ(4,2) and every subquadrangle is a GQ(2,2)",
                self.gq_axioms(),
            ),
            "subquadrangle-census" => (
                "36 subquadrangles pairwise meeting in 3 or 6 points, each with 15 three-point and 20 six-point partners; 3 through every secant pair",
                self.subquadrangle_census(),
            ),
            "subquadrangle-pair-counts" => (
                "pairs meeting in 3 points have 12 common six-point partners, pairs meeting in 6 points have 10",
                self.pair_counts(),
            ),
            "ovoid-census" => (
                "6 ovoids per subquadrangle, 216 in all, same-parent ovoids meet in one point, and each of the 60 non-collinear pairs lies on one ovoid",
                self.ovoid_census(),
            ),
            "srg-certification" => (
                "the graph is strongly regular with parameters (216, 40, 4, 8) and A^2 + 4A - 32I = 8J",
                self.srg(),
            ),
            "pair-case-analysis" => (
                "every vertex pair falls in an allowed combination of parent meet, ovoid meet and adjacency",
                self.pair_cases(),
            ),
            "spectrum" => (
                "eigenvalues 40, 4, -8 with multiplicities 1, 140, 75 from the exact rank of A - 4I",
                self.spectrum(),
            ),
            "clique-census" => (
                "all maximal cliques are triangles: 1440 with triple meet 6 and 4320 with triple meet 2",
                self.cliques(),
            ),
            "symmetry" => (
                "unitary collineations act as automorphisms, transitively on vertices, with orders 25920 and 51840",
                self.symmetry(),
            ),
            "determinism" => (
                "an independent rebuild yields identical geometry, exports and group generators",
                self.determinism(),
            ),
            _ => unreachable!("claim ids are checked by run"),
        };
        let runtime_ms = start.elapsed().as_millis() as u64;
        let (expected, computed, details, pass) = match outcome {
            Ok(o) => {
                let pass = o.expected == o.computed;
                (o.expected, o.computed, o.details, pass)
            }
            Err(e) => (Value::Null, json!({ "error": e.to_string() }), Value::Null, false),
        };
        ClaimRecord {
            id: id.to_string(),
            statement: statement.to_string(),
            expected,
            computed,
            pass,
            runtime_ms,
            details,
        }
    }

    fn surface_census(&self) -> Result<Outcome> {
        let space = &self.geometry.space;
        let surface = &self.geometry.surface;
        let mut meets: BTreeMap<String, usize> = BTreeMap::new();
        for l in space.lines() {
            *meets.entry((l.mask & surface.mask).count_ones().to_string()).or_insert(0) += 1;
        }
        Ok(Outcome {
            expected: json!({
                "points": 45,
                "generators": 27,
                "secants": 240,
                "tangents": 90,
                "line_meets": { "1": 90, "3": 240, "5": 27 },
            }),
            computed: json!({
                "points": surface.points.len(),
                "generators": surface.generators.len(),
                "secants": surface.secants.len(),
                "tangents": surface.tangents.len(),
                "line_meets": meets,
            }),
            details: Value::Null,
        })
    }

    fn gq_axioms(&self) -> Result<Outcome> {
        let space = &self.geometry.space;
        let surface = &self.geometry.surface;
        let lines: Vec<Vec<usize>> = surface
            .generators
            .iter()
            .map(|&g| space.lines()[g].points.to_vec())
            .collect();
        let surface_ok = gq::check_gq(&surface.points, &lines, 4, 2).is_ok();
        let subs_ok = self
            .geometry
            .subquadrangles
            .items()
            .iter()
            .filter(|w| w.check_gq().is_ok())
            .count();
        Ok(Outcome {
            expected: json!({ "surface_gq_4_2": true, "subquadrangles_gq_2_2": 36 }),
            computed: json!({ "surface_gq_4_2": surface_ok, "subquadrangles_gq_2_2": subs_ok }),
            details: Value::Null,
        })
    }

    fn subquadrangle_census(&self) -> Result<Outcome> {
        let space = &self.geometry.space;
        let surface = &self.geometry.surface;
        let subs = &self.geometry.subquadrangles;
        let n = subs.len();
        let meets = sorted_set((0..n).flat_map(|a| (a + 1..n).map(move |b| subs.meet_size(a, b))));
        let partners = |size: usize| sorted_set((0..n).map(|a| (0..n).filter(|&b| b != a && subs.meet_size(a, b) == size).count()));
        let mut triples = BTreeSet::new();
        for &s in &surface.secants {
            let six = secant_pair_points(space, surface, s)?;
            triples.insert(subs.items().iter().filter(|w| w.mask & six == six).count());
        }
        Ok(Outcome {
            expected: json!({
                "count": 36,
                "meet_sizes": [3, 6],
                "three_point_partners": [15],
                "six_point_partners": [20],
                "secant_triple_sizes": [3],
            }),
            computed: json!({
                "count": n,
                "meet_sizes": meets,
                "three_point_partners": partners(3),
                "six_point_partners": partners(6),
                "secant_triple_sizes": triples,
            }),
            details: Value::Null,
        })
    }

    fn pair_counts(&self) -> Result<Outcome> {
        let subs = &self.geometry.subquadrangles;
        let n = subs.len();
        let mut by_meet: BTreeMap<usize, (usize, BTreeSet<usize>)> = BTreeMap::new();
        for a in 0..n {
            for b in a + 1..n {
                let e = by_meet.entry(subs.meet_size(a, b)).or_default();
                e.0 += 1;
                e.1.insert(common_six_point_partners(subs, a, b));
            }
        }
        let computed: BTreeMap<String, Value> = by_meet
            .into_iter()
            .map(|(m, (pairs, counts))| (m.to_string(), json!({ "pairs": pairs, "common_partners": counts })))
            .collect();
        Ok(Outcome {
            expected: json!({
                "3": { "pairs": 270, "common_partners": [12] },
                "6": { "pairs": 360, "common_partners": [10] },
            }),
            computed: json!(computed),
            details: Value::Null,
        })
    }

    fn ovoid_census(&self) -> Result<Outcome> {
        let subs = &self.geometry.subquadrangles;
        let ovoids = &self.geometry.ovoids;
        let per_sub = sorted_set(subs.items().iter().map(|w| ovoids.of_parent(w.id).len()));
        let mut same_parent = BTreeSet::new();
        let mut valid_pairs = BTreeSet::new();
        let mut on_pair = BTreeSet::new();
        for w in subs.items() {
            let own = ovoids.of_parent(w.id);
            for (i, a) in own.iter().enumerate() {
                for b in &own[i + 1..] {
                    same_parent.insert((a.mask & b.mask).count_ones());
                }
            }
            let mut pairs = 0;
            for (i, &p) in w.points.iter().enumerate() {
                for &q in &w.points[i + 1..] {
                    if w.collinear(p, q) {
                        continue;
                    }
                    pairs += 1;
                    let both = (1u128 << p) | (1u128 << q);
                    on_pair.insert(own.iter().filter(|o| o.mask & both == both).count());
                }
            }
            valid_pairs.insert(pairs);
        }
        let distinct: BTreeSet<u128> = ovoids.vertices().iter().map(|o| o.mask).collect();
        Ok(Outcome {
            expected: json!({
                "per_subquadrangle": [6],
                "total": 216,
                "distinct": 216,
                "same_parent_meets": [1],
                "valid_pairs_per_subquadrangle": [60],
                "ovoids_through_valid_pair": [1],
            }),
            computed: json!({
                "per_subquadrangle": per_sub,
                "total": ovoids.len(),
                "distinct": distinct.len(),
                "same_parent_meets": same_parent,
                "valid_pairs_per_subquadrangle": valid_pairs,
                "ovoids_through_valid_pair": on_pair,
            }),
            details: Value::Null,
        })
    }

    fn srg(&self) -> Result<Outcome> {
        let g = self.graph;
        let params = certify_srg(g)?;
        let identity = format!(
            "A^2 + {}A - {}I = {}J",
            params.mu as i64 - params.lambda as i64,
            params.k as i64 - params.mu as i64,
            params.mu
        );
        let n = g.n();
        let mut adjacent = BTreeSet::new();
        let mut nonadjacent = BTreeSet::new();
        for u in 0..n {
            for v in u + 1..n {
                let c = g.common_neighbours(u, v);
                if g.is_adjacent(u, v) {
                    adjacent.insert(c);
                } else {
                    nonadjacent.insert(c);
                }
            }
        }
        Ok(Outcome {
            expected: json!({
                "parameters": [216, 40, 4, 8],
                "degrees": [40],
                "edges": 4320,
                "identity": "A^2 + 4A - 32I = 8J",
                "adjacent_common_neighbours": [4],
                "nonadjacent_common_neighbours": [8],
            }),
            computed: json!({
                "parameters": [params.v, params.k, params.lambda, params.mu],
                "degrees": sorted_set(g.degrees()),
                "edges": g.edge_count(),
                "identity": identity,
                "adjacent_common_neighbours": adjacent,
                "nonadjacent_common_neighbours": nonadjacent,
            }),
            details: Value::Null,
        })
    }

    fn pair_cases(&self) -> Result<Outcome> {
        let report = pair_case_analysis(self.graph, &self.geometry.ovoids, &self.geometry.subquadrangles)?;
        let census: Vec<Value> = report
            .census
            .iter()
            .map(|(&(parent_meet, ovoid_meet, adjacent), &count)| {
                json!({
                    "parent_meet": parent_meet,
                    "ovoid_meet": ovoid_meet,
                    "adjacent": adjacent,
                    "pairs": count,
                })
            })
            .collect();
        let in_case = |pm: usize, adj: bool| {
            sorted_set(
                report
                    .records
                    .iter()
                    .filter(|r| r.parent_meet == pm && r.adjacent == adj)
                    .map(|r| r.ovoid_meet),
            )
        };
        Ok(Outcome {
            expected: json!({
                "pairs": 23220,
                "six_point_adjacent": [1],
                "six_point_nonadjacent": [0, 2],
                "three_point_adjacent": [],
                "three_point_nonadjacent": [0, 1],
                "same_parent_adjacent": [],
                "same_parent_nonadjacent": [1],
            }),
            computed: json!({
                "pairs": report.records.len(),
                "six_point_adjacent": in_case(6, true),
                "six_point_nonadjacent": in_case(6, false),
                "three_point_adjacent": in_case(3, true),
                "three_point_nonadjacent": in_case(3, false),
                "same_parent_adjacent": in_case(15, true),
                "same_parent_nonadjacent": in_case(15, false),
            }),
            details: json!({ "census": census }),
        })
    }

    fn spectrum(&self) -> Result<Outcome> {
        let params = certify_srg(self.graph)?;
        let spec = spectrum_certificate(self.graph, &params)?;
        let [k, r, s] = spec.eigenvalues;
        let [_, mr, ms] = spec.multiplicities;
        Ok(Outcome {
            expected: json!({
                "eigenvalues": [40, 4, -8],
                "multiplicities": [1, 140, 75],
                "rank_a_minus_ri": 76,
                "trace": 0,
            }),
            computed: json!({
                "eigenvalues": spec.eigenvalues,
                "multiplicities": spec.multiplicities,
                "rank_a_minus_ri": spec.rank_a_minus_r,
                "trace": k + r * mr as i64 + s * ms as i64,
            }),
            details: Value::Null,
        })
    }

    fn cliques(&self) -> Result<Outcome> {
        let params = certify_srg(self.graph)?;
        let cliques = enumerate_maximal_cliques(self.graph)?;
        let census = classify_cliques(&cliques, &self.geometry.ovoids, &self.geometry.subquadrangles)?;
        Ok(Outcome {
            expected: json!({
                "clique_sizes": [3],
                "triple_meet_6": 1440,
                "triple_meet_2": 4320,
                "total": 5760,
                "vk_lambda_over_6": 5760,
            }),
            computed: json!({
                "clique_sizes": sorted_set(cliques.iter().map(|c| c.len())),
                "triple_meet_6": census.meet_six,
                "triple_meet_2": census.meet_two,
                "total": census.total(),
                "vk_lambda_over_6": params.v * params.k * params.lambda / 6,
            }),
            details: Value::Null,
        })
    }

    fn symmetry(&self) -> Result<Outcome> {
        let cert = certify_group(self.geometry, self.graph, &self.group)?;
        let generators: Vec<Value> = cert
            .generators
            .iter()
            .map(|g| json!({ "matrix": g.matrix_names(), "frobenius": g.semilinear }))
            .collect();
        Ok(Outcome {
            expected: json!({
                "automorphisms": true,
                "preserves_parent_meets": true,
                "vertex_orbit": 216,
                "linear_vertex_orbit": 216,
                "linear_order": 25920,
                "full_order": 51840,
                "vertex_stabilizer": 240,
                "subquadrangle_orbit": 36,
                "subquadrangle_stabilizer": 1440,
            }),
            computed: json!({
                "automorphisms": cert.all_automorphisms,
                "preserves_parent_meets": cert.preserves_intersections,
                "vertex_orbit": cert.full_orbit,
                "linear_vertex_orbit": cert.linear_orbit,
                "linear_order": u64::try_from(cert.linear_order).unwrap_or(u64::MAX),
                "full_order": u64::try_from(cert.full_order).unwrap_or(u64::MAX),
                "vertex_stabilizer": u64::try_from(cert.vertex_stabilizer).unwrap_or(u64::MAX),
                "subquadrangle_orbit": cert.subquadrangle_orbit,
                "subquadrangle_stabilizer": u64::try_from(cert.subquadrangle_stabilizer).unwrap_or(u64::MAX),
            }),
            details: json!({
                "seed": cert.seed,
                "used_fallback": cert.used_fallback,
                "generators": generators,
            }),
        })
    }

    fn determinism(&self) -> Result<Outcome> {
        let rebuilt = Geometry::build()?;
        let graph = build_graph(&rebuilt.ovoids, &rebuilt.subquadrangles);
        let same_exports = sorted_set(
            ExportFormat::ALL
                .into_iter()
                .filter(|&f| export_graph(&graph, f) == export_graph(self.graph, f))
                .map(ExportFormat::name),
        );
        let a = certify_group(self.geometry, self.graph, &self.group)?;
        let b = certify_group(&rebuilt, &graph, &self.group)?;
        Ok(Outcome {
            expected: json!({
                "geometry_identical": true,
                "identical_exports": ["dimacs", "edge-csv", "graph6", "json"],
                "generators_identical": true,
            }),
            computed: json!({
                "geometry_identical": &rebuilt == self.geometry,
                "identical_exports": same_exports,
                "generators_identical": a.generators == b.generators,
            }),
            details: Value::Null,
        })
    }
}
