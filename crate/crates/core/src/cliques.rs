//! Maximal cliques of the graph.
//!
//! Triangles are listed by an ordered scan `u < v < w`; each one is then shown
//! to have no common neighbour, and every edge is shown to lie in a triangle,
//! so the triangles are exactly the maximal cliques.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SrgGraph;
use crate::ovoids::OvoidSet;
use crate::subquadrangles::SubquadrangleSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CliqueRecord {
    pub vertices: [usize; 3],
    /// `|W ∩ W' ∩ W''|` over the three parent subquadrangles.
    pub triple_meet: usize,
}

/// All maximal cliques, as sorted vertex triples in lexicographic order.
pub fn enumerate_maximal_cliques(g: &SrgGraph) -> Result<Vec<[usize; 3]>> {
    let n = g.n();
    let per_vertex: Vec<Vec<[usize; 3]>> = (0..n)
        .into_par_iter()
        .map(|u| {
            let up = g.neighbours(u).above(u);
            let mut out = Vec::new();
            for v in up.iter() {
                for w in up.and(g.neighbours(v)).above(v).iter() {
                    out.push([u, v, w]);
                }
            }
            out
        })
        .collect();
    let triangles: Vec<[usize; 3]> = per_vertex.into_iter().flatten().collect();

    for t in &triangles {
        let common = g.neighbours(t[0]).and(g.neighbours(t[1])).and(g.neighbours(t[2]));
        let first = common.iter().next();
        if let Some(x) = first {
            return Err(Error::Clique(format!(
                "{{{}, {}, {}, {x}}} is a 4-clique",
                t[0], t[1], t[2]
            )));
        }
    }
    for (u, v) in g.edges() {
        if g.common_neighbours(u, v) == 0 {
            return Err(Error::Clique(format!(
                "edge ({u}, {v}) lies in no triangle and is a maximal clique of size 2"
            )));
        }
    }
    Ok(triangles)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueCensus {
    pub records: Vec<CliqueRecord>,
    pub meet_six: usize,
    pub meet_two: usize,
}

impl CliqueCensus {
    pub fn total(&self) -> usize {
        self.records.len()
    }
}

/// Classifies cliques by `|W ∩ W' ∩ W''|`, which must be 6 or 2.
pub fn classify_cliques(
    cliques: &[[usize; 3]],
    ovoids: &OvoidSet,
    subs: &SubquadrangleSet,
) -> Result<CliqueCensus> {
    let mut records = Vec::with_capacity(cliques.len());
    let (mut meet_six, mut meet_two) = (0, 0);
    for &vertices in cliques {
        let [a, b, c] = vertices.map(|v| subs.get(ovoids.get(v).parent).mask);
        let triple_meet = (a & b & c).count_ones() as usize;
        match triple_meet {
            6 => meet_six += 1,
            2 => meet_two += 1,
            other => {
                return Err(Error::Clique(format!(
                    "clique {vertices:?} has parents meeting in {other} points"
                )))
            }
        }
        records.push(CliqueRecord {
            vertices,
            triple_meet,
        });
    }
    Ok(CliqueCensus {
        records,
        meet_six,
        meet_two,
    })
}
