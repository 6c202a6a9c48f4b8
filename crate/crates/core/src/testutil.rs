use std::sync::OnceLock;

use crate::geometry::Geometry;
use crate::graph::{build_graph, SrgGraph};

pub(crate) fn geometry() -> &'static Geometry {
    static GEOMETRY: OnceLock<Geometry> = OnceLock::new();
    GEOMETRY.get_or_init(|| Geometry::build().expect("geometry builds"))
}

pub(crate) fn graph() -> &'static SrgGraph {
    static GRAPH: OnceLock<SrgGraph> = OnceLock::new();
    GRAPH.get_or_init(|| {
        let geo = geometry();
        build_graph(&geo.ovoids, &geo.subquadrangles)
    })
}
