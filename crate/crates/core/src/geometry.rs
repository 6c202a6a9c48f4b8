use crate::error::Result;
use crate::hermitian::{build_surface, HermitianSurface, UnitaryPolarity};
use crate::ovoids::{self, OvoidSet};
use crate::projective::Space;
use crate::subquadrangles::{self, SubquadrangleSet};

/// Everything below the graph: PG(3, 4), H(3, 4), its 36 subquadrangles and 216 ovoids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geometry {
    pub space: Space,
    pub surface: HermitianSurface,
    pub subquadrangles: SubquadrangleSet,
    pub ovoids: OvoidSet,
}

impl Geometry {
    pub fn build() -> Result<Geometry> {
        let space = Space::new();
        let surface = build_surface(&space, &UnitaryPolarity::standard())?;
        let subs = subquadrangles::enumerate_subquadrangles(&space, &surface)?;
        Geometry::from_parts(space, surface, subs)
    }

    /// Assembles the geometry from already-enumerated subquadrangles.
    pub fn from_parts(
        space: Space,
        surface: HermitianSurface,
        subs: Vec<subquadrangles::Subquadrangle>,
    ) -> Result<Geometry> {
        let subquadrangles = SubquadrangleSet::new(subs);
        let ovoids = ovoids::enumerate_all(&subquadrangles)?;
        Ok(Geometry {
            space,
            surface,
            subquadrangles,
            ovoids,
        })
    }
}
