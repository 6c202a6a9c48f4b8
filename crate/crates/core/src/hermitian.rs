//! The Hermitian surface H(3, 4) of a unitary polarity of PG(3, 4).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{self, Gf4, Vec4};
use crate::projective::{mask_points, PlaneRec, PointMask, ProjPoint, Space, NUM_POINTS};

pub type Matrix4 = [[Gf4; 4]; 4];

pub fn identity_matrix() -> Matrix4 {
    let mut m = [[Gf4::ZERO; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Gf4::ONE;
    }
    m
}

/// `m · v` with `v` a column vector.
pub fn mat_vec(m: &Matrix4, v: &Vec4) -> Vec4 {
    [0, 1, 2, 3].map(|i| fields::dot(&m[i], v))
}

pub fn mat_mul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut out = [[Gf4::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose(m: &Matrix4) -> Matrix4 {
    let mut out = [[Gf4::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = m[j][i];
        }
    }
    out
}

pub fn conj_matrix(m: &Matrix4) -> Matrix4 {
    m.map(|row| row.map(Gf4::conj))
}

/// Gram matrix of a nondegenerate Hermitian form `h(x, y) = xᵀ · G · conj(y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitaryPolarity {
    gram: Matrix4,
}

impl Default for UnitaryPolarity {
    fn default() -> Self {
        UnitaryPolarity::standard()
    }
}

impl UnitaryPolarity {
    /// The form `Σ xᵢ·conj(yᵢ)`; isotropy reads `Σ xᵢ³ = 0`.
    pub fn standard() -> UnitaryPolarity {
        UnitaryPolarity {
            gram: identity_matrix(),
        }
    }

    pub fn new(gram: Matrix4) -> Result<UnitaryPolarity> {
        if conj_matrix(&transpose(&gram)) != gram {
            return Err(Error::InvalidPolarity("gram matrix is not Hermitian"));
        }
        if fields::rank(&gram) != 4 {
            return Err(Error::InvalidPolarity("gram matrix is singular"));
        }
        Ok(UnitaryPolarity { gram })
    }

    pub fn gram(&self) -> &Matrix4 {
        &self.gram
    }

    /// `h(x, y) = xᵀ · G · conj(y)`.
    pub fn eval(&self, x: &Vec4, y: &Vec4) -> Gf4 {
        fields::dot(x, &self.polar_coeffs(y))
    }

    /// Coefficients `G · conj(y)` of the polar plane of `y`.
    pub fn polar_coeffs(&self, y: &Vec4) -> Vec4 {
        mat_vec(&self.gram, &fields::conj_vec(y))
    }
}

pub fn hermitian_eval(pol: &UnitaryPolarity, x: &ProjPoint, y: &ProjPoint) -> Gf4 {
    pol.eval(&x.coords, &y.coords)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LineClass {
    /// Contained in the surface (5 points).
    Generator,
    /// Meets the surface in 3 points.
    Secant,
    /// Meets the surface in 1 point.
    Tangent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianSurface {
    pub polarity: UnitaryPolarity,
    pub points: Vec<usize>,
    pub mask: PointMask,
    pub generators: Vec<usize>,
    pub secants: Vec<usize>,
    pub tangents: Vec<usize>,
    /// Plane index of `p^⊥` for every point `p` of PG(3, 4).
    pub polar_plane: Vec<usize>,
    line_class: Vec<LineClass>,
}

pub fn build_surface(space: &Space, pol: &UnitaryPolarity) -> Result<HermitianSurface> {
    let points: Vec<usize> = space
        .points()
        .iter()
        .filter(|p| hermitian_eval(pol, p, p).is_zero())
        .map(|p| p.index)
        .collect();
    let mask = crate::projective::mask_of(&points);

    let mut generators = Vec::new();
    let mut secants = Vec::new();
    let mut tangents = Vec::new();
    let mut line_class = Vec::with_capacity(space.lines().len());
    for line in space.lines() {
        let size = (line.mask & mask).count_ones();
        let class = match size {
            5 => LineClass::Generator,
            3 => LineClass::Secant,
            1 => LineClass::Tangent,
            _ => {
                return Err(Error::InconsistentLine {
                    line: line.index,
                    size,
                })
            }
        };
        match class {
            LineClass::Generator => generators.push(line.index),
            LineClass::Secant => secants.push(line.index),
            LineClass::Tangent => tangents.push(line.index),
        }
        line_class.push(class);
    }

    let polar_plane = space
        .points()
        .iter()
        .map(|p| {
            space
                .plane_index(&pol.polar_coeffs(&p.coords))
                .expect("nondegenerate form gives a nonzero polar vector")
        })
        .collect();

    Ok(HermitianSurface {
        polarity: pol.clone(),
        points,
        mask,
        generators,
        secants,
        tangents,
        polar_plane,
        line_class,
    })
}

impl HermitianSurface {
    #[inline]
    pub fn contains(&self, p: usize) -> bool {
        p < NUM_POINTS && self.mask & (1u128 << p) != 0
    }

    pub fn line_class(&self, line: usize) -> LineClass {
        self.line_class[line]
    }

    pub fn polar_plane<'a>(&self, space: &'a Space, p: usize) -> &'a PlaneRec {
        &space.planes()[self.polar_plane[p]]
    }

    /// The 3 generators through a surface point, in index order.
    pub fn generators_through(&self, space: &Space, p: usize) -> Result<[usize; 3]> {
        if !self.contains(p) {
            return Err(Error::NotOnSurface(p));
        }
        let gens: Vec<usize> = space
            .lines_through(p)
            .iter()
            .copied()
            .filter(|&l| self.line_class[l] == LineClass::Generator)
            .collect();
        gens.try_into().map_err(|v: Vec<usize>| Error::CountMismatch {
            what: "generators through a surface point",
            expected: 3,
            found: v.len(),
        })
    }

    /// Whether two distinct surface points are joined by a generator.
    pub fn collinear(&self, space: &Space, p: usize, q: usize) -> bool {
        space
            .line_index(p, q)
            .map(|l| self.line_class[l] == LineClass::Generator)
            .unwrap_or(false)
    }

    /// The polar line `r^⊥`, the intersection of the polar planes of two points of `r`.
    pub fn polar_line(&self, space: &Space, line: usize) -> Result<usize> {
        let (a, b) = space.lines()[line].span_pair;
        let meet = self.polar_plane(space, a).mask & self.polar_plane(space, b).mask;
        let pts = mask_points(meet);
        if pts.len() != 5 {
            return Err(Error::Structure(format!(
                "polar planes of line {line} meet in {} points",
                pts.len()
            )));
        }
        space.line_index(pts[0], pts[1])
    }

    /// Surface points on a line, as a mask.
    pub fn on_line(&self, space: &Space, line: usize) -> PointMask {
        space.lines()[line].mask & self.mask
    }
}
