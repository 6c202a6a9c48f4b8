//! Arithmetic in GF(4) = GF(2)[ω] / (ω² + ω + 1).
//!
//! Elements are stored as 2-bit codes `0 → 0`, `1 → 1`, `ω → 2`, `ω² → 3`.
//! The code order doubles as the canonical field order `0 < 1 < ω < ω²`
//! used by every lexicographic enumeration in the crate. GF(2) is the
//! subfield `{0, 1}`, i.e. the fixed field of [`Gf4::conj`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ADD: [[u8; 4]; 4] = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
const MUL: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
const CONJ: [u8; 4] = [0, 1, 3, 2];
// entry 0 is never read
const INV: [u8; 4] = [0, 1, 3, 2];

const NAMES: [&str; 4] = ["0", "1", "w", "w2"];

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[derive(Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Gf4(u8);

/// A homogeneous coordinate vector of PG(3, 4).
pub type Vec4 = [Gf4; 4];

impl Gf4 {
    pub const ZERO: Gf4 = Gf4(0);
    pub const ONE: Gf4 = Gf4(1);
    pub const W: Gf4 = Gf4(2);
    pub const W2: Gf4 = Gf4(3);

    /// All elements in canonical order.
    pub const ALL: [Gf4; 4] = [Gf4::ZERO, Gf4::ONE, Gf4::W, Gf4::W2];
    pub const NONZERO: [Gf4; 3] = [Gf4::ONE, Gf4::W, Gf4::W2];

    pub fn from_code(code: u8) -> Option<Gf4> {
        (code < 4).then_some(Gf4(code))
    }

    #[inline]
    pub fn code(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Frobenius map `x ↦ x²`, the involutory automorphism fixing GF(2).
    #[inline]
    pub fn conj(self) -> Gf4 {
        Gf4(CONJ[self.0 as usize])
    }

    pub fn inv(self) -> Result<Gf4> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(Gf4(INV[self.0 as usize]))
        }
    }

    /// Norm to GF(2): `x · conj(x) = x³`.
    #[inline]
    pub fn norm(self) -> Gf4 {
        self * self.conj()
    }

    /// Whether the element lies in the prime field GF(2).
    #[inline]
    pub fn in_prime_field(self) -> bool {
        self.0 < 2
    }

    pub fn name(self) -> &'static str {
        NAMES[self.0 as usize]
    }
}

#[inline]
pub fn add(a: Gf4, b: Gf4) -> Gf4 {
    Gf4(ADD[a.0 as usize][b.0 as usize])
}

#[inline]
pub fn mul(a: Gf4, b: Gf4) -> Gf4 {
    Gf4(MUL[a.0 as usize][b.0 as usize])
}

#[inline]
pub fn conj(a: Gf4) -> Gf4 {
    a.conj()
}

pub fn inv(a: Gf4) -> Result<Gf4> {
    a.inv()
}

impl Add for Gf4 {
    type Output = Gf4;
    #[inline]
    fn add(self, rhs: Gf4) -> Gf4 {
        add(self, rhs)
    }
}

// characteristic 2: subtraction is addition
impl Sub for Gf4 {
    type Output = Gf4;
    #[inline]
    fn sub(self, rhs: Gf4) -> Gf4 {
        add(self, rhs)
    }
}

impl Mul for Gf4 {
    type Output = Gf4;
    #[inline]
    fn mul(self, rhs: Gf4) -> Gf4 {
        mul(self, rhs)
    }
}

impl AddAssign for Gf4 {
    fn add_assign(&mut self, rhs: Gf4) {
        *self = *self + rhs;
    }
}

impl MulAssign for Gf4 {
    fn mul_assign(&mut self, rhs: Gf4) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for Gf4 {
    fn sum<I: Iterator<Item = Gf4>>(iter: I) -> Gf4 {
        iter.fold(Gf4::ZERO, Add::add)
    }
}

impl fmt::Display for Gf4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Debug for Gf4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Gf4 {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Gf4, String> {
        NAMES
            .iter()
            .position(|&n| n == s)
            .map(|i| Gf4(i as u8))
            .ok_or_else(|| format!("`{s}` is not a GF(4) element name"))
    }
}

impl From<Gf4> for String {
    fn from(x: Gf4) -> String {
        x.name().to_string()
    }
}

impl TryFrom<String> for Gf4 {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Gf4, String> {
        s.parse()
    }
}

pub fn scale(c: Gf4, v: &Vec4) -> Vec4 {
    v.map(|x| c * x)
}

pub fn add_vec(a: &Vec4, b: &Vec4) -> Vec4 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

/// Bilinear pairing `Σ aᵢ·bᵢ`.
pub fn dot(a: &Vec4, b: &Vec4) -> Gf4 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn conj_vec(v: &Vec4) -> Vec4 {
    v.map(Gf4::conj)
}

/// Rank over GF(4) of a list of vectors, by Gaussian elimination.
pub fn rank(vectors: &[Vec4]) -> usize {
    let mut rows: Vec<Vec4> = vectors.to_vec();
    let mut rank = 0;
    for col in 0..4 {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].inv().expect("pivot is nonzero");
        let pivot_row = scale(inv, &rows[rank]);
        rows[rank] = pivot_row;
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col];
                rows[r] = add_vec(&rows[r], &scale(f, &pivot_row));
            }
        }
        rank += 1;
    }
    rank
}

/// Solves `Σ xⱼ·columns[j] = rhs` for a square system; `None` when singular.
pub fn solve(columns: &[Vec4; 4], rhs: &Vec4) -> Option<[Gf4; 4]> {
    // augmented matrix, row i = (columns[0][i], .., columns[3][i] | rhs[i])
    let mut m = [[Gf4::ZERO; 5]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = columns[j][i];
        }
        m[i][4] = rhs[i];
    }
    for col in 0..4 {
        let pivot = (col..4).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].inv().ok()?;
        for x in m[col].iter_mut() {
            *x *= inv;
        }
        let pivot_row = m[col];
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col];
                for (x, p) in row.iter_mut().zip(pivot_row) {
                    *x += f * p;
                }
            }
        }
    }
    Some([m[0][4], m[1][4], m[2][4], m[3][4]])
}
