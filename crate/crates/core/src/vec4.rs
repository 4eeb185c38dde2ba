//! Vector algebra in R⁴, including the three-argument vector product.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vectors with norm at or below this are treated as zero.
pub const EPS_DEGENERATE: f64 = 1e-12;

/// A point or vector in R⁴.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec4(pub [f64; 4]);

impl Vec4 {
    pub const ZERO: Vec4 = Vec4([0.0; 4]);

    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Vec4([x1, x2, x3, x4])
    }

    /// The standard basis vector e_i, with `i` in 1..=4.
    pub fn basis(i: usize) -> Self {
        assert!((1..=4).contains(&i), "basis index {i} out of range 1..=4");
        let mut c = [0.0; 4];
        c[i - 1] = 1.0;
        Vec4(c)
    }

    pub fn dot(&self, other: &Vec4) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Unit vector in the direction of `self`.
    ///
    /// Fails with [`Error::DegenerateVector`] when the norm is at or below
    /// [`EPS_DEGENERATE`].
    pub fn normalize(&self) -> Result<Vec4> {
        let n = self.norm();
        if !(n > EPS_DEGENERATE) {
            return Err(Error::DegenerateVector { norm: n });
        }
        Ok(*self * (1.0 / n))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Componentwise linear combination Σ coeffs[i]·vectors[i].
    pub fn combine(coeffs: [f64; 4], vectors: [Vec4; 4]) -> Vec4 {
        let mut out = Vec4::ZERO;
        for (c, v) in coeffs.iter().zip(vectors.iter()) {
            out += *v * *c;
        }
        out
    }
}

/// The vector product u ⊗ v ⊗ w in R⁴.
///
/// Defined as the formal 4×4 determinant whose first row is the basis
/// (e1, e2, e3, e4) followed by the rows u, v, w, expanded along that first
/// row. With this convention e1 ⊗ e2 ⊗ e3 = −e4 and e2 ⊗ e3 ⊗ e4 = e1.
/// The result is orthogonal to all three arguments and vanishes when they
/// are linearly dependent.
pub fn ternary_cross(u: &Vec4, v: &Vec4, w: &Vec4) -> Vec4 {
    // 2×2 minors of the (u, v) rows; exactly antisymmetric in u and v,
    // and exactly zero when u == v
    let p = |i: usize, j: usize| u.0[i] * v.0[j] - u.0[j] * v.0[i];
    // 3×3 minor on columns a < b < c, expanded along the w row
    let minor = |a: usize, b: usize, c: usize| {
        w.0[a] * p(b, c) - w.0[b] * p(a, c) + w.0[c] * p(a, b)
    };
    Vec4([minor(1, 2, 3), -minor(0, 2, 3), minor(0, 1, 3), -minor(0, 1, 2)])
}

/// Determinant of a 3×3 matrix given by rows, expanded along the first row.
pub fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Determinant of a 2×2 matrix given by rows.
pub fn det2(m: [[f64; 2]; 2]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

impl Index<usize> for Vec4 {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for Vec4 {
    type Output = Vec4;

    fn add(self, rhs: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl AddAssign for Vec4 {
    fn add_assign(&mut self, rhs: Vec4) {
        *self = *self + rhs;
    }
}

impl Sub for Vec4 {
    type Output = Vec4;

    fn sub(self, rhs: Vec4) -> Vec4 {
        Vec4(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;

    fn mul(self, k: f64) -> Vec4 {
        Vec4(self.0.map(|c| c * k))
    }
}

impl Mul<Vec4> for f64 {
    type Output = Vec4;

    fn mul(self, v: Vec4) -> Vec4 {
        v * self
    }
}

impl Neg for Vec4 {
    type Output = Vec4;

    fn neg(self) -> Vec4 {
        Vec4(self.0.map(|c| -c))
    }
}

impl From<[f64; 4]> for Vec4 {
    fn from(c: [f64; 4]) -> Self {
        Vec4(c)
    }
}
