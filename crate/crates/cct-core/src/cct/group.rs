//! The symmetry group of cross-bedding cubical tori.
//!
//! The rotation subgroup 𝕽 of order 12 is generated by ρ = r₃₄·r₁₂, the
//! product of the quarter turn r₁₂ in the (x₁,x₂)-plane and the sixth turn
//! r₃₄ in the (x₃,x₄)-plane (the two commute). The full group 𝔖 of order 24
//! adjoins the reflection s = diag(1,1,1,−1,1), which conjugates ρ to ρ⁵.
//!
//! Matrices are generic over the scalar so the same orbit code drives the
//! exact field realization, the rational (straightened) realization, and the
//! high-precision floating realization.

use crate::geom;
use crate::scalar::{FieldElement, Rational, Scalar};

/// A dense square matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat<S> {
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> Mat<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self { rows }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { S::one() } else { S::zero() })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.dim();
        assert_eq!(n, rhs.dim());
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(S::zero(), |acc, k| {
                            acc + self.rows[i][k].clone() * rhs.rows[k][j].clone()
                        })
                    })
                    .collect()
            })
            .collect();
        Self { rows }
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        let n = self.dim();
        assert_eq!(v.len(), n);
        self.rows.iter().map(|row| geom::dot(row, v)).collect()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.dim());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim();
        Self {
            rows: (0..n)
                .map(|i| (0..n).map(|j| self.rows[j][i].clone()).collect())
                .collect(),
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim();
        let aug: Vec<Vec<S>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { S::one() } else { S::zero() }));
                row
            })
            .collect();
        let (r, rank) = geom::rref(aug);
        if rank < n {
            return None;
        }
        Some(Self {
            rows: r.into_iter().map(|row| row[n..].to_vec()).collect(),
        })
    }

    pub fn is_orthogonal(&self) -> bool {
        self.transpose().mul(self) == Self::identity(self.dim())
    }
}

/// A rotation block `[[c, −s], [s, c]]` in coordinates (i, i+1) of an n×n
/// identity.
fn rotation_block<S: Scalar>(n: usize, i: usize, cos: S, sin: S) -> Mat<S> {
    let mut m = Mat::identity(n);
    m.rows[i][i] = cos.clone();
    m.rows[i][i + 1] = -sin.clone();
    m.rows[i + 1][i] = sin;
    m.rows[i + 1][i + 1] = cos;
    m
}

/// The quarter turn r₁₂ in the (x₁,x₂)-plane (counterclockwise).
pub fn r12<S: Scalar>(n: usize) -> Mat<S> {
    rotation_block(n, 0, S::zero(), S::one())
}

/// The sixth turn r₃₄ in the (x₃,x₄)-plane (counterclockwise by π/3).
pub fn r34(n: usize) -> Mat<FieldElement> {
    let half = FieldElement::from_int_ratio(1, 2);
    let sin = FieldElement::radical(Rational::new(1.into(), 2.into()), 3);
    rotation_block(n, 2, half, sin)
}

/// The generator ρ = r₃₄·r₁₂ of the rotation group 𝕽 ≅ Z₁₂.
pub fn rho(n: usize) -> Mat<FieldElement> {
    r34(n).mul(&r12(n))
}

/// The reflection s = diag(1,…,1,−1 at x₄,1,…) extending 𝕽 to 𝔖.
pub fn reflect_e4<S: Scalar>(n: usize) -> Mat<S> {
    let mut m = Mat::identity(n);
    m.rows[3][3] = -S::one();
    m
}

/// The straightening map Θ = diag(1,1,1,√3,1,…): conjugating 𝕽 by Θ gives
/// the rational rotation group used by the rational realization.
pub fn theta(n: usize) -> Mat<FieldElement> {
    let mut m = Mat::identity(n);
    m.rows[3][3] = FieldElement::sqrt3();
    m
}

/// Θ⁻¹·r₃₄·Θ, which is rational: [[1/2, −3/2], [1/2, 1/2]] on (x₃,x₄).
pub fn r34_straightened(n: usize) -> Mat<Rational> {
    let mut m = Mat::identity(n);
    m.rows[2][2] = Rational::new(1.into(), 2.into());
    m.rows[2][3] = Rational::new((-3).into(), 2.into());
    m.rows[3][2] = Rational::new(1.into(), 2.into());
    m.rows[3][3] = Rational::new(1.into(), 2.into());
    m
}

/// The rational conjugate Θ⁻¹ρΘ generating the straightened rotation group.
pub fn rho_straightened(n: usize) -> Mat<Rational> {
    r34_straightened(n).mul(&r12(n))
}

/// ρ evaluated in dyadic floats at the given precision.
pub fn rho_bigfloat(n: usize, prec: u32) -> Mat<crate::scalar::BigFloat> {
    use crate::scalar::BigFloat;
    let half = BigFloat::from_rational(&Rational::new(1.into(), 2.into()), prec);
    let sin = BigFloat::from_i64_prec(3, prec).sqrt().div_int(2);
    rotation_block(n, 2, half, sin).mul(&r12(n))
}

/// All 12 elements of 𝕽 (powers of ρ).
pub fn rotation_group(n: usize) -> Vec<Mat<FieldElement>> {
    let r = rho(n);
    let mut out = Vec::with_capacity(12);
    let mut acc = Mat::identity(n);
    for _ in 0..12 {
        out.push(acc.clone());
        acc = acc.mul(&r);
    }
    out
}

/// All 24 elements of 𝔖 = ⟨ρ, s⟩.
pub fn symmetry_group(n: usize) -> Vec<Mat<FieldElement>> {
    let s = reflect_e4::<FieldElement>(n);
    let mut out = rotation_group(n);
    let reflected: Vec<_> = out.iter().map(|g| g.mul(&s)).collect();
    out.extend(reflected);
    out
}
