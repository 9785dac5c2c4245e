use nalgebra::{DMatrix, Matrix2};

use crate::error::{Error, Result};
use crate::quadspace::{InnerProductSpace, Vector};

/// Tolerance on `(ζ,ζ) = -1₂`, relative to the coordinate size of the frame.
pub const FRAME_TOL: f64 = 1e-10;

/// An ordered pair `[ζ1, ζ2]` with `(ζ,ζ) = -1₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrientedFrame {
    pub zeta1: Vector,
    pub zeta2: Vector,
}

impl OrientedFrame {
    /// Checks orthonormality before wrapping the pair.
    pub fn new(space: &InnerProductSpace, zeta1: Vector, zeta2: Vector) -> Result<Self> {
        let f = OrientedFrame { zeta1, zeta2 };
        let dev = f.orthonormality_defect(space);
        let scale = 1.0 + f.zeta1.coord_norm().max(f.zeta2.coord_norm()).powi(2);
        if dev > FRAME_TOL * scale {
            return Err(Error::NotNegativePlane);
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(zeta1: Vector, zeta2: Vector) -> Self {
        OrientedFrame { zeta1, zeta2 }
    }

    /// `max |(ζ_i,ζ_j) + δ_ij|`.
    pub fn orthonormality_defect(&self, space: &InnerProductSpace) -> f64 {
        let a = space.norm2(&self.zeta1) + 1.0;
        let b = space.norm2(&self.zeta2) + 1.0;
        let c = space.inner(&self.zeta1, &self.zeta2);
        a.abs().max(b.abs()).max(c.abs())
    }

    /// Rotates the frame by `θ` inside its plane.
    pub fn rotate(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        OrientedFrame {
            zeta1: Vector::lincomb(c, &self.zeta1, s, &self.zeta2),
            zeta2: Vector::lincomb(-s, &self.zeta1, c, &self.zeta2),
        }
    }

    /// The same plane with the opposite orientation.
    pub fn reversed(&self) -> Self {
        OrientedFrame {
            zeta1: self.zeta2.clone(),
            zeta2: self.zeta1.clone(),
        }
    }

    /// Orthogonal projection of `eta` onto the complement of the plane.
    pub fn project_horizontal(&self, space: &InnerProductSpace, eta: &Vector) -> Vector {
        let a = space.inner(&self.zeta1, eta);
        let b = space.inner(&self.zeta2, eta);
        eta.axpy(a, &self.zeta1).axpy(b, &self.zeta2)
    }
}

/// `[b1, b2] P^{-1/2}` with `P = -Gram(b1, b2)` and the symmetric root.
pub fn orthonormal_frame(
    space: &InnerProductSpace,
    b1: &Vector,
    b2: &Vector,
) -> Result<OrientedFrame> {
    let p = Matrix2::new(
        -space.norm2(b1),
        -space.inner(b1, b2),
        -space.inner(b1, b2),
        -space.norm2(b2),
    );
    let m = inv_sqrt_2x2(&p)?;
    Ok(OrientedFrame::new_unchecked(
        Vector::lincomb(m[(0, 0)], b1, m[(1, 0)], b2),
        Vector::lincomb(m[(0, 1)], b1, m[(1, 1)], b2),
    ))
}

/// Symmetric square root of a positive definite 2x2 matrix,
/// `√P = (P + √det P · 1) / √(tr P + 2√det P)`.
pub fn sqrt_2x2(p: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    let det = p.determinant();
    let tr = p.trace();
    if !(det > 0.0 && tr > 0.0) {
        return Err(Error::NotNegativePlane);
    }
    let d = det.sqrt();
    Ok((p + Matrix2::identity() * d) / (tr + 2.0 * d).sqrt())
}

/// `P^{-1/2}` for a positive definite 2x2 matrix.
pub fn inv_sqrt_2x2(p: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    let s = sqrt_2x2(p)?;
    s.try_inverse().ok_or(Error::NotNegativePlane)
}

/// `R(x,z) = (x,ζ1)² + (x,ζ2)²`.
pub fn r_quantity(space: &InnerProductSpace, x: &Vector, frame: &OrientedFrame) -> f64 {
    let a = space.inner(x, &frame.zeta1);
    let b = space.inner(x, &frame.zeta2);
    a * a + b * b
}

/// The majorant `(x,x)_z = (x,x) + 2R(x,z)`.
pub fn majorant(space: &InnerProductSpace, x: &Vector, frame: &OrientedFrame) -> f64 {
    space.norm2(x) + 2.0 * r_quantity(space, x, frame)
}

/// Matrix of the majorant, `G + 2 Σ (Gζ_i)(Gζ_i)ᵀ`, for any number of frame
/// vectors.
pub fn majorant_matrix(space: &InnerProductSpace, zetas: &[&Vector]) -> DMatrix<f64> {
    let mut m = space.gram().clone();
    let n = space.dim();
    for z in zetas {
        let l = space.lower(z);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += 2.0 * l[i] * l[j];
            }
        }
    }
    m
}

/// Whether two oriented negative planes lie on the same component, by the
/// sign of `det((f1, f2))`.
pub fn same_component(
    space: &InnerProductSpace,
    f1: &OrientedFrame,
    f2: &OrientedFrame,
) -> Result<bool> {
    let m = Matrix2::new(
        space.inner(&f1.zeta1, &f2.zeta1),
        space.inner(&f1.zeta1, &f2.zeta2),
        space.inner(&f1.zeta2, &f2.zeta1),
        space.inner(&f1.zeta2, &f2.zeta2),
    );
    let det = m.determinant();
    if det.abs() < 1e-12 {
        return Err(Error::Ambiguous(det));
    }
    Ok(det > 0.0)
}
