//! The Schwartz 2-form `φ°`, its primitive `ψ`, and the lowered form `Ψ°_M`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::frame::OrientedFrame;
use crate::quadspace::{InnerProductSpace, Vector};

/// `R` below this is treated as lying on `D_x`.
pub const SINGULAR_R: f64 = 1e-12;
const HORIZONTAL_TOL: f64 = 1e-10;

/// Horizontal representatives `η = [η1, η2]`, `μ = [μ1, μ2]` of two tangent
/// vectors at a frame.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentPair {
    pub eta: (Vector, Vector),
    pub mu: (Vector, Vector),
}

impl TangentPair {
    pub fn swapped(&self) -> Self {
        TangentPair {
            eta: self.mu.clone(),
            mu: self.eta.clone(),
        }
    }

    /// Largest pairing of a component with the frame.
    pub fn horizontality_defect(&self, space: &InnerProductSpace, frame: &OrientedFrame) -> f64 {
        [&self.eta.0, &self.eta.1, &self.mu.0, &self.mu.1]
            .iter()
            .flat_map(|c| {
                [
                    space.inner(c, &frame.zeta1).abs(),
                    space.inner(c, &frame.zeta2).abs(),
                ]
            })
            .fold(0.0, f64::max)
    }
}

/// `Ω(η,μ) = (η1,μ2) - (η2,μ1)`.
pub fn omega(space: &InnerProductSpace, tp: &TangentPair) -> f64 {
    space.inner(&tp.eta.0, &tp.mu.1) - space.inner(&tp.eta.1, &tp.mu.0)
}

/// `φ°` from precomputed pairings: `xz = (x,ζ)`, `xe = (x,η)`, `xm = (x,μ)`.
#[inline]
pub fn phi_from_pairings(xz: [f64; 2], xe: [f64; 2], xm: [f64; 2], omega: f64) -> f64 {
    let r = xz[0] * xz[0] + xz[1] * xz[1];
    let w = xe[0] * xm[1] - xe[1] * xm[0];
    2.0 * (w - omega / (4.0 * PI)) * (-2.0 * PI * r).exp()
}

/// `φ°(x)(η,μ) = 2(ω1∧ω2 - Ω/4π) e^{-2πR}` on horizontal tangents.
pub fn phi_km_o(
    space: &InnerProductSpace,
    x: &Vector,
    frame: &OrientedFrame,
    tp: &TangentPair,
) -> Result<f64> {
    let scale = 1.0
        + [&tp.eta.0, &tp.eta.1, &tp.mu.0, &tp.mu.1]
            .iter()
            .map(|c| c.coord_norm())
            .fold(0.0, f64::max)
            * frame.zeta1.coord_norm().max(frame.zeta2.coord_norm());
    let defect = tp.horizontality_defect(space, frame);
    if defect > HORIZONTAL_TOL * scale {
        return Err(Error::NotHorizontal(defect));
    }
    let xz = [space.inner(x, &frame.zeta1), space.inner(x, &frame.zeta2)];
    let xe = [space.inner(x, &tp.eta.0), space.inner(x, &tp.eta.1)];
    let xm = [space.inner(x, &tp.mu.0), space.inner(x, &tp.mu.1)];
    Ok(phi_from_pairings(xz, xe, xm, omega(space, tp)))
}

/// `ψ` from pairings: `xz = (x,ζ)`, `xe = (x,η)` and `z2e1 = (ζ2,η1)`.
#[inline]
pub fn psi_from_pairings(xz: [f64; 2], xe: [f64; 2], z2e1: f64) -> Result<f64> {
    let r = xz[0] * xz[0] + xz[1] * xz[1];
    if r < SINGULAR_R {
        return Err(Error::SingularLocus(r));
    }
    let w = xz[0] * xe[1] - xz[1] * xe[0];
    Ok(-(-2.0 * PI * r).exp() / (2.0 * PI) * (w / r - z2e1))
}

/// The primitive `ψ(x)` evaluated on a tangent `[η1, η2]` at a frame. The
/// tangent is used as given; `ψ` vanishes on the vertical direction.
pub fn psi_o(
    space: &InnerProductSpace,
    x: &Vector,
    frame: &OrientedFrame,
    eta: &(Vector, Vector),
) -> Result<f64> {
    let xz = [space.inner(x, &frame.zeta1), space.inner(x, &frame.zeta2)];
    let xe = [space.inner(x, &eta.0), space.inner(x, &eta.1)];
    psi_from_pairings(xz, xe, space.inner(&frame.zeta2, &eta.0))
}

/// `Ψ°_M(x)(η) = e^{-2πR}((x,ζ1)(x,η2) - (x,ζ2)(x,η1))` on the horizontal
/// part of `η`.
pub fn psi_m_o(
    space: &InnerProductSpace,
    x: &Vector,
    frame: &OrientedFrame,
    eta: &(Vector, Vector),
) -> f64 {
    let h1 = frame.project_horizontal(space, &eta.0);
    let h2 = frame.project_horizontal(space, &eta.1);
    let xz = [space.inner(x, &frame.zeta1), space.inner(x, &frame.zeta2)];
    psi_m_from_pairings(xz, [space.inner(x, &h1), space.inner(x, &h2)])
}

#[inline]
pub fn psi_m_from_pairings(xz: [f64; 2], xh: [f64; 2]) -> f64 {
    let r = xz[0] * xz[0] + xz[1] * xz[1];
    (-2.0 * PI * r).exp() * (xz[0] * xh[1] - xz[1] * xh[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::frame::orthonormal_frame;
    use proptest::prelude::*;

    fn space() -> InnerProductSpace {
        InnerProductSpace::diagonal(&[1.0, 1.0, -1.0, -1.0]).unwrap()
    }

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec())
    }

    fn frame() -> OrientedFrame {
        orthonormal_frame(&space(), &v(&[0.3, -0.2, 1.0, 0.1]), &v(&[0.1, 0.4, 0.2, 1.3])).unwrap()
    }

    fn tangents(f: &OrientedFrame) -> TangentPair {
        let sp = space();
        let h = |c: &[f64]| f.project_horizontal(&sp, &v(c));
        TangentPair {
            eta: (h(&[1.0, 0.2, 0.0, 0.5]), h(&[-0.3, 0.8, 0.1, 0.0])),
            mu: (h(&[0.0, 0.5, -0.7, 0.2]), h(&[0.4, -0.1, 0.3, 1.0])),
        }
    }

    /// Rotates tangent components with the frame: `η ↦ η g(θ)`.
    fn rotate_pair(p: &(Vector, Vector), theta: f64) -> (Vector, Vector) {
        let (s, c) = theta.sin_cos();
        (
            Vector::lincomb(c, &p.0, s, &p.1),
            Vector::lincomb(-s, &p.0, c, &p.1),
        )
    }

    #[test]
    fn phi_at_origin() {
        let sp = space();
        let f = frame();
        let tp = tangents(&f);
        let got = phi_km_o(&sp, &Vector::zeros(4), &f, &tp).unwrap();
        assert!((got + omega(&sp, &tp) / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn phi_antisymmetric() {
        let sp = space();
        let f = frame();
        let tp = tangents(&f);
        let x = v(&[0.4, 0.1, -0.3, 0.2]);
        let a = phi_km_o(&sp, &x, &f, &tp).unwrap();
        let b = phi_km_o(&sp, &x, &f, &tp.swapped()).unwrap();
        assert_eq!(a, -b);
        let same = TangentPair {
            eta: tp.eta.clone(),
            mu: tp.eta.clone(),
        };
        assert_eq!(phi_km_o(&sp, &x, &f, &same).unwrap(), 0.0);
    }

    #[test]
    fn phi_rejects_vertical_tangents() {
        let sp = space();
        let f = frame();
        let tp = TangentPair {
            eta: (f.zeta2.clone(), f.zeta1.scale(-1.0)),
            mu: tangents(&f).mu,
        };
        assert!(matches!(
            phi_km_o(&sp, &Vector::zeros(4), &f, &tp),
            Err(Error::NotHorizontal(_))
        ));
    }

    #[test]
    fn psi_basic_properties() {
        let sp = space();
        let f = frame();
        let x = v(&[0.4, 0.1, -0.3, 0.2]);
        let zero = (Vector::zeros(4), Vector::zeros(4));
        assert_eq!(psi_o(&sp, &x, &f, &zero).unwrap(), 0.0);
        let vertical = (f.zeta2.clone(), f.zeta1.scale(-1.0));
        assert!(psi_o(&sp, &x, &f, &vertical).unwrap().abs() < 1e-15);
        assert!(psi_m_o(&sp, &x, &f, &vertical).abs() < 1e-15);
        let on_locus = f.project_horizontal(&sp, &x);
        assert!(matches!(
            psi_o(&sp, &on_locus, &f, &tangents(&f).eta),
            Err(Error::SingularLocus(_))
        ));
        assert_eq!(psi_m_o(&sp, &Vector::zeros(4), &f, &tangents(&f).eta), 0.0);
    }

    proptest! {
        #[test]
        fn phi_rotation_invariant(
            x in proptest::collection::vec(-2.0f64..2.0, 4),
            theta in -3.2f64..3.2,
        ) {
            let sp = space();
            let f = frame();
            let tp = tangents(&f);
            let x = Vector(x);
            let a = phi_km_o(&sp, &x, &f, &tp).unwrap();
            let g = f.rotate(theta);
            let tq = TangentPair { eta: rotate_pair(&tp.eta, theta), mu: rotate_pair(&tp.mu, theta) };
            let b = phi_km_o(&sp, &x, &g, &tq).unwrap();
            prop_assert!((a - b).abs() < 1e-10);
            let m0 = psi_m_o(&sp, &x, &f, &tp.eta);
            let m1 = psi_m_o(&sp, &x, &g, &tq.eta);
            prop_assert!((m0 - m1).abs() < 1e-10);
        }
    }
}
