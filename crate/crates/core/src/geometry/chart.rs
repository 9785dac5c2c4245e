//! The chart `(s,t) ↦ span{B1(s), B2(t)}` of the surface `S`, its analytic
//! tangents, and the integrals of `φ°` over `S` and of `ψ` over `∂S`.

use std::cell::Cell;

use nalgebra::Matrix2;

use crate::errfn::QuadratureSpec;
use crate::error::{Error, Result};
use crate::geometry::forms::{phi_from_pairings, psi_from_pairings, TangentPair};
use crate::geometry::frame::{sqrt_2x2, OrientedFrame};
use crate::geometry::incidence::FrameConfig;
use crate::quadrature::{gauss_legendre, integrate_1d, integrate_rect, AdaptiveResult};
use crate::quadspace::{InnerProductSpace, Vector};

/// Grid size for the positivity check at construction.
const CHECK_GRID: usize = 17;

/// Defaults for surface quadrature.
pub fn surface_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-9,
        max_subdivisions: 4096,
    }
}

/// Frame and raw (unprojected) derivatives at a chart point.
#[derive(Clone, Debug)]
pub struct ChartJet {
    pub frame: OrientedFrame,
    pub ds: (Vector, Vector),
    pub dt: (Vector, Vector),
}

impl ChartJet {
    /// Horizontal parts of `∂ζ/∂s` and `∂ζ/∂t`.
    pub fn horizontal(&self, space: &InnerProductSpace) -> TangentPair {
        let h = |v: &Vector| self.frame.project_horizontal(space, v);
        TangentPair {
            eta: (h(&self.ds.0), h(&self.ds.1)),
            mu: (h(&self.dt.0), h(&self.dt.1)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SurfaceChart {
    config: FrameConfig,
    d1: Vector,
    d2: Vector,
}

impl SurfaceChart {
    /// Builds the chart and checks that `P(s,t)` is positive definite on a
    /// 17x17 grid.
    pub fn new(config: FrameConfig) -> Result<Self> {
        let d1 = &config.c1p - &config.c1;
        let d2 = &config.c2p - &config.c2;
        let chart = SurfaceChart { config, d1, d2 };
        let n = CHECK_GRID - 1;
        for i in 0..=n {
            for j in 0..=n {
                let (s, t) = (i as f64 / n as f64, j as f64 / n as f64);
                let p = chart.p_matrix(&chart.b1(s), &chart.b2(t));
                if !(p.determinant() > 0.0 && p.trace() > 0.0) {
                    return Err(Error::Incidence(format!(
                        "span{{B1({s}), B2({t})}} is not a negative plane"
                    )));
                }
            }
        }
        Ok(chart)
    }

    pub fn config(&self) -> &FrameConfig {
        &self.config
    }

    pub fn space(&self) -> &InnerProductSpace {
        self.config.space()
    }

    pub fn b1(&self, s: f64) -> Vector {
        Vector::lincomb(1.0 - s, &self.config.c1, s, &self.config.c1p)
    }

    pub fn b2(&self, t: f64) -> Vector {
        Vector::lincomb(1.0 - t, &self.config.c2, t, &self.config.c2p)
    }

    fn p_matrix(&self, b1: &Vector, b2: &Vector) -> Matrix2<f64> {
        let sp = self.space();
        let off = -sp.inner(b1, b2);
        Matrix2::new(-sp.norm2(b1), off, off, -sp.norm2(b2))
    }

    /// The oriented frame `[B1(s), B2(t)] P^{-1/2}`.
    pub fn chart_point(&self, s: f64, t: f64) -> Result<OrientedFrame> {
        Ok(self.jet(s, t)?.frame)
    }

    /// Horizontal tangents `(∂ζ/∂s, ∂ζ/∂t)` at `(s,t)`.
    pub fn tangent_frames(&self, s: f64, t: f64) -> Result<TangentPair> {
        Ok(self.jet(s, t)?.horizontal(self.space()))
    }

    /// Frame and analytic first derivatives at `(s,t)`.
    pub fn jet(&self, s: f64, t: f64) -> Result<ChartJet> {
        let sp = self.space();
        let b1 = self.b1(s);
        let b2 = self.b2(t);
        let p = self.p_matrix(&b1, &b2);
        let root = sqrt_2x2(&p)?;
        let m = root.try_inverse().ok_or(Error::NotNegativePlane)?;

        let delta = p.determinant().sqrt();
        let k = (p.trace() + 2.0 * delta).sqrt();
        let adj = Matrix2::new(p[(1, 1)], -p[(0, 1)], -p[(1, 0)], p[(0, 0)]);
        // d(P^{-1/2}) = -M dS M with dS from differentiating (P + δ)/k.
        let dm = |dp: Matrix2<f64>| -> Matrix2<f64> {
            let ddelta = (adj * dp).trace() / (2.0 * delta);
            let dk = (dp.trace() + 2.0 * ddelta) / (2.0 * k);
            let ds = (dp + Matrix2::identity() * ddelta) / k - root * (dk / k);
            -(m * ds * m)
        };
        let d1b1 = sp.inner(&self.d1, &b1);
        let d1b2 = sp.inner(&self.d1, &b2);
        let d2b1 = sp.inner(&self.d2, &b1);
        let d2b2 = sp.inner(&self.d2, &b2);
        let dms = dm(-Matrix2::new(2.0 * d1b1, d1b2, d1b2, 0.0));
        let dmt = dm(-Matrix2::new(0.0, d2b1, d2b1, 2.0 * d2b2));

        let col = |j: usize| Vector::lincomb(m[(0, j)], &b1, m[(1, j)], &b2);
        let frame = OrientedFrame::new_unchecked(col(0), col(1));
        // ∂_s ζ_j = d1 M_0j + B1 dM_0j + B2 dM_1j, and similarly in t.
        let ds_col = |j: usize| {
            self.d1
                .scale(m[(0, j)])
                .axpy(dms[(0, j)], &b1)
                .axpy(dms[(1, j)], &b2)
        };
        let dt_col = |j: usize| {
            self.d2
                .scale(m[(1, j)])
                .axpy(dmt[(0, j)], &b1)
                .axpy(dmt[(1, j)], &b2)
        };
        Ok(ChartJet {
            frame,
            ds: (ds_col(0), ds_col(1)),
            dt: (dt_col(0), dt_col(1)),
        })
    }

    /// `φ°(x)(∂_s, ∂_t)` at a chart point, `x` given in lowered coordinates.
    fn phi_st(&self, xl: &[f64], s: f64, t: f64) -> Result<f64> {
        let jet = self.jet(s, t)?;
        let sp = self.space();
        let tp = jet.horizontal(sp);
        let d = |v: &Vector| dot(xl, v);
        let xz = [d(&jet.frame.zeta1), d(&jet.frame.zeta2)];
        let xe = [d(&tp.eta.0), d(&tp.eta.1)];
        let xm = [d(&tp.mu.0), d(&tp.mu.1)];
        let omega = sp.inner(&tp.eta.0, &tp.mu.1) - sp.inner(&tp.eta.1, &tp.mu.0);
        Ok(phi_from_pairings(xz, xe, xm, omega))
    }

    /// `I(x;S) = ∫_S φ°(x)`, with `S` oriented so that its boundary is
    /// `γ1 + γ2' - γ1' - γ2`; in chart coordinates the integrand is
    /// `φ°(x)(∂_t, ∂_s)`.
    pub fn surface_integral_phi(&self, x: &Vector, spec: &QuadratureSpec) -> Result<f64> {
        self.surface_integral_phi_detailed(x, spec)?.into_result()
    }

    pub fn surface_integral_phi_detailed(
        &self,
        x: &Vector,
        spec: &QuadratureSpec,
    ) -> Result<AdaptiveResult> {
        self.rect_integral_phi(x, (0.0, 1.0), (0.0, 1.0), spec)
            .map(|r| AdaptiveResult {
                value: -r.value,
                ..r
            })
    }

    /// `∫∫ φ°(x)(∂_s, ∂_t) ds dt` over a coordinate rectangle, adaptively.
    pub fn rect_integral_phi(
        &self,
        x: &Vector,
        sr: (f64, f64),
        tr: (f64, f64),
        spec: &QuadratureSpec,
    ) -> Result<AdaptiveResult> {
        let xl = self.space().lower(x);
        let err = Cell::new(None);
        let r = integrate_rect(
            |s, t| match self.phi_st(&xl, s, t) {
                Ok(v) => v,
                Err(e) => {
                    err.set(Some(e));
                    0.0
                }
            },
            sr,
            tr,
            spec.abs_tol,
            spec.max_subdivisions,
        );
        match err.into_inner() {
            Some(e) => Err(e),
            None => Ok(r),
        }
    }

    /// `∫∫ φ°(x)(∂_s, ∂_t)` over a rectangle with a fixed `m x m` rule.
    pub fn rect_rule_phi(&self, x: &Vector, sr: (f64, f64), tr: (f64, f64), m: usize) -> Result<f64> {
        let rule = gauss_legendre(m)?;
        let xl = self.space().lower(x);
        let mut first_err = None;
        let v = rule.apply_2d(sr, tr, |s, t| match self.phi_st(&xl, s, t) {
            Ok(v) => v,
            Err(e) => {
                first_err.get_or_insert(e);
                0.0
            }
        });
        first_err.map_or(Ok(v), Err)
    }

    /// Counter-clockwise `∮ ψ(x)` around a coordinate rectangle with a fixed
    /// `m`-point rule on each side, along the chart lift.
    pub fn rect_loop_psi(&self, x: &Vector, sr: (f64, f64), tr: (f64, f64), m: usize) -> Result<f64> {
        let rule = gauss_legendre(m)?;
        let xl = self.space().lower(x);
        let sp = self.space();
        let psi_at = |s: f64, t: f64, along_s: bool| -> Result<f64> {
            let jet = self.jet(s, t)?;
            let eta = if along_s { &jet.ds } else { &jet.dt };
            let xz = [dot(&xl, &jet.frame.zeta1), dot(&xl, &jet.frame.zeta2)];
            let xe = [dot(&xl, &eta.0), dot(&xl, &eta.1)];
            psi_from_pairings(xz, xe, sp.inner(&jet.frame.zeta2, &eta.0))
        };
        let mut first_err = None;
        let mut side = |fixed: f64, (a, b): (f64, f64), along_s: bool| -> f64 {
            rule.apply(a, b, |u| {
                let (s, t) = if along_s { (u, fixed) } else { (fixed, u) };
                psi_at(s, t, along_s).unwrap_or_else(|e| {
                    first_err.get_or_insert(e);
                    0.0
                })
            })
        };
        let bottom = side(tr.0, sr, true);
        let right = side(sr.1, tr, false);
        let top = side(tr.1, sr, true);
        let left = side(sr.0, tr, false);
        let v = bottom + right - top - left;
        first_err.map_or(Ok(v), Err)
    }

    /// The four boundary geodesics with their signs in `∂S`.
    pub fn boundary_lifts(&self) -> Result<[(f64, BoundaryLift); 4]> {
        let c = &self.config;
        let sp = self.space();
        Ok([
            (1.0, BoundaryLift::new(sp, &c.c1, &c.c2, &c.c2p, 1)?),
            (1.0, BoundaryLift::new(sp, &c.c2p, &c.c1, &c.c1p, 0)?),
            (-1.0, BoundaryLift::new(sp, &c.c1p, &c.c2, &c.c2p, 1)?),
            (-1.0, BoundaryLift::new(sp, &c.c2, &c.c1, &c.c1p, 0)?),
        ])
    }

    /// `∮_{∂S} ψ(x)` along the canonical lifts of the four geodesics.
    pub fn boundary_integral_psi(&self, x: &Vector, spec: &QuadratureSpec) -> Result<f64> {
        let sp = self.space();
        let xl = sp.lower(x);
        let mut total = 0.0;
        for (sign, lift) in self.boundary_lifts()? {
            let err = Cell::new(None);
            let r = integrate_1d(
                |t| {
                    let (frame, eta) = lift.eval(sp, t);
                    let xz = [dot(&xl, &frame.zeta1), dot(&xl, &frame.zeta2)];
                    let xe = [dot(&xl, &eta.0), dot(&xl, &eta.1)];
                    match psi_from_pairings(xz, xe, sp.inner(&frame.zeta2, &eta.0)) {
                        Ok(v) => v,
                        Err(e) => {
                            err.set(Some(e));
                            0.0
                        }
                    }
                },
                0.0,
                1.0,
                spec.abs_tol,
                spec.max_subdivisions,
            );
            if let Some(e) = err.into_inner() {
                return Err(e);
            }
            total += sign * r.into_result()?;
        }
        Ok(total)
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &Vector) -> f64 {
    a.iter().zip(&b.0).map(|(x, y)| x * y).sum()
}

/// A boundary geodesic lifted to frames as `[C̲, B̲(t)]` or `[B̲(t), C̲]`,
/// where `B(t) = (1-t)A⊥C + t A'⊥C`.
#[derive(Clone, Debug)]
pub struct BoundaryLift {
    fixed: Vector,
    a: Vector,
    b: Vector,
    moving_slot: usize,
}

impl BoundaryLift {
    pub fn new(
        space: &InnerProductSpace,
        base: &Vector,
        from: &Vector,
        to: &Vector,
        moving_slot: usize,
    ) -> Result<Self> {
        Ok(BoundaryLift {
            fixed: space.normalize(base)?,
            a: space.perp_component(from, base)?,
            b: space.perp_component(to, base)?,
            moving_slot,
        })
    }

    /// Frame and tangent `dζ/dt` at parameter `t`.
    pub fn eval(&self, space: &InnerProductSpace, t: f64) -> (OrientedFrame, (Vector, Vector)) {
        let bt = Vector::lincomb(1.0 - t, &self.a, t, &self.b);
        let db = &self.b - &self.a;
        let l2 = -space.norm2(&bt);
        let l = l2.sqrt();
        let dl = -space.inner(&bt, &db) / l;
        let unit = bt.scale(1.0 / l);
        let dunit = db.scale(1.0 / l).axpy(-dl / l2, &bt);
        let zero = Vector::zeros(bt.dim());
        if self.moving_slot == 1 {
            (
                OrientedFrame::new_unchecked(self.fixed.clone(), unit),
                (zero, dunit),
            )
        } else {
            (
                OrientedFrame::new_unchecked(unit, self.fixed.clone()),
                (dunit, zero),
            )
        }
    }
}
