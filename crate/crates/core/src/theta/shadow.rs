use num_complex::Complex64;
use rayon::prelude::*;

use super::{scaled_term, TauPoint, ThetaContext};
use crate::error::Result;
use crate::geometry::psi_m_o;
use crate::lattice::{to_f64, Coset};
use crate::quadrature::integrate_1d;

/// Base step for the `τ`-derivatives.
pub const FD_STEP: f64 = 1e-4;

/// The lowered series with its contributions from `γ1, γ2', -γ1', -γ2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShadowValue {
    pub value: Complex64,
    pub parts: [Complex64; 4],
    pub terms: usize,
}

/// `-2iv² ∂f/∂τ̄` by central differences in `u` and `v` with one
/// Richardson step.
pub fn lowering_fd<F>(f: F, tau: TauPoint, h: f64) -> Result<Complex64>
where
    F: Fn(TauPoint) -> Result<Complex64>,
{
    let at = |du: f64, dv: f64| f(TauPoint { u: tau.u + du, v: tau.v + dv });
    let d = |h: f64, along_u: bool| -> Result<Complex64> {
        let (a, b) = if along_u { (at(h, 0.0)?, at(-h, 0.0)?) } else { (at(0.0, h)?, at(0.0, -h)?) };
        Ok((a - b) / (2.0 * h))
    };
    let rich = |along_u: bool| -> Result<Complex64> { Ok((4.0 * d(h / 2.0, along_u)? - d(h, along_u)?) / 3.0) };
    let du = rich(true)?;
    let dv = rich(false)?;
    Ok(Complex64::new(0.0, -1.0) * tau.v * tau.v * (du + Complex64::i() * dv))
}

/// `L I_μ` by differentiating the completed series numerically; the vector
/// set is fixed at truncation `qmax` for every evaluation.
pub fn shadow_fd(ctx: &ThetaContext, mu: &Coset, tau: TauPoint, qmax: f64) -> Result<Complex64> {
    let terms = ctx.terms(mu, 2.0 * qmax)?;
    lowering_fd(|t| ctx.sum_terms(&terms, t, |y| ctx.closed_form_i(y)), tau, FD_STEP)
}

/// `L I_μ = v Σ q^{Q(x)} ∮_{∂S} Ψ°_M(√v x)`, along the boundary lifts.
pub fn shadow_boundary(ctx: &ThetaContext, mu: &Coset, tau: TauPoint, qmax: f64) -> Result<ShadowValue> {
    let terms = ctx.terms(mu, 2.0 * qmax)?;
    let lifts = ctx.chart().boundary_lifts()?;
    let sp = ctx.config().space();
    let spec = ctx.spec();
    let sv = tau.v.sqrt();
    let per_term: Vec<[Complex64; 4]> = terms
        .par_iter()
        .map(|t| {
            let y = t.x.scale(sv);
            let exponent = to_f64(&t.exponent);
            let mut out = [Complex64::default(); 4];
            for (slot, (sign, lift)) in lifts.iter().enumerate() {
                let r = integrate_1d(
                    |s| {
                        let (frame, eta) = lift.eval(sp, s);
                        psi_m_o(sp, &y, &frame, &eta)
                    },
                    0.0,
                    1.0,
                    spec.abs_tol,
                    spec.max_subdivisions,
                );
                out[slot] = tau.v * scaled_term(sign * r.into_result()?, tau, exponent);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut parts = [Complex64::default(); 4];
    for p in &per_term {
        for j in 0..4 {
            parts[j] += p[j];
        }
    }
    Ok(ShadowValue {
        value: parts.iter().sum(),
        parts,
        terms: terms.len(),
    })
}
