use std::f64::consts::PI;

use num_complex::Complex64;

use super::{TauPoint, ThetaContext};
use crate::error::Result;
use crate::lattice::{frac, to_f64, Coset};

/// Denominators below this make a coset's measured ratio meaningless.
const INCONCLUSIVE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    T,
    S,
}

/// Outcome of a modular transformation check.
///
/// For `T`, `per_coset` holds `lhs - rhs`. For `S`, it holds the measured
/// ratio `r_μ`, `measured_phase` their mean and `residual` the largest
/// deviation from it.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularityReport {
    pub transform: Transform,
    pub residual: f64,
    pub measured_phase: Option<Complex64>,
    pub candidate_phase: Option<Complex64>,
    pub per_coset: Vec<(Coset, Complex64)>,
    pub inconclusive: Vec<Coset>,
    pub qmax: f64,
    pub tail_bound: f64,
}

impl ModularityReport {
    /// Largest `||r_μ| - 1|` for an `S` report.
    pub fn unitarity_defect(&self) -> f64 {
        self.per_coset
            .iter()
            .map(|(_, r)| (r.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Checks `I_μ(τ+1) = e^{2πiQ(μ)} I_μ(τ)` on every coset.
pub fn verify_t(ctx: &ThetaContext, tau: TauPoint, tol: f64) -> Result<ModularityReport> {
    let lattice = ctx.lattice().clone();
    verify_t_with(ctx, tau, tol, |mu| {
        Complex64::from_polar(1.0, 2.0 * PI * to_f64(&mu.norm_mod1(&lattice)))
    })
}

/// [`verify_t`] with an arbitrary multiplier, for negative controls.
pub fn verify_t_with<F>(ctx: &ThetaContext, tau: TauPoint, tol: f64, multiplier: F) -> Result<ModularityReport>
where
    F: Fn(&Coset) -> Complex64,
{
    let qmax = ctx.qmax_for_tail(tau.v, tol)?;
    let shifted = TauPoint::new(tau.u + 1.0, tau.v)?;
    let mut per_coset = Vec::new();
    let mut residual: f64 = 0.0;
    for mu in ctx.cosets()? {
        let a = ctx.completed_theta(&mu, shifted, qmax, tol)?.value;
        let b = ctx.completed_theta(&mu, tau, qmax, tol)?.value;
        let d = a - multiplier(&mu) * b;
        residual = residual.max(d.norm());
        per_coset.push((mu, d));
    }
    Ok(ModularityReport {
        transform: Transform::T,
        residual,
        measured_phase: None,
        candidate_phase: None,
        per_coset,
        inconclusive: Vec::new(),
        qmax,
        tail_bound: ctx.tail_bound(qmax, tau.v),
    })
}

/// Measures `r_μ = I_μ(-1/τ) / (τ^{n/2} |L^∨/L|^{-1/2} Σ_ν e^{-2πi(μ,ν)} I_ν(τ))`.
///
/// The transformation constant is reported rather than assumed; the value
/// `e^{2πi(4-n)/8}` is attached as a candidate for comparison.
pub fn verify_s(ctx: &ThetaContext, tau: TauPoint, tol: f64) -> Result<ModularityReport> {
    let lattice = ctx.lattice();
    let n = lattice.rank() as f64;
    let image = tau.s_image();
    let v_min = tau.v.min(image.v);
    let qmax = ctx.qmax_for_tail(v_min, tol)?;
    let cosets = ctx.cosets()?;
    let at_tau: Vec<Complex64> = cosets
        .iter()
        .map(|mu| Ok(ctx.completed_theta(mu, tau, qmax, tol)?.value))
        .collect::<Result<_>>()?;
    let scale = tau.as_complex().powf(n / 2.0) / (cosets.len() as f64).sqrt();
    let mut per_coset = Vec::new();
    let mut inconclusive = Vec::new();
    for mu in &cosets {
        let lhs = ctx.completed_theta(mu, image, qmax, tol)?.value;
        let sum: Complex64 = cosets
            .iter()
            .zip(&at_tau)
            .map(|(nu, val)| {
                let p = frac(lattice.pairing(&mu.mu, &nu.mu));
                Complex64::from_polar(1.0, -2.0 * PI * to_f64(&p)) * val
            })
            .sum();
        let den = scale * sum;
        if den.norm() < INCONCLUSIVE {
            inconclusive.push(mu.clone());
            continue;
        }
        per_coset.push((mu.clone(), lhs / den));
    }
    let measured = if per_coset.is_empty() {
        None
    } else {
        Some(per_coset.iter().map(|(_, r)| r).sum::<Complex64>() / per_coset.len() as f64)
    };
    let residual = measured.map_or(f64::INFINITY, |m| {
        per_coset.iter().map(|(_, r)| (r - m).norm()).fold(0.0, f64::max)
    });
    Ok(ModularityReport {
        transform: Transform::S,
        residual,
        measured_phase: measured,
        candidate_phase: Some(Complex64::from_polar(1.0, 2.0 * PI * (4.0 - n) / 8.0)),
        per_coset,
        inconclusive,
        qmax,
        tail_bound: ctx.tail_bound(qmax, v_min),
    })
}

/// Distance from `z` to the nearest eighth root of unity, with its index.
pub fn nearest_eighth_root(z: Complex64) -> (usize, f64) {
    (0..8)
        .map(|k| (k, (z - Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 8.0)).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("eight candidates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::errfn::QuadratureSpec;
    use crate::fixture;

    fn ctx() -> ThetaContext {
        ThetaContext::new(
            fixture::fixture_lattice(),
            fixture::canonical_config(),
            QuadratureSpec::default(),
        )
        .unwrap()
    }

    #[test]
    fn eighth_roots() {
        let (k, d) = nearest_eighth_root(Complex64::new(0.0, 1.0));
        assert_eq!(k, 2);
        assert!(d < 1e-15);
    }

    #[test]
    fn t_transform_and_negative_control() {
        let c = ctx();
        let tau = TauPoint::new(0.37, 1.3).unwrap();
        let rep = verify_t(&c, tau, 1e-4).unwrap();
        assert!(rep.residual < 1e-10, "{}", rep.residual);
        let bad = verify_t_with(&c, tau, 1e-4, |_| Complex64::new(-1.0, 0.0)).unwrap();
        assert!(bad.residual > 1e-3);
    }
}
