//! Numerical checks of the identities behind the series: the closed form of
//! the surface integral, the primitive `dψ = φ`, intersection numbers,
//! convergence of the sign series, modularity, the two evaluation paths and
//! the shadow. Each returns the measured residuals; thresholds are left to
//! the caller.

use std::f64::consts::{FRAC_2_PI, PI, SQRT_2};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::errfn::{e2, e2_boosted, e2_flat, tilde_e2, QuadratureSpec};
use crate::error::Result;
use crate::geometry::{
    intersection_number, intersection_point, phi2, r_quantity, surface_spec, FrameConfig,
    SurfaceChart,
};
use crate::lattice::{to_f64, Coset};
use crate::quadspace::{sgn, InnerProductSpace, Vector};
use crate::theta::{shadow_boundary, shadow_fd, TauPoint, ThetaContext};

/// Points per side for the fixed rules in [`stokes`]; the midpoint rule
/// makes the residual of a square of side `h` scale as `h⁴`.
pub const STOKES_RULE: usize = 1;

/// `-¼ Σ ±E2(C,C';x)` with the boosted error functions evaluated directly.
pub fn closed_form_rhs(config: &FrameConfig, x: &Vector, spec: &QuadratureSpec) -> Result<f64> {
    let sp = config.space();
    let e = |a: &Vector, b: &Vector| e2_boosted(sp, a, b, x, spec);
    Ok(-0.25
        * (e(&config.c1, &config.c2)? - e(&config.c1, &config.c2p)? - e(&config.c1p, &config.c2)?
            + e(&config.c1p, &config.c2p)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceIdentityCheck {
    pub checked: usize,
    pub skipped_irregular: usize,
    pub max_residual: f64,
    pub worst: Option<Vector>,
    pub elapsed: Duration,
}

/// `|∫_S φ°(x/√2) + ¼ Σ ±E2(C,C';x)|` over the regular vectors of `xs`.
pub fn surface_identity(chart: &SurfaceChart, xs: &[Vector], spec: &QuadratureSpec) -> Result<SurfaceIdentityCheck> {
    let start = Instant::now();
    let config = chart.config();
    let surface = surface_spec();
    let regular: Vec<&Vector> = xs.iter().filter(|x| config.is_regular(x)).collect();
    let residuals: Vec<(f64, &Vector)> = regular
        .par_iter()
        .map(|x| {
            let s = chart.surface_integral_phi(&x.scale(1.0 / SQRT_2), &surface)?;
            Ok(((s - closed_form_rhs(config, x, spec)?).abs(), *x))
        })
        .collect::<Result<_>>()?;
    let worst = residuals.iter().max_by(|a, b| a.0.total_cmp(&b.0));
    Ok(SurfaceIdentityCheck {
        checked: residuals.len(),
        skipped_irregular: xs.len() - residuals.len(),
        max_residual: worst.map_or(0.0, |w| w.0),
        worst: worst.map(|w| w.1.clone()),
        elapsed: start.elapsed(),
    })
}

/// `arctan((C,C')/√Δ(C,C'))`.
fn arctan_pair(sp: &InnerProductSpace, a: &Vector, b: &Vector) -> f64 {
    (sp.inner(a, b) / sp.delta(a, b).value.sqrt()).atan()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArctanCheck {
    pub surface: f64,
    pub arctan: f64,
    pub residual: f64,
}

/// `∫_S φ°(0)` against `(1/2π)(a12 - a12' - a1'2 + a1'2')` with
/// `a = arctan((C,C')/√Δ)`.
pub fn arctan_identity(chart: &SurfaceChart) -> Result<ArctanCheck> {
    let c = chart.config();
    let sp = c.space();
    let surface = chart.surface_integral_phi(&Vector::zeros(sp.dim()), &surface_spec())?;
    let arctan = (arctan_pair(sp, &c.c1, &c.c2)
        - arctan_pair(sp, &c.c1, &c.c2p)
        - arctan_pair(sp, &c.c1p, &c.c2)
        + arctan_pair(sp, &c.c1p, &c.c2p))
        / (2.0 * PI);
    Ok(ArctanCheck {
        surface,
        arctan,
        residual: (surface - arctan).abs(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StokesCheck {
    pub squares: usize,
    pub side: f64,
    pub max_residual: f64,
    pub min_ratio: f64,
}

/// Least `R(x,z)` over the corners and centre of a Stokes square.
pub const STOKES_R_GUARD: f64 = 0.5;

/// `|∮ψ - ∬φ|` on random concentric chart squares of side `h` and `h/2`,
/// for random regular `x` with `R(x,z) ≥ STOKES_R_GUARD` at the corners and
/// centre of the larger square. `ψ` is singular on `D_x`, so the guard keeps
/// the squares where both rules are in their asymptotic range.
pub fn stokes(chart: &SurfaceChart, seed: u64, squares: usize, h: f64) -> Result<StokesCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let config = chart.config();
    let sp = config.space();
    let dim = sp.dim();
    let mut cases = Vec::with_capacity(squares);
    while cases.len() < squares {
        let x = Vector::new((0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect());
        let s = rng.gen_range(h / 2.0..1.0 - h / 2.0);
        let t = rng.gen_range(h / 2.0..1.0 - h / 2.0);
        if !config.is_regular(&x) {
            continue;
        }
        let d = h / 2.0;
        let mut r_min = f64::INFINITY;
        for (a, b) in [(s, t), (s - d, t - d), (s + d, t - d), (s - d, t + d), (s + d, t + d)] {
            r_min = r_min.min(r_quantity(sp, &x, &chart.chart_point(a, b)?));
        }
        if r_min >= STOKES_R_GUARD {
            cases.push((x, s, t));
        }
    }
    let out: Vec<(f64, f64)> = cases
        .par_iter()
        .map(|(x, s, t)| {
            let res = |h: f64| -> Result<f64> {
                let sr = (s - h / 2.0, s + h / 2.0);
                let tr = (t - h / 2.0, t + h / 2.0);
                Ok((chart.rect_loop_psi(x, sr, tr, STOKES_RULE)? - chart.rect_rule_phi(x, sr, tr, STOKES_RULE)?)
                    .abs())
            };
            let full = res(h)?;
            let half = res(h / 2.0)?;
            Ok((full, full / half))
        })
        .collect::<Result<_>>()?;
    Ok(StokesCheck {
        squares,
        side: h,
        max_residual: out.iter().map(|o| o.0).fold(0.0, f64::max),
        min_ratio: out.iter().map(|o| o.1).fold(f64::INFINITY, f64::min),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionCheck {
    pub tested: usize,
    pub mismatches: usize,
    pub missing_points: usize,
    pub max_residual: f64,
}

/// `Φ2(x)` against `intersection_number(x)` for regular `x` with
/// `Φ2(x) ≠ 0`, with `R(x, z(s0,t0))` at the intersection point.
pub fn intersection(chart: &SurfaceChart, xs: &[Vector]) -> Result<IntersectionCheck> {
    let config = chart.config();
    let sp = config.space();
    let mut out = IntersectionCheck {
        tested: 0,
        mismatches: 0,
        missing_points: 0,
        max_residual: 0.0,
    };
    for x in xs {
        let p = phi2(config, x);
        if p == 0.0 || !config.is_regular(x) {
            continue;
        }
        out.tested += 1;
        if intersection_number(config, x)? != p {
            out.mismatches += 1;
        }
        match intersection_point(config, x) {
            Some((s, t)) => {
                let z = chart.chart_point(s, t)?;
                out.max_residual = out.max_residual.max(r_quantity(sp, x, &z));
            }
            None => out.missing_points += 1,
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HolomorphicCheck {
    pub cosets: usize,
    pub unstable: Vec<Coset>,
    pub terms: usize,
    /// Largest `log|q^{Q(x)}| + πv(x,x)_S` over retained terms; domination
    /// means it is at most zero.
    pub domination_excess: f64,
}

/// Holomorphic parts through `qmax` under the default bound and its double,
/// and domination of every retained term by `e^{-πv(x,x)_S}`.
pub fn holomorphic_stability(ctx: &ThetaContext, qmax: f64, v: f64) -> Result<HolomorphicCheck> {
    let cosets = ctx.cosets()?;
    let mut out = HolomorphicCheck {
        cosets: cosets.len(),
        unstable: Vec::new(),
        terms: 0,
        domination_excess: f64::NEG_INFINITY,
    };
    for mu in &cosets {
        let a = ctx.holomorphic_part(mu, qmax)?;
        let b = ctx.holomorphic_part_bounded(mu, qmax, 4.0 * qmax)?;
        if a != b {
            out.unstable.push(mu.clone());
        }
        for t in ctx.terms(mu, 2.0 * qmax)? {
            let q = to_f64(&t.exponent);
            if q > qmax || phi2(ctx.config(), &t.x) == 0.0 {
                continue;
            }
            out.terms += 1;
            let excess = -2.0 * PI * v * q + PI * v * t.norm_s;
            out.domination_excess = out.domination_excess.max(excess);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoPathCheck {
    pub terms: usize,
    pub closed: Complex64,
    pub quadrature: Complex64,
    pub residual: f64,
    pub elapsed: Duration,
}

/// The completed series on one truncation, once through the closed form and
/// once by integrating every term over the surface.
pub fn two_path(ctx: &ThetaContext, mu: &Coset, tau: TauPoint, qmax: f64) -> Result<TwoPathCheck> {
    let start = Instant::now();
    let closed = ctx.completed_theta(mu, tau, qmax, f64::INFINITY)?;
    let quadrature = ctx.completed_theta_quadrature(mu, tau, qmax)?;
    Ok(TwoPathCheck {
        terms: closed.terms,
        closed: closed.value,
        quadrature: quadrature.value,
        residual: (closed.value - quadrature.value).norm(),
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShadowCheck {
    pub derivative: Complex64,
    pub boundary: Complex64,
    pub residual: f64,
    pub terms: usize,
}

/// The lowering operator applied numerically against the boundary formula.
pub fn shadow(ctx: &ThetaContext, mu: &Coset, tau: TauPoint, qmax: f64) -> Result<ShadowCheck> {
    let derivative = shadow_fd(ctx, mu, tau, qmax)?;
    let boundary = shadow_boundary(ctx, mu, tau, qmax)?;
    Ok(ShadowCheck {
        derivative,
        boundary: boundary.value,
        residual: (derivative - boundary.value).norm(),
        terms: boundary.terms,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorFunctionCheck {
    pub e2_origin: f64,
    /// Largest `|E2(C,C';0) + (2/π) arctan((C,C')/√Δ)|` over the fixture pairs.
    pub origin_residual: f64,
    pub identity_samples: usize,
    pub identity_residual: f64,
    /// Largest gap between one-sided wall limits, or between a limit and the
    /// value on the wall.
    pub wall_residual: f64,
}

/// Offset at which wall limits are probed.
pub const WALL_EPS: f64 = 1e-4;

/// The error-function identities: `e2(0,0) = 0`, the value at the origin,
/// the decomposition of `E2` into `ẽ2` terms over random pairs, and the
/// agreement of one-sided limits at sign walls.
pub fn error_functions(config: &FrameConfig, seed: u64, samples: usize, spec: &QuadratureSpec) -> Result<ErrorFunctionCheck> {
    let sp = config.space();
    let zero = Vector::zeros(sp.dim());
    let mut origin_residual: f64 = 0.0;
    for (a, b) in [
        (&config.c1, &config.c2),
        (&config.c1, &config.c2p),
        (&config.c1p, &config.c2),
        (&config.c1p, &config.c2p),
    ] {
        let got = e2_boosted(sp, a, b, &zero, spec)?;
        origin_residual = origin_residual.max((got + FRAC_2_PI * arctan_pair(sp, a, b)).abs());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = sp.dim();
    let mut draw = |w: f64| Vector::new((0..dim).map(|_| rng.gen_range(-w..w)).collect());
    let mut cases = Vec::with_capacity(samples);
    while cases.len() < samples {
        let (c1, c2, x) = (draw(1.5), draw(1.5), draw(3.0));
        if sp.norm2(&c1) >= -0.05 || sp.norm2(&c2) >= -0.05 || !sp.delta(&c1, &c2).positive {
            continue;
        }
        if sp.delta(&c1, &c2).value < 1e-3 {
            continue;
        }
        cases.push((c1, c2, x));
    }
    let identity_residual = cases
        .par_iter()
        .map(|(c1, c2, x)| {
            let unit = |c: &Vector| sp.normalize(c);
            let c1n = unit(c1)?;
            let c2n = unit(c2)?;
            let c12 = unit(&sp.perp_component(c1, c2)?)?;
            let c21 = unit(&sp.perp_component(c2, c1)?)?;
            let rhs = -tilde_e2(sp.inner(x, &c12), sp.inner(x, &c2n), spec)?
                - tilde_e2(sp.inner(x, &c21), sp.inner(x, &c1n), spec)?
                + sgn(sp.inner(x, &c2n)) * sgn(sp.inner(x, &c1n));
            Ok((e2_boosted(sp, c1, c2, x, spec)? - rhs).abs())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);

    let mut wall_residual: f64 = 0.0;
    for (alpha, u1) in [(0.8_f64, 0.6), (-1.3, 1.1), (0.2, -2.0)] {
        let s = (1.0 + alpha * alpha).sqrt();
        // u2 = 0 along (0,1); u2' = 0 along the rotated direction.
        for (base, dir) in [((u1, 0.0), (0.0, 1.0)), ((u1, -u1 / alpha), (1.0 / s, alpha / s))] {
            let f = |e: f64| e2_flat(alpha, base.0 + e * dir.0, base.1 + e * dir.1, spec);
            let limit = |side: f64| -> Result<f64> { Ok(2.0 * f(side * WALL_EPS / 2.0)? - f(side * WALL_EPS)?) };
            let (lp, lm, at) = (limit(1.0)?, limit(-1.0)?, f(0.0)?);
            wall_residual = wall_residual.max((lp - lm).abs()).max((lp - at).abs()).max((lm - at).abs());
        }
    }

    Ok(ErrorFunctionCheck {
        e2_origin: e2(0.0, 0.0, spec)?,
        origin_residual,
        identity_samples: samples,
        identity_residual,
        wall_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    #[test]
    fn stokes_holds_across_seeds() {
        let chart = SurfaceChart::new(fixture::canonical_config()).unwrap();
        for seed in 0..8 {
            let r = stokes(&chart, seed, 50, 1e-2).unwrap();
            assert!(r.max_residual <= 1e-7, "seed {seed}: {}", r.max_residual);
            assert!(r.min_ratio >= 12.0, "seed {seed}: {}", r.min_ratio);
        }
    }

    #[test]
    fn value_at_origin_matches_arctans() {
        let chart = SurfaceChart::new(fixture::canonical_config()).unwrap();
        assert!(arctan_identity(&chart).unwrap().residual <= 1e-8);
    }
}
