//! Theta series attached to the surface `S`: the sign series, the completed
//! series `I_μ(τ;S)`, modular checks, shadows, and the rank-one pieces the
//! shadow factors through.

mod modular;
mod rank;
mod shadow;
mod unary;

pub use modular::{nearest_eighth_root, verify_s, verify_t, verify_t_with, ModularityReport, Transform};
pub use rank::{phi_r_series, phi_r_series_bounded, SUBDIVISIONS};
pub use shadow::{lowering_fd, shadow_boundary, shadow_fd, ShadowValue, FD_STEP};
pub use unary::{
    gamma1_factorized, unary_generator, unary_theta, zwegers_closed_form, zwegers_line_integral,
    SplitCoset,
};

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::errfn::{boost_args, e2_split, erfc_line, BoostArgs, QuadratureSpec};
use crate::error::{Error, Result};
use crate::geometry::forms::omega;
use crate::geometry::{phi2, surface_spec, FrameConfig, SurfaceChart};
use crate::lattice::{
    discriminant_group, enumerate, majorant_on_s, q_exponent, to_f64, Coset, EvenLattice,
    MajorantForm, Rational, MAJORANT_GRID,
};
use crate::quadrature::integrate_1d;
use crate::quadspace::Vector;

/// A point `τ = u + iv` of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauPoint {
    pub u: f64,
    pub v: f64,
}

impl TauPoint {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(v > 0.0) || !u.is_finite() || !v.is_finite() {
            return Err(Error::OutOfRange(format!("tau = {u} + {v}i is not in the upper half-plane")));
        }
        Ok(TauPoint { u, v })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        TauPoint::new(z.re, z.im)
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }

    /// `-1/τ`.
    pub fn s_image(&self) -> Self {
        let w = -self.as_complex().inv();
        TauPoint { u: w.re, v: w.im }
    }

    /// `e^{2πiτQ}`.
    pub fn q_power(&self, q: f64) -> Complex64 {
        Complex64::from_polar((-2.0 * PI * self.v * q).exp(), 2.0 * PI * self.u * q)
    }
}

/// A truncated `q`-series `Σ c_Q q^Q` over one coset. Every exponent up to
/// `guarantee` is complete; zero coefficients are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries {
    pub coset: Coset,
    pub terms: BTreeMap<Rational, Complex64>,
    pub guarantee: f64,
}

impl QSeries {
    pub fn coefficient(&self, q: &Rational) -> Complex64 {
        self.terms.get(q).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The partial sum at `τ`.
    pub fn eval(&self, tau: TauPoint) -> Complex64 {
        self.terms.iter().map(|(q, c)| c * tau.q_power(to_f64(q))).sum()
    }
}

/// An enumerated vector of `L + μ` with its exact exponent `(x,x)/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaTerm {
    pub x: Vector,
    pub k: Vec<i64>,
    pub exponent: Rational,
    pub norm_s: f64,
}

/// A truncated series value with a bound on the omitted terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaValue {
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms: usize,
    pub qmax: f64,
}

/// One boosted error function `±E2(C_a,C_b;·)` of the closed form.
///
/// `u1 = (x,c12)`, `u2 = (x,Ĉ_b)`, `u1' = (x,w1)` and `u2' = σ (x,Ĉ_a)`. The
/// last one is read off the shared unit vector so that equal lines give
/// bit-identical arguments across the four parts.
#[derive(Clone, Debug)]
struct Part {
    sign: f64,
    alpha: f64,
    c12: Vector,
    w1: Vector,
    a: usize,
    b: usize,
    sigma: f64,
}

/// The four boosted error functions of the closed form.
///
/// The value is assembled from exact sign parts, `erfc` terms collected per
/// line `Ĉ1, Ĉ2, Ĉ1', Ĉ2'` with exact integer coefficients, and remainders
/// computed to relative accuracy. Lattice vectors with very negative norm
/// get multiplied by large `|q^{Q(x)}|`, so absolute rounding in the
/// `O(1)` parts would otherwise dominate.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    units: [Vector; 4],
    parts: [Part; 4],
}

impl ClosedForm {
    pub fn new(config: &FrameConfig) -> Result<Self> {
        let sp = config.space();
        let zero = Vector::zeros(sp.dim());
        let c = config;
        let raw = [&c.c1, &c.c2, &c.c1p, &c.c2p];
        let units = [
            sp.normalize(raw[0])?,
            sp.normalize(raw[1])?,
            sp.normalize(raw[2])?,
            sp.normalize(raw[3])?,
        ];
        let part = |sign: f64, a: usize, b: usize| -> Result<Part> {
            let alpha = boost_args(sp, raw[a], raw[b], &zero)?.alpha;
            let c12 = sp.normalize(&sp.perp_component(raw[a], raw[b])?)?;
            let s = (1.0 + alpha * alpha).sqrt();
            let w1 = units[b].axpy(-alpha, &c12).scale(1.0 / s);
            let w2 = c12.axpy(alpha, &units[b]).scale(1.0 / s);
            let sigma = -sp.inner(&w2, &units[a]).signum();
            let miss = w2.axpy(-sigma, &units[a]);
            let err = miss.coords().iter().fold(0.0_f64, |m, t| m.max(t.abs()));
            if err > 1e-8 {
                return Err(Error::InvalidInput(format!(
                    "rotated argument is not along C (off by {err:e})"
                )));
            }
            Ok(Part { sign, alpha, c12, w1, a, b, sigma })
        };
        Ok(ClosedForm {
            parts: [
                part(1.0, 0, 1)?,
                part(-1.0, 0, 3)?,
                part(-1.0, 2, 1)?,
                part(1.0, 2, 3)?,
            ],
            units,
        })
    }

    /// `I(y;S) = -¼ Σ ±E2(C,C';√2 y)`.
    pub fn eval(&self, config: &FrameConfig, y: &Vector, spec: &QuadratureSpec) -> Result<f64> {
        let sp = config.space();
        let x = y.scale(SQRT_2);
        let lines: Vec<f64> = self.units.iter().map(|u| sp.inner(&x, u)).collect();
        let mut sign = 0.0;
        let mut coef = [0.0; 4];
        let mut rest = 0.0;
        for p in &self.parts {
            let args = BoostArgs {
                alpha: p.alpha,
                u1: sp.inner(&x, &p.c12),
                u2: lines[p.b],
                u1p: sp.inner(&x, &p.w1),
                u2p: p.sigma * lines[p.a],
            };
            let e = e2_split(&args, spec)?;
            sign += p.sign * e.sign;
            coef[p.b] += p.sign * e.erfc_coef[0];
            coef[p.a] += p.sign * e.erfc_coef[1];
            rest += p.sign * e.rest;
        }
        let lines_part: f64 = coef
            .iter()
            .zip(&lines)
            .filter(|(c, _)| **c != 0.0)
            .map(|(c, u)| c * erfc_line(*u))
            .sum();
        Ok(-0.25 * (sign + lines_part + rest))
    }
}

/// `I(y;S)` through the boosted error functions.
pub fn closed_form_i(y: &Vector, config: &FrameConfig, spec: &QuadratureSpec) -> Result<f64> {
    ClosedForm::new(config)?.eval(config, y, spec)
}

/// `value · q^{exponent}` formed in log space, so that a tiny `value`
/// against a huge `|q^{exponent}|` neither overflows nor gives `0 · ∞`.
pub(crate) fn scaled_term(value: f64, tau: TauPoint, exponent: f64) -> Complex64 {
    if value == 0.0 {
        return Complex64::default();
    }
    let modulus = (value.abs().ln() - 2.0 * PI * tau.v * exponent).exp();
    Complex64::from_polar(modulus * value.signum(), 2.0 * PI * tau.u * exponent)
}

/// Bounds for truncating the completed series.
///
/// On `S`, `|φ°(√v x)| e^{-πv(x,x)} ≤ (K1 v (x,x)_z + K0) e^{-πv(x,x)_z}`,
/// where `K1` bounds `2(|η1||μ2| + |η2||μ1|)` and `K0` bounds `|Ω|/2π` for
/// the horizontal chart tangents. Lattice points are counted with the
/// covering-radius volume bound `#{(x,x)_S ≤ t} ≤ c (√t + ρ)^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailModel {
    pub k0: f64,
    pub k1: f64,
    pub density: f64,
    pub rho: f64,
    pub n: usize,
}

/// Grid maxima are inflated by this factor to cover the chart between nodes.
const TAIL_SLACK: f64 = 1.25;

impl TailModel {
    pub fn new(lattice: &EvenLattice, chart: &SurfaceChart, majorant: &MajorantForm) -> Result<Self> {
        let sp = chart.space();
        let g = MAJORANT_GRID;
        let (mut k0, mut k1) = (0.0f64, 0.0f64);
        for i in 0..g {
            for j in 0..g {
                let d = (g - 1) as f64;
                let jet = chart.jet(i as f64 / d, j as f64 / d)?;
                let tp = jet.horizontal(sp);
                let len = |v: &Vector| sp.norm2(v).max(0.0).sqrt();
                k1 = k1.max(2.0 * (len(&tp.eta.0) * len(&tp.mu.1) + len(&tp.eta.1) * len(&tp.mu.0)));
                k0 = k0.max(omega(sp, &tp).abs() / (2.0 * PI));
            }
        }
        let b = lattice.basis();
        let mlat = b.transpose() * majorant.matrix() * b;
        let n = lattice.rank();
        let det = mlat.determinant();
        if !(det > 0.0) {
            return Err(Error::InvalidInput("majorant is not positive on the lattice".into()));
        }
        let half = n as f64 / 2.0;
        let ball = PI.powf(half) / libm::tgamma(half + 1.0);
        let rho = 0.5 * (0..n).map(|i| mlat[(i, i)].sqrt()).sum::<f64>();
        Ok(TailModel {
            k0: k0 * TAIL_SLACK,
            k1: k1 * TAIL_SLACK,
            density: ball / det.sqrt(),
            rho,
            n,
        })
    }

    fn turning_point(&self, v: f64) -> f64 {
        1.0 / (PI * v) - self.k0 / (self.k1 * v)
    }

    /// Upper bound for `|I(√v x) q^{Q(x)}|` when `(x,x)_S ≥ t`.
    pub fn term_bound(&self, t: f64, v: f64) -> f64 {
        let s = t.max(self.turning_point(v));
        (self.k1 * v * s + self.k0) * (-PI * v * s).exp()
    }

    /// Upper bound for the sum of `|I(√v x) q^{Q(x)}|` over vectors of one
    /// coset with `(x,x)_S > bound`, via `∫ N(t) (-g'(t)) dt`.
    pub fn tail(&self, bound: f64, v: f64) -> f64 {
        let a = PI * v;
        let lo = bound.max(self.turning_point(v)).max(0.0);
        let hi = lo + (120.0 + 8.0 * self.n as f64) / a;
        let count = |t: f64| self.density * (t.max(0.0).sqrt() + self.rho).powi(self.n as i32);
        let r = integrate_1d(
            |t| {
                let dg = (-a * t).exp() * (a * (self.k1 * v * t + self.k0) - self.k1 * v);
                count(t) * dg.max(0.0)
            },
            lo,
            hi,
            1e-18,
            400,
        );
        r.value.abs() * (1.0 + 1e-6) + r.error_estimate
    }
}

/// Everything needed to evaluate series over one lattice and configuration.
#[derive(Clone, Debug)]
pub struct ThetaContext {
    lattice: EvenLattice,
    chart: SurfaceChart,
    majorant: MajorantForm,
    closed: ClosedForm,
    tail: TailModel,
    spec: QuadratureSpec,
}

impl ThetaContext {
    pub fn new(lattice: EvenLattice, config: FrameConfig, spec: QuadratureSpec) -> Result<Self> {
        if lattice.space() != config.space() {
            return Err(Error::InvalidInput(
                "lattice and configuration live in different spaces".into(),
            ));
        }
        let chart = SurfaceChart::new(config)?;
        let majorant = majorant_on_s(&chart)?;
        let closed = ClosedForm::new(chart.config())?;
        let tail = TailModel::new(&lattice, &chart, &majorant)?;
        Ok(ThetaContext {
            lattice,
            chart,
            majorant,
            closed,
            tail,
            spec,
        })
    }

    pub fn lattice(&self) -> &EvenLattice {
        &self.lattice
    }

    pub fn chart(&self) -> &SurfaceChart {
        &self.chart
    }

    pub fn config(&self) -> &FrameConfig {
        self.chart.config()
    }

    pub fn majorant(&self) -> &MajorantForm {
        &self.majorant
    }

    pub fn tail_model(&self) -> &TailModel {
        &self.tail
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    pub fn cosets(&self) -> Result<Vec<Coset>> {
        discriminant_group(&self.lattice)
    }

    /// Vectors of `L + μ` with `(x,x)_S ≤ bound`, in enumeration order.
    pub fn terms(&self, mu: &Coset, bound: f64) -> Result<Vec<ThetaTerm>> {
        enumerate(&self.lattice, mu, &self.majorant, bound)
            .into_iter()
            .map(|lv| {
                let exponent = q_exponent(&self.lattice, &lv.coords(mu))?;
                Ok(ThetaTerm {
                    x: lv.x,
                    k: lv.k,
                    exponent,
                    norm_s: lv.norm,
                })
            })
            .collect()
    }

    pub fn closed_form_i(&self, y: &Vector) -> Result<f64> {
        self.closed.eval(self.config(), y, &self.spec)
    }

    /// `Σ Φ2(x) q^{Q(x)}` through exponent `qmax`.
    pub fn holomorphic_part(&self, mu: &Coset, qmax: f64) -> Result<QSeries> {
        self.holomorphic_part_bounded(mu, qmax, 2.0 * qmax)
    }

    /// As [`Self::holomorphic_part`] with an explicit enumeration bound on
    /// `(x,x)_S`. Any bound of at least `2 qmax` gives the same series since
    /// `Φ2(x) ≠ 0` forces `(x,x) ≥ (x,x)_S`.
    pub fn holomorphic_part_bounded(&self, mu: &Coset, qmax: f64, bound: f64) -> Result<QSeries> {
        if bound < 2.0 * qmax {
            return Err(Error::InvalidInput(format!(
                "enumeration bound {bound} cannot guarantee exponents up to {qmax}"
            )));
        }
        let mut terms: BTreeMap<Rational, Complex64> = BTreeMap::new();
        for t in self.terms(mu, bound)? {
            if to_f64(&t.exponent) > qmax {
                continue;
            }
            let c = phi2(self.config(), &t.x);
            if c != 0.0 {
                *terms.entry(t.exponent).or_default() += c;
            }
        }
        terms.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(QSeries {
            coset: mu.clone(),
            terms,
            guarantee: qmax,
        })
    }

    /// Bound on the terms omitted at truncation `qmax`.
    pub fn tail_bound(&self, qmax: f64, v: f64) -> f64 {
        self.tail.tail(2.0 * qmax, v)
    }

    /// Smallest `qmax` (to 1e-3 relative) whose tail bound at `v` is `≤ tol`.
    pub fn qmax_for_tail(&self, v: f64, tol: f64) -> Result<f64> {
        let mut hi = 0.5;
        while self.tail_bound(hi, v) > tol {
            hi *= 1.5;
            if hi > 1e4 {
                return Err(Error::Truncation {
                    tail: self.tail_bound(hi, v),
                    tol,
                });
            }
        }
        let mut lo = hi / 1.5;
        while hi - lo > 1e-3 * hi {
            let mid = 0.5 * (lo + hi);
            if self.tail_bound(mid, v) > tol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi)
    }

    /// Sums `f(√v x) q^{Q(x)}` over `terms` in parallel, reducing in order.
    pub fn sum_terms<F>(&self, terms: &[ThetaTerm], tau: TauPoint, f: F) -> Result<Complex64>
    where
        F: Fn(&Vector) -> Result<f64> + Sync,
    {
        let sv = tau.v.sqrt();
        let vals: Vec<Complex64> = terms
            .par_iter()
            .map(|t| Ok(scaled_term(f(&t.x.scale(sv))?, tau, to_f64(&t.exponent))))
            .collect::<Result<_>>()?;
        Ok(vals.into_iter().sum())
    }

    /// `I_μ(τ;S) = Σ I(√v x;S) q^{Q(x)}` over `(x,x)_S ≤ 2 qmax`; fails if
    /// the tail bound exceeds `tol`.
    pub fn completed_theta(&self, mu: &Coset, tau: TauPoint, qmax: f64, tol: f64) -> Result<ThetaValue> {
        let tail_bound = self.tail_bound(qmax, tau.v);
        if tail_bound > tol {
            return Err(Error::Truncation { tail: tail_bound, tol });
        }
        let terms = self.terms(mu, 2.0 * qmax)?;
        let value = self.sum_terms(&terms, tau, |y| self.closed_form_i(y))?;
        Ok(ThetaValue {
            value,
            tail_bound,
            terms: terms.len(),
            qmax,
        })
    }

    /// The same series with every `I(√v x;S)` computed by integrating
    /// `φ°` over the surface.
    pub fn completed_theta_quadrature(&self, mu: &Coset, tau: TauPoint, qmax: f64) -> Result<ThetaValue> {
        let terms = self.terms(mu, 2.0 * qmax)?;
        let spec = surface_spec();
        let value = self.sum_terms(&terms, tau, |y| self.chart.surface_integral_phi(y, &spec))?;
        Ok(ThetaValue {
            value,
            tail_bound: self.tail_bound(qmax, tau.v),
            terms: terms.len(),
            qmax,
        })
    }
}

/// `Σ Φ2(x) q^{Q(x)}` over `L + μ` through exponent `qmax`.
pub fn holomorphic_part(
    lattice: &EvenLattice,
    mu: &Coset,
    config: &FrameConfig,
    qmax: f64,
) -> Result<QSeries> {
    ThetaContext::new(lattice.clone(), config.clone(), QuadratureSpec::default())?.holomorphic_part(mu, qmax)
}

/// `I_μ(τ;S)` truncated at `qmax`, failing if the tail bound exceeds `tol`.
pub fn completed_theta(
    lattice: &EvenLattice,
    mu: &Coset,
    config: &FrameConfig,
    tau: TauPoint,
    qmax: f64,
    tol: f64,
) -> Result<ThetaValue> {
    ThetaContext::new(lattice.clone(), config.clone(), QuadratureSpec::default())?
        .completed_theta(mu, tau, qmax, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::lattice::Coset;

    fn ctx() -> ThetaContext {
        ThetaContext::new(
            fixture::fixture_lattice(),
            fixture::canonical_config(),
            QuadratureSpec::default(),
        )
        .unwrap()
    }

    #[test]
    fn tau_point() {
        assert!(TauPoint::new(0.0, 0.0).is_err());
        let t = TauPoint::new(0.3, 1.1).unwrap();
        let s = t.s_image();
        let back = -(s.as_complex()).inv();
        assert!((back - t.as_complex()).norm() < 1e-15);
        let q = t.q_power(0.5);
        let want = (Complex64::new(0.0, PI) * t.as_complex()).exp();
        assert!((q - want).norm() < 1e-15);
    }

    #[test]
    fn closed_form_matches_surface_integral() {
        let c = ctx();
        let spec = surface_spec();
        for y in fixture::sample_vectors(41, 6, 1.2) {
            let a = c.closed_form_i(&y).unwrap();
            let b = c.chart().surface_integral_phi(&y, &spec).unwrap();
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn closed_form_at_origin_is_arctan_combination() {
        let c = ctx();
        let cfg = c.config();
        let sp = cfg.space();
        let at = |a: &Vector, b: &Vector| {
            (sp.inner(a, b) / sp.delta(a, b).value.sqrt()).atan()
        };
        let want = (at(&cfg.c1, &cfg.c2) - at(&cfg.c1, &cfg.c2p) - at(&cfg.c1p, &cfg.c2)
            + at(&cfg.c1p, &cfg.c2p))
            / (2.0 * PI);
        let got = c.closed_form_i(&Vector::zeros(4)).unwrap();
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }

    #[test]
    fn closed_form_tends_to_sign_product() {
        let c = ctx();
        let xs = fixture::sample_vectors(42, 4000, 3.0);
        let x = xs
            .iter()
            .find(|x| {
                phi2(c.config(), x) != 0.0
                    && c.config().pairings(x).iter().all(|t| t.abs() > 0.5)
            })
            .expect("a vector with nonzero sign product away from the walls");
        // The orientation fixed by the closed form sends I to -Φ2.
        let p = -phi2(c.config(), x);
        let mut prev = f64::INFINITY;
        for v in [10.0, 40.0, 160.0] {
            let d = (c.closed_form_i(&x.scale(f64::sqrt(v))).unwrap() - p).abs();
            assert!(d <= prev, "{d} after {prev}");
            prev = d;
        }
        assert!(prev < 1e-6);
    }

    #[test]
    fn holomorphic_part_basics() {
        let c = ctx();
        let zero = Coset::zero(4);
        let s = c.holomorphic_part(&zero, 6.0).unwrap();
        assert_eq!(s.coefficient(&Rational::from_integer(0)), Complex64::new(0.0, 0.0));
        for (q, coef) in &s.terms {
            assert!(q.is_integer());
            assert_eq!(coef.im, 0.0);
            assert!(to_f64(q) <= 6.0);
        }
        let doubled = c.holomorphic_part_bounded(&zero, 6.0, 24.0).unwrap();
        assert_eq!(s, doubled);
        assert!(c.holomorphic_part_bounded(&zero, 6.0, 6.0).is_err());
    }

    #[test]
    fn sign_terms_dominate_majorant() {
        let c = ctx();
        for mu in c.cosets().unwrap() {
            for t in c.terms(&mu, 16.0).unwrap() {
                if phi2(c.config(), &t.x) != 0.0 {
                    let norm = c.lattice().space().norm2(&t.x);
                    assert!(norm >= t.norm_s, "{norm} < {}", t.norm_s);
                }
            }
        }
    }

    #[test]
    fn tail_bound_decreases_and_dominates_terms() {
        let c = ctx();
        let v = 1.1;
        let a = c.tail_bound(2.0, v);
        let b = c.tail_bound(4.0, v);
        assert!(b < a);
        let q = c.qmax_for_tail(v, 1e-6).unwrap();
        assert!(c.tail_bound(q, v) <= 1e-6);
        let tau = TauPoint::new(0.3, v).unwrap();
        let terms = c.terms(&Coset::zero(4), 2.0 * q + 4.0).unwrap();
        for t in terms.iter().step_by(7) {
            let i = c.closed_form_i(&t.x.scale(v.sqrt())).unwrap();
            let mag = i.abs() * tau.q_power(to_f64(&t.exponent)).norm();
            assert!(mag <= c.tail_model().term_bound(t.norm_s, v) * (1.0 + 1e-9) + 1e-300);
        }
    }

    #[test]
    fn completed_theta_conjugation() {
        let c = ctx();
        let tau = TauPoint::new(0.3, 1.1).unwrap();
        let mirror = TauPoint::new(-0.3, 1.1).unwrap();
        let mu: Coset = "[1/2,0,1/2,0]".parse().unwrap();
        let a = c.completed_theta(&mu, tau, 3.0, 1.0).unwrap().value;
        let b = c.completed_theta(&mu.neg(), mirror, 3.0, 1.0).unwrap().value;
        assert!((a - b.conj()).norm() < 1e-14);
    }

    #[test]
    fn completed_theta_rejects_loose_truncation() {
        let c = ctx();
        let tau = TauPoint::new(0.3, 1.1).unwrap();
        assert!(matches!(
            c.completed_theta(&Coset::zero(4), tau, 0.5, 1e-9),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn completed_theta_approaches_sign_series_at_large_v() {
        let c = ctx();
        let mu: Coset = "[1/2,1/2,0,0]".parse().unwrap();
        let mut prev = f64::INFINITY;
        for v in [10.0, 20.0, 40.0] {
            let tau = TauPoint::new(0.2, v).unwrap();
            let full = c.completed_theta(&mu, tau, 3.0, 1.0).unwrap().value;
            let hol = c.holomorphic_part(&mu, 3.0).unwrap().eval(tau);
            let d = (full + hol).norm();
            assert!(d < prev || d < 1e-300);
            prev = d;
        }
        assert!(prev < 1e-12);
    }
}
