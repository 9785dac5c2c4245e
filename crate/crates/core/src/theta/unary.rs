//! The rank-one pieces of the shadow: unary theta series along a rational
//! `C1` and the line integrals of the signature `(n-2,1)` form that produce
//! Zwegers-type series.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::DVector;
use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;

use super::{TauPoint, ThetaContext};
use crate::errfn::{e1, QuadratureSpec};
use crate::error::{Error, Result};
use crate::geometry::hypercube::Complement;
use crate::lattice::{enumerate, to_f64, Coset, EvenLattice, MajorantForm, Rational};
use crate::quadrature::integrate_1d;
use crate::quadspace::{InnerProductSpace, Vector};

/// Largest denominator accepted when recognising `C1` as a rational direction.
const MAX_DENOMINATOR: i64 = 1_000_000;

/// Primitive generator of `L ∩ Q C1`.
pub fn unary_generator(lattice: &EvenLattice, c1: &Vector) -> Result<Vector> {
    let b = lattice.basis();
    let y = b
        .clone()
        .lu()
        .solve(&DVector::from_column_slice(&c1.0))
        .ok_or(Error::SingularGram)?;
    let big = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if big == 0.0 {
        return Err(Error::InvalidInput("C1 is zero".into()));
    }
    let mut rats = Vec::with_capacity(y.len());
    for v in y.iter() {
        let f = v / big;
        let r = Ratio::<i64>::approximate_float(f)
            .filter(|r| *r.denom() <= MAX_DENOMINATOR && (to_f64(r) - f).abs() < 1e-9)
            .ok_or_else(|| Error::InvalidInput("C1 is not a rational direction of the lattice".into()))?;
        rats.push(r);
    }
    let den = rats.iter().fold(1i64, |l, r| lcm(l, *r.denom()));
    let ints: Vec<i64> = rats.iter().map(|r| (r * den).to_integer()).collect();
    let g = ints.iter().fold(0i64, |g, &v| gcd(g, v.abs()));
    let k: Vec<f64> = ints.iter().map(|&v| (v / g) as f64).collect();
    let gen = lattice.embed(&k);
    if !(lattice.space().norm2(&gen) < 0.0) {
        return Err(Error::InvalidInput("L ∩ Q C1 is not negative definite".into()));
    }
    Ok(gen)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// `θ_{0,λ0}(τ) = Σ_{x0 ∈ λ0 g + Z g} (x0, C̲1) q^{-(x0,x0)/2}`, summed until
/// the Gaussian factor drops below `1e-18`.
pub fn unary_theta(
    space: &InnerProductSpace,
    generator: &Vector,
    lambda0: Rational,
    c1: &Vector,
    tau: TauPoint,
) -> Result<Complex64> {
    let a = -0.5 * space.norm2(generator);
    if !(a > 0.0) {
        return Err(Error::DegenerateForm { eigenvalue: 2.0 * a });
    }
    let pair = space.inner(generator, &space.normalize(c1)?);
    let l0 = to_f64(&lambda0);
    let reach = (42.0 / (2.0 * PI * tau.v * a)).sqrt().ceil() as i64 + 2;
    let mut acc = Complex64::default();
    for k in -reach..=reach {
        let m = l0 + k as f64;
        acc += m * pair * tau.q_power(a * m * m);
    }
    Ok(acc)
}

/// Unit-speed frame data along `ν(t) = normalize((1-t)C + tC')`.
fn geodesic(space: &InnerProductSpace, c: &Vector, cp: &Vector, t: f64) -> (Vector, Vector) {
    let bt = Vector::lincomb(1.0 - t, c, t, cp);
    let db = cp - c;
    let l2 = -space.norm2(&bt);
    let l = l2.sqrt();
    let dl = -space.inner(&bt, &db) / l;
    (bt.scale(1.0 / l), db.scale(1.0 / l).axpy(-dl / l2, &bt))
}

fn check_pair(space: &InnerProductSpace, c: &Vector, cp: &Vector) -> Result<()> {
    if !(space.norm2(c) < 0.0 && space.norm2(cp) < 0.0) {
        return Err(Error::InvalidInput("geodesic endpoints must be negative vectors".into()));
    }
    if !(space.inner(c, cp) < 0.0) {
        return Err(Error::ComponentMismatch);
    }
    Ok(())
}

/// `∫_{γ(C,C')} v^{1/2} (x1,η) q^{(x1,x1)/2} e^{-2πv(x1,ν)²}` in a space of
/// signature `(n-2,1)`, by adaptive quadrature.
pub fn zwegers_line_integral(
    x1: &Vector,
    c: &Vector,
    cp: &Vector,
    v1: &InnerProductSpace,
    tau: TauPoint,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    check_pair(v1, c, cp)?;
    let v = tau.v;
    let r = integrate_1d(
        |t| {
            let (nu, eta) = geodesic(v1, c, cp, t);
            let w = v1.inner(x1, &nu);
            v1.inner(x1, &eta) * (-2.0 * PI * v * w * w).exp()
        },
        0.0,
        1.0,
        spec.abs_tol,
        spec.max_subdivisions,
    )
    .into_result()?;
    Ok(v.sqrt() * r * tau.q_power(0.5 * v1.norm2(x1)))
}

/// The same integral in closed form:
/// `q^{(x1,x1)/2} (E(√(2v)(x1,C̲')) - E(√(2v)(x1,C̲))) / (2√2)`.
pub fn zwegers_closed_form(
    x1: &Vector,
    c: &Vector,
    cp: &Vector,
    v1: &InnerProductSpace,
    tau: TauPoint,
) -> Result<Complex64> {
    check_pair(v1, c, cp)?;
    let s = (2.0 * tau.v).sqrt();
    let w0 = v1.inner(x1, &v1.normalize(c)?);
    let w1 = v1.inner(x1, &v1.normalize(cp)?);
    Ok(tau.q_power(0.5 * v1.norm2(x1)) * ((e1(s * w1) - e1(s * w0)) / (2.0 * SQRT_2)))
}

/// A coset `μ + L` written as `(λ0 + L0) + (λ1 + L1)` for a lattice whose
/// basis has one column along `C1` and the rest orthogonal to it.
#[derive(Clone, Debug)]
pub struct SplitCoset {
    pub generator: Vector,
    pub lambda0: Rational,
    pub v1: InnerProductSpace,
    pub lattice1: EvenLattice,
    pub lambda1: Coset,
    pub majorant1: MajorantForm,
    pub c: Vector,
    pub cp: Vector,
}

impl SplitCoset {
    pub fn new(ctx: &ThetaContext, mu: &Coset) -> Result<Self> {
        let lattice = ctx.lattice();
        let cfg = ctx.config();
        let sp = cfg.space();
        let b = lattice.basis();
        let n = lattice.rank();
        let c1n = sp.normalize(&cfg.c1)?;
        let cols: Vec<Vector> = (0..n).map(|j| Vector::new(b.column(j).iter().copied().collect())).collect();
        let along: Vec<usize> = (0..n)
            .filter(|&j| {
                let r = sp.perp_component(&cols[j], &c1n).map(|p| p.coord_norm()).unwrap_or(1.0);
                r < 1e-10 * cols[j].coord_norm()
            })
            .collect();
        let split = along.len() == 1
            && (0..n)
                .filter(|j| *j != along[0])
                .all(|j| sp.inner(&cols[j], &c1n).abs() < 1e-10 * cols[j].coord_norm());
        if !split {
            return Err(Error::InvalidInput(
                "lattice basis does not split along C1 and its complement".into(),
            ));
        }
        let j0 = along[0];
        let comp = Complement::new(sp, &cfg.c1)?;
        let v1 = comp.space.clone();
        let rest: Vec<usize> = (0..n).filter(|&j| j != j0).collect();
        let basis1 = nalgebra::DMatrix::from_fn(n - 1, n - 1, |i, k| comp.coords(&cols[rest[k]]).0[i]);
        let lattice1 = EvenLattice::new(v1.clone(), basis1)?;
        let lambda1 = Coset::new(rest.iter().map(|&j| mu.mu[j]).collect());
        let m1 = comp.basis.transpose() * ctx.majorant().matrix() * &comp.basis;
        let majorant1 = MajorantForm::new((&m1 + m1.transpose()) * 0.5)?;
        let c = comp.coords(&sp.perp_component(&cfg.c2, &cfg.c1)?);
        let cp = comp.coords(&sp.perp_component(&cfg.c2p, &cfg.c1)?);
        Ok(SplitCoset {
            generator: cols[j0].clone(),
            lambda0: mu.mu[j0],
            v1,
            lattice1,
            lambda1,
            majorant1,
            c,
            cp,
        })
    }
}

/// The `γ1` part of `L I_μ` assembled as
/// `v^{3/2} conj(θ_{0,λ0}(τ)) Σ_{x1 ∈ λ1 + L1} ∫_{γ(C_{2⊥1}, C_{2'⊥1})} φ^{(n-2,1)}(τ, x1)`,
/// with `x1` truncated at `(x1,x1)_S ≤ 2 qmax`.
pub fn gamma1_factorized(ctx: &ThetaContext, mu: &Coset, tau: TauPoint, qmax: f64) -> Result<Complex64> {
    let split = SplitCoset::new(ctx, mu)?;
    let cfg = ctx.config();
    let unary = unary_theta(cfg.space(), &split.generator, split.lambda0, &cfg.c1, tau)?;
    let xs = enumerate(&split.lattice1, &split.lambda1, &split.majorant1, 2.0 * qmax);
    let spec = ctx.spec();
    let vals: Vec<Complex64> = xs
        .par_iter()
        .map(|lv| zwegers_line_integral(&lv.x, &split.c, &split.cp, &split.v1, tau, spec))
        .collect::<Result<_>>()?;
    let zw: Complex64 = vals.into_iter().sum();
    Ok(tau.v.powf(1.5) * unary.conj() * zw)
}
