//! Generalized error functions `E1`, `M1`, `e2`, `ẽ2` and `E2`.

use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{Error, Result};
use crate::quadrature::integrate_1d;
use crate::quadspace::{sgn, InnerProductSpace, Vector};

/// Beyond this point `exp(-πv²)` is below `1e-57` and the integrand of `ẽ2`
/// reduces to its rational part.
const GAUSS_CUTOFF: f64 = 6.5;

/// `exp(-x)` underflows past this.
const UNDERFLOW: f64 = 745.0;

/// `ẽ2` integrates `e^{-πv²}/(b²+v²)` directly once `|b|` reaches this.
const DIRECT_B: f64 = 0.5;

/// `ẽ2(a,b)` is split into an `erfc` part and a tail once `|a|` reaches this.
pub const SPLIT_A: f64 = 1.0;

/// Offset used to approach a sign wall of `E2`.
pub const WALL_OFFSET: f64 = 1e-6;

/// Tolerance and budget for the one-dimensional integrals behind `ẽ2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-12,
            max_subdivisions: 200,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || max_subdivisions == 0 {
            return Err(Error::InvalidInput(format!(
                "quadrature spec needs abs_tol > 0 and max_subdivisions >= 1, got {abs_tol}, {max_subdivisions}"
            )));
        }
        Ok(QuadratureSpec {
            abs_tol,
            max_subdivisions,
        })
    }
}

/// Flat arguments of `E2` and their rotated partners.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoostArgs {
    pub alpha: f64,
    pub u1: f64,
    pub u2: f64,
    pub u1p: f64,
    pub u2p: f64,
}

impl BoostArgs {
    pub fn new(alpha: f64, u1: f64, u2: f64) -> Self {
        let s = (1.0 + alpha * alpha).sqrt();
        BoostArgs {
            alpha,
            u1,
            u2,
            u1p: (u2 - alpha * u1) / s,
            u2p: (u1 + alpha * u2) / s,
        }
    }
}

/// `E1(u) = sgn(u) erf(|u|√π)`.
pub fn e1(u: f64) -> f64 {
    libm::erf(u * PI.sqrt())
}

/// `M1(u) = -sgn(u) erfc(|u|√π)`.
pub fn m1(u: f64) -> f64 {
    -sgn(u) * libm::erfc(u.abs() * PI.sqrt())
}

/// `ẽ2(a,b) = (2/π) b e^{-πb²} ∫_0^a e^{-πv²} / (b²+v²) dv`, with `ẽ2(a,0) = 0`.
///
/// For small `|b|` the singular part `∫ dv/(b²+v²)` is integrated in closed
/// form so that the quadrature only sees a bounded integrand. Otherwise the
/// integral is taken directly to a tolerance relative to its size.
pub fn tilde_e2(a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if b == 0.0 || a == 0.0 {
        return Ok(0.0);
    }
    if a.is_nan() || !b.is_finite() {
        return Err(Error::InvalidInput(format!("tilde_e2({a}, {b})")));
    }
    let ac = a.signum() * a.abs().min(GAUSS_CUTOFF);
    let b2 = b * b;
    if PI * b2 > UNDERFLOW {
        return Ok(0.0);
    }
    let pref = FRAC_2_PI * (-PI * b2).exp();
    if b.abs() >= DIRECT_B {
        let tol = spec.abs_tol * ac.abs().min(1.0) / (1.0 + b2);
        let res = integrate_1d(
            |v| (-PI * v * v).exp() / (b2 + v * v),
            0.0,
            ac,
            tol,
            spec.max_subdivisions,
        );
        let value = pref * b * res.value;
        return if res.converged {
            Ok(value)
        } else {
            Err(Error::Accuracy {
                estimate: value,
                error_bound: pref * b.abs() * res.error_estimate,
            })
        };
    }
    let res = integrate_1d(
        |v| {
            let v2 = v * v;
            -(-PI * v2).exp_m1() / (b2 + v2)
        },
        0.0,
        ac,
        spec.abs_tol,
        spec.max_subdivisions,
    );
    let value = pref * ((ac / b).atan() - b * res.value);
    if res.converged {
        Ok(value)
    } else {
        Err(Error::Accuracy {
            estimate: value,
            error_bound: pref * b.abs() * res.error_estimate,
        })
    }
}

/// `T(a,b) = (2/π) b e^{-πb²} ∫_{|a|}^∞ e^{-πv²} / (b²+v²) dv`, so that
/// `ẽ2(a,b) = sgn(a) (sgn(b) erfc(√π|b|) - T(a,b))`.
pub fn tilde_e2_tail(a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    let a = a.abs();
    if b == 0.0 {
        return Ok(0.0);
    }
    if a.is_nan() || !b.is_finite() {
        return Err(Error::InvalidInput(format!("tilde_e2_tail({a}, {b})")));
    }
    let b2 = b * b;
    let expo = PI * (a * a + b2);
    if expo > UNDERFLOW {
        return Ok(0.0);
    }
    // v = a + w; the remaining factor e^{-π(2aw + w²)} is below e^{-45} at the cut.
    let reach = 0.5 * (-2.0 * a + (4.0 * a * a + 4.0 * 45.0 / PI).sqrt());
    let scale = 1.0 / ((b2 + a * a).max(1e-300) * (2.0 * PI * a + PI.sqrt()));
    let res = integrate_1d(
        |w| (-PI * (2.0 * a * w + w * w)).exp() / (b2 + (a + w) * (a + w)),
        0.0,
        reach,
        spec.abs_tol * scale,
        spec.max_subdivisions,
    );
    let pref = FRAC_2_PI * b * (-expo).exp();
    let value = pref * res.value;
    if res.converged {
        Ok(value)
    } else {
        Err(Error::Accuracy {
            estimate: value,
            error_bound: pref.abs() * res.error_estimate,
        })
    }
}

/// `e2(u1,u2) = (2/π) arctan(u1/u2) - ẽ2(u1,u2)`, and `0` on `u2 = 0`.
pub fn e2(u1: f64, u2: f64, spec: &QuadratureSpec) -> Result<f64> {
    if u2 == 0.0 {
        return Ok(0.0);
    }
    Ok(FRAC_2_PI * (u1 / u2).atan() - tilde_e2(u1, u2, spec)?)
}

fn e2_flat_raw(args: &BoostArgs, spec: &QuadratureSpec) -> Result<f64> {
    Ok(-tilde_e2(args.u1, args.u2, spec)? - tilde_e2(args.u1p, args.u2p, spec)?
        + sgn(args.u2) * sgn(args.u2p))
}

/// `E2(α;u1,u2) = -ẽ2(u1,u2) - ẽ2(u1',u2') + sgn(u2) sgn(u2')`.
///
/// On a wall `u2 = 0` or `u2' = 0` the two one-sided limits are averaged,
/// using symmetric offsets and one Richardson step.
pub fn e2_flat(alpha: f64, u1: f64, u2: f64, spec: &QuadratureSpec) -> Result<f64> {
    let args = BoostArgs::new(alpha, u1, u2);
    let dir = if args.u2 == 0.0 {
        (0.0, 1.0)
    } else if args.u2p == 0.0 {
        let s = (1.0 + alpha * alpha).sqrt();
        (1.0 / s, alpha / s)
    } else {
        return e2_flat_raw(&args, spec);
    };
    let avg = |h: f64| -> Result<f64> {
        let plus = BoostArgs::new(alpha, u1 + h * dir.0, u2 + h * dir.1);
        let minus = BoostArgs::new(alpha, u1 - h * dir.0, u2 - h * dir.1);
        Ok(0.5 * (e2_flat_raw(&plus, spec)? + e2_flat_raw(&minus, spec)?))
    };
    let coarse = avg(WALL_OFFSET)?;
    let fine = avg(0.5 * WALL_OFFSET)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `E2 = sign + c · erfc(√π|u2|) + c' · erfc(√π|u2'|) + rest`, where `sign`
/// and the coefficients are exact small integers and `rest` is computed to
/// relative accuracy. Summing several such values coefficientwise avoids the
/// cancellation between their `O(1)` parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct E2Split {
    pub sign: f64,
    pub erfc_coef: [f64; 2],
    pub rest: f64,
}

impl E2Split {
    /// Recombines the parts given `erfc(√π|u2|)` and `erfc(√π|u2'|)`.
    pub fn value(&self, erfcs: [f64; 2]) -> f64 {
        self.sign + self.erfc_coef[0] * erfcs[0] + self.erfc_coef[1] * erfcs[1] + self.rest
    }
}

/// Splits `E2(α;u1,u2)` with the rotated pair `(u1',u2')` supplied by the
/// caller. At the origin the averaged value of [`e2_flat`] goes to `rest`.
pub fn e2_split(args: &BoostArgs, spec: &QuadratureSpec) -> Result<E2Split> {
    if args.u1 == 0.0 && args.u2 == 0.0 {
        return Ok(E2Split {
            sign: 0.0,
            erfc_coef: [0.0, 0.0],
            rest: e2_flat(args.alpha, 0.0, 0.0, spec)?,
        });
    }
    let mut out = E2Split {
        sign: sgn(args.u2) * sgn(args.u2p),
        erfc_coef: [0.0, 0.0],
        rest: 0.0,
    };
    for (slot, (a, b)) in [(args.u1, args.u2), (args.u1p, args.u2p)].into_iter().enumerate() {
        if a.abs() >= SPLIT_A {
            out.erfc_coef[slot] = -sgn(a) * sgn(b);
            out.rest += sgn(a) * tilde_e2_tail(a, b, spec)?;
        } else {
            out.rest -= tilde_e2(a, b, spec)?;
        }
    }
    Ok(out)
}

/// `erfc(√π|u|)`.
pub fn erfc_line(u: f64) -> f64 {
    libm::erfc(u.abs() * PI.sqrt())
}

/// Flat arguments of the boosted `E2(C1,C2;x)`.
///
/// `α = -(C1,C2)/√Δ(C1,C2)`, `u1 = (x, C_{1⊥2})`, `u2 = (x, C2)` with both
/// vectors normalized to unit length.
pub fn boost_args(
    space: &InnerProductSpace,
    c1: &Vector,
    c2: &Vector,
    x: &Vector,
) -> Result<BoostArgs> {
    for c in [c1, c2, x] {
        if c.dim() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: c.dim(),
            });
        }
    }
    if space.norm2(c1) == 0.0 || space.norm2(c2) == 0.0 {
        return Err(Error::InvalidInput("null vector passed to E2".into()));
    }
    let delta = space.delta(c1, c2);
    if !delta.positive {
        return Err(Error::Incidence(format!(
            "Δ(C1,C2) = {:e} is not positive",
            delta.value
        )));
    }
    let alpha = -space.inner(c1, c2) / delta.value.sqrt();
    let c12 = space.normalize(&space.perp_component(c1, c2)?)?;
    let c2n = space.normalize(c2)?;
    Ok(BoostArgs::new(
        alpha,
        space.inner(x, &c12),
        space.inner(x, &c2n),
    ))
}

/// The boosted error function `E2(C1,C2;x)`.
pub fn e2_boosted(
    space: &InnerProductSpace,
    c1: &Vector,
    c2: &Vector,
    x: &Vector,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let a = boost_args(space, c1, c2, x)?;
    e2_flat(a.alpha, a.u1, a.u2, spec)
}
