//! Configurations `{C1, C2, C1', C2'}`, their validation, and the sign
//! functions `Φ2`, `Φ_r` with the matching intersection data.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::frame::{orthonormal_frame, same_component};
use crate::quadspace::{sgn, InnerProductSpace, Vector};

/// Relative threshold for `(x, C) = 0` in the regularity test.
pub const REGULARITY_TOL: f64 = 1e-9;

/// Every quantity checked by [`validate_incidence`].
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceReport {
    /// Whether `C1, C2, C1', C2'` are negative vectors.
    pub negative: [bool; 4],
    /// `Δ12, Δ1'2, Δ12', Δ1'2'`.
    pub deltas: [f64; 4],
    /// `(C2⊥1, C2'⊥1), (C2⊥1', C2'⊥1'), (C1⊥2, C1'⊥2), (C1⊥2', C1'⊥2')`.
    pub projections: [f64; 4],
    /// Gram determinant of all four vectors.
    pub delta4: f64,
    pub same_component: bool,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl fmt::Display for IncidenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass {
            write!(f, "configuration passes all incidence checks")
        } else {
            write!(f, "{}", self.failures.join("; "))
        }
    }
}

const NAMES: [&str; 4] = ["C1", "C2", "C1'", "C2'"];

/// Checks the four corner deltas, the four projected pairings, the full Gram
/// determinant, and that the corner planes share a component.
pub fn validate_incidence(
    space: &InnerProductSpace,
    c1: &Vector,
    c2: &Vector,
    c1p: &Vector,
    c2p: &Vector,
) -> Result<IncidenceReport> {
    let cs = [c1, c2, c1p, c2p];
    for c in cs {
        if c.dim() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: c.dim(),
            });
        }
    }
    let (_, neg) = space.signature()?;
    if neg != 2 {
        return Err(Error::Signature {
            pos: space.dim() - neg,
            neg,
            want_pos: space.dim().saturating_sub(2),
            want_neg: 2,
        });
    }
    let mut failures = Vec::new();
    let negative = cs.map(|c| space.norm2(c) < 0.0);
    for (i, ok) in negative.iter().enumerate() {
        if !ok {
            failures.push(format!("{} is not a negative vector", NAMES[i]));
        }
    }
    let delta4 = space.delta_gram(&cs);
    if !(delta4 > 0.0) {
        failures.push(format!("Δ11'22' = {delta4:e} is not positive"));
    }
    if negative.iter().any(|&n| !n) {
        return Ok(IncidenceReport {
            negative,
            deltas: [f64::NAN; 4],
            projections: [f64::NAN; 4],
            delta4,
            same_component: false,
            pass: false,
            failures,
        });
    }

    let pairs = [(c1, c2, "Δ12"), (c1p, c2, "Δ1'2"), (c1, c2p, "Δ12'"), (c1p, c2p, "Δ1'2'")];
    let deltas = pairs.map(|(a, b, _)| space.delta(a, b).value);
    for ((_, _, name), d) in pairs.iter().zip(deltas) {
        if !(d > 0.0) {
            failures.push(format!("{name} = {d:e} is not positive"));
        }
    }

    let proj = |a: &Vector, b: &Vector, base: &Vector| -> f64 {
        let pa = space.perp_component(a, base).expect("base is negative");
        let pb = space.perp_component(b, base).expect("base is negative");
        space.inner(&pa, &pb)
    };
    let projections = [
        proj(c2, c2p, c1),
        proj(c2, c2p, c1p),
        proj(c1, c1p, c2),
        proj(c1, c1p, c2p),
    ];
    let pnames = ["(C2⊥1,C2'⊥1)", "(C2⊥1',C2'⊥1')", "(C1⊥2,C1'⊥2)", "(C1⊥2',C1'⊥2')"];
    for (name, p) in pnames.iter().zip(projections) {
        if !(p < 0.0) {
            failures.push(format!("{name} = {p:e} is not negative"));
        }
    }

    let frames: Result<Vec<_>> = pairs
        .iter()
        .map(|(a, b, _)| orthonormal_frame(space, a, b))
        .collect();
    let same = match frames {
        Ok(fs) => fs
            .iter()
            .skip(1)
            .all(|f| same_component(space, &fs[0], f).unwrap_or(false)),
        Err(_) => false,
    };
    if !same {
        failures.push("corner planes do not lie on one component".into());
    }

    Ok(IncidenceReport {
        negative,
        deltas,
        projections,
        delta4,
        same_component: same,
        pass: failures.is_empty(),
        failures,
    })
}

/// A validated configuration together with the space it lives in.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameConfig {
    space: InnerProductSpace,
    pub c1: Vector,
    pub c2: Vector,
    pub c1p: Vector,
    pub c2p: Vector,
    pub validation: IncidenceReport,
}

impl FrameConfig {
    /// Validates and wraps the four vectors; fails with an incidence error
    /// listing every violated condition.
    pub fn new(
        space: InnerProductSpace,
        c1: Vector,
        c2: Vector,
        c1p: Vector,
        c2p: Vector,
    ) -> Result<Self> {
        let validation = validate_incidence(&space, &c1, &c2, &c1p, &c2p)?;
        if !validation.pass {
            return Err(Error::Incidence(validation.to_string()));
        }
        Ok(FrameConfig {
            space,
            c1,
            c2,
            c1p,
            c2p,
            validation,
        })
    }

    /// Wraps vectors without requiring the incidence conditions. Used for
    /// degenerate charts in tests and diagnostics.
    pub fn unchecked(space: InnerProductSpace, c1: Vector, c2: Vector, c1p: Vector, c2p: Vector) -> Self {
        let validation = validate_incidence(&space, &c1, &c2, &c1p, &c2p).unwrap_or(IncidenceReport {
            negative: [false; 4],
            deltas: [f64::NAN; 4],
            projections: [f64::NAN; 4],
            delta4: f64::NAN,
            same_component: false,
            pass: false,
            failures: vec!["not validated".into()],
        });
        FrameConfig {
            space,
            c1,
            c2,
            c1p,
            c2p,
            validation,
        }
    }

    pub fn space(&self) -> &InnerProductSpace {
        &self.space
    }

    /// `[C1, C2, C1', C2']`.
    pub fn vectors(&self) -> [&Vector; 4] {
        [&self.c1, &self.c2, &self.c1p, &self.c2p]
    }

    /// `(x,C1), (x,C2), (x,C1'), (x,C2')`.
    pub fn pairings(&self, x: &Vector) -> [f64; 4] {
        self.vectors().map(|c| self.space.inner(x, c))
    }

    /// `min |(x,C_i)| > tol ‖x‖ max ‖C_i‖` in coordinate norms.
    pub fn is_regular(&self, x: &Vector) -> bool {
        let cmax = self.vectors().iter().map(|c| c.coord_norm()).fold(0.0, f64::max);
        let thresh = REGULARITY_TOL * x.coord_norm() * cmax;
        self.pairings(x).iter().all(|p| p.abs() > thresh)
    }
}

/// `Φ2(x) = ¼[sgn(x,C1) - sgn(x,C1')][sgn(x,C2) - sgn(x,C2')]`.
pub fn phi2(config: &FrameConfig, x: &Vector) -> f64 {
    let [a, b, ap, bp] = config.pairings(x).map(sgn);
    0.25 * (a - ap) * (b - bp)
}

/// `Φ_r(x) = 2^{-r} Π_j [sgn(x,C_j) - sgn(x,C_j')]`.
pub fn phi_r(space: &InnerProductSpace, x: &Vector, pairs: &[(Vector, Vector)]) -> f64 {
    pairs.iter().fold(1.0, |acc, (c, cp)| {
        acc * 0.5 * (sgn(space.inner(x, c)) - sgn(space.inner(x, cp)))
    })
}

/// Zero of `s ↦ (x, (1-s)C + sC')` if it lies in `[0,1]`.
pub fn null_parameter(xc: f64, xcp: f64) -> Option<f64> {
    let den = xc - xcp;
    if den == 0.0 {
        return None;
    }
    let s = xc / den;
    (0.0..=1.0).contains(&s).then_some(s)
}

/// The point `(s0, t0)` of the chart where `R(x, z) = 0`, if any.
pub fn intersection_point(config: &FrameConfig, x: &Vector) -> Option<(f64, f64)> {
    let [a, b, ap, bp] = config.pairings(x);
    Some((null_parameter(a, ap)?, null_parameter(b, bp)?))
}

/// `sgn((x,C1') - (x,C1)) sgn((x,C2') - (x,C2))` for regular `x` with
/// `Φ2(x) ≠ 0`.
pub fn intersection_number(config: &FrameConfig, x: &Vector) -> Result<f64> {
    if !config.is_regular(x) || phi2(config, x) == 0.0 {
        return Err(Error::Regularity);
    }
    let [a, b, ap, bp] = config.pairings(x);
    Ok(sgn(ap - a) * sgn(bp - b))
}
