//! Subcommand bodies. Each returns the `outputs`, optional `residuals` and
//! pass flag of a report; errors are mapped to exit codes by the caller.

use std::f64::consts::PI;

use serde_json::{json, Map, Value};

use kmtheta::checks;
use kmtheta::errfn;
use kmtheta::fixture;
use kmtheta::geometry::{phi2, validate_incidence, SurfaceChart};
use kmtheta::lattice::rational_string;
use kmtheta::theta::{verify_s, verify_t};
use kmtheta::{Complex64, Error, QSeries, QuadratureSpec, Result, Vector};

use crate::config::RunConfig;

/// Number of sample vectors for the surface-integral identity.
const SURFACE_SAMPLES: usize = 120;
/// Chart squares for the Stokes check, and the side of the larger square.
const STOKES_SQUARES: usize = 50;
const STOKES_SIDE: f64 = 1e-2;
/// Least acceptable residual ratio when the square side halves.
const STOKES_RATIO: f64 = 12.0;
const INTERSECTION_SAMPLES: usize = 10_000;
/// `R(x, z)` at the crossing point is a sum of squares of rounded pairings.
const INTERSECTION_R_TOL: f64 = 1e-18;
/// Bound on libm's `erf`/`erfc` error for the one-variable functions.
const LIBM_BOUND: f64 = 4.0 * f64::EPSILON;

pub struct Outcome {
    pub outputs: Value,
    pub residuals: Option<Value>,
    pub pass: bool,
}

fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn series_json(s: &QSeries) -> Value {
    let terms: Vec<Value> = s
        .terms
        .iter()
        .map(|(q, c)| json!({ "exponent": rational_string(q), "coefficient": complex(*c) }))
        .collect();
    json!({ "coset": s.coset.to_string(), "terms": terms })
}

pub fn validate(cfg: &RunConfig) -> Result<Outcome> {
    let [c1, c2, c1p, c2p] = cfg.vectors();
    let r = validate_incidence(&cfg.space()?, &c1, &c2, &c1p, &c2p)?;
    Ok(Outcome {
        outputs: json!({
            "negative": r.negative,
            "deltas": r.deltas,
            "projections": r.projections,
            "delta4": r.delta4,
            "same_component": r.same_component,
            "failures": r.failures,
        }),
        residuals: None,
        pass: r.pass,
    })
}

pub fn theta_hol(cfg: &RunConfig) -> Result<Outcome> {
    let ctx = cfg.context()?;
    let tau = cfg.tau()?;
    let series = cfg
        .cosets(&ctx)?
        .iter()
        .map(|mu| {
            let s = ctx.holomorphic_part(mu, cfg.qmax)?;
            let mut v = series_json(&s);
            v["value"] = complex(s.eval(tau));
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        outputs: json!({ "qmax": cfg.qmax, "series": series }),
        residuals: None,
        pass: true,
    })
}

pub fn theta_complete(cfg: &RunConfig) -> Result<Outcome> {
    let ctx = cfg.context()?;
    let tau = cfg.tau()?;
    let values = cfg
        .cosets(&ctx)?
        .iter()
        .map(|mu| {
            let t = ctx.completed_theta(mu, tau, cfg.qmax, cfg.tol.series)?;
            Ok(json!({
                "coset": mu.to_string(),
                "value": complex(t.value),
                "tail_bound": t.tail_bound,
                "terms": t.terms,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        outputs: json!({ "qmax": cfg.qmax, "values": values }),
        residuals: None,
        pass: true,
    })
}

pub fn verify_surface_identity(cfg: &RunConfig) -> Result<Outcome> {
    let chart = SurfaceChart::new(cfg.frame_config()?)?;
    let n = chart.space().dim();
    let xs = fixture::sample_vectors_dim(cfg.seed, n, SURFACE_SAMPLES, 3.0);
    let r = checks::surface_identity(&chart, &xs, &cfg.spec())?;
    let origin = checks::arctan_identity(&chart)?;
    let tol = cfg.tol.quadrature;
    Ok(Outcome {
        outputs: json!({
            "checked": r.checked,
            "skipped_irregular": r.skipped_irregular,
            "worst": r.worst.map(|w| w.0),
            "origin": { "surface": origin.surface, "arctan": origin.arctan },
        }),
        residuals: Some(json!({ "surface_integral": r.max_residual, "origin": origin.residual })),
        pass: r.checked > 0 && r.max_residual <= tol && origin.residual <= tol,
    })
}

pub fn verify_stokes(cfg: &RunConfig) -> Result<Outcome> {
    let chart = SurfaceChart::new(cfg.frame_config()?)?;
    let r = checks::stokes(&chart, cfg.seed, STOKES_SQUARES, STOKES_SIDE)?;
    Ok(Outcome {
        outputs: json!({ "squares": r.squares, "side": r.side, "min_ratio": r.min_ratio }),
        residuals: Some(json!({ "loop_minus_area": r.max_residual })),
        pass: r.max_residual <= cfg.tol.quadrature && r.min_ratio >= STOKES_RATIO,
    })
}

pub fn verify_intersection(cfg: &RunConfig) -> Result<Outcome> {
    let config = cfg.frame_config()?;
    let n = config.space().dim();
    let chart = SurfaceChart::new(config.clone())?;
    let mut xs = Vec::new();
    let mut seed = cfg.seed;
    while xs.len() < INTERSECTION_SAMPLES {
        xs.extend(
            fixture::sample_vectors_dim(seed, n, INTERSECTION_SAMPLES, 3.0)
                .into_iter()
                .filter(|x| config.is_regular(x) && phi2(&config, x) != 0.0),
        );
        seed = seed.wrapping_add(1);
    }
    xs.truncate(INTERSECTION_SAMPLES);
    let r = checks::intersection(&chart, &xs)?;
    Ok(Outcome {
        outputs: json!({
            "tested": r.tested,
            "mismatches": r.mismatches,
            "missing_points": r.missing_points,
        }),
        residuals: Some(json!({ "crossing_r": r.max_residual })),
        pass: r.mismatches == 0 && r.missing_points == 0 && r.max_residual <= INTERSECTION_R_TOL,
    })
}

pub fn verify_modularity(cfg: &RunConfig) -> Result<Outcome> {
    let ctx = cfg.context()?;
    let tau = cfg.tau()?;
    let tol = cfg.tol.series;
    let tail = tol / 10.0;
    let t = verify_t(&ctx, tau, tail)?;
    let s = verify_s(&ctx, tau, tail)?;
    let phase = s.measured_phase.map(complex).unwrap_or(Value::Null);
    let ratios: Map<String, Value> = s
        .per_coset
        .iter()
        .map(|(mu, r)| (mu.to_string(), complex(*r)))
        .collect();
    let inconclusive: Vec<String> = s.inconclusive.iter().map(|m| m.to_string()).collect();
    Ok(Outcome {
        outputs: json!({
            "t": { "qmax": t.qmax, "tail_bound": t.tail_bound },
            "s": {
                "qmax": s.qmax,
                "tail_bound": s.tail_bound,
                "measured_phase": phase,
                "candidate_phase": s.candidate_phase.map(complex),
                "ratios": ratios,
                "inconclusive": inconclusive,
            },
        }),
        residuals: Some(json!({
            "t": t.residual,
            "s_spread": s.residual,
            "s_unitarity": s.unitarity_defect(),
        })),
        pass: t.residual <= tol
            && !s.per_coset.is_empty()
            && s.residual <= tol
            && s.unitarity_defect() <= tol,
    })
}

pub fn verify_shadow(cfg: &RunConfig) -> Result<Outcome> {
    let ctx = cfg.context()?;
    let tau = cfg.tau()?;
    let mut worst: f64 = 0.0;
    let per_coset = cfg
        .cosets(&ctx)?
        .iter()
        .map(|mu| {
            let r = checks::shadow(&ctx, mu, tau, cfg.qmax)?;
            worst = worst.max(r.residual);
            Ok(json!({
                "coset": mu.to_string(),
                "derivative": complex(r.derivative),
                "boundary": complex(r.boundary),
                "terms": r.terms,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        outputs: json!({ "qmax": cfg.qmax, "cosets": per_coset }),
        residuals: Some(json!({ "derivative_minus_boundary": worst })),
        pass: worst <= cfg.tol.series,
    })
}

/// The error functions exposed by `efun`.
#[derive(Clone, Copy, Debug)]
pub enum Efun {
    E1,
    M1,
    E2,
    TildeE2,
    E2Flat,
    E2Boosted,
}

fn numbers(args: &[String], want: usize, usage: &str) -> Result<Vec<f64>> {
    if args.len() != want {
        return Err(Error::InvalidInput(format!("expected {usage}, got {} arguments", args.len())));
    }
    args.iter()
        .map(|a| {
            a.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::InvalidInput(format!("'{a}' is not a finite number")))
        })
        .collect()
}

pub fn efun(f: Efun, args: &[String], cfg: Option<&RunConfig>) -> Result<Outcome> {
    let spec = cfg.map_or_else(QuadratureSpec::default, RunConfig::spec);
    let (value, bound, extra) = match f {
        Efun::E1 => {
            let u = numbers(args, 1, "u")?;
            (errfn::e1(u[0]), LIBM_BOUND, Value::Null)
        }
        Efun::M1 => {
            let u = numbers(args, 1, "u")?;
            (errfn::m1(u[0]), LIBM_BOUND, Value::Null)
        }
        Efun::E2 => {
            let u = numbers(args, 2, "u1 u2")?;
            (errfn::e2(u[0], u[1], &spec)?, spec.abs_tol, Value::Null)
        }
        Efun::TildeE2 => {
            let u = numbers(args, 2, "a b")?;
            (errfn::tilde_e2(u[0], u[1], &spec)?, spec.abs_tol, Value::Null)
        }
        Efun::E2Flat => {
            let u = numbers(args, 3, "alpha u1 u2")?;
            (errfn::e2_flat(u[0], u[1], u[2], &spec)?, spec.abs_tol, Value::Null)
        }
        Efun::E2Boosted => {
            let cfg = cfg.ok_or_else(|| Error::InvalidInput("e2_boosted needs --config".into()))?;
            let sp = cfg.space()?;
            let n = sp.dim();
            if args.len() != n + 2 {
                return Err(Error::InvalidInput(format!(
                    "expected two of c1|c2|c1p|c2p followed by {n} coordinates"
                )));
            }
            let (a, b) = (cfg.vector(&args[0])?, cfg.vector(&args[1])?);
            let x = Vector::new(numbers(&args[2..], n, "coordinates")?);
            let value = errfn::e2_boosted(&sp, &a, &b, &x, &spec)?;
            // The value at x = 0 in closed form.
            let arctan = -2.0 / PI * (sp.inner(&a, &b) / sp.delta(&a, &b).value.sqrt()).atan();
            (value, spec.abs_tol, json!({ "origin_value": arctan }))
        }
    };
    let mut outputs = json!({ "value": value, "error_bound": bound });
    if let Value::Object(m) = extra {
        outputs.as_object_mut().expect("object").extend(m);
    }
    Ok(Outcome {
        outputs,
        residuals: None,
        pass: true,
    })
}
