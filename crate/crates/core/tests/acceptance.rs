//! End-to-end acceptance run. Prints one PASS/FAIL line per item and exits
//! nonzero if any item fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kmtheta::checks;
use kmtheta::fixture;
use kmtheta::geometry::hypercube::HypercubeChart;
use kmtheta::geometry::{intersection_point, phi2, phi_r, SurfaceChart};
use kmtheta::theta::{phi_r_series, phi_r_series_bounded, verify_s, verify_t};
use kmtheta::{Coset, QuadratureSpec, TauPoint, ThetaContext};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn chart() -> SurfaceChart {
    SurfaceChart::new(fixture::canonical_config()).expect("fixture chart")
}

fn ctx() -> ThetaContext {
    ThetaContext::new(
        fixture::fixture_lattice(),
        fixture::canonical_config(),
        QuadratureSpec::default(),
    )
    .expect("fixture context")
}

fn closed_form() -> Outcome {
    let ch = chart();
    let xs = fixture::sample_vectors(1001, 120, 3.0);
    let r = checks::surface_identity(&ch, &xs, &QuadratureSpec::default()).unwrap();
    let pass = r.checked >= 100 && r.max_residual <= 1e-6 && r.elapsed <= Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "{} regular vectors, max residual {:.2e}, {:.2?}",
            r.checked, r.max_residual, r.elapsed
        ),
    )
}

fn value_at_origin() -> Outcome {
    let r = checks::arctan_identity(&chart()).unwrap();
    outcome(
        r.residual <= 1e-8,
        format!("surface {:.15} arctan {:.15} residual {:.2e}", r.surface, r.arctan, r.residual),
    )
}

fn primitive() -> Outcome {
    let r = checks::stokes(&chart(), 1003, 50, 1e-2).unwrap();
    outcome(
        r.min_ratio >= 12.0 && r.max_residual <= 1e-7,
        format!(
            "{} squares, residual at h = {} is {:.2e}, smallest halving ratio {:.2}",
            r.squares, r.side, r.max_residual, r.min_ratio
        ),
    )
}

fn intersection_numbers() -> Outcome {
    let ch = chart();
    let config = ch.config();
    let sp = config.space();
    let mut xs = Vec::new();
    let mut seed = 1004;
    while xs.len() < 10_000 {
        xs.extend(
            fixture::sample_vectors(seed, 20_000, 3.0)
                .into_iter()
                .filter(|x| config.is_regular(x) && phi2(config, x) != 0.0),
        );
        seed += 1;
    }
    xs.truncate(10_000);
    let r = checks::intersection(&ch, &xs).unwrap();
    // The local orientation at the crossing: the determinant of pairings of
    // x with the chart tangents. It must carry one fixed sign relative to Φ2.
    let mut ratios = [0usize; 2];
    for x in &xs {
        let (s, t) = intersection_point(config, x).expect("crossing");
        let jet = ch.jet(s, t).unwrap();
        let det = sp.inner(x, &jet.ds.0) * sp.inner(x, &jet.dt.1) - sp.inner(x, &jet.ds.1) * sp.inner(x, &jet.dt.0);
        let same = det.signum() == phi2(config, x);
        ratios[usize::from(same)] += 1;
    }
    let consistent = ratios[0] == 0 || ratios[1] == 0;
    let pass = r.tested == 10_000 && r.mismatches == 0 && r.missing_points == 0 && r.max_residual <= 1e-18 && consistent;
    outcome(
        pass,
        format!(
            "{} vectors, {} mismatches, max R at crossing {:.2e}, orientation determinant agrees/disagrees {}/{}",
            r.tested, r.mismatches, r.max_residual, ratios[1], ratios[0]
        ),
    )
}

fn sign_series_convergence() -> Outcome {
    let r = checks::holomorphic_stability(&ctx(), 10.0, 1.0).unwrap();
    outcome(
        r.unstable.is_empty() && r.domination_excess <= 1e-9,
        format!(
            "{} cosets, {} unstable, {} terms, largest log(|q^Q| e^(pi v |x|_S)) = {:.3}",
            r.cosets,
            r.unstable.len(),
            r.terms,
            r.domination_excess
        ),
    )
}

fn modularity() -> Outcome {
    let c = ctx();
    let tau = TauPoint::new(0.37, 1.3).unwrap();
    let t = verify_t(&c, tau, 1e-6).unwrap();
    let s = verify_s(&c, tau, 1e-6).unwrap();
    let pairwise = s
        .per_coset
        .iter()
        .flat_map(|(_, a)| s.per_coset.iter().map(move |(_, b)| (a - b).norm()))
        .fold(0.0, f64::max);
    let phase = s.measured_phase.unwrap_or_default();
    let pass = t.residual <= 1e-5
        && t.tail_bound <= 1e-6
        && s.tail_bound <= 1e-6
        && !s.per_coset.is_empty()
        && pairwise <= 1e-4
        && s.unitarity_defect() <= 1e-4;
    outcome(
        pass,
        format!(
            "T residual {:.2e} (tail {:.1e}); S phase {:.6}{:+.6}i over {} cosets, spread {:.2e}, |r|-1 {:.2e}, {} inconclusive",
            t.residual,
            t.tail_bound,
            phase.re,
            phase.im,
            s.per_coset.len(),
            pairwise,
            s.unitarity_defect(),
            s.inconclusive.len()
        ),
    )
}

fn two_paths() -> Outcome {
    let c = ctx();
    let mu: Coset = "[1/2,1/2,0,0]".parse().unwrap();
    let tau = TauPoint::new(0.3, 1.1).unwrap();
    let mut qmax = 4.0;
    while c.terms(&mu, 2.0 * qmax).unwrap().len() > 500 {
        qmax -= 0.25;
    }
    let r = checks::two_path(&c, &mu, tau, qmax).unwrap();
    outcome(
        r.terms <= 500 && r.residual <= 1e-5 && r.elapsed <= Duration::from_secs(600),
        format!(
            "{} terms (qmax {qmax}), residual {:.2e}, {:.2?}",
            r.terms, r.residual, r.elapsed
        ),
    )
}

fn shadow() -> Outcome {
    let c = ctx();
    let tau = TauPoint::new(0.3, 1.1).unwrap();
    let mut worst: f64 = 0.0;
    let mut largest: f64 = 0.0;
    let cosets = c.cosets().unwrap();
    for mu in &cosets {
        let r = checks::shadow(&c, mu, tau, 2.5).unwrap();
        worst = worst.max(r.residual);
        largest = largest.max(r.boundary.norm());
    }
    outcome(
        worst <= 1e-4,
        format!(
            "{} cosets, max residual {:.2e}, largest shadow {:.3e}",
            cosets.len(),
            worst,
            largest
        ),
    )
}

fn error_functions() -> Outcome {
    let r = checks::error_functions(&fixture::canonical_config(), 1009, 1000, &QuadratureSpec::default()).unwrap();
    let pass = r.e2_origin == 0.0 && r.origin_residual <= 1e-10 && r.identity_residual <= 1e-8 && r.wall_residual <= 1e-6;
    outcome(
        pass,
        format!(
            "e2(0,0) = {}, origin {:.2e}, decomposition over {} samples {:.2e}, walls {:.2e}",
            r.e2_origin, r.origin_residual, r.identity_samples, r.identity_residual, r.wall_residual
        ),
    )
}

fn rank_three() -> Outcome {
    let (sp, pairs) = fixture::rank3_config();
    let l = fixture::rank3_lattice();
    let mu: Coset = "[1/6,0,0,0,0,0]".parse().unwrap();
    let a = phi_r_series(&l, &mu, &pairs, 6.0).unwrap();
    let b = phi_r_series_bounded(&l, &mu, &pairs, 6.0, 24.0).unwrap();
    let stable = a == b && !a.is_empty();

    let cube = HypercubeChart::new(sp.clone(), pairs.clone()).unwrap();
    let mut tested = 0;
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    let mut seed = 1010;
    while tested < 1000 {
        for x in fixture::sample_vectors_dim(seed, 6, 5000, 2.0) {
            if tested == 1000 || phi_r(&sp, &x, &pairs) == 0.0 {
                continue;
            }
            tested += 1;
            // Each null equation (x, (1-s)C + sC') = 0 is linear in s with a
            // single root; the crossing is unique iff every root is in [0,1].
            let roots: Vec<Option<f64>> = pairs
                .iter()
                .map(|(c, cp)| {
                    let (p, pp) = (sp.inner(&x, c), sp.inner(&x, cp));
                    let s = p / (p - pp);
                    (p != pp && (0.0..=1.0).contains(&s)).then_some(s)
                })
                .collect();
            let Some(s) = roots.into_iter().collect::<Option<Vec<f64>>>() else {
                failures += 1;
                continue;
            };
            if cube.intersection(&x).as_deref() != Some(&s[..]) {
                failures += 1;
            }
            let frame = cube.point(&s).unwrap();
            let r: f64 = frame.iter().map(|z| sp.inner(&x, z).powi(2)).sum();
            worst = worst.max(r);
        }
        seed += 1;
    }
    let pass = stable && failures == 0 && worst <= 1e-18;
    outcome(
        pass,
        format!(
            "{} terms through q^6 stable: {stable}; {tested} crossings, {failures} failures, max R {:.2e}",
            a.len(),
            worst
        ),
    )
}

fn main() -> ExitCode {
    let items: [(&str, fn() -> Outcome); 10] = [
        ("closed form of the surface integral", closed_form),
        ("value at the origin", value_at_origin),
        ("primitive of the Schwartz form", primitive),
        ("intersection numbers", intersection_numbers),
        ("convergence of the sign series", sign_series_convergence),
        ("modular transformations", modularity),
        ("closed form against quadrature", two_paths),
        ("shadow", shadow),
        ("error functions", error_functions),
        ("rank three", rank_three),
    ];
    let mut failed = 0;
    let start = Instant::now();
    for (i, (name, run)) in items.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{:>2}] {tag} {name}: {} ({:.1?})", i + 1, o.detail, t.elapsed());
        if !o.pass {
            failed += 1;
        }
    }
    println!("{} of {} passed in {:.1?}", items.len() - failed, items.len(), start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
