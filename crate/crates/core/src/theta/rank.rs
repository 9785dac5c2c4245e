use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::QSeries;
use crate::error::{Error, Result};
use crate::geometry::hypercube::HypercubeChart;
use crate::geometry::phi_r;
use crate::lattice::{enumerate, majorant_on_box, q_exponent, to_f64, Coset, EvenLattice, Rational};
use crate::quadspace::Vector;

/// Boxes per chart axis for the rank-`r` enumeration.
pub const SUBDIVISIONS: usize = 4;

/// Grid points per axis when bounding the majorant on one box.
const BOX_GRID: usize = 5;

/// `Σ Φ_r(x) q^{Q(x)}` through exponent `qmax` for `r` validated pairs.
///
/// A vector with `Φ_r(x) ≠ 0` is orthogonal to the unique chart point `z(s*)`
/// where it meets the hypercube, so `(x,x) = (x,x)_{z(s*)}`. The cube is cut
/// into `SUBDIVISIONS^r` boxes; each is enumerated with a majorant for that
/// box and keeps only the vectors whose `s*` it owns.
pub fn phi_r_series(
    lattice: &EvenLattice,
    mu: &Coset,
    pairs: &[(Vector, Vector)],
    qmax: f64,
) -> Result<QSeries> {
    phi_r_series_bounded(lattice, mu, pairs, qmax, 2.0 * qmax)
}

/// As [`phi_r_series`] with an explicit bound on the box majorants.
pub fn phi_r_series_bounded(
    lattice: &EvenLattice,
    mu: &Coset,
    pairs: &[(Vector, Vector)],
    qmax: f64,
    bound: f64,
) -> Result<QSeries> {
    if bound < 2.0 * qmax {
        return Err(Error::InvalidInput(format!(
            "enumeration bound {bound} cannot guarantee exponents up to {qmax}"
        )));
    }
    let sp = lattice.space();
    let chart = HypercubeChart::new(sp.clone(), pairs.to_vec())?;
    let r = chart.rank();
    let k = SUBDIVISIONS;
    let boxes: Vec<Vec<usize>> = (0..k.pow(r as u32))
        .map(|mut n| {
            (0..r)
                .map(|_| {
                    let i = n % k;
                    n /= k;
                    i
                })
                .collect()
        })
        .collect();
    let owner = |s: &[f64]| -> Vec<usize> {
        s.iter().map(|&t| ((t * k as f64).floor() as usize).min(k - 1)).collect()
    };
    let found: Vec<Vec<(Rational, f64)>> = boxes
        .par_iter()
        .map(|b| {
            let lo: Vec<f64> = b.iter().map(|&i| i as f64 / k as f64).collect();
            let hi: Vec<f64> = b.iter().map(|&i| (i + 1) as f64 / k as f64).collect();
            let m = majorant_on_box(&chart, &lo, &hi, BOX_GRID)?;
            let mut out = Vec::new();
            for lv in enumerate(lattice, mu, &m, bound) {
                let Some(s) = chart.intersection(&lv.x) else { continue };
                if owner(&s) != *b {
                    continue;
                }
                let q = q_exponent(lattice, &lv.coords(mu))?;
                if to_f64(&q) > qmax {
                    continue;
                }
                let c = phi_r(sp, &lv.x, pairs);
                if c != 0.0 {
                    out.push((q, c));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut terms: BTreeMap<Rational, Complex64> = BTreeMap::new();
    for (q, c) in found.into_iter().flatten() {
        *terms.entry(q).or_default() += c;
    }
    terms.retain(|_, c| *c != Complex64::new(0.0, 0.0));
    Ok(QSeries {
        coset: mu.clone(),
        terms,
        guarantee: qmax,
    })
}
