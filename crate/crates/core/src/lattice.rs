//! Even lattices, their discriminant groups, and enumeration of coset vectors
//! under a positive definite majorant.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::frame::majorant_matrix;
use crate::geometry::hypercube::HypercubeChart;
use crate::geometry::SurfaceChart;
use crate::quadspace::{InnerProductSpace, Vector};

pub type Rational = Ratio<i64>;

/// Tolerance for recognising the lattice Gram matrix as integral.
const INTEGRALITY_TOL: f64 = 1e-9;
/// Grid points per axis for [`majorant_on_s`].
pub const MAJORANT_GRID: usize = 9;
/// Safety factor applied to the minimum generalized eigenvalue.
pub const MAJORANT_SAFETY: f64 = 0.9;

/// A lattice `L = B Z^n` whose Gram matrix `Bᵀ G B` is integral with even
/// diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenLattice {
    space: InnerProductSpace,
    basis: DMatrix<f64>,
    gram: DMatrix<i64>,
}

impl EvenLattice {
    /// `basis` holds the generators as columns, in ambient coordinates.
    pub fn new(space: InnerProductSpace, basis: DMatrix<f64>) -> Result<Self> {
        let n = space.dim();
        if basis.nrows() != n || basis.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: basis.ncols(),
            });
        }
        let real = basis.transpose() * space.gram() * &basis;
        let mut gram = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = real[(i, j)];
                let r = v.round();
                if (v - r).abs() > INTEGRALITY_TOL * (1.0 + v.abs()) {
                    return Err(Error::InvalidInput(format!(
                        "lattice gram entry ({i},{j}) = {v} is not an integer"
                    )));
                }
                gram[(i, j)] = r as i64;
            }
        }
        for i in 0..n {
            if gram[(i, i)] % 2 != 0 {
                return Err(Error::InvalidInput(format!(
                    "lattice is not even: diagonal entry {i} is {}",
                    gram[(i, i)]
                )));
            }
        }
        if det_i128(&gram) == 0 {
            return Err(Error::SingularGram);
        }
        Ok(EvenLattice { space, basis, gram })
    }

    /// Each row is one generator.
    pub fn from_rows(space: InnerProductSpace, rows: &[Vec<f64>]) -> Result<Self> {
        let n = space.dim();
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: r.len(),
            });
        }
        Self::new(space, DMatrix::from_fn(n, n, |i, j| rows[j][i]))
    }

    pub fn space(&self) -> &InnerProductSpace {
        &self.space
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn gram(&self) -> &DMatrix<i64> {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    /// `|det gram| = |L^∨/L|`.
    pub fn discriminant(&self) -> u64 {
        det_i128(&self.gram).unsigned_abs() as u64
    }

    /// Ambient vector `B y` for rational lattice coordinates `y`.
    pub fn embed(&self, y: &[f64]) -> Vector {
        let v = &self.basis * DVector::from_column_slice(y);
        Vector::new(v.iter().copied().collect())
    }

    /// `(μ, ν)` for two cosets, exactly.
    pub fn pairing(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let n = self.rank();
        let mut acc = Rational::zero();
        for i in 0..n {
            for j in 0..n {
                acc += a[i] * b[j] * Rational::from_integer(self.gram[(i, j)]);
            }
        }
        acc
    }
}

fn det_i128(m: &DMatrix<i64>) -> i128 {
    // Bareiss fraction-free elimination.
    let n = m.nrows();
    let mut a: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)] as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// A class `μ + L` in `L^∨/L`, stored as lattice coordinates reduced to
/// `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coset {
    pub mu: Vec<Rational>,
}

impl Coset {
    pub fn zero(n: usize) -> Self {
        Coset {
            mu: vec![Rational::zero(); n],
        }
    }

    /// Reduces each coordinate modulo 1.
    pub fn new(mu: Vec<Rational>) -> Self {
        Coset {
            mu: mu.into_iter().map(frac).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Coset::new(self.mu.iter().map(|m| -m).collect())
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.mu.iter().map(to_f64).collect()
    }

    /// Checks `gram · μ ∈ Z^n`.
    pub fn is_dual(&self, lattice: &EvenLattice) -> bool {
        let n = lattice.rank();
        (0..n).all(|i| {
            let mut acc = Rational::zero();
            for j in 0..n {
                acc += self.mu[j] * Rational::from_integer(lattice.gram[(i, j)]);
            }
            acc.is_integer()
        })
    }

    /// `Q(μ) = (μ,μ)/2` modulo 1.
    pub fn norm_mod1(&self, lattice: &EvenLattice) -> Rational {
        frac(lattice.pairing(&self.mu, &self.mu) / Rational::from_integer(2))
    }
}

impl fmt::Display for Coset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.mu.iter().map(|m| m.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for Coset {
    type Err = Error;

    /// Parses `"[a/b,c/d,...]"` or `"a/b,c/d,..."`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let mu = body
            .split(',')
            .map(|p| {
                Rational::from_str(p.trim())
                    .map_err(|_| Error::InvalidInput(format!("bad rational '{p}' in coset '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Coset::new(mu))
    }
}

pub fn frac(r: Rational) -> Rational {
    r - r.floor()
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Representatives of `L^∨/L`, sorted.
///
/// With `U A V = D` diagonal (unimodular `U`, `V`), the dual coordinates are
/// `V D^{-1} m` for `0 ≤ m_i < d_i`.
pub fn discriminant_group(lattice: &EvenLattice) -> Result<Vec<Coset>> {
    let n = lattice.rank();
    let (d, v) = diagonalize(lattice.gram())?;
    let mut out = Vec::new();
    let mut m = vec![0i64; n];
    loop {
        let mu: Vec<Rational> = (0..n)
            .map(|i| {
                (0..n).fold(Rational::zero(), |acc, j| {
                    acc + Rational::from_integer(v[j][i] as i64) * Rational::new(m[j], d[j])
                })
            })
            .collect();
        out.push(Coset::new(mu));
        let mut k = 0;
        loop {
            if k == n {
                out.sort();
                out.dedup();
                return Ok(out);
            }
            m[k] += 1;
            if m[k] < d[k] {
                break;
            }
            m[k] = 0;
            k += 1;
        }
    }
}

/// Diagonalizes an integer matrix by unimodular row and column operations,
/// returning the diagonal (made positive) and the accumulated column
/// transform `V` indexed as `v[column][row]`.
fn diagonalize(m: &DMatrix<i64>) -> Result<(Vec<i64>, Vec<Vec<i128>>)> {
    let n = m.nrows();
    let mut a: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)] as i128).collect()).collect();
    // v[c] is column c of V.
    let mut v: Vec<Vec<i128>> = (0..n)
        .map(|c| (0..n).map(|r| i128::from(r == c)).collect())
        .collect();
    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Err(Error::SingularGram);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            v.swap(t, pj);
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..n {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in 0..n {
                        a[i][j] -= q * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..n {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for i in 0..n {
                        a[i][j] -= q * a[i][t];
                    }
                    for r in 0..n {
                        let x = v[t][r];
                        v[j][r] -= q * x;
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                break;
            }
        }
        if a[t][t] < 0 {
            for row in a.iter_mut() {
                row[t] = -row[t];
            }
            for r in 0..n {
                v[t][r] = -v[t][r];
            }
        }
    }
    let d = (0..n)
        .map(|t| i64::try_from(a[t][t]).map_err(|_| Error::OutOfRange("invariant factor".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok((d, v))
}

/// A positive definite quadratic form on the ambient space.
#[derive(Clone, Debug, PartialEq)]
pub struct MajorantForm {
    matrix: DMatrix<f64>,
}

impl MajorantForm {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.clone().cholesky().is_none() {
            return Err(Error::InvalidInput("majorant is not positive definite".into()));
        }
        Ok(MajorantForm { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn eval(&self, x: &Vector) -> f64 {
        let v = DVector::from_column_slice(&x.0);
        (v.transpose() * &self.matrix * &v)[(0, 0)]
    }
}

/// `0.9 ν M_ref` where `M_ref` is the majorant at the centre of the cube and
/// `ν` the least generalized eigenvalue of `M_z` against `M_ref` over a grid
/// of `grid^r` chart points. `(x,x)_z ≥ (x,x)_S` then holds on the grid with
/// room to spare off it.
pub fn majorant_on_cube(chart: &HypercubeChart, grid: usize) -> Result<MajorantForm> {
    let r = chart.rank();
    majorant_on_box(chart, &vec![0.0; r], &vec![1.0; r], grid)
}

/// [`majorant_on_cube`] restricted to the box `lo ≤ s ≤ hi` of the chart.
pub fn majorant_on_box(chart: &HypercubeChart, lo: &[f64], hi: &[f64], grid: usize) -> Result<MajorantForm> {
    let r = chart.rank();
    let sp = chart.space();
    let mid: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect();
    let centre = chart.point(&mid)?;
    let reference = majorant_matrix(sp, &centre.iter().collect::<Vec<_>>());
    let chol = reference
        .clone()
        .cholesky()
        .ok_or_else(|| Error::InvalidInput("reference majorant not positive".into()))?;
    let linv = chol
        .l()
        .try_inverse()
        .ok_or_else(|| Error::InvalidInput("reference majorant singular".into()))?;
    let g = grid.max(2);
    let mut nu = f64::INFINITY;
    let mut idx = vec![0usize; r];
    loop {
        let s: Vec<f64> = idx
            .iter()
            .enumerate()
            .map(|(j, &i)| lo[j] + (hi[j] - lo[j]) * i as f64 / (g - 1) as f64)
            .collect();
        let z = chart.point(&s)?;
        let m = majorant_matrix(sp, &z.iter().collect::<Vec<_>>());
        let w = &linv * m * linv.transpose();
        let w = (&w + w.transpose()) * 0.5;
        nu = nu.min(w.symmetric_eigen().eigenvalues.min());
        let mut k = 0;
        loop {
            if k == r {
                return MajorantForm::new(reference * (MAJORANT_SAFETY * nu));
            }
            idx[k] += 1;
            if idx[k] < g {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Majorant `(·,·)_S` for the surface of a two-pair configuration.
pub fn majorant_on_s(chart: &SurfaceChart) -> Result<MajorantForm> {
    let c = chart.config();
    let cube = HypercubeChart::unchecked(
        c.space().clone(),
        vec![(c.c1.clone(), c.c1p.clone()), (c.c2.clone(), c.c2p.clone())],
    );
    majorant_on_cube(&cube, MAJORANT_GRID)
}

/// A vector `x = B(k + μ)` of a coset together with its majorant norm.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeVector {
    pub k: Vec<i64>,
    pub x: Vector,
    pub norm: f64,
}

impl LatticeVector {
    /// Lattice coordinates `k + μ`.
    pub fn coords(&self, mu: &Coset) -> Vec<Rational> {
        self.k
            .iter()
            .zip(&mu.mu)
            .map(|(k, m)| Rational::from_integer(*k) + m)
            .collect()
    }
}

/// All `x ∈ L + μ` with `(x,x)_M ≤ bound`, sorted by norm and then by integer
/// coordinates. The bound is inclusive up to a relative `1e-12`.
pub fn enumerate(lattice: &EvenLattice, mu: &Coset, m: &MajorantForm, bound: f64) -> Vec<LatticeVector> {
    let n = lattice.rank();
    if !(bound >= 0.0) {
        return Vec::new();
    }
    let mlat = lattice.basis.transpose() * &m.matrix * &lattice.basis;
    let mlat = (&mlat + mlat.transpose()) * 0.5;
    let Some(chol) = mlat.clone().cholesky() else {
        return Vec::new();
    };
    let r = chol.l().transpose();
    let muf = mu.as_f64();
    let slack = 1e-9 * (1.0 + bound);
    let mut out = Vec::new();
    let mut k = vec![0i64; n];
    let mut y = vec![0.0; n];
    recurse(&r, &muf, bound + slack, n, &mut k, &mut y, &mut |k, y| {
        let yv = DVector::from_column_slice(y);
        let norm = (yv.transpose() * &mlat * &yv)[(0, 0)];
        if norm <= bound * (1.0 + 1e-12) + 1e-12 {
            out.push(LatticeVector {
                k: k.to_vec(),
                x: lattice.embed(y),
                norm,
            });
        }
    });
    out.sort_by(|a, b| {
        a.norm
            .partial_cmp(&b.norm)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.k.cmp(&b.k))
    });
    out
}

fn recurse(
    r: &DMatrix<f64>,
    mu: &[f64],
    remaining: f64,
    level: usize,
    k: &mut [i64],
    y: &mut [f64],
    emit: &mut dyn FnMut(&[i64], &[f64]),
) {
    if level == 0 {
        emit(k, y);
        return;
    }
    let i = level - 1;
    let n = k.len();
    let c: f64 = (i + 1..n).map(|j| r[(i, j)] * y[j]).sum();
    let rii = r[(i, i)];
    let rad = remaining.max(0.0).sqrt();
    let lo = ((-rad - c) / rii - mu[i]).ceil() as i64;
    let hi = ((rad - c) / rii - mu[i]).floor() as i64;
    for ki in lo..=hi {
        k[i] = ki;
        y[i] = ki as f64 + mu[i];
        let t = rii * y[i] + c;
        let rest = remaining - t * t;
        if rest < -1e-12 * (1.0 + remaining) {
            continue;
        }
        recurse(r, mu, rest, i, k, y, emit);
    }
}

/// `Q(x) = (x,x)/2` for lattice coordinates `y`, exactly. Fails unless
/// `y` describes a vector of `L^∨`.
pub fn q_exponent(lattice: &EvenLattice, y: &[Rational]) -> Result<Rational> {
    if y.len() != lattice.rank() {
        return Err(Error::DimensionMismatch {
            expected: lattice.rank(),
            got: y.len(),
        });
    }
    if !Coset::new(y.to_vec()).is_dual(lattice) {
        return Err(Error::InvalidInput("vector is not in the dual lattice".into()));
    }
    Ok(lattice.pairing(y, y) / Rational::from_integer(2))
}

/// Formats a rational as `"p/q"` (always with a denominator).
pub fn rational_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|_| Error::InvalidInput(format!("bad rational '{s}'")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use proptest::prelude::*;

    fn diag_lattice(d: &[f64], b: &[f64]) -> EvenLattice {
        let sp = InnerProductSpace::diagonal(d).unwrap();
        let basis = DMatrix::from_diagonal(&DVector::from_column_slice(b));
        EvenLattice::new(sp, basis).unwrap()
    }

    #[test]
    fn construction_checks() {
        let sp = InnerProductSpace::diagonal(&[1.0, -1.0]).unwrap();
        assert!(EvenLattice::new(sp.clone(), DMatrix::identity(2, 2)).is_err());
        let l = diag_lattice(&[1.0, -1.0], &[2f64.sqrt(), 2f64.sqrt()]);
        assert_eq!(l.gram()[(0, 0)], 2);
        assert_eq!(l.gram()[(1, 1)], -2);
        assert!(EvenLattice::new(sp, DMatrix::from_diagonal_element(2, 2, 0.9)).is_err());
    }

    #[test]
    fn discriminant_groups() {
        let u = fixture::hyperbolic_lattice();
        assert_eq!(discriminant_group(&u).unwrap(), vec![Coset::zero(4)]);
        let l = diag_lattice(&[1.0, -1.0], &[2f64.sqrt(), 2f64.sqrt()]);
        let g = discriminant_group(&l).unwrap();
        assert_eq!(g.len(), 4);
        let f = fixture::fixture_lattice();
        let g = discriminant_group(&f).unwrap();
        assert_eq!(g.len(), 16);
        for c in &g {
            assert!(c.is_dual(&f));
            assert!(g.contains(&c.neg()));
        }
    }

    #[test]
    fn discriminant_of_non_diagonal_gram() {
        // A2-like even form plus a hyperbolic plane twisted by 3.
        let sp = InnerProductSpace::new(DMatrix::from_row_slice(
            4,
            4,
            &[2.0, 1.0, 0.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 3.0, 0.0],
        ))
        .unwrap();
        let l = EvenLattice::new(sp, DMatrix::identity(4, 4)).unwrap();
        assert_eq!(l.discriminant(), 27);
        let g = discriminant_group(&l).unwrap();
        assert_eq!(g.len(), 27);
        for c in &g {
            assert!(c.is_dual(&l));
            assert!(g.contains(&c.neg()));
        }
    }

    #[test]
    fn coset_parsing() {
        let c: Coset = "[1/2, 0, -1/2, 3/2]".parse().unwrap();
        assert_eq!(c.to_string(), "[1/2,0,1/2,1/2]");
        assert!("[a]".parse::<Coset>().is_err());
    }

    #[test]
    fn q_exponents() {
        let f = fixture::fixture_lattice();
        let zero = vec![Rational::zero(); 4];
        assert_eq!(q_exponent(&f, &zero).unwrap(), Rational::zero());
        let y: Vec<Rational> = [1, -2, 0, 3].iter().map(|&v| Rational::from_integer(v)).collect();
        let q = q_exponent(&f, &y).unwrap();
        assert!(q.is_integer());
        let ny: Vec<Rational> = y.iter().map(|v| -v).collect();
        assert_eq!(q_exponent(&f, &ny).unwrap(), q);
        let half: Vec<Rational> = vec![Rational::new(1, 2), Rational::zero(), Rational::zero(), Rational::zero()];
        assert_eq!(q_exponent(&f, &half).unwrap(), Rational::new(1, 4));
        let third = vec![Rational::new(1, 3), Rational::zero(), Rational::zero(), Rational::zero()];
        assert!(q_exponent(&f, &third).is_err());
    }

    fn box_scan(l: &EvenLattice, mu: &Coset, m: &MajorantForm, bound: f64, w: i64) -> Vec<Vec<i64>> {
        let n = l.rank();
        let muf = mu.as_f64();
        let mut out = Vec::new();
        let mut k = vec![-w; n];
        loop {
            let y: Vec<f64> = (0..n).map(|i| k[i] as f64 + muf[i]).collect();
            if m.eval(&l.embed(&y)) <= bound * (1.0 + 1e-12) + 1e-12 {
                out.push(k.clone());
            }
            let mut i = 0;
            loop {
                if i == n {
                    out.sort();
                    return out;
                }
                k[i] += 1;
                if k[i] <= w {
                    break;
                }
                k[i] = -w;
                i += 1;
            }
        }
    }

    #[test]
    fn enumeration_matches_box_scan_positive_definite() {
        let sp = InnerProductSpace::diagonal(&[1.0, 1.0, 1.0]).unwrap();
        let l = EvenLattice::new(sp.clone(), DMatrix::from_diagonal_element(3, 3, 2f64.sqrt())).unwrap();
        let m = MajorantForm::new(sp.gram().clone()).unwrap();
        let got = enumerate(&l, &Coset::zero(3), &m, 4.0);
        // norms 0, 2 (six vectors) and 4 (twelve vectors)
        assert_eq!(got.len(), 19);
        let mut ks: Vec<_> = got.iter().map(|v| v.k.clone()).collect();
        ks.sort();
        assert_eq!(ks, box_scan(&l, &Coset::zero(3), &m, 4.0, 3));
        assert_eq!(got[0].k, vec![0, 0, 0]);
    }

    #[test]
    fn enumeration_on_fixture() {
        let chart = crate::geometry::SurfaceChart::new(fixture::canonical_config()).unwrap();
        let m = majorant_on_s(&chart).unwrap();
        let l = fixture::fixture_lattice();
        for mu in discriminant_group(&l).unwrap().iter().take(5) {
            let got = enumerate(&l, mu, &m, 12.0);
            let mut ks: Vec<_> = got.iter().map(|v| v.k.clone()).collect();
            ks.sort();
            assert_eq!(ks, box_scan(&l, mu, &m, 12.0, 8));
            for w in got.windows(2) {
                assert!(w[0].norm <= w[1].norm);
            }
            if *mu == mu.neg() {
                for v in &got {
                    assert!(got.iter().any(|u| (&u.x + &v.x).coord_norm() < 1e-12));
                }
            }
        }
    }

    #[test]
    fn majorant_dominated_on_surface() {
        let chart = crate::geometry::SurfaceChart::new(fixture::canonical_config()).unwrap();
        let sp = chart.space().clone();
        let m = majorant_on_s(&chart).unwrap();
        let xs = fixture::sample_vectors(21, 1000, 2.0);
        let pts = fixture::sample_vectors(22, 200, 0.5);
        for p in &pts {
            let (s, t) = (p.0[0] + 0.5, p.0[1] + 0.5);
            let z = chart.chart_point(s, t).unwrap();
            for x in xs.iter().step_by(5) {
                assert!(crate::geometry::majorant(&sp, x, &z) >= m.eval(x));
            }
        }
        for i in 0..MAJORANT_GRID {
            for j in 0..MAJORANT_GRID {
                let d = (MAJORANT_GRID - 1) as f64;
                let z = chart.chart_point(i as f64 / d, j as f64 / d).unwrap();
                for x in &xs {
                    assert!(crate::geometry::majorant(&sp, x, &z) >= m.eval(x));
                }
            }
        }
    }

    #[test]
    fn majorant_of_constant_chart() {
        let c = fixture::canonical_config();
        let cube = HypercubeChart::unchecked(
            c.space().clone(),
            vec![(c.c1.clone(), c.c1.clone()), (c.c2.clone(), c.c2.clone())],
        );
        let m = majorant_on_cube(&cube, 9).unwrap();
        let z = cube.point(&[0.0, 0.0]).unwrap();
        let mz = majorant_matrix(c.space(), &z.iter().collect::<Vec<_>>());
        assert!((m.matrix() - mz * MAJORANT_SAFETY).norm() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn enumeration_complete_random_gram(
            a in 1i64..4, b in -1i64..2, c in 1i64..4, bound in 1.0f64..12.0,
        ) {
            let g = DMatrix::from_row_slice(2, 2, &[2.0 * a as f64, b as f64, b as f64, 2.0 * c as f64]);
            prop_assume!(g.determinant() > 0.0);
            let sp = InnerProductSpace::new(g.clone()).unwrap();
            let l = EvenLattice::new(sp, DMatrix::identity(2, 2)).unwrap();
            let m = MajorantForm::new(g).unwrap();
            for mu in discriminant_group(&l).unwrap() {
                let mut ks: Vec<_> = enumerate(&l, &mu, &m, bound).iter().map(|v| v.k.clone()).collect();
                ks.sort();
                prop_assert_eq!(ks, box_scan(&l, &mu, &m, bound, 8));
            }
        }
    }
}
