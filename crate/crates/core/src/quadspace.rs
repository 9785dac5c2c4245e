//! Real inner-product spaces of arbitrary signature.
//!
//! All pairings in the crate go through [`InnerProductSpace::inner`]. Vectors
//! are plain coordinate arrays in the ambient basis of the space that owns
//! them; the space is passed explicitly wherever a pairing is needed.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Relative tolerance used to reject degenerate forms.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// `sgn` with `sgn(0) = 0`.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// A coordinate vector in the ambient basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(pub Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Self {
        Vector(coords)
    }

    pub fn zeros(n: usize) -> Self {
        Vector(vec![0.0; n])
    }

    /// The `i`-th standard basis vector of `R^n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Vector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn scale(&self, a: f64) -> Vector {
        Vector(self.0.iter().map(|x| a * x).collect())
    }

    /// `self + a * other`
    pub fn axpy(&self, a: f64, other: &Vector) -> Vector {
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(x, y)| x + a * y)
                .collect(),
        )
    }

    /// `a * u + b * v`
    pub fn lincomb(a: f64, u: &Vector, b: f64, v: &Vector) -> Vector {
        Vector(
            u.0.iter()
                .zip(&v.0)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    /// Euclidean norm of the coordinates (not the form).
    pub fn coord_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector(v)
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &Vector {
    type Output = Vector;
    fn mul(self, rhs: f64) -> Vector {
        self.scale(rhs)
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

/// `Δ(C,C')` together with its sign.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeltaReport {
    pub value: f64,
    pub positive: bool,
}

impl DeltaReport {
    fn new(value: f64) -> Self {
        DeltaReport {
            value,
            positive: value > 0.0,
        }
    }
}

/// A real vector space with a nondegenerate symmetric bilinear form.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerProductSpace {
    gram: DMatrix<f64>,
}

impl InnerProductSpace {
    /// Builds a space from a row-major gram matrix. The matrix must be square,
    /// symmetric and nondegenerate; no signature is imposed.
    pub fn new(gram: DMatrix<f64>) -> Result<Self> {
        if gram.nrows() != gram.ncols() {
            return Err(Error::DimensionMismatch {
                expected: gram.nrows(),
                got: gram.ncols(),
            });
        }
        if gram.nrows() == 0 {
            return Err(Error::InvalidInput("empty gram matrix".into()));
        }
        let scale = gram.amax().max(f64::MIN_POSITIVE);
        let asym = (&gram - gram.transpose()).amax();
        if asym > 1e-12 * scale {
            return Err(Error::NotSymmetric { asymmetry: asym });
        }
        let space = InnerProductSpace { gram };
        space.signature()?;
        Ok(space)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
        }
        let gram = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Self::new(gram)
    }

    /// Diagonal form `diag(d_1, ..., d_n)`.
    pub fn diagonal(d: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(
            d,
        )))
    }

    /// Builds a space and checks that it has signature `(p, q)`.
    pub fn with_signature(gram: DMatrix<f64>, p: usize, q: usize) -> Result<Self> {
        let space = Self::new(gram)?;
        let (sp, sq) = space.signature()?;
        if (sp, sq) != (p, q) {
            return Err(Error::Signature {
                pos: sp,
                neg: sq,
                want_pos: p,
                want_neg: q,
            });
        }
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    fn check_dim(&self, v: &Vector) -> Result<()> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.dim(),
            });
        }
        Ok(())
    }

    /// `(x, y)` with dimension checks.
    pub fn try_inner(&self, x: &Vector, y: &Vector) -> Result<f64> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.inner(x, y))
    }

    /// `x^T G y`. Panics in debug builds on a dimension mismatch.
    #[inline]
    pub fn inner(&self, x: &Vector, y: &Vector) -> f64 {
        debug_assert_eq!(x.dim(), self.dim());
        debug_assert_eq!(y.dim(), self.dim());
        let n = self.dim();
        let mut acc = 0.0;
        for j in 0..n {
            let yj = y.0[j];
            if yj == 0.0 {
                continue;
            }
            let mut col = 0.0;
            for i in 0..n {
                col += x.0[i] * self.gram[(i, j)];
            }
            acc += col * yj;
        }
        acc
    }

    /// `(x, x)`
    #[inline]
    pub fn norm2(&self, x: &Vector) -> f64 {
        self.inner(x, x)
    }

    /// `G x`, the covector of `x`.
    pub fn lower(&self, x: &Vector) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.gram[(i, j)] * x.0[j]).sum())
            .collect()
    }

    /// Number of positive and negative eigenvalues of the gram matrix.
    pub fn signature(&self) -> Result<(usize, usize)> {
        let eig = self.gram.clone().symmetric_eigen();
        let scale = self.gram.norm().max(f64::MIN_POSITIVE);
        let mut p = 0;
        let mut q = 0;
        for &ev in eig.eigenvalues.iter() {
            if ev.abs() < DEGENERACY_TOL * scale {
                return Err(Error::DegenerateForm { eigenvalue: ev });
            }
            if ev > 0.0 {
                p += 1;
            } else {
                q += 1;
            }
        }
        Ok((p, q))
    }

    /// `Δ(C,C') = (C,C)(C',C') - (C,C')^2`.
    pub fn delta(&self, c: &Vector, cp: &Vector) -> DeltaReport {
        let a = self.norm2(c);
        let b = self.norm2(cp);
        let ab = self.inner(c, cp);
        DeltaReport::new(a * b - ab * ab)
    }

    /// Gram matrix `((v_i, v_j))` of a list of vectors.
    pub fn gram_of(&self, vs: &[&Vector]) -> DMatrix<f64> {
        let k = vs.len();
        let mut m = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in i..k {
                let v = self.inner(vs[i], vs[j]);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    /// Determinant of the gram matrix of `vs`.
    pub fn delta_gram(&self, vs: &[&Vector]) -> f64 {
        if vs.is_empty() {
            return 1.0;
        }
        self.gram_of(vs).determinant()
    }

    /// `C - (C,C0)/(C0,C0) C0`, the component of `C` orthogonal to `C0`.
    pub fn perp_component(&self, c: &Vector, c0: &Vector) -> Result<Vector> {
        let n0 = self.norm2(c0);
        if n0 == 0.0 {
            return Err(Error::NullVector(n0));
        }
        Ok(c.axpy(-self.inner(c, c0) / n0, c0))
    }

    /// `C / |(C,C)|^{1/2}`
    pub fn normalize(&self, c: &Vector) -> Result<Vector> {
        let n = self.norm2(c);
        if n == 0.0 {
            return Err(Error::NullVector(n));
        }
        Ok(c.scale(1.0 / n.abs().sqrt()))
    }

    /// `|(C,C)|^{1/2}`
    pub fn length(&self, c: &Vector) -> f64 {
        self.norm2(c).abs().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn split22() -> InnerProductSpace {
        InnerProductSpace::diagonal(&[1.0, 1.0, -1.0, -1.0]).unwrap()
    }

    #[test]
    fn inner_on_diagonal_form() {
        let v = split22();
        let e3 = Vector::basis(4, 2);
        assert_eq!(v.inner(&e3, &e3), -1.0);
        assert_eq!(v.inner(&Vector::zeros(4), &e3), 0.0);
    }

    #[test]
    fn inner_rejects_dimension_mismatch() {
        let v = split22();
        let err = v.try_inner(&Vector::zeros(3), &Vector::zeros(4)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn signature_of_standard_forms() {
        assert_eq!(split22().signature().unwrap(), (2, 2));
        let id = InnerProductSpace::diagonal(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(id.signature().unwrap(), (3, 0));
    }

    #[test]
    fn degenerate_form_rejected() {
        let err = InnerProductSpace::diagonal(&[1.0, 0.0, -1.0]).unwrap_err();
        assert!(matches!(err, Error::DegenerateForm { .. }));
    }

    #[test]
    fn sylvester_congruence() {
        // A^T G A for an invertible A keeps the signature; compare with the
        // eigenvalue count of the product computed independently.
        let g = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0, -1.0, -1.0]));
        let a = DMatrix::<f64>::from_row_slice(
            4,
            4,
            &[
                1.0, 2.0, 0.5, -1.0, 0.0, 1.0, 3.0, 0.2, 1.5, -0.7, 1.0, 0.0, 0.3, 0.0, -2.0, 1.0,
            ],
        );
        assert!(a.determinant().abs() > 1e-3);
        let congruent = a.transpose() * &g * &a;
        let evs = congruent.clone().symmetric_eigen().eigenvalues;
        let pos = evs.iter().filter(|&&e| e > 0.0).count();
        let space = InnerProductSpace::new(congruent).unwrap();
        assert_eq!(space.signature().unwrap(), (pos, 4 - pos));
        assert_eq!(space.signature().unwrap(), (2, 2));
    }

    #[test]
    fn delta_examples() {
        let v = split22();
        let c = Vector::new(vec![0.0, 0.0, 1.0, 0.0]);
        assert_eq!(v.delta(&c, &c).value, 0.0);
        let d = Vector::new(vec![0.0, 0.0, 0.0, 1.0]);
        let r = v.delta(&c, &d);
        assert_eq!(r.value, 1.0);
        assert!(r.positive);
        // (C,C) = -1, (C',C') = -2, (C,C') = -1  =>  2 - 1 = 1
        let cp = Vector::new(vec![0.0, 0.0, 1.0, 1.0]);
        assert_eq!(v.delta(&c, &cp).value, 1.0);
    }

    #[test]
    fn delta_gram_examples() {
        let v = split22();
        let c = Vector::new(vec![0.3, 0.1, 1.0, 0.2]);
        assert!((v.delta_gram(&[&c]) - v.norm2(&c)).abs() < 1e-15);
        assert_eq!(v.delta_gram(&[&c, &c]), 0.0);
        let e: Vec<Vector> = (0..4).map(|i| Vector::basis(4, i)).collect();
        let det = v.delta_gram(&[&e[2], &e[3], &e[0], &e[1]]);
        assert!((det - 1.0).abs() < 1e-15);
    }

    #[test]
    fn perp_component_examples() {
        let v = split22();
        let c0 = Vector::new(vec![0.0, 0.0, 1.0, 0.0]);
        let c = Vector::new(vec![1.0, 0.0, 0.0, 2.0]);
        assert_eq!(v.perp_component(&c, &c0).unwrap(), c);
        let z = v.perp_component(&c0, &c0).unwrap();
        assert!(z.coord_norm() < 1e-15);
        let null = Vector::new(vec![1.0, 0.0, 1.0, 0.0]);
        assert!(matches!(
            v.perp_component(&c, &null),
            Err(Error::NullVector(_))
        ));
    }

    #[test]
    fn perp_of_negative_pair_is_negative() {
        let v = split22();
        let c = Vector::new(vec![0.2, -0.1, 1.0, 0.3]);
        let c0 = Vector::new(vec![-0.1, 0.3, 0.4, 1.1]);
        let d = v.delta(&c, &c0);
        assert!(d.positive);
        let p = v.perp_component(&c, &c0).unwrap();
        let lhs = v.norm2(&p);
        let rhs = d.value / v.norm2(&c0);
        assert!(lhs < 0.0);
        assert!((lhs - rhs).abs() < 1e-13);
    }

    #[test]
    fn normalize_examples() {
        let v = split22();
        let c = Vector::new(vec![0.0, 0.0, 2.0, 0.0]);
        assert_eq!(v.normalize(&c).unwrap(), c.scale(0.5));
        let u = Vector::basis(4, 0);
        assert_eq!(v.normalize(&u).unwrap(), u);
        let null = Vector::new(vec![1.0, 0.0, 1.0, 0.0]);
        assert!(v.normalize(&null).is_err());
    }

    fn arb_vec() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-3.0f64..3.0, 4)
    }

    proptest! {
        #[test]
        fn inner_symmetric_and_bilinear(x in arb_vec(), y in arb_vec(), z in arb_vec(), a in -2.0f64..2.0) {
            let v = InnerProductSpace::from_rows(&[
                vec![2.0, 0.5, 0.0, 0.1],
                vec![0.5, 1.0, 0.3, 0.0],
                vec![0.0, 0.3, -1.0, 0.2],
                vec![0.1, 0.0, 0.2, -1.5],
            ]).unwrap();
            let (x, y, z) = (Vector(x), Vector(y), Vector(z));
            let xy = v.inner(&x, &y);
            prop_assert!((xy - v.inner(&y, &x)).abs() <= 1e-13 * (1.0 + xy.abs()));
            let lhs = v.inner(&x.axpy(a, &z), &y);
            let rhs = xy + a * v.inner(&z, &y);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }

        #[test]
        fn delta_scales_exactly(c in arb_vec(), cp in arb_vec(), l in 0.5f64..2.0, m in -2.0f64..-0.5) {
            let v = split22();
            let (c, cp) = (Vector(c), Vector(cp));
            let d = v.delta(&c, &cp).value;
            let ds = v.delta(&c.scale(l), &cp.scale(m)).value;
            prop_assert!((ds - l * l * m * m * d).abs() <= 1e-11 * (1.0 + ds.abs()));
        }

        #[test]
        fn perp_component_is_orthogonal(c in arb_vec(), c0 in arb_vec()) {
            let v = split22();
            let (c, c0) = (Vector(c), Vector(c0));
            prop_assume!(v.norm2(&c0).abs() > 1e-2);
            let p = v.perp_component(&c, &c0).unwrap();
            let scale = 1.0 + v.inner(&c, &c0).abs() + v.norm2(&c0).abs();
            prop_assert!(v.inner(&p, &c0).abs() <= 1e-12 * scale * (1.0 + c.coord_norm() * c0.coord_norm()));
        }

        #[test]
        fn normalize_is_scale_invariant(c in arb_vec(), l in 0.1f64..10.0) {
            let v = split22();
            let c = Vector(c);
            prop_assume!(v.norm2(&c).abs() > 1e-2);
            let a = v.normalize(&c).unwrap();
            let b = v.normalize(&c.scale(l)).unwrap();
            // cancellation in (c,c) is amplified by |c|^2 / |(c,c)|
            let cond = c.coord_norm().powi(2) / v.norm2(&c).abs();
            for (x, y) in a.0.iter().zip(&b.0) {
                prop_assert!((x - y).abs() < 1e-13 * cond * (1.0 + x.abs()));
            }
            prop_assert!((v.norm2(&a) - sgn(v.norm2(&c))).abs() < 1e-13 * cond * cond);
        }
    }
}
