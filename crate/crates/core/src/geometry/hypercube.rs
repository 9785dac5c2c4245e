//! Configurations of `r` pairs `(C_j, C_j')` and the geodesic hypercube
//! `span{B_1(s_1), …, B_r(s_r)}` they span.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::incidence::{null_parameter, validate_incidence};
use crate::quadspace::{InnerProductSpace, Vector};

/// Outcome of [`validate_pairs`].
#[derive(Clone, Debug, PartialEq)]
pub struct PairReport {
    /// Every vertex `span{C_I}` is a negative `r`-plane.
    pub vertices_negative: bool,
    /// All vertex planes share a component.
    pub same_component: bool,
    /// Every projection away from one vector passes the `r - 1` checks.
    pub projections_pass: bool,
    pub pass: bool,
    pub failures: Vec<String>,
}

/// Orthonormal frame `[b_1 … b_r] P^{-1/2}` of a negative `r`-plane,
/// `P = -Gram(b)`, symmetric root.
pub fn orthonormal_rframe(space: &InnerProductSpace, bs: &[&Vector]) -> Result<Vec<Vector>> {
    let p = -space.gram_of(bs);
    let eig = p.symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::NotNegativePlane);
    }
    let r = bs.len();
    let inv = DVector::from_iterator(r, eig.eigenvalues.iter().map(|l| 1.0 / l.sqrt()));
    let m = &eig.eigenvectors * DMatrix::from_diagonal(&inv) * eig.eigenvectors.transpose();
    Ok((0..r)
        .map(|j| {
            let mut z = Vector::zeros(space.dim());
            for (i, b) in bs.iter().enumerate() {
                z = z.axpy(m[(i, j)], b);
            }
            z
        })
        .collect())
}

/// `det((F1, F2))` for two frames.
fn pairing_det(space: &InnerProductSpace, f1: &[Vector], f2: &[Vector]) -> f64 {
    let r = f1.len();
    DMatrix::from_fn(r, r, |i, j| space.inner(&f1[i], &f2[j])).determinant()
}

/// Restriction of the form to `c^⊥` in a Euclidean-orthonormal basis of that
/// hyperplane, with a map taking vectors of `c^⊥` to coordinates.
pub(crate) struct Complement {
    pub(crate) space: InnerProductSpace,
    pub(crate) basis: DMatrix<f64>,
}

impl Complement {
    pub(crate) fn new(space: &InnerProductSpace, c: &Vector) -> Result<Self> {
        let n = space.dim();
        let row = DMatrix::from_row_slice(1, n, &space.lower(c));
        // Eigenvectors of rowᵀrow with zero eigenvalue span ker(row).
        let svd = nalgebra::linalg::SVD::new(row.transpose() * &row, true, true);
        let u = svd.u.ok_or(Error::SingularGram)?;
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
        let basis = DMatrix::from_fn(n, n - 1, |i, j| u[(i, idx[j])]);
        let gram = basis.transpose() * space.gram() * &basis;
        let gram = (&gram + gram.transpose()) * 0.5;
        Ok(Complement {
            space: InnerProductSpace::new(gram)?,
            basis,
        })
    }

    pub(crate) fn coords(&self, v: &Vector) -> Vector {
        let y = self.basis.transpose() * DVector::from_vec(v.0.clone());
        Vector::new(y.iter().copied().collect())
    }
}

/// Checks a configuration of `r ≥ 1` pairs: every vertex plane is negative,
/// all vertices lie on one component, and for each vector `c` of a pair the
/// remaining pairs projected to `c^⊥` pass the same checks one level down
/// (the four-vector incidence conditions at `r - 1 = 2`).
pub fn validate_pairs(space: &InnerProductSpace, pairs: &[(Vector, Vector)]) -> Result<PairReport> {
    let r = pairs.len();
    if r == 0 {
        return Err(Error::InvalidInput("empty pair list".into()));
    }
    for (c, cp) in pairs {
        for v in [c, cp] {
            if v.dim() != space.dim() {
                return Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    got: v.dim(),
                });
            }
        }
    }
    let mut failures = Vec::new();

    let mut vertices_negative = true;
    let mut frames = Vec::with_capacity(1 << r);
    for mask in 0..(1usize << r) {
        let bs: Vec<&Vector> = (0..r)
            .map(|j| if mask >> j & 1 == 0 { &pairs[j].0 } else { &pairs[j].1 })
            .collect();
        match orthonormal_rframe(space, &bs) {
            Ok(f) => frames.push(f),
            Err(_) => {
                vertices_negative = false;
                failures.push(format!("vertex {mask:0r$b} is not a negative plane"));
            }
        }
    }
    let mut same_component = vertices_negative;
    if vertices_negative {
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        for (k, f) in frames.iter().enumerate().skip(1) {
            let d = pairing_det(space, &frames[0], f);
            if !(d * sign > 1e-12) {
                same_component = false;
                failures.push(format!("vertex {k:0r$b} lies on another component"));
            }
        }
    }

    let mut projections_pass = true;
    if r == 1 {
        if !(space.inner(&pairs[0].0, &pairs[0].1) < 0.0) {
            projections_pass = false;
            failures.push("(C, C') is not negative".into());
        }
    } else {
        for j in 0..r {
            for c in [&pairs[j].0, &pairs[j].1] {
                let comp = Complement::new(space, c)?;
                let rest: Vec<(Vector, Vector)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, (a, b))| -> Result<_> {
                        Ok((
                            comp.coords(&space.perp_component(a, c)?),
                            comp.coords(&space.perp_component(b, c)?),
                        ))
                    })
                    .collect::<Result<_>>()?;
                let ok = if rest.len() == 2 {
                    validate_incidence(&comp.space, &rest[0].0, &rest[1].0, &rest[0].1, &rest[1].1)
                        .map(|rep| rep.pass)
                        .unwrap_or(false)
                } else {
                    validate_pairs(&comp.space, &rest).map(|rep| rep.pass).unwrap_or(false)
                };
                if !ok {
                    projections_pass = false;
                    failures.push(format!("projection away from a vector of pair {} fails", j + 1));
                }
            }
        }
    }

    Ok(PairReport {
        vertices_negative,
        same_component,
        projections_pass,
        pass: failures.is_empty(),
        failures,
    })
}

/// The hypercube chart of a validated pair configuration.
#[derive(Clone, Debug)]
pub struct HypercubeChart {
    space: InnerProductSpace,
    pairs: Vec<(Vector, Vector)>,
}

impl HypercubeChart {
    pub fn new(space: InnerProductSpace, pairs: Vec<(Vector, Vector)>) -> Result<Self> {
        let report = validate_pairs(&space, &pairs)?;
        if !report.pass {
            return Err(Error::Incidence(report.failures.join("; ")));
        }
        Ok(HypercubeChart { space, pairs })
    }

    /// Skips validation; the caller guarantees every point is a negative plane.
    pub fn unchecked(space: InnerProductSpace, pairs: Vec<(Vector, Vector)>) -> Self {
        HypercubeChart { space, pairs }
    }

    pub fn space(&self) -> &InnerProductSpace {
        &self.space
    }

    pub fn pairs(&self) -> &[(Vector, Vector)] {
        &self.pairs
    }

    pub fn rank(&self) -> usize {
        self.pairs.len()
    }

    /// Orthonormal frame at `s ∈ [0,1]^r`.
    pub fn point(&self, s: &[f64]) -> Result<Vec<Vector>> {
        let bs: Vec<Vector> = self
            .pairs
            .iter()
            .zip(s)
            .map(|((c, cp), &sj)| Vector::lincomb(1.0 - sj, c, sj, cp))
            .collect();
        let refs: Vec<&Vector> = bs.iter().collect();
        orthonormal_rframe(&self.space, &refs)
    }

    /// The point where every `(x, B_j(s_j))` vanishes, if it lies in the cube.
    pub fn intersection(&self, x: &Vector) -> Option<Vec<f64>> {
        self.pairs
            .iter()
            .map(|(c, cp)| null_parameter(self.space.inner(x, c), self.space.inner(x, cp)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;
    use crate::geometry::incidence::phi_r;

    #[test]
    fn rframe_is_orthonormal() {
        let sp = InnerProductSpace::diagonal(&[1.0, 1.0, 1.0, -1.0, -1.0, -1.0]).unwrap();
        let (_, pairs) = fixture::rank3_config();
        let bs: Vec<&Vector> = pairs.iter().map(|p| &p.0).collect();
        let f = orthonormal_rframe(&sp, &bs).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { -1.0 } else { 0.0 };
                assert!((sp.inner(&f[i], &f[j]) - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn rank2_agrees_with_four_vector_checks() {
        let c = fixture::canonical_config();
        let pairs = vec![(c.c1.clone(), c.c1p.clone()), (c.c2.clone(), c.c2p.clone())];
        let rep = validate_pairs(c.space(), &pairs).unwrap();
        assert!(rep.vertices_negative && rep.same_component);
        let ch = HypercubeChart::unchecked(c.space().clone(), pairs);
        let sc = crate::geometry::SurfaceChart::new(c.clone()).unwrap();
        let a = ch.point(&[0.3, 0.8]).unwrap();
        let b = sc.chart_point(0.3, 0.8).unwrap();
        assert!((&a[0] - &b.zeta1).coord_norm() < 1e-13);
        assert!((&a[1] - &b.zeta2).coord_norm() < 1e-13);
    }

    #[test]
    fn rank3_fixture_validates() {
        let (sp, pairs) = fixture::rank3_config();
        let rep = validate_pairs(&sp, &pairs).unwrap();
        assert!(rep.pass, "{:?}", rep.failures);
        let bad = vec![pairs[0].clone(), pairs[0].clone(), pairs[2].clone()];
        assert!(!validate_pairs(&sp, &bad).unwrap().pass);
    }

    #[test]
    fn single_intersection() {
        let (sp, pairs) = fixture::rank3_config();
        let ch = HypercubeChart::new(sp.clone(), pairs.clone()).unwrap();
        let mut hits = 0;
        for x in fixture::sample_vectors_dim(5, 6, 20000, 2.0) {
            let p = phi_r(&sp, &x, &pairs);
            match ch.intersection(&x) {
                Some(s) => {
                    assert!(p != 0.0);
                    let f = ch.point(&s).unwrap();
                    let r: f64 = f.iter().map(|z| sp.inner(&x, z).powi(2)).sum();
                    assert!(r < 1e-20);
                    hits += 1;
                }
                None => assert_eq!(p, 0.0),
            }
        }
        assert!(hits > 20);
    }
}
