//! Unital *-subalgebras of `B(C^n)` given by an explicit basis.

use crate::linalg::{
    hs_inner, identity, kron, op_norm, span_closure, unvectorize, vectorize, Mat, Tolerance, C64,
};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("generator {index} is {got}x{got2}, expected {expected}x{expected}")]
    BadGenerator {
        index: usize,
        got: usize,
        got2: usize,
        expected: usize,
    },
    #[error("operator is not in the algebra (residual {residual:.3e})")]
    NotMember { residual: f64 },
}

/// A unital *-closed matrix algebra. The basis is orthonormal for the
/// Hilbert–Schmidt inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct StarAlgebra {
    pub hilbert_dim: usize,
    pub basis: Vec<Mat>,
    /// Elements that generate the algebra together with their adjoints and
    /// the identity. Relations of balanced tensor products only need these.
    pub generators: Vec<Mat>,
}

/// An element of an algebra with its basis coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub coeffs: Vec<C64>,
    pub op: Mat,
}

impl StarAlgebra {
    /// The smallest unital *-algebra containing `generators`.
    pub fn generate(
        hilbert_dim: usize,
        generators: &[Mat],
        tol: Tolerance,
    ) -> Result<Self, AlgebraError> {
        for (index, g) in generators.iter().enumerate() {
            if g.nrows() != hilbert_dim || g.ncols() != hilbert_dim {
                return Err(AlgebraError::BadGenerator {
                    index,
                    got: g.nrows(),
                    got2: g.ncols(),
                    expected: hilbert_dim,
                });
            }
        }
        let n2 = hilbert_dim * hilbert_dim;
        let mut seeds = vec![vectorize(&identity(hilbert_dim))];
        seeds.extend(generators.iter().map(vectorize));
        let mut span = span_closure(&seeds, n2, tol);
        loop {
            let ops: Vec<Mat> = (0..span.dim())
                .map(|k| unvectorize(span.basis.column(k).as_slice(), hilbert_dim, hilbert_dim))
                .collect();
            let mut cands: Vec<_> = (0..span.dim()).map(|k| span.column(k)).collect();
            for x in &ops {
                cands.push(vectorize(&x.adjoint()));
                for y in &ops {
                    cands.push(vectorize(&(x * y)));
                }
            }
            let next = span_closure(&cands, n2, tol);
            if next.dim() == span.dim() {
                break;
            }
            span = next;
        }
        let basis = (0..span.dim())
            .map(|k| unvectorize(span.basis.column(k).as_slice(), hilbert_dim, hilbert_dim))
            .collect();
        Ok(Self {
            hilbert_dim,
            basis,
            generators: generators.to_vec(),
        })
    }

    /// The span of `elements` and the identity, taken as it is: closure
    /// under products and adjoints is not enforced, see
    /// [`StarAlgebra::closure_residual`].
    pub fn spanned_by(hilbert_dim: usize, elements: &[Mat], generators: Vec<Mat>, tol: Tolerance) -> Self {
        let mut seeds = vec![vectorize(&identity(hilbert_dim))];
        seeds.extend(elements.iter().map(vectorize));
        let span = span_closure(&seeds, hilbert_dim * hilbert_dim, tol);
        let basis = (0..span.dim())
            .map(|k| unvectorize(span.basis.column(k).as_slice(), hilbert_dim, hilbert_dim))
            .collect();
        Self {
            hilbert_dim,
            basis,
            generators,
        }
    }

    /// `C·1` on `C^n`.
    pub fn scalars(hilbert_dim: usize) -> Self {
        let s = C64::new(1.0 / (hilbert_dim as f64).sqrt(), 0.0);
        Self {
            hilbert_dim,
            basis: vec![identity(hilbert_dim) * s],
            generators: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Generators and their adjoints: every element of the algebra is a
    /// polynomial in these.
    pub fn star_generators(&self) -> Vec<Mat> {
        if self.generators.is_empty() {
            return self.basis.clone();
        }
        let mut out = Vec::with_capacity(2 * self.generators.len());
        for g in &self.generators {
            out.push(g.clone());
            if crate::linalg::frobenius(&(g - g.adjoint())) > 0.0 {
                out.push(g.adjoint());
            }
        }
        out
    }

    /// True when the algebra is all of `B(C^n)`.
    pub fn is_full_matrix_algebra(&self) -> bool {
        self.dim() == self.hilbert_dim * self.hilbert_dim
    }

    /// `A₁ ⊗ A₂` acting on `H₁ ⊗ H₂`.
    pub fn tensor(&self, other: &StarAlgebra) -> StarAlgebra {
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                basis.push(kron(a, b));
            }
        }
        let (one1, one2) = (identity(self.hilbert_dim), identity(other.hilbert_dim));
        let generators = self
            .generators
            .iter()
            .map(|g| kron(g, &one2))
            .chain(other.generators.iter().map(|h| kron(&one1, h)))
            .collect();
        StarAlgebra {
            hilbert_dim: self.hilbert_dim * other.hilbert_dim,
            basis,
            generators,
        }
    }

    /// Coordinates of `x` in the basis, or the distance to the algebra.
    pub fn membership(&self, x: &Mat, tol: Tolerance) -> Result<AlgebraElement, AlgebraError> {
        let coeffs: Vec<C64> = self.basis.iter().map(|b| hs_inner(b, x)).collect();
        let op = self.realize(&coeffs);
        let residual = op_norm(&(x - &op));
        if residual <= tol.eq_tol {
            Ok(AlgebraElement { coeffs, op })
        } else {
            Err(AlgebraError::NotMember { residual })
        }
    }

    pub fn realize(&self, coeffs: &[C64]) -> Mat {
        let n = self.hilbert_dim;
        let mut out = Mat::zeros(n, n);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            out += b * *c;
        }
        out
    }

    /// Matrix of `x ↦ a x` on basis coordinates.
    pub fn left_multiplication(&self, a: &Mat) -> Mat {
        let d = self.dim();
        Mat::from_fn(d, d, |k, j| hs_inner(&self.basis[k], &(a * &self.basis[j])))
    }

    /// Largest deviation from closure under products and adjoints.
    pub fn closure_residual(&self, tol: Tolerance) -> f64 {
        let mut worst: f64 = 0.0;
        let dist = |x: &Mat| match self.membership(x, tol) {
            Ok(_) => 0.0,
            Err(AlgebraError::NotMember { residual }) => residual,
            Err(_) => f64::INFINITY,
        };
        worst = worst.max(dist(&identity(self.hilbert_dim)));
        for a in &self.basis {
            worst = worst.max(dist(&a.adjoint()));
            for b in &self.basis {
                worst = worst.max(dist(&(a * b)));
            }
        }
        worst
    }

    /// Smallest singular value of the realization map; zero would mean a
    /// nonzero coefficient vector acting as the zero operator.
    pub fn faithfulness_margin(&self) -> f64 {
        if self.basis.is_empty() {
            return 0.0;
        }
        let cols: Vec<_> = self.basis.iter().map(vectorize).collect();
        let m = Mat::from_columns(&cols);
        crate::linalg::left_singular(&m).0.last().copied().unwrap_or(0.0)
    }

    /// A random element with coefficients uniform in the unit square.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Mat {
        let coeffs: Vec<C64> = (0..self.dim())
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        self.realize(&coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_real_rows, real, ONE, ZERO};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn identity_generates_scalars() {
        let a = StarAlgebra::generate(2, &[identity(2)], tol()).unwrap();
        assert_eq!(a.dim(), 1);
    }

    #[test]
    fn projection_generates_diagonal_algebra() {
        let p = from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let a = StarAlgebra::generate(2, &[p], tol()).unwrap();
        assert_eq!(a.dim(), 2);
        let gamma = crate::linalg::diag(&[ONE, -ONE]);
        assert!(a.membership(&gamma, tol()).is_ok());
        let flip = from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(matches!(
            a.membership(&flip, tol()),
            Err(AlgebraError::NotMember { .. })
        ));
    }

    #[test]
    fn matrix_unit_generates_full_algebra() {
        let e12 = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let a = StarAlgebra::generate(2, &[e12], tol()).unwrap();
        assert_eq!(a.dim(), 4);
        assert!(a.is_full_matrix_algebra());
        let m2m2 = a.tensor(&a);
        assert_eq!(m2m2.dim(), 16);
    }

    #[test]
    fn tensor_of_diagonals() {
        let p = from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let a = StarAlgebra::generate(2, &[p], tol()).unwrap();
        let aa = a.tensor(&a);
        assert_eq!(aa.dim(), 4);
        assert!(aa.faithfulness_margin() > 0.5);
        assert!(aa.closure_residual(tol()) < 1e-12);
        let one = StarAlgebra::scalars(1);
        assert_eq!(one.tensor(&a).dim(), 2);
    }

    #[test]
    fn membership_of_basis_element_is_unit_vector() {
        let p = from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let a = StarAlgebra::generate(2, &[p], tol()).unwrap();
        let el = a.membership(&a.basis[1], tol()).unwrap();
        assert!((el.coeffs[1] - ONE).norm() < 1e-12);
        assert!((el.coeffs[0] - ZERO).norm() < 1e-12);
        let id = a.membership(&identity(2), tol()).unwrap();
        assert!(crate::linalg::frobenius(&(id.op - identity(2) * real(1.0))) < 1e-12);
    }

    #[test]
    fn bad_generator_shape_is_rejected() {
        assert!(StarAlgebra::generate(2, &[identity(3)], tol()).is_err());
    }
}
