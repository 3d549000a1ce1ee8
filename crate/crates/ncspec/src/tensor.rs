//! Balanced tensor products `X ⊗_A Y`, modelled as the plain tensor product
//! modulo the span of `x·a ⊗ y − x ⊗ a·y`, and the four products the
//! extension procedure works in: `E⊗_A E`, `Ω¹⊗_A E`, `E⊗_A Ω¹` and
//! `E⊗_A Ω¹⊗_A E`.

use crate::connection::Geometry;
use crate::linalg::{
    gram_factor, hermitian_eigen, identity, kron, kron_vec, matmul, op_norm, quotient_by_maps,
    span_closure, unit, GramFactor, Mat, Quotient, Tolerance,
};

/// `X ⊗_A Y` for the actions of a generating set: `right[i]` is the right
/// action of the i-th generator on `X`, `left[i]` its left action on `Y`.
pub fn balanced_tensor(right: &[Mat], left: &[Mat], dx: usize, dy: usize, tol: Tolerance) -> Quotient {
    assert_eq!(right.len(), left.len(), "one right and one left action per generator");
    let (ix, iy) = (identity(dx), identity(dy));
    let blocks: Vec<Mat> = right
        .iter()
        .zip(left)
        .map(|(r, l)| kron(r, &iy) - kron(&ix, l))
        .collect();
    quotient_by_maps(&blocks, dx * dy, tol)
}

/// Dimension of `X ⊗_A Y` by enumerating every relation vector
/// `x_b·a ⊗ y_c − x_b ⊗ a·y_c` over a full basis `a` of the algebra and the
/// standard bases of `X` and `Y`, followed by a singular value rank count.
pub fn balanced_dimension_by_enumeration(right: &[Mat], left: &[Mat], dx: usize, dy: usize, tol: Tolerance) -> usize {
    let mut vectors = Vec::new();
    for (r, l) in right.iter().zip(left) {
        for b in 0..dx {
            for c in 0..dy {
                let v = kron_vec(&r.column(b).into_owned(), &unit(dy, c))
                    - kron_vec(&unit(dx, b), &l.column(c).into_owned());
                vectors.push(v);
            }
        }
    }
    let span = span_closure(&vectors, dx * dy, tol);
    dx * dy - span.dim()
}

/// The balanced products used by the extension procedure for one geometry.
/// Representatives live in the orthogonal complement of the relations.
#[derive(Debug, Clone)]
pub struct TensorSpaces {
    pub n: usize,
    pub r: usize,
    /// `E ⊗_A E` inside `C^N ⊗ C^N`.
    pub ee: Quotient,
    /// `Ω¹ ⊗_A E` inside `C^r ⊗ C^N`.
    pub oe: Quotient,
    /// `E ⊗_A Ω¹` inside `C^N ⊗ C^r`.
    pub eo: Quotient,
    /// `E ⊗_A Ω¹ ⊗_A E` inside `C^N ⊗ C^r ⊗ C^N`, computed as
    /// `(E ⊗_A Ω¹) ⊗_A E`.
    pub eoe: Quotient,
    /// The form `⟨ξ⊗η, ξ′⊗η′⟩ = ⟨η, ⟨ξ,ξ′⟩ η′⟩` on `C^N ⊗ C^N`, with the
    /// left slot paired through `J`: `⟨ξ,ξ′⟩ := ⟨J*ξ, J*ξ′⟩_A`.
    pub gram: Mat,
}

impl TensorSpaces {
    pub fn new(geo: &Geometry) -> Self {
        let tol = geo.tol;
        let n = geo.dim();
        let r = geo.forms.dim();
        let gens = geo.data.algebra.star_generators();
        let rights: Vec<Mat> = gens.iter().map(|a| geo.right.of(a)).collect();
        let lambdas: Vec<Mat> = gens.iter().map(|a| geo.forms.left_matrix(a)).collect();
        let rhos: Vec<Mat> = gens.iter().map(|a| geo.forms.right_matrix(a)).collect();

        let ee = balanced_tensor(&rights, &gens, n, n, tol);
        let (oe, eo, eoe) = if r == 0 {
            let empty = quotient_by_maps(&[], 0, tol);
            (empty.clone(), empty.clone(), empty)
        } else {
            let oe = balanced_tensor(&rhos, &gens, r, n, tol);
            let eo = balanced_tensor(&rights, &lambdas, n, r, tol);
            let b = &eo.section;
            let in_n = identity(n);
            let eo_right: Vec<Mat> = rhos
                .iter()
                .map(|rho| b.adjoint() * matmul(&kron(&in_n, rho), b))
                .collect();
            let x = balanced_tensor(&eo_right, &gens, eo.dim(), n, tol);
            let eoe = Quotient {
                section: matmul(&kron(b, &in_n), &x.section),
            };
            (oe, eo, eoe)
        };

        let jt = geo.real.j.adjoint();
        let transported: Vec<crate::linalg::Vector> =
            (0..n).map(|i| jt.apply(&unit(n, i))).collect();
        let module = &geo.module;
        let values: Vec<Vec<Mat>> = (0..module.rank())
            .map(|k| transported.iter().map(|v| module.apply(k, v)).collect())
            .collect();
        let mut gram = Mat::zeros(n * n, n * n);
        for i in 0..n {
            for k in 0..n {
                let mut block = Mat::zeros(n, n);
                for vals in &values {
                    block += &vals[i] * vals[k].adjoint();
                }
                gram.view_mut((i * n, k * n), (n, n)).copy_from(&block);
            }
        }
        Self {
            n,
            r,
            ee,
            oe,
            eo,
            eoe,
            gram,
        }
    }

    /// The form restricted to representatives of `E ⊗_A E`.
    pub fn quotient_gram(&self) -> Mat {
        let b = &self.ee.section;
        b.adjoint() * matmul(&self.gram, b)
    }

    /// Largest `‖G v‖` over relation vectors `v`: zero when the form
    /// descends to the balanced product.
    pub fn gram_descent_residual(&self) -> f64 {
        if self.ee.relation_dim() == 0 {
            return 0.0;
        }
        op_norm(&self.ee.relation_part(&self.gram))
    }

    /// Orthonormal coordinates for the form on `E ⊗_A E`.
    pub fn orthonormalizer(&self, tol: Tolerance) -> GramFactor {
        gram_factor(&self.quotient_gram(), tol)
    }

    /// Smallest eigenvalue of the form on representatives.
    pub fn gram_min_eigenvalue(&self) -> f64 {
        hermitian_eigen(&self.quotient_gram())
            .0
            .first()
            .copied()
            .unwrap_or(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn balanced_products_of_two_point_space() {
        let ex = gallery::by_name("two-point", tol()).unwrap();
        let spaces = TensorSpaces::new(&ex.geometry);
        assert_eq!((spaces.ee.dim(), spaces.oe.dim(), spaces.eo.dim(), spaces.eoe.dim()), (8, 4, 4, 8));
    }

    #[test]
    fn matrix_algebra_module_is_free_of_rank_two() {
        // E = M₂ ⊗ C² is A² for A = M₂, so E ⊗_A E = E² has dimension 16.
        let ex = gallery::by_name("m2", tol()).unwrap();
        let spaces = TensorSpaces::new(&ex.geometry);
        assert_eq!(spaces.ee.dim(), 16);
        assert!(spaces.gram_descent_residual() < 1e-12);
        assert!(spaces.gram_min_eigenvalue() > 0.5);
    }

    #[test]
    fn generators_give_the_same_quotient_as_a_full_basis() {
        let ex = gallery::by_name("m2", tol()).unwrap();
        let g = &ex.geometry;
        let n = g.dim();
        let basis = &g.data.algebra.basis;
        let rights: Vec<Mat> = basis.iter().map(|a| g.right.of(a)).collect();
        let full = balanced_dimension_by_enumeration(&rights, basis, n, n, tol());
        assert_eq!(full, TensorSpaces::new(g).ee.dim());
    }

    #[test]
    fn scalars_balance_nothing() {
        let id = [identity(3)];
        let q = balanced_tensor(&id, &id, 3, 3, tol());
        assert_eq!(q.dim(), 9);
        assert_eq!(balanced_dimension_by_enumeration(&id, &id, 3, 3, tol()), 9);
    }
}
