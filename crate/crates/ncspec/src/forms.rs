//! Noncommutative one-forms `Ω¹ = span{a[D,b]}`, the Dirac differential and
//! the right actions induced by a real structure.

use crate::algebra::StarAlgebra;
use crate::checks::CheckList;
use crate::linalg::{
    hs_inner, kron, op_norm, span_closure, unvectorize, vectorize, AntilinearOp, Closeness, Mat,
    Tolerance, Vector,
};
use crate::spectral::{order_conditions, N1Data, RealStructure};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormsError {
    #[error("order-zero condition fails (residual {residual:.3e}): right action does not commute with A")]
    OrderZero { residual: f64 },
    #[error("first-order condition fails (residual {residual:.3e}): right action does not commute with one-forms")]
    FirstOrder { residual: f64 },
}

/// The bimodule of one-forms with a Hilbert–Schmidt orthonormal basis.
/// Elements are handled through their coordinates in that basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForms {
    pub hilbert_dim: usize,
    pub basis: Vec<Mat>,
    dirac: Mat,
}

impl OneForms {
    pub fn new(data: &N1Data, tol: Tolerance) -> Self {
        let n = data.dim();
        let d = &data.dirac;
        let basis = &data.algebra.basis;
        let mut vectors = Vec::with_capacity(basis.len() * basis.len());
        for b in basis {
            let db = d * b - b * d;
            for a in basis {
                vectors.push(vectorize(&(a * &db)));
            }
        }
        let span = span_closure(&vectors, n * n, tol);
        let basis = (0..span.dim())
            .map(|k| unvectorize(span.basis.column(k).as_slice(), n, n))
            .collect();
        Self {
            hilbert_dim: n,
            basis,
            dirac: d.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coords(&self, x: &Mat) -> Vector {
        Vector::from_iterator(self.dim(), self.basis.iter().map(|w| hs_inner(w, x)))
    }

    pub fn realize(&self, coords: &Vector) -> Mat {
        let n = self.hilbert_dim;
        let mut out = Mat::zeros(n, n);
        for (c, w) in coords.iter().zip(&self.basis) {
            out += w * *c;
        }
        out
    }

    /// Operator-norm distance from `x` to the span of one-forms.
    pub fn distance(&self, x: &Mat) -> f64 {
        op_norm(&(x - self.realize(&self.coords(x))))
    }

    /// Coordinates of `da = [D, a]`.
    pub fn differential(&self, a: &Mat) -> Vector {
        self.coords(&(&self.dirac * a - a * &self.dirac))
    }

    /// Matrix of `ω ↦ aω` on coordinates.
    pub fn left_matrix(&self, a: &Mat) -> Mat {
        let cols: Vec<Vector> = self.basis.iter().map(|w| self.coords(&(a * w))).collect();
        self.columns(&cols)
    }

    /// Matrix of `ω ↦ ωa` on coordinates.
    pub fn right_matrix(&self, a: &Mat) -> Mat {
        let cols: Vec<Vector> = self.basis.iter().map(|w| self.coords(&(w * a))).collect();
        self.columns(&cols)
    }

    /// `ω ↦ ω*` on coordinates, an antilinear map.
    pub fn star(&self) -> AntilinearOp {
        let cols: Vec<Vector> = self.basis.iter().map(|w| self.coords(&w.adjoint())).collect();
        AntilinearOp::new(self.columns(&cols))
    }

    /// `N × rN` matrix sending `e_k ⊗ e_i` (index `k·N + i`) to `W_k e_i`:
    /// one-forms acting on vectors.
    pub fn action_on_vectors(&self) -> Mat {
        let n = self.hilbert_dim;
        let mut out = Mat::zeros(n, self.dim() * n);
        for (k, w) in self.basis.iter().enumerate() {
            out.view_mut((0, k * n), (n, n)).copy_from(w);
        }
        out
    }

    /// Largest distance of `aω`, `ωa` and `ω*` from the span, over the
    /// algebra basis and form basis.
    pub fn bimodule_residual(&self, algebra: &StarAlgebra) -> f64 {
        let mut worst: f64 = 0.0;
        for w in &self.basis {
            worst = worst.max(self.distance(&w.adjoint()));
            for a in &algebra.basis {
                worst = worst.max(self.distance(&(a * w)));
                worst = worst.max(self.distance(&(w * a)));
            }
        }
        worst
    }

    fn columns(&self, cols: &[Vector]) -> Mat {
        if cols.is_empty() {
            return Mat::zeros(0, 0);
        }
        Mat::from_columns(cols)
    }
}

/// The right actions `ξ·b = J b* J* ξ` of the algebra and of one-forms on
/// `H`. Construction checks that they commute with the left actions.
#[derive(Debug, Clone, PartialEq)]
pub struct RightActions {
    j: AntilinearOp,
}

impl RightActions {
    pub fn new(data: &N1Data, rs: &RealStructure, tol: Tolerance) -> Result<Self, FormsError> {
        let (zero, first) = order_conditions(data, rs);
        if zero > tol.eq_tol {
            return Err(FormsError::OrderZero { residual: zero });
        }
        if first > tol.eq_tol {
            return Err(FormsError::FirstOrder { residual: first });
        }
        Ok(Self { j: rs.j.clone() })
    }

    /// The operator `J x* J*` by which `x` (an algebra element or one-form)
    /// acts from the right.
    pub fn of(&self, x: &Mat) -> Mat {
        self.j.conjugate(&x.adjoint())
    }
}

/// Splitting of the one-forms of a product into the summands
/// `Ω¹₁ ⊗ A₂` and `γ₁A₁ ⊗ Ω¹₂`.
#[derive(Debug, Clone)]
pub struct ProductOneForms {
    pub product: OneForms,
    /// Vectorized operator bases of the two summands.
    pub first: Mat,
    pub second: Mat,
    pub checks: CheckList,
}

/// Computes the one-forms of the product triple and certifies the splitting
/// together with the product rule `[D, a₁⊗a₂] = [D₁,a₁]⊗a₂ + γ₁a₁⊗[D₂,a₂]`.
pub fn product_one_forms(
    d1: &N1Data,
    d2: &N1Data,
    product: &N1Data,
    tol: Tolerance,
) -> ProductOneForms {
    let f1 = OneForms::new(d1, tol);
    let f2 = OneForms::new(d2, tol);
    let fp = OneForms::new(product, tol);
    let n = product.dim();
    let mut first = Vec::new();
    for w in &f1.basis {
        for b in &d2.algebra.basis {
            first.push(vectorize(&kron(w, b)));
        }
    }
    let mut second = Vec::new();
    for a in &d1.algebra.basis {
        let ga = &d1.gamma * a;
        for w in &f2.basis {
            second.push(vectorize(&kron(&ga, w)));
        }
    }
    let s1 = span_closure(&first, n * n, tol);
    let s2 = span_closure(&second, n * n, tol);
    let mut checks = CheckList::new();

    let expected = s1.dim() + s2.dim();
    checks.record(
        "forms.product-dimension",
        "dim of product one-forms = dim(first summand) + dim(second summand)",
        Closeness::new(fp.dim().abs_diff(expected) as f64, tol.eq_tol),
    );
    let overlap = if s1.dim() == 0 || s2.dim() == 0 {
        0.0
    } else {
        op_norm(&(s1.basis.adjoint() * &s2.basis))
    };
    checks.record(
        "forms.product-direct",
        "the two summands intersect trivially (largest principal cosine)",
        Closeness::new(overlap, tol.eq_tol),
    );
    let mut contained: f64 = 0.0;
    for k in 0..s1.dim() {
        let x = unvectorize(s1.basis.column(k).as_slice(), n, n);
        contained = contained.max(fp.distance(&x));
    }
    for k in 0..s2.dim() {
        let x = unvectorize(s2.basis.column(k).as_slice(), n, n);
        contained = contained.max(fp.distance(&x));
    }
    checks.record(
        "forms.product-summands-contained",
        "both summands lie in the product one-forms",
        Closeness::new(contained, tol.eq_tol),
    );

    let mut leibniz: f64 = 0.0;
    let dd = |d: &Mat, a: &Mat| d * a - a * d;
    for a1 in &d1.algebra.basis {
        for a2 in &d2.algebra.basis {
            let lhs = dd(&product.dirac, &kron(a1, a2));
            let rhs = kron(&dd(&d1.dirac, a1), a2) + kron(&(&d1.gamma * a1), &dd(&d2.dirac, a2));
            leibniz = leibniz.max(op_norm(&(lhs - rhs)));
        }
    }
    checks.record(
        "forms.product-differential",
        "[D, a1 (x) a2] = [D1, a1] (x) a2 + gamma1 a1 (x) [D2, a2]",
        Closeness::new(leibniz, tol.eq_tol),
    );

    ProductOneForms {
        product: fp,
        first: s1.basis,
        second: s2.basis,
        checks,
    }
}

/// Coordinates in `forms` of `x ⊗ y` for each pair drawn from `xs`, `ys`,
/// as columns in the order `(i, j) ↦ i·|ys| + j`.
pub fn embedded_coords(forms: &OneForms, xs: &[Mat], ys: &[Mat]) -> Mat {
    let mut out = Mat::zeros(forms.dim(), xs.len() * ys.len());
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            out.set_column(i * ys.len() + j, &forms.coords(&kron(x, y)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::linalg::{identity, kron, ONE, ZERO};
    use approx::assert_abs_diff_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn two_point_has_two_one_forms() {
        let ex = gallery::by_name("two-point", tol()).unwrap();
        let forms = &ex.geometry.forms;
        assert_eq!(forms.dim(), 2);
        assert!(forms.bimodule_residual(&ex.geometry.data.algebra) < 1e-12);
        for w in &forms.basis {
            assert_abs_diff_eq!(forms.distance(w), 0.0, epsilon = 1e-12);
        }
        assert!(forms.distance(&identity(4)) > 0.1);
    }

    #[test]
    fn coordinates_round_trip() {
        let ex = gallery::by_name("m2", tol()).unwrap();
        let forms = &ex.geometry.forms;
        let a = &ex.geometry.data.algebra.basis[1];
        let da = forms.realize(&forms.differential(a));
        let d = &ex.geometry.data.dirac;
        assert_abs_diff_eq!(crate::linalg::op_norm(&(da - (d * a - a * d))), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn right_action_on_matrices_is_right_multiplication() {
        // J ξ = ξ*, so J a* J* is ξ ↦ ξ a, which on row-major entries of
        // ξ is 1 ⊗ aᵀ.
        let ex = gallery::by_name("m2", tol()).unwrap();
        let a = crate::linalg::from_rows(&[&[ONE, crate::linalg::I], &[ZERO, ONE * 3.0]]);
        let left = kron(&kron(&a, &identity(2)), &identity(2));
        let expected = kron(&kron(&identity(2), &a.transpose()), &identity(2));
        let got = ex.geometry.right.of(&left);
        assert_abs_diff_eq!(crate::linalg::op_norm(&(got - expected)), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn star_is_an_involution_on_coordinates() {
        let ex = gallery::by_name("two-point", tol()).unwrap();
        let star = ex.geometry.forms.star();
        let twice = star.then_antilinear(&star);
        assert_abs_diff_eq!(crate::linalg::op_norm(&(twice - identity(2))), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn product_one_forms_split() {
        let ex = gallery::by_name("two-point", tol()).unwrap();
        let d = &ex.geometry.data;
        let prod = crate::spectral::kasparov_product(d, d);
        let split = product_one_forms(d, d, &prod, tol());
        assert!(split.checks.all_pass(), "{:?}", split.checks.failures().collect::<Vec<_>>());
        assert_eq!(split.product.dim(), split.first.ncols() + split.second.ncols());
    }
}
