//! Hermitian finitely generated projective modules `E ≅ pA^m`, realized on
//! the Hilbert space itself (`E = H`) through a frame of A-linear maps.
//!
//! A frame `φ_1, …, φ_m : E → A` embeds `E` into `A^m`; the orthogonal
//! projection onto the image is right multiplication by `p ∈ M_m(A)` with
//! `p_{kl} = φ_l(e_k)`, where `e_k` are the generators mapped to `u_k p`.
//! The A-valued inner product is `⟨ξ,η⟩_A = Σ_k φ_k(ξ) φ_k(η)*`.

use crate::algebra::StarAlgebra;
use crate::checks::CheckList;
use crate::linalg::{
    hermitian_eigen, hermitian_spectrum, identity, joint_null_space, kron, matmul, op_norm, zeros, Closeness, Mat, Tolerance,
    unit, Vector, C64, ZERO,
};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModuleError {
    #[error("frame map {index} is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    FrameShape {
        index: usize,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("frame value of map {map} on basis vector {vector} is not in the algebra (residual {residual:.3e})")]
    NotInAlgebra {
        map: usize,
        vector: usize,
        residual: f64,
    },
    #[error("frame is not injective: {kernel} independent vectors are sent to zero")]
    NotInjective { kernel: usize },
    #[error("frame map {index} is not A-linear (residual {residual:.3e})")]
    NotLinear { index: usize, residual: f64 },
    #[error("grading is not a self-adjoint involution")]
    BadGrading,
}

/// `E = H` with a frame. Each frame map is stored as a `dim(A) × N` matrix
/// sending a vector to the algebra coordinates of its image.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianModule {
    pub algebra: StarAlgebra,
    pub frame: Vec<Mat>,
    /// Generators `e_k` as the columns of an `N × m` matrix.
    pub generators: Mat,
    /// `φ_k ∘ γ = σ_k φ_k`, or `None` when the map mixes the eigenspaces.
    pub parities: Vec<Option<i8>>,
    /// `values[k][i] = φ_k(e_i)` for the standard basis `e_i` of `H`.
    values: Vec<Vec<Mat>>,
}

impl HermitianModule {
    /// Builds the module from explicit frame maps and validates linearity
    /// and injectivity.
    pub fn new(
        algebra: StarAlgebra,
        frame: Vec<Mat>,
        gamma: &Mat,
        tol: Tolerance,
    ) -> Result<Self, ModuleError> {
        let n = algebra.hilbert_dim;
        let da = algebra.dim();
        for (index, f) in frame.iter().enumerate() {
            if f.nrows() != da || f.ncols() != n {
                return Err(ModuleError::FrameShape {
                    index,
                    rows: f.nrows(),
                    cols: f.ncols(),
                    expected_rows: da,
                    expected_cols: n,
                });
            }
        }
        let values: Vec<Vec<Mat>> = frame
            .iter()
            .map(|f| {
                (0..n)
                    .map(|i| algebra.realize(f.column(i).as_slice()))
                    .collect()
            })
            .collect();
        let stacked = stack_rows(&frame, n);
        let (vals, _) = hermitian_eigen(&(stacked.adjoint() * &stacked));
        let kernel = vals.iter().filter(|&&l| l <= tol.rank_tol).count();
        if kernel > 0 {
            return Err(ModuleError::NotInjective { kernel });
        }
        let pinv = inverse_positive(&(stacked.adjoint() * &stacked)) * stacked.adjoint();
        let one = algebra
            .membership(&identity(n), tol)
            .expect("the algebra is unital")
            .coeffs;
        let m = frame.len();
        let mut generators = zeros(n, m);
        for k in 0..m {
            let mut u = Vector::zeros(m * da);
            for (b, c) in one.iter().enumerate() {
                u[k * da + b] = *c;
            }
            generators.set_column(k, &(&pinv * u));
        }
        let parities = frame
            .iter()
            .map(|f| {
                let fg = f * gamma;
                if op_norm(&(&fg - f)) <= tol.eq_tol {
                    Some(1)
                } else if op_norm(&(&fg + f)) <= tol.eq_tol {
                    Some(-1)
                } else {
                    None
                }
            })
            .collect();
        let module = Self {
            algebra,
            frame,
            generators,
            parities,
            values,
        };
        for (index, residual) in module.linearity_residuals().into_iter().enumerate() {
            if residual > tol.eq_tol {
                return Err(ModuleError::NotLinear { index, residual });
            }
        }
        Ok(module)
    }

    /// Builds the module from the values `values[k][i] = φ_k(e_i)` of each
    /// frame map on the standard basis.
    pub fn from_values(
        algebra: StarAlgebra,
        values: &[Vec<Mat>],
        gamma: &Mat,
        tol: Tolerance,
    ) -> Result<Self, ModuleError> {
        let n = algebra.hilbert_dim;
        let mut frame = Vec::with_capacity(values.len());
        for (map, vals) in values.iter().enumerate() {
            if vals.len() != n {
                return Err(ModuleError::FrameShape {
                    index: map,
                    rows: algebra.dim(),
                    cols: vals.len(),
                    expected_rows: algebra.dim(),
                    expected_cols: n,
                });
            }
            let mut f = zeros(algebra.dim(), n);
            for (vector, v) in vals.iter().enumerate() {
                let coeffs = algebra
                    .membership(v, tol)
                    .map_err(|e| match e {
                        crate::algebra::AlgebraError::NotMember { residual } => ModuleError::NotInAlgebra {
                            map,
                            vector,
                            residual,
                        },
                        _ => ModuleError::NotInAlgebra {
                            map,
                            vector,
                            residual: f64::INFINITY,
                        },
                    })?
                    .coeffs;
                for (b, c) in coeffs.into_iter().enumerate() {
                    f[(b, vector)] = c;
                }
            }
            frame.push(f);
        }
        Self::new(algebra, frame, gamma, tol)
    }

    /// The frame made of every A-linear map from each eigenspace of `γ` to
    /// `A`, orthonormal in the Hilbert–Schmidt sense. The resulting Hermitian
    /// structure does not depend on the choice of orthonormal basis of these
    /// maps.
    pub fn canonical(algebra: StarAlgebra, gamma: &Mat, tol: Tolerance) -> Result<Self, ModuleError> {
        let n = algebra.hilbert_dim;
        if op_norm(&(gamma - gamma.adjoint())) > tol.eq_tol
            || op_norm(&(gamma * gamma - identity(n))) > tol.eq_tol
        {
            return Err(ModuleError::BadGrading);
        }
        let (vals, vecs) = hermitian_eigen(gamma);
        let da = algebra.dim();
        let gens = algebra.star_generators();
        let lefts: Vec<Mat> = gens.iter().map(|a| algebra.left_multiplication(a)).collect();
        let mut frame = Vec::new();
        for sign in [1.0, -1.0] {
            let idx: Vec<usize> = (0..n).filter(|&k| (vals[k] - sign).abs() < 0.5).collect();
            if idx.is_empty() {
                continue;
            }
            let q = Mat::from_columns(&idx.iter().map(|&k| vecs.column(k).into_owned()).collect::<Vec<_>>());
            let ns = idx.len();
            // φ = S Q*, with S (dim A × n_σ) solving S (Q* a Q) = L_a S.
            let blocks: Vec<Mat> = gens
                .iter()
                .zip(&lefts)
                .map(|(a, la)| {
                    let restricted = q.adjoint() * a * &q;
                    kron(&restricted.transpose(), &identity(da)) - kron(&identity(ns), la)
                })
                .collect();
            let null = joint_null_space(&blocks, da * ns, tol);
            for c in 0..null.ncols() {
                let s = Mat::from_column_slice(da, ns, null.column(c).as_slice());
                frame.push(s * q.adjoint());
            }
        }
        Self::new(algebra, frame, gamma, tol)
    }

    pub fn rank(&self) -> usize {
        self.frame.len()
    }

    pub fn dim(&self) -> usize {
        self.algebra.hilbert_dim
    }

    /// `φ_k(e_i)` as an operator.
    pub fn value(&self, k: usize, i: usize) -> &Mat {
        &self.values[k][i]
    }

    /// `φ_k(ξ)` as an operator.
    pub fn apply(&self, k: usize, xi: &Vector) -> Mat {
        self.algebra.realize((&self.frame[k] * xi).as_slice())
    }

    /// `⟨ξ, η⟩_A = Σ_k φ_k(ξ) φ_k(η)*`.
    pub fn inner(&self, xi: &Vector, eta: &Vector) -> Mat {
        let n = self.dim();
        let mut out = zeros(n, n);
        for k in 0..self.rank() {
            out += self.apply(k, xi) * self.apply(k, eta).adjoint();
        }
        out
    }

    /// `⟨e_i, e_j⟩_A` on standard basis vectors.
    pub fn inner_basis(&self, i: usize, j: usize) -> Mat {
        let n = self.dim();
        let mut out = zeros(n, n);
        for k in 0..self.rank() {
            out += &self.values[k][i] * self.values[k][j].adjoint();
        }
        out
    }

    /// The projection `p` as the operator on `H^m` with blocks `p_{kl}`.
    pub fn projection(&self) -> Mat {
        let (n, m) = (self.dim(), self.rank());
        let mut p = zeros(m * n, m * n);
        for k in 0..m {
            let ek = self.generators.column(k).into_owned();
            for l in 0..m {
                p.view_mut((k * n, l * n), (n, n)).copy_from(&self.apply(l, &ek));
            }
        }
        p
    }

    /// `‖φ_k(aξ) − aφ_k(ξ)‖` maximized over generators `a`, for each `k`.
    fn linearity_residuals(&self) -> Vec<f64> {
        let gens = self.algebra.star_generators();
        let n = self.dim();
        (0..self.rank())
            .map(|k| {
                let mut worst: f64 = 0.0;
                for a in &gens {
                    for i in 0..n {
                        let lhs = self.apply(k, &a.column(i).into_owned());
                        worst = worst.max(op_norm(&(lhs - a * &self.values[k][i])));
                    }
                }
                worst
            })
            .collect()
    }

    pub fn verify(&self, tol: Tolerance) -> CheckList {
        let (n, m) = (self.dim(), self.rank());
        let mut out = CheckList::new();
        let lin = self.linearity_residuals().into_iter().fold(0.0, f64::max);
        out.record(
            "module.frame-linear",
            "phi_k(a xi) = a phi_k(xi)",
            Closeness::new(lin, tol.eq_tol),
        );
        let p = self.projection();
        out.record(
            "module.projection-idempotent",
            "p^2 = p",
            Closeness::new(op_norm(&(matmul(&p, &p) - &p)), tol.eq_tol),
        );
        out.record(
            "module.projection-self-adjoint",
            "p = p*",
            Closeness::new(op_norm(&(&p - p.adjoint())), tol.eq_tol),
        );
        let mut recon: f64 = 0.0;
        for i in 0..n {
            let mut sum = Vector::zeros(n);
            for k in 0..m {
                sum += &self.values[k][i] * self.generators.column(k);
            }
            sum -= unit(n, i);
            recon = recon.max(sum.norm());
        }
        out.record(
            "module.reconstruction",
            "xi = sum_k phi_k(xi) e_k",
            Closeness::new(recon, tol.eq_tol),
        );
        let gens = self.algebra.star_generators();
        let mut linear: f64 = 0.0;
        let mut positive: f64 = 0.0;
        // ⟨a e_i, e_j⟩ = Σ_b a_bi ⟨e_b, e_j⟩ by linearity of the frame maps.
        let table: Vec<Vec<Mat>> = (0..n).map(|i| (0..n).map(|j| self.inner_basis(i, j)).collect()).collect();
        for i in 0..n {
            let vals = hermitian_spectrum(&table[i][i]);
            positive = positive.max(-vals.first().copied().unwrap_or(0.0));
            for a in &gens {
                for j in 0..n {
                    let mut lhs = -(a * &table[i][j]);
                    for (b, row) in table.iter().enumerate() {
                        if a[(b, i)] != ZERO {
                            lhs += &row[j] * a[(b, i)];
                        }
                    }
                    linear = linear.max(op_norm(&lhs));
                }
            }
        }
        out.record(
            "module.inner-left-linear",
            "<a xi, eta>_A = a <xi, eta>_A",
            Closeness::new(linear, tol.eq_tol),
        );
        out.record(
            "module.inner-positive",
            "<xi, xi>_A is positive",
            Closeness::new(positive.max(0.0), tol.eq_tol),
        );
        let mixed = self.parities.iter().filter(|p| p.is_none()).count();
        out.record(
            "module.frame-homogeneous",
            "each frame map is even or odd for the grading (count of mixed maps)",
            Closeness::new(mixed as f64, tol.eq_tol),
        );
        out
    }

    /// The module over `A₁ ⊗ A₂` with frame `φ_k ⊗ ψ_l` (index `k·m₂ + l`),
    /// whose inner product is `⟨ξ₁⊗η₁, ξ₂⊗η₂⟩ = ⟨ξ₁,ξ₂⟩⟨η₁,η₂⟩`.
    pub fn product(
        &self,
        other: &HermitianModule,
        gamma: &Mat,
        tol: Tolerance,
    ) -> Result<HermitianModule, ModuleError> {
        let algebra = self.algebra.tensor(&other.algebra);
        let mut frame = Vec::with_capacity(self.rank() * other.rank());
        for f in &self.frame {
            for g in &other.frame {
                frame.push(kron(f, g));
            }
        }
        HermitianModule::new(algebra, frame, gamma, tol)
    }

    /// A random vector with entries uniform in the unit square.
    pub fn random_vector<R: Rng>(&self, rng: &mut R) -> Vector {
        Vector::from_fn(self.dim(), |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }
}

fn inverse_positive(g: &Mat) -> Mat {
    let (vals, vecs) = hermitian_eigen(g);
    let inv = Vector::from_iterator(vals.len(), vals.iter().map(|&l| C64::new(1.0 / l, 0.0)));
    &vecs * Mat::from_diagonal(&inv) * vecs.adjoint()
}

fn stack_rows(blocks: &[Mat], cols: usize) -> Mat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(rows, cols);
    let mut off = 0;
    for b in blocks {
        out.view_mut((off, 0), (b.nrows(), cols)).copy_from(b);
        off += b.nrows();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::linalg::{diag, from_real_rows, ONE};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn gallery_modules_verify() {
        for name in gallery::NAMES {
            let ex = gallery::by_name(name, tol()).unwrap();
            let checks = ex.geometry.module.verify(tol());
            assert!(checks.all_pass(), "{name}: {:?}", checks.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn canonical_frame_is_the_point_frame_up_to_scale() {
        // The point projections have Hilbert-Schmidt norm squared 2, so the
        // orthonormal canonical frame carries half the inner product.
        const SCALE: f64 = 2.0;
        let ex = gallery::by_name("two-point", tol()).unwrap();
        let explicit = &ex.geometry.module;
        let canonical =
            HermitianModule::canonical(explicit.algebra.clone(), &ex.geometry.data.gamma, tol()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let x = explicit.random_vector(&mut rng);
            let y = explicit.random_vector(&mut rng);
            let diff = explicit.inner(&x, &y) - canonical.inner(&x, &y) * C64::new(SCALE, 0.0);
            assert_abs_diff_eq!(op_norm(&diff), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn two_point_frame_parities() {
        let ex = gallery::by_name("two-point", tol()).unwrap();
        assert_eq!(ex.geometry.module.parities, vec![Some(1), Some(1), Some(-1), Some(-1)]);
        assert_eq!(ex.geometry.module.projection().nrows(), 16);
    }

    #[test]
    fn missing_vectors_make_the_frame_non_injective() {
        let p = from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let algebra = StarAlgebra::generate(2, std::slice::from_ref(&p), tol()).unwrap();
        let gamma = diag(&[ONE, -ONE]);
        let zero = Mat::zeros(2, 2);
        let values = vec![vec![p, zero]];
        assert!(matches!(
            HermitianModule::from_values(algebra, &values, &gamma, tol()),
            Err(ModuleError::NotInjective { kernel: 1 })
        ));
    }

    #[test]
    fn values_outside_the_algebra_are_rejected() {
        let p = from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let algebra = StarAlgebra::generate(2, &[p], tol()).unwrap();
        let flip = from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let values = vec![vec![flip.clone(), flip]];
        assert!(matches!(
            HermitianModule::from_values(algebra, &values, &identity(2), tol()),
            Err(ModuleError::NotInAlgebra { map: 0, vector: 0, .. })
        ));
    }
}
