//! Small worked examples: even real spectral triples with a module and a
//! connection, products of them, and a few N=(1,1) data sets.

use std::collections::BTreeMap;

use crate::algebra::{AlgebraError, StarAlgebra};
use crate::connection::{Connection, ConnectionError, Geometry};
use crate::extension::N11Data;
use crate::linalg::{
    chain, diag, from_rows, identity, kron, random_hermitian, random_matrix, random_unitary, AntilinearOp, Mat,
    Tolerance, C64, I, ONE, ZERO,
};
use rand::Rng;
use crate::module::{HermitianModule, ModuleError};
use crate::spectral::{kasparov_product, N1Data, RealStructure, SpectralError};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GalleryError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error("unknown example {0:?}")]
    Unknown(String),
}

/// A geometry together with a compatible connection on its module.
#[derive(Debug, Clone)]
pub struct Example {
    pub name: String,
    pub summary: String,
    pub geometry: Geometry,
    pub connection: Connection,
}

impl Example {
    pub fn new(
        name: &str,
        summary: &str,
        data: N1Data,
        j: AntilinearOp,
        module: HermitianModule,
        connection: Connection,
        tol: Tolerance,
    ) -> Result<Self, GalleryError> {
        let real = RealStructure::measure(j, &data, tol)?;
        let geometry = Geometry::new(data, real, module, tol)?;
        connection.validate(&geometry)?;
        Ok(Self {
            name: name.to_string(),
            summary: summary.to_string(),
            geometry,
            connection,
        })
    }

    /// The product geometry with the product module and connection.
    pub fn product(&self, other: &Example, tol: Tolerance) -> Result<Example, GalleryError> {
        let (g1, g2) = (&self.geometry, &other.geometry);
        let data = kasparov_product(&g1.data, &g2.data);
        let real = g1.real.tensor(&g2.real, &data, tol)?;
        let module = g1.module.product(&g2.module, &data.gamma, tol)?;
        let connection = self.connection.product(&other.connection, g1, g2);
        let geometry = Geometry::new(data, real, module, tol)?;
        connection.validate(&geometry)?;
        Ok(Example {
            name: format!("{}*{}", self.name, other.name),
            summary: format!("product of {} and {}", self.name, other.name),
            geometry,
            connection,
        })
    }
}

fn permutation(targets: &[usize]) -> Mat {
    let n = targets.len();
    let mut m = Mat::zeros(n, n);
    for (src, &dst) in targets.iter().enumerate() {
        m[(dst, src)] = ONE;
    }
    m
}

/// `A = C` on `H = C`: everything trivial, the unit for products.
pub fn trivial(tol: Tolerance) -> Result<Example, GalleryError> {
    let data = N1Data::trivial();
    let module = HermitianModule::canonical(data.algebra.clone(), &data.gamma, tol)?;
    Example::new(
        "trivial",
        "A = C acting on C with D = 0",
        data,
        AntilinearOp::conjugation(1),
        module,
        Connection::grassmann(),
        tol,
    )
}

/// The two-point space `A = C ⊕ C` on `H = C⁴ = C² ⊗ C²` (point ⊗ sheet,
/// index `2i + s`). `D` links the even sheet of point `i` with the odd sheet
/// of point `j` with weight `Y_{ij}`, where `Y = [[a, ā], [ia, −iā]]`; `J`
/// swaps the points on the odd sheet. The module has one frame map per point
/// and sheet, and the connection has strength `z` on the even pair of maps
/// and `i z̄ (a/|a|)²` on the odd pair, the combination for which the
/// extension satisfies every axiom.
pub fn two_point(name: &str, a: C64, z: C64, tol: Tolerance) -> Result<Example, GalleryError> {
    let i2 = identity(2);
    let proj = [diag(&[ONE, ZERO]), diag(&[ZERO, ONE])];
    let points: Vec<Mat> = proj.iter().map(|p| kron(p, &i2)).collect();
    let algebra = StarAlgebra::generate(4, &points[..1], tol)?;
    let y = from_rows(&[&[a, a.conj()], &[I * a, -I * a.conj()]]);
    let mut d = Mat::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            d[(i * 2, j * 2 + 1)] = y[(i, j)];
        }
    }
    let d = &d + d.adjoint();
    let gamma = kron(&i2, &diag(&[ONE, -ONE]));
    let data = N1Data::new(algebra.clone(), d.clone(), gamma.clone())?;
    let j = AntilinearOp::new(permutation(&[0, 3, 2, 1]));

    let mut values = Vec::with_capacity(4);
    for s in 0..2 {
        for (p, point) in points.iter().enumerate() {
            values.push(
                (0..4)
                    .map(|v| {
                        if v == p * 2 + s {
                            point.clone()
                        } else {
                            Mat::zeros(4, 4)
                        }
                    })
                    .collect::<Vec<_>>(),
            );
        }
    }
    let module = HermitianModule::from_values(algebra, &values, &gamma, tol)?;

    let forward = &points[0] * &d * &points[1];
    let backward = &points[1] * &d * &points[0];
    let phase = if a.norm() > 0.0 { (a / a.norm()).powi(2) } else { ONE };
    let w = I * z.conj() * phase;
    let coefficients = BTreeMap::from([
        ((0, 1), &forward * z),
        ((1, 0), &backward * z.conj()),
        ((2, 3), &forward * w),
        ((3, 2), &backward * w.conj()),
    ]);
    Example::new(
        name,
        "two-point space A = C + C on C^4 with a point-to-sheet Dirac operator",
        data,
        j,
        module,
        Connection::from_coefficients(coefficients),
        tol,
    )
}

/// `A = M₂(C)` acting on `H = M₂(C) ⊗ C²` by left multiplication, with
/// `J(ξ ⊗ v) = ξ* ⊗ v̄` and `D` built from `T ξ = mξ + ξm*` linking the two
/// sheets. The connection coefficient on each sheet is the one-form made of
/// `m + diag(1, −1)`.
pub fn matrix_algebra(tol: Tolerance) -> Result<Example, GalleryError> {
    let i2 = identity(2);
    let left = |x: &Mat| kron(&kron(x, &i2), &i2);
    let unit = |r: usize, c: usize| {
        let mut x = Mat::zeros(2, 2);
        x[(r, c)] = ONE;
        x
    };
    let gens = [left(&unit(0, 1)), left(&unit(0, 0))];
    let algebra = StarAlgebra::generate(8, &gens, tol)?;
    let m = from_rows(&[&[ONE, I], &[ZERO, C64::new(2.0, 0.0)]]);
    let t = kron(&m, &i2) + kron(&i2, &m.map(|z| z.conj()));
    let up = from_rows(&[&[ZERO, ONE], &[ZERO, ZERO]]);
    let down = up.transpose();
    let d = kron(&t, &up) + kron(&t.adjoint(), &down);
    let gamma = kron(&identity(4), &diag(&[ONE, -ONE]));
    let data = N1Data::new(algebra.clone(), d, gamma.clone())?;
    let j = AntilinearOp::new(kron(&permutation(&[0, 2, 1, 3]), &i2));

    let values: Vec<Vec<Mat>> = (0..2)
        .map(|s| {
            (0..8)
                .map(|v| {
                    if v % 2 == s {
                        left(&unit(v / 4, (v / 2) % 2))
                    } else {
                        Mat::zeros(8, 8)
                    }
                })
                .collect()
        })
        .collect();
    let module = HermitianModule::from_values(algebra, &values, &gamma, tol)?;

    let x = &m + diag(&[ONE, -ONE]);
    let coefficient = kron(&kron(&x, &i2), &up) + kron(&kron(&x.adjoint(), &i2), &down);
    let coefficients = BTreeMap::from([((0, 0), coefficient.clone()), ((1, 1), coefficient)]);
    Example::new(
        "m2",
        "A = M2(C) on M2(C) (x) C^2 with D built from left and right multiplication",
        data,
        j,
        module,
        Connection::from_coefficients(coefficients),
        tol,
    )
}

/// Names accepted by [`by_name`], in gallery order.
pub const NAMES: [&str; 5] = ["trivial", "two-point", "two-point-b", "m2", "two-point-squared"];

/// The named example.
pub fn by_name(name: &str, tol: Tolerance) -> Result<Example, GalleryError> {
    match name {
        "trivial" => trivial(tol),
        "two-point" => two_point("two-point", ONE, ONE, tol),
        "two-point-b" => two_point("two-point-b", C64::new(1.0, 1.0), C64::new(2.0, 0.0), tol),
        "m2" => matrix_algebra(tol),
        "two-point-squared" => {
            let a = by_name("two-point", tol)?;
            let mut p = a.product(&a, tol)?;
            p.name = name.to_string();
            Ok(p)
        }
        other => Err(GalleryError::Unknown(other.to_string())),
    }
}

/// Every example in gallery order.
pub fn all(tol: Tolerance) -> Result<Vec<Example>, GalleryError> {
    NAMES.iter().map(|n| by_name(n, tol)).collect()
}

/// Pairs of gallery examples whose product is small enough to extend
/// directly.
pub fn product_pairs() -> Vec<(&'static str, &'static str)> {
    vec![
        ("trivial", "two-point"),
        ("two-point", "trivial"),
        ("two-point", "two-point"),
        ("two-point", "two-point-b"),
        ("two-point-b", "two-point"),
        ("trivial", "m2"),
    ]
}

/// N=(1,1) data on `C² ⊗ C²` over `A = C`, with `γ = σ_z ⊗ 1`,
/// `⋆ = 1 ⊗ σ_z` and an odd nilpotent `d`.
pub fn n11_scalar() -> N11Data {
    let sz = diag(&[ONE, -ONE]);
    let i2 = identity(2);
    let x = Mat::from_element(2, 2, ONE);
    let y = from_rows(&[&[-ONE, ONE], &[ONE, -ONE]]);
    let mut d = Mat::zeros(4, 4);
    d.view_mut((0, 2), (2, 2)).copy_from(&x);
    d.view_mut((2, 0), (2, 2)).copy_from(&y);
    N11Data::from_differential(StarAlgebra::scalars(4), d, kron(&sz, &i2), kron(&i2, &sz))
        .expect("shapes agree")
}

/// `𝔇 = σ_x`, `𝔇̄ = σ_y`, `γ = σ_z` with the Hodge operator `σ_x`. The
/// pair and the grading satisfy their relations; the Hodge operator does not
/// (`{⋆, 𝔇} = 2`).
pub fn n11_pauli() -> N11Data {
    let sx = from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]);
    let sy = from_rows(&[&[ZERO, -I], &[I, ZERO]]);
    let sz = diag(&[ONE, -ONE]);
    N11Data::from_pair(StarAlgebra::scalars(2), sx.clone(), sy, sz, sx).expect("shapes agree")
}

fn sigma(k: usize) -> Mat {
    let entries: Vec<C64> = (0..2 * k).map(|i| if i < k { ONE } else { -ONE }).collect();
    diag(&entries)
}

/// Random N=(1,1) data on `C^{4k}` over `A = C`, built from its differential.
/// `d` is odd for `γ = σ_z ⊗ 1` with off-diagonal blocks `x = U V*` and
/// `y = −σ x* σ`, where the columns of `U` and `V` span isotropic subspaces of
/// `σ = diag(1_k, −1_k)`; then `xy = yx = 0` and `⋆ d = −d* ⋆` for
/// `⋆ = 1 ⊗ σ`. Everything is conjugated by a random unitary.
pub fn random_n11_from_differential<R: Rng>(k: usize, rng: &mut R) -> N11Data {
    let s = sigma(k);
    let isotropic = |rng: &mut R| {
        let a = random_matrix(k, k, rng);
        let w = random_unitary(k, rng);
        let mut m = Mat::zeros(2 * k, k);
        m.view_mut((0, 0), (k, k)).copy_from(&a);
        m.view_mut((k, 0), (k, k)).copy_from(&(w * &a));
        m
    };
    let x = isotropic(rng) * isotropic(rng).adjoint();
    let y = -(&s * x.adjoint() * &s);
    let mut d = Mat::zeros(4 * k, 4 * k);
    d.view_mut((0, 2 * k), (2 * k, 2 * k)).copy_from(&x);
    d.view_mut((2 * k, 0), (2 * k, 2 * k)).copy_from(&y);
    let gamma = kron(&diag(&[ONE, -ONE]), &identity(2 * k));
    let hodge = kron(&identity(2), &s);
    let w = random_unitary(4 * k, rng);
    let conj = |m: &Mat| chain(&[&w, m, &w.adjoint()]);
    N11Data::from_differential(StarAlgebra::scalars(4 * k), conj(&d), conj(&gamma), conj(&hodge))
        .expect("shapes agree")
}

/// Random N=(1,1) data on `C^{4k}` over `A = C`, built from the pair
/// `𝔇 = σ_x ⊗ σ_x ⊗ M`, `𝔇̄ = σ_y ⊗ 1 ⊗ M` with `γ = σ_z ⊗ 1 ⊗ 1`,
/// `⋆ = 1 ⊗ σ_z ⊗ 1` and a random Hermitian `M`, all conjugated by a random
/// unitary. The pair relations follow from Pauli algebra alone.
pub fn random_n11_from_pair<R: Rng>(k: usize, rng: &mut R) -> N11Data {
    let m = random_hermitian(k, rng);
    let sx = from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]);
    let sy = from_rows(&[&[ZERO, -I], &[I, ZERO]]);
    let sz = diag(&[ONE, -ONE]);
    let (i2, ik) = (identity(2), identity(k));
    let w = random_unitary(4 * k, rng);
    let conj = |x: Mat| chain(&[&w, &x, &w.adjoint()]);
    N11Data::from_pair(
        StarAlgebra::scalars(4 * k),
        conj(kron(&kron(&sx, &sx), &m)),
        conj(kron(&kron(&sy, &i2), &m)),
        conj(kron(&kron(&sz, &i2), &ik)),
        conj(kron(&kron(&i2, &sz), &ik)),
    )
    .expect("shapes agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{verify_n1, verify_real_structure};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn every_example_is_an_even_real_triple() {
        for ex in all(tol()).unwrap() {
            let g = &ex.geometry;
            let checks = verify_n1(&g.data, tol());
            assert!(checks.all_pass(), "{}: {:?}", ex.name, checks.failures().collect::<Vec<_>>());
            let checks = verify_real_structure(&g.data, &g.real, tol());
            assert!(checks.all_pass(), "{}: {:?}", ex.name, checks.failures().collect::<Vec<_>>());
            assert!(g.dim() <= 16, "{} exceeds desk scale", ex.name);
        }
    }

    #[test]
    fn dimensions() {
        let dims: Vec<(usize, usize)> = all(tol())
            .unwrap()
            .iter()
            .map(|e| (e.geometry.dim(), e.geometry.data.algebra.dim()))
            .collect();
        assert_eq!(dims, vec![(1, 1), (4, 2), (4, 2), (8, 4), (16, 4)]);
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert_eq!(
            by_name("torus", tol()).unwrap_err(),
            GalleryError::Unknown("torus".to_string())
        );
    }

    #[test]
    fn products_are_named_after_factors() {
        let a = by_name("trivial", tol()).unwrap();
        let b = by_name("two-point", tol()).unwrap();
        assert_eq!(a.product(&b, tol()).unwrap().name, "trivial*two-point");
    }
}
