//! Compatible connections `∇ : E → Ω¹ ⊗_A E` on Hermitian modules.
//!
//! With a frame `φ_k` and generators `e_k`, every connection has the form
//! `∇ξ = Σ_l [dφ_l(ξ) + Σ_k φ_k(ξ) Γ_{kl}] ⊗ e_l` with coefficients
//! `Γ_{kl} ∈ Ω¹`. `Γ = 0` is the Grassmann connection. Compatibility with
//! the Hermitian structure amounts to `Γ_{lk} = Γ_{kl}*`, and `∇` commutes
//! with the grading when `Γ_{kl}` only links frame maps of equal parity.

use std::collections::BTreeMap;

use crate::checks::CheckList;
use crate::forms::{FormsError, OneForms, RightActions};
use crate::linalg::{identity, kron, kron_vec, matmul, op_norm, zeros, Closeness, Mat, Tolerance, Vector, C64};
use crate::module::HermitianModule;
use crate::spectral::{N1Data, RealStructure};
use crate::tensor::TensorSpaces;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConnectionError {
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error("module and triple act on different spaces ({module} vs {data})")]
    Dimension { module: usize, data: usize },
    #[error("connection coefficient ({k}, {l}) refers to a frame of rank {rank}")]
    Index { k: usize, l: usize, rank: usize },
    #[error("connection coefficient ({k}, {l}) is not a one-form (distance {distance:.3e})")]
    NotOneForm { k: usize, l: usize, distance: f64 },
}

/// Everything the extension procedure needs about one triple: the data,
/// its real structure, the one-forms, the right actions and the module.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub data: N1Data,
    pub real: RealStructure,
    pub forms: OneForms,
    pub right: RightActions,
    pub module: HermitianModule,
    pub tol: Tolerance,
}

impl Geometry {
    pub fn new(
        data: N1Data,
        real: RealStructure,
        module: HermitianModule,
        tol: Tolerance,
    ) -> Result<Self, ConnectionError> {
        if module.dim() != data.dim() {
            return Err(ConnectionError::Dimension {
                module: module.dim(),
                data: data.dim(),
            });
        }
        let right = RightActions::new(&data, &real, tol)?;
        let forms = OneForms::new(&data, tol);
        Ok(Self {
            data,
            real,
            forms,
            right,
            module,
            tol,
        })
    }

    pub fn dim(&self) -> usize {
        self.data.dim()
    }
}

/// A connection given by its coefficients `Γ_{kl}` (operators in `Ω¹`);
/// missing pairs are zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Connection {
    pub coefficients: BTreeMap<(usize, usize), Mat>,
}

impl Connection {
    pub fn grassmann() -> Self {
        Self::default()
    }

    pub fn from_coefficients(coefficients: BTreeMap<(usize, usize), Mat>) -> Self {
        Self { coefficients }
    }

    pub fn is_grassmann(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Rejects coefficients with bad indices or outside `Ω¹`.
    pub fn validate(&self, geo: &Geometry) -> Result<(), ConnectionError> {
        let rank = geo.module.rank();
        for (&(k, l), g) in &self.coefficients {
            if k >= rank || l >= rank {
                return Err(ConnectionError::Index { k, l, rank });
            }
            let distance = geo.forms.distance(g);
            if distance > geo.tol.eq_tol {
                return Err(ConnectionError::NotOneForm { k, l, distance });
            }
        }
        Ok(())
    }

    /// `self + other`, coefficientwise.
    pub fn plus(&self, other: &Connection) -> Connection {
        let mut out = self.coefficients.clone();
        for (key, g) in &other.coefficients {
            out.entry(*key)
                .and_modify(|x| *x += g)
                .or_insert_with(|| g.clone());
        }
        Connection { coefficients: out }
    }

    /// `∇` as an `rN × N` matrix into the plain tensor product `Ω¹ ⊗ E`
    /// (index `k·N + i`). Its class in the balanced product is the connection.
    pub fn matrix(&self, geo: &Geometry) -> Mat {
        let n = geo.dim();
        let r = geo.forms.dim();
        let module = &geo.module;
        let d = &geo.data.dirac;
        let mut out = zeros(r * n, n);
        for i in 0..n {
            let mut col = Vector::zeros(r * n);
            for l in 0..module.rank() {
                let phi = module.value(l, i);
                let mut omega = d * phi - phi * d;
                for k in 0..module.rank() {
                    if let Some(g) = self.coefficients.get(&(k, l)) {
                        omega += module.value(k, i) * g;
                    }
                }
                let c = geo.forms.coords(&omega);
                col += kron_vec(&c, &module.generators.column(l).into_owned());
            }
            out.set_column(i, &col);
        }
        out
    }

    /// A random compatible connection commuting with the grading: a
    /// Hermitian coefficient matrix linking only frame maps of equal parity,
    /// each coefficient a random combination of one-forms of size `scale`.
    pub fn random_compatible<R: Rng>(geo: &Geometry, scale: f64, rng: &mut R) -> Connection {
        let rank = geo.module.rank();
        let parities = &geo.module.parities;
        let mut coefficients = BTreeMap::new();
        for k in 0..rank {
            for l in k..rank {
                if parities[k].is_none() || parities[k] != parities[l] || geo.forms.dim() == 0 {
                    continue;
                }
                let coords = Vector::from_fn(geo.forms.dim(), |_, _| {
                    C64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
                });
                let w = geo.forms.realize(&coords);
                if k == l {
                    coefficients.insert((k, k), &w + w.adjoint());
                } else {
                    coefficients.insert((l, k), w.adjoint());
                    coefficients.insert((k, l), w);
                }
            }
        }
        Connection { coefficients }
    }

    /// The product connection `∇(ξ₁⊗ξ₂) = ∇₁ξ₁ ⊗ ξ₂ + ξ₁ ⊗ ∇₂ξ₂` on the
    /// product module, whose frame is indexed `k·m₂ + m`. In coefficient form
    /// `Γ_{(k,m),(l,m)} = Γ¹_{kl} ⊗ 1` and `Γ_{(k,m),(k,m′)} = γ₁ ⊗ Γ²_{mm′}`.
    pub fn product(&self, other: &Connection, g1: &Geometry, g2: &Geometry) -> Connection {
        let (m1, m2) = (g1.module.rank(), g2.module.rank());
        let one2 = identity(g2.dim());
        let mut coefficients: BTreeMap<(usize, usize), Mat> = BTreeMap::new();
        let mut add = |key: (usize, usize), x: Mat| {
            coefficients
                .entry(key)
                .and_modify(|y| *y += &x)
                .or_insert(x);
        };
        for (&(k, l), g) in &self.coefficients {
            for m in 0..m2 {
                add((k * m2 + m, l * m2 + m), kron(g, &one2));
            }
        }
        for (&(m, mm), g) in &other.coefficients {
            for k in 0..m1 {
                add((k * m2 + m, k * m2 + mm), kron(&g1.data.gamma, g));
            }
        }
        Connection { coefficients }
    }
}

/// Verifies the Leibniz rule, compatibility with the Hermitian structure and
/// commutation with the grading, all in the balanced product `Ω¹ ⊗_A E`.
pub fn verify_connection(geo: &Geometry, spaces: &TensorSpaces, conn: &Connection) -> CheckList {
    let tol = geo.tol;
    let n = geo.dim();
    let r = geo.forms.dim();
    let nab = conn.matrix(geo);
    let b_oe = &spaces.oe.section;
    let mut out = CheckList::new();

    let mut leibniz: f64 = 0.0;
    for a in &geo.data.algebra.basis {
        let da = geo.forms.differential(a);
        let lhs = matmul(&nab, a);
        let rhs = kron(&geo.forms.left_matrix(a), &identity(n)) * &nab
            + kron(&Mat::from_column_slice(r, 1, da.as_slice()), &identity(n));
        leibniz = leibniz.max(op_norm(&(b_oe.adjoint() * (lhs - rhs))));
    }
    out.record(
        "connection.leibniz",
        "nabla(a xi) = a nabla(xi) + da (x) xi",
        Closeness::new(leibniz, tol.eq_tol),
    );

    // ⟨∇ξ, η⟩ − ⟨ξ, ∇η⟩ = d⟨ξ, η⟩_A with ⟨ω⊗ζ, η⟩ = ω⟨ζ,η⟩_A and
    // ⟨ξ, ω⊗ζ⟩ = ⟨ξ,ζ⟩_A ω*.
    let module = &geo.module;
    let d = &geo.data.dirac;
    let inner: Vec<Vec<Mat>> = (0..n)
        .map(|i| (0..n).map(|j| module.inner_basis(i, j)).collect())
        .collect();
    let pair_left = |v: &Vector, j: usize| -> Mat {
        let mut acc = zeros(n, n);
        for k in 0..r {
            let mut weighted = zeros(n, n);
            for (i, row) in inner.iter().enumerate() {
                let c = v[k * n + i];
                if c != C64::new(0.0, 0.0) {
                    weighted += &row[j] * c;
                }
            }
            acc += &geo.forms.basis[k] * weighted;
        }
        acc
    };
    let mut compat: f64 = 0.0;
    for (i, row) in inner.iter().enumerate() {
        let ni = nab.column(i).into_owned();
        for (j, h) in row.iter().enumerate() {
            let nj = nab.column(j).into_owned();
            let lhs = pair_left(&ni, j) - pair_left(&nj, i).adjoint();
            let rhs = d * h - h * d;
            compat = compat.max(op_norm(&(lhs - rhs)));
        }
    }
    out.record(
        "connection.compatible",
        "<nabla xi, eta> - <xi, nabla eta> = d<xi, eta>_A",
        Closeness::new(compat, tol.eq_tol),
    );

    let gamma = &geo.data.gamma;
    let lhs = matmul(&nab, gamma);
    let rhs = kron(&identity(r), gamma) * &nab;
    out.record(
        "connection.grading",
        "nabla(gamma xi) = (1 (x) gamma) nabla(xi)",
        Closeness::new(op_norm(&(b_oe.adjoint() * (lhs - rhs))), tol.eq_tol),
    );

    let mut hermitian: f64 = 0.0;
    for (&(k, l), g) in &conn.coefficients {
        let other = conn
            .coefficients
            .get(&(l, k))
            .map(|h| h.adjoint())
            .unwrap_or_else(|| zeros(n, n));
        hermitian = hermitian.max(op_norm(&(g - other)));
    }
    out.record(
        "connection.coefficients-hermitian",
        "Gamma_lk = Gamma_kl*",
        Closeness::new(hermitian, tol.eq_tol),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use rand::SeedableRng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn gallery_connections_verify() {
        for name in ["trivial", "two-point", "two-point-b", "m2"] {
            let ex = gallery::by_name(name, tol()).unwrap();
            let spaces = TensorSpaces::new(&ex.geometry);
            for conn in [Connection::grassmann(), ex.connection.clone()] {
                let checks = verify_connection(&ex.geometry, &spaces, &conn);
                assert!(checks.all_pass(), "{name}: {:?}", checks.failures().collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn random_compatible_connections_verify() {
        let ex = gallery::by_name("two-point-b", tol()).unwrap();
        let spaces = TensorSpaces::new(&ex.geometry);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..4 {
            let conn = Connection::random_compatible(&ex.geometry, 1.0, &mut rng);
            conn.validate(&ex.geometry).unwrap();
            let checks = verify_connection(&ex.geometry, &spaces, &conn);
            assert!(checks.all_pass(), "{:?}", checks.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn skew_coefficient_breaks_compatibility() {
        let ex = gallery::by_name("two-point", tol()).unwrap();
        let geo = &ex.geometry;
        let spaces = TensorSpaces::new(geo);
        // Γ₁₀ = −Γ₀₁* makes the coefficient matrix skew.
        let forward = ex.connection.coefficients[&(0, 1)].clone() * crate::linalg::I;
        let backward = forward.adjoint() * C64::new(-1.0, 0.0);
        let conn = Connection::from_coefficients(BTreeMap::from([((0, 1), forward), ((1, 0), backward)]));
        let checks = verify_connection(geo, &spaces, &conn);
        assert!(!checks.get("connection.compatible").unwrap().passed());
        assert!(checks.get("connection.leibniz").unwrap().passed());
    }

    #[test]
    fn grading_odd_coefficient_breaks_grading() {
        // Frame map 0 is even at the first point, frame map 3 odd at the
        // second.
        let ex = gallery::by_name("two-point", tol()).unwrap();
        let geo = &ex.geometry;
        let spaces = TensorSpaces::new(geo);
        let forward = ex.connection.coefficients[&(0, 1)].clone();
        let conn = Connection::from_coefficients(BTreeMap::from([
            ((0, 3), forward.clone()),
            ((3, 0), forward.adjoint()),
        ]));
        let checks = verify_connection(geo, &spaces, &conn);
        assert!(!checks.get("connection.grading").unwrap().passed());
    }

    #[test]
    fn product_of_grassmann_connections_is_grassmann() {
        let ex = gallery::by_name("two-point", tol()).unwrap();
        let g = &ex.geometry;
        assert!(Connection::grassmann().product(&Connection::grassmann(), g, g).is_grassmann());
    }
}
