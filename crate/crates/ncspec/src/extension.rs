//! N=(1,1) spectral data `(A, H, d, γ, ⋆)` and the procedure extending an
//! even real spectral triple with a Hermitian module and a connection to
//! such data on `H̃ = E ⊗_A E`.
//!
//! The pair form `𝔇 = d + d*`, `𝔇̄ = i(d − d*)` is stored; `d` is recovered
//! as `½(𝔇 − i𝔇̄)`.

use crate::algebra::StarAlgebra;
use crate::checks::{Check, CheckList};
use crate::connection::{verify_connection, Connection, Geometry};
use crate::linalg::{
    chain, conj, identity, kron, kron_vec, matmul, op_norm, vanishes, Closeness, Mat, Tolerance, C64, I,
};
use crate::spectral::{N1Data, SpectralError};
use crate::tensor::TensorSpaces;

/// `(A, H, 𝔇, 𝔇̄, γ, ⋆)` with `H = C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct N11Data {
    pub algebra: StarAlgebra,
    pub dirac: Mat,
    pub dirac_bar: Mat,
    pub gamma: Mat,
    pub hodge: Mat,
}

impl N11Data {
    pub fn from_pair(
        algebra: StarAlgebra,
        dirac: Mat,
        dirac_bar: Mat,
        gamma: Mat,
        hodge: Mat,
    ) -> Result<Self, SpectralError> {
        let n = algebra.hilbert_dim;
        for (what, m) in [
            ("Dirac operator", &dirac),
            ("second Dirac operator", &dirac_bar),
            ("grading", &gamma),
            ("Hodge operator", &hodge),
        ] {
            if m.nrows() != n || m.ncols() != n {
                return Err(SpectralError::Shape {
                    what,
                    n,
                    r: m.nrows(),
                    c: m.ncols(),
                });
            }
        }
        Ok(Self {
            algebra,
            dirac,
            dirac_bar,
            gamma,
            hodge,
        })
    }

    /// Builds the data from the differential `d`.
    pub fn from_differential(
        algebra: StarAlgebra,
        d: Mat,
        gamma: Mat,
        hodge: Mat,
    ) -> Result<Self, SpectralError> {
        let dirac = &d + d.adjoint();
        let dirac_bar = (&d - d.adjoint()) * I;
        Self::from_pair(algebra, dirac, dirac_bar, gamma, hodge)
    }

    /// `(C, C, 0, 0, 1, 1)`, the unit of every product.
    pub fn trivial() -> Self {
        Self {
            algebra: StarAlgebra::scalars(1),
            dirac: Mat::zeros(1, 1),
            dirac_bar: Mat::zeros(1, 1),
            gamma: identity(1),
            hodge: identity(1),
        }
    }

    pub fn dim(&self) -> usize {
        self.algebra.hilbert_dim
    }

    /// `d = ½(𝔇 − i𝔇̄)`.
    pub fn differential(&self) -> Mat {
        (&self.dirac - &self.dirac_bar * I) * C64::new(0.5, 0.0)
    }

    /// `Δ = dd* + d*d`.
    pub fn laplacian(&self) -> Mat {
        let d = self.differential();
        &d * d.adjoint() + d.adjoint() * &d
    }

    /// The associated even triple `(A, H, 𝔇, γ)`.
    pub fn to_n1(&self) -> N1Data {
        N1Data {
            algebra: self.algebra.clone(),
            dirac: self.dirac.clone(),
            gamma: self.gamma.clone(),
        }
    }
}

fn worst_commutator(basis: &[Mat], x: &Mat) -> f64 {
    basis
        .iter()
        .map(|a| op_norm(&(x * a - a * x)))
        .fold(0.0, f64::max)
}

/// Checks the axioms in both forms: through `d` (nilpotency, grading,
/// Hodge relation) and through `(𝔇, 𝔇̄)`, and cross-checks that each pair
/// of equivalent conditions gets the same verdict.
pub fn verify_n11(data: &N11Data, tol: Tolerance) -> CheckList {
    let n = data.dim();
    let one = identity(n);
    let (dd, db, g, s) = (&data.dirac, &data.dirac_bar, &data.gamma, &data.hodge);
    let d = data.differential();
    let ds = d.adjoint();
    let basis = &data.algebra.basis;
    let mut out = CheckList::new();

    out.record("n11.dirac-self-adjoint", "D = D*", vanishes(&(dd - dd.adjoint()), tol));
    out.record(
        "n11.dirac-bar-self-adjoint",
        "Dbar = Dbar*",
        vanishes(&(db - db.adjoint()), tol),
    );
    out.record("n11.grading-self-adjoint", "gamma = gamma*", vanishes(&(g - g.adjoint()), tol));
    out.record("n11.grading-involution", "gamma^2 = 1", vanishes(&(g * g - &one), tol));
    out.record(
        "n11.grading-even-algebra",
        "[gamma, a] = 0 for all a",
        Closeness::new(worst_commutator(basis, g), tol.eq_tol),
    );
    out.record(
        "n11.hodge-unitary",
        "star* star = 1",
        vanishes(&(s.adjoint() * s - &one), tol),
    );
    out.record("n11.hodge-self-adjoint", "star = star*", vanishes(&(s - s.adjoint()), tol));
    out.record("n11.hodge-involution", "star^2 = 1", vanishes(&(s * s - &one), tol));
    out.record(
        "n11.hodge-even-algebra",
        "[star, a] = 0 for all a",
        Closeness::new(worst_commutator(basis, s), tol.eq_tol),
    );
    out.record(
        "n11.hodge-grading",
        "[star, gamma] = 0",
        vanishes(&(s * g - g * s), tol),
    );

    let nil = vanishes(&(&d * &d), tol);
    let grading_d = vanishes(&(g * &d + &d * g), tol);
    let hodge_d = vanishes(&(s * &d + &ds * s), tol);
    out.record("n11.d-nilpotent", "d^2 = 0", nil);
    out.record("n11.d-odd", "{gamma, d} = 0", grading_d);
    out.record("n11.d-hodge", "star d = -d* star", hodge_d);

    let square = vanishes(&(dd * dd - db * db), tol);
    let anti = vanishes(&(dd * db + db * dd), tol);
    let g_dd = vanishes(&(g * dd + dd * g), tol);
    let g_db = vanishes(&(g * db + db * g), tol);
    let s_dd = vanishes(&(s * dd + dd * s), tol);
    let s_db = vanishes(&(s * db - db * s), tol);
    out.record("n11.pair-square", "D^2 = Dbar^2", square);
    out.record("n11.pair-anticommute", "{D, Dbar} = 0", anti);
    out.record("n11.pair-grading-dirac", "{gamma, D} = 0", g_dd);
    out.record("n11.pair-grading-dirac-bar", "{gamma, Dbar} = 0", g_db);
    out.record("n11.pair-hodge-dirac", "{star, D} = 0", s_dd);
    out.record("n11.pair-hodge-dirac-bar", "[star, Dbar] = 0", s_db);
    out.record(
        "n11.laplacian",
        "dd* + d*d = D^2",
        vanishes(&(data.laplacian() - dd * dd), tol),
    );

    let agree = |id: &str, desc: &str, left: Closeness, right: &[Closeness]| {
        let right_pass = right.iter().all(Closeness::passes);
        let residual = if left.passes() == right_pass {
            0.0
        } else {
            right.iter().map(|c| c.residual).fold(left.residual, f64::max)
        };
        Check::new(id, desc, Closeness::new(residual, tol.eq_tol))
    };
    out.push(agree(
        "n11.equivalence-nilpotent",
        "d^2 = 0 iff D^2 = Dbar^2 and {D, Dbar} = 0",
        nil,
        &[square, anti],
    ));
    out.push(agree(
        "n11.equivalence-grading",
        "{gamma, d} = 0 iff {gamma, D} = {gamma, Dbar} = 0",
        grading_d,
        &[g_dd, g_db],
    ));
    out.push(agree(
        "n11.equivalence-hodge",
        "star d = -d* star iff {star, D} = [star, Dbar] = 0",
        hodge_d,
        &[s_dd, s_db],
    ));
    out.push(Check::trivial(
        "n11.bounded-commutators",
        "[d, a] bounded for all a",
        tol.eq_tol,
    ));
    out.push(Check::trivial(
        "n11.summability",
        "exp(-t Laplacian) trace class for t > 0",
        tol.eq_tol,
    ));
    out
}

/// Which operator on `E ⊗_A E` plays the Hodge operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HodgeChoice {
    /// `⋆ = 1 ⊗ γ`.
    #[default]
    OneTensorGamma,
    /// `⋆ = γ ⊗ 1`, which breaks the Hodge relations; kept to show how.
    GammaTensorOne,
}

/// All intermediate objects of the extension, in plain tensor coordinates
/// (`ambient`) and in coordinates on the balanced products (`*_q`).
#[derive(Debug, Clone)]
pub struct Extension {
    pub spaces: TensorSpaces,
    /// `∇ : C^N → C^r ⊗ C^N`.
    pub nabla: Mat,
    /// `Ψ(ω⊗ξ) = Jξ ⊗ ω*` as the antilinear map `v ↦ psi · conj(v)` from
    /// `C^r ⊗ C^N` to `C^N ⊗ C^r`.
    pub psi: Mat,
    /// `∇̄ξ = −Ψ(∇J*ξ)` with values in the section of `E ⊗_A Ω¹`.
    pub nabla_bar: Mat,
    /// `∇̃(ξ⊗η) = ∇̄ξ ⊗ η + ξ ⊗ ∇η` on the plain tensor product.
    pub nabla_tilde: Mat,
    /// `c(ξ⊗ω⊗η) = ξ ⊗ ωη`.
    pub contraction: Mat,
    /// `c̄(ξ⊗ω⊗η) = ξ·ω ⊗ γη`.
    pub contraction_bar: Mat,
    /// `𝔇`, `𝔇̄`, `γ̃`, `⋆` on representatives of `E ⊗_A E`, before the
    /// change to orthonormal coordinates.
    pub dirac_q: Mat,
    pub dirac_bar_q: Mat,
    pub gamma_q: Mat,
    pub hodge_q: Mat,
    /// `X ↦ pi X lift` passes to orthonormal coordinates for the form.
    pub pi: Mat,
    pub lift: Mat,
    pub gram_kernel: usize,
    pub candidate: N11Data,
    pub checks: CheckList,
}

/// Runs the extension procedure for a geometry and connection. The result
/// always carries the candidate data together with every check, passing or
/// not.
pub fn extend(geo: &Geometry, conn: &Connection, hodge: HodgeChoice) -> Extension {
    let spaces = TensorSpaces::new(geo);
    extend_in(geo, spaces, conn, hodge)
}

/// As [`extend`], reusing precomputed tensor spaces.
pub fn extend_in(geo: &Geometry, spaces: TensorSpaces, conn: &Connection, hodge: HodgeChoice) -> Extension {
    let tol = geo.tol;
    let n = geo.dim();
    let r = geo.forms.dim();
    let m = &geo.real.j.matrix;
    let gamma = &geo.data.gamma;
    let in_n = identity(n);
    let mut checks = CheckList::new();
    checks.extend(geo.module.verify(tol));
    checks.extend(verify_connection(geo, &spaces, conn));

    let nabla = conn.matrix(geo);
    let star = geo.forms.star().matrix;
    let mut psi = Mat::zeros(n * r, r * n);
    for k in 0..r {
        let sk = star.column(k).into_owned();
        for i in 0..n {
            psi.set_column(k * n + i, &kron_vec(&m.column(i).into_owned(), &sk));
        }
    }
    let (b_ee, b_oe, b_eo, b_eoe) = (
        &spaces.ee.section,
        &spaces.oe.section,
        &spaces.eo.section,
        &spaces.eoe.section,
    );
    let psi_q = b_eo.adjoint() * &psi * conj(b_oe);
    // Ψ is antilinear: relations r ↦ psi · conj(r), and conj(1 − SS*) is the
    // projector onto the conjugated relations.
    let psi_descent = if spaces.oe.relation_dim() == 0 || b_eo.ncols() == 0 {
        0.0
    } else {
        let t = b_eo.adjoint() * &psi;
        op_norm(&(&t - chain(&[&t, &conj(b_oe), &b_oe.transpose()])))
    };
    checks.record(
        "extension.psi-well-defined",
        "Psi sends balancing relations to relations",
        Closeness::new(psi_descent, tol.eq_tol),
    );
    let mut psi_twist: f64 = 0.0;
    for a in &geo.data.algebra.basis {
        let lam = kron(&geo.forms.left_matrix(a), &in_n);
        let rho = kron(&in_n, &geo.forms.right_matrix(&a.adjoint()));
        let diff = &psi * conj(&lam) - rho * &psi;
        psi_twist = psi_twist.max(op_norm(&(b_eo.adjoint() * diff * conj(b_oe))));
    }
    checks.record(
        "extension.psi-twisted-linear",
        "Psi(a s) = Psi(s) a*",
        Closeness::new(psi_twist, tol.eq_tol),
    );

    let nabla_q = b_oe.adjoint() * &nabla;
    let nabla_bar = -(b_eo * (&psi_q * conj(&nabla_q)) * m.transpose().map(|z| z.conj()));
    let mut right_leibniz: f64 = 0.0;
    for a in &geo.data.algebra.basis {
        let ra = geo.right.of(a);
        let da = geo.forms.differential(a);
        let lhs = &nabla_bar * &ra;
        let rhs = kron(&in_n, &geo.forms.right_matrix(a)) * &nabla_bar
            + kron(&in_n, &Mat::from_column_slice(r, 1, da.as_slice()));
        right_leibniz = right_leibniz.max(op_norm(&(b_eo.adjoint() * (lhs - rhs))));
    }
    checks.record(
        "extension.right-leibniz",
        "nablabar(xi a) = nablabar(xi) a + xi (x) da",
        Closeness::new(right_leibniz, tol.eq_tol),
    );

    let nabla_tilde = kron(&nabla_bar, &in_n) + kron(&in_n, &nabla);
    checks.record(
        "extension.nabla-tilde-well-defined",
        "nablatilde sends balancing relations to relations",
        Closeness::new(spaces.ee.descent_residual(&nabla_tilde, &spaces.eoe), tol.eq_tol),
    );

    let contraction = kron(&in_n, &geo.forms.action_on_vectors());
    let mut contraction_bar = Mat::zeros(n * n, n * r * n);
    for k in 0..r {
        let rw = geo.right.of(&geo.forms.basis[k]);
        for i in 0..n {
            let left = rw.column(i).into_owned();
            for j in 0..n {
                contraction_bar.set_column(
                    (i * r + k) * n + j,
                    &kron_vec(&left, &gamma.column(j).into_owned()),
                );
            }
        }
    }
    checks.record(
        "extension.contraction-well-defined",
        "c sends balancing relations to relations",
        Closeness::new(spaces.eoe.descent_residual(&contraction, &spaces.ee), tol.eq_tol),
    );
    checks.record(
        "extension.contraction-bar-well-defined",
        "cbar sends balancing relations to relations",
        Closeness::new(spaces.eoe.descent_residual(&contraction_bar, &spaces.ee), tol.eq_tol),
    );

    let nt_q = chain(&[&b_eoe.adjoint(), &nabla_tilde, b_ee]);
    let c_q = chain(&[&b_ee.adjoint(), &contraction, b_eoe]);
    let cb_q = chain(&[&b_ee.adjoint(), &contraction_bar, b_eoe]);
    let dirac_q = matmul(&c_q, &nt_q);
    let dirac_bar_q = matmul(&cb_q, &nt_q);
    let grading = kron(gamma, gamma);
    let hodge_amb = match hodge {
        HodgeChoice::OneTensorGamma => kron(&in_n, gamma),
        HodgeChoice::GammaTensorOne => kron(gamma, &in_n),
    };
    checks.record(
        "extension.grading-well-defined",
        "gamma (x) gamma preserves balancing relations",
        Closeness::new(spaces.ee.descent_residual(&grading, &spaces.ee), tol.eq_tol),
    );
    checks.record(
        "extension.hodge-well-defined",
        "the Hodge operator preserves balancing relations",
        Closeness::new(spaces.ee.descent_residual(&hodge_amb, &spaces.ee), tol.eq_tol),
    );
    let gamma_q = chain(&[&b_ee.adjoint(), &grading, b_ee]);
    let hodge_q = chain(&[&b_ee.adjoint(), &hodge_amb, b_ee]);

    checks.record(
        "extension.form-descends",
        "the inner product vanishes on balancing relations",
        Closeness::new(spaces.gram_descent_residual(), tol.eq_tol),
    );
    let factor = spaces.orthonormalizer(tol);
    checks.record(
        "extension.form-positive",
        "the inner product on E (x)_A E is positive semidefinite",
        Closeness::new((-factor.min_eigenvalue).max(0.0), tol.eq_tol),
    );
    checks.record(
        "extension.form-nondegenerate",
        "number of null directions beyond the balancing relations",
        Closeness::new(factor.kernel_dim as f64, tol.eq_tol),
    );
    let (pi, lift) = (factor.pi.clone(), factor.lift.clone());
    let on = |x: &Mat| chain(&[&pi, x, &lift]);

    let represent = |a: &Mat| on(&chain(&[&b_ee.adjoint(), &kron(a, &in_n), b_ee]));
    let images: Vec<Mat> = geo.data.algebra.basis.iter().map(represent).collect();
    let generators: Vec<Mat> = geo.data.algebra.generators.iter().map(represent).collect();
    let dim_tilde = pi.nrows();
    let mut star_closed: f64 = 0.0;
    for (a, ta) in geo.data.algebra.basis.iter().zip(&images) {
        star_closed = star_closed.max(op_norm(&(ta.adjoint() - represent(&a.adjoint()))));
    }
    checks.record(
        "extension.algebra-representation",
        "the left action of A on E (x)_A E is a *-representation",
        Closeness::new(star_closed, tol.eq_tol),
    );
    let algebra = StarAlgebra::spanned_by(dim_tilde, &images, generators, tol);
    checks.record(
        "extension.algebra-closed",
        "the image of A is closed under products and adjoints",
        Closeness::new(algebra.closure_residual(tol), tol.eq_tol),
    );

    let candidate = N11Data {
        algebra,
        dirac: on(&dirac_q),
        dirac_bar: on(&dirac_bar_q),
        gamma: on(&gamma_q),
        hodge: on(&hodge_q),
    };
    checks.extend(verify_n11(&candidate, tol));
    Extension {
        spaces,
        nabla,
        psi,
        nabla_bar,
        nabla_tilde,
        contraction,
        contraction_bar,
        dirac_q,
        dirac_bar_q,
        gamma_q,
        hodge_q,
        pi,
        lift,
        gram_kernel: factor.kernel_dim,
        candidate,
        checks,
    }
}
