//! Comparing the extension of a product geometry with products of the
//! extensions of its factors.
//!
//! The plain tensor product `(E₁⊗E₂)⊗(E₁⊗E₂)` is reordered into
//! `(E₁⊗E₁)⊗(E₂⊗E₂)`; this descends to a unitary between the extension of
//! the product and the product of the extensions, and every product variant
//! is compared through it. The intermediate steps (connections, the map
//! `Ψ`, the conjugate connection, the total connection and both
//! contractions) are checked one by one against their factorwise versions.

use crate::checks::CheckList;
use crate::connection::{Connection, Geometry};
use crate::extension::{extend, Extension, HodgeChoice};
use crate::forms::product_one_forms;
use crate::gallery::Example;
use crate::linalg::{
    chain, conj, identity, kron, kron_vec, matmul, op_norm, unit, vanishes, Closeness, Mat, Tolerance,
    ONE,
};
use crate::products::{n11_product, Variant};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MultiplicativityError {
    #[error("the form on {which} is degenerate ({kernel} null directions), so no unitary comparison exists")]
    Degenerate { which: &'static str, kernel: usize },
}

/// `((a·N₂+b)·N₁+c)·N₂+e ↦ ((a·N₁+c)·N₂+b)·N₂+e`: reorders
/// `(E₁⊗E₂)⊗(E₁⊗E₂)` into `(E₁⊗E₁)⊗(E₂⊗E₂)`.
pub fn reorder(n1: usize, n2: usize) -> Mat {
    let n = n1 * n1 * n2 * n2;
    let mut p = Mat::zeros(n, n);
    for a in 0..n1 {
        for b in 0..n2 {
            for c in 0..n1 {
                for e in 0..n2 {
                    let src = ((a * n2 + b) * n1 + c) * n2 + e;
                    let dst = ((a * n1 + c) * n2 + b) * n2 + e;
                    p[(dst, src)] = ONE;
                }
            }
        }
    }
    p
}

/// The unitary from the extension of the product to the tensor product of
/// the extensions, in the orthonormal coordinates of each.
pub fn canonical_iso(
    e1: &Extension,
    e2: &Extension,
    product: &Extension,
) -> Result<Mat, MultiplicativityError> {
    for (which, e) in [("first factor", e1), ("second factor", e2), ("product", product)] {
        if e.gram_kernel > 0 {
            return Err(MultiplicativityError::Degenerate {
                which,
                kernel: e.gram_kernel,
            });
        }
    }
    let (n1, n2) = (e1.spaces.n, e2.spaces.n);
    let b = kron(&e1.spaces.ee.section, &e2.spaces.ee.section);
    Ok(chain(&[
        &kron(&e1.pi, &e2.pi),
        &b.adjoint(),
        &reorder(n1, n2),
        &product.spaces.ee.section,
        &product.lift,
    ]))
}

/// Residuals of one product variant against the transported extension of
/// the product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariantComparison {
    pub variant: Variant,
    pub dirac: f64,
    pub dirac_bar: f64,
}

impl VariantComparison {
    pub fn residual(&self) -> f64 {
        self.dirac.max(self.dirac_bar)
    }
}

#[derive(Debug, Clone)]
pub struct MultiplicativityReport {
    pub first: Extension,
    pub second: Extension,
    pub product: Extension,
    pub iso: Mat,
    pub variants: Vec<VariantComparison>,
    pub checks: CheckList,
}

impl MultiplicativityReport {
    pub fn comparison(&self, variant: Variant) -> Option<&VariantComparison> {
        self.variants.iter().find(|c| c.variant == variant)
    }
}

/// Extends both factors and their product and compares the product
/// extension with every product variant through the canonical unitary.
pub fn check_multiplicativity(
    ex1: &Example,
    ex2: &Example,
    product: &Example,
    tol: Tolerance,
) -> Result<MultiplicativityReport, MultiplicativityError> {
    let first = extend(&ex1.geometry, &ex1.connection, HodgeChoice::default());
    let second = extend(&ex2.geometry, &ex2.connection, HodgeChoice::default());
    let prod = extend(&product.geometry, &product.connection, HodgeChoice::default());
    let iso = canonical_iso(&first, &second, &prod)?;
    let mut checks = CheckList::new();
    let n = iso.nrows();
    checks.record(
        "mult.iso-unitary",
        "U*U = 1 for the reordering unitary",
        vanishes(&(iso.adjoint() * &iso - identity(n)), tol),
    );
    let (c1, c2, cp) = (&first.candidate, &second.candidate, &prod.candidate);
    let move_over = |x: &Mat| chain(&[&iso, x, &iso.adjoint()]);
    checks.record(
        "mult.grading",
        "U gamma U* = gamma1 (x) gamma2",
        vanishes(&(move_over(&cp.gamma) - kron(&c1.gamma, &c2.gamma)), tol),
    );
    checks.record(
        "mult.hodge",
        "U star U* = star1 (x) star2",
        vanishes(&(move_over(&cp.hodge) - kron(&c1.hodge, &c2.hodge)), tol),
    );
    let dirac = move_over(&cp.dirac);
    let dirac_bar = move_over(&cp.dirac_bar);
    let variants: Vec<VariantComparison> = Variant::ALL
        .iter()
        .map(|&variant| {
            let v = n11_product(c1, c2, variant);
            VariantComparison {
                variant,
                dirac: op_norm(&(&dirac - &v.dirac)),
                dirac_bar: op_norm(&(&dirac_bar - &v.dirac_bar)),
            }
        })
        .collect();
    let main = variants[0];
    checks.record(
        "mult.main-dirac",
        "U D U* = D1 (x) 1 + star1 (x) D2",
        Closeness::new(main.dirac, tol.eq_tol),
    );
    checks.record(
        "mult.main-dirac-bar",
        "U Dbar U* = Dbar1 (x) star2 + gamma1 (x) Dbar2",
        Closeness::new(main.dirac_bar, tol.eq_tol),
    );
    Ok(MultiplicativityReport {
        first,
        second,
        product: prod,
        iso,
        variants,
        checks,
    })
}

/// Coordinates in the product one-forms of `ω₁⊗1` (`which = 1`) or of
/// `γ₁⊗ω₂` (`which = 2`) for each basis form `ω` of that factor.
fn embedding(g1: &Geometry, g2: &Geometry, product: &Geometry, which: u8) -> Mat {
    let fp = &product.forms;
    let cols: Vec<_> = if which == 1 {
        let one = identity(g2.dim());
        g1.forms.basis.iter().map(|w| fp.coords(&kron(w, &one))).collect()
    } else {
        g2.forms
            .basis
            .iter()
            .map(|w| fp.coords(&kron(&g1.data.gamma, w)))
            .collect()
    };
    if cols.is_empty() {
        Mat::zeros(fp.dim(), 0)
    } else {
        Mat::from_columns(&cols)
    }
}

/// Residual of `lhs = rhs` between a source section and a target quotient.
fn restricted(target: &Mat, diff: &Mat, source: &Mat) -> f64 {
    if target.ncols() == 0 || source.ncols() == 0 {
        return 0.0;
    }
    op_norm(&chain(&[&target.adjoint(), diff, source]))
}

/// Extends two factors and their product with the product connection, then
/// runs [`lemma_chain`].
pub fn lemma_chain_for(
    g1: &Geometry,
    conn1: &Connection,
    g2: &Geometry,
    conn2: &Connection,
    product: &Geometry,
    tol: Tolerance,
) -> CheckList {
    let conn = conn1.product(conn2, g1, g2);
    let e1 = extend(g1, conn1, HodgeChoice::default());
    let e2 = extend(g2, conn2, HodgeChoice::default());
    let ep = extend(product, &conn, HodgeChoice::default());
    lemma_chain(g1, &e1, g2, &e2, product, &ep, tol)
}

/// Checks each step of the construction on a product geometry against the
/// corresponding steps on the factors. `ep` must be the extension of the
/// product with the product of the connections used for `e1` and `e2`.
pub fn lemma_chain(
    g1: &Geometry,
    e1: &Extension,
    g2: &Geometry,
    e2: &Extension,
    product: &Geometry,
    ep: &Extension,
    tol: Tolerance,
) -> CheckList {
    let mut out = CheckList::new();
    out.extend(product_one_forms(&g1.data, &g2.data, &product.data, tol).checks);

    let (n1, n2) = (g1.dim(), g2.dim());
    let (r1, r2) = (g1.forms.dim(), g2.forms.dim());
    let n = n1 * n2;
    let r = product.forms.dim();
    let emb1 = embedding(g1, g2, product, 1);
    let emb2 = embedding(g1, g2, product, 2);
    let (m1, m2) = (&g1.real.j.matrix, &g2.real.j.matrix);
    let (in1, in2, inp) = (identity(n1), identity(n2), identity(n));

    // Ω¹₁⊗E₁⊗E₂ → Ω¹⊗E and E₁⊗Ω¹₂⊗E₂ → Ω¹⊗E.
    let k1 = kron(&emb1, &inp);
    let mut k2 = Mat::zeros(r * n, n1 * r2 * n2);
    for i1 in 0..n1 {
        for k in 0..r2 {
            for i2 in 0..n2 {
                let col = kron_vec(&emb2.column(k).into_owned(), &unit(n, i1 * n2 + i2));
                k2.set_column((i1 * r2 + k) * n2 + i2, &col);
            }
        }
    }
    // E₁⊗Ω¹₁⊗E₂ → E⊗Ω¹ and E₁⊗E₂⊗Ω¹₂ → E⊗Ω¹.
    let mut kb1 = Mat::zeros(n * r, n1 * r1 * n2);
    for i1 in 0..n1 {
        for k in 0..r1 {
            for i2 in 0..n2 {
                let col = kron_vec(&unit(n, i1 * n2 + i2), &emb1.column(k).into_owned());
                kb1.set_column((i1 * r1 + k) * n2 + i2, &col);
            }
        }
    }
    let kb2 = kron(&inp, &emb2);

    let b_oe = &ep.spaces.oe.section;
    let b_eo = &ep.spaces.eo.section;
    let full = identity(n);
    out.record(
        "chain.connection",
        "nabla = K1 (nabla1 (x) 1) + K2 (1 (x) nabla2)",
        Closeness::new(
            restricted(
                b_oe,
                &(&ep.nabla - matmul(&k1, &kron(&e1.nabla, &in2)) - matmul(&k2, &kron(&in1, &e2.nabla))),
                &full,
            ),
            tol.eq_tol,
        ),
    );
    let src1 = kron(&e1.spaces.oe.section, &in2);
    out.record(
        "chain.psi-first",
        "Psi K1 = Kbar1 (Psi1 (x) J2)",
        Closeness::new(
            restricted(
                b_eo,
                &(&ep.psi * conj(&k1) - matmul(&kb1, &kron(&e1.psi, m2))),
                &conj(&src1),
            ),
            tol.eq_tol,
        ),
    );
    let src2 = kron(&in1, &e2.spaces.oe.section);
    out.record(
        "chain.psi-second",
        "Psi K2 = Kbar2 (J1 (x) Psi2)",
        Closeness::new(
            restricted(
                b_eo,
                &(&ep.psi * conj(&k2) - matmul(&kb2, &kron(m1, &e2.psi))),
                &conj(&src2),
            ),
            tol.eq_tol,
        ),
    );
    out.record(
        "chain.conjugate-connection",
        "nablabar = Kbar1 (nablabar1 (x) 1) + Kbar2 (1 (x) nablabar2)",
        Closeness::new(
            restricted(
                b_eo,
                &(&ep.nabla_bar
                    - matmul(&kb1, &kron(&e1.nabla_bar, &in2))
                    - matmul(&kb2, &kron(&in1, &e2.nabla_bar))),
                &full,
            ),
            tol.eq_tol,
        ),
    );

    // (E₁⊗Ω¹₁⊗E₁)⊗(E₂⊗E₂) → E⊗Ω¹⊗E and (E₁⊗E₁)⊗(E₂⊗Ω¹₂⊗E₂) → E⊗Ω¹⊗E.
    let q2 = n2 * n2;
    let mut l1 = Mat::zeros(n * r * n, n1 * r1 * n1 * q2);
    for a in 0..n1 {
        for k in 0..r1 {
            for c in 0..n1 {
                for b in 0..n2 {
                    for e in 0..n2 {
                        let col = kron_vec(
                            &kron_vec(&unit(n, a * n2 + b), &emb1.column(k).into_owned()),
                            &unit(n, c * n2 + e),
                        );
                        l1.set_column(((a * r1 + k) * n1 + c) * q2 + b * n2 + e, &col);
                    }
                }
            }
        }
    }
    let w2 = n2 * r2 * n2;
    let mut l2 = Mat::zeros(n * r * n, n1 * n1 * w2);
    for a in 0..n1 {
        for c in 0..n1 {
            for b in 0..n2 {
                for k in 0..r2 {
                    for e in 0..n2 {
                        let col = kron_vec(
                            &kron_vec(&unit(n, a * n2 + b), &emb2.column(k).into_owned()),
                            &unit(n, c * n2 + e),
                        );
                        l2.set_column((a * n1 + c) * w2 + (b * r2 + k) * n2 + e, &col);
                    }
                }
            }
        }
    }
    let tau = reorder(n1, n2);
    let b_ee = &ep.spaces.ee.section;
    let b_eoe = &ep.spaces.eoe.section;
    let factorwise = matmul(
        &(matmul(&l1, &kron(&e1.nabla_tilde, &identity(q2)))
            + matmul(&l2, &kron(&identity(n1 * n1), &e2.nabla_tilde))),
        &tau,
    );
    out.record(
        "chain.total-connection",
        "nablatilde = L1 (nablatilde1 (x) 1) + L2 (1 (x) nablatilde2) after reordering",
        Closeness::new(restricted(b_eoe, &(&ep.nabla_tilde - factorwise), b_ee), tol.eq_tol),
    );

    let back = tau.transpose();
    let hodge1 = kron(&in1, &g1.data.gamma);
    let hodge2 = kron(&in2, &g2.data.gamma);
    let gamma1 = kron(&g1.data.gamma, &g1.data.gamma);
    let eps1 = if g1.real.signs.epsilon_second > 0 { ONE } else { -ONE };
    let s11 = kron(&e1.spaces.eoe.section, &e2.spaces.ee.section);
    let s12 = kron(&e1.spaces.ee.section, &e2.spaces.eoe.section);
    let checks = [
        (
            "chain.contraction-first",
            "c L1 = (c1 (x) 1) after reordering",
            &ep.contraction,
            &l1,
            matmul(&back, &kron(&e1.contraction, &identity(q2))),
            &s11,
        ),
        (
            "chain.contraction-second",
            "c L2 = (star1 (x) c2) after reordering",
            &ep.contraction,
            &l2,
            matmul(&back, &kron(&hodge1, &e2.contraction)),
            &s12,
        ),
        (
            "chain.contraction-bar-first",
            "cbar L1 = (cbar1 (x) star2) after reordering",
            &ep.contraction_bar,
            &l1,
            matmul(&back, &kron(&e1.contraction_bar, &hodge2)),
            &s11,
        ),
        (
            "chain.contraction-bar-second",
            "cbar L2 = eps1'' (gamma1 (x) gamma1) (x) cbar2 after reordering",
            &ep.contraction_bar,
            &l2,
            matmul(&back, &kron(&(gamma1 * eps1), &e2.contraction_bar)),
            &s12,
        ),
    ];
    for (id, desc, c, l, rhs, src) in checks {
        let diff = matmul(c, l) - rhs;
        out.record(id, desc, Closeness::new(restricted(b_ee, &diff, src), tol.eq_tol));
    }

    if let Ok(iso) = canonical_iso(e1, e2, ep) {
        let main = n11_product(&e1.candidate, &e2.candidate, Variant::Main);
        let move_over = |x: &Mat| chain(&[&iso, x, &iso.adjoint()]);
        out.record(
            "chain.dirac",
            "D = D1 (x) 1 + star1 (x) D2",
            vanishes(&(move_over(&ep.candidate.dirac) - main.dirac), tol),
        );
        out.record(
            "chain.dirac-bar",
            "Dbar = Dbar1 (x) star2 + gamma1 (x) Dbar2",
            vanishes(&(move_over(&ep.candidate.dirac_bar) - main.dirac_bar), tol),
        );
    } else {
        out.record(
            "chain.dirac",
            "D = D1 (x) 1 + star1 (x) D2 (form degenerate)",
            Closeness::new(f64::INFINITY, tol.eq_tol),
        );
    }
    out
}
