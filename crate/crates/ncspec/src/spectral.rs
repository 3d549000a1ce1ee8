//! Even spectral triples (N=1 spectral data), real structures with their
//! KO-dimension signs, and the Kasparov product.

use std::collections::BTreeSet;

use crate::algebra::StarAlgebra;
use crate::checks::{Check, CheckList};
use crate::linalg::{
    identity, kron, op_norm, vanishes, AntilinearOp, Closeness,
    LinalgError, Mat, Tolerance, ONE,
};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("{what} must be {n}x{n}, got {r}x{c}")]
    Shape {
        what: &'static str,
        n: usize,
        r: usize,
        c: usize,
    },
    #[error("no sign fits {relation}: residuals {plus:.3e} (+) and {minus:.3e} (-)")]
    InconsistentSign {
        relation: &'static str,
        plus: f64,
        minus: f64,
    },
    #[error("measured signs {0} match no KO-dimension")]
    InconsistentKo(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `(A, H, D, γ)` with `H = C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct N1Data {
    pub algebra: StarAlgebra,
    pub dirac: Mat,
    pub gamma: Mat,
}

impl N1Data {
    pub fn new(algebra: StarAlgebra, dirac: Mat, gamma: Mat) -> Result<Self, SpectralError> {
        let n = algebra.hilbert_dim;
        for (what, m) in [("Dirac operator", &dirac), ("grading", &gamma)] {
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
            gamma,
        })
    }

    pub fn dim(&self) -> usize {
        self.algebra.hilbert_dim
    }

    /// The trivial triple `(C, C, 0, 1)`, unit of the Kasparov product.
    pub fn trivial() -> Self {
        Self {
            algebra: StarAlgebra::scalars(1),
            dirac: Mat::zeros(1, 1),
            gamma: identity(1),
        }
    }
}

/// Verifies the axioms of an even spectral triple.
pub fn verify_n1(data: &N1Data, tol: Tolerance) -> CheckList {
    let n = data.dim();
    let (d, g) = (&data.dirac, &data.gamma);
    let mut out = CheckList::new();
    out.record(
        "n1.dirac-self-adjoint",
        "D = D*",
        vanishes(&(d - d.adjoint()), tol),
    );
    out.record(
        "n1.grading-self-adjoint",
        "gamma = gamma*",
        vanishes(&(g - g.adjoint()), tol),
    );
    out.record(
        "n1.grading-involution",
        "gamma^2 = 1",
        vanishes(&(g * g - identity(n)), tol),
    );
    let even = data
        .algebra
        .basis
        .iter()
        .map(|a| op_norm(&(g * a - a * g)))
        .fold(0.0, f64::max);
    out.record(
        "n1.grading-even-algebra",
        "[gamma, a] = 0 for all a",
        Closeness::new(even, tol.eq_tol),
    );
    out.record(
        "n1.grading-odd-dirac",
        "{gamma, D} = 0",
        vanishes(&(g * d + d * g), tol),
    );
    out.push(Check::trivial(
        "n1.bounded-commutators",
        "[D, a] bounded for all a",
        tol.eq_tol,
    ));
    out.push(Check::trivial(
        "n1.summability",
        "exp(-tD^2) trace class for t > 0",
        tol.eq_tol,
    ));
    out
}

/// The signs `J² = ε`, `JD = ε′DJ`, `Jγ = ε″γJ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signs {
    pub epsilon: i8,
    pub epsilon_prime: i8,
    pub epsilon_second: i8,
}

impl std::fmt::Display for Signs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = |x: i8| if x > 0 { '+' } else { '-' };
        write!(
            f,
            "({},{},{})",
            s(self.epsilon),
            s(self.epsilon_prime),
            s(self.epsilon_second)
        )
    }
}

/// An antiunitary `J` together with its measured signs.
#[derive(Debug, Clone, PartialEq)]
pub struct RealStructure {
    pub j: AntilinearOp,
    pub signs: Signs,
}

fn fit_sign(relation: &'static str, lhs: &Mat, rhs: &Mat, tol: Tolerance) -> Result<(i8, f64), SpectralError> {
    let plus = op_norm(&(lhs - rhs));
    let minus = op_norm(&(lhs + rhs));
    if plus <= tol.eq_tol && plus <= minus {
        Ok((1, plus))
    } else if minus <= tol.eq_tol {
        Ok((-1, minus))
    } else {
        Err(SpectralError::InconsistentSign {
            relation,
            plus,
            minus,
        })
    }
}

impl RealStructure {
    /// Measures the three signs of `j` against `data`.
    pub fn measure(j: AntilinearOp, data: &N1Data, tol: Tolerance) -> Result<Self, SpectralError> {
        let n = data.dim();
        if j.dim() != n || j.matrix.ncols() != n {
            return Err(SpectralError::Shape {
                what: "real structure",
                n,
                r: j.matrix.nrows(),
                c: j.matrix.ncols(),
            });
        }
        let (epsilon, _) = fit_sign("J^2 = eps", &j.then_antilinear(&j), &identity(n), tol)?;
        let (epsilon_prime, _) = fit_sign(
            "JD = eps' DJ",
            &j.after_linear(&data.dirac).matrix,
            &j.before_linear(&data.dirac).matrix,
            tol,
        )?;
        let (epsilon_second, _) = fit_sign(
            "J gamma = eps'' gamma J",
            &j.after_linear(&data.gamma).matrix,
            &j.before_linear(&data.gamma).matrix,
            tol,
        )?;
        Ok(Self {
            j,
            signs: Signs {
                epsilon,
                epsilon_prime,
                epsilon_second,
            },
        })
    }

    /// The right action `ξ·b = J b* J* ξ` of an operator `b`.
    pub fn right_action(&self, b: &Mat) -> Mat {
        self.j.conjugate(&b.adjoint())
    }

    /// `J₁ ⊗ J₂`, with signs re-measured against the product data.
    pub fn tensor(
        &self,
        other: &RealStructure,
        product: &N1Data,
        tol: Tolerance,
    ) -> Result<RealStructure, SpectralError> {
        RealStructure::measure(self.j.tensor(&other.j), product, tol)
    }
}

/// Checks that `j` is a real structure for `data`: antiunitarity, the three
/// sign relations, and the order-zero and first-order conditions.
pub fn verify_real_structure(data: &N1Data, rs: &RealStructure, tol: Tolerance) -> CheckList {
    let n = data.dim();
    let j = &rs.j;
    let s = |x: i8| if x > 0 { ONE } else { -ONE };
    let mut out = CheckList::new();
    out.record(
        "real.antiunitary",
        "J antiunitary",
        Closeness::new(j.antiunitarity_residual(), tol.eq_tol),
    );
    out.record(
        "real.j-squared",
        "J^2 = eps",
        vanishes(&(j.then_antilinear(j) - identity(n) * s(rs.signs.epsilon)), tol),
    );
    out.record(
        "real.j-dirac",
        "JD = eps' DJ",
        vanishes(
            &(j.after_linear(&data.dirac).matrix
                - j.before_linear(&data.dirac).matrix * s(rs.signs.epsilon_prime)),
            tol,
        ),
    );
    out.record(
        "real.j-grading",
        "J gamma = eps'' gamma J",
        vanishes(
            &(j.after_linear(&data.gamma).matrix
                - j.before_linear(&data.gamma).matrix * s(rs.signs.epsilon_second)),
            tol,
        ),
    );
    let (zero, first) = order_conditions(data, rs);
    out.record(
        "real.order-zero",
        "[J a J*, b] = 0",
        Closeness::new(zero, tol.eq_tol),
    );
    out.record(
        "real.order-one",
        "[J a J*, [D, b]] = 0",
        Closeness::new(first, tol.eq_tol),
    );
    out
}

/// Worst residuals of the order-zero and first-order conditions over the
/// algebra basis.
pub fn order_conditions(data: &N1Data, rs: &RealStructure) -> (f64, f64) {
    let mut zero: f64 = 0.0;
    let mut first: f64 = 0.0;
    let d = &data.dirac;
    for a in &data.algebra.basis {
        let ja = rs.j.conjugate(a);
        for b in &data.algebra.basis {
            zero = zero.max(op_norm(&(&ja * b - b * &ja)));
            let db = d * b - b * d;
            first = first.max(op_norm(&(&ja * &db - &db * &ja)));
        }
    }
    (zero, first)
}

/// KO-dimensions compatible with the measured signs. Even dimensions use all
/// three signs, odd ones only `(ε, ε′)`.
pub fn classify_ko(signs: Signs, with_gamma: bool) -> Result<BTreeSet<u8>, SpectralError> {
    const EVEN: [(u8, i8, i8, i8); 4] = [(0, 1, 1, 1), (2, -1, 1, -1), (4, -1, 1, 1), (6, 1, 1, -1)];
    const ODD: [(u8, i8, i8); 4] = [(1, 1, -1), (3, -1, 1), (5, -1, -1), (7, 1, 1)];
    let found: BTreeSet<u8> = if with_gamma {
        EVEN.iter()
            .filter(|&&(_, e, e1, e2)| {
                (e, e1, e2) == (signs.epsilon, signs.epsilon_prime, signs.epsilon_second)
            })
            .map(|r| r.0)
            .collect()
    } else {
        ODD.iter()
            .filter(|&&(_, e, e1)| (e, e1) == (signs.epsilon, signs.epsilon_prime))
            .map(|r| r.0)
            .collect()
    };
    if found.is_empty() {
        Err(SpectralError::InconsistentKo(signs.to_string()))
    } else {
        Ok(found)
    }
}

/// Where the grading goes in the Dirac operator of a product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProductConvention {
    /// `D₁⊗1 + γ₁⊗D₂`.
    #[default]
    GradeRightFactor,
    /// `D₁⊗γ₂ + 1⊗D₂`.
    GradeLeftFactor,
}

pub fn kasparov_product(d1: &N1Data, d2: &N1Data) -> N1Data {
    kasparov_product_with(d1, d2, ProductConvention::default())
}

pub fn kasparov_product_with(d1: &N1Data, d2: &N1Data, conv: ProductConvention) -> N1Data {
    let (i1, i2) = (identity(d1.dim()), identity(d2.dim()));
    let dirac = match conv {
        ProductConvention::GradeRightFactor => kron(&d1.dirac, &i2) + kron(&d1.gamma, &d2.dirac),
        ProductConvention::GradeLeftFactor => kron(&d1.dirac, &d2.gamma) + kron(&i1, &d2.dirac),
    };
    N1Data {
        algebra: d1.algebra.tensor(&d2.algebra),
        dirac,
        gamma: kron(&d1.gamma, &d2.gamma),
    }
}

/// `½(1⊗1 + g₁⊗1 + 1⊗g₂ − g₁⊗g₂)` for self-adjoint involutions `g₁, g₂`.
///
/// It conjugates `X⊗1 + g₁⊗Y` into `X⊗g₂ + 1⊗Y` whenever `g₁` anticommutes
/// with `X` and `g₂` with `Y`.
pub fn swap_unitary(g1: &Mat, g2: &Mat, tol: Tolerance) -> Result<Mat, SpectralError> {
    for (name, g) in [("first", g1), ("second", g2)] {
        let n = g.nrows();
        if !g.is_square() {
            return Err(LinalgError::NotSquare {
                op: "swap_unitary",
                shape: (g.nrows(), g.ncols()),
            }
            .into());
        }
        let r = op_norm(&(g * g - identity(n))).max(op_norm(&(g - g.adjoint())));
        if r > tol.eq_tol {
            return Err(LinalgError::NotInvolution(format!(
                "{name} operator is not a self-adjoint involution (residual {r:.3e})"
            ))
            .into());
        }
    }
    let (i1, i2) = (identity(g1.nrows()), identity(g2.nrows()));
    let u = kron(&i1, &i2) + kron(g1, &i2) + kron(&i1, g2) - kron(g1, g2);
    Ok(u * crate::linalg::real(0.5))
}

/// Checks of the two Kasparov-product conventions against each other.
pub fn verify_kasparov_equivalence(d1: &N1Data, d2: &N1Data, tol: Tolerance) -> Result<CheckList, SpectralError> {
    let a = kasparov_product_with(d1, d2, ProductConvention::GradeRightFactor);
    let b = kasparov_product_with(d1, d2, ProductConvention::GradeLeftFactor);
    let u = swap_unitary(&d1.gamma, &d2.gamma, tol)?;
    let n = u.nrows();
    let mut out = CheckList::new();
    out.record(
        "kasparov.swap-unitary",
        "U*U = 1",
        vanishes(&(u.adjoint() * &u - identity(n)), tol),
    );
    out.record(
        "kasparov.conventions-equivalent",
        "U (D1x1 + g1xD2) U* = D1xg2 + 1xD2",
        vanishes(&(&u * &a.dirac * u.adjoint() - &b.dirac), tol),
    );
    out.record(
        "kasparov.grading-preserved",
        "U gamma U* = gamma",
        vanishes(&(&u * &a.gamma * u.adjoint() - &a.gamma), tol),
    );
    let sq = kron(&(&d1.dirac * &d1.dirac), &identity(d2.dim()))
        + kron(&identity(d1.dim()), &(&d2.dirac * &d2.dirac));
    out.record(
        "kasparov.square",
        "D^2 = D1^2 x 1 + 1 x D2^2",
        vanishes(&(&a.dirac * &a.dirac - sq), tol),
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, from_real_rows, op_norm};

    fn two_by_two(gamma: Mat) -> N1Data {
        let tol = Tolerance::default();
        let p = from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let alg = StarAlgebra::generate(2, &[p], tol).unwrap();
        N1Data::new(alg, from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]), gamma).unwrap()
    }

    #[test]
    fn two_point_axioms() {
        let tol = Tolerance::default();
        let good = two_by_two(diag(&[ONE, -ONE]));
        assert!(verify_n1(&good, tol).all_pass());
        let bad = two_by_two(identity(2));
        let r = verify_n1(&bad, tol);
        assert!(!r.get("n1.grading-odd-dirac").unwrap().passed());
    }

    #[test]
    fn non_self_adjoint_dirac_fails() {
        let tol = Tolerance::default();
        let mut d = two_by_two(diag(&[ONE, -ONE]));
        d.dirac = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let r = verify_n1(&d, tol);
        assert!(!r.get("n1.dirac-self-adjoint").unwrap().passed());
    }

    #[test]
    fn ko_table_rows() {
        let s = |a, b, c| Signs {
            epsilon: a,
            epsilon_prime: b,
            epsilon_second: c,
        };
        assert_eq!(classify_ko(s(1, 1, 1), true).unwrap(), BTreeSet::from([0]));
        assert_eq!(classify_ko(s(-1, 1, -1), true).unwrap(), BTreeSet::from([2]));
        assert_eq!(classify_ko(s(-1, 1, 1), true).unwrap(), BTreeSet::from([4]));
        assert_eq!(classify_ko(s(1, 1, -1), true).unwrap(), BTreeSet::from([6]));
        assert_eq!(classify_ko(s(1, -1, 1), false).unwrap(), BTreeSet::from([1]));
        assert_eq!(classify_ko(s(1, -1, -1), false).unwrap(), BTreeSet::from([1]));
        assert_eq!(classify_ko(s(-1, 1, 1), false).unwrap(), BTreeSet::from([3]));
        assert_eq!(classify_ko(s(-1, -1, 1), false).unwrap(), BTreeSet::from([5]));
        assert_eq!(classify_ko(s(1, 1, 1), false).unwrap(), BTreeSet::from([7]));
        assert!(classify_ko(s(1, -1, 1), true).is_err());
    }

    #[test]
    fn trivial_factor_is_a_unit() {
        let d = two_by_two(diag(&[ONE, -ONE]));
        let p = kasparov_product(&d, &N1Data::trivial());
        assert_eq!(op_norm(&(&p.dirac - &d.dirac)), 0.0);
        assert_eq!(op_norm(&(&p.gamma - &d.gamma)), 0.0);
        let p = kasparov_product(&N1Data::trivial(), &d);
        assert_eq!(op_norm(&(&p.dirac - &d.dirac)), 0.0);
    }

    #[test]
    fn swap_unitary_with_identity_collapses() {
        let tol = Tolerance::default();
        let g = diag(&[ONE, -ONE]);
        let u = swap_unitary(&identity(2), &g, tol).unwrap();
        assert!(op_norm(&(u - identity(4))) < 1e-15);
        assert!(swap_unitary(&(identity(2) * crate::linalg::real(2.0)), &g, tol).is_err());
    }

    #[test]
    fn product_of_two_point_spaces() {
        let tol = Tolerance::default();
        let d = two_by_two(diag(&[ONE, -ONE]));
        let p = kasparov_product(&d, &d);
        assert!(verify_n1(&p, tol).all_pass());
        assert!(verify_kasparov_equivalence(&d, &d, tol).unwrap().all_pass());
    }
}
