//! Products of N=(1,1) data. With `γ = γ₁⊗γ₂` and `⋆ = ⋆₁⊗⋆₂` there are
//! several ways to distribute gradings and Hodge operators over the two
//! Dirac operators; [`Variant::Main`] is the one that matches the extension
//! of a product geometry, the others are kept as foils.

use std::fmt;
use std::str::FromStr;

use crate::checks::CheckList;
use crate::extension::N11Data;
use crate::linalg::{identity, kron, vanishes, Mat, Tolerance};
use crate::spectral::{kasparov_product, swap_unitary, SpectralError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    /// `𝔇₁⊗1 + ⋆₁⊗𝔇₂`, `𝔇̄₁⊗⋆₂ + γ₁⊗𝔇̄₂`.
    Main,
    /// `𝔇₁⊗1 + ⋆₁⊗𝔇₂`, `𝔇̄₁⊗γ₂ + ⋆₁⊗𝔇̄₂`.
    V1,
    /// `𝔇₁⊗⋆₂ + 1⊗𝔇₂`, `𝔇̄₁⊗γ₂ + ⋆₁⊗𝔇̄₂`.
    V2,
    /// `𝔇₁⊗⋆₂ + 1⊗𝔇₂`, `𝔇̄₁⊗⋆₂ + γ₁⊗𝔇̄₂`.
    V3,
    /// `𝔇₁⊗1 + γ₁⊗𝔇₂`, `𝔇̄₁⊗1 + γ₁⊗𝔇̄₂`.
    V4,
    /// `𝔇₁⊗γ₂ + 1⊗𝔇₂`, `𝔇̄₁⊗γ₂ + 1⊗𝔇̄₂`.
    V5,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Main,
        Variant::V1,
        Variant::V2,
        Variant::V3,
        Variant::V4,
        Variant::V5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Main => "main",
            Variant::V1 => "v1",
            Variant::V2 => "v2",
            Variant::V3 => "v3",
            Variant::V4 => "v4",
            Variant::V5 => "v5",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| format!("unknown product variant {s:?} (expected main or v1..v5)"))
    }
}

/// The product of two N=(1,1) data sets with the given placement of
/// gradings and Hodge operators.
pub fn n11_product(d1: &N11Data, d2: &N11Data, variant: Variant) -> N11Data {
    let (i1, i2) = (identity(d1.dim()), identity(d2.dim()));
    let (g1, g2, s1, s2) = (&d1.gamma, &d2.gamma, &d1.hodge, &d2.hodge);
    let (a1, a2, b1, b2) = (&d1.dirac, &d2.dirac, &d1.dirac_bar, &d2.dirac_bar);
    let (dirac, dirac_bar) = match variant {
        Variant::Main => (kron(a1, &i2) + kron(s1, a2), kron(b1, s2) + kron(g1, b2)),
        Variant::V1 => (kron(a1, &i2) + kron(s1, a2), kron(b1, g2) + kron(s1, b2)),
        Variant::V2 => (kron(a1, s2) + kron(&i1, a2), kron(b1, g2) + kron(s1, b2)),
        Variant::V3 => (kron(a1, s2) + kron(&i1, a2), kron(b1, s2) + kron(g1, b2)),
        Variant::V4 => (kron(a1, &i2) + kron(g1, a2), kron(b1, &i2) + kron(g1, b2)),
        Variant::V5 => (kron(a1, g2) + kron(&i1, a2), kron(b1, g2) + kron(&i1, b2)),
    };
    N11Data {
        algebra: d1.algebra.tensor(&d2.algebra),
        dirac,
        dirac_bar,
        gamma: kron(g1, g2),
        hodge: kron(s1, s2),
    }
}

/// Checks that the even triple `(A, H, 𝔇, γ)` of the main product is
/// unitarily equivalent to the graded product of the even triples of the
/// factors: `U` built from `(⋆₁, γ₂)` followed by `V` built from `(γ₁, γ₂)`
/// conjugates `𝔇₁⊗1 + ⋆₁⊗𝔇₂` into `𝔇₁⊗1 + γ₁⊗𝔇₂` and fixes `γ₁⊗γ₂`.
pub fn associated_n1_equivalence(d1: &N11Data, d2: &N11Data, tol: Tolerance) -> Result<CheckList, SpectralError> {
    let main = n11_product(d1, d2, Variant::Main);
    let graded = kasparov_product(&d1.to_n1(), &d2.to_n1());
    let u = swap_unitary(&d1.hodge, &d2.gamma, tol)?;
    let v = swap_unitary(&d1.gamma, &d2.gamma, tol)?;
    let w: Mat = &v * &u;
    let n = w.nrows();
    let mut out = CheckList::new();
    out.record(
        "products.equivalence-unitary",
        "W*W = 1 for W = V U",
        vanishes(&(w.adjoint() * &w - identity(n)), tol),
    );
    out.record(
        "products.equivalence-dirac",
        "W (D1 x 1 + star1 x D2) W* = D1 x 1 + gamma1 x D2",
        vanishes(&(&w * &main.dirac * w.adjoint() - &graded.dirac), tol),
    );
    out.record(
        "products.equivalence-grading",
        "W gamma W* = gamma",
        vanishes(&(&w * &main.gamma * w.adjoint() - &graded.gamma), tol),
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::verify_n11;
    use crate::gallery;
    use crate::linalg::op_norm;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
        assert!("v6".parse::<Variant>().is_err());
    }

    #[test]
    fn trivial_data_is_a_unit_for_every_variant() {
        let d = gallery::n11_scalar();
        let one = N11Data::trivial();
        for v in Variant::ALL {
            for p in [n11_product(&one, &d, v), n11_product(&d, &one, v)] {
                assert!(op_norm(&(&p.dirac - &d.dirac)) < 1e-14, "{v}");
                assert!(op_norm(&(&p.dirac_bar - &d.dirac_bar)) < 1e-14, "{v}");
                assert!(op_norm(&(&p.hodge - &d.hodge)) < 1e-14, "{v}");
            }
        }
    }

    #[test]
    fn every_variant_of_the_scalar_square_is_n11() {
        let d = gallery::n11_scalar();
        for v in Variant::ALL {
            let checks = verify_n11(&n11_product(&d, &d, v), tol());
            assert!(checks.all_pass(), "{v}: {:?}", checks.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn main_product_is_equivalent_to_the_graded_product() {
        let d = gallery::n11_scalar();
        let checks = associated_n1_equivalence(&d, &d, tol()).unwrap();
        assert!(checks.all_pass(), "{:?}", checks.failures().collect::<Vec<_>>());
    }
}
