use ncspec::gallery::{random_n11_from_differential, random_n11_from_pair};
use ncspec::linalg::{
    column_space, complement, diag, frobenius, hermitian_eigen, hstack, identity, kron, left_singular, op_norm,
    random_hermitian, random_matrix, random_unitary, Mat, C64, ONE, ZERO,
};
use ncspec::{verify_n11, CheckList, Tolerance};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CASES: u32 = 128;

const D_CONDITIONS: [&str; 3] = ["n11.d-nilpotent", "n11.d-odd", "n11.d-hodge"];
const PAIR_CONDITIONS: [&str; 6] = [
    "n11.pair-square",
    "n11.pair-anticommute",
    "n11.pair-grading-dirac",
    "n11.pair-grading-dirac-bar",
    "n11.pair-hodge-dirac",
    "n11.pair-hodge-dirac-bar",
];

fn tol() -> Tolerance {
    Tolerance::default()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn passes(checks: &CheckList, ids: &[&str]) -> bool {
    ids.iter().all(|id| checks.get(id).unwrap().passed())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn differential_conditions_give_pair_conditions(k in 1usize..=3, seed in any::<u64>()) {
        let data = random_n11_from_differential(k, &mut rng(seed));
        let checks = verify_n11(&data, tol());
        prop_assert!(passes(&checks, &D_CONDITIONS));
        prop_assert!(passes(&checks, &PAIR_CONDITIONS));
        prop_assert!(checks.all_pass(), "{:?}", checks.failures().collect::<Vec<_>>());
    }

    #[test]
    fn pair_conditions_give_differential_conditions(k in 1usize..=3, seed in any::<u64>()) {
        let data = random_n11_from_pair(k, &mut rng(seed));
        let checks = verify_n11(&data, tol());
        prop_assert!(passes(&checks, &PAIR_CONDITIONS));
        prop_assert!(passes(&checks, &D_CONDITIONS));
        prop_assert!(checks.all_pass(), "{:?}", checks.failures().collect::<Vec<_>>());
    }

    #[test]
    fn broken_instances_fail_on_both_sides(k in 1usize..=3, seed in any::<u64>()) {
        let mut r = rng(seed);
        let mut data = random_n11_from_pair(k, &mut r);
        data.dirac_bar += random_hermitian(4 * k, &mut r);
        let checks = verify_n11(&data, tol());
        prop_assert!(!passes(&checks, &PAIR_CONDITIONS));
        prop_assert!(!passes(&checks, &D_CONDITIONS));
        for id in ["n11.equivalence-nilpotent", "n11.equivalence-grading", "n11.equivalence-hodge"] {
            prop_assert!(checks.get(id).unwrap().passed(), "{id}");
        }
    }

    #[test]
    fn kron_mixed_product(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random_matrix(2, 3, &mut r), random_matrix(3, 2, &mut r));
        let (c, d) = (random_matrix(3, 2, &mut r), random_matrix(2, 2, &mut r));
        let lhs = kron(&a, &b) * kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!(op_norm(&(lhs - rhs)) < 1e-12);
    }

    #[test]
    fn eigen_reconstructs(n in 1usize..=8, seed in any::<u64>()) {
        let h = random_hermitian(n, &mut rng(seed));
        let (vals, vecs) = hermitian_eigen(&h);
        let lambda = diag(&vals.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>());
        prop_assert!(op_norm(&(&vecs * lambda * vecs.adjoint() - &h)) < 1e-11);
        prop_assert!(op_norm(&(vecs.adjoint() * &vecs - identity(n))) < 1e-12);
    }

    #[test]
    fn op_norm_is_unitarily_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_matrix(5, 5, &mut r);
        let rotated = random_unitary(5, &mut r) * &m * random_unitary(5, &mut r);
        prop_assert!((op_norm(&rotated) - op_norm(&m)).abs() < 1e-11);
        prop_assert!(op_norm(&m) <= frobenius(&m) + 1e-12);
    }

    #[test]
    fn singular_values_of_low_rank_products(r in 0usize..=4, seed in any::<u64>()) {
        let mut g = rng(seed);
        let keep = diag(&(0..4).map(|i| if i < r { ONE } else { ZERO }).collect::<Vec<_>>());
        let m = random_matrix(6, 4, &mut g) * keep * random_matrix(4, 5, &mut g);
        let (sv, u) = left_singular(&m);
        prop_assert!(op_norm(&(u.adjoint() * &u - identity(u.ncols()))) < 1e-10);
        let energy: f64 = sv.iter().map(|s| s * s).sum();
        prop_assert!((energy - frobenius(&m).powi(2)).abs() < 1e-9 * (1.0 + energy));
        prop_assert_eq!(column_space(&m, tol()).dim(), r);
    }

    #[test]
    fn complement_completes_a_basis(r in 1usize..=5, seed in any::<u64>()) {
        let m: Mat = random_matrix(6, r, &mut rng(seed));
        let basis = column_space(&m, tol());
        let b = Mat::from_columns(&(0..basis.dim()).map(|k| basis.column(k)).collect::<Vec<_>>());
        let c = complement(&b);
        prop_assert_eq!(b.ncols() + c.ncols(), 6);
        let full = hstack(&[b, c]);
        prop_assert!(op_norm(&(full.adjoint() * &full - identity(6))) < 1e-10);
    }
}
