//! Dense complex linear algebra: linear and antilinear operators, subspaces,
//! quotients and the tolerance policy shared by every check in the crate.
//!
//! Matrices are flattened column-major whenever an operator has to be viewed
//! as a vector (spans of operators, coordinates in an operator basis).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;
pub type Mat = DMatrix<C64>;
pub type Vector = DVector<C64>;
/// A linear operator is just its matrix.
pub type LinearOp = Mat;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("{op}: dimension mismatch {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op}: expected a square matrix, got {shape:?}")]
    NotSquare {
        op: &'static str,
        shape: (usize, usize),
    },
    #[error("invalid tolerance: eq_tol={eq_tol}, rank_tol={rank_tol}")]
    InvalidTolerance { eq_tol: f64, rank_tol: f64 },
    #[error("{0}")]
    NotInvolution(String),
}

/// Thresholds used for every equality and rank decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Operator-norm threshold for deciding `X == Y`.
    pub eq_tol: f64,
    /// Singular values at or below this are treated as zero.
    pub rank_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eq_tol: 1e-10,
            rank_tol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(eq_tol: f64, rank_tol: f64) -> Result<Self, LinalgError> {
        let ok = |t: f64| t.is_finite() && t > 0.0 && t < 1.0;
        if ok(eq_tol) && ok(rank_tol) {
            Ok(Self { eq_tol, rank_tol })
        } else {
            Err(LinalgError::InvalidTolerance { eq_tol, rank_tol })
        }
    }

    /// Same rank cutoff, different equality threshold.
    pub fn with_eq(self, eq_tol: f64) -> Result<Self, LinalgError> {
        Self::new(eq_tol, self.rank_tol)
    }
}

/// Outcome of a numerical comparison: the measured residual and the
/// threshold it was held to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Closeness {
    pub residual: f64,
    pub threshold: f64,
}

impl Closeness {
    pub fn new(residual: f64, threshold: f64) -> Self {
        Self {
            residual,
            threshold,
        }
    }

    pub fn passes(&self) -> bool {
        self.residual <= self.threshold
    }
}

fn shape(m: &Mat) -> (usize, usize) {
    (m.nrows(), m.ncols())
}

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> Mat {
    Mat::zeros(r, c)
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The standard basis vector `e_i` of `C^n`.
pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[i] = ONE;
    v
}

/// Builds a matrix from rows of complex entries.
pub fn from_rows(rows: &[&[C64]]) -> Mat {
    let r = rows.len();
    let cols = rows.first().map_or(0, |row| row.len());
    Mat::from_fn(r, cols, |i, j| rows[i][j])
}

/// Builds a matrix from rows of real entries.
pub fn from_real_rows(rows: &[&[f64]]) -> Mat {
    let r = rows.len();
    let cols = rows.first().map_or(0, |row| row.len());
    Mat::from_fn(r, cols, |i, j| real(rows[i][j]))
}

pub fn diag(entries: &[C64]) -> Mat {
    Mat::from_diagonal(&Vector::from_column_slice(entries))
}

pub fn adjoint(x: &Mat) -> Mat {
    x.adjoint()
}

pub fn conj(x: &Mat) -> Mat {
    x.map(|z| z.conj())
}

pub fn commutator(x: &Mat, y: &Mat) -> Result<Mat, LinalgError> {
    check_square_pair("commutator", x, y)?;
    Ok(x * y - y * x)
}

pub fn anticommutator(x: &Mat, y: &Mat) -> Result<Mat, LinalgError> {
    check_square_pair("anticommutator", x, y)?;
    Ok(x * y + y * x)
}

fn check_square_pair(op: &'static str, x: &Mat, y: &Mat) -> Result<(), LinalgError> {
    if !x.is_square() {
        return Err(LinalgError::NotSquare { op, shape: shape(x) });
    }
    if shape(x) != shape(y) {
        return Err(LinalgError::DimensionMismatch {
            op,
            left: shape(x),
            right: shape(y),
        });
    }
    Ok(())
}

/// Kronecker product `a ⊗ b`, with the index of `b` varying fastest.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

pub fn kron_vec(a: &Vector, b: &Vector) -> Vector {
    a.kronecker(b)
}

pub fn kron3(a: &Mat, b: &Mat, c: &Mat) -> Mat {
    kron(&kron(a, b), c)
}

/// Column-major flattening.
pub fn vectorize(m: &Mat) -> Vector {
    Vector::from_column_slice(m.as_slice())
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &[C64], rows: usize, cols: usize) -> Mat {
    Mat::from_column_slice(rows, cols, v)
}

/// Largest singular value; zero for empty matrices.
pub fn op_norm(m: &Mat) -> f64 {
    if m.is_empty() || m.iter().all(|z| *z == ZERO) {
        return 0.0;
    }
    let gram = if m.nrows() <= m.ncols() {
        matmul(m, &m.adjoint())
    } else {
        matmul(&m.adjoint(), m)
    };
    hermitian_spectrum(&gram).last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

pub fn frobenius(m: &Mat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Operator-norm comparison of two operators of equal shape.
pub fn op_equal(x: &Mat, y: &Mat, tol: Tolerance) -> Result<Closeness, LinalgError> {
    if shape(x) != shape(y) {
        return Err(LinalgError::DimensionMismatch {
            op: "op_equal",
            left: shape(x),
            right: shape(y),
        });
    }
    Ok(Closeness::new(op_norm(&(x - y)), tol.eq_tol))
}

/// `‖X‖` measured against `eq_tol`; the usual shape of "this should vanish".
pub fn vanishes(x: &Mat, tol: Tolerance) -> Closeness {
    Closeness::new(op_norm(x), tol.eq_tol)
}

/// Hilbert–Schmidt inner product `tr(X* Y)`.
pub fn hs_inner(x: &Mat, y: &Mat) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

pub fn is_hermitian_residual(x: &Mat) -> f64 {
    op_norm(&(x - x.adjoint()))
}

/// An operator acting as `v ↦ M·conj(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOp {
    pub matrix: Mat,
}

impl AntilinearOp {
    pub fn new(matrix: Mat) -> Self {
        Self { matrix }
    }

    /// Plain complex conjugation on `C^n`.
    pub fn conjugation(n: usize) -> Self {
        Self::new(identity(n))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        &self.matrix * v.map(|z| z.conj())
    }

    /// Applies the operator to every column of `x`.
    pub fn apply_columns(&self, x: &Mat) -> Mat {
        &self.matrix * conj(x)
    }

    /// `self ∘ other` for two antilinear maps; the result is linear.
    pub fn then_antilinear(&self, other: &AntilinearOp) -> Mat {
        &self.matrix * conj(&other.matrix)
    }

    /// `self ∘ x` for a linear `x`; antilinear.
    pub fn after_linear(&self, x: &Mat) -> AntilinearOp {
        AntilinearOp::new(&self.matrix * conj(x))
    }

    /// `x ∘ self` for a linear `x`; antilinear.
    pub fn before_linear(&self, x: &Mat) -> AntilinearOp {
        AntilinearOp::new(x * &self.matrix)
    }

    /// Adjoint of an antilinear map: `⟨Av, w⟩ = conj⟨v, A* w⟩`.
    pub fn adjoint(&self) -> AntilinearOp {
        AntilinearOp::new(self.matrix.transpose())
    }

    /// The linear operator `A X A*`.
    pub fn conjugate(&self, x: &Mat) -> Mat {
        &self.matrix * conj(x) * self.matrix.adjoint()
    }

    /// Deviation of the underlying matrix from unitarity; zero exactly for
    /// antiunitary operators.
    pub fn antiunitarity_residual(&self) -> f64 {
        op_norm(&(self.matrix.adjoint() * &self.matrix - identity(self.dim())))
    }

    pub fn tensor(&self, other: &AntilinearOp) -> AntilinearOp {
        AntilinearOp::new(kron(&self.matrix, &other.matrix))
    }
}

/// A subspace of `C^n` given by orthonormal basis columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    pub basis: Mat,
    pub tol: Tolerance,
}

impl Subspace {
    pub fn zero(ambient: usize, tol: Tolerance) -> Self {
        Self {
            basis: zeros(ambient, 0),
            tol,
        }
    }

    pub fn full(ambient: usize, tol: Tolerance) -> Self {
        Self {
            basis: identity(ambient),
            tol,
        }
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn projector(&self) -> Mat {
        &self.basis * self.basis.adjoint()
    }

    /// Distance from `v` to the subspace.
    pub fn distance(&self, v: &Vector) -> f64 {
        (v - &self.basis * (self.basis.adjoint() * v)).norm()
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> Subspace {
        let (_, comp) = split_range(&self.basis, self.tol);
        Subspace {
            basis: comp,
            tol: self.tol,
        }
    }

    pub fn column(&self, k: usize) -> Vector {
        self.basis.column(k).into_owned()
    }
}

/// Orthonormal basis of the span of `vectors` (all of length `ambient`).
pub fn span_closure(vectors: &[Vector], ambient: usize, tol: Tolerance) -> Subspace {
    if vectors.is_empty() {
        return Subspace::zero(ambient, tol);
    }
    let m = Mat::from_columns(vectors);
    column_space(&m, tol)
}

/// Orthonormal basis of the column space of `m`.
pub fn column_space(m: &Mat, tol: Tolerance) -> Subspace {
    let (values, vectors) = left_singular(m);
    let rank = values.iter().filter(|&&s| s > tol.rank_tol).count();
    Subspace {
        basis: vectors.columns(0, rank).into_owned(),
        tol,
    }
}

/// Singular values of `m` in descending order with the matching left
/// singular vectors, one per value, `min(rows, cols)` of each.
///
/// A Householder QR reduces `m` to a square triangular factor `R`; the
/// singular pairs of `R` are read off the Hermitian dilation
/// `[[0, R], [R*, 0]]`, whose eigenvalues are `±σ` and whose eigenvectors
/// are `(u, v)/√2`. This avoids squaring the singular values.
pub fn left_singular(m: &Mat) -> (Vec<f64>, Mat) {
    let (rows, cols) = (m.nrows(), m.ncols());
    let k = rows.min(cols);
    if k == 0 || m.iter().all(|z| *z == ZERO) {
        return (vec![0.0; k], identity(rows).columns(0, k).into_owned());
    }
    let (outer, r) = if rows >= cols {
        let qr = m.clone().qr();
        (Some(qr.q()), qr.r())
    } else {
        (None, m.adjoint().qr().r().adjoint())
    };
    let mut dilation = zeros(2 * k, 2 * k);
    dilation.view_mut((0, k), (k, k)).copy_from(&r);
    dilation.view_mut((k, 0), (k, k)).copy_from(&r.adjoint());
    let (vals, vecs) = hermitian_eigen(&dilation);
    // Eigenvalues ascend; the top k are the singular values.
    let mut values = Vec::with_capacity(k);
    let mut left = zeros(k, k);
    for c in 0..k {
        let idx = 2 * k - 1 - c;
        values.push(vals[idx].max(0.0));
        let u = vecs.view((0, idx), (k, 1)).into_owned();
        let norm = u.norm();
        if norm > 0.0 {
            left.set_column(c, &(u.column(0) / real(norm)));
        }
    }
    // Zero singular values pair up arbitrarily in the dilation; replace
    // their vectors by an orthonormal completion of the others.
    let rank = values.iter().filter(|&&s| s > f64::EPSILON * values[0] * k as f64).count();
    if rank < k {
        let kept = left.columns(0, rank).into_owned();
        let proj = identity(k) - &kept * kept.adjoint();
        let (pv, pvecs) = hermitian_eigen(&proj);
        for (c, j) in (rank..k).zip((0..k).rev()) {
            if pv[j] < 0.5 {
                break;
            }
            left.set_column(c, &pvecs.column(j));
        }
    }
    let left = match outer {
        Some(q) => matmul(&q, &left),
        None => left,
    };
    (values, left)
}

/// A matrix with entries uniform in the unit square.
pub fn random_matrix<R: rand::Rng>(rows: usize, cols: usize, rng: &mut R) -> Mat {
    Mat::from_fn(rows, cols, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// `X + X*` for a random `X`.
pub fn random_hermitian<R: rand::Rng>(n: usize, rng: &mut R) -> Mat {
    let x = random_matrix(n, n, rng);
    &x + x.adjoint()
}

/// The eigenvectors of a random Hermitian matrix.
pub fn random_unitary<R: rand::Rng>(n: usize, rng: &mut R) -> Mat {
    hermitian_eigen(&random_hermitian(n, rng)).1
}

/// Column space of the horizontal concatenation of `blocks`.
pub fn joint_column_space(blocks: &[Mat], ambient: usize, tol: Tolerance) -> Subspace {
    if blocks.is_empty() {
        return Subspace::zero(ambient, tol);
    }
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut m = zeros(ambient, cols);
    let mut off = 0;
    for b in blocks {
        m.view_mut((0, off), (ambient, b.ncols())).copy_from(b);
        off += b.ncols();
    }
    column_space(&m, tol)
}

/// Splits `C^n` into the column space of `m` and its orthogonal complement,
/// both as orthonormal bases.
pub fn split_range(m: &Mat, tol: Tolerance) -> (Mat, Mat) {
    let n = m.nrows();
    if n == 0 {
        return (zeros(0, 0), zeros(0, 0));
    }
    let range = column_space(m, tol).basis;
    (range.clone(), complement(&range))
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `basis`.
pub fn complement(basis: &Mat) -> Mat {
    let n = basis.nrows();
    let k = basis.ncols();
    if k == 0 {
        return identity(n);
    }
    let proj = identity(n) - matmul(basis, &basis.adjoint());
    let (vals, vecs) = hermitian_eigen(&proj);
    let keep: Vec<usize> = (0..n).filter(|&j| vals[j] > 0.5).collect();
    let mut out = zeros(n, keep.len());
    for (c, &j) in keep.iter().enumerate() {
        out.set_column(c, &vecs.column(j));
    }
    out
}

/// `C^n` modulo a relation subspace, modelled by the orthogonal complement of
/// the relations. A class is represented by its coordinates in that
/// complement. Only the complement is stored; the relations are recovered
/// from it on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct Quotient {
    /// Orthonormal basis of the complement of the relations (ambient × dim).
    pub section: Mat,
}

impl Quotient {
    /// Dimension of the relation subspace.
    pub fn relation_dim(&self) -> usize {
        self.ambient() - self.dim()
    }

    /// Orthonormal basis of the relation subspace.
    pub fn relations(&self) -> Mat {
        complement(&self.section)
    }

    /// `v − SS*v`: the part of each column of `v` lying in the relations.
    pub fn relation_part(&self, v: &Mat) -> Mat {
        v - chain(&[&self.section, &self.section.adjoint(), v])
    }

    pub fn ambient(&self) -> usize {
        self.section.nrows()
    }

    pub fn dim(&self) -> usize {
        self.section.ncols()
    }

    /// Orthogonal projector onto the chosen representatives.
    pub fn projector(&self) -> Mat {
        &self.section * self.section.adjoint()
    }

    /// Coordinates of the class of each column of `v`.
    pub fn classes(&self, v: &Mat) -> Mat {
        self.section.adjoint() * v
    }

    /// Canonical representatives of classes given in coordinates.
    pub fn lift(&self, coords: &Mat) -> Mat {
        &self.section * coords
    }

    /// Matrix of the map induced on quotients by an ambient linear map
    /// `f: ambient(self) → ambient(target)`.
    pub fn induced(&self, f: &Mat, target: &Quotient) -> Mat {
        target.section.adjoint() * f * &self.section
    }

    /// How far `f` is from sending relations to relations: the norm of
    /// `f` on the relations as seen in the target quotient. The relations
    /// are the orthogonal complement of the section, so this is
    /// `T*f(1 − SS*)` and never needs the (usually much wider) relation
    /// basis.
    pub fn descent_residual(&self, f: &Mat, target: &Quotient) -> f64 {
        if self.relation_dim() == 0 || target.dim() == 0 {
            return 0.0;
        }
        let tf = matmul(&target.section.adjoint(), f);
        let kept = chain(&[&tf, &self.section, &self.section.adjoint()]);
        op_norm(&(tf - kept))
    }
}

pub fn quotient_by(ambient: usize, relations: Subspace) -> Quotient {
    debug_assert_eq!(relations.ambient(), ambient);
    Quotient {
        section: relations.complement().basis,
    }
}

/// Quotient of `C^n` by the joint range of `blocks`.
pub fn quotient_by_ranges(blocks: &[Mat], ambient: usize, tol: Tolerance) -> Quotient {
    let section = if blocks.is_empty() {
        identity(ambient)
    } else {
        joint_column_space(blocks, ambient, tol).complement().basis
    };
    Quotient { section }
}

/// Quotient of `C^n` by the joint range of linear maps `C^m → C^n`.
///
/// The range of `G = Σ X X*` is found by a diagonally pivoted Cholesky
/// factorization `P* G P = L L*`, stopped once every remaining Schur
/// complement diagonal entry is at most `rank_tol · max(1, max_i G_ii)`.
/// With `L = [L₁; L₂]` and `L₁` square lower triangular, the complement of
/// the range is spanned by the columns of `P [−L₁^{-*} L₂*; 1]`. This costs
/// a fraction of a full eigendecomposition when the relations have large
/// rank.
pub fn quotient_by_maps(blocks: &[Mat], ambient: usize, tol: Tolerance) -> Quotient {
    let mut g = zeros(ambient, ambient);
    for x in blocks {
        g += matmul(x, &x.adjoint());
    }
    let (perm, l) = pivoted_cholesky(&g, tol.rank_tol);
    let rank = l.ncols();
    let unpermute = |m: &Mat| {
        let mut out = zeros(ambient, m.ncols());
        for (row, &p) in perm.iter().enumerate() {
            out.set_row(p, &m.row(row));
        }
        out
    };
    let section = if rank == ambient {
        zeros(ambient, 0)
    } else if rank == 0 {
        identity(ambient)
    } else {
        let l1 = l.view((0, 0), (rank, rank)).into_owned();
        let l2 = l.view((rank, 0), (ambient - rank, rank)).into_owned();
        let top = -l1
            .adjoint()
            .solve_upper_triangular(&l2.adjoint())
            .expect("pivots are positive");
        let mut null = zeros(ambient, ambient - rank);
        null.view_mut((0, 0), (rank, ambient - rank)).copy_from(&top);
        null.view_mut((rank, 0), (ambient - rank, ambient - rank))
            .copy_from(&identity(ambient - rank));
        unpermute(&null).qr().q()
    };
    Quotient { section }
}

/// Diagonally pivoted Cholesky factorization of a positive semidefinite
/// `g`: returns the pivot order `perm` and `L` (n × rank) with
/// `g[perm][:, perm] ≈ L L*`, stopping when no remaining pivot exceeds
/// `rel · max(1, max_i g_ii)`.
pub fn pivoted_cholesky(g: &Mat, rel: f64) -> (Vec<usize>, Mat) {
    let n = g.nrows();
    let mut a = g.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let scale = (0..n).map(|i| g[(i, i)].re).fold(1.0, f64::max);
    let cut = rel * scale;
    let mut rank = 0;
    for k in 0..n {
        let (j, pivot) = (k..n)
            .map(|i| (i, a[(i, i)].re))
            .fold((k, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best });
        if pivot <= cut {
            break;
        }
        if j != k {
            a.swap_rows(j, k);
            a.swap_columns(j, k);
            perm.swap(j, k);
        }
        let d = pivot.sqrt();
        a[(k, k)] = C64::new(d, 0.0);
        for i in k + 1..n {
            a[(i, k)] /= d;
        }
        for c in k + 1..n {
            let f = a[(c, k)].conj();
            if f == ZERO {
                continue;
            }
            // The whole trailing block is kept current: later symmetric
            // pivot swaps read entries on both sides of the diagonal.
            for i in k + 1..n {
                let v = a[(i, k)];
                a[(i, c)] -= v * f;
            }
        }
        rank += 1;
    }
    let mut l = zeros(n, rank);
    for c in 0..rank {
        for i in c..n {
            l[(i, c)] = a[(i, c)];
        }
    }
    (perm, l)
}

/// Complex matrix product. Large products are split into four real ones,
/// which run on a cache-blocked kernel and are several times faster than
/// the generic complex loop.
pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.ncols(), b.nrows(), "matmul: inner dimensions differ");
    if a.nrows() * a.ncols() * b.ncols() < 32 * 32 * 32 {
        return a * b;
    }
    let (ar, ai) = (a.map(|z| z.re), a.map(|z| z.im));
    let (br, bi) = (b.map(|z| z.re), b.map(|z| z.im));
    let rr: DMatrix<f64> = &ar * &br - &ai * &bi;
    let ii: DMatrix<f64> = &ar * &bi + &ai * &br;
    Mat::from_fn(rr.nrows(), rr.ncols(), |i, j| C64::new(rr[(i, j)], ii[(i, j)]))
}

/// `a₁ a₂ ⋯ a_k` evaluated with [`matmul`].
pub fn chain(factors: &[&Mat]) -> Mat {
    let mut it = factors.iter();
    let first = (*it.next().expect("chain of no factors")).clone();
    it.fold(first, |acc, m| matmul(&acc, m))
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(h: &Mat) -> (Vec<f64>, Mat) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let sym = (h + h.adjoint()) * real(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vecs = Mat::from_columns(
        &order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).into_owned())
            .collect::<Vec<_>>(),
    );
    (vals, vecs)
}

/// Eigenvalue multiset of a Hermitian matrix, ascending.
pub fn hermitian_spectrum(h: &Mat) -> Vec<f64> {
    if h.nrows() == 0 {
        return Vec::new();
    }
    let sym = (h + h.adjoint()) * real(0.5);
    let mut vals: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    vals
}

/// Factorization of a positive semidefinite Gram matrix `G = π* π` with `π`
/// surjective onto the positive part: `pi` maps coordinates to an orthonormal
/// frame of the form, `lift` is a right inverse of `pi`.
#[derive(Debug, Clone)]
pub struct GramFactor {
    pub pi: Mat,
    pub lift: Mat,
    pub min_eigenvalue: f64,
    pub kernel_dim: usize,
}

pub fn gram_factor(g: &Mat, tol: Tolerance) -> GramFactor {
    let (vals, vecs) = hermitian_eigen(g);
    let n = vals.len();
    let keep: Vec<usize> = (0..n).filter(|&k| vals[k] > tol.rank_tol).collect();
    let min_eigenvalue = vals.first().copied().unwrap_or(0.0);
    if keep.len() == n {
        // Symmetric square root keeps the coordinates as close as possible to
        // the original ones.
        let sqrt = Mat::from_diagonal(&Vector::from_iterator(n, vals.iter().map(|&l| real(l.sqrt()))));
        let isqrt =
            Mat::from_diagonal(&Vector::from_iterator(n, vals.iter().map(|&l| real(1.0 / l.sqrt()))));
        let pi = &vecs * sqrt * vecs.adjoint();
        let lift = &vecs * isqrt * vecs.adjoint();
        return GramFactor {
            pi,
            lift,
            min_eigenvalue,
            kernel_dim: 0,
        };
    }
    let k = keep.len();
    let mut pi = zeros(k, n);
    let mut lift = zeros(n, k);
    for (row, &idx) in keep.iter().enumerate() {
        let s = vals[idx].sqrt();
        let v = vecs.column(idx);
        for j in 0..n {
            pi[(row, j)] = v[j].conj() * s;
            lift[(j, row)] = v[j] / s;
        }
    }
    GramFactor {
        pi,
        lift,
        min_eigenvalue,
        kernel_dim: n - k,
    }
}

/// Orthonormal basis of the common null space of the linear maps in
/// `blocks` (all with the same number of columns).
pub fn joint_null_space(blocks: &[Mat], cols: usize, tol: Tolerance) -> Mat {
    if blocks.is_empty() {
        return identity(cols);
    }
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut stacked = zeros(rows, cols);
    let mut off = 0;
    for b in blocks {
        stacked.view_mut((off, 0), (b.nrows(), cols)).copy_from(b);
        off += b.nrows();
    }
    // Null space of S is the complement of the column space of S*.
    let (_, comp) = split_range(&stacked.adjoint(), tol);
    comp
}

/// `C^n ⊗ C^m → C^m ⊗ C^n` swapping the two tensor factors.
pub fn swap_factors(n: usize, m: usize) -> Mat {
    let mut p = zeros(n * m, n * m);
    for i in 0..n {
        for j in 0..m {
            p[(j * n + i, i * m + j)] = ONE;
        }
    }
    p
}

/// `[X_1 | X_2 | ...]` for blocks of equal height.
pub fn hstack(blocks: &[Mat]) -> Mat {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut m = zeros(rows, cols);
    let mut off = 0;
    for b in blocks {
        m.view_mut((0, off), (rows, b.ncols())).copy_from(b);
        off += b.ncols();
    }
    m
}

/// Block-diagonal `X_1 ⊕ X_2 ⊕ ...`.
pub fn direct_sum(blocks: &[Mat]) -> Mat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut m = zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        m.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn adjoint_of_nilpotent() {
        let x = from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert_eq!(adjoint(&x), from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]));
        assert_eq!(adjoint(&adjoint(&x)), x);
    }

    #[test]
    fn graded_anticommutator() {
        let g = diag(&[ONE, -ONE]);
        let d = from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(anticommutator(&g, &g).unwrap(), identity(2) * real(2.0));
        assert!(op_norm(&anticommutator(&g, &d).unwrap()) == 0.0);
        assert!(op_norm(&commutator(&d, &identity(2)).unwrap()) == 0.0);
        assert!(commutator(&g, &identity(3)).is_err());
    }

    #[test]
    fn span_of_duplicates() {
        let e1 = Vector::from_column_slice(&[ONE, ZERO]);
        let e2 = Vector::from_column_slice(&[ZERO, ONE]);
        assert_eq!(span_closure(&[e1.clone(), e1.clone()], 2, tol()).dim(), 1);
        assert_eq!(span_closure(&[e1, e2], 2, tol()).dim(), 2);
        assert_eq!(span_closure(&[], 3, tol()).dim(), 0);
    }

    #[test]
    fn quotient_of_plane_by_antidiagonal() {
        let rel = span_closure(&[Vector::from_column_slice(&[ONE, -ONE])], 2, tol());
        let q = quotient_by(2, rel);
        assert_eq!(q.dim(), 1);
        let p = q.projector();
        let expected = Mat::from_element(2, 2, real(0.5));
        assert_relative_eq!(frobenius(&(p - expected)), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn quotient_extremes() {
        let q = quotient_by(3, Subspace::zero(3, tol()));
        assert_relative_eq!(frobenius(&(q.projector() - identity(3))), 0.0, epsilon = 1e-14);
        let q = quotient_by(3, Subspace::full(3, tol()));
        assert_eq!(q.dim(), 0);
        assert_eq!(frobenius(&q.projector()), 0.0);
    }

    #[test]
    fn op_equal_reports_residual() {
        let x = from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let same = op_equal(&x, &x, tol()).unwrap();
        assert!(same.passes());
        assert_eq!(same.residual, 0.0);
        let off = op_equal(&x, &(&x + identity(2) * real(1e-9)), tol()).unwrap();
        assert!(!off.passes());
        assert_relative_eq!(off.residual, 1e-9, max_relative = 1e-6);
        assert!(op_equal(&x, &identity(3), tol()).is_err());
    }

    #[test]
    fn antilinear_composition_rules() {
        let m = from_rows(&[&[ZERO, I], &[I, ZERO]]);
        let j = AntilinearOp::new(m.clone());
        let v = Vector::from_column_slice(&[c(1.0, 2.0), c(-0.5, 0.25)]);
        let twice = j.apply(&j.apply(&v));
        assert_relative_eq!((j.then_antilinear(&j) * &v - twice).norm(), 0.0, epsilon = 1e-14);
        let w = Vector::from_column_slice(&[c(0.3, -1.0), c(2.0, 0.5)]);
        // Antiunitary: <Jv, Jw> = conj <v, w>.
        let lhs = j.apply(&v).dotc(&j.apply(&w));
        assert_relative_eq!((lhs - v.dotc(&w).conj()).norm(), 0.0, epsilon = 1e-14);
        assert!(j.antiunitarity_residual() < 1e-14);
        // <Jv, w> = conj <v, J* w>.
        let lhs = j.apply(&v).dotc(&w);
        let rhs = v.dotc(&j.adjoint().apply(&w)).conj();
        assert_relative_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn gram_factor_orthonormalizes() {
        let g = from_rows(&[&[real(2.0), c(0.0, 1.0)], &[c(0.0, -1.0), real(3.0)]]);
        let f = gram_factor(&g, tol());
        assert_eq!(f.kernel_dim, 0);
        assert_relative_eq!(frobenius(&(f.pi.adjoint() * &f.pi - &g)), 0.0, epsilon = 1e-12);
        assert_relative_eq!(frobenius(&(&f.pi * &f.lift - identity(2))), 0.0, epsilon = 1e-12);
        let singular = from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let f = gram_factor(&singular, tol());
        assert_eq!(f.kernel_dim, 1);
        assert_relative_eq!(frobenius(&(f.pi.adjoint() * &f.pi - &singular)), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn swap_reorders_kronecker_factors() {
        let a = from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = from_real_rows(&[&[0.0, 1.0, 2.0], &[1.0, 0.0, 0.5], &[2.0, 2.0, 1.0]]);
        let p = swap_factors(2, 3);
        assert_relative_eq!(frobenius(&(&p * kron(&a, &b) * p.adjoint() - kron(&b, &a))), 0.0);
    }

    #[test]
    fn fast_product_matches_plain_product() {
        let a = Mat::from_fn(40, 50, |i, j| c((i * 3 + j) as f64 % 7.0 - 3.0, (i + 2 * j) as f64 % 5.0));
        let b = Mat::from_fn(50, 45, |i, j| c((i + j) as f64 % 4.0, (2 * i + j) as f64 % 3.0 - 1.0));
        assert_relative_eq!(frobenius(&(matmul(&a, &b) - &a * &b)), 0.0, epsilon = 1e-9);
        let small = identity(2);
        assert_eq!(chain(&[&small, &small, &small]), small);
    }

    #[test]
    fn quotient_by_maps_matches_span_quotient() {
        let x = from_real_rows(&[&[1.0], &[-1.0], &[0.0]]);
        let q = quotient_by_maps(std::slice::from_ref(&x), 3, tol());
        let r = quotient_by_ranges(&[x], 3, tol());
        assert_eq!(q.dim(), 2);
        assert_relative_eq!(frobenius(&(q.projector() - r.projector())), 0.0, epsilon = 1e-12);
        assert_eq!(quotient_by_maps(&[], 2, tol()).dim(), 2);
    }

    #[test]
    fn null_space_of_stacked_maps() {
        let a = from_real_rows(&[&[1.0, 0.0, 0.0]]);
        let b = from_real_rows(&[&[0.0, 1.0, 0.0]]);
        let n = joint_null_space(&[a, b], 3, tol());
        assert_eq!(n.ncols(), 1);
        assert_relative_eq!(n[(2, 0)].norm(), 1.0, epsilon = 1e-14);
    }
}
