#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "phasesvd/complex_matrix.hpp"
#include "phasesvd/errors.hpp"

namespace phasesvd {

/// Eigenpairs of a Hermitian matrix, eigenvalues nonincreasing; column j of
/// `eigenvectors` is the unit eigenvector paired with `eigenvalues[j]`.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

namespace detail {

inline double off_diagonal_mass(const ComplexMatrix& w) {
    double sum = 0.0;
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j)
            if (i != j) sum += std::norm(w(i, j));
    return std::sqrt(sum);
}

/// One complex Jacobi rotation annihilating the (p,r) / (r,p) pair of the
/// Hermitian matrix w, accumulated into the eigenvector matrix q.
inline void jacobi_rotate(ComplexMatrix& w, ComplexMatrix& q, std::size_t p, std::size_t r) {
    const Complex b = w(p, r);
    const double babs = std::abs(b);
    if (babs == 0.0) return;
    const Complex phase = b / babs;
    const double a = w(p, p).real();
    const double c = w(r, r).real();
    const double u = (a - c) / (2.0 * babs);
    // Smaller-magnitude root of t^2 + 2ut - 1 = 0 keeps the rotation angle
    // below 45 degrees for stability; u == 0 means a 45-degree rotation.
    const double t = (u == 0.0) ? 1.0 : std::copysign(1.0, u) / (std::abs(u) + std::hypot(1.0, u));
    const double cs = 1.0 / std::sqrt(1.0 + t * t);
    const double sn = t * cs;

    for (std::size_t i = 0; i < w.rows(); ++i) {
        if (i == p || i == r) continue;
        const Complex wip = w(i, p);
        const Complex wir = w(i, r);
        w(i, p) = cs * wip + sn * std::conj(phase) * wir;
        w(i, r) = -sn * phase * wip + cs * wir;
        w(p, i) = std::conj(w(i, p));
        w(r, i) = std::conj(w(i, r));
    }
    w(p, p) = Complex{a + t * babs, 0.0};
    w(r, r) = Complex{c - t * babs, 0.0};
    w(p, r) = Complex{0.0, 0.0};
    w(r, p) = Complex{0.0, 0.0};

    for (std::size_t i = 0; i < q.rows(); ++i) {
        const Complex qip = q(i, p);
        const Complex qir = q(i, r);
        q(i, p) = cs * qip + sn * std::conj(phase) * qir;
        q(i, r) = -sn * phase * qip + cs * qir;
    }
}

/// Scale column j so its largest-modulus component (ties broken by lowest
/// index among components within 1e-12 of the max) is real and strictly
/// positive. Deterministic across runs and platforms.
inline void canonicalize_column_phase(ComplexMatrix& q, std::size_t j) {
    double max_mod = 0.0;
    for (std::size_t i = 0; i < q.rows(); ++i) max_mod = std::max(max_mod, std::abs(q(i, j)));
    if (max_mod == 0.0) return;
    std::size_t pivot = 0;
    for (std::size_t i = 0; i < q.rows(); ++i) {
        if (std::abs(q(i, j)) >= max_mod - 1e-12) {
            pivot = i;
            break;
        }
    }
    const Complex z = q(pivot, j);
    const double mod = std::abs(z);
    q.scale_column(j, std::conj(z) / mod);
    q(pivot, j) = Complex{mod, 0.0};
}

/// Modified Gram-Schmidt over columns [begin, end), in index order.
inline void gram_schmidt_columns(ComplexMatrix& m, std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
        for (std::size_t i = begin; i < j; ++i) {
            Complex proj{0.0, 0.0};
            for (std::size_t r = 0; r < m.rows(); ++r) proj += std::conj(m(r, i)) * m(r, j);
            for (std::size_t r = 0; r < m.rows(); ++r) m(r, j) -= proj * m(r, i);
        }
        double nrm = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) nrm += std::norm(m(r, j));
        nrm = std::sqrt(nrm);
        if (nrm > 0.0) {
            for (std::size_t r = 0; r < m.rows(); ++r) m(r, j) /= nrm;
        }
    }
}

} // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Converges when the off-diagonal Frobenius mass drops to tol*||H||_F; hard
/// cap of 60 sweeps. Eigenvalues come back nonincreasing (stable order for
/// ties); eigenvectors are phase-canonicalized, and bases of subspaces whose
/// eigenvalue gaps fall below tol*max(1,||H||_F) are re-orthonormalized in
/// index order.
inline EigenDecomposition hermitian_eigendecompose(const ComplexMatrix& h, double tol = 1e-12) {
    if (!(tol > 0.0)) throw ValueError("tolerance must be positive");
    if (h.rows() != h.cols()) {
        throw DimensionError("eigendecomposition requires a square matrix, got " +
                             std::to_string(h.rows()) + "x" + std::to_string(h.cols()));
    }
    h.validate_finite();
    const std::size_t n = h.rows();
    const double norm_h = frobenius_norm(h);
    {
        double defect = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) defect += std::norm(h(i, j) - std::conj(h(j, i)));
        if (std::sqrt(defect) > tol * std::max(1.0, norm_h)) {
            throw NotHermitianError("matrix is not Hermitian within tolerance (defect " +
                                    std::to_string(std::sqrt(defect)) + ")");
        }
    }

    // Work on the exactly Hermitian average; the diagonal becomes exactly real.
    ComplexMatrix w(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
    ComplexMatrix q = ComplexMatrix::identity(n);

    const double target = tol * norm_h;
    constexpr int kMaxSweeps = 60;
    int sweeps = 0;
    while (detail::off_diagonal_mass(w) > target) {
        if (sweeps++ == kMaxSweeps) {
            throw ConvergenceError("eigensolver did not converge within " +
                                   std::to_string(kMaxSweeps) + " sweeps");
        }
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t r = p + 1; r < n; ++r) detail::jacobi_rotate(w, q, p, r);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&w](std::size_t a, std::size_t b) {
        return w(a, a).real() > w(b, b).real();
    });

    EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = w(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = q(i, order[j]);
    }

    // Re-orthonormalize within (near-)degenerate eigenvalue groups, then fix
    // every column's phase.
    const double gap_tol = tol * std::max(1.0, norm_h);
    std::size_t start = 0;
    for (std::size_t j = 1; j <= n; ++j) {
        if (j == n || out.eigenvalues[j - 1] - out.eigenvalues[j] >= gap_tol) {
            if (j - start > 1) detail::gram_schmidt_columns(out.eigenvectors, start, j);
            start = j;
        }
    }
    for (std::size_t j = 0; j < n; ++j) detail::canonicalize_column_phase(out.eigenvectors, j);
    return out;
}

} // namespace phasesvd
