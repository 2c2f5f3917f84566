#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "phasesvd/complex_matrix.hpp"
#include "phasesvd/errors.hpp"
#include "phasesvd/hermitian_eigen.hpp"

namespace phasesvd {

/// How the per-column phase of the complex diagonal is split between the left
/// and right unitaries.
///
/// AllInU puts the whole factor d_j/|d_j| on the U column (the default),
/// AllInV puts it on the V column, HalfHalf gives each side half the
/// argument, and CustomAlphas prescribes the left angles alpha_j explicitly
/// (the right angles follow so the product is unchanged).
struct PhaseConvention {
    enum class Kind { AllInU, AllInV, HalfHalf, CustomAlphas };

    Kind kind = Kind::AllInU;
    std::vector<double> alphas; // used by CustomAlphas only

    static PhaseConvention all_in_u() { return {Kind::AllInU, {}}; }
    static PhaseConvention all_in_v() { return {Kind::AllInV, {}}; }
    static PhaseConvention half_half() { return {Kind::HalfHalf, {}}; }
    static PhaseConvention custom_alphas(std::vector<double> alphas) {
        return {Kind::CustomAlphas, std::move(alphas)};
    }
};

/// Diagonal entries d_j of the complex diagonal matrix, nonincreasing in
/// modulus.
using ComplexDiagonal = std::vector<Complex>;

/// Eigenvector bases of A·A† (u0) and A†·A (v0), columns ordered by
/// nonincreasing eigenvalue, plus the shared leading min(m,n) eigenvalues.
struct SvdBases {
    ComplexMatrix u0;
    ComplexMatrix v0;
    std::vector<double> sigma_sq;
};

/// Result of solving U0·diag(d)·V0† = A: the complex diagonal entries and the
/// left basis with any degenerate-block correction absorbed.
struct DiagonalSolve {
    ComplexDiagonal d;
    ComplexMatrix u0_adjusted;
};

/// The phase split of a complex diagonal: d_j = phase_u[j] · conj(phase_v[j]) · sigma[j].
struct FactoredPhases {
    std::vector<Complex> phase_u;
    std::vector<double> sigma;
    std::vector<Complex> phase_v;
};

/// Full factorization A = U·diag(sigma)·V† with the phase bookkeeping kept:
/// U = U0·diag(phase_u), V = V0·diag(phase_v), and U0·diag(d)·V0† = A.
struct SvdFactorization {
    ComplexMatrix u;             // m x m unitary
    std::vector<double> sigma;   // min(m,n) nonnegative, nonincreasing
    ComplexMatrix v;             // n x n unitary
    ComplexDiagonal d;           // min(m,n) complex diagonal entries
    std::vector<Complex> phase_u;
    std::vector<Complex> phase_v;
    PhaseConvention convention;
    double residual = 0.0;       // ||U diag(sigma) V† - A||_F
};

namespace detail {

/// Render a magnitude for an error message; std::to_string would flatten
/// anything below 5e-7 to "0.000000".
inline std::string format_scientific(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", value);
    return buf;
}

/// A·A†, Hermitian by construction (upper triangle computed, mirrored down).
inline ComplexMatrix gram_left(const ComplexMatrix& a) {
    ComplexMatrix g(a.rows(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i; j < a.rows(); ++j) {
            Complex s{0.0, 0.0};
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * std::conj(a(j, k));
            g(i, j) = s;
            g(j, i) = std::conj(s);
        }
    }
    return g;
}

/// A†·A, Hermitian by construction.
inline ComplexMatrix gram_right(const ComplexMatrix& a) {
    ComplexMatrix g(a.cols(), a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        for (std::size_t j = i; j < a.cols(); ++j) {
            Complex s{0.0, 0.0};
            for (std::size_t k = 0; k < a.rows(); ++k) s += std::conj(a(k, i)) * a(k, j);
            g(i, j) = s;
            g(j, i) = std::conj(s);
        }
    }
    return g;
}

/// Unitary polar factor of a block expected to be sigma times a unitary:
/// W = B·(B†B)^{-1/2}. Throws PhaseSolveError if the block is numerically
/// singular relative to the expected magnitude.
inline ComplexMatrix unitary_polar_factor(const ComplexMatrix& block, double expected_sigma,
                                          double tol) {
    const std::size_t g = block.rows();
    const EigenDecomposition eig = hermitian_eigendecompose(gram_right(block), tol);
    const double floor = 0.25 * expected_sigma * expected_sigma;
    if (eig.eigenvalues[g - 1] <= floor) {
        throw PhaseSolveError("degenerate singular-value block is numerically singular");
    }
    ComplexMatrix p_inv(g, g);
    for (std::size_t r = 0; r < g; ++r) {
        for (std::size_t c = 0; c < g; ++c) {
            Complex s{0.0, 0.0};
            for (std::size_t t = 0; t < g; ++t) {
                s += eig.eigenvectors(r, t) * (1.0 / std::sqrt(eig.eigenvalues[t])) *
                     std::conj(eig.eigenvectors(c, t));
            }
            p_inv(r, c) = s;
        }
    }
    return block * p_inv;
}

} // namespace detail

/// Build the left/right eigenvector bases of A·A† and A†·A, columns ordered
/// by nonincreasing eigenvalue; sigma_sq holds the shared leading min(m,n)
/// eigenvalues, clamped at zero if rounding drives one slightly negative.
inline SvdBases svd_bases(const ComplexMatrix& a, double tol = 1e-12) {
    a.validate_finite();
    EigenDecomposition left = hermitian_eigendecompose(detail::gram_left(a), tol);
    EigenDecomposition right = hermitian_eigendecompose(detail::gram_right(a), tol);
    const std::size_t k = std::min(a.rows(), a.cols());
    // The smaller Gram matrix carries the cleaner copy of the shared spectrum.
    const std::vector<double>& source =
        (a.rows() <= a.cols()) ? left.eigenvalues : right.eigenvalues;
    std::vector<double> sigma_sq(k);
    for (std::size_t j = 0; j < k; ++j) sigma_sq[j] = std::max(0.0, source[j]);
    return {std::move(left.eigenvectors), std::move(right.eigenvectors), std::move(sigma_sq)};
}

/// Solve U0·diag(d)·V0† = A for the complex diagonal d, given eigenvector
/// bases with columns paired by matching eigenvalue order.
///
/// For well-separated singular values d_j is the sandwich <u_j|A|v_j>. Within
/// a group of (near-)equal nonzero singular values the sandwich block
/// B = (U0†AV0)|group equals sigma·W for a unitary W; W is absorbed into the
/// returned left basis and the group's d_j all become the group's mean sigma.
/// Columns whose singular-value estimate falls below tol relative to the
/// largest get d_j = 0 exactly. Throws PhaseSolveError when the final
/// residual shows the bases were inconsistently paired (or the spectrum is
/// too clustered to separate at working precision).
inline DiagonalSolve solve_complex_diagonal(const ComplexMatrix& a, const ComplexMatrix& u0,
                                            const ComplexMatrix& v0, double tol = 1e-12) {
    if (!(tol > 0.0)) throw ValueError("tolerance must be positive");
    if (u0.rows() != a.rows() || u0.cols() != a.rows()) {
        throw DimensionError("left basis must be " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.rows()));
    }
    if (v0.rows() != a.cols() || v0.cols() != a.cols()) {
        throw DimensionError("right basis must be " + std::to_string(a.cols()) + "x" +
                             std::to_string(a.cols()));
    }
    a.validate_finite();
    u0.validate_finite();
    v0.validate_finite();

    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const std::size_t k = std::min(m, n);
    const ComplexMatrix sandwich = adjoint(u0) * a * v0;

    // Column norms of the sandwich estimate the singular values: with unitary
    // bases, ||(U0†AV0)e_j|| = ||A v_j||. Robust even when degenerate columns
    // mix.
    std::vector<double> sigma_hat(k, 0.0);
    double sig_max = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += std::norm(sandwich(i, j));
        sigma_hat[j] = std::sqrt(s);
        sig_max = std::max(sig_max, sigma_hat[j]);
    }

    ComplexDiagonal d(k, Complex{0.0, 0.0});
    ComplexMatrix u0_adjusted = u0;

    if (sig_max > 0.0) {
        const double cutoff = tol * sig_max;
        // Below this scale the eigensolver cannot distinguish equal singular
        // values from noise, so such columns are handled one by one.
        const double group_floor = 1e-6 * sig_max;
        std::size_t j = 0;
        while (j < k) {
            if (sigma_hat[j] < cutoff) {
                d[j] = Complex{0.0, 0.0};
                ++j;
                continue;
            }
            std::size_t e = j + 1;
            while (e < k && sigma_hat[e] >= cutoff &&
                   std::abs(sigma_hat[e - 1] - sigma_hat[e]) < tol * sig_max) {
                ++e;
            }
            const std::size_t g = e - j;
            double mean = 0.0;
            for (std::size_t t = j; t < e; ++t) mean += sigma_hat[t];
            mean /= static_cast<double>(g);

            if (g == 1 || mean <= group_floor) {
                for (std::size_t t = j; t < e; ++t) d[t] = sandwich(t, t);
            } else {
                ComplexMatrix block(g, g);
                for (std::size_t r = 0; r < g; ++r)
                    for (std::size_t c = 0; c < g; ++c) block(r, c) = sandwich(j + r, j + c);
                const ComplexMatrix w = detail::unitary_polar_factor(block, mean, tol);
                const double block_err = frobenius_norm(block - Complex{mean, 0.0} * w);
                const double block_gate =
                    std::max(10.0 * static_cast<double>(g) * tol, 1e-12) * sig_max;
                if (!(block_err <= block_gate)) {
                    throw PhaseSolveError(
                        "degenerate singular-value block is not proportional to a unitary "
                        "(defect " + detail::format_scientific(block_err) + ")");
                }
                for (std::size_t i = 0; i < m; ++i) {
                    for (std::size_t c = 0; c < g; ++c) {
                        Complex s{0.0, 0.0};
                        for (std::size_t t = 0; t < g; ++t) s += u0(i, j + t) * w(t, c);
                        u0_adjusted(i, j + c) = s;
                    }
                }
                for (std::size_t t = j; t < e; ++t) d[t] = Complex{mean, 0.0};
            }
            j = e;
        }
        // A sandwich diagonal far smaller than its column norm means the
        // column pair carries no consistent direction; zero it so rank and
        // phases stay clean.
        for (std::size_t t = 0; t < k; ++t) {
            if (d[t] != Complex{0.0, 0.0} && std::abs(d[t]) < cutoff) d[t] = Complex{0.0, 0.0};
        }
    }

    const double res = frobenius_norm(u0_adjusted * diagonal_matrix(m, n, d) * adjoint(v0) - a);
    const double gate = std::max(1e-9, 100.0 * tol) * std::max(1.0, frobenius_norm(a));
    if (!(res <= gate)) {
        throw PhaseSolveError("diagonal solve residual " + detail::format_scientific(res) +
                              " exceeds tolerance; left/right bases are inconsistently paired "
                              "or the spectrum is too clustered to separate");
    }
    return {std::move(d), std::move(u0_adjusted)};
}

/// Split each d_j into sigma_j = |d_j| and a unit phase pair with
/// phase_u[j]·conj(phase_v[j]) = d_j/|d_j|, per the chosen convention.
/// Entries with d_j = 0 get both phases equal to 1.
inline FactoredPhases factor_phases(const ComplexDiagonal& d, const PhaseConvention& convention) {
    const std::size_t k = d.size();
    FactoredPhases out{std::vector<Complex>(k, Complex{1.0, 0.0}), std::vector<double>(k, 0.0),
                       std::vector<Complex>(k, Complex{1.0, 0.0})};
    if (convention.kind == PhaseConvention::Kind::CustomAlphas) {
        std::size_t nonzero = 0;
        for (const Complex& z : d)
            if (z != Complex{0.0, 0.0}) ++nonzero;
        if (convention.alphas.size() != nonzero) {
            throw ConventionError("custom alpha list has " +
                                  std::to_string(convention.alphas.size()) + " angles but " +
                                  std::to_string(nonzero) + " nonzero singular values");
        }
    }
    std::size_t alpha_index = 0;
    for (std::size_t j = 0; j < k; ++j) {
        const double sigma = std::abs(d[j]);
        out.sigma[j] = sigma;
        if (d[j] == Complex{0.0, 0.0}) continue;
        switch (convention.kind) {
            case PhaseConvention::Kind::AllInU:
                out.phase_u[j] = d[j] / sigma;
                break;
            case PhaseConvention::Kind::AllInV:
                out.phase_v[j] = std::conj(d[j]) / sigma;
                break;
            case PhaseConvention::Kind::HalfHalf: {
                const double half = std::arg(d[j]) / 2.0;
                out.phase_u[j] = std::polar(1.0, half);
                out.phase_v[j] = std::polar(1.0, -half);
                break;
            }
            case PhaseConvention::Kind::CustomAlphas: {
                const double alpha = convention.alphas[alpha_index++];
                const double beta = std::arg(d[j]) - alpha;
                out.phase_u[j] = std::polar(1.0, alpha);
                out.phase_v[j] = std::polar(1.0, -beta);
                break;
            }
        }
    }
    return out;
}

/// U·diag(sigma)·V† as an explicit rows(U) x rows(V) matrix.
inline ComplexMatrix reconstruct(const SvdFactorization& f) {
    return f.u * diagonal_matrix(f.u.rows(), f.v.rows(), f.sigma) * adjoint(f.v);
}

/// The phase-consistent singular value decomposition A = U·diag(sigma)·V†.
///
/// Builds the eigenvector bases, solves for the complex diagonal, factors the
/// phases per `convention`, and absorbs them into the returned unitaries so
/// the reconstruction is exact to working precision. A zero matrix yields
/// identity unitaries and zero singular values.
inline SvdFactorization svd(const ComplexMatrix& a,
                            const PhaseConvention& convention = PhaseConvention::all_in_u(),
                            double tol = 1e-12) {
    SvdBases bases = svd_bases(a, tol);
    DiagonalSolve solve = solve_complex_diagonal(a, bases.u0, bases.v0, tol);
    const std::size_t k = solve.d.size();

    // Keep |d| nonincreasing: permute columns of both bases together with d.
    // Bases arrive eigenvalue-ordered, so this is almost always the identity;
    // it guards the documented ordering against rounding-level inversions.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&solve](std::size_t x, std::size_t y) {
        return std::abs(solve.d[x]) > std::abs(solve.d[y]);
    });

    ComplexMatrix u = solve.u0_adjusted;
    ComplexMatrix v = bases.v0;
    ComplexDiagonal d(k);
    for (std::size_t j = 0; j < k; ++j) {
        d[j] = solve.d[order[j]];
        if (order[j] != j) {
            for (std::size_t i = 0; i < u.rows(); ++i) u(i, j) = solve.u0_adjusted(i, order[j]);
            for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = bases.v0(i, order[j]);
        }
    }

    FactoredPhases phases = factor_phases(d, convention);
    for (std::size_t j = 0; j < k; ++j) {
        u.scale_column(j, phases.phase_u[j]);
        v.scale_column(j, phases.phase_v[j]);
    }

    SvdFactorization f{std::move(u),
                       std::move(phases.sigma),
                       std::move(v),
                       std::move(d),
                       std::move(phases.phase_u),
                       std::move(phases.phase_v),
                       convention,
                       0.0};
    f.residual = frobenius_norm(reconstruct(f) - a);
    return f;
}

/// The rank-one terms T_j = d_j·|u0_j><v0_j| whose sum reconstructs A. The
/// phase factors are divided back out of the stored unitaries, so for a
/// nondegenerate nonzero singular value T_j does not depend on how the
/// eigenvector phases were chosen.
inline std::vector<ComplexMatrix> rank_one_terms(const SvdFactorization& f) {
    const std::size_t m = f.u.rows();
    const std::size_t n = f.v.rows();
    const std::size_t k = f.d.size();
    std::vector<ComplexMatrix> terms;
    terms.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        ComplexMatrix t(m, n);
        for (std::size_t r = 0; r < m; ++r) {
            const Complex left = f.d[j] * f.u(r, j) * std::conj(f.phase_u[j]);
            for (std::size_t c = 0; c < n; ++c) {
                t(r, c) = left * std::conj(f.v(c, j) * std::conj(f.phase_v[j]));
            }
        }
        terms.push_back(std::move(t));
    }
    return terms;
}

} // namespace phasesvd
