#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "phasesvd/complex_matrix.hpp"
#include "phasesvd/errors.hpp"
#include "phasesvd/phase_svd.hpp"

namespace phasesvd {

/// A bipartite pure state: amplitudes of |jk> in row-major order over
/// subsystem dimensions (dim_a, dim_b). Normalization is not required; the
/// Schmidt coefficients then carry the state norm.
struct BipartiteState {
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;
    std::vector<Complex> amplitudes;
};

/// Schmidt form of a bipartite state: |psi> = sum_i coefficients[i] |i_A>|i_B>
/// with orthonormal local bases given in computational-basis coordinates.
struct SchmidtDecomposition {
    std::vector<double> coefficients;           // nonincreasing, nonnegative
    std::vector<std::vector<Complex>> basis_a;  // each of length dim_a
    std::vector<std::vector<Complex>> basis_b;  // each of length dim_b
    std::size_t schmidt_rank = 0;               // coefficients above the rank cutoff
    double entropy_bits = 0.0;                  // -sum p_i log2 p_i, p_i = sigma_i^2 / sum sigma^2
};

/// Reshape the amplitude vector into the dim_a x dim_b coefficient matrix
/// whose (j,k) entry is the amplitude of |jk>.
inline ComplexMatrix coefficient_matrix(const BipartiteState& psi) {
    if (psi.dim_a == 0 || psi.dim_b == 0) {
        throw DimensionError("subsystem dimensions must be positive");
    }
    if (psi.amplitudes.size() != psi.dim_a * psi.dim_b) {
        throw DimensionError("state has " + std::to_string(psi.amplitudes.size()) +
                             " amplitudes but dimensions " + std::to_string(psi.dim_a) + "x" +
                             std::to_string(psi.dim_b) + " require " +
                             std::to_string(psi.dim_a * psi.dim_b));
    }
    return ComplexMatrix(psi.dim_a, psi.dim_b, psi.amplitudes);
}

/// Schmidt decomposition via the phase-consistent SVD of the coefficient
/// matrix: basis_a[i] is column i of U, basis_b[i] the entrywise conjugate of
/// column i of V (stored so reconstruction is a plain product, no conjugation
/// at use sites), and coefficients are the singular values.
inline SchmidtDecomposition schmidt_decompose(
    const BipartiteState& psi, const PhaseConvention& convention = PhaseConvention::all_in_u(),
    double tol = 1e-12) {
    const ComplexMatrix matrix = coefficient_matrix(psi);
    const SvdFactorization f = svd(matrix, convention, tol);
    const std::size_t k = f.sigma.size();

    SchmidtDecomposition out;
    out.coefficients = f.sigma;
    out.basis_a.resize(k);
    out.basis_b.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.basis_a[i].resize(psi.dim_a);
        for (std::size_t j = 0; j < psi.dim_a; ++j) out.basis_a[i][j] = f.u(j, i);
        out.basis_b[i].resize(psi.dim_b);
        for (std::size_t j = 0; j < psi.dim_b; ++j) out.basis_b[i][j] = std::conj(f.v(j, i));
    }

    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        if (f.d[i] != Complex{0.0, 0.0}) ++out.schmidt_rank;
        total += f.sigma[i] * f.sigma[i];
    }
    double entropy = 0.0;
    if (total > 0.0) {
        for (std::size_t i = 0; i < k; ++i) {
            if (f.sigma[i] == 0.0) continue;
            const double p = f.sigma[i] * f.sigma[i] / total;
            entropy -= p * std::log2(p);
        }
    }
    out.entropy_bits = entropy + 0.0; // normalize -0.0 away
    return out;
}

/// Amplitudes of sum_i coefficients[i] |i_A>|i_B> in row-major |jk> order.
inline std::vector<Complex> reconstruct_state(const SchmidtDecomposition& sd) {
    if (sd.basis_a.empty() || sd.basis_b.empty()) return {};
    const std::size_t dim_a = sd.basis_a[0].size();
    const std::size_t dim_b = sd.basis_b[0].size();
    std::vector<Complex> amplitudes(dim_a * dim_b, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < sd.coefficients.size(); ++i) {
        for (std::size_t j = 0; j < dim_a; ++j) {
            const Complex left = sd.coefficients[i] * sd.basis_a[i][j];
            for (std::size_t k = 0; k < dim_b; ++k) {
                amplitudes[j * dim_b + k] += left * sd.basis_b[i][k];
            }
        }
    }
    return amplitudes;
}

/// Apply per-term local phase rotations: basis_a[i] is scaled by phase_u[i]
/// and basis_b[i] by conj(phase_v[i]). The reconstruction is unchanged
/// exactly when each product phase_u[i]·conj(phase_v[i]) equals 1 — in
/// particular when transferring a factorization's phases between conventions.
inline SchmidtDecomposition local_phase_rotations(const SchmidtDecomposition& sd,
                                                  const std::vector<Complex>& phase_u,
                                                  const std::vector<Complex>& phase_v) {
    if (phase_u.size() != sd.schmidt_rank || phase_v.size() != sd.schmidt_rank) {
        throw ConventionError("phase lists have lengths " + std::to_string(phase_u.size()) +
                              " and " + std::to_string(phase_v.size()) +
                              " but the Schmidt rank is " + std::to_string(sd.schmidt_rank));
    }
    for (const Complex& p : phase_u) {
        if (std::abs(std::abs(p) - 1.0) > 1e-9) {
            throw ConventionError("left phase factor must have unit modulus");
        }
    }
    for (const Complex& p : phase_v) {
        if (std::abs(std::abs(p) - 1.0) > 1e-9) {
            throw ConventionError("right phase factor must have unit modulus");
        }
    }
    SchmidtDecomposition out = sd;
    for (std::size_t i = 0; i < sd.schmidt_rank; ++i) {
        for (Complex& z : out.basis_a[i]) z *= phase_u[i];
        for (Complex& z : out.basis_b[i]) z *= std::conj(phase_v[i]);
    }
    return out;
}

} // namespace phasesvd
