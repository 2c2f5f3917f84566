// Acceptance suite: one test per shipped criterion, each reported on its own
// "[ACCEPTANCE] name: PASS|FAIL" line by the listener installed in main().

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "phasesvd/io.hpp"
#include "phasesvd/phase_svd.hpp"
#include "phasesvd/schmidt.hpp"
#include "testing_util.hpp"

using phasesvd::BipartiteState;
using phasesvd::Complex;
using phasesvd::ComplexMatrix;
using phasesvd::PhaseConvention;
using phasesvd::SvdFactorization;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

ComplexMatrix plus_minus_basis() {
    return ComplexMatrix(2, 2,
                         {Complex{kInvSqrt2, 0}, Complex{kInvSqrt2, 0}, Complex{kInvSqrt2, 0},
                          Complex{-kInvSqrt2, 0}});
}

double relative_residual(const ComplexMatrix& a, const SvdFactorization& f) {
    return phasesvd::frobenius_norm(phasesvd::reconstruct(f) - a) /
           std::max(1.0, phasesvd::frobenius_norm(a));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string fixture(const std::string& name) {
    return std::string(PHASESVD_FIXTURE_DIR) + "/" + name;
}

int run_cli(const std::string& args, std::string* out) {
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path() / "phasesvd_acceptance";
    std::filesystem::create_directories(dir);
    const auto out_path = dir / ("out" + std::to_string(counter++) + ".txt");
    const std::string command = std::string(PHASESVD_CLI_PATH) + " " + args + " > " +
                                out_path.string() + " 2> /dev/null";
    const int status = std::system(command.c_str());
    if (out != nullptr) *out = slurp(out_path.string());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Acceptance, Criterion1_SymmetricRealMatrix) {
    const ComplexMatrix a(2, 2, {Complex{1, 0}, Complex{2, 0}, Complex{2, 0}, Complex{1, 0}});

    const SvdFactorization f = phasesvd::svd(a);
    ASSERT_EQ(f.sigma.size(), 2u);
    EXPECT_NEAR(f.sigma[0], 3.0, 1e-12);
    EXPECT_NEAR(f.sigma[1], 1.0, 1e-12);

    const phasesvd::DiagonalSolve solve =
        phasesvd::solve_complex_diagonal(a, plus_minus_basis(), plus_minus_basis());
    EXPECT_NEAR(std::abs(solve.d[0] - Complex{3, 0}), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(solve.d[1] - Complex{-1, 0}), 0.0, 1e-12);

    const ComplexMatrix expected_u(2, 2,
                                   {Complex{kInvSqrt2, 0}, Complex{-kInvSqrt2, 0},
                                    Complex{kInvSqrt2, 0}, Complex{kInvSqrt2, 0}});
    const ComplexMatrix expected_v(2, 2,
                                   {Complex{kInvSqrt2, 0}, Complex{kInvSqrt2, 0},
                                    Complex{kInvSqrt2, 0}, Complex{-kInvSqrt2, 0}});
    EXPECT_LE(testutil::max_entry_diff(f.u, expected_u), 1e-12);
    EXPECT_LE(testutil::max_entry_diff(f.v, expected_v), 1e-12);
}

TEST(Acceptance, Criterion2_HermitianComplexMatrix) {
    const ComplexMatrix a(2, 2, {Complex{2, 0}, Complex{0, -3}, Complex{0, 3}, Complex{2, 0}});

    const SvdFactorization f = phasesvd::svd(a);
    EXPECT_NEAR(f.sigma[0], 5.0, 1e-12);
    EXPECT_NEAR(f.sigma[1], 1.0, 1e-12);
    EXPECT_LE(f.residual, 1e-12);

    const ComplexMatrix circular(2, 2,
                                 {Complex{kInvSqrt2, 0}, Complex{kInvSqrt2, 0},
                                  Complex{0, kInvSqrt2}, Complex{0, -kInvSqrt2}});
    const phasesvd::DiagonalSolve solve =
        phasesvd::solve_complex_diagonal(a, circular, circular);
    EXPECT_NEAR(std::abs(solve.d[0] - Complex{5, 0}), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(solve.d[1] - Complex{-1, 0}), 0.0, 1e-12);
}

TEST(Acceptance, Criterion3_SharedSingularValues) {
    // two pairs of distinct matrices with identical singular values: each
    // must come back as itself, not as its partner
    const ComplexMatrix pair_a1(2, 2,
                                {Complex{1, 0}, Complex{2, 0}, Complex{2, 0}, Complex{1, 0}});
    const ComplexMatrix pair_a2(2, 2,
                                {Complex{2, 0}, Complex{1, 0}, Complex{1, 0}, Complex{2, 0}});
    const ComplexMatrix pair_b1(2, 2,
                                {Complex{3, 0}, Complex{0, -2}, Complex{0, 2}, Complex{3, 0}});
    const ComplexMatrix pair_b2(2, 2,
                                {Complex{2, 0}, Complex{0, -3}, Complex{0, 3}, Complex{2, 0}});
    for (const ComplexMatrix& a : {pair_a1, pair_a2, pair_b1, pair_b2}) {
        const SvdFactorization f = phasesvd::svd(a);
        EXPECT_LE(testutil::max_entry_diff(phasesvd::reconstruct(f), a), 1e-12);
    }
    // the pairs really do share their spectra
    const SvdFactorization fa1 = phasesvd::svd(pair_a1);
    const SvdFactorization fa2 = phasesvd::svd(pair_a2);
    const SvdFactorization fb1 = phasesvd::svd(pair_b1);
    const SvdFactorization fb2 = phasesvd::svd(pair_b2);
    for (std::size_t j = 0; j < 2; ++j) {
        EXPECT_NEAR(fa1.sigma[j], fa2.sigma[j], 1e-12);
        EXPECT_NEAR(fb1.sigma[j], fb2.sigma[j], 1e-12);
    }
}

TEST(Acceptance, Criterion4_RectangularMatrix) {
    const Complex i{0, 1};
    const ComplexMatrix a(2, 3, {Complex{1, 0}, Complex{1, 0}, i, Complex{1, 0},
                                 Complex{-1, 0}, i});

    const SvdFactorization f = phasesvd::svd(a);
    ASSERT_EQ(f.sigma.size(), 2u);
    EXPECT_NEAR(f.sigma[0], 2.0, 1e-12);
    EXPECT_NEAR(f.sigma[1], std::sqrt(2.0), 1e-12);

    const ComplexMatrix v0(3, 3,
                           {Complex{0, kInvSqrt2}, Complex{0, 0}, Complex{0, -kInvSqrt2},
                            Complex{0, 0}, Complex{1, 0}, Complex{0, 0},
                            Complex{kInvSqrt2, 0}, Complex{0, 0}, Complex{kInvSqrt2, 0}});
    const phasesvd::DiagonalSolve solve =
        phasesvd::solve_complex_diagonal(a, plus_minus_basis(), v0);
    EXPECT_NEAR(std::abs(solve.d[0] - Complex{0, 2}), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(solve.d[1] - Complex{std::sqrt(2.0), 0}), 0.0, 1e-12);
}

TEST(Acceptance, Criterion5_BipartiteStateDecomposition) {
    const double inv_sqrt10 = 1.0 / std::sqrt(10.0);
    const BipartiteState psi{2,
                             2,
                             {Complex{0.0, 2.0 * inv_sqrt10}, Complex{inv_sqrt10, 0.0},
                              Complex{inv_sqrt10, 0.0}, Complex{2.0 * inv_sqrt10, 0.0}}};

    const phasesvd::SchmidtDecomposition sd = phasesvd::schmidt_decompose(psi);
    const double sqrt2 = std::sqrt(2.0);
    EXPECT_NEAR(sd.coefficients[0] * sd.coefficients[0], (5.0 + 2.0 * sqrt2) / 10.0, 1e-12);
    EXPECT_NEAR(sd.coefficients[1] * sd.coefficients[1], (5.0 - 2.0 * sqrt2) / 10.0, 1e-12);

    // with this specific eigenvector choice the leading diagonal entry is
    // (sqrt2 + (4+sqrt2) i) / (2 sqrt10)
    const ComplexMatrix u0(2, 2,
                           {Complex{sqrt2 / 2.0, 0}, Complex{-sqrt2 / 2.0, 0},
                            Complex{0.5, -0.5}, Complex{0.5, -0.5}});
    const ComplexMatrix v0(2, 2,
                           {Complex{sqrt2 / 2.0, 0}, Complex{-sqrt2 / 2.0, 0},
                            Complex{0.5, 0.5}, Complex{0.5, 0.5}});
    const phasesvd::DiagonalSolve solve =
        phasesvd::solve_complex_diagonal(phasesvd::coefficient_matrix(psi), u0, v0);
    const Complex expected_d0{sqrt2 / (2.0 * std::sqrt(10.0)),
                              (4.0 + sqrt2) / (2.0 * std::sqrt(10.0))};
    EXPECT_NEAR(std::abs(solve.d[0] - expected_d0), 0.0, 1e-12);

    const std::vector<Complex> amplitudes = phasesvd::reconstruct_state(sd);
    EXPECT_LE(testutil::max_entry_diff(amplitudes, psi.amplitudes), 1e-10);
}

TEST(Acceptance, Criterion6_RandomMatrixProperties) {
    auto rng = testutil::seeded_rng(60601u);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    std::uniform_int_distribution<int> deficiency(0, 2);

    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = dim(rng);
        const std::size_t n = dim(rng);
        ComplexMatrix a = testutil::random_matrix(rng, m, n);
        const std::size_t k = std::min(m, n);
        if (deficiency(rng) == 0 && k >= 2) {
            std::uniform_int_distribution<std::size_t> rank_dist(1, k - 1);
            const std::size_t r = rank_dist(rng);
            a = testutil::random_matrix(rng, m, r) * testutil::random_matrix(rng, r, n);
        }
        const double scale = std::max(1.0, phasesvd::frobenius_norm(a));

        const SvdFactorization fu = phasesvd::svd(a, PhaseConvention::all_in_u());
        const SvdFactorization fv = phasesvd::svd(a, PhaseConvention::all_in_v());
        const SvdFactorization fs = phasesvd::svd(a, PhaseConvention::half_half());

        ASSERT_LE(relative_residual(a, fu), 1e-9) << "trial " << trial;
        ASSERT_LE(phasesvd::unitarity_defect(fu.u), 1e-10) << "trial " << trial;
        ASSERT_LE(phasesvd::unitarity_defect(fu.v), 1e-10) << "trial " << trial;
        for (std::size_t j = 0; j + 1 < fu.sigma.size(); ++j) {
            ASSERT_GE(fu.sigma[j], fu.sigma[j + 1]) << "trial " << trial;
        }

        const ComplexMatrix ru = phasesvd::reconstruct(fu);
        ASSERT_LE(testutil::max_entry_diff(ru, phasesvd::reconstruct(fv)), 1e-10)
            << "trial " << trial;
        ASSERT_LE(testutil::max_entry_diff(ru, phasesvd::reconstruct(fs)), 1e-10)
            << "trial " << trial;

        // rank-one terms must not depend on the eigenvector phase choice;
        // meaningful only when the nonzero spectrum is well separated
        bool separated = true;
        for (std::size_t j = 0; j + 1 < fu.sigma.size(); ++j) {
            if (fu.sigma[j + 1] > 0.0 &&
                fu.sigma[j] - fu.sigma[j + 1] < 1e-6 * fu.sigma[0]) {
                separated = false;
            }
        }
        if (fu.sigma[0] > 0.0 && separated) {
            phasesvd::SvdBases plain = phasesvd::svd_bases(a);
            const phasesvd::DiagonalSolve solve_plain =
                phasesvd::solve_complex_diagonal(a, plain.u0, plain.v0);
            phasesvd::SvdBases twisted = phasesvd::svd_bases(a);
            for (std::size_t j = 0; j < m; ++j)
                twisted.u0.scale_column(j, testutil::random_unit_phase(rng));
            for (std::size_t j = 0; j < n; ++j)
                twisted.v0.scale_column(j, testutil::random_unit_phase(rng));
            const phasesvd::DiagonalSolve solve_twisted =
                phasesvd::solve_complex_diagonal(a, twisted.u0, twisted.v0);
            for (std::size_t j = 0; j < k; ++j) {
                double worst = 0.0;
                for (std::size_t r = 0; r < m; ++r) {
                    for (std::size_t c = 0; c < n; ++c) {
                        const Complex plain_term = solve_plain.d[j] *
                                                   solve_plain.u0_adjusted(r, j) *
                                                   std::conj(plain.v0(c, j));
                        const Complex twisted_term = solve_twisted.d[j] *
                                                     solve_twisted.u0_adjusted(r, j) *
                                                     std::conj(twisted.v0(c, j));
                        worst = std::max(worst, std::abs(plain_term - twisted_term));
                    }
                }
                ASSERT_LE(worst, 1e-9 * scale) << "trial " << trial << " term " << j;
            }
        }
    }
}

TEST(Acceptance, Criterion7_DegenerateSingularValues) {
    auto rng = testutil::seeded_rng(60701u);
    std::uniform_real_distribution<double> sigma_dist(0.5, 2.0);
    std::uniform_real_distribution<double> ratio_dist(0.1, 0.9);

    for (int trial = 0; trial < 150; ++trial) {
        const double sigma = sigma_dist(rng);
        double tau = sigma * ratio_dist(rng);
        if (trial % 3 == 1) tau = 0.0;     // repeated sigma plus a zero
        if (trial % 3 == 2) tau = sigma;   // triple degeneracy
        const ComplexMatrix q1 = testutil::random_unitary(rng, 3);
        const ComplexMatrix q2 = testutil::random_unitary(rng, 3);
        const ComplexMatrix d =
            phasesvd::diagonal_matrix(3, 3, std::vector<double>{sigma, sigma, tau});
        const ComplexMatrix a = q1 * d * adjoint(q2);

        const SvdFactorization f = phasesvd::svd(a);
        ASSERT_LE(relative_residual(a, f), 1e-9) << "trial " << trial;
        ASSERT_LE(phasesvd::unitarity_defect(f.u), 1e-10) << "trial " << trial;
        ASSERT_LE(phasesvd::unitarity_defect(f.v), 1e-10) << "trial " << trial;
        ASSERT_NEAR(f.sigma[0], sigma, 1e-9) << "trial " << trial;
        ASSERT_NEAR(f.sigma[1], sigma, 1e-9) << "trial " << trial;
        ASSERT_NEAR(f.sigma[2], tau, 1e-9) << "trial " << trial;
    }
}

TEST(Acceptance, Criterion8_RandomStateProperties) {
    auto rng = testutil::seeded_rng(60801u);
    std::uniform_int_distribution<std::size_t> dim(1, 6);

    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t da = dim(rng);
        const std::size_t db = dim(rng);
        std::vector<Complex> amplitudes(da * db);
        for (Complex& z : amplitudes) z = testutil::random_complex(rng);
        const BipartiteState psi{da, db, amplitudes};

        const phasesvd::SchmidtDecomposition sd = phasesvd::schmidt_decompose(psi);

        double norm_sq = 0.0;
        for (const Complex& z : amplitudes) norm_sq += std::norm(z);
        double coeff_sq = 0.0;
        for (double c : sd.coefficients) coeff_sq += c * c;
        ASSERT_NEAR(coeff_sq, norm_sq, 1e-10 * std::max(1.0, norm_sq)) << "trial " << trial;

        const std::size_t k = sd.coefficients.size();
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                Complex ga{0, 0}, gb{0, 0};
                for (std::size_t t = 0; t < da; ++t)
                    ga += std::conj(sd.basis_a[i][t]) * sd.basis_a[j][t];
                for (std::size_t t = 0; t < db; ++t)
                    gb += std::conj(sd.basis_b[i][t]) * sd.basis_b[j][t];
                const Complex expected = (i == j) ? Complex{1, 0} : Complex{0, 0};
                ASSERT_LE(std::abs(ga - expected), 1e-10) << "trial " << trial;
                ASSERT_LE(std::abs(gb - expected), 1e-10) << "trial " << trial;
            }
        }

        ASSERT_LE(testutil::max_entry_diff(phasesvd::reconstruct_state(sd), amplitudes), 1e-10)
            << "trial " << trial;

        ASSERT_GE(sd.entropy_bits, 0.0) << "trial " << trial;
        ASSERT_LE(sd.entropy_bits,
                  std::log2(static_cast<double>(std::min(da, db))) + 1e-12)
            << "trial " << trial;

        // local unitaries on either subsystem leave the coefficients alone
        const ComplexMatrix m = phasesvd::coefficient_matrix(psi);
        const ComplexMatrix ua = testutil::random_unitary(rng, da);
        const ComplexMatrix ub = testutil::random_unitary(rng, db);
        const ComplexMatrix rotated_a = ua * m;
        ComplexMatrix rotated_b(da, db);
        for (std::size_t r = 0; r < da; ++r)
            for (std::size_t c = 0; c < db; ++c) {
                Complex s{0, 0};
                for (std::size_t t = 0; t < db; ++t) s += m(r, t) * ub(c, t);
                rotated_b(r, c) = s;  // amplitudes of (I ⊗ U) psi: M · U^T
            }
        const phasesvd::SchmidtDecomposition sa =
            phasesvd::schmidt_decompose(BipartiteState{da, db, rotated_a.entries()});
        const phasesvd::SchmidtDecomposition sb =
            phasesvd::schmidt_decompose(BipartiteState{da, db, rotated_b.entries()});
        for (std::size_t i = 0; i < k; ++i) {
            ASSERT_NEAR(sa.coefficients[i], sd.coefficients[i], 1e-10) << "trial " << trial;
            ASSERT_NEAR(sb.coefficients[i], sd.coefficients[i], 1e-10) << "trial " << trial;
        }
    }
}

TEST(Acceptance, Criterion9_CliGoldenRun) {
    for (const std::string name :
         {"example1.mat", "example2.mat", "example3.mat", "example4.state"}) {
        std::string out;
        const int code = run_cli("verify " + fixture(name), &out);
        EXPECT_EQ(code, 0) << name;
        EXPECT_NE(out.find("result PASS"), std::string::npos) << name;
    }

    // JSON output reparses to the in-process API results, digit for digit
    for (const std::string name : {"example1.mat", "example2.mat", "example3.mat"}) {
        std::string out;
        ASSERT_EQ(run_cli("svd " + fixture(name) + " --output json", &out), 0) << name;
        const nlohmann::json j = nlohmann::json::parse(out);
        const phasesvd::SvdFactorization f =
            phasesvd::svd(phasesvd::parse_matrix(slurp(fixture(name))));
        for (std::size_t i = 0; i < f.sigma.size(); ++i) {
            EXPECT_EQ(j["sigma"][i].get<double>(), f.sigma[i]) << name;
            EXPECT_EQ(j["d"][i][0].get<double>(), f.d[i].real()) << name;
            EXPECT_EQ(j["d"][i][1].get<double>(), f.d[i].imag()) << name;
            EXPECT_EQ(j["phase_u"][i][0].get<double>(), f.phase_u[i].real()) << name;
            EXPECT_EQ(j["phase_u"][i][1].get<double>(), f.phase_u[i].imag()) << name;
            EXPECT_EQ(j["phase_v"][i][0].get<double>(), f.phase_v[i].real()) << name;
            EXPECT_EQ(j["phase_v"][i][1].get<double>(), f.phase_v[i].imag()) << name;
        }
        for (std::size_t i = 0; i < f.u.rows(); ++i)
            for (std::size_t c = 0; c < f.u.cols(); ++c) {
                EXPECT_EQ(j["U"][i][c][0].get<double>(), f.u(i, c).real()) << name;
                EXPECT_EQ(j["U"][i][c][1].get<double>(), f.u(i, c).imag()) << name;
            }
        for (std::size_t i = 0; i < f.v.rows(); ++i)
            for (std::size_t c = 0; c < f.v.cols(); ++c) {
                EXPECT_EQ(j["V"][i][c][0].get<double>(), f.v(i, c).real()) << name;
                EXPECT_EQ(j["V"][i][c][1].get<double>(), f.v(i, c).imag()) << name;
            }
        EXPECT_EQ(j["residual"].get<double>(), f.residual) << name;
    }

    std::string out;
    ASSERT_EQ(run_cli("schmidt " + fixture("example4.state") + " --output json", &out), 0);
    const nlohmann::json j = nlohmann::json::parse(out);
    const phasesvd::SchmidtDecomposition sd =
        phasesvd::schmidt_decompose(phasesvd::parse_state(slurp(fixture("example4.state"))));
    for (std::size_t i = 0; i < sd.coefficients.size(); ++i) {
        EXPECT_EQ(j["coefficients"][i].get<double>(), sd.coefficients[i]);
        for (std::size_t t = 0; t < sd.basis_a[i].size(); ++t) {
            EXPECT_EQ(j["basis_a"][i][t][0].get<double>(), sd.basis_a[i][t].real());
            EXPECT_EQ(j["basis_a"][i][t][1].get<double>(), sd.basis_a[i][t].imag());
        }
        for (std::size_t t = 0; t < sd.basis_b[i].size(); ++t) {
            EXPECT_EQ(j["basis_b"][i][t][0].get<double>(), sd.basis_b[i][t].real());
            EXPECT_EQ(j["basis_b"][i][t][1].get<double>(), sd.basis_b[i][t].imag());
        }
    }
    EXPECT_EQ(j["rank"].get<std::size_t>(), sd.schmidt_rank);
    EXPECT_EQ(j["entropy_bits"].get<double>(), sd.entropy_bits);
}

namespace {

class AcceptanceReporter : public ::testing::EmptyTestEventListener {
    void OnTestEnd(const ::testing::TestInfo& info) override {
        std::printf("[ACCEPTANCE] %s: %s\n", info.name(),
                    info.result()->Passed() ? "PASS" : "FAIL");
        std::fflush(stdout);
    }
};

}  // namespace

int main(int argc, char** argv) {
    ::testing::InitGoogleTest(&argc, argv);
    ::testing::UnitTest::GetInstance()->listeners().Append(new AcceptanceReporter);
    return RUN_ALL_TESTS();
}
