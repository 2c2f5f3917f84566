// Command-line front end: svd, schmidt, and verify subcommands over the
// matrix/state file formats. Exit codes: 0 success, 1 verification failure,
// 2 input error, 3 numerical error.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phasesvd/phasesvd.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw phasesvd::ParseError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw phasesvd::ParseError("cannot read '" + path + "'");
    return buffer.str();
}

phasesvd::PhaseConvention convention_from_name(const std::string& name) {
    if (name == "u") return phasesvd::PhaseConvention::all_in_u();
    if (name == "v") return phasesvd::PhaseConvention::all_in_v();
    return phasesvd::PhaseConvention::half_half();
}

phasesvd::OutputFormat format_from_name(const std::string& name) {
    return name == "json" ? phasesvd::OutputFormat::Json : phasesvd::OutputFormat::Text;
}

std::string run_svd(const std::string& input_path, const std::string& convention, double tol,
                    const std::string& output) {
    const phasesvd::ComplexMatrix a = phasesvd::parse_matrix(read_file(input_path));
    const phasesvd::SvdFactorization f = phasesvd::svd(a, convention_from_name(convention), tol);
    return phasesvd::emit_result(f, format_from_name(output));
}

std::string run_schmidt(const std::string& input_path, const std::string& convention, double tol,
                        const std::string& output, const std::vector<std::size_t>& dims) {
    const std::string text = read_file(input_path);
    const phasesvd::BipartiteState psi =
        dims.empty() ? phasesvd::parse_state(text) : phasesvd::parse_state(text, dims[0], dims[1]);
    const phasesvd::SchmidtDecomposition sd =
        phasesvd::schmidt_decompose(psi, convention_from_name(convention), tol);
    return phasesvd::emit_result(sd, format_from_name(output));
}

std::string run_verify(const std::string& input_path, double tol, const std::string& output,
                       bool* pass) {
    const phasesvd::ComplexMatrix a = phasesvd::parse_matrix(read_file(input_path));
    const double threshold = 1e-9 * std::max(1.0, phasesvd::frobenius_norm(a));

    const char* names[3] = {"u", "v", "split"};
    double residuals[3];
    phasesvd::ComplexMatrix recon[3];
    for (int i = 0; i < 3; ++i) {
        const phasesvd::SvdFactorization f = phasesvd::svd(a, convention_from_name(names[i]), tol);
        residuals[i] = f.residual;
        recon[i] = phasesvd::reconstruct(f);
    }
    double discrepancy = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            discrepancy = std::max(discrepancy, phasesvd::frobenius_norm(recon[i] - recon[j]));

    *pass = residuals[0] <= threshold && residuals[1] <= threshold && residuals[2] <= threshold &&
            discrepancy <= threshold;

    std::string out;
    if (format_from_name(output) == phasesvd::OutputFormat::Json) {
        out += "{\"residuals\":{";
        for (int i = 0; i < 3; ++i) {
            if (i > 0) out += ',';
            out += '"';
            out += names[i];
            out += "\":";
            out += phasesvd::format_real(residuals[i]);
        }
        out += "},\"max_cross_discrepancy\":";
        out += phasesvd::format_real(discrepancy);
        out += ",\"threshold\":";
        out += phasesvd::format_real(threshold);
        out += ",\"pass\":";
        out += *pass ? "true" : "false";
        out += "}\n";
        return out;
    }
    for (int i = 0; i < 3; ++i) {
        out += "residual ";
        out += names[i];
        out += ' ';
        out += phasesvd::format_real(residuals[i]);
        out += '\n';
    }
    out += "max_cross_discrepancy " + phasesvd::format_real(discrepancy) + "\n";
    out += "threshold " + phasesvd::format_real(threshold) + "\n";
    out += std::string("result ") + (*pass ? "PASS" : "FAIL") + "\n";
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-consistent complex SVD and Schmidt decomposition"};
    app.require_subcommand(1);

    std::string input_path;
    std::string convention = "u";
    double tol = 1e-12;
    std::string output = "text";
    std::vector<std::size_t> dims;

    const auto add_common = [&](CLI::App* cmd, bool with_convention) {
        cmd->add_option("input", input_path, "Input file")->required();
        if (with_convention) {
            cmd->add_option("--convention", convention, "Phase convention: u, v, or split")
                ->check(CLI::IsMember({"u", "v", "split"}))
                ->capture_default_str();
        }
        cmd->add_option("--tol", tol, "Relative tolerance")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--output", output, "Output format: text or json")
            ->check(CLI::IsMember({"text", "json"}))
            ->capture_default_str();
    };

    CLI::App* svd_cmd = app.add_subcommand("svd", "Decompose a matrix file");
    add_common(svd_cmd, true);
    CLI::App* schmidt_cmd = app.add_subcommand("schmidt", "Decompose a bipartite state file");
    add_common(schmidt_cmd, true);
    schmidt_cmd
        ->add_option("--dims", dims, "Subsystem dimensions for a headerless state file")
        ->expected(2);
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Reconstruct under all conventions and check residuals");
    add_common(verify_cmd, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (svd_cmd->parsed()) {
            const std::string out = run_svd(input_path, convention, tol, output);
            std::fputs(out.c_str(), stdout);
            return 0;
        }
        if (schmidt_cmd->parsed()) {
            const std::string out = run_schmidt(input_path, convention, tol, output, dims);
            std::fputs(out.c_str(), stdout);
            return 0;
        }
        bool pass = false;
        const std::string out = run_verify(input_path, tol, output, &pass);
        std::fputs(out.c_str(), stdout);
        return pass ? 0 : 1;
    } catch (const phasesvd::ConvergenceError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const phasesvd::PhaseSolveError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const phasesvd::NotHermitianError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const phasesvd::Error& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    }
}
