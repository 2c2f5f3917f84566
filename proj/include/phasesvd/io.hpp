#pragma once

#include <charconv>
#include <cstddef>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "phasesvd/complex_matrix.hpp"
#include "phasesvd/errors.hpp"
#include "phasesvd/phase_svd.hpp"
#include "phasesvd/schmidt.hpp"

namespace phasesvd {

enum class OutputFormat { Text, Json };

namespace detail {

inline bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

/// Extent of an unsigned decimal float (digits, optional fraction, optional
/// exponent) starting at `pos`; returns `pos` itself when no digit is found.
/// A trailing 'e' that is not followed by a valid exponent is left out.
inline std::size_t scan_unsigned_float(const std::string& s, std::size_t pos) {
    std::size_t i = pos;
    bool digits = false;
    while (i < s.size() && is_ascii_digit(s[i])) {
        ++i;
        digits = true;
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && is_ascii_digit(s[i])) {
            ++i;
            digits = true;
        }
    }
    if (!digits) return pos;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        std::size_t end = j;
        while (end < s.size() && is_ascii_digit(s[end])) ++end;
        if (end > j) i = end;
    }
    return i;
}

struct ComplexComponent {
    double value = 0.0;
    bool imaginary = false;
};

} // namespace detail

/// Parse one complex literal: [sign]real, [sign]imag'i', or
/// [sign]real[sign]imag'i'; a bare (or signed) 'i' means 1i. Decimal floats
/// may carry an exponent. Throws ParseError with the offending offset.
inline Complex parse_complex(const std::string& token) {
    const auto fail = [&token](std::size_t pos) {
        return ParseError("invalid complex literal '" + token + "' (offset " +
                          std::to_string(pos) + ")");
    };
    if (token.empty()) throw ParseError("empty complex literal");

    std::size_t pos = 0;
    const auto component = [&]() -> detail::ComplexComponent {
        double sign = 1.0;
        if (pos < token.size() && (token[pos] == '+' || token[pos] == '-')) {
            if (token[pos] == '-') sign = -1.0;
            ++pos;
        }
        if (pos < token.size() && token[pos] == 'i') {
            ++pos;
            return {sign, true};
        }
        const std::size_t end = detail::scan_unsigned_float(token, pos);
        if (end == pos) throw fail(pos);
        double value = 0.0;
        const auto result = std::from_chars(token.data() + pos, token.data() + end, value);
        if (result.ec != std::errc{} || result.ptr != token.data() + end) throw fail(pos);
        pos = end;
        bool imaginary = false;
        if (pos < token.size() && token[pos] == 'i') {
            imaginary = true;
            ++pos;
        }
        return {sign * value, imaginary};
    };

    const detail::ComplexComponent first = component();
    if (pos == token.size()) {
        return first.imaginary ? Complex{0.0, first.value} : Complex{first.value, 0.0};
    }
    if (first.imaginary || (token[pos] != '+' && token[pos] != '-')) throw fail(pos);
    const detail::ComplexComponent second = component();
    if (!second.imaginary || pos != token.size()) throw fail(pos);
    return Complex{first.value, second.value};
}

namespace detail {

struct Document {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Complex> entries;
};

inline std::size_t parse_dimension(const std::string& token, std::size_t line_no) {
    std::size_t value = 0;
    const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
    if (result.ec != std::errc{} || result.ptr != token.data() + token.size() || value == 0) {
        throw ParseError("line " + std::to_string(line_no) + ": bad dimension '" + token + "'");
    }
    return value;
}

inline double parse_scale(const std::string& token, std::size_t line_no) {
    const Complex z = [&] {
        try {
            return parse_complex(token);
        } catch (const ParseError&) {
            throw ParseError("line " + std::to_string(line_no) + ": bad scale factor '" + token +
                             "'");
        }
    }();
    if (z.imag() != 0.0) {
        throw ParseError("line " + std::to_string(line_no) + ": scale factor must be real");
    }
    return z.real();
}

/// Shared scanner for matrix and state documents: optional "rows cols" header
/// (exactly two tokens on the first significant line), optional "scale FLOAT"
/// line, then whitespace-separated complex entries. '#' comments run to end
/// of line.
inline Document parse_document(const std::string& text, bool expect_header,
                               std::size_t fixed_rows, std::size_t fixed_cols) {
    Document doc;
    bool have_header = !expect_header;
    bool scale_allowed = true;
    double scale = 1.0;
    bool have_scale = false;
    if (!expect_header) {
        doc.rows = fixed_rows;
        doc.cols = fixed_cols;
        if (doc.rows == 0 || doc.cols == 0) throw ParseError("dimensions must be positive");
    }

    std::istringstream lines(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::vector<std::string> tokens;
        for (std::string word; words >> word;) tokens.push_back(word);
        if (tokens.empty()) continue;

        if (!have_header) {
            if (tokens.size() != 2) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": header must be exactly 'rows cols'");
            }
            doc.rows = parse_dimension(tokens[0], line_no);
            doc.cols = parse_dimension(tokens[1], line_no);
            if (doc.rows * doc.cols > 1000000) {
                throw ParseError("line " + std::to_string(line_no) + ": dimensions too large");
            }
            have_header = true;
            continue;
        }
        if (scale_allowed && tokens[0] == "scale") {
            if (tokens.size() != 2) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": scale line must be exactly 'scale FLOAT'");
            }
            scale = parse_scale(tokens[1], line_no);
            have_scale = true;
            scale_allowed = false;
            continue;
        }
        scale_allowed = false;

        for (const std::string& token : tokens) {
            if (doc.entries.size() == doc.rows * doc.cols) {
                throw ParseError("line " + std::to_string(line_no) + ": too many entries, expected " +
                                 std::to_string(doc.rows * doc.cols));
            }
            try {
                doc.entries.push_back(parse_complex(token));
            } catch (const ParseError& e) {
                throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
            }
        }
    }
    if (!have_header) throw ParseError("missing header line");
    if (doc.entries.size() != doc.rows * doc.cols) {
        throw ParseError("expected " + std::to_string(doc.rows * doc.cols) + " entries but found " +
                         std::to_string(doc.entries.size()));
    }
    if (have_scale) {
        for (Complex& z : doc.entries) z *= scale;
    }
    return doc;
}

} // namespace detail

/// Parse a matrix document: "rows cols" header, optional "scale FLOAT" line,
/// then rows*cols complex entries in row-major order.
inline ComplexMatrix parse_matrix(const std::string& text) {
    detail::Document doc = detail::parse_document(text, true, 0, 0);
    try {
        return ComplexMatrix(doc.rows, doc.cols, std::move(doc.entries));
    } catch (const ValueError& e) {
        throw ParseError(e.what());
    }
}

/// Parse a state document: "dim_a dim_b" header, optional "scale FLOAT" line,
/// then dim_a*dim_b amplitudes in row-major |jk> order.
inline BipartiteState parse_state(const std::string& text) {
    detail::Document doc = detail::parse_document(text, true, 0, 0);
    return {doc.rows, doc.cols, std::move(doc.entries)};
}

/// Parse a headerless state document with the dimensions supplied by the
/// caller. The optional "scale FLOAT" line is still honored.
inline BipartiteState parse_state(const std::string& text, std::size_t dim_a, std::size_t dim_b) {
    detail::Document doc = detail::parse_document(text, false, dim_a, dim_b);
    return {doc.rows, doc.cols, std::move(doc.entries)};
}

/// 17 significant digits, locale-independent; round-trips any double exactly.
inline std::string format_real(double x) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, result.ptr);
}

/// Complex number in the same token grammar parse_complex reads.
inline std::string format_complex_token(Complex z) {
    if (z.imag() == 0.0) return format_real(z.real());
    if (z.real() == 0.0) return format_real(z.imag()) + "i";
    std::string s = format_real(z.real());
    if (!(z.imag() < 0.0)) s += '+';
    s += format_real(z.imag());
    s += 'i';
    return s;
}

namespace detail {

inline void append_json_complex(std::string& out, Complex z) {
    out += '[';
    out += format_real(z.real());
    out += ',';
    out += format_real(z.imag());
    out += ']';
}

inline void append_json_complex_list(std::string& out, const std::vector<Complex>& values) {
    out += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ',';
        append_json_complex(out, values[i]);
    }
    out += ']';
}

inline void append_json_real_list(std::string& out, const std::vector<double>& values) {
    out += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ',';
        out += format_real(values[i]);
    }
    out += ']';
}

inline void append_json_matrix(std::string& out, const ComplexMatrix& m) {
    out += '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (i > 0) out += ',';
        out += '[';
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ',';
            append_json_complex(out, m(i, j));
        }
        out += ']';
    }
    out += ']';
}

inline void append_text_matrix(std::string& out, const std::string& label,
                               const ComplexMatrix& m) {
    out += label;
    out += ' ';
    out += std::to_string(m.rows());
    out += ' ';
    out += std::to_string(m.cols());
    out += '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ' ';
            out += format_complex_token(m(i, j));
        }
        out += '\n';
    }
}

inline void append_text_complex_list(std::string& out, const std::string& label,
                                     const std::vector<Complex>& values) {
    out += label;
    for (const Complex& z : values) {
        out += ' ';
        out += format_complex_token(z);
    }
    out += '\n';
}

inline void append_text_real_list(std::string& out, const std::string& label,
                                  const std::vector<double>& values) {
    out += label;
    for (double x : values) {
        out += ' ';
        out += format_real(x);
    }
    out += '\n';
}

} // namespace detail

/// Short name of a phase convention, as used by JSON output and CLI flags.
inline std::string convention_name(const PhaseConvention& convention) {
    switch (convention.kind) {
        case PhaseConvention::Kind::AllInU: return "u";
        case PhaseConvention::Kind::AllInV: return "v";
        case PhaseConvention::Kind::HalfHalf: return "split";
        case PhaseConvention::Kind::CustomAlphas: return "custom";
    }
    return "u";
}

/// Serialize a factorization. JSON keys, in order: "U", "sigma", "V", "d",
/// "phase_u", "phase_v", "residual", "convention"; complex numbers are
/// [re, im] pairs and every number carries 17 significant digits. The text
/// form lists the same fields with parse-compatible complex tokens.
inline std::string emit_result(const SvdFactorization& f, OutputFormat format) {
    std::string out;
    if (format == OutputFormat::Json) {
        out += "{\"U\":";
        detail::append_json_matrix(out, f.u);
        out += ",\"sigma\":";
        detail::append_json_real_list(out, f.sigma);
        out += ",\"V\":";
        detail::append_json_matrix(out, f.v);
        out += ",\"d\":";
        detail::append_json_complex_list(out, f.d);
        out += ",\"phase_u\":";
        detail::append_json_complex_list(out, f.phase_u);
        out += ",\"phase_v\":";
        detail::append_json_complex_list(out, f.phase_v);
        out += ",\"residual\":";
        out += format_real(f.residual);
        out += ",\"convention\":\"";
        out += convention_name(f.convention);
        out += "\"}\n";
        return out;
    }
    detail::append_text_matrix(out, "U", f.u);
    detail::append_text_real_list(out, "sigma", f.sigma);
    detail::append_text_matrix(out, "V", f.v);
    detail::append_text_complex_list(out, "d", f.d);
    detail::append_text_complex_list(out, "phase_u", f.phase_u);
    detail::append_text_complex_list(out, "phase_v", f.phase_v);
    out += "residual ";
    out += format_real(f.residual);
    out += "\nconvention ";
    out += convention_name(f.convention);
    out += '\n';
    return out;
}

/// Serialize a Schmidt decomposition. JSON keys, in order: "coefficients",
/// "basis_a", "basis_b", "rank", "entropy_bits".
inline std::string emit_result(const SchmidtDecomposition& sd, OutputFormat format) {
    std::string out;
    if (format == OutputFormat::Json) {
        out += "{\"coefficients\":";
        detail::append_json_real_list(out, sd.coefficients);
        out += ",\"basis_a\":[";
        for (std::size_t i = 0; i < sd.basis_a.size(); ++i) {
            if (i > 0) out += ',';
            detail::append_json_complex_list(out, sd.basis_a[i]);
        }
        out += "],\"basis_b\":[";
        for (std::size_t i = 0; i < sd.basis_b.size(); ++i) {
            if (i > 0) out += ',';
            detail::append_json_complex_list(out, sd.basis_b[i]);
        }
        out += "],\"rank\":";
        out += std::to_string(sd.schmidt_rank);
        out += ",\"entropy_bits\":";
        out += format_real(sd.entropy_bits);
        out += "}\n";
        return out;
    }
    detail::append_text_real_list(out, "coefficients", sd.coefficients);
    out += "basis_a " + std::to_string(sd.basis_a.size()) + " " +
           std::to_string(sd.basis_a.empty() ? 0 : sd.basis_a[0].size()) + "\n";
    for (const std::vector<Complex>& vec : sd.basis_a) {
        for (std::size_t j = 0; j < vec.size(); ++j) {
            if (j > 0) out += ' ';
            out += format_complex_token(vec[j]);
        }
        out += '\n';
    }
    out += "basis_b " + std::to_string(sd.basis_b.size()) + " " +
           std::to_string(sd.basis_b.empty() ? 0 : sd.basis_b[0].size()) + "\n";
    for (const std::vector<Complex>& vec : sd.basis_b) {
        for (std::size_t j = 0; j < vec.size(); ++j) {
            if (j > 0) out += ' ';
            out += format_complex_token(vec[j]);
        }
        out += '\n';
    }
    out += "rank " + std::to_string(sd.schmidt_rank) + "\n";
    out += "entropy_bits " + format_real(sd.entropy_bits) + "\n";
    return out;
}

} // namespace phasesvd
