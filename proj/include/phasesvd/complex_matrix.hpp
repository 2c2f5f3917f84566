#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "phasesvd/errors.hpp"

namespace phasesvd {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Dense rectangular complex matrix, row-major storage.
///
/// Dimensions are fixed at construction and always positive; entries admitted
/// through the bulk constructor or validate_finite() are finite.
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(1), cols_(1), entries_(1, Complex{0.0, 0.0}) {}

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(checked_size(rows, cols), Complex{0.0, 0.0}) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != checked_size(rows, cols)) {
            throw DimensionError("entry count " + std::to_string(entries_.size()) +
                                 " does not match " + std::to_string(rows) + "x" +
                                 std::to_string(cols));
        }
        validate_finite();
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex{1.0, 0.0};
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    const std::vector<Complex>& entries() const { return entries_; }

    std::vector<Complex> column(std::size_t j) const {
        std::vector<Complex> col(rows_);
        for (std::size_t i = 0; i < rows_; ++i) col[i] = (*this)(i, j);
        return col;
    }

    void scale_column(std::size_t j, Complex factor) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) *= factor;
    }

    void validate_finite() const {
        for (const Complex& z : entries_) {
            if (!is_finite(z)) throw ValueError("matrix contains a non-finite entry");
        }
    }

    bool operator==(const ComplexMatrix& other) const = default;

private:
    static std::size_t checked_size(std::size_t rows, std::size_t cols) {
        if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
        return rows * cols;
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<Complex> entries_;
};

/// Conjugate transpose.
inline ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
    return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.cols() != rhs.rows()) {
        throw DimensionError("cannot multiply " + std::to_string(lhs.rows()) + "x" +
                             std::to_string(lhs.cols()) + " by " + std::to_string(rhs.rows()) +
                             "x" + std::to_string(rhs.cols()));
    }
    ComplexMatrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
        }
    }
    return out;
}

inline ComplexMatrix operator+(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
        throw DimensionError("shape mismatch in matrix addition");
    }
    ComplexMatrix out(lhs.rows(), lhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t j = 0; j < lhs.cols(); ++j) out(i, j) = lhs(i, j) + rhs(i, j);
    return out;
}

inline ComplexMatrix operator-(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
        throw DimensionError("shape mismatch in matrix subtraction");
    }
    ComplexMatrix out(lhs.rows(), lhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t j = 0; j < lhs.cols(); ++j) out(i, j) = lhs(i, j) - rhs(i, j);
    return out;
}

inline ComplexMatrix operator*(Complex scalar, const ComplexMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = scalar * m(i, j);
    return out;
}

/// rows x cols matrix with `diag` on the leading diagonal, zero elsewhere.
inline ComplexMatrix diagonal_matrix(std::size_t rows, std::size_t cols,
                                     const std::vector<Complex>& diag) {
    ComplexMatrix out(rows, cols);
    const std::size_t k = std::min(std::min(rows, cols), diag.size());
    for (std::size_t j = 0; j < k; ++j) out(j, j) = diag[j];
    return out;
}

inline ComplexMatrix diagonal_matrix(std::size_t rows, std::size_t cols,
                                     const std::vector<double>& diag) {
    std::vector<Complex> d(diag.size());
    for (std::size_t j = 0; j < diag.size(); ++j) d[j] = Complex{diag[j], 0.0};
    return diagonal_matrix(rows, cols, d);
}

/// sqrt of the sum of squared entry moduli.
inline double frobenius_norm(const ComplexMatrix& m) {
    double sum = 0.0;
    for (const Complex& z : m.entries()) sum += std::norm(z);
    return std::sqrt(sum);
}

/// ||U^dagger U - I||_F, the unitarity defect.
inline double unitarity_defect(const ComplexMatrix& u) {
    const ComplexMatrix gram = adjoint(u) * u;
    double sum = 0.0;
    for (std::size_t i = 0; i < gram.rows(); ++i)
        for (std::size_t j = 0; j < gram.cols(); ++j) {
            const Complex expect = (i == j) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
            sum += std::norm(gram(i, j) - expect);
        }
    return std::sqrt(sum);
}

} // namespace phasesvd
