#pragma once

#include <cstddef>
#include <vector>

#include "pir/errors.hpp"

namespace pir {

// Minimal dense row-major matrix; all the linear algebra this library needs
// is elementwise.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    bool operator==(const Matrix&) const = default;
};

inline bool is_symmetric(const Matrix& m, double tol = 1e-12) {
    if (m.rows != m.cols) return false;
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = i + 1; j < m.cols; ++j)
            if (!(m(i, j) - m(j, i) <= tol && m(j, i) - m(i, j) <= tol)) return false;
    return true;
}

} // namespace pir
