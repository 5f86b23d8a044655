#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pir/errors.hpp"
#include "pir/matrix.hpp"

namespace pir {

/// N x (n-1) record of per-step choices: +1 random, -1 greedy.
struct StrategyMatrix {
    std::size_t agents = 0;
    std::size_t steps = 0;
    std::vector<std::int8_t> entries; // row-major

    StrategyMatrix() = default;
    StrategyMatrix(std::size_t n_agents, std::size_t n_steps)
        : agents(n_agents), steps(n_steps), entries(n_agents * n_steps, 1) {
        if (n_agents == 0 || n_steps == 0)
            throw InvalidArgument("StrategyMatrix: dimensions must be positive");
    }

    std::int8_t& operator()(std::size_t i, std::size_t j) { return entries[i * steps + j]; }
    std::int8_t operator()(std::size_t i, std::size_t j) const { return entries[i * steps + j]; }

    /// Row as a "+-" string, the wire format used in run exports.
    std::string row_string(std::size_t i) const {
        std::string s;
        s.reserve(steps);
        for (std::size_t j = 0; j < steps; ++j) s.push_back((*this)(i, j) > 0 ? '+' : '-');
        return s;
    }
};

struct CovarianceMatrix {
    Matrix values; // N x N
};

struct ComplexityScore {
    double value = 0.0;
};

/// Variance-covariance of the agent rows: rows are centered by their own mean
/// over steps, V = centered * centered^T divided by the step count.
inline CovarianceMatrix covariance_matrix(const StrategyMatrix& s) {
    if (s.steps < 2)
        throw InvalidArgument("covariance_matrix: needs at least 2 steps");
    const std::size_t N = s.agents, T = s.steps;
    std::vector<double> centered(N * T);
    for (std::size_t i = 0; i < N; ++i) {
        double mean = 0.0;
        for (std::size_t j = 0; j < T; ++j) mean += s(i, j);
        mean /= static_cast<double>(T);
        for (std::size_t j = 0; j < T; ++j) centered[i * T + j] = s(i, j) - mean;
    }
    CovarianceMatrix v{Matrix(N, N)};
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t k = i; k < N; ++k) {
            double dot = 0.0;
            for (std::size_t j = 0; j < T; ++j) dot += centered[i * T + j] * centered[k * T + j];
            const double val = dot / static_cast<double>(T);
            v.values(i, k) = val;
            v.values(k, i) = val;
        }
    }
    return v;
}

/// C(system) = (1/N^2) sum_ij V_ij^2, the quadratic trace of V by symmetry.
inline ComplexityScore quadratic_trace_system(const CovarianceMatrix& v) {
    const std::size_t N = v.values.rows;
    if (N == 0 || v.values.cols != N)
        throw InvalidArgument("quadratic_trace_system: square matrix required");
    double sum = 0.0;
    for (double x : v.values.data) sum += x * x;
    return {sum / (static_cast<double>(N) * static_cast<double>(N))};
}

/// C(problem) = (1/n^2) sum_ij (d_ij/d_max)^2, the quadratic trace of the
/// normalized distance matrix.
inline ComplexityScore problem_complexity(const Matrix& d) {
    const std::size_t n = d.rows;
    if (n == 0 || d.cols != n) throw InvalidArgument("problem_complexity: square matrix required");
    if (!is_symmetric(d)) throw InvalidArgument("problem_complexity: matrix must be symmetric");
    double d_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d(i, i) != 0.0) throw InvalidArgument("problem_complexity: nonzero diagonal");
        for (std::size_t j = 0; j < n; ++j) {
            if (d(i, j) < 0.0) throw InvalidArgument("problem_complexity: negative distance");
            d_max = d(i, j) > d_max ? d(i, j) : d_max;
        }
    }
    if (d_max == 0.0)
        throw DegenerateInstance("problem_complexity: all distances are zero");
    double sum = 0.0;
    for (double x : d.data) {
        const double m = x / d_max;
        sum += m * m;
    }
    return {sum / (static_cast<double>(n) * static_cast<double>(n))};
}

} // namespace pir
