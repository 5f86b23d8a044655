#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <random>

#include "pir/complexity.hpp"

using namespace pir;

namespace {

StrategyMatrix random_strategies(std::mt19937_64& gen, std::size_t agents, std::size_t steps) {
    StrategyMatrix s(agents, steps);
    for (std::size_t i = 0; i < agents; ++i)
        for (std::size_t j = 0; j < steps; ++j) s(i, j) = (gen() & 1) ? 1 : -1;
    return s;
}

// Independent oracle: quadratic trace through the eigenvalues of V.
double eigen_trace(const CovarianceMatrix& v) {
    const std::size_t n = v.values.rows;
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = v.values(i, j);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        sum += solver.eigenvalues()[i] * solver.eigenvalues()[i];
    return sum / (static_cast<double>(n) * static_cast<double>(n));
}

} // namespace

TEST_CASE("covariance of a constant row vanishes") {
    StrategyMatrix s(2, 4);
    for (std::size_t j = 0; j < 4; ++j) {
        s(0, j) = 1;                       // constant agent
        s(1, j) = (j % 2 == 0) ? 1 : -1;   // alternating agent
    }
    const CovarianceMatrix v = covariance_matrix(s);
    CHECK(v.values(0, 0) == 0.0);
    CHECK(v.values(0, 1) == 0.0);
    CHECK(v.values(1, 0) == 0.0);
    CHECK(v.values(1, 1) == 1.0);
}

TEST_CASE("covariance of identical alternating rows is all ones") {
    StrategyMatrix s(2, 4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j) s(i, j) = (j % 2 == 0) ? 1 : -1;
    const CovarianceMatrix v = covariance_matrix(s);
    for (double x : v.values.data) CHECK(x == 1.0);
}

TEST_CASE("orthogonal rows decorrelate") {
    StrategyMatrix s(2, 4);
    const int a[4] = {1, -1, 1, -1};
    const int b[4] = {1, 1, -1, -1};
    for (std::size_t j = 0; j < 4; ++j) {
        s(0, j) = static_cast<std::int8_t>(a[j]);
        s(1, j) = static_cast<std::int8_t>(b[j]);
    }
    const CovarianceMatrix v = covariance_matrix(s);
    CHECK(v.values(0, 0) == 1.0);
    CHECK(v.values(1, 1) == 1.0);
    CHECK(v.values(0, 1) == 0.0);
}

TEST_CASE("covariance requires at least two steps") {
    CHECK_THROWS_AS(covariance_matrix(StrategyMatrix(3, 1)), InvalidArgument);
}

TEST_CASE("quadratic trace of simple matrices") {
    CovarianceMatrix identity{Matrix(2, 2)};
    identity.values(0, 0) = identity.values(1, 1) = 1.0;
    CHECK(quadratic_trace_system(identity).value == 0.5);

    CovarianceMatrix ones{Matrix(6, 6, 1.0)};
    CHECK_THAT(quadratic_trace_system(ones).value, Catch::Matchers::WithinAbs(1.0, 1e-15));
}

TEST_CASE("squared-entry trace agrees with the eigenvalue route") {
    std::mt19937_64 gen(314);
    for (int trial = 0; trial < 20; ++trial) {
        const StrategyMatrix s = random_strategies(gen, 16, 32);
        const CovarianceMatrix v = covariance_matrix(s);
        const double direct = quadratic_trace_system(v).value;
        CHECK_THAT(direct, Catch::Matchers::WithinAbs(eigen_trace(v), 1e-9));
    }
}

TEST_CASE("covariance matrices stay symmetric and nearly PSD") {
    std::mt19937_64 gen(2718);
    for (int trial = 0; trial < 10; ++trial) {
        const CovarianceMatrix v = covariance_matrix(random_strategies(gen, 12, 9));
        CHECK(is_symmetric(v.values));
        Eigen::MatrixXd m(12, 12);
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j) m(i, j) = v.values(i, j);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
        CHECK(solver.eigenvalues().minCoeff() >= -1e-9);
    }
}

TEST_CASE("system complexity is bounded by [0, 1]") {
    std::mt19937_64 gen(555);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t agents = 2 + gen() % 12;
        const std::size_t steps = 2 + gen() % 20;
        const double c = quadratic_trace_system(covariance_matrix(
                                                    random_strategies(gen, agents, steps)))
                             .value;
        CHECK(c >= 0.0);
        CHECK(c <= 1.0 + 1e-12);
    }
}

TEST_CASE("problem complexity on small cases") {
    Matrix two(2, 2);
    two(0, 1) = two(1, 0) = 7.5;
    CHECK(problem_complexity(two).value == 0.5);

    Matrix equi(5, 5, 1.0);
    for (int i = 0; i < 5; ++i) equi(i, i) = 0.0;
    CHECK_THAT(problem_complexity(equi).value, Catch::Matchers::WithinAbs(0.8, 1e-15));

    Matrix line(3, 3); // cities at 0, 1, 2
    line(0, 1) = line(1, 0) = 1.0;
    line(1, 2) = line(2, 1) = 1.0;
    line(0, 2) = line(2, 0) = 2.0;
    CHECK_THAT(problem_complexity(line).value, Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-15));
}

TEST_CASE("problem complexity is scale and relabeling invariant, bounded below 1") {
    std::mt19937_64 gen(808);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 3 + gen() % 10;
        Matrix d(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double x = 0.1 + static_cast<double>(gen() % 1000) / 250.0;
                d(i, j) = d(j, i) = x;
            }
        const double c = problem_complexity(d).value;
        CHECK(c >= 0.0);
        CHECK(c < 1.0);

        Matrix scaled = d;
        for (auto& x : scaled.data) x *= 37.5;
        CHECK_THAT(problem_complexity(scaled).value, Catch::Matchers::WithinAbs(c, 1e-13));

        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), gen);
        Matrix relabeled(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) relabeled(perm[i], perm[j]) = d(i, j);
        CHECK_THAT(problem_complexity(relabeled).value, Catch::Matchers::WithinAbs(c, 1e-13));
    }
}

TEST_CASE("problem complexity rejects bad input") {
    CHECK_THROWS_AS(problem_complexity(Matrix(4, 4)), DegenerateInstance); // all zero

    Matrix asym(2, 2);
    asym(0, 1) = 1.0;
    asym(1, 0) = 2.0;
    CHECK_THROWS_AS(problem_complexity(asym), InvalidArgument);

    Matrix diag(2, 2);
    diag(0, 0) = 1.0;
    CHECK_THROWS_AS(problem_complexity(diag), InvalidArgument);
}
