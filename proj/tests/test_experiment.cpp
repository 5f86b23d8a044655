#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pir/experiment.hpp"

using namespace pir;

namespace {

SweepResult synthetic_sweep(const std::vector<double>& grid, const std::vector<double>& means) {
    SweepResult s;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SweepPoint pt;
        pt.v = grid[i];
        pt.mean = means[i];
        pt.mean_distances = {means[i]};
        pt.seeds = {0};
        s.points.push_back(std::move(pt));
    }
    s.v_star_index = find_v_star_index(s.points);
    s.v_star = s.points[s.v_star_index].v;
    return s;
}

} // namespace

TEST_CASE("generate_problem families") {
    const ProblemInstance equi = generate_problem(ProblemKind::equidistant, 5, 1);
    CHECK_THAT(problem_complexity(equi.dist).value, Catch::Matchers::WithinAbs(0.8, 1e-15));

    const ProblemInstance a = generate_problem(ProblemKind::uniform_square, 12, 9);
    const ProblemInstance b = generate_problem(ProblemKind::uniform_square, 12, 9);
    CHECK(a.dist == b.dist);
    CHECK(a.coords == b.coords);
    for (double d : a.dist.data) CHECK(d <= std::sqrt(2.0));

    const ProblemInstance c1 = generate_problem(ProblemKind::clustered, 30, 4);
    const ProblemInstance c2 = generate_problem(ProblemKind::clustered, 30, 4);
    CHECK(c1.dist == c2.dist);
    CHECK(generate_problem(ProblemKind::clustered, 30, 5).dist != c1.dist);

    CHECK_THROWS_AS(generate_problem(ProblemKind::uniform_square, 1, 0), InvalidArgument);
    CHECK(parse_problem_kind("equidistant") == ProblemKind::equidistant);
    CHECK_THROWS_AS(parse_problem_kind("rings"), InvalidArgument);
}

TEST_CASE("default grid spans [0, 1]") {
    const std::vector<double> grid = default_grid(21);
    CHECK(grid.size() == 21);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 1.0);
    CHECK_THAT(grid[1], Catch::Matchers::WithinAbs(0.05, 1e-15));
}

TEST_CASE("sweep means reduce to single runs") {
    const ProblemInstance p = generate_problem(ProblemKind::uniform_square, 8, 3);
    SweepConfig cfg;
    cfg.grid = {0.4};
    cfg.replicates = 1;
    cfg.base.agents = 10;
    cfg.base.seed = 123;
    const SweepResult s = sweep_v(p, cfg);
    RunConfig rc = cfg.base;
    rc.v = 0.4;
    rc.seed = s.points[0].seeds[0];
    CHECK(s.points[0].mean == run(p, rc).mean_distance);
    CHECK(s.points[0].stddev == 0.0);
}

TEST_CASE("two-city sweeps are flat") {
    Matrix d(2, 2);
    d(0, 1) = d(1, 0) = 4.25;
    const ProblemInstance p = instance_from_matrix(std::move(d));
    SweepConfig cfg;
    cfg.grid = default_grid(5);
    cfg.replicates = 3;
    cfg.base.agents = 6;
    const SweepResult s = sweep_v(p, cfg);
    for (const auto& pt : s.points) CHECK(pt.mean == 4.25);
    CHECK(s.v_star == 0.0); // ties break toward smaller v
}

TEST_CASE("parallel and sequential sweeps agree bit for bit") {
    const ProblemInstance p = generate_problem(ProblemKind::uniform_square, 10, 11);
    SweepConfig cfg;
    cfg.grid = default_grid(7);
    cfg.replicates = 4;
    cfg.base.agents = 12;
    cfg.base.seed = 31;
    const SweepResult seq = sweep_v(p, cfg, 1);
    const SweepResult par = sweep_v(p, cfg, 4);
    REQUIRE(seq.points.size() == par.points.size());
    for (std::size_t i = 0; i < seq.points.size(); ++i) {
        CHECK(seq.points[i].mean == par.points[i].mean);
        CHECK(seq.points[i].stddev == par.points[i].stddev);
        CHECK(seq.points[i].mean_distances == par.points[i].mean_distances);
        CHECK(seq.points[i].seeds == par.points[i].seeds);
    }
    CHECK(seq.v_star == par.v_star);
    CHECK(sweep_curve_csv(seq) == sweep_curve_csv(par));
}

TEST_CASE("find_v_star takes the argmin with ties toward smaller v") {
    CHECK(find_v_star(synthetic_sweep({0.0, 0.5, 1.0}, {3, 1, 2})) == 0.5);
    CHECK(find_v_star(synthetic_sweep({0.0, 0.5, 1.0}, {2, 2, 2})) == 0.0);

    // injected strictly concave performance curve, interior argmax recovered
    std::vector<double> grid = default_grid(21), means;
    for (double v : grid) means.push_back((v - 0.4) * (v - 0.4)); // -performance
    CHECK_THAT(find_v_star(synthetic_sweep(grid, means)), Catch::Matchers::WithinAbs(0.4, 1e-12));

    // adding a constant to all means never moves the argmin
    std::vector<double> shifted = means;
    for (double& m : shifted) m += 17.0;
    CHECK(find_v_star(synthetic_sweep(grid, shifted)) ==
          find_v_star(synthetic_sweep(grid, means)));
}

TEST_CASE("concavity_report on exact parabolas") {
    std::vector<double> grid = default_grid(21), concave_means, convex_means;
    for (double v : grid) {
        concave_means.push_back((v - 0.4) * (v - 0.4));  // performance -(v-0.4)^2
        convex_means.push_back(-(v - 0.5) * (v - 0.5));  // performance +(v-0.5)^2
    }
    const ConcavityReport down = concavity_report(synthetic_sweep(grid, concave_means));
    CHECK_THAT(down.curvature, Catch::Matchers::WithinAbs(-1.0, 1e-9));
    CHECK(down.negative_curvature);
    CHECK_THAT(down.vertex, Catch::Matchers::WithinAbs(0.4, 1e-9));
    CHECK(down.interior_maximum);
    CHECK(down.detected);
    CHECK(down.sign_changes == 1);
    const double expected_score = 1.0 / 19.0; // one change over 19 adjacent nonzero pairs
    CHECK_THAT(down.unimodality_score, Catch::Matchers::WithinAbs(expected_score, 1e-12));

    const ConcavityReport up = concavity_report(synthetic_sweep(grid, convex_means));
    CHECK_FALSE(up.negative_curvature);
    CHECK_FALSE(up.detected);

    CHECK_THROWS_AS(concavity_report(synthetic_sweep({0.0, 1.0}, {1, 2})), InvalidArgument);
}

TEST_CASE("concavity detector has at least 95 percent power at 1 percent noise") {
    const std::vector<double> grid = default_grid(21);
    std::mt19937_64 gen(6060);
    std::normal_distribution<double> noise(0.0, 1.0);
    int detected = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> means;
        double lo = 1e300, hi = -1e300;
        for (double v : grid) {
            const double y = (v - 0.45) * (v - 0.45);
            lo = std::min(lo, y);
            hi = std::max(hi, y);
            means.push_back(y);
        }
        const double sigma = 0.01 * (hi - lo);
        for (double& m : means) m += sigma * noise(gen);
        if (concavity_report(synthetic_sweep(grid, means)).detected) ++detected;
    }
    CHECK(detected >= 95);
}

TEST_CASE("ols_fit closed form") {
    // frozen hand computation: points (0,1), (1,3), (2,4)
    const OlsFit fit = ols_fit({0, 1, 2}, {1, 3, 4});
    CHECK_THAT(fit.slope, Catch::Matchers::WithinAbs(1.5, 1e-12));
    CHECK_THAT(fit.intercept, Catch::Matchers::WithinAbs(7.0 / 6.0, 1e-12));
    CHECK_THAT(fit.r_squared, Catch::Matchers::WithinAbs(27.0 / 28.0, 1e-12));

    // exact line recovered with R^2 = 1
    std::vector<double> xs, ys;
    for (int i = 0; i < 10; ++i) {
        const double x = 0.05 + 0.09 * i;
        xs.push_back(x);
        ys.push_back(0.67 * x + 0.33);
    }
    const OlsFit line = ols_fit(xs, ys);
    CHECK_THAT(line.slope, Catch::Matchers::WithinAbs(0.67, 1e-12));
    CHECK_THAT(line.intercept, Catch::Matchers::WithinAbs(0.33, 1e-12));
    CHECK_THAT(line.r_squared, Catch::Matchers::WithinAbs(1.0, 1e-12));

    // two points interpolate exactly
    const OlsFit two = ols_fit({0.2, 0.8}, {1.0, 2.0});
    CHECK_THAT(two.r_squared, Catch::Matchers::WithinAbs(1.0, 1e-12));

    CHECK_THROWS_AS(ols_fit({0.5, 0.5, 0.5}, {1, 2, 3}), RankDeficient);
    CHECK_THROWS_AS(ols_fit({1}, {1}), InvalidArgument);
}

TEST_CASE("predict_complexity evaluates the optimality line") {
    CHECK_THAT(predict_complexity(0.0), Catch::Matchers::WithinAbs(0.33, 1e-15));
    CHECK_THAT(predict_complexity(1.0), Catch::Matchers::WithinAbs(1.0, 1e-15));
    CHECK_THAT(predict_complexity(0.5), Catch::Matchers::WithinAbs(0.665, 1e-15));
    CHECK(predict_complexity(0.5, 1.0, 0.0) == 0.5);
}

TEST_CASE("optimality pipeline produces a deterministic report") {
    std::vector<ProblemInstance> problems;
    for (std::uint64_t s = 1; s <= 3; ++s)
        problems.push_back(generate_problem(ProblemKind::uniform_square, 7, s));
    SweepConfig cfg;
    cfg.grid = default_grid(5);
    cfg.replicates = 2;
    cfg.base.agents = 8;
    cfg.base.seed = 77;

    const OptimalityResult a = optimality_fit(problems, cfg, 1);
    const OptimalityResult b = optimality_fit(problems, cfg, 3);
    REQUIRE(a.points.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(a.points[i].c_p == b.points[i].c_p);
        CHECK(a.points[i].c_a == b.points[i].c_a);
        CHECK(a.points[i].v_star == b.points[i].v_star);
        CHECK(a.points[i].c_a >= 0.0);
        CHECK(a.points[i].c_a <= 1.0 + 1e-12);
        CHECK(a.points[i].n == 7);
    }
    CHECK(a.fit.slope == b.fit.slope);
    CHECK(a.fit.intercept == b.fit.intercept);

    CHECK_THROWS_AS(optimality_fit({problems[0]}, cfg), InvalidArgument);
}

TEST_CASE("CSV surfaces") {
    const SweepResult s = synthetic_sweep({0.0, 0.5, 1.0}, {3, 1, 2});
    const std::string curve = sweep_curve_csv(s);
    CHECK(curve.rfind("v,mean,std\n", 0) == 0);
    CHECK(curve.find("0.5,1,0") != std::string::npos);

    ProblemPoint pt;
    pt.id = "uniform-1";
    pt.n = 30;
    pt.c_p = 0.25;
    pt.v_star = 0.4;
    pt.c_a = 0.5;
    const std::string points = problem_points_csv({pt});
    CHECK(points == "id,n,c_p,v_star,c_a\nuniform-1,30,0.25,0.4,0.5\n");

    const OlsFit fit = ols_fit({0, 1}, {0.33, 1.0});
    const std::string summary = fit_summary_csv(fit, 2);
    CHECK(summary.rfind("slope,intercept,r_squared,k\n", 0) == 0);
    CHECK(summary.find(",2\n") != std::string::npos);
}

TEST_CASE("sweep config validation") {
    const ProblemInstance p = generate_problem(ProblemKind::uniform_square, 5, 1);
    SweepConfig bad;
    bad.grid = {0.5, 0.4};
    CHECK_THROWS_AS(sweep_v(p, bad), InvalidArgument);
    bad.grid = {0.5, 1.5};
    CHECK_THROWS_AS(sweep_v(p, bad), InvalidArgument);
    bad.grid = {};
    CHECK_THROWS_AS(sweep_v(p, bad), InvalidArgument);
    SweepConfig zero_reps;
    zero_reps.replicates = 0;
    CHECK_THROWS_AS(sweep_v(p, zero_reps), InvalidArgument);
    CHECK_THROWS_AS(default_grid(1), InvalidArgument);
}
