#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "pir/complexity.hpp"
#include "pir/errors.hpp"
#include "pir/instance.hpp"
#include "pir/rng.hpp"
#include "pir/swarm.hpp"

namespace pir {

enum class ProblemKind { uniform_square, clustered, equidistant };

inline ProblemKind parse_problem_kind(const std::string& s) {
    if (s == "uniform_square") return ProblemKind::uniform_square;
    if (s == "clustered") return ProblemKind::clustered;
    if (s == "equidistant") return ProblemKind::equidistant;
    throw InvalidArgument("unsupported problem kind: '" + s + "'");
}

/// Deterministic instance families for experiments. uniform_square draws
/// cities from the unit square; clustered places Gaussian blobs (sigma 0.05)
/// around max(2, n/10) uniform centers; equidistant is the all-ones matrix.
inline ProblemInstance generate_problem(ProblemKind kind, std::size_t n, std::uint64_t seed) {
    if (n < 2) throw InvalidArgument("generate_problem: n must be >= 2");
    switch (kind) {
    case ProblemKind::uniform_square: {
        CounterRng rng(seed, 0x756e6966); // stream tag: kind
        std::vector<std::array<double, 2>> coords(n);
        for (auto& c : coords) {
            c[0] = rng.next_unit();
            c[1] = rng.next_unit();
        }
        return instance_from_coords(std::move(coords), false, "uniform_square");
    }
    case ProblemKind::clustered: {
        CounterRng rng(seed, 0x636c7573);
        const std::size_t k = n / 10 < 2 ? 2 : n / 10;
        std::vector<std::array<double, 2>> centers(k);
        for (auto& c : centers) {
            c[0] = rng.next_unit();
            c[1] = rng.next_unit();
        }
        std::vector<std::array<double, 2>> coords(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& c = centers[rng.uniform_below(k)];
            // Box-Muller, sigma 0.05
            const double u1 = rng.next_unit(), u2 = rng.next_unit();
            const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
            coords[i][0] = c[0] + 0.05 * r * std::cos(6.283185307179586 * u2);
            coords[i][1] = c[1] + 0.05 * r * std::sin(6.283185307179586 * u2);
        }
        return instance_from_coords(std::move(coords), false, "clustered");
    }
    case ProblemKind::equidistant: {
        Matrix d(n, n, 1.0);
        for (std::size_t i = 0; i < n; ++i) d(i, i) = 0.0;
        return instance_from_matrix(std::move(d), "equidistant");
    }
    }
    throw InvalidArgument("generate_problem: unknown kind");
}

inline std::vector<double> default_grid(std::size_t points = 21) {
    if (points < 2) throw InvalidArgument("grid needs at least 2 points");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

struct SweepConfig {
    std::vector<double> grid = default_grid();
    std::uint32_t replicates = 20;
    RunConfig base;

    void validate() const {
        if (grid.empty()) throw InvalidArgument("SweepConfig: empty grid");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (!(grid[i] >= 0.0 && grid[i] <= 1.0))
                throw InvalidArgument("SweepConfig: grid values must lie in [0, 1]");
            if (i > 0 && !(grid[i - 1] < grid[i]))
                throw InvalidArgument("SweepConfig: grid must increase strictly");
        }
        if (replicates < 1) throw InvalidArgument("SweepConfig: replicates must be >= 1");
    }
};

struct SweepPoint {
    double v = 0.0;
    std::vector<std::uint64_t> seeds;      // one per replicate, position-derived
    std::vector<double> mean_distances;    // D-bar per replicate
    double mean = 0.0;                     // mean of D-bar over replicates
    double stddev = 0.0;                   // sample std (0 when replicates == 1)
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::size_t v_star_index = 0;
    double v_star = 0.0;
};

namespace detail {

template <typename F>
void parallel_for(std::size_t count, unsigned jobs, const F& body) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            body(i);
        }
    };
    std::vector<std::thread> threads;
    const unsigned spawn = jobs < count ? jobs : static_cast<unsigned>(count);
    threads.reserve(spawn);
    for (unsigned j = 0; j < spawn; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
}

} // namespace detail

/// Grid argmin of mean D-bar (performance is -D-bar); ties go to smaller v.
inline std::size_t find_v_star_index(const std::vector<SweepPoint>& points) {
    if (points.empty()) throw InvalidArgument("find_v_star: empty sweep");
    std::size_t best = 0;
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].mean < points[best].mean) best = i;
    return best;
}

inline double find_v_star(const SweepResult& s) { return s.points[find_v_star_index(s.points)].v; }

/// Runs replicates at every grid value. Seeds derive from (base seed, grid
/// index, replicate index), and results land in position-indexed slots, so
/// the outcome is independent of scheduling.
inline SweepResult sweep_v(const ProblemInstance& p, const SweepConfig& cfg, unsigned jobs = 1) {
    cfg.validate();
    cfg.base.validate();
    const std::size_t V = cfg.grid.size(), R = cfg.replicates;

    SweepResult result;
    result.points.resize(V);
    for (std::size_t vi = 0; vi < V; ++vi) {
        SweepPoint& pt = result.points[vi];
        pt.v = cfg.grid[vi];
        pt.seeds.resize(R);
        pt.mean_distances.resize(R);
        for (std::size_t r = 0; r < R; ++r) pt.seeds[r] = derive_seed(cfg.base.seed, vi, r);
    }

    detail::parallel_for(V * R, jobs, [&](std::size_t task) {
        const std::size_t vi = task / R, r = task % R;
        RunConfig rc = cfg.base;
        rc.v = cfg.grid[vi];
        rc.seed = result.points[vi].seeds[r];
        result.points[vi].mean_distances[r] = run(p, rc).mean_distance;
    });

    for (auto& pt : result.points) {
        pt.mean = detail::neumaier_sum(pt.mean_distances) / static_cast<double>(R);
        if (R > 1) {
            double ss = 0.0;
            for (double d : pt.mean_distances) ss += (d - pt.mean) * (d - pt.mean);
            pt.stddev = std::sqrt(ss / static_cast<double>(R - 1));
        }
    }
    result.v_star_index = find_v_star_index(result.points);
    result.v_star = result.points[result.v_star_index].v;
    return result;
}

struct ConcavityReport {
    double curvature = 0.0;  // quadratic coefficient of the performance fit
    double slope = 0.0;
    double intercept = 0.0;
    bool negative_curvature = false;
    double vertex = 0.0;     // stationary point of the fitted parabola
    bool interior_maximum = false;
    int sign_changes = 0;           // in the successive differences of performance
    double unimodality_score = 0.0; // sign changes / adjacent nonzero difference pairs
    bool detected = false;   // negative curvature with an interior maximum
};

/// Least-squares quadratic fit of performance (-mean D-bar) against v plus a
/// difference-based unimodality score; a clean single-peak curve has exactly
/// one sign change.
inline ConcavityReport concavity_report(const SweepResult& s) {
    const std::size_t m = s.points.size();
    if (m < 3) throw InvalidArgument("concavity_report: needs at least 3 grid points");

    // normal equations for y = a v^2 + b v + c
    double s0 = static_cast<double>(m), s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    double t0 = 0, t1 = 0, t2 = 0;
    for (const auto& pt : s.points) {
        const double v = pt.v, y = -pt.mean;
        const double v2 = v * v;
        s1 += v;
        s2 += v2;
        s3 += v2 * v;
        s4 += v2 * v2;
        t0 += y;
        t1 += v * y;
        t2 += v2 * y;
    }
    // Solve [[s4 s3 s2][s3 s2 s1][s2 s1 s0]] [a b c] = [t2 t1 t0] by Cramer.
    const double det = s4 * (s2 * s0 - s1 * s1) - s3 * (s3 * s0 - s1 * s2) +
                       s2 * (s3 * s1 - s2 * s2);
    ConcavityReport rep;
    if (det != 0.0) {
        rep.curvature = (t2 * (s2 * s0 - s1 * s1) - s3 * (t1 * s0 - t0 * s1) +
                         s2 * (t1 * s1 - t0 * s2)) / det;
        rep.slope = (s4 * (t1 * s0 - t0 * s1) - t2 * (s3 * s0 - s1 * s2) +
                     s2 * (s3 * t0 - t1 * s2)) / det;
        rep.intercept = (s4 * (s2 * t0 - t1 * s1) - s3 * (s3 * t0 - t1 * s2) +
                         t2 * (s3 * s1 - s2 * s2)) / det;
    }
    rep.negative_curvature = rep.curvature < 0.0;
    if (rep.curvature != 0.0) {
        rep.vertex = -rep.slope / (2.0 * rep.curvature);
        rep.interior_maximum = rep.negative_curvature && rep.vertex > s.points.front().v &&
                               rep.vertex < s.points.back().v;
    }

    int changes = 0, segments = 0, last = 0;
    for (std::size_t i = 1; i < m; ++i) {
        const double d = -s.points[i].mean - (-s.points[i - 1].mean);
        const int sign = d > 0 ? 1 : (d < 0 ? -1 : 0);
        if (sign == 0) continue;
        if (last != 0 && sign != last) ++changes;
        if (last != 0) ++segments;
        last = sign;
    }
    rep.sign_changes = changes;
    rep.unimodality_score = segments > 0 ? static_cast<double>(changes) / segments : 0.0;
    rep.detected = rep.negative_curvature && rep.interior_maximum;
    return rep;
}

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<double> residuals;
};

/// Ordinary least squares of y on x, closed form.
inline OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw InvalidArgument("ols_fit: needs >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    double scale = 0;
    for (double xi : x) scale += xi * xi;
    if (sxx <= 1e-20 * (scale > 1.0 ? scale : 1.0))
        throw RankDeficient("ols_fit: regressor values are all identical");

    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    fit.residuals.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += fit.residuals[i] * fit.residuals[i];
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

/// The published optimality line; coefficients overridable.
inline double predict_complexity(double c_p, double slope = 0.67, double intercept = 0.33) {
    return slope * c_p + intercept;
}

struct ProblemPoint {
    std::string id;
    std::size_t n = 0;
    double c_p = 0.0;     // problem complexity
    double v_star = 0.0;
    double c_a = 0.0;     // system complexity at v*
};

struct OptimalityResult {
    std::vector<ProblemPoint> points;
    OlsFit fit;
};

/// C(A) at the sweep optimum: the strategy matrix of the best replicate at
/// v* (minimal D-bar, ties to the lowest replicate index), re-run from its
/// recorded seed.
inline double system_complexity_at_optimum(const ProblemInstance& p, const SweepConfig& cfg,
                                           const SweepResult& sweep) {
    const SweepPoint& at = sweep.points[sweep.v_star_index];
    std::size_t best = 0;
    for (std::size_t r = 1; r < at.mean_distances.size(); ++r)
        if (at.mean_distances[r] < at.mean_distances[best]) best = r;
    RunConfig rc = cfg.base;
    rc.v = at.v;
    rc.seed = at.seeds[best];
    const RunResult rr = run(p, rc);
    return quadratic_trace_system(covariance_matrix(rr.strategies)).value;
}

/// Full pipeline: sweep each problem, locate v*, measure C(p) and C(A(p)),
/// then regress y = C(A) on x = C(p).
inline OptimalityResult optimality_fit(const std::vector<ProblemInstance>& problems,
                                       const SweepConfig& cfg, unsigned jobs = 1) {
    if (problems.size() < 2) throw InvalidArgument("optimality_fit: needs >= 2 problems");
    OptimalityResult result;
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < problems.size(); ++k) {
        const ProblemInstance& p = problems[k];
        const SweepResult sweep = sweep_v(p, cfg, jobs);
        ProblemPoint point;
        point.id = p.name.empty() ? "problem-" + std::to_string(k) : p.name;
        point.n = p.n;
        point.c_p = problem_complexity(p.dist).value;
        point.v_star = sweep.v_star;
        point.c_a = system_complexity_at_optimum(p, cfg, sweep);
        xs.push_back(point.c_p);
        ys.push_back(point.c_a);
        result.points.push_back(std::move(point));
    }
    result.fit = ols_fit(xs, ys);
    return result;
}

// --- CSV surfaces ---------------------------------------------------------

inline std::string sweep_curve_csv(const SweepResult& s) {
    std::string out = "v,mean,std\n";
    for (const auto& pt : s.points)
        out += format_double(pt.v) + ',' + format_double(pt.mean) + ',' +
               format_double(pt.stddev) + '\n';
    return out;
}

inline std::string problem_points_csv(const std::vector<ProblemPoint>& points) {
    std::string out = "id,n,c_p,v_star,c_a\n";
    for (const auto& pt : points)
        out += pt.id + ',' + std::to_string(pt.n) + ',' + format_double(pt.c_p) + ',' +
               format_double(pt.v_star) + ',' + format_double(pt.c_a) + '\n';
    return out;
}

inline std::string fit_summary_csv(const OlsFit& fit, std::size_t k) {
    return "slope,intercept,r_squared,k\n" + format_double(fit.slope) + ',' +
           format_double(fit.intercept) + ',' + format_double(fit.r_squared) + ',' +
           std::to_string(k) + '\n';
}

} // namespace pir
