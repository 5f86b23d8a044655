#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pir/complexity.hpp"
#include "pir/errors.hpp"
#include "pir/instance.hpp"
#include "pir/ptm.hpp"
#include "pir/rng.hpp"

namespace pir {

enum class Strategy : std::int8_t { greedy = -1, random = +1 };

enum class TourMode { open, closed };
enum class PtmOffsetMode { staggered, shared };

struct RunConfig {
    std::uint32_t agents = 50;
    double v = 0.5;                // success threshold position in [0, 1]
    std::uint64_t seed = 0;
    TourMode tour_mode = TourMode::open;
    PtmOffsetMode ptm_offsets = PtmOffsetMode::staggered;

    void validate() const {
        if (agents < 1) throw InvalidArgument("RunConfig: agents must be >= 1");
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("RunConfig: v must lie in [0, 1]");
    }
};

struct AgentState {
    std::uint32_t current = 0;
    std::vector<bool> visited;          // visited[city]
    std::vector<std::uint32_t> route;   // cities after the shared start, in visit order
    double distance = 0.0;              // cumulative tour distance so far
    Strategy last_strategy = Strategy::random;
    bool last_success = true;
    std::uint64_t ptm_cursor = 0;
};

struct RunResult {
    RunConfig config;
    StrategyMatrix strategies;
    std::vector<std::vector<std::uint32_t>> routes;
    std::vector<double> distances;
    double mean_distance = 0.0;
    std::map<std::vector<std::uint32_t>, std::uint32_t> gamma; // route -> agent count
};

/// Threshold rule: T = d_min + v * (d_max - d_min); an agent is successful iff
/// its current distance is <= T. At v = 0 the best agents still succeed; with
/// all distances equal the interval has zero width and everyone succeeds.
inline std::vector<bool> classify_success(const std::vector<double>& distances, double v) {
    if (distances.empty()) throw InvalidArgument("classify_success: empty distance list");
    double lo = distances[0], hi = distances[0];
    for (double d : distances) {
        lo = d < lo ? d : lo;
        hi = d > hi ? d : hi;
    }
    const double threshold = lo + v * (hi - lo);
    std::vector<bool> flags(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i) flags[i] = distances[i] <= threshold;
    return flags;
}

/// Nearest unvisited city; ties broken toward the smallest city index.
inline std::uint32_t greedy_next(const AgentState& agent, const ProblemInstance& p) {
    bool found = false;
    std::uint32_t best = 0;
    double best_d = 0.0;
    for (std::uint32_t c = 0; c < p.n; ++c) {
        if (agent.visited[c]) continue;
        const double d = p.distance(agent.current, c);
        if (!found || d < best_d) {
            found = true;
            best = c;
            best_d = d;
        }
    }
    if (!found) throw InvalidState("greedy_next: no unvisited city remains");
    return best;
}

/// Uniform draw over unvisited cities from the agent's private stream.
inline std::uint32_t random_next(const AgentState& agent, const ProblemInstance& p,
                                 CounterRng& rng) {
    std::vector<std::uint32_t> open;
    open.reserve(p.n);
    for (std::uint32_t c = 0; c < p.n; ++c)
        if (!agent.visited[c]) open.push_back(c);
    if (open.empty()) throw InvalidState("random_next: no unvisited city remains");
    return open[rng.uniform_below(open.size())];
}

/// The PTM if-then rule: keep a successful strategy; on failure consult the
/// PTM generator at the agent's cursor (+1 -> random, -1 -> greedy) and
/// advance the cursor.
inline Strategy choose_strategy(AgentState& agent) {
    if (agent.last_success) return agent.last_strategy;
    const int symbol = ptm_symbol(agent.ptm_cursor++);
    return symbol > 0 ? Strategy::random : Strategy::greedy;
}

namespace detail {

inline double neumaier_sum(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        comp += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

} // namespace detail

/// Runs N agents in lockstep from the shared start city 0. Step 1 is a forced
/// random move for every agent; after each step the pooled distances are
/// classified and the flags feed the next step's strategy choice. Every draw
/// comes from a stream keyed by (seed, agent, step), so the result is a pure
/// function of (instance, config).
inline RunResult run(const ProblemInstance& p, const RunConfig& cfg) {
    cfg.validate();
    if (p.n < 2) throw InvalidArgument("run: instance must have at least 2 cities");
    const std::size_t N = cfg.agents;
    const std::size_t steps = p.n - 1;

    std::vector<AgentState> agents(N);
    for (std::size_t i = 0; i < N; ++i) {
        agents[i].visited.assign(p.n, false);
        agents[i].visited[0] = true;
        agents[i].ptm_cursor = cfg.ptm_offsets == PtmOffsetMode::staggered ? i : 0;
        agents[i].route.reserve(steps);
    }

    RunResult result;
    result.config = cfg;
    result.strategies = StrategyMatrix(N, steps);

    std::vector<double> pooled(N);
    for (std::size_t step = 1; step <= steps; ++step) {
        for (std::size_t i = 0; i < N; ++i) {
            AgentState& a = agents[i];
            const Strategy strat = step == 1 ? Strategy::random : choose_strategy(a);
            result.strategies(i, step - 1) = static_cast<std::int8_t>(strat);

            std::uint32_t next;
            if (strat == Strategy::random) {
                CounterRng rng(cfg.seed, i, step);
                next = random_next(a, p, rng);
            } else {
                next = greedy_next(a, p);
            }
            a.distance += p.distance(a.current, next);
            a.visited[next] = true;
            a.route.push_back(next);
            a.current = next;
            a.last_strategy = strat;
            pooled[i] = a.distance;
        }
        const std::vector<bool> flags = classify_success(pooled, cfg.v);
        for (std::size_t i = 0; i < N; ++i) agents[i].last_success = flags[i];
    }

    if (cfg.tour_mode == TourMode::closed)
        for (auto& a : agents) a.distance += p.distance(a.current, 0);

    result.routes.reserve(N);
    result.distances.reserve(N);
    for (auto& a : agents) {
        result.gamma[a.route] += 1;
        result.routes.push_back(std::move(a.route));
        result.distances.push_back(a.distance);
    }
    result.mean_distance = detail::neumaier_sum(result.distances) / static_cast<double>(N);
    return result;
}

struct RouteShare {
    std::vector<std::uint32_t> route;
    std::uint32_t count = 0;
    double probability = 0.0;
    double distance = 0.0;
};

struct RouteDistribution {
    std::vector<RouteShare> shares;
    double weighted_mean = 0.0; // sum of probability * distance
};

inline double route_length(const std::vector<std::uint32_t>& route, const ProblemInstance& p,
                           TourMode mode) {
    double d = 0.0;
    std::uint32_t cur = 0;
    for (std::uint32_t c : route) {
        d += p.distance(cur, c);
        cur = c;
    }
    if (mode == TourMode::closed) d += p.distance(cur, 0);
    return d;
}

/// The average-distance decomposition: D-bar must equal the gamma-weighted
/// mean of per-route distances. A mismatch beyond 1e-12 means the run and its
/// tally disagree, which is an internal error, not an input error.
inline RouteDistribution route_distribution(const RunResult& r, const ProblemInstance& p) {
    RouteDistribution dist;
    const double N = static_cast<double>(r.config.agents);
    std::vector<double> weighted;
    weighted.reserve(r.gamma.size());
    for (const auto& [route, count] : r.gamma) {
        RouteShare share;
        share.route = route;
        share.count = count;
        share.probability = static_cast<double>(count) / N;
        share.distance = route_length(route, p, r.config.tour_mode);
        weighted.push_back(share.probability * share.distance);
        dist.shares.push_back(std::move(share));
    }
    dist.weighted_mean = detail::neumaier_sum(weighted);
    const double diff = dist.weighted_mean - r.mean_distance;
    if (!(diff <= 1e-12 && -diff <= 1e-12))
        throw ConsistencyError("route decomposition mismatch: weighted mean " +
                               format_double(dist.weighted_mean) + " vs mean distance " +
                               format_double(r.mean_distance));
    return dist;
}

inline nlohmann::json run_result_to_json(const RunResult& r) {
    nlohmann::json j;
    j["config"] = {
        {"agents", r.config.agents},
        {"v", r.config.v},
        {"seed", r.config.seed},
        {"tour_mode", r.config.tour_mode == TourMode::closed ? "closed" : "open"},
        {"ptm_offsets", r.config.ptm_offsets == PtmOffsetMode::shared ? "shared" : "staggered"},
    };
    auto& strategies = j["strategy_matrix"] = nlohmann::json::array();
    for (std::size_t i = 0; i < r.strategies.agents; ++i)
        strategies.push_back(r.strategies.row_string(i));
    j["routes"] = r.routes;
    j["distances"] = r.distances;
    j["mean_distance"] = r.mean_distance;
    auto& gamma = j["gamma"] = nlohmann::json::array();
    for (const auto& [route, count] : r.gamma)
        gamma.push_back({{"route", route}, {"count", count}});
    return j;
}

} // namespace pir
