#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pir/errors.hpp"
#include "pir/piecewise.hpp"
#include "pir/prime_relations.hpp"

namespace pir {

/// Measured per-block pattern data at one level. width/height/area are exact;
/// arc_length is the one intrinsically numeric quantity.
struct PatternMetrics {
    int level = 0;
    std::size_t lo = 0;
    std::size_t hi = 0;
    Rational width;
    Rational height;
    Rational area;
    double arc_length = 0.0;
};

struct RenormalizedParams {
    Rational epsilon_prime;
    Rational delta_prime;
};

/// The coarse-graining map at level 4: epsilon' = 2^3 epsilon, delta' = epsilon^3 delta.
inline RenormalizedParams renormalize(const GridSpec& grid) {
    return {grid.epsilon * 8, rational_pow(grid.epsilon, 3) * grid.delta};
}

namespace detail {

// Adaptive Simpson on [a, b] for a smooth integrand, absolute tolerance tol.
template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate_adaptive(const F& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

inline double horner(const std::vector<double>& c, double u) {
    double acc = 0.0;
    for (std::size_t j = c.size(); j-- > 0;) acc = acc * u + c[j];
    return acc;
}

} // namespace detail

/// Numeric graph length of f over [a, b]: integral of sqrt(1 + f'(t)^2),
/// adaptive refinement with absolute error budget tol split across pieces.
inline double arc_length(const PiecewisePoly& f, const Rational& a, const Rational& b,
                         double tol = 1e-9) {
    if (tol <= 0) throw InvalidArgument("arc_length: tol must be positive");
    if (!(a < b)) throw InvalidArgument("arc_length: empty range");
    const PiecewisePoly d = f.derivative();
    const auto& breaks = d.breakpoints();
    const double total_width = to_double(b - a);

    double sum = 0.0, comp = 0.0; // Neumaier accumulation over pieces
    for (std::size_t i = 0; i < d.pieces(); ++i) {
        const Rational lo = std::max(a, breaks[i]);
        const Rational hi = std::min(b, breaks[i + 1]);
        if (!(lo < hi)) continue;
        std::vector<double> c;
        c.reserve(d.piece_coeffs(i).size());
        for (const auto& q : d.piece_coeffs(i)) c.push_back(to_double(q));
        const double base = to_double(breaks[i]);
        auto integrand = [&](double t) {
            const double s = detail::horner(c, t - base);
            return std::sqrt(1.0 + s * s);
        };
        const double lod = to_double(lo), hid = to_double(hi);
        const double piece_tol = tol * (hid - lod) / total_width;
        const double piece = detail::integrate_adaptive(integrand, lod, hid, piece_tol);
        const double t = sum + piece;
        comp += (std::abs(sum) >= std::abs(piece)) ? (sum - t) + piece : (piece - t) + sum;
        sum = t;
    }
    return sum + comp;
}

/// The stack Psi^[0..structural_level] with measured metrics per level block.
struct PatternStack {
    GridSpec grid;
    std::vector<PiecewisePoly> psi;                   // psi[l] = Psi^[l]
    std::vector<std::vector<PatternMetrics>> metrics; // metrics[l] = level-l blocks
    int structural_level = 0;
};

struct StackOptions {
    int max_level = -1;           // -1: build to the structural level
    double arc_tol = 1e-9;
    bool with_arc_lengths = true; // arc quadrature is the only non-exact step
};

/// Iterated exact integration of the sign step function. Levels exist exactly
/// as far as the paired hierarchy (signs over the default integer assignment)
/// self-organizes; asking beyond that is an error.
inline PatternStack build_pattern_stack(const SignSequence& signs, const GridSpec& grid,
                                        const StackOptions& options = {}) {
    const Hierarchy h = build_hierarchy(signs, default_assignment(signs.size()));
    int levels = h.structural_level;
    if (options.max_level >= 0) {
        if (options.max_level > h.structural_level)
            throw LevelUnreachable("level " + std::to_string(options.max_level) +
                                   " unreachable, process stops at level " +
                                   std::to_string(h.structural_level));
        levels = options.max_level;
    }

    PatternStack stack{grid, {}, {}, levels};
    stack.psi.push_back(step_function(signs, grid));
    for (int l = 1; l <= levels; ++l)
        stack.psi.push_back(stack.psi.back().integrate_once(grid.breakpoint(0)));

    for (int l = 0; l <= levels; ++l) {
        const std::size_t block = std::size_t{1} << l;
        std::vector<PatternMetrics> row;
        for (std::size_t lo = 0; lo + block <= grid.length; lo += block) {
            PatternMetrics m;
            m.level = l;
            m.lo = lo;
            m.hi = lo + block;
            const Rational ta = grid.breakpoint(lo);
            const Rational tb = grid.breakpoint(lo + block);
            m.width = tb - ta;
            const Rational mid = (ta + tb) / 2;
            m.height = abs(stack.psi[l].eval(mid));
            m.area = abs(stack.psi[l].integral(ta, tb));
            if (options.with_arc_lengths)
                m.arc_length = arc_length(stack.psi[l], ta, tb, options.arc_tol);
            row.push_back(std::move(m));
        }
        stack.metrics.push_back(std::move(row));
    }
    return stack;
}

/// The enlarged elementary pattern: the level-1 function built on the
/// renormalized parameters. Its support [0, 2*epsilon'] coincides with the
/// level-4 block of the base grid and the areas agree exactly.
inline PiecewisePoly renormalized_level1(const SignSequence& signs, const GridSpec& grid) {
    if (signs.size() != 2)
        throw InvalidArgument("renormalized_level1: expects a sign sequence of length 2");
    const RenormalizedParams p = renormalize(grid);
    const GridSpec coarse(p.epsilon_prime, p.delta_prime, 2);
    return step_function(signs, coarse).integrate_once(coarse.breakpoint(0));
}

inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

/// CSV rows (level, block_lo, block_hi, width, height, area, arc_length);
/// exact quantities as "p/q", arc length as shortest round-trip decimal.
inline std::string metrics_csv(const PatternStack& stack) {
    std::string out = "level,block_lo,block_hi,width,height,area,arc_length\n";
    for (const auto& row : stack.metrics) {
        for (const auto& m : row) {
            out += std::to_string(m.level) + ',' + std::to_string(m.lo) + ',' +
                   std::to_string(m.hi) + ',' + format_rational(m.width) + ',' +
                   format_rational(m.height) + ',' + format_rational(m.area) + ',' +
                   format_double(m.arc_length) + '\n';
        }
    }
    return out;
}

} // namespace pir
