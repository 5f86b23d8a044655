#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "pir/errors.hpp"
#include "pir/ptm.hpp"
#include "pir/rational.hpp"

namespace pir {

/// Abscissa/ordinate units and the uniform breakpoint grid t_i = epsilon * i.
struct GridSpec {
    Rational epsilon;
    Rational delta;
    std::size_t length = 0;

    GridSpec(Rational eps, Rational del, std::size_t len)
        : epsilon(std::move(eps)), delta(std::move(del)), length(len) {
        if (epsilon <= 0 || delta <= 0)
            throw InvalidArgument("GridSpec: epsilon and delta must be positive");
        if (length == 0) throw InvalidArgument("GridSpec: length must be >= 1");
    }

    Rational breakpoint(std::size_t i) const { return epsilon * BigInt(i); }
};

/// Piecewise polynomial with exact rational coefficients. On piece i the
/// value is sum_j coeffs[i][j] * (t - breaks[i])^j; continuity is a property
/// of how the object was built (antiderivatives are continuous, step
/// functions are not).
class PiecewisePoly {
public:
    PiecewisePoly(std::vector<Rational> breaks, std::vector<std::vector<Rational>> coeffs)
        : breaks_(std::move(breaks)), coeffs_(std::move(coeffs)) {
        if (breaks_.size() < 2 || coeffs_.size() + 1 != breaks_.size())
            throw InvalidArgument("PiecewisePoly: breakpoint/coefficient mismatch");
        for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
            if (!(breaks_[i] < breaks_[i + 1]))
                throw InvalidArgument("PiecewisePoly: breakpoints must increase strictly");
    }

    std::size_t pieces() const noexcept { return coeffs_.size(); }
    const std::vector<Rational>& breakpoints() const noexcept { return breaks_; }
    const std::vector<Rational>& piece_coeffs(std::size_t i) const { return coeffs_[i]; }
    const Rational& domain_lo() const noexcept { return breaks_.front(); }
    const Rational& domain_hi() const noexcept { return breaks_.back(); }

    int degree() const noexcept {
        std::size_t d = 0;
        for (const auto& c : coeffs_) d = std::max(d, c.empty() ? 0 : c.size() - 1);
        return static_cast<int>(d);
    }

    /// Index of the piece containing t; the right domain edge maps to the last piece.
    std::size_t piece_index(const Rational& t) const {
        if (t < breaks_.front() || t > breaks_.back())
            throw InvalidArgument("PiecewisePoly: evaluation outside domain");
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
        std::size_t idx = static_cast<std::size_t>(it - breaks_.begin());
        if (idx == 0) return 0;
        idx -= 1;
        return std::min(idx, coeffs_.size() - 1);
    }

    /// Exact evaluation (on the piece owning t; at interior breakpoints of a
    /// discontinuous function this is the right-hand value).
    Rational eval(const Rational& t) const { return eval_on_piece(piece_index(t), t); }

    /// Exact evaluation of piece i's polynomial at t (t need not lie inside
    /// the piece; useful for one-sided values at shared breakpoints).
    Rational eval_on_piece(std::size_t i, const Rational& t) const {
        const Rational u = t - breaks_[i];
        Rational acc = 0;
        const auto& c = coeffs_[i];
        for (std::size_t j = c.size(); j-- > 0;) acc = acc * u + c[j];
        return acc;
    }

    double eval_double(double t) const {
        // clamp into domain to absorb sampling round-off at the edges
        Rational rt(t);
        if (rt < breaks_.front()) rt = breaks_.front();
        if (rt > breaks_.back()) rt = breaks_.back();
        return to_double(eval(rt));
    }

    /// Exact antiderivative F with F(start) = 0; degree rises by one and F is
    /// continuous across breakpoints.
    PiecewisePoly integrate_once(const Rational& start) const {
        std::vector<std::vector<Rational>> out(coeffs_.size());
        Rational acc = 0; // running value at the left edge of each piece
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            const auto& c = coeffs_[i];
            std::vector<Rational> g(c.size() + 1);
            g[0] = acc;
            for (std::size_t j = 0; j < c.size(); ++j) g[j + 1] = c[j] / BigInt(j + 1);
            const Rational w = breaks_[i + 1] - breaks_[i];
            Rational right = 0;
            for (std::size_t j = g.size(); j-- > 0;) right = right * w + g[j];
            acc = right;
            out[i] = std::move(g);
        }
        PiecewisePoly F(breaks_, std::move(out));
        const Rational shift = F.eval(start);
        if (shift != 0)
            for (auto& c : F.coeffs_) c[0] -= shift;
        return F;
    }

    PiecewisePoly derivative() const {
        std::vector<std::vector<Rational>> out(coeffs_.size());
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            const auto& c = coeffs_[i];
            std::vector<Rational> d;
            if (c.size() > 1) {
                d.resize(c.size() - 1);
                for (std::size_t j = 1; j < c.size(); ++j) d[j - 1] = c[j] * BigInt(j);
            } else {
                d.assign(1, Rational(0));
            }
            out[i] = std::move(d);
        }
        return PiecewisePoly(breaks_, std::move(out));
    }

    /// Exact definite integral over [a, b] within the domain.
    Rational integral(const Rational& a, const Rational& b) const {
        if (a > b) return -integral(b, a);
        if (a < breaks_.front() || b > breaks_.back())
            throw InvalidArgument("PiecewisePoly: integral outside domain");
        Rational total = 0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            const Rational lo = std::max(a, breaks_[i]);
            const Rational hi = std::min(b, breaks_[i + 1]);
            if (!(lo < hi)) continue;
            const auto& c = coeffs_[i];
            auto anti = [&](const Rational& t) {
                const Rational u = t - breaks_[i];
                Rational acc = 0;
                for (std::size_t j = c.size(); j-- > 0;) acc = (acc + c[j] / BigInt(j + 1)) * u;
                return acc;
            };
            total += anti(hi) - anti(lo);
        }
        return total;
    }

private:
    std::vector<Rational> breaks_;
    std::vector<std::vector<Rational>> coeffs_;
};

/// The +-delta step function: value s_i * delta on (t_{i-1}, t_i).
inline PiecewisePoly step_function(const SignSequence& signs, const GridSpec& grid) {
    if (signs.size() != grid.length)
        throw InvalidArgument("step_function: sign count must match grid length");
    std::vector<Rational> breaks(grid.length + 1);
    std::vector<std::vector<Rational>> coeffs(grid.length);
    for (std::size_t i = 0; i <= grid.length; ++i) breaks[i] = grid.breakpoint(i);
    for (std::size_t i = 0; i < grid.length; ++i)
        coeffs[i].assign(1, signs[i] > 0 ? grid.delta : -grid.delta);
    return PiecewisePoly(std::move(breaks), std::move(coeffs));
}

} // namespace pir
