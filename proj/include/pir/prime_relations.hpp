#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pir/errors.hpp"
#include "pir/ptm.hpp"
#include "pir/rational.hpp"

namespace pir {

/// Integers paired position-by-position with a SignSequence.
struct IntegerAssignment {
    std::vector<BigInt> integers;

    IntegerAssignment() = default;
    explicit IntegerAssignment(std::vector<BigInt> v) : integers(std::move(v)) {}

    std::size_t size() const noexcept { return integers.size(); }
    const BigInt& operator[](std::size_t i) const { return integers[i]; }

    bool operator==(const IntegerAssignment&) const = default;
};

/// Default assignment a_i = L+1-i: position 1 holds L, position L holds 1.
inline IntegerAssignment default_assignment(std::size_t length) {
    std::vector<BigInt> v(length);
    for (std::size_t i = 0; i < length; ++i) v[i] = BigInt(length - i);
    return IntegerAssignment(std::move(v));
}

/// One integer relation: signed power sums vanish on [lo, hi) for orders 0..level-1.
struct RelationNode {
    int level = 0;
    std::size_t lo = 0;
    std::size_t hi = 0;                // block is [lo, hi), hi - lo == 2^level
    std::vector<BigInt> power_sums;    // entry k = order-k signed power sum, k = 0..level-1
    bool is_prime = false;
};

struct Hierarchy {
    SignSequence signs;
    IntegerAssignment integers;
    std::vector<std::vector<RelationNode>> levels; // levels[l-1] = nodes at level l
    int structural_level = 0;
};

/// Sum of s_i * a_i^k over [lo, hi), exact. a^0 == 1 for every a.
inline BigInt power_sum(const SignSequence& signs, const IntegerAssignment& ints,
                        unsigned k, std::size_t lo, std::size_t hi) {
    if (hi > signs.size() || lo > hi || signs.size() != ints.size())
        throw InvalidArgument("power_sum: block out of range");
    BigInt sum = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        BigInt term = big_pow(ints[i], k);
        if (signs[i] > 0) sum += term;
        else sum -= term;
    }
    return sum;
}

/// True iff the order-(level-1) sum vanishes on the whole block but on neither half:
/// a relation splitting into two half-block relations of the same order is composite.
inline bool is_prime_relation(const RelationNode& node, const SignSequence& signs,
                              const IntegerAssignment& ints) {
    const unsigned order = static_cast<unsigned>(node.level - 1);
    const std::size_t mid = node.lo + (node.hi - node.lo) / 2;
    if (power_sum(signs, ints, order, node.lo, node.hi) != 0) return false;
    return power_sum(signs, ints, order, node.lo, mid) != 0 &&
           power_sum(signs, ints, order, mid, node.hi) != 0;
}

/// Runs the level-by-level merge: level l exists when the aligned, disjoint
/// 2^l blocks cover the whole sequence and every block's power sums vanish
/// for all orders 0..l-1. Stops at the first level where a required sum is
/// nonzero or a block would be incomplete.
inline Hierarchy build_hierarchy(const SignSequence& signs, const IntegerAssignment& ints) {
    if (signs.size() != ints.size())
        throw InvalidArgument("build_hierarchy: signs and integers must have equal length");
    if (signs.size() == 0)
        throw InvalidArgument("build_hierarchy: empty sequence");

    Hierarchy h;
    h.signs = signs;
    h.integers = ints;

    const std::size_t L = signs.size();
    for (int level = 1;; ++level) {
        const std::size_t block = std::size_t{1} << level;
        if (block > L || L % block != 0) break; // incomplete block: structure cannot continue

        std::vector<RelationNode> nodes;
        bool all_vanish = true;
        for (std::size_t lo = 0; lo < L && all_vanish; lo += block) {
            RelationNode node;
            node.level = level;
            node.lo = lo;
            node.hi = lo + block;
            for (unsigned k = 0; k < static_cast<unsigned>(level); ++k) {
                node.power_sums.push_back(power_sum(signs, ints, k, lo, lo + block));
                if (node.power_sums.back() != 0) {
                    all_vanish = false;
                    break;
                }
            }
            if (all_vanish) {
                node.is_prime = is_prime_relation(node, signs, ints);
                nodes.push_back(std::move(node));
            }
        }
        if (!all_vanish) break;
        h.levels.push_back(std::move(nodes));
        h.structural_level = level;
    }
    return h;
}

struct NodeCheck {
    int level = 0;
    std::size_t lo = 0;
    std::size_t hi = 0;
    bool pass = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<NodeCheck> nodes;
    bool all_nodes_pass = false;
    bool level_maximal = false;    // level structural_level+1 is genuinely blocked
    std::string blocked_reason;    // "incomplete-block" or "nonzero-sum", empty on failure
    bool pass() const noexcept { return all_nodes_pass && level_maximal; }
};

/// Recomputes every node's power sums from scratch and confirms that the
/// next level is blocked. Corrupted nodes are reported, never thrown.
inline VerificationReport verify_hierarchy(const Hierarchy& h) {
    VerificationReport report;
    report.all_nodes_pass = true;

    for (const auto& level_nodes : h.levels) {
        for (const auto& node : level_nodes) {
            NodeCheck check;
            check.level = node.level;
            check.lo = node.lo;
            check.hi = node.hi;
            check.pass = true;
            if (node.hi - node.lo != (std::size_t{1} << node.level) ||
                node.lo % (std::size_t{1} << node.level) != 0) {
                check.pass = false;
                check.detail = "block misaligned";
            }
            if (node.power_sums.size() != static_cast<std::size_t>(node.level)) {
                check.pass = false;
                check.detail = "wrong power sum count";
            }
            for (unsigned k = 0; check.pass && k < node.power_sums.size(); ++k) {
                const BigInt actual = power_sum(h.signs, h.integers, k, node.lo, node.hi);
                if (actual != 0 || node.power_sums[k] != actual) {
                    check.pass = false;
                    check.detail = "order-" + std::to_string(k) + " sum mismatch, recomputed " +
                                   actual.str() + ", stored " + node.power_sums[k].str();
                }
            }
            if (!check.pass) report.all_nodes_pass = false;
            report.nodes.push_back(std::move(check));
        }
    }

    // Maximality: the level above structural_level must fail either
    // structurally (incomplete block) or arithmetically (nonzero sum).
    const std::size_t L = h.signs.size();
    const int next = h.structural_level + 1;
    const std::size_t block = std::size_t{1} << next;
    if (block > L || L % block != 0) {
        report.level_maximal = true;
        report.blocked_reason = "incomplete-block";
    } else {
        for (std::size_t lo = 0; lo < L && !report.level_maximal; lo += block) {
            for (unsigned k = 0; k < static_cast<unsigned>(next); ++k) {
                if (power_sum(h.signs, h.integers, k, lo, lo + block) != 0) {
                    report.level_maximal = true;
                    report.blocked_reason = "nonzero-sum";
                    break;
                }
            }
        }
    }
    return report;
}

} // namespace pir
