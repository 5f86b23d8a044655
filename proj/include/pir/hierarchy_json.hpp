#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include <json.hpp>

#include "pir/prime_relations.hpp"

namespace pir {

// Integers are emitted as JSON numbers when they fit in int64, as decimal
// strings otherwise; import accepts both.
inline nlohmann::json bigint_to_json(const BigInt& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() &&
        v <= std::numeric_limits<std::int64_t>::max())
        return v.convert_to<std::int64_t>();
    return v.str();
}

inline BigInt bigint_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    if (j.is_string()) return BigInt(j.get<std::string>());
    throw FormatError("expected integer or decimal string");
}

inline nlohmann::json hierarchy_to_json(const Hierarchy& h) {
    nlohmann::json j;
    j["signs"] = h.signs.signs;
    auto& ints = j["integers"] = nlohmann::json::array();
    for (const auto& v : h.integers.integers) ints.push_back(bigint_to_json(v));
    auto& levels = j["levels"] = nlohmann::json::array();
    for (const auto& nodes : h.levels) {
        nlohmann::json entry;
        entry["level"] = nodes.empty() ? 0 : nodes.front().level;
        auto& blocks = entry["blocks"] = nlohmann::json::array();
        for (const auto& node : nodes) blocks.push_back({node.lo, node.hi});
        levels.push_back(std::move(entry));
    }
    j["structural_level"] = h.structural_level;
    return j;
}

/// Rebuilds a Hierarchy from the JSON schema; node power sums and primality
/// are recomputed from the stored signs and integers.
inline Hierarchy hierarchy_from_json(const nlohmann::json& j) {
    try {
        Hierarchy h;
        h.signs = SignSequence(j.at("signs").get<std::vector<int>>());
        std::vector<BigInt> ints;
        for (const auto& v : j.at("integers")) ints.push_back(bigint_from_json(v));
        h.integers = IntegerAssignment(std::move(ints));
        if (h.signs.size() != h.integers.size())
            throw FormatError("signs and integers lengths differ");

        for (const auto& entry : j.at("levels")) {
            const int level = entry.at("level").get<int>();
            if (level < 1) throw FormatError("level must be >= 1");
            std::vector<RelationNode> nodes;
            for (const auto& block : entry.at("blocks")) {
                RelationNode node;
                node.level = level;
                node.lo = block.at(0).get<std::size_t>();
                node.hi = block.at(1).get<std::size_t>();
                if (node.hi > h.signs.size() || node.hi - node.lo != (std::size_t{1} << level))
                    throw FormatError("bad block bounds");
                for (unsigned k = 0; k < static_cast<unsigned>(level); ++k)
                    node.power_sums.push_back(power_sum(h.signs, h.integers, k, node.lo, node.hi));
                node.is_prime = is_prime_relation(node, h.signs, h.integers);
                nodes.push_back(std::move(node));
            }
            h.levels.push_back(std::move(nodes));
        }
        h.structural_level = j.at("structural_level").get<int>();
        return h;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("hierarchy JSON: ") + e.what());
    }
}

} // namespace pir
