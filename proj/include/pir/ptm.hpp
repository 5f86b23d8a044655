#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "pir/errors.hpp"

namespace pir {

/// Ordered list of +1/-1 element states.
struct SignSequence {
    std::vector<int> signs;

    SignSequence() = default;
    explicit SignSequence(std::vector<int> s) : signs(std::move(s)) {
        for (int v : signs)
            if (v != 1 && v != -1) throw InvalidArgument("sign entries must be +1 or -1");
    }

    std::size_t size() const noexcept { return signs.size(); }
    int operator[](std::size_t i) const { return signs[i]; }

    bool operator==(const SignSequence&) const = default;
};

/// Prouhet-Thue-Morse symbol at 0-based index: +1 iff popcount(i) is even.
inline int ptm_symbol(std::uint64_t index) noexcept {
    return (std::popcount(index) % 2 == 0) ? 1 : -1;
}

/// First `length` PTM symbols; entry i (1-based) is +1 iff popcount(i-1) is even.
inline SignSequence ptm_sequence(std::size_t length) {
    if (length == 0) throw InvalidArgument("ptm_sequence: length must be >= 1");
    std::vector<int> s(length);
    for (std::size_t i = 0; i < length; ++i) s[i] = ptm_symbol(i);
    return SignSequence(std::move(s));
}

/// "+--+-++-" style rendering.
inline std::string format_signs(const SignSequence& s) {
    std::string out;
    out.reserve(s.size());
    for (int v : s.signs) out.push_back(v > 0 ? '+' : '-');
    return out;
}

inline SignSequence parse_signs(std::string_view text) {
    std::vector<int> s;
    s.reserve(text.size());
    for (char c : text) {
        if (c == '+') s.push_back(1);
        else if (c == '-') s.push_back(-1);
        else throw FormatError(std::string("bad sign character '") + c + "'");
    }
    return SignSequence(std::move(s));
}

} // namespace pir
