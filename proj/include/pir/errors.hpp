#pragma once

#include <stdexcept>
#include <string>

namespace pir {

// Base for all library errors. `kind()` is a stable machine-readable tag
// used by the CLI when emitting error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& msg) : Error("invalid-argument", msg) {}
};

struct FormatError : Error {
    explicit FormatError(const std::string& msg) : Error("format-error", msg) {}
};

struct LevelUnreachable : Error {
    explicit LevelUnreachable(const std::string& msg) : Error("level-unreachable", msg) {}
};

struct DegenerateInstance : Error {
    explicit DegenerateInstance(const std::string& msg) : Error("degenerate-instance", msg) {}
};

struct ConsistencyError : Error {
    explicit ConsistencyError(const std::string& msg) : Error("internal-consistency", msg) {}
};

struct RankDeficient : Error {
    explicit RankDeficient(const std::string& msg) : Error("rank-deficient", msg) {}
};

struct InvalidState : Error {
    explicit InvalidState(const std::string& msg) : Error("invalid-state", msg) {}
};

} // namespace pir
