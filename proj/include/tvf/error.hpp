#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tvf {

/// Precondition or input-validity violation (unknown vertex, malformed file, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// A configured face/search/vertex budget was exceeded.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// A property that the theory guarantees failed at runtime. Signals a bug or a
/// violated hypothesis, never a user error.
class TheoremViolation : public std::runtime_error {
public:
    explicit TheoremViolation(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr std::uint64_t kDefaultBudget = 2'000'000;

/// Face and search budget. TVF_BUDGET overrides the default of 2e6.
std::uint64_t configured_budget();

} // namespace tvf
