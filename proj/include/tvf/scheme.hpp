#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvf/error.hpp"
#include "tvf/rational.hpp"

namespace tvf {

/// Block sizes (s_1..s_k) of a dynamic squid-removal scheme together with the
/// parameters it was validated against.
struct SizeScheme {
    std::vector<std::int64_t> sizes;
    std::int64_t n = 0;
    std::int64_t q = 0;
    std::int64_t delta = 0;

    std::int64_t total() const;
};

class SchemeInfeasible : public DomainError {
public:
    explicit SchemeInfeasible(const std::string& what) : DomainError(what) {}
};

struct SchemeCheck {
    bool ok = true;
    /// 1-based index of the first violated block, 0 when the failure is global
    /// (k > q, empty scheme) or when ok.
    std::size_t failing_index = 0;
    std::string reason;
    explicit operator bool() const { return ok; }
};

/// Exact check of
///   (1) q >= k > 0 and every s_i > 0
///   (2) (Δ/(q-j+1) + 1)·(s_1+…+s_{j-1}) + 2Δ·s_j <= n   for 1 <= j <= k.
/// Throws DomainError unless delta, q, n >= 1.
SchemeCheck validate_scheme(const std::vector<std::int64_t>& sizes, std::int64_t n, std::int64_t q, std::int64_t delta);
SchemeCheck validate_scheme(const SizeScheme& scheme);

struct EpsilonConstants {
    double epsilon = 0;
    double a = 0;      // √(1+ε)
    double gamma = 0;  // -(1/a)·ln(1 - 1/a)
    /// a - 1 + 2γ, the published closed form.
    double k_epsilon = 0;
    /// 1/(a-1) + 2γ: the value for which q - k >= Δ/(a-1) holds when
    /// q > K·Δ and k = 2Δγ. Agrees with k_epsilon only at ε = 3.
    double k_epsilon_consistent = 0;
};

/// Throws DomainError unless epsilon > 0.
EpsilonConstants epsilon_constants(double epsilon);

struct SchemeBuild {
    SizeScheme scheme;
    EpsilonConstants constants;
    std::int64_t target = 0;  // N
    bool n_fractional = false;  // N(1+ε) was not an integer and got floored
    std::int64_t k_geometric = 0;  // ⌈2Δγ⌉, before capping at q
    std::int64_t appended_blocks = 0;  // size-1 blocks added after rounding
    double coverage_before_rounding = 0;  // Σ of the real geometric sizes
    std::int64_t coverage = 0;  // Σ s_j of the returned scheme
};

/// Integer scheme from the geometric sizes s_j = n/(2Δ)·((2Δ-a)/(2Δ))^{j-1},
/// j <= k = min(⌈2Δγ⌉, q), floored with trailing zeros dropped and
/// re-validated exactly; size-1 blocks are appended while coverage < N and the
/// inequality allows. Throws DomainError when q <= K_ε·Δ and SchemeInfeasible
/// when s_1 floors to 0 or the rounded scheme fails validation.
SchemeBuild build_scheme(const Rational& epsilon, std::int64_t target, std::int64_t delta, std::int64_t q);

/// Decimal string with 12 significant digits.
std::string format_real(double value);

nlohmann::json scheme_to_json(const SizeScheme& scheme);
SizeScheme scheme_from_json(const nlohmann::json& j);
nlohmann::json constants_to_json(const EpsilonConstants& c);
nlohmann::json build_to_json(const SchemeBuild& build);

} // namespace tvf
