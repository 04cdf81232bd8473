#include "tvf/scheme.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

namespace tvf {

std::int64_t SizeScheme::total() const { return std::accumulate(sizes.begin(), sizes.end(), std::int64_t{0}); }

SchemeCheck validate_scheme(const std::vector<std::int64_t>& sizes, std::int64_t n, std::int64_t q, std::int64_t delta) {
    if (delta < 1 || q < 1 || n < 1) throw DomainError("validate_scheme requires n, q, delta >= 1");
    SchemeCheck out;
    auto fail = [&](std::size_t index, std::string reason) {
        out.ok = false;
        out.failing_index = index;
        out.reason = std::move(reason);
        return out;
    };
    const auto k = static_cast<std::int64_t>(sizes.size());
    if (k == 0) return fail(0, "empty scheme (k must be positive)");
    if (k > q) return fail(0, "k = " + std::to_string(k) + " exceeds q = " + std::to_string(q));

    Rational prefix = 0;
    for (std::int64_t j = 1; j <= k; ++j) {
        const std::int64_t s = sizes[j - 1];
        if (s <= 0) return fail(static_cast<std::size_t>(j), "s_" + std::to_string(j) + " is not positive");
        const Rational lhs = (Rational(delta, q - j + 1) + 1) * prefix + Rational(2 * delta * s);
        if (lhs > n)
            return fail(static_cast<std::size_t>(j), "block " + std::to_string(j) + ": " + to_string(lhs) + " > n = " +
                                                         std::to_string(n));
        prefix += s;
    }
    return out;
}

SchemeCheck validate_scheme(const SizeScheme& scheme) {
    return validate_scheme(scheme.sizes, scheme.n, scheme.q, scheme.delta);
}

EpsilonConstants epsilon_constants(double epsilon) {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be positive and finite");
    EpsilonConstants c;
    c.epsilon = epsilon;
    c.a = std::sqrt(1.0 + epsilon);
    // a - 1 and 1 - 1/a without cancellation for small ε
    const double a_minus_one = epsilon / (c.a + 1.0);
    const double one_minus_inv = a_minus_one / c.a;
    c.gamma = -std::log(one_minus_inv) / c.a;
    c.k_epsilon = a_minus_one + 2.0 * c.gamma;
    c.k_epsilon_consistent = 1.0 / a_minus_one + 2.0 * c.gamma;
    return c;
}

SchemeBuild build_scheme(const Rational& epsilon, std::int64_t target, std::int64_t delta, std::int64_t q) {
    if (epsilon <= 0) throw DomainError("epsilon must be positive");
    if (target < 1 || delta < 1 || q < 1) throw DomainError("build_scheme requires N, delta, q >= 1");
    SchemeBuild out;
    out.target = target;
    out.constants = epsilon_constants(to_double(epsilon));
    const auto& c = out.constants;
    if (!(static_cast<double>(q) > c.k_epsilon * static_cast<double>(delta)))
        throw DomainError("precondition q > K_eps * delta fails: q = " + std::to_string(q) + ", K_eps * delta = " +
                          format_real(c.k_epsilon * static_cast<double>(delta)));

    const Rational n_exact = Rational(target) * (1 + epsilon);
    const Integer n_floor = floor(n_exact);
    out.n_fractional = Rational(n_floor) != n_exact;
    const auto n = n_floor.convert_to<std::int64_t>();

    out.k_geometric = static_cast<std::int64_t>(std::ceil(2.0 * delta * c.gamma));
    const std::int64_t k = std::min(out.k_geometric, q);  // condition (1) needs k <= q
    const long double two_delta = 2.0L * delta;
    const long double ratio = (two_delta - c.a) / two_delta;
    const long double first = static_cast<long double>(n) / two_delta;

    std::vector<std::int64_t> sizes;
    long double term = first;
    for (std::int64_t j = 1; j <= k; ++j, term *= ratio) {
        out.coverage_before_rounding += static_cast<double>(term);
        const auto s = static_cast<std::int64_t>(std::floor(term));
        if (s >= 1) sizes.push_back(s);  // terms decrease, so zeros only trail
    }
    if (sizes.empty())
        throw SchemeInfeasible("s_1 = " + format_real(static_cast<double>(first)) + " rounds to 0");
    if (auto check = validate_scheme(sizes, n, q, delta); !check)
        throw SchemeInfeasible("rounded geometric scheme fails: " + check.reason);

    std::int64_t total = 0;
    for (auto s : sizes) total += s;
    while (total < target && static_cast<std::int64_t>(sizes.size()) < q) {
        sizes.push_back(1);
        if (!validate_scheme(sizes, n, q, delta)) {
            sizes.pop_back();
            break;
        }
        ++total;
        ++out.appended_blocks;
    }

    out.scheme = SizeScheme{std::move(sizes), n, q, delta};
    out.coverage = out.scheme.total();
    return out;
}

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

nlohmann::json scheme_to_json(const SizeScheme& s) {
    return {{"sizes", s.sizes}, {"n", s.n}, {"q", s.q}, {"delta", s.delta}};
}

SizeScheme scheme_from_json(const nlohmann::json& j) {
    try {
        SizeScheme s;
        s.sizes = j.at("sizes").get<std::vector<std::int64_t>>();
        s.n = j.at("n").get<std::int64_t>();
        s.q = j.at("q").get<std::int64_t>();
        s.delta = j.at("delta").get<std::int64_t>();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("scheme JSON: ") + e.what());
    }
}

nlohmann::json constants_to_json(const EpsilonConstants& c) {
    return {{"epsilon", format_real(c.epsilon)},
            {"a", format_real(c.a)},
            {"gamma", format_real(c.gamma)},
            {"k_epsilon", format_real(c.k_epsilon)},
            {"k_epsilon_consistent", format_real(c.k_epsilon_consistent)}};
}

nlohmann::json build_to_json(const SchemeBuild& b) {
    return {{"scheme", scheme_to_json(b.scheme)},
            {"constants", constants_to_json(b.constants)},
            {"N", b.target},
            {"n_fractional", b.n_fractional},
            {"k_geometric", b.k_geometric},
            {"appended_blocks", b.appended_blocks},
            {"coverage_before_rounding", format_real(b.coverage_before_rounding)},
            {"coverage", b.coverage},
            {"covers_N", b.coverage >= b.target}};
}

} // namespace tvf
