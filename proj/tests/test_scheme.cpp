#include <doctest.h>

#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "tvf/scheme.hpp"

using namespace tvf;

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

// Inequality (2) in 50-digit floating point, as an independent reading.
bool reference_valid(const std::vector<std::int64_t>& s, std::int64_t n, std::int64_t q, std::int64_t delta) {
    if (s.empty() || static_cast<std::int64_t>(s.size()) > q) return false;
    Big prefix = 0;
    for (std::size_t j = 1; j <= s.size(); ++j) {
        if (s[j - 1] <= 0) return false;
        const Big lhs = (Big(delta) / Big(q - static_cast<std::int64_t>(j) + 1) + 1) * prefix + 2 * Big(delta) * s[j - 1];
        if (lhs > n + Big("1e-30")) return false;
        prefix += s[j - 1];
    }
    return true;
}

} // namespace

TEST_CASE("validation examples") {
    CHECK(validate_scheme({1, 1}, 20, 5, 2).ok);
    CHECK(validate_scheme({5}, 20, 5, 2).ok);
    CHECK(validate_scheme({5, 3}, 20, 5, 2).ok);
    CHECK(validate_scheme({5, 4}, 20, 5, 2).failing_index == 2);
    const auto big = validate_scheme({6}, 20, 5, 2);
    CHECK_FALSE(big.ok);
    CHECK(big.failing_index == 1);
    // block 1: 4·3 = 12; block 2: (2/4 + 1)·3 + 4·2 = 12.5
    CHECK(validate_scheme({3, 2}, 13, 5, 2).ok);
    CHECK(validate_scheme({3, 2}, 12, 5, 2).failing_index == 2);
    CHECK(validate_scheme({3}, 12, 5, 2).ok);
    CHECK(validate_scheme({1, 1, 1}, 100, 2, 1).failing_index == 0);
    CHECK_FALSE(validate_scheme({}, 10, 3, 1).ok);
    CHECK(validate_scheme({2, 0}, 100, 3, 1).failing_index == 2);
    CHECK_THROWS_AS(validate_scheme({1}, 10, 3, 0), DomainError);
}

TEST_CASE("exact validation matches a high-precision reading") {
    for (std::int64_t q = 1; q <= 5; ++q)
        for (std::int64_t delta = 1; delta <= 3; ++delta)
            for (std::int64_t a = 1; a <= 6; ++a)
                for (std::int64_t b = 0; b <= 6; ++b) {
                    std::vector<std::int64_t> s{a};
                    if (b) s.push_back(b);
                    for (std::int64_t n = 1; n <= 40; ++n)
                        CHECK(validate_scheme(s, n, q, delta).ok == reference_valid(s, n, q, delta));
                }
}

TEST_CASE("epsilon constants") {
    for (const char* text : {"0.1", "0.5", "1", "3", "10"}) {
        const Big eps(text);
        const Big a = sqrt(1 + eps);
        const Big gamma = -log(1 - 1 / a) / a;
        const auto c = epsilon_constants(std::stod(text));
        CHECK(std::abs(c.a - a.convert_to<double>()) < 1e-12);
        CHECK(std::abs(c.gamma - gamma.convert_to<double>()) < 1e-9);
        CHECK(std::abs(c.k_epsilon - (a - 1 + 2 * gamma).convert_to<double>()) < 1e-9);
        CHECK(std::abs(c.k_epsilon_consistent - (1 / (a - 1) + 2 * gamma).convert_to<double>()) < 1e-9);
        CHECK(c.gamma > 0);
    }
    CHECK(std::abs(epsilon_constants(3).k_epsilon - (1 + std::log(2.0))) < 1e-9);
    const auto c21 = epsilon_constants(0.21);
    CHECK(c21.a == doctest::Approx(1.1).epsilon(1e-12));
    CHECK(c21.gamma == doctest::Approx(2.1799).epsilon(1e-4));
    CHECK(c21.k_epsilon == doctest::Approx(4.4599).epsilon(1e-4));
    // tiny ε: cancellation-free
    CHECK(std::isfinite(epsilon_constants(1e-12).gamma));
    CHECK_THROWS_AS(epsilon_constants(0), DomainError);
}

TEST_CASE("scheme construction") {
    const SchemeBuild b = build_scheme(Rational(3), 1000, 10, 20);
    CHECK(validate_scheme(b.scheme).ok);
    CHECK(b.scheme.n == 4000);
    CHECK(b.coverage >= 1000);
    CHECK_FALSE(b.n_fractional);

    const SchemeBuild frac = build_scheme(parse_rational("1/3"), 50, 1, 8);
    CHECK(frac.n_fractional);
    CHECK(frac.scheme.n == 66);
    CHECK(frac.scheme.sizes == std::vector<std::int64_t>{33, 13, 5, 2});

    const SchemeBuild wide = build_scheme(Rational(3), 1000, 10, 40);
    CHECK(validate_scheme(wide.scheme).ok);
    CHECK(wide.coverage >= 1000);

    // n = 12, terms 6, 2.65, 1.17, 0.51, 0.23: two zeros dropped, one block appended
    const SchemeBuild padded = build_scheme(parse_rational("1/4"), 10, 1, 20);
    CHECK(padded.k_geometric == 5);
    CHECK(padded.scheme.sizes == std::vector<std::int64_t>{6, 2, 1, 1});
    CHECK(padded.appended_blocks == 1);
    CHECK(padded.coverage == 10);
    CHECK(validate_scheme(padded.scheme).ok);

    CHECK_THROWS_AS(build_scheme(Rational(3), 1000, 10, 16), DomainError);  // q <= K_ε·Δ
    CHECK_THROWS_AS(build_scheme(Rational(3), 1, 10, 20), SchemeInfeasible);  // n/(2Δ) < 1
}

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-0.25") == Rational(-1, 4));
    CHECK(parse_rational("7") == Rational(7));
    CHECK(floor(Rational(-3, 2)) == -2);
    CHECK(to_string(Rational(4, 6)) == "2/3");
    CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
    CHECK_THROWS_AS(parse_rational("x"), DomainError);
}
