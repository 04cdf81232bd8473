#include "tvf/rational.hpp"

#include <cctype>

#include "tvf/error.hpp"

namespace tvf {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Integer parse_integer(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        negative = s[0] == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw DomainError("malformed rational '" + std::string(whole) + "'");
    Integer v{std::string(s)};
    return negative ? Integer(-v) : v;
}

} // namespace

Rational parse_rational(std::string_view text) {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer num = parse_integer(text.substr(0, slash), text);
        Integer den = parse_integer(text.substr(slash + 1), text);
        if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view head = text.substr(0, dot), tail = text.substr(dot + 1);
        bool negative = !head.empty() && head[0] == '-';
        std::string_view digits = head;
        if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits.remove_prefix(1);
        if ((!digits.empty() && !all_digits(digits)) || !all_digits(tail))
            throw DomainError("malformed rational '" + std::string(text) + "'");
        Integer whole{std::string(digits.empty() ? "0" : digits)};
        Integer frac{std::string(tail)};
        Integer scale = 1;
        for (std::size_t i = 0; i < tail.size(); ++i) scale *= 10;
        Rational r(whole * scale + frac, scale);
        return negative ? Rational(-r) : r;
    }
    return Rational(parse_integer(text, text));
}

std::string to_string(const Rational& r) {
    const Integer num = numerator(r), den = denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Integer floor(const Rational& r) {
    Integer num = numerator(r), den = denominator(r);
    Integer q = num / den;  // truncates toward zero
    if (num < 0 && q * den != num) q -= 1;
    return q;
}

} // namespace tvf
