#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace linfty {

/// Exact rational scalar. All arithmetic in the library is over Q; nothing
/// is ever rounded, so "== 0" is a decidable certificate.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational rat(long long n, long long d = 1) { return Rational(n, d); }

inline BigInt factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) {
        r *= (n - i);
        r /= (i + 1);
    }
    return r;
}

/// Parse "p/q" or "p" with optional sign. Returns nullopt on malformed input.
inline std::optional<Rational> parse_rational(const std::string& s) {
    if (s.empty()) return std::nullopt;
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            BigInt n(s);
            return Rational(n);
        }
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (num.empty() || den.empty()) return std::nullopt;
        BigInt n(num), d(den);
        if (d == 0) return std::nullopt;
        return Rational(n, d);
    } catch (const std::runtime_error&) {
        return std::nullopt;
    }
}

inline std::string rational_str(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

}  // namespace linfty
