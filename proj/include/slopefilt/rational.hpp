#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "slopefilt/error.hpp"

namespace slopefilt {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" into a canonical rational.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw Error(ErrorCode::ParseError, "empty rational");
    auto slash = text.find('/');
    auto valid_int = [](const std::string& s) {
        if (s.empty()) return false;
        size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    std::string num = text.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
        throw Error(ErrorCode::ParseError, "malformed rational '" + text + "'");
    if (num[0] == '+') num.erase(0, 1);
    Integer d(den);
    if (d == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'");
    Rational q(Integer(num), d);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline Integer ipow(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rational rpow(const Rational& base, long e) {
    Integer num = base.get_num(), den = base.get_den();
    if (e < 0) {
        std::swap(num, den);
        e = -e;
    }
    Rational r(ipow(num, static_cast<unsigned long>(e)), ipow(den, static_cast<unsigned long>(e)));
    r.canonicalize();
    return r;
}

/// prod_j scales[j]^exps[j], exactly.
inline Rational power_product(std::span<const Rational> scales, std::span<const long> exps) {
    if (scales.size() != exps.size())
        throw Error(ErrorCode::DimensionMismatch, "power product length mismatch");
    Rational r = 1;
    for (size_t j = 0; j < scales.size(); ++j)
        if (exps[j] != 0) r *= rpow(scales[j], exps[j]);
    return r;
}

inline int sign_of(const Rational& q) { return sgn(q); }

inline double approx(const Rational& q) { return q.get_d(); }

inline Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

/// Seeded generator with a platform-independent draw (std distributions are
/// implementation-defined, which would break byte-identical reruns).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform-ish integer in [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    /// Random rational with |numerator| <= height and 1 <= denominator <= height.
    Rational rational(std::int64_t height) {
        Rational q(Integer(static_cast<long>(uniform(-height, height))),
                   Integer(static_cast<long>(uniform(1, height))));
        q.canonicalize();
        return q;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace slopefilt
