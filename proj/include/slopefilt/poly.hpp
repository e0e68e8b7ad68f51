#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "slopefilt/rational.hpp"

namespace slopefilt {

/// Exponent vector in the formal symbols t_1..t_m; trailing zeros are trimmed
/// so monomials from models with different m still compare correctly.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<std::uint32_t> exps) : exps_(std::move(exps)) { trim(); }

    static Monomial variable(size_t index) {
        std::vector<std::uint32_t> e(index + 1, 0);
        e[index] = 1;
        return Monomial(std::move(e));
    }

    std::uint32_t exponent(size_t i) const { return i < exps_.size() ? exps_[i] : 0; }
    size_t width() const { return exps_.size(); }
    bool is_one() const { return exps_.empty(); }

    std::uint64_t degree() const {
        std::uint64_t d = 0;
        for (auto e : exps_) d += e;
        return d;
    }

    Monomial operator*(const Monomial& o) const {
        std::vector<std::uint32_t> e(std::max(width(), o.width()), 0);
        for (size_t i = 0; i < e.size(); ++i) e[i] = exponent(i) + o.exponent(i);
        return Monomial(std::move(e));
    }

    bool divides(const Monomial& o) const {
        for (size_t i = 0; i < width(); ++i)
            if (exps_[i] > o.exponent(i)) return false;
        return true;
    }

    /// o / *this, assuming divides(o).
    Monomial quotient_of(const Monomial& o) const {
        std::vector<std::uint32_t> e(o.width(), 0);
        for (size_t i = 0; i < e.size(); ++i) e[i] = o.exponent(i) - exponent(i);
        return Monomial(std::move(e));
    }

    /// Graded order: total degree first, then larger exponent of earlier symbol.
    friend bool operator<(const Monomial& a, const Monomial& b) {
        auto da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        size_t w = std::max(a.width(), b.width());
        for (size_t i = 0; i < w; ++i) {
            if (a.exponent(i) != b.exponent(i)) return a.exponent(i) < b.exponent(i);
        }
        return false;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }

    std::string to_string(const std::vector<std::string>& names) const {
        std::string s;
        for (size_t i = 0; i < exps_.size(); ++i) {
            if (exps_[i] == 0) continue;
            if (!s.empty()) s += "*";
            s += i < names.size() ? names[i] : "t" + std::to_string(i + 1);
            if (exps_[i] > 1) s += "^" + std::to_string(exps_[i]);
        }
        return s;
    }

private:
    void trim() {
        while (!exps_.empty() && exps_.back() == 0) exps_.pop_back();
    }
    std::vector<std::uint32_t> exps_;
};

/// Multivariate polynomial in the formal symbols with rational coefficients.
/// Terms are kept sorted by descending monomial order; no zero coefficients.
class Poly {
public:
    using Term = std::pair<Monomial, Rational>;

    Poly() = default;
    Poly(const Rational& c) {  // NOLINT: implicit constant embedding
        if (c != 0) terms_.emplace_back(Monomial(), c);
    }
    Poly(long c) : Poly(Rational(c)) {}  // NOLINT
    Poly(const Monomial& m, const Rational& c) {
        if (c != 0) terms_.emplace_back(m, c);
    }

    static Poly variable(size_t index) { return Poly(Monomial::variable(index), Rational(1)); }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }
    Rational constant_value() const {
        for (const auto& [m, c] : terms_)
            if (m.is_one()) return c;
        return 0;
    }
    const Term& leading() const { return terms_.front(); }
    std::uint64_t degree() const { return terms_.empty() ? 0 : terms_.front().first.degree(); }

    Rational coefficient(const Monomial& m) const {
        for (const auto& [mm, c] : terms_)
            if (mm == m) return c;
        return 0;
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& t : r.terms_) t.second = -t.second;
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, 1); }
    friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, -1); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_constant()) return b.scaled(a.constant_value());
        if (b.is_constant()) return a.scaled(b.constant_value());
        std::map<Monomial, Rational> acc;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) acc[ma * mb] += ca * cb;
        Poly r;
        for (auto it = acc.rbegin(); it != acc.rend(); ++it)
            if (it->second != 0) r.terms_.emplace_back(it->first, it->second);
        return r;
    }

    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    Poly scaled(const Rational& c) const {
        if (c == 0) return {};
        Poly r = *this;
        for (auto& t : r.terms_) t.second *= c;
        return r;
    }

    /// Exact division; throws InexactDivision when `divisor` does not divide.
    Poly divexact(const Poly& divisor) const {
        if (divisor.is_zero()) throw Error(ErrorCode::InexactDivision, "division by zero polynomial");
        if (divisor.is_constant()) return scaled(1 / divisor.constant_value());
        Poly rem = *this, quo;
        const auto& [lm, lc] = divisor.leading();
        while (!rem.is_zero()) {
            const auto& [rm, rc] = rem.leading();
            if (!lm.divides(rm)) throw Error(ErrorCode::InexactDivision, "polynomial division not exact");
            Poly t(lm.quotient_of(rm), rc / lc);
            quo += t;
            rem -= t * divisor;
        }
        return quo;
    }

    Rational evaluate(const std::vector<Rational>& values) const {
        Rational total = 0;
        for (const auto& [m, c] : terms_) {
            Rational v = c;
            for (size_t i = 0; i < m.width(); ++i) {
                if (m.exponent(i) == 0) continue;
                if (i >= values.size()) throw Error(ErrorCode::MissingSymbol, "no value for symbol");
                v *= rpow(values[i], m.exponent(i));
            }
            total += v;
        }
        return total;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

    std::string to_string(const std::vector<std::string>& names = {}) const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [m, c] : terms_) {
            if (!s.empty()) s += c < 0 ? " - " : " + ";
            else if (c < 0) s += "-";
            Rational mag = abs(c);
            if (m.is_one()) s += mag.get_str();
            else if (mag == 1) s += m.to_string(names);
            else s += mag.get_str() + "*" + m.to_string(names);
        }
        return s;
    }

private:
    static Poly merge(const Poly& a, const Poly& b, int sign) {
        Poly r;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() || (i < a.terms_.size() && b.terms_[j].first < a.terms_[i].first)) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || a.terms_[i].first < b.terms_[j].first) {
                r.terms_.emplace_back(b.terms_[j].first, sign > 0 ? b.terms_[j].second : Rational(-b.terms_[j].second));
                ++j;
            } else {
                Rational c = a.terms_[i].second;
                if (sign > 0) c += b.terms_[j].second;
                else c -= b.terms_[j].second;
                if (c != 0) r.terms_.emplace_back(a.terms_[i].first, c);
                ++i;
                ++j;
            }
        }
        return r;
    }

    std::vector<Term> terms_;
};

/// A coordinate value: rational constant plus a rational combination of the
/// formal symbols (indices are 0-based here, printed as the model's names).
struct SymbolicScalar {
    Rational const_part = 0;
    std::map<size_t, Rational> symbol_coeffs;

    SymbolicScalar() = default;
    SymbolicScalar(const Rational& c) : const_part(c) {}  // NOLINT
    SymbolicScalar(long c) : const_part(c) {}              // NOLINT

    bool is_rational() const { return symbol_coeffs.empty(); }
    bool is_zero() const { return const_part == 0 && symbol_coeffs.empty(); }

    void normalize() {
        for (auto it = symbol_coeffs.begin(); it != symbol_coeffs.end();)
            it = it->second == 0 ? symbol_coeffs.erase(it) : std::next(it);
    }

    Poly to_poly() const {
        Poly p(const_part);
        for (const auto& [t, c] : symbol_coeffs) p += Poly::variable(t).scaled(c);
        return p;
    }

    friend SymbolicScalar operator+(SymbolicScalar a, const SymbolicScalar& b) {
        a.const_part += b.const_part;
        for (const auto& [t, c] : b.symbol_coeffs) a.symbol_coeffs[t] += c;
        a.normalize();
        return a;
    }
    friend SymbolicScalar operator-(const SymbolicScalar& a, const SymbolicScalar& b) { return a + b.scaled(-1); }

    SymbolicScalar scaled(const Rational& k) const {
        SymbolicScalar r;
        if (k == 0) return r;
        r.const_part = const_part * k;
        for (const auto& [t, c] : symbol_coeffs) r.symbol_coeffs[t] = c * k;
        return r;
    }

    friend bool operator==(const SymbolicScalar& a, const SymbolicScalar& b) {
        return a.const_part == b.const_part && a.symbol_coeffs == b.symbol_coeffs;
    }
    friend bool operator<(const SymbolicScalar& a, const SymbolicScalar& b) {
        if (a.const_part != b.const_part) return a.const_part < b.const_part;
        return a.symbol_coeffs < b.symbol_coeffs;
    }

    std::string to_string(const std::vector<std::string>& names = {}) const { return to_poly().to_string(names); }
};

} // namespace slopefilt
