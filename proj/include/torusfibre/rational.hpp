#pragma once

// Exact rationals (GMP-backed, always in lowest terms) and phases in Q/Z.

#include <boost/multiprecision/gmp.hpp>

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "torusfibre/error.hpp"

namespace torusfibre {

using BigInt = boost::multiprecision::mpz_int;

// Small-integer helpers used throughout the combinatorics.

/// Non-negative residue of a modulo n (n > 0).
constexpr std::int64_t mod(std::int64_t a, std::int64_t n) {
    std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

/// Inverse of a modulo n in [0, n); requires gcd(a, n) = 1.
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t n) {
    if (n == 1) return 0;
    std::int64_t r0 = mod(a, n), r1 = n, s0 = 1, s1 = 0;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    require(r0 == 1, ErrorKind::GcdViolation,
            std::to_string(a) + " is not a unit modulo " + std::to_string(n));
    return mod(s0, n);
}

class Rational {
public:
    using value_type = boost::multiprecision::mpq_rational;

    Rational() = default;
    Rational(std::int64_t n) : v_(static_cast<long>(n)) {} // NOLINT: implicit by design of arithmetic
    Rational(std::int64_t n, std::int64_t d) : Rational(BigInt(static_cast<long>(n)), BigInt(static_cast<long>(d))) {}
    Rational(const BigInt& n, const BigInt& d) {
        require(d != 0, ErrorKind::ZeroDivision, "rational with zero denominator");
        v_ = value_type(n, d);
    }
    explicit Rational(const value_type& v) : v_(v) {}

    /// Parses "p/q" or "p" (optional sign, surrounding whitespace ignored).
    static Rational parse(std::string_view text) {
        auto trim = [](std::string_view s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
            return s;
        };
        text = trim(text);
        auto valid_int = [](std::string_view s) {
            if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
            if (s.empty()) return false;
            for (char c : s)
                if (c < '0' || c > '9') return false;
            return true;
        };
        auto to_big = [](std::string_view s) {
            if (!s.empty() && s.front() == '+') s.remove_prefix(1);
            return BigInt(std::string(s));
        };
        auto slash = text.find('/');
        std::string_view num = trim(text.substr(0, slash));
        std::string_view den = slash == std::string_view::npos ? std::string_view("1") : trim(text.substr(slash + 1));
        require(valid_int(num) && valid_int(den), ErrorKind::Parse, "malformed rational '" + std::string(text) + "'");
        return Rational(to_big(num), to_big(den));
    }

    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }
    const value_type& value() const { return v_; }

    bool is_zero() const { return v_ == 0; }
    bool is_integer() const { return denominator() == 1; }
    int sign() const { return v_ < 0 ? -1 : (v_ > 0 ? 1 : 0); }

    /// Integer value; the caller must know it fits.
    std::int64_t to_int64() const {
        require(is_integer(), ErrorKind::NonIntegralRank, "expected an integer, got " + str());
        return numerator().convert_to<std::int64_t>();
    }
    double to_double() const { return v_.convert_to<double>(); }

    BigInt floor() const {
        BigInt q, r;
        const BigInt n = numerator(), d = denominator();
        boost::multiprecision::divide_qr(n, d, q, r);
        if (r < 0) q -= 1;
        return q;
    }
    /// Fractional part in [0, 1).
    Rational frac() const { return *this - Rational(floor(), BigInt(1)); }

    Rational inverse() const {
        require(!is_zero(), ErrorKind::ZeroDivision, "inverse of zero rational");
        return Rational(1 / v_);
    }

    /// "p/q", or "p" for integers.
    std::string str() const {
        if (is_integer()) return numerator().str();
        return numerator().str() + "/" + denominator().str();
    }

    Rational operator-() const { return Rational(value_type(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        require(!o.is_zero(), ErrorKind::ZeroDivision, "division by zero rational");
        v_ /= o.v_;
        return *this;
    }
    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (a.v_ > b.v_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    value_type v_{0};
};

/// A phase e^{2 pi i q} with q in [0, 1).
class PhaseQ {
public:
    PhaseQ() = default;
    explicit PhaseQ(const Rational& q) : q_(q.frac()) {}
    PhaseQ(std::int64_t p, std::int64_t q) : PhaseQ(Rational(p, q)) {}

    /// Accepts "p/q mod 1", "p/q" or "p".
    static PhaseQ parse(std::string_view text) {
        auto pos = text.find("mod");
        if (pos != std::string_view::npos) text = text.substr(0, pos);
        return PhaseQ(Rational::parse(text));
    }

    const Rational& value() const { return q_; }
    bool is_zero() const { return q_.is_zero(); }

    /// Smallest M with M q integral.
    std::int64_t order() const { return q_.denominator().convert_to<std::int64_t>(); }

    PhaseQ operator+(const PhaseQ& o) const { return PhaseQ(q_ + o.q_); }
    PhaseQ operator-() const { return PhaseQ(-q_); }
    PhaseQ scaled(const BigInt& k) const { return PhaseQ(q_ * Rational(k, BigInt(1))); }
    PhaseQ scaled(std::int64_t k) const { return PhaseQ(q_ * Rational(k)); }

    std::string str() const { return q_.str() + " mod 1"; }

    friend bool operator==(const PhaseQ&, const PhaseQ&) = default;
    friend std::strong_ordering operator<=>(const PhaseQ& a, const PhaseQ& b) { return a.q_ <=> b.q_; }
    friend std::ostream& operator<<(std::ostream& os, const PhaseQ& p) { return os << p.str(); }

private:
    Rational q_;
};

} // namespace torusfibre
