#pragma once

// Exact arithmetic in the cyclotomic fields Q(zeta_M).
//
// An element is stored as its remainder modulo the M-th cyclotomic polynomial
// Phi_M, i.e. as rational coordinates on the power basis
// 1, zeta_M, ..., zeta_M^{phi(M)-1}. Two elements with the same conductor are
// equal iff their coordinate vectors agree; elements with different
// conductors are compared after embedding both into Q(zeta_lcm).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "torusfibre/error.hpp"
#include "torusfibre/rational.hpp"

namespace torusfibre {

namespace detail {

inline std::vector<std::int64_t> compute_cyclotomic_polynomial(std::int64_t M);

} // namespace detail

/// Coefficients of Phi_M, lowest degree first. Results are memoised.
inline const std::vector<std::int64_t>& cyclotomic_polynomial(std::int64_t M) {
    require(M >= 1, ErrorKind::Parse, "cyclotomic conductor must be positive");
    static std::mutex mutex;
    static std::map<std::int64_t, std::vector<std::int64_t>> cache;
    {
        std::lock_guard lock(mutex);
        auto it = cache.find(M);
        if (it != cache.end()) return it->second;
    }
    auto poly = detail::compute_cyclotomic_polynomial(M);
    std::lock_guard lock(mutex);
    return cache.emplace(M, std::move(poly)).first->second;
}

inline std::int64_t euler_phi(std::int64_t M) {
    return static_cast<std::int64_t>(cyclotomic_polynomial(M).size()) - 1;
}

namespace detail {

inline std::vector<std::int64_t> compute_cyclotomic_polynomial(std::int64_t M) {
    // x^M - 1 = prod_{d | M} Phi_d(x); divide out the proper divisors.
    std::vector<std::int64_t> num(static_cast<std::size_t>(M + 1), 0);
    num[0] = -1;
    num[static_cast<std::size_t>(M)] = 1;
    for (std::int64_t d = 1; d < M; ++d) {
        if (M % d != 0) continue;
        const auto& div = cyclotomic_polynomial(d);
        const std::size_t dd = div.size() - 1;
        std::vector<std::int64_t> quot(num.size() - dd, 0);
        for (std::size_t i = num.size() - 1; i + 1 > dd; --i) {
            std::int64_t c = num[i]; // divisor is monic
            quot[i - dd] = c;
            if (c == 0) continue;
            for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * div[j];
            if (i == dd) break;
        }
        num = std::move(quot);
    }
    return num;
}

// Polynomials over Q, lowest degree first, used for inversion.
using QPoly = std::vector<Rational>;

inline void trim(QPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline void divmod(QPoly a, const QPoly& b, QPoly& quot, QPoly& rem) {
    trim(a);
    quot.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
    const Rational lead_inv = b.back().inverse();
    while (a.size() >= b.size() && !a.empty()) {
        const std::size_t shift = a.size() - b.size();
        const Rational c = a.back() * lead_inv;
        quot[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
        a.pop_back();
        trim(a);
    }
    rem = std::move(a);
}

inline QPoly poly_sub_mul(const QPoly& a, const QPoly& q, const QPoly& b) {
    // a - q*b
    QPoly out(std::max(a.size(), q.empty() || b.empty() ? 0 : q.size() + b.size() - 1), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (q[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] -= q[i] * b[j];
    }
    trim(out);
    return out;
}

} // namespace detail

class Cyclotomic {
public:
    /// Zero in Q = Q(zeta_1).
    Cyclotomic() : conductor_(1), coeffs_(1, Rational(0)) {}
    Cyclotomic(const Rational& r) : conductor_(1), coeffs_(1, r) {} // NOLINT: rationals embed
    Cyclotomic(std::int64_t n) : Cyclotomic(Rational(n)) {}         // NOLINT

    /// Element sum_j coeffs[j] zeta_M^j for an arbitrary-length list; reduced.
    static Cyclotomic from_powers(std::int64_t M, std::vector<Rational> coeffs) {
        Cyclotomic out;
        out.conductor_ = M;
        out.coeffs_ = reduce(M, std::move(coeffs));
        return out;
    }

    /// Element given directly in canonical coordinates (length phi(M)).
    static Cyclotomic from_canonical(std::int64_t M, std::vector<Rational> coeffs) {
        require(static_cast<std::int64_t>(coeffs.size()) == euler_phi(M), ErrorKind::Parse,
                "coefficient list length must equal phi(" + std::to_string(M) + ")");
        Cyclotomic out;
        out.conductor_ = M;
        out.coeffs_ = std::move(coeffs);
        return out;
    }

    /// zeta_M^j.
    static Cyclotomic root_of_unity(std::int64_t M, std::int64_t j) {
        std::vector<Rational> c(static_cast<std::size_t>(M), Rational(0));
        c[static_cast<std::size_t>(mod(j, M))] = Rational(1);
        return from_powers(M, std::move(c));
    }

    /// e^{2 pi i p} as an element of Q(zeta_M); the denominator of p must divide M.
    static Cyclotomic from_phase(const PhaseQ& p, std::int64_t M) {
        const std::int64_t q = p.order();
        require(M % q == 0, ErrorKind::Parse,
                "phase " + p.str() + " does not live in conductor " + std::to_string(M));
        const std::int64_t num = p.value().numerator().convert_to<std::int64_t>();
        return root_of_unity(M, num * (M / q));
    }
    static Cyclotomic from_phase(const PhaseQ& p) { return from_phase(p, p.order()); }

    std::int64_t conductor() const { return conductor_; }
    std::span<const Rational> coeffs() const { return coeffs_; }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& r) { return r.is_zero(); });
    }
    bool is_rational() const {
        return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](const Rational& r) { return r.is_zero(); });
    }
    /// The rational value; requires is_rational().
    Rational to_rational() const {
        require(is_rational(), ErrorKind::NonIntegralRank, "cyclotomic value is not rational");
        return coeffs_.front();
    }

    /// Image under Q(zeta_M) -> Q(zeta_N), zeta_M -> zeta_N^{N/M}; requires M | N.
    Cyclotomic embed(std::int64_t N) const {
        require(N % conductor_ == 0, ErrorKind::Parse,
                "cannot embed conductor " + std::to_string(conductor_) + " into " + std::to_string(N));
        if (N == conductor_) return *this;
        const std::int64_t step = N / conductor_;
        std::vector<Rational> c(static_cast<std::size_t>(N), Rational(0));
        for (std::size_t j = 0; j < coeffs_.size(); ++j)
            c[static_cast<std::size_t>(static_cast<std::int64_t>(j) * step)] = coeffs_[j];
        return from_powers(N, std::move(c));
    }

    /// Galois action zeta -> zeta^t, t a unit modulo the conductor.
    Cyclotomic galois(std::int64_t t) const {
        require(std::gcd(mod(t, conductor_), conductor_) == 1, ErrorKind::GcdViolation,
                "Galois exponent must be a unit");
        std::vector<Rational> c(static_cast<std::size_t>(conductor_), Rational(0));
        for (std::size_t j = 0; j < coeffs_.size(); ++j)
            c[static_cast<std::size_t>(mod(static_cast<std::int64_t>(j) * t, conductor_))] += coeffs_[j];
        return from_powers(conductor_, std::move(c));
    }
    /// Complex conjugate.
    Cyclotomic conj() const { return galois(-1); }

    /// Multiplication by zeta_M^j with M the current conductor.
    Cyclotomic times_root(std::int64_t j) const {
        std::vector<Rational> c(static_cast<std::size_t>(conductor_), Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            c[static_cast<std::size_t>(mod(static_cast<std::int64_t>(i) + j, conductor_))] = coeffs_[i];
        return from_powers(conductor_, std::move(c));
    }

    Cyclotomic inverse() const {
        require(!is_zero(), ErrorKind::ZeroDivision, "inverse of zero cyclotomic element");
        if (coeffs_.size() == 1) return Cyclotomic::from_canonical(conductor_, {coeffs_[0].inverse()});
        const auto& phi = cyclotomic_polynomial(conductor_);
        detail::QPoly r0(phi.begin(), phi.end()), r1(coeffs_.begin(), coeffs_.end());
        detail::trim(r1);
        detail::QPoly s0, s1{Rational(1)};
        while (!r1.empty()) {
            detail::QPoly q, r;
            detail::divmod(r0, r1, q, r);
            detail::QPoly s2 = detail::poly_sub_mul(s0, q, s1);
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r0 is a nonzero constant since Phi_M is irreducible.
        const Rational g = r0.front().inverse();
        for (auto& c : s0) c *= g;
        return from_powers(conductor_, std::move(s0));
    }

    Cyclotomic operator-() const {
        Cyclotomic out = *this;
        for (auto& c : out.coeffs_) c = -c;
        return out;
    }
    Cyclotomic& operator+=(const Cyclotomic& o) { return *this = combine(*this, o, Rational(1)); }
    Cyclotomic& operator-=(const Cyclotomic& o) { return *this = combine(*this, o, Rational(-1)); }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = multiply(*this, o); }
    Cyclotomic& operator/=(const Cyclotomic& o) { return *this = multiply(*this, o.inverse()); }
    friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) { return combine(a, b, Rational(1)); }
    friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) { return combine(a, b, Rational(-1)); }
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) { return multiply(a, b); }
    friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) { return multiply(a, b.inverse()); }

    Cyclotomic scaled(const Rational& r) const {
        Cyclotomic out = *this;
        for (auto& c : out.coeffs_) c *= r;
        return out;
    }

    Cyclotomic pow(std::int64_t e) const {
        if (e < 0) return inverse().pow(-e);
        Cyclotomic result = Cyclotomic(1).embed(conductor_), base = *this;
        while (e > 0) {
            if (e & 1) result *= base;
            e >>= 1;
            if (e) base *= base;
        }
        return result;
    }

    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
        if (a.conductor_ == b.conductor_) return a.coeffs_ == b.coeffs_;
        const std::int64_t L = std::lcm(a.conductor_, b.conductor_);
        return a.embed(L).coeffs_ == b.embed(L).coeffs_;
    }

    /// Complex embedding zeta_M -> e^{2 pi i / M} in double precision.
    std::complex<double> to_complex() const {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            if (coeffs_[j].is_zero()) continue;
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(conductor_);
            acc += coeffs_[j].to_double() * std::polar(1.0, angle);
        }
        return acc;
    }

    /// Reduction of sum_j c[j] x^j modulo Phi_M.
    static std::vector<Rational> reduce(std::int64_t M, std::vector<Rational> c) {
        const auto& phi = cyclotomic_polynomial(M);
        const std::size_t deg = phi.size() - 1;
        for (std::size_t i = c.size(); i-- > deg;) {
            if (c[i].is_zero()) continue;
            const Rational lead = c[i];
            for (std::size_t j = 0; j < deg; ++j)
                if (phi[j] != 0) c[i - deg + j] -= lead * Rational(phi[j]);
            c[i] = Rational(0);
        }
        c.resize(deg, Rational(0));
        return c;
    }

private:
    static Cyclotomic combine(const Cyclotomic& a, const Cyclotomic& b, const Rational& sign) {
        const std::int64_t L = std::lcm(a.conductor_, b.conductor_);
        Cyclotomic x = a.embed(L);
        const Cyclotomic y = b.embed(L);
        for (std::size_t j = 0; j < x.coeffs_.size(); ++j) {
            if (y.coeffs_[j].is_zero()) continue;
            x.coeffs_[j] += sign * y.coeffs_[j];
        }
        return x;
    }

    static Cyclotomic multiply(const Cyclotomic& a, const Cyclotomic& b) {
        const std::int64_t L = std::lcm(a.conductor_, b.conductor_);
        const Cyclotomic x = a.embed(L), y = b.embed(L);
        std::vector<Rational> prod(x.coeffs_.size() + y.coeffs_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
            if (x.coeffs_[i].is_zero()) continue;
            for (std::size_t j = 0; j < y.coeffs_.size(); ++j) {
                if (y.coeffs_[j].is_zero()) continue;
                prod[i + j] += x.coeffs_[i] * y.coeffs_[j];
            }
        }
        return from_powers(L, std::move(prod));
    }

    std::int64_t conductor_;
    std::vector<Rational> coeffs_;
};

} // namespace torusfibre
