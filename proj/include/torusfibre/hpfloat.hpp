#pragma once

// High-precision floating point (MPFR via Boost.Multiprecision) used for
// numerical rendering of exact values and by the expansion fitter.

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdlib>
#include <string>

#include "torusfibre/cyclotomic.hpp"
#include "torusfibre/rational.hpp"

namespace torusfibre::hp {

using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned default_mantissa_bits = 128;

inline unsigned digits10_for_bits(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

/// Mantissa bits: TORUSFIBRE_PRECISION if set to a positive integer, else fallback.
inline unsigned mantissa_bits_from_env(unsigned fallback = default_mantissa_bits) {
    if (const char* env = std::getenv("TORUSFIBRE_PRECISION")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 24 && v <= 100000) return static_cast<unsigned>(v);
    }
    return fallback;
}

/// Sets the default MPFR precision for the lifetime of the scope.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits) : saved_(Real::default_precision()) {
        Real::default_precision(digits10_for_bits(bits));
    }
    ~PrecisionScope() { Real::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

struct Complex {
    Real re{0};
    Real im{0};

    Complex() = default;
    Complex(Real r, Real i = Real(0)) : re(std::move(r)), im(std::move(i)) {} // NOLINT

    Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
    Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
    Complex& operator*=(const Complex& o) {
        Real r = re * o.re - im * o.im;
        Real i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    Complex& operator/=(const Complex& o) {
        Real d = o.re * o.re + o.im * o.im;
        Real r = (re * o.re + im * o.im) / d;
        Real i = (im * o.re - re * o.im) / d;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
    Complex operator-() const { return Complex(Real(-re), Real(-im)); }

    Complex conj() const { return Complex(re, Real(-im)); }
    Real norm() const { return Real(re * re + im * im); }
    Real abs() const { return Real(sqrt(norm())); }
};

/// pi at the current default precision.
inline Real pi() {
    Real p;
    mpfr_const_pi(p.backend().data(), GMP_RNDN);
    return p;
}

inline Real from_rational(const Rational& r) {
    Real n(r.numerator());
    Real d(r.denominator());
    return Real(n / d);
}

/// e^{2 pi i t}.
inline Complex cis2pi(const Real& t) {
    Real angle = 2 * pi() * t;
    return Complex(Real(cos(angle)), Real(sin(angle)));
}

inline Complex cis2pi(const Rational& t) { return cis2pi(from_rational(t.frac())); }

inline Complex evaluate(const Cyclotomic& x) {
    Complex acc;
    const auto coeffs = x.coeffs();
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j].is_zero()) continue;
        const Complex root = cis2pi(Rational(static_cast<std::int64_t>(j), x.conductor()));
        Real c = from_rational(coeffs[j]);
        acc += Complex(Real(c * root.re), Real(c * root.im));
    }
    return acc;
}

/// Scientific rendering with the requested number of significant digits.
inline std::string to_string(const Real& v, unsigned digits) {
    return v.str(static_cast<std::streamsize>(digits), std::ios_base::scientific);
}

} // namespace torusfibre::hp
