#pragma once

// Truncated series  e^{2 pi i A k/(k+h)} = e^{2 pi i A} * sum_n c_n (k+h)^{-n}
// with coefficients in Q[Pi], Pi standing for the symbol 2 pi i.

#include <cstdint>
#include <string>
#include <vector>

#include "torusfibre/hpfloat.hpp"
#include "torusfibre/rational.hpp"

namespace torusfibre {

/// Polynomial in the formal symbol Pi = 2 pi i with rational coefficients.
class PiPolynomial {
public:
    PiPolynomial() = default;
    explicit PiPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
    static PiPolynomial monomial(const Rational& c, std::size_t power) {
        std::vector<Rational> v(power + 1, Rational(0));
        v[power] = c;
        return PiPolynomial(std::move(v));
    }

    /// Coefficient of Pi^p.
    Rational coeff(std::size_t p) const { return p < coeffs_.size() ? coeffs_[p] : Rational(0); }
    std::size_t size() const { return coeffs_.size(); }
    bool is_zero() const { return coeffs_.empty(); }

    /// Value with Pi = 2 pi i.
    hp::Complex evaluate() const {
        hp::Complex acc, power(hp::Real(1));
        const hp::Complex two_pi_i(hp::Real(0), hp::Real(2 * hp::pi()));
        for (const auto& c : coeffs_) {
            hp::Real cr = hp::from_rational(c);
            acc += hp::Complex(hp::Real(cr * power.re), hp::Real(cr * power.im));
            power *= two_pi_i;
        }
        return acc;
    }

    /// e.g. "-3/2*Pi", "9/8*Pi^2", "1".
    std::string str() const {
        if (coeffs_.empty()) return "0";
        std::string out;
        for (std::size_t p = 0; p < coeffs_.size(); ++p) {
            if (coeffs_[p].is_zero()) continue;
            std::string term = coeffs_[p].str();
            if (p == 1) term += "*Pi";
            if (p > 1) term += "*Pi^" + std::to_string(p);
            if (!out.empty()) out += term.front() == '-' ? " " : " + ";
            out += term;
        }
        return out;
    }

    friend bool operator==(const PiPolynomial&, const PiPolynomial&) = default;

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }
    std::vector<Rational> coeffs_;
};

struct PhaseSeries {
    PhaseQ leading;
    std::int64_t shift = 0;            // h
    std::vector<PiPolynomial> coeffs;  // coeffs[n] multiplies (k+h)^{-n}; coeffs[0] == 1
    std::size_t truncation = 0;        // L

    /// Numerical value at level k of the truncated series.
    hp::Complex evaluate(std::int64_t k) const {
        const hp::Real x = hp::Real(1) / hp::Real(k + shift);
        hp::Complex sum;
        hp::Real power(1);
        for (const auto& c : coeffs) {
            hp::Complex term = c.evaluate();
            sum += hp::Complex(hp::Real(term.re * power), hp::Real(term.im * power));
            power *= x;
        }
        return hp::cis2pi(leading.value()) * sum;
    }
};

} // namespace torusfibre
