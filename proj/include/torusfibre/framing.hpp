#pragma once

// Framing correction Det(f)^{-zeta/2}, zeta = k |G| / (k + h), as the phase
// exp(2 pi i B k/(k+h)) and as a truncated series in 1/(k+h).

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "torusfibre/error.hpp"
#include "torusfibre/phase_series.hpp"
#include "torusfibre/rational.hpp"
#include "torusfibre/spectrum.hpp"

namespace torusfibre {

struct GroupData {
    std::int64_t N = 2; // SU(N)

    std::int64_t dim() const { return N * N - 1; }
    std::int64_t dual_coxeter() const { return N; }
    std::int64_t rank() const { return N - 1; }
    std::string name() const { return "SU(" + std::to_string(N) + ")"; }

    static GroupData su(std::int64_t N) {
        require(N >= 1, ErrorKind::Parse, "SU(N) requires N >= 1");
        return GroupData{N};
    }
    /// Accepts "SU2", "SU(2)", "su3".
    static GroupData parse(std::string_view text) {
        std::string s;
        for (char c : text)
            if (c != '(' && c != ')' && c != ' ') s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        require(s.size() > 2 && s.compare(0, 2, "SU") == 0, ErrorKind::Parse, "unknown group '" + std::string(text) + "'");
        const std::string digits = s.substr(2);
        require(digits.find_first_not_of("0123456789") == std::string::npos && digits.size() < 6, ErrorKind::Parse,
                "unknown group '" + std::string(text) + "'");
        return su(std::stoll(digits));
    }
    friend bool operator==(const GroupData&, const GroupData&) = default;
};

/// The constant |G| in zeta = |G| k / (k + h). Taken to be dim G.
inline std::int64_t central_charge_constant(const GroupData& g) { return g.dim(); }

struct FramingPhase {
    Rational B;
    GroupData group;

    bool trivial() const { return B.is_zero(); }
};

/// B = -(|G|/2) sum_{a != 0, m/2} d[a] ahat / m with ahat the representative of a in (-m/2, m/2).
inline FramingPhase framing_phase(const EigenSpectrum& spec, const GroupData& group) {
    Rational s(0);
    for (std::int64_t a = 1; a < spec.m; ++a) {
        if (2 * a == spec.m) continue;
        const std::int64_t ahat = 2 * a < spec.m ? a : a - spec.m;
        s += Rational(spec.d[static_cast<std::size_t>(a)] * ahat, spec.m);
    }
    return FramingPhase{-Rational(central_charge_constant(group), 2) * s, group};
}

/// B k / (k + h) mod 1.
inline PhaseQ framing_evaluate(const FramingPhase& p, std::int64_t k) {
    require(k >= 1, ErrorKind::Parse, "level must be positive");
    return PhaseQ(p.B * Rational(k, k + p.group.dual_coxeter()));
}

/// e^{2 pi i B} sum_{n <= L} (-Pi B h)^n / n! (k + h)^{-n}.
inline PhaseSeries framing_series(const FramingPhase& p, std::size_t L) {
    PhaseSeries s;
    s.leading = PhaseQ(p.B);
    s.shift = p.group.dual_coxeter();
    s.truncation = L;
    const Rational x = -p.B * Rational(p.group.dual_coxeter());
    Rational c(1);
    for (std::size_t n = 0; n <= L; ++n) {
        if (n > 0) c = c * x / Rational(static_cast<std::int64_t>(n));
        s.coeffs.push_back(PiPolynomial::monomial(c, n));
    }
    return s;
}

/// Coefficients of the same truncated series re-expanded in 1/k:
/// (k+h)^{-n} = sum_j binom(n+j-1, j) (-h)^j k^{-n-j}, kept through k^{-L}.
inline std::vector<PiPolynomial> reexpand_in_level(const PhaseSeries& s) {
    std::vector<std::vector<Rational>> acc(s.truncation + 1);
    const Rational h(s.shift);
    for (std::size_t n = 0; n < s.coeffs.size() && n <= s.truncation; ++n) {
        Rational binom(1), hp(1);
        for (std::size_t j = 0; n + j <= s.truncation; ++j) {
            if (n == 0 && j > 0) break;
            if (j > 0) {
                binom = binom * Rational(static_cast<std::int64_t>(n + j - 1)) / Rational(static_cast<std::int64_t>(j));
                hp *= -h;
            }
            const auto& c = s.coeffs[n];
            auto& out = acc[n + j];
            if (out.size() < c.size()) out.resize(c.size(), Rational(0));
            for (std::size_t p = 0; p < c.size(); ++p) out[p] += binom * hp * c.coeff(p);
        }
    }
    std::vector<PiPolynomial> out;
    for (auto& v : acc) out.emplace_back(std::move(v));
    return out;
}

} // namespace torusfibre
