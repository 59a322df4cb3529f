#pragma once

// Action of f on holomorphic differentials: the root-of-unity sums mu_m^a(n),
// holomorphic Lefschetz traces of the powers of f, eigenvalue multiplicities
// and the Wall signature.

#include <cstdint>
#include <numeric>
#include <vector>

#include "torusfibre/cyclotomic.hpp"
#include "torusfibre/error.hpp"
#include "torusfibre/orbit.hpp"
#include "torusfibre/rational.hpp"

namespace torusfibre {

struct EigenSpectrum {
    std::int64_t m = 0;
    std::vector<std::int64_t> d; // d[a]: multiplicity of e^{2 pi i a/m}

    std::int64_t genus() const { return std::accumulate(d.begin(), d.end(), std::int64_t{0}); }
    friend bool operator==(const EigenSpectrum&, const EigenSpectrum&) = default;
};

/// mu_m^a(n) = nbar - (m-1)/2 with n * nbar = a mod m, 0 <= nbar < m.
inline Rational mu_value(std::int64_t m, std::int64_t n, std::int64_t a) {
    require(m >= 1, ErrorKind::GcdViolation, "mu requires m >= 1");
    const std::int64_t nbar = mod(inverse_mod(n, m) * mod(a, m), m);
    return Rational(nbar) - Rational(m - 1, 2);
}

namespace detail {

/// m * (1 - zeta_m^j)^{-1} on the power basis mod x^m - 1, for j != 0 mod m.
/// Uses 1/(1-x) = -(1/d) sum_{t<d} t x^t for x of exact order d; d | m, so the
/// scaled coefficients are integers.
inline std::vector<std::int64_t> scaled_inverse_one_minus_root(std::int64_t m, std::int64_t j) {
    j = mod(j, m);
    require(j != 0, ErrorKind::DegenerateTerm, "(1 - zeta^0) is not invertible");
    const std::int64_t d = m / std::gcd(j, m);
    const std::int64_t scale = m / d;
    std::vector<std::int64_t> out(static_cast<std::size_t>(m), 0);
    for (std::int64_t t = 1; t < d; ++t) out[static_cast<std::size_t>(mod(j * t, m))] -= scale * t;
    return out;
}

inline Cyclotomic from_scaled_powers(std::int64_t m, const std::vector<std::int64_t>& scaled, std::int64_t denom) {
    std::vector<Rational> c;
    c.reserve(scaled.size());
    for (auto v : scaled) c.emplace_back(v, denom);
    return Cyclotomic::from_powers(m, std::move(c));
}

} // namespace detail

/// (1 - zeta_m^j)^{-1} in Q(zeta_m).
inline Cyclotomic inverse_one_minus_root(std::int64_t m, std::int64_t j) {
    return detail::from_scaled_powers(m, detail::scaled_inverse_one_minus_root(m, j), m);
}

/// The literal sum -sum_{beta=1}^{m-1} zeta_m^{-a beta} / (1 - zeta_m^{n beta}) in Q(zeta_m).
inline Cyclotomic mu_bruteforce(std::int64_t m, std::int64_t n, std::int64_t a) {
    require(std::gcd(mod(n, m), m) == 1, ErrorKind::GcdViolation,
            std::to_string(n) + " is not a unit modulo " + std::to_string(m));
    std::vector<std::int64_t> acc(static_cast<std::size_t>(m), 0);
    for (std::int64_t beta = 1; beta < m; ++beta) {
        const auto inv = detail::scaled_inverse_one_minus_root(m, n * beta);
        const std::int64_t shift = mod(-a * beta, m);
        for (std::int64_t t = 0; t < m; ++t) acc[static_cast<std::size_t>(mod(t + shift, m))] -= inv[static_cast<std::size_t>(t)];
    }
    return detail::from_scaled_powers(m, acc, m);
}

/// Tr(f^beta) on H^0(Omega^1): g for beta = 0, otherwise
/// 1 - sum_{i : m_i | beta} m_i (1 - e^{2 pi i n_i (beta/m_i) / l_i})^{-1}.
inline Cyclotomic lefschetz_trace(const OrbitData& data, std::int64_t beta) {
    const std::int64_t g = total_genus(data);
    const std::int64_t m = data.m;
    beta = mod(beta, m);
    if (beta == 0) return Cyclotomic(g);
    std::vector<std::int64_t> acc(static_cast<std::size_t>(m), 0);
    acc[0] = m; // the leading 1, scaled by m
    for (std::size_t i = 0; i < data.branches.size(); ++i) {
        const std::int64_t mi = data.orbit_size(i);
        if (beta % mi != 0) continue;
        const auto& br = data.branches[i];
        const std::int64_t e = mod(br.n * (beta / mi), br.l);
        require(e != 0, ErrorKind::DegenerateTerm,
                "branch " + std::to_string(i) + ": rotation of f^" + std::to_string(beta) + " is trivial");
        const auto inv = detail::scaled_inverse_one_minus_root(m, e * mi);
        for (std::int64_t t = 0; t < m; ++t) acc[static_cast<std::size_t>(t)] -= mi * inv[static_cast<std::size_t>(t)];
    }
    return detail::from_scaled_powers(m, acc, m);
}

/// d[a] = (1/m) sum_beta Tr(f^beta) zeta_m^{-a beta}, certified against
/// sum d = g, d[0] = g~ and, with only fixed-point orbits, the mu closed form.
inline EigenSpectrum eigen_dimensions(const OrbitData& data) {
    const std::int64_t g = require_valid(data);
    const std::int64_t m = data.m;
    std::vector<Cyclotomic> traces;
    traces.reserve(static_cast<std::size_t>(m));
    for (std::int64_t beta = 0; beta < m; ++beta) traces.push_back(lefschetz_trace(data, beta).embed(m));

    EigenSpectrum spec{m, std::vector<std::int64_t>(static_cast<std::size_t>(m), 0)};
    for (std::int64_t a = 0; a < m; ++a) {
        Cyclotomic sum = Cyclotomic(0).embed(m);
        for (std::int64_t beta = 0; beta < m; ++beta) sum += traces[static_cast<std::size_t>(beta)].times_root(-a * beta);
        require(sum.is_rational(), ErrorKind::NonIntegralMultiplicity,
                "multiplicity of eigenvalue exp(2 pi i " + std::to_string(a) + "/" + std::to_string(m) + ") is not rational");
        const Rational da = sum.to_rational() / Rational(m);
        require(da.is_integer(), ErrorKind::NonIntegralMultiplicity,
                "multiplicity of eigenvalue exp(2 pi i " + std::to_string(a) + "/" + std::to_string(m) + ") is " + da.str());
        require(da.sign() >= 0, ErrorKind::NonIntegralMultiplicity,
                "multiplicity of eigenvalue exp(2 pi i " + std::to_string(a) + "/" + std::to_string(m) + ") is negative");
        spec.d[static_cast<std::size_t>(a)] = da.to_int64();
    }

    require(spec.genus() == g, ErrorKind::SumRuleViolation,
            "sum of eigenvalue multiplicities " + std::to_string(spec.genus()) + " differs from the genus " + std::to_string(g));
    require(spec.d[0] == data.quotient_genus, ErrorKind::SumRuleViolation,
            "invariant differentials d[0] = " + std::to_string(spec.d[0]) + " differ from the quotient genus");
    if (data.all_fixed_points()) {
        for (std::int64_t a = 1; a < m; ++a) {
            Rational closed(g - 1);
            for (const auto& br : data.branches) closed += mu_value(m, br.n, a);
            require(closed == Rational(m * spec.d[static_cast<std::size_t>(a)]), ErrorKind::SumRuleViolation,
                    "trace-sum multiplicity disagrees with the mu closed form at a = " + std::to_string(a));
        }
    }
    return spec;
}

/// Sum of sign Im over the eigenvalues: d[a] for 0 < a < m/2 minus d[a] for a > m/2.
inline std::int64_t wall_signature(const EigenSpectrum& spec) {
    std::int64_t s = 0;
    for (std::int64_t a = 1; a < spec.m; ++a) {
        if (2 * a < spec.m) s += spec.d[static_cast<std::size_t>(a)];
        else if (2 * a > spec.m) s -= spec.d[static_cast<std::size_t>(a)];
    }
    return s;
}

} // namespace torusfibre
