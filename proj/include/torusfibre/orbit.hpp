#pragma once

// Branch data of a finite-order surface diffeomorphism, its total genus and
// the Seifert invariants of the mapping torus.

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "torusfibre/error.hpp"
#include "torusfibre/rational.hpp"

namespace torusfibre {

/// One exceptional orbit: isotropy order l (orbit size m/l) and rotation
/// number n of f^{m/l} at a point of the orbit.
struct Branch {
    std::int64_t l = 0;
    std::int64_t n = 0;
    friend bool operator==(const Branch&, const Branch&) = default;
};

struct OrbitData {
    std::int64_t m = 0;              // order of f
    std::int64_t quotient_genus = 0; // genus of Sigma / <f>
    std::vector<Branch> branches;

    std::int64_t orbit_size(std::size_t i) const { return m / branches[i].l; }
    /// k_i with k_i n_i = 1 mod l_i, 0 < k_i < l_i.
    std::int64_t inverse_rotation(std::size_t i) const { return inverse_mod(branches[i].n, branches[i].l); }
    bool is_fixed_point(std::size_t i) const { return branches[i].l == m; }
    bool all_fixed_points() const {
        for (std::size_t i = 0; i < branches.size(); ++i)
            if (!is_fixed_point(i)) return false;
        return true;
    }
    std::size_t fixed_point_count() const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < branches.size(); ++i) c += is_fixed_point(i) ? 1 : 0;
        return c;
    }
    friend bool operator==(const OrbitData&, const OrbitData&) = default;
};

struct SeifertData {
    BigInt b;
    std::int64_t base_genus = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs; // (alpha_i, beta_i)

    /// e = -(b + sum beta_i / alpha_i).
    Rational euler_number() const {
        Rational s(b, BigInt(1));
        for (const auto& [a, be] : pairs) s += Rational(be, a);
        return -s;
    }
};

enum class OrbitCheck {
    Order,          // m >= 2, quotient genus >= 0, 2 <= l_i
    Divisibility,   // l_i | m
    Coprimality,    // 0 < n_i < l_i, gcd(n_i, l_i) = 1
    Genus,          // Riemann-Hurwitz genus integral and >= 2
    Realizability,  // sum (m/l_i) k_i = 0 mod m
    Generation,     // quotient genus 0: gcd(m, m/l_1, ..., m/l_n) = 1
};

inline std::string_view to_string(OrbitCheck c) {
    switch (c) {
    case OrbitCheck::Order: return "order";
    case OrbitCheck::Divisibility: return "divisibility";
    case OrbitCheck::Coprimality: return "coprimality";
    case OrbitCheck::Genus: return "genus";
    case OrbitCheck::Realizability: return "realizability";
    case OrbitCheck::Generation: return "generation";
    }
    return "unknown";
}

struct CheckResult {
    OrbitCheck check;
    bool passed = true;
    std::optional<std::size_t> index; // offending branch, if any
    std::string message;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    std::optional<std::int64_t> genus;

    bool valid() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
    const CheckResult* first_failure() const {
        for (const auto& c : checks)
            if (!c.passed) return &c;
        return nullptr;
    }
};

namespace detail {

/// m(2 - 2 g~) - sum (m/l_i)(l_i - 1) = 2 - 2g; returns 2 - 2g.
inline std::int64_t euler_characteristic(const OrbitData& d) {
    std::int64_t chi = d.m * (2 - 2 * d.quotient_genus);
    for (const auto& br : d.branches) chi -= (d.m / br.l) * (br.l - 1);
    return chi;
}

inline void check_structure(const OrbitData& d) {
    require(d.m >= 2, ErrorKind::InvalidBranch, "order m must be at least 2");
    require(d.quotient_genus >= 0, ErrorKind::InvalidBranch, "quotient genus must be non-negative");
    for (std::size_t i = 0; i < d.branches.size(); ++i) {
        const auto& br = d.branches[i];
        const std::string where = "branch " + std::to_string(i);
        require(br.l >= 2, ErrorKind::InvalidBranch, where + ": isotropy order l must be at least 2");
        require(d.m % br.l == 0, ErrorKind::InvalidBranch, where + ": l = " + std::to_string(br.l) + " does not divide m = " + std::to_string(d.m));
        require(br.n > 0 && br.n < br.l && std::gcd(br.n, br.l) == 1, ErrorKind::InvalidBranch,
                where + ": rotation number n = " + std::to_string(br.n) + " must satisfy 0 < n < l and gcd(n, l) = 1");
    }
}

} // namespace detail

/// Genus g of Sigma from 2 - 2g = m(2 - 2 g~) - sum (m/l_i)(l_i - 1).
inline std::int64_t total_genus(const OrbitData& d) {
    detail::check_structure(d);
    const std::int64_t chi = detail::euler_characteristic(d);
    require(chi % 2 == 0, ErrorKind::NonIntegralGenus,
            "Riemann-Hurwitz gives non-integral genus (2 - 2g = " + std::to_string(chi) + ")");
    const std::int64_t g = (2 - chi) / 2;
    require(g >= 2, ErrorKind::GenusTooSmall, "total genus " + std::to_string(g) + " is below 2");
    return g;
}

inline ValidationReport validate_orbit(const OrbitData& d) {
    ValidationReport rep;
    auto add = [&](OrbitCheck c, bool ok, std::optional<std::size_t> idx, std::string msg) {
        rep.checks.push_back({c, ok, idx, ok ? std::string() : std::move(msg)});
    };

    add(OrbitCheck::Order, d.m >= 2 && d.quotient_genus >= 0, std::nullopt,
        "order m must be >= 2 and quotient genus >= 0");
    bool structural = rep.checks.back().passed;

    bool divisible = true;
    std::optional<std::size_t> bad;
    for (std::size_t i = 0; i < d.branches.size() && divisible; ++i) {
        const auto& br = d.branches[i];
        if (br.l < 2 || d.m < 1 || d.m % br.l != 0) {
            divisible = false;
            bad = i;
        }
    }
    add(OrbitCheck::Divisibility, divisible, bad,
        bad ? "branch " + std::to_string(*bad) + ": l = " + std::to_string(d.branches[*bad].l) +
                  " is not a divisor >= 2 of m = " + std::to_string(d.m)
            : std::string());
    structural = structural && divisible;

    bool coprime = true;
    bad.reset();
    for (std::size_t i = 0; i < d.branches.size() && coprime; ++i) {
        const auto& br = d.branches[i];
        if (!(br.n > 0 && br.n < br.l && std::gcd(br.n, br.l) == 1)) {
            coprime = false;
            bad = i;
        }
    }
    add(OrbitCheck::Coprimality, coprime, bad,
        bad ? "branch " + std::to_string(*bad) + ": rotation number n = " + std::to_string(d.branches[*bad].n) +
                  " is not a unit in (0, l = " + std::to_string(d.branches[*bad].l) + ")"
            : std::string());
    structural = structural && coprime;

    if (!structural) return rep;

    try {
        rep.genus = total_genus(d);
        add(OrbitCheck::Genus, true, std::nullopt, {});
    } catch (const Error& e) {
        add(OrbitCheck::Genus, false, std::nullopt, e.what());
    }

    std::int64_t sum = 0;
    for (std::size_t i = 0; i < d.branches.size(); ++i) sum += d.orbit_size(i) * d.inverse_rotation(i);
    add(OrbitCheck::Realizability, mod(sum, d.m) == 0, std::nullopt,
        "sum of (m/l_i) k_i is " + std::to_string(mod(sum, d.m)) + " mod m, rotation data is not realizable (b not integral)");

    if (d.quotient_genus == 0) {
        std::int64_t g = d.m;
        for (std::size_t i = 0; i < d.branches.size(); ++i) g = std::gcd(g, d.orbit_size(i));
        add(OrbitCheck::Generation, g == 1, std::nullopt,
            "branch monodromies generate a proper subgroup of index " + std::to_string(g) + " (the cover would be disconnected)");
    } else {
        add(OrbitCheck::Generation, true, std::nullopt, {});
    }
    return rep;
}

/// Throws InvalidBranch (or the genus errors) naming the first failing check.
inline std::int64_t require_valid(const OrbitData& d) {
    const auto rep = validate_orbit(d);
    if (const auto* f = rep.first_failure()) {
        if (f->check == OrbitCheck::Genus) total_genus(d); // rethrows the precise genus error
        fail(ErrorKind::InvalidBranch, std::string(to_string(f->check)) + " check failed: " + f->message);
    }
    return *rep.genus;
}

/// Seifert invariants (b, g~, (l_i, k_i)) with b = -sum k_i / l_i, so that e = 0.
inline SeifertData seifert_invariants(const OrbitData& d) {
    detail::check_structure(d);
    SeifertData s;
    s.base_genus = d.quotient_genus;
    Rational sum(0);
    for (std::size_t i = 0; i < d.branches.size(); ++i) {
        const std::int64_t k = d.inverse_rotation(i);
        s.pairs.emplace_back(d.branches[i].l, k);
        sum += Rational(k, d.branches[i].l);
    }
    require(sum.is_integer(), ErrorKind::NonIntegralB,
            "sum of k_i / l_i = " + sum.str() + " is not an integer; rotation data is not realizable");
    s.b = -sum.numerator();
    require(s.euler_number().is_zero(), ErrorKind::SumRuleViolation, "Seifert Euler number is not zero");
    return s;
}

} // namespace torusfibre
