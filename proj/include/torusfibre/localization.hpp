#pragma once

// Stratum contributions
//   P_c(k) = (1/|Z_delta|) prod_{i=1}^{m-1} (1 - zeta_m^i)^{-r_i}
//            < exp(k m omega) lambda_c^{-1} Td(T_c), [M] >
// evaluated exactly, over a user-supplied intersection oracle when d_c > 0.
//
// The normal bundle splits into eigenbundles N_q (f acts by zeta_m^q), with
//   N_q = T_c^* + (1/m) sum_s sum_nu E_s^nu (mu^{q-nu}(n_s) - mu^{-nu}(n_s))
// in rational K-theory. With w = e^y - 1 over the Chern roots y of N_q,
//   1/(1 - zeta^q e^y) = (1 - zeta^q)^{-1} sum_i (zeta^q/(1 - zeta^q))^i w^i,
// so lambda_c^{-1} = prod_q sum_i (zeta^q/(1 - zeta^q))^i h_i(w^{(q)}) once the
// scalar prefactor is split off. The h_i come from the power sums
//   P_n(w) = sum_t binom(n,t) (-1)^{n-t} psi^t ch(N_q)
// by Newton's identities, which makes the expansion finite and exact.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "torusfibre/cohomology.hpp"
#include "torusfibre/cyclotomic.hpp"
#include "torusfibre/error.hpp"
#include "torusfibre/framing.hpp"
#include "torusfibre/orbit.hpp"
#include "torusfibre/spectrum.hpp"
#include "torusfibre/strata.hpp"

namespace torusfibre {

struct CohomologyOracle {
    std::int64_t d_c = 0;
    std::shared_ptr<const GradedRing> ring = std::make_shared<GradedRing>(std::vector<Generator>{}, 0);
    std::map<Monomial, Rational> pairing;                                  // top-degree evaluation
    std::optional<ChernData> tangent;                                    // T_c
    std::map<std::pair<std::size_t, std::int64_t>, ChernData> fixed_point; // E_{p_s}^nu keyed by (s, nu)
    std::optional<Graded<Rational>> omega;

    /// The oracle of a point: <1, [pt]> = 1.
    static CohomologyOracle point() {
        CohomologyOracle o;
        o.pairing[o.ring->unit()] = Rational(1);
        return o;
    }

    /// Pairing with the fundamental class; only top-degree terms contribute.
    template <class C>
    C evaluate(const Graded<C>& x) const {
        C acc(0);
        for (const auto& [mono, c] : x.terms()) {
            if (ring->degree(mono) != 2 * d_c) continue;
            auto it = pairing.find(mono);
            if (it != pairing.end()) acc += c * C(it->second);
        }
        return acc;
    }

    /// Degree contract: generators, Chern classes, omega and pairing all fit in dimension d_c.
    void validate() const {
        require(ring->top_degree() == 2 * d_c, ErrorKind::OracleDegreeOverflow, "oracle ring is not truncated at degree 2 d_c");
        for (const auto& [mono, v] : pairing)
            require(v.is_zero() || ring->degree(mono) == 2 * d_c, ErrorKind::OracleDegreeOverflow,
                    "pairing given on monomial " + ring->str(mono) + " of degree " + std::to_string(ring->degree(mono)) +
                        ", expected degree " + std::to_string(2 * d_c));
        if (tangent) check_chern_degrees(*tangent, "T_c");
        for (const auto& [key, E] : fixed_point)
            check_chern_degrees(E, "E[" + std::to_string(key.first) + "][" + std::to_string(key.second) + "]");
        if (omega)
            for (const auto& [mono, c] : omega->terms())
                require(ring->degree(mono) == 2, ErrorKind::OracleDegreeOverflow, "omega must be homogeneous of degree 2");
    }
};

/// A Chern-Simons phase: a rational value or a named symbol.
struct CsPhase {
    std::optional<PhaseQ> value;
    std::string symbol;

    static CsPhase resolved(const PhaseQ& q) { return CsPhase{q, {}}; }
    static CsPhase symbolic(std::string name) { return CsPhase{std::nullopt, std::move(name)}; }
    bool is_symbolic() const { return !value.has_value(); }
    std::string str() const { return value ? value->str() : symbol; }

    friend bool operator==(const CsPhase&, const CsPhase&) = default;
};

/// Default phase of a stratum: 0 for the trivial connection, otherwise the symbol q_<index>.
inline CsPhase default_phase(const StratumDescriptor& s) {
    return s.is_trivial() ? CsPhase::resolved(PhaseQ()) : CsPhase::symbolic("q_" + std::to_string(s.index));
}

struct ContributionPolynomial {
    std::int64_t d_c = 0;
    std::vector<Cyclotomic> coeffs; // coeffs[j] multiplies k^j, j <= d_c
    CsPhase phase;
    std::vector<std::size_t> strata; // contributing stratum indices

    /// Largest j with a nonzero coefficient, or -1 for the zero polynomial.
    std::int64_t degree() const {
        for (std::size_t j = coeffs.size(); j-- > 0;)
            if (!coeffs[j].is_zero()) return static_cast<std::int64_t>(j);
        return -1;
    }
    Cyclotomic evaluate(std::int64_t k) const {
        Cyclotomic acc, kp(1);
        for (const auto& c : coeffs) {
            acc += c * kp;
            kp = kp * Cyclotomic(k);
        }
        return acc;
    }
};

/// prod_{i=1}^{m-1} (1 - zeta_m^i)^{-r_i}; negative virtual ranks give positive powers.
inline Cyclotomic eigen_prefactor(const std::vector<std::int64_t>& r) {
    const auto m = static_cast<std::int64_t>(r.size());
    Cyclotomic acc = Cyclotomic(1).embed(m);
    for (std::int64_t i = 1; i < m; ++i) {
        const std::int64_t e = r[static_cast<std::size_t>(i)];
        if (e == 0) continue;
        const Cyclotomic base = e > 0 ? inverse_one_minus_root(m, i) : 1 - Cyclotomic::root_of_unity(m, i);
        acc *= base.pow(e > 0 ? e : -e);
    }
    return acc;
}

/// (1/|Z_delta|) prod_{i=1}^{m-1} (1 - zeta_m^i)^{-r_i} for a zero-dimensional stratum.
inline Cyclotomic point_contribution(const std::vector<std::int64_t>& r, std::int64_t z_delta_order) {
    require(!r.empty() && r[0] == 0, ErrorKind::NotZeroDimensional,
            "point contribution needs r_0 = 0, got r_0 = " + (r.empty() ? std::string("?") : std::to_string(r[0])));
    require(z_delta_order >= 1, ErrorKind::Parse, "|Z_delta| must be positive");
    return eigen_prefactor(r).scaled(Rational(1, z_delta_order));
}

namespace detail {

inline ChernData resolve_bundle(const CohomologyOracle& oracle, std::size_t s, std::int64_t nu, std::int64_t expected_rank) {
    auto it = oracle.fixed_point.find({s, nu});
    if (it == oracle.fixed_point.end()) {
        require(expected_rank == 0 || oracle.d_c == 0, ErrorKind::MissingChernData,
                "oracle lacks Chern data for E[" + std::to_string(s) + "][" + std::to_string(nu) + "]");
        return ChernData{expected_rank, {}};
    }
    require(it->second.rank == expected_rank, ErrorKind::RankMismatch,
            "E[" + std::to_string(s) + "][" + std::to_string(nu) + "] has rank " + std::to_string(it->second.rank) +
                ", the stratum predicts " + std::to_string(expected_rank));
    return it->second;
}

} // namespace detail

/// ch(N_q) for q = 1 .. m-1 (index 0 unused), with rank N_q = r_q certified.
inline std::vector<Graded<Rational>> normal_eigenbundle_characters(const OrbitData& data, const StratumDescriptor& stratum,
                                                                   const GroupData& group, const CohomologyOracle& oracle) {
    require(stratum.ranks.has_value() && stratum.ranks->geometric(), ErrorKind::UnsupportedOrbitStructure,
            "stratum " + std::to_string(stratum.index) + " has no geometric eigenbundle ranks");
    const auto& ranks = *stratum.ranks;
    const std::int64_t m = data.m;
    const auto& ring = oracle.ring;
    if (oracle.d_c > 0) require(oracle.tangent.has_value(), ErrorKind::MissingChernData, "oracle lacks Chern data for T_c");
    const ChernData tangent = oracle.tangent.value_or(ChernData{oracle.d_c, {}});
    require(tangent.rank == oracle.d_c, ErrorKind::RankMismatch,
            "T_c has rank " + std::to_string(tangent.rank) + ", expected d_c = " + std::to_string(oracle.d_c));
    const Graded<Rational> ch_cotangent = chern_character(tangent, ring).psi(-1);

    std::vector<std::vector<Graded<Rational>>> ch_e(data.branches.size());
    for (std::size_t s = 0; s < data.branches.size(); ++s)
        for (std::int64_t nu = 0; nu < m; ++nu) {
            const std::int64_t rank = ranks.roots[s][static_cast<std::size_t>(nu)] + (nu == 0 ? group.rank() : 0);
            ch_e[s].push_back(chern_character(detail::resolve_bundle(oracle, s, nu, rank), ring));
        }

    std::vector<Graded<Rational>> out(static_cast<std::size_t>(m), Graded<Rational>(ring));
    for (std::int64_t q = 1; q < m; ++q) {
        Graded<Rational> ch = ch_cotangent;
        for (std::size_t s = 0; s < data.branches.size(); ++s) {
            const std::int64_t n = data.branches[s].n;
            for (std::int64_t nu = 0; nu < m; ++nu) {
                const Rational w = (mu_value(m, n, q - nu) - mu_value(m, n, -nu)) / Rational(m);
                if (!w.is_zero()) ch += ch_e[s][static_cast<std::size_t>(nu)] * w;
            }
        }
        require(ch.constant() == Rational(ranks.r[static_cast<std::size_t>(q)]), ErrorKind::RankMismatch,
                "normal eigenbundle N_" + std::to_string(q) + " has rank " + ch.constant().str() + ", the stratum predicts " +
                    std::to_string(ranks.r[static_cast<std::size_t>(q)]));
        out[static_cast<std::size_t>(q)] = std::move(ch);
    }
    return out;
}

/// prod_q sum_i (zeta^q/(1-zeta^q))^i h_i(e^y - 1): lambda_c^{-1} with the scalar prefactor removed.
inline Graded<Cyclotomic> lambda_inverse_expansion(const std::vector<Graded<Rational>>& ch_normal, std::int64_t m,
                                                   const std::shared_ptr<const GradedRing>& ring) {
    const int D = ring->top_degree() / 2;
    Graded<Cyclotomic> total(ring, Cyclotomic(1));
    for (std::int64_t q = 1; q < m; ++q) {
        const auto& ch = ch_normal[static_cast<std::size_t>(q)];
        if (D == 0) break;
        std::vector<Graded<Rational>> psi;
        for (int t = 0; t <= D; ++t) psi.push_back(ch.psi(t));
        std::vector<Graded<Rational>> P(static_cast<std::size_t>(D + 1), Graded<Rational>(ring));
        for (int n = 1; n <= D; ++n) {
            Rational binom(1);
            for (int t = 0; t <= n; ++t) {
                if (t > 0) binom = binom * Rational(n - t + 1) / Rational(t);
                P[static_cast<std::size_t>(n)] += psi[static_cast<std::size_t>(t)] * (((n - t) % 2 == 0) ? binom : -binom);
            }
        }
        std::vector<Graded<Rational>> h(static_cast<std::size_t>(D + 1), Graded<Rational>(ring));
        h[0] = Graded<Rational>(ring, Rational(1));
        for (int i = 1; i <= D; ++i) {
            Graded<Rational> acc(ring);
            for (int j = 1; j <= i; ++j) acc += P[static_cast<std::size_t>(j)] * h[static_cast<std::size_t>(i - j)];
            h[static_cast<std::size_t>(i)] = acc * Rational(1, i);
        }
        const Cyclotomic zq = Cyclotomic::root_of_unity(m, q);
        const Cyclotomic c = zq * inverse_one_minus_root(m, q);
        Graded<Cyclotomic> factor(ring);
        Cyclotomic cp = Cyclotomic(1).embed(m);
        for (int i = 0; i <= D; ++i) {
            factor += h[static_cast<std::size_t>(i)].cast<Cyclotomic>() * cp;
            cp *= c;
        }
        total = total * factor;
    }
    return total;
}

/// P_c as an exact polynomial in k of degree <= d_c.
inline ContributionPolynomial smooth_contribution(const OrbitData& data, const StratumDescriptor& stratum, const GroupData& group,
                                                  const CohomologyOracle& oracle, const CsPhase& phase) {
    require(stratum.ranks.has_value() && stratum.ranks->geometric(), ErrorKind::UnsupportedOrbitStructure,
            "stratum " + std::to_string(stratum.index) + " has no geometric eigenbundle ranks");
    const std::int64_t d_c = *stratum.d_c();
    require(oracle.d_c == d_c, ErrorKind::RankMismatch,
            "oracle dimension " + std::to_string(oracle.d_c) + " differs from the stratum dimension d_c = " + std::to_string(d_c));
    oracle.validate();
    if (d_c > 0) require(oracle.omega.has_value(), ErrorKind::MissingChernData, "oracle lacks the class omega");
    const std::int64_t m = data.m;

    const auto ch_normal = normal_eigenbundle_characters(data, stratum, group, oracle);
    const Graded<Cyclotomic> lambda_inv = lambda_inverse_expansion(ch_normal, m, oracle.ring);
    const ChernData tangent = oracle.tangent.value_or(ChernData{d_c, {}});
    const Graded<Cyclotomic> integrand = lambda_inv * todd_class(tangent, oracle.ring).cast<Cyclotomic>();
    const Cyclotomic scale = eigen_prefactor(stratum.ranks->r).scaled(Rational(1, stratum.z_delta_order));

    ContributionPolynomial out;
    out.d_c = d_c;
    out.phase = phase;
    out.strata = {stratum.index};
    const Graded<Rational> omega = oracle.omega.value_or(Graded<Rational>(oracle.ring));
    Graded<Rational> omega_power(oracle.ring, Rational(1));
    Rational weight(1); // m^j / j!
    for (std::int64_t j = 0; j <= d_c; ++j) {
        if (j > 0) {
            omega_power = omega_power * omega;
            weight = weight * Rational(m) / Rational(j);
        }
        out.coeffs.push_back(oracle.evaluate(omega_power.cast<Cyclotomic>() * integrand) * scale.scaled(weight));
    }
    return out;
}

/// Contributions of every geometric stratum; strata with d_c > 0 need an oracle.
struct ContributionSet {
    std::vector<ContributionPolynomial> terms;
    std::vector<std::size_t> non_geometric; // virtual-rank strata, excluded
    std::vector<std::size_t> missing_oracle;
};

/// Applies f to 0 .. count-1 on a small worker pool; results keep index order and
/// the exception of the lowest failing index is rethrown.
template <class R, class F>
std::vector<R> parallel_map(std::size_t count, F f) {
    std::vector<std::optional<R>> out(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                out[i].emplace(f(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    std::vector<R> result;
    for (std::size_t i = 0; i < count; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        result.push_back(std::move(*out[i]));
    }
    return result;
}

inline ContributionSet compute_contributions(const OrbitData& data, const GroupData& group, const std::vector<StratumDescriptor>& strata,
                                             const std::map<std::size_t, CohomologyOracle>& oracles,
                                             const std::map<std::size_t, PhaseQ>& phases, bool require_all) {
    ContributionSet out;
    struct Job {
        const StratumDescriptor* stratum;
        CohomologyOracle oracle;
        CsPhase phase;
    };
    std::vector<Job> jobs;
    for (const auto& s : strata) {
        require(s.ranks.has_value(), ErrorKind::UnsupportedOrbitStructure,
                "contributions need every exceptional orbit to be a fixed point of f");
        if (!s.ranks->geometric()) {
            out.non_geometric.push_back(s.index);
            continue;
        }
        CsPhase phase = default_phase(s);
        if (auto it = phases.find(s.index); it != phases.end()) phase = CsPhase::resolved(it->second);
        auto it = oracles.find(s.index);
        if (it == oracles.end() && *s.d_c() > 0) {
            require(!require_all, ErrorKind::MissingChernData,
                    "stratum " + std::to_string(s.index) + " has d_c = " + std::to_string(*s.d_c()) + " and no oracle");
            out.missing_oracle.push_back(s.index);
            continue;
        }
        jobs.push_back({&s, it == oracles.end() ? CohomologyOracle::point() : it->second, std::move(phase)});
    }
    out.terms = parallel_map<ContributionPolynomial>(
        jobs.size(), [&](std::size_t i) { return smooth_contribution(data, *jobs[i].stratum, group, jobs[i].oracle, jobs[i].phase); });
    return out;
}

} // namespace torusfibre
