#pragma once

// Z^(k) = exp(2 pi i B k/(k+h)) sum_c exp(2 pi i k q_c) P_c(k), assembled from
// stratum contributions and evaluated exactly at integer levels.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "torusfibre/cyclotomic.hpp"
#include "torusfibre/error.hpp"
#include "torusfibre/framing.hpp"
#include "torusfibre/hpfloat.hpp"
#include "torusfibre/localization.hpp"

namespace torusfibre {

struct InvariantModel {
    FramingPhase framing;
    std::vector<ContributionPolynomial> terms; // distinct phases, resolved ones first in increasing order

    bool has_symbolic_phase() const {
        return std::any_of(terms.begin(), terms.end(), [](const ContributionPolynomial& t) { return t.phase.is_symbolic(); });
    }
};

namespace detail {

inline bool phase_less(const CsPhase& a, const CsPhase& b) {
    if (a.is_symbolic() != b.is_symbolic()) return !a.is_symbolic();
    if (!a.is_symbolic()) return *a.value < *b.value;
    return a.symbol < b.symbol;
}

} // namespace detail

/// Merges terms with equal phases (coefficients added) and orders them canonically.
inline InvariantModel assemble_invariant(const FramingPhase& framing, std::vector<ContributionPolynomial> terms) {
    std::stable_sort(terms.begin(), terms.end(),
                     [](const ContributionPolynomial& a, const ContributionPolynomial& b) { return detail::phase_less(a.phase, b.phase); });
    InvariantModel model{framing, {}};
    for (auto& t : terms) {
        require(t.degree() <= t.d_c, ErrorKind::SumRuleViolation,
                "contribution of degree " + std::to_string(t.degree()) + " exceeds its stratum dimension " + std::to_string(t.d_c));
        if (!model.terms.empty() && model.terms.back().phase == t.phase) {
            auto& into = model.terms.back();
            if (into.coeffs.size() < t.coeffs.size()) into.coeffs.resize(t.coeffs.size());
            for (std::size_t j = 0; j < t.coeffs.size(); ++j) into.coeffs[j] += t.coeffs[j];
            into.d_c = std::max(into.d_c, t.d_c);
            into.strata.insert(into.strata.end(), t.strata.begin(), t.strata.end());
        } else {
            model.terms.push_back(std::move(t));
        }
    }
    return model;
}

/// Assembly from the orbit data: framing from the spectrum plus every stratum contribution.
inline InvariantModel assemble_invariant(const OrbitData& data, const GroupData& group, const ContributionSet& contributions) {
    const auto spec = eigen_dimensions(data);
    return assemble_invariant(framing_phase(spec, group), contributions.terms);
}

struct InvariantValue {
    Cyclotomic exact;
    hp::Complex numeric;
};

/// Exact value at level k in Q(zeta_M), M the lcm of all phase denominators and conductors.
inline Cyclotomic evaluate_exact(const InvariantModel& model, std::int64_t k) {
    require(k >= 1, ErrorKind::Parse, "level must be positive");
    require(!model.has_symbolic_phase(), ErrorKind::SymbolicPhaseInNumericContext,
            "the model still contains symbolic Chern-Simons phases; supply their values to evaluate");
    Cyclotomic sum;
    for (const auto& t : model.terms) sum += Cyclotomic::from_phase(t.phase.value->scaled(k)) * t.evaluate(k);
    return Cyclotomic::from_phase(framing_evaluate(model.framing, k)) * sum;
}

/// Floating value at level k, term by term, so that the field of all phases
/// together (whose conductor is the lcm of every denominator) is never formed.
inline hp::Complex evaluate_numeric(const InvariantModel& model, std::int64_t k, unsigned precision_bits = hp::default_mantissa_bits) {
    require(k >= 1, ErrorKind::Parse, "level must be positive");
    require(!model.has_symbolic_phase(), ErrorKind::SymbolicPhaseInNumericContext,
            "the model still contains symbolic Chern-Simons phases; supply their values to evaluate");
    hp::PrecisionScope scope(precision_bits);
    hp::Complex sum;
    for (const auto& t : model.terms) sum += hp::cis2pi(t.phase.value->scaled(k).value()) * hp::evaluate(t.evaluate(k));
    return hp::cis2pi(framing_evaluate(model.framing, k).value()) * sum;
}

inline InvariantValue evaluate_invariant(const InvariantModel& model, std::int64_t k, unsigned precision_bits = hp::default_mantissa_bits) {
    return InvariantValue{evaluate_exact(model, k), evaluate_numeric(model, k, precision_bits)};
}

} // namespace torusfibre
