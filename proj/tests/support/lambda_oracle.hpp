#pragma once

// Splitting-principle oracle for the traced lambda inverse: over the Chern
// roots y of N_q, prod (1 - zeta^q)/(1 - zeta^q e^y) = exp(sum_n a_n n! ch_n(N_q))
// with sum_n a_n y^n = log(1 - zeta^q) - log(1 - zeta^q e^y).

#include <vector>

#include "torusfibre/cohomology.hpp"
#include "torusfibre/spectrum.hpp"

namespace tforacle {

using namespace torusfibre;

inline std::vector<Cyclotomic> log_series(std::int64_t m, std::int64_t q, int count) {
    const Cyclotomic z = Cyclotomic::root_of_unity(m, q);
    std::vector<Rational> inv_fact{Rational(1)};
    for (int j = 1; j <= count; ++j) inv_fact.push_back(inv_fact.back() / Rational(j));
    // f'(y) = z e^y / (1 - z e^y) by power series division
    std::vector<Cyclotomic> num, den, quot;
    for (int j = 0; j < count; ++j) {
        num.push_back(z.scaled(inv_fact[static_cast<std::size_t>(j)]));
        den.push_back(j == 0 ? 1 - z : -z.scaled(inv_fact[static_cast<std::size_t>(j)]));
    }
    const Cyclotomic den0_inv = den[0].inverse();
    for (int j = 0; j < count; ++j) {
        Cyclotomic s = num[static_cast<std::size_t>(j)];
        for (int i = 1; i <= j; ++i) s -= den[static_cast<std::size_t>(i)] * quot[static_cast<std::size_t>(j - i)];
        quot.push_back(s * den0_inv);
    }
    std::vector<Cyclotomic> a{Cyclotomic(0)};
    for (int n = 1; n <= count; ++n) a.push_back(quot[static_cast<std::size_t>(n - 1)].scaled(Rational(1, n)));
    return a;
}

inline Graded<Cyclotomic> lambda_inverse_by_splitting(const std::vector<Graded<Rational>>& ch_normal, std::int64_t m,
                                                      const std::shared_ptr<const GradedRing>& ring) {
    const int D = ring->top_degree() / 2;
    Graded<Cyclotomic> log_total(ring);
    for (std::int64_t q = 1; q < m; ++q) {
        const auto a = log_series(m, q, D);
        Rational fact(1);
        for (int n = 1; n <= D; ++n) {
            fact *= Rational(n);
            log_total += ch_normal[static_cast<std::size_t>(q)].degree_part(2 * n).cast<Cyclotomic>() *
                         a[static_cast<std::size_t>(n)].scaled(fact);
        }
    }
    return exp_nilpotent(log_total);
}

} // namespace tforacle
