#pragma once

// Independent oracles for the stratification: class enumeration over an
// angle grid, tuple enumeration, and Burnside orbit counting.

#include <set>
#include <vector>

#include "torusfibre/strata.hpp"

namespace tforacle {

using namespace torusfibre;

/// Every sorted N-multiset of angles a/(N l) whose l-th power is zeta_N^z.
inline std::vector<ConjClassSU> classes_by_grid(std::int64_t N, std::int64_t l, std::int64_t z) {
    const std::int64_t grid = N * l;
    std::set<std::vector<Rational>> seen;
    std::vector<std::int64_t> idx(static_cast<std::size_t>(N), 0);
    for (;;) {
        std::vector<Rational> a;
        Rational sum(0);
        for (auto i : idx) {
            a.emplace_back(i, grid);
            sum += a.back();
        }
        if (sum.is_integer()) {
            const ConjClassSU c(a);
            const auto e = c.power(l).central_exponent();
            if (e && mod(*e, N) == mod(z, N)) seen.insert(c.angles());
        }
        std::size_t p = idx.size();
        while (p > 0 && idx[p - 1] + 1 == grid) idx[--p] = 0;
        if (p == 0) break;
        ++idx[p - 1];
    }
    std::vector<ConjClassSU> out;
    for (const auto& a : seen) out.emplace_back(a);
    return out;
}

inline std::vector<StratumTuple> all_tuples(const OrbitData& data, std::int64_t N) {
    std::vector<StratumTuple> out;
    for (std::int64_t z = 0; z < N; ++z) {
        std::vector<std::vector<ConjClassSU>> ch;
        for (const auto& b : data.branches) ch.push_back(classes_by_grid(N, b.l, z));
        std::vector<StratumTuple> partial{{z, {}}};
        for (const auto& options : ch) {
            std::vector<StratumTuple> next;
            for (const auto& t : partial)
                for (const auto& c : options) {
                    auto u = t;
                    u.classes.push_back(c);
                    next.push_back(std::move(u));
                }
            partial = std::move(next);
        }
        out.insert(out.end(), partial.begin(), partial.end());
    }
    return out;
}

/// (1/|Z|) sum_{z'} |Fix(z')|.
inline std::size_t burnside_count(const OrbitData& data, std::int64_t N) {
    const auto tuples = all_tuples(data, N);
    std::size_t fixed = 0;
    for (std::int64_t zp = 0; zp < N; ++zp)
        for (const auto& t : tuples)
            if (act(data, N, zp, t) == t) ++fixed;
    return fixed / static_cast<std::size_t>(N);
}

} // namespace tforacle
