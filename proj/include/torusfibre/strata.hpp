#pragma once

// Fixed-point stratification of the SU(N) moduli space under f.
//
// A stratum is a Z-orbit of tuples (z, c_1, ..., c_n) with z in Z = Z_N and
// c_i^{l_i} = zeta_N^z; z' in Z acts by z -> z + m z' and c_i -> zeta_N^{z' m_i} c_i.
// Classes are sorted angle multisets {theta_1 <= ... <= theta_N} in [0,1)
// with sum theta = 0 mod 1.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "torusfibre/error.hpp"
#include "torusfibre/framing.hpp"
#include "torusfibre/orbit.hpp"
#include "torusfibre/rational.hpp"
#include "torusfibre/spectrum.hpp"

namespace torusfibre {

class ConjClassSU {
public:
    ConjClassSU() = default;
    /// Reduces every angle mod 1 and sorts; the sum must be integral.
    explicit ConjClassSU(std::vector<Rational> angles) : angles_(std::move(angles)) {
        Rational sum(0);
        for (auto& a : angles_) {
            a = a.frac();
            sum += a;
        }
        require(sum.is_integer(), ErrorKind::IncompatibleClass, "eigenvalue angles do not sum to an integer");
        std::sort(angles_.begin(), angles_.end());
    }

    /// zeta_N^z times the identity.
    static ConjClassSU central(std::int64_t N, std::int64_t z) {
        return ConjClassSU(std::vector<Rational>(static_cast<std::size_t>(N), Rational(mod(z, N), N)));
    }

    std::int64_t N() const { return static_cast<std::int64_t>(angles_.size()); }
    const std::vector<Rational>& angles() const { return angles_; }

    ConjClassSU power(std::int64_t k) const {
        std::vector<Rational> a = angles_;
        for (auto& x : a) x *= Rational(k);
        return ConjClassSU(std::move(a));
    }
    /// Multiplication by the central element zeta_N^z.
    ConjClassSU translated(std::int64_t z) const {
        std::vector<Rational> a = angles_;
        const Rational shift(mod(z, N()), N());
        for (auto& x : a) x += shift;
        return ConjClassSU(std::move(a));
    }

    /// Central element exponent z if the class is zeta_N^z, else nullopt.
    std::optional<std::int64_t> central_exponent() const {
        if (angles_.empty()) return 0;
        for (const auto& a : angles_)
            if (a != angles_.front()) return std::nullopt;
        return (angles_.front() * Rational(N())).to_int64();
    }
    bool is_identity() const {
        return std::all_of(angles_.begin(), angles_.end(), [](const Rational& a) { return a.is_zero(); });
    }
    /// Distinct eigenvalues.
    bool is_regular() const { return std::adjacent_find(angles_.begin(), angles_.end()) == angles_.end(); }

    std::vector<std::string> str() const {
        std::vector<std::string> out;
        for (const auto& a : angles_) out.push_back(a.str());
        return out;
    }

    friend bool operator==(const ConjClassSU&, const ConjClassSU&) = default;
    friend bool operator<(const ConjClassSU& a, const ConjClassSU& b) { return a.angles_ < b.angles_; }

private:
    std::vector<Rational> angles_;
};

/// All classes c with c^l = zeta_N^z, sorted.
inline std::vector<ConjClassSU> classes_with_power_central(std::int64_t N, std::int64_t l, std::int64_t z) {
    require(N >= 1 && l >= 1, ErrorKind::Parse, "classes_with_power_central requires N, l >= 1");
    z = mod(z, N);
    // candidate angles (z/N + j)/l, increasing in j
    std::vector<Rational> cand;
    for (std::int64_t j = 0; j < l; ++j) cand.push_back((Rational(z, N) + Rational(j)) / Rational(l));
    std::vector<ConjClassSU> out;
    std::vector<std::size_t> idx(static_cast<std::size_t>(N), 0); // nondecreasing
    for (;;) {
        Rational sum(0);
        for (auto i : idx) sum += cand[i];
        if (sum.is_integer()) {
            std::vector<Rational> a;
            for (auto i : idx) a.push_back(cand[i]);
            out.emplace_back(std::move(a));
        }
        // next nondecreasing index vector
        std::size_t p = idx.size();
        while (p > 0 && idx[p - 1] + 1 == cand.size()) --p;
        if (p == 0) break;
        const std::size_t v = idx[p - 1] + 1;
        for (std::size_t q = p - 1; q < idx.size(); ++q) idx[q] = v;
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// An element (z, c_1, ..., c_n) of the set being stratified.
struct StratumTuple {
    std::int64_t z = 0;
    std::vector<ConjClassSU> classes;

    friend bool operator==(const StratumTuple&, const StratumTuple&) = default;
    friend bool operator<(const StratumTuple& a, const StratumTuple& b) {
        if (a.z != b.z) return a.z < b.z;
        return a.classes < b.classes;
    }
};

/// Action of z' in Z_N on a tuple.
inline StratumTuple act(const OrbitData& data, std::int64_t N, std::int64_t zp, const StratumTuple& t) {
    StratumTuple out{mod(t.z + data.m * zp, N), {}};
    out.classes.reserve(t.classes.size());
    for (std::size_t i = 0; i < t.classes.size(); ++i) out.classes.push_back(t.classes[i].translated(zp * data.orbit_size(i)));
    return out;
}

struct StratumRanks {
    std::vector<std::int64_t> r;                 // r_0 ... r_{m-1}, possibly negative (virtual)
    std::vector<std::vector<std::int64_t>> roots; // roots[s][j] = r_s^j
    std::optional<std::int64_t> d_c;             // r_0 when every r_i >= 0
    bool geometric() const { return d_c.has_value(); }
};

struct StratumDescriptor {
    std::size_t index = 0;
    std::int64_t z = 0;
    std::vector<ConjClassSU> classes;
    std::int64_t z_delta_order = 1;
    std::vector<ConjClassSU> c_delta; // c_i^{-k_i}
    std::optional<StratumRanks> ranks;

    /// The stratum of the trivial connection: z = 0 and every c_i = 1.
    bool is_trivial() const {
        return z == 0 && std::all_of(classes.begin(), classes.end(), [](const ConjClassSU& c) { return c.is_identity(); });
    }
    std::optional<std::int64_t> d_c() const { return ranks ? ranks->d_c : std::nullopt; }
};

/// Order of the stabilizer of t in Z_N.
inline std::int64_t stabilizer_order(const OrbitData& data, std::int64_t N, const StratumTuple& t) {
    std::int64_t count = 0;
    for (std::int64_t zp = 0; zp < N; ++zp)
        if (act(data, N, zp, t) == t) ++count;
    return count;
}

/// r^j = #{ordered pairs a != b : theta_a - theta_b = j/m mod 1}.
inline std::vector<std::int64_t> root_eigendata(const ConjClassSU& c, std::int64_t m) {
    std::vector<std::int64_t> r(static_cast<std::size_t>(m), 0);
    const auto& th = c.angles();
    for (std::size_t a = 0; a < th.size(); ++a)
        for (std::size_t b = 0; b < th.size(); ++b) {
            if (a == b) continue;
            const Rational v = (th[a] - th[b]) * Rational(m);
            require(v.is_integer(), ErrorKind::IncompatibleClass,
                    "root value " + (th[a] - th[b]).frac().str() + " is not a multiple of 1/" + std::to_string(m));
            ++r[static_cast<std::size_t>(mod(v.to_int64(), m))];
        }
    return r;
}

/// r_i = (1/m)(sum_s (mu^i(n_s) rank G + sum_j r_s^j mu^{i-j}(n_s)) + dim G (g - 1)).
inline StratumRanks stratum_ranks(const OrbitData& data, const StratumDescriptor& delta, const GroupData& group) {
    require(!data.branches.empty() && data.all_fixed_points(), ErrorKind::UnsupportedOrbitStructure,
            "stratum ranks need every exceptional orbit to be a fixed point of f (and at least one fixed point)");
    const std::int64_t g = total_genus(data);
    const std::int64_t m = data.m;
    StratumRanks out;
    for (const auto& c : delta.c_delta) out.roots.push_back(root_eigendata(c, m));

    for (std::int64_t i = 0; i < m; ++i) {
        Rational s(group.dim() * (g - 1));
        for (std::size_t b = 0; b < data.branches.size(); ++b) {
            const std::int64_t n = data.branches[b].n;
            s += mu_value(m, n, i) * Rational(group.rank());
            for (std::int64_t j = 0; j < m; ++j) {
                const std::int64_t rj = out.roots[b][static_cast<std::size_t>(j)];
                if (rj != 0) s += Rational(rj) * mu_value(m, n, i - j);
            }
        }
        const Rational ri = s / Rational(m);
        require(ri.is_integer(), ErrorKind::NonIntegralRank,
                "eigenbundle rank r_" + std::to_string(i) + " = " + ri.str() + " of stratum " + std::to_string(delta.index) + " is not an integer");
        out.r.push_back(ri.to_int64());
    }
    std::int64_t total = 0;
    for (auto v : out.r) total += v;
    require(total == (g - 1) * group.dim(), ErrorKind::SumRuleViolation,
            "eigenbundle ranks of stratum " + std::to_string(delta.index) + " sum to " + std::to_string(total) +
                " instead of (g-1) dim G = " + std::to_string((g - 1) * group.dim()));
    if (std::all_of(out.r.begin(), out.r.end(), [](std::int64_t v) { return v >= 0; })) out.d_c = out.r[0];
    return out;
}

struct EnumerationLimits {
    std::size_t max_tuples = 4'000'000;
};

/// One descriptor per Z-orbit, represented by its lexicographically least tuple,
/// in increasing order of representatives. Ranks are attached when every
/// exceptional orbit is a fixed point.
inline std::vector<StratumDescriptor> enumerate_strata(const OrbitData& data, const GroupData& group,
                                                       EnumerationLimits limits = {}) {
    require_valid(data);
    const std::int64_t N = group.N;
    const std::size_t n = data.branches.size();

    std::vector<StratumDescriptor> out;
    for (std::int64_t z = 0; z < N; ++z) {
        std::vector<std::vector<ConjClassSU>> choices(n);
        std::size_t total = 1;
        bool empty = false;
        for (std::size_t i = 0; i < n; ++i) {
            choices[i] = classes_with_power_central(N, data.branches[i].l, z);
            if (choices[i].empty()) empty = true;
            total *= std::max<std::size_t>(choices[i].size(), 1);
            require(total <= limits.max_tuples, ErrorKind::UnsupportedOrbitStructure,
                    "stratum enumeration exceeds " + std::to_string(limits.max_tuples) + " tuples");
        }
        if (empty) continue;
        std::vector<std::size_t> idx(n, 0);
        for (;;) {
            StratumTuple t{z, {}};
            for (std::size_t i = 0; i < n; ++i) t.classes.push_back(choices[i][idx[i]]);
            bool least = true;
            for (std::int64_t zp = 1; zp < N && least; ++zp)
                if (act(data, N, zp, t) < t) least = false;
            if (least) {
                StratumDescriptor d;
                d.z = t.z;
                d.z_delta_order = stabilizer_order(data, N, t);
                for (std::size_t i = 0; i < n; ++i) d.c_delta.push_back(t.classes[i].power(-data.inverse_rotation(i)));
                d.classes = std::move(t.classes);
                out.push_back(std::move(d));
            }
            std::size_t p = n;
            while (p > 0 && idx[p - 1] + 1 == choices[p - 1].size()) idx[--p] = 0;
            if (p == 0) break;
            ++idx[p - 1];
        }
    }
    std::sort(out.begin(), out.end(), [](const StratumDescriptor& a, const StratumDescriptor& b) {
        return StratumTuple{a.z, a.classes} < StratumTuple{b.z, b.classes};
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].index = i;

    if (!data.branches.empty() && data.all_fixed_points())
        for (auto& d : out) d.ranks = stratum_ranks(data, d, group);
    return out;
}

} // namespace torusfibre
