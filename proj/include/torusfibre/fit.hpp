#pragma once

// Recovery of a finite expansion
//   Z(k) = sum_j e^{2 pi i k q_j} sum_e c_{j,e} (k+h)^e,  e in {D, D - 1/2, ..., e_min}
// from samples at integer levels, with q_j rational of denominator <= Q.
//
// Phases are screened in long double: a normalized matched filter over the
// Farey candidates shortlists phases for the current residual, and the
// candidate whose addition minimizes the least-squares residual is kept
// (greedy selection followed by exchange passes). The final solve runs in
// MPFR with a Householder QR of the equivalent real system.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "torusfibre/error.hpp"
#include "torusfibre/hpfloat.hpp"
#include "torusfibre/rational.hpp"

namespace torusfibre {

struct Sample {
    std::int64_t k = 0;
    hp::Complex z;
};

struct FitOptions {
    std::int64_t q_max = 60;          // Q
    std::size_t max_terms = 4;
    std::int64_t degree_bound = 3;    // D
    std::int64_t min_exponent = 0;    // e_min
    bool half_integer = true;         // exponent step 1/2 (else 1)
    std::int64_t shift = 0;           // h in (k + h)^e
    unsigned precision_bits = hp::mantissa_bits_from_env();
    double prune_tolerance = 1e-15;   // on |c| K^e / max|Z|
    double residual_tolerance = 1e-8; // on ||Z - fit|| / ||Z||
    std::size_t shortlist = 24;
};

struct FitTerm {
    Rational q;
    Rational d;
    hp::Complex b;
    hp::Real b_error{0};
    std::vector<hp::Complex> a; // a[l-1] multiplies k^{-l/2}, relative to b
};

struct FitResult {
    std::vector<FitTerm> terms; // sorted by q
    hp::Real residual{0};       // relative
    unsigned precision_bits = 0;
};

/// CSV lines "k,re,im"; blank lines and lines starting with '#' are skipped.
inline std::vector<Sample> parse_samples_csv(std::istream& in, unsigned precision_bits = hp::default_mantissa_bits) {
    hp::PrecisionScope scope(precision_bits);
    std::vector<Sample> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) {
            const auto b = f.find_first_not_of(" \t"), e = f.find_last_not_of(" \t");
            fields.push_back(b == std::string::npos ? std::string() : f.substr(b, e - b + 1));
        }
        require(fields.size() == 3, ErrorKind::Parse, "sample line " + std::to_string(lineno) + ": expected k,re,im");
        if (lineno == 1 && fields[0] == "k") continue; // header
        try {
            std::size_t used = 0;
            const long long k = std::stoll(fields[0], &used);
            require(used == fields[0].size(), ErrorKind::Parse, "bad level");
            out.push_back(Sample{static_cast<std::int64_t>(k), hp::Complex(hp::Real(fields[1]), hp::Real(fields[2]))});
        } catch (const std::exception&) {
            fail(ErrorKind::Parse, "sample line " + std::to_string(lineno) + ": malformed number");
        }
    }
    return out;
}

/// Fractions p/q in [0, 1) with q <= Q and gcd(p, q) = 1, in increasing order.
inline std::vector<Rational> farey_candidates(std::int64_t Q) {
    std::vector<Rational> out;
    for (std::int64_t q = 1; q <= Q; ++q)
        for (std::int64_t p = 0; p < q; ++p)
            if (std::gcd(p, q) == 1) out.emplace_back(p, q);
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

using LComplex = std::complex<long double>;
using LMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<LComplex, Eigen::Dynamic, 1>;

/// Half-step exponents 2e from 2D down to 2 e_min.
inline std::vector<std::int64_t> exponent_grid(const FitOptions& o) {
    std::vector<std::int64_t> e2;
    const std::int64_t step = o.half_integer ? 1 : 2;
    for (std::int64_t x = 2 * o.degree_bound; x >= 2 * o.min_exponent; x -= step) e2.push_back(x);
    return e2;
}

/// e^{2 pi i k p/q} with the argument reduced exactly.
inline LComplex ld_phase(std::int64_t k, const Rational& q) {
    const std::int64_t num = q.numerator().convert_to<std::int64_t>();
    const std::int64_t den = q.denominator().convert_to<std::int64_t>();
    const long double angle = 2.0L * 3.14159265358979323846264338327950288L * static_cast<long double>(mod(k * num, den)) / static_cast<long double>(den);
    return std::polar(1.0L, angle);
}

class Screen {
public:
    Screen(const std::vector<Sample>& s, const FitOptions& o, const std::vector<Rational>& candidates)
        : opt_(o), cand_(candidates), e2_(exponent_grid(o)) {
        z_.resize(static_cast<Eigen::Index>(s.size()));
        for (std::size_t i = 0; i < s.size(); ++i) {
            z_[static_cast<Eigen::Index>(i)] = LComplex(s[i].z.re.convert_to<long double>(), s[i].z.im.convert_to<long double>());
            ks_.push_back(s[i].k);
        }
        pow_.resize(e2_.size());
        for (std::size_t e = 0; e < e2_.size(); ++e) {
            long double norm2 = 0;
            for (auto k : ks_) {
                const long double v = std::pow(static_cast<long double>(k + o.shift), static_cast<long double>(e2_[e]) / 2.0L);
                pow_[e].push_back(v);
                norm2 += v * v;
            }
            for (auto& v : pow_[e]) v /= std::sqrt(norm2); // unit columns
        }
        znorm_ = z_.norm();
    }

    std::size_t columns_per_phase() const { return e2_.size(); }

    LMatrix design(const std::vector<std::size_t>& phases) const {
        LMatrix A(static_cast<Eigen::Index>(ks_.size()), static_cast<Eigen::Index>(phases.size() * e2_.size()));
        for (std::size_t j = 0; j < phases.size(); ++j)
            for (std::size_t i = 0; i < ks_.size(); ++i) {
                const LComplex ph = ld_phase(ks_[i], cand_[phases[j]]);
                for (std::size_t e = 0; e < e2_.size(); ++e)
                    A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j * e2_.size() + e)) = ph * pow_[e][i];
            }
        return A;
    }

    /// Residual vector of the least-squares fit on the given phases.
    LVector residual(const std::vector<std::size_t>& phases) const {
        if (phases.empty()) return z_;
        const LMatrix A = design(phases);
        const Eigen::ColPivHouseholderQR<LMatrix> qr(A);
        const LVector x = qr.solve(z_);
        const LVector r = z_ - A * x;
        return r;
    }
    long double relative(const LVector& r) const { return znorm_ > 0 ? r.norm() / znorm_ : r.norm(); }

    /// Candidates ranked by the best normalized correlation with the residual over the exponent grid.
    std::vector<std::size_t> shortlist(const LVector& r, const std::vector<std::size_t>& exclude, std::size_t count) const {
        const long double rn = r.norm();
        std::vector<std::pair<long double, std::size_t>> scored;
        for (std::size_t c = 0; c < cand_.size(); ++c) {
            if (std::find(exclude.begin(), exclude.end(), c) != exclude.end()) continue;
            std::vector<LComplex> acc(e2_.size(), LComplex(0));
            for (std::size_t i = 0; i < ks_.size(); ++i) {
                const LComplex t = r[static_cast<Eigen::Index>(i)] * std::conj(ld_phase(ks_[i], cand_[c]));
                for (std::size_t e = 0; e < e2_.size(); ++e) acc[e] += t * pow_[e][i];
            }
            long double best = 0;
            for (const auto& a : acc) best = std::max(best, std::abs(a));
            scored.emplace_back(rn > 0 ? best / rn : 0, c);
        }
        std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < scored.size() && i < count; ++i) out.push_back(scored[i].second);
        return out;
    }

private:
    const FitOptions& opt_;
    const std::vector<Rational>& cand_;
    std::vector<std::int64_t> e2_;
    std::vector<std::int64_t> ks_;
    std::vector<std::vector<long double>> pow_;
    LVector z_;
    long double znorm_ = 0;
};

/// Phase selection for a growing term budget T = 1, 2, ...: one greedy addition per
/// step followed by exchange passes, stopping at the first T that fits exactly.
/// Exchange matters because a wrong neighbouring phase with a full polynomial
/// amplitude can beat the true phase while other terms are still missing.
inline constexpr long double screening_exact = 1e-16L;

inline std::vector<std::size_t> select_phases_from(const Screen& screen, const FitOptions& o, std::size_t candidate_count,
                                                   std::vector<std::size_t> selected) {
    constexpr long double done = screening_exact;
    const std::size_t width = std::min(o.shortlist, candidate_count);
    LVector r = screen.residual(selected);
    long double current = screen.relative(r);
    while (selected.size() < o.max_terms && current > done) {
        std::size_t best = candidate_count;
        long double best_res = std::numeric_limits<long double>::infinity();
        for (auto c : screen.shortlist(r, selected, width)) {
            auto trial = selected;
            trial.push_back(c);
            const long double res = screen.relative(screen.residual(trial));
            if (res < best_res) {
                best_res = res;
                best = c;
            }
        }
        if (best == candidate_count) break;
        selected.push_back(best);
        current = best_res;
        for (int pass = 0; pass < 8 && current > done && selected.size() > 1; ++pass) {
            bool improved = false;
            for (std::size_t i = 0; i < selected.size() && current > done; ++i) {
                auto others = selected;
                others.erase(others.begin() + static_cast<std::ptrdiff_t>(i));
                for (auto c : screen.shortlist(screen.residual(others), selected, width)) {
                    auto trial = selected;
                    trial[i] = c;
                    const long double res = screen.relative(screen.residual(trial));
                    if (res < current * (1 - 1e-6L)) {
                        selected = std::move(trial);
                        current = res;
                        improved = true;
                    }
                }
            }
            if (!improved) break;
        }
        r = screen.residual(selected);
    }
    // two close phases can hide behind a single wrong phase between them; the
    // remedy is to replace two phases at once
    for (int pass = 0; pass < 4 && current > done && selected.size() > 1; ++pass) {
        bool improved = false;
        const std::size_t pair_width = std::min<std::size_t>(16, candidate_count);
        for (std::size_t i = 0; i < selected.size() && current > done; ++i)
            for (std::size_t j = i + 1; j < selected.size() && current > done; ++j) {
                std::vector<std::size_t> others;
                for (std::size_t t = 0; t < selected.size(); ++t)
                    if (t != i && t != j) others.push_back(selected[t]);
                const auto list = screen.shortlist(screen.residual(others), others, pair_width);
                for (std::size_t a = 0; a < list.size(); ++a)
                    for (std::size_t b = a + 1; b < list.size(); ++b) {
                        auto trial = selected;
                        trial[i] = list[a];
                        trial[j] = list[b];
                        const long double res = screen.relative(screen.residual(trial));
                        if (res < current * (1 - 1e-6L)) {
                            selected = std::move(trial);
                            current = res;
                            improved = true;
                        }
                    }
            }
        if (!improved) break;
    }
    return selected;
}

/// Greedy search from scratch; if that ends above the exactness threshold, restarts
/// with the first phase forced to each of the leading matched-filter candidates.
inline std::vector<std::size_t> select_phases(const Screen& screen, const FitOptions& o, std::size_t candidate_count) {
    auto best = select_phases_from(screen, o, candidate_count, {});
    long double best_res = screen.relative(screen.residual(best));
    if (best_res <= screening_exact || o.max_terms < 2) return best;
    const auto seeds = screen.shortlist(screen.residual({}), {}, std::min<std::size_t>(8, candidate_count));
    for (auto seed : seeds) {
        if (!best.empty() && seed == best.front()) continue;
        auto trial = select_phases_from(screen, o, candidate_count, {seed});
        const long double res = screen.relative(screen.residual(trial));
        if (res < best_res) {
            best = std::move(trial);
            best_res = res;
        }
        if (best_res <= screening_exact) break;
    }
    return best;
}

/// Real least squares min ||A x - y|| by Householder QR with column norms equilibrated.
struct RealLeastSquares {
    std::vector<hp::Real> x;
    hp::Real residual_norm{0};
    hp::Real condition{0};           // ratio of extreme |R_ii| (after column scaling)
    std::vector<hp::Real> std_error; // sigma * sqrt(((R^T R)^{-1})_ii), unscaled
};

inline RealLeastSquares solve_real_least_squares(std::vector<std::vector<hp::Real>> A, std::vector<hp::Real> y) {
    const std::size_t rows = A.size(), cols = rows ? A[0].size() : 0;
    require(rows >= cols && cols > 0, ErrorKind::InsufficientSamples, "least-squares system has more unknowns than equations");
    std::vector<hp::Real> scale(cols, hp::Real(0));
    for (std::size_t j = 0; j < cols; ++j) {
        hp::Real s(0);
        for (std::size_t i = 0; i < rows; ++i) s += A[i][j] * A[i][j];
        s = sqrt(s);
        require(s > 0, ErrorKind::IllConditioned, "basis column vanishes on every sample");
        scale[j] = s;
        for (std::size_t i = 0; i < rows; ++i) A[i][j] /= s;
    }
    for (std::size_t j = 0; j < cols; ++j) {
        hp::Real norm(0);
        for (std::size_t i = j; i < rows; ++i) norm += A[i][j] * A[i][j];
        norm = sqrt(norm);
        if (norm == 0) continue;
        const hp::Real alpha = A[j][j] > 0 ? hp::Real(-norm) : norm;
        std::vector<hp::Real> v(rows - j);
        for (std::size_t i = j; i < rows; ++i) v[i - j] = A[i][j];
        v[0] -= alpha;
        hp::Real vnorm2(0);
        for (const auto& t : v) vnorm2 += t * t;
        if (vnorm2 == 0) continue;
        for (std::size_t c = j; c < cols; ++c) {
            hp::Real dot(0);
            for (std::size_t i = j; i < rows; ++i) dot += v[i - j] * A[i][c];
            const hp::Real f = 2 * dot / vnorm2;
            for (std::size_t i = j; i < rows; ++i) A[i][c] -= f * v[i - j];
        }
        hp::Real dot(0);
        for (std::size_t i = j; i < rows; ++i) dot += v[i - j] * y[i];
        const hp::Real f = 2 * dot / vnorm2;
        for (std::size_t i = j; i < rows; ++i) y[i] -= f * v[i - j];
    }
    RealLeastSquares out;
    hp::Real rmax(0), rmin(-1);
    for (std::size_t j = 0; j < cols; ++j) {
        const hp::Real d = abs(A[j][j]);
        if (d > rmax) rmax = d;
        if (rmin < 0 || d < rmin) rmin = d;
    }
    out.condition = rmin > 0 ? hp::Real(rmax / rmin) : hp::Real(std::numeric_limits<double>::infinity());
    require(rmin > 0, ErrorKind::IllConditioned, "least-squares system is rank deficient");
    out.x.assign(cols, hp::Real(0));
    for (std::size_t j = cols; j-- > 0;) {
        hp::Real s = y[j];
        for (std::size_t c = j + 1; c < cols; ++c) s -= A[j][c] * out.x[c];
        out.x[j] = s / A[j][j];
    }
    hp::Real res(0);
    for (std::size_t i = cols; i < rows; ++i) res += y[i] * y[i];
    out.residual_norm = sqrt(res);
    // R^{-1} row norms give the standard errors
    const hp::Real sigma = rows > cols ? hp::Real(out.residual_norm / sqrt(hp::Real(rows - cols))) : hp::Real(0);
    std::vector<std::vector<hp::Real>> Rinv(cols, std::vector<hp::Real>(cols, hp::Real(0)));
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t j = c + 1; j-- > 0;) {
            hp::Real s = (j == c) ? hp::Real(1) : hp::Real(0);
            for (std::size_t t = j + 1; t <= c; ++t) s -= A[j][t] * Rinv[t][c];
            Rinv[j][c] = s / A[j][j];
        }
    }
    for (std::size_t j = 0; j < cols; ++j) {
        hp::Real n2(0);
        for (std::size_t c = j; c < cols; ++c) n2 += Rinv[j][c] * Rinv[j][c];
        out.std_error.push_back(hp::Real(sigma * sqrt(n2) / scale[j]));
        out.x[j] /= scale[j];
    }
    return out;
}

} // namespace detail

inline FitResult fit_expansion(const std::vector<Sample>& samples, const FitOptions& o) {
    require(o.q_max >= 1 && o.max_terms >= 1, ErrorKind::Parse, "fit bounds must be positive");
    require(o.degree_bound >= o.min_exponent, ErrorKind::Parse, "degree bound below the minimal exponent");
    const std::size_t needed = 2 * o.max_terms * static_cast<std::size_t>(o.degree_bound + 2);
    require(samples.size() >= needed, ErrorKind::InsufficientSamples,
            "need at least " + std::to_string(needed) + " samples, got " + std::to_string(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        require(samples[i].k + o.shift >= 1, ErrorKind::Parse, "levels must satisfy k + h >= 1");
        for (std::size_t j = 0; j < i; ++j)
            require(samples[j].k != samples[i].k, ErrorKind::Parse, "duplicate level " + std::to_string(samples[i].k));
    }

    const auto candidates = farey_candidates(o.q_max);
    const detail::Screen screen(samples, o, candidates);
    auto selected = detail::select_phases(screen, o, candidates.size());

    hp::PrecisionScope scope(o.precision_bits);
    const auto e2 = detail::exponent_grid(o);
    hp::Real zmax(0), znorm2(0);
    std::int64_t kmax = 1;
    for (const auto& s : samples) {
        zmax = std::max(zmax, s.z.abs());
        znorm2 += s.z.norm();
        kmax = std::max(kmax, s.k + o.shift);
    }
    const hp::Real znorm = sqrt(znorm2);

    // columns: (phase index, half exponent); pruned columns are dropped and the system re-solved
    struct Column {
        std::size_t phase;
        std::int64_t e2;
    };
    std::vector<Column> columns;
    for (auto p : selected)
        for (auto e : e2) columns.push_back({p, e});

    std::vector<std::vector<hp::Complex>> basis_cache;
    auto column_values = [&](const Column& c) {
        std::vector<hp::Complex> v;
        const Rational& q = candidates[c.phase];
        for (const auto& s : samples) {
            const hp::Complex ph = hp::cis2pi(Rational(mod(s.k * q.numerator().convert_to<std::int64_t>(), q.denominator().convert_to<std::int64_t>()),
                                                       q.denominator().convert_to<std::int64_t>()));
            const hp::Real base(s.k + o.shift);
            const hp::Real pw = (c.e2 % 2 == 0) ? hp::Real(pow(base, c.e2 / 2)) : hp::Real(pow(base, c.e2 / 2) * sqrt(base));
            v.push_back(hp::Complex(hp::Real(ph.re * pw), hp::Real(ph.im * pw)));
        }
        return v;
    };

    detail::RealLeastSquares ls;
    std::vector<hp::Complex> coef;
    std::vector<hp::Complex> coef_err;
    const unsigned digits = hp::digits10_for_bits(o.precision_bits);
    const hp::Real cond_limit = pow(hp::Real(10), static_cast<int>(digits) - 8);
    for (int round = 0; round < 4; ++round) {
        if (columns.empty()) break;
        const std::size_t n = samples.size(), p = columns.size();
        std::vector<std::vector<hp::Real>> A(2 * n, std::vector<hp::Real>(2 * p, hp::Real(0)));
        std::vector<hp::Real> y(2 * n);
        for (std::size_t j = 0; j < p; ++j) {
            const auto v = column_values(columns[j]);
            for (std::size_t i = 0; i < n; ++i) {
                A[2 * i][2 * j] = v[i].re;
                A[2 * i][2 * j + 1] = -v[i].im;
                A[2 * i + 1][2 * j] = v[i].im;
                A[2 * i + 1][2 * j + 1] = v[i].re;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            y[2 * i] = samples[i].z.re;
            y[2 * i + 1] = samples[i].z.im;
        }
        ls = detail::solve_real_least_squares(std::move(A), std::move(y));
        require(ls.condition <= cond_limit, ErrorKind::IllConditioned,
                "least-squares condition estimate " + hp::to_string(ls.condition, 6) + " exceeds the working precision");
        coef.clear();
        coef_err.clear();
        for (std::size_t j = 0; j < p; ++j) {
            coef.emplace_back(ls.x[2 * j], ls.x[2 * j + 1]);
            coef_err.emplace_back(ls.std_error[2 * j], ls.std_error[2 * j + 1]);
        }
        std::vector<Column> kept;
        std::vector<hp::Complex> kept_coef;
        for (std::size_t j = 0; j < p; ++j) {
            const hp::Real kpow = columns[j].e2 % 2 == 0 ? hp::Real(pow(hp::Real(kmax), columns[j].e2 / 2))
                                                         : hp::Real(pow(hp::Real(kmax), columns[j].e2 / 2) * sqrt(hp::Real(kmax)));
            const hp::Real size = coef[j].abs() * kpow / (zmax > 0 ? zmax : hp::Real(1));
            if (size >= o.prune_tolerance) kept.push_back(columns[j]);
        }
        if (kept.size() == columns.size()) break;
        columns = std::move(kept);
    }

    FitResult result;
    result.precision_bits = o.precision_bits;
    result.residual = columns.empty() ? hp::Real(1) : hp::Real(znorm > 0 ? hp::Real(ls.residual_norm / znorm) : ls.residual_norm);
    require(result.residual <= o.residual_tolerance, ErrorKind::ResidualTooLarge,
            "relative residual " + hp::to_string(result.residual, 6) + " exceeds the tolerance");

    std::vector<std::size_t> phases;
    for (const auto& c : columns)
        if (std::find(phases.begin(), phases.end(), c.phase) == phases.end()) phases.push_back(c.phase);
    for (auto p : phases) {
        FitTerm t;
        t.q = candidates[p];
        std::int64_t lead = std::numeric_limits<std::int64_t>::min();
        for (const auto& c : columns)
            if (c.phase == p) lead = std::max(lead, c.e2);
        t.d = Rational(lead, 2);
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].phase != p || columns[j].e2 != lead) continue;
            t.b = coef[j];
            t.b_error = coef_err[j].abs();
        }
        const std::int64_t lowest = 2 * o.min_exponent;
        t.a.assign(static_cast<std::size_t>(lead - lowest), hp::Complex());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].phase != p || columns[j].e2 == lead) continue;
            t.a[static_cast<std::size_t>(lead - columns[j].e2 - 1)] = coef[j] / t.b;
        }
        result.terms.push_back(std::move(t));
    }
    std::sort(result.terms.begin(), result.terms.end(), [](const FitTerm& a, const FitTerm& b) { return a.q < b.q; });
    return result;
}

} // namespace torusfibre
