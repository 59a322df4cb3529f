#pragma once

// Truncated commutative graded polynomial rings Q[x_1, ..., x_r] (all
// generators of even degree >= 2), truncated above a top degree, with
// characteristic-class helpers: Chern character from Chern classes, Adams
// operations, exponentials of nilpotents and the Todd class.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "torusfibre/cyclotomic.hpp"
#include "torusfibre/error.hpp"
#include "torusfibre/rational.hpp"

namespace torusfibre {

struct Generator {
    std::string name;
    int degree = 2; // real degree
};

using Monomial = std::vector<int>; // exponent per generator

class GradedRing {
public:
    GradedRing(std::vector<Generator> gens, int top_degree) : gens_(std::move(gens)), top_(top_degree) {
        require(top_ >= 0 && top_ % 2 == 0, ErrorKind::Parse, "top degree must be even and non-negative");
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            const auto& g = gens_[i];
            require(!g.name.empty() && g.name.find_first_of("*^ ") == std::string::npos && g.name != "1", ErrorKind::Parse,
                    "invalid generator name '" + g.name + "'");
            require(g.degree >= 2 && g.degree % 2 == 0, ErrorKind::Parse,
                    "generator '" + g.name + "' must have even degree >= 2");
            require(g.degree <= top_, ErrorKind::OracleDegreeOverflow,
                    "generator '" + g.name + "' has degree " + std::to_string(g.degree) + " above the top degree " + std::to_string(top_));
            for (std::size_t j = 0; j < i; ++j)
                require(gens_[j].name != g.name, ErrorKind::Parse, "duplicate generator '" + g.name + "'");
        }
    }

    const std::vector<Generator>& generators() const { return gens_; }
    int top_degree() const { return top_; }
    Monomial unit() const { return Monomial(gens_.size(), 0); }

    int degree(const Monomial& mono) const {
        int d = 0;
        for (std::size_t i = 0; i < mono.size(); ++i) d += mono[i] * gens_[i].degree;
        return d;
    }

    /// "x^2*y", or "1" for the unit.
    Monomial parse_monomial(std::string_view text) const {
        Monomial mono = unit();
        auto trim = [](std::string_view s) {
            while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
            while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
            return s;
        };
        text = trim(text);
        if (text == "1") return mono;
        require(!text.empty(), ErrorKind::Parse, "empty monomial");
        while (!text.empty()) {
            const auto star = text.find('*');
            std::string_view factor = trim(text.substr(0, star));
            text = star == std::string_view::npos ? std::string_view() : text.substr(star + 1);
            int power = 1;
            if (const auto caret = factor.find('^'); caret != std::string_view::npos) {
                const std::string p(trim(factor.substr(caret + 1)));
                require(!p.empty() && p.find_first_not_of("0123456789") == std::string::npos && p.size() < 6, ErrorKind::Parse,
                        "malformed exponent in monomial factor '" + std::string(factor) + "'");
                power = std::stoi(p);
                factor = trim(factor.substr(0, caret));
            }
            mono[index_of(factor)] += power;
        }
        return mono;
    }

    std::string str(const Monomial& mono) const {
        std::string out;
        for (std::size_t i = 0; i < mono.size(); ++i) {
            if (mono[i] == 0) continue;
            if (!out.empty()) out += "*";
            out += gens_[i].name;
            if (mono[i] > 1) out += "^" + std::to_string(mono[i]);
        }
        return out.empty() ? "1" : out;
    }

    std::size_t index_of(std::string_view name) const {
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i].name == name) return i;
        fail(ErrorKind::Parse, "unknown generator '" + std::string(name) + "'");
    }

private:
    std::vector<Generator> gens_;
    int top_;
};

namespace detail {
inline bool coeff_is_zero(const Rational& r) { return r.is_zero(); }
inline bool coeff_is_zero(const Cyclotomic& c) { return c.is_zero(); }
} // namespace detail

/// Element of a truncated graded ring with coefficients in C (Rational or Cyclotomic).
template <class C>
class Graded {
public:
    explicit Graded(std::shared_ptr<const GradedRing> ring) : ring_(std::move(ring)) {}
    Graded(std::shared_ptr<const GradedRing> ring, const C& scalar) : ring_(std::move(ring)) {
        add_term(ring_->unit(), scalar);
    }

    const GradedRing& ring() const { return *ring_; }
    const std::shared_ptr<const GradedRing>& ring_ptr() const { return ring_; }
    const std::map<Monomial, C>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Monomial& mono, const C& c) {
        if (ring_->degree(mono) > ring_->top_degree() || detail::coeff_is_zero(c)) return;
        auto [it, inserted] = terms_.emplace(mono, c);
        if (!inserted) {
            it->second += c;
            if (detail::coeff_is_zero(it->second)) terms_.erase(it);
        }
    }

    C constant() const {
        auto it = terms_.find(ring_->unit());
        return it == terms_.end() ? C(0) : it->second;
    }
    /// Homogeneous part of real degree deg.
    Graded degree_part(int deg) const {
        Graded out(ring_);
        for (const auto& [mono, c] : terms_)
            if (ring_->degree(mono) == deg) out.terms_.emplace(mono, c);
        return out;
    }
    /// Largest real degree with a nonzero term, or -1.
    int max_degree() const {
        int d = -1;
        for (const auto& [mono, c] : terms_) d = std::max(d, ring_->degree(mono));
        return d;
    }

    /// Adams operation: multiplies the degree-2j part by t^j.
    Graded psi(std::int64_t t) const {
        Graded out(ring_);
        for (const auto& [mono, c] : terms_) {
            Rational f(1);
            for (int j = 0; j < ring_->degree(mono) / 2; ++j) f *= Rational(t);
            out.add_term(mono, c * C(f));
        }
        return out;
    }

    template <class D>
    Graded<D> cast() const {
        Graded<D> out(ring_);
        for (const auto& [mono, c] : terms_) out.add_term(mono, D(c));
        return out;
    }

    Graded& operator+=(const Graded& o) {
        check_ring(o);
        for (const auto& [mono, c] : o.terms_) add_term(mono, c);
        return *this;
    }
    Graded& operator-=(const Graded& o) {
        check_ring(o);
        for (const auto& [mono, c] : o.terms_) add_term(mono, -c);
        return *this;
    }
    Graded& operator*=(const C& s) {
        if (detail::coeff_is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [mono, c] : terms_) c *= s;
        return *this;
    }
    friend Graded operator+(Graded a, const Graded& b) { return a += b; }
    friend Graded operator-(Graded a, const Graded& b) { return a -= b; }
    friend Graded operator*(Graded a, const C& s) { return a *= s; }
    friend Graded operator*(const Graded& a, const Graded& b) {
        a.check_ring(b);
        Graded out(a.ring_);
        const int top = a.ring_->top_degree();
        for (const auto& [ma, ca] : a.terms_) {
            const int da = a.ring_->degree(ma);
            for (const auto& [mb, cb] : b.terms_) {
                if (da + a.ring_->degree(mb) > top) continue;
                Monomial mono = ma;
                for (std::size_t i = 0; i < mono.size(); ++i) mono[i] += mb[i];
                out.add_term(mono, ca * cb);
            }
        }
        return out;
    }
    Graded& operator*=(const Graded& o) { return *this = *this * o; }

    friend bool operator==(const Graded& a, const Graded& b) { return a.terms_ == b.terms_; }

private:
    void check_ring(const Graded& o) const {
        require(ring_ == o.ring_, ErrorKind::Parse, "graded elements from different rings");
    }
    std::shared_ptr<const GradedRing> ring_;
    std::map<Monomial, C> terms_;
};

/// exp(x) = sum x^n/n! for x without constant term (nilpotent in the truncation).
template <class C>
Graded<C> exp_nilpotent(const Graded<C>& x) {
    require(detail::coeff_is_zero(x.constant()), ErrorKind::Parse, "exp_nilpotent needs a vanishing constant term");
    Graded<C> sum(x.ring_ptr(), C(1)), term(x.ring_ptr(), C(1));
    for (int n = 1; 2 * n <= x.ring().top_degree(); ++n) {
        term = term * x;
        term *= C(Rational(1, n));
        if (term.is_zero()) break;
        sum += term;
    }
    return sum;
}

/// Chern data of a (possibly virtual) bundle: rank and c_1, c_2, ... with c_j of degree 2j.
struct ChernData {
    std::int64_t rank = 0;
    std::vector<Graded<Rational>> classes;
};

/// Power sums p_n of the Chern roots, n = 1 .. top/2, from Newton's identities
/// p_n = sum_{i<n} (-1)^{i-1} c_i p_{n-i} + (-1)^{n-1} n c_n.
inline std::vector<Graded<Rational>> chern_power_sums(const ChernData& E, const std::shared_ptr<const GradedRing>& ring) {
    const int top = ring->top_degree() / 2;
    auto c = [&](int i) {
        return i >= 1 && static_cast<std::size_t>(i) <= E.classes.size() ? E.classes[static_cast<std::size_t>(i - 1)] : Graded<Rational>(ring);
    };
    std::vector<Graded<Rational>> p(static_cast<std::size_t>(top + 1), Graded<Rational>(ring));
    p[0] = Graded<Rational>(ring, Rational(E.rank));
    for (int n = 1; n <= top; ++n) {
        Graded<Rational> acc = c(n) * Rational((n % 2 == 1 ? 1 : -1) * n);
        for (int i = 1; i < n; ++i) acc += c(i) * p[static_cast<std::size_t>(n - i)] * Rational(i % 2 == 1 ? 1 : -1);
        p[static_cast<std::size_t>(n)] = acc;
    }
    return p;
}

/// Checks c_j homogeneous of degree 2j; returns the ring-truncated classes.
inline void check_chern_degrees(const ChernData& E, const std::string& what) {
    for (std::size_t j = 0; j < E.classes.size(); ++j) {
        const auto& cj = E.classes[j];
        for (const auto& [mono, coef] : cj.terms()) {
            const int d = cj.ring().degree(mono);
            require(d == static_cast<int>(2 * (j + 1)), ErrorKind::OracleDegreeOverflow,
                    what + ": c_" + std::to_string(j + 1) + " has a term of degree " + std::to_string(d) +
                        " (expected " + std::to_string(2 * (j + 1)) + ")");
        }
    }
}

/// ch(E) = rank + sum_n p_n / n!.
inline Graded<Rational> chern_character(const ChernData& E, const std::shared_ptr<const GradedRing>& ring) {
    const auto p = chern_power_sums(E, ring);
    Graded<Rational> ch = p[0];
    Rational fact(1);
    for (std::size_t n = 1; n < p.size(); ++n) {
        fact *= Rational(static_cast<std::int64_t>(n));
        ch += p[n] * fact.inverse();
    }
    return ch;
}

/// Coefficients tau_n of log(y / (1 - e^{-y})) = sum_{n>=1} tau_n y^n, exactly.
inline std::vector<Rational> todd_log_coefficients(int count) {
    // q(y) = (1 - e^{-y})/y = sum_{j>=0} (-1)^j y^j/(j+1)!, and log(y/(1-e^{-y})) = -log q.
    const auto len = static_cast<std::size_t>(count + 1);
    std::vector<Rational> q(len), fact(len + 1, Rational(1));
    for (std::size_t j = 1; j <= len; ++j) fact[j] = fact[j - 1] * Rational(static_cast<std::int64_t>(j));
    for (std::size_t j = 0; j < len; ++j) q[j] = Rational(j % 2 == 0 ? 1 : -1) / fact[j + 1];
    // L = log q satisfies q L' = q'; solve for L' coefficients.
    std::vector<Rational> dq(len, Rational(0)), dl(len, Rational(0));
    for (std::size_t j = 0; j + 1 < len; ++j) dq[j] = q[j + 1] * Rational(static_cast<std::int64_t>(j + 1));
    for (std::size_t j = 0; j < len; ++j) {
        Rational s = dq[j];
        for (std::size_t i = 1; i <= j; ++i) s -= q[i] * dl[j - i];
        dl[j] = s; // q[0] = 1
    }
    std::vector<Rational> tau(len, Rational(0));
    for (std::size_t n = 1; n < len; ++n) tau[n] = -dl[n - 1] / Rational(static_cast<std::int64_t>(n));
    return tau;
}

/// Td(E) = exp(sum_n tau_n p_n).
inline Graded<Rational> todd_class(const ChernData& E, const std::shared_ptr<const GradedRing>& ring) {
    const auto p = chern_power_sums(E, ring);
    const auto tau = todd_log_coefficients(static_cast<int>(p.size()) - 1);
    Graded<Rational> x(ring);
    for (std::size_t n = 1; n < p.size(); ++n) x += p[n] * tau[n];
    return exp_nilpotent(x);
}

} // namespace torusfibre
