#include <catch_amalgamated.hpp>

#include "generators.hpp"
#include "lambda_oracle.hpp"
#include "torusfibre/localization.hpp"

using namespace torusfibre;

namespace {
std::shared_ptr<const GradedRing> ring_of(std::vector<Generator> gens, int top) {
    return std::make_shared<const GradedRing>(std::move(gens), top);
}

Graded<Rational> poly(const std::shared_ptr<const GradedRing>& ring, std::initializer_list<std::pair<const char*, Rational>> terms) {
    Graded<Rational> out(ring);
    for (const auto& [mono, c] : terms) out.add_term(ring->parse_monomial(mono), c);
    return out;
}

Graded<Rational> random_element(tfgen::Rng& rng, const std::shared_ptr<const GradedRing>& ring, std::int64_t constant) {
    Graded<Rational> out(ring, Rational(constant));
    const auto n = ring->generators().size();
    for (int t = 0; t < 6; ++t) {
        Monomial mono(n, 0);
        for (std::size_t i = 0; i < n; ++i) mono[i] = static_cast<int>(tfgen::uniform(rng, 0, 2));
        if (ring->degree(mono) == 0) continue;
        out.add_term(mono, tfgen::rational(rng, 5, 4));
    }
    return out;
}

const OrbitData z3{3, 0, {{3, 1}, {3, 1}, {3, 2}, {3, 2}}};
const OrbitData m5{5, 0, {{5, 1}, {5, 1}, {5, 2}}};
} // namespace

TEST_CASE("graded ring basics", "[localization]") {
    auto ring = ring_of({{"x", 2}, {"y", 4}}, 6);
    CHECK(ring->str(ring->parse_monomial("x^2*y")) == "x^2*y");
    CHECK(ring->degree(ring->parse_monomial("x^2*y")) == 8);
    CHECK(ring->parse_monomial("1") == ring->unit());
    CHECK_THROWS_AS(ring->parse_monomial("z"), Error);
    const auto x = poly(ring, {{"x", Rational(1)}});
    CHECK((x * x * x * x).is_zero()); // truncated above degree 6
    CHECK_THROWS_AS(ring_of({{"x", 8}}, 6), Error);
    CHECK_THROWS_AS(ring_of({{"x", 3}}, 6), Error);
}

TEST_CASE("Chern character and Todd class", "[localization]") {
    auto ring = ring_of({{"a", 2}, {"b", 4}}, 4);
    const ChernData E{2, {poly(ring, {{"a", Rational(1)}}), poly(ring, {{"b", Rational(1)}})}};
    // ch = 2 + c1 + (c1^2 - 2 c2)/2
    CHECK(chern_character(E, ring) == poly(ring, {{"1", Rational(2)}, {"a", Rational(1)}, {"a^2", Rational(1, 2)}, {"b", Rational(-1)}}));
    // Td = 1 + c1/2 + (c1^2 + c2)/12
    CHECK(todd_class(E, ring) == poly(ring, {{"1", Rational(1)}, {"a", Rational(1, 2)}, {"a^2", Rational(1, 12)}, {"b", Rational(1, 12)}}));
    const auto tau = todd_log_coefficients(4);
    CHECK(tau[1] == Rational(1, 2));
    CHECK(tau[2] == Rational(-1, 24));
    CHECK(tau[3] == Rational(0));
    CHECK(tau[4] == Rational(1, 2880));
    // a bundle with vanishing Chern classes has Td = 1
    CHECK(todd_class(ChernData{5, {}}, ring) == Graded<Rational>(ring, Rational(1)));
}

TEST_CASE("point contribution examples", "[localization]") {
    CHECK(point_contribution({0, 2}, 2) == Cyclotomic(Rational(1, 8)));
    CHECK(point_contribution({0, 1, 1}, 1) == Cyclotomic(Rational(1, 3)));
    CHECK_THROWS_AS(point_contribution({1, 1}, 1), Error);
}

TEST_CASE("order-5 point strata agree with an independent rank computation", "[localization]") {
    const auto G = GroupData::su(2);
    const auto strata = enumerate_strata(m5, G);
    const std::int64_t g = total_genus(m5);
    int points = 0;
    for (const auto& s : strata) {
        if (s.d_c() != 0) continue;
        ++points;
        // ranks from the literal mu sums
        std::vector<std::int64_t> r;
        for (std::int64_t i = 0; i < 5; ++i) {
            Cyclotomic acc(G.dim() * (g - 1));
            for (std::size_t b = 0; b < m5.branches.size(); ++b) {
                const auto roots = root_eigendata(s.c_delta[b], 5);
                acc += mu_bruteforce(5, m5.branches[b].n, i).scaled(Rational(G.rank()));
                for (std::int64_t j = 0; j < 5; ++j)
                    acc += mu_bruteforce(5, m5.branches[b].n, i - j).scaled(Rational(roots[static_cast<std::size_t>(j)]));
            }
            r.push_back((acc.to_rational() / Rational(5)).to_int64());
        }
        CHECK(r == s.ranks->r);
        const auto p = point_contribution(r, s.z_delta_order);
        const auto c = smooth_contribution(m5, s, G, CohomologyOracle::point(), default_phase(s));
        REQUIRE(c.coeffs.size() == 1);
        CHECK(c.coeffs[0] == p);
    }
    CHECK(points > 0);
}

TEST_CASE("lambda inverse collapses to 1 without tilde classes", "[localization]") {
    auto ring = ring_of({{"x", 2}}, 6);
    for (std::int64_t m = 2; m <= 6; ++m) {
        std::vector<Graded<Rational>> ch;
        for (std::int64_t q = 0; q < m; ++q) ch.emplace_back(ring, Rational(q + 1)); // trivial bundles
        CHECK(lambda_inverse_expansion(ch, m, ring) == Graded<Cyclotomic>(ring, Cyclotomic(1)));
    }
    // rank r trivial summand: the whole factor is the scalar (1 - zeta)^{-r}
    CHECK(eigen_prefactor({0, 3}) == Cyclotomic(Rational(1, 8)));
    CHECK(eigen_prefactor({0, 0, 2}) == ((1 - Cyclotomic::root_of_unity(3, 2)).pow(2)).inverse());
}

TEST_CASE("property: lambda inverse agrees with the splitting principle", "[localization][property]") {
    tfgen::Rng rng(0x1A3B);
    for (int trial = 0; trial < 40; ++trial) {
        const int top = 2 * static_cast<int>(tfgen::uniform(rng, 1, 3));
        auto ring = tfgen::uniform(rng, 0, 1) ? ring_of({{"x", 2}}, top) : ring_of({{"x", 2}, {"y", 2}}, top);
        const std::int64_t m = tfgen::uniform(rng, 2, 6);
        std::vector<Graded<Rational>> ch;
        for (std::int64_t q = 0; q < m; ++q) ch.push_back(random_element(rng, ring, tfgen::uniform(rng, -3, 3)));
        CHECK(lambda_inverse_expansion(ch, m, ring) == tforacle::lambda_inverse_by_splitting(ch, m, ring));
    }
}

TEST_CASE("toy one-dimensional oracle", "[localization]") {
    const auto G = GroupData::su(2);
    const auto strata = enumerate_strata(z3, G);
    const StratumDescriptor* s = nullptr;
    for (const auto& t : strata)
        if (t.d_c() == 1 && t.ranks->r == std::vector<std::int64_t>{1, 1, 1}) s = &t;
    REQUIRE(s != nullptr);

    CohomologyOracle o;
    o.d_c = 1;
    o.ring = ring_of({{"x", 2}}, 2);
    o.pairing[o.ring->parse_monomial("x")] = Rational(1);
    o.tangent = ChernData{1, {poly(o.ring, {{"x", Rational(2)}})}};
    for (std::size_t b = 0; b < z3.branches.size(); ++b)
        for (std::int64_t nu = 0; nu < 3; ++nu)
            o.fixed_point.emplace(std::make_pair(b, nu), ChernData{s->ranks->roots[b][static_cast<std::size_t>(nu)] + (nu == 0 ? 1 : 0), {}});
    o.omega = poly(o.ring, {{"x", Rational(5)}});

    const auto c = smooth_contribution(z3, *s, G, o, CsPhase::symbolic("q"));
    const Cyclotomic scale = point_contribution({0, 1, 1}, s->z_delta_order);
    REQUIRE(c.coeffs.size() == 2);
    CHECK(c.degree() == 1);
    // k^1: m <omega>; k^0: <lambda^{-1} Td> = <(1 + 2x)(1 + x)> = 3 by hand
    CHECK(c.coeffs[1] == scale.scaled(Rational(3 * 5)));
    CHECK(c.coeffs[0] == scale.scaled(Rational(3)));
    CHECK(c.phase.symbol == "q");

    // rank contract and missing data
    CohomologyOracle bad = o;
    bad.tangent = ChernData{2, {}};
    CHECK_THROWS_AS(smooth_contribution(z3, *s, G, bad, CsPhase::symbolic("q")), Error);
    bad = o;
    bad.omega.reset();
    CHECK_THROWS_AS(smooth_contribution(z3, *s, G, bad, CsPhase::symbolic("q")), Error);
    bad = o;
    bad.fixed_point.erase({0, 0});
    CHECK_THROWS_AS(smooth_contribution(z3, *s, G, bad, CsPhase::symbolic("q")), Error);
    bad = o;
    bad.pairing[bad.ring->unit()] = Rational(1);
    CHECK_THROWS_AS(smooth_contribution(z3, *s, G, bad, CsPhase::symbolic("q")), Error);
}

TEST_CASE("property: trivial-oracle collapse on random point strata", "[localization][property]") {
    tfgen::Rng rng(0x0C011);
    int points = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const OrbitData d = tfgen::valid_orbit(rng, 6, 10, 5, true);
        if (d.branches.empty()) continue;
        const auto G = GroupData::su(tfgen::uniform(rng, 2, 3));
        std::vector<StratumDescriptor> strata;
        try {
            strata = enumerate_strata(d, G, {20000});
        } catch (const Error&) {
            continue;
        }
        for (const auto& s : strata) {
            if (s.d_c() != 0) continue;
            ++points;
            const auto c = smooth_contribution(d, s, G, CohomologyOracle::point(), default_phase(s));
            CHECK(c.coeffs.size() == 1);
            CHECK(c.coeffs[0] == point_contribution(s.ranks->r, s.z_delta_order));
        }
    }
    CHECK(points > 5);
}
