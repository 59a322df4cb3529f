#include <catch_amalgamated.hpp>

#include "generators.hpp"
#include "torusfibre/framing.hpp"

using namespace torusfibre;

namespace {
OrbitData repeat(std::int64_t m, std::int64_t gq, Branch b, int count) {
    OrbitData d{m, gq, {}};
    for (int i = 0; i < count; ++i) d.branches.push_back(b);
    return d;
}

double distance(const hp::Complex& a, const hp::Complex& b) { return (a - b).abs().convert_to<double>(); }
} // namespace

TEST_CASE("group data", "[framing]") {
    const auto g = GroupData::parse("SU(3)");
    CHECK(g.N == 3);
    CHECK(g.dim() == 8);
    CHECK(g.dual_coxeter() == 3);
    CHECK(g.rank() == 2);
    CHECK(GroupData::parse("su2") == GroupData::su(2));
    CHECK_THROWS_AS(GroupData::parse("SO3"), Error);
    CHECK_THROWS_AS(GroupData::parse("SU"), Error);
}

TEST_CASE("framing phase examples", "[framing]") {
    const auto su2 = GroupData::su(2);
    for (std::int64_t m = 2; m <= 6; ++m)
        for (std::int64_t gq = 2; gq <= 3; ++gq)
            for (std::int64_t N = 2; N <= 4; ++N)
                CHECK(framing_phase(eigen_dimensions(OrbitData{m, gq, {}}), GroupData::su(N)).B.is_zero());
    CHECK(framing_phase(eigen_dimensions(repeat(4, 0, {4, 1}, 4)), su2).B == Rational(3, 4));
    CHECK(framing_phase(eigen_dimensions(repeat(2, 0, {2, 1}, 6)), su2).B.is_zero());
}

TEST_CASE("framing evaluation examples", "[framing]") {
    const FramingPhase p{Rational(3, 4), GroupData::su(2)};
    CHECK(framing_evaluate(p, 2) == PhaseQ(3, 8));
    CHECK(framing_evaluate(p, 998) == PhaseQ(1497, 2000));
    CHECK(framing_evaluate(FramingPhase{Rational(0), GroupData::su(3)}, 17).is_zero());
}

TEST_CASE("framing series examples", "[framing]") {
    const FramingPhase p{Rational(3, 4), GroupData::su(2)};
    const auto s = framing_series(p, 2);
    CHECK(s.leading == PhaseQ(3, 4));
    CHECK(s.shift == 2);
    REQUIRE(s.coeffs.size() == 3);
    CHECK(s.coeffs[0] == PiPolynomial::monomial(Rational(1), 0));
    CHECK(s.coeffs[1] == PiPolynomial::monomial(Rational(-3, 2), 1));
    CHECK(s.coeffs[2] == PiPolynomial::monomial(Rational(9, 8), 2));

    const auto trivial = framing_series(FramingPhase{Rational(0), GroupData::su(2)}, 3);
    CHECK(trivial.coeffs[0] == PiPolynomial::monomial(Rational(1), 0));
    for (std::size_t n = 1; n < trivial.coeffs.size(); ++n) CHECK(trivial.coeffs[n].is_zero());

    hp::PrecisionScope scope(128);
    const auto s4 = framing_series(p, 4);
    const std::int64_t k = 10000;
    CHECK(distance(s4.evaluate(k), hp::cis2pi(framing_evaluate(p, k).value())) < 1e-10);
}

TEST_CASE("re-expansion in 1/k", "[framing]") {
    // e^{2 pi i B k/(k+h)} = e^{2 pi i B} (1 - Pi B h / k + (Pi^2 B^2 h^2 / 2 + Pi B h^2) / k^2 + ...)
    const FramingPhase p{Rational(3, 4), GroupData::su(2)};
    const auto c = reexpand_in_level(framing_series(p, 2));
    REQUIRE(c.size() == 3);
    CHECK(c[1] == PiPolynomial::monomial(Rational(-3, 2), 1));
    CHECK(c[2] == PiPolynomial({Rational(0), Rational(3), Rational(9, 8)}));
}

TEST_CASE("property: conjugate spectra negate B", "[framing][property]") {
    tfgen::Rng rng(0xB00B);
    for (int trial = 0; trial < 200; ++trial) {
        EigenSpectrum s{tfgen::uniform(rng, 2, 12), {}};
        for (std::int64_t a = 0; a < s.m; ++a) s.d.push_back(tfgen::uniform(rng, 0, 5));
        EigenSpectrum t = s;
        for (std::int64_t a = 1; a < s.m; ++a) t.d[static_cast<std::size_t>(a)] = s.d[static_cast<std::size_t>(s.m - a)];
        const auto g = GroupData::su(tfgen::uniform(rng, 2, 4));
        CHECK(framing_phase(t, g).B == -framing_phase(s, g).B);
        if (s.m == 2) CHECK(framing_phase(s, g).B.is_zero());
    }
}

TEST_CASE("property: series truncation error bound", "[framing][property]") {
    hp::PrecisionScope scope(160);
    tfgen::Rng rng(0x5E71E5);
    for (int trial = 0; trial < 60; ++trial) {
        const FramingPhase p{tfgen::rational(rng, 12, 12) / Rational(12), GroupData::su(tfgen::uniform(rng, 2, 3))};
        if (p.B > Rational(1) || p.B < Rational(-1)) continue;
        const auto s = framing_series(p, 6);
        for (std::int64_t k : {10, 37, 100, 1000}) {
            const double x = 2 * std::numbers::pi * std::abs(p.B.to_double()) * static_cast<double>(p.group.dual_coxeter());
            const double bound = 10 * std::pow(x, 7) / 5040.0 * std::pow(static_cast<double>(k + p.group.dual_coxeter()), -7);
            CHECK(distance(s.evaluate(k), hp::cis2pi(framing_evaluate(p, k).value())) <= bound + 1e-40);
        }
    }
}
