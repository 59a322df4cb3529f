#include <catch_amalgamated.hpp>

#include <sstream>

#include "generators.hpp"
#include "torusfibre/fit.hpp"
#include "torusfibre/invariant.hpp"

using namespace torusfibre;

namespace {
std::vector<Sample> sample_model(const InvariantModel& model, std::int64_t from, std::int64_t count) {
    std::vector<Sample> out;
    for (std::int64_t k = from; k < from + count; ++k) out.push_back({k, evaluate_numeric(model, k)});
    return out;
}

InvariantModel model_of(std::vector<std::pair<PhaseQ, std::vector<Cyclotomic>>> terms) {
    std::vector<ContributionPolynomial> polys;
    for (auto& [q, c] : terms) {
        const auto d = static_cast<std::int64_t>(c.size()) - 1;
        polys.push_back({d, std::move(c), CsPhase::resolved(q), {}});
    }
    return assemble_invariant(FramingPhase{Rational(0), GroupData::su(2)}, std::move(polys));
}

hp::Real relative_error(const hp::Complex& got, const hp::Complex& want) { return (got - want).abs() / want.abs(); }
} // namespace

TEST_CASE("fit of a single phase one third", "[fit]") {
    hp::PrecisionScope scope(128);
    const auto samples = sample_model(model_of({{PhaseQ(1, 3), {Cyclotomic(1), Cyclotomic(2)}}}), 1, 40);
    const auto r = fit_expansion(samples, FitOptions{});
    REQUIRE(r.terms.size() == 1);
    CHECK(r.terms[0].q == Rational(1, 3));
    CHECK(r.terms[0].d == Rational(1));
    CHECK(relative_error(r.terms[0].b, hp::Complex(2)) < hp::Real("1e-20"));
    CHECK(r.residual < hp::Real("1e-10"));
    // a[0] multiplies k^{-1/2}, a[1] multiplies k^{-1}
    REQUIRE(r.terms[0].a.size() == 2);
    CHECK(r.terms[0].a[0].abs() < hp::Real("1e-20"));
    CHECK((r.terms[0].a[1] - hp::Complex(hp::Real("0.5"))).abs() < hp::Real("1e-20"));
}

TEST_CASE("fit of k + 1", "[fit]") {
    hp::PrecisionScope scope(128);
    std::vector<Sample> samples;
    for (std::int64_t k = 1; k <= 40; ++k) samples.push_back({k, hp::Complex(hp::Real(k + 1))});
    const auto r = fit_expansion(samples, FitOptions{});
    REQUIRE(r.terms.size() == 1);
    CHECK(r.terms[0].q == Rational(0));
    CHECK(r.terms[0].d == Rational(1));
    CHECK(relative_error(r.terms[0].b, hp::Complex(1)) < hp::Real("1e-20"));

    // in the shifted variable r = k + 1 the expansion is the single monomial r
    FitOptions shifted;
    shifted.shift = 1;
    const auto s = fit_expansion(samples, shifted);
    REQUIRE(s.terms.size() == 1);
    CHECK(s.terms[0].a[1].abs() < hp::Real("1e-20"));
}

TEST_CASE("fit of an assembled two-stratum model", "[fit]") {
    const auto model = model_of({{PhaseQ(1, 4), {Cyclotomic(3), Cyclotomic(-1), Cyclotomic(Rational(1, 2))}},
                                 {PhaseQ(2, 5), {Cyclotomic::root_of_unity(5, 1)}}});
    const auto r = fit_expansion(sample_model(model, 1, 60), FitOptions{});
    REQUIRE(r.terms.size() == 2);
    CHECK(r.terms[0].q == Rational(1, 4));
    CHECK(r.terms[0].d == Rational(2));
    CHECK(relative_error(r.terms[0].b, hp::Complex(hp::Real("0.5"))) < hp::Real("1e-8"));
    CHECK(r.terms[1].q == Rational(2, 5));
    CHECK(r.terms[1].d == Rational(0));
    CHECK(relative_error(r.terms[1].b, hp::evaluate(Cyclotomic::root_of_unity(5, 1))) < hp::Real("1e-8"));
}

TEST_CASE("fit input checks", "[fit]") {
    std::vector<Sample> few;
    for (std::int64_t k = 1; k <= 10; ++k) few.push_back({k, hp::Complex(1)});
    try {
        fit_expansion(few, FitOptions{});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientSamples);
    }
    // a phase with denominator above the bound cannot be represented
    std::vector<Sample> hard;
    for (std::int64_t k = 1; k <= 40; ++k) hard.push_back({k, hp::cis2pi(Rational(k, 97))});
    FitOptions small;
    small.q_max = 10;
    small.max_terms = 1;
    try {
        fit_expansion(hard, small);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ResidualTooLarge);
    }
}

TEST_CASE("sample CSV parsing", "[fit]") {
    std::istringstream in("k,re,im\n# comment\n1,2.5,-1\n\n2, 3 ,0\n");
    const auto s = parse_samples_csv(in);
    REQUIRE(s.size() == 2);
    CHECK(s[0].k == 1);
    CHECK(s[0].z.re == hp::Real("2.5"));
    CHECK(s[1].z.re == 3);
    std::istringstream bad("1,2\n");
    CHECK_THROWS_AS(parse_samples_csv(bad), Error);
}

TEST_CASE("property: exact roundtrip on random finite models", "[fit][property]") {
    tfgen::Rng rng(0xF17);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<std::pair<PhaseQ, std::vector<Cyclotomic>>> terms;
        std::vector<Rational> used;
        const auto count = tfgen::uniform(rng, 1, 4);
        while (static_cast<std::int64_t>(terms.size()) < count) {
            const std::int64_t den = tfgen::uniform(rng, 1, 60);
            const Rational q = Rational(tfgen::uniform(rng, 0, den - 1), den).frac();
            if (std::find(used.begin(), used.end(), q) != used.end()) continue;
            used.push_back(q);
            const std::int64_t d = tfgen::uniform(rng, 0, 3);
            std::vector<Cyclotomic> c;
            for (std::int64_t j = 0; j <= d; ++j) c.push_back(tfgen::cyclotomic(rng, tfgen::uniform(rng, 1, 4), 3));
            if (c.back().is_zero()) c.back() = Cyclotomic(1);
            terms.emplace_back(PhaseQ(q), std::move(c));
        }
        const auto model = model_of(terms);
        const auto r = fit_expansion(sample_model(model, 1, 200), FitOptions{});
        if (r.terms.size() != model.terms.size()) {
            for (const auto& t : model.terms) UNSCOPED_INFO("model " << t.phase.str() << " deg " << t.degree());
            for (const auto& t : r.terms) UNSCOPED_INFO("fit " << t.q.str() << " d " << t.d.str() << " |b| " << hp::to_string(t.b.abs(), 5));
        }
        REQUIRE(r.terms.size() == model.terms.size());
        for (std::size_t i = 0; i < r.terms.size(); ++i) {
            const auto& want = model.terms[i];
            CHECK(r.terms[i].q == want.phase.value->value());
            CHECK(r.terms[i].d == Rational(want.degree()));
            CHECK(relative_error(r.terms[i].b, hp::evaluate(want.coeffs[static_cast<std::size_t>(want.degree())])) < hp::Real("1e-8"));
        }
    }
}
