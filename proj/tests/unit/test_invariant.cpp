#include <catch_amalgamated.hpp>

#include "generators.hpp"
#include "torusfibre/invariant.hpp"

using namespace torusfibre;

namespace {
ContributionPolynomial poly(std::int64_t d_c, std::vector<Cyclotomic> coeffs, CsPhase phase, std::size_t stratum = 0) {
    return ContributionPolynomial{d_c, std::move(coeffs), std::move(phase), {stratum}};
}
FramingPhase no_framing() { return FramingPhase{Rational(0), GroupData::su(2)}; }

const OrbitData m5{5, 0, {{5, 1}, {5, 1}, {5, 2}}};
} // namespace

TEST_CASE("constant model", "[invariant]") {
    const auto model = assemble_invariant(no_framing(), {poly(0, {Cyclotomic(Rational(1, 8))}, CsPhase::resolved(PhaseQ()))});
    for (std::int64_t k : {1, 2, 7, 100}) CHECK(evaluate_exact(model, k) == Cyclotomic(Rational(1, 8)));
    const auto v = evaluate_invariant(model, 3);
    CHECK(v.numeric.re == hp::Real("0.125"));
    CHECK(v.numeric.im == 0);
}

TEST_CASE("phase one third times a linear polynomial", "[invariant]") {
    const auto model = assemble_invariant(no_framing(), {poly(1, {Cyclotomic(1), Cyclotomic(2)}, CsPhase::resolved(PhaseQ(1, 3)))});
    CHECK(evaluate_exact(model, 3) == Cyclotomic(7));
    CHECK(evaluate_exact(model, 1) == Cyclotomic::root_of_unity(3, 1) * Cyclotomic(3));
    hp::PrecisionScope scope(128);
    for (std::int64_t k = 1; k <= 6; ++k) {
        const auto v = evaluate_invariant(model, k);
        CHECK((v.numeric - hp::evaluate(v.exact)).abs() < hp::Real("1e-30"));
    }
}

TEST_CASE("framing factor alone", "[invariant]") {
    const FramingPhase f{Rational(3, 4), GroupData::su(2)};
    const auto model = assemble_invariant(f, {poly(0, {Cyclotomic(1)}, CsPhase::resolved(PhaseQ()))});
    CHECK(evaluate_exact(model, 2) == Cyclotomic::from_phase(PhaseQ(3, 8)));
    const auto v = evaluate_invariant(model, 2);
    hp::PrecisionScope scope(128);
    const hp::Complex expect = hp::cis2pi(Rational(3, 8));
    CHECK(abs(v.numeric.re - expect.re) < hp::Real("1e-30"));
    CHECK(abs(v.numeric.im - expect.im) < hp::Real("1e-30"));
}

TEST_CASE("equal phases merge", "[invariant]") {
    const auto q = CsPhase::resolved(PhaseQ(1, 4));
    const auto model = assemble_invariant(no_framing(), {poly(1, {Cyclotomic(1), Cyclotomic(2)}, q, 3),
                                                         poly(0, {Cyclotomic(5)}, CsPhase::resolved(PhaseQ())),
                                                         poly(2, {Cyclotomic(1), Cyclotomic(0), Cyclotomic(4)}, q, 1)});
    REQUIRE(model.terms.size() == 2);
    CHECK(model.terms[0].phase == CsPhase::resolved(PhaseQ()));
    CHECK(model.terms[1].coeffs == std::vector<Cyclotomic>{Cyclotomic(2), Cyclotomic(2), Cyclotomic(4)});
    CHECK(model.terms[1].strata == std::vector<std::size_t>{3, 1});
    CHECK(model.terms[1].d_c == 2);
}

TEST_CASE("symbolic phases block evaluation but not assembly", "[invariant]") {
    const auto model = assemble_invariant(no_framing(), {poly(0, {Cyclotomic(1)}, CsPhase::symbolic("q_1")),
                                                         poly(0, {Cyclotomic(1)}, CsPhase::resolved(PhaseQ(1, 2)))});
    REQUIRE(model.terms.size() == 2);
    CHECK(!model.terms[0].phase.is_symbolic()); // resolved phases sort first
    CHECK(model.has_symbolic_phase());
    try {
        evaluate_exact(model, 1);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SymbolicPhaseInNumericContext);
    }
}

TEST_CASE("degree above the stratum dimension is rejected", "[invariant]") {
    CHECK_THROWS_AS(assemble_invariant(no_framing(), {poly(0, {Cyclotomic(1), Cyclotomic(1)}, CsPhase::resolved(PhaseQ()))}), Error);
}

TEST_CASE("order-5 genus-2 pipeline", "[invariant]") {
    const auto G = GroupData::su(2);
    const auto strata = enumerate_strata(m5, G);
    const auto set = compute_contributions(m5, G, strata, {}, {}, false);
    std::size_t points = 0;
    for (const auto& s : strata)
        if (s.d_c() == 0) ++points;
    CHECK(set.terms.size() == points);
    CHECK(set.terms.size() + set.non_geometric.size() + set.missing_oracle.size() == strata.size());

    // symbolic phases are all distinct: one term per contributing stratum
    const auto symbolic = assemble_invariant(m5, G, set);
    CHECK(symbolic.terms.size() == set.terms.size());
    CHECK(symbolic.framing.B == framing_phase(eigen_dimensions(m5), G).B);

    // resolving every phase to 0 merges everything into a single constant
    std::map<std::size_t, PhaseQ> zero;
    for (const auto& s : strata) zero[s.index] = PhaseQ();
    const auto merged = assemble_invariant(m5, G, compute_contributions(m5, G, strata, {}, zero, false));
    REQUIRE(merged.terms.size() == 1);
    Cyclotomic total;
    for (const auto& t : set.terms) total += t.coeffs[0];
    CHECK(merged.terms[0].coeffs == std::vector<Cyclotomic>{total});
    CHECK(evaluate_exact(merged, 4) == Cyclotomic::from_phase(framing_evaluate(merged.framing, 4)) * total);
}

TEST_CASE("property: evaluation is linear over disjoint term sets", "[invariant][property]") {
    tfgen::Rng rng(0x11AE);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<ContributionPolynomial> a, b;
        for (int side = 0; side < 2; ++side) {
            const auto count = tfgen::uniform(rng, 1, 3);
            for (std::int64_t t = 0; t < count; ++t) {
                const std::int64_t den = tfgen::uniform(rng, 1, 6);
                const std::int64_t d = tfgen::uniform(rng, 0, 2);
                std::vector<Cyclotomic> c;
                for (std::int64_t j = 0; j <= d; ++j) c.push_back(tfgen::cyclotomic(rng, tfgen::uniform(rng, 1, 5), 4));
                (side ? b : a).push_back(poly(d, c, CsPhase::resolved(PhaseQ(tfgen::uniform(rng, 0, den - 1), den))));
            }
        }
        const FramingPhase f{tfgen::rational(rng, 6, 5), GroupData::su(tfgen::uniform(rng, 2, 4))};
        auto both = a;
        both.insert(both.end(), b.begin(), b.end());
        const std::int64_t k = tfgen::uniform(rng, 1, 30);
        CHECK(evaluate_exact(assemble_invariant(f, both), k) ==
              evaluate_exact(assemble_invariant(f, a), k) + evaluate_exact(assemble_invariant(f, b), k));
    }
}
