#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ocskit/bounds.hpp"
#include "ocskit/oracle.hpp"

using namespace ocskit;

TEST_CASE("one pair: exactly a fair coin") {
    const std::vector<PairQuery> pairs{{0, 1, 0}};
    const auto p = exact_two_way_never(pairs, SubsequenceSpec{0, {{0, 0}}});
    CHECK(p.favorable * 2 == p.total);
}

TEST_CASE("two identical pairs: never-chosen is exactly 7/32 and within the product bound") {
    const std::vector<PairQuery> pairs{{0, 1, 0}, {0, 1, 1}};
    const auto p = exact_two_way_never(pairs, SubsequenceSpec{0, {{0, 1}}});
    CHECK(p.favorable * 32 == p.total * 7);
    CHECK(p.value() <= zeta_product(2, 1.0 / 16));   // 7/32 <= 15/64
}

TEST_CASE("shared-element edge appears with probability exactly 1/16") {
    const std::vector<PairQuery> pairs{{0, 1, 0}, {1, 2, 1}};
    const auto e = enumerate_two_way(pairs, 1);
    REQUIRE(e.occurrence_positions.size() == 2);
    bool found = false;
    for (std::size_t i = 0; i < e.edge_windows.size(); ++i) {
        if (e.edge_windows[i].first == 0 && e.edge_windows[i].last == 1) {
            found = true;
            // P(edge between the two pairs) = 1 - P(no edge) = 1/16.
            CHECK((e.total - e.no_edge_counts[i]) * 16 == e.total);
        }
    }
    CHECK(found);
}

TEST_CASE("one triple: never-chosen is exactly 2/3") {
    const std::vector<TripleQuery> triples{{0, 1, 2, 0}};
    const auto p = exact_three_way_never(triples, SubsequenceSpec{0, {{0, 0}}});
    CHECK(p.favorable * 3 == p.total * 2);
}

TEST_CASE("repeated and chained triples respect the executable-parameter run bound") {
    const double g = 1.0 / 16;
    {
        const std::vector<TripleQuery> triples{{0, 1, 2, 0}, {0, 1, 2, 1}};
        const auto p = exact_three_way_never(triples, SubsequenceSpec{0, {{0, 1}}});
        CHECK(p.value() <= eta_sum(2, g, g) + 1e-12);
    }
    {
        // Three triples sharing only the tracked element.
        const std::vector<TripleQuery> triples{{0, 1, 2, 0}, {0, 3, 4, 1}, {0, 5, 6, 2}};
        const auto p = exact_three_way_never(triples, SubsequenceSpec{0, {{0, 2}}});
        CHECK(p.value() <= eta_sum(3, g, g) + 1e-12);
    }
}

TEST_CASE("enumeration rejects oversized inputs unless the cap is raised") {
    std::vector<TripleQuery> triples;
    for (int i = 0; i < 4; ++i)
        triples.push_back({0, static_cast<ElementId>(1 + i), static_cast<ElementId>(2 + i),
                           static_cast<std::uint64_t>(i)});
    CHECK_THROWS_AS(enumerate_three_way(triples, 0), std::invalid_argument);

    std::vector<PairQuery> pairs;
    for (int i = 0; i < 9; ++i) pairs.push_back({0, 1, static_cast<std::uint64_t>(i)});
    CHECK_THROWS_AS(enumerate_two_way(pairs, 0), std::invalid_argument);
}

TEST_CASE("window specs validate against the occurrence list") {
    const std::vector<PairQuery> pairs{{0, 1, 0}, {2, 3, 1}, {0, 1, 2}};
    const auto e = enumerate_two_way(pairs, 0);
    CHECK(e.occurrence_positions == std::vector<std::size_t>{0, 2});
    CHECK_THROWS_AS(validate_spec(SubsequenceSpec{0, {{0, 2}}}, 2), std::invalid_argument);
    CHECK_THROWS_AS(validate_spec(SubsequenceSpec{0, {{1, 0}}}, 2), std::invalid_argument);
    CHECK_THROWS_AS(validate_spec(SubsequenceSpec{0, {{0, 1}, {1, 1}}}, 2), std::invalid_argument);
    validate_spec(SubsequenceSpec{0, {{0, 0}, {1, 1}}}, 2);
}

TEST_CASE("all_window_specs enumerates the disjoint interval families") {
    CHECK(all_window_specs(0).empty());
    CHECK(all_window_specs(1).size() == 1);
    CHECK(all_window_specs(2).size() == 4);
    CHECK(all_window_specs(3).size() == 12);
}

TEST_CASE("wilson interval brackets the estimate") {
    const auto ci = wilson_interval(500, 1000);
    CHECK(ci.lower < 0.5);
    CHECK(ci.upper > 0.5);
    CHECK(ci.estimate == 0.5);
    const auto zero = wilson_interval(0, 1000);
    CHECK(zero.lower == 0.0);
    CHECK(zero.upper > 0.0);
    CHECK_THROWS_AS(wilson_interval(1, 0), std::invalid_argument);
}

TEST_CASE("monte carlo matches enumeration for the 7/32 case at one million trials") {
    const std::vector<PairQuery> pairs{{0, 1, 0}, {0, 1, 1}};
    const SubsequenceSpec spec{0, {{0, 1}}};
    const auto est = mc_two_way_never(pairs, spec, 1'000'000, 2024);
    CHECK(est.lower <= 7.0 / 32);
    CHECK(est.upper >= 7.0 / 32);
    // Deterministic per master seed.
    const auto est2 = mc_two_way_never(pairs, spec, 1'000'000, 2024);
    CHECK(est.estimate == est2.estimate);
}

TEST_CASE("monte carlo covers the one-triple exact value") {
    const std::vector<TripleQuery> triples{{0, 1, 2, 0}};
    const auto est = mc_three_way_never(triples, SubsequenceSpec{0, {{0, 0}}}, 200'000, 7);
    CHECK(est.lower <= 2.0 / 3);
    CHECK(est.upper >= 2.0 / 3);
}

TEST_CASE("split windows obey the product bound (two-way, disjoint runs)") {
    // u in all four pairs; windows {0},{2,3}: bound zeta(1)*zeta(2).
    const std::vector<PairQuery> pairs{{0, 1, 0}, {0, 2, 1}, {0, 1, 2}, {0, 2, 3}};
    const auto e = enumerate_two_way(pairs, 0);
    const auto p = never_probability(e, {{0, 0}, {2, 3}});
    CHECK(p.value() <= zeta_product(1, 1.0 / 16) * zeta_product(2, 1.0 / 16) + 1e-12);
}

TEST_CASE("adversarial families are deterministic and shaped as documented") {
    const auto chained = adversarial_triple_family(FamilyKind::Chained, 3);
    REQUIRE(chained.size() == 3);
    CHECK(chained[0].a == 0);
    CHECK(chained[0].b == 1);
    CHECK(chained[0].c == 2);
    CHECK(chained[1].b == 2);
    CHECK(chained[1].c == 3);
    CHECK(chained[2].b == 3);
    CHECK(chained[2].c == 4);

    const auto same = adversarial_triple_family(FamilyKind::AllSame, 3);
    for (const auto& t : same) {
        CHECK(t.a == 0);
        CHECK(t.b == 1);
        CHECK(t.c == 2);
    }

    const auto r1 = adversarial_triple_family(FamilyKind::RandomKRegular, 5, 42);
    const auto r2 = adversarial_triple_family(FamilyKind::RandomKRegular, 5, 42);
    const auto r3 = adversarial_triple_family(FamilyKind::RandomKRegular, 5, 43);
    bool same_bc = true, diff_bc = false;
    for (std::size_t i = 0; i < r1.size(); ++i) {
        same_bc = same_bc && r1[i].b == r2[i].b && r1[i].c == r2[i].c;
        diff_bc = diff_bc || r1[i].b != r3[i].b || r1[i].c != r3[i].c;
    }
    CHECK(same_bc);
    CHECK(diff_bc);
    CHECK(family_from_name("all-same") == FamilyKind::AllSame);
    CHECK_THROWS_AS(family_from_name("nope"), std::invalid_argument);

    // Alternating pair family interleaves non-tracked pairs.
    const auto alt = adversarial_pair_family(FamilyKind::Alternating, 4);
    CHECK(alt[0].a == 0);
    CHECK(alt[1].a == 1);
    CHECK(alt[1].b == 2);
    CHECK(alt[2].a == 0);
}

TEST_CASE("family inputs of desk scale satisfy the pair product bound on every spec") {
    for (const FamilyKind kind :
         {FamilyKind::AllSame, FamilyKind::Alternating, FamilyKind::Chained, FamilyKind::RandomKRegular}) {
        const auto pairs = adversarial_pair_family(kind, 5, 11);
        const auto e = enumerate_two_way(pairs, 0);
        const int t = static_cast<int>(e.occurrence_positions.size());
        for (const auto& windows : all_window_specs(t)) {
            double bound = 1.0;
            for (const auto& w : windows) bound *= zeta_product(w.length(), 1.0 / 16);
            CHECK(never_probability(e, windows).value() <= bound + 1e-12);
        }
        // Internal-edge probability bound on every consecutive window.
        for (std::size_t i = 0; i < e.edge_windows.size(); ++i) {
            const int len = e.edge_windows[i].length();
            const double no_edge = static_cast<double>(e.no_edge_counts[i]) / static_cast<double>(e.total);
            CHECK(no_edge <= std::pow(15.0 / 16, std::max(len - 1, 0)) + 1e-12);
        }
    }
}
