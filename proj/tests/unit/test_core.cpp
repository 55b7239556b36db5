#include <doctest.h>

#include <algorithm>
#include <random>

#include "learndag/config.hpp"
#include "learndag/count_matrix.hpp"
#include "learndag/dag.hpp"
#include "learndag/errors.hpp"
#include "learndag/neighbor_sets.hpp"
#include "learndag/stattests.hpp"
#include "test_helpers.hpp"

using namespace learndag;

TEST_CASE("CountMatrix validates its invariants") {
    CHECK_NOTHROW(CountMatrix(2, 2, {0, 1, 2, 3}));
    CHECK_THROWS_AS(CountMatrix(0, 2, {}), validation_error);
    CHECK_THROWS_AS(CountMatrix(2, 1, {0, 1}), validation_error);
    CHECK_THROWS_AS(CountMatrix(2, 2, {0, 1, -1, 3}), validation_error);
    CHECK_THROWS_AS(CountMatrix(2, 2, {0, 1, 2}), validation_error);

    CountMatrix m(2, 3, {1, 2, 3, 4, 5, 6});
    CHECK(m(0, 0) == 1);
    CHECK(m(1, 2) == 6);
    CHECK(m.column(1) == std::vector<std::int64_t>{2, 5});

    auto sub = m.select_rows({1, 1, 0});
    CHECK(sub.n() == 3);
    CHECK(sub(0, 0) == 4);
    CHECK(sub(2, 2) == 3);
}

TEST_CASE("has_path on small graphs") {
    SUBCASE("empty graph has no paths") {
        Dag dag(3);
        CHECK_FALSE(has_path(dag, 0, 1));
    }
    SUBCASE("single edge 3->4") {
        Dag dag(6);
        dag.add_edge(3, 4);
        CHECK(has_path(dag, 3, 4));
        CHECK_FALSE(has_path(dag, 4, 3));
    }
    SUBCASE("transitivity") {
        Dag dag(3, {{0, 1}, {1, 2}});
        CHECK(has_path(dag, 0, 2));
    }
    SUBCASE("index range checked") {
        Dag dag(3);
        CHECK_THROWS_AS(has_path(dag, 0, 3), validation_error);
    }
}

TEST_CASE("has_path agrees with a Floyd-Warshall oracle on random graphs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        int p = 2 + static_cast<int>(rng() % 7);
        Dag dag(p);
        for (int from = 0; from < p; ++from)
            for (int to = from + 1; to < p; ++to)
                if (rng() % 3 == 0) dag.add_edge(from, to);
        auto reach = testutil::reachability_oracle(dag);
        for (int a = 0; a < p; ++a)
            for (int b = 0; b < p; ++b)
                if (a != b) CHECK(has_path(dag, a, b) == reach[a][b]);
    }
}

TEST_CASE("topological_order is deterministic and edge-respecting") {
    CHECK(topological_order(Dag(3)) == std::vector<int>{0, 1, 2});
    CHECK(topological_order(Dag(2, {{1, 0}})) == std::vector<int>{1, 0});

    // Unique valid order checked by enumerating all 6 permutations.
    Dag dag(3, {{0, 1}, {1, 2}, {0, 2}});
    std::vector<int> perm{0, 1, 2};
    std::vector<std::vector<int>> valid;
    do {
        std::vector<int> position(3);
        for (int i = 0; i < 3; ++i) position[perm[i]] = i;
        bool ok = true;
        for (auto [from, to] : dag.edges())
            if (position[from] > position[to]) ok = false;
        if (ok) valid.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    REQUIRE(valid.size() == 1);
    CHECK(topological_order(dag) == valid[0]);
}

TEST_CASE("cyclic edge sets are rejected with a named cycle") {
    try {
        Dag dag(3, {{0, 1}, {1, 2}, {2, 0}});
        FAIL("construction should have thrown");
    } catch (const cycle_error& e) {
        CHECK(e.cycle.size() == 3);
    }

    Dag dag(2, {{0, 1}});
    CHECK_THROWS_AS(dag.add_edge(1, 0), cycle_error);
    CHECK_THROWS_AS(dag.add_edge(0, 0), validation_error);
}

TEST_CASE("random acyclic edge sets always construct and order") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        int p = 2 + static_cast<int>(rng() % 7);
        std::vector<std::pair<int, int>> edges;
        for (int from = 0; from < p; ++from)
            for (int to = from + 1; to < p; ++to)
                if (rng() % 2 == 0) edges.emplace_back(from, to);
        Dag dag(p, edges);
        auto order = topological_order(dag);
        std::vector<int> position(p);
        for (int i = 0; i < p; ++i) position[order[i]] = i;
        for (auto [from, to] : dag.edges()) CHECK(position[from] < position[to]);
        CHECK(dag.edge_count() == static_cast<int>(edges.size()));
    }
}

TEST_CASE("Dag edge and parent views stay in lockstep") {
    Dag dag(4, {{0, 2}, {1, 2}, {2, 3}});
    CHECK(dag.parents(2) == std::vector<int>{0, 1});
    CHECK(dag.children(2) == std::vector<int>{3});
    dag.remove_edge(1, 2);
    CHECK(dag.parents(2) == std::vector<int>{0});
    CHECK(dag.edge_count() == 2);
    auto edges = dag.edges();
    CHECK(edges == std::vector<std::pair<int, int>>{{0, 2}, {2, 3}});
}

TEST_CASE("NeighborSets basics") {
    auto complete = NeighborSets::complete(4);
    CHECK(complete.at(0) == std::vector<int>{1, 2, 3});
    CHECK(complete.symmetric());

    auto sets = NeighborSets::from_pairs(4, {{0, 1}, {2, 3}});
    CHECK(sets.contains(1, 0));
    CHECK(sets.symmetric());
    CHECK(sets.pairs() == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});

    sets.intersect(NeighborSets::from_pairs(4, {{0, 1}}));
    CHECK(sets.pairs() == std::vector<std::pair<int, int>>{{0, 1}});

    CHECK_THROWS_AS(sets.insert(1, 1), validation_error);
}

TEST_CASE("Config validation and resolution") {
    Config config;
    CHECK_NOTHROW(config.validate());

    Config bad = config;
    bad.alpha_pns = 1.5;
    CHECK_THROWS_AS(bad.validate(), validation_error);
    bad = config;
    bad.bootstrap_threshold = 0.0;
    CHECK_THROWS_AS(bad.validate(), validation_error);
    bad = config;
    bad.max_parents = 0;
    CHECK_THROWS_AS(bad.validate(), validation_error);

    auto resolved = resolve_config(config, 2000, 10);
    CHECK(resolved.alpha_exponent == doctest::Approx(0.15));
    CHECK(resolved.alpha_pns == doctest::Approx(1.7648e-3).epsilon(1e-3));
    CHECK(resolved.max_parents == 8);

    auto wide = resolve_config(config, 2000, 100);
    CHECK(wide.alpha_exponent == doctest::Approx(0.2));

    Config pinned;
    pinned.alpha_pns = 0.05;
    pinned.max_parents = 3;
    auto r2 = resolve_config(pinned, 500, 10);
    CHECK(r2.alpha_pns == doctest::Approx(0.05));
    CHECK(r2.alpha_prune == doctest::Approx(stats::alpha_schedule(500, 0.15)));
    CHECK(r2.max_parents == 3);
}
