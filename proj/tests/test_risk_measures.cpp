#include <doctest.h>

#include <cmath>

#include "fashion/risk_measures.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace fashion;

TEST_CASE("toy reach with nothing severed includes the high-value targets") {
    auto toy = fixtures::toy_graph();
    auto r = reach(toy.graph);
    CHECK(r.contains(toy.cap_node(toy.c_41)));
    CHECK(r.contains(toy.cap_node(toy.c_61)));
    double total = 0.0;
    for (const Capability& c : toy.graph.capabilities()) total += c.impact;
    CHECK(r.value == doctest::Approx(total));
}

TEST_CASE("toy reach with the entry reachability edge severed") {
    auto toy = fixtures::toy_graph();
    EdgeSet severed{{toy.cap_node(toy.c_0A), toy.ex_node(toy.net_03A)}};
    auto r = reach(toy.graph, severed);
    CHECK(!r.contains(toy.cap_node(toy.c_3A)));
    CHECK(!r.contains(toy.cap_node(toy.c_31)));
    CHECK(!r.contains(toy.cap_node(toy.c_41)));
    CHECK(!r.contains(toy.cap_node(toy.c_61)));
    CHECK(r.contains(kSigmaNode));
}

TEST_CASE("reach with every edge severed keeps only sigma and start") {
    auto toy = fixtures::toy_graph();
    EdgeSet severed(toy.graph.edges());
    auto r = reach(toy.graph, severed);
    CHECK(r.reachable.size() == 3); // sigma + the two entry capabilities
    CHECK(r.contains(kSigmaNode));
    CHECK(r.contains(toy.cap_node(toy.c_0A)));
    CHECK(r.contains(toy.cap_node(toy.c_0B)));
    CHECK(r.value == doctest::Approx(0.0)); // entry capabilities carry no impact
}

TEST_CASE("severing more edges never grows the reachable set") {
    Rng rng(77);
    for (int round = 0; round < 30; ++round) {
        auto g = fixtures::random_attack_dag(rng, 22);
        const auto& edges = g.edges();
        std::vector<Edge> some, more;
        for (const Edge& e : edges) {
            if (rng.bernoulli(0.25)) some.push_back(e);
            else if (rng.bernoulli(0.2)) more.push_back(e);
        }
        more.insert(more.end(), some.begin(), some.end());
        auto r_small = reach(g, EdgeSet(some));
        auto r_big = reach(g, EdgeSet(more));
        for (NodeId v : r_big.reachable) CHECK(r_small.contains(v));
        CHECK(r_big.value <= r_small.value + 1e-12);
    }
}

TEST_CASE("path on a single chain") {
    std::vector<Capability> caps{fixtures::cap("s", 1, 0.0), fixtures::cap("t", 1, 2.0)};
    std::vector<Exploit> exs{fixtures::vuln_exploit(ExploitLogic::Or, 0.5)};
    auto g = AttackGraph::build(caps, exs, {{0, 2}}, {{2, 1}}, {0});
    auto aug = g.augment_with_targets(g.normalized_impacts());
    CHECK(path(aug, {}, 1e-6) == doctest::Approx(0.5));
}

TEST_CASE("path takes the better of two parallel chains") {
    std::vector<Capability> caps{fixtures::cap("s", 1, 0.0), fixtures::cap("a", 1, 5.0),
                                 fixtures::cap("b", 1, 5.0)};
    std::vector<Exploit> exs{fixtures::vuln_exploit(ExploitLogic::Or, 0.3),
                             fixtures::vuln_exploit(ExploitLogic::Or, 0.4)};
    auto g = AttackGraph::build(caps, exs, {{0, 3}, {0, 4}}, {{3, 1}, {4, 2}}, {0});
    auto aug = g.augment_with_targets(g.normalized_impacts());
    CHECK(path(aug, {}, 1e-6) == doctest::Approx(0.4));
}

TEST_CASE("path requires augmentation and a sane epsilon") {
    auto toy = fixtures::toy_graph();
    CHECK_THROWS_AS(path(toy.graph, EdgeSet{}, 1e-6), GraphError);
    auto aug = toy.graph.augment_with_targets(toy.graph.normalized_impacts());
    CHECK_THROWS_AS(path(aug, EdgeSet{}, 0.0), RiskError);
    CHECK_THROWS_AS(path(aug, EdgeSet{}, 1.0), RiskError);
}

TEST_CASE("path matches exhaustive enumeration on random graphs") {
    Rng rng(88);
    for (int round = 0; round < 40; ++round) {
        auto g = fixtures::random_attack_dag(rng, 10);
        auto lambda = g.normalized_impacts();
        if (lambda.empty()) continue;
        auto aug = g.augment_with_targets(lambda);
        EdgeSet severed;
        for (const Edge& e : aug.edges())
            if (rng.bernoulli(0.2)) severed.insert(e);
        double got = path(aug, severed, 1e-6);
        double want = oracles::brute_force_path(aug, severed, 1e-6);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("path never exceeds 1 and severing is monotone") {
    Rng rng(89);
    for (int round = 0; round < 20; ++round) {
        auto g = fixtures::random_attack_dag(rng, 14);
        auto lambda = g.normalized_impacts();
        if (lambda.empty()) continue;
        auto aug = g.augment_with_targets(lambda);
        std::vector<Edge> some;
        for (const Edge& e : aug.edges())
            if (rng.bernoulli(0.3)) some.push_back(e);
        double base = path(aug, {}, 1e-6);
        double cut = path(aug, EdgeSet(some), 1e-6);
        CHECK(base <= 1.0 + 1e-12);
        CHECK(cut <= base + 1e-12);
    }
}

TEST_CASE("path ignores AND semantics while reach honors them") {
    // The only route to the sole positive-impact capability runs through an
    // AND exploit with an unsatisfiable second prerequisite.
    std::vector<Capability> caps{fixtures::cap("s", 1, 0.0),
                                 fixtures::cap("dead", 1, 0.0),
                                 fixtures::cap("prize", 1, 7.0)};
    std::vector<Exploit> exs{fixtures::vuln_exploit(ExploitLogic::And, 0.9)};
    auto g = AttackGraph::build(caps, exs, {{0, 3}, {1, 3}}, {{3, 2}}, {0});
    auto aug = g.augment_with_targets(g.normalized_impacts());

    auto r = reach(aug);
    CHECK(!r.contains(2));            // AND gate never fires
    CHECK(path(aug, {}, 1e-6) == doctest::Approx(0.9)); // path walks through anyway
}

TEST_CASE("hybrid stays within [0,1] across beta") {
    auto toy = fixtures::toy_graph();
    auto aug = toy.graph.augment_with_targets(toy.graph.normalized_impacts());
    EdgeSet severed{{toy.cap_node(toy.c_0A), toy.ex_node(toy.net_03A)}};
    for (double beta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        double h0 = hybrid(aug, {}, beta, 1e-6);
        double h1 = hybrid(aug, severed, beta, 1e-6);
        CHECK(h0 >= 0.0);
        CHECK(h0 <= 1.0 + 1e-9);
        CHECK(h1 >= 0.0);
        CHECK(h1 <= 1.0 + 1e-9);
    }
}
