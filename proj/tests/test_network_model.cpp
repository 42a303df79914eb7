#include <doctest.h>

#include "fashion/exact_risk.hpp"
#include "fashion/network_model.hpp"
#include "fashion/risk_measures.hpp"
#include "support/fixtures.hpp"

using namespace fashion;

TEST_CASE("toy network validates") {
    auto n = fixtures::toy_network();
    CHECK_NOTHROW(validate(n));
    CHECK_NOTHROW(validate(n)); // idempotent, const
}

TEST_CASE("validation failures") {
    auto n = fixtures::toy_network();
    SUBCASE("self loop flow") {
        n.flows.push_back({"bad", "3", "3", "A", 1.0, 1.0});
        CHECK_THROWS_AS(validate(n), NetworkError);
    }
    SUBCASE("unknown link endpoint") {
        n.links.push_back({"0", "zz", 10.0, 1.0});
        CHECK_THROWS_AS(validate(n), NetworkError);
    }
    SUBCASE("nonpositive capacity") {
        n.links.push_back({"0", "3", 0.0, 1.0});
        CHECK_THROWS_AS(validate(n), NetworkError);
    }
    SUBCASE("duplicate flow id") {
        n.flows.push_back(n.flows.front());
        CHECK_THROWS_AS(validate(n), NetworkError);
    }
    SUBCASE("gateway must be a router") {
        n.gateways.push_back("3");
        CHECK_THROWS_AS(validate(n), NetworkError);
    }
    SUBCASE("unknown traffic type") {
        n.flows.push_back({"bad", "3", "4", "C", 1.0, 1.0});
        CHECK_THROWS_AS(validate(n), NetworkError);
    }
    SUBCASE("interior switch endpoint") {
        n.flows.push_back({"bad", "1", "4", "A", 1.0, 1.0});
        CHECK_THROWS_AS(validate(n), NetworkError);
    }
}

TEST_CASE("toy reachability exploits cover exactly the six flow triples") {
    auto n = fixtures::toy_network();
    auto derived = derive_reachability_exploits(n);
    REQUIRE(derived.size() == 6);
    std::vector<DerivedExploit> expect{
        {"0", "3", "A"}, {"3", "4", "A"}, {"3", "4", "B"},
        {"3", "5", "A"}, {"3", "5", "B"}, {"5", "6", "A"},
    };
    std::sort(expect.begin(), expect.end());
    CHECK(std::vector<DerivedExploit>(derived.begin(), derived.end()) == expect);
    for (const auto& d : derived) {
        Exploit e = d.to_exploit();
        CHECK(e.kind == ExploitKind::NetworkReachability);
        CHECK(e.logic == ExploitLogic::Or);
        CHECK(std::find(n.traffic_types.begin(), n.traffic_types.end(), *e.traffic_type) !=
              n.traffic_types.end());
    }
}

TEST_CASE("reachability exploit edge cases") {
    auto n = fixtures::toy_network();
    SUBCASE("no flows, no exploits") {
        n.flows.clear();
        CHECK(derive_reachability_exploits(n).empty());
    }
    SUBCASE("duplicate triples collapse") {
        n.flows.push_back({"dup", "0", "3", "A", 2.0, 1.0});
        CHECK(derive_reachability_exploits(n).size() == 6);
        CHECK(derive_reachability_exploits(n).size() <= n.flows.size());
    }
    SUBCASE("flows into the gateway carry no capability") {
        n.flows.push_back({"out", "3", "0", "A", 1.0, 1.0});
        CHECK(derive_reachability_exploits(n).size() == 6);
    }
}

TEST_CASE("assembled toy graph matches the hand-built one") {
    auto n = fixtures::toy_network();
    auto g = assemble_attack_graph(n, fixtures::toy_vulns());
    // 10 vulnerability capabilities + 2 gateway entry capabilities
    CHECK(g.capability_count() == 12);
    CHECK(g.exploit_count() == 10); // 4 vulnerabilities + 6 reachability
    CHECK(g.start().size() == 2);

    auto hand = fixtures::toy_graph();
    CHECK(risk(g) == doctest::Approx(risk(hand.graph)));
    auto r1 = reach(g);
    auto r2 = reach(hand.graph);
    CHECK(r1.value == doctest::Approx(r2.value));
}
