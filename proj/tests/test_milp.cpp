#include <doctest.h>

#include <cstring>

#include "fashion/branch_and_bound.hpp"
#include "fashion/milp.hpp"
#include "support/lp_oracle.hpp"

using namespace fashion;

TEST_CASE("pure LP reduces to the simplex optimum") {
    // min -x - 2y s.t. x + y <= 4, x <= 3, y <= 2 (bounds)
    MilpProblem p;
    int x = p.add_column("x", ColKind::Continuous, 0, 3, -1);
    int y = p.add_column("y", ColKind::Continuous, 0, 2, -2);
    p.add_row("cap", RowSense::LE, 4, {{x, 1.0}, {y, 1.0}});
    auto sol = solve(p);
    CHECK(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(-6.0)); // x=2, y=2
    CHECK(sol.x[static_cast<std::size_t>(x)] == doctest::Approx(2.0));
    CHECK(sol.x[static_cast<std::size_t>(y)] == doctest::Approx(2.0));
}

TEST_CASE("infeasible bound pair is detected") {
    MilpProblem p;
    int x = p.add_column("x", ColKind::Continuous, 0, 10, 1);
    p.add_row("ge", RowSense::GE, 1, {{x, 1.0}});
    p.add_row("le", RowSense::LE, 0, {{x, 1.0}});
    auto sol = solve(p);
    CHECK(sol.status == SolveStatus::Infeasible);
}

TEST_CASE("unbounded problem throws") {
    MilpProblem p;
    p.add_column("x", ColKind::Continuous, 0, kInfinity, -1);
    CHECK_THROWS_AS(solve(p), UnboundedProblem);

    MilpProblem q;
    int x = q.add_column("x", ColKind::Continuous, -kInfinity, kInfinity, -1);
    int y = q.add_column("y", ColKind::Continuous, 0, kInfinity, 0);
    q.add_row("r", RowSense::LE, 5, {{x, 1.0}, {y, -1.0}});
    CHECK_THROWS_AS(solve(q), UnboundedProblem);
}

TEST_CASE("malformed problems are rejected") {
    MilpProblem p;
    p.add_column("x", ColKind::Continuous, 0, 1, 1);
    p.rows.push_back({"bad", RowSense::LE, 1.0, {{5, 1.0}}});
    CHECK_THROWS_AS(solve(p), MalformedProblem);
}

TEST_CASE("knapsack with 12 items matches exhaustive enumeration") {
    Rng rng(31);
    for (int round = 0; round < 10; ++round) {
        const int items = 12;
        std::vector<double> value(items), weight(items);
        for (int i = 0; i < items; ++i) {
            value[static_cast<std::size_t>(i)] = std::round(rng.uniform_real(1, 20));
            weight[static_cast<std::size_t>(i)] = std::round(rng.uniform_real(1, 12));
        }
        double cap = std::round(rng.uniform_real(10, 40));

        MilpProblem p;
        std::vector<std::pair<int, double>> row;
        for (int i = 0; i < items; ++i) {
            int j = p.add_binary("item" + std::to_string(i), -value[static_cast<std::size_t>(i)]);
            row.emplace_back(j, weight[static_cast<std::size_t>(i)]);
        }
        p.add_row("capacity", RowSense::LE, cap, row);

        double best = 0.0;
        for (int mask = 0; mask < (1 << items); ++mask) {
            double v = 0, w = 0;
            for (int i = 0; i < items; ++i)
                if (mask & (1 << i)) {
                    v += value[static_cast<std::size_t>(i)];
                    w += weight[static_cast<std::size_t>(i)];
                }
            if (w <= cap) best = std::max(best, v);
        }
        auto sol = solve(p);
        CHECK(sol.status == SolveStatus::Optimal);
        CHECK(sol.objective == doctest::Approx(-best).epsilon(1e-9));
        CHECK(sol.objective >= sol.bound - 1e-9);
    }
}

TEST_CASE("simplex matches the vertex-enumeration oracle on random LPs") {
    Rng rng(32);
    int compared = 0;
    for (int round = 0; round < 120; ++round) {
        auto p = oracles::random_milp(rng, 0, 2 + static_cast<int>(rng.uniform_index(3)),
                                      1 + static_cast<int>(rng.uniform_index(4)),
                                      rng.bernoulli(0.7));
        auto expect = oracles::lp_brute_force(p);
        auto sol = solve(p);
        if (!expect) {
            CHECK(sol.status == SolveStatus::Infeasible);
            continue;
        }
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(sol.objective == doctest::Approx(*expect).epsilon(1e-7));
        CHECK(oracles::lp_point_feasible(p, sol.x, 1e-6));
        ++compared;
    }
    CHECK(compared > 40);
}

TEST_CASE("branch and bound matches binary enumeration on random MILPs") {
    Rng rng(33);
    int compared = 0;
    for (int round = 0; round < 80; ++round) {
        int nbin = 2 + static_cast<int>(rng.uniform_index(7));
        int ncont = static_cast<int>(rng.uniform_index(3));
        int nrows = 1 + static_cast<int>(rng.uniform_index(4));
        auto p = oracles::random_milp(rng, nbin, ncont, nrows, rng.bernoulli(0.6));
        auto expect = oracles::milp_enumerate(p);
        auto sol = solve(p);
        if (!expect) {
            CHECK(sol.status == SolveStatus::Infeasible);
            continue;
        }
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(sol.objective == doctest::Approx(*expect).epsilon(1e-6));
        CHECK(oracles::lp_point_feasible(p, sol.x, 1e-5));
        CHECK(sol.objective >= sol.bound - 1e-6 * std::max(1.0, std::abs(sol.objective)));
        ++compared;
    }
    CHECK(compared > 30);
}

TEST_CASE("binaries come back integral") {
    Rng rng(34);
    for (int round = 0; round < 20; ++round) {
        auto p = oracles::random_milp(rng, 6, 2, 3, true);
        auto sol = solve(p);
        if (sol.status != SolveStatus::Optimal) continue;
        for (std::size_t j = 0; j < p.cols.size(); ++j)
            if (p.cols[j].kind == ColKind::Binary) {
                double v = sol.x[j];
                CHECK(std::abs(v - std::round(v)) <= 1e-6);
            }
    }
}

TEST_CASE("solves are deterministic") {
    Rng rng(35);
    auto p = oracles::random_milp(rng, 8, 2, 5, true);
    auto a = solve(p);
    auto b = solve(p);
    CHECK(a.status == b.status);
    CHECK(a.nodes == b.nodes);
    REQUIRE(a.x.size() == b.x.size());
    if (!a.x.empty())
        CHECK(std::memcmp(a.x.data(), b.x.data(), a.x.size() * sizeof(double)) == 0);
}

TEST_CASE("node cap surfaces as gap-limit") {
    Rng rng(36);
    auto p = oracles::random_milp(rng, 12, 0, 6, true);
    SolveLimits limits;
    limits.node_cap = 1;
    auto sol = solve(p, limits);
    CHECK((sol.status == SolveStatus::GapLimit || sol.status == SolveStatus::Optimal));
}

TEST_CASE("presolve handles fixed columns, aliases and forcing rows") {
    MilpProblem p;
    int a = p.add_binary("a", 1.0);
    int b = p.add_binary("b", 2.0);
    int c = p.add_binary("c", -1.0);
    int d = p.add_column("d", ColKind::Continuous, -10, 10, 0.5);
    p.add_row("fix", RowSense::EQ, 1, {{a, 1.0}});               // a = 1
    p.add_row("alias", RowSense::EQ, 0, {{b, 1.0}, {c, -1.0}});  // b = c
    p.add_row("force", RowSense::LE, 0, {{d, 1.0}});             // d <= 0
    auto pre = presolve(p);
    CHECK(!pre.infeasible);
    CHECK(pre.reduced.cols.size() < p.cols.size());

    auto sol = solve(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.x[static_cast<std::size_t>(a)] == doctest::Approx(1.0));
    CHECK(sol.x[static_cast<std::size_t>(b)] == sol.x[static_cast<std::size_t>(c)]);
    // b = c means cost 2 - 1 = +1 per unit, so both land at 0; d heads to its lower bound
    CHECK(sol.x[static_cast<std::size_t>(b)] == doctest::Approx(0.0));
    CHECK(sol.x[static_cast<std::size_t>(d)] == doctest::Approx(-10.0));
    CHECK(sol.objective == doctest::Approx(1.0 - 5.0));
}

TEST_CASE("presolve spots infeasibility from bounds") {
    MilpProblem p;
    int x = p.add_binary("x", 0.0);
    p.add_row("r1", RowSense::GE, 1, {{x, 1.0}});
    p.add_row("r2", RowSense::LE, 0, {{x, 1.0}});
    auto pre = presolve(p);
    CHECK(pre.infeasible);
}
