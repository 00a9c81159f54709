#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "brute_force.hpp"
#include "mapf/rand.hpp"
#include "mapf/roadmap.hpp"
#include "mapf/sampling.hpp"

using namespace mapf;

TEST_CASE("shortest_distances matches Manhattan geodesics on unit grids") {
    auto g = build_grid(20, 20, 1.0);
    auto field = shortest_distances(g, 0);
    CHECK(field.dist[0] == 0.0);
    CHECK(field.dist[399] == doctest::Approx(38.0));  // opposite corner

    auto lonely = make_graph({{0, 0}, {1, 0}, {9, 9}}, {{0, 1}});
    auto f2 = shortest_distances(lonely, 0);
    CHECK(f2.dist[2] == kUnreachable);
}

TEST_CASE("shortest_distances agrees with Floyd-Warshall exactly") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = brute::random_test_graph(6 + trial, trial, rng);
        auto all = brute::floyd_warshall(g);
        for (int s = 0; s < g.vertex_count(); ++s) {
            auto field = shortest_distances(g, s);
            for (int v = 0; v < g.vertex_count(); ++v) {
                if (all[s][v] == kUnreachable)
                    CHECK(field.dist[v] == kUnreachable);
                else
                    CHECK(field.dist[v] == doctest::Approx(all[s][v]).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("corridor picks exactly the slack-bounded detours") {
    auto g = build_grid(5, 5, 1.0);
    const int s = 0, t = 2;  // (0,0) to (2,0)

    // Frozen from the all-pairs oracle below: the smallest nonzero detour on
    // a unit grid is 2, so slack 1.9 keeps shortest-path vertices only.
    auto tight = corridor(g, s, t, 1.9);
    CHECK(tight.vertices == std::vector<int>{0, 1, 2});

    auto all = brute::floyd_warshall(g);
    std::vector<int> expect;
    for (int q = 0; q < g.vertex_count(); ++q)
        if (all[s][q] + all[q][t] <= all[s][t] + 1.9) expect.push_back(q);
    CHECK(tight.vertices == expect);

    auto zero = corridor(g, s, t, 0.0);
    CHECK(zero.vertices == std::vector<int>{0, 1, 2});

    auto everything = corridor(g, s, t, 100.0);
    CHECK(everything.vertices.size() == 25);

    CHECK_THROWS(corridor(g, s, t, -1.0));
    auto split = make_graph({{0, 0}, {1, 0}, {5, 5}}, {{0, 1}});
    CHECK_THROWS(corridor(split, 0, 2, 1.0));
}

TEST_CASE("corridor properties: slack-monotone, covers shortest paths") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 15; ++trial) {
        auto g = brute::random_test_graph(10, 6, rng);
        int s = static_cast<int>(rng_below(rng, g.vertex_count()));
        int t = static_cast<int>(rng_below(rng, g.vertex_count()));
        auto all = brute::floyd_warshall(g);
        if (all[s][t] == kUnreachable) continue;

        auto base = corridor(g, s, t, 0.0);
        for (double slack : {0.5, 2.0, 7.5}) {
            auto wider = corridor(g, s, t, slack);
            CHECK(std::includes(wider.vertices.begin(), wider.vertices.end(),
                                base.vertices.begin(), base.vertices.end()));
            // endpoints always present
            CHECK(std::binary_search(wider.vertices.begin(),
                                     wider.vertices.end(), s));
            CHECK(std::binary_search(wider.vertices.begin(),
                                     wider.vertices.end(), t));
        }
        // every vertex on some shortest path is in the slack-0 corridor
        for (int q = 0; q < g.vertex_count(); ++q)
            if (std::abs(all[s][q] + all[q][t] - all[s][t]) <= 1e-12)
                CHECK(std::binary_search(base.vertices.begin(),
                                         base.vertices.end(), q));
    }
}

TEST_CASE("sample_target draws uniformly and independently") {
    auto g = build_grid(5, 5, 1.0);

    // singleton corridors force the goal positions
    std::vector<CorridorSet> singles{{{7}, 0.0}, {{13}, 0.0}};
    std::mt19937_64 rng(5);
    auto pts = sample_target(singles, g, rng);
    CHECK(pts[0] == g.positions[7]);
    CHECK(pts[1] == g.positions[13]);

    // chi-square uniformity over one corridor
    auto c = corridor(g, 0, 24, 2.0);
    const size_t m = c.vertices.size();
    REQUIRE(m > 3);
    std::vector<int> counts(g.vertex_count(), 0);
    std::mt19937_64 rng2(99);
    const int draws = 10000;
    std::vector<CorridorSet> one{c};
    for (int i = 0; i < draws; ++i) {
        auto p = sample_target(one, g, rng2)[0];
        for (int v : c.vertices)
            if (g.positions[v] == p) ++counts[v];
    }
    double chi2 = 0.0;
    const double expect = static_cast<double>(draws) / m;
    for (int v : c.vertices) {
        double diff = counts[v] - expect;
        chi2 += diff * diff / expect;
    }
    // df = m-1; generous 0.999 quantile bound keeps the seeded check stable
    CHECK(chi2 < 3.0 * m);

    // determinism
    std::mt19937_64 ra(4), rb(4);
    for (int i = 0; i < 50; ++i) {
        auto pa = sample_target(one, g, ra);
        auto pb = sample_target(one, g, rb);
        CHECK(pa == pb);
    }

    std::vector<CorridorSet> empty_corridor{{{}, 0.0}};
    CHECK_THROWS(sample_target(empty_corridor, g, rng));
}
