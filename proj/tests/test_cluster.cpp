#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fmvol/cluster.hpp"
#include "fmvol/oracle.hpp"
#include "generators.hpp"

using namespace fmvol;

namespace {

PlanOptions options(int m_override = 0, unsigned threads = 1, bool force = false) {
    PlanOptions o;
    o.m_override = m_override;
    o.threads = threads;
    o.force = force;
    return o;
}

Real rel_error(const Real& got, const Real& want) {
    return abs(got - want) / abs(want);
}

} // namespace

TEST_CASE("plan admissibility thresholds") {
    Hypergraph c4 = testgen::cycle(4);
    // Delta=2: bound 1/(2 e^4) with e^4 ~ 273/5, so max admissible 5/546
    CHECK_NOTHROW(validate_plan(c4, rat(5, 546), rat(1, 100), Mode::Graph));
    CHECK_NOTHROW(validate_plan(c4, rat(9, 1000), rat(1, 100), Mode::Graph));
    CHECK_THROWS_AS(validate_plan(c4, rat(1, 100), rat(1, 100), Mode::Graph),
                    PlanError);
    // k=2 MCS bound coincides with the graph bound
    CHECK_NOTHROW(validate_plan(c4, rat(5, 546), rat(1, 100), Mode::Mcs));
    CHECK_THROWS_AS(validate_plan(c4, rat(1, 100), rat(1, 100), Mode::Mcs),
                    PlanError);
    // force proceeds but voids the guarantee
    auto forced = validate_plan(c4, rat(1, 10), rat(1, 100), Mode::Graph,
                                options(0, 1, true));
    CHECK_FALSE(forced.guarantee);
    // k=3 MCS bound: delta^2 e4^2 (k-1)^2 Delta^3 <= 1
    Hypergraph h3(6, {{0, 1, 2}, {2, 3, 4}, {4, 5, 0}});
    CHECK(h3.max_edge_size() == 3);
    CHECK_NOTHROW(validate_plan(h3, rat(1, 400), rat(1, 100), Mode::Mcs));
    CHECK_THROWS_AS(validate_plan(h3, rat(1, 100), rat(1, 100), Mode::Mcs),
                    PlanError);
    CHECK_THROWS_AS(validate_plan(h3, rat(1, 400), rat(1, 100), Mode::Graph),
                    ArgumentError);
}

TEST_CASE("plan depth formula") {
    Hypergraph c4 = testgen::cycle(4);
    auto plan = validate_plan(c4, rat(1, 250), rat(1, 2), Mode::Graph);
    CHECK(plan.formula_m == 28); // ceil(10 ln 16)
    CHECK(plan.m == 28);
    auto shallow = validate_plan(c4, rat(1, 250), rat(1, 2), Mode::Graph,
                                 options(5));
    CHECK(shallow.m == 5);
    CHECK_FALSE(shallow.guarantee); // below the formula depth
    auto deeper = validate_plan(c4, rat(1, 250), rat(1, 2), Mode::Graph,
                                options(40));
    CHECK(deeper.m == 40);
    CHECK(deeper.guarantee);
    CHECK_THROWS_AS(validate_plan(c4, rat(1, 250), Rat(1), Mode::Graph),
                    ArgumentError);
    CHECK_THROWS_AS(validate_plan(c4, -rat(1, 250), rat(1, 100), Mode::Graph),
                    ArgumentError);
}

TEST_CASE("ursell golden values") {
    PolymerSystem sys;
    sys.supports = {VertexSet{0}, VertexSet{5}};
    sys.weights = {Rat(1), Rat(1)};
    sys.closed = {VertexSet{0, 1}, VertexSet{4, 5, 6}};
    CHECK(ursell(Cluster{{0}}, sys) == 1);
    CHECK(ursell(Cluster{{0, 0}}, sys) == -rat(1, 2));
    CHECK(ursell(Cluster{{0, 0, 0}}, sys) == rat(1, 3)); // triangle graph
    CHECK(ursell(Cluster{{0, 0, 0, 0}}, sys) == -rat(1, 4)); // K4
    // distinct compatible polymers form a disconnected incompatibility graph
    CHECK_THROWS_AS(ursell(Cluster{{0, 1}}, sys), ArgumentError);
}

TEST_CASE("C4 cluster enumeration at depth 2") {
    Hypergraph c4 = testgen::cycle(4);
    auto plan = validate_plan(c4, rat(1, 250), rat(1, 100), Mode::Graph,
                              options(2));
    auto sys = build_polymers(c4, plan);
    CHECK(sys.count() == 8); // 4 singletons + 4 adjacent pairs
    std::set<std::vector<int>> seen;
    int total_size_max = 0;
    enumerate_clusters(sys, 2, [&](const Cluster& cl) {
        CHECK(seen.insert(cl.polymer_ids).second); // exactly once
        total_size_max = std::max(total_size_max, cl.total_size(sys));
    });
    CHECK(seen.size() == 16);
    CHECK(total_size_max == 2);
}

TEST_CASE("direct and series routes agree exactly") {
    for (uint64_t seed = 1; seed <= 6; ++seed) {
        testgen::Rng rng(seed * 3);
        Hypergraph h = testgen::random_graph(rng, 5 + rng.below(4), 3, 20);
        Rat delta = Rat(1) / (e4_upper() * h.max_degree() * 2);
        for (int m : {3, 6, 8}) {
            auto plan = validate_plan(h, delta, rat(1, 100), Mode::Graph,
                                      options(m));
            auto sys = build_polymers(h, plan);
            auto direct = log_xi_direct(sys, m);
            auto series =
                log_xi_series(sys, m, active_vertices(h, delta).size());
            CHECK(direct.value == series.value);
        }
    }
}

TEST_CASE("self-cluster series reproduces the Mercator expansion") {
    // a single active vertex has one polymer; its truncated log Xi is the
    // partial sum of log(1+w), with tail |w|^{m+1}/(1-|w|)
    Hypergraph star = testgen::star(3); // only the center is active
    Rat delta = rat(1, 200);
    auto plan = validate_plan(star, delta, rat(1, 100), Mode::Graph, options(8));
    auto sys = build_polymers(star, plan);
    REQUIRE(sys.count() == 1);
    Rat w = sys.weights[0];
    auto direct = log_xi_direct(sys, 8);
    Rat partial(0);
    for (int j = 1; j <= 8; ++j) {
        Rat term = rat_pow(w, j) / j;
        partial += (j % 2 ? term : -term);
    }
    CHECK(direct.value == partial);
    // the analytic tail |w|^9/(1-|w|) sits near the 50-digit rounding floor of
    // log(1+w), so allow for that roundoff explicitly
    Real tail = to_real(rat_pow(rat_abs(w), 9) / (1 - rat_abs(w)));
    Real roundoff = Real("1e-48"); // absolute: 1 + w rounds at unit scale
    CHECK(abs(to_real(direct.value) - log(1 + to_real(w))) <= tail + roundoff);
}

TEST_CASE("oracle equivalence on small graphs") {
    for (auto make : {+[] { return testgen::cycle(3); },
                      +[] { return testgen::cycle(4); },
                      +[] { return testgen::path(4); }}) {
        Hypergraph h = make();
        for (Rat delta : {rat(1, 500), rat(1, 250)}) {
            auto plan = validate_plan(h, delta, rat(1, 100), Mode::Graph);
            auto res = approximate_volume(h, plan);
            Rat exact = volume_bruteforce(h, delta);
            CHECK(rel_error(res.volume, to_real(exact)) <= to_real(plan.epsilon));
        }
    }
}

TEST_CASE("empty polymer system: log Xi 0, Xi 1") {
    // a max-degree vertex is always active, so the empty system only arises
    // structurally; both routes must return the empty expansion
    PolymerSystem sys;
    int clusters = 0;
    enumerate_clusters(sys, 4, [&](const Cluster&) { ++clusters; });
    CHECK(clusters == 0);
    CHECK(log_xi_direct(sys, 4).value == 0);
    CHECK(log_xi_series(sys, 40, 0).value == 0);
}

TEST_CASE("single hyperedge with unit degrees") {
    Hypergraph one(3, {{0, 1, 2}});
    Rat delta = rat(1, 120);
    auto plan = validate_plan(one, delta, rat(1, 100), Mode::Mcs);
    auto res = approximate_volume(one, plan);
    // every vertex is active (deg 1 = Delta); the only cut is x <= 1 in the
    // box [0, 1+delta], so the exact volume is 1 and Xi = 1/(1+delta)
    Rat exact = volume_bruteforce(one, delta);
    CHECK(exact == 1);
    CHECK(rel_error(res.volume, to_real(exact)) <= to_real(plan.epsilon));
    CHECK(xi_bruteforce(one, delta) == Rat(1) / (1 + delta));
}

TEST_CASE("mode consistency on graphs") {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        testgen::Rng rng(seed * 11);
        Hypergraph h = testgen::random_graph(rng, 5 + rng.below(3), 3, 16);
        Rat delta = Rat(1) / (e4_upper() * h.max_degree() * 2);
        auto pg = validate_plan(h, delta, rat(1, 100), Mode::Graph, options(12));
        auto pm = validate_plan(h, delta, rat(1, 100), Mode::Mcs, options(12));
        auto vg = approximate_volume(h, pg);
        auto vm = approximate_volume(h, pm);
        CHECK(rel_error(vg.volume, vm.volume) < Real("1e-9"));
    }
}

TEST_CASE("determinism across thread counts") {
    testgen::Rng rng(5);
    Hypergraph h = testgen::random_graph(rng, 8, 3, 20);
    Rat delta = rat(1, 300);
    auto p1 = validate_plan(h, delta, rat(1, 100), Mode::Graph, options(10, 1));
    auto p4 = validate_plan(h, delta, rat(1, 100), Mode::Graph, options(10, 4));
    auto r1 = approximate_volume(h, p1);
    auto r4 = approximate_volume(h, p4);
    CHECK(r1.log_xi == r4.log_xi); // bit-identical rational
    CHECK(r1.cluster_count == r4.cluster_count);
}

TEST_CASE("KP partial-sum check on test instances") {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        testgen::Rng rng(seed * 17);
        Hypergraph h = testgen::random_graph(rng, 6 + rng.below(4), 3, 18);
        Rat delta = Rat(1) / (e4_upper() * h.max_degree());
        Real rho = to_real(rat(1, 10));
        auto plan = validate_plan(h, delta, rat(1, 100), Mode::Graph, options(6));
        auto sys = build_polymers(h, plan);
        for (int v = 0; v < h.vertex_count(); ++v) {
            // polymers within Flat-distance 1 of v, weighted e^{(1+rho)|g|}
            Real sum = 0;
            for (int i = 0; i < sys.count(); ++i)
                if (sys.closed[i].contains(v))
                    sum += to_real(rat_abs(sys.weights[i])) *
                           exp((1 + rho) * sys.supports[i].size());
            CHECK(sum <= 1);
        }
    }
}

TEST_CASE("tail bound and diagnostics") {
    Hypergraph c3 = testgen::cycle(3);
    auto plan = validate_plan(c3, rat(1, 200), rat(1, 1000), Mode::Graph);
    auto res = approximate_volume(c3, plan);
    CHECK(res.tail_bound <= to_real(plan.epsilon) / 2);
    CHECK(res.guarantee);
    CHECK(res.strategy == "series");
    CHECK(res.max_cluster_size <= plan.m);
    Rat exact = volume_bruteforce(c3, rat(1, 200));
    CHECK(rel_error(res.volume, to_real(exact)) <= to_real(plan.epsilon));
}
