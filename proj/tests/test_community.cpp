#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "infmax/community.hpp"
#include "infmax/random.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using infmax::CommunityId;
using infmax::CommunityPartition;
using infmax::Graph;
using infmax::NodeId;

namespace {

/// Hand-built partition over explicit member lists (for budget tests that
/// should not depend on the detector).
CommunityPartition manual_partition(const Graph& g, const std::vector<std::vector<NodeId>>& groups) {
    CommunityPartition p;
    p.assignment.assign(g.node_count(), 0);
    p.communities = groups;
    for (CommunityId c = 0; c < groups.size(); ++c)
        for (NodeId v : groups[c]) p.assignment[v] = c;
    p.modularity = infmax::modularity(g, p.assignment);
    return p;
}

}  // namespace

TEST_CASE("two disjoint triangles split into two communities") {
    const Graph g = Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    const auto part = infmax::louvain(g);
    REQUIRE(part.communities.size() == 2);
    CHECK(part.communities[0] == std::vector<NodeId>{0, 1, 2});
    CHECK(part.communities[1] == std::vector<NodeId>{3, 4, 5});
}

TEST_CASE("a clique collapses into one community") {
    const auto part = infmax::louvain(testgen::complete_graph(5));
    CHECK(part.communities.size() == 1);
    CHECK(part.modularity == doctest::Approx(0.0));
}

TEST_CASE("two bridged cliques: known modularity") {
    const Graph g = testgen::two_cliques_with_bridge(5);
    const auto part = infmax::louvain(g);
    REQUIRE(part.communities.size() == 2);
    // 21 edges, 20 intra, both halves hold half the degree mass:
    // Q = 20/21 - 2 * (1/2)^2.
    CHECK(part.modularity == doctest::Approx(20.0 / 21.0 - 0.5).epsilon(1e-12));
    CHECK(part.modularity == doctest::Approx(oracle::modularity_direct(g, part.assignment)));
}

TEST_CASE("edgeless and single-node graphs stay singleton") {
    const auto part = infmax::louvain(Graph::from_edges(3, {}));
    CHECK(part.communities.size() == 3);
    CHECK(part.modularity == 0.0);
    const auto one = infmax::louvain(Graph::from_edges(1, {}));
    CHECK(one.communities.size() == 1);
}

TEST_CASE("modularity validates and matches the pairwise definition") {
    const Graph g = testgen::gnp(16, 0.25, 5);
    CHECK_THROWS_AS(infmax::modularity(g, std::vector<CommunityId>(3, 0)), std::invalid_argument);
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const Graph h = testgen::gnp(14, 0.3, infmax::mix_seed(71, trial));
        auto rng = infmax::make_engine(infmax::mix_seed(72, trial));
        std::uniform_int_distribution<CommunityId> pick(0, 3);
        std::vector<CommunityId> assign(h.node_count());
        for (auto& c : assign) c = pick(rng);
        CHECK(infmax::modularity(h, assign) ==
              doctest::Approx(oracle::modularity_direct(h, assign)).epsilon(1e-10));
    }
}

TEST_CASE("detection is deterministic and never below the singleton baseline") {
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const Graph g = testgen::gnp(22, 0.15, infmax::mix_seed(81, trial));
        const auto a = infmax::louvain(g);
        const auto b = infmax::louvain(g);
        CHECK(a.assignment == b.assignment);
        CHECK(a.modularity == b.modularity);
        std::vector<CommunityId> singleton(g.node_count());
        std::iota(singleton.begin(), singleton.end(), 0u);
        CHECK(a.modularity >= infmax::modularity(g, singleton));
        CHECK(a.modularity == doctest::Approx(infmax::modularity(g, a.assignment)));
        // Communities partition the nodes, members ascending.
        std::size_t covered = 0;
        for (CommunityId c = 0; c < a.communities.size(); ++c) {
            covered += a.communities[c].size();
            CHECK(std::is_sorted(a.communities[c].begin(), a.communities[c].end()));
            for (NodeId v : a.communities[c]) CHECK(a.assignment[v] == c);
        }
        CHECK(covered == g.node_count());
    }
}

TEST_CASE("planted blocks are found with high modularity") {
    const Graph g = testgen::planted_partition(4, 8, 0.9, 0.02, 99);
    const auto part = infmax::louvain(g);
    CHECK(part.communities.size() >= 2);
    CHECK(part.modularity > 0.3);
}

TEST_CASE("pruning drops exactly the inter-community edges") {
    const Graph g = testgen::two_cliques_with_bridge(5);
    const auto part = infmax::louvain(g);
    const Graph pruned = infmax::prune_intercommunity_edges(g, part);
    CHECK(pruned.node_count() == g.node_count());
    CHECK(pruned.edge_count() == g.edge_count() - 1);
    CHECK_FALSE(pruned.has_edge(0, 5));

    // Single community: nothing to prune.
    const Graph k5 = testgen::complete_graph(5);
    const Graph same = infmax::prune_intercommunity_edges(k5, infmax::louvain(k5));
    CHECK(same.edge_count() == k5.edge_count());

    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const Graph h = testgen::gnp(20, 0.2, infmax::mix_seed(91, trial));
        const auto p = infmax::louvain(h);
        const Graph q = infmax::prune_intercommunity_edges(h, p);
        for (NodeId u = 0; u < q.node_count(); ++u)
            for (NodeId v : q.neighbors(u)) {
                CHECK(p.assignment[u] == p.assignment[v]);
                CHECK(h.has_edge(u, v));
            }
        std::size_t intra = 0;
        for (NodeId u = 0; u < h.node_count(); ++u)
            for (NodeId v : h.neighbors(u))
                if (u < v && p.assignment[u] == p.assignment[v]) ++intra;
        CHECK(q.edge_count() == intra);
    }
}

TEST_CASE("significant community selection orders by size then id") {
    const Graph g = Graph::from_edges(15, {});
    std::vector<std::vector<NodeId>> groups(3);
    for (NodeId v = 0; v < 10; ++v) groups[0].push_back(v);
    for (NodeId v = 10; v < 13; ++v) groups[1].push_back(v);
    for (NodeId v = 13; v < 15; ++v) groups[2].push_back(v);
    const auto p = manual_partition(g, groups);

    CHECK(infmax::select_significant(p, 4) == std::vector<CommunityId>{0});
    CHECK(infmax::select_significant(p, 1) == std::vector<CommunityId>{0, 1, 2});
    CHECK(infmax::select_significant(p, 3) == std::vector<CommunityId>{0, 1});
    // Nothing qualifies: fall back to the single largest.
    CHECK(infmax::select_significant(p, 11) == std::vector<CommunityId>{0});
    CHECK_THROWS_AS(infmax::select_significant(p, 0), std::invalid_argument);

    // Size ties break toward the lower community id.
    std::vector<std::vector<NodeId>> even(2);
    even[0] = {0, 1, 2};
    even[1] = {3, 4, 5};
    const auto q = manual_partition(Graph::from_edges(6, {}), even);
    CHECK(infmax::select_significant(q, 1) == std::vector<CommunityId>{0, 1});
}

TEST_CASE("budget allocation follows degree-weighted largest remainder") {
    // K6 (degree mass 30) next to a 5-cycle (degree mass 10).
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < 6; ++u)
        for (NodeId v = u + 1; v < 6; ++v) edges.emplace_back(u, v);
    for (NodeId i = 0; i < 5; ++i)
        edges.emplace_back(static_cast<NodeId>(6 + i), static_cast<NodeId>(6 + (i + 1) % 5));
    const Graph g = Graph::from_edges(11, edges);
    const auto p = manual_partition(g, {{0, 1, 2, 3, 4, 5}, {6, 7, 8, 9, 10}});

    SUBCASE("single community takes everything") {
        const auto k5 = testgen::complete_graph(5);
        const auto solo = manual_partition(k5, {{0, 1, 2, 3, 4}});
        const auto plan = infmax::allocate_budgets(k5, solo, {0}, 3);
        CHECK(plan.budgets == std::vector<std::size_t>{3});
        CHECK(plan.pool.size() == 5);
    }

    SUBCASE("3 seeds split 2/1 on a 30/10 degree ratio") {
        const auto plan = infmax::allocate_budgets(g, p, {0, 1}, 3);
        CHECK(plan.budgets == std::vector<std::size_t>{2, 1});
        CHECK(plan.budget_for(0) == 2);
        CHECK(plan.budget_for(1) == 1);
        CHECK(plan.budget_for(9) == 0);
        CHECK(plan.k == 3);
    }

    SUBCASE("equal masses split evenly") {
        const Graph twin = Graph::from_edges(
            10, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4},
                 {5, 6}, {6, 7}, {5, 7}, {7, 8}, {8, 9}});
        const auto q = manual_partition(twin, {{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}});
        const auto plan = infmax::allocate_budgets(twin, q, {0, 1}, 4);
        CHECK(plan.budgets == std::vector<std::size_t>{2, 2});
    }

    SUBCASE("pool keeps only degree>1 candidates, ascending") {
        const auto plan = infmax::allocate_budgets(g, p, {0, 1}, 3);
        CHECK(plan.pool == std::vector<NodeId>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
        CHECK(std::is_sorted(plan.pool.begin(), plan.pool.end()));
        for (std::size_t i = 0; i < plan.pool.size(); ++i)
            CHECK(plan.pool_degree[i] == g.degree(plan.pool[i]));
        CHECK(plan.max_pool_degree == 5);
    }

    SUBCASE("overflowing a tiny community shifts budget to one with room") {
        // Star (one candidate: its center) plus a triangle (three candidates);
        // the star's degree mass would deserve 2 seeds it cannot host.
        std::vector<std::pair<NodeId, NodeId>> se;
        for (NodeId leaf = 1; leaf <= 9; ++leaf) se.emplace_back(0, leaf);
        se.emplace_back(10, 11);
        se.emplace_back(11, 12);
        se.emplace_back(10, 12);
        const Graph sg = Graph::from_edges(13, se);
        std::vector<std::vector<NodeId>> groups(2);
        for (NodeId v = 0; v < 10; ++v) groups[0].push_back(v);
        groups[1] = {10, 11, 12};
        const auto sp = manual_partition(sg, groups);
        const auto plan = infmax::allocate_budgets(sg, sp, {0, 1}, 3);
        CHECK(plan.budgets == std::vector<std::size_t>{1, 2});
        CHECK(plan.pool == std::vector<NodeId>{0, 10, 11, 12});
    }

    SUBCASE("a budget beyond the whole pool is infeasible") {
        CHECK_THROWS_WITH_AS(infmax::allocate_budgets(g, p, {0, 1}, 12),
                             doctest::Contains("infeasible"), std::runtime_error);
        CHECK_THROWS_AS(infmax::allocate_budgets(g, p, {0, 1}, 0), std::invalid_argument);
        CHECK_THROWS_AS(infmax::allocate_budgets(g, p, {}, 2), std::invalid_argument);
    }
}

TEST_CASE("budget plans are structurally sound on random graphs") {
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const Graph g = testgen::planted_partition(3, 8, 0.6, 0.05, infmax::mix_seed(101, trial));
        const auto part = infmax::louvain(g);
        const Graph pruned = infmax::prune_intercommunity_edges(g, part);
        const auto sig = infmax::select_significant(part, 3);
        REQUIRE(!sig.empty());
        std::size_t pool_cap = 0;
        for (CommunityId c : sig)
            for (NodeId v : part.communities[c])
                if (pruned.degree(v) > 1) ++pool_cap;
        if (pool_cap == 0) continue;
        const std::size_t k = 1 + trial % std::min<std::size_t>(pool_cap, 5);
        const auto plan = infmax::allocate_budgets(pruned, part, sig, k);

        CHECK(std::accumulate(plan.budgets.begin(), plan.budgets.end(), std::size_t{0}) == k);
        CHECK(plan.pool.size() == pool_cap);
        std::size_t indexed = 0;
        for (std::size_t i = 0; i < plan.significant.size(); ++i) {
            CHECK(plan.budgets[i] <= plan.community_pool[i].size());
            for (std::size_t idx : plan.community_pool[i]) {
                CHECK(part.assignment[plan.pool[idx]] == plan.significant[i]);
                CHECK(plan.pool_degree[idx] > 1);
                CHECK(plan.pool_degree[idx] <= plan.max_pool_degree);
                ++indexed;
            }
        }
        CHECK(indexed == plan.pool.size());
    }
}

TEST_CASE("partition CSV lists every node with its community") {
    const Graph g = Graph::from_edges(4, {{0, 1}, {2, 3}});
    const auto part = infmax::louvain(g);
    std::ostringstream out;
    infmax::write_partition_csv(g, part, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "node_label,community_id");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);
}
