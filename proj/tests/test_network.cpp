#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "necw/flow.hpp"
#include "necw/network.hpp"

using namespace necw;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(NECW_DATA_DIR) + "/" + name);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("butterfly parses with the expected shape") {
    Network net = Network::parse(slurp("butterfly.net"));
    CHECK(net.num_edges() == 9);
    CHECK(net.ns() == 2);
    CHECK(net.sinks().size() == 2);
    // Canonical order keeps the fixture labels in sequence.
    for (int i = 0; i < 9; ++i) CHECK(net.edge(i).id == "e" + std::to_string(i + 1));
}

TEST_CASE("threeflow edge order reproduces the fixture labeling") {
    Network net = Network::parse(slurp("threeflow.net"));
    CHECK(net.num_edges() == 13);
    CHECK(net.ns() == 3);
    for (int i = 0; i < 13; ++i) CHECK(net.edge(i).id == std::to_string(i + 1));
}

TEST_CASE("simple orders") {
    Network chain = Network::parse(
        "source s\nsink t\nedge a s m\nedge b m t\n");
    CHECK(chain.edge(0).id == "a");
    CHECK(chain.edge(1).id == "b");

    // Two parallel edges: input order preserved.
    Network par = Network::parse("source s\nsink t\nedge p s t\nedge q s t\n");
    CHECK(par.edge(0).id == "p");
    CHECK(par.edge(1).id == "q");
    CHECK(par.ns() == 2);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(Network::parse("source s\nsink t\nedge a s t\nedge b t s\n"),
                    validation_error);  // edge back into the source
    CHECK_THROWS_AS(
        Network::parse("source s\nsink t\nedge a s m\nedge b m n\nedge c n m\nedge d n t\n"),
        validation_error);  // cycle m -> n -> m
    CHECK_THROWS_AS(Network::parse("source s\nsink w\nedge a s t\n"), validation_error);
    CHECK_THROWS_AS(Network::parse("source s\nsink t\nedge a s t\nedge a s t\n"),
                    validation_error);  // duplicate id
    CHECK_THROWS_AS(Network::parse("sink t\nedge a s t\n"), validation_error);
    CHECK_THROWS_AS(Network::parse("source s\nedge a s t\n"), validation_error);
}

TEST_CASE("edge total order never violates reachability on random DAGs") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 4 + int(rng() % 5);
        std::vector<EdgeDef> edges;
        // Random DAG on nodes 0..n-1 (edges only forward in node index), node
        // 0 as source; shuffle edge input order.
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                if (rng() % 3 == 0 && a != 0) edges.push_back({"", a, b});
        for (int b = 1; b < n; ++b)
            if (rng() % 2 == 0) edges.push_back({"", 0, b});
        if (edges.empty()) continue;
        std::shuffle(edges.begin(), edges.end(), rng);
        for (std::size_t i = 0; i < edges.size(); ++i)
            edges[i].id = "g" + std::to_string(i);

        auto order = edge_total_order(n, edges, 0);
        REQUIRE(order.size() == edges.size());

        std::vector<int> pos(edges.size());
        for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = int(i);

        // Node reachability closure.
        std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
        for (const auto& e : edges) reach[e.tail][e.head] = true;
        for (int k = 0; k < n; ++k)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    if (reach[a][k] && reach[k][b]) reach[a][b] = true;

        for (std::size_t i = 0; i < edges.size(); ++i)
            for (std::size_t j = 0; j < edges.size(); ++j) {
                if (i == j) continue;
                // e_i strictly precedes e_j in the partial order?
                bool prec = edges[i].head == edges[j].tail ||
                            reach[edges[i].head][edges[j].tail];
                if (prec) REQUIRE(pos[i] < pos[j]);
            }
    }
}

TEST_CASE("indicator matrices") {
    Network net = Network::parse(slurp("butterfly.net"));
    auto f = Field::make(2, 1);

    Matrix all = net.indicator_matrix(f, {0, 1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(all == Matrix::identity(f, 9));

    Matrix empty = net.indicator_matrix(f, {});
    CHECK(empty.rows() == 0);
    CHECK(empty.cols() == 9);

    Matrix two = net.indicator_matrix(f, {net.edge_index("e2"), net.edge_index("e5")});
    REQUIRE(two.rows() == 2);
    CHECK(two.at(0, 1) == 1);
    CHECK(two.at(1, 4) == 1);
    // Nonzero columns form an identity: A * A^T = I.
    CHECK(two * two.transpose() == Matrix::identity(f, 2));
}

TEST_CASE("prune keeps path edges only") {
    Network net = Network::parse(slurp("threeflow.net"));
    PathSet pinned = PathSet::parse(slurp("threeflow_paths.txt"), net);
    std::map<int, int> ranks;
    for (int t : net.sinks()) ranks[t] = 3;
    PathSet ps = choose_paths(net, ranks, &pinned);
    auto pruned = prune_to_paths(net, ps);
    CHECK(pruned.net.num_edges() == 13);  // every edge is on a path

    // A dangling edge disappears.
    Network dangle = Network::parse(
        "source s\nsink t\nedge a s t\nedge b s x\n");
    PathSet one;
    one.paths[dangle.node_index("t")] = {{dangle.edge_index("a")}};
    auto d = prune_to_paths(dangle, one);
    CHECK(d.net.num_edges() == 1);
    CHECK(d.net.edge(0).id == "a");

    // Butterfly with two paths per sink keeps all nine edges.
    Network bf = Network::parse(slurp("butterfly.net"));
    std::map<int, int> r2;
    for (int t : bf.sinks()) r2[t] = 2;
    auto bps = choose_paths(bf, r2);
    CHECK(prune_to_paths(bf, bps).net.num_edges() == 9);
}

TEST_CASE("prefix networks walk the edge order and track in-slots") {
    Network net = Network::parse(slurp("butterfly.net"));
    std::map<int, int> r2;
    for (int t : net.sinks()) r2[t] = 2;
    PathSet ps = choose_paths(net, r2);

    int t = net.node_index("t"), u = net.node_index("u");
    PrefixNetwork g0 = PrefixNetwork::initial(net, ps);
    CHECK(g0.num_edges() == 2);
    CHECK(g0.in_slots.at(t) == std::vector<int>{0, 1});  // e1, e2
    CHECK(g0.in_slots.at(u) == std::vector<int>{0, 1});

    PrefixNetwork g1 = g0.expand();  // appends e3 = a->c, on u's first path
    CHECK(g1.in_slots.at(t) == std::vector<int>{0, 1});  // unchanged
    CHECK(g1.in_slots.at(u) == std::vector<int>{2, 1});  // e3, e2

    PrefixNetwork g = g0;
    while (!g.complete()) g = g.expand();
    CHECK(g.num_edges() == net.num_edges());
    // Final slots are the path-terminal edges.
    CHECK(g.in_slots.at(t) ==
          std::vector<int>{net.edge_index("e7"), net.edge_index("e6")});
    CHECK(g.in_slots.at(u) ==
          std::vector<int>{net.edge_index("e8"), net.edge_index("e9")});
}

TEST_CASE("threeflow initial slots cover the source edges") {
    Network net = Network::parse(slurp("threeflow.net"));
    PathSet pinned = PathSet::parse(slurp("threeflow_paths.txt"), net);
    std::map<int, int> ranks;
    for (int t : net.sinks()) ranks[t] = 3;
    PathSet ps = choose_paths(net, ranks, &pinned);

    PrefixNetwork g0 = PrefixNetwork::initial(net, ps);
    CHECK(g0.in_slots.at(net.node_index("t")) == std::vector<int>{0, 1, 2});
    CHECK(g0.in_slots.at(net.node_index("u")) == std::vector<int>{0, 1, 2});
}
