#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "necw/flow.hpp"

using namespace necw;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(NECW_DATA_DIR) + "/" + name);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Brute-force maximum number of edge-disjoint a->b paths: try every subset of
// edges as a union of paths via greedy walk... simplest honest oracle: DFS
// over all ways to extend disjoint paths one at a time.
int brute_disjoint(const Network& net, int a, int b, std::set<int>& used) {
    // Find any a->b path avoiding `used` by DFS over edges; try all first
    // edges to maximize the count.
    int best = 0;
    std::vector<std::pair<int, std::vector<int>>> stack;  // (node, path)
    // Enumerate all simple edge-paths from a to b avoiding used edges, then
    // recurse.  Exponential, fine for |E| <= 13.
    std::vector<std::vector<int>> all_paths;
    std::vector<int> cur;
    std::function<void(int)> dfs = [&](int v) {
        if (v == b) {
            all_paths.push_back(cur);
            return;
        }
        for (int e : net.out_edges(v)) {
            if (used.count(e)) continue;
            used.insert(e);
            cur.push_back(e);
            dfs(net.edge(e).head);
            cur.pop_back();
            used.erase(e);
        }
    };
    dfs(a);
    for (const auto& p : all_paths) {
        for (int e : p) used.insert(e);
        int sub = 1 + brute_disjoint(net, a, b, used);
        for (int e : p) used.erase(e);
        best = std::max(best, sub);
    }
    return best;
}

int brute_maxflow(const Network& net, int a, int b) {
    std::set<int> used;
    return brute_disjoint(net, a, b, used);
}

}  // namespace

TEST_CASE("butterfly maxflow is 2 to each sink") {
    Network net = Network::parse(slurp("butterfly.net"));
    for (int t : net.sinks()) {
        CHECK(maxflow(net, net.source(), t) == 2);
        CHECK(maxflow(net, net.source(), t) == brute_maxflow(net, net.source(), t));
    }
}

TEST_CASE("threeflow maxflow is 3 to each sink") {
    Network net = Network::parse(slurp("threeflow.net"));
    for (int t : net.sinks()) CHECK(maxflow(net, net.source(), t) == 3);
}

TEST_CASE("disconnected pair has flow 0") {
    Network net =
        Network::parse("source s\nsink t\nnode x\nedge a s x\nedge b x t\nedge c s x\n");
    CHECK(maxflow(net, net.source(), net.node_index("t")) == 1);  // bottleneck x->t
    Network disc = Network::parse("source s\nsink t\nnode t\nnode x\nedge a s x\n");
    CHECK(maxflow(disc, disc.source(), disc.node_index("t")) == 0);
}

TEST_CASE("single edge path") {
    Network net = Network::parse("source s\nsink t\nedge only s t\n");
    auto ps = disjoint_paths(net, net.node_index("t"), 1);
    REQUIRE(ps.size() == 1);
    CHECK(ps[0] == std::vector<int>{0});
}

TEST_CASE("butterfly disjoint paths match the exhaustive expectation") {
    Network net = Network::parse(slurp("butterfly.net"));
    int t = net.node_index("t");
    auto ps = disjoint_paths(net, t, 2);
    REQUIRE(ps.size() == 2);
    auto id_path = [&](const std::vector<int>& p) {
        std::vector<std::string> ids;
        for (int e : p) ids.push_back(net.edge(e).id);
        return ids;
    };
    CHECK(id_path(ps[0]) == std::vector<std::string>{"e1", "e7"});
    CHECK(id_path(ps[1]) == std::vector<std::string>{"e2", "e4", "e5", "e6"});
}

TEST_CASE("pinned path is preserved verbatim") {
    Network net = Network::parse(slurp("threeflow.net"));
    PathSet pinned = PathSet::parse(slurp("threeflow_paths.txt"), net);
    int t = net.node_index("t"), u = net.node_index("u");

    auto pt = disjoint_paths(net, t, 3, pinned.paths.at(t));
    REQUIRE(pt.size() == 3);
    auto ids = [&](const std::vector<int>& p) {
        std::string s;
        for (int e : p) s += net.edge(e).id + " ";
        return s;
    };
    CHECK(ids(pt[0]) == "1 10 ");
    CHECK(ids(pt[1]) == "2 5 7 12 ");
    CHECK(ids(pt[2]) == "3 6 8 ");

    auto pu = disjoint_paths(net, u, 3, pinned.paths.at(u));
    REQUIRE(pu.size() == 3);
    CHECK(ids(pu[0]) == "1 4 6 13 ");
    CHECK(ids(pu[1]) == "2 11 ");
    CHECK(ids(pu[2]) == "3 7 9 ");
}

TEST_CASE("requests beyond maxflow are infeasible") {
    Network net = Network::parse(slurp("butterfly.net"));
    CHECK_THROWS_AS(disjoint_paths(net, net.node_index("t"), 3), infeasible_error);
}

TEST_CASE("returned paths are structurally sound") {
    Network net = Network::parse(slurp("threeflow.net"));
    for (int t : net.sinks()) {
        for (int r = 1; r <= 3; ++r) {
            auto ps = disjoint_paths(net, t, r);
            REQUIRE(int(ps.size()) == r);
            std::set<int> seen;
            for (const auto& p : ps) {
                CHECK(net.edge(p.front()).tail == net.source());
                CHECK(net.edge(p.back()).head == t);
                for (std::size_t i = 0; i + 1 < p.size(); ++i)
                    CHECK(net.edge(p[i]).head == net.edge(p[i + 1]).tail);
                for (int e : p) CHECK(seen.insert(e).second);
            }
        }
    }
}

TEST_CASE("maxflow agrees with brute force on random small DAGs") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 4 + int(rng() % 3);
        std::vector<EdgeDef> edges;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int dup = 0; dup < 1 + int(rng() % 2); ++dup)
                    if (rng() % 2 == 0 && int(edges.size()) < 12)
                        edges.push_back({"r" + std::to_string(edges.size()), a, b});
        bool touches_source = false, touches_sink = false;
        for (auto& e : edges) {
            touches_source |= e.tail == 0;
            touches_sink |= e.head == n - 1;
        }
        if (!touches_source || !touches_sink) continue;
        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back("n" + std::to_string(i));
        Network net(names, 0, {n - 1}, edges);
        CHECK(maxflow(net, 0, n - 1) == brute_maxflow(net, 0, n - 1));
    }
}
