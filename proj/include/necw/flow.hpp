#pragma once

#include <algorithm>
#include <deque>
#include <vector>

#include "necw/network.hpp"

namespace necw {

namespace detail {

// Unit-capacity flow state: flow[e] in {0,1}.  BFS augmenting paths over the
// residual graph (forward on unused edges, backward on used ones); adjacency
// scanned in canonical edge order for determinism.
struct UnitFlow {
    const Network& net;
    std::vector<char> flow;
    std::vector<char> locked;  // pinned edges: never cancelled by augmentation

    explicit UnitFlow(const Network& n)
        : net(n), flow(n.num_edges(), 0), locked(n.num_edges(), 0) {}

    bool augment(int a, int b) {
        // parent step: (node we came from, edge used, forward?)
        struct Step {
            int prev_node = -1;
            int edge = -1;
            bool forward = true;
        };
        std::vector<Step> how(net.num_nodes());
        std::vector<char> seen(net.num_nodes(), 0);
        std::deque<int> queue{a};
        seen[a] = 1;
        while (!queue.empty() && !seen[b]) {
            int v = queue.front();
            queue.pop_front();
            for (int e : net.out_edges(v)) {
                int w = net.edge(e).head;
                if (!flow[e] && !seen[w]) {
                    seen[w] = 1;
                    how[w] = {v, e, true};
                    queue.push_back(w);
                }
            }
            for (int e : net.in_edges(v)) {
                int w = net.edge(e).tail;
                if (flow[e] && !locked[e] && !seen[w]) {
                    seen[w] = 1;
                    how[w] = {v, e, false};
                    queue.push_back(w);
                }
            }
        }
        if (!seen[b]) return false;
        for (int v = b; v != a;) {
            flow[how[v].edge] = how[v].forward ? 1 : 0;
            v = how[v].prev_node;
        }
        return true;
    }

    // Splits the flow into edge-disjoint paths from a to b, walking the
    // smallest-index unused flow edge at each node.  Pinned paths are passed
    // through verbatim and their edges excluded from the walk.
    std::vector<std::vector<int>> decompose(int a, int b,
                                            std::vector<std::vector<int>> out = {}) const {
        std::vector<char> used(net.num_edges(), 0);
        for (const auto& path : out)
            for (int e : path) used[e] = 1;
        while (true) {
            std::vector<int> path;
            int v = a;
            while (v != b) {
                int next = -1;
                for (int e : net.out_edges(v))
                    if (flow[e] && !used[e]) {
                        next = e;
                        break;
                    }
                if (next == -1) break;
                used[next] = 1;
                path.push_back(next);
                v = net.edge(next).head;
            }
            if (v != b || path.empty()) break;
            out.push_back(std::move(path));
        }
        std::sort(out.begin(), out.end(),
                  [](const auto& x, const auto& y) { return x.front() < y.front(); });
        return out;
    }
};

}  // namespace detail

// Maximum number of edge-disjoint paths from a to b.
inline int maxflow(const Network& net, int a, int b) {
    if (a == b) throw validation_error("maxflow endpoints must differ");
    detail::UnitFlow uf(net);
    int total = 0;
    while (uf.augment(a, b)) ++total;
    return total;
}

// r pairwise edge-disjoint paths from the source to a sink, ordered by first
// edge.  Pinned paths are honored verbatim and the remaining flow is routed
// around them.
inline std::vector<std::vector<int>> disjoint_paths(
    const Network& net, int sink, int r,
    const std::vector<std::vector<int>>& pinned = {}) {
    if (r < int(pinned.size()))
        throw validation_error("more pinned paths than requested paths");
    detail::UnitFlow uf(net);
    for (const auto& path : pinned) {
        int at = net.source();
        for (int e : path) {
            if (net.edge(e).tail != at)
                throw validation_error("pinned path is not connected from the source");
            if (uf.flow[e]) throw validation_error("pinned paths overlap");
            uf.flow[e] = 1;
            uf.locked[e] = 1;
            at = net.edge(e).head;
        }
        if (at != sink) throw validation_error("pinned path does not reach the sink");
    }
    int have = int(pinned.size());
    while (have < r && uf.augment(net.source(), sink)) ++have;
    if (have < r)
        throw infeasible_error("requested " + std::to_string(r) + " edge-disjoint paths to '" +
                               net.node_id(sink) + "' but only " + std::to_string(have) +
                               " exist (pinned paths held fixed)");
    auto out = uf.decompose(net.source(), sink, pinned);
    if (int(out.size()) != r)
        throw infeasible_error("flow decomposition produced " + std::to_string(out.size()) +
                               " paths, expected " + std::to_string(r));
    return out;
}

// Chooses r_t edge-disjoint paths for every sink.
inline PathSet choose_paths(const Network& net, const std::map<int, int>& rank_targets,
                            const PathSet* pinned = nullptr) {
    PathSet ps;
    for (const auto& [sink, r] : rank_targets) {
        std::vector<std::vector<int>> pin;
        if (pinned) {
            auto it = pinned->paths.find(sink);
            if (it != pinned->paths.end()) pin = it->second;
        }
        ps.paths[sink] = disjoint_paths(net, sink, r, pin);
    }
    ps.validate(net);
    return ps;
}

}  // namespace necw
