#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "necw/matrix.hpp"

namespace necw {

struct EdgeDef {
    std::string id;
    int tail = -1;
    int head = -1;
};

// Total order on the edges of a DAG extending the reachability partial order:
// an edge is ready once every in-edge of its tail is placed; among ready
// edges, source out-edges come first and ties break by input position.
// Returns input indices in placement order.  Throws on cycles.
inline std::vector<int> edge_total_order(int num_nodes, const std::vector<EdgeDef>& edges,
                                         int source) {
    std::vector<std::vector<int>> in_of(num_nodes);
    for (std::size_t i = 0; i < edges.size(); ++i) in_of[edges[i].head].push_back(int(i));

    std::vector<bool> placed(edges.size(), false);
    std::vector<int> unplaced_in(num_nodes, 0);
    for (int v = 0; v < num_nodes; ++v) unplaced_in[v] = int(in_of[v].size());

    std::vector<int> order;
    order.reserve(edges.size());
    while (order.size() < edges.size()) {
        int best = -1;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (placed[i] || unplaced_in[edges[i].tail] > 0) continue;
            if (best == -1) {
                best = int(i);
                continue;
            }
            bool i_src = edges[i].tail == source, b_src = edges[best].tail == source;
            if (i_src != b_src ? i_src : int(i) < best) best = int(i);
        }
        if (best == -1) throw validation_error("cycle detected in network");
        placed[best] = true;
        --unplaced_in[edges[best].head];
        order.push_back(best);
    }
    return order;
}

// Directed acyclic multigraph with a fixed edge total order, one source and
// one or more sinks.  Immutable after construction.
class Network {
public:
    // Line-oriented format: `node <id>`, `edge <id> <tail> <head>`,
    // `source <id>`, `sink <id>` (repeatable), `#` comments.  Nodes may also
    // be introduced implicitly by edge lines; edge listing order is the
    // tie-break order.
    static Network parse(const std::string& text) {
        std::vector<std::string> node_ids;
        std::map<std::string, int> node_idx;
        std::vector<EdgeDef> edges;
        std::set<std::string> edge_ids;
        std::string source_id;
        std::vector<std::string> sink_ids;

        auto intern = [&](const std::string& id) {
            auto it = node_idx.find(id);
            if (it != node_idx.end()) return it->second;
            node_idx[id] = int(node_ids.size());
            node_ids.push_back(id);
            return int(node_ids.size()) - 1;
        };

        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            std::string kw;
            if (!(ls >> kw)) continue;
            auto need = [&](std::string& out) {
                if (!(ls >> out))
                    throw validation_error("line " + std::to_string(lineno) + ": missing token");
            };
            if (kw == "node") {
                std::string id;
                need(id);
                intern(id);
            } else if (kw == "edge") {
                std::string id, tail, head;
                need(id), need(tail), need(head);
                if (!edge_ids.insert(id).second)
                    throw validation_error("duplicate edge identifier '" + id + "'");
                edges.push_back({id, intern(tail), intern(head)});
            } else if (kw == "source") {
                std::string id;
                need(id);
                source_id = id;
                intern(id);
            } else if (kw == "sink") {
                std::string id;
                need(id);
                sink_ids.push_back(id);
            } else {
                throw validation_error("line " + std::to_string(lineno) + ": unknown keyword '" + kw + "'");
            }
        }
        if (source_id.empty()) throw validation_error("no source declared");
        if (sink_ids.empty()) throw validation_error("no sink declared");

        std::vector<int> sinks;
        for (const auto& id : sink_ids) {
            auto it = node_idx.find(id);
            if (it == node_idx.end()) throw validation_error("unknown sink '" + id + "'");
            sinks.push_back(it->second);
        }
        return Network(std::move(node_ids), node_idx.at(source_id), std::move(sinks),
                       std::move(edges));
    }

    Network(std::vector<std::string> node_ids, int source, std::vector<int> sinks,
            std::vector<EdgeDef> edges_in_input_order)
        : node_ids_(std::move(node_ids)), source_(source), sinks_(std::move(sinks)) {
        for (const auto& e : edges_in_input_order)
            if (e.head == source_)
                throw validation_error("source has incoming edge '" + e.id + "'");
        auto order = edge_total_order(int(node_ids_.size()), edges_in_input_order, source_);
        edges_.reserve(order.size());
        for (int idx : order) edges_.push_back(edges_in_input_order[idx]);

        in_of_.assign(node_ids_.size(), {});
        out_of_.assign(node_ids_.size(), {});
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            in_of_[edges_[i].head].push_back(int(i));
            out_of_[edges_[i].tail].push_back(int(i));
        }
        for (int t : sinks_)
            if (t == source_) throw validation_error("source cannot be a sink");
    }

    int num_nodes() const { return int(node_ids_.size()); }
    int num_edges() const { return int(edges_.size()); }
    int source() const { return source_; }
    const std::vector<int>& sinks() const { return sinks_; }
    const std::string& node_id(int v) const { return node_ids_[v]; }
    const EdgeDef& edge(int i) const { return edges_[i]; }

    // n_s: the number of source out-edges; they occupy positions 0..n_s-1.
    int ns() const { return int(out_of_[source_].size()); }

    const std::vector<int>& in_edges(int v) const { return in_of_[v]; }
    const std::vector<int>& out_edges(int v) const { return out_of_[v]; }

    int node_index(const std::string& id) const {
        for (std::size_t i = 0; i < node_ids_.size(); ++i)
            if (node_ids_[i] == id) return int(i);
        throw validation_error("unknown node '" + id + "'");
    }

    int edge_index(const std::string& id) const {
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (edges_[i].id == id) return int(i);
        throw validation_error("unknown edge '" + id + "'");
    }

    bool is_sink(int v) const {
        return std::find(sinks_.begin(), sinks_.end(), v) != sinks_.end();
    }

    // Indicator matrix of an edge subset: row i has a single 1 at the column
    // of the i-th edge of rho (rho sorted by the edge order).
    Matrix indicator_matrix(const FieldPtr& f, std::vector<int> rho) const {
        std::sort(rho.begin(), rho.end());
        Matrix a(f, rho.size(), edges_.size());
        for (std::size_t i = 0; i < rho.size(); ++i) a.at(i, rho[i]) = 1;
        return a;
    }

private:
    std::vector<std::string> node_ids_;
    int source_;
    std::vector<int> sinks_;
    std::vector<EdgeDef> edges_;  // canonical order
    std::vector<std::vector<int>> in_of_, out_of_;
};

// Edge-disjoint paths chosen per sink, each path a sequence of canonical edge
// indices from a source out-edge to a sink in-edge, ordered by first edge.
struct PathSet {
    std::map<int, std::vector<std::vector<int>>> paths;  // sink node -> paths

    int rank(int sink) const {
        auto it = paths.find(sink);
        return it == paths.end() ? 0 : int(it->second.size());
    }

    void validate(const Network& net) const {
        for (const auto& [sink, ps] : paths) {
            std::set<int> used;
            for (const auto& path : ps) {
                if (path.empty()) throw validation_error("empty path");
                if (net.edge(path.front()).tail != net.source())
                    throw validation_error("path does not start at the source");
                if (net.edge(path.back()).head != sink)
                    throw validation_error("path does not end at its sink");
                for (std::size_t i = 0; i + 1 < path.size(); ++i)
                    if (net.edge(path[i]).head != net.edge(path[i + 1]).tail)
                        throw validation_error("path is not edge-connected");
                for (int e : path)
                    if (!used.insert(e).second)
                        throw validation_error("paths to one sink share edge '" +
                                               net.edge(e).id + "'");
            }
            for (std::size_t i = 0; i + 1 < ps.size(); ++i)
                if (ps[i].front() >= ps[i + 1].front())
                    throw validation_error("paths not ordered by first edge");
        }
    }

    // Serialized as `path <sink> <edge-id> <edge-id> ...` lines.
    static PathSet parse(const std::string& text, const Network& net) {
        PathSet ps;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            std::string kw;
            if (!(ls >> kw)) continue;
            if (kw != "path") throw validation_error("unknown keyword '" + kw + "' in paths file");
            std::string sink;
            ls >> sink;
            std::vector<int> path;
            std::string eid;
            while (ls >> eid) path.push_back(net.edge_index(eid));
            ps.paths[net.node_index(sink)].push_back(std::move(path));
        }
        for (auto& [sink, list] : ps.paths)
            std::sort(list.begin(), list.end(),
                      [](const auto& a, const auto& b) { return a.front() < b.front(); });
        return ps;
    }

    std::string serialize(const Network& net) const {
        std::string out;
        for (const auto& [sink, list] : paths)
            for (const auto& path : list) {
                out += "path " + net.node_id(sink);
                for (int e : path) out += " " + net.edge(e).id;
                out += "\n";
            }
        return out;
    }
};

struct PruneResult {
    Network net;
    PathSet paths;
    std::vector<int> kept;  // old canonical edge index of each surviving edge, input order
};

// Restricts the network to edges lying on at least one chosen path (the
// network code extends back with zero kernels on deleted edges).  Nodes with
// no surviving incident edge are dropped, sinks and source excepted.
inline PruneResult prune_to_paths(const Network& net, const PathSet& ps) {
    std::set<int> keep_edges;
    for (const auto& [sink, list] : ps.paths)
        for (const auto& path : list) keep_edges.insert(path.begin(), path.end());

    std::set<int> keep_nodes{net.source()};
    for (int t : net.sinks()) keep_nodes.insert(t);
    for (int e : keep_edges) {
        keep_nodes.insert(net.edge(e).tail);
        keep_nodes.insert(net.edge(e).head);
    }

    std::vector<std::string> node_ids;
    std::map<int, int> node_map;
    for (int v = 0; v < net.num_nodes(); ++v)
        if (keep_nodes.count(v)) {
            node_map[v] = int(node_ids.size());
            node_ids.push_back(net.node_id(v));
        }

    std::vector<EdgeDef> edges;
    std::vector<int> kept;
    for (int e = 0; e < net.num_edges(); ++e) {
        if (!keep_edges.count(e)) continue;
        const auto& d = net.edge(e);
        edges.push_back({d.id, node_map.at(d.tail), node_map.at(d.head)});
        kept.push_back(e);
    }

    std::vector<int> sinks;
    for (int t : net.sinks()) sinks.push_back(node_map.at(t));
    Network pruned(std::move(node_ids), node_map.at(net.source()), std::move(sinks),
                   std::move(edges));

    PathSet mapped;
    for (const auto& [sink, list] : ps.paths) {
        auto& out = mapped.paths[pruned.node_index(net.node_id(sink))];
        for (const auto& path : list) {
            std::vector<int> q;
            for (int e : path) q.push_back(pruned.edge_index(net.edge(e).id));
            out.push_back(std::move(q));
        }
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return a.front() < b.front(); });
    }
    return PruneResult{std::move(pruned), std::move(mapped), std::move(kept)};
}

// The i-th prefix network: source out-edges plus the next i edges in the
// total order, with per-sink in-edge slots tracked along the chosen paths
// (slot j holds the most downstream edge of path j present so far).
struct PrefixNetwork {
    const Network* base = nullptr;
    const PathSet* paths = nullptr;
    int i = 0;
    std::map<int, std::vector<int>> in_slots;  // sink -> per-path edge index

    static PrefixNetwork initial(const Network& net, const PathSet& ps) {
        PrefixNetwork g;
        g.base = &net;
        g.paths = &ps;
        g.i = 0;
        for (const auto& [sink, list] : ps.paths) {
            std::vector<int>& slots = g.in_slots[sink];
            for (const auto& path : list) slots.push_back(path.front());
        }
        return g;
    }

    int num_edges() const { return base->ns() + i; }
    bool complete() const { return num_edges() == base->num_edges(); }

    // Appends edge n_s + i; if it extends path j of a sink, that sink's slot
    // j moves to the new edge, otherwise the slots are unchanged.
    PrefixNetwork expand() const {
        if (complete()) throw validation_error("prefix network is already complete");
        PrefixNetwork g(*this);
        ++g.i;
        int e = base->ns() + i;  // index of the appended edge
        for (auto& [sink, slots] : g.in_slots) {
            const auto& list = paths->paths.at(sink);
            for (std::size_t j = 0; j < list.size(); ++j)
                if (std::find(list[j].begin(), list[j].end(), e) != list[j].end())
                    slots[j] = e;
        }
        return g;
    }
};

}  // namespace necw
