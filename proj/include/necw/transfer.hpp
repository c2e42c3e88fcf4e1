#pragma once

#include <map>
#include <memory>
#include <sstream>
#include <utility>
#include <vector>

#include "necw/network.hpp"

namespace necw {

// Local encoding kernels: beta[(e', e)] is the scalar applied to the symbol
// arriving on e' when forming the symbol sent on e.  Only pairs with
// e' in In(tail(e)) may be present; omitted pairs are zero.
struct KernelSet {
    std::map<std::pair<int, int>, fel> beta;

    fel get(int from, int to) const {
        auto it = beta.find({from, to});
        return it == beta.end() ? 0 : it->second;
    }

    void set(int from, int to, fel v) {
        if (v == 0)
            beta.erase({from, to});
        else
            beta[{from, to}] = v;
    }

    void validate(const Network& net) const {
        for (const auto& [pair, v] : beta) {
            auto [from, to] = pair;
            if (net.edge(to).tail == net.source())
                throw validation_error("kernel assigned to source out-edge '" +
                                       net.edge(to).id + "'");
            if (net.edge(from).head != net.edge(to).tail)
                throw validation_error("kernel on non-adjacent edge pair ('" +
                                       net.edge(from).id + "','" + net.edge(to).id + "')");
            (void)v;
        }
    }

    // Lines `kernel <e'> <e> <scalar>`; omitted pairs are zero.
    static KernelSet parse(const std::string& text, const Network& net, const Field& f) {
        KernelSet ks;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            std::string kw;
            if (!(ls >> kw)) continue;
            if (kw != "kernel")
                throw validation_error("unknown keyword '" + kw + "' in kernel file");
            std::string from, to, val;
            if (!(ls >> from >> to >> val))
                throw validation_error("malformed kernel line: " + line);
            ks.set(net.edge_index(from), net.edge_index(to), f.parse_scalar(val));
        }
        ks.validate(net);
        return ks;
    }

    std::string serialize(const Network& net) const {
        std::string out;
        for (const auto& [pair, v] : beta)
            out += "kernel " + net.edge(pair.first).id + " " + net.edge(pair.second).id +
                   " " + std::to_string(v) + "\n";
        return out;
    }
};

// Kernels where every node with a single incoming edge copies its received
// symbol to all out-edges.  Used as a baseline; constructions override.
inline KernelSet copy_forward_kernels(const Network& net) {
    KernelSet ks;
    for (int v = 0; v < net.num_nodes(); ++v) {
        if (v == net.source() || net.in_edges(v).size() != 1) continue;
        int in = net.in_edges(v)[0];
        for (int out : net.out_edges(v)) ks.set(in, out, 1);
    }
    return ks;
}

// One-step matrix K, transfer matrix F = (I-K)^{-1}, and the per-sink message
// and error channels.  Immutable after build.
class TransferSet {
public:
    static TransferSet build(std::shared_ptr<const Network> net, FieldPtr field,
                             const KernelSet& kernels) {
        kernels.validate(*net);
        TransferSet ts;
        ts.net_ = std::move(net);
        ts.field_ = std::move(field);
        const Network& g = *ts.net_;
        int ne = g.num_edges();

        ts.K_ = Matrix(ts.field_, ne, ne);
        for (const auto& [pair, v] : kernels.beta) ts.K_.at(pair.first, pair.second) = v;

        // F column by column along the edge order: F_j = e_j + sum_i F_i K_ij.
        // K is strictly upper triangular in that order, so each column only
        // needs earlier ones (the nilpotent expansion I + K + K^2 + ...).
        ts.F_ = Matrix(ts.field_, ne, ne);
        const auto& f = ts.field_;
        for (int j = 0; j < ne; ++j) {
            ts.F_.at(j, j) = 1;
            for (int i = 0; i < j; ++i) {
                fel k = ts.K_.at(i, j);
                if (!k) continue;
                for (int r = 0; r <= i; ++r)
                    ts.F_.at(r, j) = f->add(ts.F_.at(r, j), f->mul(ts.F_.at(r, i), k));
            }
        }

        for (int t : g.sinks()) {
            SinkChannel ch;
            ch.in_edges = g.in_edges(t);  // canonical order
            ch.Ft = ts.F_.select_cols(ch.in_edges);
            std::vector<int> outs = g.out_edges(g.source());
            ch.Fst = ch.Ft.select_rows(outs);
            ts.channels_[t] = std::move(ch);
        }
        return ts;
    }

    const Network& net() const { return *net_; }
    std::shared_ptr<const Network> net_ptr() const { return net_; }
    const FieldPtr& field() const { return field_; }
    const Matrix& K() const { return K_; }
    const Matrix& F() const { return F_; }

    // Error channel F A_{In(t)}^T: |E| x |In(t)|.
    const Matrix& error_channel(int sink) const { return channel(sink).Ft; }
    // Message channel A_{Out(s)} F A_{In(t)}^T: n_s x |In(t)|.
    const Matrix& message_channel(int sink) const { return channel(sink).Fst; }
    const std::vector<int>& sink_in_edges(int sink) const { return channel(sink).in_edges; }

    // What sink t observes for message x under error vector z.
    Vec received(int sink, const Vec& x, const Vec& z) const {
        const auto& ch = channel(sink);
        if (int(x.size()) != net_->ns()) throw validation_error("message length != n_s");
        if (int(z.size()) != net_->num_edges())
            throw validation_error("error vector length != |E|");
        Vec y = vec_mat(field_, x, ch.Fst);
        return vec_add(field_, y, vec_mat(field_, z, ch.Ft));
    }

private:
    struct SinkChannel {
        std::vector<int> in_edges;
        Matrix Ft, Fst;
    };

    const SinkChannel& channel(int sink) const {
        auto it = channels_.find(sink);
        if (it == channels_.end()) throw validation_error("node is not a sink");
        return it->second;
    }

    std::shared_ptr<const Network> net_;
    FieldPtr field_;
    Matrix K_, F_;
    std::map<int, SinkChannel> channels_;
};

// Extends an n-square transfer matrix by one edge with kernel column k:
// [[F, F k], [0, 1]].  Equals a full rebuild on the prefix network.
inline Matrix block_update(const Matrix& F_prev, const Vec& k_col) {
    if (k_col.size() != F_prev.rows())
        throw validation_error("kernel column length mismatch in block update");
    const FieldPtr& f = F_prev.field();
    std::size_t n = F_prev.rows();
    Matrix r(f, n + 1, n + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r.at(i, j) = F_prev.at(i, j);
    for (std::size_t i = 0; i < n; ++i) {
        fel s = 0;
        for (std::size_t j = 0; j < n; ++j) s = f->add(s, f->mul(F_prev.at(i, j), k_col[j]));
        r.at(i, n) = s;
    }
    r.at(n, n) = 1;
    return r;
}

}  // namespace necw
