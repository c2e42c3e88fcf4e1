#pragma once

#include <map>
#include <string>
#include <vector>

#include "necw/bounds.hpp"
#include "necw/flow.hpp"
#include "necw/metric.hpp"
#include "necw/transfer.hpp"

namespace necw {

// Target parameters of a construction: codebook dimension plus per-sink rank
// and distance demands.
struct CodeSpec {
    int omega = 1;
    std::map<int, int> rank_target;  // sink node -> r_t
    std::map<int, int> dist_target;  // sink node -> d_t

    void validate(const Network& net) const {
        if (omega < 1) throw validation_error("codebook dimension must be positive");
        for (int t : net.sinks()) {
            auto rit = rank_target.find(t);
            auto dit = dist_target.find(t);
            if (rit == rank_target.end() || dit == dist_target.end())
                throw validation_error("missing rank or distance target for sink '" +
                                       net.node_id(t) + "'");
            int r = rit->second, d = dit->second;
            if (r < 1 || d < 1)
                throw validation_error("rank and distance targets must be positive");
            if (omega > r)
                throw validation_error("dimension exceeds rank target at sink '" +
                                       net.node_id(t) + "'");
            if (d > r - omega + 1)
                throw validation_error("distance target " + std::to_string(d) +
                                       " exceeds r - omega + 1 at sink '" + net.node_id(t) +
                                       "'");
            int mf = maxflow(net, net.source(), t);
            if (r > mf)
                throw infeasible_error("rank target " + std::to_string(r) + " exceeds maxflow " +
                                       std::to_string(mf) + " at sink '" + net.node_id(t) + "'");
        }
    }
};

// A vector with nonzero product against every given normal, i.e. outside the
// union of the hyperplanes they define.  Iterative scaling construction:
// start on the first normal, then patch in each later one, picking the
// scaling factor away from the finitely many bad ratios.  Deterministic.
inline std::optional<Vec> avoid_hyperplanes(const FieldPtr& f, int n,
                                            const std::vector<Vec>& normals) {
    if (n < 1) throw validation_error("avoidance needs dimension >= 1");
    auto unit_hitting = [&](const Vec& a) {
        for (int j = 0; j < n; ++j)
            if (a[j]) {
                Vec u(n, 0);
                u[j] = 1;
                return u;
            }
        throw validation_error("zero normal in hyperplane avoidance");
    };
    if (normals.empty()) {
        Vec u(n, 0);
        u[0] = 1;
        return u;
    }
    Vec u = unit_hitting(normals[0]);
    for (std::size_t i = 1; i < normals.size(); ++i) {
        if (dot(f, u, normals[i]) != 0) continue;
        Vec b = unit_hitting(normals[i]);
        std::set<fel> forbidden;
        for (std::size_t j = 0; j < i; ++j) {
            fel ua = dot(f, u, normals[j]);
            fel ba = dot(f, b, normals[j]);
            forbidden.insert(f->neg(f->div(ba, ua)));  // ua != 0 by construction
        }
        fel alpha = f->q();
        for (fel c = 0; c < f->q(); ++c)
            if (!forbidden.count(c)) {
                alpha = c;
                break;
            }
        if (alpha == f->q()) return std::nullopt;  // all scalars forbidden
        u = vec_add(f, vec_scale(f, alpha, u), b);
    }
    return u;
}

// A vector outside the union of the given subspaces (each given by basis
// rows, dimension < n).  One annihilator per subspace reduces the problem to
// hyperplane avoidance; when that runs out of scalars (more subspaces than
// field elements), falls back to an exhaustive scan while the space is small.
inline Vec avoid_subspaces(const FieldPtr& f, int n, const std::vector<Matrix>& bases) {
    std::vector<Vec> normals;
    for (const auto& b : bases) {
        if (int(b.rank()) >= n)
            throw infeasible_error("subspace to avoid spans the whole space");
        Matrix m = b.rows() ? b : Matrix(f, 0, n);
        auto null_cols = m.right_null_basis();
        if (null_cols.empty()) throw infeasible_error("no annihilator for subspace");
        normals.push_back(null_cols.front());
    }
    if (auto u = avoid_hyperplanes(f, n, normals)) return *u;

    // Exhaustive fallback: correctness first at desk scale.
    double space = 1;
    for (int i = 0; i < n; ++i) space *= f->q();
    if (space > double(1 << 20))
        throw infeasible_error("avoidance procedure exhausted the field (" +
                               std::to_string(bases.size()) +
                               " subspaces over GF(" + std::to_string(f->q()) +
                               ")) and the space is too large to scan");
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) total *= f->q();
    for (std::uint64_t m = 1; m < total; ++m) {
        Vec x = unpack_vector(m, f->q(), n);
        bool hit = false;
        for (const auto& b : bases)
            if (b.rows() ? b.in_rowspace(x) : is_zero(x)) {
                hit = true;
                break;
            }
        if (!hit) return x;
    }
    throw infeasible_error("the given subspaces cover the whole space");
}

namespace detail {

// Independent rows spanning the same row space, via echelon reduction.
inline Matrix row_basis(const Matrix& m) {
    Matrix w(m);
    std::size_t r = w.eliminate();
    Matrix out(m.field(), r, m.cols());
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = w.at(i, j);
    return out;
}

}  // namespace detail

// Local encoding kernels achieving rank(F_{s,t}) = r_t at every sink, built
// edge by edge in the total order while keeping one coding vector per chosen
// path linearly independent per sink (the Jaggi-Sanders frontier scheme).
// Expects a pruned network: every edge on at least one chosen path.
inline KernelSet build_kernels(const Network& net, const FieldPtr& f, const PathSet& paths) {
    paths.validate(net);
    int ns = net.ns();

    // Coding vector carried by each edge; source out-edge i carries unit i.
    std::vector<Vec> coding(net.num_edges(), Vec(ns, 0));
    for (int e = 0; e < ns; ++e) coding[e][e] = 1;

    // frontier[t][j]: most downstream processed edge of path j to sink t.
    std::map<int, std::vector<int>> frontier;
    for (const auto& [t, list] : paths.paths) {
        for (const auto& p : list) frontier[t].push_back(p.front());
        Matrix fr = Matrix::from_rows(f, [&] {
            std::vector<Vec> rows;
            for (int e : frontier[t]) rows.push_back(coding[e]);
            return rows;
        }());
        if (fr.rank() != fr.rows())
            throw infeasible_error("chosen paths do not start on distinct source edges");
    }

    KernelSet ks;
    for (int e = ns; e < net.num_edges(); ++e) {
        // Which (sink, path index) pairs does this edge extend?
        std::vector<std::pair<int, int>> hits;
        for (const auto& [t, list] : paths.paths)
            for (std::size_t j = 0; j < list.size(); ++j)
                if (std::find(list[j].begin(), list[j].end(), e) != list[j].end())
                    hits.push_back({t, int(j)});
        const auto& ins = net.in_edges(net.edge(e).tail);
        if (hits.empty()) continue;  // zero kernels; carries the zero vector
        if (ins.empty())
            throw infeasible_error("path edge '" + net.edge(e).id +
                                   "' leaves a node with no inputs");

        std::vector<Vec> in_rows;
        for (int ep : ins) in_rows.push_back(coding[ep]);
        Matrix G = Matrix::from_rows(f, in_rows);

        // Bad kernel columns for sink t: those sending the new coding vector
        // into the span of the other frontier vectors.
        std::vector<Matrix> bad;
        for (auto [t, j] : hits) {
            std::vector<Vec> others;
            for (std::size_t j2 = 0; j2 < frontier[t].size(); ++j2)
                if (int(j2) != j) others.push_back(coding[frontier[t][j2]]);
            Matrix B = others.empty() ? Matrix(f, 0, ns) : Matrix::from_rows(f, others);
            auto null_cols = B.right_null_basis();  // row space = {v : v N = 0}
            Matrix N(f, ns, null_cols.size());
            for (std::size_t c = 0; c < null_cols.size(); ++c)
                for (int r = 0; r < ns; ++r) N.at(r, c) = null_cols[c][r];
            Matrix GN = G * N;
            auto basis = GN.left_null_basis();  // {k : k G in rowspace(B)}
            bad.push_back(basis.empty() ? Matrix(f, 0, int(ins.size()))
                                        : Matrix::from_rows(f, basis));
        }

        Vec k = avoid_subspaces(f, int(ins.size()), bad);
        for (std::size_t i = 0; i < ins.size(); ++i) ks.set(ins[i], e, k[i]);
        coding[e] = vec_mat(f, k, G);
        for (auto [t, j] : hits) frontier[t][j] = e;

        for (auto [t, j] : hits) {
            std::vector<Vec> rows;
            for (int fe : frontier[t]) rows.push_back(coding[fe]);
            if (Matrix::from_rows(f, rows).rank() != rows.size())
                throw error("internal: frontier lost independence at edge '" +
                            net.edge(e).id + "'");
        }
    }
    return ks;
}

// Field size sufficient for the greedy codebook construction to succeed:
// anything larger than the number of avoided pattern subspaces.
inline bigint codebook_sufficient_field(const Network& net, const CodeSpec& spec) {
    bigint s = 0;
    for (int t : net.sinks()) s += big_binom(net.num_edges(), spec.dist_target.at(t) - 1);
    return s;
}

// Greedy basis extension: pick each generator row outside every sink's
// confusable-with-zero ball (decomposed into one solution subspace per error
// pattern) shifted by the span of the rows chosen so far.
inline Codebook build_codebook(const TransferSet& ts, const CodeSpec& spec, Budget& budget) {
    const FieldPtr& f = ts.field();
    const Network& net = ts.net();
    spec.validate(net);
    int ns = net.ns();

    // Per-sink pattern subspaces {x : x Fst = z Ft[rho], z matching rho}.
    std::vector<Matrix> pattern_spaces;
    std::vector<std::string> labels;
    for (int t : net.sinks()) {
        int d = spec.dist_target.at(t);
        const Matrix& Fst = ts.message_channel(t);
        const Matrix& Ft = ts.error_channel(t);
        for (SubsetIter it(net.num_edges(), d - 1); !it.done(); it.next()) {
            budget.charge();
            const auto& rho = it.get();
            Matrix sys(f, ns + d - 1, Ft.cols());
            for (int i = 0; i < ns; ++i)
                for (std::size_t c = 0; c < Ft.cols(); ++c) sys.at(i, c) = Fst.at(i, c);
            for (int i = 0; i < d - 1; ++i)
                for (std::size_t c = 0; c < Ft.cols(); ++c)
                    sys.at(ns + i, c) = f->neg(Ft.at(rho[i], c));
            auto sols = sys.left_null_basis();
            std::vector<Vec> xs;
            for (const auto& s : sols) xs.push_back(Vec(s.begin(), s.begin() + ns));
            Matrix proj = xs.empty() ? Matrix(f, 0, ns)
                                     : detail::row_basis(Matrix::from_rows(f, xs));
            pattern_spaces.push_back(std::move(proj));
            std::string lab = net.node_id(t) + "/{";
            for (std::size_t i = 0; i < rho.size(); ++i)
                lab += (i ? "," : "") + net.edge(rho[i]).id;
            labels.push_back(lab + "}");
        }
    }

    std::vector<Vec> gens;
    for (int i = 0; i < spec.omega; ++i) {
        std::vector<Matrix> avoid;
        for (std::size_t s = 0; s < pattern_spaces.size(); ++s) {
            std::vector<Vec> rows;
            for (std::size_t r = 0; r < pattern_spaces[s].rows(); ++r)
                rows.push_back(pattern_spaces[s].row(r));
            for (const auto& g : gens) rows.push_back(g);
            Matrix w = rows.empty() ? Matrix(f, 0, ns)
                                    : detail::row_basis(Matrix::from_rows(f, rows));
            if (int(w.rows()) >= ns)
                throw infeasible_error(
                    "no eligible generator at row " + std::to_string(i + 1) +
                    ": pattern subspace " + labels[s] +
                    " plus the rows so far covers the space (a larger field than " +
                    std::to_string(f->q()) + " may be needed; " +
                    codebook_sufficient_field(net, spec).str() + " + 1 always suffices)");
            avoid.push_back(std::move(w));
        }
        gens.push_back(avoid_subspaces(f, ns, avoid));
    }
    return Codebook(Matrix::from_rows(f, gens));
}

// Greedy maximal codebook (not necessarily linear): scan all sources in
// packed order and keep those at distance >= d_t from everything kept so
// far, at every sink.  Maximality is what the sphere-covering bound needs.
inline std::vector<Vec> greedy_codebook(const TransferSet& ts,
                                        const std::map<int, int>& dist_target,
                                        Budget& budget) {
    const FieldPtr& f = ts.field();
    int ns = ts.net().ns();
    std::uint64_t total = 1;
    for (int i = 0; i < ns; ++i) {
        total *= f->q();
        if (total > (1 << 20)) throw validation_error("source space too large for greedy scan");
    }
    std::vector<Vec> keep;
    for (std::uint64_t m = 0; m < total; ++m) {
        Vec x = unpack_vector(m, f->q(), ns);
        bool ok = true;
        for (const auto& c : keep) {
            for (const auto& [t, d] : dist_target) {
                auto sol = sink_distance(ts, t, x, c, budget, d - 1);
                if (sol.reachable) {  // within d-1: too close
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        if (ok) keep.push_back(std::move(x));
    }
    return keep;
}

}  // namespace necw
