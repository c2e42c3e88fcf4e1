#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "necw/construct1.hpp"
#include "necw/metric.hpp"
#include "necw/transfer.hpp"

namespace necw {

// Evaluation-style Reed-Solomon codebook of length n_s and dimension omega,
// minimum Hamming distance n_s - omega + 1.  For n_s < q the evaluation
// points are the first n_s powers of the field generator and the monomials
// run x^1..x^omega, so omega = 1 yields the generator-power row itself;
// n_s = q uses all field elements with monomials x^0..x^{omega-1}.
inline Codebook rs_codebook(const FieldPtr& f, int ns, int omega) {
    if (ns > int(f->q()))
        throw infeasible_error("Reed-Solomon needs n_s <= q (got n_s=" + std::to_string(ns) +
                               ", q=" + std::to_string(f->q()) + "); use an extension field");
    if (omega < 1 || omega > ns)
        throw validation_error("Reed-Solomon dimension must be in [1, n_s]");
    std::vector<Vec> rows;
    if (ns < int(f->q())) {
        Vec points(ns);
        for (int j = 0; j < ns; ++j) points[j] = f->pow(f->generator(), j);
        for (int i = 1; i <= omega; ++i) {
            Vec row(ns);
            for (int j = 0; j < ns; ++j) row[j] = f->pow(points[j], i);
            rows.push_back(std::move(row));
        }
    } else {
        for (int i = 0; i < omega; ++i) {
            Vec row(ns);
            for (int j = 0; j < ns; ++j) row[j] = f->pow(fel(j), i);
            rows.push_back(std::move(row));
        }
    }
    return Codebook(Matrix::from_rows(f, rows));
}

// Field size sufficient for the kernel construction to always have a free
// column available.
inline bigint kernel_sufficient_field(const Network& net, const CodeSpec& spec) {
    bigint s = 0;
    for (int t : net.sinks())
        s += big_binom(unsigned(spec.rank_target.at(t) + net.num_edges() - 2),
                       unsigned(spec.dist_target.at(t) - 1));
    return s;
}

// One forbidden hyperplane for the kernel column of a new edge.
struct KernelConstraint {
    Vec normal;             // restricted to In(tail(e)) coordinates, normalized
    Vec normal_full;        // over all existing edges, as discovered
    int sink = -1;
    std::vector<int> deleted;  // path slots deleted alongside the edge's own slot
    std::vector<int> pattern;  // error pattern (edge indices) of the solved system
};

struct FeasibleViolation {
    int sink = -1;
    std::vector<int> deleted;  // slot indices
    Vec x;                     // offending codeword
    Vec z;                     // offending error vector (current edge count)
    std::string describe(const Network& net) const {
        std::string s = "sink " + net.node_id(sink) + ", deleted slots {";
        for (std::size_t i = 0; i < deleted.size(); ++i)
            s += (i ? "," : "") + std::to_string(deleted[i] + 1);
        s += "}, error support {";
        bool first = true;
        for (std::size_t i = 0; i < z.size(); ++i)
            if (z[i]) {
                s += (first ? "" : ",") + net.edge(int(i)).id;
                first = false;
            }
        return s + "}";
    }
};

struct IterationTrace {
    int iteration = 0;
    int edge = -1;
    std::vector<KernelConstraint> constraints;  // deduplicated, discovery order
    Vec kernel;                                 // chosen column on In(tail(e))
};

// State of the edge-by-edge kernel construction: the transfer matrix of the
// current prefix network plus per-sink observation slots (one per chosen
// path, holding the path's most downstream edge so far).
class DistancePreservingBuilder {
public:
    // The network must be pruned: every edge on at least one chosen path.
    DistancePreservingBuilder(std::shared_ptr<const Network> net, FieldPtr field,
                              PathSet paths, Codebook code, std::map<int, int> dist_target)
        : net_(std::move(net)),
          f_(std::move(field)),
          paths_(std::move(paths)),
          code_(std::move(code)),
          dist_(std::move(dist_target)) {
        paths_.validate(*net_);
        if (int(code_.length()) != net_->ns())
            throw validation_error("codebook length != n_s");
        for (int e = 0; e < net_->num_edges(); ++e) {
            bool on_path = e < net_->ns();
            for (const auto& [t, list] : paths_.paths)
                for (const auto& p : list)
                    if (std::find(p.begin(), p.end(), e) != p.end()) on_path = true;
            if (!on_path)
                throw validation_error("edge '" + net_->edge(e).id +
                                       "' is on no chosen path; prune the network first");
        }
        F_ = Matrix::identity(f_, net_->ns());
        for (const auto& [t, list] : paths_.paths) {
            auto& slots = slots_[t];
            for (const auto& p : list) slots.push_back(p.front());
        }
        check_initial_distance();
    }

    int iteration() const { return iter_; }
    int current_edge_count() const { return net_->ns() + iter_; }
    bool complete() const { return current_edge_count() == net_->num_edges(); }
    const Matrix& transfer() const { return F_; }
    const std::map<int, std::vector<int>>& slots() const { return slots_; }
    const KernelSet& kernels() const { return kernels_; }
    const Codebook& codebook() const { return code_; }

    // Forbidden hyperplanes for the next edge's kernel column.  With
    // only_empty_deletion set, only the no-deletion instances are collected
    // (deliberately weaker; exists to demonstrate why the deletions matter).
    std::vector<KernelConstraint> forbidden_constraints(bool only_empty_deletion = false) const {
        int e = current_edge_count();
        if (complete()) throw validation_error("construction already complete");
        const auto& ins = net_->in_edges(net_->edge(e).tail);
        int ne_prev = current_edge_count();  // edges existing before e
        std::vector<KernelConstraint> out;
        std::set<Vec> seen;

        for (int t : net_->sinks()) {
            auto pit = paths_.paths.find(t);
            if (pit == paths_.paths.end()) continue;
            int j = path_through(t, e);
            if (j < 0) continue;  // the new edge feeds this sink through no path
            int rt = int(pit->second.size());
            int dt = dist_.at(t);

            std::vector<int> other_slots;
            for (int c = 0; c < rt; ++c)
                if (c != j) other_slots.push_back(c);

            for (int lsize = 0; lsize <= dt - 1; ++lsize) {
                if (only_empty_deletion && lsize > 0) break;
                for (SubsetIter lit(int(other_slots.size()), lsize); !lit.done(); lit.next()) {
                    std::vector<int> L;
                    for (int idx : lit.get()) L.push_back(other_slots[idx]);
                    int rho_size = dt - 1 - lsize;
                    for (SubsetIter rit(ne_prev, rho_size); !rit.done(); rit.next()) {
                        const auto& rho = rit.get();
                        auto c = solve_pattern(t, j, L, rho);
                        if (!c) continue;
                        Vec restricted(ins.size());
                        for (std::size_t i = 0; i < ins.size(); ++i)
                            restricted[i] = c->normal_full[ins[i]];
                        if (is_zero(restricted))
                            throw error(
                                "internal: constraint normal vanishes on the input edges");
                        c->normal = projective_normalize(f_, restricted);
                        c->sink = t;
                        c->deleted = L;
                        if (seen.insert(c->normal).second) out.push_back(std::move(*c));
                    }
                }
            }
        }
        return out;
    }

    // Picks a kernel column off every forbidden hyperplane (first unit column
    // when there is nothing to avoid).
    Vec choose_kernel(const std::vector<KernelConstraint>& constraints) const {
        int e = current_edge_count();
        const auto& ins = net_->in_edges(net_->edge(e).tail);
        if (ins.empty())
            throw infeasible_error("edge '" + net_->edge(e).id +
                                   "' leaves a node with no inputs");
        std::vector<Vec> normals;
        for (const auto& c : constraints) normals.push_back(c.normal);
        auto k = avoid_hyperplanes(f_, int(ins.size()), normals);
        if (!k)
            throw infeasible_error(
                "no kernel column avoids all " + std::to_string(constraints.size()) +
                " constraints at edge '" + net_->edge(e).id + "' over GF(" +
                std::to_string(f_->q()) + ")");
        return *k;
    }

    // Installs the kernel column for the next edge and advances the state.
    void apply_kernel(const Vec& column, const std::vector<KernelConstraint>& constraints) {
        int e = current_edge_count();
        const auto& ins = net_->in_edges(net_->edge(e).tail);
        if (column.size() != ins.size())
            throw validation_error("kernel column length != in-degree");
        for (const auto& c : constraints)
            if (dot(f_, c.normal, column) == 0)
                throw validation_error("kernel column for edge '" + net_->edge(e).id +
                                       "' lies on a forbidden hyperplane (sink " +
                                       net_->node_id(c.sink) + ")");
        Vec full(current_edge_count(), 0);
        for (std::size_t i = 0; i < ins.size(); ++i) full[ins[i]] = column[i];
        F_ = block_update(F_, full);
        for (std::size_t i = 0; i < ins.size(); ++i) kernels_.set(ins[i], e, column[i]);
        for (auto& [t, slots] : slots_) {
            int j = path_through(t, e);
            if (j >= 0) slots[j] = e;
        }
        ++iter_;
    }

    // Exhaustively verifies the distance-preservation invariant on the
    // current prefix: no nonzero codeword plus small error may vanish on all
    // undeleted slots, for every deletion set smaller than the distance
    // demand.  Scaling-invariant, so one codeword per projective class.
    std::optional<FeasibleViolation> feasible_check(Budget& budget) const {
        int ne = current_edge_count();
        for (int t : net_->sinks()) {
            auto pit = paths_.paths.find(t);
            if (pit == paths_.paths.end()) continue;
            int rt = int(pit->second.size());
            int dt = dist_.at(t);
            const auto& slots = slots_.at(t);

            for (const Vec& u : code_.projective_messages()) {
                Vec x = code_.encode(u);
                Vec xpad(ne, 0);
                for (int i = 0; i < net_->ns(); ++i) xpad[i] = x[i];
                Vec base(rt);  // x's observation
                for (int c = 0; c < rt; ++c)
                    base[c] = dot(f_, xpad, F_.col(slots[c]));

                for (int lsize = 0; lsize <= dt - 1; ++lsize) {
                    for (SubsetIter lit(rt, lsize); !lit.done(); lit.next()) {
                        std::vector<int> L(lit.get());
                        int wmax = dt - 1 - lsize;
                        for (int w = 0; w <= wmax; ++w) {
                            for (SubsetIter rit(ne, w); !rit.done(); rit.next()) {
                                const auto& rho = rit.get();
                                Vec vals(w, 1);
                                while (true) {
                                    budget.charge();
                                    bool nonzero = false;
                                    for (int c = 0; c < rt && !nonzero; ++c) {
                                        if (std::find(L.begin(), L.end(), c) != L.end())
                                            continue;
                                        fel y = base[c];
                                        for (int i = 0; i < w; ++i)
                                            y = f_->sub(y, f_->mul(vals[i],
                                                                   F_.at(rho[i], slots[c])));
                                        if (y) nonzero = true;
                                    }
                                    if (!nonzero) {
                                        FeasibleViolation v;
                                        v.sink = t;
                                        v.deleted = L;
                                        v.x = x;
                                        v.z = Vec(ne, 0);
                                        for (int i = 0; i < w; ++i) v.z[rho[i]] = vals[i];
                                        return v;
                                    }
                                    int pos = 0;
                                    while (pos < w && vals[pos] == f_->q() - 1)
                                        vals[pos++] = 1;
                                    if (pos == w) break;
                                    ++vals[pos];
                                }
                            }
                        }
                    }
                }
            }
        }
        return std::nullopt;
    }

private:
    // Path index of sink t through edge e, or -1.
    int path_through(int t, int e) const {
        auto pit = paths_.paths.find(t);
        if (pit == paths_.paths.end()) return -1;
        for (std::size_t j = 0; j < pit->second.size(); ++j)
            if (std::find(pit->second[j].begin(), pit->second[j].end(), e) !=
                pit->second[j].end())
                return int(j);
        return -1;
    }

    // The codebook must clear the distance demands on the initial prefix,
    // where sink t observes the codeword restricted to its r_t slots.
    void check_initial_distance() const {
        for (const auto& [t, slots] : slots_) {
            int dt = dist_.at(t);
            int best = -1;
            for (const Vec& u : code_.projective_messages()) {
                Vec x = code_.encode(u);
                int w = 0;
                for (int s : slots) w += (x[s] != 0);
                if (best < 0 || w < best) best = w;
            }
            if (best >= 0 && best < dt)
                throw infeasible_error("codebook has initial distance " + std::to_string(best) +
                                       " < demanded " + std::to_string(dt) + " at sink '" +
                                       net_->node_id(t) + "'");
        }
    }

    // Solves for a codeword/error pair invisible on the undeleted slots
    // (excluding j), over errors matching the pattern.  Returns the
    // discovered forbidden normal, or nothing when only trivial or pure-error
    // solutions exist.
    std::optional<KernelConstraint> solve_pattern(int t, int j, const std::vector<int>& L,
                                                  const std::vector<int>& rho) const {
        int ne = current_edge_count();
        int omega = int(code_.dim());
        int nvars = omega + int(rho.size());
        const auto& slots = slots_.at(t);
        int rt = int(slots.size());

        std::vector<int> kept;
        for (int c = 0; c < rt; ++c) {
            if (c == j) continue;
            if (std::find(L.begin(), L.end(), c) != L.end()) continue;
            kept.push_back(c);
        }

        // Unknowns (u, z_rho); one column per kept slot.
        Matrix sys(f_, nvars, kept.size());
        for (int a = 0; a < omega; ++a) {
            Vec gpad(ne, 0);
            for (int i = 0; i < net_->ns(); ++i) gpad[i] = code_.gen.at(a, i);
            for (std::size_t c = 0; c < kept.size(); ++c)
                sys.at(a, c) = dot(f_, gpad, F_.col(slots[kept[c]]));
        }
        for (std::size_t p = 0; p < rho.size(); ++p)
            for (std::size_t c = 0; c < kept.size(); ++c)
                sys.at(omega + p, c) = f_->neg(F_.at(rho[p], slots[kept[c]]));

        auto basis = sys.left_null_basis();
        if (basis.empty()) return std::nullopt;
        if (basis.size() > 1)
            throw infeasible_error(
                "solution space of the invisibility system has dimension " +
                std::to_string(basis.size()) +
                " > 1; the distance-preservation invariant did not hold before this edge");
        const Vec& sol = basis[0];
        Vec u(sol.begin(), sol.begin() + omega);
        if (is_zero(u)) return std::nullopt;  // pure-error solution: no codeword involved

        // A genuine witness has full support on the pattern; anything less
        // would contradict the invariant at the previous iteration.
        for (std::size_t p = 0; p < rho.size(); ++p)
            if (sol[omega + p] == 0)
                throw infeasible_error(
                    "invisibility witness misses part of its error pattern; the "
                    "distance-preservation invariant did not hold before this edge");

        Vec x = code_.encode(u);
        Vec xz(ne, 0);
        for (int i = 0; i < net_->ns(); ++i) xz[i] = x[i];
        for (std::size_t p = 0; p < rho.size(); ++p)
            xz[rho[p]] = f_->sub(xz[rho[p]], sol[omega + p]);

        KernelConstraint c;
        c.normal_full = vec_mat(f_, xz, F_);
        c.pattern = rho;
        return c;
    }

    std::shared_ptr<const Network> net_;
    FieldPtr f_;
    PathSet paths_;
    Codebook code_;
    std::map<int, int> dist_;
    int iter_ = 0;
    Matrix F_;
    std::map<int, std::vector<int>> slots_;
    KernelSet kernels_;
};

struct Alg2Options {
    bool check_each_iteration = false;       // run feasible_check after every step
    bool only_empty_deletion = false;        // collect weaker constraints (demonstration)
    std::map<int, Vec> forced_kernels;       // edge index -> column, validated against
                                             // the constraints before use
    Budget* budget = nullptr;                // shared work cap; defaulted when null
};

struct Alg2Result {
    KernelSet kernels;
    std::vector<IterationTrace> trace;
};

// Runs the distance-preserving construction over every non-source edge in
// the total order.  The network must be pruned to the chosen paths.
inline Alg2Result algorithm2(std::shared_ptr<const Network> net, const FieldPtr& f,
                             const PathSet& paths, const Codebook& code,
                             const std::map<int, int>& dist_target,
                             const Alg2Options& opts = {}) {
    Budget local;
    Budget& budget = opts.budget ? *opts.budget : local;
    DistancePreservingBuilder b(net, f, paths, code, dist_target);

    Alg2Result res;
    while (!b.complete()) {
        int e = b.current_edge_count();
        IterationTrace tr;
        tr.iteration = b.iteration() + 1;
        tr.edge = e;
        tr.constraints = b.forbidden_constraints(opts.only_empty_deletion);
        auto fit = opts.forced_kernels.find(e);
        tr.kernel = fit != opts.forced_kernels.end() ? fit->second
                                                     : b.choose_kernel(tr.constraints);
        b.apply_kernel(tr.kernel, tr.constraints);
        if (opts.check_each_iteration) {
            if (auto v = b.feasible_check(budget))
                throw infeasible_error("distance-preservation invariant failed after edge '" +
                                       net->edge(e).id + "': " + v->describe(*net));
        }
        res.trace.push_back(std::move(tr));
    }
    res.kernels = b.kernels();
    return res;
}

}  // namespace necw
