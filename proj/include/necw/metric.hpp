#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "necw/transfer.hpp"
#include "necw/util.hpp"

namespace necw {

// A linear codebook given by a generator matrix (rows are basis codewords).
struct Codebook {
    Matrix gen;  // omega x n_s

    Codebook() = default;
    explicit Codebook(Matrix g) : gen(std::move(g)) {
        if (gen.rows() == 0) throw validation_error("codebook dimension must be positive");
        if (gen.rank() != gen.rows())
            throw validation_error("generator rows are linearly dependent");
    }

    std::size_t dim() const { return gen.rows(); }
    std::size_t length() const { return gen.cols(); }

    Vec encode(const Vec& u) const { return vec_mat(gen.field(), u, gen); }

    // All q^omega codewords, indexed by the packed message.
    std::vector<Vec> all_codewords() const {
        const FieldPtr& f = gen.field();
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < dim(); ++i) total *= f->q();
        std::vector<Vec> out;
        out.reserve(total);
        for (std::uint64_t m = 0; m < total; ++m) {
            Vec u = unpack_vector(m, f->q(), dim());
            out.push_back(encode(u));
        }
        return out;
    }

    // One message per projective class (first nonzero coordinate = 1),
    // excluding zero.  Scaling a codeword scales its sink image, so distance
    // scans only need these representatives.
    std::vector<Vec> projective_messages() const {
        const FieldPtr& f = gen.field();
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < dim(); ++i) total *= f->q();
        std::vector<Vec> out;
        for (std::uint64_t m = 1; m < total; ++m) {
            Vec u = unpack_vector(m, f->q(), dim());
            bool canonical = false;
            for (fel c : u) {
                if (!c) continue;
                canonical = (c == 1);
                break;
            }
            if (canonical) out.push_back(std::move(u));
        }
        return out;
    }

    // Rows of scalars, one codeword generator per line.
    static Codebook parse(const std::string& text, const FieldPtr& f) {
        std::vector<Vec> rows;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            Vec row;
            std::string tok;
            while (ls >> tok) row.push_back(f->parse_scalar(tok));
            if (!row.empty()) rows.push_back(std::move(row));
        }
        if (rows.empty()) throw validation_error("empty codebook file");
        return Codebook(Matrix::from_rows(f, rows));
    }

    std::string serialize() const {
        std::string out;
        for (std::size_t i = 0; i < gen.rows(); ++i) {
            for (std::size_t j = 0; j < gen.cols(); ++j) {
                if (j) out += " ";
                out += std::to_string(gen.at(i, j));
            }
            out += "\n";
        }
        return out;
    }
};

// Minimum-weight error explaining a target observation: the smallest w such
// that some z with w_H(z) = w satisfies z * M = target.  Supports are scanned
// in colexicographic order, weights ascending, first hit wins, so witnesses
// are deterministic.
struct WeightSolution {
    bool reachable = false;
    int weight = -1;
    Vec z;  // full-length witness (rows of M)
};

inline WeightSolution min_weight_solution(const Matrix& M, const Vec& target, Budget& budget,
                                          int max_weight = -1) {
    const FieldPtr& f = M.field();
    int nrows = int(M.rows());
    int cap = (max_weight < 0 || max_weight > nrows) ? nrows : max_weight;
    if (is_zero(target)) return {true, 0, Vec(nrows, 0)};
    for (int w = 1; w <= cap; ++w) {
        for (SubsetIter it(nrows, w); !it.done(); it.next()) {
            budget.charge();
            const auto& support = it.get();
            auto sol = M.select_rows(support).solve_left(target);
            if (!sol) continue;
            Vec z(nrows, 0);
            for (int i = 0; i < w; ++i) z[support[i]] = (*sol)[i];
            return {true, w, std::move(z)};
        }
    }
    return {};
}

// All observations at a sink producible by errors of weight at most c,
// packed base q.  (The image of the radius-c Hamming ball under the error
// channel.)
inline std::set<std::uint64_t> error_image(const TransferSet& ts, int sink, int c,
                                           Budget& budget) {
    const FieldPtr& f = ts.field();
    const Matrix& Ft = ts.error_channel(sink);
    int nrows = int(Ft.rows());
    std::set<std::uint64_t> out;
    out.insert(pack_vector(Vec(Ft.cols(), 0), f->q()));
    int cmax = std::min(c, nrows);
    for (int w = 1; w <= cmax; ++w) {
        for (SubsetIter it(nrows, w); !it.done(); it.next()) {
            const auto& support = it.get();
            // Odometer over the (q-1)^w nonzero values on the support.
            Vec vals(w, 1);
            while (true) {
                budget.charge();
                Vec y(Ft.cols(), 0);
                for (int i = 0; i < w; ++i)
                    for (std::size_t j = 0; j < Ft.cols(); ++j)
                        y[j] = f->add(y[j], f->mul(vals[i], Ft.at(support[i], j)));
                out.insert(pack_vector(y, f->q()));
                int pos = 0;
                while (pos < w && vals[pos] == f->q() - 1) vals[pos++] = 1;
                if (pos == w) break;
                ++vals[pos];
            }
        }
    }
    return out;
}

// Sources whose sink image is explainable by an error of weight <= d: the
// ball of radius d around zero in the sink's distance measure, packed base q.
inline std::set<std::uint64_t> confusable_with_zero(const TransferSet& ts, int sink, int d,
                                                    Budget& budget) {
    const FieldPtr& f = ts.field();
    int ns = ts.net().ns();
    double space = 1;
    for (int i = 0; i < ns; ++i) space *= f->q();
    if (space > double(1 << 24))
        throw validation_error("source space too large to enumerate (q^n_s > 2^24)");
    auto phi = error_image(ts, sink, d, budget);
    const Matrix& Fst = ts.message_channel(sink);
    std::set<std::uint64_t> out;
    std::uint64_t total = 1;
    for (int i = 0; i < ns; ++i) total *= f->q();
    for (std::uint64_t m = 0; m < total; ++m) {
        budget.charge();
        Vec x = unpack_vector(m, f->q(), ns);
        Vec img = vec_mat(f, x, Fst);
        if (phi.count(pack_vector(img, f->q()))) out.insert(m);
    }
    return out;
}

// Distance between two sources at a sink: the least error weight that maps
// one to the other's observation.  `reachable` is false only for targets
// outside the row space of the error channel, which cannot arise for
// channels derived from a transfer matrix (message rows are error rows).
inline WeightSolution sink_distance(const TransferSet& ts, int sink, const Vec& x1,
                                    const Vec& x2, Budget& budget, int max_weight = -1) {
    const FieldPtr& f = ts.field();
    Vec diff = vec_sub(f, x1, x2);
    Vec target = vec_mat(f, diff, ts.message_channel(sink));
    return min_weight_solution(ts.error_channel(sink), target, budget, max_weight);
}

struct DistanceEntry {
    std::string sink;
    int in_degree = 0;
    int rank = 0;       // rank of the message channel
    int dmin = -1;      // -1 when unreachable (degenerate channels only)
    bool degenerate = false;  // dmin == 0: distinct codewords collide
    Vec witness_x;      // nonzero codeword achieving dmin
    Vec witness_z;      // full-length error with x's image = z's image
};

// Per-sink minimum distance of a linear codebook with a verifying witness.
// Uses translation invariance: min over nonzero codewords of distance to 0.
inline DistanceEntry min_distance(const TransferSet& ts, int sink, const Codebook& code,
                                  Budget& budget) {
    if (code.dim() == 0) throw validation_error("minimum distance undefined for dimension 0");
    const FieldPtr& f = ts.field();
    DistanceEntry e;
    e.sink = ts.net().node_id(sink);
    e.in_degree = int(ts.sink_in_edges(sink).size());
    e.rank = int(ts.message_channel(sink).rank());

    int best = -1;
    for (const Vec& u : code.projective_messages()) {
        Vec x = code.encode(u);
        int cap = best < 0 ? -1 : best;  // no use searching past the current min
        auto sol = sink_distance(ts, sink, x, Vec(x.size(), 0), budget, cap);
        if (!sol.reachable) continue;
        if (best < 0 || sol.weight < best) {
            best = sol.weight;
            e.witness_x = x;
            e.witness_z = sol.z;
        }
        if (best == 0) break;
    }
    e.dmin = best;
    e.degenerate = (best == 0);
    return e;
}

struct DistanceReport {
    std::vector<DistanceEntry> rows;

    std::string table() const {
        std::ostringstream os;
        os << "sink  in_deg  rank  d_min  witness\n";
        for (const auto& r : rows) {
            os << r.sink << "     " << r.in_degree << "       " << r.rank << "     ";
            if (r.dmin < 0)
                os << "unreachable";
            else
                os << r.dmin;
            if (r.degenerate) os << "  (degenerate)";
            if (!r.witness_x.empty()) {
                os << "  x=(";
                for (std::size_t i = 0; i < r.witness_x.size(); ++i)
                    os << (i ? "," : "") << r.witness_x[i];
                os << ") z-support={";
                bool first = true;
                for (std::size_t i = 0; i < r.witness_z.size(); ++i)
                    if (r.witness_z[i]) {
                        os << (first ? "" : ",") << i + 1 << ":" << r.witness_z[i];
                        first = false;
                    }
                os << "}";
            }
            os << "\n";
        }
        return os.str();
    }
};

inline DistanceReport distance_report(const TransferSet& ts, const Codebook& code,
                                      Budget& budget) {
    DistanceReport rep;
    for (int t : ts.net().sinks()) rep.rows.push_back(min_distance(ts, t, code, budget));
    return rep;
}

}  // namespace necw
