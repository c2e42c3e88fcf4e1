#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "necw/metric.hpp"

namespace necw {

enum class DecodeKind { decoded, detected };

struct DecodeOutcome {
    DecodeKind kind = DecodeKind::detected;
    Vec message;         // valid when kind == decoded
    int weight = -1;     // weight of the minimum-weight explanation found
};

// Minimum-weight decoder: finds the least error weight explaining the
// received vector with any codeword, and outputs the message if all
// minimum-weight explanations agree on it; otherwise flags an error.
inline DecodeOutcome min_weight_decode(const TransferSet& ts, int sink, const Codebook& code,
                                       const Vec& y, Budget& budget) {
    const FieldPtr& f = ts.field();
    if (y.size() != ts.message_channel(sink).cols())
        throw validation_error("received vector length mismatch");

    // Minimum explanation weight per codeword, tracked level by level.
    int best = -1;
    std::vector<Vec> best_messages;
    for (const auto& x : code.all_codewords()) {
        Vec v = vec_sub(f, y, vec_mat(f, x, ts.message_channel(sink)));
        int cap = best < 0 ? -1 : best;
        auto sol = min_weight_solution(ts.error_channel(sink), v, budget, cap);
        if (!sol.reachable) continue;
        if (best < 0 || sol.weight < best) {
            best = sol.weight;
            best_messages.clear();
        }
        if (sol.weight == best) best_messages.push_back(x);
    }
    if (best < 0) return {DecodeKind::detected, {}, -1};

    // Distinct codewords at the minimum weight: ambiguous.
    for (std::size_t i = 1; i < best_messages.size(); ++i)
        if (best_messages[i] != best_messages[0]) return {DecodeKind::detected, {}, best};
    return {DecodeKind::decoded, best_messages[0], best};
}

// Decoding-sphere membership decoder of radius c.  Construction verifies the
// spheres are pairwise disjoint (equivalent to d_min >= 2c+1) and otherwise
// reports a colliding pair of codewords with a vector in both spheres.
class SphereDecoder {
public:
    static SphereDecoder make(const TransferSet& ts, int sink, const Codebook& code, int c,
                              Budget& budget) {
        if (c < 0) throw validation_error("decoding radius must be nonnegative");
        auto entry = min_distance(ts, sink, code, budget);
        if (entry.dmin >= 0 && entry.dmin < 2 * c + 1) {
            // Split the witness error into two radius-c halves meeting in the
            // middle: a vector inside both spheres.
            const FieldPtr& f = ts.field();
            Vec z1(entry.witness_z.size(), 0), z2(entry.witness_z.size(), 0);
            int moved = 0;
            for (std::size_t i = 0; i < entry.witness_z.size(); ++i) {
                if (!entry.witness_z[i]) continue;
                if (moved < c) {
                    z1[i] = entry.witness_z[i];
                    ++moved;
                } else {
                    z2[i] = entry.witness_z[i];
                }
            }
            std::ostringstream os;
            os << "decoding spheres of radius " << c << " intersect at sink '"
               << ts.net().node_id(sink) << "': codewords 0 and (";
            for (std::size_t i = 0; i < entry.witness_x.size(); ++i)
                os << (i ? "," : "") << entry.witness_x[i];
            os << ") share an observation reachable with weights " << hamming_weight(z1)
               << " and " << hamming_weight(z2) << " (d_min = " << entry.dmin << " < "
               << 2 * c + 1 << ")";
            throw validation_error(os.str());
        }
        return SphereDecoder(ts, sink, code, c);
    }

    DecodeOutcome decode(const Vec& y, Budget& budget) const {
        const FieldPtr& f = ts_->field();
        for (const auto& x : code_->all_codewords()) {
            Vec v = vec_sub(f, y, vec_mat(f, x, ts_->message_channel(sink_)));
            auto sol = min_weight_solution(ts_->error_channel(sink_), v, budget, c_);
            if (sol.reachable) return {DecodeKind::decoded, x, sol.weight};
        }
        return {DecodeKind::detected, {}, -1};
    }

    int radius() const { return c_; }

private:
    SphereDecoder(const TransferSet& ts, int sink, const Codebook& code, int c)
        : ts_(&ts), sink_(sink), code_(&code), c_(c) {}

    const TransferSet* ts_;
    int sink_;
    const Codebook* code_;
    int c_;
};

enum class Decoder { min_weight, sphere };

struct SweepRow {
    int weight = 0;
    std::uint64_t trials = 0;
    std::uint64_t corrected = 0;     // decoder output equals the sent message
    std::uint64_t detected = 0;      // decoder flagged an error
    std::uint64_t miscorrected = 0;  // decoder output a wrong message
};

struct SweepReport {
    std::map<std::string, std::vector<SweepRow>> per_sink;

    std::string table() const {
        std::ostringstream os;
        os << "sink  weight  trials  corrected  detected  miscorrected\n";
        for (const auto& [sink, rows] : per_sink)
            for (const auto& r : rows)
                os << sink << "     " << r.weight << "       " << r.trials << "       "
                   << r.corrected << "          " << r.detected << "         "
                   << r.miscorrected << "\n";
        return os.str();
    }
};

// Exhaustive error-injection experiment: every (codeword, error) pair with
// error weight up to wmax, per sink.  An error invisible at the sink counts
// as corrected when the decoder returns the true message.
inline SweepReport error_sweep(const TransferSet& ts, const Codebook& code,
                               const std::vector<int>& sinks, int wmax, Budget& budget,
                               Decoder which = Decoder::min_weight, int sphere_radius = 0) {
    const FieldPtr& f = ts.field();
    int ne = ts.net().num_edges();
    SweepReport rep;
    for (int t : sinks) {
        std::optional<SphereDecoder> sphere;
        if (which == Decoder::sphere)
            sphere = SphereDecoder::make(ts, t, code, sphere_radius, budget);
        auto& rows = rep.per_sink[ts.net().node_id(t)];
        auto codewords = code.all_codewords();
        for (int w = 0; w <= wmax; ++w) {
            SweepRow row;
            row.weight = w;
            for (SubsetIter it(ne, w); !it.done(); it.next()) {
                const auto& support = it.get();
                Vec vals(w, 1);
                while (true) {
                    Vec z(ne, 0);
                    for (int i = 0; i < w; ++i) z[support[i]] = vals[i];
                    for (std::size_t ci = 0; ci < codewords.size(); ++ci) {
                        budget.charge();
                        const Vec& x = codewords[ci];
                        Vec y = ts.received(t, x, z);
                        DecodeOutcome out = which == Decoder::sphere
                                                ? sphere->decode(y, budget)
                                                : min_weight_decode(ts, t, code, y, budget);
                        ++row.trials;
                        if (out.kind == DecodeKind::detected)
                            ++row.detected;
                        else if (out.message == x)
                            ++row.corrected;
                        else
                            ++row.miscorrected;
                    }
                    int pos = 0;
                    while (pos < w && vals[pos] == f->q() - 1) vals[pos++] = 1;
                    if (pos == w) break;
                    ++vals[pos];
                }
                if (w == 0) break;  // single empty support
            }
            rows.push_back(row);
        }
    }
    return rep;
}

}  // namespace necw
