#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "necw/flow.hpp"
#include "necw/metric.hpp"

namespace necw {

// Bounds are exact integers/rationals; no floats, no rounding disputes.
using bigint = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;

inline bigint big_binom(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    bigint r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

inline bigint big_pow(bigint base, unsigned e) {
    bigint r = 1;
    while (e--) r *= base;
    return r;
}

// Ball-volume denominator of the Hamming bound: sum of binom(m,i)(q-1)^i for
// i up to tau.
inline bigint hamming_ball(unsigned q, unsigned m, unsigned tau) {
    bigint s = 0;
    for (unsigned i = 0; i <= tau; ++i) s += big_binom(m, i) * big_pow(q - 1, i);
    return s;
}

// Per-sink Hamming-type upper bound on |C|: q^r / ball(r, floor((d-1)/2)).
inline bigrat refined_hamming_bound(unsigned q, unsigned r, unsigned dmin) {
    if (dmin < 1 || r < 1) throw validation_error("Hamming bound needs d >= 1 and r >= 1");
    unsigned tau = (dmin - 1) / 2;
    return bigrat(big_pow(q, r), hamming_ball(q, r, tau));
}

// Per-sink Singleton-type upper bound on |C|: q^(r - d + 1).
inline bigint refined_singleton_bound(unsigned q, unsigned r, unsigned dmin) {
    if (dmin > r + 1)
        throw infeasible_error("d_min exceeds rank + 1; no nonempty codebook exists");
    return big_pow(q, r - dmin + 1);
}

// Exact sphere-packing upper bound using the enumerated image size:
// q^r / |image of radius-tau ball|.  Never looser than the Hamming form.
inline bigrat sphere_packing_bound(const TransferSet& ts, int sink, unsigned dmin,
                                   Budget& budget) {
    unsigned tau = (dmin - 1) / 2;
    unsigned r = unsigned(ts.message_channel(sink).rank());
    auto phi = error_image(ts, sink, int(tau), budget);
    return bigrat(big_pow(ts.field()->q(), r), bigint(phi.size()));
}

struct GilbertVarshamov {
    bigint confusable_union_size;  // |union over sinks of radius-(d_t - 1) balls|
    bigrat gilbert;                // lower bound on max |C|
    int varshamov_dim;             // guaranteed achievable linear dimension
    bool log_exact;                // union size is an exact power of q
};

// Sphere-covering lower bounds for a given kernel set and per-sink distance
// demands.  Gilbert: q^{n_s} / |union|.  Varshamov: dimensions up to
// n_s - log_q |union| are achievable; reported as the integer ceiling since
// dimensions are integers.
inline GilbertVarshamov gilbert_varshamov(const TransferSet& ts,
                                          const std::map<int, int>& dist_target,
                                          Budget& budget) {
    const FieldPtr& f = ts.field();
    int ns = ts.net().ns();
    std::set<std::uint64_t> all;
    for (const auto& [sink, d] : dist_target) {
        auto part = confusable_with_zero(ts, sink, d - 1, budget);
        all.insert(part.begin(), part.end());
    }
    GilbertVarshamov gv;
    gv.confusable_union_size = bigint(all.size());
    gv.gilbert = bigrat(big_pow(f->q(), ns), gv.confusable_union_size);

    // Smallest k with q^k * |union| >= q^{n_s}; dimensions >= ceil were not
    // excluded, so the greedy linear construction reaches at least this.
    bigint target = big_pow(f->q(), ns);
    bigint acc = gv.confusable_union_size;
    int k = 0;
    while (acc < target) {
        acc *= f->q();
        ++k;
    }
    gv.varshamov_dim = k;
    gv.log_exact = (acc == target);  // union size is exactly q^(n_s - k)
    return gv;
}

struct SinkBounds {
    std::string sink;
    int in_degree = 0;
    unsigned rank = 0;
    unsigned dmin = 0;
    bigrat refined_hamming;
    bigint refined_singleton;
    bigrat sphere_packing;
};

struct BoundsReport {
    unsigned q = 0;
    int ns = 0;
    unsigned min_maxflow = 0;  // n: smallest maxflow over sinks
    unsigned min_dmin = 0;     // d_min: smallest per-sink minimum distance
    std::vector<SinkBounds> sinks;
    bigrat original_hamming;    // network-wide form with n and d_min
    bigint original_singleton;  // q^(n - d_min + 1)
    GilbertVarshamov gv;

    std::string table() const {
        std::ostringstream os;
        os << "q=" << q << " n_s=" << ns << " n=" << min_maxflow << " d_min=" << min_dmin
           << "\n";
        os << "sink  in_deg  rank  d_min  refined_hamming  refined_singleton  sphere_packing\n";
        for (const auto& s : sinks) {
            os << s.sink << "     " << s.in_degree << "       " << s.rank << "     " << s.dmin
               << "      " << s.refined_hamming << "            " << s.refined_singleton
               << "               " << s.sphere_packing << "\n";
        }
        os << "original_hamming=" << original_hamming
           << " original_singleton=" << original_singleton << "\n";
        os << "confusable_union=" << gv.confusable_union_size << " gilbert=" << gv.gilbert
           << " varshamov_dim>=" << gv.varshamov_dim
           << (gv.log_exact ? " (exact power)" : " (ceiling)") << "\n";
        return os.str();
    }
};

// Builds the full report for a kernel set whose per-sink minimum distances
// are already certified (dmins).  Checks the refined-implies-original chain
// on the way out: the per-sink bounds may never exceed the network-wide ones.
inline BoundsReport bounds_report(const TransferSet& ts, const std::map<int, unsigned>& dmins,
                                  Budget& budget) {
    BoundsReport rep;
    const Network& net = ts.net();
    rep.q = ts.field()->q();
    rep.ns = net.ns();

    unsigned nmin = 0;
    bool first = true;
    for (int t : net.sinks()) {
        unsigned mf = unsigned(maxflow(net, net.source(), t));
        nmin = first ? mf : std::min(nmin, mf);
        first = false;
    }
    rep.min_maxflow = nmin;

    unsigned dmin_all = 0;
    first = true;
    for (int t : net.sinks()) {
        unsigned d = dmins.at(t);
        dmin_all = first ? d : std::min(dmin_all, d);
        first = false;
    }
    rep.min_dmin = dmin_all;

    std::map<int, int> dist_target;
    for (int t : net.sinks()) {
        SinkBounds sb;
        sb.sink = net.node_id(t);
        sb.in_degree = int(ts.sink_in_edges(t).size());
        sb.rank = unsigned(ts.message_channel(t).rank());
        sb.dmin = dmins.at(t);
        if (sb.dmin < 1)
            throw validation_error("bounds need positive minimum distance at sink '" +
                                   sb.sink + "'");
        sb.refined_hamming = refined_hamming_bound(rep.q, sb.rank, sb.dmin);
        sb.refined_singleton = refined_singleton_bound(rep.q, sb.rank, sb.dmin);
        sb.sphere_packing = sphere_packing_bound(ts, t, sb.dmin, budget);
        if (sb.sphere_packing > sb.refined_hamming)
            throw error("internal: sphere packing exceeded the Hamming form");
        rep.sinks.push_back(std::move(sb));
        dist_target[t] = int(dmins.at(t));
    }

    rep.original_hamming =
        bigrat(big_pow(rep.q, nmin), hamming_ball(rep.q, nmin, (dmin_all - 1) / 2));
    if (dmin_all > nmin + 1)
        throw validation_error("network-wide d_min exceeds min maxflow + 1");
    rep.original_singleton = big_pow(rep.q, nmin - dmin_all + 1);

    bigrat min_rh = rep.sinks[0].refined_hamming;
    bigint min_rs = rep.sinks[0].refined_singleton;
    for (const auto& s : rep.sinks) {
        min_rh = std::min(min_rh, s.refined_hamming);
        min_rs = std::min(min_rs, s.refined_singleton);
    }
    if (min_rh > rep.original_hamming || min_rs > rep.original_singleton)
        throw error("internal: refined bounds exceeded the network-wide forms");

    rep.gv = gilbert_varshamov(ts, dist_target, budget);
    return rep;
}

}  // namespace necw
