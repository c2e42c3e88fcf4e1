#pragma once

#include <cstdint>
#include <vector>

#include "necw/errors.hpp"

namespace necw {

// Iterates k-subsets of {0,...,n-1} in colexicographic order:
// {0,1} < {0,2} < {1,2} < {0,3} < ...
class SubsetIter {
public:
    SubsetIter(int n, int k) : n_(n), k_(k), done_(k > n) {
        cur_.resize(k_);
        for (int i = 0; i < k_; ++i) cur_[i] = i;
    }

    bool done() const { return done_; }
    const std::vector<int>& get() const { return cur_; }

    void next() {
        if (k_ == 0) {
            done_ = true;
            return;
        }
        // Colex successor: bump the smallest element that can move without
        // touching the larger ones; reset everything below it.
        for (int i = 0; i < k_; ++i) {
            int limit = (i + 1 < k_) ? cur_[i + 1] : n_;
            if (cur_[i] + 1 < limit) {
                ++cur_[i];
                for (int j = 0; j < i; ++j) cur_[j] = j;
                return;
            }
        }
        done_ = true;
    }

private:
    int n_, k_;
    bool done_;
    std::vector<int> cur_;
};

// Packs a vector with entries in [0,q) into a single integer, little-endian
// in q.  Throws when the packed range would not fit 63 bits.
inline std::uint64_t pack_vector(const std::vector<std::uint32_t>& v, std::uint64_t q) {
    std::uint64_t x = 0, scale = 1;
    for (std::uint32_t c : v) {
        if (scale > (std::uint64_t(1) << 62) / (q ? q : 1))
            throw validation_error("vector too long to pack for set membership");
        x += scale * c;
        scale *= q;
    }
    return x;
}

inline std::vector<std::uint32_t> unpack_vector(std::uint64_t x, std::uint64_t q, std::size_t len) {
    std::vector<std::uint32_t> v(len);
    for (std::size_t i = 0; i < len; ++i) {
        v[i] = static_cast<std::uint32_t>(x % q);
        x /= q;
    }
    return v;
}

inline std::uint64_t binom64(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r = r * (n - i) / (i + 1);
    }
    return r;
}

}  // namespace necw
