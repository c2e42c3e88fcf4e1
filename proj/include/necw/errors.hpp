#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace necw {

// Base class for all workbench errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input: malformed files, inconsistent parameters, contract violations.
struct validation_error : error {
    using error::error;
};

// Structurally impossible request: rank target above maxflow, field too
// small for a guaranteed construction, covered vector space, and so on.
struct infeasible_error : error {
    using error::error;
};

// An enumeration exceeded its work cap.  Deliberately a hard error: desk-scale
// tools should refuse loudly rather than silently truncate a search.
struct budget_error : error {
    using error::error;
};

// Work counter shared by the enumeration-heavy routines.  One unit is one
// enumerated (support, value) combination or one linear solve.
struct Budget {
    std::uint64_t cap = 10'000'000;
    std::uint64_t used = 0;

    void charge(std::uint64_t n = 1) {
        used += n;
        if (used > cap)
            throw budget_error("enumeration budget exceeded (" + std::to_string(used) +
                               " > " + std::to_string(cap) + " work units)");
    }
};

}  // namespace necw
