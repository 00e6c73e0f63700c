#pragma once

// Self-map periods and the region predicates for cofibres of rho^i / a^i.

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "fracture/padic.hpp"

namespace fracture {

/// #{k : 0 < k <= m, k = 0, 1, 2, 4 mod 8}
inline int gamma(int m) {
    if (m < 0) throw std::invalid_argument("gamma: m must be nonnegative");
    const int full = m / 8;
    int count = 4 * full;
    for (int k = 8 * full + 1; k <= m; ++k) {
        const int r = k % 8;
        if (r == 0 || r == 1 || r == 2 || r == 4) ++count;
    }
    return count;
}

/// Weight shift 2^{gamma(i-1)} of the u-self map on C(a^i) (and the tau-self map on C(rho^i)).
inline std::int64_t u_period(int i) {
    if (i < 1) throw std::invalid_argument("u_period: i must be >= 1");
    const int g = gamma(i - 1);
    if (g > 62) throw std::overflow_error("u_period: period exceeds 64 bits");
    return std::int64_t{1} << g;
}

/// Degree of the tau-power self map on C(rho^i): u_period(i) at p = 2, 2 at odd p.
inline std::int64_t tau_selfmap_degree(int i, long p) {
    if (i < 1) throw std::invalid_argument("tau_selfmap_degree: i must be >= 1");
    if (!is_prime(p)) throw std::invalid_argument("tau_selfmap_degree: p must be prime");
    return p == 2 ? u_period(i) : 2;
}

struct RegionVerdict {
    bool in_di_range = false;
    bool in_nonperiodicity_cone = false;
    std::optional<std::int64_t> period;

    bool operator==(const RegionVerdict&) const = default;
};

inline RegionVerdict region(int i, int j) {
    RegionVerdict v;
    v.in_di_range = static_cast<long>(i) >= 3L * j - 5;
    v.in_nonperiodicity_cone = j - 1 <= i && i <= 2L * j;
    if (!v.in_nonperiodicity_cone && i >= 1) v.period = u_period(i);
    return v;
}

}  // namespace fracture
