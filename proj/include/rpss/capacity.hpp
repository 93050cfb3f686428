#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "symbols.hpp"

namespace rpss {

struct capacity_policy {
    unsigned c = 4;        // text-to-table space ratio
    double alpha = 2.0;    // entry overhead factor for the frequency index
    std::uint64_t f0 = 3;  // capacity of the first round's table
};

// Bits one table entry may cost: a bigram over the next alphabet plus a
// counter that can reach n_i/2.
inline unsigned table_entry_bits(std::uint64_t sigma_next, std::uint64_t n_i) {
    unsigned __int128 v = (unsigned __int128)sigma_next * sigma_next * n_i / 2;
    if (v < 1) v = 1;
    std::uint64_t clipped = v > ~std::uint64_t(0) ? ~std::uint64_t(0) : std::uint64_t(v);
    return ceil_lg(clipped);
}

inline double capacity_beta(unsigned c, unsigned delta, std::uint64_t sigma_next, std::uint64_t n) {
    double by_sigma = double(delta) / double(ceil_lg(std::max<std::uint64_t>(sigma_next, 1)));
    double by_text = double(c) * double(delta) / double(ceil_lg(std::max<std::uint64_t>(n, 2)));
    return std::min(by_sigma, by_text);
}

inline double capacity_gamma(double alpha, double beta) { return 1.0 + 2.0 / (5.0 * alpha * beta); }

// Capacity of the next round's table.  Grows at least geometrically (the
// gamma floor) while staying inside what the remaining budget can pay for;
// the final max guarantees progress even when the cap bites.
inline std::uint64_t next_capacity(const capacity_policy& policy, std::uint64_t f,
                                   std::uint64_t sigma_next, std::uint64_t n_i, std::uint64_t n,
                                   std::uint64_t remaining_bits) {
    unsigned delta = table_entry_bits(sigma_next, n_i);
    double ab = policy.alpha * capacity_beta(policy.c, delta, sigma_next, n);
    double step = std::max(2.0, (double(f) - 1.0) / 2.0) / ab;
    std::uint64_t next = f + std::uint64_t(std::ceil(step));
    double gamma = capacity_gamma(policy.alpha, capacity_beta(policy.c, delta, sigma_next, n));
    next = std::max(next, std::uint64_t(std::ceil(gamma * double(f))));
    std::uint64_t cap = std::uint64_t(double(remaining_bits) / (policy.alpha * double(delta)));
    next = std::min(next, cap);
    return std::max(next, f + 1);
}

}  // namespace rpss
