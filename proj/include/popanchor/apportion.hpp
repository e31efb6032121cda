#pragma once

#include <span>
#include <vector>

namespace popanchor {

// Largest-remainder rounding of fractional allocations to integers.
// `expected` must be non-negative and sum to `total` (within fp noise).
// Remainder units go to the largest fractional parts; ties break on the
// lower index, which is the lower id since registries are sorted by id.
std::vector<long long> largest_remainder(std::span<const double> expected,
                                         long long total);

// Apportions `total` units proportionally to non-negative `weights`
// (largest-remainder on total * w_i / sum(w)). Sum of weights must be > 0
// unless total is 0.
std::vector<long long> apportion_by_weights(std::span<const double> weights,
                                            long long total);

} // namespace popanchor
