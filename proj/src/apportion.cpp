#include "popanchor/apportion.hpp"

#include "popanchor/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace popanchor {

std::vector<long long> largest_remainder(std::span<const double> expected,
                                         long long total) {
    std::vector<long long> out(expected.size(), 0);
    if (total < 0)
        throw ContractError("largest_remainder: negative total");
    if (expected.empty()) {
        if (total != 0)
            throw ContractError("largest_remainder: units but no bins");
        return out;
    }

    long long floored = 0;
    std::vector<double> frac(expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (!(expected[i] >= 0.0) || !std::isfinite(expected[i]))
            throw ContractError("largest_remainder: expected values must be finite and >= 0");
        double f = std::floor(expected[i]);
        out[i] = static_cast<long long>(f);
        frac[i] = expected[i] - f;
        floored += out[i];
    }

    long long remaining = total - floored;
    if (remaining < 0 || remaining > static_cast<long long>(expected.size()))
        throw ContractError("largest_remainder: expected values do not sum to total");

    std::vector<std::size_t> order(expected.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return frac[a] > frac[b];
    });
    for (long long k = 0; k < remaining; ++k)
        ++out[order[static_cast<std::size_t>(k)]];
    return out;
}

std::vector<long long> apportion_by_weights(std::span<const double> weights,
                                            long long total) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ContractError("apportion_by_weights: weights must be finite and >= 0");
        sum += w;
    }
    if (total == 0)
        return std::vector<long long>(weights.size(), 0);
    if (sum <= 0.0)
        throw ContractError("apportion_by_weights: all weights zero");

    std::vector<double> expected(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i)
        expected[i] = static_cast<double>(total) * weights[i] / sum;
    return largest_remainder(expected, total);
}

} // namespace popanchor
