#pragma once

#include "popanchor/csv.hpp"
#include "popanchor/rng.hpp"

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace popanchor {

// Conditional categorical distribution P(outcome | key attributes), loaded
// from long-format CSV: key1,...,keyN,outcome,probability. Rows off by up to
// 1e-3 are renormalized with a warning; anything worse is a schema error.
class ConditionalTable {
public:
    static ConditionalTable from_csv(const csv::Table& file, const std::string& name);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& key_names() const { return key_names_; }
    const std::vector<std::string>& outcomes() const { return outcomes_; }
    std::size_t row_count() const { return rows_.size(); }
    const std::vector<std::string>& renormalized_keys() const { return renormalized_; }

    // Exact row, or (when backoff is enabled) the mean of all rows matching
    // after dropping key attributes from the back, one at a time. Throws
    // MissingDistributionError when nothing matches.
    std::vector<double> lookup(std::span<const std::string> key, bool backoff) const;

    bool has_row(std::span<const std::string> key) const;

    int outcome_index(const std::string& outcome) const; // -1 if absent

private:
    std::string name_;
    std::vector<std::string> key_names_;
    std::vector<std::string> outcomes_;
    std::unordered_map<std::string, int> outcome_index_;
    // Row keys are the key fields joined with unit separators.
    std::unordered_map<std::string, std::vector<double>> rows_;
    std::vector<std::pair<std::vector<std::string>, const std::vector<double>*>> row_list_;
    std::vector<std::string> renormalized_;
};

// Inverse-CDF draw from a normalized probability vector (sum within 1e-9 of 1).
std::size_t sample_categorical(std::span<const double> probs, RandomStream& stream);

// Draw restricted to bins with remaining capacity; the chosen bin's capacity
// is decremented. Throws ExhaustionError when every capacity is zero and
// DegenerateMassError when capacity remains only on zero-probability bins.
std::size_t sample_capacity_constrained(std::span<const double> probs,
                                        std::span<long long> capacities,
                                        RandomStream& stream);

} // namespace popanchor
