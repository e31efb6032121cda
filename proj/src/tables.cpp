#include "popanchor/tables.hpp"

#include "popanchor/error.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

namespace popanchor {

namespace {

constexpr char kSep = '\x1f';

std::string join_key(std::span<const std::string> parts) {
    std::string k;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) k.push_back(kSep);
        k += parts[i];
    }
    return k;
}

std::string display_key(std::span<const std::string> parts) {
    std::string k = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) k += ", ";
        k += parts[i];
    }
    return k + ")";
}

} // namespace

ConditionalTable ConditionalTable::from_csv(const csv::Table& file, const std::string& name) {
    ConditionalTable t;
    t.name_ = name;
    if (file.header.size() < 2)
        throw SchemaError(file.path, 1, 1, "table needs key columns plus outcome,probability");
    std::size_t outcome_col = file.column("outcome");
    std::size_t prob_col = file.column("probability");
    if (outcome_col != file.header.size() - 2 || prob_col != file.header.size() - 1)
        throw SchemaError(file.path, 1, 1,
                          "columns must be key1,...,keyN,outcome,probability");
    t.key_names_.assign(file.header.begin(), file.header.end() - 2);

    // First pass fixes the outcome order to first appearance in the file.
    std::unordered_map<std::string, std::unordered_map<int, double>> raw;
    std::vector<std::string> key_order;
    std::unordered_map<std::string, std::vector<std::string>> key_fields;
    for (std::size_t r = 0; r < file.rows.size(); ++r) {
        std::vector<std::string> key(file.rows[r].begin(),
                                     file.rows[r].begin() + static_cast<long>(t.key_names_.size()));
        const std::string& outcome = file.rows[r][outcome_col];
        double p = csv::field_double(file, r, prob_col);
        if (p < 0.0)
            throw SchemaError(file.path, file.line[r], prob_col + 1,
                              "negative probability");
        int oi = t.outcome_index(outcome);
        if (oi < 0) {
            oi = static_cast<int>(t.outcomes_.size());
            t.outcomes_.push_back(outcome);
            t.outcome_index_.emplace(outcome, oi);
        }
        std::string jk = join_key(key);
        auto [it, inserted] = raw.try_emplace(jk);
        if (inserted) {
            key_order.push_back(jk);
            key_fields.emplace(jk, key);
        }
        if (!it->second.emplace(oi, p).second)
            throw SchemaError(file.path, file.line[r], outcome_col + 1,
                              "duplicate (key, outcome) pair");
    }
    if (raw.empty())
        throw SchemaError(file.path, 1, 1, "table has no rows");

    for (const std::string& jk : key_order) {
        std::vector<double> row(t.outcomes_.size(), 0.0);
        for (auto [oi, p] : raw[jk]) row[static_cast<std::size_t>(oi)] = p;
        double sum = std::accumulate(row.begin(), row.end(), 0.0);
        if (sum <= 0.0)
            throw SchemaError(file.path, 1, 1,
                              "row " + display_key(key_fields[jk]) + " has zero total probability");
        if (std::abs(sum - 1.0) > 1e-3)
            throw SchemaError(file.path, 1, 1,
                              "row " + display_key(key_fields[jk]) + " sums to " +
                                  std::to_string(sum) + ", beyond the 1e-3 renormalization band");
        if (std::abs(sum - 1.0) > 1e-9)
            t.renormalized_.push_back(display_key(key_fields[jk]));
        for (double& v : row) v /= sum;
        t.rows_.emplace(jk, std::move(row));
    }
    t.row_list_.reserve(key_order.size());
    for (const std::string& jk : key_order)
        t.row_list_.emplace_back(key_fields[jk], &t.rows_.at(jk));
    return t;
}

int ConditionalTable::outcome_index(const std::string& outcome) const {
    auto it = outcome_index_.find(outcome);
    return it == outcome_index_.end() ? -1 : it->second;
}

bool ConditionalTable::has_row(std::span<const std::string> key) const {
    return rows_.count(join_key(key)) > 0;
}

std::vector<double> ConditionalTable::lookup(std::span<const std::string> key,
                                             bool backoff) const {
    if (key.size() != key_names_.size())
        throw ContractError("table '" + name_ + "': key arity " +
                            std::to_string(key.size()) + " does not match " +
                            std::to_string(key_names_.size()) + " key attributes");
    auto it = rows_.find(join_key(key));
    if (it != rows_.end()) return it->second;
    if (!backoff)
        throw MissingDistributionError("table '" + name_ + "': no row for key " +
                                       display_key(key));

    // Drop key attributes from the back and average the matching rows.
    for (std::size_t keep = key.size(); keep-- > 0;) {
        std::vector<double> acc(outcomes_.size(), 0.0);
        std::size_t matches = 0;
        for (const auto& [fields, row] : row_list_) {
            bool match = true;
            for (std::size_t i = 0; i < keep; ++i) {
                if (fields[i] != key[i]) { match = false; break; }
            }
            if (!match) continue;
            ++matches;
            for (std::size_t o = 0; o < acc.size(); ++o) acc[o] += (*row)[o];
        }
        if (matches > 0) {
            for (double& v : acc) v /= static_cast<double>(matches);
            return acc;
        }
    }
    throw MissingDistributionError("table '" + name_ + "': no row for key " +
                                   display_key(key) + " and backoff found nothing");
}

std::size_t sample_categorical(std::span<const double> probs, RandomStream& stream) {
    if (probs.empty())
        throw ContractError("sample_categorical: empty probability vector");
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0 || !std::isfinite(p))
            throw ContractError("sample_categorical: probabilities must be finite and >= 0");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ContractError("sample_categorical: vector sums to " + std::to_string(sum));

    double u = stream.next_unit();
    double cum = 0.0;
    std::size_t last_positive = probs.size();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        last_positive = i;
        cum += probs[i];
        if (u < cum) return i;
    }
    // fp slack at the top of the CDF
    if (last_positive == probs.size())
        throw ContractError("sample_categorical: zero probability mass");
    return last_positive;
}

std::size_t sample_capacity_constrained(std::span<const double> probs,
                                        std::span<long long> capacities,
                                        RandomStream& stream) {
    if (probs.size() != capacities.size())
        throw ContractError("sample_capacity_constrained: size mismatch");
    long long total_cap = 0;
    for (long long c : capacities) {
        if (c < 0)
            throw ContractError("sample_capacity_constrained: negative capacity");
        total_cap += c;
    }
    if (total_cap == 0)
        throw ExhaustionError("sample_capacity_constrained: all capacities exhausted");

    double mass = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i)
        if (capacities[i] > 0) mass += probs[i];
    if (mass <= 0.0)
        throw DegenerateMassError(
            "sample_capacity_constrained: remaining capacity only on zero-probability bins");

    double u = stream.next_unit() * mass;
    double cum = 0.0;
    std::size_t chosen = probs.size();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (capacities[i] <= 0 || probs[i] <= 0.0) continue;
        chosen = i;
        cum += probs[i];
        if (u < cum) break;
    }
    --capacities[chosen];
    return chosen;
}

} // namespace popanchor
