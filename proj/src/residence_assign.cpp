#include "popanchor/residence_assign.hpp"

#include "popanchor/apportion.hpp"
#include "popanchor/error.hpp"
#include "popanchor/parallel.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace popanchor::residence {

namespace {

// Greedy packing: walk households in order, drop each into the cell with the
// largest remaining deficit (ties to the lower cell position). With integer
// targets and unit households this reproduces largest remainder exactly.
struct Packing {
    std::vector<int> cell_of_household; // position within district.cells
    std::vector<long long> counts;
};

Packing pack(std::span<const Household> households, std::span<const long long> targets) {
    Packing out;
    out.cell_of_household.assign(households.size(), -1);
    out.counts.assign(targets.size(), 0);
    std::vector<long long> deficit(targets.begin(), targets.end());
    for (std::size_t h = 0; h < households.size(); ++h) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < deficit.size(); ++i)
            if (deficit[i] > deficit[best]) best = i;
        out.cell_of_household[h] = static_cast<int>(best);
        long long size = static_cast<long long>(households[h].members.size());
        deficit[best] -= size;
        out.counts[best] += size;
    }
    return out;
}

std::vector<long long> person_targets(const Scenario& scn, const District& district,
                                      long long population, bool* degenerate) {
    auto weights = residence_cell_weights(scn, district, degenerate);
    return apportion_by_weights(weights, population);
}

} // namespace

std::vector<Household> households_of_district(const Scenario& scn, int district) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < scn.persons.size(); ++i) {
        const Person& p = scn.persons[i];
        if (p.residence_district != district) continue;
        std::string key = p.household_id.empty() ? "~" + p.id : p.household_id;
        groups[key].push_back(i);
    }
    std::vector<Household> out;
    out.reserve(groups.size());
    for (auto& [key, members] : groups)
        out.push_back(Household{key, std::move(members)});
    std::sort(out.begin(), out.end(), [](const Household& a, const Household& b) {
        if (a.members.size() != b.members.size())
            return a.members.size() > b.members.size();
        return a.key < b.key;
    });
    return out;
}

std::vector<double> residence_cell_weights(const Scenario& scn, const District& district,
                                           bool* degenerate) {
    if (degenerate) *degenerate = false;
    std::vector<double> w(district.cells.size(), 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < district.cells.size(); ++i) {
        const Cell& c = scn.grid.cells[static_cast<std::size_t>(district.cells[i])];
        if (scn.config.residence_weight_mode == ResidenceWeightMode::FloorArea) {
            w[i] = c.residential_area;
        } else {
            if (!scn.weights_residence)
                throw ConfigError("residence class weights are not configured");
            w[i] = scn.weights_residence->weight(c.cls);
        }
        sum += w[i];
    }
    if (sum <= 0.0) {
        if (degenerate) *degenerate = true;
        std::fill(w.begin(), w.end(), 1.0);
    }
    return w;
}

std::vector<long long> allocate_resident_counts(const Scenario& scn, const District& district,
                                                std::span<const Household> households,
                                                bool* degenerate) {
    long long population = 0;
    for (const Household& h : households)
        population += static_cast<long long>(h.members.size());
    auto targets = person_targets(scn, district, population, degenerate);
    return pack(households, targets).counts;
}

void assign_residence_cells(Scenario& scn, const District& district,
                            std::span<const Household> households,
                            std::span<const long long> counts, RandomStream stream) {
    long long population = 0;
    for (const Household& h : households)
        population += static_cast<long long>(h.members.size());
    auto targets = person_targets(scn, district, population, nullptr);

    // Shuffle within runs of equal size; packing decisions depend only on the
    // size sequence, so the counts stay identical to the canonical order.
    std::vector<std::size_t> order(households.size());
    std::iota(order.begin(), order.end(), 0);
    std::size_t run_start = 0;
    for (std::size_t i = 1; i <= households.size(); ++i) {
        if (i == households.size() ||
            households[i].members.size() != households[run_start].members.size()) {
            for (std::size_t j = i - 1; j > run_start; --j) {
                std::size_t k = run_start + static_cast<std::size_t>(
                                                stream.next_below(j - run_start + 1));
                std::swap(order[j], order[k]);
            }
            run_start = i;
        }
    }
    std::vector<Household> shuffled;
    shuffled.reserve(households.size());
    for (std::size_t idx : order) shuffled.push_back(households[idx]);

    Packing packing = pack(shuffled, targets);
    if (!std::equal(packing.counts.begin(), packing.counts.end(), counts.begin(), counts.end()))
        throw InternalError("residence counts do not match the household packing for district '" +
                            district.id + "'");
    for (std::size_t h = 0; h < shuffled.size(); ++h) {
        int cell = district.cells[static_cast<std::size_t>(packing.cell_of_household[h])];
        for (std::size_t member : shuffled[h].members)
            scn.persons[member].residence_cell = cell;
    }
}

void run_stage(Scenario& scn, int threads) {
    RandomStream stage(scn.config.seed, "residence");
    std::vector<std::uint8_t> degenerate(scn.districts.size(), 0);
    parallel_for(scn.districts.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t d = begin; d < end; ++d) {
            const District& district = scn.districts[d];
            auto households = households_of_district(scn, static_cast<int>(d));
            if (households.empty()) continue;
            bool deg = false;
            auto counts = allocate_resident_counts(scn, district, households, &deg);
            degenerate[d] = deg ? 1 : 0;
            assign_residence_cells(scn, district, households, counts,
                                   stage.split(district.id));
        }
    });
    for (std::size_t d = 0; d < scn.districts.size(); ++d)
        if (degenerate[d])
            scn.load_warnings.push_back("district '" + scn.districts[d].id +
                                        "': zero residence weights, used uniform fallback");
}

} // namespace popanchor::residence
