#pragma once

#include "popanchor/rng.hpp"
#include "popanchor/scenario.hpp"

#include <span>
#include <string>
#include <vector>

namespace popanchor::residence {

// One household living in one district; members are indices into
// Scenario::persons. An empty household_id makes a person their own household.
struct Household {
    std::string key;
    std::vector<std::size_t> members;
};

// Households of one district, in canonical order: size descending, key
// ascending. Canonical order fixes the per-cell counts; equal-size households
// are interchangeable.
std::vector<Household> households_of_district(const Scenario& scn, int district);

// Raw per-cell residence weights (aligned to district.cells): residential
// floor area in floor-area mode, class weights in class mode. Falls back to
// uniform when every weight is zero.
std::vector<double> residence_cell_weights(const Scenario& scn, const District& district,
                                           bool* degenerate = nullptr);

// Integer person counts per cell summing exactly to the district population.
// Largest-remainder targets, then greedy household packing so the counts are
// achievable with whole households.
std::vector<long long> allocate_resident_counts(const Scenario& scn, const District& district,
                                                std::span<const Household> households,
                                                bool* degenerate = nullptr);

// Places every household into a cell so per-cell person counts equal `counts`
// exactly. The stream only shuffles households of equal size, which cannot
// change the achievable counts.
void assign_residence_cells(Scenario& scn, const District& district,
                            std::span<const Household> households,
                            std::span<const long long> counts, RandomStream stream);

// Full stage: allocate + assign for every district. Parallel across districts.
void run_stage(Scenario& scn, int threads);

} // namespace popanchor::residence
