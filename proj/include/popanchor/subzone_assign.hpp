#pragma once

#include "popanchor/nace_assign.hpp"
#include "popanchor/scenario.hpp"

#include <span>
#include <string>
#include <vector>

namespace popanchor::subzone {

// Remaining and initial work-district capacity per (nace field, district).
// For coherent fields the initial values are register shares scaled so the
// city total equals the synthetic worker count of the field; the sink field
// gets the register employment left unclaimed by coherent fields.
struct CapacityLedger {
    std::vector<std::vector<long long>> initial;   // [field][district]
    std::vector<std::vector<long long>> remaining; // [field][district]

    long long initial_total(int field) const;
    long long remaining_total(int field) const;
    long long drawn_total() const;
};

struct Escalation {
    std::size_t person = 0;
    int nace = -1;
    std::string reason; // ledger_exhausted | zero_probability_mass
};

struct StageResult {
    CapacityLedger ledger;
    std::vector<Escalation> escalations;
};

CapacityLedger scale_capacities(const Scenario& scn, const nace::ConsistencyReport& report);

// Normalized gravity probabilities over districts for one residence cell:
// p_j proportional to w_j / d(cell, j), masked to positive weights.
std::vector<double> gravity_probabilities(const Scenario& scn, int residence_cell,
                                          std::span<const double> district_weights);

// Sequential stage over persons sorted by id (the pipeline's one serialization
// point): capacity-constrained register draws for coherent fields, gravity
// against the sink pool for the rest. Exhausted coherent fields escalate to
// the gravity path.
StageResult run_stage(Scenario& scn, const nace::ConsistencyReport& report);

} // namespace popanchor::subzone
