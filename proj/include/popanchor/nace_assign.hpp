#pragma once

#include "popanchor/scenario.hpp"

#include <limits>
#include <string>
#include <vector>

namespace popanchor::nace {

struct FieldVerdict {
    std::string code;
    long long census_total = 0;   // workers drawn from the census tables
    long long register_total = 0; // register employees summed over districts
    double ratio = std::numeric_limits<double>::infinity(); // census / register
    bool coherent = false;
    bool sink = false; // the "Other" pool; never assigned through the register path
};

struct ConsistencyReport {
    double threshold = 2.0;
    std::vector<FieldVerdict> fields;        // aligned to the nace registry
    std::vector<std::size_t> reassigned;     // person indices relabelled to the sink

    const FieldVerdict& of(int nace_idx) const {
        return fields.at(static_cast<std::size_t>(nace_idx));
    }
};

// Occupation from P(occupation | age_band, gender, district); persons outside
// the worker age window get the not-employed label without a draw.
void assign_occupation(Scenario& scn, int threads);

// Re-draws occupations that violate a feasibility rule, restricted to feasible
// outcomes. Employed persons stay employed: the repair fixes the job title.
void repair_unfeasible(Scenario& scn, int threads);

// NACE field from P(nace | occupation) for employed persons. No backoff: an
// occupation absent from the table is a hard error.
void assign_nace(Scenario& scn, int threads);

// City-level census-vs-register comparison. Fields that disagree by more than
// the threshold (in either direction) are incoherent and their workers are
// relabelled to the sink. Idempotent: verdicts come from census_nace, which
// the gate never touches.
ConsistencyReport consistency_gate(Scenario& scn);

// True when `occupation` is allowed at `age` under the configured rules.
bool occupation_feasible(const ScenarioConfig& config, const std::string& occupation, int age);

} // namespace popanchor::nace
