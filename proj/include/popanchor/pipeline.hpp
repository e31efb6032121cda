#pragma once

#include "popanchor/nace_assign.hpp"
#include "popanchor/scenario.hpp"
#include "popanchor/subzone_assign.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace popanchor::pipeline {

enum class Stage : int {
    Ingest = 0,
    Residence = 1,
    Nace = 2,
    Subzone = 3,
    Lastmile = 4,
    Report = 5,
};

std::optional<Stage> stage_from_name(const std::string& name);
const char* stage_name(Stage stage);

struct Options {
    std::filesystem::path config_path;
    std::filesystem::path out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    std::optional<Stage> stop_after;
    std::optional<std::filesystem::path> resume_dir;
    int threads = 1;
    std::optional<bool> gravity_mask_override;
    std::optional<double> distance_exponent_override;
};

struct RunResult {
    Stage completed = Stage::Ingest;
    std::map<std::string, double> timings_ms;
    std::size_t escalation_count = 0;
    std::size_t population = 0;
    std::size_t workers = 0;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::filesystem::path out_dir;
};

// Full pipeline state; exposed so tests and bindings can run stages directly.
struct State {
    Scenario scenario;
    Stage completed = Stage::Ingest;
    std::optional<nace::ConsistencyReport> gate;
    std::vector<subzone::Escalation> escalations;
    std::optional<subzone::CapacityLedger> ledger;
};

// Runs stages (state.completed, stop] in order, updating state.completed.
// Does not touch the filesystem.
void advance(State& state, Stage stop, int threads);

// End-to-end run with checkpointing: loads the scenario, optionally restores a
// checkpoint, runs stages up to the target, and writes population_out.csv,
// run_summary.json and the per-stage artifacts into out_dir.
RunResult run(const Options& options);

// Checkpoint persistence (population_out.csv schema).
void write_population_csv(const std::filesystem::path& path, const Scenario& scn);
void restore_population_csv(const std::filesystem::path& path, Scenario& scn,
                            Stage completed);

} // namespace popanchor::pipeline
