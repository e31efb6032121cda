#include "popanchor/pipeline.hpp"

#include "popanchor/csv.hpp"
#include "popanchor/error.hpp"
#include "popanchor/ingest.hpp"
#include "popanchor/lastmile_assign.hpp"
#include "popanchor/report.hpp"
#include "popanchor/residence_assign.hpp"

#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

namespace popanchor::pipeline {

namespace {

using nlohmann::ordered_json;

constexpr const char* kStageNames[] = {"ingest",  "residence", "nace",
                                       "subzone", "lastmile",  "report"};

const char* kArtifacts[] = {
    "consistency_report.csv", "escalations.csv",          "od_matrix.csv",
    "delta_matrix.csv",       "cell_counts_residents.csv", "cell_counts_workers.csv",
    "cell_counts.geojson",    "nace_report.csv",
};

Stage last_enabled(const StageToggles& toggles) {
    if (!toggles.residence) return Stage::Ingest;
    if (!toggles.nace) return Stage::Residence;
    if (!toggles.subzone) return Stage::Nace;
    if (!toggles.lastmile) return Stage::Subzone;
    if (!toggles.report) return Stage::Lastmile;
    return Stage::Report;
}

class StageTimer {
public:
    explicit StageTimer(std::map<std::string, double>& sink, const char* name)
        : sink_(sink), name_(name), start_(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        auto end = std::chrono::steady_clock::now();
        sink_[name_] =
            std::chrono::duration<double, std::milli>(end - start_).count();
    }

private:
    std::map<std::string, double>& sink_;
    const char* name_;
    std::chrono::steady_clock::time_point start_;
};

std::string optional_cell(const Scenario& scn, const std::optional<int>& idx) {
    return idx ? scn.grid.cells[static_cast<std::size_t>(*idx)].id : std::string{};
}

std::string optional_district(const Scenario& scn, const std::optional<int>& idx) {
    return idx ? scn.districts[static_cast<std::size_t>(*idx)].id : std::string{};
}

nace::ConsistencyReport restore_consistency_csv(const std::filesystem::path& path,
                                                const Scenario& scn) {
    auto file = csv::read_file(path);
    std::size_t c_code = file.column("nace_code");
    std::size_t c_census = file.column("census_total");
    std::size_t c_register = file.column("register_total");
    std::size_t c_ratio = file.column("ratio");
    std::size_t c_verdict = file.column("verdict");

    nace::ConsistencyReport gate;
    gate.threshold = scn.config.coherence_threshold;
    gate.fields.resize(static_cast<std::size_t>(scn.nace.size()));
    std::vector<bool> seen(static_cast<std::size_t>(scn.nace.size()), false);
    for (std::size_t r = 0; r < file.rows.size(); ++r) {
        const std::string& code = csv::field(file, r, c_code);
        int idx = scn.nace.index_of(code);
        if (idx < 0)
            throw Error("resume", "consistency report lists unknown field '" + code + "'");
        nace::FieldVerdict& v = gate.fields[static_cast<std::size_t>(idx)];
        v.code = code;
        v.census_total = csv::field_int(file, r, c_census);
        v.register_total = csv::field_int(file, r, c_register);
        const std::string& ratio = csv::field(file, r, c_ratio);
        v.ratio = ratio == "inf" ? std::numeric_limits<double>::infinity()
                                 : csv::field_double(file, r, c_ratio);
        const std::string& verdict = csv::field(file, r, c_verdict);
        v.sink = verdict == "sink";
        v.coherent = verdict == "coherent";
        seen[static_cast<std::size_t>(idx)] = true;
    }
    for (std::size_t f = 0; f < seen.size(); ++f)
        if (!seen[f])
            throw Error("resume", "consistency report is missing field '" +
                                      scn.nace.codes[f] + "'");
    return gate;
}

std::vector<subzone::Escalation> restore_escalations_csv(
    const std::filesystem::path& path, const Scenario& scn) {
    std::vector<subzone::Escalation> out;
    if (!std::filesystem::exists(path)) return out;
    auto file = csv::read_file(path);
    std::size_t c_p = file.column("person_id");
    std::size_t c_n = file.column("nace_code");
    std::size_t c_r = file.column("reason");
    std::unordered_map<std::string, std::size_t> person_index;
    for (std::size_t i = 0; i < scn.persons.size(); ++i)
        person_index.emplace(scn.persons[i].id, i);
    for (std::size_t r = 0; r < file.rows.size(); ++r) {
        subzone::Escalation e;
        auto it = person_index.find(csv::field(file, r, c_p));
        if (it == person_index.end())
            throw Error("resume", "escalations list unknown person '" +
                                      csv::field(file, r, c_p) + "'");
        e.person = it->second;
        e.nace = scn.nace.index_of(csv::field(file, r, c_n));
        e.reason = csv::field(file, r, c_r);
        out.push_back(std::move(e));
    }
    return out;
}

void write_run_summary(const std::filesystem::path& path, const Options& options,
                       const State& state, const RunResult& result,
                       const std::string& status, const std::string& error) {
    ordered_json doc;
    doc["status"] = status;
    if (!error.empty()) doc["error"] = error;
    doc["completed_stage"] = stage_name(state.completed);
    doc["seed"] = state.scenario.config.seed;
    doc["config_hash"] = state.scenario.config.config_hash;
    doc["threads"] = options.threads;
    doc["gravity_masked"] = state.scenario.config.gravity.masked;
    doc["distance_exponent"] = state.scenario.config.gravity.distance_exponent;
    doc["population"] = state.scenario.persons.size();
    doc["districts"] = state.scenario.districts.size();
    doc["cells"] = state.scenario.grid.cells.size();
    doc["escalations"] = state.escalations.size();
    ordered_json timings = ordered_json::object();
    for (const auto& [name, ms] : result.timings_ms) timings[name] = ms;
    doc["stage_timings_ms"] = std::move(timings);
    doc["warnings"] = state.scenario.load_warnings;
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open output file: " + path.string());
    out << doc.dump(2) << "\n";
}

} // namespace

std::optional<Stage> stage_from_name(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(Stage::Report); ++i)
        if (name == kStageNames[i]) return static_cast<Stage>(i);
    return std::nullopt;
}

const char* stage_name(Stage stage) { return kStageNames[static_cast<int>(stage)]; }

void write_population_csv(const std::filesystem::path& path, const Scenario& scn) {
    csv::Writer w(path);
    w.row({"person_id", "household_id", "age", "gender", "residence_district",
           "residence_cell", "occupation", "nace", "work_district", "work_cell_class",
           "work_cell"});
    for (const Person& p : scn.persons) {
        w.row({p.id, p.household_id, std::to_string(p.age), p.gender,
               scn.districts[static_cast<std::size_t>(p.residence_district)].id,
               optional_cell(scn, p.residence_cell), p.occupation.value_or(""),
               p.nace ? scn.nace.codes[static_cast<std::size_t>(*p.nace)] : "",
               optional_district(scn, p.work_district),
               p.work_cell_class ? scn.classes.label(*p.work_cell_class) : "",
               optional_cell(scn, p.work_cell)});
    }
    w.close();
}

void restore_population_csv(const std::filesystem::path& path, Scenario& scn,
                            Stage completed) {
    auto file = csv::read_file(path);
    std::size_t c_id = file.column("person_id");
    std::size_t c_hh = file.column("household_id");
    std::size_t c_age = file.column("age");
    std::size_t c_gender = file.column("gender");
    std::size_t c_rd = file.column("residence_district");
    std::size_t c_rc = file.column("residence_cell");
    std::size_t c_occ = file.column("occupation");
    std::size_t c_nace = file.column("nace");
    std::size_t c_wd = file.column("work_district");
    std::size_t c_wcc = file.column("work_cell_class");
    std::size_t c_wc = file.column("work_cell");

    if (file.rows.size() != scn.persons.size())
        throw Error("resume", "checkpoint has " + std::to_string(file.rows.size()) +
                                  " persons, scenario has " +
                                  std::to_string(scn.persons.size()));
    std::unordered_map<std::string, std::size_t> person_index;
    for (std::size_t i = 0; i < scn.persons.size(); ++i)
        person_index.emplace(scn.persons[i].id, i);

    for (std::size_t r = 0; r < file.rows.size(); ++r) {
        const std::string& pid = csv::field(file, r, c_id);
        auto it = person_index.find(pid);
        if (it == person_index.end())
            throw Error("resume", "checkpoint lists unknown person '" + pid + "'");
        Person& p = scn.persons[it->second];
        if (csv::field(file, r, c_hh) != p.household_id ||
            csv::field_int(file, r, c_age) != p.age ||
            csv::field(file, r, c_gender) != p.gender ||
            csv::field(file, r, c_rd) !=
                scn.districts[static_cast<std::size_t>(p.residence_district)].id)
            throw Error("resume", "checkpoint row for person '" + pid +
                                      "' does not match persons.csv");

        const std::string& rc = csv::field(file, r, c_rc);
        if (!rc.empty()) {
            int cell = scn.grid.require(rc);
            if (scn.grid.cells[static_cast<std::size_t>(cell)].district !=
                p.residence_district)
                throw Error("resume", "person '" + pid +
                                          "': residence cell outside residence district");
            p.residence_cell = cell;
        }
        const std::string& occ = csv::field(file, r, c_occ);
        if (!occ.empty()) p.occupation = occ;
        const std::string& nc = csv::field(file, r, c_nace);
        if (!nc.empty()) {
            int idx = scn.nace.index_of(nc);
            if (idx < 0)
                throw Error("resume", "person '" + pid + "': unknown nace '" + nc + "'");
            p.nace = idx;
            p.census_nace = idx; // original census draw is not persisted
        }
        const std::string& wd = csv::field(file, r, c_wd);
        if (!wd.empty()) p.work_district = scn.require_district(wd);
        const std::string& wcc = csv::field(file, r, c_wcc);
        if (!wcc.empty()) {
            int idx = scn.classes.index_of(wcc);
            if (idx < 0)
                throw Error("resume", "person '" + pid + "': unknown cell class '" +
                                          wcc + "'");
            p.work_cell_class = idx;
        }
        const std::string& wc = csv::field(file, r, c_wc);
        if (!wc.empty()) {
            int cell = scn.grid.require(wc);
            const Cell& cd = scn.grid.cells[static_cast<std::size_t>(cell)];
            if (!p.work_district || cd.district != *p.work_district)
                throw Error("resume", "person '" + pid +
                                          "': work cell outside work district");
            if (!p.work_cell_class || cd.cls != *p.work_cell_class)
                throw Error("resume", "person '" + pid +
                                          "': work cell class mismatch");
            p.work_cell = cell;
        }

        // pipeline-stage monotonicity
        if ((p.work_cell && !p.work_cell_class) || (p.work_cell_class && !p.work_district) ||
            (p.work_district && !p.nace) || (p.nace && !p.occupation))
            throw Error("resume", "person '" + pid + "': inconsistent stage columns");
    }

    auto check_all = [&](auto member, const char* what) {
        for (const Person& p : scn.persons)
            if (!(p.*member))
                throw Error("resume", std::string("checkpoint marked past ") + what +
                                          " but person '" + p.id + "' is missing it");
    };
    if (completed >= Stage::Residence) check_all(&Person::residence_cell, "residence");
    if (completed >= Stage::Nace) check_all(&Person::occupation, "nace");
    if (completed >= Stage::Subzone)
        for (const Person& p : scn.persons)
            if (p.nace && !p.work_district)
                throw Error("resume", "checkpoint marked past subzone but person '" +
                                          p.id + "' has no work district");
    if (completed >= Stage::Lastmile)
        for (const Person& p : scn.persons)
            if (p.nace && !p.work_cell)
                throw Error("resume", "checkpoint marked past lastmile but person '" +
                                          p.id + "' has no work cell");
}

void advance(State& state, Stage stop, int threads) {
    Scenario& scn = state.scenario;
    while (state.completed < stop) {
        Stage next = static_cast<Stage>(static_cast<int>(state.completed) + 1);
        switch (next) {
        case Stage::Residence:
            residence::run_stage(scn, threads);
            break;
        case Stage::Nace:
            nace::assign_occupation(scn, threads);
            nace::repair_unfeasible(scn, threads);
            nace::assign_nace(scn, threads);
            state.gate = nace::consistency_gate(scn);
            break;
        case Stage::Subzone: {
            if (!state.gate)
                throw StageError("subzone stage without a consistency report");
            auto result = subzone::run_stage(scn, *state.gate);
            state.ledger = std::move(result.ledger);
            state.escalations = std::move(result.escalations);
            break;
        }
        case Stage::Lastmile:
            lastmile::run_stage(scn, threads);
            break;
        case Stage::Report:
            break; // artifact writing happens in run(); nothing to compute here
        default:
            throw InternalError("unexpected stage transition");
        }
        state.completed = next;
    }
}

RunResult run(const Options& options) {
    RunResult result;
    ScenarioConfig config = ingest::load_config(options.config_path);
    if (options.seed_override) config.seed = *options.seed_override;
    if (options.gravity_mask_override) config.gravity.masked = *options.gravity_mask_override;
    if (options.distance_exponent_override) {
        if (!(*options.distance_exponent_override > 0.0))
            throw ConfigError("distance exponent must be > 0");
        config.gravity.distance_exponent = *options.distance_exponent_override;
    }

    State state;
    {
        StageTimer t(result.timings_ms, "ingest");
        state.scenario = ingest::load_scenario(config);
    }
    const Scenario& scn = state.scenario;
    result.seed = config.seed;
    result.config_hash = config.config_hash;
    result.population = scn.persons.size();
    result.out_dir = options.out_dir;

    std::filesystem::create_directories(options.out_dir);

    if (options.resume_dir) {
        const auto& rdir = *options.resume_dir;
        std::ifstream in(rdir / "run_summary.json");
        if (!in)
            throw Error("resume", "no run_summary.json in " + rdir.string());
        ordered_json summary = ordered_json::parse(in);
        if (summary.value("config_hash", "") != config.config_hash)
            throw Error("resume", "checkpoint was produced with a different config");
        if (summary.value("seed", std::uint64_t{0}) != config.seed)
            throw Error("resume", "checkpoint was produced with a different seed");
        if (summary.value("gravity_masked", true) != config.gravity.masked ||
            summary.value("distance_exponent", 1.0) != config.gravity.distance_exponent)
            throw Error("resume", "checkpoint was produced with different gravity settings");
        auto completed = stage_from_name(summary.value("completed_stage", ""));
        if (!completed)
            throw Error("resume", "run_summary.json has no valid completed_stage");
        state.completed = *completed;
        restore_population_csv(rdir / "population_out.csv", state.scenario,
                               state.completed);
        if (state.completed >= Stage::Nace)
            state.gate = restore_consistency_csv(rdir / "consistency_report.csv",
                                                 state.scenario);
        if (state.completed >= Stage::Subzone)
            state.escalations =
                restore_escalations_csv(rdir / "escalations.csv", state.scenario);

        if (std::filesystem::weakly_canonical(rdir) !=
            std::filesystem::weakly_canonical(options.out_dir)) {
            for (const char* name : kArtifacts) {
                auto src = rdir / name;
                if (std::filesystem::exists(src))
                    std::filesystem::copy_file(
                        src, options.out_dir / name,
                        std::filesystem::copy_options::overwrite_existing);
            }
        }
    }

    Stage target = std::min(options.stop_after.value_or(Stage::Report),
                            last_enabled(config.stages));

    try {
        while (state.completed < target) {
            Stage next = static_cast<Stage>(static_cast<int>(state.completed) + 1);
            {
                StageTimer t(result.timings_ms, stage_name(next));
                advance(state, next, options.threads);
            }
            if (next == Stage::Nace)
                report::write_consistency_csv(options.out_dir / "consistency_report.csv",
                                              *state.gate);
            if (next == Stage::Subzone)
                report::write_escalations_csv(options.out_dir / "escalations.csv",
                                              state.scenario, state.escalations);
            if (next == Stage::Report) {
                if (!state.gate)
                    throw StageError("report stage without a consistency report");
                auto od = report::build_od_matrix(scn);
                report::write_od_csv(options.out_dir / "od_matrix.csv", od);
                if (config.od_reference_path) {
                    auto reference =
                        report::load_od_csv(*config.od_reference_path, od.districts);
                    report::write_delta_csv(options.out_dir / "delta_matrix.csv",
                                            od.districts,
                                            report::delta_matrix(od, reference));
                }
                auto residents = report::per_cell_counts(scn, report::CountKind::Residents);
                auto workers = report::per_cell_counts(scn, report::CountKind::Workers);
                report::write_cell_counts_csv(
                    options.out_dir / "cell_counts_residents.csv", scn, residents);
                report::write_cell_counts_csv(options.out_dir / "cell_counts_workers.csv",
                                              scn, workers);
                if (config.emit_geojson)
                    report::write_geojson(options.out_dir / "cell_counts.geojson", scn,
                                          residents, workers);
                report::write_nace_report_csv(options.out_dir / "nace_report.csv",
                                              report::nace_totals_report(scn, *state.gate));
            }
            write_population_csv(options.out_dir / "population_out.csv", scn);
            write_run_summary(options.out_dir / "run_summary.json", options, state, result,
                              "ok", "");
            std::cerr << "[popanchor] stage " << stage_name(next) << " done ("
                      << csv::format_double(result.timings_ms[stage_name(next)], 1)
                      << " ms)\n";
        }
    } catch (const Error& e) {
        write_population_csv(options.out_dir / "population_out.csv", scn);
        write_run_summary(options.out_dir / "run_summary.json", options, state, result,
                          "failed", e.what());
        throw;
    }

    // A resume that had nothing left to do still refreshes the checkpoint pair.
    write_population_csv(options.out_dir / "population_out.csv", scn);
    write_run_summary(options.out_dir / "run_summary.json", options, state, result, "ok",
                      "");

    result.completed = state.completed;
    result.escalation_count = state.escalations.size();
    for (const Person& p : scn.persons)
        if (p.nace) ++result.workers;
    return result;
}

} // namespace popanchor::pipeline
