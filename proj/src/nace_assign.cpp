#include "popanchor/nace_assign.hpp"

#include "popanchor/error.hpp"
#include "popanchor/parallel.hpp"
#include "popanchor/rng.hpp"
#include "popanchor/tables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace popanchor::nace {

namespace {

// Key values for a table row, in the table's own attribute order.
std::vector<std::string> person_key(const Scenario& scn, const ConditionalTable& table,
                                    const Person& p) {
    std::vector<std::string> key;
    key.reserve(table.key_names().size());
    for (const std::string& attr : table.key_names()) {
        if (attr == "age_band")
            key.push_back(age_band_label(p.age, scn.config.age_band_width));
        else if (attr == "gender")
            key.push_back(p.gender);
        else if (attr == "district")
            key.push_back(scn.districts[static_cast<std::size_t>(p.residence_district)].id);
        else if (attr == "occupation")
            key.push_back(p.occupation.value());
        else
            throw ConfigError("table '" + table.name() + "': unsupported key attribute '" +
                              attr + "'");
    }
    return key;
}

} // namespace

bool occupation_feasible(const ScenarioConfig& config, const std::string& occupation,
                         int age) {
    for (const FeasibilityRule& rule : config.feasibility_rules) {
        if (rule.occupation != occupation) continue;
        if (age < rule.min_age || age > rule.max_age) return false;
    }
    return true;
}

void assign_occupation(Scenario& scn, int threads) {
    const ConditionalTable& table = scn.table("occupation");
    RandomStream stage(scn.config.seed, "occupation");
    parallel_for(scn.persons.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Person& p = scn.persons[i];
            if (!scn.worker_eligible(p.age)) {
                p.occupation = scn.config.not_employed_label;
                continue;
            }
            auto key = person_key(scn, table, p);
            auto row = table.lookup(key, scn.config.table_backoff);
            RandomStream stream = stage.split(p.id);
            p.occupation = table.outcomes()[sample_categorical(row, stream)];
        }
    });
}

void repair_unfeasible(Scenario& scn, int threads) {
    if (scn.config.feasibility_rules.empty()) return;
    const ConditionalTable& table = scn.table("occupation");
    RandomStream stage(scn.config.seed, "repair");
    parallel_for(scn.persons.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Person& p = scn.persons[i];
            if (!p.occupation)
                throw StageError("repair_unfeasible before assign_occupation");
            if (occupation_feasible(scn.config, *p.occupation, p.age)) continue;

            bool was_employed = scn.is_employed(p);
            auto key = person_key(scn, table, p);
            auto row = table.lookup(key, scn.config.table_backoff);
            double mass = 0.0;
            for (std::size_t o = 0; o < row.size(); ++o) {
                const std::string& outcome = table.outcomes()[o];
                bool ok = occupation_feasible(scn.config, outcome, p.age) &&
                          !(was_employed && outcome == scn.config.not_employed_label);
                if (!ok) row[o] = 0.0;
                mass += row[o];
            }
            if (mass <= 0.0)
                throw Error("repair",
                            "person '" + p.id + "': no feasible occupation left in row for age " +
                                std::to_string(p.age));
            for (double& v : row) v /= mass;
            RandomStream stream = stage.split(p.id);
            p.occupation = table.outcomes()[sample_categorical(row, stream)];
        }
    });
}

void assign_nace(Scenario& scn, int threads) {
    const ConditionalTable& table = scn.table("nace");
    RandomStream stage(scn.config.seed, "nace");
    parallel_for(scn.persons.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Person& p = scn.persons[i];
            if (!p.occupation)
                throw StageError("assign_nace before assign_occupation");
            if (!scn.is_employed(p)) continue;
            auto key = person_key(scn, table, p);
            auto row = table.lookup(key, /*backoff=*/false);
            RandomStream stream = stage.split(p.id);
            const std::string& code = table.outcomes()[sample_categorical(row, stream)];
            int idx = scn.nace.index_of(code);
            if (idx < 0)
                throw InternalError("nace outcome '" + code + "' missing from registry");
            p.nace = idx;
            p.census_nace = idx;
        }
    });
}

ConsistencyReport consistency_gate(Scenario& scn) {
    ConsistencyReport report;
    report.threshold = scn.config.coherence_threshold;
    report.fields.resize(static_cast<std::size_t>(scn.nace.size()));

    std::vector<long long> census(static_cast<std::size_t>(scn.nace.size()), 0);
    for (const Person& p : scn.persons)
        if (p.census_nace) ++census[static_cast<std::size_t>(*p.census_nace)];

    for (int f = 0; f < scn.nace.size(); ++f) {
        FieldVerdict& v = report.fields[static_cast<std::size_t>(f)];
        v.code = scn.nace.codes[static_cast<std::size_t>(f)];
        v.census_total = census[static_cast<std::size_t>(f)];
        double reg = 0.0;
        for (const District& d : scn.districts)
            reg += d.register_by_nace[static_cast<std::size_t>(f)];
        v.register_total = static_cast<long long>(std::llround(reg));
        v.sink = (f == scn.nace.other);
        if (v.register_total > 0 && v.census_total > 0) {
            v.ratio = static_cast<double>(v.census_total) /
                      static_cast<double>(v.register_total);
        } else if (v.register_total > 0) {
            v.ratio = 0.0;
        } else {
            v.ratio = std::numeric_limits<double>::infinity();
        }
        double spread = std::max(v.ratio, v.ratio > 0.0
                                              ? 1.0 / v.ratio
                                              : std::numeric_limits<double>::infinity());
        v.coherent = !v.sink && std::isfinite(v.ratio) && spread <= report.threshold;
    }

    for (std::size_t i = 0; i < scn.persons.size(); ++i) {
        Person& p = scn.persons[i];
        if (!p.census_nace) continue;
        const FieldVerdict& v = report.of(*p.census_nace);
        if (!v.coherent && *p.census_nace != scn.nace.other) {
            report.reassigned.push_back(i);
            p.nace = scn.nace.other;
        }
    }
    return report;
}

} // namespace popanchor::nace
