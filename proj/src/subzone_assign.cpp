#include "popanchor/subzone_assign.hpp"

#include "popanchor/apportion.hpp"
#include "popanchor/error.hpp"
#include "popanchor/rng.hpp"
#include "popanchor/tables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace popanchor::subzone {

long long CapacityLedger::initial_total(int field) const {
    const auto& row = initial[static_cast<std::size_t>(field)];
    return std::accumulate(row.begin(), row.end(), 0LL);
}

long long CapacityLedger::remaining_total(int field) const {
    const auto& row = remaining[static_cast<std::size_t>(field)];
    return std::accumulate(row.begin(), row.end(), 0LL);
}

long long CapacityLedger::drawn_total() const {
    long long total = 0;
    for (std::size_t f = 0; f < initial.size(); ++f)
        for (std::size_t d = 0; d < initial[f].size(); ++d)
            total += initial[f][d] - remaining[f][d];
    return total;
}

CapacityLedger scale_capacities(const Scenario& scn, const nace::ConsistencyReport& report) {
    const std::size_t nd = scn.districts.size();
    const std::size_t nf = static_cast<std::size_t>(scn.nace.size());

    // Synthetic worker counts by effective (post-gate) field.
    std::vector<long long> synthetic(nf, 0);
    for (const Person& p : scn.persons)
        if (p.nace) ++synthetic[static_cast<std::size_t>(*p.nace)];

    CapacityLedger ledger;
    ledger.initial.assign(nf, std::vector<long long>(nd, 0));

    for (std::size_t f = 0; f < nf; ++f) {
        const nace::FieldVerdict& v = report.fields[f];
        if (!v.coherent) continue;
        if (synthetic[f] == 0) continue;
        std::vector<double> reg(nd, 0.0);
        double reg_sum = 0.0;
        for (std::size_t d = 0; d < nd; ++d) {
            reg[d] = scn.districts[d].register_by_nace[f];
            reg_sum += reg[d];
        }
        if (reg_sum <= 0.0)
            throw InternalError("coherent field '" + v.code +
                                "' has zero register employment");
        ledger.initial[f] = apportion_by_weights(reg, synthetic[f]);
    }

    // Sink pool: register employment in non-coherent fields, rescaled to the
    // synthetic sink worker count.
    const std::size_t sink = static_cast<std::size_t>(scn.nace.other);
    long long sink_workers = synthetic[sink];
    if (sink_workers > 0) {
        std::vector<double> residual(nd, 0.0);
        double residual_sum = 0.0;
        for (std::size_t d = 0; d < nd; ++d) {
            for (std::size_t f = 0; f < nf; ++f) {
                if (report.fields[f].coherent) continue;
                residual[d] += scn.districts[d].register_by_nace[f];
            }
            residual_sum += residual[d];
        }
        if (residual_sum <= 0.0) {
            // No register shape left for the sink; fall back to total register
            // employment, then to uniform.
            residual_sum = 0.0;
            for (std::size_t d = 0; d < nd; ++d) {
                residual[d] = static_cast<double>(scn.districts[d].worker_total);
                residual_sum += residual[d];
            }
            if (residual_sum <= 0.0) std::fill(residual.begin(), residual.end(), 1.0);
        }
        ledger.initial[sink] = apportion_by_weights(residual, sink_workers);
    }

    ledger.remaining = ledger.initial;
    return ledger;
}

std::vector<double> gravity_probabilities(const Scenario& scn, int residence_cell,
                                          std::span<const double> district_weights) {
    if (district_weights.size() != scn.districts.size())
        throw ContractError("gravity_probabilities: weight vector size mismatch");
    std::vector<double> p(district_weights.size(), 0.0);
    double sum = 0.0;
    for (std::size_t d = 0; d < district_weights.size(); ++d) {
        if (district_weights[d] <= 0.0) continue;
        double dist = scn.district_distance(residence_cell, static_cast<int>(d));
        p[d] = district_weights[d] / dist;
        sum += p[d];
    }
    if (sum <= 0.0)
        throw ExhaustionError("gravity: no district with positive weight");
    for (double& v : p) v /= sum;
    return p;
}

namespace {

// District probability rows per field, aligned to the district registry.
std::vector<std::vector<double>> field_district_rows(const Scenario& scn,
                                                     const nace::ConsistencyReport& report) {
    const ConditionalTable& table = scn.table("work_district");
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(scn.nace.size()));
    for (int f = 0; f < scn.nace.size(); ++f) {
        if (!report.of(f).coherent) continue;
        std::vector<std::string> key{scn.nace.codes[static_cast<std::size_t>(f)]};
        auto raw = table.lookup(key, scn.config.table_backoff);
        std::vector<double> aligned(scn.districts.size(), 0.0);
        for (std::size_t o = 0; o < table.outcomes().size(); ++o)
            aligned[static_cast<std::size_t>(scn.require_district(table.outcomes()[o]))] =
                raw[o];
        rows[static_cast<std::size_t>(f)] = std::move(aligned);
    }
    return rows;
}

// Sink-pool draw for workers labelled "Other". Masked mode enforces the
// scaled capacities exactly; unmasked mode draws on the static initial shape.
int draw_gravity(const Scenario& scn, CapacityLedger& ledger, const Person& p,
                 RandomStream& stream) {
    if (!p.residence_cell)
        throw StageError("gravity assignment for person '" + p.id +
                         "' before residence assignment");
    const std::size_t sink = static_cast<std::size_t>(scn.nace.other);
    std::vector<long long>& remaining = ledger.remaining[sink];
    const std::vector<long long>& weights_src =
        scn.config.gravity.masked ? remaining : ledger.initial[sink];

    std::vector<double> w(weights_src.size());
    for (std::size_t d = 0; d < w.size(); ++d)
        w[d] = static_cast<double>(weights_src[d]);
    auto probs = gravity_probabilities(scn, *p.residence_cell, w);

    if (scn.config.gravity.masked) {
        return static_cast<int>(
            sample_capacity_constrained(probs, remaining, stream));
    }
    return static_cast<int>(sample_categorical(probs, stream));
}

// Escalated coherent-field workers draw on a static gravity shape and never
// touch the ledger: the sink pool is sized to the sink workers, who must still
// fill it exactly.
int draw_gravity_static(const Scenario& scn, const CapacityLedger& ledger,
                        const Person& p, RandomStream& stream) {
    if (!p.residence_cell)
        throw StageError("gravity assignment for person '" + p.id +
                         "' before residence assignment");
    const std::size_t sink = static_cast<std::size_t>(scn.nace.other);
    std::vector<double> w(scn.districts.size(), 0.0);
    double sum = 0.0;
    for (std::size_t d = 0; d < w.size(); ++d) {
        w[d] = static_cast<double>(ledger.initial[sink][d]);
        sum += w[d];
    }
    if (sum <= 0.0) {
        sum = 0.0;
        for (std::size_t d = 0; d < w.size(); ++d) {
            w[d] = static_cast<double>(scn.districts[d].worker_total);
            sum += w[d];
        }
    }
    if (sum <= 0.0) std::fill(w.begin(), w.end(), 1.0);
    auto probs = gravity_probabilities(scn, *p.residence_cell, w);
    return static_cast<int>(sample_categorical(probs, stream));
}

} // namespace

StageResult run_stage(Scenario& scn, const nace::ConsistencyReport& report) {
    StageResult result;
    result.ledger = scale_capacities(scn, report);
    auto rows = field_district_rows(scn, report);
    RandomStream stage(scn.config.seed, "work_district");

    for (std::size_t i = 0; i < scn.persons.size(); ++i) {
        Person& p = scn.persons[i];
        if (!p.nace) continue;
        int f = *p.nace;
        RandomStream stream = stage.split(p.id);

        if (report.of(f).coherent) {
            auto& remaining = result.ledger.remaining[static_cast<std::size_t>(f)];
            bool escalated = false;
            try {
                std::size_t d = sample_capacity_constrained(
                    rows[static_cast<std::size_t>(f)], remaining, stream);
                p.work_district = static_cast<int>(d);
            } catch (const ExhaustionError&) {
                result.escalations.push_back(Escalation{i, f, "ledger_exhausted"});
                escalated = true;
            } catch (const DegenerateMassError&) {
                result.escalations.push_back(Escalation{i, f, "zero_probability_mass"});
                escalated = true;
            }
            if (escalated)
                p.work_district = draw_gravity_static(scn, result.ledger, p, stream);
            continue;
        }
        p.work_district = draw_gravity(scn, result.ledger, p, stream);
    }
    return result;
}

} // namespace popanchor::subzone
