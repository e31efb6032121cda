#include "popanchor/report.hpp"

#include "popanchor/csv.hpp"
#include "popanchor/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace popanchor::report {

ODMatrix build_od_matrix(const Scenario& scn) {
    const std::size_t nd = scn.districts.size();
    std::vector<std::vector<long long>> counts(nd, std::vector<long long>(nd, 0));
    for (const Person& p : scn.persons) {
        if (!p.nace) continue; // not employed
        if (!p.work_district)
            throw StageError("od matrix requested before work districts are assigned");
        ++counts[static_cast<std::size_t>(p.residence_district)]
                [static_cast<std::size_t>(*p.work_district)];
    }
    ODMatrix od;
    od.districts.reserve(nd);
    for (const District& d : scn.districts) od.districts.push_back(d.id);
    od.shares.assign(nd, std::vector<double>(nd, 0.0));
    od.empty_rows.assign(nd, false);
    for (std::size_t r = 0; r < nd; ++r) {
        long long row_total = 0;
        for (long long c : counts[r]) row_total += c;
        if (row_total == 0) {
            od.empty_rows[r] = true;
            continue;
        }
        for (std::size_t c = 0; c < nd; ++c)
            od.shares[r][c] =
                static_cast<double>(counts[r][c]) / static_cast<double>(row_total);
    }
    return od;
}

ODMatrix od_from_shares(std::vector<std::string> districts,
                        std::vector<std::vector<double>> shares) {
    ODMatrix od;
    od.districts = std::move(districts);
    od.shares = std::move(shares);
    if (od.shares.size() != od.districts.size())
        throw ContractError("od_from_shares: shape mismatch");
    for (const auto& row : od.shares)
        if (row.size() != od.districts.size())
            throw ContractError("od_from_shares: shape mismatch");
    od.empty_rows.assign(od.districts.size(), false);
    return od;
}

namespace {

ODMatrix load_od_csv_impl(const std::filesystem::path& path,
                          const std::vector<std::string>* districts) {
    auto file = csv::read_file(path);
    std::size_t c_o = file.column("origin_district");
    std::size_t c_d = file.column("dest_district");
    std::size_t c_s = file.column("share");

    std::vector<std::string> ids;
    if (districts) {
        ids = *districts;
    } else {
        std::set<std::string> found;
        for (std::size_t r = 0; r < file.rows.size(); ++r) {
            found.insert(csv::field(file, r, c_o));
            found.insert(csv::field(file, r, c_d));
        }
        ids.assign(found.begin(), found.end());
    }
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);

    ODMatrix od;
    od.districts = ids;
    od.shares.assign(ids.size(), std::vector<double>(ids.size(), 0.0));
    od.empty_rows.assign(ids.size(), false);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t r = 0; r < file.rows.size(); ++r) {
        auto oi = index.find(csv::field(file, r, c_o));
        auto di = index.find(csv::field(file, r, c_d));
        if (oi == index.end() || di == index.end())
            throw ReferentialError(file.path + ":" + std::to_string(file.line[r]) +
                                   ": unknown district in od reference");
        double share = csv::field_double(file, r, c_s);
        if (share < 0.0)
            throw SchemaError(file.path, file.line[r], c_s + 1, "negative share");
        if (!seen.emplace(oi->second, di->second).second)
            throw SchemaError(file.path, file.line[r], c_o + 1,
                              "duplicate origin/destination pair");
        od.shares[oi->second][di->second] = share;
    }
    return od;
}

} // namespace

ODMatrix load_od_csv(const std::filesystem::path& path) {
    return load_od_csv_impl(path, nullptr);
}

ODMatrix load_od_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& districts) {
    return load_od_csv_impl(path, &districts);
}

std::vector<std::vector<double>> delta_matrix(const ODMatrix& a, const ODMatrix& b) {
    if (a.districts != b.districts)
        throw ContractError("delta_matrix: district lists differ");
    std::vector<std::vector<double>> delta(a.shares.size(),
                                           std::vector<double>(a.shares.size(), 0.0));
    for (std::size_t r = 0; r < a.shares.size(); ++r)
        for (std::size_t c = 0; c < a.shares.size(); ++c)
            delta[r][c] = a.shares[r][c] - b.shares[r][c];
    return delta;
}

std::vector<long long> per_cell_counts(const Scenario& scn, CountKind kind,
                                       const std::optional<CountFilter>& filter) {
    std::vector<long long> counts(scn.grid.cells.size(), 0);
    for (const Person& p : scn.persons) {
        int cell = -1;
        if (kind == CountKind::Residents) {
            if (!p.residence_cell)
                throw StageError("per-cell resident counts before residence assignment");
            cell = *p.residence_cell;
        } else {
            if (!p.nace) continue;
            if (!p.work_cell)
                throw StageError("per-cell worker counts before work-cell assignment");
            cell = *p.work_cell;
        }
        if (filter) {
            if (filter->residence_district &&
                p.residence_district != *filter->residence_district)
                continue;
            if (filter->work_district &&
                (!p.work_district || *p.work_district != *filter->work_district))
                continue;
        }
        ++counts[static_cast<std::size_t>(cell)];
    }
    return counts;
}

std::vector<NaceReportRow> nace_totals_report(const Scenario& scn,
                                              const nace::ConsistencyReport& gate) {
    std::vector<long long> synthetic(static_cast<std::size_t>(scn.nace.size()), 0);
    for (const Person& p : scn.persons)
        if (p.nace) ++synthetic[static_cast<std::size_t>(*p.nace)];

    std::vector<NaceReportRow> rows;
    rows.reserve(gate.fields.size());
    for (const nace::FieldVerdict& v : gate.fields) {
        NaceReportRow row;
        row.code = v.code;
        row.synthetic_total = synthetic[static_cast<std::size_t>(
            scn.nace.index_of(v.code))];
        row.register_total = v.register_total;
        row.census_total = v.census_total;
        row.verdict = v.sink ? "sink" : (v.coherent ? "coherent" : "incoherent");
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_od_csv(const std::filesystem::path& path, const ODMatrix& od) {
    csv::Writer w(path);
    std::vector<std::string> header{"origin"};
    header.insert(header.end(), od.districts.begin(), od.districts.end());
    w.row(header);
    for (std::size_t r = 0; r < od.districts.size(); ++r) {
        std::vector<std::string> row{od.districts[r]};
        for (double v : od.shares[r]) row.push_back(csv::format_double(v, 9));
        w.row(row);
    }
    w.close();
}

void write_delta_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& districts,
                     const std::vector<std::vector<double>>& delta) {
    csv::Writer w(path);
    std::vector<std::string> header{"origin"};
    header.insert(header.end(), districts.begin(), districts.end());
    w.row(header);
    for (std::size_t r = 0; r < districts.size(); ++r) {
        std::vector<std::string> row{districts[r]};
        for (double v : delta[r]) row.push_back(csv::format_double(v, 6));
        w.row(row);
    }
    w.close();
}

void write_cell_counts_csv(const std::filesystem::path& path, const Scenario& scn,
                           const std::vector<long long>& counts) {
    csv::Writer w(path);
    w.row({"cell_id", "district_id", "count"});
    for (std::size_t c = 0; c < scn.grid.cells.size(); ++c) {
        const Cell& cell = scn.grid.cells[c];
        w.row({cell.id, scn.districts[static_cast<std::size_t>(cell.district)].id,
               std::to_string(counts[c])});
    }
    w.close();
}

void write_nace_report_csv(const std::filesystem::path& path,
                           const std::vector<NaceReportRow>& rows) {
    csv::Writer w(path);
    w.row({"nace_code", "synthetic_total", "register_total", "census_total", "verdict"});
    for (const NaceReportRow& r : rows)
        w.row({r.code, std::to_string(r.synthetic_total), std::to_string(r.register_total),
               std::to_string(r.census_total), r.verdict});
    w.close();
}

void write_consistency_csv(const std::filesystem::path& path,
                           const nace::ConsistencyReport& gate) {
    csv::Writer w(path);
    w.row({"nace_code", "census_total", "register_total", "ratio", "verdict"});
    for (const nace::FieldVerdict& v : gate.fields) {
        std::string ratio = std::isfinite(v.ratio) ? csv::format_double(v.ratio, 6) : "inf";
        w.row({v.code, std::to_string(v.census_total), std::to_string(v.register_total),
               ratio, v.sink ? "sink" : (v.coherent ? "coherent" : "incoherent")});
    }
    w.close();
}

void write_escalations_csv(const std::filesystem::path& path, const Scenario& scn,
                           const std::vector<subzone::Escalation>& escalations) {
    csv::Writer w(path);
    w.row({"person_id", "nace_code", "reason"});
    for (const subzone::Escalation& e : escalations)
        w.row({scn.persons[e.person].id,
               scn.nace.codes[static_cast<std::size_t>(e.nace)], e.reason});
    w.close();
}

void write_geojson(const std::filesystem::path& path, const Scenario& scn,
                   const std::vector<long long>& residents,
                   const std::vector<long long>& workers) {
    nlohmann::ordered_json features = nlohmann::ordered_json::array();
    const double s = scn.grid.cell_size;
    for (std::size_t c = 0; c < scn.grid.cells.size(); ++c) {
        const Cell& cell = scn.grid.cells[c];
        double x0 = cell.col * s, y0 = cell.row * s;
        nlohmann::ordered_json feature;
        feature["type"] = "Feature";
        feature["properties"] = {
            {"cell_id", cell.id},
            {"district_id", scn.districts[static_cast<std::size_t>(cell.district)].id},
            {"class", scn.classes.label(cell.cls)},
            {"residents", residents.empty() ? 0 : residents[c]},
            {"workers", workers.empty() ? 0 : workers[c]},
        };
        feature["geometry"] = {
            {"type", "Polygon"},
            {"coordinates",
             {{{x0, y0}, {x0 + s, y0}, {x0 + s, y0 + s}, {x0, y0 + s}, {x0, y0}}}},
        };
        features.push_back(std::move(feature));
    }
    nlohmann::ordered_json doc;
    doc["type"] = "FeatureCollection";
    doc["features"] = std::move(features);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open output file: " + path.string());
    out << doc.dump(1, ' ') << "\n";
}

} // namespace popanchor::report
