#pragma once

#include "popanchor/nace_assign.hpp"
#include "popanchor/scenario.hpp"
#include "popanchor/subzone_assign.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace popanchor::report {

// Residence-district x work-district shares. Rows built from counts are
// normalized to 1; rows without any worker stay all-zero and are flagged.
struct ODMatrix {
    std::vector<std::string> districts;
    std::vector<std::vector<double>> shares;
    std::vector<bool> empty_rows;
};

ODMatrix build_od_matrix(const Scenario& scn);

// Raw shares as given (no renormalization), e.g. published reference tables.
ODMatrix od_from_shares(std::vector<std::string> districts,
                        std::vector<std::vector<double>> shares);

// Long-format CSV: origin_district,dest_district,share. With a district list
// the ids must resolve against it; without one, the sorted set of ids found
// in the file defines the ordering.
ODMatrix load_od_csv(const std::filesystem::path& path);
ODMatrix load_od_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& districts);

// Elementwise a - b; district lists must match.
std::vector<std::vector<double>> delta_matrix(const ODMatrix& a, const ODMatrix& b);

enum class CountKind { Residents, Workers };

struct CountFilter {
    std::optional<int> residence_district;
    std::optional<int> work_district;
};

// Per-cell person counts, optionally restricted to one commuting relation.
std::vector<long long> per_cell_counts(const Scenario& scn, CountKind kind,
                                       const std::optional<CountFilter>& filter = {});

struct NaceReportRow {
    std::string code;
    long long synthetic_total = 0; // effective labels after the gate
    long long register_total = 0;
    long long census_total = 0;    // labels as drawn from census tables
    std::string verdict;           // coherent | incoherent | sink
};

std::vector<NaceReportRow> nace_totals_report(const Scenario& scn,
                                              const nace::ConsistencyReport& gate);

void write_od_csv(const std::filesystem::path& path, const ODMatrix& od);
void write_delta_csv(const std::filesystem::path& path,
                     const std::vector<std::string>& districts,
                     const std::vector<std::vector<double>>& delta);
void write_cell_counts_csv(const std::filesystem::path& path, const Scenario& scn,
                           const std::vector<long long>& counts);
void write_nace_report_csv(const std::filesystem::path& path,
                           const std::vector<NaceReportRow>& rows);
void write_consistency_csv(const std::filesystem::path& path,
                           const nace::ConsistencyReport& gate);
void write_escalations_csv(const std::filesystem::path& path, const Scenario& scn,
                           const std::vector<subzone::Escalation>& escalations);

// Cells as squares in the planar grid CRS with count properties attached.
void write_geojson(const std::filesystem::path& path, const Scenario& scn,
                   const std::vector<long long>& residents,
                   const std::vector<long long>& workers);

} // namespace popanchor::report
