#pragma once

#include "popanchor/ingest.hpp"
#include "popanchor/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fixtures {

// Unique directory under the system temp dir; removed on destruction unless
// keep() is called (handy when debugging a failing test).
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    void keep() { keep_ = true; }

private:
    std::filesystem::path path_;
    bool keep_ = false;
};

// Accumulates scenario input files and writes them plus a config.json.
class ScenarioBuilder {
public:
    ScenarioBuilder();

    nlohmann::ordered_json config; // edited freely before write()

    void person(const std::string& id, int age, const std::string& gender,
                const std::string& household, const std::string& district);
    void cell(const std::string& id, int row, int col, const std::string& district);
    void landuse(const std::string& cell, const std::string& category, double area_m2);
    void register_employees(const std::string& district, const std::string& nace,
                            long long employees);
    void table(const std::string& name, const std::string& csv_text);
    void od_reference(const std::string& csv_text);

    // Writes everything under dir and returns the config path.
    std::filesystem::path write(const std::filesystem::path& dir) const;

private:
    std::string persons_ = "person_id,age,gender,household_id,residence_district\n";
    std::string cells_ = "cell_id,row,col,district_id\n";
    std::string landuse_ = "cell_id,category,area_m2\n";
    std::string nace_totals_ = "district_id,nace_code,employees\n";
    std::map<std::string, std::string> tables_;
    std::optional<std::string> od_reference_;
};

// In-memory scenario for pure-math tests: a square grid, one class per cell,
// no persons or tables. Cells are named c000, c001, ... row-major.
struct GridSpec {
    double cell_size = 500.0;
    // (row, col, district id, class label) per cell
    std::vector<std::tuple<int, int, std::string, std::string>> cells;
    std::map<std::string, double> work_weights = {
        {"LowResidential", 1.0}, {"HighResidential", 2.0}, {"Commercial", 10.0},
        {"Industrial", 5.0},     {"Education", 3.0},       {"OpenLand", 1.0}};
};

popanchor::Scenario make_grid(const GridSpec& spec);

// The paper-style work-weight map used across tests.
const std::map<std::string, double>& prototype_weights();

} // namespace fixtures
