#include "fixtures.hpp"

#include "popanchor/core_model.hpp"

#include <atomic>
#include <fstream>
#include <unistd.h>

namespace fixtures {

namespace {

std::filesystem::path unique_dir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    auto base = std::filesystem::temp_directory_path();
    auto dir = base / ("popanchor_" + tag + "_" + std::to_string(::getpid()) + "_" +
                       std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

} // namespace

TempDir::TempDir(const std::string& tag) : path_(unique_dir(tag)) {}

TempDir::~TempDir() {
    if (!keep_) {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
}

ScenarioBuilder::ScenarioBuilder() {
    config = nlohmann::ordered_json{
        {"cell_size_m", 500.0},
        {"seed", 42},
        {"coherence_threshold", 2.0},
        {"inputs",
         {{"persons", "persons.csv"},
          {"cells", "cells.csv"},
          {"landuse", "landuse.csv"},
          {"nace_totals", "nace_totals.csv"},
          {"tables_dir", "tables"}}},
    };
}

void ScenarioBuilder::person(const std::string& id, int age, const std::string& gender,
                             const std::string& household, const std::string& district) {
    persons_ += id + "," + std::to_string(age) + "," + gender + "," + household + "," +
                district + "\n";
}

void ScenarioBuilder::cell(const std::string& id, int row, int col,
                           const std::string& district) {
    cells_ += id + "," + std::to_string(row) + "," + std::to_string(col) + "," + district +
              "\n";
}

void ScenarioBuilder::landuse(const std::string& cell, const std::string& category,
                              double area_m2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", area_m2);
    landuse_ += cell + "," + category + "," + buf + "\n";
}

void ScenarioBuilder::register_employees(const std::string& district,
                                         const std::string& nace, long long employees) {
    nace_totals_ += district + "," + nace + "," + std::to_string(employees) + "\n";
}

void ScenarioBuilder::table(const std::string& name, const std::string& csv_text) {
    tables_[name] = csv_text;
}

void ScenarioBuilder::od_reference(const std::string& csv_text) {
    od_reference_ = csv_text;
}

std::filesystem::path ScenarioBuilder::write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir / "tables");
    write_text(dir / "persons.csv", persons_);
    write_text(dir / "cells.csv", cells_);
    write_text(dir / "landuse.csv", landuse_);
    write_text(dir / "nace_totals.csv", nace_totals_);
    for (const auto& [name, text] : tables_)
        write_text(dir / "tables" / (name + ".csv"), text);
    nlohmann::ordered_json cfg = config;
    if (od_reference_) {
        write_text(dir / "od_reference.csv", *od_reference_);
        cfg["inputs"]["od_reference"] = "od_reference.csv";
    }
    auto config_path = dir / "config.json";
    write_text(config_path, cfg.dump(2) + "\n");
    return config_path;
}

popanchor::Scenario make_grid(const GridSpec& spec) {
    using namespace popanchor;
    Scenario scn;
    scn.config.cell_size = spec.cell_size;
    scn.config.class_weights_work = spec.work_weights;
    scn.grid.cell_size = spec.cell_size;

    for (const auto& [label, w] : spec.work_weights) scn.classes.add(label);
    scn.weights_work.purpose = WeightPurpose::Work;
    scn.weights_work.by_class.assign(static_cast<std::size_t>(scn.classes.size()), 0.0);
    for (const auto& [label, w] : spec.work_weights)
        scn.weights_work.by_class[static_cast<std::size_t>(scn.classes.index_of(label))] = w;

    std::map<std::string, std::vector<int>> district_cells;
    for (std::size_t i = 0; i < spec.cells.size(); ++i) {
        const auto& [row, col, district, cls] = spec.cells[i];
        Cell c;
        char name[16];
        std::snprintf(name, sizeof(name), "c%03zu", i);
        c.id = name;
        c.row = row;
        c.col = col;
        c.cx = (col + 0.5) * spec.cell_size;
        c.cy = (row + 0.5) * spec.cell_size;
        c.cls = scn.classes.index_of(cls);
        if (c.cls < 0) throw std::runtime_error("fixture: unknown class " + cls);
        c.work_weight = scn.weights_work.weight(c.cls);
        district_cells[district].push_back(static_cast<int>(i));
        scn.grid.index.emplace(c.id, static_cast<int>(i));
        scn.grid.cells.push_back(std::move(c));
    }
    for (const auto& [id, cells] : district_cells) {
        District d;
        d.id = id;
        d.name = id;
        d.cells = cells;
        int di = static_cast<int>(scn.districts.size());
        for (int ci : cells) scn.grid.cells[static_cast<std::size_t>(ci)].district = di;
        scn.district_index.emplace(id, di);
        scn.districts.push_back(std::move(d));
    }
    scn.nace.codes = {"Other"};
    scn.nace.index = {{"Other", 0}};
    scn.nace.other = 0;
    for (District& d : scn.districts)
        d.register_by_nace.assign(1, 0.0);

    scn.cell_district_distance.resize(scn.grid.cells.size() * scn.districts.size());
    for (std::size_t c = 0; c < scn.grid.cells.size(); ++c)
        for (std::size_t d = 0; d < scn.districts.size(); ++d)
            scn.cell_district_distance[c * scn.districts.size() + d] =
                cell_to_district_distance(scn.grid, static_cast<int>(c), scn.districts[d]);
    return scn;
}

const std::map<std::string, double>& prototype_weights() {
    static const std::map<std::string, double> w = {
        {"LowResidential", 1.0}, {"HighResidential", 2.0}, {"Commercial", 10.0},
        {"Industrial", 5.0},     {"Education", 3.0},       {"OpenLand", 1.0}};
    return w;
}

} // namespace fixtures
