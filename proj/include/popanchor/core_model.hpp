#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace popanchor {

// Registries are sorted by external id at load time, so the integer indices
// used throughout the pipeline are stable for a given set of input files.

// Active cell-class set. Labels come from configuration (e.g. the six-class
// prototype set or a four-class HR/LR/OW/MW set).
class ClassSet {
public:
    int add(const std::string& label);        // idempotent
    int index_of(const std::string& label) const; // -1 if absent
    const std::string& label(int idx) const { return labels_.at(static_cast<std::size_t>(idx)); }
    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> index_;
};

enum class WeightPurpose { Work, Residence };

// Per-class weights g_X for one purpose, aligned to a ClassSet.
struct WeightConfig {
    WeightPurpose purpose = WeightPurpose::Work;
    std::vector<double> by_class; // indexed by class id

    double weight(int class_idx) const { return by_class.at(static_cast<std::size_t>(class_idx)); }
};

struct Cell {
    std::string id;
    int row = 0;
    int col = 0;
    double cx = 0.0; // centroid, meters
    double cy = 0.0;
    int district = -1;
    int cls = -1;
    double work_weight = 0.0;      // class weight under the work config
    double residential_area = 0.0; // m² of residential floor area
    std::map<std::string, double> landuse; // category -> m²
};

struct Grid {
    double cell_size = 500.0;
    std::vector<Cell> cells; // sorted by cell id
    std::unordered_map<std::string, int> index;

    // Near-zero distances are floored so inverse-distance kernels stay finite
    // when residence and candidate cell coincide.
    double min_distance() const { return cell_size / 2.0; }
    int require(const std::string& cell_id) const;
};

struct District {
    std::string id;
    std::string name;
    std::vector<int> cells;                  // indices into Grid::cells
    std::vector<double> register_by_nace;    // employees per nace field (register totals)
    long long worker_total = 0;              // sum of register employees
};

struct NaceRegistry {
    std::vector<std::string> codes; // sorted, "Other" sink always present
    std::unordered_map<std::string, int> index;
    int other = -1; // index of the sink field

    int index_of(const std::string& code) const;
    int size() const { return static_cast<int>(codes.size()); }
};

struct Person {
    std::string id;
    int age = 0;
    std::string gender;
    std::string household_id;
    int residence_district = -1;

    // Anchor attributes, filled stage by stage.
    std::optional<int> residence_cell;
    std::optional<std::string> occupation;
    std::optional<int> nace;        // effective field (after the consistency gate)
    std::optional<int> census_nace; // field as drawn from census tables, kept for reporting
    std::optional<int> work_district;
    std::optional<int> work_cell_class;
    std::optional<int> work_cell;
};

// Euclidean centroid distance, floored at min_distance().
double cell_distance(const Grid& grid, int a, int b);

// Arithmetic mean of cell_distance over every cell of the district.
double cell_to_district_distance(const Grid& grid, int cell, const District& district);

// Per-cell probabilities within a district: p_i = g_i / sum(g). Values are
// aligned to district.cells. Throws DegenerateDistrictError when every weight
// is zero; callers that want the uniform fallback use *_or_uniform.
std::vector<double> normalized_cell_weights(const Grid& grid, const District& district,
                                            const WeightConfig& weights);

std::vector<double> normalized_cell_weights_or_uniform(const Grid& grid,
                                                       const District& district,
                                                       const WeightConfig& weights,
                                                       bool* degenerate = nullptr);

// Expected workplaces per cell: p_i * worker_total (fractional; integerization
// happens downstream).
std::vector<double> expected_workplaces(const Grid& grid, const District& district,
                                        const WeightConfig& weights);

} // namespace popanchor
