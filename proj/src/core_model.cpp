#include "popanchor/core_model.hpp"

#include "popanchor/error.hpp"

#include <algorithm>
#include <cmath>

namespace popanchor {

int ClassSet::add(const std::string& label) {
    auto it = index_.find(label);
    if (it != index_.end()) return it->second;
    int idx = static_cast<int>(labels_.size());
    labels_.push_back(label);
    index_.emplace(label, idx);
    return idx;
}

int ClassSet::index_of(const std::string& label) const {
    auto it = index_.find(label);
    return it == index_.end() ? -1 : it->second;
}

int Grid::require(const std::string& cell_id) const {
    auto it = index.find(cell_id);
    if (it == index.end())
        throw ReferentialError("unknown cell id '" + cell_id + "'");
    return it->second;
}

int NaceRegistry::index_of(const std::string& code) const {
    auto it = index.find(code);
    return it == index.end() ? -1 : it->second;
}

double cell_distance(const Grid& grid, int a, int b) {
    const Cell& ca = grid.cells[static_cast<std::size_t>(a)];
    const Cell& cb = grid.cells[static_cast<std::size_t>(b)];
    double d = std::hypot(ca.cx - cb.cx, ca.cy - cb.cy);
    return std::max(d, grid.min_distance());
}

double cell_to_district_distance(const Grid& grid, int cell, const District& district) {
    if (district.cells.empty())
        throw ConfigError("district '" + district.id + "' has no cells");
    double sum = 0.0;
    for (int other : district.cells)
        sum += cell_distance(grid, cell, other);
    return sum / static_cast<double>(district.cells.size());
}

std::vector<double> normalized_cell_weights(const Grid& grid, const District& district,
                                            const WeightConfig& weights) {
    std::vector<double> g(district.cells.size(), 0.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < district.cells.size(); ++i) {
        const Cell& c = grid.cells[static_cast<std::size_t>(district.cells[i])];
        g[i] = weights.weight(c.cls);
        sum += g[i];
    }
    if (sum <= 0.0)
        throw DegenerateDistrictError("district '" + district.id +
                                      "' has zero total cell weight");
    for (double& v : g) v /= sum;
    return g;
}

std::vector<double> normalized_cell_weights_or_uniform(const Grid& grid,
                                                       const District& district,
                                                       const WeightConfig& weights,
                                                       bool* degenerate) {
    if (degenerate) *degenerate = false;
    try {
        return normalized_cell_weights(grid, district, weights);
    } catch (const DegenerateDistrictError&) {
        if (degenerate) *degenerate = true;
        return std::vector<double>(district.cells.size(),
                                   1.0 / static_cast<double>(district.cells.size()));
    }
}

std::vector<double> expected_workplaces(const Grid& grid, const District& district,
                                        const WeightConfig& weights) {
    auto p = normalized_cell_weights(grid, district, weights);
    for (double& v : p) v *= static_cast<double>(district.worker_total);
    return p;
}

} // namespace popanchor
