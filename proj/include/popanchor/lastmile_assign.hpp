#pragma once

#include "popanchor/scenario.hpp"

#include <vector>

namespace popanchor::lastmile {

// P(cell class | district): summed class weights over the district's cells,
// normalized. Aligned to the scenario's class set. Zero total weight falls
// back to uniform over the classes present.
std::vector<double> class_probabilities(const Scenario& scn, const District& district,
                                        bool* degenerate = nullptr);

// Candidate work cells of one class within a district, with inverse-distance
// probabilities from the residence cell (exponent from config, distances
// floored at half a cell).
struct CellChoice {
    std::vector<int> cells; // indices into Grid::cells, in district order
    std::vector<double> probs;
};
CellChoice cell_probabilities(const Scenario& scn, int residence_cell,
                              const District& district, int cell_class);

// Draws work_cell_class then work_cell for every district-assigned person.
void run_stage(Scenario& scn, int threads);

} // namespace popanchor::lastmile
