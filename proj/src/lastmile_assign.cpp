#include "popanchor/lastmile_assign.hpp"

#include "popanchor/error.hpp"
#include "popanchor/parallel.hpp"
#include "popanchor/rng.hpp"
#include "popanchor/tables.hpp"

#include <cmath>

namespace popanchor::lastmile {

std::vector<double> class_probabilities(const Scenario& scn, const District& district,
                                        bool* degenerate) {
    if (degenerate) *degenerate = false;
    std::vector<double> sums(static_cast<std::size_t>(scn.classes.size()), 0.0);
    std::vector<int> present(static_cast<std::size_t>(scn.classes.size()), 0);
    double total = 0.0;
    for (int ci : district.cells) {
        const Cell& c = scn.grid.cells[static_cast<std::size_t>(ci)];
        sums[static_cast<std::size_t>(c.cls)] += scn.weights_work.weight(c.cls);
        present[static_cast<std::size_t>(c.cls)] = 1;
        total += scn.weights_work.weight(c.cls);
    }
    if (total <= 0.0) {
        if (degenerate) *degenerate = true;
        int n_present = 0;
        for (int flag : present) n_present += flag;
        if (n_present == 0)
            throw ConfigError("district '" + district.id + "' has no cells");
        for (std::size_t k = 0; k < sums.size(); ++k)
            sums[k] = present[k] ? 1.0 / n_present : 0.0;
        return sums;
    }
    for (double& v : sums) v /= total;
    return sums;
}

CellChoice cell_probabilities(const Scenario& scn, int residence_cell,
                              const District& district, int cell_class) {
    CellChoice out;
    double exponent = scn.config.gravity.distance_exponent;
    double sum = 0.0;
    for (int ci : district.cells) {
        const Cell& c = scn.grid.cells[static_cast<std::size_t>(ci)];
        if (c.cls != cell_class) continue;
        double d = cell_distance(scn.grid, residence_cell, ci);
        double p = 1.0 / std::pow(d, exponent);
        out.cells.push_back(ci);
        out.probs.push_back(p);
        sum += p;
    }
    if (out.cells.empty())
        throw InternalError("district '" + district.id + "' has no cell of class '" +
                            scn.classes.label(cell_class) + "'");
    for (double& v : out.probs) v /= sum;
    return out;
}

void run_stage(Scenario& scn, int threads) {
    // Class distributions per district are person-independent; compute once.
    std::vector<std::vector<double>> class_probs(scn.districts.size());
    for (std::size_t d = 0; d < scn.districts.size(); ++d)
        class_probs[d] = class_probabilities(scn, scn.districts[d]);

    RandomStream class_stage(scn.config.seed, "cell_class");
    RandomStream cell_stage(scn.config.seed, "work_cell");
    parallel_for(scn.persons.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Person& p = scn.persons[i];
            if (!p.work_district) continue;
            if (!p.residence_cell)
                throw StageError("last-mile assignment for person '" + p.id +
                                 "' before residence assignment");
            const District& district =
                scn.districts[static_cast<std::size_t>(*p.work_district)];

            RandomStream class_stream = class_stage.split(p.id);
            std::size_t cls =
                sample_categorical(class_probs[static_cast<std::size_t>(*p.work_district)],
                                   class_stream);
            p.work_cell_class = static_cast<int>(cls);

            RandomStream cell_stream = cell_stage.split(p.id);
            auto choice = cell_probabilities(scn, *p.residence_cell, district,
                                             static_cast<int>(cls));
            p.work_cell = choice.cells[sample_categorical(choice.probs, cell_stream)];
        }
    });
}

} // namespace popanchor::lastmile
