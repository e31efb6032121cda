#pragma once

#include "popanchor/core_model.hpp"
#include "popanchor/tables.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace popanchor {

// Maps raw land-use categories onto cell classes. Residential categories are
// pooled into one bucket that splits into high/low residential on an absolute
// floor-area threshold; every other category maps straight to a class label.
struct ClassificationRules {
    std::vector<std::string> residential_categories{"residential"};
    std::map<std::string, std::string> category_classes{
        {"office", "Commercial"},
        {"industrial", "Industrial"},
        {"education", "Education"},
    };
    std::string high_residential_class = "HighResidential";
    std::string low_residential_class = "LowResidential";
    std::string open_land_class = "OpenLand";
    double high_residential_min_m2 = 4000.0;
    // Bucket names: class labels plus "@residential" for the pooled bucket.
    std::vector<std::string> tie_precedence{"Commercial", "Industrial", "Education",
                                            "@residential", "OpenLand"};
};

struct FeasibilityRule {
    std::string occupation;
    int min_age = 0;
    int max_age = 200;
};

// Enabled stages must form a prefix of the pipeline order.
struct StageToggles {
    bool residence = true;
    bool nace = true;
    bool subzone = true;
    bool lastmile = true;
    bool report = true;
};

struct GravityOptions {
    bool masked = true;            // enforce capacities exactly during gravity draws
    double distance_exponent = 1.0; // applied to the last-mile inverse-distance kernel
};

enum class ResidenceWeightMode { FloorArea, ClassWeights };

struct ScenarioConfig {
    std::filesystem::path config_path;
    std::string config_hash;

    double cell_size = 500.0;
    std::uint64_t seed = 0;
    double coherence_threshold = 2.0;
    int age_band_width = 5;
    int worker_min_age = 15;
    int worker_max_age = 74;

    std::map<std::string, double> class_weights_work;
    std::map<std::string, double> class_weights_residence; // required in class mode
    ClassificationRules classification;
    std::vector<FeasibilityRule> feasibility_rules;
    ResidenceWeightMode residence_weight_mode = ResidenceWeightMode::FloorArea;
    GravityOptions gravity;
    StageToggles stages;
    bool table_backoff = true;
    bool emit_geojson = true;
    std::string other_nace_code = "Other";
    std::string not_employed_label = "not employed";

    std::filesystem::path persons_path;
    std::filesystem::path cells_path;
    std::filesystem::path landuse_path;
    std::filesystem::path nace_totals_path;
    std::filesystem::path tables_dir;
    std::optional<std::filesystem::path> od_reference_path;
};

// Immutable in-memory scenario. Built once by ingest; all pipeline stages
// mutate only the per-person anchor fields.
struct Scenario {
    ScenarioConfig config;
    ClassSet classes;
    WeightConfig weights_work;
    std::optional<WeightConfig> weights_residence;

    Grid grid;
    std::vector<District> districts; // sorted by id
    std::unordered_map<std::string, int> district_index;
    NaceRegistry nace;
    std::vector<Person> persons; // sorted by id
    std::map<std::string, ConditionalTable> tables;

    // Mean cell-to-district distances, [cell * districts.size() + district].
    std::vector<double> cell_district_distance;

    std::vector<std::string> load_warnings;

    int require_district(const std::string& id) const;
    double district_distance(int cell, int district) const {
        return cell_district_distance[static_cast<std::size_t>(cell) * districts.size() +
                                      static_cast<std::size_t>(district)];
    }
    const ConditionalTable& table(const std::string& name) const;
    bool worker_eligible(int age) const {
        return age >= config.worker_min_age && age <= config.worker_max_age;
    }
    bool is_employed(const Person& p) const {
        return p.occupation && *p.occupation != config.not_employed_label;
    }
};

// Half-open 5-year style bands: width 10 puts age 34 in "30-39".
std::string age_band_label(int age, int width);

} // namespace popanchor
