#include "popanchor/ingest.hpp"

#include "popanchor/csv.hpp"
#include "popanchor/error.hpp"
#include "popanchor/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace popanchor {

std::string age_band_label(int age, int width) {
    if (width <= 0)
        throw ContractError("age band width must be positive");
    int lo = (age / width) * width;
    return std::to_string(lo) + "-" + std::to_string(lo + width - 1);
}

int Scenario::require_district(const std::string& id) const {
    auto it = district_index.find(id);
    if (it == district_index.end())
        throw ReferentialError("unknown district id '" + id + "'");
    return it->second;
}

const ConditionalTable& Scenario::table(const std::string& name) const {
    auto it = tables.find(name);
    if (it == tables.end())
        throw ConfigError("required table '" + name + "' not found in " +
                          config.tables_dir.string());
    return it->second;
}

} // namespace popanchor

namespace popanchor::ingest {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known)
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

std::map<std::string, double> parse_weight_map(const json& obj, const std::string& where) {
    std::map<std::string, double> out;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        double w = it.value().get<double>();
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ConfigError(where + ": weight for '" + it.key() +
                              "' must be finite and >= 0");
        out[it.key()] = w;
    }
    bool any_positive = false;
    for (auto& [k, w] : out)
        if (w > 0.0) any_positive = true;
    if (!out.empty() && !any_positive)
        throw ConfigError(where + ": at least one weight must be positive");
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& rel) {
    std::filesystem::path p(rel);
    return p.is_absolute() ? p : base / p;
}

std::string hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::uint64_t h = detail::fnv1a64(ss.str());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void validate_classification(const ClassificationRules& rules,
                             const std::map<std::string, double>& work_weights) {
    auto require_weight = [&](const std::string& label, const std::string& role) {
        if (!work_weights.count(label))
            throw ConfigError("classification " + role + " class '" + label +
                              "' has no entry in class_weights.work");
    };
    require_weight(rules.high_residential_class, "high-residential");
    require_weight(rules.low_residential_class, "low-residential");
    require_weight(rules.open_land_class, "open-land");

    std::set<std::string> buckets{"@residential"};
    for (const auto& [cat, label] : rules.category_classes) {
        require_weight(label, "category");
        buckets.insert(label);
    }
    for (const std::string& b : rules.tie_precedence) buckets.erase(b);
    if (!buckets.empty())
        throw ConfigError("classification tie_precedence is missing bucket '" +
                          *buckets.begin() + "'");
    if (rules.residential_categories.empty())
        throw ConfigError("classification needs at least one residential category");
    if (rules.high_residential_min_m2 < 0.0)
        throw ConfigError("high_residential_min_m2 must be >= 0");
}

} // namespace

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }

    ScenarioConfig cfg;
    cfg.config_path = std::filesystem::absolute(path);
    cfg.config_hash = hash_file(path);
    const auto base = cfg.config_path.parent_path();

    check_keys(doc, "config",
               {"cell_size_m", "seed", "coherence_threshold", "age_band_width",
                "worker_age", "class_weights", "classification", "feasibility_rules",
                "residence_weight_mode", "gravity", "stages", "table_backoff",
                "emit_geojson", "other_nace_code", "not_employed_label", "inputs"});

    cfg.cell_size = doc.value("cell_size_m", cfg.cell_size);
    if (!(cfg.cell_size > 0.0))
        throw ConfigError("cell_size_m must be > 0");
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.coherence_threshold = doc.value("coherence_threshold", cfg.coherence_threshold);
    if (!(cfg.coherence_threshold > 1.0))
        throw ConfigError("coherence_threshold must be > 1");
    cfg.age_band_width = doc.value("age_band_width", cfg.age_band_width);
    if (cfg.age_band_width < 1)
        throw ConfigError("age_band_width must be >= 1");

    if (doc.contains("worker_age")) {
        const json& wa = doc["worker_age"];
        check_keys(wa, "worker_age", {"min", "max"});
        cfg.worker_min_age = wa.value("min", cfg.worker_min_age);
        cfg.worker_max_age = wa.value("max", cfg.worker_max_age);
        if (cfg.worker_min_age < 0 || cfg.worker_min_age > cfg.worker_max_age)
            throw ConfigError("worker_age: need 0 <= min <= max");
    }

    // Default to the six-class prototype work weights when none are given.
    cfg.class_weights_work = {{"LowResidential", 1.0}, {"HighResidential", 2.0},
                              {"Commercial", 10.0},    {"Industrial", 5.0},
                              {"Education", 3.0},      {"OpenLand", 1.0}};
    if (doc.contains("class_weights")) {
        const json& cw = doc["class_weights"];
        check_keys(cw, "class_weights", {"work", "residence"});
        if (cw.contains("work"))
            cfg.class_weights_work = parse_weight_map(cw["work"], "class_weights.work");
        if (cw.contains("residence"))
            cfg.class_weights_residence =
                parse_weight_map(cw["residence"], "class_weights.residence");
    }
    if (cfg.class_weights_work.empty())
        throw ConfigError("class_weights.work must not be empty");

    if (doc.contains("classification")) {
        const json& cl = doc["classification"];
        check_keys(cl, "classification",
                   {"residential_categories", "category_classes", "high_residential_class",
                    "low_residential_class", "open_land_class", "high_residential_min_m2",
                    "tie_precedence"});
        ClassificationRules& r = cfg.classification;
        if (cl.contains("residential_categories"))
            r.residential_categories = cl["residential_categories"].get<std::vector<std::string>>();
        if (cl.contains("category_classes"))
            r.category_classes = cl["category_classes"].get<std::map<std::string, std::string>>();
        r.high_residential_class = cl.value("high_residential_class", r.high_residential_class);
        r.low_residential_class = cl.value("low_residential_class", r.low_residential_class);
        r.open_land_class = cl.value("open_land_class", r.open_land_class);
        r.high_residential_min_m2 = cl.value("high_residential_min_m2", r.high_residential_min_m2);
        if (cl.contains("tie_precedence"))
            r.tie_precedence = cl["tie_precedence"].get<std::vector<std::string>>();
    }
    validate_classification(cfg.classification, cfg.class_weights_work);

    if (doc.contains("feasibility_rules")) {
        for (const json& jr : doc["feasibility_rules"]) {
            check_keys(jr, "feasibility_rules[]", {"occupation", "min_age", "max_age"});
            FeasibilityRule rule;
            rule.occupation = jr.at("occupation").get<std::string>();
            rule.min_age = jr.value("min_age", 0);
            rule.max_age = jr.value("max_age", 200);
            if (rule.occupation.empty())
                throw ConfigError("feasibility rule with empty occupation");
            if (rule.min_age > rule.max_age)
                throw ConfigError("feasibility rule for '" + rule.occupation +
                                  "': min_age > max_age");
            cfg.feasibility_rules.push_back(std::move(rule));
        }
    }

    if (doc.contains("residence_weight_mode")) {
        std::string mode = doc["residence_weight_mode"].get<std::string>();
        if (mode == "floor_area")
            cfg.residence_weight_mode = ResidenceWeightMode::FloorArea;
        else if (mode == "class")
            cfg.residence_weight_mode = ResidenceWeightMode::ClassWeights;
        else
            throw ConfigError("residence_weight_mode must be 'floor_area' or 'class'");
    }
    if (cfg.residence_weight_mode == ResidenceWeightMode::ClassWeights &&
        cfg.class_weights_residence.empty())
        throw ConfigError("residence_weight_mode 'class' needs class_weights.residence");

    if (doc.contains("gravity")) {
        const json& g = doc["gravity"];
        check_keys(g, "gravity", {"masked", "distance_exponent"});
        cfg.gravity.masked = g.value("masked", cfg.gravity.masked);
        cfg.gravity.distance_exponent =
            g.value("distance_exponent", cfg.gravity.distance_exponent);
        if (!(cfg.gravity.distance_exponent > 0.0))
            throw ConfigError("gravity.distance_exponent must be > 0");
    }

    if (doc.contains("stages")) {
        const json& st = doc["stages"];
        check_keys(st, "stages", {"residence", "nace", "subzone", "lastmile", "report"});
        cfg.stages.residence = st.value("residence", true);
        cfg.stages.nace = st.value("nace", true);
        cfg.stages.subzone = st.value("subzone", true);
        cfg.stages.lastmile = st.value("lastmile", true);
        cfg.stages.report = st.value("report", true);
        const bool order[] = {cfg.stages.residence, cfg.stages.nace, cfg.stages.subzone,
                              cfg.stages.lastmile, cfg.stages.report};
        bool off_seen = false;
        for (bool on : order) {
            if (!on) off_seen = true;
            else if (off_seen)
                throw ConfigError("stages must form a prefix of "
                                  "residence,nace,subzone,lastmile,report");
        }
    }

    cfg.table_backoff = doc.value("table_backoff", cfg.table_backoff);
    cfg.emit_geojson = doc.value("emit_geojson", cfg.emit_geojson);
    cfg.other_nace_code = doc.value("other_nace_code", cfg.other_nace_code);
    cfg.not_employed_label = doc.value("not_employed_label", cfg.not_employed_label);
    if (cfg.other_nace_code.empty() || cfg.not_employed_label.empty())
        throw ConfigError("other_nace_code / not_employed_label must not be empty");
    for (const auto& rule : cfg.feasibility_rules)
        if (rule.occupation == cfg.not_employed_label)
            throw ConfigError("feasibility rules must not target '" +
                              cfg.not_employed_label + "'");

    if (!doc.contains("inputs"))
        throw ConfigError("config is missing the 'inputs' section");
    const json& inputs = doc["inputs"];
    check_keys(inputs, "inputs",
               {"persons", "cells", "landuse", "nace_totals", "tables_dir", "od_reference"});
    auto required_path = [&](const char* key) {
        if (!inputs.contains(key))
            throw ConfigError(std::string("inputs.") + key + " is required");
        return resolve(base, inputs[key].get<std::string>());
    };
    cfg.persons_path = required_path("persons");
    cfg.cells_path = required_path("cells");
    cfg.landuse_path = required_path("landuse");
    cfg.nace_totals_path = required_path("nace_totals");
    cfg.tables_dir = required_path("tables_dir");
    if (inputs.contains("od_reference"))
        cfg.od_reference_path = resolve(base, inputs["od_reference"].get<std::string>());

    for (const auto& p : {cfg.persons_path, cfg.cells_path, cfg.landuse_path,
                          cfg.nace_totals_path, cfg.tables_dir}) {
        if (!std::filesystem::exists(p))
            throw ConfigError("input path does not exist: " + p.string());
    }
    if (cfg.od_reference_path && !std::filesystem::exists(*cfg.od_reference_path))
        throw ConfigError("od_reference path does not exist: " +
                          cfg.od_reference_path->string());
    return cfg;
}

std::string classify_cell(const std::map<std::string, double>& areas,
                          const ClassificationRules& rules) {
    std::map<std::string, double> bucket_area; // bucket -> m²
    double residential = 0.0;
    double total = 0.0;
    for (const auto& [category, area] : areas) {
        if (area < 0.0)
            throw ContractError("negative land-use area for category '" + category + "'");
        total += area;
        bool is_res = std::find(rules.residential_categories.begin(),
                                rules.residential_categories.end(),
                                category) != rules.residential_categories.end();
        if (is_res) {
            residential += area;
        } else {
            auto it = rules.category_classes.find(category);
            if (it == rules.category_classes.end())
                throw ConfigError("land-use category '" + category +
                                  "' is not mapped by the classification rules");
            bucket_area[it->second] += area;
        }
    }
    if (total <= 0.0) return rules.open_land_class;
    bucket_area["@residential"] = residential;

    auto precedence = [&](const std::string& bucket) {
        auto it = std::find(rules.tie_precedence.begin(), rules.tie_precedence.end(), bucket);
        return it == rules.tie_precedence.end()
                   ? rules.tie_precedence.size()
                   : static_cast<std::size_t>(it - rules.tie_precedence.begin());
    };

    std::string best;
    double best_area = -1.0;
    for (const auto& [bucket, area] : bucket_area) {
        if (area <= 0.0) continue;
        if (area > best_area ||
            (area == best_area && precedence(bucket) < precedence(best))) {
            best = bucket;
            best_area = area;
        }
    }
    if (best.empty()) return rules.open_land_class;
    if (best == "@residential")
        return residential >= rules.high_residential_min_m2 ? rules.high_residential_class
                                                            : rules.low_residential_class;
    return best;
}

Scenario load_scenario(const ScenarioConfig& config) {
    Scenario scn;
    scn.config = config;

    // Class registry: sorted work-weight labels define the active set.
    for (const auto& [label, w] : config.class_weights_work) scn.classes.add(label);
    scn.weights_work.purpose = WeightPurpose::Work;
    scn.weights_work.by_class.resize(static_cast<std::size_t>(scn.classes.size()), 0.0);
    for (const auto& [label, w] : config.class_weights_work)
        scn.weights_work.by_class[static_cast<std::size_t>(scn.classes.index_of(label))] = w;
    if (!config.class_weights_residence.empty()) {
        WeightConfig res;
        res.purpose = WeightPurpose::Residence;
        res.by_class.resize(static_cast<std::size_t>(scn.classes.size()), 0.0);
        for (const auto& [label, w] : config.class_weights_residence) {
            int idx = scn.classes.index_of(label);
            if (idx < 0)
                throw ConfigError("class_weights.residence label '" + label +
                                  "' is not in class_weights.work");
            res.by_class[static_cast<std::size_t>(idx)] = w;
        }
        scn.weights_residence = std::move(res);
    }

    scn.grid.cell_size = config.cell_size;

    // cells.csv
    std::vector<std::string> cell_district; // parallel to cells before sort
    {
        auto file = csv::read_file(config.cells_path);
        std::size_t c_id = file.column("cell_id");
        std::size_t c_row = file.column("row");
        std::size_t c_col = file.column("col");
        std::size_t c_district = file.column("district_id");
        struct RawCell { Cell cell; std::string district; std::size_t line; };
        std::vector<RawCell> raw;
        raw.reserve(file.rows.size());
        for (std::size_t r = 0; r < file.rows.size(); ++r) {
            RawCell rc;
            rc.cell.id = csv::field(file, r, c_id);
            if (rc.cell.id.empty())
                throw SchemaError(file.path, file.line[r], c_id + 1, "empty cell_id");
            long long row = csv::field_int(file, r, c_row);
            long long col = csv::field_int(file, r, c_col);
            if (row < 0 || col < 0)
                throw SchemaError(file.path, file.line[r], c_row + 1,
                                  "row/col indices must be >= 0");
            rc.cell.row = static_cast<int>(row);
            rc.cell.col = static_cast<int>(col);
            rc.cell.cx = (static_cast<double>(col) + 0.5) * config.cell_size;
            rc.cell.cy = (static_cast<double>(row) + 0.5) * config.cell_size;
            rc.district = csv::field(file, r, c_district);
            if (rc.district.empty())
                throw SchemaError(file.path, file.line[r], c_district + 1,
                                  "empty district_id");
            rc.line = file.line[r];
            raw.push_back(std::move(rc));
        }
        if (raw.empty())
            throw SchemaError(file.path, 1, 1, "cells.csv has no cells");
        std::sort(raw.begin(), raw.end(),
                  [](const RawCell& a, const RawCell& b) { return a.cell.id < b.cell.id; });
        for (std::size_t i = 1; i < raw.size(); ++i)
            if (raw[i].cell.id == raw[i - 1].cell.id)
                throw SchemaError(file.path, raw[i].line, c_id + 1,
                                  "duplicate cell_id '" + raw[i].cell.id + "'");
        std::set<std::string> district_ids;
        for (const RawCell& rc : raw) district_ids.insert(rc.district);
        for (const std::string& did : district_ids) {
            District d;
            d.id = did;
            d.name = did;
            scn.district_index.emplace(did, static_cast<int>(scn.districts.size()));
            scn.districts.push_back(std::move(d));
        }
        for (RawCell& rc : raw) {
            int ci = static_cast<int>(scn.grid.cells.size());
            rc.cell.district = scn.district_index.at(rc.district);
            scn.districts[static_cast<std::size_t>(rc.cell.district)].cells.push_back(ci);
            scn.grid.index.emplace(rc.cell.id, ci);
            scn.grid.cells.push_back(std::move(rc.cell));
        }
    }

    // landuse.csv (long format, possibly repeated categories per cell)
    {
        auto file = csv::read_file(config.landuse_path);
        std::size_t c_id = file.column("cell_id");
        std::size_t c_cat = file.column("category");
        std::size_t c_area = file.column("area_m2");
        for (std::size_t r = 0; r < file.rows.size(); ++r) {
            const std::string& cid = csv::field(file, r, c_id);
            auto it = scn.grid.index.find(cid);
            if (it == scn.grid.index.end())
                throw ReferentialError(file.path + ":" + std::to_string(file.line[r]) +
                                       ": landuse references unknown cell '" + cid + "'");
            const std::string& cat = csv::field(file, r, c_cat);
            double area = csv::field_double(file, r, c_area);
            if (area < 0.0)
                throw SchemaError(file.path, file.line[r], c_area + 1, "negative area_m2");
            scn.grid.cells[static_cast<std::size_t>(it->second)].landuse[cat] += area;
        }
    }

    // classify cells, attach weights
    for (Cell& cell : scn.grid.cells) {
        std::string label = classify_cell(cell.landuse, config.classification);
        int cls = scn.classes.index_of(label);
        if (cls < 0)
            throw ConfigError("classification produced class '" + label +
                              "' which has no work weight");
        cell.cls = cls;
        cell.work_weight = scn.weights_work.weight(cls);
        cell.residential_area = 0.0;
        for (const std::string& cat : config.classification.residential_categories) {
            auto it = cell.landuse.find(cat);
            if (it != cell.landuse.end()) cell.residential_area += it->second;
        }
    }

    // tables/*.csv
    {
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(config.tables_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".csv")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& p : files) {
            auto file = csv::read_file(p);
            std::string name = p.stem().string();
            auto table = ConditionalTable::from_csv(file, name);
            for (const std::string& key : table.renormalized_keys())
                scn.load_warnings.push_back("table '" + name + "': renormalized row " + key);
            scn.tables.emplace(name, std::move(table));
        }
    }

    // nace registry: register codes + nace table outcomes + the sink
    {
        std::set<std::string> codes;
        auto file = csv::read_file(config.nace_totals_path);
        std::size_t c_d = file.column("district_id");
        std::size_t c_code = file.column("nace_code");
        std::size_t c_emp = file.column("employees");
        for (std::size_t r = 0; r < file.rows.size(); ++r)
            codes.insert(csv::field(file, r, c_code));
        if (auto it = scn.tables.find("nace"); it != scn.tables.end())
            for (const std::string& o : it->second.outcomes()) codes.insert(o);
        codes.insert(config.other_nace_code);
        for (const std::string& c : codes) {
            scn.nace.index.emplace(c, static_cast<int>(scn.nace.codes.size()));
            scn.nace.codes.push_back(c);
        }
        scn.nace.other = scn.nace.index_of(config.other_nace_code);

        for (District& d : scn.districts)
            d.register_by_nace.assign(static_cast<std::size_t>(scn.nace.size()), 0.0);
        for (std::size_t r = 0; r < file.rows.size(); ++r) {
            const std::string& did = csv::field(file, r, c_d);
            auto it = scn.district_index.find(did);
            if (it == scn.district_index.end())
                throw ReferentialError(file.path + ":" + std::to_string(file.line[r]) +
                                       ": nace_totals references unknown district '" +
                                       did + "'");
            long long emp = csv::field_int(file, r, c_emp);
            if (emp < 0)
                throw SchemaError(file.path, file.line[r], c_emp + 1, "negative employees");
            int ni = scn.nace.index_of(csv::field(file, r, c_code));
            scn.districts[static_cast<std::size_t>(it->second)]
                .register_by_nace[static_cast<std::size_t>(ni)] += static_cast<double>(emp);
        }
        for (District& d : scn.districts) {
            double total = 0.0;
            for (double v : d.register_by_nace) total += v;
            d.worker_total = static_cast<long long>(std::llround(total));
        }
    }

    // persons.csv
    {
        auto file = csv::read_file(config.persons_path);
        std::size_t c_id = file.column("person_id");
        std::size_t c_age = file.column("age");
        std::size_t c_gender = file.column("gender");
        std::size_t c_hh = file.column("household_id");
        std::size_t c_district = file.column("residence_district");
        scn.persons.reserve(file.rows.size());
        std::vector<std::size_t> lines;
        for (std::size_t r = 0; r < file.rows.size(); ++r) {
            Person p;
            p.id = csv::field(file, r, c_id);
            if (p.id.empty())
                throw SchemaError(file.path, file.line[r], c_id + 1, "empty person_id");
            long long age = csv::field_int(file, r, c_age);
            if (age < 0 || age > 130)
                throw SchemaError(file.path, file.line[r], c_age + 1,
                                  "age out of range [0, 130]");
            p.age = static_cast<int>(age);
            p.gender = csv::field(file, r, c_gender);
            if (p.gender.empty())
                throw SchemaError(file.path, file.line[r], c_gender + 1, "empty gender");
            p.household_id = csv::field(file, r, c_hh);
            const std::string& did = csv::field(file, r, c_district);
            auto it = scn.district_index.find(did);
            if (it == scn.district_index.end())
                throw ReferentialError(file.path + ":" + std::to_string(file.line[r]) +
                                       ": person '" + p.id +
                                       "' references unknown district '" + did + "'");
            p.residence_district = it->second;
            scn.persons.push_back(std::move(p));
            lines.push_back(file.line[r]);
        }
        std::sort(scn.persons.begin(), scn.persons.end(),
                  [](const Person& a, const Person& b) { return a.id < b.id; });
        for (std::size_t i = 1; i < scn.persons.size(); ++i)
            if (scn.persons[i].id == scn.persons[i - 1].id)
                throw SchemaError(file.path, 1, c_id + 1,
                                  "duplicate person_id '" + scn.persons[i].id + "'");
    }

    // pipeline table shape checks, for the stages that are enabled
    auto check_table_keys = [&](const std::string& name,
                                const std::set<std::string>& allowed) {
        const ConditionalTable& t = scn.table(name);
        for (const std::string& k : t.key_names())
            if (!allowed.count(k))
                throw ConfigError("table '" + name + "': unsupported key attribute '" + k +
                                  "' (allowed: age_band, gender, district, occupation, nace)");
    };
    if (config.stages.nace) {
        check_table_keys("occupation", {"age_band", "gender", "district"});
        check_table_keys("nace", {"occupation"});
        if (scn.table("nace").key_names() != std::vector<std::string>{"occupation"})
            throw ConfigError("table 'nace' must be keyed by occupation only");
    }
    if (config.stages.subzone) {
        if (scn.table("work_district").key_names() != std::vector<std::string>{"nace"})
            throw ConfigError("table 'work_district' must be keyed by nace only");
        for (const std::string& o : scn.table("work_district").outcomes())
            if (!scn.district_index.count(o))
                throw ReferentialError("table 'work_district' outcome '" + o +
                                       "' is not a district");
    }

    // mean cell-to-district distances
    scn.cell_district_distance.resize(scn.grid.cells.size() * scn.districts.size());
    for (std::size_t c = 0; c < scn.grid.cells.size(); ++c)
        for (std::size_t d = 0; d < scn.districts.size(); ++d)
            scn.cell_district_distance[c * scn.districts.size() + d] =
                cell_to_district_distance(scn.grid, static_cast<int>(c), scn.districts[d]);

    return scn;
}

Scenario load_scenario(const std::filesystem::path& config_path) {
    return load_scenario(load_config(config_path));
}

} // namespace popanchor::ingest
