#include <doctest.h>

#include "fixtures.hpp"
#include "popanchor/error.hpp"
#include "popanchor/ingest.hpp"
#include "popanchor/nace_assign.hpp"

#include <cmath>
#include <map>

using namespace popanchor;

namespace {

// One district, one cell; occupation/nace tables supplied by the caller.
fixtures::ScenarioBuilder nace_builder() {
    fixtures::ScenarioBuilder b;
    b.cell("c1", 0, 0, "D1");
    b.landuse("c1", "residential", 9000.0);
    b.register_employees("D1", "K-finance", 5000);
    b.register_employees("D1", "G-trade", 5000);
    b.table("work_district",
            "nace,outcome,probability\nK-finance,D1,1.0\nG-trade,D1,1.0\n");
    return b;
}

long long count_employed(const Scenario& scn) {
    long long n = 0;
    for (const Person& p : scn.persons)
        if (scn.is_employed(p)) ++n;
    return n;
}

} // namespace

TEST_CASE("assign_occupation: degenerate row, eligibility rule, empirical shares") {
    fixtures::TempDir dir("nace_occ");
    auto b = nace_builder();
    std::string occ = "age_band,gender,district,outcome,probability\n";
    // every working-age band for F in D1 splits 60/40, one band is degenerate
    for (int lo = 15; lo <= 70; lo += 5) {
        std::string band = std::to_string(lo) + "-" + std::to_string(lo + 4);
        if (lo == 30) {
            occ += band + ",F,D1,manager,1.0\n";
        } else {
            occ += band + ",F,D1,clerk,0.6\n";
            occ += band + ",F,D1,manager,0.4\n";
        }
    }
    b.table("occupation", occ);
    b.table("nace", "occupation,outcome,probability\n"
                    "clerk,G-trade,1.0\n"
                    "manager,K-finance,0.3\nmanager,G-trade,0.7\n");

    b.person("P_kid", 10, "F", "", "D1");
    b.person("P_old", 90, "F", "", "D1");
    b.person("P_deg", 32, "F", "", "D1");
    for (int i = 0; i < 10000; ++i)
        b.person("Q" + std::to_string(100000 + i), 40, "F", "", "D1");

    auto scn = ingest::load_scenario(b.write(dir.path()));
    nace::assign_occupation(scn, 1);

    std::map<std::string, int> occupations;
    for (const Person& p : scn.persons) {
        REQUIRE(p.occupation.has_value());
        if (p.id == "P_kid" || p.id == "P_old")
            CHECK(*p.occupation == "not employed");
        if (p.id == "P_deg") CHECK(*p.occupation == "manager");
        if (p.id[0] == 'Q') ++occupations[*p.occupation];
    }
    double clerk_share = occupations["clerk"] / 10000.0;
    CHECK(std::abs(clerk_share - 0.6) < 0.02);

    // nace shares on the manager row
    nace::assign_nace(scn, 1);
    std::map<std::string, int> fields;
    int managers = 0;
    for (const Person& p : scn.persons) {
        if (p.id[0] != 'Q' || *p.occupation != "manager") continue;
        ++managers;
        ++fields[scn.nace.codes[static_cast<std::size_t>(*p.nace)]];
    }
    REQUIRE(managers > 3000);
    CHECK(std::abs(fields["K-finance"] / static_cast<double>(managers) - 0.3) < 0.02);

    // not-employed persons keep no field
    for (const Person& p : scn.persons)
        if (*p.occupation == "not employed") CHECK(!p.nace);
}

TEST_CASE("repair_unfeasible redraws rule violations only") {
    fixtures::TempDir dir("nace_repair");
    auto b = nace_builder();
    b.config["feasibility_rules"] = nlohmann::ordered_json::array(
        {{{"occupation", "manager"}, {"min_age", 30}}});
    b.table("occupation", "age_band,gender,district,outcome,probability\n"
                          "20-24,M,D1,manager,0.5\n"
                          "20-24,M,D1,clerk,0.5\n"
                          "40-44,M,D1,manager,0.5\n"
                          "40-44,M,D1,clerk,0.5\n");
    b.table("nace", "occupation,outcome,probability\n"
                    "clerk,G-trade,1.0\nmanager,K-finance,1.0\n");
    for (int i = 0; i < 1000; ++i) b.person("Y" + std::to_string(1000 + i), 20, "M", "", "D1");
    for (int i = 0; i < 1000; ++i) b.person("O" + std::to_string(1000 + i), 40, "M", "", "D1");

    auto scn = ingest::load_scenario(b.write(dir.path()));
    nace::assign_occupation(scn, 1);
    long long employed_before = count_employed(scn);
    bool young_manager_before = false;
    std::map<std::string, std::string> old_before;
    for (const Person& p : scn.persons) {
        if (p.id[0] == 'Y' && *p.occupation == "manager") young_manager_before = true;
        if (p.id[0] == 'O') old_before[p.id] = *p.occupation;
    }
    REQUIRE(young_manager_before); // the rule actually bites

    nace::repair_unfeasible(scn, 1);
    for (const Person& p : scn.persons) {
        if (p.id[0] == 'Y') CHECK(*p.occupation == "clerk");
        if (p.id[0] == 'O') CHECK(*p.occupation == old_before[p.id]); // untouched
        CHECK(nace::occupation_feasible(scn.config, *p.occupation, p.age));
    }
    CHECK(count_employed(scn) == employed_before);
}

TEST_CASE("repair with a fully infeasible row is a hard error") {
    fixtures::TempDir dir("nace_repair_err");
    auto b = nace_builder();
    b.config["feasibility_rules"] = nlohmann::ordered_json::array(
        {{{"occupation", "manager"}, {"min_age", 30}}});
    b.table("occupation",
            "age_band,gender,district,outcome,probability\n20-24,M,D1,manager,1.0\n");
    b.table("nace", "occupation,outcome,probability\nmanager,K-finance,1.0\n");
    b.person("P1", 20, "M", "", "D1");
    auto scn = ingest::load_scenario(b.write(dir.path()));
    nace::assign_occupation(scn, 1);
    CHECK_THROWS_AS(nace::repair_unfeasible(scn, 1), Error);
}

TEST_CASE("assign_nace rejects unknown occupations") {
    fixtures::TempDir dir("nace_unknown");
    auto b = nace_builder();
    b.table("occupation",
            "age_band,gender,district,outcome,probability\n30-34,F,D1,welder,1.0\n");
    b.table("nace", "occupation,outcome,probability\nclerk,G-trade,1.0\n");
    b.person("P1", 30, "F", "", "D1");
    auto scn = ingest::load_scenario(b.write(dir.path()));
    nace::assign_occupation(scn, 1);
    CHECK_THROWS_AS(nace::assign_nace(scn, 1), MissingDistributionError);
}

TEST_CASE("consistency gate") {
    fixtures::TempDir dir("nace_gate");
    fixtures::ScenarioBuilder b;
    b.cell("c1", 0, 0, "D1");
    b.landuse("c1", "residential", 9000.0);
    // register: education 28, trade 990, plus a register-only field
    b.register_employees("D1", "Education", 28);
    b.register_employees("D1", "G-trade", 990);
    b.register_employees("D1", "Z-mystery", 50);
    b.table("work_district", "nace,outcome,probability\nG-trade,D1,1.0\n");
    b.table("occupation", "age_band,gender,district,outcome,probability\n"
                          "30-34,F,D1,teacher,1.0\n"
                          "35-39,F,D1,clerk,1.0\n"
                          "40-44,F,D1,ghost,1.0\n");
    b.table("nace", "occupation,outcome,probability\n"
                    "teacher,Education,1.0\n"
                    "clerk,G-trade,1.0\n"
                    "ghost,X-census-only,1.0\n");
    // census side: 141 teachers (vs register 28), 1000 clerks (vs 990),
    // 10 workers in a field the register has never heard of
    for (int i = 0; i < 141; ++i) b.person("T" + std::to_string(1000 + i), 30, "F", "", "D1");
    for (int i = 0; i < 1000; ++i) b.person("C" + std::to_string(1000 + i), 35, "F", "", "D1");
    for (int i = 0; i < 10; ++i) b.person("G" + std::to_string(1000 + i), 40, "F", "", "D1");

    auto scn = ingest::load_scenario(b.write(dir.path()));
    nace::assign_occupation(scn, 1);
    nace::assign_nace(scn, 1);
    long long employed_before = count_employed(scn);
    auto gate = nace::consistency_gate(scn);

    auto field = [&](const std::string& code) -> const nace::FieldVerdict& {
        return gate.of(scn.nace.index_of(code));
    };
    CHECK(!field("Education").coherent); // 141 / 28 > 2
    CHECK(field("Education").census_total == 141);
    CHECK(field("Education").register_total == 28);
    CHECK(field("G-trade").coherent); // 1000 / 990
    CHECK(!field("X-census-only").coherent);
    CHECK(std::isinf(field("X-census-only").ratio));
    CHECK(!field("Z-mystery").coherent); // register-only: census 0
    CHECK(field("Z-mystery").ratio == 0.0);
    CHECK(field("Other").sink);

    // exactly the education + census-only workers moved to the sink
    CHECK(gate.reassigned.size() == 151);
    for (const Person& p : scn.persons) {
        if (p.id[0] == 'T' || p.id[0] == 'G')
            CHECK(*p.nace == scn.nace.other);
        if (p.id[0] == 'C')
            CHECK(scn.nace.codes[static_cast<std::size_t>(*p.nace)] == "G-trade");
    }
    CHECK(count_employed(scn) == employed_before);

    // idempotent: same verdicts, same labels, same reassignment set
    auto gate2 = nace::consistency_gate(scn);
    REQUIRE(gate2.fields.size() == gate.fields.size());
    for (std::size_t f = 0; f < gate.fields.size(); ++f) {
        CHECK(gate2.fields[f].coherent == gate.fields[f].coherent);
        CHECK(gate2.fields[f].census_total == gate.fields[f].census_total);
        CHECK(gate2.fields[f].register_total == gate.fields[f].register_total);
    }
    CHECK(gate2.reassigned == gate.reassigned);
}
