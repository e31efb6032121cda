#include "popanchor/error.hpp"
#include "popanchor/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <string>

namespace {

int run_command(const popanchor::pipeline::Options& options) {
    using namespace popanchor;
    try {
        auto result = pipeline::run(options);
        std::cout << "completed stage '" << pipeline::stage_name(result.completed)
                  << "': population " << result.population << ", workers "
                  << result.workers << ", escalations " << result.escalation_count
                  << ", outputs in " << result.out_dir.string() << "\n";
        return 0;
    } catch (const Error& e) {
        nlohmann::ordered_json err;
        err["error"] = {{"category", e.category()}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["error"] = {{"category", "unexpected"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"popanchor - spatial anchor-point assignment for synthetic populations"};
    app.require_subcommand(1);

    popanchor::pipeline::Options options;
    std::string config;
    std::string stage;
    std::string resume;
    std::string gravity_mask;
    std::uint64_t seed = 0;
    double exponent = 0.0;

    CLI::App* run = app.add_subcommand("run", "run the assignment pipeline");
    run->add_option("--config", config, "scenario config (JSON)")
        ->required();
    auto* seed_opt =
        run->add_option("--seed", seed, "override the config seed (64-bit unsigned)");
    run->add_option("--stage", stage,
                    "stop after this stage: ingest|residence|nace|subzone|lastmile|report")
        ->check(CLI::IsMember(
            {"ingest", "residence", "nace", "subzone", "lastmile", "report"}));
    run->add_option("--resume", resume, "resume from a previous output directory");
    run->add_option("--threads", options.threads, "worker threads for parallel stages")
        ->check(CLI::PositiveNumber);
    run->add_option("--out", options.out_dir, "output directory (default: out)");
    run->add_option("--gravity-mask", gravity_mask,
                    "enforce capacities during gravity draws: on|off")
        ->check(CLI::IsMember({"on", "off"}));
    auto* exp_opt = run->add_option("--distance-exponent", exponent,
                                    "inverse-distance exponent for the last-mile draw");

    CLI11_PARSE(app, argc, argv);

    options.config_path = config;
    if (*seed_opt) options.seed_override = seed;
    if (!stage.empty()) options.stop_after = popanchor::pipeline::stage_from_name(stage);
    if (!resume.empty()) options.resume_dir = resume;
    if (!gravity_mask.empty()) options.gravity_mask_override = gravity_mask == "on";
    if (*exp_opt) options.distance_exponent_override = exponent;

    return run_command(options);
}
