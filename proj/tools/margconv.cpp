// margconv: experiment runner. One experiment per process; see README for the artifacts.
#include <omp.h>

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "margconv/cli_commands.hpp"
#include "margconv/error.hpp"
#include "margconv/io.hpp"

namespace cli = margconv::cli;

int main(int argc, char** argv) {
    CLI::App app{"Perimeter, projection-slice and convexity experiments on rasterized planar sets"};
    app.require_subcommand(1);

    std::string config_path, shape_arg, out_dir, mask_path;
    int threads = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"perimeter-scaling", "energy vs |log eps| fit and its ratio to the Crofton perimeter"},
        {"slice-identity", "Fourier slice check and the global marginal-energy identity"},
        {"convexity", "convexity verdict from marginals (exit 0 convex, 1 non-convex, 3 inconclusive)"},
        {"counterexample", "log-concave marginals of a non-log-concave density"},
        {"calibrate", "re-measure the calibrated constants"},
        {"rasterize", "write a shape as PGM mask plus JSON sidecar"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
        sub->add_option("--threads", threads, "cap on worker threads")->check(CLI::PositiveNumber);
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t s) { seed = s, seed_given = true; }, "seed for random polygons");
        if (name != "counterexample" && name != "calibrate")
            sub->add_option("--shape", shape_arg, "shape as inline JSON or a JSON file");
        if (name == "convexity") sub->add_option("--mask", mask_path, "PGM mask with a JSON sidecar");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kUsage;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    if (threads > 0) omp_set_num_threads(threads);

    cli::fs::path fallback_out = out_dir.empty() ? cli::fs::path("out") : cli::fs::path(out_dir);
    cli::ExperimentConfig cfg;
    try {
        nlohmann::json doc = config_path.empty() ? nlohmann::json::object() : margconv::io::read_json(config_path);
        if (doc.is_object() && doc.contains("output_dir") && doc["output_dir"].is_string() && out_dir.empty())
            fallback_out = doc["output_dir"].get<std::string>();
        cfg = cli::load_config(command, doc);
    } catch (const margconv::ConfigError& e) {
        return cli::report_error(fallback_out, "config", e.what(), e.violations());
    } catch (const std::exception& e) {
        return cli::report_error(fallback_out, "config", e.what());
    }
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (seed_given) cfg.seed = seed;

    try {
        std::optional<margconv::ShapeSpec> shape;
        if (!shape_arg.empty()) shape = cli::parse_shape_argument(shape_arg, cfg.seed);
        std::optional<cli::fs::path> mask;
        if (!mask_path.empty()) mask = cli::fs::path(mask_path);
        if (shape && mask) return cli::report_error(cfg.output_dir, "usage", "--shape and --mask are exclusive");

        if (command == "perimeter-scaling") return cli::cmd_perimeter_scaling(cfg, shape);
        if (command == "slice-identity") return cli::cmd_slice_identity(cfg, shape);
        if (command == "convexity") return cli::cmd_convexity(cfg, shape, mask);
        if (command == "counterexample") return cli::cmd_counterexample(cfg);
        if (command == "calibrate") return cli::cmd_calibrate(cfg);
        return cli::cmd_rasterize(cfg, shape);
    } catch (const margconv::ParseError& e) {
        return cli::report_error(cfg.output_dir, "parse", e.what());
    } catch (const margconv::MarginError& e) {
        return cli::report_error(cfg.output_dir, "margin", e.what());
    } catch (const margconv::ResolutionError& e) {
        return cli::report_error(cfg.output_dir, "resolution", e.what());
    } catch (const margconv::ConfigError& e) {
        return cli::report_error(cfg.output_dir, "config", e.what(), e.violations());
    } catch (const margconv::Error& e) {
        return cli::report_error(cfg.output_dir, "precondition", e.what());
    } catch (const std::exception& e) {
        return cli::report_error(cfg.output_dir, "internal", e.what());
    }
}
