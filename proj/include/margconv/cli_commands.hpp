#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "margconv/shapes.hpp"

namespace margconv::cli {

namespace fs = std::filesystem;

/// Exit-code contract shared by every command.
enum Exit : int { kOk = 0, kFail = 1, kUsage = 2, kInconclusive = 3 };

struct ScheduleSpec {
    double eps0 = 0.0;
    double ratio = 0.5;
    int count = 0;
};

struct ExperimentConfig {
    std::string command;
    int n = 1024;
    double side = 2.0;
    ScheduleSpec schedule;
    int n_angles = 64;
    std::vector<double> delta_ladder;  ///< empty: detector defaults
    double nu_delta = 0.0;             ///< 0: detector default
    double eta_factor = 4.0;
    fs::path output_dir = "out";
    std::uint64_t seed = 1;
    // slice-identity
    double epsilon = 0.02;
    int identity_angles = 180;
    int slice_pad = 4;
    bool zero_field = false;
    // perimeter-scaling
    double perimeter_band = 0.15;
    // counterexample
    double epsilon_bump = 0.05;
    double bump_radius = 0.1;

    std::vector<double> resolved_schedule() const;
};

/// Per-command defaults, overridden by `doc`. Every admissibility rule is checked and all
/// violations are reported together in one ConfigError.
ExperimentConfig load_config(const std::string& command, const nlohmann::json& doc);

nlohmann::json to_json(const ExperimentConfig& cfg);

/// `--shape` accepts inline JSON (starting with '{') or a path to a JSON file.
ShapeSpec parse_shape_argument(const std::string& arg, std::uint64_t seed);

int cmd_perimeter_scaling(const ExperimentConfig& cfg, const std::optional<ShapeSpec>& shape);
int cmd_slice_identity(const ExperimentConfig& cfg, const std::optional<ShapeSpec>& shape);
int cmd_convexity(const ExperimentConfig& cfg, const std::optional<ShapeSpec>& shape,
                  const std::optional<fs::path>& mask);
int cmd_counterexample(const ExperimentConfig& cfg);
int cmd_calibrate(const ExperimentConfig& cfg);
int cmd_rasterize(const ExperimentConfig& cfg, const std::optional<ShapeSpec>& shape);

/// Writes error.json into the output directory (when possible) and returns kUsage.
int report_error(const fs::path& out_dir, const std::string& kind, const std::string& message,
                 const std::vector<std::string>& details = {});

}  // namespace margconv::cli
