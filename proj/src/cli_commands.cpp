#include "margconv/cli_commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "margconv/constants.hpp"
#include "margconv/detector.hpp"
#include "margconv/error.hpp"
#include "margconv/geometry.hpp"
#include "margconv/io.hpp"
#include "margconv/mollify.hpp"
#include "margconv/radon.hpp"
#include "margconv/sobolev.hpp"

namespace margconv::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kKnownKeys = {
    "grid",       "schedule",        "n_angles",   "delta_ladder", "nu_delta",       "eta_factor",
    "output_dir", "seed",            "epsilon",    "identity_angles", "slice_pad",   "zero_field",
    "perimeter_band", "epsilon_bump", "bump_radius"};

ExperimentConfig defaults_for(const std::string& command) {
    ExperimentConfig c;
    c.command = command;
    if (command == "slice-identity") {
        c.n = 512;
        c.side = 2.0;
    } else if (command == "counterexample") {
        c.n = 1024;
        c.side = 3.0;
        c.n_angles = 180;
    }
    const double h = c.side / c.n;
    if (command == "convexity") {
        const double floor = constants::kMinEpsilonCells * h;
        c.schedule = {4 * floor, 0.5, 3};
    } else {
        // L/32 down to 4h in steps of 2^(-1/2): seven scales on the default grid.
        c.schedule.eps0 = c.side * constants::kScheduleStartFraction;
        c.schedule.ratio = std::sqrt(0.5);
        c.schedule.count = static_cast<int>(schedule_down_to(c.schedule.eps0, c.schedule.ratio, 4 * h).size());
    }
    return c;
}

template <class T>
void take(const json& doc, const char* key, T& out, std::vector<std::string>& errors) {
    if (!doc.contains(key)) return;
    try {
        out = doc.at(key).get<T>();
    } catch (const json::exception&) {
        errors.push_back(std::string("'") + key + "' has the wrong type");
    }
}

void write_manifest(const ExperimentConfig& cfg, const json& input, const std::vector<std::string>& artifacts) {
    json calib{{"calibration_c", {{"value", constants::kCalibrationC.value}, {"provenance", constants::kCalibrationC.provenance}}},
               {"convex_baseline",
                {{"value", constants::kConvexBaseline.value}, {"provenance", constants::kConvexBaseline.provenance}}},
               {"scaling_perimeter_ratio",
                {{"value", constants::kScalingPerimeterRatio.value},
                 {"provenance", constants::kScalingPerimeterRatio.provenance}}},
               {"growth_threshold", constants::kGrowthThreshold},
               {"baseline_factor", constants::kBaselineFactor},
               {"hull_defect_tolerance", constants::kHullDefectTolerance},
               {"lipschitz_ratio_limit", constants::kLipschitzRatioLimit}};
    json doc{{"command", cfg.command},
             {"config", to_json(cfg)},
             {"input", input},
             {"calibration", calib},
             {"conventions",
              {{"gaussian", "gamma_n(x) = (2 pi)^{-n/2} exp(-|x|^2/2), eps = standard deviation"},
               {"fourier", "u_hat(xi) = int u(x) exp(-i xi.x) dx"}}},
             {"artifacts", artifacts}};
    io::write_json(doc, cfg.output_dir / "manifest.json");
}

GridSpec grid_of(const ExperimentConfig& cfg) { return GridSpec::centered(cfg.n, cfg.side); }

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

DetectorConfig detector_config(const ExperimentConfig& cfg) {
    const auto spec = grid_of(cfg);
    auto d = DetectorConfig::defaults(spec);
    d.n_angles = cfg.n_angles;
    d.schedule = cfg.resolved_schedule();
    const double eps_max = d.schedule.empty() ? 0.0 : d.schedule.front();
    d.delta_ladder = cfg.delta_ladder.empty() ? std::vector<double>{8 * eps_max, 12 * eps_max} : cfg.delta_ladder;
    d.nu_delta = cfg.nu_delta > 0 ? cfg.nu_delta : d.delta_ladder.front();
    d.eta_factor = cfg.eta_factor;
    return d;
}

}  // namespace

std::vector<double> ExperimentConfig::resolved_schedule() const {
    if (!(schedule.eps0 > 0 && schedule.ratio > 0 && schedule.ratio < 1 && schedule.count >= 1)) return {};
    return geometric_schedule(schedule.eps0, schedule.ratio, schedule.count);
}

ExperimentConfig load_config(const std::string& command, const json& doc) {
    auto c = defaults_for(command);
    std::vector<std::string> errors;
    if (!doc.is_null() && !doc.is_object()) throw ConfigError({"configuration must be a JSON object"});
    if (doc.is_object()) {
        for (const auto& [key, value] : doc.items())
            if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
                errors.push_back("unknown key '" + key + "'");
        bool schedule_given = false;
        if (doc.contains("grid")) {
            const auto& g = doc.at("grid");
            if (!g.is_object()) {
                errors.push_back("'grid' must be an object {N, L}");
            } else {
                take(g, "N", c.n, errors);
                take(g, "L", c.side, errors);
            }
        }
        if (doc.contains("schedule")) {
            const auto& s = doc.at("schedule");
            if (!s.is_object()) {
                errors.push_back("'schedule' must be an object {eps0, ratio, count}");
            } else {
                schedule_given = true;
                take(s, "eps0", c.schedule.eps0, errors);
                take(s, "ratio", c.schedule.ratio, errors);
                take(s, "count", c.schedule.count, errors);
            }
        }
        if (!schedule_given && doc.contains("grid")) {
            // Grid changed but no schedule: re-derive the defaults on the new grid.
            auto d = defaults_for(command);
            d.n = c.n;
            d.side = c.side;
            if (c.n > 0 && c.side > 0) {
                const double h = c.side / c.n;
                if (command == "convexity") {
                    d.schedule = {8 * h, 0.5, 3};
                } else {
                    d.schedule.eps0 = c.side * constants::kScheduleStartFraction;
                    d.schedule.count = static_cast<int>(schedule_down_to(d.schedule.eps0, d.schedule.ratio, 4 * h).size());
                }
            }
            c.schedule = d.schedule;
        }
        take(doc, "n_angles", c.n_angles, errors);
        take(doc, "delta_ladder", c.delta_ladder, errors);
        take(doc, "nu_delta", c.nu_delta, errors);
        take(doc, "eta_factor", c.eta_factor, errors);
        std::string out;
        if (doc.contains("output_dir")) {
            take(doc, "output_dir", out, errors);
            c.output_dir = out;
        }
        take(doc, "seed", c.seed, errors);
        take(doc, "epsilon", c.epsilon, errors);
        take(doc, "identity_angles", c.identity_angles, errors);
        take(doc, "slice_pad", c.slice_pad, errors);
        take(doc, "zero_field", c.zero_field, errors);
        take(doc, "perimeter_band", c.perimeter_band, errors);
        take(doc, "epsilon_bump", c.epsilon_bump, errors);
        take(doc, "bump_radius", c.bump_radius, errors);
    }

    if (c.n < 8) errors.push_back("grid.N must be >= 8");
    if (!(c.side > 0)) errors.push_back("grid.L must be > 0");
    const double h = c.n > 0 ? c.side / c.n : 0.0;
    const double floor = constants::kMinEpsilonCells * h;
    const bool uses_schedule = command == "perimeter-scaling" || command == "convexity";
    const std::size_t before = errors.size();
    if (!(c.schedule.eps0 > 0)) errors.push_back("schedule.eps0 must be > 0");
    if (!(c.schedule.ratio > 0 && c.schedule.ratio < 1)) errors.push_back("schedule.ratio must lie in (0, 1)");
    if (c.schedule.count < 1) errors.push_back("schedule.count must be >= 1");
    if (!uses_schedule) errors.resize(before);
    if (uses_schedule && errors.size() == before && h > 0) {
        const auto sched = c.resolved_schedule();
        for (std::size_t k = 0; k < sched.size(); ++k)
            if (sched[k] < floor * (1 - 1e-12)) {
                std::ostringstream os;
                os << "schedule eps_" << k << " = " << sched[k] << " is below 2h = " << floor;
                errors.push_back(os.str());
            }
    }
    if (c.n_angles < 1) errors.push_back("n_angles must be >= 1");
    if (command == "perimeter-scaling") {
        if (c.schedule.count < 4) errors.push_back("perimeter-scaling needs schedule.count >= 4");
        if (c.n_angles < 16) errors.push_back("perimeter-scaling uses n_angles for the Crofton oracle: needs >= 16");
        if (!(c.perimeter_band > 0)) errors.push_back("perimeter_band must be > 0");
    }
    if (command == "slice-identity") {
        if (c.epsilon < floor * (1 - 1e-12)) {
            std::ostringstream os;
            os << "epsilon = " << c.epsilon << " is below 2h = " << floor;
            errors.push_back(os.str());
        }
        if (c.slice_pad < 1) errors.push_back("slice_pad must be >= 1");
        if (c.identity_angles < 1) errors.push_back("identity_angles must be >= 1");
    }
    if (command == "counterexample") {
        if (!(c.bump_radius > 0 && c.bump_radius <= 0.2)) errors.push_back("bump_radius must lie in (0, 0.2]");
        if (!(c.epsilon_bump >= 0)) errors.push_back("epsilon_bump must be >= 0");
    }
    if (command == "convexity" && errors.empty()) {
        try {
            detector_config(c).validate(grid_of(c));
        } catch (const ConfigError& e) {
            errors.insert(errors.end(), e.violations().begin(), e.violations().end());
        }
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return c;
}

json to_json(const ExperimentConfig& c) {
    return json{{"command", c.command},
                {"grid", {{"N", c.n}, {"L", c.side}}},
                {"schedule", {{"eps0", c.schedule.eps0}, {"ratio", c.schedule.ratio}, {"count", c.schedule.count}}},
                {"resolved_schedule", c.resolved_schedule()},
                {"n_angles", c.n_angles},
                {"delta_ladder", c.delta_ladder},
                {"nu_delta", c.nu_delta},
                {"eta_factor", c.eta_factor},
                {"output_dir", c.output_dir.string()},
                {"seed", c.seed},
                {"epsilon", c.epsilon},
                {"identity_angles", c.identity_angles},
                {"slice_pad", c.slice_pad},
                {"zero_field", c.zero_field},
                {"perimeter_band", c.perimeter_band},
                {"epsilon_bump", c.epsilon_bump},
                {"bump_radius", c.bump_radius}};
}

ShapeSpec parse_shape_argument(const std::string& arg, std::uint64_t seed) {
    json doc;
    const auto first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && arg[first] == '{') {
        try {
            doc = json::parse(arg);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("--shape: ") + e.what());
        }
    } else {
        doc = io::read_json(arg);
    }
    auto shape = shape_from_json(doc, seed);
    validate(shape);
    return shape;
}

int report_error(const fs::path& out_dir, const std::string& kind, const std::string& message,
                 const std::vector<std::string>& details) {
    std::cerr << "error (" << kind << "): " << message << "\n";
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!ec) {
        try {
            io::write_json(json{{"error", kind}, {"message", message}, {"details", details}}, out_dir / "error.json");
        } catch (const std::exception&) {
        }
    }
    return kUsage;
}

int cmd_perimeter_scaling(const ExperimentConfig& cfg, const std::optional<ShapeSpec>& shape_arg) {
    const ShapeSpec shape = shape_arg ? *shape_arg : ShapeSpec(Disk{{0, 0}, 0.3});
    const auto grid = rasterize(shape, grid_of(cfg));
    const auto fit = perimeter_by_scaling(grid, cfg.resolved_schedule());
    const auto crofton = crofton_perimeter(grid, std::max(cfg.n_angles, 16));
    const double ratio = crofton.value > 0 ? fit.slope / crofton.value : 0.0;
    const double ref = constants::kScalingPerimeterRatio.value;
    const double rel = ref > 0 ? ratio / ref - 1.0 : 0.0;
    const bool pass = !fit.degenerate && fit.r2 >= 0.99 && std::abs(rel) <= cfg.perimeter_band;

    fs::create_directories(cfg.output_dir);
    std::ofstream csv(cfg.output_dir / "scaling.csv");
    csv << "epsilon,log_inv_eps,energy,in_fit\n";
    for (std::size_t k = 0; k < fit.points.size(); ++k)
        csv << fmt(fit.points[k].epsilon) << "," << fmt(fit.points[k].log_inv_eps) << ","
            << fmt(fit.points[k].energy) << "," << (k >= fit.fit_from ? 1 : 0) << "\n";
    csv.close();
    auto doc = io::to_json(fit);
    doc["crofton_perimeter"] = crofton.value;
    doc["slope_over_perimeter"] = ratio;
    doc["reference_ratio"] = ref;
    doc["relative_to_reference"] = rel;
    doc["band"] = cfg.perimeter_band;
    doc["passed"] = pass;
    io::write_json(doc, cfg.output_dir / "fit.json");
    write_manifest(cfg, json{{"shape", shape_to_json(shape)}}, {"scaling.csv", "fit.json"});
    std::cout << "r2 = " << fit.r2 << ", slope = " << fit.slope << ", slope/perimeter = " << ratio
              << (pass ? "  [pass]" : "  [fail]") << "\n";
    return pass ? kOk : kFail;
}

int cmd_slice_identity(const ExperimentConfig& cfg, const std::optional<ShapeSpec>& shape_arg) {
    const auto spec = grid_of(cfg);
    const ShapeSpec shape = shape_arg ? *shape_arg : ShapeSpec(Disk{{0, 0}, 0.3});
    ScalarField field(spec, Provenance::synthetic);
    if (!cfg.zero_field) field = mollify2d(rasterize(shape, spec), cfg.epsilon);
    const auto taus = slice_frequencies(spec, cfg.slice_pad);
    const auto lattice = fourier_slice_check(field, angle_lattice(cfg.n_angles), taus, cfg.slice_pad);
    const auto axes = fourier_slice_check(field, {0.0, constants::kPi / 2}, taus, cfg.slice_pad);
    const auto ident = global_identity_check(field, cfg.identity_angles);
    const bool pass = lattice.max_rel_error <= 2e-2 && axes.max_rel_error <= 1e-10 && ident.ratio >= 0.98 &&
                      ident.ratio <= 1.02;

    fs::create_directories(cfg.output_dir);
    json doc{{"slice_max_err", lattice.max_rel_error},
             {"slice_axis_err", axes.max_rel_error},
             {"slice", io::to_json(lattice)},
             {"slice_axes", io::to_json(axes)},
             {"n_taus", taus.size()},
             {"global_ratio", ident.ratio},
             {"identity", io::to_json(ident)},
             {"degenerate", ident.degenerate},
             {"passed", pass}};
    io::write_json(doc, cfg.output_dir / "identity.json");
    write_manifest(cfg, json{{"shape", cfg.zero_field ? json(nullptr) : shape_to_json(shape)}, {"zero_field", cfg.zero_field}},
                   {"identity.json"});
    std::cout << "slice max rel err = " << lattice.max_rel_error << " (axes " << axes.max_rel_error
              << "), global ratio = " << ident.ratio << (pass ? "  [pass]" : "  [fail]") << "\n";
    return pass ? kOk : kFail;
}

int cmd_convexity(const ExperimentConfig& cfg, const std::optional<ShapeSpec>& shape_arg,
                  const std::optional<fs::path>& mask) {
    BinaryGrid grid;
    json input;
    if (mask) {
        grid = io::read_mask(*mask);
        input = {{"mask", mask->string()}};
    } else {
        const ShapeSpec shape = shape_arg ? *shape_arg : ShapeSpec(Disk{{0, 0}, 0.5});
        grid = rasterize(shape, grid_of(cfg));
        input = {{"shape", shape_to_json(shape)}};
    }
    ExperimentConfig resolved = cfg;
    resolved.n = grid.spec.n;
    resolved.side = grid.spec.side;
    const auto det = detector_config(resolved);
    det.validate(grid.spec);
    const auto report = convexity_verdict(grid, det);

    fs::create_directories(cfg.output_dir);
    auto doc = io::to_json(report);
    doc["grid"] = io::grid_json(grid.spec);
    io::write_json(doc, cfg.output_dir / "report.json");
    write_manifest(resolved, input, {"report.json"});
    std::cout << to_string(report.verdict) << " (branch " << report.branch << ", hull defect " << report.hull_defect
              << ")\n";
    switch (report.verdict) {
        case Verdict::convex: return kOk;
        case Verdict::non_convex: return kFail;
        case Verdict::inconclusive: return kInconclusive;
    }
    return kInconclusive;
}

int cmd_counterexample(const ExperimentConfig& cfg) {
    CounterexampleConfig cc;
    cc.n = cfg.n;
    cc.side = cfg.side;
    cc.n_angles = cfg.n_angles;
    cc.bump_radius = cfg.bump_radius;
    const auto r = counterexample_demo(cfg.epsilon_bump, cc);
    fs::create_directories(cfg.output_dir);
    io::write_json(io::to_json(r), cfg.output_dir / "counterexample.json");
    write_manifest(cfg, json{{"disk_radius", cc.disk_radius}, {"bump_radius", cc.bump_radius}}, {"counterexample.json"});
    std::cout << "marginals log-concave at " << r.angles_passed << "/" << r.angles_tested
              << " angles; max admissible bump " << r.max_admissible_bump << "; field violation "
              << (r.field_violation ? "found" : "not found") << (r.success ? "  [pass]" : "  [fail]") << "\n";
    return r.success ? kOk : kFail;
}

int cmd_calibrate(const ExperimentConfig& cfg) {
    // (1) spectral-to-direct constant.
    const auto small = GridSpec::centered(64, 1.6);
    const auto phi = mollify2d(rasterize(Disk{{0, 0}, 0.3}, small), 0.05);
    const double direct = h_half_direct(phi).value;
    const double raw = spectral_energy_raw(phi);
    const double c_measured = direct / raw;

    // (2) convex interior-nu baseline under the default detector configuration.
    const auto ref = GridSpec::centered(1024, 2.0);
    const auto det = DetectorConfig::defaults(ref);
    const auto disk = rasterize(Disk{{0, 0}, 0.7}, ref);
    const auto exact = radon_family(disk, angle_lattice(det.n_angles));
    const auto supports = support_analysis(exact, ref.h());
    const double eps_min = det.schedule.back();
    const double baseline = nu_measure(exact, supports, eps_min, det.eta_factor * eps_min, det.nu_delta).interior;

    // (3) slope over Crofton perimeter for the reference disk, rescaled to the measured constant.
    const auto scal = defaults_for("perimeter-scaling");
    const auto disk3 = rasterize(Disk{{0, 0}, 0.3}, ref);
    const auto fit = perimeter_by_scaling(disk3, geometric_schedule(scal.schedule.eps0, scal.schedule.ratio, scal.schedule.count));
    const double slope = fit.slope * c_measured / constants::kCalibrationC.value;
    const double ratio = slope / crofton_perimeter(disk3, 64).value;

    fs::create_directories(cfg.output_dir);
    json doc{{"calibration_c", {{"measured", c_measured}, {"compiled", constants::kCalibrationC.value}, {"direct", direct}, {"raw_spectral", raw}}},
             {"convex_baseline", {{"measured", baseline}, {"compiled", constants::kConvexBaseline.value}}},
             {"scaling_perimeter_ratio", {{"measured", ratio}, {"compiled", constants::kScalingPerimeterRatio.value}, {"r2", fit.r2}}}};
    io::write_json(doc, cfg.output_dir / "calibration.json");
    write_manifest(cfg, json(nullptr), {"calibration.json"});
    std::cout << std::setprecision(16) << "calibration_c = " << c_measured << "\nconvex_baseline = " << baseline
              << "\nscaling_perimeter_ratio = " << ratio << "\n";
    return kOk;
}

int cmd_rasterize(const ExperimentConfig& cfg, const std::optional<ShapeSpec>& shape_arg) {
    const ShapeSpec shape = shape_arg ? *shape_arg : ShapeSpec(Disk{{0, 0}, 0.3});
    const auto grid = rasterize(shape, grid_of(cfg));
    fs::create_directories(cfg.output_dir);
    io::write_mask(grid, cfg.output_dir / "mask.pgm");
    const auto area = analytic_area(shape);
    const auto perim = analytic_perimeter(shape);
    json doc{{"cells", grid.count()},
             {"area", grid.area()},
             {"analytic_area", area ? json(*area) : json(nullptr)},
             {"analytic_perimeter", perim ? json(*perim) : json(nullptr)},
             {"crofton_perimeter", io::to_json(crofton_perimeter(grid, std::max(cfg.n_angles, 16)))}};
    io::write_json(doc, cfg.output_dir / "rasterize.json");
    write_manifest(cfg, json{{"shape", shape_to_json(shape)}}, {"mask.pgm", "mask.json", "rasterize.json"});
    std::cout << "wrote " << (cfg.output_dir / "mask.pgm").string() << " (" << grid.count() << " cells)\n";
    return kOk;
}

}  // namespace margconv::cli
