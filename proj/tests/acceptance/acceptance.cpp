// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "margconv/constants.hpp"
#include "margconv/detector.hpp"
#include "margconv/geometry.hpp"
#include "margconv/mollify.hpp"
#include "margconv/radon.hpp"
#include "margconv/sobolev.hpp"

using namespace margconv;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = constants::kPi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Fixture {
    std::string name;
    ShapeSpec shape;
    bool convex;
};

std::vector<Fixture> fixtures() {
    return {
        {"disk", Disk{{0, 0}, 0.5}, true},
        {"disk-offcentre", Disk{{0.2, -0.1}, 0.35}, true},
        {"square", Rect{{0, 0}, 0.4, 0.4, 0.0}, true},
        {"rect", Rect{{0.05, 0}, 0.5, 0.2, 0.3}, true},
        {"triangle", ConvexPolygon{{{-0.5, -0.4}, {0.55, -0.3}, {0, 0.55}}}, true},
        {"hexagon", ConvexPolygon{{{0.5, 0}, {0.25, 0.433}, {-0.25, 0.433}, {-0.5, 0}, {-0.25, -0.433}, {0.25, -0.433}}},
         true},
        {"random-pentagon-seed1", random_convex_polygon(5, 1, {0, 0}, 0.35, 0.6), true},
        {"random-heptagon-seed2", random_convex_polygon(7, 2, {0, 0}, 0.35, 0.6), true},
        {"holed-disk", make_difference(Disk{{0, 0}, 0.4}, Rect{{0, 0}, 0.08, 0.08, 0.0}), false},
        {"L-shape", make_union(Rect{{-0.2, 0}, 0.15, 0.45, 0.0}, Rect{{0.1, -0.3}, 0.45, 0.15, 0.0}), false},
        {"two-disks", make_union(Disk{{-0.35, 0}, 0.25}, Disk{{0.35, 0}, 0.25}), false},
        {"crescent", make_difference(Disk{{0, 0}, 0.5}, Disk{{0.25, 0}, 0.4}), false},
    };
}

// (1) calibrated spectral energy against the direct double sum. The first disk is the
// calibration input; the other two are held out.
Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = GridSpec::centered(64, 1.6);
    double worst = 0.0;
    std::string detail;
    for (const auto& d : {Disk{{0, 0}, 0.3}, Disk{{0.1, -0.05}, 0.25}, Disk{{0, 0}, 0.35}}) {
        const auto phi = mollify2d(rasterize(d, spec), 0.05);
        const double dev = h_half_spectral(phi).value / h_half_direct(phi).value - 1;
        worst = std::max(worst, std::abs(dev));
        detail += fmt("r=%.2f %+.4f ", d.radius, dev);
    }
    const double t = seconds_since(t0);
    return {worst <= 0.05 && t <= 30, "spectral/direct - 1: " + detail + fmt("(|.| <= 0.05), %.1f s (<= 30 s)", t)};
}

// Largest relative deviation from the mean of `v`.
double spread_about_mean(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x / static_cast<double>(v.size());
    double worst = 0.0;
    for (double x : v) worst = std::max(worst, std::abs(x / mean - 1));
    return worst;
}

// (2) energy vs |log eps|: linearity, radius scaling, shape independence.
Outcome perimeter_scaling() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = GridSpec::centered(1024, 2.0);
    const auto schedule = schedule_down_to(spec.side / 32, std::sqrt(0.5), 4 * spec.h());
    const auto d3 = rasterize(Disk{{0, 0}, 0.3}, spec);
    const auto d4 = rasterize(Disk{{0, 0}, 0.4}, spec);
    const auto sq = rasterize(Rect{{0, 0}, 0.3, 0.3, 0.0}, spec);
    const auto f3 = perimeter_by_scaling(d3, schedule);
    const auto f4 = perimeter_by_scaling(d4, schedule);
    const auto fs = perimeter_by_scaling(sq, schedule);
    const double radius_ratio = f4.slope / f3.slope;
    const double disk_pp = f3.slope / crofton_perimeter(d3, 64).value;
    const double square_pp = fs.slope / crofton_perimeter(sq, 64).value;
    const double shape_dev = std::abs(square_pp / disk_pp - 1);
    const double t = seconds_since(t0);
    const bool pass = f3.r2 >= 0.99 && std::abs(radius_ratio / (4.0 / 3.0) - 1) <= 0.05 && shape_dev <= 0.15 && t <= 60;
    return {pass, fmt("R2 = %.6f (>= 0.99), slope(0.4)/slope(0.3) = %.4f (4/3 +- 5%%), square vs disk slope/perimeter "
                      "differ by %.2f%% (<= 15%%), %.1f s (<= 60 s)",
                      f3.r2, radius_ratio, 100 * shape_dev, t)};
}

// (3) projection-slice identity on a mollified disk.
Outcome fourier_slice() {
    const auto spec = GridSpec::centered(512, 2.0);
    const auto phi = mollify2d(rasterize(Disk{{0, 0}, 0.3}, spec), 0.02);
    const auto taus = slice_frequencies(spec, 4, 0.25);
    const double axes = fourier_slice_check(phi, {0.0, kPi / 2}, taus).max_rel_error;
    const double all = fourier_slice_check(phi, angle_lattice(64), taus).max_rel_error;
    return {axes <= 1e-10 && all <= 2e-2,
            fmt("axes %.2e (<= 1e-10), 64 angles %.2e (<= 2e-2), %zu frequencies up to Nyquist/4", axes, all, taus.size())};
}

// (4) marginal-derivative energy against the spectral energy.
Outcome global_identity() {
    const auto spec = GridSpec::centered(512, 2.0);
    std::string detail;
    bool pass = true;
    for (const auto& [name, shape] : {std::pair<const char*, ShapeSpec>{"disk", Disk{{0, 0}, 0.3}},
                                      std::pair<const char*, ShapeSpec>{"square", Rect{{0, 0}, 0.3, 0.3, 0.0}}}) {
        const double r = global_identity_check(mollify2d(rasterize(shape, spec), 0.02), 180).ratio;
        pass = pass && r >= 0.98 && r <= 1.02;
        detail += fmt("%s %.4f ", name, r);
    }
    return {pass, detail + "(in [0.98, 1.02])"};
}

// (5) localized energy: boundary against deep interior over the last three scales.
Outcome localization() {
    const auto spec = GridSpec::centered(1024, 2.0);
    const auto grid = rasterize(Disk{{0, 0}, 0.5}, spec);
    const auto schedule = DetectorConfig::defaults(spec).schedule;
    const double r0 = 0.2;
    double worst_ratio = 1e300;
    std::vector<double> boundary;
    for (double eps : schedule) {
        const auto phi = mollify2d(grid, eps);
        const double b = localized_energy(phi, {0.5, 0.0}, r0, eps).value;
        const double i = localized_energy(phi, {0.0, 0.0}, r0, eps).value;
        worst_ratio = std::min(worst_ratio, b / std::max(i, 1e-300));
        boundary.push_back(b);
    }
    const double spread = spread_about_mean(boundary);
    return {worst_ratio >= 20 && spread <= 0.3,
            fmt("min boundary/interior = %.3g (>= 20), boundary energy %.4g, %.4g, %.4g within %.1f%% of its mean "
                "(<= 30%%) at eps = %.4g..%.4g",
                worst_ratio, boundary[0], boundary[1], boundary[2], 100 * spread, schedule.front(), schedule.back())};
}

// (6) interior nu mass: decay like 1/|log eps| for the disk, excess for the holed disk.
Outcome concentration() {
    const auto spec = GridSpec::centered(1024, 2.0);
    const auto schedule = DetectorConfig::defaults(spec).schedule;
    const double delta = 0.25;
    const auto thetas = angle_lattice(64);
    const auto disk = radon_family(rasterize(Disk{{0, 0}, 0.4}, spec), thetas);
    const auto holed =
        radon_family(rasterize(make_difference(Disk{{0, 0}, 0.4}, Rect{{0, 0}, 0.08, 0.08, 0.0}), spec), thetas);
    const auto ds = support_analysis(disk, spec.h());
    const auto hs = support_analysis(holed, spec.h());
    std::vector<double> scaled;
    double disk_last = 0.0, holed_last = 0.0;
    for (double eps : schedule) {
        const auto nu = nu_measure(disk, ds, eps, 4 * eps, delta);
        scaled.push_back(nu.interior * std::abs(std::log(eps)));
        disk_last = nu.interior;
    }
    holed_last = nu_measure(holed, hs, schedule.back(), 4 * schedule.back(), delta).interior;
    const double spread = spread_about_mean(scaled);
    const double excess = holed_last / disk_last;
    return {spread <= 0.3 && excess >= 10,
            fmt("disk interior*|log eps| within %.1f%% of its mean (<= 30%%), holed/disk interior = %.1f (>= 10), delta = %.2f",
                100 * spread, excess, delta)};
}

// (7) detector verdicts on the fixture suite, with hull-defect ground truth and pi/7 rotation.
Outcome detector_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = GridSpec::centered(1024, 2.0);
    const auto cfg = DetectorConfig::defaults(spec);
    int wrong = 0, variant = 0, total = 0, convex = 0, nonconvex = 0, broken = 0;
    std::string misses;
    for (const auto& f : fixtures()) {
        (f.convex ? convex : nonconvex)++;
        Verdict first = Verdict::inconclusive;
        for (double rot : {0.0, kPi / 7}) {
            const auto grid = rasterize(rotated(f.shape, rot), spec);
            // Ground truth: the raster equals its own lattice hull up to rasterization noise.
            const double per = crofton_perimeter(grid, 64).value;
            const double defect = static_cast<double>(symmetric_difference(convex_hull(grid), grid)) / (per / spec.h());
            const bool truth = defect <= cfg.hull_tolerance;
            const auto report = convexity_verdict(grid, cfg);
            const Verdict expected = truth ? Verdict::convex : Verdict::non_convex;
            ++total;
            if (report.verdict != expected || truth != f.convex) {
                ++wrong;
                misses += " " + f.name + fmt("@%.2f", rot);
            }
            // Report invariants: a NON_CONVEX verdict carries a witness, and convex fixtures stay
            // below 1.5x the calibrated interior baseline at the smallest scale.
            if (report.verdict == Verdict::non_convex && !report.witness) ++broken;
            if (f.convex && report.nu_trace.back().interior > 1.5 * cfg.baseline) ++broken;
            if (rot == 0.0) first = report.verdict;
            else if (report.verdict != first) ++variant;
        }
    }
    const double t = seconds_since(t0);
    return {wrong == 0 && variant == 0 && broken == 0 && t <= 300 && convex >= 8 && nonconvex >= 4,
            fmt("%d convex + %d non-convex fixtures x 2 rotations: %d misclassified, %d rotation-dependent, %d report "
                "invariants broken, %.0f s (<= 300 s)",
                convex, nonconvex, wrong, variant, broken, t) +
                misses};
}

// (8) log-concave marginals of a density that is not log-concave.
Outcome counterexample() {
    const auto r = counterexample_demo(0.05, CounterexampleConfig{});
    const double ratio = r.violating_segment ? r.violating_segment->deficit / r.violating_segment->slack : 0.0;
    return {r.angles_passed == 180 && r.angles_tested == 180 && r.field_violation && ratio >= 10,
            fmt("%zu/%zu marginals log-concave, segment deficit = %.3g x slack (>= 10), max admissible bump %.4f",
                r.angles_passed, r.angles_tested, ratio, r.max_admissible_bump)};
}

// (9) projection after 2D mollification against 1D mollification after projection.
Outcome tensorization() {
    const auto spec = GridSpec::centered(512, 2.0);
    const auto schedule = DetectorConfig::defaults(spec).schedule;
    const auto thetas = angle_lattice(64);
    double worst = 0.0;
    for (const auto& f : fixtures()) {
        const auto grid = rasterize(f.shape, spec);
        const auto exact = radon_family(grid, thetas);
        for (double eps : schedule) {
            const auto a = radon_family(mollify2d(grid, eps), thetas);
            const auto b = mollify_family(exact, eps);
            for (std::size_t k = 0; k < a.sinogram.size(); ++k) worst = std::max(worst, std::abs(a.sinogram[k] - b.sinogram[k]));
        }
    }
    return {worst <= 1e-2, fmt("sup discrepancy %.2e (<= 1e-2) over 12 fixtures, 64 angles, 3 scales", worst)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// (10) byte-identical JSON artifacts across repeated runs and thread counts.
Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "margconv_acceptance_determinism";
    fs::remove_all(root);
    const std::string cli = MARGCONV_CLI;
    fs::create_directories(root);
    {
        std::ofstream bad(root / "bad.json");
        bad << R"({"schedule": {"eps0": 0.001, "ratio": 0.5, "count": 4}})";
    }
    const std::vector<std::string> runs = {
        "perimeter-scaling",
        "slice-identity",
        "convexity",
        "convexity --shape '{\"type\":\"difference\",\"keep\":{\"type\":\"disk\",\"center\":[0,0],\"radius\":0.4},"
        "\"remove\":{\"type\":\"rect\",\"center\":[0,0],\"half_widths\":[0.08,0.08]}}'",
        "convexity --shape '{\"type\":\"random_polygon\",\"vertices\":6}' --seed 17",
        "counterexample",
        "rasterize",
        "perimeter-scaling --config " + (root / "bad.json").string(),
    };
    int mismatched = 0, codes = 0;
    std::size_t files = 0;
    std::string detail;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        // Every run writes to the same directory (the manifest records it) and is moved aside.
        const fs::path out = root / "out";
        std::vector<fs::path> dirs;
        std::vector<int> status;
        for (int threads : {1, 2, 1}) {
            const std::string cmd = cli + " " + runs[k] + " --threads " + std::to_string(threads) + " --out " +
                                    out.string() + " > /dev/null 2>&1";
            status.push_back(std::system(cmd.c_str()));
            dirs.push_back(root / fmt("run%zu_%zu", k, dirs.size()));
            fs::rename(out, dirs.back());
        }
        if (status[1] != status[0] || status[2] != status[0]) ++codes;
        for (const auto& entry : fs::directory_iterator(dirs[0])) {
            if (entry.path().extension() != ".json") continue;
            ++files;
            const auto ref = slurp(entry.path());
            for (std::size_t d = 1; d < dirs.size(); ++d)
                if (slurp(dirs[d] / entry.path().filename()) != ref) {
                    ++mismatched;
                    detail += " " + runs[k].substr(0, runs[k].find(' ')) + "/" + entry.path().filename().string();
                }
        }
    }
    return {mismatched == 0 && codes == 0 && files >= runs.size(),
            fmt("%zu JSON artifacts from %zu commands compared across 3 runs (threads 1, 2, 1): %d differ, %d exit "
                "codes differ",
                files, runs.size(), mismatched, codes) +
                detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 oracle equivalence (H^1/2)", oracle_equivalence},
        {"2 perimeter scaling", perimeter_scaling},
        {"3 Fourier slice identity", fourier_slice},
        {"4 global identity", global_identity},
        {"5 localization", localization},
        {"6 interior concentration", concentration},
        {"7 detector soundness", detector_suite},
        {"8 counterexample", counterexample},
        {"9 tensorization", tensorization},
        {"10 determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s  %-30s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
