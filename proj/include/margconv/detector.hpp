#pragma once

#include <optional>
#include <string>
#include <vector>

#include "margconv/geometry.hpp"
#include "margconv/radon.hpp"
#include "margconv/sobolev.hpp"

namespace margconv {

struct DetectorConfig {
    int n_angles = 64;
    std::vector<double> schedule;      ///< decreasing; the last three scales drive every trend test
    std::vector<double> delta_ladder;  ///< strictly increasing
    double nu_delta = 0.0;             ///< interior margin used for nu
    double eta_factor = 4.0;           ///< endpoint band eta = eta_factor * eps
    double tau_supp = 0.0;             ///< 0 selects h
    double baseline = 0.0;             ///< convex interior-nu baseline at the smallest scale (0 disables)
    double baseline_factor = 10.0;
    double growth_threshold = 1.15;
    double lipschitz_ratio_limit = 2.0;
    double hull_tolerance = 1.5;       ///< hull defect accepted as rasterization noise
    int density_radius = 1;
    double density_threshold = 0.75;
    int max_witness_candidates = 16;

    /// Schedule 2h * 2^k (k = 2, 1, 0), ladder {8, 12} * max eps, nu margin 8 * max eps,
    /// calibrated baseline and thresholds.
    static DetectorConfig defaults(const GridSpec& spec);

    /// Throws ConfigError listing every violated admissibility rule.
    void validate(const GridSpec& spec) const;
};

struct LipschitzSummary {
    double delta = 0.0;
    std::vector<double> uniform_lipschitz;  ///< per scale
    double ratio = 1.0;                     ///< max / min over the last three scales
    bool bounded = true;
    std::size_t flagged = 0;
};

struct HypothesisReport {
    std::size_t n_angles = 0;
    std::size_t single_interval = 0;
    std::size_t empty = 0;
    std::vector<double> split_angles;  ///< angles whose support has a gap
    double single_interval_fraction = 0.0;
    std::vector<LipschitzSummary> lipschitz;
    double log_concave_fraction = 0.0;
    double concave_fraction = 0.0;
    bool support_convex = false;
    bool lipschitz_uniform = false;
    bool holds = false;
};

enum class Verdict { convex, non_convex, inconclusive };

std::string to_string(Verdict v);

struct NuTracePoint {
    double epsilon = 0.0;
    double total = 0.0;
    double endpoint = 0.0;
    double interior = 0.0;
    double transition = 0.0;
    double interior_log = 0.0;  ///< interior * |log eps|
};

struct WitnessTracePoint {
    double epsilon = 0.0;
    double radius = 0.0;
    double energy = 0.0;  ///< localized energy / |log eps|
};

struct Witness {
    Point2 point{};
    int branch = 0;
    std::size_t candidates = 0;
    std::vector<WitnessTracePoint> trace;
};

struct ConvexityReport {
    Verdict verdict = Verdict::inconclusive;
    int branch = 3;
    HypothesisReport hypotheses;
    std::vector<NuTracePoint> nu_trace;
    double growth = 1.0;  ///< interior_log at the smallest scale over the first of the last three
    double hull_defect = 0.0;
    double perimeter = 0.0;  ///< crofton, used to normalize the hull defect
    std::optional<Witness> witness;
};

HypothesisReport check_hypotheses(const BinaryGrid& grid, const DetectorConfig& config);

/// Branches (1) support gaps and (2) nu non-decay decide NON_CONVEX without the hull; the hull
/// defect only separates CONVEX from INCONCLUSIVE in branch (3).
ConvexityReport convexity_verdict(const BinaryGrid& grid, const DetectorConfig& config);

/// |E delta hull(E1)| / (h * perimeter), E1 the density-one filtered set.
double hull_defect(const BinaryGrid& grid, const DetectorConfig& config, double perimeter);

struct CounterexampleConfig {
    int n = 1024;
    double side = 3.0;
    double disk_radius = 1.0;
    double bump_radius = 0.1;
    double bump_amplitude = 1.0;
    double smoothing_cells = 2.0;  ///< the disk is mollified at smoothing_cells * h before the log test
    int n_angles = 180;
    double field_tau = 0.5;        ///< level above which log(phi) is tested on segments
    int segment_count = 8;
    double bisection_tolerance = 1e-3;
};

struct SegmentViolation {
    Point2 start{};
    Point2 mid{};
    Point2 end{};
    double deficit = 0.0;
    double slack = 0.0;
};

struct CounterexampleReport {
    double epsilon_bump = 0.0;
    std::size_t angles_tested = 0;
    std::size_t angles_passed = 0;
    bool marginals_log_concave = false;
    double worst_marginal_deficit = 0.0;
    double marginal_slack = 0.0;
    double max_admissible_bump = 0.0;
    bool resolution_inadequate = false;
    bool field_violation = false;
    std::optional<SegmentViolation> violating_segment;
    bool success = false;  ///< both phases as required
};

CounterexampleReport counterexample_demo(double epsilon_bump, const CounterexampleConfig& config);

}  // namespace margconv
