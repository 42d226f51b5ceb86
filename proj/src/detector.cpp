#include "margconv/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "margconv/constants.hpp"
#include "margconv/error.hpp"
#include "margconv/kernels.hpp"
#include "margconv/mollify.hpp"

namespace margconv {

namespace {

// The three smallest scales, largest first.
std::vector<std::size_t> last_three(const std::vector<double>& schedule) {
    std::vector<std::size_t> order(schedule.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return schedule[a] > schedule[b]; });
    if (order.size() <= 3) return order;
    return {order.end() - 3, order.end()};
}

HypothesisReport hypotheses_from(const MarginalFamily& exact, const std::vector<SupportInterval>& supports,
                                 const DetectorConfig& cfg, double tau) {
    HypothesisReport r;
    r.n_angles = exact.n_angles();
    for (const auto& s : supports) {
        if (s.empty)
            ++r.empty;
        else if (s.is_single_interval)
            ++r.single_interval;
        else
            r.split_angles.push_back(s.theta);
    }
    const std::size_t usable = r.n_angles - r.empty;
    r.single_interval_fraction = usable ? static_cast<double>(r.single_interval) / usable : 0.0;
    r.support_convex = usable > 0 && r.split_angles.empty();

    r.lipschitz_uniform = true;
    for (std::size_t k = 0; k < cfg.delta_ladder.size(); ++k) {
        const auto d = marginal_diagnostics(exact, cfg.delta_ladder[k], cfg.schedule, tau);
        LipschitzSummary s;
        s.delta = d.delta;
        s.uniform_lipschitz = d.uniform_lipschitz;
        s.ratio = d.lipschitz_ratio;
        s.bounded = d.lipschitz_ratio <= cfg.lipschitz_ratio_limit;
        s.flagged = d.flagged;
        r.lipschitz_uniform = r.lipschitz_uniform && s.bounded;
        r.lipschitz.push_back(s);
        if (k == 0) {
            r.log_concave_fraction = d.log_concave_fraction;
            r.concave_fraction = d.concave_fraction;
        }
    }
    r.holds = r.support_convex && r.lipschitz_uniform;
    return r;
}

Point2 centroid(const BinaryGrid& g) {
    double sx = 0, sy = 0;
    std::size_t c = 0;
    for (int i = 0; i < g.spec.n; ++i)
        for (int j = 0; j < g.spec.n; ++j)
            if (g.at(i, j)) {
                const auto p = g.spec.cell_center(i, j);
                sx += p.x;
                sy += p.y;
                ++c;
            }
    return c ? Point2{sx / c, sy / c} : g.spec.center();
}

Witness gap_witness(const BinaryGrid& grid, const std::vector<SupportInterval>& supports) {
    const SupportInterval* best = nullptr;
    std::pair<double, double> best_gap{0, 0};
    for (const auto& s : supports)
        for (const auto& g : s.gaps)
            if (!best || g.second - g.first > best_gap.second - best_gap.first) {
                best = &s;
                best_gap = g;
            }
    Witness w;
    w.branch = 1;
    const double c = std::cos(best->theta), s = std::sin(best->theta);
    const double t_mid = (best_gap.first + best_gap.second) / 2;
    const Point2 ctr = grid.spec.center(), mass = centroid(grid);
    const double s_mid = -(mass.x - ctr.x) * s + (mass.y - ctr.y) * c;
    w.point = {ctr.x + t_mid * c - s_mid * s, ctr.y + t_mid * s + s_mid * c};
    w.candidates = 1;
    return w;
}

bool ball_inside(const GridSpec& s, Point2 x0, double r0) {
    return x0.x - r0 >= s.origin.x && x0.y - r0 >= s.origin.y && x0.x + r0 <= s.origin.x + s.side &&
           x0.y + r0 <= s.origin.y + s.side;
}

Witness energy_witness(const BinaryGrid& grid, const DetectorConfig& cfg) {
    const auto& spec = grid.spec;
    const auto e1 = density_one_filter(grid, cfg.density_radius, cfg.density_threshold);
    const auto hull = convex_hull(e1);
    // "Strictly inside" the hull: the whole 3-cell disk around the cell belongs to it.
    const auto inner = kernels::parallel::density_filter(hull, 3, 1.0);
    const auto edge = boundary_cells(e1);
    std::vector<kernels::CellIndex> cands, fallback;
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j)
            if (edge.at(i, j)) {
                fallback.push_back({i, j});
                if (inner.at(i, j)) cands.push_back({i, j});
            }
    if (cands.empty()) cands = fallback;
    if (cands.empty()) throw PreconditionError("witness search: density-one set is empty");

    const double eps_min = *std::min_element(cfg.schedule.begin(), cfg.schedule.end());
    auto radius_for = [&](double e) { return std::max(0.05 * spec.side, 16 * e); };
    const double r0 = radius_for(eps_min);
    const auto stride = std::max<std::size_t>(1, (cands.size() + cfg.max_witness_candidates - 1) / cfg.max_witness_candidates);
    const auto phi = mollify2d(grid, eps_min);

    Witness w;
    w.branch = 2;
    double best = -1.0;
    for (std::size_t k = stride / 2; k < cands.size(); k += stride) {
        const auto x0 = spec.cell_center(cands[k].i, cands[k].j);
        if (!ball_inside(spec, x0, r0)) continue;
        ++w.candidates;
        const double e = localized_energy(phi, x0, r0, eps_min).value;
        if (e > best) {
            best = e;
            w.point = x0;
        }
    }
    if (best < 0) throw PreconditionError("witness search: no candidate ball fits inside the grid");
    for (auto k : last_three(cfg.schedule)) {
        const double e = cfg.schedule[k];
        const double r = radius_for(e);
        WitnessTracePoint p{e, r, 0.0};
        if (ball_inside(spec, w.point, r)) p.energy = localized_energy(mollify2d(grid, e), w.point, r, e).value;
        w.trace.push_back(p);
    }
    return w;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::convex: return "CONVEX";
        case Verdict::non_convex: return "NON_CONVEX";
        case Verdict::inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

DetectorConfig DetectorConfig::defaults(const GridSpec& spec) {
    const double h = spec.h();
    const double floor = constants::kMinEpsilonCells * h;
    DetectorConfig c;
    c.schedule = {4 * floor, 2 * floor, floor};
    c.delta_ladder = {8 * c.schedule[0], 12 * c.schedule[0]};
    c.nu_delta = c.delta_ladder[0];
    const GridSpec ref = GridSpec::centered(1024, 2.0);
    c.baseline = (spec.n == ref.n && spec.side == ref.side) ? constants::kConvexBaseline.value : 0.0;
    c.baseline_factor = constants::kBaselineFactor;
    c.growth_threshold = constants::kGrowthThreshold;
    c.lipschitz_ratio_limit = constants::kLipschitzRatioLimit;
    c.hull_tolerance = constants::kHullDefectTolerance;
    return c;
}

void DetectorConfig::validate(const GridSpec& spec) const {
    std::vector<std::string> v;
    const double floor = constants::kMinEpsilonCells * spec.h();
    if (n_angles < 64) v.push_back("detector needs n_angles >= 64");
    if (schedule.size() < 3) v.push_back("detector needs at least three scales");
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (schedule[k] < floor * (1 - 1e-12)) {
            std::ostringstream os;
            os << "scale " << schedule[k] << " is below the resolution floor 2h = " << floor;
            v.push_back(os.str());
        }
        if (k > 0 && !(schedule[k] < schedule[k - 1])) v.push_back("schedule must be strictly decreasing");
    }
    const double eps_max = schedule.empty() ? 0.0 : *std::max_element(schedule.begin(), schedule.end());
    if (delta_ladder.empty()) v.push_back("delta ladder is empty");
    for (std::size_t k = 0; k < delta_ladder.size(); ++k) {
        if (!(delta_ladder[k] > 4 * eps_max)) v.push_back("every delta must exceed 4 * max eps");
        if (k > 0 && !(delta_ladder[k] > delta_ladder[k - 1])) v.push_back("delta ladder must be strictly increasing");
    }
    if (eta_factor < 4) v.push_back("eta factor must be >= 4");
    if (!(nu_delta > eta_factor * eps_max)) v.push_back("nu delta must exceed eta = eta_factor * max eps");
    if (density_radius < 1) v.push_back("density radius must be >= 1 cell");
    if (!(density_threshold > 0.5 && density_threshold <= 1.0)) v.push_back("density threshold must lie in (0.5, 1]");
    if (max_witness_candidates < 1) v.push_back("max witness candidates must be >= 1");
    if (!v.empty()) throw ConfigError(std::move(v));
}

HypothesisReport check_hypotheses(const BinaryGrid& grid, const DetectorConfig& config) {
    config.validate(grid.spec);
    const double tau = config.tau_supp > 0 ? config.tau_supp : grid.spec.h();
    const auto exact = radon_family(grid, angle_lattice(config.n_angles));
    return hypotheses_from(exact, support_analysis(exact, tau), config, tau);
}

double hull_defect(const BinaryGrid& grid, const DetectorConfig& config, double perimeter) {
    const auto e1 = density_one_filter(grid, config.density_radius, config.density_threshold);
    const auto hull = convex_hull(e1);
    if (!(perimeter > 0)) return 0.0;
    return static_cast<double>(symmetric_difference(grid, hull)) * grid.spec.h() / perimeter;
}

ConvexityReport convexity_verdict(const BinaryGrid& grid, const DetectorConfig& config) {
    config.validate(grid.spec);
    if (grid.empty()) throw PreconditionError("convexity_verdict needs a non-empty grid");
    const double tau = config.tau_supp > 0 ? config.tau_supp : grid.spec.h();
    const auto exact = radon_family(grid, angle_lattice(config.n_angles));
    const auto supports = support_analysis(exact, tau);

    ConvexityReport r;
    r.hypotheses = hypotheses_from(exact, supports, config, tau);
    for (double e : config.schedule) {
        const auto nu = nu_measure(exact, supports, e, config.eta_factor * e, config.nu_delta);
        r.nu_trace.push_back({e, nu.total, nu.endpoint, nu.interior, nu.transition, nu.interior * std::abs(std::log(e))});
    }
    const auto tail = last_three(config.schedule);
    const double first = r.nu_trace[tail.front()].interior_log, last = r.nu_trace[tail.back()].interior_log;
    r.growth = first > 0 ? last / first : (last > 0 ? std::numeric_limits<double>::infinity() : 1.0);

    // Ground truth, reported always and consulted only in branch (3).
    r.perimeter = crofton_perimeter(grid, 64).value;
    r.hull_defect = hull_defect(grid, config, r.perimeter);

    if (!r.hypotheses.support_convex) {
        r.verdict = Verdict::non_convex;
        r.branch = 1;
        r.witness = gap_witness(grid, supports);
        return r;
    }
    const double interior_min = r.nu_trace[tail.back()].interior;
    const bool non_decay = r.growth >= config.growth_threshold ||
                           (config.baseline > 0 && interior_min >= config.baseline_factor * config.baseline);
    if (non_decay) {
        r.verdict = Verdict::non_convex;
        r.branch = 2;
        r.witness = energy_witness(grid, config);
        return r;
    }
    r.branch = 3;
    r.verdict = r.hull_defect <= config.hull_tolerance ? Verdict::convex : Verdict::inconclusive;
    return r;
}

CounterexampleReport counterexample_demo(double epsilon_bump, const CounterexampleConfig& cfg) {
    if (!(epsilon_bump >= 0)) throw PreconditionError("counterexample needs epsilon_bump >= 0");
    if (!(cfg.bump_radius > 0 && cfg.bump_radius <= 0.2)) throw PreconditionError("bump radius must lie in (0, 0.2]");
    if (cfg.bump_amplitude != 1.0) throw PreconditionError("bump amplitude must be 1");
    const auto spec = GridSpec::centered(cfg.n, cfg.side);
    const double h = spec.h();
    const double eps_s = cfg.smoothing_cells * h;

    const auto disk = rasterize(Disk{{0, 0}, cfg.disk_radius}, spec);
    const auto bump = sample_field(SmoothBump{{0, 0}, cfg.bump_radius, cfg.bump_amplitude}, spec);
    const auto thetas = angle_lattice(cfg.n_angles);
    // Marginals are linear in the field: w_phi = mollify1d(w_disk) - eps_bump * w_bump.
    const auto disk_marg = mollify_family(radon_family(disk, thetas), eps_s);
    const auto bump_marg = radon_family(bump, thetas);
    const int max_step = static_cast<int>(std::ceil(cfg.bump_radius / h));

    struct Phase {
        std::size_t passed = 0;
        double worst = 0.0;
        double slack = 0.0;
    };
    auto marginals = [&](double eb) {
        Phase p;
        p.worst = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < thetas.size(); ++a) {
            auto row = disk_marg.row(a);
            const auto b = bump_marg.values(a);
            for (std::size_t k = 0; k < row.values.size(); ++k) row.values[k] -= eb * b[k];
            const auto res = log_concavity_test(row, h, max_step);
            p.passed += res.pass;
            p.worst = std::max(p.worst, res.worst_deficit);
            p.slack = res.slack;
        }
        return p;
    };

    CounterexampleReport r;
    r.epsilon_bump = epsilon_bump;
    const auto phase_a = marginals(epsilon_bump);
    r.angles_tested = thetas.size();
    r.angles_passed = phase_a.passed;
    r.marginals_log_concave = phase_a.passed == thetas.size();
    r.worst_marginal_deficit = phase_a.worst;
    r.marginal_slack = phase_a.slack;

    const double floor_bump = 1e-4;
    if (marginals(floor_bump).passed != thetas.size()) {
        r.resolution_inadequate = true;
    } else {
        double lo = floor_bump, hi = 1.0;
        if (marginals(hi).passed == thetas.size()) {
            lo = hi;
        } else {
            while (hi - lo > cfg.bisection_tolerance) {
                const double mid = (lo + hi) / 2;
                (marginals(mid).passed == thetas.size() ? lo : hi) = mid;
            }
        }
        r.max_admissible_bump = lo;
    }

    // Phase (b): the field itself along radial segments through the bump centre.
    auto phi = mollify2d(disk, eps_s);
    for (std::size_t k = 0; k < phi.values.size(); ++k) phi.values[k] -= epsilon_bump * bump.values[k];
    phi.provenance = Provenance::synthetic;
    const double half = 3 * cfg.bump_radius;
    const int samples = static_cast<int>(std::floor(2 * half / h)) + 1;
    const int seg_step = static_cast<int>(std::ceil(1.5 * cfg.bump_radius / h));
    double worst = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < cfg.segment_count; ++s) {
        const double ang = constants::kPi * s / cfg.segment_count;
        const double c = std::cos(ang), sn = std::sin(ang);
        Profile1D prof;
        prof.dt = h;
        prof.t0 = -half;
        for (int k = 0; k < samples; ++k) {
            const double t = -half + k * h;
            prof.values.push_back(phi.sample({t * c, t * sn}));
        }
        const auto res = log_concavity_test(prof, cfg.field_tau, seg_step);
        if (res.tested && res.worst_deficit > worst) {
            worst = res.worst_deficit;
            const double tm = prof.t(res.worst_index);
            const double ds = static_cast<double>(res.worst_step) * h;
            SegmentViolation v;
            v.start = {(tm - ds) * c, (tm - ds) * sn};
            v.mid = {tm * c, tm * sn};
            v.end = {(tm + ds) * c, (tm + ds) * sn};
            v.deficit = res.worst_deficit;
            v.slack = res.slack;
            r.violating_segment = v;
        }
    }
    r.field_violation = r.violating_segment && r.violating_segment->deficit >= 10 * r.violating_segment->slack;
    if (!r.field_violation) r.violating_segment.reset();
    const bool phase_b = epsilon_bump > 0 ? r.field_violation : !r.field_violation;
    r.success = r.marginals_log_concave && !r.resolution_inadequate && phase_b;
    return r;
}

}  // namespace margconv
