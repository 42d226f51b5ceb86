#include "margconv/io.hpp"

#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

#include "margconv/constants.hpp"
#include "margconv/error.hpp"

namespace margconv::io {

namespace {

using nlohmann::json;

json point(Point2 p) { return json::array({p.x, p.y}); }

void write_doubles(const std::vector<double>& values, const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    for (double v : values) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        unsigned char bytes[8];
        for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>(bits >> (8 * b));
        os.write(reinterpret_cast<const char*>(bytes), 8);
    }
}

std::vector<double> read_doubles(const fs::path& path, std::size_t count) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ParseError("cannot open " + path.string());
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        unsigned char bytes[8];
        if (!is.read(reinterpret_cast<char*>(bytes), 8))
            throw ParseError(path.string() + ": expected " + std::to_string(count) + " float64 values");
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
        out[k] = std::bit_cast<double>(bits);
    }
    return out;
}

GridSpec spec_from_sidecar(const json& doc, const std::string& where) {
    try {
        GridSpec s;
        s.n = doc.at("N").get<int>();
        s.side = doc.at("L").get<double>();
        const auto& o = doc.at("origin");
        if (!o.is_array() || o.size() != 2) throw ParseError(where + ": 'origin' must be [x, y]");
        s.origin = {o[0].get<double>(), o[1].get<double>()};
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw ParseError(where + ": " + e.what());
    } catch (const PreconditionError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

// Next whitespace-separated PGM header token, skipping '#' comments.
std::string pgm_token(std::istream& is, const std::string& where) {
    std::string tok;
    for (;;) {
        int c = is.get();
        if (c == EOF) throw ParseError(where + ": truncated PGM header");
        if (c == '#') {
            while (c != '\n' && c != EOF) c = is.get();
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
}

int pgm_int(std::istream& is, const std::string& where, const char* what) {
    const auto tok = pgm_token(is, where);
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size() || v <= 0) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(where + ": invalid PGM " + what + " '" + tok + "'");
    }
}

}  // namespace

fs::path sidecar_path(const fs::path& data) {
    auto p = data;
    return p.replace_extension(".json");
}

json grid_json(const GridSpec& spec) { return json{{"N", spec.n}, {"L", spec.side}, {"origin", point(spec.origin)}}; }

void write_mask(const BinaryGrid& grid, const fs::path& pgm) {
    const int n = grid.spec.n;
    std::ofstream os(pgm, std::ios::binary);
    if (!os) throw Error("cannot open " + pgm.string() + " for writing");
    os << "P5\n" << n << " " << n << "\n255\n";
    std::vector<char> row(n);
    for (int i = n - 1; i >= 0; --i) {
        for (int j = 0; j < n; ++j) row[j] = grid.at(i, j) ? static_cast<char>(255) : 0;
        os.write(row.data(), n);
    }
    write_json(grid_json(grid.spec), sidecar_path(pgm));
}

BinaryGrid read_mask(const fs::path& pgm) {
    const std::string where = pgm.string();
    std::ifstream is(pgm, std::ios::binary);
    if (!is) throw ParseError(where + ": cannot open mask file");
    const auto magic = pgm_token(is, where);
    if (magic != "P5" && magic != "P2") throw ParseError(where + ": not a PGM file (magic '" + magic + "')");
    const int w = pgm_int(is, where, "width");
    const int hgt = pgm_int(is, where, "height");
    const int maxval = pgm_int(is, where, "maxval");
    if (w != hgt) throw ParseError(where + ": mask must be square, got " + std::to_string(w) + "x" + std::to_string(hgt));
    if (maxval > 255) throw ParseError(where + ": only 8-bit PGM masks are supported");

    const auto side = sidecar_path(pgm);
    if (!fs::exists(side)) throw ParseError(where + ": missing sidecar " + side.string());
    const auto spec = spec_from_sidecar(read_json(side), side.string());
    if (spec.n != w)
        throw ParseError(side.string() + ": N = " + std::to_string(spec.n) + " does not match PGM width " +
                         std::to_string(w));

    std::vector<int> pixels(static_cast<std::size_t>(w) * w);
    if (magic == "P5") {
        std::vector<unsigned char> raw(pixels.size());
        if (!is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
            throw ParseError(where + ": truncated pixel data");
        for (std::size_t k = 0; k < raw.size(); ++k) pixels[k] = raw[k];
    } else {
        for (auto& p : pixels)
            if (!(is >> p) || p < 0 || p > maxval) throw ParseError(where + ": invalid or missing ASCII pixel value");
    }
    BinaryGrid g(spec);
    for (int r = 0; r < w; ++r)
        for (int j = 0; j < w; ++j) g.at(w - 1 - r, j) = 2 * pixels[static_cast<std::size_t>(r) * w + j] >= maxval ? 1 : 0;
    return g;
}

void write_field(const ScalarField& field, const fs::path& bin) {
    write_doubles(field.values, bin);
    auto doc = grid_json(field.spec);
    doc["provenance"] = to_string(field.provenance);
    doc["epsilon"] = field.epsilon;
    doc["dtype"] = "float64-le";
    write_json(doc, sidecar_path(bin));
}

ScalarField read_field(const fs::path& bin) {
    const auto side = sidecar_path(bin);
    const auto doc = read_json(side);
    ScalarField f(spec_from_sidecar(doc, side.string()));
    f.values = read_doubles(bin, f.spec.cells());
    const auto prov = doc.value("provenance", std::string("synthetic"));
    f.provenance = prov == "indicator" ? Provenance::indicator
                   : prov == "mollified" ? Provenance::mollified
                                         : Provenance::synthetic;
    f.epsilon = doc.value("epsilon", 0.0);
    return f;
}

void write_sinogram(const MarginalFamily& family, const fs::path& bin) {
    write_doubles(family.sinogram, bin);
    json doc{{"n_angles", family.n_angles()},
             {"M", family.m},
             {"dt", family.dt},
             {"theta0", family.thetas.empty() ? 0.0 : family.thetas.front()},
             {"t0", family.t0},
             {"epsilon", family.epsilon},
             {"dtype", "float64-le"}};
    write_json(doc, sidecar_path(bin));
}

json to_json(const PerimeterEstimate& p) {
    json j{{"value", p.value}, {"method", to_string(p.method)}};
    if (p.method == PerimeterMethod::crofton) {
        j["n_angles"] = p.thetas.size();
        j["crossings"] = p.crossings;
        j["empty_input"] = p.empty_input;
    }
    return j;
}

json to_json(const EnergyValue& e) {
    json j{{"value", e.value}, {"method", to_string(e.method)}, {"epsilon", e.epsilon}};
    if (e.method == EnergyMethod::localized) {
        j["center"] = point(e.center);
        j["radius"] = e.radius;
    }
    return j;
}

json to_json(const ScalingFit& fit) {
    json pts = json::array();
    for (const auto& p : fit.points)
        pts.push_back({{"epsilon", p.epsilon}, {"log_inv_eps", p.log_inv_eps}, {"energy", p.energy}});
    return json{{"points", pts},          {"fit_from", fit.fit_from},
                {"slope", fit.slope},     {"intercept", fit.intercept},
                {"r2", fit.r2},           {"degenerate", fit.degenerate},
                {"calibration_c", constants::kCalibrationC.value}};
}

json to_json(const EnergyMeasure& nu) {
    return json{{"total", nu.total},           {"endpoint", nu.endpoint}, {"interior", nu.interior},
                {"transition", nu.transition}, {"eta", nu.eta},           {"delta", nu.delta},
                {"epsilon", nu.epsilon},       {"flagged_angles", nu.flagged.size()}};
}

json to_json(const SliceCheck& s) {
    return json{{"max_rel_error", s.max_rel_error},
                {"max_abs_error", s.max_abs_error},
                {"reference_max", s.reference_max},
                {"samples", s.samples}};
}

json to_json(const IdentityCheck& c) {
    return json{{"marginal_energy", c.marginal_energy},
                {"spectral_energy", c.spectral_energy},
                {"ratio", c.ratio},
                {"degenerate", c.degenerate}};
}

json to_json(const HypothesisReport& r) {
    json lip = json::array();
    for (const auto& l : r.lipschitz)
        lip.push_back({{"delta", l.delta},
                       {"uniform_lipschitz", l.uniform_lipschitz},
                       {"ratio_last_three", l.ratio},
                       {"bounded", l.bounded},
                       {"flagged_angles", l.flagged}});
    return json{{"n_angles", r.n_angles},
                {"single_interval", r.single_interval},
                {"empty", r.empty},
                {"single_interval_fraction", r.single_interval_fraction},
                {"split_angles", r.split_angles},
                {"lipschitz", lip},
                {"log_concave_fraction", r.log_concave_fraction},
                {"concave_fraction", r.concave_fraction},
                {"support_convex", r.support_convex},
                {"lipschitz_uniform", r.lipschitz_uniform},
                {"holds", r.holds}};
}

json to_json(const ConvexityReport& r) {
    json trace = json::array();
    for (const auto& p : r.nu_trace)
        trace.push_back({{"epsilon", p.epsilon},
                         {"total", p.total},
                         {"endpoint", p.endpoint},
                         {"interior", p.interior},
                         {"transition", p.transition},
                         {"interior_times_log", p.interior_log}});
    json j{{"verdict", to_string(r.verdict)},
           {"branch", r.branch},
           {"hypotheses", to_json(r.hypotheses)},
           {"nu_trace", trace},
           {"interior_growth", r.growth},
           {"hull_defect", r.hull_defect},
           {"crofton_perimeter", r.perimeter},
           {"witness", nullptr}};
    if (r.witness) {
        json wt = json::array();
        for (const auto& p : r.witness->trace)
            wt.push_back({{"epsilon", p.epsilon}, {"radius", p.radius}, {"localized_energy", p.energy}});
        j["witness"] = {{"point", point(r.witness->point)},
                        {"branch", r.witness->branch},
                        {"candidates", r.witness->candidates},
                        {"trace", wt}};
    }
    return j;
}

json to_json(const CounterexampleReport& r) {
    json seg = nullptr;
    if (r.violating_segment) {
        const auto& v = *r.violating_segment;
        seg = {{"start", point(v.start)},
               {"mid", point(v.mid)},
               {"end", point(v.end)},
               {"deficit", v.deficit},
               {"slack", v.slack},
               {"deficit_over_slack", v.deficit / v.slack}};
    }
    return json{{"epsilon_bump", r.epsilon_bump},
                {"angles_tested", r.angles_tested},
                {"angles_passed", r.angles_passed},
                {"marginals_log_concave", r.marginals_log_concave},
                {"worst_marginal_deficit", r.worst_marginal_deficit},
                {"marginal_slack", r.marginal_slack},
                {"max_admissible_bump", r.max_admissible_bump},
                {"resolution_inadequate", r.resolution_inadequate},
                {"field_violation", r.field_violation},
                {"violating_segment", seg},
                {"success", r.success}};
}

void write_json(const json& doc, const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os << doc.dump(2) << "\n";
}

json read_json(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open " + path.string());
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace margconv::io
