#include <doctest.h>

#include "margconv/cli_commands.hpp"
#include "margconv/error.hpp"
#include "margconv/io.hpp"
#include "support.hpp"

using namespace margconv;
using nlohmann::json;

namespace {

std::vector<std::string> violations(const std::string& command, const json& doc) {
    try {
        (void)cli::load_config(command, doc);
    } catch (const ConfigError& e) {
        return e.violations();
    }
    return {};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("per-command defaults") {
    const auto ps = cli::load_config("perimeter-scaling", json::object());
    CHECK(ps.n == 1024);
    const auto sched = ps.resolved_schedule();
    REQUIRE(sched.size() == 7);
    CHECK(sched.front() == doctest::Approx(2.0 / 32));
    CHECK(sched.back() == doctest::Approx(4 * 2.0 / 1024));
    CHECK(cli::load_config("slice-identity", json::object()).n == 512);
    const auto ce = cli::load_config("counterexample", json::object());
    CHECK(ce.side == 3.0);
    CHECK(ce.n_angles == 180);
    CHECK(cli::load_config("convexity", json::object()).resolved_schedule().size() == 3);
}

TEST_CASE("a new grid re-derives the default schedule") {
    const auto c = cli::load_config("perimeter-scaling", json{{"grid", {{"N", 512}, {"L", 2.0}}}});
    CHECK(c.resolved_schedule().size() == 5);
    CHECK(c.resolved_schedule().back() == doctest::Approx(4 * 2.0 / 512));
}

TEST_CASE("all violations are collected") {
    const auto v = violations("perimeter-scaling",
                              json{{"schedule", {{"eps0", 0.001}, {"ratio", 0.5}, {"count", 2}}}, {"colour", "red"}});
    CHECK(v.size() >= 4);
    bool below = false, unknown = false;
    for (const auto& s : v) {
        below = below || s.find("below 2h") != std::string::npos;
        unknown = unknown || s.find("colour") != std::string::npos;
    }
    CHECK(below);
    CHECK(unknown);
    CHECK_FALSE(violations("convexity", json{{"delta_ladder", {0.01}}}).empty());
    CHECK_FALSE(violations("slice-identity", json{{"epsilon", 0.001}}).empty());
    CHECK_FALSE(violations("counterexample", json{{"bump_radius", 0.5}}).empty());
    CHECK_FALSE(violations("rasterize", json{{"grid", {{"N", "big"}}}}).empty());
    CHECK(violations("slice-identity", json{{"n_angles", 2}}).empty());
}

TEST_CASE("config round trips through its JSON form") {
    const auto c = cli::load_config("slice-identity", json{{"epsilon", 0.03}, {"seed", 9}});
    auto doc = cli::to_json(c);
    CHECK(doc["epsilon"] == 0.03);
    doc.erase("command");
    doc.erase("resolved_schedule");
    const auto again = cli::load_config("slice-identity", doc);
    CHECK(cli::to_json(again) == cli::to_json(c));
}

TEST_CASE("shape argument: inline JSON or file") {
    const auto dir = testgen::scratch_dir("cli_shape");
    const std::string inline_doc = R"({"type": "disk", "center": [0, 0], "radius": 0.2})";
    CHECK(std::holds_alternative<Disk>(cli::parse_shape_argument(inline_doc, 1).node));
    io::write_json(json::parse(inline_doc), dir / "s.json");
    CHECK(std::holds_alternative<Disk>(cli::parse_shape_argument((dir / "s.json").string(), 1).node));
    CHECK_THROWS_AS(cli::parse_shape_argument("{oops", 1), ParseError);
}

TEST_CASE("small end-to-end runs honour the exit-code contract") {
    const auto dir = testgen::scratch_dir("cli_run");
    auto slice = cli::load_config("slice-identity", json{{"grid", {{"N", 128}, {"L", 2.0}}}, {"epsilon", 0.04}});
    slice.output_dir = dir / "slice";
    CHECK(cli::cmd_slice_identity(slice, std::nullopt) == cli::kOk);
    const auto ident = io::read_json(dir / "slice" / "identity.json");
    CHECK(ident["slice_max_err"].get<double>() <= 2e-2);
    const auto manifest = io::read_json(dir / "slice" / "manifest.json");
    CHECK(manifest["config"]["epsilon"] == 0.04);
    CHECK(manifest["calibration"].contains("calibration_c"));

    slice.zero_field = true;
    slice.output_dir = dir / "zero";
    CHECK(cli::cmd_slice_identity(slice, std::nullopt) == cli::kOk);
    CHECK(io::read_json(dir / "zero" / "identity.json")["degenerate"] == true);

    auto ras = cli::load_config("rasterize", json{{"grid", {{"N", 64}, {"L", 2.0}}}});
    ras.output_dir = dir / "ras";
    CHECK(cli::cmd_rasterize(ras, ShapeSpec(Disk{{0, 0}, 0.3})) == cli::kOk);
    CHECK(std::filesystem::exists(dir / "ras" / "mask.pgm"));
    CHECK(std::filesystem::exists(dir / "ras" / "mask.json"));

    CHECK(cli::report_error(dir / "err", "config", "bad", {"x"}) == cli::kUsage);
    CHECK(io::read_json(dir / "err" / "error.json")["details"][0] == "x");
}

}
