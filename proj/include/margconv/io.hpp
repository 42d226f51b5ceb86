#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "margconv/detector.hpp"
#include "margconv/geometry.hpp"
#include "margconv/radon.hpp"
#include "margconv/sobolev.hpp"

namespace margconv::io {

namespace fs = std::filesystem;

/// 8-bit binary PGM (P5, 0/255). The top image row is the grid row with the largest y.
/// The sidecar `<stem>.json` holds {"N", "L", "origin": [x, y]}.
void write_mask(const BinaryGrid& grid, const fs::path& pgm);

/// Reads P5 or P2 PGMs (maxval <= 255, pixel >= maxval/2 counts as occupied) and the sidecar.
/// Throws ParseError with a specific diagnostic on any malformed input.
BinaryGrid read_mask(const fs::path& pgm);

/// Sidecar path used for a data file: same directory and stem, ".json" extension.
fs::path sidecar_path(const fs::path& data);

/// Flat little-endian float64 dump plus sidecar {N, L, origin, provenance, epsilon}.
void write_field(const ScalarField& field, const fs::path& bin);
ScalarField read_field(const fs::path& bin);

/// Flat little-endian float64 sinogram plus sidecar {n_angles, M, dt, theta0, t0, epsilon}.
void write_sinogram(const MarginalFamily& family, const fs::path& bin);

nlohmann::json grid_json(const GridSpec& spec);
nlohmann::json to_json(const PerimeterEstimate& p);
nlohmann::json to_json(const EnergyValue& e);
nlohmann::json to_json(const ScalingFit& fit);
nlohmann::json to_json(const EnergyMeasure& nu);
nlohmann::json to_json(const SliceCheck& s);
nlohmann::json to_json(const IdentityCheck& c);
nlohmann::json to_json(const HypothesisReport& r);
nlohmann::json to_json(const ConvexityReport& r);
nlohmann::json to_json(const CounterexampleReport& r);

/// Pretty-printed, newline-terminated.
void write_json(const nlohmann::json& doc, const fs::path& path);
nlohmann::json read_json(const fs::path& path);

}  // namespace margconv::io
