#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subrig/hypersurface.hpp"
#include "subrig/structure.hpp"

namespace subrig::app {

inline constexpr int kConfigVersion = 1;

struct GridSpec {
    std::vector<Point> points;
    bool project = true;
};

struct RigiditySpec {
    std::size_t samples = 50;
    double lo = -2.0;
    double hi = 2.0;
};

struct CurvatureSpec {
    bool expect_minimal = false;
    bool write_grid = true;
};

struct VerifySpec {
    std::string expect = "cmc"; // "minimal" or "cmc"
};

struct RuleSpec {
    std::vector<Point> starts;
    double length = 1.0;
    double step = 1e-3;
    double rho = 0.0;
};

struct ConeSpec {
    int quadrature = 16;
    double rel_tol = 1e-3;
    std::vector<double> lambdas;
    Box box;
};

struct ConvexitySpec {
    std::vector<Point> points;
    double length = 0.3;
    int directions = 8;
    double step = 1e-3;
    std::optional<double> side_tol;
    std::optional<std::string> expect;
};

struct PerimeterSpec {
    int quadrature = 16;
    std::optional<double> expected;
};

/// Command-line overrides applied on top of the file.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> quadrature;
    std::optional<double> step;
    std::optional<double> tol;
};

struct RunConfig {
    nlohmann::json source; // the file contents with overrides applied
    std::uint64_t seed = 1;
    std::optional<double> tol;
    VRStructure structure;
    std::optional<Hypersurface> surface;
    std::optional<GridSpec> grid;
    std::optional<Patch> patch;
    RigiditySpec rigidity;
    CurvatureSpec curvature;
    VerifySpec verify;
    RuleSpec rule;
    ConeSpec cone;
    ConvexitySpec convexity;
    PerimeterSpec perimeter;

    const Hypersurface& require_surface() const;
    const GridSpec& require_grid() const;
    const Patch& require_patch() const;
};

/// Parses and validates a configuration document. Throws ConfigError.
RunConfig parse_config(nlohmann::json doc, const Overrides& overrides = {});

RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});

/// 64-bit FNV-1a over the canonical (key-sorted, compact) dump.
std::uint64_t fingerprint(const nlohmann::json& doc);

} // namespace subrig::app
