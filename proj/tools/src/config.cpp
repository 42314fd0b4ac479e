#include "config.hpp"

#include <fstream>
#include <initializer_list>
#include <random>
#include <sstream>

#include "subrig/catalog.hpp"
#include "subrig/errors.hpp"

namespace subrig::app {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed)
{
    if (!j.is_object()) {
        throw ConfigError(path + " must be an object");
    }
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed) {
            known = known || key == a;
        }
        if (!known) {
            throw ConfigError("unknown key '" + (path.empty() ? key : path + "." + key) + "'");
        }
    }
}

template <class T>
T value_or(const json& j, const char* key, const std::string& path, T fallback)
{
    if (!j.contains(key)) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(path + "." + key + " has the wrong type");
    }
}

template <class T>
T required(const json& j, const char* key, const std::string& path)
{
    if (!j.contains(key)) {
        throw ConfigError("missing key '" + path + "." + key + "'");
    }
    return value_or<T>(j, key, path, T{});
}

double positive(double v, const std::string& what)
{
    if (!(v > 0.0)) {
        throw ConfigError(what + " must be positive");
    }
    return v;
}

Point to_point(const json& j, const std::string& path, std::size_t dim)
{
    if (!j.is_array() || j.size() != dim) {
        throw ConfigError(path + " must be an array of " + std::to_string(dim) + " numbers");
    }
    Point p(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        if (!j[i].is_number()) {
            throw ConfigError(path + " must contain numbers");
        }
        p[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return p;
}

std::vector<Point> to_points(const json& j, const std::string& path, std::size_t dim)
{
    if (!j.is_array()) {
        throw ConfigError(path + " must be an array of points");
    }
    std::vector<Point> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(to_point(j[i], path + "[" + std::to_string(i) + "]", dim));
    }
    return out;
}

Box to_box(const json& j, const std::string& path)
{
    if (!j.is_array()) {
        throw ConfigError(path + " must be an array of [lo, hi] pairs");
    }
    Box box;
    for (const auto& r : j) {
        if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
            throw ConfigError(path + " must be an array of [lo, hi] pairs");
        }
        const double lo = r[0].get<double>(), hi = r[1].get<double>();
        if (!(lo < hi)) {
            throw ConfigError(path + " has an empty interval");
        }
        box.emplace_back(lo, hi);
    }
    return box;
}

std::vector<Expression> to_expressions(const json& j, const std::string& path, const Coordinates& coords)
{
    if (!j.is_array()) {
        throw ConfigError(path + " must be an array of expressions");
    }
    std::vector<Expression> out;
    for (const auto& e : j) {
        if (!e.is_string()) {
            throw ConfigError(path + " must contain expression strings");
        }
        out.push_back(parse(e.get<std::string>(), coords));
    }
    return out;
}

CarnotData to_carnot(const json& j, const std::string& path)
{
    check_keys(j, path, {"grading", "brackets"});
    CarnotData data(required<std::vector<int>>(j, "grading", path));
    for (const auto& b : value_or<json>(j, "brackets", path, json::array())) {
        if (!b.is_array() || b.size() != 4) {
            throw ConfigError(path + ".brackets entries must be [a, b, c, value]");
        }
        const auto index = [&](std::size_t i) {
            const int v = b[i].get<int>();
            if (v < 0 || static_cast<std::size_t>(v) >= data.dimension()) {
                throw ConfigError(path + ".brackets index out of range");
            }
            return static_cast<std::size_t>(v);
        };
        data.set_bracket(index(0), index(1), index(2), b[3].get<double>());
    }
    validate_carnot(data);
    return data;
}

VRStructure explicit_structure(const json& j, const std::string& path)
{
    check_keys(j, path, {"name", "coordinates", "horizontal", "vertical", "partition", "dilation"});
    VRStructure s;
    s.name = value_or<std::string>(j, "name", path, "custom");
    s.coords = required<Coordinates>(j, "coordinates", path);
    auto fields = [&](const char* key) {
        std::vector<VectorFieldSpec> out;
        const json list = required<json>(j, key, path);
        if (!list.is_array()) {
            throw ConfigError(path + "." + key + " must be an array of fields");
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            out.push_back({to_expressions(list[i], path + "." + key + "[" + std::to_string(i) + "]", s.coords)});
        }
        return out;
    };
    s.horizontal = fields("horizontal");
    s.vertical = fields("vertical");
    s.partition = required<std::vector<int>>(j, "partition", path);
    if (j.contains("dilation")) {
        const json& d = j.at("dilation");
        check_keys(d, path + ".dilation", {"gammas", "map"});
        Coordinates with_lambda = s.coords;
        with_lambda.emplace_back("lambda");
        DilatingFlow flow;
        flow.gammas = required<std::vector<double>>(d, "gammas", path + ".dilation");
        flow.map = to_expressions(required<json>(d, "map", path + ".dilation"), path + ".dilation.map", with_lambda);
        flow.origin = Point::Zero(static_cast<Eigen::Index>(s.dim()));
        s.flow = std::move(flow);
    }
    return s;
}

VRStructure structure_section(const json& j, std::uint64_t seed)
{
    const std::string path = "structure";
    if (!j.is_object()) {
        throw ConfigError("structure must be an object");
    }
    if (!j.contains("catalog")) {
        VRStructure s = explicit_structure(j, path);
        validate_structure(s, sample_box(s.dim(), 16, -1.0, 1.0, seed));
        return s;
    }
    check_keys(j, path, {"catalog", "n", "f", "g", "degree", "carnot"});
    CatalogParams params;
    params.n = value_or<int>(j, "n", path, params.n);
    params.f = value_or<std::string>(j, "f", path, params.f);
    params.g = value_or<std::string>(j, "g", path, params.g);
    if (j.contains("degree")) {
        params.degree = required<int>(j, "degree", path);
    }
    if (j.contains("carnot")) {
        params.carnot = to_carnot(j.at("carnot"), path + ".carnot");
    }
    return catalog(required<std::string>(j, "catalog", path), params);
}

GridSpec grid_section(const json& j, std::size_t dim, std::uint64_t seed)
{
    const std::string path = "grid";
    check_keys(j, path, {"points", "box", "count", "project"});
    GridSpec g;
    g.project = value_or<bool>(j, "project", path, true);
    if (j.contains("points")) {
        g.points = to_points(j.at("points"), path + ".points", dim);
    }
    if (j.contains("box")) {
        const Box box = to_box(j.at("box"), path + ".box");
        if (box.size() != dim) {
            throw ConfigError("grid.box must have one interval per coordinate");
        }
        const auto count = value_or<std::size_t>(j, "count", path, 100);
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < count; ++i) {
            Point p(static_cast<Eigen::Index>(dim));
            for (std::size_t k = 0; k < dim; ++k) {
                p[static_cast<Eigen::Index>(k)] = std::uniform_real_distribution<double>(box[k].first, box[k].second)(rng);
            }
            g.points.push_back(std::move(p));
        }
    }
    if (g.points.empty()) {
        throw ConfigError("grid needs points or a box");
    }
    return g;
}

Patch patch_section(const json& j, std::size_t dim)
{
    const std::string path = "patch";
    check_keys(j, path, {"params", "map", "domain"});
    Patch p;
    p.params = required<Coordinates>(j, "params", path);
    p.map = to_expressions(required<json>(j, "map", path), path + ".map", p.params);
    p.domain = to_box(required<json>(j, "domain", path), path + ".domain");
    if (p.map.size() != dim || p.domain.size() != p.params.size()) {
        throw ConfigError("patch map must have one entry per coordinate and domain one interval per parameter");
    }
    return p;
}

} // namespace

const Hypersurface& RunConfig::require_surface() const
{
    if (!surface) {
        throw ConfigError("this command needs a 'surface' section");
    }
    return *surface;
}

const GridSpec& RunConfig::require_grid() const
{
    if (!grid) {
        throw ConfigError("this command needs a 'grid' section");
    }
    return *grid;
}

const Patch& RunConfig::require_patch() const
{
    if (!patch) {
        throw ConfigError("this command needs a 'patch' section");
    }
    return *patch;
}

RunConfig parse_config(json doc, const Overrides& overrides)
{
    check_keys(doc, "", {"version", "seed", "tol", "structure", "surface", "grid", "patch", "rigidity", "curvature",
                         "verify", "rule", "cone_volume", "convexity", "perimeter"});
    if (!doc.contains("version") || !doc["version"].is_number_integer() || doc["version"].get<int>() != kConfigVersion) {
        throw ConfigError("config 'version' must be " + std::to_string(kConfigVersion));
    }
    if (overrides.seed) {
        doc["seed"] = *overrides.seed;
    }
    if (overrides.tol) {
        doc["tol"] = *overrides.tol;
    }
    if (overrides.step) {
        doc["rule"]["step"] = *overrides.step;
        doc["convexity"]["step"] = *overrides.step;
    }
    if (overrides.quadrature) {
        doc["cone_volume"]["quadrature"] = *overrides.quadrature;
        doc["perimeter"]["quadrature"] = *overrides.quadrature;
    }

    RunConfig c;
    c.seed = value_or<std::uint64_t>(doc, "seed", "", 1);
    if (doc.contains("tol")) {
        c.tol = positive(required<double>(doc, "tol", ""), "tol");
    }
    c.structure = structure_section(required<json>(doc, "structure", ""), c.seed);
    const std::size_t dim = c.structure.dim();

    if (doc.contains("surface")) {
        const json& j = doc["surface"];
        check_keys(j, "surface", {"phi", "orientation", "char_tol"});
        Hypersurface surf;
        surf.phi = parse(required<std::string>(j, "phi", "surface"), c.structure.coords);
        surf.orientation = value_or<int>(j, "orientation", "surface", 1);
        if (surf.orientation != 1 && surf.orientation != -1) {
            throw ConfigError("surface.orientation must be 1 or -1");
        }
        surf.char_tol = positive(value_or<double>(j, "char_tol", "surface", surf.char_tol), "surface.char_tol");
        c.surface = std::move(surf);
    }
    if (doc.contains("grid")) {
        c.grid = grid_section(doc["grid"], dim, c.seed);
    }
    if (doc.contains("patch")) {
        c.patch = patch_section(doc["patch"], dim);
    }
    if (doc.contains("rigidity")) {
        const json& j = doc["rigidity"];
        check_keys(j, "rigidity", {"samples", "box"});
        c.rigidity.samples = value_or<std::size_t>(j, "samples", "rigidity", c.rigidity.samples);
        if (j.contains("box")) {
            const auto b = required<std::vector<double>>(j, "box", "rigidity");
            if (b.size() != 2 || !(b[0] < b[1])) {
                throw ConfigError("rigidity.box must be [lo, hi]");
            }
            c.rigidity.lo = b[0];
            c.rigidity.hi = b[1];
        }
    }
    if (doc.contains("curvature")) {
        const json& j = doc["curvature"];
        check_keys(j, "curvature", {"expect_minimal", "write_grid"});
        c.curvature.expect_minimal = value_or<bool>(j, "expect_minimal", "curvature", false);
        c.curvature.write_grid = value_or<bool>(j, "write_grid", "curvature", true);
    }
    if (doc.contains("verify")) {
        const json& j = doc["verify"];
        check_keys(j, "verify", {"expect"});
        c.verify.expect = value_or<std::string>(j, "expect", "verify", c.verify.expect);
        if (c.verify.expect != "minimal" && c.verify.expect != "cmc") {
            throw ConfigError("verify.expect must be 'minimal' or 'cmc'");
        }
    }
    if (doc.contains("rule")) {
        const json& j = doc["rule"];
        check_keys(j, "rule", {"starts", "length", "step", "rho"});
        if (j.contains("starts")) {
            c.rule.starts = to_points(j["starts"], "rule.starts", dim);
        }
        c.rule.length = positive(value_or<double>(j, "length", "rule", c.rule.length), "rule.length");
        c.rule.step = positive(value_or<double>(j, "step", "rule", c.rule.step), "rule.step");
        c.rule.rho = value_or<double>(j, "rho", "rule", c.rule.rho);
    }
    if (doc.contains("cone_volume")) {
        const json& j = doc["cone_volume"];
        check_keys(j, "cone_volume", {"quadrature", "rel_tol", "lambdas", "box"});
        c.cone.quadrature = value_or<int>(j, "quadrature", "cone_volume", c.cone.quadrature);
        c.cone.rel_tol = positive(value_or<double>(j, "rel_tol", "cone_volume", c.cone.rel_tol), "cone_volume.rel_tol");
        c.cone.lambdas = value_or<std::vector<double>>(j, "lambdas", "cone_volume", {});
        for (double l : c.cone.lambdas) {
            positive(l, "cone_volume.lambdas");
        }
        if (j.contains("box")) {
            c.cone.box = to_box(j["box"], "cone_volume.box");
            if (c.cone.box.size() != dim) {
                throw ConfigError("cone_volume.box must have one interval per coordinate");
            }
        }
    }
    if (doc.contains("convexity")) {
        const json& j = doc["convexity"];
        check_keys(j, "convexity", {"points", "length", "directions", "step", "side_tol", "expect"});
        if (j.contains("points")) {
            c.convexity.points = to_points(j["points"], "convexity.points", dim);
        }
        c.convexity.length = positive(value_or<double>(j, "length", "convexity", c.convexity.length), "convexity.length");
        c.convexity.directions = value_or<int>(j, "directions", "convexity", c.convexity.directions);
        c.convexity.step = positive(value_or<double>(j, "step", "convexity", c.convexity.step), "convexity.step");
        if (j.contains("side_tol")) {
            c.convexity.side_tol = positive(required<double>(j, "side_tol", "convexity"), "convexity.side_tol");
        }
        if (j.contains("expect")) {
            c.convexity.expect = required<std::string>(j, "expect", "convexity");
        }
    }
    if (doc.contains("perimeter")) {
        const json& j = doc["perimeter"];
        check_keys(j, "perimeter", {"quadrature", "expected"});
        c.perimeter.quadrature = value_or<int>(j, "quadrature", "perimeter", c.perimeter.quadrature);
        if (j.contains("expected")) {
            c.perimeter.expected = required<double>(j, "expected", "perimeter");
        }
    }
    for (int order : {c.cone.quadrature, c.perimeter.quadrature}) {
        if (order < 1) {
            throw ConfigError("quadrature order must be at least 1");
        }
    }
    c.source = std::move(doc);
    return c;
}

RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path.string() + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(std::move(doc), overrides);
}

std::uint64_t fingerprint(const json& doc)
{
    std::uint64_t hash = 14695981039346656037ULL;
    for (const unsigned char ch : doc.dump()) {
        hash ^= ch;
        hash *= 1099511628211ULL;
    }
    return hash;
}

} // namespace subrig::app
