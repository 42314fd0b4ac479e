#include "commands.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>

#include "subrig/errors.hpp"
#include "subrig/flows.hpp"
#include "subrig/parallel.hpp"
#include "subrig/shape.hpp"

#ifndef SUBRIG_VERSION
#define SUBRIG_VERSION "0.0.0"
#endif

namespace subrig::app {

namespace {

using ojson = nlohmann::ordered_json;

ojson to_json(const Eigen::VectorXd& v)
{
    ojson a = ojson::array();
    for (const double x : v) {
        a.push_back(x);
    }
    return a;
}

std::string g17(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path)
    {
        if (!out_) {
            throw Error("cannot write '" + path.string() + "'");
        }
        row(header);
    }

    void row(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out_ << (i ? "," : "") << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

void append(std::vector<std::string>& cells, const Eigen::VectorXd& v)
{
    for (const double x : v) {
        cells.push_back(g17(x));
    }
}

ojson header(std::string_view name, const RunConfig& c)
{
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016" PRIx64, fingerprint(c.source));
    ojson r;
    r["tool"] = "subrig";
    r["version"] = SUBRIG_VERSION;
    r["command"] = std::string(name);
    r["fingerprint"] = hex;
    r["structure"] = c.structure.name;
    r["config"] = ojson::parse(c.source.dump());
    return r;
}

double tol_or(const RunConfig& c, double fallback)
{
    return c.tol.value_or(fallback);
}

// Grid points, projected onto the surface when requested. Failures are
// returned as messages so callers can record and skip them.
struct Sample {
    Point p;
    std::string error;
};

std::vector<Sample> surface_samples(const RunConfig& c, const std::vector<Point>& raw, bool project)
{
    const Hypersurface& surf = c.require_surface();
    return parallel_map(raw.size(), [&](std::size_t i) {
        if (!project) {
            return Sample{raw[i], {}};
        }
        try {
            return Sample{project_to_surface(surf, raw[i]), {}};
        } catch (const Error& e) {
            return Sample{raw[i], e.what()};
        }
    });
}

std::vector<std::string> coordinate_header(const RunConfig& c)
{
    return c.structure.coords;
}

CommandResult check_rigidity(const RunConfig& c, const std::filesystem::path&)
{
    const double tol = tol_or(c, 1e-10);
    const auto samples = sample_box(c.structure.dim(), c.rigidity.samples, c.rigidity.lo, c.rigidity.hi, c.seed);
    const RigidityReport r = check_vertical_rigidity(c.structure, samples, tol);
    CommandResult out{header("check-rigidity", c), r.pass, {}};
    ojson& s = out.report["summary"];
    s["samples"] = r.samples;
    s["tol"] = tol;
    s["max_residual"] = r.max_residual;
    s["worst_point"] = to_json(r.worst_point);
    s["worst_horizontal"] = r.worst_horizontal;
    s["worst_vertical"] = {r.worst_j, r.worst_i};
    out.report["pass"] = r.pass;
    out.summary = "max residual " + g17(r.max_residual);
    return out;
}

CommandResult curvature_report(const RunConfig& c, const std::filesystem::path& dir)
{
    const double tol = tol_or(c, 1e-7);
    const Hypersurface& surf = c.require_surface();
    const GridSpec& grid = c.require_grid();
    const auto samples = surface_samples(c, grid.points, grid.project);
    struct Row {
        Sample sample;
        double hnorm = 0.0;
        bool characteristic = false;
        std::optional<HorizontalShape> shape;
        std::string error;
    };
    const auto rows = parallel_map(samples.size(), [&](std::size_t i) {
        Row row;
        row.sample = samples[i];
        row.error = samples[i].error;
        if (!row.error.empty()) {
            return row;
        }
        try {
            const SurfacePointFrame f = level_set_frame(c.structure, surf, row.sample.p);
            row.hnorm = f.hnorm;
            row.characteristic = f.characteristic;
            if (!f.characteristic) {
                ShapeOptions opts;
                opts.tol = tol;
                row.shape = second_fundamental_form(c.structure, surf, row.sample.p, opts);
            }
        } catch (const Error& e) {
            row.error = e.what();
        }
        return row;
    });

    const auto k = c.structure.horizontal_rank() - 1;
    std::optional<CsvWriter> csv;
    if (c.curvature.write_grid) {
        auto cols = coordinate_header(c);
        for (const char* h : {"hnorm", "characteristic", "H"}) {
            cols.emplace_back(h);
        }
        for (std::size_t i = 0; i < k; ++i) {
            cols.push_back("kappa_" + std::to_string(i + 1));
        }
        cols.emplace_back("classification");
        csv.emplace(dir / "grid.csv", cols);
    }

    std::map<std::string, std::size_t> histogram;
    std::size_t characteristic = 0, failed = 0, evaluated = 0;
    double max_abs_h = 0.0;
    ojson records = ojson::array();
    for (const Row& row : rows) {
        ojson rec;
        rec["point"] = to_json(row.sample.p);
        if (!row.error.empty()) {
            ++failed;
            rec["error"] = row.error;
            records.push_back(std::move(rec));
            continue;
        }
        rec["hnorm"] = row.hnorm;
        rec["characteristic"] = row.characteristic;
        std::vector<std::string> cells;
        append(cells, row.sample.p);
        cells.push_back(g17(row.hnorm));
        cells.emplace_back(row.characteristic ? "1" : "0");
        if (row.characteristic) {
            ++characteristic;
            cells.emplace_back("nan");
            cells.insert(cells.end(), k, "nan");
            cells.emplace_back("Characteristic");
        } else {
            ++evaluated;
            const HorizontalShape& sh = *row.shape;
            const std::string cls(to_string(sh.classification));
            max_abs_h = std::max(max_abs_h, std::abs(sh.h));
            ++histogram[cls];
            rec["H"] = sh.h;
            rec["kappas"] = sh.kappas;
            rec["classification"] = cls;
            cells.push_back(g17(sh.h));
            for (const double kappa : sh.kappas) {
                cells.push_back(g17(kappa));
            }
            cells.push_back(cls);
        }
        if (csv) {
            csv->row(cells);
        }
        records.push_back(std::move(rec));
    }

    const bool minimal = evaluated > 0 && max_abs_h < tol;
    const bool pass = evaluated > 0 && (!c.curvature.expect_minimal || minimal);
    CommandResult out{header("curvature-report", c), pass, {}};
    ojson& s = out.report["summary"];
    s["points"] = rows.size();
    s["evaluated"] = evaluated;
    s["characteristic"] = characteristic;
    s["failed"] = failed;
    s["tol"] = tol;
    s["max_abs_H"] = max_abs_h;
    s["minimal"] = minimal;
    s["classification_histogram"] = ojson::object();
    for (const auto& [name, count] : histogram) {
        s["classification_histogram"][name] = count;
    }
    out.report["pass"] = pass;
    out.report["records"] = std::move(records);
    out.summary = "max |H| " + g17(max_abs_h) + " over " + std::to_string(evaluated) + " points";
    return out;
}

CommandResult verify(const RunConfig& c, const std::filesystem::path&)
{
    const double tol = tol_or(c, 1e-7);
    const GridSpec& grid = c.require_grid();
    const auto samples = surface_samples(c, grid.points, grid.project);
    std::vector<Point> points;
    ojson skipped = ojson::array();
    for (const Sample& s : samples) {
        if (s.error.empty()) {
            points.push_back(s.p);
        } else {
            skipped.push_back({{"point", to_json(s.p)}, {"error", s.error}});
        }
    }
    const ConstancyReport r = verify_constancy(c.structure, c.require_surface(), points, tol);
    const bool pass = c.verify.expect == "minimal" ? r.minimal : r.cmc;
    CommandResult out{header("verify", c), pass, {}};
    ojson& s = out.report["summary"];
    s["expect"] = c.verify.expect;
    s["tol"] = tol;
    s["evaluated"] = r.points.size();
    s["characteristic"] = r.characteristic.size();
    s["skipped"] = skipped.size();
    s["mean_H"] = r.mean;
    s["max_abs_H"] = r.max_abs;
    s["max_deviation"] = r.max_deviation;
    s["minimal"] = r.minimal;
    s["cmc"] = r.cmc;
    out.report["pass"] = pass;
    ojson records = ojson::array();
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        records.push_back({{"point", to_json(r.points[i])}, {"H", r.h[i]}});
    }
    for (const Point& p : r.characteristic) {
        records.push_back({{"point", to_json(p)}, {"characteristic", true}});
    }
    out.report["records"] = std::move(records);
    out.report["skipped"] = std::move(skipped);
    out.summary = "mean H " + g17(r.mean) + ", max deviation " + g17(r.max_deviation);
    return out;
}

void write_curve(const std::filesystem::path& path, const RunConfig& c, const Polyline& curve)
{
    auto cols = coordinate_header(c);
    for (std::size_t a = 0; a < c.structure.horizontal_rank(); ++a) {
        cols.push_back("u" + std::to_string(a + 1));
    }
    for (const char* h : {"arclength", "kc", "c0"}) {
        cols.emplace_back(h);
    }
    CsvWriter csv(path, cols);
    for (const CurveState& st : curve) {
        std::vector<std::string> cells;
        append(cells, st.p);
        append(cells, st.u);
        cells.push_back(g17(st.arclength));
        cells.push_back(g17(st.kc));
        cells.push_back(g17(st.c0));
        csv.row(cells);
    }
}

std::vector<Point> start_points(const RunConfig& c, const std::vector<Point>& declared, ojson& skipped)
{
    std::vector<Point> raw = declared;
    bool project = true;
    if (raw.empty()) {
        const GridSpec& grid = c.require_grid();
        raw = grid.points;
        project = grid.project;
    }
    std::vector<Point> out;
    for (const Sample& s : surface_samples(c, raw, project)) {
        if (s.error.empty()) {
            out.push_back(s.p);
        } else {
            skipped.push_back({{"point", to_json(s.p)}, {"error", s.error}});
        }
    }
    return out;
}

CommandResult rule(const RunConfig& c, const std::filesystem::path& dir)
{
    const double tol = tol_or(c, 1e-5);
    const Hypersurface& surf = c.require_surface();
    ojson skipped = ojson::array();
    const auto starts = start_points(c, c.rule.starts, skipped);
    struct Run {
        RulingResult result;
        std::string error;
    };
    const auto runs = parallel_map(starts.size(), [&](std::size_t i) {
        try {
            return Run{integrate_ruling(c.structure, surf, starts[i], c.rule.length, c.rule.step, c.rule.rho), {}};
        } catch (const CharacteristicEncountered& e) {
            return Run{{e.partial(), 0.0, 0.0}, e.what()};
        }
    });
    bool pass = !runs.empty();
    double max_phi = 0.0, max_kc = 0.0;
    ojson curves = ojson::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const Run& run = runs[i];
        const std::string file = "curve_" + std::to_string(i) + ".csv";
        write_curve(dir / file, c, run.result.polyline);
        ojson rec;
        rec["file"] = file;
        rec["start"] = to_json(starts[i]);
        rec["points"] = run.result.polyline.size();
        rec["max_abs_phi"] = run.result.max_phi;
        rec["max_curvature_error"] = run.result.max_curvature_error;
        if (!run.error.empty()) {
            rec["error"] = run.error;
            pass = false;
        }
        max_phi = std::max(max_phi, run.result.max_phi);
        max_kc = std::max(max_kc, run.result.max_curvature_error);
        curves.push_back(std::move(rec));
    }
    pass = pass && max_phi < tol && max_kc < tol;
    CommandResult out{header("rule", c), pass, {}};
    ojson& s = out.report["summary"];
    s["curves"] = runs.size();
    s["length"] = c.rule.length;
    s["step"] = c.rule.step;
    s["rho"] = c.rule.rho;
    s["tol"] = tol;
    s["max_abs_phi"] = max_phi;
    s["max_curvature_error"] = max_kc;
    out.report["pass"] = pass;
    out.report["curves"] = std::move(curves);
    out.report["skipped"] = std::move(skipped);
    out.summary = std::to_string(runs.size()) + " curves, max |phi| " + g17(max_phi) + ", max |k_c - rho| " +
                  g17(max_kc);
    return out;
}

CommandResult cone(const RunConfig& c, const std::filesystem::path&)
{
    if (!c.structure.flow) {
        throw ConfigError("structure '" + c.structure.name + "' has no dilation");
    }
    const DilatingFlow& flow = *c.structure.flow;
    const bool has_patch = c.patch.has_value();
    const bool has_scaling = !c.cone.lambdas.empty() && !c.cone.box.empty();
    if (!has_patch && !has_scaling) {
        throw ConfigError("cone-volume needs a patch or cone_volume.lambdas with cone_volume.box");
    }
    const double q = homogeneous_dimension(c.structure);
    CommandResult out{header("cone-volume", c), true, {}};
    ojson& s = out.report["summary"];
    s["homogeneous_dimension"] = q;
    s["quadrature"] = c.cone.quadrature;
    if (has_patch) {
        const ConeVolume v = cone_volume(c.structure, flow, c.require_surface(), *c.patch, c.cone.quadrature);
        const double diff = std::abs(v.via_mu - v.via_solid);
        const bool agree = diff <= c.cone.rel_tol * std::abs(v.via_solid) || diff < 1e-12;
        s["via_mu"] = v.via_mu;
        s["via_solid"] = v.via_solid;
        s["abs_difference"] = diff;
        s["rel_tol"] = c.cone.rel_tol;
        s["agree"] = agree;
        out.pass = out.pass && agree;
        out.summary = "mu " + g17(v.via_mu) + ", solid " + g17(v.via_solid);
    }
    if (has_scaling) {
        const double tol = tol_or(c, 1e-6);
        ojson checks = ojson::array();
        double worst = 0.0;
        for (const double lambda : c.cone.lambdas) {
            const VolumeScaling v = volume_scaling_check(c.structure, flow, c.cone.box, lambda, c.cone.quadrature);
            const double rel = std::abs(v.ratio - v.expected) / std::abs(v.expected);
            worst = std::max(worst, rel);
            checks.push_back({{"lambda", lambda}, {"ratio", v.ratio}, {"expected", v.expected}, {"rel_error", rel}});
        }
        s["scaling"] = std::move(checks);
        s["scaling_tol"] = tol;
        out.pass = out.pass && worst < tol;
        out.summary += (out.summary.empty() ? "" : ", ") + std::string("Q ") + g17(q) + ", worst scaling error " +
                       g17(worst);
    }
    out.report["pass"] = out.pass;
    return out;
}

CommandResult convexity(const RunConfig& c, const std::filesystem::path& dir)
{
    const Hypersurface& surf = c.require_surface();
    ojson skipped = ojson::array();
    const auto points = start_points(c, c.convexity.points, skipped);
    ConvexityOptions opts;
    opts.length = c.convexity.length;
    opts.directions = c.convexity.directions;
    opts.step = c.convexity.step;
    opts.side_tol = c.convexity.side_tol;
    opts.seed = c.seed;
    const auto reports = parallel_map(points.size(), [&](std::size_t i) {
        return hg_convexity_test(c.structure, surf, points[i], opts);
    });
    bool pass = !reports.empty();
    std::size_t curve_index = 0;
    std::map<std::string, std::size_t> histogram;
    ojson records = ojson::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const ConvexityReport& r = reports[i];
        const std::string verdict(to_string(r.verdict));
        ++histogram[verdict];
        if (c.convexity.expect && verdict != *c.convexity.expect) {
            pass = false;
        }
        ojson rec;
        rec["point"] = to_json(points[i]);
        rec["verdict"] = verdict;
        rec["min_c0"] = r.min_c0;
        rec["max_c0"] = r.max_c0;
        rec["side_tol"] = r.side_tol;
        ojson traces = ojson::array();
        for (const DirectionTrace& t : r.traces) {
            const std::string file = "curve_" + std::to_string(curve_index++) + ".csv";
            write_curve(dir / file, c, t.curve);
            traces.push_back({{"file", file},
                              {"direction", to_json(t.direction)},
                              {"min_c0", t.min_c0},
                              {"max_c0", t.max_c0},
                              {"truncated", t.truncated}});
        }
        rec["traces"] = std::move(traces);
        records.push_back(std::move(rec));
    }
    CommandResult out{header("convexity", c), pass, {}};
    ojson& s = out.report["summary"];
    s["points"] = reports.size();
    s["length"] = opts.length;
    s["directions"] = opts.directions;
    s["step"] = opts.step;
    if (c.convexity.expect) {
        s["expect"] = *c.convexity.expect;
    }
    s["verdicts"] = ojson::object();
    std::string line;
    for (const auto& [name, count] : histogram) {
        s["verdicts"][name] = count;
        line += (line.empty() ? "" : ", ") + name + " " + std::to_string(count);
    }
    out.report["pass"] = pass;
    out.report["records"] = std::move(records);
    out.report["skipped"] = std::move(skipped);
    out.summary = line.empty() ? "no points" : line;
    return out;
}

CommandResult perimeter_cmd(const RunConfig& c, const std::filesystem::path&)
{
    const double p = perimeter(c.structure, c.require_surface(), c.require_patch(), c.perimeter.quadrature);
    const double tol = tol_or(c, 1e-9);
    bool pass = std::isfinite(p);
    CommandResult out{header("perimeter", c), pass, {}};
    ojson& s = out.report["summary"];
    s["perimeter"] = p;
    s["quadrature"] = c.perimeter.quadrature;
    if (c.perimeter.expected) {
        const double err = std::abs(p - *c.perimeter.expected);
        s["expected"] = *c.perimeter.expected;
        s["abs_error"] = err;
        s["tol"] = tol;
        out.pass = pass && err < tol;
    }
    out.report["pass"] = out.pass;
    out.summary = "perimeter " + g17(p);
    return out;
}

using Handler = std::function<CommandResult(const RunConfig&, const std::filesystem::path&)>;

const std::vector<std::pair<std::string, Handler>>& handlers()
{
    static const std::vector<std::pair<std::string, Handler>> table{
        {"check-rigidity", check_rigidity}, {"curvature-report", curvature_report},
        {"verify", verify},                 {"rule", rule},
        {"cone-volume", cone},              {"convexity", convexity},
        {"perimeter", perimeter_cmd},
    };
    return table;
}

} // namespace

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, handler] : handlers()) {
            out.push_back(name);
        }
        return out;
    }();
    return names;
}

CommandResult run_command(std::string_view name, const RunConfig& config, const std::filesystem::path& out)
{
    for (const auto& [n, handler] : handlers()) {
        if (n == name) {
            return handler(config, out);
        }
    }
    throw ConfigError("unknown command '" + std::string(name) + "'");
}

void write_report(const nlohmann::ordered_json& report, const std::filesystem::path& out)
{
    std::ofstream f(out / "report.json");
    if (!f) {
        throw Error("cannot write '" + (out / "report.json").string() + "'");
    }
    f << report.dump(2) << '\n';
}

} // namespace subrig::app
