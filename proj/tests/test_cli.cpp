#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "config.hpp"
#include "subrig/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kData = SUBRIG_TEST_DATA;

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("subrig_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

int run_tool(const std::string& command, const std::string& config, const fs::path& out, const std::string& extra = "")
{
    const std::string line = std::string(SUBRIG_EXE) + " " + command + " --config " + (kData / config).string() +
                             " --output " + out.string() + " " + extra + " > " + (out.string() + ".log") + " 2>&1";
    const int status = std::system(line.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

json report(const fs::path& out)
{
    return json::parse(slurp(out / "report.json"));
}

} // namespace

TEST_CASE("check-rigidity exit codes")
{
    const fs::path a = scratch("rigid_pass");
    CHECK(run_tool("check-rigidity", "rigidity_heisenberg.json", a) == 0);
    CHECK(report(a)["pass"] == true);
    CHECK(report(a)["summary"]["max_residual"].get<double>() < 1e-10);

    const fs::path b = scratch("rigid_fail");
    CHECK(run_tool("check-rigidity", "rigidity_counterexample.json", b) == 2);
    const json r = report(b);
    CHECK(r["pass"] == false);
    CHECK(std::abs(r["summary"]["max_residual"].get<double>() - 1.0) < 1e-10);
}

TEST_CASE("configuration errors exit with 1")
{
    const fs::path out = scratch("errors");
    CHECK(run_tool("check-rigidity", "malformed.json", out) == 1);
    CHECK(run_tool("curvature-report", "unknown_key.json", out) == 1);
    CHECK(run_tool("check-rigidity", "does_not_exist.json", out) == 1);
    CHECK(run_tool("no-such-command", "rigidity_heisenberg.json", out) == 1);
    CHECK(run_tool("perimeter", "rigidity_heisenberg.json", out) == 1);
    CHECK(run_tool("check-rigidity", "rigidity_heisenberg.json", out, "--seed notanumber") == 1);
}

TEST_CASE("reports are byte-identical across runs")
{
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    REQUIRE(run_tool("curvature-report", "curvature_cubic.json", a) == 0);
    REQUIRE(run_tool("curvature-report", "curvature_cubic.json", b) == 0);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "grid.csv") == slurp(b / "grid.csv"));

    const fs::path c = scratch("det_c");
    REQUIRE(run_tool("curvature-report", "curvature_cubic.json", c, "--seed 4") == 0);
    CHECK(report(a)["fingerprint"] != report(c)["fingerprint"]);
}

TEST_CASE("curvature-report")
{
    const fs::path hxr = scratch("curv_hxr");
    CHECK(run_tool("curvature-report", "curvature_hxr.json", hxr) == 0);
    CHECK(report(hxr)["summary"]["max_abs_H"].get<double>() < 1e-8);

    const fs::path t = scratch("curv_t");
    CHECK(run_tool("curvature-report", "curvature_t_origin.json", t) == 0);
    const json r = report(t);
    CHECK(r["summary"]["characteristic"] == 1);
    CHECK(r["records"][0]["characteristic"] == true);
    CHECK(r["records"][1]["characteristic"] == false);
    const std::string csv = slurp(t / "grid.csv");
    CHECK(csv.rfind("x,y,t,hnorm,characteristic,H,kappa_1,classification\n", 0) == 0);
    CHECK(csv.find("Characteristic") != std::string::npos);

    const fs::path cubic = scratch("curv_cubic");
    CHECK(run_tool("curvature-report", "curvature_cubic.json", cubic) == 0);
    CHECK(report(cubic)["summary"]["minimal"] == true);
}

TEST_CASE("verify")
{
    const fs::path a = scratch("verify_sin");
    CHECK(run_tool("verify", "verify_sin.json", a) == 0);
    CHECK(report(a)["summary"]["minimal"] == true);

    const fs::path b = scratch("verify_cyl");
    CHECK(run_tool("verify", "verify_cylinder.json", b) == 0);
    const json r = report(b);
    CHECK(r["summary"]["cmc"] == true);
    CHECK(std::abs(std::abs(r["summary"]["mean_H"].get<double>()) - 1.0) < 1e-4);

    const fs::path c = scratch("verify_not_minimal");
    CHECK(run_tool("verify", "verify_cylinder_minimal.json", c) == 2);
    CHECK(report(c)["summary"]["minimal"] == false);
}

TEST_CASE("rule writes one CSV per curve")
{
    const fs::path out = scratch("rule");
    CHECK(run_tool("rule", "rule_plane.json", out) == 0);
    CHECK(fs::exists(out / "curve_0.csv"));
    CHECK(fs::exists(out / "curve_1.csv"));
    CHECK_FALSE(fs::exists(out / "curve_2.csv"));
    const json r = report(out);
    CHECK(r["summary"]["max_abs_phi"].get<double>() < 1e-5);

    const fs::path cyl = scratch("rule_cyl");
    CHECK(run_tool("rule", "rule_cylinder.json", cyl) == 0);
    CHECK(report(cyl)["summary"]["max_curvature_error"].get<double>() < 1e-5);

    const fs::path coarse = scratch("rule_coarse");
    CHECK(run_tool("rule", "rule_plane.json", coarse, "--step 0.01") == 0);
    CHECK(report(coarse)["config"]["rule"]["step"] == 0.01);
}

TEST_CASE("cone-volume")
{
    const fs::path out = scratch("cone");
    CHECK(run_tool("cone-volume", "cone_plane.json", out) == 0);
    const json s = report(out)["summary"];
    CHECK(s["homogeneous_dimension"] == 4.0);
    CHECK(std::abs(s["via_mu"].get<double>() - 0.18) < 1e-12);
    CHECK(s["scaling"].size() == 2);
}

TEST_CASE("convexity")
{
    const fs::path plane = scratch("conv_plane");
    CHECK(run_tool("convexity", "convexity_plane.json", plane) == 0);
    // One horizontal tangent direction per side: two curves per point.
    CHECK(fs::exists(plane / "curve_3.csv"));
    CHECK_FALSE(fs::exists(plane / "curve_4.csv"));

    const fs::path cyl = scratch("conv_cyl");
    CHECK(run_tool("convexity", "convexity_cylinder.json", cyl) == 0);
    CHECK(report(cyl)["records"][0]["verdict"] == "OneSidedNegative");
}

TEST_CASE("perimeter")
{
    const fs::path out = scratch("perimeter");
    CHECK(run_tool("perimeter", "perimeter_disk.json", out) == 0);
    CHECK(run_tool("perimeter", "perimeter_disk.json", out, "--quadrature 1") == 2);
}

TEST_CASE("config parsing")
{
    using subrig::ConfigError;
    using subrig::app::parse_config;
    const json base = {{"version", 1}, {"structure", {{"catalog", "heisenberg1"}}}};
    CHECK_NOTHROW(parse_config(base));

    json v = base;
    v["version"] = 2;
    CHECK_THROWS_AS(parse_config(v), ConfigError);

    json unknown = base;
    unknown["extra"] = 1;
    CHECK_THROWS_WITH_AS(parse_config(unknown), "unknown key 'extra'", ConfigError);

    json nested = base;
    nested["structure"]["m"] = 1;
    CHECK_THROWS_AS(parse_config(nested), ConfigError);

    json tol = base;
    tol["tol"] = -1.0;
    CHECK_THROWS_AS(parse_config(tol), ConfigError);

    json name = base;
    name["structure"]["catalog"] = "sphere";
    CHECK_THROWS_AS(parse_config(name), subrig::UnknownCatalogName);

    const auto a = parse_config(base, {.seed = 9});
    CHECK(a.seed == 9);
    CHECK(subrig::app::fingerprint(a.source) != subrig::app::fingerprint(base));
}
