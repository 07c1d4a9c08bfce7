#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "zerocurve/grid.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
using zerocurve::GridFunction;
using zerocurve::HamiltonianGrid;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("zerocurve_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    fs::path out = work_dir() / "stdout.txt";
    std::string cmd = env_prefix + std::string(ZEROCURVE_CLI_PATH) + " " + args + " > " +
                      out.string() + " 2> " + (work_dir() / "stderr.txt").string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.stdout_text = ss.str();
    return r;
}

std::string write_zero_potential() {
    fs::path p = work_dir() / "zero.csv";
    zerocurve::write_grid_function(
        p.string(),
        GridFunction::sample(-8.0, 0.01, 1601, [](double) { return 0.0; }));
    return p.string();
}

std::string write_soliton_potential() {
    fs::path p = work_dir() / "soliton.csv";
    zerocurve::write_grid_function(
        p.string(), GridFunction::sample(-15.0, 0.025, 1201, [](double x) {
            double s = 1.0 / std::cosh(x);
            return -2.0 * s * s;
        }));
    return p.string();
}

std::string write_hamiltonian(bool degenerate) {
    fs::path p = work_dir() / (degenerate ? "H_degenerate.csv" : "H.csv");
    zerocurve::write_hamiltonian_grid(
        p.string(),
        HamiltonianGrid::sample(
            -1.0, 1e-3, 2001, [](double x) { return 1.0 + x * x; },
            [](double) { return 0.0; },
            [degenerate](double x) { return degenerate && std::abs(x) < 5e-4 ? 0.0 : 1.0; }));
    return p.string();
}

} // namespace

TEST_CASE("hierarchy gen reproduces the classical members") {
    auto r1 = run_cli("hierarchy gen --n 1 --const C1=1 --const Cstar=0");
    REQUIRE(r1.exit_code == 0);
    json j1 = json::parse(r1.stdout_text);
    CHECK(j1["flow_rhs"] == "-1/4*V_xxx + 3/2*V*V_x");
    CHECK(j1["pass"] == true);
    CHECK(j1["schema"] == 1);
    CHECK(j1["C"]["0"] == "1/2*V");
    CHECK(j1["C"]["1"] == "1");

    auto r0 = run_cli("hierarchy gen --n 0 --const C0=1");
    REQUIRE(r0.exit_code == 0);
    CHECK(json::parse(r0.stdout_text)["flow_rhs"] == "V_x");

    auto rv = run_cli("hierarchy verify --n 2");
    REQUIRE(rv.exit_code == 0);
    CHECK(json::parse(rv.stdout_text)["residuals"]["zero_curvature"] == true);
}

TEST_CASE("reports are byte-identical across reruns") {
    auto a = run_cli("hierarchy gen --n 2");
    auto b = run_cli("hierarchy gen --n 2");
    CHECK(a.stdout_text == b.stdout_text);
    CHECK(!a.stdout_text.empty());
}

TEST_CASE("degree cap and bad input map to exit code 1") {
    CHECK(run_cli("hierarchy gen --n 9").exit_code == 1);
    CHECK(run_cli("hierarchy gen --n 2 --max-n 9").exit_code == 0);
    CHECK(run_cli("cs obstruct --grid does_not_exist.csv --n 2").exit_code == 1);
    CHECK(run_cli("hierarchy gen").exit_code != 0);
}

TEST_CASE("cs check accepts the zero generator and flags a broken one") {
    fs::path good = work_dir() / "B_zero.json";
    std::ofstream(good) << R"({"A": {}, "C": {}, "D": {}})";
    auto r = run_cli("cs check --b " + good.string() + " --flow zero");
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.stdout_text)["pass"] == true);

    fs::path bad = work_dir() / "B_bad.json";
    std::ofstream(bad) << R"({"A": {"2": "g*K"}, "C": {"2": "h*K"}, "D": {"2": "f*K"}})";
    auto rb = run_cli("cs check --b " + bad.string() + " --flow zero");
    CHECK(rb.exit_code == 2);
    json jb = json::parse(rb.stdout_text);
    CHECK(jb["pass"] == false);
    // the z^2 coefficient of the consistency residual is the K ODE
    CHECK(jb["consistency_residual"].contains("2"));
}

TEST_CASE("cs obstruct reports K and degenerate grids") {
    auto r = run_cli("cs obstruct --grid " + write_hamiltonian(false) + " --n 2");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.stdout_text);
    CHECK(j["pass"] == true);
    CHECK(j["K_profile"].size() == 2001);
    double mid = j["K_profile"][1000].get<double>();
    CHECK(mid == Catch::Approx(1.0).epsilon(1e-6)); // K(0) = 1/sqrt(1*1)

    auto rd = run_cli("cs obstruct --grid " + write_hamiltonian(true) + " --n 2");
    CHECK(rd.exit_code == 2);
    json jd = json::parse(rd.stdout_text);
    CHECK(jd["pass"] == false);
    CHECK(jd["degenerate_points"].size() == 1);
    CHECK(jd["degenerate_points"][0].get<int>() == 1000);
}

TEST_CASE("cs convert on the zero potential is exact") {
    auto r = run_cli("cs convert --potential " + write_zero_potential());
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.stdout_text);
    CHECK(j["sup_norm_det_residual"].get<double>() == 0.0);
    CHECK(j["max_wronskian_error"].get<double>() < 1e-12);
}

TEST_CASE("sim kdv leaves the zero potential untouched") {
    fs::path out = work_dir() / "kdv_out.csv";
    auto r = run_cli("sim kdv --potential " + write_zero_potential() + " --t 1 --out " +
                     out.string());
    REQUIRE(r.exit_code == 0);
    auto evolved = zerocurve::read_grid_function(out.string());
    for (double v : evolved.values) CHECK(v == 0.0);
    CHECK(json::parse(r.stdout_text)["mass_drift"].get<double>() == 0.0);
}

TEST_CASE("sim isospec keeps the soliton bound state") {
    auto r = run_cli("sim isospec --potential " + write_soliton_potential() +
                     " --t 0.2");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.stdout_text);
    CHECK(j["pass"] == true);
    CHECK(j["eigenvalues_before"][0].get<double>() == Catch::Approx(-1.0).margin(0.01));
    CHECK(j["max_relative_drift"].get<double>() < 0.01);
}

TEST_CASE("sim cocycle composes the constant-B exponential") {
    auto r = run_cli("sim cocycle --t1 0.1 --t2 0.2 --member 1");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.stdout_text);
    CHECK(j["residual"].get<double>() < 1e-6);

    // an impossible tolerance fails, and the CI override rescues it
    CHECK(run_cli("sim cocycle --t1 0.1 --t2 0.2 --member 1 --tol 1e-30").exit_code == 2);
    CHECK(run_cli("sim cocycle --t1 0.1 --t2 0.2 --member 1 --tol 1e-30",
                  "ZEROCURVE_TOL_OVERRIDE=1e30 ")
              .exit_code == 0);
}

TEST_CASE("sim mfun samples a Herglotz pair with the shift property") {
    auto r = run_cli("sim mfun --potential " + write_zero_potential() +
                     " --z 0,1 --cutoff 3 --shift 0.5");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.stdout_text);
    CHECK(j["herglotz_ok"] == true);
    CHECK(j["shift_defect"].get<double>() < 1e-5);
    // free m_+ = i sqrt(i)
    CHECK(j["m_plus"][0].get<double>() == Catch::Approx(-std::sqrt(0.5)).margin(1e-6));
    CHECK(j["m_plus"][1].get<double>() == Catch::Approx(std::sqrt(0.5)).margin(1e-6));
}
