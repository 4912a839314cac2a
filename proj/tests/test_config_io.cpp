#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wgqed/config.hpp"
#include "wgqed/io.hpp"

using namespace wgqed;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string config_error(const json& doc)
{
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

fs::path scratch(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("wgqed_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("minimal configuration")
{
    const auto cfg = parse_config(json::parse(R"({
        "emitters": {"count": 2, "spacing": 0.125},
        "pulse": {"statistics": "fock", "photons": 1}
    })"));
    CHECK(cfg.scenario.array.count() == 2);
    CHECK(cfg.scenario.pulse.photons == 1);
    CHECK(cfg.scenario.integrator.rtol == 1e-8);
    CHECK(cfg.overwrite == OverwritePolicy::fail);
    CHECK(!cfg.sweep);
}

TEST_CASE("every key is checked")
{
    CHECK(config_error(json::parse(R"({"emitters": {"count": 1, "spcing": 1}})"))
              .find("emitters.spcing") != std::string::npos);
    CHECK(config_error(json::parse(R"({"emitters": {"count": "two"}})"))
              .find("emitters.count") != std::string::npos);
    CHECK(config_error(json::parse(R"({"emitters": {"count": 1},
                                       "pulse": {"statistics": "squeezed"}})"))
              .find("pulse.statistics") != std::string::npos);
    CHECK(config_error(json::parse(R"({"emitters": {"count": 1},
                                       "pulse": {"statistics": "fock", "photons": 1,
                                                 "mean_photons": 2}})"))
              .find("pulse.mean_photons") != std::string::npos);
    CHECK(config_error(json::parse(R"({"emitters": {"count": 1}, "integrator": {"rtol": -1}})"))
              .find("integrator") != std::string::npos);
    CHECK(config_error(json::parse(R"({"emitters": {"count": 1}, "colour": 3})"))
              .find("colour") != std::string::npos);
    CHECK(!config_error(json::parse(R"({"pulse": {"statistics": "vacuum"}})")).empty());
}

TEST_CASE("emitter forms")
{
    const auto phys = parse_config(json::parse(R"({
        "emitters": {"positions": [0, 0.25], "lambda_a": 1.0, "gamma_ng": [0.1, 0.1],
                     "nonguided": true, "dipole_kernel": "standard", "excited": [2]},
        "pulse": {"statistics": "vacuum"}
    })"));
    CHECK(phys.scenario.array.mode == PositionMode::physical);
    CHECK(phys.scenario.lambda.include_nonguided);
    CHECK(phys.scenario.lambda.kernel == DipoleKernel::standard);
    CHECK(phys.scenario.initially_excited == std::vector<int>{1});

    const auto expl = parse_config(json::parse(R"({
        "emitters": {"z": [0, 0, 2], "phase": [0, 1, 2],
                     "modulation": {"kind": "sinusoid", "amplitude": 10, "frequency": 10}}
    })"));
    CHECK(expl.scenario.array.phase[2] == 2.0);
    CHECK(modulation_at(expl.scenario.array, 1, pi / 20) == doctest::Approx(10.0));

    CHECK(config_error(json::parse(R"({"emitters": {"count": 2, "excited": [3]}})"))
              .find("emitters.excited") != std::string::npos);
    CHECK(!config_error(json::parse(R"({"emitters": {"count": 2, "z": [0, 1], "phase": [0, 1]}})"))
               .empty());
}

TEST_CASE("sweep section")
{
    const auto cfg = parse_config(json::parse(R"({
        "emitters": {"count": 1},
        "pulse": {"statistics": "coherent", "mean_photons": 1},
        "sweep": {"axis": "detuning", "range": {"start": -3, "stop": 3, "count": 61}},
        "workers": 4
    })"));
    REQUIRE(cfg.sweep);
    CHECK(cfg.sweep->values.size() == 61);
    CHECK(cfg.sweep->values[30] == doctest::Approx(0.0));
    CHECK(cfg.sweep->plane_wave_width == 0.02);
    CHECK(cfg.workers == 4);
    CHECK(config_error(json::parse(R"({"emitters": {"count": 1},
        "pulse": {"statistics": "coherent", "mean_photons": 1},
        "sweep": {"values": [1], "range": {"start": 0, "stop": 1, "count": 2}}})"))
              .find("sweep") != std::string::npos);
}

TEST_CASE("syntax errors carry line and column")
{
    try {
        parse_json_text("{\n  \"a\": 1,\n  \"b\": ]\n}", "x.json");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("x.json:3:") != std::string::npos);
    }
}

TEST_CASE("spectrum files resolve relative to the configuration")
{
    const auto dir = scratch("spectrum");
    {
        std::ofstream f(dir / "spec.txt");
        for (int i = -300; i <= 300; ++i) f << i * 0.02 << ' ' << std::exp(-0.5 * i * i * 4e-4) << " 0\n";
        std::ofstream c(dir / "run.json");
        c << R"({"emitters": {"count": 1},
                 "pulse": {"statistics": "fock", "photons": 1, "shape": "tabulated",
                           "spectrum_file": "spec.txt"}})";
    }
    const auto cfg = load_config((dir / "run.json").string());
    CHECK(std::holds_alternative<TabulatedSpectrum>(cfg.scenario.pulse.shape));
    CHECK(cfg.scenario.pulse.width() == doctest::Approx(1.0).epsilon(1e-3));
    fs::remove_all(dir);
}

TEST_CASE("trajectory and sweep tables")
{
    ScatterRecord rec;
    rec.t = {0.0, 0.5};
    rec.populations = Eigen::MatrixXd(2, 2);
    rec.populations << 0, 0, 0.125, 1.0 / 3;
    rec.r = {0, 1e-20};
    rec.l = {-0.0, 2};
    CHECK(trajectory_csv(rec) ==
          "t,P_e_1,P_e_2,r,l\n0,0,0,0,0\n0.5,0.125,0.333333333333,1e-20,2\n");

    SweepTable t;
    SweepRow row;
    row.value = -1;
    row.R = 0.25;
    row.T = 0.75;
    row.convergence_defect = std::nan("");
    row.status = "stiffness: step, size";
    t.rows.push_back(row);
    CHECK(sweep_csv(t) == "value,R,T,n_R,defect,convergence_defect,status\n"
                          "-1,0.25,0.75,0,0,nan,stiffness: step; size\n");
}

TEST_CASE("overwrite policies")
{
    const auto dir = scratch("policy");
    OutputWriter fail(dir.string(), OverwritePolicy::fail);
    fail.write("a.txt", "one");
    CHECK_THROWS_AS(fail.write("a.txt", "one"), ConfigError);
    CHECK_THROWS_AS(fail.preflight({"a.txt"}), ConfigError);

    OutputWriter verify(dir.string(), OverwritePolicy::verify);
    CHECK_NOTHROW(verify.write("a.txt", "one"));
    CHECK_THROWS_AS(verify.write("a.txt", "two"), IntegrityError);
    CHECK_NOTHROW(verify.write("a.txt", "two", true)); // metadata is replaced
    CHECK(slurp(dir / "a.txt") == "two");

    OutputWriter over(dir.string(), OverwritePolicy::overwrite);
    over.write("a.txt", "three");
    CHECK(slurp(dir / "a.txt") == "three");
    fs::remove_all(dir);
}

TEST_CASE("manifest echoes the configuration and resolved settings")
{
    const json doc = json::parse(R"({"name": "m", "emitters": {"count": 1},
                                     "pulse": {"statistics": "coherent", "mean_photons": 1}})");
    const auto cfg = parse_config(doc);
    const json m = manifest_json(cfg, "wgqed scatter --config m.json");
    CHECK(m["config"] == doc);
    CHECK(m["version"] == WGQED_VERSION);
    CHECK(m["integrator"]["rtol"] == 1e-8);
    CHECK(m["integrator"]["t_final_cap"].get<double>() > 0);
    CHECK(m["command"] == "wgqed scatter --config m.json");
}
