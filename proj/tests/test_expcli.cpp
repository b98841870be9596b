#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "sdlab/experiment.hpp"

using namespace sdlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("sdlab_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("dominate experiment") {
    const fs::path out = scratch("dominate");
    nlohmann::json j = {{"experiment", "dominate"}, {"operator", "identity"}, {"resolution", 512},
                        {"scales", {-3, 0}},        {"trials", 1},            {"seed", 5},
                        {"out", out.string()}};
    ResultBundle b = run(ExperimentConfig::from_json(j));
    CHECK(b.report.at("certificates").size() == 1);
    CHECK(fs::exists(out / "dominate.csv"));
    CHECK(fs::exists(out / "dominate.json"));
    CHECK(fs::exists(out / "dominate.svg"));
    const std::string first = slurp(out / "dominate.csv");

    j["trials"] = 3;
    const std::string a = slurp((run(ExperimentConfig::from_json(j)), out / "dominate.csv"));
    const std::string c = slurp((run(ExperimentConfig::from_json(j)), out / "dominate.csv"));
    CHECK(a == c);
    CHECK(a.rfind(first.substr(0, first.size() - 1), 0) == 0);
    fs::remove_all(out);
}

TEST_CASE("battery experiment matches the direct call") {
    const fs::path out = scratch("battery");
    nlohmann::json j = {{"experiment", "battery"},
                        {"operator", "radon"},
                        {"resolutions", {512, 1024, 2048}},
                        {"exponents", {{1.5, 2.0}}},
                        {"out", out.string()}};
    ResultBundle b = run(ExperimentConfig::from_json(j));
    BatteryReport direct = necessity_battery(battery_factory("radon"), 1.0, 1.5, 2.0, {512, 1024, 2048});
    CHECK(b.report.at("battery") == direct.to_json());
    fs::remove_all(out);
}

TEST_CASE("configuration errors") {
    const fs::path out = scratch("errors");
    nlohmann::json bad_op = {{"experiment", "dominate"}, {"operator", "no_such_operator"}, {"out", out.string()}};
    CHECK_THROWS_AS(run(ExperimentConfig::from_json(bad_op)), Error);
    CHECK_THROWS_AS(ExperimentConfig::from_json({{"experiment", "no_such_experiment"}}), Error);

    fs::create_directories(out);
    std::ofstream(out / "plain_file") << "x";
    nlohmann::json j = {{"experiment", "dominate"}, {"operator", "identity"}, {"resolution", 256},
                        {"scales", {-2, 0}},        {"out", (out / "plain_file" / "sub").string()}};
    CHECK_THROWS_AS(run(ExperimentConfig::from_json(j)), Error);
    fs::remove_all(out);
}

TEST_CASE("region scan with one dilation") {
    RegionReport r = region_scan(hat_sigma(64), {1.0});
    int determined = 0;
    for (const auto& p : r.lebesgue) {
        if (p.verdict == "undetermined") continue;
        ++determined;
        CHECK(p.verdict == "stable");
    }
    CHECK(determined > 0);
    CHECK(r.violations == 0);
    CHECK(r.involution);
    for (double x : RegionOptions{}.axis)
        for (double y : RegionOptions{}.axis) {
            auto back = phi_map(phi_map({x, y}));
            CHECK(std::abs(back[0] - x) < 1e-15);
            CHECK(std::abs(back[1] - y) < 1e-15);
        }
}

TEST_CASE("weight constants") {
    GridSpec g(1, 1024, 8.0);
    GridFunction one = GridFunction::constant(g, 1.0);
    for (double t : {1.5, 2.0, 4.0})
        for (double s : {1.5, 3.0}) {
            WeightConstants w = weight_constants(one, t, s);
            CHECK(w.a_t == 1.0);
            CHECK(w.rh_s == 1.0);
        }
    GridFunction neg = one;
    neg.at(10) = 0.0;
    CHECK_THROWS_AS(weight_constants(neg, 2.0, 2.0), Error);

    std::vector<double> a2;
    for (std::int64_t n : {1024, 2048, 4096}) a2.push_back(weight_constants(power_weight(GridSpec(1, n, 8.0), 0.5), 2.0, 2.0).a_t);
    CHECK(ratio_stable(a2).finite);
    std::vector<double> near;
    for (double a : {0.5, 0.8, 0.95, 0.99}) near.push_back(weight_constants(power_weight(GridSpec(1, 8192, 8.0), a), 2.0, 2.0).a_t);
    for (std::size_t i = 1; i < near.size(); ++i) CHECK(near[i] > near[i - 1]);

    const CellMask all = CellMask::from_box(whole_grid(g));
    WeightedReport rep = weighted_check(identity_op(g, all), one, 2.0, 1.0, 4.0);
    CHECK(std::abs(rep.slack - 1.0) <= 0.05);
}

TEST_CASE("minkowski dimension") {
    std::vector<double> dyadic, triadic;
    for (int k = 1; k <= 8; ++k) dyadic.push_back(std::ldexp(1.0, -k)), triadic.push_back(std::pow(3.0, -k));
    CHECK(minkowski_dim({1.0}, dyadic) == doctest::Approx(0.0).epsilon(1e-12));
    std::vector<double> uniform;
    for (int i = 0; i <= 256; ++i) uniform.push_back(1.0 + i / 256.0);
    CHECK(std::abs(minkowski_dim(uniform, dyadic) - 1.0) <= 0.05);
    CHECK(std::abs(minkowski_dim(cantor_sample(8), triadic) - std::log(2.0) / std::log(3.0)) <= 0.05);
    CHECK_THROWS_AS(minkowski_dim({1.0}, {0.5, 0.25}), Error);
}
