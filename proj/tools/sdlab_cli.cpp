#include <cmath>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sdlab/experiment.hpp"

using namespace sdlab;

namespace {

struct Common {
    std::string config;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    std::int64_t resolution = 0;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "config JSON file");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&c](const std::uint64_t& s) { c.seed = s, c.seed_set = true; }, "RNG seed");
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--resolution", c.resolution, "grid size n (power of two)");
}

ExperimentConfig load(const Common& c, const std::string& experiment, const std::string& op) {
    nlohmann::json j = nlohmann::json::object();
    if (!c.config.empty()) {
        std::ifstream f(c.config);
        if (!f) throw Error("cannot read config: " + c.config);
        j = nlohmann::json::parse(f);
    }
    if (!experiment.empty()) {
        j["experiment"] = experiment;
        if (!j.contains("operator")) j["operator"] = op;
    }
    if (c.seed_set) j["seed"] = c.seed;
    if (!c.out.empty()) j["out"] = c.out;
    if (c.resolution > 0) j["resolution"] = c.resolution;
    return ExperimentConfig::from_json(j);
}

int execute(const ExperimentConfig& cfg) {
    ResultBundle b = run(cfg);
    for (const auto& f : b.files) std::cout << f << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse domination laboratory"};
    app.require_subcommand(1);
    Common c;

    auto* run_cmd = app.add_subcommand("run", "run the experiment named in the config");
    add_common(run_cmd, c);
    auto* region = app.add_subcommand("region", "exponent region scan");
    add_common(region, c);
    auto* battery = app.add_subcommand("battery", "necessity battery");
    add_common(battery, c);
    auto* bfun = app.add_subcommand("bfun", "B-functional of a symbol");
    add_common(bfun, c);
    auto* weights = app.add_subcommand("weights", "power-weight constants");
    add_common(weights, c);
    auto* dim = app.add_subcommand("dim", "Minkowski dimension of a sample set");
    std::string set = "cantor";
    int depth = 8;
    dim->add_option("--set", set, "cantor | uniform | single")->check(CLI::IsMember({"cantor", "uniform", "single"}));
    dim->add_option("--depth", depth, "Cantor depth or log2 of the uniform grid size");

    CLI11_PARSE(app, argc, argv);
    try {
        if (run_cmd->parsed()) {
            if (c.config.empty()) throw Error("run needs --config");
            return execute(load(c, "", ""));
        }
        if (region->parsed()) return execute(load(c, "region", "radon"));
        if (battery->parsed()) return execute(load(c, "battery", "radon"));
        if (bfun->parsed()) return execute(load(c, "bfunctional", "bochner_riesz"));
        if (weights->parsed()) return execute(load(c, "weights", "identity"));
        if (dim->parsed()) {
            std::vector<double> E, scales;
            if (set == "cantor") {
                E = cantor_sample(depth);
                for (int k = 1; k <= depth; ++k) scales.push_back(std::pow(3.0, -k));
            } else if (set == "uniform") {
                for (int i = 0; i <= (1 << depth); ++i) E.push_back(1.0 + std::ldexp(i, -depth));
                for (int k = 1; k <= depth; ++k) scales.push_back(std::ldexp(1.0, -k));
            } else {
                E = {1.0};
                for (int k = 1; k <= depth; ++k) scales.push_back(std::ldexp(1.0, -k));
            }
            std::cout << format_double(minkowski_dim(E, scales)) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
