#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lipsmooth/experiment.hpp"

namespace {

const std::map<std::string, std::string>& stage_blurbs() {
    static const std::map<std::string, std::string> m = {
        {"suppart-check", "sup-partition of unity: coverage, decay, equi-Lipschitz, quadrature"},
        {"core-approx", "bounded core approximant: sup error, constants, Lipschitz"},
        {"tube-check", "tube map: chart round trips, readout tracking, sandwich membership"},
        {"crowns", "crown partition and unbounded assembly bounds"},
        {"lasry-lions", "discrete Moreau envelopes and the regularized surrogate"},
        {"hilbert-e2e", "end-to-end Lipschitz smoothing on a box grid"},
        {"report", "run every pipeline and write one combined report"},
    };
    return m;
}

nlohmann::ordered_json load_config(const std::string& path, const std::string& stage) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("config_file_readable: cannot open " + path);
    nlohmann::ordered_json config;
    try {
        config = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config_valid_json: ") + e.what());
    }
    if (!config.is_object()) throw std::invalid_argument("config_is_object: top level");
    if (config.contains("stage")) {
        if (!config.at("stage").is_string() || config.at("stage").get<std::string>() != stage)
            throw std::invalid_argument("config_stage_matches: config names stage '" +
                                        config.at("stage").dump() + "' but the subcommand is '" +
                                        stage + "'");
        config.erase("stage");
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lipschitz-to-smooth approximation pipelines: build, measure, report"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int quad_points = 0;
    double grid_h = 0.0;

    std::vector<std::string> names = lipsmooth::stage_names();
    names.push_back("report");
    for (const std::string& name : names) {
        CLI::App* sub = app.add_subcommand(name, stage_blurbs().at(name));
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--seed", seed, "master seed (overrides the config)");
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        if (name == "suppart-check" || name == "core-approx" || name == "report")
            sub->add_option("--quad-points", quad_points,
                            "layer-cake quadrature nodes (overrides the config)");
        if (name == "lasry-lions" || name == "hilbert-e2e" || name == "report")
            sub->add_option("--grid-h", grid_h, "grid spacing (overrides the config)");
    }
    CLI11_PARSE(app, argc, argv);
    CLI::App* sub = app.get_subcommands().front();

    try {
        auto given = [sub](const std::string& flag) {
            const CLI::Option* opt = sub->get_option_no_throw(flag);
            return opt != nullptr && opt->count() > 0;
        };
        nlohmann::ordered_json config = nlohmann::ordered_json::object();
        if (given("--config")) config = load_config(config_path, sub->get_name());
        if (given("--seed")) config["seed"] = seed;
        if (given("--quad-points")) config["quad_points"] = quad_points;
        if (given("--grid-h")) config["grid_h"] = grid_h;

        const lipsmooth::ExperimentReport rep = lipsmooth::run_stage(sub->get_name(), config);
        lipsmooth::write_outputs(rep, out_dir);

        for (const lipsmooth::MetricRow& r : rep.metrics)
            std::printf("[%s] %s/%s  value=%s  bound=%s\n", r.pass ? "PASS" : "FAIL",
                        r.stage.c_str(), r.metric.c_str(),
                        lipsmooth::format_double(r.value).c_str(),
                        lipsmooth::format_double(r.bound).c_str());
        std::printf("%s  (%s/metrics.csv, %s/report.json, %s/timings.csv)\n",
                    rep.pass ? "PASS" : "FAIL", out_dir.c_str(), out_dir.c_str(),
                    out_dir.c_str());
        return rep.pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
