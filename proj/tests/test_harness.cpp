#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "lipsmooth/experiment.hpp"
#include "lipsmooth/metrics.hpp"
#include "lipsmooth/registry.hpp"
#include "lipsmooth/rng.hpp"

using namespace lipsmooth;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path fresh_dir(const char* tag) {
    const auto p = std::filesystem::temp_directory_path() / tag;
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("default registry entries are honest and look up by name") {
    const IntervalBox box = IntervalBox::cube(2, -2.0, 2.0);
    const std::vector<RegistryFunction> reg = default_registry(box, 2026);
    REQUIRE(reg.size() == 6);

    const RegistryFunction& dp = registry_lookup(reg, "dist_point");
    CHECK(dp.exact_lip == 1.0);
    // zero exactly at its anchor (0.65 of the box span)
    CHECK(dp.evaluator(Vec{0.6, 0.6}) == doctest::Approx(0.0).epsilon(1e-15));

    CHECK(registry_lookup(reg, "norm").evaluator(Vec{3.0, 4.0}) == doctest::Approx(5.0));
    CHECK(registry_lookup(reg, "sawtooth").evaluator(Vec{0.25, 9.0}) == doctest::Approx(0.25));
    CHECK(registry_lookup(reg, "sawtooth").evaluator(Vec{0.75, -3.0}) == doctest::Approx(0.25));
    CHECK(registry_lookup(reg, "coord_max").evaluator(Vec{-1.0, 0.5}) == 0.5);
    CHECK(registry_lookup(reg, "pwaffine").exact_lip > 0.0);

    // sampled values stay within the advertised range bounds
    Rng rng(5);
    for (const RegistryFunction& fn : reg)
        for (int i = 0; i < 200; ++i) {
            const double v = fn.evaluator(rng.point_in(box));
            CHECK(v >= fn.range_lo - 1e-12);
            CHECK(v <= fn.range_hi + 1e-12);
        }

    CHECK_THROWS_AS(registry_lookup(reg, "no_such"), std::invalid_argument);
    try {
        registry_lookup(reg, "no_such");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("dist_point") != std::string::npos);
    }

    // a claimed constant below the true one is rejected at registration
    RegistryFunction cheat{"cheat", [](const Vec& x) { return 2.0 * x[0]; }, 0.5, -4.0, 4.0, ""};
    CHECK_THROWS_AS(verify_registry_entry(cheat, box, 9), std::logic_error);
}

TEST_CASE("empirical lipschitz recovers exact constants and stays a lower bound") {
    const IntervalBox box = IntervalBox::cube(2, -1.0, 2.0);
    const Vec a{0.6, -0.8};  // gradient norm exactly 1
    const ScalarFn linear = [a](const Vec& x) { return dot(a, x) + 0.3; };
    CHECK(empirical_lipschitz(linear, box, 2000, 11) == doctest::Approx(1.0).epsilon(1e-9));

    const ScalarFn c = [](const Vec&) { return 4.25; };
    CHECK(empirical_lipschitz(c, box, 100, 12) == 0.0);

    const ScalarFn nrm = [](const Vec& x) { return norm2(x); };
    const double lip_nrm = empirical_lipschitz(nrm, box, 10000, 13);
    CHECK(lip_nrm >= 0.99);
    CHECK(lip_nrm <= 1.0 + 1e-9);  // never exceeds the true constant

    const ScalarFn dist = [](const Vec& x) { return dist2(x, Vec{0.5, 0.5}); };
    CHECK(empirical_lipschitz(dist, box, 3000, 14) <= 1.0 + 1e-9);

    CHECK_THROWS_AS(empirical_lipschitz(linear, box, 1, 15), std::invalid_argument);
}

TEST_CASE("sup error is exact on shifts and stable under refinement") {
    const IntervalBox box = IntervalBox::cube(1, 0.0, 3.0);
    const ScalarFn f = [](const Vec& x) { return std::sin(x[0]); };
    CHECK(sup_error(f, f, box, 0.1) == 0.0);

    const ScalarFn g = [&f](const Vec& x) { return f(x) - 0.37; };
    CHECK(sup_error(f, g, box, 0.1) == doctest::Approx(0.37).epsilon(1e-15));

    // refinement moves the max by at most Lip(f - zero) * h
    const ScalarFn zero = [](const Vec&) { return 0.0; };
    const double coarse = sup_error(f, zero, box, 0.25);
    const double fine = sup_error(f, zero, box, 0.025);
    CHECK(fine >= coarse - 1e-15);
    CHECK(fine - coarse <= 1.0 * 0.25);

    CHECK_THROWS_AS(sup_error(f, g, box, 0.0), std::invalid_argument);
}

TEST_CASE("metric rows serialize with shortest round-trip numbers") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-9) == "1e-09");
    CHECK(format_double(8020012.0) == "8020012");
    CHECK(format_double(-0.0) == "-0");

    const auto dir = fresh_dir("lipsmooth_csv_test");
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "m.csv").string();
    write_metrics_csv(path, {{"s1", "alpha", 0.5, 1.0, true}, {"s2", "beta", 2.0, 1.5, false}});
    CHECK(slurp(path) ==
          "stage,metric,value,bound,pass\ns1,alpha,0.5,1,true\ns2,beta,2,1.5,false\n");
    std::filesystem::remove_all(dir);
}

TEST_CASE("stage runs are deterministic given config and seed") {
    nlohmann::ordered_json cfg;
    cfg["seed"] = 99;
    const ExperimentReport r1 = run_stage("tube-check", cfg);
    const ExperimentReport r2 = run_stage("tube-check", cfg);
    REQUIRE(r1.metrics.size() == r2.metrics.size());
    for (std::size_t i = 0; i < r1.metrics.size(); ++i) {
        CHECK(r1.metrics[i].metric == r2.metrics[i].metric);
        CHECK(r1.metrics[i].value == r2.metrics[i].value);
        CHECK(r1.metrics[i].bound == r2.metrics[i].bound);
    }
    CHECK(r1.pass);
    CHECK(r1.seed == 99);
    CHECK(r1.config.at("eps").get<double>() == 0.5);       // defaults echoed
    CHECK(r1.config.at("segments").get<int>() == 5);

    const auto da = fresh_dir("lipsmooth_det_a"), db = fresh_dir("lipsmooth_det_b");
    write_outputs(r1, da.string());
    write_outputs(r2, db.string());
    CHECK(slurp(da / "metrics.csv") == slurp(db / "metrics.csv"));
    CHECK(slurp(da / "report.json") == slurp(db / "report.json"));
    CHECK(slurp(da / "timings.csv").rfind("stage,timer,wall_ms\n", 0) == 0);
    std::filesystem::remove_all(da);
    std::filesystem::remove_all(db);
}

TEST_CASE("tube and lasry stages produce the expected gated rows") {
    const ExperimentReport tube = run_stage("tube-check", nlohmann::ordered_json::object());
    REQUIRE(tube.metrics.size() == 5);
    CHECK(tube.metrics[0].metric == "f_roundtrip_max");
    CHECK(tube.metrics[0].bound == 1e-12);
    CHECK(tube.metrics[1].metric == "h_tracking_max");
    CHECK(tube.metrics[1].bound == 0.5);
    CHECK(tube.metrics[2].metric == "dh_fd_max");
    CHECK(tube.metrics[2].bound == doctest::Approx(1.575));
    CHECK(tube.metrics[3].metric == "sandwich_inside_fraction");
    CHECK(tube.metrics[4].metric == "sandwich_outside_fraction");
    CHECK(tube.pass);

    const ExperimentReport las = run_stage("lasry-lions", nlohmann::ordered_json::object());
    REQUIRE(las.metrics.size() == 5);
    CHECK(las.metrics[1].metric == "huber_err_at_0p1");
    CHECK(las.metrics[1].value <= 1e-9);
    CHECK(las.metrics[2].metric == "huber_err_at_1");
    CHECK(las.metrics[3].metric == "grid_lip");
    CHECK(las.metrics[4].metric == "second_diff_max");
    CHECK(las.metrics[4].bound == doctest::Approx(10.01));
    CHECK(las.pass);

    // a non-norm registry function drops the Huber oracle rows
    nlohmann::ordered_json saw;
    saw["fn"] = "sawtooth";
    const ExperimentReport ls = run_stage("lasry-lions", saw);
    CHECK(ls.metrics.size() == 3);
    CHECK(ls.pass);
}

TEST_CASE("config violations name the broken invariant") {
    auto message_of = [](const char* stage, nlohmann::ordered_json cfg) {
        try {
            run_stage(stage, std::move(cfg));
        } catch (const std::invalid_argument& e) {
            return std::string(e.what());
        }
        return std::string("(no throw)");
    };

    CHECK(message_of("nonsense", {}).find("stage_known") != std::string::npos);

    nlohmann::ordered_json bogus;
    bogus["bogus_knob"] = 1;
    CHECK(message_of("tube-check", bogus).find("config_keys_known") != std::string::npos);

    nlohmann::ordered_json typed;
    typed["eps"] = "half";
    CHECK(message_of("tube-check", typed).find("config_types") != std::string::npos);

    nlohmann::ordered_json range;
    range["eps"] = 2.0;
    CHECK(message_of("tube-check", range).find("eps_in_unit_interval") != std::string::npos);

    nlohmann::ordered_json seedneg;
    seedneg["seed"] = -4;
    CHECK(message_of("tube-check", seedneg).find("seed_unsigned") != std::string::npos);

    nlohmann::ordered_json badbox;
    badbox["box_lo"] = 2.0;
    badbox["box_hi"] = -2.0;
    CHECK(message_of("lasry-lions", badbox).find("box_nonempty") != std::string::npos);

    // pipeline precondition failures surface as-is (mu must stay below lambda)
    nlohmann::ordered_json badmu;
    badmu["mu"] = 0.3;
    badmu["lambda"] = 0.2;
    CHECK_THROWS_AS(run_stage("lasry-lions", badmu), std::invalid_argument);
}

TEST_CASE("run_experiment dispatches config files and rejects malformed ones") {
    const auto dir = fresh_dir("lipsmooth_cfg_test");
    std::filesystem::create_directories(dir);
    const auto good = dir / "good.json";
    {
        std::ofstream out(good);
        out << R"({"stage": "tube-check", "seed": 3, "track_samples": 50, )"
               R"("sandwich_samples": 50, "roundtrip_samples": 50, "fd_points": 8})";
    }
    const ExperimentReport rep = run_experiment(good.string());
    CHECK(rep.stage == "tube-check");
    CHECK(rep.seed == 3);
    CHECK(rep.pass);

    auto expect_error = [](const std::string& path, const char* needle) {
        try {
            run_experiment(path);
            return false;
        } catch (const std::invalid_argument& e) {
            return std::string(e.what()).find(needle) != std::string::npos;
        }
    };
    CHECK(expect_error((dir / "absent.json").string(), "config_file_readable"));

    const auto broken = dir / "broken.json";
    std::ofstream(broken) << "{not json";
    CHECK(expect_error(broken.string(), "config_valid_json"));

    const auto stageless = dir / "stageless.json";
    std::ofstream(stageless) << R"({"seed": 1})";
    CHECK(expect_error(stageless.string(), "config_has_stage"));
    std::filesystem::remove_all(dir);
}
