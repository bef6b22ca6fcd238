#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "lpp/closed_forms.hpp"
#include "lpp/harness.hpp"
#include "lpp/lpp_engine.hpp"

using namespace lpp;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kConfig = R"({
  "field": "two-phase:r=0.5,lambda=1",
  "targets": [[3, 2.5], [0.5, 2]],
  "n_list": [16, 32],
  "replicas": 2,
  "base_seed": 42,
  "out_csv": "out.csv"
})";

}  // namespace

TEST_CASE("config parsing") {
    auto cfg = parse_config_json(kConfig);
    CHECK(cfg.field_spec == "two-phase:r=0.5,lambda=1");
    REQUIRE(cfg.targets.size() == 2);
    CHECK(cfg.targets[0].x == 3.0);
    CHECK(cfg.targets[1].y == 2.0);
    REQUIRE(cfg.n_list.size() == 2);
    CHECK(cfg.n_list[1] == 32);
    CHECK(cfg.replicas == 2);
    CHECK(cfg.base_seed == 42);
    CHECK(cfg.out_csv == "out.csv");
    CHECK(cfg.out_svg.empty());

    CHECK_THROWS_AS(parse_config_json("{not json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_json("{}"), std::invalid_argument);
    // n_list must be strictly increasing
    CHECK_THROWS_AS(parse_config_json(R"({"field":"constant:r=1","targets":[[1,1]],
        "n_list":[32,16],"replicas":1,"base_seed":0,"out_csv":"o.csv"})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(load_config("/nonexistent/nope.json"), std::ios_base::failure);
}

TEST_CASE("csv number formatting") {
    CHECK(csv_number(0.1) == "0.10000000000000001");
    CHECK(csv_number(1.0) == "1");
    CHECK(csv_number(17.757359312880713) == "17.757359312880713");
}

TEST_CASE("converge experiment rows") {
    auto cfg = parse_config_json(kConfig);
    auto rows = converge_experiment(cfg);
    REQUIRE(rows.size() == 2 * 2 * 2);  // targets x n x replicas
    // deterministic ordering: (target asc, n, replica)
    CHECK(rows[0].target_x == 0.5);
    CHECK(rows[0].n == 16);
    CHECK(rows[0].replica == 0);
    CHECK(rows[1].replica == 1);
    CHECK(rows[2].n == 32);
    CHECK(rows[4].target_x == 3.0);
    for (const auto& r : rows) {
        CHECK(r.g_over_n > 0.0);
        CHECK(r.abs_err == doctest::Approx(std::fabs(r.g_over_n - r.gamma_hat)));
        CHECK(r.wall_ms >= 0);
    }
    // gamma_hat is the closed-form shape value
    CHECK(rows[0].gamma_hat == doctest::Approx(4.5).epsilon(1e-12));
    CHECK(rows[4].gamma_hat == doctest::Approx(17.757359312880713).epsilon(1e-12));
    // replica seeds: row values match direct engine calls
    auto field = parse_field_spec(cfg.field_spec);
    EnvironmentSpec env{field, 16, 42};
    CHECK(rows[4].g_over_n == doctest::Approx(scaled_passage(env, 3.0, 2.5)).epsilon(1e-15));

    // CSV text is deterministic apart from timing
    auto text1 = converge_csv_text(rows);
    auto rows2 = converge_experiment(cfg);
    for (auto& r : rows2) r.wall_ms = 0;
    auto rows1z = rows;
    for (auto& r : rows1z) r.wall_ms = 0;
    CHECK(converge_csv_text(rows1z) == converge_csv_text(rows2));
    CHECK(text1.substr(0, text1.find('\n')) ==
          "model,target_x,target_y,n,replica,g_over_n,gamma_hat,abs_err,wall_ms");
}

TEST_CASE("csv emission round-trip") {
    std::string path = "test_emit.csv";
    emit_csv({"a", "b"}, {{"1", "2"}, {"3", "4"}}, path, {"note"});
    auto text = slurp(path);
    CHECK(text == "# note\na,b\n1,2\n3,4\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(emit_csv({"a"}, {}, "/nonexistent/dir/x.csv"), std::ios_base::failure);
}

TEST_CASE("path overlay") {
    auto cfg = parse_config_json(kConfig);
    auto rows = path_overlay(cfg);
    REQUIRE(!rows.empty());
    bool have_micro = false, have_macro = false;
    double prev_px = -1.0, prev_py = -1.0;
    std::string cur;
    for (const auto& r : rows) {
        CHECK((r.kind == "micro" || r.kind == "macro"));
        if (r.kind == "micro") have_micro = true;
        if (r.kind == "macro") have_macro = true;
        // within one (kind,target) block, steps move up-right
        std::string key = r.kind + "/" + std::to_string(r.target_x) + "/" +
                          std::to_string(r.target_y);
        if (key != cur) {
            cur = key;
            prev_px = -1.0;
            prev_py = -1.0;
        } else {
            CHECK(r.px >= prev_px - 1e-12);
            CHECK(r.py >= prev_py - 1e-12);
        }
        prev_px = r.px;
        prev_py = r.py;
    }
    CHECK(have_micro);
    CHECK(have_macro);
    // micro paths are rescaled by n: endpoints near the macroscopic target
    double last_x = 0.0, last_y = 0.0;
    for (const auto& r : rows)
        if (r.kind == "micro" && r.target_x == 3.0) last_x = r.px, last_y = r.py;
    CHECK(last_x == doctest::Approx(3.0).epsilon(0.1));
    CHECK(last_y == doctest::Approx(2.5).epsilon(0.1));
}

TEST_CASE("m2 sweep") {
    auto f = make_corner_power(0.5, 1.2, 3.0, 3.0);
    auto rows = m2_sweep(f, 3.0, 1e-6, 1e-2, 5, true);
    REQUIRE(rows.size() == 5);
    CHECK(rows.front().a == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(rows.back().a == doctest::Approx(1e-2).epsilon(1e-12));
    // log grid: constant ratio
    CHECK(rows[1].a / rows[0].a == doctest::Approx(10.0).epsilon(1e-9));
    for (const auto& r : rows) {
        CHECK(std::fabs(r.residual) <= 1e-9);
        CHECK(r.m2 == doctest::Approx(corner_m2(f, 3.0, r.a)).epsilon(1e-12));
        CHECK(r.m1 == doctest::Approx(f_eval(f, r.a) / r.a).epsilon(1e-12));
    }
    // m2 decreases towards the origin on this grid
    CHECK(rows.front().m2 < rows.back().m2);
    CHECK_THROWS_AS(m2_sweep(f, 3.0, 1e-2, 1e-6, 5, true), std::invalid_argument);
    CHECK_THROWS_AS(m2_sweep(make_constant(1.0), 1.0, 0.1, 0.5, 3, false),
                    std::invalid_argument);
}

TEST_CASE("svg emission") {
    std::string path = "test_plot.svg";
    emit_svg({{"series", {{1.0, 2.0}, {2.0, 3.0}}}}, path, "n", "err");
    auto text = slurp(path);
    CHECK(text.find("<svg") != std::string::npos);
    CHECK(text.find("</svg>") != std::string::npos);
    CHECK(text.find("series") != std::string::npos);
    std::remove(path.c_str());
    // single point must not divide by zero
    emit_svg({{"one", {{1.0, 1.0}}}}, path);
    CHECK(slurp(path).find("<svg") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("shape value dispatch") {
    ExperimentConfig cfg;
    CHECK(shape_value(make_constant(2.0), {1.0, 1.0}, cfg) ==
          doctest::Approx(2.0).epsilon(1e-13));
    CHECK(shape_value(make_two_phase(0.5, 1.0), {3.0, 2.5}, cfg) ==
          doctest::Approx(17.757359312880713).epsilon(1e-12));
    CHECK(shape_value(make_corner_sqrt(2.0), {1.0, 1.0}, cfg) ==
          doctest::Approx(2.5).epsilon(1e-9));
    auto sg = make_step_grid({0.0, 1.0, 2.0}, {0.0, 1.0, 2.0},
                             {{1.0, 2.0}, {0.5, 1.0}});
    double v = shape_value(sg, {1.5, 1.5}, cfg);
    CHECK(v >= gamma_shape(1.5, 1.5) / 2.0);
}
