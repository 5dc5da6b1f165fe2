// Copyright 2026 the qdlaser authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exercises the shared library exactly as an external consumer would:
// through qdlaser.h alone.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "qdlaser/qdlaser.h"

namespace {

struct ModelGuard {
    qdl_model* m = qdl_model_create();
    ~ModelGuard() { qdl_model_destroy(m); }
};

struct ResultGuard {
    qdl_result* r = nullptr;
    ~ResultGuard() { qdl_result_destroy(r); }
};

struct SweepGuard {
    qdl_sweep* s = nullptr;
    ~SweepGuard() { qdl_sweep_destroy(s); }
};

double get(const qdl_result* r, const char* key) {
    double v = 0.0;
    REQUIRE(qdl_result_get(r, key, &v) == QDL_OK);
    return v;
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::strlen(qdl_version()) > 0);
    CHECK(std::string(qdl_status_name(QDL_OK)) == "ok");
    CHECK(std::string(qdl_status_name(QDL_ERR_CONFIG)) == "config");
    CHECK(std::string(qdl_status_name(QDL_ERR_IO)) == "io");
    CHECK(qdl_last_error() != nullptr);
}

TEST_CASE("model key access") {
    ModelGuard model;
    REQUIRE(model.m != nullptr);

    CHECK(qdl_model_set(model.m, "g2", "-1.0") == QDL_OK);
    CHECK(qdl_model_set(model.m, "n_max", "6") == QDL_OK);
    CHECK(qdl_model_set(model.m, "eta", "0.35") == QDL_OK);
    CHECK(qdl_model_set(model.m, "bath.temperature", "20") == QDL_OK);

    char buf[64];
    REQUIRE(qdl_model_get(model.m, "g2", buf, sizeof buf) == QDL_OK);
    CHECK(std::string(buf) == "-1");
    REQUIRE(qdl_model_get(model.m, "eta1", buf, sizeof buf) == QDL_OK);
    CHECK(std::string(buf) == "0.35");
    REQUIRE(qdl_model_get(model.m, "eta2", buf, sizeof buf) == QDL_OK);
    CHECK(std::string(buf) == "0.35");
    REQUIRE(qdl_model_get(model.m, "bath.temperature", buf, sizeof buf) ==
            QDL_OK);
    CHECK(std::string(buf) == "20");
    REQUIRE(qdl_model_get(model.m, "pump_mode", buf, sizeof buf) == QDL_OK);
    CHECK(std::string(buf) == "incoherent");

    // "delta" follows the pump mode set beforehand
    CHECK(qdl_model_set(model.m, "pump_mode", "coherent") == QDL_OK);
    CHECK(qdl_model_set(model.m, "delta", "-13.5") == QDL_OK);
    REQUIRE(qdl_model_get(model.m, "delta1p", buf, sizeof buf) == QDL_OK);
    CHECK(std::string(buf) == "-13.5");

    CHECK(qdl_model_set(model.m, "coupling", "1") == QDL_ERR_CONFIG);
    CHECK(std::strlen(qdl_last_error()) > 0);
    CHECK(qdl_model_set(model.m, "g1", "fast") == QDL_ERR_CONFIG);
    CHECK(qdl_model_get(model.m, "eta", buf, sizeof buf) == QDL_ERR_CONFIG);

    char tiny[3];
    CHECK(qdl_model_get(model.m, "delta1p", tiny, sizeof tiny) ==
          QDL_ERR_INVALID_ARG);

    CHECK(qdl_model_set(nullptr, "g1", "1") == QDL_ERR_INVALID_ARG);
    CHECK(qdl_model_set(model.m, "g1", nullptr) == QDL_ERR_INVALID_ARG);
}

TEST_CASE("calibration pins the absolute scale") {
    ModelGuard model;
    double g1_abs = 0.0;
    REQUIRE(qdl_model_calibrate(model.m, &g1_abs) == QDL_OK);
    CHECK(std::abs(g1_abs - 99.529264) < 1e-4);
    char buf[64];
    REQUIRE(qdl_model_get(model.m, "bath.g1_abs", buf, sizeof buf) == QDL_OK);
    CHECK(std::stod(buf) == doctest::Approx(g1_abs).epsilon(1e-12));
}

TEST_CASE("scenario files load into a model") {
    const std::string path = "/tmp/qdl_capi_model.ini";
    {
        std::ofstream out(path);
        out << "[model]\nn_max = 6\neta = 0.3\ngamma1p = 0.01\n"
            << "[bath]\ntemperature = 5\ncalibrate = true\n"
            << "[sweep]\naxis = eta\ngrid = 0.1,0.3\n";
    }
    ModelGuard model;
    REQUIRE(qdl_model_load(model.m, path.c_str()) == QDL_OK);
    char buf[64];
    REQUIRE(qdl_model_get(model.m, "gamma1p", buf, sizeof buf) == QDL_OK);
    CHECK(std::string(buf) == "0.01");
    REQUIRE(qdl_model_get(model.m, "bath.g1_abs", buf, sizeof buf) == QDL_OK);
    CHECK(std::abs(std::stod(buf) - 99.529264) < 1e-4);  // calibrate honored
    std::remove(path.c_str());

    CHECK(qdl_model_load(model.m, "/nonexistent/x.ini") == QDL_ERR_IO);
}

TEST_CASE("steady-state solves through the ABI") {
    ModelGuard model;
    REQUIRE(qdl_model_set(model.m, "n_max", "6") == QDL_OK);
    REQUIRE(qdl_model_set(model.m, "eta", "0.3") == QDL_OK);

    ResultGuard sme;
    REQUIRE(qdl_solve_steady(model.m, "sme", &sme.r) == QDL_OK);
    const double total = get(sme.r, "p_ee") + get(sme.r, "p_plus") +
                         get(sme.r, "p_minus") + get(sme.r, "p_gg");
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(get(sme.r, "mean_n") > 0.0);
    CHECK(get(sme.r, "residual") < 1e-8);
    CHECK(get(sme.r, "n_max") == 6.0);
    CHECK(get(sme.r, "B") == doctest::Approx(0.9).epsilon(0.05));
    CHECK(std::isfinite(get(sme.r, "spee")));
    CHECK(std::isfinite(get(sme.r, "rateeq_mean_n")));

    size_t len = 0;
    REQUIRE(qdl_result_pn(sme.r, nullptr, &len) == QDL_OK);
    REQUIRE(len == 7);
    double pn[7];
    REQUIRE(qdl_result_pn(sme.r, pn, &len) == QDL_OK);
    double sum = 0.0;
    for (double p : pn) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    size_t short_len = 3;
    CHECK(qdl_result_pn(sme.r, pn, &short_len) == QDL_ERR_INVALID_ARG);

    ResultGuard full;
    REQUIRE(qdl_solve_steady(model.m, "full", &full.r) == QDL_OK);
    CHECK(std::abs(get(full.r, "mean_n") - get(sme.r, "mean_n")) /
              get(full.r, "mean_n") <
          0.05);
    double v = 0.0;
    CHECK(qdl_result_get(full.r, "spee", &v) == QDL_ERR_INVALID_ARG);
    CHECK(qdl_result_get(sme.r, "entropy", &v) == QDL_ERR_INVALID_ARG);

    qdl_result* out = nullptr;
    CHECK(qdl_solve_steady(model.m, "both", &out) == QDL_ERR_INVALID_ARG);
    CHECK(out == nullptr);
    CHECK(qdl_solve_steady(model.m, "magic", &out) == QDL_ERR_CONFIG);
}

TEST_CASE("invariant suite through the ABI") {
    ModelGuard model;
    REQUIRE(qdl_model_set(model.m, "n_max", "6") == QDL_OK);
    REQUIRE(qdl_model_set(model.m, "eta", "0.2") == QDL_OK);
    const char* report = nullptr;
    int failures = -1;
    REQUIRE(qdl_model_check(model.m, &report, &failures) == QDL_OK);
    REQUIRE(report != nullptr);
    CHECK(failures == 0);
    CHECK(std::string(report).find("PASS") != std::string::npos);
    CHECK(std::string(report).find("checks passed") != std::string::npos);
}

TEST_CASE("sweeps through the ABI") {
    const char* scenario =
        "[model]\nn_max = 6\n"
        "[bath]\ntemperature = 5\ng1_abs = 99.529264\n"
        "[sweep]\naxis = eta\ngrid = 0.1,0.3\nengine = sme\nworkers = 1\n";
    SweepGuard sweep;
    REQUIRE(qdl_sweep_parse(scenario, &sweep.s) == QDL_OK);
    CHECK(qdl_sweep_points(sweep.s) == 2);
    CHECK(qdl_sweep_failed_points(sweep.s) == -1);  // not run yet

    const char* text = nullptr;
    CHECK(qdl_sweep_render(sweep.s, "table", "csv", &text) ==
          QDL_ERR_INVALID_ARG);

    CHECK(qdl_sweep_set(sweep.s, "engine", "both") == QDL_OK);
    CHECK(qdl_sweep_set(sweep.s, "speed", "11") == QDL_ERR_INVALID_ARG);
    REQUIRE(qdl_sweep_run(sweep.s) == QDL_OK);
    CHECK(qdl_sweep_failed_points(sweep.s) == 0);

    REQUIRE(qdl_sweep_render(sweep.s, "table", "csv", &text) == QDL_OK);
    const std::string csv = text;
    CHECK(csv.find("axis,engine,p_ee") != std::string::npos);
    CHECK(csv.find(",full_me,") != std::string::npos);
    CHECK(csv.find(",sme,") != std::string::npos);

    REQUIRE(qdl_sweep_render(sweep.s, "compare", "json", &text) == QDL_OK);
    CHECK(std::string(text).find("max_pop_diff") != std::string::npos);

    const std::string out_path = "/tmp/qdl_capi_sweep.csv";
    REQUIRE(qdl_sweep_write(sweep.s, "table", nullptr, out_path.c_str()) ==
            QDL_OK);
    std::ifstream in(out_path);
    std::string first;
    std::getline(in, first);
    CHECK(first.find("# qdlaser sweep axis=eta") == 0);
    std::remove(out_path.c_str());

    CHECK(qdl_sweep_render(sweep.s, "chart", "csv", &text) ==
          QDL_ERR_INVALID_ARG);

    qdl_sweep* bad = nullptr;
    CHECK(qdl_sweep_parse("[sweep]\naxis = eta\n", &bad) == QDL_ERR_CONFIG);
    CHECK(bad == nullptr);
    CHECK(qdl_sweep_load("/nonexistent/fig.ini", &bad) == QDL_ERR_IO);
}
