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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "errors.hpp"
#include "sweep.hpp"

using namespace qdl;

namespace {

SweepSpec base_spec() {
    SweepSpec spec;
    spec.base.bath.temperature = 5.0;
    spec.base.bath.g1_abs = 99.529264;
    spec.base.n_max = 6;
    spec.axis = "eta";
    spec.grid = {0.1, 0.3};
    spec.workers = 1;
    return spec;
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("sweep rows are ordered and complete") {
    SweepSpec spec = base_spec();
    spec.engine = Engine::both;
    const SweepResult result = run_sweep(spec);
    REQUIRE(result.rows.size() == 4);
    CHECK(result.failed_points == 0);
    // (grid position, engine), full_me before sme
    CHECK(result.rows[0].axis_value == 0.1);
    CHECK(result.rows[0].engine == Engine::full_me);
    CHECK(result.rows[1].axis_value == 0.1);
    CHECK(result.rows[1].engine == Engine::sme);
    CHECK(result.rows[2].axis_value == 0.3);
    CHECK(result.rows[3].engine == Engine::sme);
    for (const ResultRow& row : result.rows) {
        CHECK((row.flags & kFlagFailed) == 0);
        CHECK(row.error.empty());
        const double total = row.populations.ee + row.populations.plus +
                             row.populations.minus + row.populations.gg;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(row.mean_n > 0.0);
        CHECK(row.residual < 1e-8);
        CHECK(row.n_max == 6);
        CHECK(row.franck_condon == doctest::Approx(0.9).epsilon(1e-6));
        CHECK(std::isnan(row.excess[0]));  // not requested
    }
    // pumping harder fills the cavity more
    CHECK(result.rows[3].mean_n > result.rows[1].mean_n);
}

TEST_CASE("engines agree without phonons") {
    SweepSpec spec = base_spec();
    spec.base.phonons_enabled = false;
    spec.engine = Engine::both;
    const SweepResult result = run_sweep(spec);
    const Comparison cmp = compare_engines(result);
    REQUIRE(cmp.rows.size() == 2);
    CHECK(cmp.failed_points == 0);
    CHECK(cmp.max_pop_diff < 1e-12);
    CHECK(cmp.max_mean_n_rel < 1e-10);
    for (const ResultRow& row : result.rows) CHECK(row.franck_condon == 1.0);
}

TEST_CASE("excess output closes the photon balance") {
    SweepSpec spec = base_spec();
    spec.base.n_max = 8;
    spec.grid = {0.35};
    spec.outputs.push_back(OutputField::excess);
    const SweepResult result = run_sweep(spec);
    REQUIRE(result.rows.size() == 1);
    const ResultRow& row = result.rows[0];
    double sum = 0.0;
    for (double e : row.excess) {
        CHECK(std::isfinite(e));
        sum += e;
    }
    CHECK(row.rateeq_mean_n == doctest::Approx(sum).epsilon(1e-12));
    CHECK(std::abs(row.rateeq_mean_n - row.mean_n) / row.mean_n < 0.05);

    // the full master equation has no diagonal photon-ladder reduction
    SweepSpec full = base_spec();
    full.engine = Engine::full_me;
    full.grid = {0.35};
    full.outputs.push_back(OutputField::excess);
    const SweepResult fr = run_sweep(full);
    CHECK(std::isnan(fr.rows[0].excess[0]));
    CHECK(std::isnan(fr.rows[0].rateeq_mean_n));
}

TEST_CASE("a failing point is isolated") {
    SweepSpec spec = base_spec();
    spec.grid = {-0.2, 0.2};  // negative pump rate rejected per point
    const SweepResult result = run_sweep(spec);
    REQUIRE(result.rows.size() == 2);
    CHECK(result.failed_points == 1);
    const ResultRow& bad = result.rows[0];
    CHECK((bad.flags & kFlagFailed) != 0);
    CHECK(bad.error.find("config:") == 0);
    CHECK(std::isnan(bad.mean_n));
    CHECK(std::isnan(bad.populations.ee));
    const ResultRow& good = result.rows[1];
    CHECK((good.flags & kFlagFailed) == 0);
    CHECK(good.mean_n > 0.0);

    const std::string csv = emit_csv(result);
    CHECK(csv.find("# error axis=-0.2 engine=sme: config:") !=
          std::string::npos);
}

TEST_CASE("calibration resolves the absolute scale once") {
    SweepSpec spec = base_spec();
    spec.base.bath.g1_abs = 100.0;
    spec.calibrate = true;
    spec.grid = {0.1};
    const SweepResult result = run_sweep(spec);
    CHECK(result.spec.base.bath.g1_abs ==
          doctest::Approx(99.529264).epsilon(1e-6));
    CHECK((result.rows[0].flags & kFlagCalibrated) != 0);
}

TEST_CASE("coherent drive marks the corrected exchange term") {
    SweepSpec spec = base_spec();
    spec.base.pump_mode = PumpMode::coherent;
    spec.axis = "delta_cp";
    spec.grid = {-14.0};
    spec.base.eta1 = spec.base.eta2 = 1.0;
    const SweepResult result = run_sweep(spec);
    CHECK((result.rows[0].flags & kFlagExchangeFix) != 0);

    const SweepResult incoh = run_sweep(base_spec());
    CHECK((incoh.rows[0].flags & kFlagExchangeFix) == 0);
}

TEST_CASE("emitters are deterministic and schema-stable") {
    SweepSpec spec = base_spec();
    spec.engine = Engine::both;
    const SweepResult result = run_sweep(spec);
    const std::string csv = emit_csv(result);
    CHECK(csv == emit(result, "csv"));
    CHECK(csv == emit_csv(run_sweep(spec)));  // rerun, byte-identical
    CHECK(csv.find("axis,engine,p_ee,p_plus,p_minus,p_gg,mean_n,spee,tpee,"
                   "thpee,fpee,residual,n_max,B,flags\n") !=
          std::string::npos);
    // 3 preamble lines, header, 4 rows
    CHECK(count_lines(csv) == 8);
    CHECK(csv.find(",full_me,") != std::string::npos);
    CHECK(csv.find(",nan,") != std::string::npos);  // excess not requested

    const std::string js = emit_json(result);
    CHECK(js == emit_json(run_sweep(spec)));
    const auto doc = nlohmann::json::parse(js);
    REQUIRE(doc.at("rows").size() == 4);
    CHECK(doc.at("columns").size() == 15);
    CHECK(doc.at("rows")[0].at("engine") == "full_me");
    CHECK(doc.at("rows")[0].at("spee").is_null());  // NaN maps to null
    CHECK(doc.at("rows")[1].at("mean_n").is_number());
    CHECK(doc.at("errors").empty());
    const double m = doc.at("rows")[1].at("mean_n").get<double>();
    CHECK(m == round12(result.rows[1].mean_n));

    CHECK_THROWS_AS(emit(result, "yaml"), ConfigError);
}

TEST_CASE("empty output selection emits a header-only table") {
    SweepSpec spec = base_spec();
    spec.outputs.clear();
    const SweepResult result = run_sweep(spec);
    CHECK(result.rows.empty());
    const std::string csv = emit_csv(result);
    CHECK(count_lines(csv) == 4);  // preamble + header, no data
    CHECK(csv.find("\naxis,engine,") != std::string::npos);
}

TEST_CASE("worker pool output matches serial") {
    SweepSpec spec = base_spec();
    spec.engine = Engine::both;
    spec.grid = {0.1, 0.2, 0.3};
    SweepSpec parallel = spec;
    parallel.workers = 3;
    CHECK(emit_csv(run_sweep(spec)) == emit_csv(run_sweep(parallel)));
}

TEST_CASE("comparison table") {
    SweepSpec spec = base_spec();
    spec.engine = Engine::both;
    spec.outputs.push_back(OutputField::excess);
    spec.outputs.push_back(OutputField::rateeq_sme_compare);
    const SweepResult result = run_sweep(spec);
    const Comparison cmp = compare_engines(result);
    REQUIRE(cmp.rows.size() == 2);
    CHECK(cmp.rows[0].axis_value == 0.1);
    CHECK(cmp.rows[0].d_ee >= 0.0);
    CHECK(std::isfinite(cmp.rows[0].d_rateeq_rel));
    CHECK(cmp.max_pop_diff > 0.0);  // phonons on, the engines differ
    CHECK(cmp.max_pop_diff < 0.05);
    CHECK(cmp.max_rateeq_rel < 0.05);

    const std::string csv = emit_compare(cmp, result.spec, "csv");
    CHECK(csv.find("# max_pop_diff=") != std::string::npos);
    CHECK(csv == emit_compare(cmp, result.spec, "csv"));
    const auto doc =
        nlohmann::json::parse(emit_compare(cmp, result.spec, "json"));
    CHECK(doc.at("rows").size() == 2);
    CHECK(doc.at("summary").at("failed") == 0);

    SweepSpec sme_only = base_spec();
    CHECK_THROWS_AS(compare_engines(run_sweep(sme_only)), InvalidArgError);
}

TEST_CASE("write_text targets") {
    const std::string path = "/tmp/qdl_sweep_write_test.csv";
    write_text("a,b\n1,2\n", path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "a,b");
    std::remove(path.c_str());

    CHECK_THROWS_AS(write_text("x", "/nonexistent/dir/file.csv"), IoError);
}

#ifdef QDL_FIGS_DIR
TEST_CASE("shipped scenario files parse and validate") {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(QDL_FIGS_DIR))
        if (entry.path().extension() == ".ini") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    CHECK(files.size() >= 15);

    for (const auto& path : files) {
        CAPTURE(path.string());
        SweepSpec spec;
        REQUIRE_NOTHROW(spec = load_scenario(path.string()));
        // Every scenario pins the dephasing channel and the 5 K calibrated
        // bath; the variants in the directory README edit those knobs.
        CHECK(spec.base.gamma1p == 0.01);
        CHECK(spec.base.gamma2p == 0.01);
        CHECK(spec.base.kappa == 0.5);
        CHECK(spec.base.bath.temperature == 5.0);
        CHECK(spec.calibrate);
        CHECK(!spec.grid.empty());
        if (spec.axis == "eta_resonant")
            CHECK(spec.base.pump_mode == PumpMode::coherent);
        for (OutputField f : spec.outputs)
            if (f == OutputField::me_sme_compare)
                CHECK(spec.engine == Engine::both);
    }
}
#endif
