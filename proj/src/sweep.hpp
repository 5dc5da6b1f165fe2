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

#pragma once

#include <array>
#include <string>
#include <vector>

#include "config.hpp"
#include "steady.hpp"

namespace qdl {

// Bits of the per-row flags column.
inline constexpr unsigned kFlagExchangeFix = 1u;  // corrected coherent
                                                  // exchange term is active
inline constexpr unsigned kFlagCalibrated = 2u;   // bath.g1_abs was fitted
inline constexpr unsigned kFlagFailed = 4u;       // solver error, see error
inline constexpr unsigned kFlagTruncation = 8u;   // mean_n close to n_max,
                                                  // Fock cutoff suspect

// One grid point under one engine. Quantities that were not computed (or
// that failed) stay NaN.
struct ResultRow {
    double axis_value = 0.0;
    Engine engine = Engine::sme;
    Populations populations;
    double mean_n = 0.0;
    std::array<double, 4> excess{};  // k-photon net emission / kappa
    double rateeq_mean_n = 0.0;      // from the reduced model's own balance
    double residual = 0.0;
    int n_max = 0;
    double franck_condon = 1.0;
    unsigned flags = 0;
    std::string error;  // "<code>: <message>" when the point failed

    ResultRow();
};

struct SweepResult {
    SweepSpec spec;  // echoed with calibration resolved
    std::vector<ResultRow> rows;
    int failed_points = 0;
};

// One row per grid point per requested engine, ordered by (grid position,
// engine). Points run on a small worker pool; a solver failure marks its row
// and the sweep continues. Throws only for spec-level errors.
SweepResult run_sweep(const SweepSpec& spec);

// Per-point gap between the two engines, plus the rate-equation closure on
// sme rows when requested.
struct CompareRow {
    double axis_value = 0.0;
    double d_ee = 0.0;
    double d_plus = 0.0;
    double d_minus = 0.0;
    double d_gg = 0.0;
    double d_mean_n = 0.0;
    double d_mean_n_rel = 0.0;
    double d_rateeq_rel = 0.0;  // NaN unless rateeq_sme_compare was computed
    bool failed = false;

    CompareRow();
};

struct Comparison {
    std::vector<CompareRow> rows;
    double max_pop_diff = 0.0;
    double max_mean_n_rel = 0.0;
    double max_rateeq_rel = 0.0;
    int failed_points = 0;
};

// Requires a result produced with engine = both. Failed points are skipped
// in the maxima and counted.
Comparison compare_engines(const SweepResult& result);

// Fixed 15-column table, 12 significant digits, stable across reruns.
// Columns: axis, engine, p_ee, p_plus, p_minus, p_gg, mean_n, spee, tpee,
// thpee, fpee, residual, n_max, B, flags. An empty output selection emits
// the header only; failed points additionally list their error in the
// trailer comments (csv) or an errors array (json).
std::string emit(const SweepResult& result, const std::string& format);
std::string emit_csv(const SweepResult& result);
std::string emit_json(const SweepResult& result);

std::string emit_compare(const Comparison& comparison, const SweepSpec& spec,
                         const std::string& format);

// Throws IoError. "-" writes to stdout.
void write_text(const std::string& text, const std::string& path);

// Round through 12 significant digits; emitters use it so csv and json agree.
double round12(double v);
std::string format12(double v);

}  // namespace qdl
