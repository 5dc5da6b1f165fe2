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

#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "errors.hpp"
#include "reduction.hpp"

namespace qdl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool wants(const SweepSpec& spec, OutputField field) {
    return std::find(spec.outputs.begin(), spec.outputs.end(), field) !=
           spec.outputs.end();
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

ResultRow solve_point(const SweepSpec& spec, double x, Engine eng,
                      std::shared_ptr<const PhononKernel> kernel,
                      unsigned base_flags, bool want_excess) {
    ResultRow row;
    row.axis_value = x;
    row.engine = eng;
    row.flags = base_flags;
    try {
        ModelConfig config = spec.base;
        apply_axis(config, spec.axis, x);
        validate(config);
        row.n_max = config.n_max;
        if (!kernel) kernel = PhononKernel::build(config.bath);
        row.franck_condon =
            config.phonons_enabled ? kernel->franck_condon() : 1.0;
        if (config.pump_mode == PumpMode::coherent &&
            config.phonons_enabled && config.g1 != 0.0 && config.g2 != 0.0)
            row.flags |= kFlagExchangeFix;
        const Superoperator gen =
            eng == Engine::full_me
                ? full_polaron_generator(config, kernel)
                : sme_generator(config, kernel, rates_for(config, kernel));
        const SteadyState state = solve_steady(gen);
        row.populations = state.populations;
        row.mean_n = state.mean_n;
        row.residual = state.residual;
        if (!state.pn.empty() && state.pn.back() > 1e-3)
            row.flags |= kFlagTruncation;
        if (want_excess && eng == Engine::sme) {
            const PhotonRateModel model = reduce(gen, config.kappa);
            const EmissionReport report = excess_emission(model, config.kappa);
            for (std::size_t k = 0;
                 k < row.excess.size() && k < report.excess.size(); ++k)
                row.excess[k] = report.excess[k];
            row.rateeq_mean_n = report.mean_n_rate_eq;
        }
    } catch (const QdlError& e) {
        row.flags |= kFlagFailed;
        row.error =
            std::string(error_code_name(e.code())) + ": " + one_line(e.what());
    } catch (const std::exception& e) {
        row.flags |= kFlagFailed;
        row.error = std::string("internal: ") + one_line(e.what());
    }
    return row;
}

}  // namespace

ResultRow::ResultRow() {
    populations.ee = kNaN;
    populations.plus = kNaN;
    populations.minus = kNaN;
    populations.gg = kNaN;
    mean_n = kNaN;
    excess.fill(kNaN);
    rateeq_mean_n = kNaN;
    residual = kNaN;
    franck_condon = kNaN;
}

CompareRow::CompareRow() {
    d_ee = kNaN;
    d_plus = kNaN;
    d_minus = kNaN;
    d_gg = kNaN;
    d_mean_n = kNaN;
    d_mean_n_rel = kNaN;
    d_rateeq_rel = kNaN;
}

SweepResult run_sweep(const SweepSpec& spec_in) {
    SweepResult result;
    result.spec = spec_in;
    validate(result.spec);
    SweepSpec& spec = result.spec;
    if (spec.calibrate) spec.base.bath.g1_abs = calibrate_g1_abs(spec.base.bath);
    if (spec.outputs.empty()) return result;  // header-only table

    std::vector<Engine> engines;
    if (spec.engine == Engine::both)
        engines = {Engine::full_me, Engine::sme};
    else
        engines = {spec.engine};

    const bool want_excess = wants(spec, OutputField::excess) ||
                             wants(spec, OutputField::rateeq_sme_compare);
    const unsigned base_flags = spec.calibrate ? kFlagCalibrated : 0u;

    // The kernel depends only on the bath, so every point shares one unless
    // the temperature itself is swept.
    std::shared_ptr<const PhononKernel> shared;
    if (spec.axis != "temperature") shared = PhononKernel::build(spec.base.bath);

    const std::size_t n_tasks = spec.grid.size() * engines.size();
    result.rows.resize(n_tasks);

    const auto compute = [&](std::size_t t) {
        const std::size_t point = t / engines.size();
        const Engine eng = engines[t % engines.size()];
        result.rows[t] = solve_point(spec, spec.grid[point], eng, shared,
                                     base_flags, want_excess);
    };

    unsigned workers = spec.workers > 0
                           ? static_cast<unsigned>(spec.workers)
                           : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, n_tasks));
    if (workers <= 1) {
        for (std::size_t t = 0; t < n_tasks; ++t) compute(t);
    } else {
        // Rows are indexed by (point, engine), so the join order never
        // depends on scheduling.
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t t = next.fetch_add(1);
                    if (t >= n_tasks) return;
                    compute(t);
                }
            });
        for (std::thread& th : pool) th.join();
    }

    for (const ResultRow& row : result.rows)
        if (row.flags & kFlagFailed) ++result.failed_points;
    return result;
}

Comparison compare_engines(const SweepResult& result) {
    if (result.spec.engine != Engine::both)
        throw InvalidArgError(
            "compare_engines needs a sweep run with engine = both");
    const bool want_rateeq =
        wants(result.spec, OutputField::rateeq_sme_compare);
    const std::size_t points = result.spec.grid.size();
    if (result.rows.size() != 2 * points)
        throw InvalidArgError("compare_engines: result rows incomplete");

    Comparison cmp;
    cmp.rows.reserve(points);
    if (!want_rateeq) cmp.max_rateeq_rel = kNaN;
    for (std::size_t i = 0; i < points; ++i) {
        const ResultRow& full = result.rows[2 * i];
        const ResultRow& sme = result.rows[2 * i + 1];
        if (full.engine != Engine::full_me || sme.engine != Engine::sme)
            throw InternalError("compare_engines: row order broken");
        CompareRow row;
        row.axis_value = full.axis_value;
        if ((full.flags & kFlagFailed) || (sme.flags & kFlagFailed)) {
            row.failed = true;
            ++cmp.failed_points;
            cmp.rows.push_back(row);
            continue;
        }
        row.d_ee = std::abs(full.populations.ee - sme.populations.ee);
        row.d_plus = std::abs(full.populations.plus - sme.populations.plus);
        row.d_minus = std::abs(full.populations.minus - sme.populations.minus);
        row.d_gg = std::abs(full.populations.gg - sme.populations.gg);
        row.d_mean_n = std::abs(full.mean_n - sme.mean_n);
        row.d_mean_n_rel = row.d_mean_n / std::abs(full.mean_n);
        if (want_rateeq && std::isfinite(sme.rateeq_mean_n))
            row.d_rateeq_rel =
                std::abs(sme.rateeq_mean_n - sme.mean_n) / std::abs(sme.mean_n);
        cmp.max_pop_diff = std::max(
            {cmp.max_pop_diff, row.d_ee, row.d_plus, row.d_minus, row.d_gg});
        if (std::isfinite(row.d_mean_n_rel))
            cmp.max_mean_n_rel = std::max(cmp.max_mean_n_rel, row.d_mean_n_rel);
        if (want_rateeq && std::isfinite(row.d_rateeq_rel))
            cmp.max_rateeq_rel = std::max(cmp.max_rateeq_rel, row.d_rateeq_rel);
        cmp.rows.push_back(row);
    }
    return cmp;
}

std::string format12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round12(double v) {
    if (!std::isfinite(v)) return v;
    return std::stod(format12(v));
}

namespace {

const char* const kColumns =
    "axis,engine,p_ee,p_plus,p_minus,p_gg,mean_n,spee,tpee,thpee,fpee,"
    "residual,n_max,B,flags";

std::string outputs_list(const SweepSpec& spec) {
    std::string list;
    for (OutputField f : spec.outputs) {
        if (!list.empty()) list += ',';
        list += output_field_name(f);
    }
    return list;
}

void preamble(std::ostream& out, const SweepResult& result) {
    const SweepSpec& spec = result.spec;
    out << "# qdlaser sweep axis=" << spec.axis
        << " engine=" << engine_name(spec.engine)
        << " points=" << spec.grid.size() << "\n";
    out << "# outputs=" << outputs_list(spec)
        << " pump_mode="
        << (spec.base.pump_mode == PumpMode::incoherent ? "incoherent"
                                                        : "coherent")
        << " phonons=" << (spec.base.phonons_enabled ? 1 : 0)
        << " temperature=" << format12(spec.base.bath.temperature)
        << " g1_abs=" << format12(spec.base.bath.g1_abs)
        << " calibrated=" << (spec.calibrate ? 1 : 0) << "\n";
    out << "# flags: 1=exchange-fix 2=calibrated 4=failed 8=truncation\n";
}

}  // namespace

std::string emit_csv(const SweepResult& result) {
    std::ostringstream out;
    preamble(out, result);
    out << kColumns << "\n";
    for (const ResultRow& row : result.rows) {
        out << format12(row.axis_value) << ',' << engine_name(row.engine)
            << ',' << format12(row.populations.ee) << ','
            << format12(row.populations.plus) << ','
            << format12(row.populations.minus) << ','
            << format12(row.populations.gg) << ',' << format12(row.mean_n)
            << ',' << format12(row.excess[0]) << ',' << format12(row.excess[1])
            << ',' << format12(row.excess[2]) << ',' << format12(row.excess[3])
            << ',' << format12(row.residual) << ',' << row.n_max << ','
            << format12(row.franck_condon) << ',' << row.flags << "\n";
    }
    for (const ResultRow& row : result.rows)
        if (row.flags & kFlagFailed)
            out << "# error axis=" << format12(row.axis_value)
                << " engine=" << engine_name(row.engine) << ": " << row.error
                << "\n";
    return out.str();
}

std::string emit_json(const SweepResult& result) {
    using json = nlohmann::ordered_json;
    const SweepSpec& spec = result.spec;
    json doc;
    doc["sweep"] = {
        {"axis", spec.axis},
        {"engine", engine_name(spec.engine)},
        {"points", spec.grid.size()},
        {"outputs", json::array()},
        {"pump_mode",
         spec.base.pump_mode == PumpMode::incoherent ? "incoherent"
                                                     : "coherent"},
        {"phonons_enabled", spec.base.phonons_enabled},
        {"temperature", round12(spec.base.bath.temperature)},
        {"g1_abs", round12(spec.base.bath.g1_abs)},
        {"calibrated", spec.calibrate},
    };
    for (OutputField f : spec.outputs)
        doc["sweep"]["outputs"].push_back(output_field_name(f));
    json columns = json::array();
    {
        std::istringstream names(kColumns);
        std::string name;
        while (std::getline(names, name, ',')) columns.push_back(name);
    }
    doc["columns"] = columns;
    doc["rows"] = json::array();
    for (const ResultRow& row : result.rows) {
        // NaN serializes as null.
        json r;
        r["axis"] = round12(row.axis_value);
        r["engine"] = engine_name(row.engine);
        r["p_ee"] = round12(row.populations.ee);
        r["p_plus"] = round12(row.populations.plus);
        r["p_minus"] = round12(row.populations.minus);
        r["p_gg"] = round12(row.populations.gg);
        r["mean_n"] = round12(row.mean_n);
        r["spee"] = round12(row.excess[0]);
        r["tpee"] = round12(row.excess[1]);
        r["thpee"] = round12(row.excess[2]);
        r["fpee"] = round12(row.excess[3]);
        r["residual"] = round12(row.residual);
        r["n_max"] = row.n_max;
        r["B"] = round12(row.franck_condon);
        r["flags"] = row.flags;
        doc["rows"].push_back(std::move(r));
    }
    json errors = json::array();
    for (const ResultRow& row : result.rows)
        if (row.flags & kFlagFailed)
            errors.push_back({{"axis", round12(row.axis_value)},
                              {"engine", engine_name(row.engine)},
                              {"message", row.error}});
    doc["errors"] = std::move(errors);
    return doc.dump(2) + "\n";
}

std::string emit(const SweepResult& result, const std::string& format) {
    if (format == "csv") return emit_csv(result);
    if (format == "json") return emit_json(result);
    throw ConfigError("unknown format '" + format + "' (expected csv or json)");
}

std::string emit_compare(const Comparison& comparison, const SweepSpec& spec,
                         const std::string& format) {
    if (format == "csv") {
        std::ostringstream out;
        out << "# qdlaser compare axis=" << spec.axis
            << " points=" << comparison.rows.size() << "\n";
        out << "axis,d_p_ee,d_p_plus,d_p_minus,d_p_gg,d_mean_n,d_mean_n_rel,"
               "d_rateeq_rel,failed\n";
        for (const CompareRow& row : comparison.rows) {
            out << format12(row.axis_value) << ',' << format12(row.d_ee) << ','
                << format12(row.d_plus) << ',' << format12(row.d_minus) << ','
                << format12(row.d_gg) << ',' << format12(row.d_mean_n) << ','
                << format12(row.d_mean_n_rel) << ','
                << format12(row.d_rateeq_rel) << ',' << (row.failed ? 1 : 0)
                << "\n";
        }
        out << "# max_pop_diff=" << format12(comparison.max_pop_diff)
            << " max_mean_n_rel=" << format12(comparison.max_mean_n_rel)
            << " max_rateeq_rel=" << format12(comparison.max_rateeq_rel)
            << " failed=" << comparison.failed_points << "\n";
        return out.str();
    }
    if (format == "json") {
        using json = nlohmann::ordered_json;
        json doc;
        doc["compare"] = {{"axis", spec.axis},
                          {"points", comparison.rows.size()}};
        doc["rows"] = json::array();
        for (const CompareRow& row : comparison.rows) {
            doc["rows"].push_back({{"axis", round12(row.axis_value)},
                                   {"d_p_ee", round12(row.d_ee)},
                                   {"d_p_plus", round12(row.d_plus)},
                                   {"d_p_minus", round12(row.d_minus)},
                                   {"d_p_gg", round12(row.d_gg)},
                                   {"d_mean_n", round12(row.d_mean_n)},
                                   {"d_mean_n_rel", round12(row.d_mean_n_rel)},
                                   {"d_rateeq_rel", round12(row.d_rateeq_rel)},
                                   {"failed", row.failed}});
        }
        doc["summary"] = {{"max_pop_diff", round12(comparison.max_pop_diff)},
                          {"max_mean_n_rel", round12(comparison.max_mean_n_rel)},
                          {"max_rateeq_rel", round12(comparison.max_rateeq_rel)},
                          {"failed", comparison.failed_points}};
        return doc.dump(2) + "\n";
    }
    throw ConfigError("unknown format '" + format + "' (expected csv or json)");
}

void write_text(const std::string& text, const std::string& path) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failure on '" + path + "'");
}

}  // namespace qdl
