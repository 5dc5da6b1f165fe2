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

#include "qdlaser/qdlaser.h"

#include <array>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "check.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "reduction.hpp"
#include "steady.hpp"
#include "sweep.hpp"

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

thread_local std::string g_last_error;

qdl_status fail(qdl_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

// Exceptions stop at the ABI boundary.
template <typename Fn>
qdl_status guarded(Fn&& fn) {
    try {
        fn();
        return QDL_OK;
    } catch (const qdl::QdlError& e) {
        return fail(static_cast<qdl_status>(static_cast<int>(e.code())),
                    e.what());
    } catch (const std::bad_alloc&) {
        return fail(QDL_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(QDL_ERR_INTERNAL, e.what());
    }
}

qdl_status need(const void* handle, const char* what) {
    if (handle) return QDL_OK;
    return fail(QDL_ERR_INVALID_ARG, std::string(what) + " is null");
}

static_assert(QDL_OK == static_cast<int>(qdl::ErrorCode::ok));
static_assert(QDL_ERR_INTERNAL == static_cast<int>(qdl::ErrorCode::internal));

}  // namespace

struct qdl_model {
    qdl::ModelConfig config;
    bool calibrated = false;
    std::string report;
};

struct qdl_result {
    qdl::SteadyState state;
    double franck_condon = 1.0;
    int n_max = 0;
    bool has_excess = false;
    std::array<double, 4> excess{kNaN, kNaN, kNaN, kNaN};
    double rateeq_mean_n = kNaN;
};

struct qdl_sweep {
    qdl::SweepSpec spec;
    qdl::SweepResult result;
    bool ran = false;
    std::string rendered;
};

namespace {

std::string render_sweep(qdl_sweep* sweep, const char* kind,
                         const char* format) {
    if (!sweep->ran) throw qdl::InvalidArgError("sweep has not been run");
    const std::string fmt = format ? format : sweep->spec.format;
    const std::string which = kind ? kind : "table";
    if (which == "table") return qdl::emit(sweep->result, fmt);
    if (which == "compare")
        return qdl::emit_compare(qdl::compare_engines(sweep->result),
                                 sweep->result.spec, fmt);
    throw qdl::InvalidArgError("unknown render kind '" + which +
                               "' (expected table or compare)");
}

}  // namespace

extern "C" {

const char* qdl_version(void) { return "0.1.0"; }

const char* qdl_status_name(qdl_status status) {
    const int code = static_cast<int>(status);
    if (code < QDL_OK || code > QDL_ERR_INTERNAL) return "?";
    return qdl::error_code_name(static_cast<qdl::ErrorCode>(code));
}

const char* qdl_last_error(void) { return g_last_error.c_str(); }

qdl_model* qdl_model_create(void) { return new (std::nothrow) qdl_model(); }

void qdl_model_destroy(qdl_model* model) { delete model; }

qdl_status qdl_model_set(qdl_model* model, const char* key,
                         const char* value) {
    if (qdl_status s = need(model, "model")) return s;
    if (qdl_status s = need(key, "key")) return s;
    if (qdl_status s = need(value, "value")) return s;
    return guarded([&] {
        const std::string k = key;
        const std::size_t dot = k.find('.');
        if (dot == std::string::npos)
            qdl::apply_config_key(model->config, "model", k, value);
        else
            qdl::apply_config_key(model->config, k.substr(0, dot),
                                  k.substr(dot + 1), value);
    });
}

qdl_status qdl_model_get(const qdl_model* model, const char* key, char* buf,
                         size_t buf_len) {
    if (qdl_status s = need(model, "model")) return s;
    if (qdl_status s = need(key, "key")) return s;
    if (qdl_status s = need(buf, "buf")) return s;
    return guarded([&] {
        const std::string k = key;
        const std::size_t dot = k.find('.');
        const std::string text =
            dot == std::string::npos
                ? qdl::get_config_key(model->config, "model", k)
                : qdl::get_config_key(model->config, k.substr(0, dot),
                                      k.substr(dot + 1));
        if (text.size() + 1 > buf_len)
            throw qdl::InvalidArgError("buffer too small, need " +
                                       std::to_string(text.size() + 1) +
                                       " bytes");
        std::memcpy(buf, text.c_str(), text.size() + 1);
    });
}

qdl_status qdl_model_load(qdl_model* model, const char* path) {
    if (qdl_status s = need(model, "model")) return s;
    if (qdl_status s = need(path, "path")) return s;
    return guarded([&] {
        const qdl::SweepSpec spec = qdl::load_scenario(path);
        model->config = spec.base;
        model->calibrated = spec.calibrate;
        if (spec.calibrate)
            model->config.bath.g1_abs =
                qdl::calibrate_g1_abs(model->config.bath);
    });
}

qdl_status qdl_model_calibrate(qdl_model* model, double* g1_abs) {
    if (qdl_status s = need(model, "model")) return s;
    return guarded([&] {
        model->config.bath.g1_abs = qdl::calibrate_g1_abs(model->config.bath);
        model->calibrated = true;
        if (g1_abs) *g1_abs = model->config.bath.g1_abs;
    });
}

qdl_status qdl_model_check(qdl_model* model, const char** report,
                           int* failures) {
    if (qdl_status s = need(model, "model")) return s;
    return guarded([&] {
        const qdl::CheckReport result = qdl::check_invariants(model->config);
        model->report = qdl::render_check(result);
        if (report) *report = model->report.c_str();
        if (failures) *failures = result.failures;
    });
}

qdl_status qdl_solve_steady(const qdl_model* model, const char* engine,
                            qdl_result** out) {
    if (qdl_status s = need(model, "model")) return s;
    if (qdl_status s = need(engine, "engine")) return s;
    if (qdl_status s = need(out, "out")) return s;
    *out = nullptr;
    return guarded([&] {
        const qdl::Engine eng = qdl::parse_engine(engine);
        if (eng == qdl::Engine::both)
            throw qdl::InvalidArgError(
                "solve takes one engine, sweep handles both");
        const qdl::ModelConfig& config = model->config;
        qdl::validate(config);
        const auto kernel = qdl::PhononKernel::build(config.bath);
        const qdl::Superoperator gen =
            eng == qdl::Engine::full_me
                ? qdl::full_polaron_generator(config, kernel)
                : qdl::sme_generator(config, kernel,
                                     qdl::rates_for(config, kernel));
        auto result = std::make_unique<qdl_result>();
        result->state = qdl::solve_steady(gen);
        result->n_max = config.n_max;
        result->franck_condon =
            config.phonons_enabled ? kernel->franck_condon() : 1.0;
        if (eng == qdl::Engine::sme) {
            const qdl::PhotonRateModel reduced =
                qdl::reduce(gen, config.kappa);
            const qdl::EmissionReport emission =
                qdl::excess_emission(reduced, config.kappa);
            result->has_excess = true;
            for (std::size_t k = 0;
                 k < result->excess.size() && k < emission.excess.size(); ++k)
                result->excess[k] = emission.excess[k];
            result->rateeq_mean_n = emission.mean_n_rate_eq;
        }
        *out = result.release();
    });
}

void qdl_result_destroy(qdl_result* result) { delete result; }

qdl_status qdl_result_get(const qdl_result* result, const char* key,
                          double* value) {
    if (qdl_status s = need(result, "result")) return s;
    if (qdl_status s = need(key, "key")) return s;
    if (qdl_status s = need(value, "value")) return s;
    return guarded([&] {
        const std::string k = key;
        const qdl::SteadyState& st = result->state;
        if (k == "p_ee") {
            *value = st.populations.ee;
        } else if (k == "p_plus") {
            *value = st.populations.plus;
        } else if (k == "p_minus") {
            *value = st.populations.minus;
        } else if (k == "p_gg") {
            *value = st.populations.gg;
        } else if (k == "mean_n") {
            *value = st.mean_n;
        } else if (k == "residual") {
            *value = st.residual;
        } else if (k == "min_eig") {
            *value = st.min_eig;
        } else if (k == "B") {
            *value = result->franck_condon;
        } else if (k == "n_max") {
            *value = result->n_max;
        } else if (k == "spee" || k == "tpee" || k == "thpee" || k == "fpee" ||
                   k == "rateeq_mean_n") {
            if (!result->has_excess)
                throw qdl::InvalidArgError(k + " is only on sme results");
            if (k == "spee")
                *value = result->excess[0];
            else if (k == "tpee")
                *value = result->excess[1];
            else if (k == "thpee")
                *value = result->excess[2];
            else if (k == "fpee")
                *value = result->excess[3];
            else
                *value = result->rateeq_mean_n;
        } else {
            throw qdl::InvalidArgError("unknown result key '" + k + "'");
        }
    });
}

qdl_status qdl_result_pn(const qdl_result* result, double* pn, size_t* len) {
    if (qdl_status s = need(result, "result")) return s;
    if (qdl_status s = need(len, "len")) return s;
    const std::size_t size = result->state.pn.size();
    if (!pn) {
        *len = size;
        return QDL_OK;
    }
    if (*len < size)
        return fail(QDL_ERR_INVALID_ARG,
                    "pn buffer holds " + std::to_string(*len) + ", need " +
                        std::to_string(size));
    std::memcpy(pn, result->state.pn.data(), size * sizeof(double));
    *len = size;
    return QDL_OK;
}

qdl_status qdl_sweep_load(const char* path, qdl_sweep** out) {
    if (qdl_status s = need(path, "path")) return s;
    if (qdl_status s = need(out, "out")) return s;
    *out = nullptr;
    return guarded([&] {
        auto sweep = std::make_unique<qdl_sweep>();
        sweep->spec = qdl::load_scenario(path);
        *out = sweep.release();
    });
}

qdl_status qdl_sweep_parse(const char* text, qdl_sweep** out) {
    if (qdl_status s = need(text, "text")) return s;
    if (qdl_status s = need(out, "out")) return s;
    *out = nullptr;
    return guarded([&] {
        auto sweep = std::make_unique<qdl_sweep>();
        sweep->spec = qdl::parse_scenario(text);
        *out = sweep.release();
    });
}

void qdl_sweep_destroy(qdl_sweep* sweep) { delete sweep; }

qdl_status qdl_sweep_set(qdl_sweep* sweep, const char* key,
                         const char* value) {
    if (qdl_status s = need(sweep, "sweep")) return s;
    if (qdl_status s = need(key, "key")) return s;
    if (qdl_status s = need(value, "value")) return s;
    return guarded([&] {
        const std::string k = key;
        qdl::SweepSpec next = sweep->spec;
        if (k == "engine") {
            next.engine = qdl::parse_engine(value);
        } else if (k == "workers") {
            next.workers = std::stoi(value);
        } else if (k == "format") {
            next.format = value;
        } else if (k == "out") {
            next.out_file = value;
        } else {
            throw qdl::InvalidArgError("unknown sweep override '" + k + "'");
        }
        qdl::validate(next);
        sweep->spec = std::move(next);
        sweep->ran = false;
    });
}

qdl_status qdl_sweep_run(qdl_sweep* sweep) {
    if (qdl_status s = need(sweep, "sweep")) return s;
    return guarded([&] {
        sweep->result = qdl::run_sweep(sweep->spec);
        sweep->ran = true;
    });
}

int qdl_sweep_points(const qdl_sweep* sweep) {
    return sweep ? static_cast<int>(sweep->spec.grid.size()) : -1;
}

int qdl_sweep_failed_points(const qdl_sweep* sweep) {
    return sweep && sweep->ran ? sweep->result.failed_points : -1;
}

qdl_status qdl_sweep_render(qdl_sweep* sweep, const char* kind,
                            const char* format, const char** text) {
    if (qdl_status s = need(sweep, "sweep")) return s;
    if (qdl_status s = need(text, "text")) return s;
    return guarded([&] {
        sweep->rendered = render_sweep(sweep, kind, format);
        *text = sweep->rendered.c_str();
    });
}

qdl_status qdl_sweep_write(qdl_sweep* sweep, const char* kind,
                           const char* format, const char* path) {
    if (qdl_status s = need(sweep, "sweep")) return s;
    return guarded([&] {
        std::string target = path ? path : sweep->spec.out_file;
        if (target.empty()) target = "-";
        qdl::write_text(render_sweep(sweep, kind, format), target);
    });
}

}  // extern "C"
