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

// Command-line front end. Talks to the core exclusively through the C API.
// Exit codes: 0 success, 1 configuration or I/O errors, 2 when the run
// finished but some grid points failed or some invariant checks did not hold.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "qdlaser/qdlaser.h"

namespace {

int report_error(qdl_status status) {
    std::cerr << "error (" << qdl_status_name(status)
              << "): " << qdl_last_error() << "\n";
    return 1;
}

int write_or_print(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return 0;
    }
    std::ofstream file(out, std::ios::binary | std::ios::trunc);
    if (!file) {
        std::cerr << "error (io): cannot open '" << out << "' for writing\n";
        return 1;
    }
    file << text;
    file.flush();
    if (!file) {
        std::cerr << "error (io): write failure on '" << out << "'\n";
        return 1;
    }
    return 0;
}

struct Options {
    std::string config;
    std::string out;
    std::string format;
    std::string engine;
    int workers = -1;  // -1: leave the scenario's setting alone
};

using SweepPtr = std::unique_ptr<qdl_sweep, decltype(&qdl_sweep_destroy)>;
using ModelPtr = std::unique_ptr<qdl_model, decltype(&qdl_model_destroy)>;

int run_table(const Options& opt, bool compare) {
    qdl_sweep* raw = nullptr;
    if (qdl_status s = qdl_sweep_load(opt.config.c_str(), &raw))
        return report_error(s);
    SweepPtr sweep(raw, &qdl_sweep_destroy);

    if (compare) {
        if (!opt.engine.empty() && opt.engine != "both") {
            std::cerr << "error (config): compare always runs both engines\n";
            return 1;
        }
        if (qdl_status s = qdl_sweep_set(sweep.get(), "engine", "both"))
            return report_error(s);
    } else if (!opt.engine.empty()) {
        if (qdl_status s =
                qdl_sweep_set(sweep.get(), "engine", opt.engine.c_str()))
            return report_error(s);
    }
    if (opt.workers >= 0)
        if (qdl_status s = qdl_sweep_set(sweep.get(), "workers",
                                         std::to_string(opt.workers).c_str()))
            return report_error(s);
    if (!opt.format.empty())
        if (qdl_status s =
                qdl_sweep_set(sweep.get(), "format", opt.format.c_str()))
            return report_error(s);
    if (!opt.out.empty())
        if (qdl_status s = qdl_sweep_set(sweep.get(), "out", opt.out.c_str()))
            return report_error(s);

    if (qdl_status s = qdl_sweep_run(sweep.get())) return report_error(s);
    if (qdl_status s = qdl_sweep_write(sweep.get(),
                                       compare ? "compare" : "table", nullptr,
                                       nullptr))
        return report_error(s);

    const int failed = qdl_sweep_failed_points(sweep.get());
    if (failed > 0) {
        std::cerr << failed << " grid point" << (failed == 1 ? "" : "s")
                  << " failed, see the output table\n";
        return 2;
    }
    return 0;
}

ModelPtr load_model(const Options& opt, int& error) {
    ModelPtr model(qdl_model_create(), &qdl_model_destroy);
    error = 0;
    if (!model) {
        std::cerr << "error (internal): out of memory\n";
        error = 1;
        return model;
    }
    if (!opt.config.empty())
        if (qdl_status s = qdl_model_load(model.get(), opt.config.c_str())) {
            error = report_error(s);
            return model;
        }
    return model;
}

int run_calibrate(const Options& opt) {
    int error = 0;
    ModelPtr model = load_model(opt, error);
    if (error) return error;
    if (qdl_status s = qdl_model_calibrate(model.get(), nullptr))
        return report_error(s);
    char value[64];
    if (qdl_status s =
            qdl_model_get(model.get(), "bath.g1_abs", value, sizeof value))
        return report_error(s);
    std::string text;
    if (opt.format == "json")
        text = std::string("{\n  \"g1_abs_ueV\": ") + value + "\n}\n";
    else
        text = std::string("g1_abs_ueV = ") + value + "\n";
    return write_or_print(text, opt.out);
}

int run_check(const Options& opt) {
    int error = 0;
    ModelPtr model = load_model(opt, error);
    if (error) return error;
    const char* report = nullptr;
    int failures = 0;
    if (qdl_status s = qdl_model_check(model.get(), &report, &failures))
        return report_error(s);
    if (int rc = write_or_print(report, opt.out)) return rc;
    return failures > 0 ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Steady states and photon statistics of two quantum dots in a lossy "
        "cavity with a phonon bath"};
    app.set_version_flag("--version", [] { return qdl_version(); });
    app.require_subcommand(1);

    Options opt;
    const auto add_common = [&](CLI::App* cmd, bool config_required) {
        CLI::Option* config =
            cmd->add_option("--config", opt.config, "scenario file");
        if (config_required) config->required();
        cmd->add_option("--out", opt.out, "output path, '-' for stdout");
        cmd->add_option("--format", opt.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* sweep = app.add_subcommand(
        "sweep", "run the scenario's parameter sweep and emit the table");
    add_common(sweep, true);
    sweep->add_option("--engine", opt.engine, "full, sme or both")
        ->check(CLI::IsMember({"full", "full_me", "sme", "both"}));
    sweep->add_option("--workers", opt.workers, "worker threads, 0 = cores")
        ->check(CLI::NonNegativeNumber);

    CLI::App* compare = app.add_subcommand(
        "compare",
        "run both engines over the scenario and emit their differences");
    add_common(compare, true);
    compare->add_option("--engine", opt.engine)->group("");  // accepted, must
                                                             // be 'both'
    compare->add_option("--workers", opt.workers, "worker threads, 0 = cores")
        ->check(CLI::NonNegativeNumber);

    CLI::App* calibrate = app.add_subcommand(
        "calibrate", "fit the absolute coupling scale so <B>(5 K) = 0.9");
    add_common(calibrate, false);

    CLI::App* check = app.add_subcommand(
        "check", "run the structural invariant suite on one configuration");
    add_common(check, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (app.got_subcommand(sweep)) return run_table(opt, false);
    if (app.got_subcommand(compare)) return run_table(opt, true);
    if (app.got_subcommand(calibrate)) return run_calibrate(opt);
    return run_check(opt);
}
