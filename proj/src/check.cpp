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

#include "check.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "reduction.hpp"
#include "steady.hpp"
#include "sweep.hpp"

namespace qdl {

namespace {

void add(CheckReport& report, std::string name, double value, double bound,
         bool lower_bound = false) {
    CheckItem item;
    item.name = std::move(name);
    item.value = value;
    item.bound = bound;
    item.lower_bound = lower_bound;
    item.pass = lower_bound ? value >= bound : value <= bound;
    if (!item.pass) {
        report.all_pass = false;
        ++report.failures;
    }
    report.items.push_back(std::move(item));
}

}  // namespace

CheckReport check_invariants(const ModelConfig& config) {
    validate(config);
    CheckReport report;
    const auto kernel = PhononKernel::build(config.bath);

    const Superoperator sme =
        sme_generator(config, kernel, rates_for(config, kernel));
    add(report, "sme trace-null columns", max_trace_violation(sme), 1e-10);
    const SteadyState st = solve_steady(sme);
    add(report, "sme steady residual", st.residual, 1e-8);
    add(report, "sme population sum",
        std::abs(st.populations.ee + st.populations.plus +
                 st.populations.minus + st.populations.gg - 1.0),
        1e-9);
    add(report, "sme minimum eigenvalue", st.min_eig, -1e-7, true);

    const Superoperator full = full_polaron_generator(config, kernel);
    add(report, "full trace-null columns", max_trace_violation(full), 1e-10);
    const SteadyState stf = solve_steady(full);
    add(report, "full steady residual", stf.residual, 1e-8);
    add(report, "full minimum eigenvalue", stf.min_eig, -1e-7, true);

    const PhotonRateModel model = reduce(sme, config.kappa);
    add(report, "reduction column defect", model.column_defect, 1e-8);
    add(report, "photon balance defect", balance_defect(model), 1e-8);
    const int f = model.n_max + 1;
    double gap = 0.0;
    for (int p = 0; p < 4; ++p)
        for (int n = 0; n < f; ++n)
            gap = std::max(gap, std::abs(model.diag_steady(p * f + n) -
                                         st.pn_ab[p][n]));
    add(report, "reduced steady-state gap", gap, 1e-8);
    return report;
}

std::string render_check(const CheckReport& report) {
    std::ostringstream out;
    for (const CheckItem& item : report.items) {
        out << (item.pass ? "PASS " : "FAIL ") << std::left << std::setw(28)
            << item.name << ' ' << format12(item.value)
            << (item.lower_bound ? " (floor " : " (bound ")
            << format12(item.bound) << ")\n";
    }
    if (report.all_pass)
        out << "all " << report.items.size() << " checks passed\n";
    else
        out << report.failures << " of " << report.items.size()
            << " checks failed\n";
    return out.str();
}

std::string render_check_json(const CheckReport& report) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["checks"] = json::array();
    for (const CheckItem& item : report.items)
        doc["checks"].push_back({{"name", item.name},
                                 {"value", round12(item.value)},
                                 {item.lower_bound ? "floor" : "bound",
                                  round12(item.bound)},
                                 {"pass", item.pass}});
    doc["failures"] = report.failures;
    doc["all_pass"] = report.all_pass;
    return doc.dump(2) + "\n";
}

}  // namespace qdl
