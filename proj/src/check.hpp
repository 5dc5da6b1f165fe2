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

#include <string>
#include <vector>

#include "generator.hpp"

namespace qdl {

// One structural identity evaluated on a concrete configuration.
struct CheckItem {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool lower_bound = false;  // pass means value >= bound instead of <=
    bool pass = false;
};

struct CheckReport {
    std::vector<CheckItem> items;
    bool all_pass = true;
    int failures = 0;
};

// Build both generators for the configuration and verify trace preservation,
// steady-state quality, positivity, and the photon-ladder reduction's
// bookkeeping identities. Throws on configuration errors; identity
// violations are reported, not thrown.
CheckReport check_invariants(const ModelConfig& config);

// One aligned PASS/FAIL line per item plus a summary line.
std::string render_check(const CheckReport& report);
std::string render_check_json(const CheckReport& report);

}  // namespace qdl
