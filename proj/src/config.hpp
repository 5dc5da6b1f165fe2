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

enum class Engine { full_me, sme, both };

const char* engine_name(Engine engine);
Engine parse_engine(const std::string& name);  // "full_me"/"full", "sme", "both"

// Quantities a sweep reports. populations and mean_n come with every solve;
// excess triggers the photon-resolved reduction on sme rows; the two compare
// fields select columns of the comparison table.
enum class OutputField {
    populations,
    mean_n,
    excess,
    me_sme_compare,
    rateeq_sme_compare,
};

const char* output_field_name(OutputField field);
OutputField parse_output_field(const std::string& name);

struct SweepSpec {
    ModelConfig base;
    std::string axis = "eta";
    std::vector<double> grid;
    std::vector<OutputField> outputs = {OutputField::populations,
                                        OutputField::mean_n};
    Engine engine = Engine::sme;
    int workers = 0;       // 0: one per available core
    bool calibrate = false;  // resolve bath.g1_abs before running
    std::string out_file;  // empty: caller decides (CLI falls back to stdout)
    std::string format = "csv";
};

// Swept parameters. "eta" and "delta" move both dots together; "delta"
// follows the pump mode (cavity detunings when incoherent, laser detunings
// when coherent). "eta_resonant" (coherent only) moves both pump amplitudes
// and locks delta_cp onto the lower dressed resonance -sqrt(delta1p^2+4v^2).
// The rest name single ModelConfig fields.
extern const char* const kAxisNames[11];

// Throws ConfigError for an unknown axis.
void apply_axis(ModelConfig& config, const std::string& axis, double value);

// Set one [model]/[bath] key on an existing config; the paired "eta" and
// "delta" keys follow the current pump mode. `where` labels errors (defaults
// to "[section] key"). Throws ConfigError.
void apply_config_key(ModelConfig& config, const std::string& section,
                      const std::string& key, const std::string& value,
                      const std::string& where = "");

// Read a concrete key back as scenario-file text, reals at 12 significant
// digits. The paired aliases are set-only. Throws ConfigError.
std::string get_config_key(const ModelConfig& config,
                           const std::string& section, const std::string& key);

// Grid, axis, outputs, engine, format and base-config consistency. The grid
// must be non-empty, finite and strictly monotone. Throws ConfigError.
void validate(const SweepSpec& spec);

// One key = value line of a scenario file, file order preserved.
struct IniEntry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
};

// Sections in brackets, '#'/';' comments (full-line, or trailing after
// whitespace), keys before any section or duplicated keys are errors.
std::vector<IniEntry> parse_ini(const std::string& text);

// "start:stop:count" (inclusive, count >= 2) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text);

// Scenario text with [model], [bath], [sweep] and [output] sections; keys
// mirror the ModelConfig and BathParams field names. Validates the result.
SweepSpec parse_scenario(const std::string& text);

// Throws IoError when the file cannot be read.
SweepSpec load_scenario(const std::string& path);

}  // namespace qdl
