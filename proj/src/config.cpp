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

#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "reduction.hpp"

namespace qdl {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& value, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError(where + ": not a number: '" + value + "'");
    }
    if (used != value.size())
        throw ConfigError(where + ": trailing characters in '" + value + "'");
    if (!std::isfinite(v))
        throw ConfigError(where + ": value must be finite");
    return v;
}

int parse_int(const std::string& value, const std::string& where) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(value, &used);
    } catch (const std::exception&) {
        throw ConfigError(where + ": not an integer: '" + value + "'");
    }
    if (used != value.size())
        throw ConfigError(where + ": trailing characters in '" + value + "'");
    return v;
}

bool parse_bool(const std::string& value, const std::string& where) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError(where + ": expected true/false, got '" + value + "'");
}

std::string location(const IniEntry& entry) {
    return "[" + entry.section + "] " + entry.key + " (line " +
           std::to_string(entry.line) + ")";
}

double* model_field(ModelConfig& c, const std::string& key) {
    if (key == "g1") return &c.g1;
    if (key == "g2") return &c.g2;
    if (key == "kappa") return &c.kappa;
    if (key == "gamma1") return &c.gamma1;
    if (key == "gamma2") return &c.gamma2;
    if (key == "gamma1p") return &c.gamma1p;
    if (key == "gamma2p") return &c.gamma2p;
    if (key == "eta1") return &c.eta1;
    if (key == "eta2") return &c.eta2;
    if (key == "delta1") return &c.delta1;
    if (key == "delta2") return &c.delta2;
    if (key == "delta1p") return &c.delta1p;
    if (key == "delta2p") return &c.delta2p;
    if (key == "delta_cp") return &c.delta_cp;
    return nullptr;
}

double* bath_field(BathParams& b, const std::string& key) {
    if (key == "temperature") return &b.temperature;
    if (key == "g1_abs") return &b.g1_abs;
    if (key == "alpha_p") return &b.alpha_p;
    if (key == "omega_b") return &b.omega_b;
    return nullptr;
}

std::string real_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

const char* engine_name(Engine engine) {
    switch (engine) {
        case Engine::full_me: return "full_me";
        case Engine::sme: return "sme";
        case Engine::both: return "both";
    }
    return "?";
}

Engine parse_engine(const std::string& name) {
    if (name == "full_me" || name == "full") return Engine::full_me;
    if (name == "sme") return Engine::sme;
    if (name == "both") return Engine::both;
    throw ConfigError("unknown engine '" + name +
                      "' (expected full_me, sme or both)");
}

const char* output_field_name(OutputField field) {
    switch (field) {
        case OutputField::populations: return "populations";
        case OutputField::mean_n: return "mean_n";
        case OutputField::excess: return "excess";
        case OutputField::me_sme_compare: return "me_sme_compare";
        case OutputField::rateeq_sme_compare: return "rateeq_sme_compare";
    }
    return "?";
}

OutputField parse_output_field(const std::string& name) {
    for (OutputField f :
         {OutputField::populations, OutputField::mean_n, OutputField::excess,
          OutputField::me_sme_compare, OutputField::rateeq_sme_compare}) {
        if (name == output_field_name(f)) return f;
    }
    throw ConfigError("unknown output field '" + name + "'");
}

const char* const kAxisNames[11] = {
    "eta",     "eta1",    "eta2",        "delta",
    "delta1",  "delta2",  "delta1p",     "delta2p",
    "delta_cp", "eta_resonant", "temperature",
};

void apply_axis(ModelConfig& config, const std::string& axis, double value) {
    if (axis == "eta") {
        config.eta1 = value;
        config.eta2 = value;
    } else if (axis == "eta1") {
        config.eta1 = value;
    } else if (axis == "eta2") {
        config.eta2 = value;
    } else if (axis == "delta") {
        if (config.pump_mode == PumpMode::incoherent) {
            config.delta1 = value;
            config.delta2 = value;
        } else {
            config.delta1p = value;
            config.delta2p = value;
        }
    } else if (axis == "delta1") {
        config.delta1 = value;
    } else if (axis == "delta2") {
        config.delta2 = value;
    } else if (axis == "delta1p") {
        config.delta1p = value;
    } else if (axis == "delta2p") {
        config.delta2p = value;
    } else if (axis == "delta_cp") {
        config.delta_cp = value;
    } else if (axis == "eta_resonant") {
        if (config.pump_mode != PumpMode::coherent)
            throw ConfigError("axis eta_resonant requires pump_mode = coherent");
        config.eta1 = value;
        config.eta2 = value;
        config.delta_cp = -dressed_resonance(config.delta1p, value);
    } else if (axis == "temperature") {
        config.bath.temperature = value;
    } else {
        std::ostringstream known;
        for (const char* name : kAxisNames) known << " " << name;
        throw ConfigError("unknown axis '" + axis + "'; expected one of" +
                          known.str());
    }
}

void apply_config_key(ModelConfig& config, const std::string& section,
                      const std::string& key, const std::string& value,
                      const std::string& where_in) {
    const std::string where =
        where_in.empty() ? "[" + section + "] " + key : where_in;
    if (section == "model") {
        if (key == "pump_mode") {
            if (value == "incoherent")
                config.pump_mode = PumpMode::incoherent;
            else if (value == "coherent")
                config.pump_mode = PumpMode::coherent;
            else
                throw ConfigError(where + ": expected incoherent or coherent");
        } else if (key == "n_max") {
            config.n_max = parse_int(value, where);
        } else if (key == "phonons_enabled") {
            config.phonons_enabled = parse_bool(value, where);
        } else if (key == "eta" || key == "delta") {
            apply_axis(config, key, parse_double(value, where));
        } else if (double* field = model_field(config, key)) {
            *field = parse_double(value, where);
        } else {
            throw ConfigError(where + ": unknown key");
        }
    } else if (section == "bath") {
        if (double* field = bath_field(config.bath, key))
            *field = parse_double(value, where);
        else
            throw ConfigError(where + ": unknown key");
    } else {
        throw ConfigError(where + ": unknown section");
    }
}

std::string get_config_key(const ModelConfig& config,
                           const std::string& section,
                           const std::string& key) {
    ModelConfig& mut = const_cast<ModelConfig&>(config);  // fields read only
    if (section == "model") {
        if (key == "pump_mode")
            return config.pump_mode == PumpMode::incoherent ? "incoherent"
                                                            : "coherent";
        if (key == "n_max") return std::to_string(config.n_max);
        if (key == "phonons_enabled")
            return config.phonons_enabled ? "true" : "false";
        if (const double* field = model_field(mut, key))
            return real_text(*field);
        if (key == "eta" || key == "delta")
            throw ConfigError("[model] " + key +
                              ": set-only alias, read the per-dot fields");
    } else if (section == "bath") {
        if (const double* field = bath_field(mut.bath, key))
            return real_text(*field);
    } else {
        throw ConfigError("[" + section + "] " + key + ": unknown section");
    }
    throw ConfigError("[" + section + "] " + key + ": unknown key");
}

void validate(const SweepSpec& spec) {
    validate(spec.base);

    bool axis_known = false;
    for (const char* name : kAxisNames) axis_known |= spec.axis == name;
    if (!axis_known) {
        ModelConfig probe = spec.base;
        apply_axis(probe, spec.axis, 0.0);  // throws with the axis list
    }
    if (spec.axis == "eta_resonant" &&
        spec.base.pump_mode != PumpMode::coherent)
        throw ConfigError("axis eta_resonant requires pump_mode = coherent");

    if (spec.grid.empty()) throw ConfigError("sweep grid is empty");
    for (double v : spec.grid)
        if (!std::isfinite(v))
            throw ConfigError("sweep grid contains a non-finite value");
    if (spec.grid.size() > 1) {
        const bool up = spec.grid[1] > spec.grid[0];
        for (std::size_t i = 1; i < spec.grid.size(); ++i) {
            const bool step_up = spec.grid[i] > spec.grid[i - 1];
            if (spec.grid[i] == spec.grid[i - 1] || step_up != up)
                throw ConfigError("sweep grid must be strictly monotone");
        }
    }
    if (spec.axis == "temperature")
        for (double v : spec.grid)
            if (v < 0.0)
                throw ConfigError("temperature grid values must be >= 0");

    std::set<OutputField> seen;
    for (OutputField f : spec.outputs)
        if (!seen.insert(f).second)
            throw ConfigError(std::string("duplicate output field '") +
                              output_field_name(f) + "'");
    if (seen.count(OutputField::me_sme_compare) && spec.engine != Engine::both)
        throw ConfigError("me_sme_compare requires engine = both");
    if (seen.count(OutputField::rateeq_sme_compare) &&
        spec.engine == Engine::full_me)
        throw ConfigError("rateeq_sme_compare requires the sme engine");

    if (spec.workers < 0) throw ConfigError("workers must be >= 0");
    if (spec.format != "csv" && spec.format != "json")
        throw ConfigError("unknown format '" + spec.format +
                          "' (expected csv or json)");
}

std::vector<IniEntry> parse_ini(const std::string& text) {
    std::vector<IniEntry> entries;
    std::set<std::string> keys;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        // Trailing comments need leading whitespace so values stay literal.
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if ((raw[i] == '#' || raw[i] == ';') &&
                (i == 0 ||
                 std::isspace(static_cast<unsigned char>(raw[i - 1])))) {
                raw.erase(i);
                break;
            }
        }
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(line_no) +
                                  ": empty section name");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected key = value, got '" + line + "'");
        IniEntry entry;
        entry.section = section;
        entry.key = trim(line.substr(0, eq));
        entry.value = trim(line.substr(eq + 1));
        entry.line = line_no;
        if (entry.key.empty())
            throw ConfigError("line " + std::to_string(line_no) +
                              ": missing key");
        if (entry.section.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key '" +
                              entry.key + "' before any section");
        if (!keys.insert(entry.section + "." + entry.key).second)
            throw ConfigError("line " + std::to_string(line_no) +
                              ": duplicate key '" + entry.key + "' in [" +
                              entry.section + "]");
        entries.push_back(std::move(entry));
    }
    return entries;
}

std::vector<double> parse_grid(const std::string& text) {
    const std::string spec = trim(text);
    if (spec.empty()) throw ConfigError("grid: empty specification");
    std::vector<double> grid;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::size_t pos = 0;
        while (true) {
            const std::size_t colon = spec.find(':', pos);
            parts.push_back(trim(spec.substr(pos, colon - pos)));
            if (colon == std::string::npos) break;
            pos = colon + 1;
        }
        if (parts.size() != 3)
            throw ConfigError("grid: expected start:stop:count, got '" + spec +
                              "'");
        const double start = parse_double(parts[0], "grid start");
        const double stop = parse_double(parts[1], "grid stop");
        const int count = parse_int(parts[2], "grid count");
        if (count < 2) throw ConfigError("grid: count must be >= 2");
        grid.reserve(static_cast<std::size_t>(count));
        const double step = (stop - start) / (count - 1);
        for (int i = 0; i < count; ++i)
            grid.push_back(i + 1 == count ? stop : start + i * step);
        return grid;
    }
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = spec.find(',', pos);
        const std::string item = trim(spec.substr(pos, comma - pos));
        grid.push_back(parse_double(item, "grid value"));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return grid;
}

SweepSpec parse_scenario(const std::string& text) {
    const std::vector<IniEntry> entries = parse_ini(text);
    SweepSpec spec;
    spec.outputs.clear();
    bool outputs_given = false;

    // Paired detuning keys depend on the pump mode, so resolve it first.
    for (const IniEntry& e : entries) {
        if (e.section != "model" || e.key != "pump_mode") continue;
        if (e.value == "incoherent")
            spec.base.pump_mode = PumpMode::incoherent;
        else if (e.value == "coherent")
            spec.base.pump_mode = PumpMode::coherent;
        else
            throw ConfigError(location(e) +
                              ": expected incoherent or coherent");
    }

    for (const IniEntry& e : entries) {
        const std::string where = location(e);
        if (e.section == "model" || e.section == "bath") {
            if (e.section == "model" && e.key == "pump_mode") continue;
            if (e.section == "bath" && e.key == "calibrate")
                spec.calibrate = parse_bool(e.value, where);
            else
                apply_config_key(spec.base, e.section, e.key, e.value, where);
        } else if (e.section == "sweep") {
            if (e.key == "axis") {
                spec.axis = e.value;
            } else if (e.key == "grid") {
                spec.grid = parse_grid(e.value);
            } else if (e.key == "engine") {
                spec.engine = parse_engine(e.value);
            } else if (e.key == "workers") {
                spec.workers = parse_int(e.value, where);
            } else {
                throw ConfigError(where + ": unknown key");
            }
        } else if (e.section == "output") {
            if (e.key == "fields") {
                outputs_given = true;
                std::size_t pos = 0;
                while (pos <= e.value.size()) {
                    const std::size_t comma = e.value.find(',', pos);
                    const std::string item =
                        trim(e.value.substr(pos, comma - pos));
                    if (!item.empty())
                        spec.outputs.push_back(parse_output_field(item));
                    if (comma == std::string::npos) break;
                    pos = comma + 1;
                }
            } else if (e.key == "file") {
                spec.out_file = e.value;
            } else if (e.key == "format") {
                spec.format = e.value;
            } else {
                throw ConfigError(where + ": unknown key");
            }
        } else {
            throw ConfigError("unknown section [" + e.section + "] (line " +
                              std::to_string(e.line) + ")");
        }
    }

    if (!outputs_given)
        spec.outputs = {OutputField::populations, OutputField::mean_n};
    validate(spec);
    return spec;
}

SweepSpec load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failure on '" + path + "'");
    try {
        return parse_scenario(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace qdl
