/*
   Copyright 2026 The spotvol Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace spotvol::cli {

namespace {

std::string number_text(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

template <class T>
T get_as(const Layer& layer, const char* key) {
    try {
        return layer.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw UsageError(std::string("key '") + key + "' has the wrong type");
    }
}

template <class T>
std::vector<T> get_list(const Layer& layer, const char* key) {
    const auto& v = layer.at(key);
    if (!v.is_array()) return {get_as<T>(layer, key)};
    std::vector<T> out;
    try {
        for (const auto& e : v) out.push_back(e.get<T>());
    } catch (const nlohmann::json::exception&) {
        throw UsageError(std::string("key '") + key + "' has the wrong element type");
    }
    return out;
}

std::int64_t get_integer(const Layer& layer, const char* key) {
    const auto& v = layer.at(key);
    if (!v.is_number_integer()) throw UsageError(std::string("key '") + key + "' must be an integer");
    return v.get<std::int64_t>();
}

const std::vector<std::int64_t> kPaperN = {780, 1560, 4680, 7800, 11700, 23400};
const std::vector<double> kPaperTau = {0.3, 0.5, 0.7};

} // namespace

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "model",  "params",      "sigma",   "drift",        "rho",
        "n",      "tau",         "kn",      "kn_c",         "kn_exponent",
        "kn_rule", "level",      "replications", "seed",    "refinement",
        "method", "paper_constants", "q2_form", "input",    "output",
        "format", "kernel",      "bandwidth", "horizon",    "threads",
        "crn"};
    return keys;
}

std::vector<std::string> preset_names() { return {"paper-model1", "paper-model2", "oracle-constvol"}; }

Layer preset_layer(const std::string& name) {
    Layer l = Layer::object();
    if (name == "paper-model1" || name == "paper-model2") {
        l["model"] = name == "paper-model1" ? "model1" : "model2";
        l["n"] = kPaperN;
        l["tau"] = kPaperTau;
        l["kn_rule"] = "table-matching";
        l["level"] = 0.95;
        l["replications"] = 2000;
        l["refinement"] = 10;
        return l;
    }
    if (name == "oracle-constvol") {
        l["model"] = "constant_vol";
        l["sigma"] = 1.0;
        l["drift"] = 0.0;
        l["n"] = std::vector<std::int64_t>{1000};
        l["tau"] = std::vector<double>{0.5};
        l["kn"] = 50;
        l["level"] = 0.95;
        l["replications"] = 10000;
        l["refinement"] = 1;
        return l;
    }
    throw UsageError("unknown preset '" + name + "' (expected paper-model1, paper-model2 or oracle-constvol)");
}

void check_keys(const Layer& layer, const std::string& source) {
    if (!layer.is_object()) throw UsageError(source + ": configuration must be a JSON object");
    const auto& keys = known_keys();
    for (const auto& item : layer.items()) {
        if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
            throw UsageError(source + ": unknown key '" + item.key() + "'");
        }
    }
}

Layer parse_config_text(const std::string& text, const std::string& source) {
    Layer l;
    try {
        l = Layer::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(source + ": " + e.what());
    }
    check_keys(l, source);
    return l;
}

Layer load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config_text(os.str(), path);
}

Layer merge_layers(const std::vector<Layer>& layers) {
    Layer out = Layer::object();
    for (const auto& l : layers) {
        // A rule given in a later layer replaces a fixed kn or rule
        // coefficients from earlier ones.
        if (l.contains("kn_rule") || l.contains("kn_c") || l.contains("kn_exponent")) {
            if (!l.contains("kn")) out.erase("kn");
        }
        if (l.contains("kn_rule")) {
            if (!l.contains("kn_c")) out.erase("kn_c");
            if (!l.contains("kn_exponent")) out.erase("kn_exponent");
        }
        for (const auto& item : l.items()) {
            if (item.key() == "params" && out.contains("params") && item.value().is_object()) {
                for (const auto& p : item.value().items()) out["params"][p.key()] = p.value();
            } else {
                out[item.key()] = item.value();
            }
        }
    }
    return out;
}

Command command_from_string(const std::string& name) {
    if (name == "simulate") return Command::simulate;
    if (name == "estimate") return Command::estimate;
    if (name == "coverage") return Command::coverage;
    if (name == "audit") return Command::audit;
    throw UsageError("unknown command '" + name + "'");
}

const char* to_string(Command command) noexcept {
    switch (command) {
        case Command::simulate: return "simulate";
        case Command::estimate: return "estimate";
        case Command::coverage: return "coverage";
        case Command::audit: return "audit";
    }
    return "unknown";
}

bool RunConfig::uses_table_matching_rule() const {
    return !kn && kn_c == 0.5 && kn_exponent == 0.5;
}

RunConfig resolve(Command command, const Layer& merged) {
    check_keys(merged, "configuration");
    RunConfig c;
    c.command = command;
    const auto has = [&](const char* k) { return merged.contains(k) && !merged[k].is_null(); };

    if (command == Command::estimate) c.kn_exponent = 0.25;
    if (command == Command::audit) {
        c.model = "constant_vol";
        c.kn = 50;
        c.replications = 1000000;
    }
    if (has("model")) c.model = get_as<std::string>(merged, "model");
    if (has("params")) {
        if (!merged["params"].is_object()) throw UsageError("key 'params' must be an object");
        for (const auto& p : merged["params"].items()) {
            if (!p.value().is_number()) throw UsageError("model parameter '" + p.key() + "' must be a number");
            c.params[p.key()] = p.value().get<double>();
        }
    }
    if (has("sigma")) c.sigma = get_as<double>(merged, "sigma");
    if (has("drift")) c.drift = get_as<double>(merged, "drift");
    if (has("rho")) c.rho = get_as<double>(merged, "rho");
    if (has("n")) {
        if (merged["n"].is_array()) {
            for (const auto& e : merged["n"]) {
                if (!e.is_number_integer()) throw UsageError("key 'n' must hold integers");
                c.n.push_back(e.get<std::int64_t>());
            }
        } else {
            c.n.push_back(get_integer(merged, "n"));
        }
    }
    if (has("tau")) c.tau = get_list<double>(merged, "tau");
    if (has("kn")) c.kn = get_integer(merged, "kn");
    if (has("kn_rule")) {
        c.kn_rule = get_as<std::string>(merged, "kn_rule");
        if (c.kn_rule == "table-matching") {
            c.kn_c = 0.5;
            c.kn_exponent = 0.5;
        } else if (c.kn_rule == "paper-stated") {
            c.kn_c = 0.5;
            c.kn_exponent = 0.25;
        } else {
            throw UsageError("unknown kn rule '" + c.kn_rule + "' (expected table-matching or paper-stated)");
        }
    }
    if (has("kn_c")) c.kn_c = get_as<double>(merged, "kn_c");
    if (has("kn_exponent")) c.kn_exponent = get_as<double>(merged, "kn_exponent");
    if (c.kn_c == 0.5 && c.kn_exponent == 0.5) c.kn_rule = "table-matching";
    else if (c.kn_c == 0.5 && c.kn_exponent == 0.25) c.kn_rule = "paper-stated";
    else c.kn_rule = "custom";
    if (has("level")) c.level = get_as<double>(merged, "level");
    if (has("replications")) c.replications = get_integer(merged, "replications");
    if (has("seed")) {
        const auto& s = merged["seed"];
        if (s.is_number_unsigned()) c.seed = s.get<std::uint64_t>();
        else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) c.seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
        else throw UsageError("key 'seed' must be a nonnegative integer");
    }
    if (has("refinement")) c.refinement = static_cast<int>(get_integer(merged, "refinement"));
    if (has("method")) c.methods = get_list<std::string>(merged, "method");
    if (has("paper_constants")) c.paper_constants = get_as<bool>(merged, "paper_constants");
    if (has("q2_form")) {
        c.q2_form = get_as<std::string>(merged, "q2_form");
        if (c.q2_form != "derived" && c.q2_form != "as_printed") {
            throw UsageError("q2_form must be 'derived' or 'as_printed'");
        }
    }
    if (has("input")) c.input = get_as<std::string>(merged, "input");
    if (has("output")) c.output = get_as<std::string>(merged, "output");
    if (has("format")) c.format = get_as<std::string>(merged, "format");
    if (c.format != "csv" && c.format != "json") throw UsageError("format must be csv or json");
    if (has("kernel")) c.kernel = get_as<std::string>(merged, "kernel");
    if (has("bandwidth")) c.bandwidth = get_as<double>(merged, "bandwidth");
    if (has("horizon")) c.horizon = get_as<double>(merged, "horizon");
    if (has("threads")) c.threads = static_cast<int>(get_integer(merged, "threads"));
    if (has("crn")) c.common_random_numbers = get_as<bool>(merged, "crn");
    if (c.threads < 0) throw UsageError("threads must be >= 0");

    if (c.methods.empty()) {
        c.methods = {"normal_one_sided", "edgeworth_one_sided", "normal_two_sided",
                     "edgeworth_two_sided"};
    }
    if (c.sigma && c.model != "constant_vol") throw UsageError("sigma applies to constant_vol only");

    switch (command) {
        case Command::simulate:
            if (c.n.size() != 1) throw UsageError("simulate needs exactly one --n");
            break;
        case Command::estimate:
            if (c.input.empty()) throw UsageError("estimate needs --input");
            if (c.tau.empty()) throw UsageError("estimate needs --tau");
            if (c.kernel != "uniform" && !c.bandwidth) {
                throw UsageError("kernel '" + c.kernel + "' needs --bandwidth");
            }
            if (c.kn && c.bandwidth) throw UsageError("give either --kn or --bandwidth, not both");
            break;
        case Command::coverage:
            if (c.n.empty()) throw UsageError("coverage needs --n (or a preset)");
            if (c.tau.empty()) throw UsageError("coverage needs --tau (or a preset)");
            break;
        case Command::audit:
            if (c.model != "constant_vol") throw UsageError("audit runs under constant_vol only");
            if (!c.kn) throw UsageError("audit needs --kn");
            break;
    }
    return c;
}

std::vector<std::pair<std::string, std::string>> run_metadata(const RunConfig& c,
                                                              const std::string& version,
                                                              const std::string& rng) {
    std::vector<std::pair<std::string, std::string>> m;
    auto join_n = [](const auto& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
        return s;
    };
    auto join_d = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + number_text(v[i]);
        return s;
    };
    m.emplace_back("tool", "spotvol");
    m.emplace_back("version", version);
    m.emplace_back("command", to_string(c.command));
    if (!c.preset.empty()) m.emplace_back("preset", c.preset);
    m.emplace_back("rng", rng);
    if (c.command != Command::estimate) m.emplace_back("seed", std::to_string(c.seed));
    if (c.command == Command::estimate) {
        m.emplace_back("input", c.input);
    } else {
        m.emplace_back("model", c.model);
        for (const auto& [k, v] : c.params) m.emplace_back("param." + k, number_text(v));
        if (c.sigma) m.emplace_back("sigma", number_text(*c.sigma));
        if (c.drift) m.emplace_back("drift", number_text(*c.drift));
        if (c.rho) m.emplace_back("rho", number_text(*c.rho));
        // simulate output records the grid itself
        if (c.command != Command::simulate) m.emplace_back("horizon", number_text(c.horizon));
    }
    if (c.command == Command::simulate || c.command == Command::coverage) {
        m.emplace_back("n", join_n(c.n));
        m.emplace_back("refinement", std::to_string(c.refinement));
    }
    if (c.command == Command::estimate || c.command == Command::coverage) {
        m.emplace_back("tau", join_d(c.tau));
        if (c.kn) {
            m.emplace_back("kn", std::to_string(*c.kn));
        } else if (c.bandwidth) {
            m.emplace_back("kernel", c.kernel);
            m.emplace_back("bandwidth", number_text(*c.bandwidth));
        } else {
            m.emplace_back("kn_rule", c.kn_rule);
            m.emplace_back("kn_c", number_text(c.kn_c));
            m.emplace_back("kn_exponent", number_text(c.kn_exponent));
        }
        m.emplace_back("level", number_text(c.level));
        std::string methods;
        for (std::size_t i = 0; i < c.methods.size(); ++i) methods += (i ? ";" : "") + c.methods[i];
        m.emplace_back("method", methods);
        m.emplace_back("paper_constants", c.paper_constants ? "true" : "false");
        m.emplace_back("q2_form", c.q2_form);
    }
    if (c.command == Command::coverage) {
        m.emplace_back("replications", std::to_string(c.replications));
        m.emplace_back("crn", c.common_random_numbers ? "true" : "false");
    }
    if (c.command == Command::audit) {
        m.emplace_back("kn", std::to_string(c.kn.value_or(0)));
        m.emplace_back("replications", std::to_string(c.replications));
    }
    return m;
}

} // namespace spotvol::cli
