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

#pragma once

// Run configuration of the spotvol command-line tool. Settings come in
// layers, each a flat JSON object: a built-in preset, then an optional
// config file, then command-line flags. Later layers win key by key.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace spotvol::cli {

/// Invalid or incomplete configuration; maps to exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Layer = nlohmann::ordered_json;

/// Keys a layer may carry; anything else is rejected.
const std::vector<std::string>& known_keys();

/// "paper-model1", "paper-model2" or "oracle-constvol".
Layer preset_layer(const std::string& name);
std::vector<std::string> preset_names();

/// Parses a JSON config file into a layer, rejecting unknown keys.
Layer load_config_file(const std::string& path);
Layer parse_config_text(const std::string& text, const std::string& source);

/// Throws UsageError naming the first key not in known_keys().
void check_keys(const Layer& layer, const std::string& source);

/// Key-wise overlay, later layers win.
Layer merge_layers(const std::vector<Layer>& layers);

enum class Command { simulate, estimate, coverage, audit };
Command command_from_string(const std::string& name);
const char* to_string(Command command) noexcept;

struct RunConfig {
    Command command = Command::coverage;
    std::string preset;  // empty when none
    std::string model = "model1";
    std::map<std::string, double> params;  // model coefficient overrides
    std::optional<double> sigma;           // constant_vol only
    std::optional<double> drift;
    std::optional<double> rho;
    std::vector<std::int64_t> n;
    std::vector<double> tau;
    std::optional<std::int64_t> kn;
    double kn_c = 0.5;
    double kn_exponent = 0.5;
    std::string kn_rule = "table-matching";  // name of the rule, or "custom"
    double level = 0.95;
    std::int64_t replications = 2000;
    std::uint64_t seed = 0;
    int refinement = 10;
    std::vector<std::string> methods;
    bool paper_constants = false;
    std::string q2_form = "derived";
    std::string input;
    std::string output;
    std::string format = "csv";
    std::string kernel = "uniform";
    std::optional<double> bandwidth;
    double horizon = 1.0;
    int threads = 0;
    bool common_random_numbers = true;

    /// Whether kn comes from the rule (0.5, 1/2) rather than a fixed value.
    bool uses_table_matching_rule() const;
};

/// Typed view of the merged layer, with per-command required keys checked.
RunConfig resolve(Command command, const Layer& merged);

/// Metadata echoed into output headers. Never includes the thread count.
std::vector<std::pair<std::string, std::string>> run_metadata(const RunConfig& config,
                                                              const std::string& version,
                                                              const std::string& rng);

} // namespace spotvol::cli
