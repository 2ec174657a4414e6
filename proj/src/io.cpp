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

#include "spotvol/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "spotvol/error.hpp"

namespace spotvol {

namespace {

constexpr double kSpacingTolerance = 1e-6;

using json = nlohmann::ordered_json;

std::optional<double> parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

[[noreturn]] void row_error(std::int64_t row, const std::string& what) {
    throw IngestError("row " + std::to_string(row) + ": " + what);
}

std::string metadata_block(const Metadata& metadata) {
    std::string out;
    for (const auto& [k, v] : metadata) out += "# " + k + "=" + v + "\n";
    return out;
}

json metadata_json(const Metadata& metadata) {
    json m = json::object();
    for (const auto& [k, v] : metadata) m[k] = v;
    return m;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

} // namespace

const char* to_string(OutputFormat format) noexcept {
    return format == OutputFormat::json ? "json" : "csv";
}

OutputFormat output_format_from_string(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("unknown output format '" + name + "' (expected csv or json)");
}

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw IoError("cannot format number");
    return std::string(buf, ptr);
}

PricePath parse_price_csv(std::istream& in) {
    std::string line;
    bool header_seen = false;
    std::optional<double> meta_delta, meta_horizon;
    std::vector<double> times, prices;
    std::int64_t row = 0;

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::string_view body(line);
            body.remove_prefix(1);
            while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
            const auto eq = body.find('=');
            if (eq != std::string_view::npos) {
                const auto key = body.substr(0, eq);
                if (key == "delta_n" || key == "horizon") {
                    auto v = parse_double(body.substr(eq + 1));
                    if (!v || !(*v > 0.0) || !std::isfinite(*v)) {
                        throw IngestError("metadata " + std::string(key) + " is not a positive number");
                    }
                    (key == "delta_n" ? meta_delta : meta_horizon) = v;
                }
            }
            continue;
        }
        if (!header_seen) {
            if (line != "timestamp,log_price") {
                throw IngestError("expected header 'timestamp,log_price', got '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        ++row;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            row_error(row, "expected two comma-separated fields");
        }
        const auto t = parse_double(std::string_view(line).substr(0, comma));
        const auto x = parse_double(std::string_view(line).substr(comma + 1));
        if (!t) row_error(row, "timestamp is not a number");
        if (!x) row_error(row, "log_price is not a number");
        if (!std::isfinite(*t) || !std::isfinite(*x)) row_error(row, "non-finite value");
        if (!times.empty() && !(*t > times.back())) {
            row_error(row, "timestamps are not strictly increasing");
        }
        times.push_back(*t);
        prices.push_back(*x);
    }
    if (in.bad()) throw IoError("read failure");
    if (!header_seen) throw IngestError("missing header 'timestamp,log_price'");
    if (times.size() < 2) throw IngestError("need at least 2 data rows, got " + std::to_string(times.size()));

    std::vector<double> spacing(times.size() - 1);
    for (std::size_t i = 1; i < times.size(); ++i) spacing[i - 1] = times[i] - times[i - 1];
    std::vector<double> sorted = spacing;
    const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    double median = *mid;
    if (sorted.size() % 2 == 0) {
        median = 0.5 * (median + *std::max_element(sorted.begin(), mid));
    }
    for (std::size_t i = 0; i < spacing.size(); ++i) {
        if (std::abs(spacing[i] - median) > kSpacingTolerance * median) {
            std::ostringstream os;
            os << "spacing " << spacing[i] << " differs from the median spacing " << median;
            row_error(static_cast<std::int64_t>(i) + 2, os.str());
        }
    }
    double delta = median;
    if (meta_delta) {
        if (std::abs(*meta_delta - median) > kSpacingTolerance * median) {
            throw IngestError("metadata delta_n disagrees with the timestamps");
        }
        delta = *meta_delta;
    }
    const double n = static_cast<double>(prices.size() - 1);
    const double horizon = meta_horizon ? *meta_horizon : delta * n;
    return PricePath(std::move(prices), delta, horizon);
}

PricePath read_price_csv(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw IngestError("cannot open '" + file + "'");
    return parse_price_csv(in);
}

std::string render_price_path(const PricePath& path, OutputFormat format, Metadata metadata) {
    metadata.emplace_back("delta_n", format_double(path.delta_n()));
    metadata.emplace_back("horizon", format_double(path.horizon()));
    const auto x = path.log_prices();
    if (format == OutputFormat::json) {
        json doc;
        doc["metadata"] = metadata_json(metadata);
        json rows = json::array();
        for (std::size_t i = 0; i < x.size(); ++i) {
            rows.push_back({{"timestamp", static_cast<double>(i) * path.delta_n()},
                            {"log_price", x[i]}});
        }
        doc["rows"] = std::move(rows);
        return dump(doc);
    }
    std::string out = metadata_block(metadata);
    out += "timestamp,log_price\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        out += format_double(static_cast<double>(i) * path.delta_n());
        out += ',';
        out += format_double(x[i]);
        out += '\n';
    }
    return out;
}

std::string render_estimates(const std::vector<EstimateRecord>& records, OutputFormat format,
                             const Metadata& metadata) {
    if (format == OutputFormat::json) {
        json doc;
        doc["metadata"] = metadata_json(metadata);
        json rows = json::array();
        for (const auto& r : records) {
            rows.push_back({{"estimator", r.estimator},
                            {"tau", r.estimate.tau},
                            {"method", to_string(r.interval.method)},
                            {"estimate", r.estimate.value},
                            {"lower", r.interval.lower},
                            {"upper", r.interval.upper},
                            {"level", r.interval.nominal_level.value()},
                            {"kn", r.estimate.kn},
                            {"delta_n", r.estimate.delta_n},
                            {"window_start", r.estimate.window_start},
                            {"window_end", r.estimate.window_end},
                            {"lower_clamped", r.interval.lower_clamped}});
        }
        doc["rows"] = std::move(rows);
        return dump(doc);
    }
    std::string out = metadata_block(metadata);
    out += "estimator,tau,method,estimate,lower,upper,level,kn,delta_n,window_start,window_end,"
           "lower_clamped\n";
    for (const auto& r : records) {
        out += r.estimator + ',' + format_double(r.estimate.tau) + ',' +
               to_string(r.interval.method) + ',' + format_double(r.estimate.value) + ',' +
               format_double(r.interval.lower) + ',' + format_double(r.interval.upper) + ',' +
               format_double(r.interval.nominal_level.value()) + ',' +
               std::to_string(r.estimate.kn) + ',' + format_double(r.estimate.delta_n) + ',' +
               std::to_string(r.estimate.window_start) + ',' +
               std::to_string(r.estimate.window_end) + ',' +
               (r.interval.lower_clamped ? "true" : "false") + '\n';
    }
    return out;
}

std::string render_coverage(const CoverageReport& report, OutputFormat format,
                            const Metadata& metadata) {
    if (format == OutputFormat::json) {
        json doc;
        doc["metadata"] = metadata_json(metadata);
        json rows = json::array();
        for (const auto& c : report.cells) {
            rows.push_back({{"model", c.model},
                            {"n", c.n},
                            {"tau", c.tau},
                            {"method", to_string(c.method)},
                            {"kn", c.kn},
                            {"trials", c.trials},
                            {"hits", c.hits},
                            {"coverage", c.coverage()},
                            {"mc_se", c.mc_std_error()}});
        }
        doc["rows"] = std::move(rows);
        return dump(doc);
    }
    std::string out = metadata_block(metadata);
    out += "model,n,tau,method,kn,trials,hits,coverage,mc_se\n";
    for (const auto& c : report.cells) {
        out += c.model + ',' + std::to_string(c.n) + ',' + format_double(c.tau) + ',' +
               to_string(c.method) + ',' + std::to_string(c.kn) + ',' + std::to_string(c.trials) +
               ',' + std::to_string(c.hits) + ',' + format_double(c.coverage()) + ',' +
               format_double(c.mc_std_error()) + '\n';
    }
    return out;
}

std::string render_audit(const AuditReport& report, OutputFormat format, const Metadata& metadata) {
    if (format == OutputFormat::json) {
        json doc;
        doc["metadata"] = metadata_json(metadata);
        json rows = json::array();
        for (const auto& r : report.rows) {
            rows.push_back({{"quantity", r.quantity},
                            {"empirical", r.empirical},
                            {"mc_se", r.mc_std_error},
                            {"prediction", r.prediction},
                            {"exact", r.exact}});
        }
        doc["rows"] = std::move(rows);
        return dump(doc);
    }
    std::string out = metadata_block(metadata);
    out += "quantity,empirical,mc_se,prediction,exact\n";
    for (const auto& r : report.rows) {
        out += r.quantity + ',' + format_double(r.empirical) + ',' + format_double(r.mc_std_error) +
               ',' + format_double(r.prediction) + ',' + format_double(r.exact) + '\n';
    }
    return out;
}

void write_output(const std::string& file, const std::string& text) {
    if (file.empty() || file == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoError("cannot write to stdout");
        return;
    }
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + file + "' for writing");
    out << text;
    out.close();
    if (!out) throw IoError("write to '" + file + "' failed");
}

} // namespace spotvol
