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

#include <cstdint>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "spotvol/estimator.hpp"
#include "spotvol/harness.hpp"
#include "spotvol/intervals.hpp"

namespace spotvol {

/// Ordered key/value pairs written at the top of every output file.
using Metadata = std::vector<std::pair<std::string, std::string>>;

enum class OutputFormat { csv, json };

const char* to_string(OutputFormat format) noexcept;
OutputFormat output_format_from_string(const std::string& name);

/// Shortest-form decimal with 17 significant digits at most; parses back
/// to the same double.
std::string format_double(double x);

/// Reads "timestamp,log_price" CSV. Lines starting with '#' are comments;
/// "# delta_n=<x>" and "# horizon=<x>" comments, when present, pin the
/// grid exactly (they must agree with the timestamps). Otherwise delta_n is
/// the median spacing. Spacing must be equal to 1e-6 relative. Errors are
/// IngestError naming the 1-based data row.
PricePath parse_price_csv(std::istream& in);
PricePath read_price_csv(const std::string& file);

/// Price path as CSV (timestamps i * delta_n) or JSON, with the grid
/// written into the metadata block so that parse_price_csv restores it
/// bit for bit.
std::string render_price_path(const PricePath& path, OutputFormat format, Metadata metadata);

struct EstimateRecord {
    std::string estimator;  // "uniform" or a kernel name
    SpotVolEstimate estimate;
    IntervalResult interval;
};

std::string render_estimates(const std::vector<EstimateRecord>& records, OutputFormat format,
                             const Metadata& metadata);
std::string render_coverage(const CoverageReport& report, OutputFormat format,
                            const Metadata& metadata);
std::string render_audit(const AuditReport& report, OutputFormat format,
                         const Metadata& metadata);

/// Writes `text` to `file`, or to stdout when file is empty or "-".
/// Throws IoError on failure.
void write_output(const std::string& file, const std::string& text);

} // namespace spotvol
