// Copyright 2026 The distq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Report serialization. The JSON document is a top-level array with one
// object per report; field names and order are fixed:
//
//   protocol, branches_tested, ebits, cbits, qubits_transported, rounds,
//   max_infidelity, verified,
//   message_log: [{from, to: [..], bit, tag}],
//   sections: {name: {ebits, cbits, qubits_transported, rounds}},
//   metrics: {name: integer},
//   failure_count, failures: [{input, branch_bits, infidelity, detail}]

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "distq/qft.h"
#include "distq/verify.h"

namespace distq {

enum class ReportFormat { kJson, kText };

/// Throws ParameterError for anything but "json" or "text".
ReportFormat parse_report_format(const std::string& name);

void emit_report(const std::vector<ProtocolReport>& reports, ReportFormat format, std::ostream& out);
std::string render_report(const std::vector<ProtocolReport>& reports, ReportFormat format);

/// QftPlan as a JSON object (n, m, k, counts, closed forms, schedule) or a
/// short text summary.
std::string render_qft_plan(const QftPlan& plan, ReportFormat format);

/// Writes `text` to `path`; throws IoError if it cannot.
void write_text_file(const std::string& text, const std::string& path);

/// Writes the rendered report to `path`; throws IoError if it cannot.
void write_report(const std::vector<ProtocolReport>& reports, ReportFormat format, const std::string& path);

}  // namespace distq
