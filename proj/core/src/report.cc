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

#include "distq/report.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "distq/errors.h"

namespace distq {
namespace {

using Json = nlohmann::ordered_json;

Json ledger_json(const ResourceLedger& l) {
  Json j;
  j["ebits"] = l.ebits_consumed;
  j["cbits"] = l.cbits_sent;
  j["qubits_transported"] = l.qubits_transported;
  j["rounds"] = l.rounds;
  return j;
}

Json report_json(const ProtocolReport& r) {
  Json j;
  j["protocol"] = r.name;
  j["branches_tested"] = r.branches_tested;
  j["ebits"] = r.ledger.ebits_consumed;
  j["cbits"] = r.ledger.cbits_sent;
  j["qubits_transported"] = r.ledger.qubits_transported;
  j["rounds"] = r.rounds;
  j["max_infidelity"] = r.max_infidelity;
  j["verified"] = r.verified;
  Json log = Json::array();
  for (const auto& m : r.message_log) {
    Json to = Json::array();
    for (const auto& n : m.to) to.push_back(n.value);
    log.push_back({{"from", m.from.value}, {"to", to}, {"bit", m.bit}, {"tag", m.tag}});
  }
  j["message_log"] = log;
  Json sections = Json::object();
  for (const auto& [name, ledger] : r.sections) sections[name] = ledger_json(ledger);
  j["sections"] = sections;
  Json metrics = Json::object();
  for (const auto& [name, value] : r.metrics) metrics[name] = value;
  j["metrics"] = metrics;
  j["failure_count"] = r.failure_count;
  Json failures = Json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"input", f.input},
                        {"branch_bits", f.branch_bits},
                        {"infidelity", f.infidelity},
                        {"detail", f.detail}});
  }
  j["failures"] = failures;
  return j;
}

std::string format_double(double v) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << v;
  return s.str();
}

void emit_text(const std::vector<ProtocolReport>& reports, std::ostream& out) {
  const std::vector<std::string> header{"protocol", "branches", "ebits", "cbits",
                                        "transported", "rounds", "max_infidelity", "verified"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    rows.push_back({r.name, std::to_string(r.branches_tested), std::to_string(r.ledger.ebits_consumed),
                    std::to_string(r.ledger.cbits_sent), std::to_string(r.ledger.qubits_transported),
                    std::to_string(r.rounds), format_double(r.max_infidelity), r.verified ? "yes" : "NO"});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto print_row = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        out << std::left << std::setw(static_cast<int>(width[c])) << row[c];
      } else {
        out << "  " << std::right << std::setw(static_cast<int>(width[c])) << row[c];
      }
    }
    out << '\n';
  };
  print_row(header);
  for (const auto& row : rows) print_row(row);

  for (const auto& r : reports) {
    for (const auto& [name, value] : r.metrics) out << r.name << ": " << name << " = " << value << '\n';
    for (const auto& [name, ledger] : r.sections) out << r.name << ": section " << name << " " << ledger.to_string() << '\n';
    for (const auto& f : r.failures) {
      out << r.name << ": FAILED input " << f.input << " branch [";
      for (std::size_t i = 0; i < f.branch_bits.size(); ++i) out << f.branch_bits[i];
      out << "] infidelity " << format_double(f.infidelity) << ": " << f.detail << '\n';
    }
    if (r.failure_count > r.failures.size()) {
      out << r.name << ": " << (r.failure_count - r.failures.size()) << " more failures not shown\n";
    }
  }
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "text") return ReportFormat::kText;
  throw ParameterError("unknown report format '" + name + "'");
}

void emit_report(const std::vector<ProtocolReport>& reports, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::kText) {
    emit_text(reports, out);
    return;
  }
  Json doc = Json::array();
  for (const auto& r : reports) doc.push_back(report_json(r));
  out << doc.dump(2) << '\n';
}

std::string render_report(const std::vector<ProtocolReport>& reports, ReportFormat format) {
  std::ostringstream s;
  emit_report(reports, format, s);
  return s.str();
}

std::string render_qft_plan(const QftPlan& plan, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::kText) {
    out << "qft n=" << plan.n << " m=" << plan.m << " k=" << plan.k << '\n'
        << "controlled gates: total " << plan.total_controlled << ", local " << plan.local_controlled
        << ", non-local " << plan.nonlocal_controlled << '\n'
        << "closed forms: total " << qft_total_controlled(plan.n) << ", local "
        << qft_local_controlled(plan.n, plan.m) << ", non-local " << qft_nonlocal_controlled(plan.n, plan.m)
        << '\n'
        << "amortized distributions: " << plan.amortized_distributions << '\n'
        << "swaps: " << plan.swaps << " (" << plan.cross_node_swaps << " cross-node)\n";
    return out.str();
  }
  Json j;
  j["n"] = plan.n;
  j["m"] = plan.m;
  j["k"] = plan.k;
  j["total_controlled"] = plan.total_controlled;
  j["local_controlled"] = plan.local_controlled;
  j["nonlocal_controlled"] = plan.nonlocal_controlled;
  j["amortized_distributions"] = plan.amortized_distributions;
  j["swaps"] = plan.swaps;
  j["cross_node_swaps"] = plan.cross_node_swaps;
  j["closed_form"] = {{"total", qft_total_controlled(plan.n)},
                      {"local", qft_local_controlled(plan.n, plan.m)},
                      {"nonlocal", qft_nonlocal_controlled(plan.n, plan.m)}};
  Json schedule = Json::array();
  for (const auto& s : plan.schedule) {
    Json step;
    switch (s.kind) {
      case QftStep::Kind::kHadamard:
        step = {{"gate", "H"}, {"qubit", s.a}, {"node", plan.machine_of(s.a)}};
        break;
      case QftStep::Kind::kControlledPhase:
        step = {{"gate", "CR"},          {"k", s.k},
                {"target", s.a},         {"control", s.b},
                {"target_node", plan.machine_of(s.a)}, {"control_node", plan.machine_of(s.b)},
                {"nonlocal", s.nonlocal}};
        break;
      case QftStep::Kind::kSwap:
        step = {{"gate", "SWAP"}, {"a", s.a}, {"b", s.b}, {"nonlocal", s.nonlocal}};
        break;
    }
    schedule.push_back(step);
  }
  j["schedule"] = schedule;
  out << j.dump(2) << '\n';
  return out.str();
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << text;
  file.flush();
  if (!file) throw IoError("failed writing '" + path + "'");
}

void write_report(const std::vector<ProtocolReport>& reports, ReportFormat format, const std::string& path) {
  write_text_file(render_report(reports, format), path);
}

}  // namespace distq
