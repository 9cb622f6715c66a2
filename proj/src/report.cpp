// Copyright 2026 The relmtl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relmtl/report.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "relmtl/error.hpp"
#include "relmtl/text_io.hpp"

namespace relmtl::cli {

std::vector<ResultRecord> read_records(std::istream& in) {
  std::vector<ResultRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(e.what(), line_no);
    }
    if (!j.is_object() || !j.contains("record")) throw FormatError("missing \"record\" field", line_no);
    if (j["record"] != "result") continue;
    try {
      out.push_back(ResultRecord::from_json(line));
    } catch (const FormatError& e) {
      throw FormatError(e.what(), line_no);
    }
  }
  return out;
}

namespace {

std::size_t regime_rank(const std::string& name) {
  for (std::size_t i = 0; i < std::size(kAllRegimes); ++i) {
    if (to_string(kAllRegimes[i]) == name) return i;
  }
  return std::size(kAllRegimes);
}

std::string label_of(const std::string& regime) {
  try {
    return std::string(display_name(regime_from_string(regime)));
  } catch (const std::exception&) {
    return regime;
  }
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

ReportTable build_report(std::vector<ResultRecord> records) {
  if (records.empty()) throw MergeError("no result records to report");
  ReportTable table;
  table.dataset = records.front().dataset;
  for (const auto& r : records) {
    if (r.dataset != table.dataset) {
      throw MergeError("cannot merge datasets '" + table.dataset + "' and '" + r.dataset + "'");
    }
  }

  std::stable_sort(records.begin(), records.end(), [](const ResultRecord& a, const ResultRecord& b) {
    const auto ra = regime_rank(a.regime), rb = regime_rank(b.regime);
    if (ra != rb) return ra < rb;
    if (a.regime != b.regime) return a.regime < b.regime;
    if (a.seed != b.seed) return a.seed < b.seed;
    return a.task < b.task;
  });
  // Exact duplicates (the same file given twice) collapse; conflicting ones do not.
  std::vector<ResultRecord> unique;
  for (auto& r : records) {
    if (!unique.empty()) {
      const auto& p = unique.back();
      if (p.regime == r.regime && p.seed == r.seed && p.task == r.task) {
        if (p == r) continue;
        throw MergeError("conflicting records for task " + r.task + ", regime " + r.regime + ", seed " +
                         std::to_string(r.seed));
      }
    }
    unique.push_back(std::move(r));
  }
  table.records = std::move(unique);

  std::map<std::string, std::set<std::string>> tasks_by_regime;
  for (const auto& r : table.records) tasks_by_regime[r.regime].insert(r.task);
  const auto& reference = tasks_by_regime.begin()->second;
  for (const auto& [regime, tasks] : tasks_by_regime) {
    if (tasks != reference) {
      throw MergeError("regime '" + regime + "' covers a different task set than '" +
                       tasks_by_regime.begin()->first + "'");
    }
  }
  // Task columns in the canonical relation order.
  for (const auto* name : {"cohyponym", "hypernym", "synonym", "meronym"}) {
    if (reference.count(name)) table.tasks.emplace_back(name);
  }
  for (const auto& t : reference) {
    if (std::find(table.tasks.begin(), table.tasks.end(), t) == table.tasks.end()) table.tasks.push_back(t);
  }

  for (std::size_t i = 0; i < table.records.size();) {
    const std::string& regime = table.records[i].regime;
    std::size_t j = i;
    std::map<std::string, std::vector<const ResultRecord*>> by_task;
    std::set<std::uint64_t> seeds;
    for (; j < table.records.size() && table.records[j].regime == regime; ++j) {
      by_task[table.records[j].task].push_back(&table.records[j]);
      seeds.insert(table.records[j].seed);
    }
    ReportRow row;
    row.regime = regime;
    row.seeds = seeds.size();
    for (const auto& t : table.tasks) {
      ReportCell cell;
      for (const auto* r : by_task[t]) {
        cell.accuracy += r->accuracy;
        cell.macro_f1 += r->macro_f1;
      }
      cell.accuracy /= static_cast<double>(by_task[t].size());
      cell.macro_f1 /= static_cast<double>(by_task[t].size());
      row.average.accuracy += cell.accuracy;
      row.average.macro_f1 += cell.macro_f1;
      row.per_task.push_back(cell);
    }
    row.average.accuracy /= static_cast<double>(table.tasks.size());
    row.average.macro_f1 /= static_cast<double>(table.tasks.size());
    table.rows.push_back(std::move(row));
    i = j;
  }
  return table;
}

std::string render_text(const ReportTable& table) {
  // Columns: per task (Acc, MaF1), then the averages.
  std::vector<std::string> header{"Regime"};
  for (const auto& t : table.tasks) {
    header.push_back(t + " Acc");
    header.push_back(t + " MaF1");
  }
  header.push_back("Avg Acc");
  header.push_back("Avg MaF1");

  std::vector<std::vector<double>> values;
  for (const auto& row : table.rows) {
    std::vector<double> v;
    for (const auto& c : row.per_task) {
      v.push_back(c.accuracy);
      v.push_back(c.macro_f1);
    }
    v.push_back(row.average.accuracy);
    v.push_back(row.average.macro_f1);
    values.push_back(std::move(v));
  }
  const std::size_t n_metrics = header.size() - 1;
  std::vector<std::string> best(n_metrics);
  for (std::size_t c = 0; c < n_metrics; ++c) {
    std::string top;
    for (const auto& v : values) top = std::max(top, fixed3(v[c]));
    best[c] = top;
  }

  std::vector<std::vector<std::string>> cells{header};
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::vector<std::string> line{label_of(table.rows[r].regime)};
    for (std::size_t c = 0; c < n_metrics; ++c) {
      const auto s = fixed3(values[r][c]);
      line.push_back(s == best[c] && table.rows.size() > 1 ? s + "*" : s);
    }
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }

  std::ostringstream out;
  out << "dataset: " << table.dataset << '\n';
  for (std::size_t l = 0; l < cells.size(); ++l) {
    for (std::size_t c = 0; c < cells[l].size(); ++c) {
      const auto& s = cells[l][c];
      if (c == 0) {
        out << s << std::string(width[c] - s.size(), ' ');
      } else {
        out << "  " << std::string(width[c] - s.size(), ' ') << s;
      }
    }
    out << '\n';
    if (l == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w + 2;
      out << std::string(total - 2, '-') << '\n';
    }
  }
  return out.str();
}

std::string render_jsonl(const ReportTable& table) {
  std::ostringstream out;
  for (const auto& r : table.records) out << r.to_json() << '\n';
  for (const auto& row : table.rows) {
    nlohmann::ordered_json j;
    j["record"] = "table_row";
    j["dataset"] = table.dataset;
    j["regime"] = row.regime;
    j["seeds"] = row.seeds;
    auto& tasks = j["tasks"] = nlohmann::ordered_json::object();
    for (std::size_t t = 0; t < table.tasks.size(); ++t) {
      tasks[table.tasks[t]] = {{"accuracy", row.per_task[t].accuracy}, {"macro_f1", row.per_task[t].macro_f1}};
    }
    j["average"] = {{"accuracy", row.average.accuracy}, {"macro_f1", row.average.macro_f1}};
    out << j.dump() << '\n';
  }
  return out.str();
}

}  // namespace relmtl::cli
