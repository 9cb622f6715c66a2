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

#ifndef RELMTL_REPORT_HPP_
#define RELMTL_REPORT_HPP_

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "relmtl/experiment.hpp"

namespace relmtl::cli {

/// Result files that cannot be combined into one table.
class MergeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReportCell {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
};

struct ReportRow {
  std::string regime;
  std::size_t seeds = 0;
  std::vector<ReportCell> per_task;  // same order as ReportTable::tasks
  ReportCell average;
};

/// One row per regime; per-task and cross-task-average Acc/MaF1, each
/// averaged over seeds first.
struct ReportTable {
  std::string dataset;
  std::vector<std::string> tasks;
  std::vector<ReportRow> rows;
  std::vector<ResultRecord> records;  // input, sorted
};

/// Result records of a results stream; other record kinds are skipped.
std::vector<ResultRecord> read_records(std::istream& in);

/// Throws MergeError on mixed datasets, on regimes covering different task
/// sets, or on conflicting duplicates of one (task, regime, seed).
ReportTable build_report(std::vector<ResultRecord> records);

/// Aligned plain-text table; `*` marks the best value of each column.
std::string render_text(const ReportTable& table);

/// The input result records followed by one `table_row` record per row.
/// Feeding this back through read_records reproduces the same output.
std::string render_jsonl(const ReportTable& table);

}  // namespace relmtl::cli

#endif  // RELMTL_REPORT_HPP_
