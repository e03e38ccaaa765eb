// SPDX-License-Identifier: Apache-2.0
#pragma once

// Evaluation report files.
//
// JSON layout:
//   {"alpha": a, "joint_names": [...],
//    "mAP":  {"per_joint": {name: v}, "per_part": {"Head": v, ...}, "total": v},
//    "MOTA": {"per_joint": {name: v}, "per_part": {...}, "total": v},
//    "MOTP": v, "precision": v, "recall": v,
//    "counts": {"per_joint": {name: {"TP","FP","FN","IDSW","GT"}}, "total": {...}}}
// Undefined rates (no ground truth) are written as null.
//
// CSV rows follow the result-table layout: configuration columns, then
// mAP Head..Ankl, mAP Total, MOTA Head..Ankl, MOTA Total, MOTP, Prec, Rec.

#include <string>
#include <utility>
#include <vector>

#include "kptrack/metrics.hpp"

namespace kptrack {

std::string report_to_json(const EvalReport& report);

/// Fixed part columns of the CSV layout.
const std::vector<std::string>& table_part_names();

/// `config_columns` are emitted first, in order.
std::string report_csv_header(const std::vector<std::string>& config_columns);
std::string report_csv_row(const EvalReport& report, const std::vector<std::string>& config_values);

/// One-line "mAP .. MOTA .. MOTP .. Prec .. Rec .." summary.
std::string report_summary(const EvalReport& report);

} // namespace kptrack
