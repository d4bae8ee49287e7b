/*
 * Copyright 2026 The logstruct Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>

#include "logstruct/ingest.hpp"
#include "logstruct/model.hpp"

namespace logstruct {

struct EvalReport {
    double accuracy = 0.0;
    std::size_t predicted_template_count = 0;
    std::size_t truth_template_count = 0;
    std::size_t message_count = 0;
    /// Fraction of each truth group's messages that were grouped correctly.
    std::map<std::string, double> per_truth_group_accuracy;
};

/**
 * Grouping accuracy: a message counts as correct iff the set of messages
 * sharing its predicted template equals the set sharing its truth label.
 * Throws EvaluationError when the assignment and truth cover different
 * record indices.
 */
EvalReport grouping_accuracy(const Assignment& assignment, const GroundTruth& truth);

/// with / without ratios; nullopt where the denominator is zero.
struct ImprovementRatio {
    std::optional<double> accuracy;
    std::optional<double> templates;
};

ImprovementRatio improvement_ratio(const EvalReport& with, const EvalReport& without);

/// "x1.5" style rendering; "x1" for whole numbers, "xinf" when unbounded.
std::string format_ratio(const std::optional<double>& ratio, int decimals);

/// Table-style cell such as "0.91(x1.5)" / "180(x0.42)".
std::string format_ab_cell(double value, int value_decimals, const std::optional<double>& ratio,
                           int ratio_decimals);

inline constexpr const char* kEvalCsvHeader =
    "dataset,parser,preprocessing,parameters,accuracy,predicted_templates,truth_templates";

void write_eval_row(std::ostream& out, const std::string& dataset, const std::string& parser, bool preprocessing,
                    const std::string& parameters, const EvalReport& report);

} // namespace logstruct
