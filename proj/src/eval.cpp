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

#include "logstruct/eval.hpp"

#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <unordered_map>

#include "logstruct/csv.hpp"
#include "logstruct/error.hpp"

namespace logstruct {

EvalReport grouping_accuracy(const Assignment& assignment, const GroundTruth& truth) {
    if (assignment.entries.size() != truth.labels.size()) {
        throw EvaluationError("assignment covers " + std::to_string(assignment.entries.size()) +
                              " records, ground truth " + std::to_string(truth.labels.size()));
    }
    // Both maps are ordered, so a lockstep walk checks index-set equality.
    std::vector<std::uint32_t> predicted;
    std::vector<const std::string*> actual;
    predicted.reserve(truth.labels.size());
    actual.reserve(truth.labels.size());
    auto p = assignment.entries.begin();
    for (auto t = truth.labels.begin(); t != truth.labels.end(); ++t, ++p) {
        if (p->first != t->first) {
            throw EvaluationError("record " + std::to_string(t->first) + " is labeled but was not assigned");
        }
        predicted.push_back(id_value(p->second));
        actual.push_back(&t->second);
    }

    std::unordered_map<std::uint32_t, std::size_t> predicted_size;
    std::unordered_map<std::string, std::size_t> truth_size;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        ++predicted_size[predicted[i]];
        ++truth_size[*actual[i]];
    }
    // A predicted cluster is exact iff all members share one label and the
    // cluster is as large as that label's group.
    std::unordered_map<std::uint32_t, const std::string*> cluster_label;
    std::set<std::uint32_t> mixed;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        auto [it, inserted] = cluster_label.try_emplace(predicted[i], actual[i]);
        if (!inserted && *it->second != *actual[i]) {
            mixed.insert(predicted[i]);
        }
    }

    EvalReport report;
    report.message_count = predicted.size();
    report.predicted_template_count = predicted_size.size();
    report.truth_template_count = truth_size.size();
    std::map<std::string, std::size_t> correct_by_group;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const auto cluster = predicted[i];
        const bool exact = !mixed.contains(cluster) && predicted_size[cluster] == truth_size[*actual[i]];
        correct_by_group[*actual[i]] += exact ? 1 : 0;
        correct += exact ? 1 : 0;
    }
    report.accuracy = predicted.empty() ? 1.0 : static_cast<double>(correct) / static_cast<double>(predicted.size());
    for (const auto& [label, size] : truth_size) {
        report.per_truth_group_accuracy[label] =
            static_cast<double>(correct_by_group[label]) / static_cast<double>(size);
    }
    return report;
}

ImprovementRatio improvement_ratio(const EvalReport& with, const EvalReport& without) {
    ImprovementRatio ratio;
    if (without.accuracy > 0.0) {
        ratio.accuracy = with.accuracy / without.accuracy;
    }
    if (without.predicted_template_count > 0) {
        ratio.templates = static_cast<double>(with.predicted_template_count) /
                          static_cast<double>(without.predicted_template_count);
    }
    return ratio;
}

namespace {

std::string trimmed_fixed(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    const double rounded = std::round(value * scale) / scale;
    std::ostringstream out;
    out << std::fixed << std::setprecision(decimals) << rounded;
    std::string text = out.str();
    if (text.find('.') != std::string::npos) {
        while (text.back() == '0') {
            text.pop_back();
        }
        if (text.back() == '.') {
            text.pop_back();
        }
    }
    return text;
}

} // namespace

std::string format_ratio(const std::optional<double>& ratio, int decimals) {
    if (!ratio) {
        return "xinf";
    }
    return "x" + trimmed_fixed(*ratio, decimals);
}

std::string format_ab_cell(double value, int value_decimals, const std::optional<double>& ratio,
                           int ratio_decimals) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(value_decimals) << value << '(' << format_ratio(ratio, ratio_decimals)
        << ')';
    return out.str();
}

void write_eval_row(std::ostream& out, const std::string& dataset, const std::string& parser, bool preprocessing,
                    const std::string& parameters, const EvalReport& report) {
    std::ostringstream accuracy;
    accuracy << std::fixed << std::setprecision(6) << report.accuracy;
    csv::write_row(out, {dataset, parser, preprocessing ? "on" : "off", parameters, accuracy.str(),
                         std::to_string(report.predicted_template_count),
                         std::to_string(report.truth_template_count)});
}

} // namespace logstruct
