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

#include "logstruct/bench.hpp"

#include <omp.h>
#include <time.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "logstruct/csv.hpp"
#include "logstruct/error.hpp"

namespace logstruct {

namespace {

using Clock = std::chrono::steady_clock;

std::string fixed(double value, int decimals) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(decimals) << value;
    return out.str();
}

// Shortest decimal that round-trips the grid value (0.05, 0.1, ...).
std::string grid_value(double value) {
    std::ostringstream out;
    out << std::setprecision(6) << value;
    return out.str();
}

} // namespace

SweepGrid SweepGrid::defaults() {
    SweepGrid grid;
    // k / 20.0 rather than repeated addition keeps the values exact-ish.
    for (int k = 1; k <= 19; ++k) {
        grid.taus.push_back(k / 20.0);
    }
    for (int d = 3; d <= 8; ++d) {
        grid.depths.push_back(d);
    }
    for (int k = 1; k <= 9; ++k) {
        grid.sts.push_back(k / 10.0);
    }
    return grid;
}

void SweepGrid::validate(ParserKind kind) const {
    for (const auto& spec : points(kind)) {
        spec.validate();
    }
    if (kind == ParserKind::spell ? taus.empty() : depths.empty() || sts.empty()) {
        throw ConfigError("sweep grid has no points for " + std::string(to_string(kind)));
    }
}

std::vector<ParserSpec> SweepGrid::points(ParserKind kind) const {
    std::vector<ParserSpec> out;
    if (kind == ParserKind::spell) {
        for (double tau : taus) {
            ParserSpec spec;
            spec.kind = ParserKind::spell;
            spec.spell.tau = tau;
            out.push_back(spec);
        }
        return out;
    }
    for (int depth : depths) {
        for (double st : sts) {
            ParserSpec spec;
            spec.kind = ParserKind::drain;
            spec.drain.depth = depth;
            spec.drain.st = st;
            spec.drain.max_children = max_children;
            out.push_back(spec);
        }
    }
    return out;
}

PreparedSample prepare_sample(const std::string& dataset, Sample sample, const MaskSet& masks, bool preprocessing,
                              int workers) {
    PreparedSample prepared;
    prepared.dataset = dataset;
    prepared.preprocessing = preprocessing;
    prepared.tokens = preprocess_batch(sample.records, masks, preprocessing, workers);
    prepared.records = std::move(sample.records);
    prepared.truth = std::move(sample.truth);
    return prepared;
}

PreparedSample prepare_sample(const DatasetManifest& manifest, bool preprocessing, int workers) {
    const auto masks = MaskSet::compile(manifest.mask_patterns);
    return prepare_sample(manifest.name, load_sample(manifest), masks, preprocessing, workers);
}

SweepRow evaluate_point(const ParserSpec& spec, const PreparedSample& sample) {
    SweepRow row;
    row.spec = spec;
    const auto start = Clock::now();
    try {
        spec.validate();
        auto parser = make_parser(spec);
        const auto assignment = run_parser(*parser, sample.records, sample.tokens);
        row.report = grouping_accuracy(assignment, sample.truth);
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    row.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return row;
}

std::vector<SweepRow> run_sweep(std::span<const ParserSpec> points, const PreparedSample& sample, int workers) {
    std::vector<SweepRow> rows(points.size());
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    const int threads = workers > 0 ? workers : omp_get_max_threads();
    // Points differ a lot in cost (low tau / high st grow many templates).
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        rows[k] = evaluate_point(points[k], sample);
    }
    return rows;
}

std::vector<SweepRow> run_sweep(ParserKind kind, const SweepGrid& grid, const DatasetManifest& manifest,
                                bool preprocessing, int workers) {
    grid.validate(kind);
    const auto points = grid.points(kind);
    const auto sample = prepare_sample(manifest, preprocessing, workers);
    return run_sweep(points, sample, workers);
}

std::vector<SweepRow> run_sweep_serial(std::span<const ParserSpec> points, const PreparedSample& sample) {
    std::vector<SweepRow> rows;
    rows.reserve(points.size());
    for (const auto& spec : points) {
        rows.push_back(evaluate_point(spec, sample));
    }
    return rows;
}

const SweepRow* best_row(std::span<const SweepRow> rows) {
    const SweepRow* best = nullptr;
    for (const auto& row : rows) {
        if (row.report && (!best || row.report->accuracy > best->report->accuracy)) {
            best = &row;
        }
    }
    return best;
}

void write_sweep_csv(std::ostream& out, const std::string& dataset, bool preprocessing,
                     std::span<const SweepRow> rows) {
    const bool spell = rows.empty() || rows.front().spec.kind == ParserKind::spell;
    csv::write_row(out, {"dataset", "parser", "preprocessing", spell ? "tau" : "depth", "st", "accuracy",
                         "predicted_templates", "runtime_ms"});
    for (const auto& row : rows) {
        if (!row.report) {
            continue;
        }
        const auto& spec = row.spec;
        const bool is_spell = spec.kind == ParserKind::spell;
        csv::write_row(out, {dataset, std::string(to_string(spec.kind)), preprocessing ? "on" : "off",
                             is_spell ? grid_value(spec.spell.tau) : std::to_string(spec.drain.depth),
                             is_spell ? std::string() : grid_value(spec.drain.st), fixed(row.report->accuracy, 6),
                             std::to_string(row.report->predicted_template_count), fixed(row.runtime_ms, 3)});
    }
}

void write_sweep_errors_csv(std::ostream& out, std::span<const SweepRow> rows) {
    csv::write_row(out, {"parser", "parameters", "error"});
    for (const auto& row : rows) {
        if (!row.report) {
            csv::write_row(out, {std::string(to_string(row.spec.kind)), row.spec.describe(), row.error});
        }
    }
}

AbResult run_ab(const ParserSpec& spec, const PreparedSample& with, const PreparedSample& without) {
    spec.validate();
    AbResult result;
    {
        auto parser = make_parser(spec);
        result.with = grouping_accuracy(run_parser(*parser, with.records, with.tokens), with.truth);
    }
    {
        auto parser = make_parser(spec);
        result.without = grouping_accuracy(run_parser(*parser, without.records, without.tokens), without.truth);
    }
    result.ratio = improvement_ratio(result.with, result.without);
    return result;
}

AbResult run_ab(const ParserSpec& spec, const DatasetManifest& manifest) {
    const auto masks = MaskSet::compile(manifest.mask_patterns);
    auto sample = load_sample(manifest);
    auto with = prepare_sample(manifest.name, sample, masks, true);
    auto without = prepare_sample(manifest.name, std::move(sample), masks, false);
    return run_ab(spec, with, without);
}

LatencySummary summarize_latencies(std::span<const std::uint64_t> elapsed_ns) {
    LatencySummary summary;
    summary.count = elapsed_ns.size();
    if (elapsed_ns.empty()) {
        return summary;
    }
    std::vector<std::uint64_t> sorted(elapsed_ns.begin(), elapsed_ns.end());
    std::sort(sorted.begin(), sorted.end());
    for (auto v : sorted) {
        summary.total_ns += v;
    }
    const auto n = sorted.size();
    auto rank = [&](double p) {
        auto r = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
        return static_cast<double>(sorted[std::clamp<std::size_t>(r, 1, n) - 1]);
    };
    summary.mean_ns = static_cast<double>(summary.total_ns) / static_cast<double>(n);
    summary.median_ns = rank(0.5);
    summary.p99_ns = rank(0.99);
    summary.p999_ns = rank(0.999);
    summary.max_ns = static_cast<double>(sorted.back());
    summary.max_over_mean = summary.mean_ns > 0.0 ? summary.max_ns / summary.mean_ns : 0.0;
    return summary;
}

std::uint64_t clock_resolution_ns() {
    timespec res{};
    if (clock_getres(CLOCK_MONOTONIC, &res) != 0) {
        using Period = Clock::period;
        return static_cast<std::uint64_t>(std::max<double>(1.0, 1e9 * Period::num / Period::den));
    }
    return static_cast<std::uint64_t>(res.tv_sec) * 1'000'000'000ULL + static_cast<std::uint64_t>(res.tv_nsec);
}

LatencyReport run_timing(LogParser& parser, RawStream& stream, const MaskSet* masks, const TimingOptions& options) {
    LatencyReport report;
    const auto resolution = clock_resolution_ns();
    if (resolution > 1000) {
        report.warnings.push_back("monotonic clock resolution is " + std::to_string(resolution) +
                                  " ns, coarser than 1 us");
    }
    const auto stride = std::max<std::uint64_t>(1, options.sample_every);
    if (options.limit) {
        report.elapsed_ns.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(*options.limit, 1u << 24)));
    }

    std::uint64_t cumulative = 0;
    const auto start = Clock::now();
    while (!options.limit || report.elapsed_ns.size() < *options.limit) {
        auto record = stream.next();
        if (!record) {
            break;
        }
        const auto t0 = Clock::now();
        auto tokens = masks ? tokenize(masks->apply(record->content)) : tokenize(record->content);
        parser.feed(tokens);
        const auto t1 = Clock::now();

        const auto ns = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
        report.elapsed_ns.push_back(ns);
        cumulative += ns;
        if (report.elapsed_ns.size() % stride == 0) {
            report.cumulative.emplace_back(report.elapsed_ns.size(), cumulative);
        }
        if (options.budget && t1 - start > *options.budget) {
            report.timed_out = true;
            break;
        }
    }
    if (report.cumulative.empty() || report.cumulative.back().first != report.elapsed_ns.size()) {
        report.cumulative.emplace_back(report.elapsed_ns.size(), cumulative);
    }
    if (report.timed_out) {
        report.warnings.push_back("time budget exhausted after " + std::to_string(report.elapsed_ns.size()) +
                                  " messages");
    }
    if (stream.invalid_utf8_lines() > 0) {
        report.warnings.push_back(std::to_string(stream.invalid_utf8_lines()) +
                                  " lines contained invalid UTF-8 and were sanitized");
    }
    report.summary = summarize_latencies(report.elapsed_ns);
    return report;
}

std::vector<std::string> check_latency_consistency(const LatencyReport& report) {
    std::vector<std::string> problems;
    const auto& s = report.summary;
    if (s.count != report.elapsed_ns.size()) {
        problems.push_back("summary count differs from the number of samples");
    }
    if (report.cumulative.empty()) {
        problems.push_back("cumulative series is empty");
    } else {
        const auto [logs, total] = report.cumulative.back();
        if (logs != s.count) {
            problems.push_back("cumulative series ends at " + std::to_string(logs) + " logs, expected " +
                               std::to_string(s.count));
        }
        const double product = s.mean_ns * static_cast<double>(s.count);
        if (std::abs(product - static_cast<double>(total)) > 0.01 * static_cast<double>(total)) {
            problems.push_back("mean x count differs from the cumulative total by more than 1%");
        }
        for (std::size_t i = 1; i < report.cumulative.size(); ++i) {
            if (report.cumulative[i].first <= report.cumulative[i - 1].first ||
                report.cumulative[i].second < report.cumulative[i - 1].second) {
                problems.push_back("cumulative series is not monotone");
                break;
            }
        }
    }
    if (!(s.max_ns >= s.p999_ns && s.p999_ns >= s.p99_ns && s.p99_ns >= s.median_ns)) {
        problems.push_back("percentiles are not ordered max >= p99.9 >= p99 >= median");
    }
    return problems;
}

void write_latency_csv(std::ostream& out, const LatencyReport& report) {
    out << "log_index,elapsed_ns\n";
    for (std::size_t i = 0; i < report.elapsed_ns.size(); ++i) {
        out << i << ',' << report.elapsed_ns[i] << '\n';
    }
}

void write_cumulative_csv(std::ostream& out, const LatencyReport& report) {
    out << "logs_processed,cumulative_ns\n";
    for (const auto& [logs, total] : report.cumulative) {
        out << logs << ',' << total << '\n';
    }
}

void write_latency_summary(std::ostream& out, const std::string& dataset, const ParserSpec& spec,
                           const LatencyReport& report) {
    const auto& s = report.summary;
    out << "dataset: " << dataset << '\n'
        << "parser: " << to_string(spec.kind) << " (" << spec.describe() << ")\n"
        << "messages: " << s.count << (report.timed_out ? " (budget exhausted)" : "") << '\n'
        << "total_ms: " << fixed(static_cast<double>(s.total_ns) / 1e6, 3) << '\n'
        << "mean_ns: " << fixed(s.mean_ns, 1) << '\n'
        << "median_ns: " << fixed(s.median_ns, 0) << '\n'
        << "p99_ns: " << fixed(s.p99_ns, 0) << '\n'
        << "p99.9_ns: " << fixed(s.p999_ns, 0) << '\n'
        << "max_ns: " << fixed(s.max_ns, 0) << '\n'
        << "max_over_mean: " << fixed(s.max_over_mean, 2) << '\n';
    for (const auto& warning : report.warnings) {
        out << "warning: " << warning << '\n';
    }
}

} // namespace logstruct
