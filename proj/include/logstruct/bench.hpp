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

#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "logstruct/eval.hpp"
#include "logstruct/ingest.hpp"
#include "logstruct/parsers.hpp"
#include "logstruct/preprocess.hpp"

namespace logstruct {

// ---------------------------------------------------------------------------
// Parameter sweeps

struct SweepGrid {
    std::vector<double> taus;
    std::vector<int> depths;
    std::vector<double> sts;
    int max_children = 100;

    /// tau 0.05..0.95 step 0.05; depth 3..8; st 0.1..0.9 step 0.1.
    static SweepGrid defaults();

    /// Throws ConfigError when the axes for `kind` are empty or out of domain.
    void validate(ParserKind kind) const;

    /// Spell points are taus; Drain points are depths x sts (depth-major).
    std::vector<ParserSpec> points(ParserKind kind) const;
};

/// A labeled sample, already tokenized under one preprocessing setting.
struct PreparedSample {
    std::string dataset;
    bool preprocessing = false;
    std::vector<LogRecord> records;
    std::vector<TokenSequence> tokens;
    GroundTruth truth;
};

PreparedSample prepare_sample(const std::string& dataset, Sample sample, const MaskSet& masks, bool preprocessing,
                              int workers = 0);
PreparedSample prepare_sample(const DatasetManifest& manifest, bool preprocessing, int workers = 0);

struct SweepRow {
    ParserSpec spec;
    std::optional<EvalReport> report;
    std::string error;  // set when the point failed
    double runtime_ms = 0.0;
};

SweepRow evaluate_point(const ParserSpec& spec, const PreparedSample& sample);

/// Points run concurrently (one parser per point); a failing point is
/// recorded in its row and does not stop the others. Row order follows
/// `points` regardless of scheduling.
std::vector<SweepRow> run_sweep(std::span<const ParserSpec> points, const PreparedSample& sample, int workers = 0);

/// Loads and prepares the manifest's sample, then sweeps the grid.
std::vector<SweepRow> run_sweep(ParserKind kind, const SweepGrid& grid, const DatasetManifest& manifest,
                                bool preprocessing, int workers = 0);

/// Serial reference for run_sweep.
std::vector<SweepRow> run_sweep_serial(std::span<const ParserSpec> points, const PreparedSample& sample);

/// Highest accuracy, first in point order on ties; nullptr if none ran.
const SweepRow* best_row(std::span<const SweepRow> rows);

/// Column 4 is "tau" for Spell and "depth" for Drain; st is empty for Spell.
void write_sweep_csv(std::ostream& out, const std::string& dataset, bool preprocessing,
                     std::span<const SweepRow> rows);
void write_sweep_errors_csv(std::ostream& out, std::span<const SweepRow> rows);

// ---------------------------------------------------------------------------
// With / without preprocessing

struct AbResult {
    EvalReport with;
    EvalReport without;
    ImprovementRatio ratio;
};

AbResult run_ab(const ParserSpec& spec, const PreparedSample& with, const PreparedSample& without);
AbResult run_ab(const ParserSpec& spec, const DatasetManifest& manifest);

// ---------------------------------------------------------------------------
// Per-message latency

struct TimingOptions {
    /// Record cap; nullopt reads the whole stream, 0 times nothing.
    std::optional<std::uint64_t> limit = 2'000'000;
    std::optional<std::chrono::nanoseconds> budget;
    std::uint64_t sample_every = 1000;  // cumulative series stride
};

struct LatencySummary {
    std::uint64_t count = 0;
    std::uint64_t total_ns = 0;
    double mean_ns = 0.0;
    double median_ns = 0.0;
    double p99_ns = 0.0;
    double p999_ns = 0.0;
    double max_ns = 0.0;
    double max_over_mean = 0.0;
};

/// Nearest-rank percentiles.
LatencySummary summarize_latencies(std::span<const std::uint64_t> elapsed_ns);

struct LatencyReport {
    std::vector<std::uint64_t> elapsed_ns;
    /// (logs processed, cumulative ns); includes the final count.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> cumulative;
    LatencySummary summary;
    bool timed_out = false;
    std::vector<std::string> warnings;
};

/**
 * Feeds the stream through `masks` (may be null) and `parser`, timing each
 * message from tokenization to parse outcome. Reading lines is not timed.
 */
LatencyReport run_timing(LogParser& parser, RawStream& stream, const MaskSet* masks, const TimingOptions& options);

/// Returns one message per violated invariant; empty when consistent.
std::vector<std::string> check_latency_consistency(const LatencyReport& report);

/// Resolution of the monotonic clock in nanoseconds.
std::uint64_t clock_resolution_ns();

void write_latency_csv(std::ostream& out, const LatencyReport& report);
void write_cumulative_csv(std::ostream& out, const LatencyReport& report);
void write_latency_summary(std::ostream& out, const std::string& dataset, const ParserSpec& spec,
                           const LatencyReport& report);

} // namespace logstruct
