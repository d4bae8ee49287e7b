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

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logstruct/model.hpp"

namespace logstruct {

/**
 * Compiled loghub-style line format such as
 * `<Date> <Time> <Pid> <Level> <Component>: <Content>`.
 *
 * Placeholders capture lazily, literal text matches verbatim except that
 * runs of spaces match any run of whitespace.
 */
class LineFormat {
public:
    LineFormat();
    ~LineFormat();
    LineFormat(const LineFormat&);
    LineFormat& operator=(const LineFormat&);
    LineFormat(LineFormat&&) noexcept;
    LineFormat& operator=(LineFormat&&) noexcept;

    /// Throws ConfigError on unbalanced `<>`, empty placeholder names or a
    /// `<Content>` count other than one.
    static LineFormat compile(std::string_view format);

    /// Content capture of `line`; the whole line when it does not match.
    std::string_view extract(std::string_view line) const;

    const std::vector<std::string>& fields() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct DatasetManifest {
    std::string name;
    std::string log_format;
    std::vector<std::string> mask_patterns;
    std::filesystem::path raw_path;
    std::filesystem::path sample_path;
    std::filesystem::path truth_path;
    /// Optional "fnv1a64:<hex>" fingerprints of the snapshot the manifest
    /// was written against.
    std::optional<std::string> sample_checksum;
    std::optional<std::string> truth_checksum;
};

/// Parses a manifest (JSON, comments allowed). Relative paths resolve
/// against `base_dir`.
DatasetManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir);
DatasetManifest load_manifest(const std::filesystem::path& path);

struct GroundTruth {
    std::map<std::uint64_t, std::string> labels;
    std::map<std::string, std::string> truth_templates;

    std::size_t group_count() const { return truth_templates.size(); }
};

/// Reads a `*_structured.csv` truth table (LineId is 1-based) and checks
/// that it labels exactly record indices 0..expected_rows-1.
GroundTruth read_ground_truth(std::istream& in, std::size_t expected_rows);

/// Replaces each invalid UTF-8 byte with U+FFFD. Sets *replaced when
/// anything changed.
std::string sanitize_utf8(std::string_view text, bool* replaced = nullptr);

std::string fnv1a64_file(const std::filesystem::path& path);

/// Sequential line reader with O(1) resident records.
class RawStream {
public:
    RawStream(const std::filesystem::path& path, LineFormat format);
    RawStream(std::unique_ptr<std::istream> in, LineFormat format);

    std::optional<LogRecord> next();

    std::uint64_t lines_read() const { return next_index_; }
    std::uint64_t invalid_utf8_lines() const { return invalid_utf8_; }

private:
    std::unique_ptr<std::istream> in_;
    LineFormat format_;
    std::uint64_t next_index_ = 0;
    std::uint64_t invalid_utf8_ = 0;
    std::string line_;
};

RawStream stream_raw(const DatasetManifest& manifest);

struct Sample {
    std::vector<LogRecord> records;
    GroundTruth truth;
};

Sample load_sample(const DatasetManifest& manifest);

} // namespace logstruct
