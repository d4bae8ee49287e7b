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

#include "logstruct/ingest.hpp"

#include <spdlog/spdlog.h>

#include <boost/regex.hpp>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <set>
#include <sstream>

#include "logstruct/csv.hpp"
#include "logstruct/error.hpp"
#include "logstruct/preprocess.hpp"

namespace logstruct {

namespace {

constexpr std::string_view kContentField = "Content";

std::string escape_literal(std::string_view literal) {
    static const std::string_view specials = R"(\^$.|?*+()[]{})";
    std::string out;
    bool in_space = false;
    for (char c : literal) {
        if (c == ' ') {
            if (!in_space) {
                out += R"(\s+)";
            }
            in_space = true;
            continue;
        }
        in_space = false;
        if (specials.find(c) != std::string_view::npos) {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::string_view strip_eol(std::string_view s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace

struct LineFormat::Impl {
    std::vector<std::string> fields;
    std::size_t content_group = 0;
    boost::regex pattern;
    bool match_all = false;
};

LineFormat::LineFormat() : impl_(std::make_unique<Impl>()) {
    impl_->fields = {std::string(kContentField)};
    impl_->match_all = true;
}
LineFormat::~LineFormat() = default;
LineFormat::LineFormat(const LineFormat& other) : impl_(std::make_unique<Impl>(*other.impl_)) {}
LineFormat& LineFormat::operator=(const LineFormat& other) {
    if (this != &other) {
        impl_ = std::make_unique<Impl>(*other.impl_);
    }
    return *this;
}
LineFormat::LineFormat(LineFormat&&) noexcept = default;
LineFormat& LineFormat::operator=(LineFormat&&) noexcept = default;

LineFormat LineFormat::compile(std::string_view format) {
    LineFormat result;
    Impl& impl = *result.impl_;
    impl.fields.clear();
    impl.match_all = false;

    std::string regex = "^";
    std::size_t content_count = 0;
    std::size_t i = 0;
    while (i < format.size()) {
        const auto open = format.find_first_of("<>", i);
        if (open == std::string_view::npos) {
            regex += escape_literal(format.substr(i));
            break;
        }
        if (format[open] == '>') {
            throw ConfigError("line format: '>' without matching '<' at offset " + std::to_string(open));
        }
        regex += escape_literal(format.substr(i, open - i));
        const auto close = format.find_first_of("<>", open + 1);
        if (close == std::string_view::npos || format[close] == '<') {
            throw ConfigError("line format: unbalanced '<' at offset " + std::to_string(open));
        }
        std::string name(format.substr(open + 1, close - open - 1));
        if (trim(name).empty()) {
            throw ConfigError("line format: empty placeholder at offset " + std::to_string(open));
        }
        impl.fields.push_back(name);
        if (name == kContentField) {
            ++content_count;
            impl.content_group = impl.fields.size();
        }
        regex += "(.*?)";
        i = close + 1;
    }
    regex += "$";
    if (content_count != 1) {
        throw ConfigError("line format must contain exactly one <Content> placeholder, found " +
                          std::to_string(content_count));
    }
    impl.pattern = boost::regex(regex, boost::regex::perl);
    return result;
}

std::string_view LineFormat::extract(std::string_view line) const {
    line = strip_eol(line);
    if (impl_->match_all) {
        return line;
    }
    const std::string_view body = trim(line);
    boost::match_results<std::string_view::const_iterator> m;
    if (!boost::regex_match(body.begin(), body.end(), m, impl_->pattern)) {
        return line;
    }
    const auto& group = m[static_cast<int>(impl_->content_group)];
    return {group.first, static_cast<std::size_t>(group.second - group.first)};
}

const std::vector<std::string>& LineFormat::fields() const {
    return impl_->fields;
}

DatasetManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
    }
    auto required = [&](const char* key) -> const nlohmann::json& {
        if (!doc.contains(key)) {
            throw ConfigError(std::string("manifest is missing key '") + key + "'");
        }
        return doc.at(key);
    };
    auto resolve = [&](const nlohmann::json& value) {
        std::filesystem::path p = value.get<std::string>();
        return p.is_absolute() ? p : (base_dir / p).lexically_normal();
    };

    DatasetManifest m;
    try {
        m.name = required("name").get<std::string>();
        m.log_format = required("log_format").get<std::string>();
        m.mask_patterns = required("mask_patterns").get<std::vector<std::string>>();
        m.raw_path = resolve(required("raw_path"));
        m.sample_path = resolve(required("sample_path"));
        m.truth_path = resolve(required("truth_path"));
        if (doc.contains("sample_fnv1a64") && !doc["sample_fnv1a64"].is_null()) {
            m.sample_checksum = doc["sample_fnv1a64"].get<std::string>();
        }
        if (doc.contains("truth_fnv1a64") && !doc["truth_fnv1a64"].is_null()) {
            m.truth_checksum = doc["truth_fnv1a64"].get<std::string>();
        }
    } catch (const nlohmann::json::type_error& e) {
        throw ConfigError(std::string("manifest has a mistyped value: ") + e.what());
    }

    LineFormat::compile(m.log_format);
    MaskSet::compile(m.mask_patterns);
    return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestError("cannot open manifest " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_manifest(buffer.str(), path.parent_path());
}

std::string sanitize_utf8(std::string_view text, bool* replaced) {
    static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
    std::string out;
    out.reserve(text.size());
    bool changed = false;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const auto c = static_cast<unsigned char>(text[i]);
        std::size_t len = 0;
        std::uint32_t min_cp = 0;
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            min_cp = 0x80;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            min_cp = 0x800;
        } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
            len = 4;
            min_cp = 0x10000;
        }
        bool valid = len != 0 && i + len <= n;
        std::uint32_t cp = len == 2 ? (c & 0x1F) : len == 3 ? (c & 0x0F) : (c & 0x07);
        for (std::size_t k = 1; valid && k < len; ++k) {
            const auto cc = static_cast<unsigned char>(text[i + k]);
            if ((cc & 0xC0) != 0x80) {
                valid = false;
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        valid = valid && cp >= min_cp && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
        if (valid) {
            out.append(text.substr(i, len));
            i += len;
        } else {
            out.append(kReplacement);
            changed = true;
            ++i;
        }
    }
    if (replaced != nullptr) {
        *replaced = changed;
    }
    return out;
}

std::string fnv1a64_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestError("cannot open " + path.string());
    }
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buffer[1 << 16];
    while (in.read(buffer, sizeof buffer) || in.gcount() > 0) {
        for (std::streamsize k = 0; k < in.gcount(); ++k) {
            hash ^= static_cast<unsigned char>(buffer[k]);
            hash *= 0x100000001b3ULL;
        }
    }
    std::ostringstream out;
    out << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << hash;
    return out.str();
}

RawStream::RawStream(const std::filesystem::path& path, LineFormat format) : format_(std::move(format)) {
    auto file = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file) {
        throw IngestError("cannot open log file " + path.string());
    }
    in_ = std::move(file);
}

RawStream::RawStream(std::unique_ptr<std::istream> in, LineFormat format)
    : in_(std::move(in)), format_(std::move(format)) {}

std::optional<LogRecord> RawStream::next() {
    if (!std::getline(*in_, line_)) {
        if (in_->bad()) {
            throw IngestError("read failure after line " + std::to_string(next_index_));
        }
        return std::nullopt;
    }
    bool replaced = false;
    std::string raw = sanitize_utf8(strip_eol(line_), &replaced);
    if (replaced) {
        ++invalid_utf8_;
        if (invalid_utf8_ <= 5) {
            spdlog::warn("line {}: invalid UTF-8 replaced with U+FFFD", next_index_ + 1);
        }
    }
    LogRecord record;
    record.index = next_index_++;
    record.content = std::string(format_.extract(raw));
    record.raw = std::move(raw);
    return record;
}

RawStream stream_raw(const DatasetManifest& manifest) {
    return RawStream(manifest.raw_path, LineFormat::compile(manifest.log_format));
}

GroundTruth read_ground_truth(std::istream& in, std::size_t expected_rows) {
    GroundTruth truth;
    std::vector<std::string> row;
    if (!csv::read_row(in, row)) {
        if (expected_rows != 0) {
            throw IngestError("ground truth is empty but the sample has " + std::to_string(expected_rows) + " lines");
        }
        return truth;
    }
    if (!row.empty() && row[0].starts_with("\xEF\xBB\xBF")) {
        row[0].erase(0, 3);
    }
    auto column = [&](std::string_view name) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i] == name) {
                return i;
            }
        }
        throw IngestError("ground truth is missing column " + std::string(name));
    };
    const std::size_t line_col = column("LineId");
    const std::size_t event_col = column("EventId");
    const std::size_t template_col = column("EventTemplate");
    const std::size_t width = std::max({line_col, event_col, template_col}) + 1;

    std::size_t rows = 0;
    while (csv::read_row(in, row)) {
        if (row.size() == 1 && row[0].empty()) {
            continue;
        }
        ++rows;
        if (row.size() < width) {
            throw IngestError("ground truth row " + std::to_string(rows) + " has too few columns");
        }
        std::uint64_t line_id = 0;
        const auto& text = row[line_col];
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), line_id);
        if (ec != std::errc() || ptr != text.data() + text.size() || line_id == 0) {
            throw IngestError("ground truth row " + std::to_string(rows) + " has invalid LineId '" + text + "'");
        }
        const std::uint64_t index = line_id - 1;
        if (!truth.labels.emplace(index, row[event_col]).second) {
            throw IngestError("ground truth repeats LineId " + text);
        }
        truth.truth_templates.try_emplace(row[event_col], row[template_col]);
    }
    if (rows != expected_rows) {
        throw IngestError("ground truth has " + std::to_string(rows) + " rows but the sample has " +
                          std::to_string(expected_rows) + " lines");
    }
    if (!truth.labels.empty() && truth.labels.rbegin()->first != expected_rows - 1) {
        throw IngestError("ground truth LineId values do not cover 1.." + std::to_string(expected_rows));
    }
    return truth;
}

Sample load_sample(const DatasetManifest& manifest) {
    auto verify = [&](const std::filesystem::path& path, const std::optional<std::string>& expected) {
        if (!expected) {
            return;
        }
        const auto actual = fnv1a64_file(path);
        if (actual != *expected) {
            spdlog::warn("{}: checksum {} differs from manifest {} (different dataset snapshot?)", path.string(),
                         actual, *expected);
        }
    };
    if (!std::filesystem::exists(manifest.sample_path)) {
        throw IngestError("sample file not found: " + manifest.sample_path.string());
    }
    if (!std::filesystem::exists(manifest.truth_path)) {
        throw IngestError("ground truth file not found: " + manifest.truth_path.string());
    }
    verify(manifest.sample_path, manifest.sample_checksum);
    verify(manifest.truth_path, manifest.truth_checksum);

    Sample sample;
    RawStream stream(manifest.sample_path, LineFormat::compile(manifest.log_format));
    while (auto record = stream.next()) {
        sample.records.push_back(std::move(*record));
    }
    std::ifstream truth_in(manifest.truth_path, std::ios::binary);
    if (!truth_in) {
        throw IngestError("cannot open ground truth " + manifest.truth_path.string());
    }
    sample.truth = read_ground_truth(truth_in, sample.records.size());
    return sample;
}

} // namespace logstruct
