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

#include "logstruct/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace logstruct {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

// Hands the tokens of one wildcard run to the wildcards in it: one token per
// wildcard while they last, the remainder joined into the last one.
void distribute_gap(std::size_t wildcards, std::span<const std::string> gap,
                    std::vector<std::string>& out) {
    if (wildcards == 0 || gap.empty()) {
        return;
    }
    if (wildcards >= gap.size()) {
        for (const auto& token : gap) {
            out.push_back(token);
        }
        return;
    }
    for (std::size_t i = 0; i + 1 < wildcards; ++i) {
        out.push_back(gap[i]);
    }
    out.push_back(join_tokens(gap.subspan(wildcards - 1)));
}

std::vector<std::string> greedy_parameters(std::span<const std::string> tmpl,
                                           std::span<const std::string> msg) {
    std::vector<std::string> out;
    std::size_t pending = 0;
    std::size_t m = 0;
    for (const auto& token : tmpl) {
        if (is_wildcard(token)) {
            ++pending;
            continue;
        }
        auto it = std::find(msg.begin() + static_cast<std::ptrdiff_t>(m), msg.end(), token);
        if (it == msg.end()) {
            continue;
        }
        auto j = static_cast<std::size_t>(it - msg.begin());
        distribute_gap(pending, msg.subspan(m, j - m), out);
        pending = 0;
        m = j + 1;
    }
    distribute_gap(pending, msg.subspan(m), out);
    return out;
}

} // namespace

TokenSequence tokenize(std::string_view content) {
    TokenSequence tokens;
    std::size_t i = 0;
    const std::size_t n = content.size();
    while (i < n) {
        while (i < n && is_space(content[i])) {
            ++i;
        }
        std::size_t start = i;
        while (i < n && !is_space(content[i])) {
            ++i;
        }
        if (i > start) {
            tokens.emplace_back(content.substr(start, i - start));
        }
    }
    return tokens;
}

std::string join_tokens(std::span<const std::string> tokens, std::string_view separator) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) {
            out.append(separator);
        }
        out.append(tokens[i]);
    }
    return out;
}

std::size_t Template::wildcard_count() const {
    return static_cast<std::size_t>(
        std::count_if(tokens.begin(), tokens.end(), [](const std::string& t) { return is_wildcard(t); }));
}

TokenSequence Template::constants() const {
    TokenSequence out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (!is_wildcard(t)) {
            out.push_back(t);
        }
    }
    return out;
}

std::size_t Assignment::distinct_templates() const {
    std::set<TemplateId> ids;
    for (const auto& [index, id] : entries) {
        ids.insert(id);
    }
    return ids.size();
}

TemplateId TemplateStore::create(TokenSequence tokens) {
    auto id = static_cast<TemplateId>(templates_.size());
    templates_.push_back(Template{id, std::move(tokens), 1});
    return id;
}

std::vector<std::string> align_parameters(std::span<const std::string> tmpl,
                                          std::span<const std::string> msg) {
    const std::size_t t_len = tmpl.size();
    const std::size_t m_len = msg.size();
    // ok[t][m]: tmpl[t..] can consume exactly msg[m..]
    std::vector<std::vector<char>> ok(t_len + 1, std::vector<char>(m_len + 1, 0));
    ok[t_len][m_len] = 1;
    for (std::size_t t = t_len; t-- > 0;) {
        for (std::size_t m = m_len + 1; m-- > 0;) {
            if (is_wildcard(tmpl[t])) {
                ok[t][m] = ok[t + 1][m] || (m < m_len && ok[t][m + 1]);
            } else {
                ok[t][m] = m < m_len && tmpl[t] == msg[m] && ok[t + 1][m + 1];
            }
        }
    }
    if (!ok[0][0]) {
        return greedy_parameters(tmpl, msg);
    }

    std::vector<std::string> out;
    std::size_t m = 0;
    for (std::size_t t = 0; t < t_len; ++t) {
        if (!is_wildcard(tmpl[t])) {
            ++m;
            continue;
        }
        // Shortest non-empty capture that still completes, else empty.
        std::size_t take = 0;
        for (std::size_t k = 1; m + k <= m_len; ++k) {
            if (ok[t + 1][m + k]) {
                take = k;
                break;
            }
        }
        if (take > 0) {
            out.push_back(join_tokens(msg.subspan(m, take)));
            m += take;
        }
    }
    return out;
}

Assignment run_parser(LogParser& parser, std::span<const LogRecord> records,
                      std::span<const TokenSequence> tokens) {
    if (records.size() != tokens.size()) {
        throw std::invalid_argument("run_parser: records and token sequences differ in length");
    }
    Assignment result;
    for (std::size_t i = 0; i < records.size(); ++i) {
        result.entries[records[i].index] = parser.feed(tokens[i]).template_id;
    }
    result.templates = parser.templates();
    return result;
}

} // namespace logstruct
