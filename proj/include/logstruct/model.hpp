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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace logstruct {

/// Reserved token marking a variable position. Fixed for every run.
inline constexpr std::string_view kWildcard = "<*>";

inline bool is_wildcard(std::string_view token) { return token == kWildcard; }

/// Ordered whitespace-free tokens of a message content.
using TokenSequence = std::vector<std::string>;

/// Splits on runs of whitespace; punctuation stays attached to tokens.
TokenSequence tokenize(std::string_view content);

std::string join_tokens(std::span<const std::string> tokens, std::string_view separator = " ");

enum class TemplateId : std::uint32_t {};

constexpr std::uint32_t id_value(TemplateId id) { return static_cast<std::uint32_t>(id); }

struct LogRecord {
    std::uint64_t index = 0;
    std::string raw;
    std::string content;
};

struct Template {
    TemplateId id{};
    TokenSequence tokens;
    std::uint64_t support = 0;

    std::size_t wildcard_count() const;
    /// Tokens with every wildcard position removed.
    TokenSequence constants() const;
    std::string text() const { return join_tokens(tokens); }
};

struct ParseOutcome {
    TemplateId template_id{};
    bool created = false;
    /// Record tokens found at the template's wildcard positions.
    std::vector<std::string> parameters;
};

/// Materialized result of a parser run over a record sequence.
struct Assignment {
    std::map<std::uint64_t, TemplateId> entries;
    std::vector<Template> templates;

    std::size_t distinct_templates() const;
};

/**
 * Online parser contract: one token sequence in, one outcome out, no lookahead.
 *
 * Every input is assigned, including the empty sequence, which maps to a
 * dedicated empty template. Implementations are single-owner mutable state.
 */
class LogParser {
public:
    virtual ~LogParser() = default;

    virtual ParseOutcome feed(const TokenSequence& tokens) = 0;

    virtual const Template& get(TemplateId id) const = 0;
    virtual std::size_t template_count() const = 0;
    virtual std::vector<Template> templates() const = 0;

    /// Variable parts of `tokens` under the template's current shape.
    virtual std::vector<std::string> parameters(TemplateId id, const TokenSequence& tokens) const = 0;
};

/// Dense id-indexed template storage shared by both parsers.
class TemplateStore {
public:
    TemplateId create(TokenSequence tokens);
    Template& at(TemplateId id) { return templates_.at(id_value(id)); }
    const Template& at(TemplateId id) const { return templates_.at(id_value(id)); }
    std::size_t size() const { return templates_.size(); }
    const std::vector<Template>& all() const { return templates_; }

private:
    std::vector<Template> templates_;
};

/**
 * Aligns a template against a message, wildcards matching zero or more
 * tokens, and returns the tokens captured by each wildcard that captured
 * at least one. Falls back to a greedy anchor walk when no exact
 * alignment exists.
 */
std::vector<std::string> align_parameters(std::span<const std::string> template_tokens,
                                          std::span<const std::string> message_tokens);

/// Feeds `tokens[i]` for `records[i]` in order and snapshots the result.
Assignment run_parser(LogParser& parser, std::span<const LogRecord> records,
                      std::span<const TokenSequence> tokens);

} // namespace logstruct
