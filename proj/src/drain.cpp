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

#include "logstruct/drain.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "logstruct/error.hpp"

namespace logstruct {

namespace {

constexpr double kThresholdSlack = 1e-9;
const std::string kCatchAll(kWildcard);

bool has_digit(const std::string& token) {
    return std::any_of(token.begin(), token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::string length_key(std::size_t n) {
    return "#" + std::to_string(n);
}

} // namespace

void DrainConfig::validate() const {
    if (depth < 3) {
        throw ConfigError("drain: depth must be >= 3, got " + std::to_string(depth));
    }
    if (!(st >= 0.0 && st <= 1.0)) {
        throw ConfigError("drain: st must lie in [0, 1], got " + std::to_string(st));
    }
    if (max_children < 1) {
        throw ConfigError("drain: max_children must be >= 1, got " + std::to_string(max_children));
    }
}

Similarity seq_similarity(std::span<const std::string> template_tokens, std::span<const std::string> message_tokens) {
    if (template_tokens.size() != message_tokens.size()) {
        throw std::invalid_argument("seq_similarity: sequences differ in length");
    }
    if (template_tokens.empty()) {
        return {1.0, 0};
    }
    std::size_t same = 0;
    std::size_t params = 0;
    for (std::size_t i = 0; i < template_tokens.size(); ++i) {
        if (is_wildcard(template_tokens[i])) {
            ++params;
        } else if (template_tokens[i] == message_tokens[i]) {
            ++same;
        }
    }
    return {static_cast<double>(same) / static_cast<double>(template_tokens.size()), params};
}

TokenSequence update_group_template(std::span<const std::string> template_tokens,
                                    std::span<const std::string> message_tokens) {
    if (template_tokens.size() != message_tokens.size()) {
        throw std::invalid_argument("update_group_template: sequences differ in length");
    }
    TokenSequence out;
    out.reserve(template_tokens.size());
    for (std::size_t i = 0; i < template_tokens.size(); ++i) {
        out.push_back(template_tokens[i] == message_tokens[i] ? template_tokens[i] : kCatchAll);
    }
    return out;
}

DrainParser::DrainParser(DrainConfig config) : config_(config) {
    config_.validate();
}

std::optional<std::uint32_t> DrainParser::search_leaf(const TokenSequence& tokens,
                                                      std::vector<std::string>* keys) const {
    auto length_it = by_length_.find(tokens.size());
    if (length_it == by_length_.end()) {
        return std::nullopt;
    }
    if (keys != nullptr) {
        keys->push_back(length_key(tokens.size()));
    }
    std::uint32_t node = length_it->second;
    const auto levels = std::min<std::size_t>(static_cast<std::size_t>(config_.routing_tokens()), tokens.size());
    for (std::size_t k = 0; k < levels; ++k) {
        const auto& children = nodes_[node].children;
        auto it = children.find(tokens[k]);
        if (it == children.end()) {
            it = children.find(kCatchAll);
            if (it == children.end()) {
                return std::nullopt;
            }
        }
        if (keys != nullptr) {
            keys->push_back(it->first);
        }
        node = it->second;
    }
    return node;
}

void DrainParser::add_group(TemplateId id) {
    const TokenSequence& tokens = store_.at(id).tokens;
    std::vector<std::string> keys{length_key(tokens.size())};

    auto [length_it, inserted] = by_length_.try_emplace(tokens.size(), static_cast<std::uint32_t>(nodes_.size()));
    if (inserted) {
        nodes_.emplace_back();
    }
    std::uint32_t node = length_it->second;
    const auto cap = static_cast<std::size_t>(config_.max_children);
    const auto levels = std::min<std::size_t>(static_cast<std::size_t>(config_.routing_tokens()), tokens.size());

    auto descend = [&](const std::string& key) {
        auto [it, fresh] = nodes_[node].children.try_emplace(key, static_cast<std::uint32_t>(nodes_.size()));
        const std::uint32_t next = it->second;
        if (fresh) {
            nodes_.emplace_back();
        }
        keys.push_back(key);
        node = next;
    };

    for (std::size_t k = 0; k < levels; ++k) {
        const std::string& token = tokens[k];
        const auto& children = nodes_[node].children;
        if (children.contains(token)) {
            descend(token);
            continue;
        }
        if (has_digit(token)) {
            descend(kCatchAll);
            continue;
        }
        const bool has_catch_all = children.contains(kCatchAll);
        // Without a catch-all yet, the last free slot is reserved for it.
        if (has_catch_all ? children.size() < cap : children.size() + 1 < cap) {
            descend(token);
        } else {
            descend(kCatchAll);
        }
    }
    nodes_[node].groups.push_back(id);
    if (paths_.size() <= id_value(id)) {
        paths_.resize(id_value(id) + 1);
    }
    paths_[id_value(id)] = std::move(keys);
}

ParseOutcome DrainParser::feed(const TokenSequence& tokens) {
    if (tokens.empty()) {
        if (empty_template_) {
            ++store_.at(*empty_template_).support;
            return {*empty_template_, false, {}};
        }
        empty_template_ = store_.create({});
        paths_.resize(store_.size());
        paths_[id_value(*empty_template_)] = {length_key(0)};
        return {*empty_template_, true, {}};
    }

    if (auto leaf = search_leaf(tokens, nullptr)) {
        std::optional<TemplateId> best;
        std::size_t best_same = 0;
        std::size_t best_params = 0;
        for (auto id : nodes_[*leaf].groups) {
            const auto& group = store_.at(id).tokens;
            std::size_t same = 0;
            std::size_t params = 0;
            for (std::size_t i = 0; i < group.size(); ++i) {
                if (is_wildcard(group[i])) {
                    ++params;
                } else if (group[i] == tokens[i]) {
                    ++same;
                }
            }
            if (!best || same > best_same || (same == best_same && params > best_params)) {
                best = id;
                best_same = same;
                best_params = params;
            }
        }
        const double sim = static_cast<double>(best_same) / static_cast<double>(tokens.size());
        if (best && sim + kThresholdSlack >= config_.st) {
            Template& group = store_.at(*best);
            group.tokens = update_group_template(group.tokens, tokens);
            ++group.support;
            return {*best, false, parameters(*best, tokens)};
        }
    }

    const TemplateId id = store_.create(tokens);
    add_group(id);
    return {id, true, parameters(id, tokens)};
}

std::vector<std::string> DrainParser::parameters(TemplateId id, const TokenSequence& tokens) const {
    const auto& group = store_.at(id).tokens;
    if (group.size() != tokens.size()) {
        return align_parameters(group, tokens);
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < group.size(); ++i) {
        if (is_wildcard(group[i])) {
            out.push_back(tokens[i]);
        }
    }
    return out;
}

std::optional<std::vector<std::string>> DrainParser::route(const TokenSequence& tokens) const {
    if (tokens.empty()) {
        if (!empty_template_) {
            return std::nullopt;
        }
        return std::vector<std::string>{length_key(0)};
    }
    std::vector<std::string> keys;
    if (!search_leaf(tokens, &keys)) {
        return std::nullopt;
    }
    return keys;
}

std::size_t DrainParser::max_fanout() const {
    std::size_t widest = 0;
    for (const auto& node : nodes_) {
        widest = std::max(widest, node.children.size());
    }
    return widest;
}

} // namespace logstruct
