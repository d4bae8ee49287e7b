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
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "logstruct/model.hpp"

namespace logstruct {

struct DrainConfig {
    /// Total tree depth counting root, length layer and leaf. The number of
    /// leading tokens used for routing is depth - 3.
    int depth = 4;
    /// Similarity threshold for joining an existing group.
    double st = 0.4;
    /// Branching cap of each token node.
    int max_children = 100;

    void validate() const;
    int routing_tokens() const { return depth - 3; }
};

struct Similarity {
    double sim = 0.0;
    std::size_t param_count = 0;
};

/// Fraction of positions where the template holds the same non-wildcard
/// token as the message. Both sequences must have the same length.
Similarity seq_similarity(std::span<const std::string> template_tokens, std::span<const std::string> message_tokens);

/// Positionwise merge: differing positions become the wildcard.
TokenSequence update_group_template(std::span<const std::string> template_tokens,
                                    std::span<const std::string> message_tokens);

/**
 * Online fixed-depth parse tree.
 *
 * Messages route by token count, then by their first depth - 3 tokens
 * (tokens containing a digit and overflow keys go to the catch-all child),
 * and finally compete against the groups of the reached leaf.
 */
class DrainParser final : public LogParser {
public:
    explicit DrainParser(DrainConfig config);

    ParseOutcome feed(const TokenSequence& tokens) override;

    const Template& get(TemplateId id) const override { return store_.at(id); }
    std::size_t template_count() const override { return store_.size(); }
    std::vector<Template> templates() const override { return store_.all(); }
    std::vector<std::string> parameters(TemplateId id, const TokenSequence& tokens) const override;

    const DrainConfig& config() const { return config_; }

    /// Keys from the root to the leaf holding a group: "#<count>" for the
    /// length layer, then one key per routing level.
    const std::vector<std::string>& leaf_path(TemplateId id) const { return paths_.at(id_value(id)); }

    /// Keys of the leaf `tokens` would be searched in, if that leaf exists.
    std::optional<std::vector<std::string>> route(const TokenSequence& tokens) const;

    /// Largest child count of any token node.
    std::size_t max_fanout() const;

private:
    struct Node {
        std::unordered_map<std::string, std::uint32_t> children;
        std::vector<TemplateId> groups;
    };

    std::optional<std::uint32_t> search_leaf(const TokenSequence& tokens, std::vector<std::string>* keys) const;
    void add_group(TemplateId id);

    DrainConfig config_;
    TemplateStore store_;
    std::vector<Node> nodes_;
    std::unordered_map<std::size_t, std::uint32_t> by_length_;
    std::vector<std::vector<std::string>> paths_;
    std::optional<TemplateId> empty_template_;
};

} // namespace logstruct
