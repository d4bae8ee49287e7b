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

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "logstruct/model.hpp"

namespace logstruct {

struct SpellConfig {
    /// Minimum ratio of LCS length to message length for a match.
    double tau = 0.5;

    void validate() const;
};

namespace detail {

/// Index pairs (i, j) of one longest common subsequence, increasing in both.
template <typename T>
std::vector<std::pair<std::size_t, std::size_t>> lcs_pairs(std::span<const T> a, std::span<const T> b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<std::uint32_t> table((n + 1) * (m + 1), 0);
    auto cell = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return table[i * (m + 1) + j]; };
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            cell(i, j) = a[i - 1] == b[j - 1] ? cell(i - 1, j - 1) + 1 : std::max(cell(i - 1, j), cell(i, j - 1));
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(cell(n, m));
    std::size_t i = n;
    std::size_t j = m;
    while (i > 0 && j > 0) {
        if (a[i - 1] == b[j - 1]) {
            pairs.emplace_back(i - 1, j - 1);
            --i;
            --j;
        } else if (cell(i - 1, j) >= cell(i, j - 1)) {
            --i;
        } else {
            --j;
        }
    }
    return {pairs.rbegin(), pairs.rend()};
}

/**
 * Merge walk behind template refinement. Constants of `tmpl` and `msg` are
 * aligned by LCS; every stretch between two aligned anchors that is
 * non-empty on either side becomes wildcards (one per position when both
 * sides have the same stretch length, otherwise a single one).
 */
template <typename T>
std::vector<T> merge_walk(std::span<const T> tmpl, std::span<const T> msg, const T& wildcard) {
    std::vector<std::size_t> t_pos;
    std::vector<std::size_t> m_pos;
    std::vector<T> t_const;
    std::vector<T> m_const;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        if (!(tmpl[i] == wildcard)) {
            t_pos.push_back(i);
            t_const.push_back(tmpl[i]);
        }
    }
    for (std::size_t i = 0; i < msg.size(); ++i) {
        if (!(msg[i] == wildcard)) {
            m_pos.push_back(i);
            m_const.push_back(msg[i]);
        }
    }
    auto anchors = lcs_pairs<T>(t_const, m_const);

    std::vector<T> out;
    std::size_t next_t = 0;
    std::size_t next_m = 0;
    auto emit_gap = [&](std::size_t t_end, std::size_t m_end) {
        const std::size_t t_gap = t_end - next_t;
        const std::size_t m_gap = m_end - next_m;
        if (t_gap == 0 && m_gap == 0) {
            return;
        }
        const std::size_t count = t_gap == m_gap ? t_gap : 1;
        out.insert(out.end(), count, wildcard);
    };
    for (auto [ti, mi] : anchors) {
        const std::size_t t_at = t_pos[ti];
        const std::size_t m_at = m_pos[mi];
        emit_gap(t_at, m_at);
        out.push_back(tmpl[t_at]);
        next_t = t_at + 1;
        next_m = m_at + 1;
    }
    emit_gap(tmpl.size(), msg.size());
    return out;
}

} // namespace detail

/// One longest common subsequence of `a` and `b`.
TokenSequence lcs(std::span<const std::string> a, std::span<const std::string> b);

/// Template after absorbing `message`; its constants are exactly
/// lcs(constants(template), constants(message)).
TokenSequence refine_template(std::span<const std::string> template_tokens,
                              std::span<const std::string> message_tokens);

/// Candidate lookup strategy. Both return the same match for every input.
enum class SpellLookup {
    prefix_tree,
    exhaustive,
};

/// Figures behind the most recent accepted match.
struct SpellMatchStats {
    std::size_t lcs_length = 0;
    std::size_t message_constants = 0;
};

/**
 * Online longest-common-subsequence parser.
 *
 * A message is scored against each template by the LCS of the template's
 * constant tokens and the message's non-wildcard tokens. The best template
 * (longest LCS, then fewer wildcards, then lower id) is accepted when
 * LCS >= tau * |message non-wildcard tokens|. Tokens already masked to the
 * wildcard count as identified variables and take no part in matching.
 */
class SpellParser final : public LogParser {
public:
    explicit SpellParser(SpellConfig config, SpellLookup lookup = SpellLookup::prefix_tree);

    ParseOutcome feed(const TokenSequence& tokens) override;

    const Template& get(TemplateId id) const override { return store_.at(id); }
    std::size_t template_count() const override { return store_.size(); }
    std::vector<Template> templates() const override { return store_.all(); }
    std::vector<std::string> parameters(TemplateId id, const TokenSequence& tokens) const override;

    const SpellConfig& config() const { return config_; }
    const std::optional<SpellMatchStats>& last_match() const { return last_match_; }

    /// True when the prefix tree and the length buckets index exactly the
    /// live non-empty templates under their current constants.
    bool index_consistent() const;

private:
    using Sym = std::uint32_t;
    static constexpr Sym kWildcardSym = 0;
    static constexpr Sym kUnknownSym = 0xFFFFFFFFu;

    struct Entry {
        std::vector<Sym> tokens;
        std::vector<Sym> constants;
        std::size_t wildcards = 0;
    };

    struct TrieNode {
        std::unordered_map<Sym, std::uint32_t> children;
        std::vector<TemplateId> terminals;
    };

    struct Candidate {
        TemplateId id{};
        std::size_t lcs = 0;
        std::size_t wildcards = 0;
    };

    Sym intern(const std::string& token);
    Sym lookup_sym(const std::string& token) const;
    Entry make_entry(std::vector<Sym> syms) const;

    std::optional<Candidate> best_exhaustive(std::span<const Sym> message) const;
    std::optional<Candidate> best_indexed(std::span<const Sym> message) const;
    void collect_subsequence_templates(std::uint32_t node, std::size_t pos, std::span<const Sym> message,
                                       std::vector<TemplateId>& out) const;
    bool reaches_threshold(std::size_t length, std::size_t message_constants) const;

    void index_insert(TemplateId id);
    void index_remove(TemplateId id);

    SpellConfig config_;
    SpellLookup lookup_;
    TemplateStore store_;
    std::vector<Entry> entries_;
    std::unordered_map<std::string, Sym> vocabulary_;
    std::vector<std::string> symbols_;
    std::map<std::size_t, std::vector<TemplateId>> by_constant_length_;
    std::vector<TrieNode> trie_;
    std::optional<TemplateId> empty_template_;
    std::optional<SpellMatchStats> last_match_;
};

} // namespace logstruct
