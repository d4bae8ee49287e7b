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

#include "logstruct/spell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "logstruct/error.hpp"

namespace logstruct {

namespace {

constexpr double kThresholdSlack = 1e-9;

// Length-only LCS over interned tokens, two rolling rows.
std::size_t lcs_length(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
    if (a.size() < b.size()) {
        std::swap(a, b);
    }
    std::vector<std::uint32_t> prev(b.size() + 1, 0);
    std::vector<std::uint32_t> curr(b.size() + 1, 0);
    for (auto x : a) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            curr[j] = x == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], curr[j - 1]);
        }
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

} // namespace

void SpellConfig::validate() const {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw ConfigError("spell: tau must lie in [0, 1], got " + std::to_string(tau));
    }
}

TokenSequence lcs(std::span<const std::string> a, std::span<const std::string> b) {
    TokenSequence out;
    for (auto [i, j] : detail::lcs_pairs<std::string>(a, b)) {
        out.push_back(a[i]);
    }
    return out;
}

TokenSequence refine_template(std::span<const std::string> template_tokens,
                              std::span<const std::string> message_tokens) {
    return detail::merge_walk<std::string>(template_tokens, message_tokens, std::string(kWildcard));
}

SpellParser::SpellParser(SpellConfig config, SpellLookup lookup) : config_(config), lookup_(lookup) {
    config_.validate();
    symbols_.emplace_back(kWildcard);
    vocabulary_.emplace(std::string(kWildcard), kWildcardSym);
    trie_.emplace_back();
}

SpellParser::Sym SpellParser::intern(const std::string& token) {
    auto [it, inserted] = vocabulary_.try_emplace(token, static_cast<Sym>(symbols_.size()));
    if (inserted) {
        symbols_.push_back(token);
    }
    return it->second;
}

SpellParser::Sym SpellParser::lookup_sym(const std::string& token) const {
    auto it = vocabulary_.find(token);
    return it == vocabulary_.end() ? kUnknownSym : it->second;
}

SpellParser::Entry SpellParser::make_entry(std::vector<Sym> syms) const {
    Entry entry;
    for (auto s : syms) {
        if (s == kWildcardSym) {
            ++entry.wildcards;
        } else {
            entry.constants.push_back(s);
        }
    }
    entry.tokens = std::move(syms);
    return entry;
}

bool SpellParser::reaches_threshold(std::size_t length, std::size_t message_constants) const {
    return static_cast<double>(length) + kThresholdSlack >= config_.tau * static_cast<double>(message_constants);
}

namespace {

template <typename C>
bool better(const C& a, const C& b) {
    if (a.lcs != b.lcs) {
        return a.lcs > b.lcs;
    }
    if (a.wildcards != b.wildcards) {
        return a.wildcards < b.wildcards;
    }
    return id_value(a.id) < id_value(b.id);
}

} // namespace

std::optional<SpellParser::Candidate> SpellParser::best_exhaustive(std::span<const Sym> message) const {
    const std::size_t n = message.size();
    std::optional<Candidate> best;
    for (std::size_t raw = 0; raw < entries_.size(); ++raw) {
        const auto id = static_cast<TemplateId>(raw);
        if (empty_template_ == id) {
            continue;
        }
        const Entry& e = entries_[raw];
        const std::size_t length = e.constants.size();
        if (n == 0) {
            // An all-variable message only joins an all-variable template.
            if (length != 0) {
                continue;
            }
        } else if (!reaches_threshold(length, n)) {
            continue;
        }
        Candidate bound{id, std::min(length, n), e.wildcards};
        if (best && !better(bound, *best)) {
            continue;
        }
        Candidate c{id, lcs_length(e.constants, message), e.wildcards};
        if (!best || better(c, *best)) {
            best = c;
        }
    }
    return best;
}

void SpellParser::collect_subsequence_templates(std::uint32_t node, std::size_t pos, std::span<const Sym> message,
                                                std::vector<TemplateId>& out) const {
    const TrieNode& here = trie_[node];
    out.insert(out.end(), here.terminals.begin(), here.terminals.end());
    if (here.children.empty()) {
        return;
    }
    // Earliest occurrence of each child key is the only one worth following.
    std::vector<std::uint32_t> visited;
    for (std::size_t j = pos; j < message.size(); ++j) {
        auto it = here.children.find(message[j]);
        if (it == here.children.end()) {
            continue;
        }
        if (std::find(visited.begin(), visited.end(), it->second) != visited.end()) {
            continue;
        }
        visited.push_back(it->second);
        collect_subsequence_templates(it->second, j + 1, message, out);
    }
}

std::optional<SpellParser::Candidate> SpellParser::best_indexed(std::span<const Sym> message) const {
    const std::size_t n = message.size();
    std::vector<TemplateId> full;
    collect_subsequence_templates(0, 0, message, full);

    // Constants fully contained in the message: LCS is the constant length.
    std::optional<Candidate> best;
    for (auto id : full) {
        const Entry& e = entries_[id_value(id)];
        if (n > 0 && !reaches_threshold(e.constants.size(), n)) {
            continue;
        }
        Candidate c{id, e.constants.size(), e.wildcards};
        if (!best || better(c, *best)) {
            best = c;
        }
    }
    if (n == 0) {
        return best;
    }

    // Only templates with more constants than the best full hit can still
    // win; equal-length ones would need a full hit to tie.
    const std::size_t start = best ? best->lcs + 1 : 0;
    for (auto it = by_constant_length_.lower_bound(start); it != by_constant_length_.end(); ++it) {
        const std::size_t length = it->first;
        if (!reaches_threshold(length, n)) {
            continue;
        }
        for (auto id : it->second) {
            const Entry& e = entries_[id_value(id)];
            Candidate bound{id, std::min(length, n), e.wildcards};
            if (best && !better(bound, *best)) {
                continue;
            }
            Candidate c{id, lcs_length(e.constants, message), e.wildcards};
            if (!best || better(c, *best)) {
                best = c;
            }
        }
    }
    return best;
}

void SpellParser::index_insert(TemplateId id) {
    std::uint32_t node = 0;
    for (auto s : entries_[id_value(id)].constants) {
        auto it = trie_[node].children.find(s);
        if (it == trie_[node].children.end()) {
            const auto child = static_cast<std::uint32_t>(trie_.size());
            trie_.emplace_back();
            trie_[node].children.emplace(s, child);
            node = child;
        } else {
            node = it->second;
        }
    }
    trie_[node].terminals.push_back(id);
    by_constant_length_[entries_[id_value(id)].constants.size()].push_back(id);
}

void SpellParser::index_remove(TemplateId id) {
    const Entry& e = entries_[id_value(id)];
    std::uint32_t node = 0;
    for (auto s : e.constants) {
        node = trie_[node].children.at(s);
    }
    auto& terminals = trie_[node].terminals;
    terminals.erase(std::find(terminals.begin(), terminals.end(), id));

    auto bucket = by_constant_length_.find(e.constants.size());
    auto& ids = bucket->second;
    ids.erase(std::find(ids.begin(), ids.end(), id));
    if (ids.empty()) {
        by_constant_length_.erase(bucket);
    }
}

ParseOutcome SpellParser::feed(const TokenSequence& tokens) {
    if (tokens.empty()) {
        last_match_.reset();
        if (empty_template_) {
            ++store_.at(*empty_template_).support;
            return {*empty_template_, false, {}};
        }
        empty_template_ = store_.create({});
        entries_.emplace_back();
        return {*empty_template_, true, {}};
    }

    std::vector<Sym> message;
    std::vector<Sym> constants;
    message.reserve(tokens.size());
    for (const auto& token : tokens) {
        const Sym s = is_wildcard(token) ? kWildcardSym : lookup_sym(token);
        message.push_back(s);
        if (s != kWildcardSym) {
            constants.push_back(s);
        }
    }

    const auto best = lookup_ == SpellLookup::prefix_tree ? best_indexed(constants) : best_exhaustive(constants);
    if (best && (constants.empty() || reaches_threshold(best->lcs, constants.size()))) {
        const TemplateId id = best->id;
        Entry& entry = entries_[id_value(id)];
        auto merged = detail::merge_walk<Sym>(entry.tokens, message, kWildcardSym);
        Template& tmpl = store_.at(id);
        if (merged != entry.tokens) {
            index_remove(id);
            entry = make_entry(std::move(merged));
            tmpl.tokens.clear();
            for (auto s : entry.tokens) {
                tmpl.tokens.push_back(symbols_[s]);
            }
            index_insert(id);
        }
        ++tmpl.support;
        last_match_ = SpellMatchStats{best->lcs, constants.size()};
        return {id, false, align_parameters(tmpl.tokens, tokens)};
    }

    std::vector<Sym> syms;
    syms.reserve(tokens.size());
    for (const auto& token : tokens) {
        syms.push_back(is_wildcard(token) ? kWildcardSym : intern(token));
    }
    const TemplateId id = store_.create(tokens);
    entries_.push_back(make_entry(std::move(syms)));
    index_insert(id);
    last_match_.reset();
    return {id, true, align_parameters(store_.at(id).tokens, tokens)};
}

std::vector<std::string> SpellParser::parameters(TemplateId id, const TokenSequence& tokens) const {
    return align_parameters(store_.at(id).tokens, tokens);
}

bool SpellParser::index_consistent() const {
    std::size_t indexed = 0;
    for (std::size_t raw = 0; raw < entries_.size(); ++raw) {
        const auto id = static_cast<TemplateId>(raw);
        if (empty_template_ == id) {
            continue;
        }
        ++indexed;
        const Entry& e = entries_[raw];
        std::uint32_t node = 0;
        for (auto s : e.constants) {
            auto it = trie_[node].children.find(s);
            if (it == trie_[node].children.end()) {
                return false;
            }
            node = it->second;
        }
        const auto& terminals = trie_[node].terminals;
        if (std::find(terminals.begin(), terminals.end(), id) == terminals.end()) {
            return false;
        }
        auto bucket = by_constant_length_.find(e.constants.size());
        if (bucket == by_constant_length_.end() ||
            std::find(bucket->second.begin(), bucket->second.end(), id) == bucket->second.end()) {
            return false;
        }
        // The store's text form must agree with the interned form.
        const auto& text = store_.at(id).tokens;
        if (text.size() != e.tokens.size()) {
            return false;
        }
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (symbols_[e.tokens[i]] != text[i]) {
                return false;
            }
        }
    }
    std::size_t terminals = 0;
    for (const auto& node : trie_) {
        terminals += node.terminals.size();
    }
    std::size_t bucketed = 0;
    for (const auto& [length, ids] : by_constant_length_) {
        bucketed += ids.size();
    }
    return terminals == indexed && bucketed == indexed;
}

} // namespace logstruct
