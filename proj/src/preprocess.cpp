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

#include "logstruct/preprocess.hpp"

#include <omp.h>

#include <boost/regex.hpp>
#include <cctype>
#include <exception>

#include "logstruct/error.hpp"

namespace logstruct {

struct MaskSet::Impl {
    std::vector<std::string> sources;
    std::vector<boost::regex> patterns;
};

MaskSet::MaskSet() : impl_(std::make_unique<Impl>()) {}
MaskSet::~MaskSet() = default;
MaskSet::MaskSet(const MaskSet& other)
    : impl_(other.impl_ ? std::make_unique<Impl>(*other.impl_) : std::make_unique<Impl>()) {}
MaskSet& MaskSet::operator=(const MaskSet& other) {
    if (this != &other) {
        impl_ = other.impl_ ? std::make_unique<Impl>(*other.impl_) : std::make_unique<Impl>();
    }
    return *this;
}
MaskSet::MaskSet(MaskSet&&) noexcept = default;
MaskSet& MaskSet::operator=(MaskSet&&) noexcept = default;

MaskSet MaskSet::compile(std::span<const std::string> patterns) {
    MaskSet set;
    for (const auto& source : patterns) {
        try {
            set.impl_->patterns.emplace_back(source, boost::regex::perl);
        } catch (const boost::regex_error& e) {
            throw ConfigError("mask pattern '" + source + "' does not compile: " + e.what());
        }
        set.impl_->sources.push_back(source);
    }
    return set;
}

std::size_t MaskSet::size() const {
    return impl_ ? impl_->patterns.size() : 0;
}

const std::vector<std::string>& MaskSet::sources() const {
    static const std::vector<std::string> none;
    return impl_ ? impl_->sources : none;
}

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::string mask_one(const std::string& input, const boost::regex& pattern) {
    std::string out;
    out.reserve(input.size());
    auto cursor = input.cbegin();
    boost::sregex_iterator it(input.cbegin(), input.cend(), pattern);
    for (boost::sregex_iterator end; it != end; ++it) {
        const auto& m = (*it)[0];
        if (m.length() == 0) {
            continue;
        }
        out.append(cursor, m.first);
        // Whitespace inside a match is kept verbatim and each non-space run
        // collapses to one wildcard, so token boundaries never move.
        bool in_run = false;
        for (auto c = m.first; c != m.second; ++c) {
            if (is_space(*c)) {
                out.push_back(*c);
                in_run = false;
            } else if (!in_run) {
                out.append(kWildcard);
                in_run = true;
            }
        }
        cursor = m.second;
    }
    out.append(cursor, input.cend());
    return out;
}

} // namespace

std::string MaskSet::apply(std::string_view content) const {
    std::string text(content);
    if (!impl_) {
        return text;
    }
    for (const auto& pattern : impl_->patterns) {
        text = mask_one(text, pattern);
    }
    return text;
}

TokenSequence preprocess_record(const LogRecord& record, const MaskSet& masks, bool enabled) {
    if (!enabled) {
        return tokenize(record.content);
    }
    return tokenize(masks.apply(record.content));
}

std::vector<TokenSequence> preprocess_batch(std::span<const LogRecord> records, const MaskSet& masks, bool enabled,
                                            int workers) {
    std::vector<TokenSequence> out(records.size());
    const auto n = static_cast<std::ptrdiff_t>(records.size());
    const int threads = workers > 0 ? workers : omp_get_max_threads();
    // Exceptions must not escape the parallel region; keep the first one.
    std::exception_ptr failure;
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] =
                preprocess_record(records[static_cast<std::size_t>(i)], masks, enabled);
        } catch (...) {
#pragma omp critical(logstruct_preprocess_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

std::vector<TokenSequence> preprocess_batch_serial(std::span<const LogRecord> records, const MaskSet& masks,
                                                   bool enabled) {
    std::vector<TokenSequence> out;
    out.reserve(records.size());
    for (const auto& record : records) {
        out.push_back(preprocess_record(record, masks, enabled));
    }
    return out;
}

} // namespace logstruct
