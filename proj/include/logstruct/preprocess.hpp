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

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logstruct/model.hpp"

namespace logstruct {

/**
 * Ordered, compiled masking patterns (Perl syntax).
 *
 * Immutable after compilation and safe to share between threads.
 */
class MaskSet {
public:
    MaskSet();
    ~MaskSet();
    MaskSet(const MaskSet&);
    MaskSet& operator=(const MaskSet&);
    MaskSet(MaskSet&&) noexcept;
    MaskSet& operator=(MaskSet&&) noexcept;

    /// Throws ConfigError naming the first pattern that fails to compile.
    static MaskSet compile(std::span<const std::string> patterns);

    std::size_t size() const;
    bool empty() const { return size() == 0; }
    const std::vector<std::string>& sources() const;

    /**
     * Replaces every leftmost non-overlapping match of each pattern, in
     * declaration order over the output of the previous one, with the
     * wildcard. Whitespace inside a match is kept and each non-space run of
     * it becomes one wildcard, so token boundaries never move. Empty
     * matches are left alone.
     */
    std::string apply(std::string_view content) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

inline std::string apply_masks(std::string_view content, const MaskSet& masks) {
    return masks.apply(content);
}

TokenSequence preprocess_record(const LogRecord& record, const MaskSet& masks, bool enabled);

/// Tokens for every record; OpenMP-parallel over records.
std::vector<TokenSequence> preprocess_batch(std::span<const LogRecord> records, const MaskSet& masks, bool enabled,
                                            int workers = 0);

/// Serial reference for preprocess_batch.
std::vector<TokenSequence> preprocess_batch_serial(std::span<const LogRecord> records, const MaskSet& masks,
                                                   bool enabled);

} // namespace logstruct
