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
#include <optional>
#include <string>
#include <string_view>

#include "logstruct/drain.hpp"
#include "logstruct/spell.hpp"

namespace logstruct {

enum class ParserKind {
    spell,
    drain,
};

std::string_view to_string(ParserKind kind);
std::optional<ParserKind> parse_parser_kind(std::string_view name);

/// A parser choice plus its parameters.
struct ParserSpec {
    ParserKind kind = ParserKind::spell;
    SpellConfig spell;
    DrainConfig drain;

    void validate() const;
    /// "tau=0.5" or "depth=4;st=0.4;max_children=100".
    std::string describe() const;
};

std::unique_ptr<LogParser> make_parser(const ParserSpec& spec);

} // namespace logstruct
