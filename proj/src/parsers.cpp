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

#include "logstruct/parsers.hpp"

#include <sstream>

namespace logstruct {

std::string_view to_string(ParserKind kind) {
    return kind == ParserKind::spell ? "spell" : "drain";
}

std::optional<ParserKind> parse_parser_kind(std::string_view name) {
    if (name == "spell") {
        return ParserKind::spell;
    }
    if (name == "drain") {
        return ParserKind::drain;
    }
    return std::nullopt;
}

void ParserSpec::validate() const {
    if (kind == ParserKind::spell) {
        spell.validate();
    } else {
        drain.validate();
    }
}

std::string ParserSpec::describe() const {
    std::ostringstream out;
    if (kind == ParserKind::spell) {
        out << "tau=" << spell.tau;
    } else {
        out << "depth=" << drain.depth << ";st=" << drain.st << ";max_children=" << drain.max_children;
    }
    return out.str();
}

std::unique_ptr<LogParser> make_parser(const ParserSpec& spec) {
    if (spec.kind == ParserKind::spell) {
        return std::make_unique<SpellParser>(spec.spell);
    }
    return std::make_unique<DrainParser>(spec.drain);
}

} // namespace logstruct
