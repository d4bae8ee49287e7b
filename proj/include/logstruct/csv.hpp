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

#include <initializer_list>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Minimal RFC 4180 reading and writing: quoted fields, doubled quotes,
// embedded separators and line breaks.
namespace logstruct::csv {

/// Reads the next record into `fields`. Returns false at end of input.
bool read_row(std::istream& in, std::vector<std::string>& fields);

std::string escape(std::string_view field);

void write_row(std::ostream& out, std::span<const std::string> fields);

inline void write_row(std::ostream& out, std::initializer_list<std::string> fields) {
    write_row(out, std::span<const std::string>(fields.begin(), fields.size()));
}

} // namespace logstruct::csv
