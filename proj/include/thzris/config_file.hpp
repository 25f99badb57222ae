// SPDX-License-Identifier: Apache-2.0
//
// thzris - wideband THz hybrid beamforming with double-layer true-time delays
// Copyright (C) 2026 thzris developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef THZRIS_CONFIG_FILE_HPP
#define THZRIS_CONFIG_FILE_HPP

#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace thzris
{

// Minimal INI reader for experiment spec files.
//
//   # comment            ; comment
//   [section]            [section label]
//   key = value
//
// Keys are case-sensitive, values are trimmed, duplicate keys within a section are errors.
// Section headers may repeat (e.g. several [scheme ...] blocks).
struct IniSection
{
    std::string name;
    std::string label; // text after the section name, may be empty
    int line = 0;
    std::vector<std::pair<std::string, std::string>> entries;

    std::optional<std::string> find(const std::string &key) const;
};

struct IniDocument
{
    std::string source;
    std::vector<IniSection> sections;

    std::vector<const IniSection *> all(const std::string &name) const;
    // Throws ConfigError if the section appears more than once.
    const IniSection *unique(const std::string &name) const;
};

IniDocument parse_ini(std::istream &in, const std::string &source = "<input>");
IniDocument parse_ini_string(const std::string &text, const std::string &source = "<input>");
IniDocument load_ini(const std::string &path);

// Value helpers; errors name the section and key.
double to_double(const IniSection &s, const std::string &key, const std::string &value);
long long to_integer(const IniSection &s, const std::string &key, const std::string &value);
bool to_bool(const IniSection &s, const std::string &key, const std::string &value);
std::vector<std::string> split_list(const std::string &value, char sep = ',');
std::string trim(const std::string &s);

} // namespace thzris

#endif
