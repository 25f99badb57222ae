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

#include "thzris/config_file.hpp"

#include "thzris/system_config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace thzris
{

namespace
{

[[noreturn]] void fail_at(const std::string &source, int line, const std::string &what)
{
    throw ConfigError(source + ":" + std::to_string(line) + ": " + what);
}

std::string where(const IniSection &s, const std::string &key)
{
    std::string name = "[" + s.name + (s.label.empty() ? "" : " " + s.label) + "]";
    return name + " " + key;
}

} // namespace

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<std::string> IniSection::find(const std::string &key) const
{
    for (const auto &[k, v] : entries)
        if (k == key)
            return v;
    return std::nullopt;
}

std::vector<const IniSection *> IniDocument::all(const std::string &name) const
{
    std::vector<const IniSection *> out;
    for (const auto &s : sections)
        if (s.name == name)
            out.push_back(&s);
    return out;
}

const IniSection *IniDocument::unique(const std::string &name) const
{
    const auto found = all(name);
    if (found.size() > 1)
        fail_at(source, found[1]->line, "section [" + name + "] appears more than once");
    return found.empty() ? nullptr : found.front();
}

IniDocument parse_ini(std::istream &in, const std::string &source)
{
    IniDocument doc;
    doc.source = source;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw))
    {
        ++line;
        const std::string text = trim(raw);
        if (text.empty() || text[0] == '#' || text[0] == ';')
            continue;
        if (text.front() == '[')
        {
            if (text.back() != ']')
                fail_at(source, line, "unterminated section header");
            const std::string inner = trim(text.substr(1, text.size() - 2));
            if (inner.empty())
                fail_at(source, line, "empty section name");
            IniSection s;
            const auto sp = inner.find_first_of(" \t");
            s.name = inner.substr(0, sp);
            if (sp != std::string::npos)
                s.label = trim(inner.substr(sp));
            s.line = line;
            doc.sections.push_back(std::move(s));
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            fail_at(source, line, "expected 'key = value'");
        if (doc.sections.empty())
            fail_at(source, line, "key outside of any section");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty())
            fail_at(source, line, "empty key");
        auto &sec = doc.sections.back();
        if (sec.find(key))
            fail_at(source, line, "duplicate key '" + key + "'");
        sec.entries.emplace_back(key, value);
    }
    return doc;
}

IniDocument parse_ini_string(const std::string &text, const std::string &source)
{
    std::istringstream in(text);
    return parse_ini(in, source);
}

IniDocument load_ini(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open spec file '" + path + "'");
    return parse_ini(in, path);
}

double to_double(const IniSection &s, const std::string &key, const std::string &value)
{
    const std::string v = trim(value);
    char *end = nullptr;
    errno = 0;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
        throw ConfigError(where(s, key) + ": expected a number, got '" + value + "'");
    return x;
}

long long to_integer(const IniSection &s, const std::string &key, const std::string &value)
{
    const std::string v = trim(value);
    char *end = nullptr;
    errno = 0;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE)
        throw ConfigError(where(s, key) + ": expected an integer, got '" + value + "'");
    return x;
}

bool to_bool(const IniSection &s, const std::string &key, const std::string &value)
{
    const std::string v = trim(value);
    if (v == "true" || v == "yes" || v == "1" || v == "on")
        return true;
    if (v == "false" || v == "no" || v == "0" || v == "off")
        return false;
    throw ConfigError(where(s, key) + ": expected a boolean, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string &value, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, sep))
    {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

} // namespace thzris
