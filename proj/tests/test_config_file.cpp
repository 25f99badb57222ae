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

#include <doctest.h>

#include <string>

using namespace thzris;

namespace
{

std::string error_of(const std::string &text)
{
    try
    {
        parse_ini_string(text, "spec.ini");
    }
    catch (const ConfigError &e)
    {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("sections, labels, comments and values")
{
    const auto doc = parse_ini_string("# leading comment\n"
                                      "[experiment]\n"
                                      "  id = rate_vs_power   \n"
                                      "; another comment\n"
                                      "[scheme  fast one]\n"
                                      "scheme=ps\n"
                                      "\n"
                                      "[scheme]\n"
                                      "note = a = b\n",
                                      "x.ini");
    REQUIRE(doc.sections.size() == 3);
    CHECK(doc.source == "x.ini");
    CHECK(doc.sections[0].name == "experiment");
    CHECK(doc.sections[0].line == 2);
    CHECK(doc.sections[0].find("id") == std::optional<std::string>("rate_vs_power"));
    CHECK(doc.sections[1].label == "fast one");
    CHECK(doc.sections[2].label.empty());
    CHECK(doc.sections[2].find("note") == std::optional<std::string>("a = b"));
    CHECK_FALSE(doc.sections[1].find("missing"));
    CHECK(doc.all("scheme").size() == 2);
    CHECK(doc.unique("experiment") == &doc.sections[0]);
    CHECK(doc.unique("solver") == nullptr);
    CHECK_THROWS_AS(doc.unique("scheme"), ConfigError);
}

TEST_CASE("syntax errors carry file and line")
{
    CHECK(error_of("[a]\nkey value\n") == "spec.ini:2: expected 'key = value'");
    CHECK(error_of("key = 1\n") == "spec.ini:1: key outside of any section");
    CHECK(error_of("[a\n") == "spec.ini:1: unterminated section header");
    CHECK(error_of("[ ]\n") == "spec.ini:1: empty section name");
    CHECK(error_of("[a]\nx = 1\nx = 2\n") == "spec.ini:3: duplicate key 'x'");
    CHECK(error_of("[a]\n = 2\n") == "spec.ini:2: empty key");
    CHECK_THROWS_AS(load_ini("/nonexistent/dir/spec.ini"), ConfigError);
}

TEST_CASE("value conversion")
{
    IniSection s;
    s.name = "system";
    CHECK(to_double(s, "f_c", " 300e9 ") == 300e9);
    CHECK(to_integer(s, "N", "128") == 128);
    CHECK(to_bool(s, "flag", "yes"));
    CHECK_FALSE(to_bool(s, "flag", "off"));
    try
    {
        to_double(s, "f_c", "3oo");
        FAIL("expected an error");
    }
    catch (const ConfigError &e)
    {
        CHECK(std::string(e.what()) == "[system] f_c: expected a number, got '3oo'");
    }
    CHECK_THROWS_AS(to_integer(s, "N", "12.5"), ConfigError);
    CHECK_THROWS_AS(to_integer(s, "N", ""), ConfigError);
    CHECK_THROWS_AS(to_bool(s, "flag", "maybe"), ConfigError);
}

TEST_CASE("list splitting and trimming")
{
    CHECK(split_list(" 1, 2 ,,3 ") == std::vector<std::string>{"1", "2", "3"});
    CHECK(split_list("0,80,6; 0,85,8", ';') == std::vector<std::string>{"0,80,6", "0,85,8"});
    CHECK(split_list("").empty());
    CHECK(trim("\t a b \r\n") == "a b");
    CHECK(trim("   ").empty());
}
