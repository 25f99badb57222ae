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

#ifndef THZRIS_REFLECTION_HPP
#define THZRIS_REFLECTION_HPP

#include "thzris/system_config.hpp"

#include <vector>

namespace thzris
{

// The 2^bits unit-modulus reflection alphabet {exp(j 2 pi q / 2^bits)}, q = 0..2^bits-1.
std::vector<cd> candidate_set(int bits);

// Discrete RIS reflection state. Each element stores its index into candidate_set(bits),
// so every coefficient is exactly an alphabet point with unit modulus. Elements are
// ordered RIS-major, then row-major over the (row, column) grid of each surface.
class ReflectionConfig
{
public:
    ReflectionConfig() = default;
    ReflectionConfig(int ris_count, int elements_per_ris, int bits);

    // All elements set to +1 (alphabet index 0).
    static ReflectionConfig all_ones(int ris_count, int elements_per_ris, int bits);

    int bits() const { return bits_; }
    int ris_count() const { return ris_count_; }
    int elements_per_ris() const { return elements_per_ris_; }
    int size() const { return static_cast<int>(indices_.size()); }

    int index(int element) const { return indices_.at(element); }
    void set_index(int element, int alphabet_index);

    cd coefficient(int element) const { return alphabet_[indices_.at(element)]; }
    cd coefficient(int ris, int element) const { return coefficient(ris * elements_per_ris_ + element); }

    const std::vector<int> &indices() const { return indices_; }
    const std::vector<cd> &alphabet() const { return alphabet_; }

    bool operator==(const ReflectionConfig &other) const
    {
        return bits_ == other.bits_ && ris_count_ == other.ris_count_ &&
               elements_per_ris_ == other.elements_per_ris_ && indices_ == other.indices_;
    }

private:
    int bits_ = 1;
    int ris_count_ = 0;
    int elements_per_ris_ = 0;
    std::vector<int> indices_;
    std::vector<cd> alphabet_;
};

} // namespace thzris

#endif
