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

#ifndef THZRIS_GRID_HPP
#define THZRIS_GRID_HPP

#include <cassert>
#include <vector>

namespace thzris
{

// Dense (subcarrier, user) table. Storage is subcarrier-major.
template <class T>
class UserGrid
{
public:
    UserGrid() = default;
    UserGrid(int subcarriers, int users, const T &init = T{})
        : subcarriers_(subcarriers), users_(users),
          data_(static_cast<std::size_t>(subcarriers) * static_cast<std::size_t>(users), init)
    {
    }

    int subcarriers() const { return subcarriers_; }
    int users() const { return users_; }
    std::size_t size() const { return data_.size(); }

    T &operator()(int m, int k)
    {
        assert(m >= 0 && m < subcarriers_ && k >= 0 && k < users_);
        return data_[static_cast<std::size_t>(m) * users_ + k];
    }
    const T &operator()(int m, int k) const
    {
        assert(m >= 0 && m < subcarriers_ && k >= 0 && k < users_);
        return data_[static_cast<std::size_t>(m) * users_ + k];
    }

    auto begin() { return data_.begin(); }
    auto end() { return data_.end(); }
    auto begin() const { return data_.begin(); }
    auto end() const { return data_.end(); }

private:
    int subcarriers_ = 0;
    int users_ = 0;
    std::vector<T> data_;
};

} // namespace thzris

#endif
