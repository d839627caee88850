// Copyright 2026 The Stackviral Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STACKVIRAL_REGION_SET_HPP
#define STACKVIRAL_REGION_SET_HPP

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace stackviral {

// Subset of regions as a bitmask; bit k is region k (0-based).
class RegionSet {
 public:
  using mask_type = std::uint32_t;

  constexpr RegionSet() = default;
  constexpr explicit RegionSet(mask_type mask) : mask_(mask) {}

  static constexpr RegionSet full(int region_count) {
    return RegionSet(region_count >= 32 ? ~mask_type{0}
                                        : (mask_type{1} << region_count) - 1);
  }
  static RegionSet of(const std::vector<int>& regions) {
    RegionSet s;
    for (int k : regions) s = s.with(k);
    return s;
  }

  constexpr mask_type mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool contains(int k) const { return (mask_ >> k) & 1U; }
  constexpr RegionSet with(int k) const { return RegionSet(mask_ | (mask_type{1} << k)); }
  constexpr bool is_subset_of(RegionSet other) const {
    return (mask_ & ~other.mask_) == 0;
  }

  constexpr RegionSet operator&(RegionSet o) const { return RegionSet(mask_ & o.mask_); }
  constexpr RegionSet operator|(RegionSet o) const { return RegionSet(mask_ | o.mask_); }
  // Relative complement.
  constexpr RegionSet operator-(RegionSet o) const { return RegionSet(mask_ & ~o.mask_); }
  constexpr auto operator<=>(const RegionSet&) const = default;

  std::vector<int> members() const {
    std::vector<int> out;
    for (mask_type m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  // 1-based listing, e.g. "{1,2,4}".
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int k : members()) {
      if (!first) s += ',';
      s += std::to_string(k + 1);
      first = false;
    }
    return s + "}";
  }

 private:
  mask_type mask_ = 0;
};

// Calls fn(k) for each member k in increasing order, without allocating.
template <typename Fn>
void for_each_member(RegionSet set, Fn&& fn) {
  for (auto m = set.mask(); m != 0; m &= m - 1) fn(std::countr_zero(m));
}

// Calls fn(sub) for every sub ⊆ set in increasing bitmask order, empty set first.
template <typename Fn>
void for_each_subset(RegionSet set, Fn&& fn) {
  const auto full = set.mask();
  RegionSet::mask_type sub = 0;
  while (true) {
    fn(RegionSet(sub));
    if (sub == full) break;
    // next submask in increasing order
    sub = (sub - full) & full;
  }
}

}  // namespace stackviral

#endif  // STACKVIRAL_REGION_SET_HPP
