#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "skillmatch/errors.hpp"

namespace skillmatch {

enum class Side : std::uint8_t { customer, server };

inline constexpr int kMaxTypes = 32;

/// A subset of customer types or of server types, stored as a 32-bit mask.
/// The side is part of the type so customer and server subsets never mix.
template <Side S>
class TypeSet {
 public:
  constexpr TypeSet() = default;

  static constexpr TypeSet from_bits(std::uint32_t bits) {
    TypeSet s;
    s.bits_ = bits;
    return s;
  }
  static constexpr TypeSet single(int index) { return from_bits(std::uint32_t{1} << index); }
  static constexpr TypeSet all(int count) {
    return from_bits(count >= kMaxTypes ? ~std::uint32_t{0} : (std::uint32_t{1} << count) - 1);
  }
  static TypeSet of(std::initializer_list<int> indices) {
    TypeSet s;
    for (int i : indices) s.insert(i);
    return s;
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int index) const { return (bits_ >> index) & 1U; }
  constexpr void insert(int index) { bits_ |= std::uint32_t{1} << index; }
  constexpr void erase(int index) { bits_ &= ~(std::uint32_t{1} << index); }

  constexpr bool subset_of(TypeSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(TypeSet other) const { return (bits_ & other.bits_) != 0; }
  constexpr TypeSet complement(int count) const { return from_bits(~bits_ & all(count).bits_); }

  /// True when every member index is below `count`.
  constexpr bool within(int count) const { return subset_of(all(count)); }

  friend constexpr TypeSet operator|(TypeSet a, TypeSet b) { return from_bits(a.bits_ | b.bits_); }
  friend constexpr TypeSet operator&(TypeSet a, TypeSet b) { return from_bits(a.bits_ & b.bits_); }
  friend constexpr TypeSet operator-(TypeSet a, TypeSet b) { return from_bits(a.bits_ & ~b.bits_); }
  constexpr TypeSet& operator|=(TypeSet b) {
    bits_ |= b.bits_;
    return *this;
  }
  constexpr TypeSet& operator&=(TypeSet b) {
    bits_ &= b.bits_;
    return *this;
  }
  friend constexpr bool operator==(TypeSet, TypeSet) = default;
  friend constexpr auto operator<=>(TypeSet a, TypeSet b) { return a.bits_ <=> b.bits_; }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(size());
    for (std::uint32_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  template <typename F>
  constexpr void for_each(F&& f) const {
    for (std::uint32_t b = bits_; b != 0; b &= b - 1) f(std::countr_zero(b));
  }

 private:
  std::uint32_t bits_ = 0;
};

using CustomerSet = TypeSet<Side::customer>;
using ServerSet = TypeSet<Side::server>;

/// All nonempty subsets of an n-element side, ordered by cardinality and then
/// by mask value.
template <Side S>
std::vector<TypeSet<S>> subsets_by_cardinality(int count, bool include_full = true) {
  if (count > 24) throw InputError("subset enumeration limited to 24 types per side");
  std::vector<TypeSet<S>> out;
  const std::uint32_t full = TypeSet<S>::all(count).bits();
  out.reserve(full);
  for (std::uint32_t m = 1; m <= full; ++m) {
    if (!include_full && m == full) continue;
    out.push_back(TypeSet<S>::from_bits(m));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](TypeSet<S> a, TypeSet<S> b) { return a.size() < b.size(); });
  return out;
}

}  // namespace skillmatch
