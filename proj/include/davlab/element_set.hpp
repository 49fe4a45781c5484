#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "davlab/errors.hpp"

namespace davlab {

// Subset of a group's elements as a bit vector over indices [0, universe).
class ElementSet {
 public:
  ElementSet() = default;

  explicit ElementSet(int universe)
      : universe_(universe), words_(static_cast<std::size_t>((universe + 63) / 64), 0) {
    if (universe < 0) throw ParamOutOfRange("universe must be >= 0");
  }

  ElementSet(int universe, std::initializer_list<int> elems) : ElementSet(universe) {
    for (int g : elems) insert(g);
  }

  static ElementSet singleton(int universe, int g) {
    ElementSet s(universe);
    s.insert(g);
    return s;
  }

  static ElementSet full(int universe) {
    ElementSet s(universe);
    for (int g = 0; g < universe; ++g) s.insert(g);
    return s;
  }

  int universe() const { return universe_; }

  bool contains(int g) const {
    check(g);
    return (words_[static_cast<std::size_t>(g) >> 6] >> (g & 63)) & 1;
  }

  void insert(int g) {
    check(g);
    words_[static_cast<std::size_t>(g) >> 6] |= std::uint64_t{1} << (g & 63);
    size_cache_ = -1;
  }

  void erase(int g) {
    check(g);
    words_[static_cast<std::size_t>(g) >> 6] &= ~(std::uint64_t{1} << (g & 63));
    size_cache_ = -1;
  }

  int size() const {
    if (size_cache_ < 0) {
      int total = 0;
      for (std::uint64_t w : words_) total += std::popcount(w);
      size_cache_ = total;
    }
    return size_cache_;
  }

  bool empty() const { return size() == 0; }

  ElementSet& operator|=(const ElementSet& o) {
    require_same_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    size_cache_ = -1;
    return *this;
  }

  ElementSet& operator&=(const ElementSet& o) {
    require_same_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    size_cache_ = -1;
    return *this;
  }

  friend ElementSet operator|(ElementSet a, const ElementSet& b) { return a |= b; }
  friend ElementSet operator&(ElementSet a, const ElementSet& b) { return a &= b; }

  bool subset_of(const ElementSet& o) const {
    require_same_universe(o);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & ~o.words_[i]) return false;
    }
    return true;
  }

  bool operator==(const ElementSet& o) const {
    return universe_ == o.universe_ && words_ == o.words_;
  }

  // Visits members in ascending index order.
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        int g = static_cast<int>(wi * 64) + std::countr_zero(w);
        f(g);
        w &= w - 1;
      }
    }
  }

  std::vector<int> elements() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size()));
    for_each([&](int g) { out.push_back(g); });
    return out;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  void assign_words(const std::uint64_t* src) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] = src[i];
    size_cache_ = -1;
  }

 private:
  void check(int g) const {
    if (g < 0 || g >= universe_) throw ParamOutOfRange("set element out of range");
  }

  void require_same_universe(const ElementSet& o) const {
    if (universe_ != o.universe_) throw ParamOutOfRange("mismatched set universes");
  }

  int universe_ = 0;
  std::vector<std::uint64_t> words_;
  mutable int size_cache_ = 0;
};

}  // namespace davlab
