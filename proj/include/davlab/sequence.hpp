#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "davlab/element_set.hpp"
#include "davlab/errors.hpp"
#include "davlab/group.hpp"

namespace davlab {

// Unordered multiset of group elements, stored as (element index, count)
// pairs sorted by index. Equality is multiset equality; the ordering used
// for witnesses and enumeration output is lexicographic on the expanded,
// sorted index tuple.
class Sequence {
 public:
  Sequence() = default;

  static Sequence repeated(int elem, int count) {
    Sequence s;
    s.add(elem, count);
    return s;
  }

  void add(int elem, int count = 1) {
    if (count < 1) throw ParamOutOfRange("count must be >= 1");
    auto it = std::lower_bound(terms_.begin(), terms_.end(), elem,
                               [](const auto& t, int e) { return t.first < e; });
    if (it != terms_.end() && it->first == elem) {
      it->second += count;
    } else {
      terms_.insert(it, {elem, count});
    }
    length_ += count;
  }

  void remove(int elem, int count = 1) {
    if (count < 1) throw ParamOutOfRange("count must be >= 1");
    auto it = std::lower_bound(terms_.begin(), terms_.end(), elem,
                               [](const auto& t, int e) { return t.first < e; });
    if (it == terms_.end() || it->first != elem || it->second < count) {
      throw LengthOutOfRange("cannot remove more copies than present");
    }
    it->second -= count;
    if (it->second == 0) terms_.erase(it);
    length_ -= count;
  }

  int multiplicity(int elem) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), elem,
                               [](const auto& t, int e) { return t.first < e; });
    return (it != terms_.end() && it->first == elem) ? it->second : 0;
  }

  int length() const { return length_; }
  bool empty() const { return length_ == 0; }
  int support_size() const { return static_cast<int>(terms_.size()); }

  // h(S): the largest multiplicity.
  int max_multiplicity() const {
    int h = 0;
    for (const auto& [e, c] : terms_) h = std::max(h, c);
    return h;
  }

  const std::vector<std::pair<int, int>>& terms() const { return terms_; }

  bool contains(const Sequence& sub) const {
    for (const auto& [e, c] : sub.terms_) {
      if (multiplicity(e) < c) return false;
    }
    return true;
  }

  Sequence minus(const Sequence& sub) const {
    if (!contains(sub)) throw LengthOutOfRange("not a sub-multiset");
    Sequence out = *this;
    for (const auto& [e, c] : sub.terms_) out.remove(e, c);
    return out;
  }

  Sequence plus(const Sequence& other) const {
    Sequence out = *this;
    for (const auto& [e, c] : other.terms_) out.add(e, c);
    return out;
  }

  std::vector<int> expand() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(length_));
    for (const auto& [e, c] : terms_) out.insert(out.end(), static_cast<std::size_t>(c), e);
    return out;
  }

  bool operator==(const Sequence& o) const { return terms_ == o.terms_; }

  // Lexicographic comparison of expanded index tuples; a strict prefix is
  // smaller. Runs over the run-length encoding without expanding.
  static int compare(const Sequence& a, const Sequence& b) {
    std::size_t ia = 0, ib = 0;
    int ra = 0, rb = 0;  // copies consumed within the current run
    while (ia < a.terms_.size() && ib < b.terms_.size()) {
      int ea = a.terms_[ia].first, eb = b.terms_[ib].first;
      if (ea != eb) return ea < eb ? -1 : 1;
      int ca = a.terms_[ia].second - ra, cb = b.terms_[ib].second - rb;
      int step = std::min(ca, cb);
      ra += step;
      rb += step;
      if (ra == a.terms_[ia].second) {
        ++ia;
        ra = 0;
      }
      if (rb == b.terms_[ib].second) {
        ++ib;
        rb = 0;
      }
    }
    if (ia < a.terms_.size()) return 1;
    if (ib < b.terms_.size()) return -1;
    return 0;
  }

  bool operator<(const Sequence& o) const { return compare(*this, o) < 0; }

 private:
  std::vector<std::pair<int, int>> terms_;
  int length_ = 0;
};

inline constexpr std::uint64_t kDefaultStateCap = std::uint64_t{1} << 22;

// Dense dynamic-programming table of subsequence products. Sub-multisets of
// the current sequence are addressed by a mixed-radix integer with one digit
// of capacity v_g per support element g (most recently added element most
// significant), and each cell holds the set of products realizable by some
// ordering of that sub-multiset:
//
//   P(empty) = {1},   P(T) = union over g in supp(T) of P(T minus g) * g.
//
// push() appends one copy of an element whose index is >= every element
// already present; only the new cells introduced by the appended copy are
// computed, so a depth-first search can extend and retract cheaply.
class ProductTable {
 public:
  explicit ProductTable(const Group& g, std::uint64_t state_cap = kDefaultStateCap)
      : group_(&g),
        stride_(static_cast<std::size_t>((g.order() + 63) / 64)),
        state_cap_(state_cap) {
    bits_.assign(stride_, 0);
    set_bit(0, g.identity());
    total_ = 1;
  }

  ProductTable(const Group& g, const Sequence& s, std::uint64_t state_cap = kDefaultStateCap)
      : ProductTable(g, state_cap) {
    for (const auto& [e, c] : s.terms()) {
      for (int i = 0; i < c; ++i) push(e);
    }
  }

  const Group& group() const { return *group_; }
  std::uint64_t cells() const { return total_; }
  int length() const { return length_; }

  // Appends one copy of `elem`; requires elem >= the last appended index.
  void push(int elem) {
    if (!digits_.empty() && elem < digits_.back().elem) {
      throw Error("push order must be non-decreasing");
    }
    bool new_digit = digits_.empty() || elem != digits_.back().elem;
    std::uint64_t added = new_digit ? total_ : digits_.back().weight;
    if (total_ + added > state_cap_) {
      throw StateSpaceCapExceeded("product table would need " + std::to_string(total_ + added) +
                                  " cells (cap " + std::to_string(state_cap_) + ")");
    }
    frames_.push_back({total_, identity_seen_, new_digit});
    if (new_digit) {
      digits_.push_back({elem, 1, total_, make_rmul(elem)});
    } else {
      digits_.back().cap += 1;
    }
    std::uint64_t old_total = total_;
    total_ += added;
    ++length_;
    bits_.resize(total_ * stride_, 0);
    last_block_identity_ = false;
    for (std::uint64_t idx = old_total; idx < total_; ++idx) compute_cell(idx);
    if (last_block_identity_) identity_seen_ = true;
  }

  void pop() {
    if (frames_.empty()) throw Error("pop on empty table");
    Frame f = frames_.back();
    frames_.pop_back();
    if (f.new_digit) {
      digits_.pop_back();
    } else {
      digits_.back().cap -= 1;
    }
    total_ = f.prev_total;
    --length_;
    bits_.resize(total_ * stride_);
    identity_seen_ = f.prev_identity_seen;
    last_block_identity_ = false;
  }

  // True iff some cell created by the latest push contains the identity.
  bool last_push_hit_identity() const { return last_block_identity_; }

  // True iff the identity lies in P(T) for some nonempty sub-multiset T.
  bool identity_in_any_nonempty() const { return identity_seen_; }

  bool full_product_contains_identity() const {
    return length_ > 0 && get_bit(total_ - 1, group_->identity());
  }

  // pi(S): products of the full multiset over all orderings.
  ElementSet products() const { return cell_set(total_ - 1); }

  // Union of pi(T) over all nonempty sub-multisets T.
  ElementSet all_subsequence_products() const {
    ElementSet out(group_->order());
    for (std::uint64_t idx = 1; idx < total_; ++idx) or_into(out, idx);
    return out;
  }

  // Union of pi(T) over sub-multisets of exactly k elements.
  ElementSet products_of_length(int k) const {
    if (k < 1 || k > length_) throw LengthOutOfRange("k must lie in [1, |S|]");
    ElementSet out(group_->order());
    for (std::uint64_t idx = 1; idx < total_; ++idx) {
      if (digit_sum(idx) == k) or_into(out, idx);
    }
    return out;
  }

  // True iff 1 in pi(S) and no splitting into two nonempty sub-multisets
  // with 1 in the product set of each part.
  bool is_minimal_product_one() const {
    if (length_ < 1 || !full_product_contains_identity()) return false;
    int id = group_->identity();
    std::uint64_t full = total_ - 1;
    for (std::uint64_t idx = 1; 2 * idx <= full; ++idx) {
      if (get_bit(idx, id) && get_bit(full - idx, id)) return false;
    }
    return true;
  }

  Sequence current_sequence() const {
    Sequence s;
    for (const auto& d : digits_) s.add(d.elem, d.cap);
    return s;
  }

 private:
  struct Digit {
    int elem;
    int cap;
    std::uint64_t weight;
    std::vector<int> rmul;  // right translation: rmul[i] = i * elem
  };

  struct Frame {
    std::uint64_t prev_total;
    bool prev_identity_seen;
    bool new_digit;
  };

  std::vector<int> make_rmul(int elem) const {
    std::vector<int> r(static_cast<std::size_t>(group_->order()));
    for (int i = 0; i < group_->order(); ++i) r[static_cast<std::size_t>(i)] = group_->mul(i, elem);
    return r;
  }

  void compute_cell(std::uint64_t idx) {
    std::uint64_t* dst = &bits_[idx * stride_];
    std::uint64_t rem = idx;
    for (std::size_t di = digits_.size(); di-- > 0;) {
      const Digit& d = digits_[di];
      std::uint64_t dig = rem / d.weight;
      rem %= d.weight;
      if (dig == 0) continue;
      const std::uint64_t* src = &bits_[(idx - d.weight) * stride_];
      for (std::size_t wi = 0; wi < stride_; ++wi) {
        std::uint64_t w = src[wi];
        while (w) {
          int i = static_cast<int>(wi * 64) + std::countr_zero(w);
          int j = d.rmul[static_cast<std::size_t>(i)];
          dst[static_cast<std::size_t>(j) >> 6] |= std::uint64_t{1} << (j & 63);
          w &= w - 1;
        }
      }
    }
    if ((dst[static_cast<std::size_t>(group_->identity()) >> 6] >>
         (group_->identity() & 63)) &
        1) {
      last_block_identity_ = true;
    }
  }

  int digit_sum(std::uint64_t idx) const {
    int sum = 0;
    std::uint64_t rem = idx;
    for (std::size_t di = digits_.size(); di-- > 0;) {
      const Digit& d = digits_[di];
      sum += static_cast<int>(rem / d.weight);
      rem %= d.weight;
    }
    return sum;
  }

  void set_bit(std::uint64_t idx, int g) {
    bits_[idx * stride_ + (static_cast<std::size_t>(g) >> 6)] |= std::uint64_t{1} << (g & 63);
  }

  bool get_bit(std::uint64_t idx, int g) const {
    return (bits_[idx * stride_ + (static_cast<std::size_t>(g) >> 6)] >> (g & 63)) & 1;
  }

  ElementSet cell_set(std::uint64_t idx) const {
    ElementSet out(group_->order());
    out.assign_words(&bits_[idx * stride_]);
    return out;
  }

  void or_into(ElementSet& out, std::uint64_t idx) const {
    ElementSet tmp(group_->order());
    tmp.assign_words(&bits_[idx * stride_]);
    out |= tmp;
  }

  const Group* group_;
  std::size_t stride_;
  std::uint64_t state_cap_;
  std::vector<Digit> digits_;
  std::vector<Frame> frames_;
  std::vector<std::uint64_t> bits_;
  std::uint64_t total_ = 1;
  int length_ = 0;
  bool identity_seen_ = false;
  bool last_block_identity_ = false;
};

// pi(S): the set of products over all orderings of S. pi of the empty
// sequence is {1} by convention.
inline ElementSet pi(const Group& g, const Sequence& s,
                     std::uint64_t state_cap = kDefaultStateCap) {
  return ProductTable(g, s, state_cap).products();
}

// Pi(S): union of pi(T) over nonempty sub-multisets T of S.
inline ElementSet big_pi(const Group& g, const Sequence& s,
                         std::uint64_t state_cap = kDefaultStateCap) {
  return ProductTable(g, s, state_cap).all_subsequence_products();
}

// Pi_k(S): union of pi(T) over sub-multisets T with |T| = k.
inline ElementSet pi_n(const Group& g, const Sequence& s, int k,
                       std::uint64_t state_cap = kDefaultStateCap) {
  return ProductTable(g, s, state_cap).products_of_length(k);
}

inline bool is_product_one(const Group& g, const Sequence& s,
                           std::uint64_t state_cap = kDefaultStateCap) {
  return ProductTable(g, s, state_cap).full_product_contains_identity();
}

inline bool is_product_one_free(const Group& g, const Sequence& s,
                                std::uint64_t state_cap = kDefaultStateCap) {
  return !ProductTable(g, s, state_cap).identity_in_any_nonempty();
}

inline bool is_minimal_product_one(const Group& g, const Sequence& s,
                                   std::uint64_t state_cap = kDefaultStateCap) {
  return ProductTable(g, s, state_cap).is_minimal_product_one();
}

namespace detail {

// Sum of quotient images of a multiset over the terms listed, mod m.
inline int quotient_sum(const Group& g, const Sequence& s) {
  std::int64_t m = g.params().m;
  std::int64_t sum = 0;
  for (const auto& [e, c] : s.terms()) sum += static_cast<std::int64_t>(g.quotient_map(e)) * c;
  return static_cast<int>(sum % m);
}

inline bool quotient_zero_sum(const Group& g, const Sequence& s) {
  return quotient_sum(g, s) == 0;
}

// True iff the quotient image of T sums to zero and no proper nonempty
// sub-multiset of T does.
inline bool quotient_minimal_zero_sum(const Group& g, const Sequence& t) {
  if (t.empty() || !quotient_zero_sum(g, t)) return false;
  std::int64_t m = g.params().m;
  const auto& terms = t.terms();
  std::vector<int> counts(terms.size(), 0);
  // Enumerate proper nonempty sub-multisets by mixed-radix counting.
  while (true) {
    std::size_t pos = 0;
    while (pos < terms.size() && counts[pos] == terms[pos].second) {
      counts[pos] = 0;
      ++pos;
    }
    if (pos == terms.size()) break;
    ++counts[pos];
    std::int64_t sum = 0;
    int size = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      sum += static_cast<std::int64_t>(g.quotient_map(terms[i].first)) * counts[i];
      size += counts[i];
    }
    if (size < t.length() && sum % m == 0) return false;
  }
  return true;
}

// Lexicographically least nonempty sub-multiset of `pool` whose quotient
// image is a minimal zero-sum sequence over C_m. Depth-first over support
// positions in canonical order; the first hit is the least.
inline bool least_minimal_quotient_part(const Group& g, const Sequence& pool, std::size_t pos,
                                        Sequence& acc, Sequence& out) {
  if (!acc.empty() && quotient_zero_sum(g, acc)) {
    if (quotient_minimal_zero_sum(g, acc)) {
      out = acc;
      return true;
    }
    return false;  // any extension would contain a proper zero-sum part
  }
  const auto& terms = pool.terms();
  if (pos == terms.size()) return false;
  if (acc.length() >= static_cast<int>(g.params().m)) return false;
  auto [elem, cap] = terms[pos];
  int have = acc.multiplicity(elem);
  if (have < cap) {
    acc.add(elem);
    if (least_minimal_quotient_part(g, pool, pos, acc, out)) return true;
    acc.remove(elem);
  }
  return least_minimal_quotient_part(g, pool, pos + 1, acc, out);
}

}  // namespace detail

// Factors S into parts whose quotient images are minimal product-one
// sequences over G/N = C_m, peeling the lexicographically least qualifying
// part at every step. Requires the quotient image of S to be product-one.
inline std::vector<Sequence> factor_by_quotient(const Group& g, const Sequence& s) {
  if (!g.is_metacyclic()) throw Error("factor_by_quotient requires a metacyclic presentation");
  if (!detail::quotient_zero_sum(g, s)) {
    throw QuotientNotProductOne("quotient image of S is not product-one");
  }
  std::vector<Sequence> parts;
  Sequence rest = s;
  while (!rest.empty()) {
    Sequence acc, part;
    if (!detail::least_minimal_quotient_part(g, rest, 0, acc, part)) {
      throw Error("internal: zero-sum remainder without a minimal part");
    }
    parts.push_back(part);
    rest = rest.minus(part);
  }
  return parts;
}

}  // namespace davlab
